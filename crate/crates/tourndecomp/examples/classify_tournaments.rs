//! Counts the exceptional tournaments on 5 and 7 vertices and checks the two apex tests agree.

use tourndecomp::digraph::{enumerate_tournaments, gen_apex, gen_regular_tournament};
use tourndecomp::exceptional::{apex_characterization, classify, TournamentClass};

fn main() -> tourndecomp::Result<()> {
    for n in [5, 7] {
        let (mut regular, mut apex, mut disagree) = (0, 0, 0);
        for t in enumerate_tournaments(n)? {
            let c = classify(&t)?;
            regular += matches!(c, TournamentClass::Regular) as usize;
            apex += matches!(c, TournamentClass::Apex { .. }) as usize;
            disagree += (matches!(c, TournamentClass::Apex { .. }) != apex_characterization(&t)) as usize;
        }
        println!("n = {n}: {regular} regular, {apex} apex, {disagree} disagreements");
    }
    let a7 = gen_apex(7, &gen_regular_tournament(5)?)?;
    println!("gen_apex(7) is {}", classify(&a7)?);
    Ok(())
}
