//! Excess quantities of a few standard tournaments.

use tourndecomp::digraph::{gen_regular_tournament, transitive_tournament};
use tourndecomp::excess::{excess_profile, texc};

fn main() -> tourndecomp::Result<()> {
    for n in 3..=8 {
        let t = transitive_tournament(n)?;
        let p = excess_profile(&t);
        println!("TT{n}: exc = {:?}, exc(T) = {}, Delta0 = {}, texc = {}", p.exc, p.exc_total, p.delta0, p.texc);
    }
    let r7 = gen_regular_tournament(7)?;
    println!("R7: texc = {} (regular, so exc = 0)", texc(&r7));
    println!("{}", excess_profile(&r7).to_json());
    Ok(())
}
