//! Robust outexpansion of regular tournaments over a small parameter grid.

use tourndecomp::digraph::{gen_regular_tournament, transitive_tournament};
use tourndecomp::expander::{is_robust_outexpander, sampled_robustness, RobustParams};

fn main() -> tourndecomp::Result<()> {
    let r9 = gen_regular_tournament(9)?;
    let tt9 = transitive_tournament(9)?;
    for (nu, tau) in [("1/20", "1/4"), ("1/10", "1/3"), ("1/5", "2/5")] {
        let p = RobustParams::parse(nu, tau)?;
        println!("nu = {nu}, tau = {tau}: R9 {}, TT9 {}", is_robust_outexpander(&r9, p)?, is_robust_outexpander(&tt9, p)?);
    }
    let p = RobustParams::parse("1/10", "1/3")?;
    println!("share of 7-vertex induced subtournaments of R9 that expand: {:.3}", sampled_robustness(&r9, p, 7, 200, 42)?);
    Ok(())
}
