//! Exact path numbers, cross-checked against the memoised oracle on small inputs.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tourndecomp::digraph::{gen_chain_counterexample, random_digraph_with_edges, transitive_tournament};
use tourndecomp::excess::texc;
use tourndecomp::solver::{pn_exact, pn_oracle};

fn main() -> tourndecomp::Result<()> {
    let tt6 = transitive_tournament(6)?;
    let r = pn_exact(&tt6)?;
    println!("TT6: pn = {} with {} nodes", r.pn, r.nodes_explored);
    for p in &r.certificate.paths {
        println!("  {:?}", p.vertices());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..5 {
        let d = random_digraph_with_edges(7, 14, &mut rng);
        println!("random: pn = {}, oracle = {}, texc = {}", pn_exact(&d)?.pn, pn_oracle(&d)?, texc(&d));
    }

    let chain = gen_chain_counterexample(2, 3)?;
    println!("chain(2,3): pn = {}, texc = {}", pn_exact(&chain)?.pn, texc(&chain));
    Ok(())
}
