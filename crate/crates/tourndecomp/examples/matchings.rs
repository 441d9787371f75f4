//! Hall covers in a random bipartite graph and a Vizing colouring of a random graph.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tourndecomp::matching::{is_matching_decomposition, matching_cover, vizing_matchings, BipartiteGraph};

fn main() -> tourndecomp::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut edges = Vec::new();
    for a in 0..6 {
        for b in 0..12 {
            if rng.gen_bool(0.5) {
                edges.push((a, b));
            }
        }
    }
    let g = BipartiteGraph::from_edges(6, 12, &edges)?;
    println!("cover of A: {:?}", matching_cover(&g));

    let n = 20;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(0.3) {
                edges.push((u, v));
            }
        }
    }
    let classes = vizing_matchings(n, &edges)?;
    let delta = (0..n).map(|v| edges.iter().filter(|e| e.0 == v || e.1 == v).count()).max().unwrap_or(0);
    println!(
        "{} edges, Delta = {delta}, {} colours, proper: {}",
        edges.len(),
        classes.len(),
        is_matching_decomposition(n, &edges, &classes)
    );
    Ok(())
}
