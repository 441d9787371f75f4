//! Runs the constructive pipeline on random tournaments and prints the stage trace.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tourndecomp::digraph::random_tournament;
use tourndecomp::pipeline::{decompose, Method, PipelineConfig};

fn main() -> tourndecomp::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cfg = PipelineConfig::default();
    for n in 9..=13 {
        let t = random_tournament(n, &mut rng);
        let rep = decompose(&t, &cfg)?;
        println!("n = {n}, {}: {} paths, texc = {}, method = {:?}", rep.class, rep.decomposition.len(), rep.texc, rep.method);
        if rep.method == Method::Pipeline {
            let last = rep.attempts.last().expect("a successful attempt");
            for s in &last.stages {
                println!("  {:<15} paths = {:<3} good = {:?} {}", s.stage, s.paths, s.good, s.detail);
            }
        } else if let Some(f) = &rep.fallback {
            println!("  fallback after {}: {}", f.stage, f.reason);
        }
    }
    Ok(())
}
