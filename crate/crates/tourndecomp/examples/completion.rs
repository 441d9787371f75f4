//! Completion step: a 2-regular pattern on six vertices becomes two Hamilton paths.

use tourndecomp::digraph::{mask_of, Digraph};
use tourndecomp::pipeline::{complete_decomposition, CompletionPattern};

fn main() -> tourndecomp::Result<()> {
    // Two edge-disjoint Hamilton cycles on seven vertices. Dropping vertex 6 leaves the pattern with
    // starts {1, 3} and ends {5, 4} for r = 2.
    let cycles = [[6, 1, 2, 3, 4, 0, 5], [6, 3, 5, 1, 0, 2, 4]];
    let mut d = Digraph::new(6)?;
    for c in &cycles {
        for w in c.windows(2).skip(1) {
            d.add_edge(w[0], w[1]);
        }
    }
    let pattern =
        CompletionPattern { x_plus: mask_of(&[1, 3]), x_minus: mask_of(&[5, 4]), x_zero: mask_of(&[0, 2]), r: 2, ..Default::default() };
    let p = complete_decomposition(&d, &pattern)?;
    for path in &p.paths {
        println!("{:?}", path.vertices());
    }
    Ok(())
}
