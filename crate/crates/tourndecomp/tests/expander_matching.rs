use num_rational::Ratio;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tourndecomp::digraph::*;
use tourndecomp::expander::*;
use tourndecomp::matching::*;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Maximum matching size by trying every subset of A-vertices in order.
fn brute_matching(g: &BipartiteGraph) -> usize {
    fn go(g: &BipartiteGraph, i: usize, used: u64) -> usize {
        if i == g.size_a() {
            return 0;
        }
        let mut best = go(g, i + 1, used);
        for &y in g.neighbours(i) {
            if used >> y & 1 == 0 {
                best = best.max(1 + go(g, i + 1, used | 1 << y));
            }
        }
        best
    }
    go(g, 0, 0)
}

#[test]
fn hamilton_searches_validate() {
    let t = gen_regular_tournament(7).unwrap();
    let p = hamilton_path(&t, 0, 3).unwrap().found().unwrap();
    assert_eq!((p.start(), p.end(), p.vertices().len()), (0, 3, 7));
    assert!(validate_paths(&t, &[p], false).is_ok());
    let cycles = hamilton_decomposition(&complete_digraph(5).unwrap()).unwrap().found().unwrap();
    assert_eq!(cycles.len(), 4);
    assert!(validate_hamilton_decomposition(&complete_digraph(5).unwrap(), &cycles));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn robust_neighbourhood_is_monotone(n in 1usize..16, p in 0.0f64..1.0, seed: u64, s: u64, extra: u64, num in 0i64..5) {
        let d = random_digraph(n, p, &mut rng(seed));
        let full = d.vertex_mask();
        let (s, t) = (s & full, (s | extra) & full);
        let nu = Ratio::new(num, 10);
        let (a, b) = (robust_outneighbourhood(&d, s, nu), robust_outneighbourhood(&d, t, nu));
        prop_assert_eq!(a & !b, 0);
    }

    #[test]
    fn robustness_is_monotone_in_parameters(n in 2usize..10, p in 0.3f64..1.0, seed: u64) {
        let d = random_digraph(n, p, &mut rng(seed));
        let grid = [Ratio::new(1, 20), Ratio::new(1, 10), Ratio::new(1, 5), Ratio::new(3, 10)];
        for &nu in &grid {
            for &tau in &grid {
                if nu > tau || !is_robust_outexpander(&d, RobustParams::new(nu, tau).unwrap()).unwrap() {
                    continue;
                }
                for &nu2 in grid.iter().filter(|&&x| x <= nu) {
                    for &tau2 in grid.iter().filter(|&&x| x >= tau) {
                        prop_assert!(is_robust_outexpander(&d, RobustParams::new(nu2, tau2).unwrap()).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn cover_is_maximum(a in 1usize..7, b in 1usize..7, p in 0.0f64..1.0, seed: u64) {
        let mut r = rng(seed);
        let mut edges = Vec::new();
        for x in 0..a {
            for y in 0..b {
                if r.gen_bool(p) {
                    edges.push((x, y));
                }
            }
        }
        let g = BipartiteGraph::from_edges(a, b, &edges).unwrap();
        let m = maximum_matching(&g);
        prop_assert!(m.len() <= a.min(b));
        prop_assert_eq!(m.len(), brute_matching(&g));
        prop_assert_eq!(matching_cover(&g).is_some(), m.len() == a);
    }

    #[test]
    fn vizing_uses_at_most_delta_plus_one(n in 1usize..30, p in 0.0f64..1.0, seed: u64) {
        let mut r = rng(seed);
        let edges: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| r.gen_bool(p)).collect();
        let delta = (0..n).map(|v| edges.iter().filter(|e| e.0 == v || e.1 == v).count()).max().unwrap_or(0);
        let classes = vizing_matchings(n, &edges).unwrap();
        prop_assert!(classes.len() <= delta + 1);
        prop_assert!(is_matching_decomposition(n, &edges, &classes));
    }
}
