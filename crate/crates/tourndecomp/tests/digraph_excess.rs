use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tourndecomp::digraph::*;
use tourndecomp::excess::*;
use tourndecomp::solver::pn_exact;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn enumerated_tournaments_round_trip() {
    for n in 1..=5 {
        for t in enumerate_tournaments(n).unwrap() {
            assert_eq!(t.edge_count(), n * (n - 1) / 2);
            assert_eq!(Digraph::from_text(&t.to_text()).unwrap(), t);
            assert_eq!(decode_tournament(n, &encode_tournament(&t).unwrap()).unwrap(), t);
        }
    }
}

#[test]
fn non_regular_tournaments_have_texc_at_least_half_n() {
    for n in 2..=7 {
        for t in enumerate_tournaments(n).unwrap() {
            if t.regularity().is_none() {
                assert!(texc(&t) >= n.div_ceil(2), "{}", t.to_text());
            }
        }
    }
}

#[test]
fn transitive_excess_values() {
    for n in 3..=8 {
        let p = excess_profile(&transitive_tournament(n).unwrap());
        assert_eq!(p.texc, n * n / 4);
        assert_eq!(p.exc_total, n * n / 4);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_format_round_trips(n in 1usize..12, p in 0.0f64..1.0, seed: u64) {
        let d = random_digraph(n, p, &mut rng(seed));
        prop_assert_eq!(Digraph::from_text(&d.to_text()).unwrap(), d);
    }

    #[test]
    fn excess_splits_over_partitions(n in 1usize..12, p in 0.0f64..1.0, seed: u64, cut: u64) {
        let d = random_digraph(n, p, &mut rng(seed));
        let s: Vec<usize> = (0..n).filter(|v| cut >> v & 1 == 1).collect();
        let rest: Vec<usize> = (0..n).filter(|v| cut >> v & 1 == 0).collect();
        let (a, b) = (set_excess(&d, &s), set_excess(&d, &rest));
        prop_assert_eq!(a.0 + b.0, total_excess(&d));
        prop_assert_eq!(a.1 + b.1, total_excess(&d));
    }

    #[test]
    fn excess_is_relabelling_invariant(n in 1usize..12, p in 0.0f64..1.0, seed: u64) {
        let mut r = rng(seed);
        let d = random_digraph(n, p, &mut r);
        let e = d.relabel(&random_permutation(n, &mut r));
        prop_assert_eq!(texc(&d), texc(&e));
        prop_assert_eq!(total_excess(&d), total_excess(&e));
    }

    #[test]
    fn oriented_graphs_have_enough_zero_vertices(n in 1usize..14, p in 0.0f64..1.0, seed: u64) {
        let d = random_oriented(n, p, &mut rng(seed));
        let prof = excess_profile(&d);
        prop_assert!(prof.u_zero.len() >= prof.texc - prof.exc_total);
    }

    #[test]
    fn valid_decompositions_cover_every_edge(n in 2usize..8, p in 0.2f64..0.8, seed: u64) {
        let d = random_digraph(n, p, &mut rng(seed));
        let cert = pn_exact(&d).unwrap().certificate;
        prop_assert!(validate_decomposition(&d, &cert).is_ok());
        prop_assert_eq!(cert.edge_count(), d.edge_count());
    }

    #[test]
    fn tournament_out_degrees_sum_to_pairs(n in 1usize..20, seed: u64) {
        let t = random_tournament(n, &mut rng(seed));
        prop_assert_eq!((0..n).map(|v| t.out_degree(v)).sum::<usize>(), n * (n - 1) / 2);
    }
}
