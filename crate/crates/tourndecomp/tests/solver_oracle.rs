use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tourndecomp::digraph::*;
use tourndecomp::excess::texc;
use tourndecomp::solver::*;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn small_tournaments_match_the_oracle() {
    for n in 1..=5 {
        for t in enumerate_tournaments(n).unwrap() {
            assert_eq!(pn_exact(&t).unwrap().pn, pn_oracle(&t).unwrap(), "{}", t.to_text());
        }
    }
}

#[test]
fn oracle_rejects_large_inputs() {
    assert!(pn_oracle(&complete_digraph(6).unwrap()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn exact_matches_oracle(n in 2usize..9, m in 0usize..15, seed: u64) {
        let d = random_digraph_with_edges(n, m.min(n * (n - 1)), &mut rng(seed));
        let r = pn_exact(&d).unwrap();
        prop_assert!(r.optimal);
        prop_assert_eq!(r.pn, pn_oracle(&d).unwrap());
        prop_assert!(r.pn >= lower_bound(&d));
        prop_assert!(validate_decomposition(&d, &r.certificate).is_ok());
    }

    #[test]
    fn exact_is_relabelling_invariant(n in 2usize..9, seed: u64) {
        let mut r = rng(seed);
        let t = random_tournament(n, &mut r);
        let u = t.relabel(&random_permutation(n, &mut r));
        prop_assert_eq!(pn_exact(&t).unwrap().pn, pn_exact(&u).unwrap().pn);
    }

    /// When pn = texc, every prefix of an optimal certificate lowers texc by its size.
    #[test]
    fn optimal_prefixes_are_good(n in 3usize..10, seed: u64) {
        let t = random_tournament(n, &mut rng(seed));
        let r = pn_exact(&t).unwrap();
        prop_assume!(r.pn == texc(&t));
        for k in 0..=r.pn {
            let rest = t.without_paths(&r.certificate.paths[..k]);
            prop_assert_eq!(texc(&rest), texc(&t) - k);
        }
    }
}
