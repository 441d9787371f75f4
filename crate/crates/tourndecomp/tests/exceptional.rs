use tourndecomp::digraph::*;
use tourndecomp::exceptional::*;
use tourndecomp::excess::texc;
use tourndecomp::solver::pn_exact;

#[test]
fn generated_classes() {
    for n in [5, 7, 9] {
        let a = gen_apex(n, &gen_regular_tournament(n - 2).unwrap()).unwrap();
        assert!(matches!(classify(&a).unwrap(), TournamentClass::Apex { .. }));
        assert!(apex_characterization(&a));
        assert_eq!(classify(&gen_regular_tournament(n).unwrap()).unwrap(), TournamentClass::Regular);
    }
    assert_eq!(classify(&transitive_tournament(5).unwrap()).unwrap(), TournamentClass::Generic);
    assert!(classify(&directed_cycle(4).unwrap()).is_err());
}

#[test]
fn characterization_agrees_with_structure_on_five() {
    for t in enumerate_tournaments(5).unwrap() {
        let structural = matches!(classify(&t).unwrap(), TournamentClass::Apex { .. });
        assert_eq!(structural, apex_characterization(&t), "{}", t.to_text());
    }
}

#[test]
fn exceptional_lower_bounds() {
    for n in [5, 7] {
        let a = gen_apex(n, &gen_regular_tournament(n - 2).unwrap()).unwrap();
        assert!(pn_exact(&a).unwrap().pn >= n - 1);
    }
    // Regular digraphs of degree r need at least r + 1 paths.
    let regular = [gen_regular_tournament(5).unwrap(), directed_cycle(6).unwrap(), complete_digraph(4).unwrap()];
    for d in regular {
        let r = d.regularity().unwrap();
        assert_eq!(texc(&d), r);
        assert!(pn_exact(&d).unwrap().pn > r);
    }
}
