//! Regular and apex tournaments, the exceptional classes whose path number exceeds `texc`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::digraph::{bit, Digraph};
use crate::error::{Error, Result};
use crate::excess::excess_profile;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TournamentClass {
    Regular,
    Apex { v_plus: usize, v_minus: usize },
    Generic,
}

impl TournamentClass {
    pub fn name(&self) -> &'static str {
        match self {
            TournamentClass::Regular => "Regular",
            TournamentClass::Apex { .. } => "Apex",
            TournamentClass::Generic => "Generic",
        }
    }

    pub fn is_exceptional(&self) -> bool {
        !matches!(self, TournamentClass::Generic)
    }
}

impl fmt::Display for TournamentClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TournamentClass::Apex { v_plus, v_minus } => write!(f, "Apex(v+={v_plus}, v-={v_minus})"),
            other => f.write_str(other.name()),
        }
    }
}

/// Structural apex test: some `(v_+, v_-)` with `v_- -> v_+`, `v_+` beating every other
/// vertex, every other vertex beating `v_-`, and the rest inducing a regular tournament.
pub fn apex_witness(t: &Digraph) -> Option<(usize, usize)> {
    let n = t.n();
    if n < 5 || n.is_multiple_of(2) || !t.is_tournament() {
        return None;
    }
    let all = t.vertex_mask();
    for vp in 0..n {
        for vm in 0..n {
            if vp == vm || !t.has_edge(vm, vp) {
                continue;
            }
            let rest = all & !bit(vp) & !bit(vm);
            if t.out_mask(vp) != rest || t.in_mask(vm) != rest {
                continue;
            }
            let r = (n - 3) / 2;
            if crate::digraph::bits(rest).all(|v| (t.out_mask(v) & rest).count_ones() as usize == r) {
                return Some((vp, vm));
            }
        }
    }
    None
}

pub fn classify(t: &Digraph) -> Result<TournamentClass> {
    if !t.is_tournament() {
        return Err(Error::NotTournament);
    }
    if t.regularity().is_some() {
        return Ok(TournamentClass::Regular);
    }
    Ok(match apex_witness(t) {
        Some((v_plus, v_minus)) => TournamentClass::Apex { v_plus, v_minus },
        None => TournamentClass::Generic,
    })
}

/// Excess-based apex test: `|U^+| = |U^-| = 1`, exactly one edge from `U^-` to `U^+`,
/// and `texc - exc < 2`.
pub fn apex_characterization(t: &Digraph) -> bool {
    let p = excess_profile(t);
    if p.u_plus.len() != 1 || p.u_minus.len() != 1 {
        return false;
    }
    let back = t.has_edge(p.u_minus[0], p.u_plus[0]) as usize;
    back == 1 && p.texc - p.exc_total < 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::*;

    #[test]
    fn small_classes() {
        let c3 = directed_cycle(3).unwrap();
        assert_eq!(classify(&c3).unwrap(), TournamentClass::Regular);
        assert!(!apex_characterization(&c3));
        let apex = gen_apex(5, &c3).unwrap();
        let (vp, vm) = apex_vertices(5);
        assert_eq!(classify(&apex).unwrap(), TournamentClass::Apex { v_plus: vp, v_minus: vm });
        assert!(apex_characterization(&apex));
        let tt4 = transitive_tournament(4).unwrap();
        assert_eq!(classify(&tt4).unwrap(), TournamentClass::Generic);
        assert!(!apex_characterization(&tt4));
        assert!(classify(&complete_digraph(3).unwrap()).is_err());
    }
}
