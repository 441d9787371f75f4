//! Clears the edges inside the exceptional set `W` with short good paths.

use crate::digraph::{bit, Path};
use crate::error::{Error, Result};
use crate::expander::Budget;
use crate::matching::vizing_matchings;

use super::state::DecompositionState;

/// Appends good, consistent, reserve-respecting paths until no edge of the remaining digraph
/// lies inside `W`. Edges are grouped by a proper colouring of `W`'s shadow graph; each colour
/// class is first tried as a single path, then edge by edge. Returns the number of paths added.
pub fn cleaning_lite(state: &mut DecompositionState, budget: &mut Budget) -> Result<usize> {
    let w = state.w;
    let inside: Vec<(usize, usize)> = state.remaining.edges().filter(|&(u, v)| w & bit(u) != 0 && w & bit(v) != 0).collect();
    if inside.is_empty() {
        return Ok(0);
    }
    let shadow: Vec<(usize, usize)> = inside.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    let classes = vizing_matchings(state.n(), &shadow)?;
    let mut added = 0;
    for class in classes {
        let directed: Vec<(usize, usize)> = class
            .iter()
            .map(|&(a, b)| if state.remaining.has_edge(a, b) { (a, b) } else { (b, a) })
            .filter(|&(a, b)| state.remaining.has_edge(a, b))
            .collect();
        if directed.is_empty() {
            continue;
        }
        if directed.len() > 1 {
            if let Some(p) = cover_in_one_path(state, &directed, budget) {
                state.apply_paths(&[p])?;
                added += 1;
                continue;
            }
        }
        for &e in &directed {
            if !state.remaining.has_edge(e.0, e.1) {
                continue;
            }
            let p = cover_in_one_path(state, &[e], budget)
                .ok_or_else(|| Error::Infeasible(format!("cleaning: no good path through {}->{}", e.0, e.1)))?;
            state.apply_paths(&[p])?;
            added += 1;
        }
    }
    if state.remaining.edges().any(|(u, v)| w & bit(u) != 0 && w & bit(v) != 0) {
        return Err(Error::Infeasible("cleaning left an edge inside W".into()));
    }
    Ok(added)
}

/// A single good path containing the given vertex-disjoint edges in order, joined by direct
/// edges or one intermediate vertex, and extended at both ends to vertices with auxiliary
/// excess to spare.
fn cover_in_one_path(state: &DecompositionState, edges: &[(usize, usize)], budget: &mut Budget) -> Option<Path> {
    let d = &state.remaining;
    let usable = |u: usize, v: usize, used: &[u64]| d.has_edge(u, v) && !state.a.contains(u, v) && used[u] & bit(v) == 0;
    let mut used = vec![0u64; d.n()];
    let ends = edges.iter().fold(0u64, |m, &(a, b)| m | bit(a) | bit(b));
    let mut seq = vec![edges[0].0, edges[0].1];
    used[edges[0].0] |= bit(edges[0].1);
    for &(a, b) in &edges[1..] {
        let last = *seq.last().unwrap();
        let on = seq.iter().fold(ends, |m, &v| m | bit(v));
        if usable(last, a, &used) {
            used[last] |= bit(a);
        } else {
            let m = crate::digraph::bits(d.out_mask(last) & d.in_mask(a) & !on).find(|&m| usable(last, m, &used) && usable(m, a, &used))?;
            used[last] |= bit(m);
            used[m] |= bit(a);
            seq.push(m);
        }
        seq.extend([a, b]);
        used[a] |= bit(b);
    }
    let on = seq.iter().fold(0u64, |m, &v| m | bit(v));
    let (first, last) = (seq[0], *seq.last().unwrap());
    let mut heads: Vec<Option<usize>> = Vec::new();
    if state.auxiliary_excess(first).0 > 0 {
        heads.push(None);
    }
    heads.extend(
        d.in_neighbours(first).filter(|&u| on & bit(u) == 0 && usable(u, first, &used) && state.auxiliary_excess(u).0 > 0).map(Some),
    );
    let mut tails: Vec<Option<usize>> = Vec::new();
    if state.auxiliary_excess(last).1 > 0 {
        tails.push(None);
    }
    tails.extend(
        d.out_neighbours(last).filter(|&v| on & bit(v) == 0 && usable(last, v, &used) && state.auxiliary_excess(v).1 > 0).map(Some),
    );
    for &h in &heads {
        for &t in &tails {
            if !budget.tick() {
                return None;
            }
            if h.is_some() && h == t {
                continue;
            }
            let mut full = Vec::with_capacity(seq.len() + 2);
            full.extend(h);
            full.extend_from_slice(&seq);
            full.extend(t);
            let p = Path::new(full);
            let f = state.check_partial(std::slice::from_ref(&p));
            if f.valid && f.within_reserve && f.consistent && f.good {
                return Some(p);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::*;
    use crate::pipeline::state::AbsorbingSet;

    #[test]
    fn empty_w_is_identity() {
        let t = transitive_tournament(5).unwrap();
        let mut s = DecompositionState::new(&t, 1, 0, 0, 0, AbsorbingSet::default()).unwrap();
        assert_eq!(cleaning_lite(&mut s, &mut Budget::default()).unwrap(), 0);
        assert_eq!(s.remaining, t);
    }

    #[test]
    fn clears_an_edge_inside_w() {
        let t = transitive_tournament(6).unwrap();
        let w = bit(0) | bit(1);
        let mut s = DecompositionState::new(&t, 1, w, 0, 0, AbsorbingSet::default()).unwrap();
        assert_eq!(cleaning_lite(&mut s, &mut Budget::default()).unwrap(), 1);
        assert!(!s.remaining.has_edge(0, 1));
        assert!(s.accumulated_good());
        assert!(s.identity_violations().is_empty());
    }
}
