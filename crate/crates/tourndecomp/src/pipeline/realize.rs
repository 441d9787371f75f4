//! Spanning configurations: every unfixed layout edge becomes a path of `D`, one of them
//! long enough to pick up every vertex outside the layout.

use serde::{Deserialize, Serialize};

use crate::digraph::{bit, bits, Digraph, Path};
use crate::error::{Error, Result};
use crate::expander::{Budget, SearchOutcome, SpanningSearch, Visit};

use super::layout::Layout;

/// One path of `D` per layout path, plus the unfixed edge that was stretched into a
/// spanning path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Configuration {
    pub paths: Vec<Path>,
    pub special: (usize, usize),
}

/// First spanning configuration of shape `layout` in `d`, or `Absent`/`Timeout`.
pub fn realize_configuration(d: &Digraph, layout: &Layout, w: u64, budget: &mut Budget) -> Result<SearchOutcome<Configuration>> {
    let mut found = None;
    let outcome = realize_each(d, layout, w, budget, &mut |c, _| {
        found = Some(c.clone());
        Visit::Stop
    })?;
    Ok(outcome.map(|()| found.expect("visitor stored the configuration")))
}

/// Enumerates spanning configurations of shape `layout` until the visitor stops.
pub(crate) fn realize_each(
    d: &Digraph,
    layout: &Layout,
    w: u64,
    budget: &mut Budget,
    visit: &mut dyn FnMut(&Configuration, &mut Budget) -> Visit,
) -> Result<SearchOutcome<()>> {
    layout.check()?;
    if !layout.is_w_exceptional(w) {
        return Err(Error::Precondition("layout has an unfixed edge at W".into()));
    }
    let n = d.n();
    let mut fixed_used = vec![0u64; n];
    for (u, v) in layout.fixed_edges() {
        if !d.has_edge(u, v) || fixed_used[u] & bit(v) != 0 {
            return Err(Error::Precondition(format!("fixed edge {u}->{v} is missing or repeated")));
        }
        fixed_used[u] |= bit(v);
    }
    let leftover = d.vertex_mask() & !w & !layout.vertex_mask();
    let unfixed = layout.unfixed();
    let edge_at = |(p, e): (usize, usize)| (layout.paths[p].0[e], layout.paths[p].0[e + 1]);

    for &special in &unfixed {
        let mut used = fixed_used.clone();
        let mut avail = leftover;
        let mut routes: Vec<Option<Vec<usize>>> = vec![None; unfixed.len()];
        let mut ok = true;
        for (k, &pos) in unfixed.iter().enumerate() {
            if pos == special {
                continue;
            }
            let (x, y) = edge_at(pos);
            if d.has_edge(x, y) && used[x] & bit(y) == 0 {
                used[x] |= bit(y);
                routes[k] = Some(vec![x, y]);
                continue;
            }
            let mid = bits(avail & d.out_mask(x) & !used[x] & d.in_mask(y)).find(|&m| used[m] & bit(y) == 0);
            match mid {
                Some(m) => {
                    used[x] |= bit(m);
                    used[m] |= bit(y);
                    avail &= !bit(m);
                    routes[k] = Some(vec![x, m, y]);
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let (y, z) = edge_at(special);
        let ks = unfixed.iter().position(|&p| p == special).expect("special is unfixed");
        let assemble = |routes: &mut Vec<Option<Vec<usize>>>, long: Vec<usize>| -> Configuration {
            routes[ks] = Some(long);
            let mut paths = Vec::with_capacity(layout.paths.len());
            for (i, p) in layout.paths.iter().enumerate() {
                let mut seq = vec![p.0[0]];
                for e in 0..p.len() {
                    match unfixed.iter().position(|&q| q == (i, e)) {
                        Some(k) => seq.extend_from_slice(&routes[k].as_ref().expect("every unfixed edge is routed")[1..]),
                        None => seq.push(p.0[e + 1]),
                    }
                }
                paths.push(Path::new(seq));
            }
            Configuration { paths, special: (y, z) }
        };
        if avail == 0 {
            if d.has_edge(y, z) && used[y] & bit(z) == 0 {
                let c = assemble(&mut routes, vec![y, z]);
                match visit(&c, budget) {
                    Visit::Stop => return Ok(SearchOutcome::Found(())),
                    Visit::Timeout => return Ok(SearchOutcome::Timeout),
                    Visit::Continue => {}
                }
            }
            continue;
        }
        // Merge y and z into y: it keeps y's out-edges and inherits z's in-edges, so a
        // Hamilton cycle through y is a spanning (y, z)-path.
        let mut merged = Digraph::empty(n);
        for u in bits(avail) {
            for v in bits(d.out_mask(u) & avail & !used[u]) {
                merged.add_edge(u, v);
            }
            if d.has_edge(u, z) && used[u] & bit(z) == 0 {
                merged.add_edge(u, y);
            }
        }
        for v in bits(d.out_mask(y) & avail & !used[y]) {
            merged.add_edge(y, v);
        }
        let search = SpanningSearch::cycle(&merged, avail | bit(y), y);
        let outcome = search.run(y, budget, &mut |seq, budget| {
            let mut long = seq.to_vec();
            long.push(z);
            let c = assemble(&mut routes, long);
            visit(&c, budget)
        });
        match outcome {
            SearchOutcome::Found(()) => return Ok(SearchOutcome::Found(())),
            SearchOutcome::Timeout => return Ok(SearchOutcome::Timeout),
            SearchOutcome::Absent => {}
        }
    }
    Ok(SearchOutcome::Absent)
}

/// Structural check of a configuration against its layout: same endpoints and fixed edges,
/// simple edge-disjoint paths of `d`, interiors outside `V(L) ∪ w`, and degrees
/// `d^±_H(v) = d^±_L(v) + [v ∉ V(L) ∪ w]`.
pub fn configuration_matches(d: &Digraph, layout: &Layout, c: &Configuration, w: u64) -> bool {
    if c.paths.len() != layout.paths.len() || crate::digraph::validate_paths(d, &c.paths, false).is_err() {
        return false;
    }
    let vl = layout.vertex_mask();
    let n = d.n();
    let mut seen_interior = 0u64;
    for (i, (p, q)) in layout.paths.iter().zip(&c.paths).enumerate() {
        if p.start() != q.start() || p.end() != q.end() {
            return false;
        }
        let mut j = 0;
        for (e, &v) in p.0.iter().enumerate() {
            let Some(k) = q.0[j..].iter().position(|&x| x == v) else { return false };
            if e == 0 {
                continue;
            }
            if k == 0 || layout.is_fixed(i, e - 1) && k != 1 {
                return false;
            }
            for &x in &q.0[j + 1..j + k] {
                if (vl | w) & bit(x) != 0 || seen_interior & bit(x) != 0 {
                    return false;
                }
                seen_interior |= bit(x);
            }
            j += k;
        }
    }
    let leftover = d.vertex_mask() & !w & !vl;
    if seen_interior != leftover {
        return false;
    }
    let mut hout = vec![0usize; n];
    let mut hin = vec![0usize; n];
    for q in &c.paths {
        for (u, v) in q.edges() {
            hout[u] += 1;
            hin[v] += 1;
        }
    }
    (0..n).all(|v| {
        let extra = (leftover & bit(v) != 0) as usize;
        hout[v] == layout.out_degree(v) + extra && hin[v] == layout.in_degree(v) + extra
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::*;

    #[test]
    fn single_edge_layout_gives_hamilton_path() {
        let k5 = complete_digraph(5).unwrap();
        let l = Layout { paths: vec![Path::new(vec![0, 4])], isolated: vec![], fixed: vec![] };
        let c = realize_configuration(&k5, &l, 0, &mut Budget::default()).unwrap().found().unwrap();
        assert_eq!(c.paths[0].vertices().len(), 5);
        assert_eq!((c.paths[0].start(), c.paths[0].end()), (0, 4));
        assert!(configuration_matches(&k5, &l, &c, 0));
    }

    #[test]
    fn isolated_and_fixed_edges() {
        let k5 = complete_digraph(5).unwrap();
        let l = Layout { paths: vec![Path::new(vec![0, 1, 2])], isolated: vec![3], fixed: vec![(0, 0)] };
        let c = realize_configuration(&k5, &l, bit(0), &mut Budget::default()).unwrap().found().unwrap();
        assert_eq!(c.paths[0].vertices(), &[0, 1, 4, 2]);
        assert!(!c.paths[0].vertices().contains(&3));
        assert!(configuration_matches(&k5, &l, &c, bit(0)));
    }

    #[test]
    fn missing_route_is_absent() {
        let tt4 = transitive_tournament(4).unwrap();
        let l = Layout { paths: vec![Path::new(vec![3, 0])], isolated: vec![], fixed: vec![] };
        assert_eq!(realize_configuration(&tt4, &l, 0, &mut Budget::default()).unwrap(), SearchOutcome::Absent);
    }
}
