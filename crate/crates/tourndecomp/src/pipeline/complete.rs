//! Final step: a digraph whose degrees and excesses follow the `r`-path pattern is
//! decomposed into `r` paths through an auxiliary vertex and a Hamilton decomposition.

use serde::{Deserialize, Serialize};

use crate::digraph::{bit, bits, validate_decomposition, Digraph, Path, PathDecomposition};
use crate::error::{Error, Result};
use crate::excess::vertex_excess;
use crate::expander::{hamilton_decomposition_with, Budget, SearchOutcome};

use super::state::AbsorbingSet;

/// Default order cap for the Hamilton decomposition in the completion step.
pub const DEFAULT_COMPLETION_CAP: usize = 16;

/// Partition of `V' = V \ w1` into start (`x_plus`), end (`x_minus`), both (`x_star`) and
/// neither (`x_zero`) vertices, together with the absorbing edges at `w1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletionPattern {
    pub w1: u64,
    pub a: AbsorbingSet,
    pub x_plus: u64,
    pub x_minus: u64,
    pub x_star: u64,
    pub x_zero: u64,
    pub r: usize,
}

impl CompletionPattern {
    /// Checks the degree and excess pattern of `d`; every failure is a precondition error.
    pub fn check(&self, d: &Digraph) -> Result<()> {
        let bad = |m: String| Err(Error::Precondition(m));
        if self.r == 0 {
            return bad("r must be positive".into());
        }
        let vprime = d.vertex_mask() & !self.w1;
        let sets = [self.x_plus, self.x_minus, self.x_star, self.x_zero];
        if sets.iter().fold(0, |m, s| m | s) != vprime || sets.iter().map(|s| s.count_ones()).sum::<u32>() != vprime.count_ones() {
            return bad("X sets do not partition V \\ W1".into());
        }
        let r = self.r;
        if (self.x_plus | self.x_star).count_ones() as usize + self.a.a_plus.len() != r
            || (self.x_minus | self.x_star).count_ones() as usize + self.a.a_minus.len() != r
        {
            return bad(format!("start or end count differs from r = {r}"));
        }
        if self.a.plus_heads() & !(self.x_minus | self.x_zero) != 0 || self.a.minus_tails() & !(self.x_plus | self.x_zero) != 0 {
            return bad("absorbing edges meet the wrong X sets".into());
        }
        self.a.check(d, self.w1)?;
        for w in bits(self.w1) {
            if d.out_degree(w) != self.a.d_plus(w) || d.in_degree(w) != self.a.d_minus(w) {
                return bad(format!("vertex {w} of W1 has edges besides its absorbing edges"));
            }
        }
        for v in bits(vprime) {
            let (exc, deg) = if self.x_plus & bit(v) != 0 {
                (1, 2 * r - 1)
            } else if self.x_minus & bit(v) != 0 {
                (-1, 2 * r - 1)
            } else if self.x_star & bit(v) != 0 {
                (0, 2 * r - 2)
            } else {
                (0, 2 * r)
            };
            if vertex_excess(d, v) != exc || d.degree(v) != deg {
                return bad(format!("vertex {v} has excess {} and degree {}, expected {exc} and {deg}", vertex_excess(d, v), d.degree(v)));
            }
        }
        Ok(())
    }
}

/// Decomposes `d` into exactly `r` paths; absent or timed-out searches become `Infeasible`.
pub fn complete_decomposition(d: &Digraph, pattern: &CompletionPattern) -> Result<PathDecomposition> {
    match complete_decomposition_with(d, pattern, DEFAULT_COMPLETION_CAP, &mut Budget::default())? {
        SearchOutcome::Found(p) => Ok(p),
        SearchOutcome::Absent => Err(Error::Infeasible("the auxiliary digraph has no Hamilton decomposition".into())),
        SearchOutcome::Timeout => Err(Error::Infeasible("Hamilton decomposition search ran out of budget".into())),
    }
}

pub fn complete_decomposition_with(
    d: &Digraph,
    pattern: &CompletionPattern,
    cap: usize,
    budget: &mut Budget,
) -> Result<SearchOutcome<PathDecomposition>> {
    pattern.check(d)?;
    let p = pattern;
    let heads = p.a.plus_heads();
    let tails = p.a.minus_tails();
    let y_plus = (p.x_plus | (heads & p.x_zero)) & !tails;
    let y_minus = (p.x_minus | (tails & p.x_zero)) & !heads;
    let y_star = p.x_star | (heads & tails) | (p.x_plus & tails) | (p.x_minus & heads);

    let ids: Vec<usize> = bits(d.vertex_mask() & !p.w1).collect();
    let mut index = vec![usize::MAX; d.n()];
    for (i, &v) in ids.iter().enumerate() {
        index[v] = i;
    }
    let aux = ids.len();
    let mut h = Digraph::new(aux + 1)?;
    for &u in &ids {
        for v in bits(d.out_mask(u) & !p.w1) {
            h.add_edge(index[u], index[v]);
        }
        if (y_plus | y_star) & bit(u) != 0 {
            h.add_edge(aux, index[u]);
        }
        if (y_minus | y_star) & bit(u) != 0 {
            h.add_edge(index[u], aux);
        }
    }
    if h.regularity() != Some(p.r) {
        return Err(Error::Precondition(format!("auxiliary digraph is not {}-regular", p.r)));
    }
    let cycles = match hamilton_decomposition_with(&h, cap, budget)? {
        SearchOutcome::Found(c) => c,
        SearchOutcome::Absent => return Ok(SearchOutcome::Absent),
        SearchOutcome::Timeout => return Ok(SearchOutcome::Timeout),
    };
    let mut paths = Vec::with_capacity(cycles.len());
    for c in cycles {
        let at = c.iter().position(|&x| x == aux).expect("Hamilton cycle visits the auxiliary vertex");
        let mut seq: Vec<usize> = c[at + 1..].iter().chain(&c[..at]).map(|&i| ids[i]).collect();
        if let Some(&(w, _)) = p.a.a_plus.iter().find(|e| e.1 == seq[0]) {
            seq.insert(0, w);
        }
        if let Some(&(_, w)) = p.a.a_minus.iter().find(|e| e.0 == *seq.last().unwrap()) {
            seq.push(w);
        }
        paths.push(Path::new(seq));
    }
    let out = PathDecomposition::new(paths);
    validate_decomposition(d, &out).map_err(|e| Error::Precondition(format!("completion produced an invalid decomposition: {e}")))?;
    Ok(SearchOutcome::Found(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::*;

    #[test]
    fn complete_digraph_four() {
        let k4 = complete_digraph(4).unwrap();
        let pat = CompletionPattern { x_star: k4.vertex_mask(), r: 4, ..Default::default() };
        let p = complete_decomposition(&k4, &pat).unwrap();
        assert_eq!(p.len(), 4);
        assert!(p.paths.iter().all(|q| q.vertices().len() == 4));
        let starts: u64 = p.paths.iter().fold(0, |m, q| m | bit(q.start()));
        assert_eq!(starts.count_ones(), 4);
    }

    #[test]
    fn wrong_degree_is_rejected() {
        let k4 = complete_digraph(4).unwrap();
        let pat = CompletionPattern { x_zero: k4.vertex_mask(), r: 3, ..Default::default() };
        assert!(matches!(complete_decomposition(&k4, &pat), Err(Error::Precondition(_))));
    }

    #[test]
    fn absorbing_edges_extend_paths() {
        // Path 1->2->3 with absorbing edges 0->1 and 3->4; the heads sit in X_zero.
        let d = Digraph::from_edges(5, &[(1, 2), (2, 3), (0, 1), (3, 4)]).unwrap();
        let a = AbsorbingSet { a_plus: vec![(0, 1)], a_minus: vec![(3, 4)] };
        let pat = CompletionPattern { w1: bit(0) | bit(4), a, x_zero: bit(1) | bit(2) | bit(3), r: 1, ..Default::default() };
        let p = complete_decomposition(&d, &pat).unwrap();
        assert_eq!(p.paths, vec![Path::new(vec![0, 1, 2, 3, 4])]);
    }
}
