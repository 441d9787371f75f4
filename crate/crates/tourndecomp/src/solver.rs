//! Exact path number by branch and bound, and a plain exhaustive oracle.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::digraph::{bit, bits, Digraph, Path, PathDecomposition};
use crate::error::{Error, Result};
use crate::exceptional::apex_witness;
use crate::excess::{texc, total_excess};
use crate::expander::Budget;

pub const DEFAULT_SOLVER_BUDGET: u64 = 100_000_000;
pub const DEFAULT_SOLVER_EDGE_CAP: usize = 160;
pub const ORACLE_EDGE_CAP: usize = 21;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PnResult {
    pub pn: usize,
    pub certificate: PathDecomposition,
    pub lower_bound_used: usize,
    pub nodes_explored: u64,
    /// `false` when the budget ran out and `pn` is only an upper bound.
    pub optimal: bool,
}

/// `texc(D)`, raised by one for non-empty regular digraphs and for apex tournaments.
pub fn lower_bound(d: &Digraph) -> usize {
    let t = texc(d);
    let regular = d.edge_count() > 0 && d.regularity().is_some();
    let apex = d.is_tournament() && apex_witness(d).is_some();
    if regular || apex {
        t + 1
    } else {
        t
    }
}

pub fn pn_exact(d: &Digraph) -> Result<PnResult> {
    pn_exact_with_budget(d, DEFAULT_SOLVER_BUDGET)
}

/// Iterative deepening from the lower bound: each target `t` is decided by a complete
/// transition-system search, and the greedy decomposition is returned if the budget runs out.
pub fn pn_exact_with_budget(d: &Digraph, budget: u64) -> Result<PnResult> {
    if d.edge_count() > DEFAULT_SOLVER_EDGE_CAP {
        return Err(Error::CapExceeded { what: "edge count", got: d.edge_count(), cap: DEFAULT_SOLVER_EDGE_CAP });
    }
    if budget == 0 {
        return Err(Error::InvalidArgument("solver budget must be positive".into()));
    }
    let lb = lower_bound(d).max(Residual::new(d).component_bound());
    let best = greedy_decomposition(d);
    let mut budget = Budget::new(budget);
    let result = |paths: Vec<Path>, budget: &Budget, optimal| PnResult {
        pn: paths.len(),
        certificate: PathDecomposition::new(paths),
        lower_bound_used: lb,
        nodes_explored: budget.used(),
        optimal,
    };
    for target in lb..best.len() {
        let mut t = Transitions::new(d, target, &mut budget);
        match t.search() {
            Step::Found => {
                let paths = t.paths();
                return Ok(result(paths, &budget, true));
            }
            Step::Fail => {}
            Step::Timeout => return Ok(result(best.paths, &budget, false)),
        }
    }
    Ok(result(best.paths, &budget, true))
}

/// Best of two greedy walks: one runs every path until stuck, the other stops as soon as it
/// reaches a vertex that still needs to end paths.
pub fn greedy_decomposition(d: &Digraph) -> PathDecomposition {
    let a = greedy_walks(d, false);
    let b = greedy_walks(d, true);
    if b.len() < a.len() {
        b
    } else {
        a
    }
}

fn greedy_walks(d: &Digraph, stop_at_deficit: bool) -> PathDecomposition {
    let mut r = Residual::new(d);
    let mut paths = Vec::new();
    while r.edges > 0 {
        let start = (0..r.n)
            .filter(|&v| r.exc(v) > 0)
            .max_by_key(|&v| (r.exc(v), std::cmp::Reverse(v)))
            .or_else(|| (0..r.n).filter(|&v| r.dout(v) > 0).max_by_key(|&v| (r.dout(v), std::cmp::Reverse(v))))
            .expect("some vertex has an out-edge");
        let mut path = vec![start];
        let mut on = bit(start);
        let mut u = start;
        loop {
            let next = bits(r.out[u] & !on).max_by_key(|&w| (r.dout(w), std::cmp::Reverse(w)));
            let Some(w) = next else { break };
            r.remove(u, w);
            path.push(w);
            on |= bit(w);
            u = w;
            if stop_at_deficit && r.exc(u) < 0 {
                break;
            }
        }
        paths.push(Path::new(path));
    }
    PathDecomposition::new(paths)
}

#[derive(Clone, Debug)]
struct Residual {
    n: usize,
    out: Vec<u64>,
    inn: Vec<u64>,
    edges: usize,
}

impl Residual {
    fn new(d: &Digraph) -> Self {
        Residual {
            n: d.n(),
            out: (0..d.n()).map(|v| d.out_mask(v)).collect(),
            inn: (0..d.n()).map(|v| d.in_mask(v)).collect(),
            edges: d.edge_count(),
        }
    }

    fn remove(&mut self, u: usize, v: usize) {
        self.out[u] &= !bit(v);
        self.inn[v] &= !bit(u);
        self.edges -= 1;
    }

    fn dout(&self, v: usize) -> usize {
        self.out[v].count_ones() as usize
    }

    fn din(&self, v: usize) -> usize {
        self.inn[v].count_ones() as usize
    }

    fn exc(&self, v: usize) -> i64 {
        self.dout(v) as i64 - self.din(v) as i64
    }

    /// `pn` is additive over weakly connected components; each contributes
    /// `max(exc, Delta0)`, plus one when every possible path end (or start) has a
    /// semidegree equal to `Delta0` and so could not actually end there.
    fn component_bound(&self) -> usize {
        let mut seen = 0u64;
        let mut total = 0;
        for v in 0..self.n {
            if seen & bit(v) != 0 || self.out[v] | self.inn[v] == 0 {
                continue;
            }
            let mut comp = bit(v);
            let mut frontier = bit(v);
            while frontier != 0 {
                let mut next = 0;
                for x in bits(frontier) {
                    next |= self.out[x] | self.inn[x];
                }
                frontier = next & !comp;
                comp |= next;
            }
            seen |= comp;
            let (mut exc, mut delta) = (0usize, 0usize);
            for x in bits(comp) {
                exc += self.exc(x).max(0) as usize;
                delta = delta.max(self.dout(x)).max(self.din(x));
            }
            let no_end = bits(comp).all(|x| self.din(x) == 0 || self.dout(x) == delta);
            let no_start = bits(comp).all(|x| self.dout(x) == 0 || self.din(x) == delta);
            total += exc.max(delta + (no_end || no_start) as usize);
        }
        total
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Step {
    Found,
    Fail,
    Timeout,
}

/// Transition-system search: at every vertex the edges of the smaller side are paired with
/// distinct edges of the other side, so that the chains of paired edges are paths. A
/// decomposition with `t` paths leaves exactly `t - exc(D)` slots unpaired.
struct Transitions<'a> {
    edges: Vec<(usize, usize)>,
    /// Edge ids in and out of each vertex.
    ins: Vec<Vec<usize>>,
    outs: Vec<Vec<usize>>,
    /// Slots: `(vertex, edge, true)` asks for a successor of an in-edge, `false` a predecessor of an out-edge.
    slots: Vec<(usize, usize, bool)>,
    done: Vec<bool>,
    next: Vec<usize>,
    prev: Vec<usize>,
    /// For a chain with first edge `f` and last edge `l`: `last_of[f] = l`, `first_of[l] = f`, `mask[f]`.
    last_of: Vec<usize>,
    first_of: Vec<usize>,
    mask: Vec<u64>,
    slack: usize,
    budget: &'a mut Budget,
}

const NONE: usize = usize::MAX;

impl<'a> Transitions<'a> {
    fn new(d: &Digraph, target: usize, budget: &'a mut Budget) -> Self {
        let edges: Vec<(usize, usize)> = d.edges().collect();
        let n = d.n();
        let mut ins = vec![Vec::new(); n];
        let mut outs = vec![Vec::new(); n];
        for (i, &(u, v)) in edges.iter().enumerate() {
            outs[u].push(i);
            ins[v].push(i);
        }
        let mut slots = Vec::new();
        for v in 0..n {
            if ins[v].len() <= outs[v].len() {
                slots.extend(ins[v].iter().map(|&e| (v, e, true)));
            } else {
                slots.extend(outs[v].iter().map(|&e| (v, e, false)));
            }
        }
        let slack = target.saturating_sub(total_excess(d));
        let m = edges.len();
        Transitions {
            mask: edges.iter().map(|&(u, v)| bit(u) | bit(v)).collect(),
            last_of: (0..m).collect(),
            first_of: (0..m).collect(),
            done: vec![false; slots.len()],
            next: vec![NONE; m],
            prev: vec![NONE; m],
            edges,
            ins,
            outs,
            slots,
            slack,
            budget,
        }
    }

    /// In-edge `a` followed by out-edge `b` at their common vertex `v`.
    fn compatible(&self, a: usize, b: usize, v: usize) -> bool {
        let f = self.first_of[a];
        f != b && self.mask[f] & self.mask[b] == bit(v)
    }

    fn options(&self, slot: usize) -> Vec<usize> {
        let (v, e, is_in) = self.slots[slot];
        if is_in {
            self.outs[v].iter().copied().filter(|&b| self.prev[b] == NONE && self.compatible(e, b, v)).collect()
        } else {
            self.ins[v].iter().copied().filter(|&a| self.next[a] == NONE && self.compatible(a, e, v)).collect()
        }
    }

    fn link(&mut self, a: usize, b: usize) -> (usize, usize, u64) {
        let f = self.first_of[a];
        let l = self.last_of[b];
        let undo = (self.last_of[f], self.first_of[l], self.mask[f]);
        self.next[a] = b;
        self.prev[b] = a;
        self.last_of[f] = l;
        self.first_of[l] = f;
        self.mask[f] |= self.mask[b];
        undo
    }

    fn unlink(&mut self, a: usize, b: usize, undo: (usize, usize, u64)) {
        let f = self.first_of[self.last_of[b]];
        let l = self.last_of[b];
        self.last_of[f] = undo.0;
        self.first_of[l] = undo.1;
        self.mask[f] = undo.2;
        self.next[a] = NONE;
        self.prev[b] = NONE;
    }

    fn search(&mut self) -> Step {
        if !self.budget.tick() {
            return Step::Timeout;
        }
        // Fail first: the open slot with the fewest partners.
        let mut best: Option<(usize, Vec<usize>)> = None;
        let mut empty = 0;
        for s in 0..self.slots.len() {
            if self.done[s] {
                continue;
            }
            let opts = self.options(s);
            if opts.is_empty() {
                empty += 1;
            }
            if best.as_ref().is_none_or(|(_, o)| opts.len() < o.len()) {
                best = Some((s, opts));
            }
        }
        if empty > self.slack {
            return Step::Fail;
        }
        let Some((s, opts)) = best else { return Step::Found };
        let (v, e, is_in) = self.slots[s];
        self.done[s] = true;
        for p in opts {
            let (a, b) = if is_in { (e, p) } else { (p, e) };
            debug_assert_eq!(self.edges[a].1, v);
            let undo = self.link(a, b);
            let res = self.search();
            if res != Step::Fail {
                return res;
            }
            self.unlink(a, b, undo);
        }
        let mut res = Step::Fail;
        if self.slack > 0 {
            self.slack -= 1;
            res = self.search();
            if res == Step::Fail {
                self.slack += 1;
            }
        }
        if res == Step::Fail {
            self.done[s] = false;
        }
        res
    }

    fn paths(&self) -> Vec<Path> {
        let mut out = Vec::new();
        for e in 0..self.edges.len() {
            if self.prev[e] != NONE {
                continue;
            }
            let mut p = vec![self.edges[e].0];
            let mut x = e;
            while x != NONE {
                p.push(self.edges[x].1);
                x = self.next[x];
            }
            out.push(Path::new(p));
        }
        out
    }
}

/// Exhaustive minimum over all partitions of the edge set into paths, memoised on the set of
/// uncovered edges. Independent of [`pn_exact`]; intended as a test oracle.
pub fn pn_oracle(d: &Digraph) -> Result<usize> {
    let edges: Vec<(usize, usize)> = d.edges().collect();
    if edges.len() > ORACLE_EDGE_CAP {
        return Err(Error::CapExceeded { what: "edge count", got: edges.len(), cap: ORACLE_EDGE_CAP });
    }
    let id: HashMap<(usize, usize), usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut through: Vec<Vec<u32>> = vec![Vec::new(); edges.len()];
    for s in 0..d.n() {
        let mut stack = vec![(s, bit(s), 0u32)];
        while let Some((u, on, mask)) = stack.pop() {
            for w in d.out_neighbours(u) {
                if on & bit(w) != 0 {
                    continue;
                }
                let m = mask | 1 << id[&(u, w)];
                for (e, list) in through.iter_mut().enumerate() {
                    if m & 1 << e != 0 {
                        list.push(m);
                    }
                }
                stack.push((w, on | bit(w), m));
            }
        }
    }
    let full = if edges.is_empty() { 0 } else { u32::MAX >> (32 - edges.len()) };
    let mut memo = HashMap::new();
    Ok(oracle_rec(full, &through, &mut memo))
}

fn oracle_rec(mask: u32, through: &[Vec<u32>], memo: &mut HashMap<u32, usize>) -> usize {
    if mask == 0 {
        return 0;
    }
    if let Some(&v) = memo.get(&mask) {
        return v;
    }
    let e = mask.trailing_zeros() as usize;
    let mut best = usize::MAX;
    for &p in &through[e] {
        if p & !mask == 0 {
            best = best.min(1 + oracle_rec(mask & !p, through, memo));
        }
    }
    memo.insert(mask, best);
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::*;

    fn solve(d: &Digraph) -> usize {
        let r = pn_exact(d).unwrap();
        assert!(r.optimal);
        validate_decomposition(d, &r.certificate).unwrap();
        r.pn
    }

    #[test]
    fn small_values() {
        let c3 = directed_cycle(3).unwrap();
        assert_eq!(lower_bound(&c3), 2);
        assert_eq!(solve(&c3), 2);
        assert_eq!(pn_oracle(&c3).unwrap(), 2);
        let tt4 = transitive_tournament(4).unwrap();
        assert_eq!(lower_bound(&tt4), 4);
        assert_eq!(solve(&transitive_tournament(5).unwrap()), 6);
        let apex = gen_apex(5, &c3).unwrap();
        assert_eq!(lower_bound(&apex), 4);
        assert_eq!(solve(&apex), 4);
    }

    #[test]
    fn trivial_oracle() {
        assert_eq!(pn_oracle(&Digraph::new(3).unwrap()).unwrap(), 0);
        assert_eq!(pn_oracle(&Digraph::from_edges(2, &[(0, 1)]).unwrap()).unwrap(), 1);
        assert!(pn_oracle(&complete_digraph(5).unwrap()).is_ok());
        assert!(pn_oracle(&complete_digraph(6).unwrap()).is_err());
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let d = gen_regular_tournament(7).unwrap();
        let r = pn_exact_with_budget(&d, 1).unwrap();
        validate_decomposition(&d, &r.certificate).unwrap();
        assert!(!r.optimal || r.pn == r.lower_bound_used);
    }
}
