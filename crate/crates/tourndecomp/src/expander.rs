//! Robust outexpansion checked by brute force over vertex subsets, plus exact
//! backtracking substitutes for the Hamilton path, spanning path and Hamilton
//! decomposition tools that robust expansion would otherwise guarantee.
//!
//! All searches count nodes against a [`Budget`] and report [`SearchOutcome::Timeout`]
//! separately from [`SearchOutcome::Absent`].

use num_rational::Ratio;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::digraph::{bit, bits, Digraph, Path};
use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

pub const DEFAULT_EXPANDER_CAP: usize = 16;
pub const DEFAULT_HAMILTON_DECOMPOSITION_CAP: usize = 12;
pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    s.trim().parse::<Rational>().map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
}

/// `count >= q * n`, evaluated exactly.
fn at_least(count: usize, q: Rational, n: usize) -> bool {
    count as i64 * q.denom() >= q.numer() * n as i64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RobustParams {
    nu: Rational,
    tau: Rational,
}

impl RobustParams {
    /// Requires `0 < nu <= tau < 1`.
    pub fn new(nu: Rational, tau: Rational) -> Result<Self> {
        let zero = Rational::from_integer(0);
        let one = Rational::from_integer(1);
        if nu <= zero || nu > one {
            return Err(Error::InvalidArgument(format!("nu = {nu} outside (0, 1]")));
        }
        if tau <= zero || tau >= one {
            return Err(Error::InvalidArgument(format!("tau = {tau} outside (0, 1)")));
        }
        if nu > tau {
            return Err(Error::InvalidArgument(format!("nu = {nu} exceeds tau = {tau}")));
        }
        Ok(RobustParams { nu, tau })
    }

    pub fn parse(nu: &str, tau: &str) -> Result<Self> {
        Self::new(parse_rational(nu)?, parse_rational(tau)?)
    }

    pub fn nu(&self) -> Rational {
        self.nu
    }

    pub fn tau(&self) -> Rational {
        self.tau
    }
}

/// `RN^+_nu(S) = { v : |N^-(v) ∩ S| >= nu n }` as a vertex mask.
pub fn robust_outneighbourhood(d: &Digraph, s: u64, nu: Rational) -> u64 {
    let n = d.n();
    (0..n).filter(|&v| at_least((d.in_mask(v) & s).count_ones() as usize, nu, n)).fold(0, |m, v| m | bit(v))
}

/// Exhaustive check over all `S` with `tau n <= |S| <= (1 - tau) n` that
/// `|RN^+_nu(S)| >= |S| + nu n`. Errors if `n` exceeds [`DEFAULT_EXPANDER_CAP`].
pub fn is_robust_outexpander(d: &Digraph, p: RobustParams) -> Result<bool> {
    is_robust_outexpander_with_cap(d, p, DEFAULT_EXPANDER_CAP)
}

pub fn is_robust_outexpander_with_cap(d: &Digraph, p: RobustParams, cap: usize) -> Result<bool> {
    let n = d.n();
    if n > cap {
        return Err(Error::CapExceeded { what: "expander check order", got: n, cap });
    }
    // tau n <= |S| <= (1 - tau) n, the upper bound written as n - |S| >= tau n
    let size_ok = |k: usize| at_least(k, p.tau, n) && at_least(n - k, p.tau, n);
    let total: u64 = 1u64 << n;
    let check = |s: u64| {
        let k = s.count_ones() as usize;
        if !size_ok(k) {
            return true;
        }
        let rn = robust_outneighbourhood(d, s, p.nu).count_ones() as usize;
        rn >= k && at_least(rn - k, p.nu, n)
    };
    Ok(if n >= 12 { (0..total).into_par_iter().all(check) } else { (0..total).all(check) })
}

/// `delta^0(D) >= (3/8 + eps) n`, evaluated exactly.
pub fn meets_three_eighths(d: &Digraph, eps: Rational) -> bool {
    at_least(d.min_semidegree(), Rational::new(3, 8) + eps, d.n())
}

/// Fraction of `trials` uniformly random induced subdigraphs on `k` vertices that pass
/// [`is_robust_outexpander`]. Deterministic given `seed`.
pub fn sampled_robustness(d: &Digraph, p: RobustParams, k: usize, trials: usize, seed: u64) -> Result<f64> {
    if k > d.n() {
        return Err(Error::InvalidArgument(format!("sample size {k} exceeds n = {}", d.n())));
    }
    if k > DEFAULT_EXPANDER_CAP {
        return Err(Error::CapExceeded { what: "sample size", got: k, cap: DEFAULT_EXPANDER_CAP });
    }
    if trials == 0 {
        return Ok(0.0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<Vec<usize>> = (0..trials)
        .map(|_| {
            let mut s = sample(&mut rng, d.n(), k).into_vec();
            s.sort_unstable();
            s
        })
        .collect();
    let passed = samples
        .par_iter()
        .map(|s| is_robust_outexpander(&d.induced(s), p).map(|b| b as usize))
        .collect::<Result<Vec<usize>>>()?
        .into_iter()
        .sum::<usize>();
    Ok(passed as f64 / trials as f64)
}

/// Node counter shared by the backtracking searches.
#[derive(Clone, Debug)]
pub struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    /// Counts one node; returns `false` once the limit is reached.
    pub fn tick(&mut self) -> bool {
        if self.used >= self.limit {
            return false;
        }
        self.used += 1;
        true
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn exhausted(&self) -> bool {
        self.used >= self.limit
    }

    pub fn remaining(&self) -> u64 {
        self.limit - self.used
    }

    /// Records nodes spent under a separate sub-budget.
    pub fn charge(&mut self, nodes: u64) {
        self.used = (self.used + nodes).min(self.limit);
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_SEARCH_BUDGET)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome<T> {
    Found(T),
    Absent,
    Timeout,
}

impl<T> SearchOutcome<T> {
    pub fn found(self) -> Option<T> {
        match self {
            SearchOutcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found(_))
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> SearchOutcome<U> {
        match self {
            SearchOutcome::Found(t) => SearchOutcome::Found(f(t)),
            SearchOutcome::Absent => SearchOutcome::Absent,
            SearchOutcome::Timeout => SearchOutcome::Timeout,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpanningMode {
    /// A spanning path from `x` to `y`.
    Path { x: usize, y: usize },
    /// A spanning cycle; returned as a vertex sequence whose last vertex has an edge back to the first.
    Cycle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Target {
    Vertex(usize),
    CycleTo(usize),
}

/// Backtracking search for a path that starts at `start`, visits every vertex of `cover`
/// exactly once and stops at the target, honouring forced successor/predecessor pairs.
pub(crate) struct SpanningSearch<'a> {
    d: &'a Digraph,
    cover: u64,
    target: Target,
    forced_succ: Vec<Option<usize>>,
    forced_pred: Vec<Option<usize>>,
}

/// Return value of the visitor: keep enumerating or stop.
pub(crate) enum Visit {
    Continue,
    Stop,
    /// Stop and report a timeout (a nested search ran out of budget).
    Timeout,
}

pub(crate) type Visitor<'v> = dyn FnMut(&[usize], &mut Budget) -> Visit + 'v;

impl<'a> SpanningSearch<'a> {
    fn new(d: &'a Digraph, cover: u64, target: Target) -> Self {
        SpanningSearch { d, cover, target, forced_succ: vec![None; d.n()], forced_pred: vec![None; d.n()] }
    }

    pub(crate) fn path(d: &'a Digraph, cover: u64, y: usize) -> Self {
        Self::new(d, cover, Target::Vertex(y))
    }

    pub(crate) fn cycle(d: &'a Digraph, cover: u64, s: usize) -> Self {
        Self::new(d, cover, Target::CycleTo(s))
    }

    pub(crate) fn force(&mut self, u: usize, v: usize) {
        self.forced_succ[u] = Some(v);
        self.forced_pred[v] = Some(u);
    }

    fn succ_mask(&self, u: usize) -> u64 {
        match self.forced_succ[u] {
            Some(v) => self.d.out_mask(u) & bit(v),
            None => self.d.out_mask(u),
        }
    }

    fn pred_mask(&self, u: usize) -> u64 {
        match self.forced_pred[u] {
            Some(p) => self.d.in_mask(u) & bit(p),
            None => self.d.in_mask(u),
        }
    }

    /// Runs the search from `start`; the visitor sees each complete path.
    pub(crate) fn run(&self, start: usize, budget: &mut Budget, visit: &mut Visitor<'_>) -> SearchOutcome<()> {
        if self.cover & bit(start) == 0 || self.forced_pred[start].is_some() && !matches!(self.target, Target::CycleTo(_)) {
            return SearchOutcome::Absent;
        }
        let mut path = vec![start];
        match self.dfs(start, bit(start), &mut path, budget, visit) {
            Step::Stopped => SearchOutcome::Found(()),
            Step::Exhausted => SearchOutcome::Absent,
            Step::OutOfBudget => SearchOutcome::Timeout,
        }
    }

    fn complete(&self, cur: usize) -> bool {
        match self.target {
            Target::Vertex(y) => cur == y,
            Target::CycleTo(s) => self.succ_mask(cur) & bit(s) != 0 && self.pred_mask(s) & bit(cur) != 0,
        }
    }

    /// Necessary condition: every unvisited vertex still has a usable predecessor and
    /// successor, and at most one of them depends on the target vertex as its only successor.
    fn viable(&self, cur: usize, visited: u64) -> bool {
        let left = self.cover & !visited;
        let mut only_to_target = 0;
        for u in bits(left) {
            if self.pred_mask(u) & ((left & !bit(u)) | bit(cur)) == 0 {
                return false;
            }
            let mut succ = self.succ_mask(u) & left & !bit(u);
            match self.target {
                Target::Vertex(y) => {
                    if u == y {
                        continue;
                    }
                    if succ == bit(y) {
                        only_to_target += 1;
                    }
                }
                Target::CycleTo(s) => {
                    if self.pred_mask(s) & bit(u) != 0 {
                        succ |= self.succ_mask(u) & bit(s);
                    }
                    if succ == bit(s) {
                        only_to_target += 1;
                    }
                }
            }
            if succ == 0 || only_to_target > 1 {
                return false;
            }
        }
        true
    }

    fn dfs(&self, cur: usize, visited: u64, path: &mut Vec<usize>, budget: &mut Budget, visit: &mut Visitor<'_>) -> Step {
        if !budget.tick() {
            return Step::OutOfBudget;
        }
        if visited == self.cover {
            if self.complete(cur) {
                return match visit(path, budget) {
                    Visit::Stop => Step::Stopped,
                    Visit::Continue => Step::Exhausted,
                    Visit::Timeout => Step::OutOfBudget,
                };
            }
            return Step::Exhausted;
        }
        if matches!(self.target, Target::Vertex(y) if y == cur) || !self.viable(cur, visited) {
            return Step::Exhausted;
        }
        let left = self.cover & !visited;
        let mut cand: Vec<(u32, usize)> = bits(self.succ_mask(cur) & left)
            .filter(|&w| self.pred_mask(w) & bit(cur) != 0)
            .filter(|&w| !matches!(self.target, Target::Vertex(y) if w == y && left != bit(y)))
            .map(|w| ((self.succ_mask(w) & left & !bit(w)).count_ones(), w))
            .collect();
        cand.sort_unstable();
        for (_, w) in cand {
            path.push(w);
            let step = self.dfs(w, visited | bit(w), path, budget, visit);
            path.pop();
            if !matches!(step, Step::Exhausted) {
                return step;
            }
        }
        Step::Exhausted
    }
}

enum Step {
    Stopped,
    Exhausted,
    OutOfBudget,
}

/// Searches for a spanning path or cycle of `D - avoid` containing every fragment as a subpath.
pub fn join_into_spanning(
    d: &Digraph,
    fragments: &[Path],
    mode: SpanningMode,
    avoid: u64,
    budget: &mut Budget,
) -> Result<SearchOutcome<Path>> {
    let cover = d.vertex_mask() & !avoid;
    let mut seen = 0u64;
    for f in fragments {
        for &v in f.vertices() {
            d.check_vertex(v)?;
            if seen & bit(v) != 0 {
                return Err(Error::Precondition(format!("vertex {v} appears in two fragments")));
            }
            if avoid & bit(v) != 0 {
                return Err(Error::Precondition(format!("fragment vertex {v} is in the avoid set")));
            }
            seen |= bit(v);
        }
    }
    let first = match mode {
        SpanningMode::Path { x, y } => {
            d.check_vertex(x)?;
            d.check_vertex(y)?;
            if x == y {
                return Err(Error::InvalidArgument("path endpoints must differ".into()));
            }
            if cover & bit(x) == 0 || cover & bit(y) == 0 {
                return Err(Error::Precondition("path endpoint is in the avoid set".into()));
            }
            x
        }
        SpanningMode::Cycle => match fragments.first() {
            Some(f) if !f.is_empty() => f.start(),
            _ => match bits(cover).next() {
                Some(v) => v,
                None => return Ok(SearchOutcome::Absent),
            },
        },
    };
    let mut search = match mode {
        SpanningMode::Path { y, .. } => SpanningSearch::path(d, cover, y),
        SpanningMode::Cycle => SpanningSearch::cycle(d, cover, first),
    };
    for f in fragments {
        for (u, v) in f.edges() {
            if !d.has_edge(u, v) {
                return Ok(SearchOutcome::Absent);
            }
            search.force(u, v);
        }
    }
    if let SpanningMode::Path { x, y } = mode {
        if search.forced_pred[x].is_some() || search.forced_succ[y].is_some() {
            return Ok(SearchOutcome::Absent);
        }
    }
    if cover.count_ones() < 2 {
        return Ok(SearchOutcome::Absent);
    }
    let mut found = None;
    let outcome = search.run(first, budget, &mut |p, _| {
        found = Some(Path::new(p.to_vec()));
        Visit::Stop
    });
    Ok(match outcome {
        SearchOutcome::Found(()) => SearchOutcome::Found(found.expect("visitor stored the path")),
        SearchOutcome::Absent => SearchOutcome::Absent,
        SearchOutcome::Timeout => SearchOutcome::Timeout,
    })
}

/// Hamilton `(x, y)`-path with the default budget.
pub fn hamilton_path(d: &Digraph, x: usize, y: usize) -> Result<SearchOutcome<Path>> {
    hamilton_path_with_budget(d, x, y, &mut Budget::default())
}

pub fn hamilton_path_with_budget(d: &Digraph, x: usize, y: usize, budget: &mut Budget) -> Result<SearchOutcome<Path>> {
    join_into_spanning(d, &[], SpanningMode::Path { x, y }, 0, budget)
}

/// Internally vertex-disjoint `(x_i, y_i)`-paths, found one after another by BFS. Interiors
/// avoid `forbidden`, every pair endpoint and all earlier interiors; each path has at most
/// `max_len` edges.
pub fn find_disjoint_paths(d: &Digraph, pairs: &[(usize, usize)], forbidden: u64, max_len: usize) -> Result<Vec<Path>> {
    let mut endpoints = 0u64;
    for &(x, y) in pairs {
        d.check_vertex(x)?;
        d.check_vertex(y)?;
        if x == y {
            return Err(Error::InvalidArgument(format!("pair ({x}, {y}) has equal endpoints")));
        }
        if forbidden & (bit(x) | bit(y)) != 0 {
            return Err(Error::Precondition(format!("pair ({x}, {y}) has a forbidden endpoint")));
        }
        endpoints |= bit(x) | bit(y);
    }
    let mut blocked = forbidden | endpoints;
    let mut used_edges = vec![0u64; d.n()];
    let mut out = Vec::with_capacity(pairs.len());
    for &(x, y) in pairs {
        let p = bfs_path(d, x, y, blocked, &used_edges, max_len)
            .ok_or_else(|| Error::Infeasible(format!("no path from {x} to {y} within {max_len} edges")))?;
        for &v in p.interior() {
            blocked |= bit(v);
        }
        for (u, v) in p.edges() {
            used_edges[u] |= bit(v);
        }
        out.push(p);
    }
    Ok(out)
}

/// Shortest `(x, y)`-path whose interior avoids `blocked` and which uses no edge in `used`.
pub(crate) fn bfs_path(d: &Digraph, x: usize, y: usize, blocked: u64, used: &[u64], max_len: usize) -> Option<Path> {
    if max_len == 0 {
        return None;
    }
    let n = d.n();
    let mut prev = vec![usize::MAX; n];
    let mut dist = vec![usize::MAX; n];
    dist[x] = 0;
    let mut queue = std::collections::VecDeque::from([x]);
    while let Some(u) = queue.pop_front() {
        if dist[u] >= max_len {
            continue;
        }
        for v in bits(d.out_mask(u) & !used[u]) {
            if v == y {
                let mut seq = vec![y, u];
                let mut w = u;
                while w != x {
                    w = prev[w];
                    seq.push(w);
                }
                seq.reverse();
                return Some(Path::new(seq));
            }
            if blocked & bit(v) != 0 || dist[v] != usize::MAX || v == x {
                continue;
            }
            dist[v] = dist[u] + 1;
            prev[v] = u;
            queue.push_back(v);
        }
    }
    None
}

/// Strong connectivity of the subdigraph induced on `within`.
pub fn strongly_connected_on(d: &Digraph, within: u64) -> bool {
    let Some(s) = bits(within).next() else {
        return true;
    };
    let reach = |forward: bool| {
        let mut seen = bit(s);
        let mut frontier = bit(s);
        while frontier != 0 {
            let mut next = 0;
            for u in bits(frontier) {
                next |= if forward { d.out_mask(u) } else { d.in_mask(u) };
            }
            next &= within & !seen;
            seen |= next;
            frontier = next;
        }
        seen
    };
    reach(true) == within && reach(false) == within
}

/// A directed cycle as its vertex sequence; the closing edge goes from the last vertex to the first.
pub type Cycle = Vec<usize>;

/// Checks that the cycles are edge-disjoint Hamilton cycles covering every edge of `d` once.
pub fn validate_hamilton_decomposition(d: &Digraph, cycles: &[Cycle]) -> bool {
    let mut used = vec![0u64; d.n()];
    for c in cycles {
        if c.len() != d.n() || d.n() < 2 {
            return false;
        }
        if crate::digraph::mask_of(c) != d.vertex_mask() {
            return false;
        }
        for i in 0..c.len() {
            let (u, v) = (c[i], c[(i + 1) % c.len()]);
            if !d.has_edge(u, v) || used[u] & bit(v) != 0 {
                return false;
            }
            used[u] |= bit(v);
        }
    }
    (0..d.n()).all(|u| used[u] == d.out_mask(u))
}

/// Decomposes an `r`-regular digraph into `r` Hamilton cycles, with the default cap and budget.
pub fn hamilton_decomposition(d: &Digraph) -> Result<SearchOutcome<Vec<Cycle>>> {
    hamilton_decomposition_with(d, DEFAULT_HAMILTON_DECOMPOSITION_CAP, &mut Budget::default())
}

pub fn hamilton_decomposition_with(d: &Digraph, cap: usize, budget: &mut Budget) -> Result<SearchOutcome<Vec<Cycle>>> {
    if d.n() > cap {
        return Err(Error::CapExceeded { what: "Hamilton decomposition order", got: d.n(), cap });
    }
    let r = d.regularity().ok_or_else(|| Error::Precondition("Hamilton decomposition needs a regular digraph".into()))?;
    if r == 0 {
        return Ok(SearchOutcome::Found(Vec::new()));
    }
    if d.n() < 2 {
        return Ok(SearchOutcome::Absent);
    }
    let mut cycles = Vec::with_capacity(r);
    Ok(match decompose_rec(d, &mut cycles, budget) {
        Step::Stopped => SearchOutcome::Found(cycles),
        Step::Exhausted => SearchOutcome::Absent,
        Step::OutOfBudget => SearchOutcome::Timeout,
    })
}

fn single_cycle(d: &Digraph) -> Option<Cycle> {
    let n = d.n();
    let mut seq = Vec::with_capacity(n);
    let mut cur = 0;
    for _ in 0..n {
        seq.push(cur);
        let out = d.out_mask(cur);
        if out.count_ones() != 1 {
            return None;
        }
        cur = out.trailing_zeros() as usize;
    }
    (cur == 0 && crate::digraph::mask_of(&seq) == d.vertex_mask()).then_some(seq)
}

fn decompose_rec(d: &Digraph, cycles: &mut Vec<Cycle>, budget: &mut Budget) -> Step {
    if d.is_empty() {
        return Step::Stopped;
    }
    if d.out_degree(0) == 1 {
        if !budget.tick() {
            return Step::OutOfBudget;
        }
        return match single_cycle(d) {
            Some(c) => {
                cycles.push(c);
                Step::Stopped
            }
            None => Step::Exhausted,
        };
    }
    // Cycles are unordered: the next one uses the smallest remaining out-edge of vertex 0.
    let w0 = d.out_mask(0).trailing_zeros() as usize;
    let mut search = SpanningSearch::cycle(d, d.vertex_mask(), 0);
    search.force(0, w0);
    let outcome = search.run(0, budget, &mut |p, budget| {
        let mut rest = d.clone();
        for i in 0..p.len() {
            rest.remove_edge(p[i], p[(i + 1) % p.len()]);
        }
        if !strongly_connected_on(&rest, rest.vertex_mask()) {
            return Visit::Continue;
        }
        cycles.push(p.to_vec());
        match decompose_rec(&rest, cycles, budget) {
            Step::Stopped => Visit::Stop,
            Step::Exhausted => {
                cycles.pop();
                Visit::Continue
            }
            Step::OutOfBudget => {
                cycles.pop();
                Visit::Timeout
            }
        }
    });
    match outcome {
        SearchOutcome::Found(()) => Step::Stopped,
        SearchOutcome::Absent => Step::Exhausted,
        SearchOutcome::Timeout => Step::OutOfBudget,
    }
}
