//! Bipartite matchings under Hall-type degree conditions and matching
//! decompositions of simple graphs by Vizing's theorem.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::expander::Rational;

/// Bipartite graph with classes `A = 0..a` and `B = 0..b`; `adj[i]` lists the
/// `B`-neighbours of `i in A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    a: usize,
    b: usize,
    adj: Vec<Vec<usize>>,
}

/// Pairs `(a, b)` of matched vertices, sorted by `a`.
pub type Matching = Vec<(usize, usize)>;

impl BipartiteGraph {
    pub fn new(a: usize, b: usize) -> Self {
        BipartiteGraph { a, b, adj: vec![Vec::new(); a] }
    }

    pub fn from_edges(a: usize, b: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::new(a, b);
        for &(x, y) in edges {
            g.add_edge(x, y)?;
        }
        Ok(g)
    }

    pub fn complete(a: usize, b: usize) -> Self {
        BipartiteGraph { a, b, adj: vec![(0..b).collect(); a] }
    }

    pub fn add_edge(&mut self, x: usize, y: usize) -> Result<()> {
        if x >= self.a || y >= self.b {
            return Err(Error::InvalidArgument(format!("edge ({x}, {y}) outside classes of sizes {} and {}", self.a, self.b)));
        }
        if !self.adj[x].contains(&y) {
            self.adj[x].push(y);
            self.adj[x].sort_unstable();
        }
        Ok(())
    }

    pub fn size_a(&self) -> usize {
        self.a
    }

    pub fn size_b(&self) -> usize {
        self.b
    }

    pub fn neighbours(&self, x: usize) -> &[usize] {
        &self.adj[x]
    }

    pub fn degree_a(&self, x: usize) -> usize {
        self.adj[x].len()
    }

    pub fn degrees_b(&self) -> Vec<usize> {
        let mut d = vec![0; self.b];
        for ys in &self.adj {
            for &y in ys {
                d[y] += 1;
            }
        }
        d
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    /// `|A| <= |B|`, `d(a) >= |B|/2` for all `a`, and `d(b) >= |A| - |B|/2` for all `b`.
    pub fn satisfies_hall_degrees(&self) -> bool {
        self.a <= self.b
            && (0..self.a).all(|x| 2 * self.degree_a(x) >= self.b)
            && self.degrees_b().into_iter().all(|d| 2 * d + self.b >= 2 * self.a)
    }
}

/// Maximum matching by repeated phases of shortest augmenting paths (Hopcroft-Karp).
pub fn maximum_matching(g: &BipartiteGraph) -> Matching {
    const FREE: usize = usize::MAX;
    let (na, nb) = (g.a, g.b);
    let mut mate_a = vec![FREE; na];
    let mut mate_b = vec![FREE; nb];
    let mut dist = vec![0usize; na];
    loop {
        // Layer the free A-vertices and everything reachable by alternating paths.
        let mut queue = VecDeque::new();
        for x in 0..na {
            if mate_a[x] == FREE {
                dist[x] = 0;
                queue.push_back(x);
            } else {
                dist[x] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(x) = queue.pop_front() {
            for &y in &g.adj[x] {
                match mate_b[y] {
                    FREE => found = true,
                    x2 if dist[x2] == usize::MAX => {
                        dist[x2] = dist[x] + 1;
                        queue.push_back(x2);
                    }
                    _ => {}
                }
            }
        }
        if !found {
            break;
        }
        for x in 0..na {
            if mate_a[x] == FREE {
                augment(g, x, &mut mate_a, &mut mate_b, &mut dist);
            }
        }
    }
    (0..na).filter(|&x| mate_a[x] != FREE).map(|x| (x, mate_a[x])).collect()
}

fn augment(g: &BipartiteGraph, x: usize, mate_a: &mut [usize], mate_b: &mut [usize], dist: &mut [usize]) -> bool {
    for &y in &g.adj[x] {
        let next = mate_b[y];
        let ok = next == usize::MAX || (dist[next] == dist[x] + 1 && augment(g, next, mate_a, mate_b, dist));
        if ok {
            mate_a[x] = y;
            mate_b[y] = x;
            return true;
        }
    }
    dist[x] = usize::MAX;
    false
}

/// A matching covering `A`, if one exists.
pub fn matching_cover(g: &BipartiteGraph) -> Option<Matching> {
    let m = maximum_matching(g);
    (m.len() == g.a).then_some(m)
}

/// Maximum matching of a graph whose classes have size `(1 ± eps) n` and whose degrees are
/// `(delta ± eps) n`. Errors if these hypotheses fail, or if the matching is smaller than
/// `(1 - 3 eps / delta) n`.
pub fn near_perfect_matching(g: &BipartiteGraph, delta: Rational, eps: Rational, n: usize) -> Result<Matching> {
    let zero = Rational::from_integer(0);
    if delta <= zero || eps < zero {
        return Err(Error::InvalidArgument(format!("need delta > 0 and eps >= 0, got {delta} and {eps}")));
    }
    let nn = Rational::from_integer(n as i64);
    let within = |x: usize, centre: Rational| {
        let x = Rational::from_integer(x as i64);
        x >= (centre - eps) * nn && x <= (centre + eps) * nn
    };
    let one = Rational::from_integer(1);
    if !within(g.a, one) || !within(g.b, one) {
        return Err(Error::Precondition(format!("class sizes {} and {} are not (1 ± {eps})·{n}", g.a, g.b)));
    }
    let degrees_ok = (0..g.a).all(|x| within(g.degree_a(x), delta)) && g.degrees_b().into_iter().all(|d| within(d, delta));
    if !degrees_ok {
        return Err(Error::Precondition(format!("some degree is not ({delta} ± {eps})·{n}")));
    }
    let m = maximum_matching(g);
    let bound = (one - Rational::from_integer(3) * eps / delta) * nn;
    if Rational::from_integer(m.len() as i64) < bound {
        return Err(Error::Infeasible(format!("maximum matching has size {} below {bound}", m.len())));
    }
    Ok(m)
}

/// Proper edge colouring of a simple graph on `0..n` with at most `Δ + 1` colours
/// (Misra-Gries fan rotation with alternating-path inversion), returned as the
/// non-empty colour classes.
pub fn vizing_matchings(n: usize, edges: &[(usize, usize)]) -> Result<Vec<Vec<(usize, usize)>>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        if u >= n || v >= n || u == v {
            return Err(Error::InvalidArgument(format!("bad edge ({u}, {v}) for n = {n}")));
        }
        if adj[u].contains(&v) {
            return Err(Error::InvalidArgument(format!("repeated edge ({u}, {v})")));
        }
        adj[u].push(v);
        adj[v].push(u);
    }
    let max_deg = adj.iter().map(Vec::len).max().unwrap_or(0);
    let mut col = EdgeColouring::new(n, max_deg + 1);
    for &(u, v) in edges {
        col.colour_edge(&adj, u, v);
    }
    let mut classes = vec![Vec::new(); max_deg + 1];
    for &(u, v) in edges {
        let c = col.get(u, v).expect("every edge is coloured");
        classes[c].push((u.min(v), u.max(v)));
    }
    classes.retain(|c| !c.is_empty());
    Ok(classes)
}

struct EdgeColouring {
    colours: usize,
    /// `at[x][c]` is the neighbour joined to `x` by an edge of colour `c`.
    at: Vec<Vec<Option<usize>>>,
    /// Colour of edge `{x, y}`, stored at both ends.
    of: Vec<std::collections::HashMap<usize, usize>>,
}

impl EdgeColouring {
    fn new(n: usize, colours: usize) -> Self {
        EdgeColouring { colours, at: vec![vec![None; colours]; n], of: vec![Default::default(); n] }
    }

    fn get(&self, x: usize, y: usize) -> Option<usize> {
        self.of[x].get(&y).copied()
    }

    fn is_free(&self, x: usize, c: usize) -> bool {
        self.at[x][c].is_none()
    }

    fn free_colour(&self, x: usize) -> usize {
        (0..self.colours).find(|&c| self.is_free(x, c)).expect("a vertex of degree at most Δ misses a colour")
    }

    fn set(&mut self, x: usize, y: usize, c: usize) {
        self.at[x][c] = Some(y);
        self.at[y][c] = Some(x);
        self.of[x].insert(y, c);
        self.of[y].insert(x, c);
    }

    fn clear(&mut self, x: usize, y: usize) {
        if let Some(c) = self.of[x].remove(&y) {
            self.of[y].remove(&x);
            self.at[x][c] = None;
            self.at[y][c] = None;
        }
    }

    fn colour_edge(&mut self, adj: &[Vec<usize>], u: usize, v: usize) {
        // Maximal fan at u starting with v.
        let mut fan = vec![v];
        loop {
            let last = *fan.last().expect("non-empty fan");
            let next = adj[u].iter().copied().find(|&w| !fan.contains(&w) && self.get(u, w).is_some_and(|c| self.is_free(last, c)));
            match next {
                Some(w) => fan.push(w),
                None => break,
            }
        }
        let c = self.free_colour(u);
        let d = self.free_colour(*fan.last().expect("non-empty fan"));
        self.invert_path(u, c, d);
        // Longest prefix that is still a fan and ends at a vertex where d is free.
        let mut j = 0;
        for i in 0..fan.len() {
            if i > 0 {
                let ci = self.get(u, fan[i]).expect("fan edges beyond the first are coloured");
                if !self.is_free(fan[i - 1], ci) {
                    break;
                }
            }
            if self.is_free(fan[i], d) {
                j = i;
                break;
            }
        }
        for i in 0..j {
            let next_colour = self.get(u, fan[i + 1]).expect("coloured fan edge");
            self.clear(u, fan[i + 1]);
            self.clear(u, fan[i]);
            self.set(u, fan[i], next_colour);
        }
        self.clear(u, fan[j]);
        self.set(u, fan[j], d);
    }

    /// Swaps colours `c` and `d` along the maximal path from `u` whose edges alternate `d, c, d, ...`.
    fn invert_path(&mut self, u: usize, c: usize, d: usize) {
        if c == d {
            return;
        }
        let mut path_edges = Vec::new();
        let mut x = u;
        let mut want = d;
        while let Some(y) = self.at[x][want] {
            path_edges.push((x, y, want));
            x = y;
            want = if want == d { c } else { d };
        }
        for &(x, y, _) in &path_edges {
            self.clear(x, y);
        }
        for &(x, y, k) in &path_edges {
            self.set(x, y, if k == d { c } else { d });
        }
    }
}

/// Checks that the classes are matchings that partition `edges` (as undirected pairs).
pub fn is_matching_decomposition(n: usize, edges: &[(usize, usize)], classes: &[Vec<(usize, usize)>]) -> bool {
    let mut want: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    want.sort_unstable();
    let mut got = Vec::new();
    for m in classes {
        let mut seen = vec![false; n];
        for &(u, v) in m {
            if u >= n || v >= n || seen[u] || seen[v] {
                return false;
            }
            seen[u] = true;
            seen[v] = true;
            got.push((u.min(v), u.max(v)));
        }
    }
    got.sort_unstable();
    got == want
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covers() {
        assert_eq!(matching_cover(&BipartiteGraph::complete(2, 3)).map(|m| m.len()), Some(2));
        let g = BipartiteGraph::from_edges(2, 1, &[(0, 0)]).unwrap();
        assert_eq!(matching_cover(&g), None);
    }

    #[test]
    fn near_perfect() {
        let g = BipartiteGraph::complete(5, 5);
        let one = Rational::from_integer(1);
        let zero = Rational::from_integer(0);
        assert_eq!(near_perfect_matching(&g, one, zero, 5).unwrap().len(), 5);
        let sparse = BipartiteGraph::from_edges(5, 5, &[(0, 0)]).unwrap();
        assert!(matches!(near_perfect_matching(&sparse, one, zero, 5), Err(Error::Precondition(_))));
    }

    #[test]
    fn vizing_small() {
        let tri = [(0, 1), (1, 2), (0, 2)];
        let m = vizing_matchings(3, &tri).unwrap();
        assert_eq!(m.len(), 3);
        assert!(is_matching_decomposition(3, &tri, &m));
        let p3 = [(0, 1), (1, 2), (2, 3)];
        let m = vizing_matchings(4, &p3).unwrap();
        assert!(m.len() <= 3);
        assert!(is_matching_decomposition(4, &p3, &m));
        let k4: Vec<(usize, usize)> = crate::digraph::pairs(4).collect();
        let m = vizing_matchings(4, &k4).unwrap();
        assert!(m.len() <= 4);
        assert!(is_matching_decomposition(4, &k4, &m));
    }
}
