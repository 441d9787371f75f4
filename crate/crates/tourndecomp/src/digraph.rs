//! Digraphs on dense vertex ids `0..n`, paths, path decompositions, generators,
//! tournament enumeration and the text/hex formats.
//!
//! Adjacency is stored as one `u64` bitmask per vertex and direction, so a
//! digraph has at most [`MAX_VERTICES`] vertices.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 64;

/// Default cap on `n` for exhaustive tournament enumeration (2^21 instances at n = 7).
pub const DEFAULT_ENUMERATION_CAP: usize = 7;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    out: Vec<u64>,
    inn: Vec<u64>,
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digraph(n={}, edges={:?})", self.n, self.edges().collect::<Vec<_>>())
    }
}

#[inline]
pub(crate) fn bit(v: usize) -> u64 {
    1u64 << v
}

/// Iterates the set bits of a mask in increasing order.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

pub fn mask_of(vertices: &[usize]) -> u64 {
    vertices.iter().fold(0, |m, &v| m | bit(v))
}

impl Digraph {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices { n, max: MAX_VERTICES });
        }
        Ok(Digraph { n, out: vec![0; n], inn: vec![0; n] })
    }

    /// Panicking constructor for internal use where `n` is known to be in range.
    pub(crate) fn empty(n: usize) -> Self {
        Self::new(n).expect("vertex count within range")
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut d = Self::new(n)?;
        for &(u, v) in edges {
            d.try_add_edge(u, v)?;
        }
        Ok(d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    pub fn try_add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::Loop(u));
        }
        self.out[u] |= bit(v);
        self.inn[v] |= bit(u);
        Ok(())
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.try_add_edge(u, v).expect("valid edge");
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.out[u] &= !bit(v);
        self.inn[v] &= !bit(u);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.out[u] & bit(v) != 0
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    pub fn out_mask(&self, v: usize) -> u64 {
        self.out[v]
    }

    pub fn in_mask(&self, v: usize) -> u64 {
        self.inn[v]
    }

    pub fn out_neighbours(&self, v: usize) -> impl Iterator<Item = usize> {
        bits(self.out[v])
    }

    pub fn in_neighbours(&self, v: usize) -> impl Iterator<Item = usize> {
        bits(self.inn[v])
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].count_ones() as usize
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.inn[v].count_ones() as usize
    }

    pub fn degree(&self, v: usize) -> usize {
        self.out_degree(v) + self.in_degree(v)
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(|m| m.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.out.iter().all(|&m| m == 0)
    }

    /// Edges in lexicographic (tail, head) order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| bits(self.out[u]).map(move |v| (u, v)))
    }

    /// No pair of vertices joined in both directions.
    pub fn is_oriented(&self) -> bool {
        (0..self.n).all(|u| self.out[u] & self.inn[u] == 0)
    }

    /// Exactly one edge between every pair of distinct vertices.
    pub fn is_tournament(&self) -> bool {
        let all = self.vertex_mask();
        (0..self.n).all(|u| self.out[u] & self.inn[u] == 0 && (self.out[u] | self.inn[u]) == all & !bit(u))
    }

    /// Every vertex has in- and outdegree equal to the same `r`.
    pub fn regularity(&self) -> Option<usize> {
        let r = if self.n == 0 { 0 } else { self.out_degree(0) };
        (0..self.n).all(|v| self.out_degree(v) == r && self.in_degree(v) == r).then_some(r)
    }

    pub fn max_semidegree(&self) -> usize {
        (0..self.n).map(|v| self.out_degree(v).max(self.in_degree(v))).max().unwrap_or(0)
    }

    pub fn min_semidegree(&self) -> usize {
        (0..self.n).map(|v| self.out_degree(v).min(self.in_degree(v))).min().unwrap_or(0)
    }

    /// Subdigraph induced on `vertices`, relabelled to `0..vertices.len()` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Digraph {
        let mut d = Digraph::empty(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate() {
                if self.has_edge(u, v) {
                    d.add_edge(i, j);
                }
            }
        }
        d
    }

    /// Copy with every edge `(u, v)` mapped to `(perm[u], perm[v])`.
    pub fn relabel(&self, perm: &[usize]) -> Digraph {
        let mut d = Digraph::empty(self.n);
        for (u, v) in self.edges() {
            d.add_edge(perm[u], perm[v]);
        }
        d
    }

    /// Copy with the edges of every path removed.
    pub fn without_paths(&self, paths: &[Path]) -> Digraph {
        let mut d = self.clone();
        for p in paths {
            for (u, v) in p.edges() {
                d.remove_edge(u, v);
            }
        }
        d
    }

    /// Undirected edges `{u, v}` (with `u < v`) of the underlying simple graph.
    pub fn shadow_edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = self.edges().map(|(u, v)| (u.min(v), u.max(v))).collect();
        e.sort_unstable();
        e.dedup();
        e
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for u in 0..self.n {
            let row: Vec<&str> = (0..self.n).map(|v| if self.has_edge(u, v) { "1" } else { "0" }).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    /// Parses the text format: first line `n`, then `n` rows of a 0/1 matrix.
    /// Entries may be separated by whitespace or written contiguously.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let first = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
        let n: usize = first.parse().map_err(|_| Error::Parse(format!("bad vertex count {first:?}")))?;
        let mut d = Digraph::new(n)?;
        for u in 0..n {
            let line = lines.next().ok_or_else(|| Error::Parse(format!("missing row {u}")))?;
            let entries: Vec<char> = line.chars().filter(|c| !c.is_whitespace()).collect();
            if entries.len() != n {
                return Err(Error::Parse(format!("row {u} has {} entries, expected {n}", entries.len())));
            }
            for (v, c) in entries.into_iter().enumerate() {
                match c {
                    '0' => {}
                    '1' if u == v => return Err(Error::Parse(format!("nonzero diagonal entry at {u}"))),
                    '1' => d.add_edge(u, v),
                    other => return Err(Error::Parse(format!("bad matrix entry {other:?} in row {u}"))),
                }
            }
        }
        if lines.next().is_some() {
            return Err(Error::Parse("trailing rows after the matrix".into()));
        }
        Ok(d)
    }
}

/// Number of unordered pairs, i.e. bits in the compact tournament encoding.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Upper-triangle pairs `(i, j)`, `i < j`, in row-major order.
pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

/// Upper-triangle bit string of a tournament: bit `k` is 1 iff the `k`-th pair `(i, j)` has `i -> j`.
pub fn tournament_bits(t: &Digraph) -> Result<Vec<bool>> {
    if !t.is_tournament() {
        return Err(Error::NotTournament);
    }
    Ok(pairs(t.n()).map(|(i, j)| t.has_edge(i, j)).collect())
}

pub fn tournament_from_bits(n: usize, bits: &[bool]) -> Result<Digraph> {
    if bits.len() != pair_count(n) {
        return Err(Error::Parse(format!("expected {} bits for n = {n}, got {}", pair_count(n), bits.len())));
    }
    let mut d = Digraph::new(n)?;
    for ((i, j), &b) in pairs(n).zip(bits) {
        if b {
            d.add_edge(i, j);
        } else {
            d.add_edge(j, i);
        }
    }
    Ok(d)
}

/// Hex serialization of the bit string: the first bit is the most significant bit
/// of the first hex digit; the string is zero-padded on the right to whole digits.
pub fn bits_to_hex(bits: &[bool]) -> String {
    bits.chunks(4)
        .map(|chunk| {
            let v = chunk.iter().enumerate().fold(0u32, |acc, (k, &b)| acc | ((b as u32) << (3 - k)));
            char::from_digit(v, 16).expect("nibble")
        })
        .collect()
}

pub fn hex_to_bits(hex: &str, len: usize) -> Result<Vec<bool>> {
    if hex.len() != len.div_ceil(4) {
        return Err(Error::Parse(format!("expected {} hex digits, got {}", len.div_ceil(4), hex.len())));
    }
    let mut out = Vec::with_capacity(hex.len() * 4);
    for c in hex.chars() {
        let v = c.to_digit(16).ok_or_else(|| Error::Parse(format!("bad hex digit {c:?}")))?;
        out.extend((0..4).map(|k| v & (1 << (3 - k)) != 0));
    }
    if out[len..].iter().any(|&b| b) {
        return Err(Error::Parse("nonzero padding bits".into()));
    }
    out.truncate(len);
    Ok(out)
}

pub fn encode_tournament(t: &Digraph) -> Result<String> {
    tournament_bits(t).map(|b| bits_to_hex(&b))
}

pub fn decode_tournament(n: usize, hex: &str) -> Result<Digraph> {
    tournament_from_bits(n, &hex_to_bits(hex, pair_count(n))?)
}

/// Tournament whose pair `k` is oriented forwards iff bit `k` of `code` is set.
pub fn tournament_from_code(n: usize, code: u64) -> Digraph {
    let mut d = Digraph::empty(n);
    for (k, (i, j)) in pairs(n).enumerate() {
        if code >> k & 1 == 1 {
            d.add_edge(i, j);
        } else {
            d.add_edge(j, i);
        }
    }
    d
}

/// Iterator over all `2^(n choose 2)` labeled tournaments on `n` vertices.
pub struct TournamentIter {
    n: usize,
    next: u64,
    end: u64,
}

impl Iterator for TournamentIter {
    type Item = Digraph;

    fn next(&mut self) -> Option<Digraph> {
        if self.next >= self.end {
            return None;
        }
        let t = tournament_from_code(self.n, self.next);
        self.next += 1;
        Some(t)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for TournamentIter {}

pub fn enumerate_tournaments(n: usize) -> Result<TournamentIter> {
    enumerate_tournaments_with_cap(n, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_tournaments_with_cap(n: usize, cap: usize) -> Result<TournamentIter> {
    if n > cap || pair_count(n) >= 64 {
        return Err(Error::CapExceeded { what: "tournament order", got: n, cap });
    }
    Ok(TournamentIter { n, next: 0, end: 1u64 << pair_count(n) })
}

/// Lexicographically smallest upper-triangle bit string over all relabelings
/// (brute force over `n!` permutations, `n <= 7`).
pub fn canonical_tournament_bits(t: &Digraph) -> Result<Vec<bool>> {
    if t.n() > DEFAULT_ENUMERATION_CAP {
        return Err(Error::CapExceeded { what: "canonical form order", got: t.n(), cap: DEFAULT_ENUMERATION_CAP });
    }
    let mut perm: Vec<usize> = (0..t.n()).collect();
    let mut best = tournament_bits(t)?;
    for_each_permutation(&mut perm, 0, &mut |p| {
        let cand = tournament_bits(&t.relabel(p)).expect("relabelled tournament");
        if cand < best {
            best = cand;
        }
    });
    Ok(best)
}

fn for_each_permutation(perm: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == perm.len() {
        f(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        for_each_permutation(perm, k + 1, f);
        perm.swap(k, i);
    }
}

/// Representatives of the isomorphism classes of tournaments on `n <= 7` vertices,
/// as the minimal codes found by [`canonical_tournament_bits`].
pub fn enumerate_tournaments_canonical(n: usize) -> Result<Vec<Digraph>> {
    let mut seen = std::collections::BTreeSet::new();
    for t in enumerate_tournaments(n)? {
        seen.insert(canonical_tournament_bits(&t)?);
    }
    seen.into_iter().map(|b| tournament_from_bits(n, &b)).collect()
}

/// A simple directed path given by its vertex sequence. A single vertex is the trivial path.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path(pub Vec<usize>);

impl Path {
    pub fn new(vertices: Vec<usize>) -> Self {
        Path(vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn start(&self) -> usize {
        self.0[0]
    }

    pub fn end(&self) -> usize {
        *self.0.last().expect("paths are non-empty")
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn is_trivial(&self) -> bool {
        self.0.len() <= 1
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn interior(&self) -> &[usize] {
        if self.0.len() <= 2 {
            &[]
        } else {
            &self.0[1..self.0.len() - 1]
        }
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", s.join("->"))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PathDecomposition {
    pub paths: Vec<Path>,
}

impl PathDecomposition {
    pub fn new(paths: Vec<Path>) -> Self {
        PathDecomposition { paths }
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.paths.iter().map(Path::len).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Violation {
    #[error("path {path} is trivial")]
    TrivialPath { path: usize },
    #[error("path {path} uses vertex {vertex} which is out of range")]
    VertexOutOfRange { path: usize, vertex: usize },
    #[error("path {path} repeats vertex {vertex}")]
    RepeatedVertex { path: usize, vertex: usize },
    #[error("path {path} steps along non-edge {from}->{to}")]
    NonEdge { path: usize, from: usize, to: usize },
    #[error("edge {from}->{to} is covered twice (second time by path {path})")]
    DuplicateEdge { path: usize, from: usize, to: usize },
    #[error("edge {from}->{to} is not covered")]
    Uncovered { from: usize, to: usize },
}

/// Checks that every path is a non-trivial simple path of `d` and that the paths cover
/// every edge exactly once. Reports the first violation found.
pub fn validate_decomposition(d: &Digraph, p: &PathDecomposition) -> std::result::Result<(), Violation> {
    validate_paths(d, &p.paths, true)
}

/// Like [`validate_decomposition`], but with `require_cover = false` only edge-disjointness is
/// checked (a partial decomposition).
pub fn validate_paths(d: &Digraph, paths: &[Path], require_cover: bool) -> std::result::Result<(), Violation> {
    let mut used = vec![0u64; d.n()];
    for (i, path) in paths.iter().enumerate() {
        if path.is_trivial() {
            return Err(Violation::TrivialPath { path: i });
        }
        let mut seen = 0u64;
        for &v in path.vertices() {
            if v >= d.n() {
                return Err(Violation::VertexOutOfRange { path: i, vertex: v });
            }
            if seen & bit(v) != 0 {
                return Err(Violation::RepeatedVertex { path: i, vertex: v });
            }
            seen |= bit(v);
        }
        for (u, v) in path.edges() {
            if !d.has_edge(u, v) {
                return Err(Violation::NonEdge { path: i, from: u, to: v });
            }
            if used[u] & bit(v) != 0 {
                return Err(Violation::DuplicateEdge { path: i, from: u, to: v });
            }
            used[u] |= bit(v);
        }
    }
    if require_cover {
        for (u, v) in d.edges() {
            if used[u] & bit(v) == 0 {
                return Err(Violation::Uncovered { from: u, to: v });
            }
        }
    }
    Ok(())
}

/// Rotational regular tournament: `i -> i+1, ..., i+(n-1)/2 (mod n)`.
pub fn gen_regular_tournament(n: usize) -> Result<Digraph> {
    if n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("regular tournaments need odd order, got {n}")));
    }
    let mut d = Digraph::new(n)?;
    for i in 0..n {
        for s in 1..=(n - 1) / 2 {
            d.add_edge(i, (i + s) % n);
        }
    }
    Ok(d)
}

/// Vertex ids of the apex pair in [`gen_apex`]: `v_+ = n-2`, `v_- = n-1`; the inner
/// tournament keeps ids `0..n-2`.
pub fn apex_vertices(n: usize) -> (usize, usize) {
    (n - 2, n - 1)
}

/// Apex tournament: `v_+` beats all of the inner regular tournament, which beats `v_-`,
/// and `v_- -> v_+`.
pub fn gen_apex(n: usize, inner: &Digraph) -> Result<Digraph> {
    if n.is_multiple_of(2) || n < 5 {
        return Err(Error::InvalidArgument(format!("apex tournaments need odd n >= 5, got {n}")));
    }
    if inner.n() != n - 2 || !inner.is_tournament() || inner.regularity().is_none() {
        return Err(Error::InvalidArgument(format!("inner tournament must be a regular tournament on {} vertices", n - 2)));
    }
    let mut d = Digraph::new(n)?;
    for (u, v) in inner.edges() {
        d.add_edge(u, v);
    }
    let (vp, vm) = apex_vertices(n);
    for v in 0..n - 2 {
        d.add_edge(vp, v);
        d.add_edge(v, vm);
    }
    d.add_edge(vm, vp);
    Ok(d)
}

/// `k` rotational regular tournaments on `2m+1` vertices; block `i` occupies ids
/// `i(2m+1)..(i+1)(2m+1)`, with `x_i` its first and `y_i` its second vertex. Each edge
/// `x_i y_i` is replaced by `x_i y_{i+1}` (indices mod `k`).
pub fn gen_chain_counterexample(m: usize, k: usize) -> Result<Digraph> {
    if m < 1 || k < 2 {
        return Err(Error::InvalidArgument(format!("need m >= 1 and k >= 2, got m = {m}, k = {k}")));
    }
    let b = 2 * m + 1;
    let mut d = Digraph::new(k * b)?;
    let block = gen_regular_tournament(b)?;
    for i in 0..k {
        for (u, v) in block.edges() {
            d.add_edge(i * b + u, i * b + v);
        }
    }
    for i in 0..k {
        let x = i * b;
        d.remove_edge(x, x + 1);
        d.add_edge(x, ((i + 1) % k) * b + 1);
    }
    Ok(d)
}

/// Transitive tournament with `i -> j` for all `i < j`.
pub fn transitive_tournament(n: usize) -> Result<Digraph> {
    let mut d = Digraph::new(n)?;
    for (i, j) in pairs(n) {
        d.add_edge(i, j);
    }
    Ok(d)
}

/// Complete digraph: both directions between every pair.
pub fn complete_digraph(n: usize) -> Result<Digraph> {
    let mut d = Digraph::new(n)?;
    for (i, j) in pairs(n) {
        d.add_edge(i, j);
        d.add_edge(j, i);
    }
    Ok(d)
}

/// Directed cycle `0 -> 1 -> ... -> n-1 -> 0`.
pub fn directed_cycle(n: usize) -> Result<Digraph> {
    let mut d = Digraph::new(n)?;
    if n >= 2 {
        for i in 0..n {
            d.add_edge(i, (i + 1) % n);
        }
    }
    Ok(d)
}

pub fn random_tournament<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Digraph {
    let mut d = Digraph::empty(n);
    for (i, j) in pairs(n) {
        if rng.gen_bool(0.5) {
            d.add_edge(i, j);
        } else {
            d.add_edge(j, i);
        }
    }
    d
}

/// Random digraph with each ordered pair present independently with probability `p`.
pub fn random_digraph<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Digraph {
    let mut d = Digraph::empty(n);
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                d.add_edge(u, v);
            }
        }
    }
    d
}

/// Random digraph with exactly `m` distinct edges (capped at `n(n-1)`).
pub fn random_digraph_with_edges<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Digraph {
    let mut all: Vec<(usize, usize)> = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect();
    let m = m.min(all.len());
    for i in 0..m {
        let j = rng.gen_range(i..all.len());
        all.swap(i, j);
    }
    let mut d = Digraph::empty(n);
    for &(u, v) in &all[..m] {
        d.add_edge(u, v);
    }
    d
}

/// Random oriented graph: each pair gets no edge with probability `1 - p`, otherwise one
/// of the two orientations uniformly.
pub fn random_oriented<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Digraph {
    let mut d = Digraph::empty(n);
    for (i, j) in pairs(n) {
        if rng.gen_bool(p) {
            if rng.gen_bool(0.5) {
                d.add_edge(i, j);
            } else {
                d.add_edge(j, i);
            }
        }
    }
    d
}

pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        p.swap(i, j);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c3_validation() {
        let c3 = directed_cycle(3).unwrap();
        let ok = PathDecomposition::new(vec![Path::new(vec![0, 1, 2]), Path::new(vec![2, 0])]);
        assert_eq!(validate_decomposition(&c3, &ok), Ok(()));
        let missing = PathDecomposition::new(vec![Path::new(vec![0, 1]), Path::new(vec![1, 2])]);
        assert_eq!(validate_decomposition(&c3, &missing), Err(Violation::Uncovered { from: 2, to: 0 }));
        let cyc = PathDecomposition::new(vec![Path::new(vec![0, 1, 2, 0])]);
        assert_eq!(validate_decomposition(&c3, &cyc), Err(Violation::RepeatedVertex { path: 0, vertex: 0 }));
    }

    #[test]
    fn hex_round_trip() {
        for n in 0..=5 {
            for t in enumerate_tournaments(n).unwrap() {
                let h = encode_tournament(&t).unwrap();
                assert_eq!(decode_tournament(n, &h).unwrap(), t);
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let d = gen_chain_counterexample(1, 2).unwrap();
        assert_eq!(Digraph::from_text(&d.to_text()).unwrap(), d);
        assert!(Digraph::from_text("2\n1 0\n0 0\n").is_err());
        assert!(Digraph::from_text("2\n0 1\n").is_err());
    }

    #[test]
    fn generators() {
        assert_eq!(gen_regular_tournament(3).unwrap(), directed_cycle(3).unwrap());
        assert!(gen_regular_tournament(4).is_err());
        let c3 = directed_cycle(3).unwrap();
        let apex = gen_apex(5, &c3).unwrap();
        assert!(apex.is_tournament());
        let (vp, vm) = apex_vertices(5);
        assert_eq!((apex.out_degree(vp), apex.in_degree(vp)), (3, 1));
        assert_eq!((apex.out_degree(vm), apex.in_degree(vm)), (1, 3));
        assert!(gen_apex(4, &c3).is_err());
        let chain = gen_chain_counterexample(2, 3).unwrap();
        assert_eq!(chain.n(), 15);
        assert_eq!(chain.regularity(), Some(2));
        assert!(chain.is_oriented());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_tournaments(3).unwrap().count(), 8);
        assert_eq!(enumerate_tournaments(4).unwrap().count(), 64);
        assert_eq!(enumerate_tournaments(5).unwrap().len(), 1024);
        assert!(enumerate_tournaments(8).is_err());
        // Non-isomorphic tournaments on 4 and 5 vertices.
        assert_eq!(enumerate_tournaments_canonical(4).unwrap().len(), 4);
        assert_eq!(enumerate_tournaments_canonical(5).unwrap().len(), 12);
    }
}
