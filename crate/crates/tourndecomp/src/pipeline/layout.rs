//! Layouts: multisets of paths with fixed edges that prescribe the shape of a spanning
//! configuration, and their construction from the auxiliary excess.

use serde::{Deserialize, Serialize};

use crate::digraph::{bit, bits, Path};
use crate::error::{Error, Result};
use crate::expander::Budget;
use crate::matching::{maximum_matching, BipartiteGraph};

use super::state::DecompositionState;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub paths: Vec<Path>,
    pub isolated: Vec<usize>,
    /// Fixed edges as `(path index, edge index)` positions.
    pub fixed: Vec<(usize, usize)>,
}

impl Layout {
    pub fn is_fixed(&self, path: usize, edge: usize) -> bool {
        self.fixed.contains(&(path, edge))
    }

    pub fn vertex_mask(&self) -> u64 {
        let on_paths = self.paths.iter().flat_map(|p| p.vertices()).fold(0, |m, &v| m | bit(v));
        self.isolated.iter().fold(on_paths, |m, &v| m | bit(v))
    }

    pub fn fixed_edges(&self) -> Vec<(usize, usize)> {
        self.fixed.iter().map(|&(p, e)| (self.paths[p].0[e], self.paths[p].0[e + 1])).collect()
    }

    /// Unfixed edges as `(path index, edge index)` positions.
    pub fn unfixed(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, p) in self.paths.iter().enumerate() {
            for e in 0..p.len() {
                if !self.is_fixed(i, e) {
                    out.push((i, e));
                }
            }
        }
        out
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.paths.iter().filter(|p| !p.is_empty() && p.0[..p.0.len() - 1].contains(&v)).count()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.paths.iter().filter(|p| !p.is_empty() && p.0[1..].contains(&v)).count()
    }

    /// (L1) to (L3): simple paths, isolated vertices off the paths, fixed positions in range
    /// and at least one unfixed edge.
    pub fn check(&self) -> Result<()> {
        let mut on_paths = 0u64;
        for (i, p) in self.paths.iter().enumerate() {
            if p.is_empty() {
                return Err(Error::Precondition(format!("layout path {i} is empty")));
            }
            let mut seen = 0u64;
            for &v in p.vertices() {
                if seen & bit(v) != 0 {
                    return Err(Error::Precondition(format!("layout path {i} repeats {v}")));
                }
                seen |= bit(v);
            }
            on_paths |= seen;
        }
        if self.isolated.iter().any(|&v| on_paths & bit(v) != 0) {
            return Err(Error::Precondition("an isolated vertex lies on a layout path".into()));
        }
        if self.fixed.iter().any(|&(p, e)| p >= self.paths.len() || e >= self.paths[p].len()) {
            return Err(Error::Precondition("fixed edge position out of range".into()));
        }
        if self.unfixed().is_empty() {
            return Err(Error::Precondition("layout has no unfixed edge".into()));
        }
        Ok(())
    }

    /// Every edge touching `w` is fixed.
    pub fn is_w_exceptional(&self, w: u64) -> bool {
        self.unfixed().into_iter().all(|(p, e)| {
            let (x, y) = (self.paths[p].0[e], self.paths[p].0[e + 1]);
            w & (bit(x) | bit(y)) == 0
        })
    }
}

/// Contracts `w` out of a `w`-exceptional layout: runs of `w`-vertices between two outside
/// vertices become fixed edges, runs at the ends of a path are deleted, isolated `w`-vertices
/// disappear.
pub fn contract_layout(l: &Layout, w: u64) -> Layout {
    let mut out = Layout::default();
    let mut singles = Vec::new();
    for (i, p) in l.paths.iter().enumerate() {
        let seq = p.vertices();
        let kept: Vec<usize> = (0..seq.len()).filter(|&j| w & bit(seq[j]) == 0).collect();
        match kept.len() {
            0 => continue,
            1 => {
                singles.push(seq[kept[0]]);
                continue;
            }
            _ => {}
        }
        let idx = out.paths.len();
        let mut verts = vec![seq[kept[0]]];
        for (k, pair) in kept.windows(2).enumerate() {
            let (a, b) = (pair[0], pair[1]);
            verts.push(seq[b]);
            if b > a + 1 || l.is_fixed(i, a) {
                out.fixed.push((idx, k));
            }
        }
        out.paths.push(Path::new(verts));
    }
    let on_paths = out.vertex_mask();
    let mut iso: Vec<usize> = l.isolated.iter().copied().chain(singles).filter(|&v| w & bit(v) == 0 && on_paths & bit(v) == 0).collect();
    iso.sort_unstable();
    iso.dedup();
    out.isolated = iso;
    out
}

/// Pairs every start slot (`plus[v]` copies of `v`) with an end slot (`minus[v]` copies)
/// so that no pair has equal coordinates.
pub fn choose_endpoint_multiset(plus: &[usize], minus: &[usize]) -> Result<Vec<(usize, usize)>> {
    let s: usize = plus.iter().sum();
    if s != minus.iter().sum::<usize>() {
        return Err(Error::InvalidArgument("start and end multiplicities have different totals".into()));
    }
    if s == 1 {
        return Err(Error::InvalidArgument("a single endpoint pair is not supported".into()));
    }
    if let Some(v) = (0..plus.len()).find(|&v| plus[v] + minus[v] > s) {
        return Err(Error::Infeasible(format!("vertex {v} would have to be paired with itself")));
    }
    let (mut p, mut m) = (plus.to_vec(), minus.to_vec());
    let mut pairs = Vec::with_capacity(s);
    // Serving the vertex with the most outstanding slots first keeps plus + minus <= remaining.
    for _ in 0..s {
        let a = (0..p.len()).filter(|&v| p[v] > 0).max_by_key(|&v| (p[v] + m[v], std::cmp::Reverse(v)));
        let Some(a) = a else { break };
        let b = (0..m.len()).filter(|&v| m[v] > 0 && v != a).max_by_key(|&v| (p[v] + m[v], std::cmp::Reverse(v)));
        let Some(b) = b else { break };
        p[a] -= 1;
        m[b] -= 1;
        pairs.push((a, b));
    }
    if pairs.len() == s {
        pairs.sort_unstable();
        return Ok(pairs);
    }
    let starts: Vec<usize> = (0..plus.len()).flat_map(|v| std::iter::repeat_n(v, plus[v])).collect();
    let ends: Vec<usize> = (0..minus.len()).flat_map(|v| std::iter::repeat_n(v, minus[v])).collect();
    let mut g = BipartiteGraph::new(s, s);
    for (i, &a) in starts.iter().enumerate() {
        for (j, &b) in ends.iter().enumerate() {
            if a != b {
                g.add_edge(i, j)?;
            }
        }
    }
    let mm = maximum_matching(&g);
    if mm.len() < s {
        return Err(Error::Infeasible("no endpoint pairing avoids self-pairs".into()));
    }
    let mut pairs: Vec<(usize, usize)> = mm.into_iter().map(|(i, j)| (starts[i], ends[j])).collect();
    pairs.sort_unstable();
    Ok(pairs)
}

/// Per-vertex quantities the layouts are built from.
#[derive(Clone, Debug)]
pub struct LayoutTargets {
    pub x_plus: u64,
    pub x_minus: u64,
    pub hexc_plus: Vec<usize>,
    pub hexc_minus: Vec<usize>,
}

impl LayoutTargets {
    /// `hexc^± = texc_aux^± - φ^±`, with `φ^±` the indicator of `X^±`.
    pub fn new(state: &DecompositionState, x_plus: u64, x_minus: u64) -> Result<Self> {
        let n = state.n();
        let mut hp = vec![0; n];
        let mut hm = vec![0; n];
        for v in 0..n {
            let (p, m) = state.auxiliary_excess(v);
            let fp = (x_plus & bit(v) != 0) as usize;
            let fm = (x_minus & bit(v) != 0) as usize;
            if p < fp || m < fm {
                return Err(Error::Precondition(format!("vertex {v} is in X but has no auxiliary excess left")));
            }
            hp[v] = p - fp;
            hm[v] = m - fm;
        }
        Ok(LayoutTargets { x_plus, x_minus, hexc_plus: hp, hexc_minus: hm })
    }

    pub fn s(&self) -> usize {
        self.hexc_plus.iter().sum()
    }
}

/// Chooses `X^±`: `r - |A^±|` vertices of `(U^±(D) ∪ U*) \ W` with remaining auxiliary
/// excess, avoiding the absorbing edges on the same side; larger excess first.
pub fn choose_x_sets(state: &DecompositionState) -> Result<(u64, u64)> {
    let n = state.n();
    let exc: Vec<i64> = (0..n).map(|v| crate::excess::vertex_excess(&state.remaining, v)).collect();
    let pick = |need: usize, sign: i64, avoid: u64| -> Result<u64> {
        let mut cands: Vec<usize> = (0..n)
            .filter(|&v| state.w & bit(v) == 0 && avoid & bit(v) == 0)
            .filter(|&v| exc[v] * sign > 0 || state.u_star & bit(v) != 0)
            .collect();
        cands.sort_by_key(|&v| (std::cmp::Reverse(exc[v] * sign), v));
        if cands.len() < need {
            return Err(Error::Infeasible(format!("only {} candidates for an X set of size {need}", cands.len())));
        }
        Ok(cands[..need].iter().fold(0, |m, &v| m | bit(v)))
    };
    let r = state.r;
    let (ap, am) = (state.a.a_plus.len(), state.a.a_minus.len());
    if ap > r || am > r {
        return Err(Error::Precondition("more absorbing edges than r".into()));
    }
    Ok((pick(r - ap, 1, state.a.plus_heads())?, pick(r - am, -1, state.a.minus_tails())?))
}

#[derive(Clone, Debug)]
struct Proto {
    seq: Vec<usize>,
    fixed: Vec<bool>,
}

impl Proto {
    fn mask(&self) -> u64 {
        self.seq.iter().fold(0, |m, &v| m | bit(v))
    }

    fn has_unfixed(&self) -> bool {
        self.fixed.iter().any(|f| !f)
    }
}

/// Degree target of a non-exceptional vertex: how many configurations must pass through it.
/// Identity: `d^±(v) = d_L^±(v) + #{i : v ∉ V(L_i)} + r - φ^∓(v)`.
fn pass_count(state: &DecompositionState, t: &LayoutTargets, v: usize, dl_out: usize, dl_in: usize) -> Result<usize> {
    let d = &state.remaining;
    let r = state.r as i64;
    let out = d.out_degree(v) as i64 - dl_out as i64 - r + (t.x_minus & bit(v) != 0) as i64;
    let inn = d.in_degree(v) as i64 - dl_in as i64 - r + (t.x_plus & bit(v) != 0) as i64;
    if out != inn {
        return Err(Error::Precondition(format!("degree identity is inconsistent at {v}: {out} vs {inn}")));
    }
    if out < 0 {
        return Err(Error::Infeasible(format!("vertex {v} has too few edges for r = {}", state.r)));
    }
    Ok(out as usize)
}

/// Builds `W`-exceptional layouts with `texc(D) - r` non-trivial paths in total. With
/// `ell = None` the smallest number of layouts compatible with the degree identity is used.
pub fn build_layouts(state: &DecompositionState, t: &LayoutTargets, ell: Option<usize>, budget: &mut Budget) -> Result<Vec<Layout>> {
    let n = state.n();
    let d = &state.remaining;
    let w = state.w;
    let w2 = state.w2();
    let s = t.s();
    if s + state.r != crate::excess::texc(d) {
        return Err(Error::Precondition(format!("{s} layout paths plus r = {} differ from texc = {}", state.r, crate::excess::texc(d))));
    }
    for (u, v) in d.edges() {
        if w & bit(u) != 0 && w & bit(v) != 0 {
            return Err(Error::Precondition(format!("edge {u}->{v} inside W survived cleaning")));
        }
    }
    // Fixed edges at W: start edges, end edges and in/out segments through each w.
    let mut start_edges: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut end_edges: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut segments: Vec<(usize, usize, usize)> = Vec::new();
    for x in bits(w) {
        let mut outs: Vec<usize> = d.out_neighbours(x).filter(|&v| !state.a.contains(x, v)).collect();
        let mut ins: Vec<usize> = d.in_neighbours(x).filter(|&u| !state.a.contains(u, x)).collect();
        if w2 & bit(x) != 0 {
            if outs.len() < state.r || ins.len() < state.r {
                return Err(Error::Infeasible(format!("exceptional vertex {x} cannot keep r edges per side")));
            }
            outs.truncate(outs.len() - state.r);
            ins.truncate(ins.len() - state.r);
        }
        let (sp, sm) = (t.hexc_plus[x], t.hexc_minus[x]);
        if outs.len() < sp || ins.len() < sm || outs.len() - sp != ins.len() - sm {
            return Err(Error::Precondition(format!("exceptional vertex {x}: degrees do not match its excess budget")));
        }
        start_edges[x] = outs.drain(..sp).collect();
        end_edges[x] = ins.drain(..sm).collect();
        // Pair in-neighbours with out-neighbours, rotating away from u = v.
        let k = outs.len();
        let shift = (0..k.max(1))
            .find(|&sh| (0..k).all(|i| ins[i] != outs[(i + sh) % k]))
            .ok_or_else(|| Error::Infeasible(format!("cannot pair the edges at {x} into segments")))?;
        for i in 0..k {
            segments.push((ins[i], x, outs[(i + shift) % k]));
        }
    }

    if s == 0 {
        if !segments.is_empty() || (0..n).any(|v| !start_edges[v].is_empty() || !end_edges[v].is_empty()) {
            return Err(Error::Infeasible("exceptional edges remain but no layout paths are left".into()));
        }
        return Ok(Vec::new());
    }

    let pairs = choose_endpoint_multiset(&t.hexc_plus, &t.hexc_minus)?;
    let mut protos: Vec<Proto> = Vec::with_capacity(s);
    for &(a, b) in &pairs {
        let (mut seq, mut fixed) = (vec![a], Vec::new());
        if w & bit(a) != 0 {
            seq.push(start_edges[a].pop().expect("one start edge per start slot"));
            fixed.push(true);
        }
        let suffix = if w & bit(b) != 0 { vec![end_edges[b].pop().expect("one end edge per end slot"), b] } else { vec![b] };
        if *seq.last().unwrap() == suffix[0] {
            seq.extend_from_slice(&suffix[1..]);
        } else {
            seq.extend_from_slice(&suffix);
            fixed.push(false);
        }
        if suffix.len() == 2 {
            fixed.push(true);
        }
        protos.push(Proto { seq, fixed });
    }
    for &(u, x, v) in &segments {
        let mut order: Vec<usize> = (0..protos.len()).collect();
        order.sort_by_key(|&i| (protos[i].seq.len(), i));
        let spot = order.into_iter().find_map(|i| {
            let p = &protos[i];
            let m = p.mask();
            if m & bit(x) != 0 {
                return None;
            }
            (0..p.fixed.len())
                .find(|&e| {
                    let (a, b) = (p.seq[e], p.seq[e + 1]);
                    !p.fixed[e] && (m & bit(u) == 0 || u == a) && (m & bit(v) == 0 || v == b)
                })
                .map(|e| (i, e))
        });
        let (i, e) = spot.ok_or_else(|| Error::Infeasible(format!("no layout path can absorb the segment {u}->{x}->{v}")))?;
        let p = &mut protos[i];
        let (a, b) = (p.seq[e], p.seq[e + 1]);
        // Replace the edge a->b by a(->u)->x->v(->b).
        let mut mid = Vec::new();
        let mut flags = Vec::new();
        if a != u {
            mid.push(u);
            flags.push(false);
        }
        mid.push(x);
        flags.extend([true, true]);
        if v != b {
            mid.push(v);
            flags.push(false);
        }
        p.seq.splice(e + 1..e + 1, mid);
        p.fixed.splice(e..e + 1, flags);
        debug_assert_eq!(p.seq.len(), p.fixed.len() + 1);
    }

    let mut dl_out = vec![0usize; n];
    let mut dl_in = vec![0usize; n];
    for p in &protos {
        for e in p.seq.windows(2) {
            dl_out[e[0]] += 1;
            dl_in[e[1]] += 1;
        }
    }
    for x in bits(w) {
        let keep = if w2 & bit(x) != 0 { state.r } else { 0 };
        let want_out = d.out_degree(x) - state.a.d_plus(x) - keep;
        let want_in = d.in_degree(x) - state.a.d_minus(x) - keep;
        if dl_out[x] != want_out || dl_in[x] != want_in {
            return Err(Error::Precondition(format!("layout degrees at exceptional vertex {x} are off")));
        }
    }
    let vprime: Vec<usize> = (0..n).filter(|&v| w & bit(v) == 0).collect();
    let mut pass = vec![0usize; n];
    for &v in &vprime {
        pass[v] = pass_count(state, t, v, dl_out[v], dl_in[v])?;
    }
    let appears = protos.iter().fold(0u64, |m, p| m | p.mask());
    let need = vprime.iter().map(|&v| pass[v] + (appears & bit(v) != 0) as usize).max().unwrap_or(0).max(1);
    let ell = match ell {
        Some(l) if l < need => return Err(Error::InvalidArgument(format!("{l} layouts are fewer than the {need} required"))),
        Some(l) => l,
        None => need,
    };
    let with_unfixed = protos.iter().filter(|p| p.has_unfixed()).count();
    if ell > with_unfixed {
        return Err(Error::Infeasible(format!("{ell} layouts but only {with_unfixed} paths with an unfixed edge")));
    }
    // cap[v]: number of layouts that may contain v; the others must route a configuration through it.
    let cap: Vec<usize> = (0..n).map(|v| if w & bit(v) != 0 { usize::MAX } else { ell - pass[v] }).collect();
    let assignment = assign(&protos, ell, &cap, w, budget)?;

    let mut layouts: Vec<Layout> = vec![Layout::default(); ell];
    for (j, p) in protos.iter().enumerate() {
        let l = &mut layouts[assignment[j]];
        let idx = l.paths.len();
        for (e, &f) in p.fixed.iter().enumerate() {
            if f {
                l.fixed.push((idx, e));
            }
        }
        l.paths.push(Path::new(p.seq.clone()));
    }
    for &v in &vprime {
        let inside = layouts.iter().filter(|l| l.vertex_mask() & bit(v) != 0).count();
        let extra = cap[v] - inside;
        let mut order: Vec<usize> = (0..ell).filter(|&i| layouts[i].vertex_mask() & bit(v) == 0).collect();
        order.sort_by_key(|&i| ((layouts[i].vertex_mask() & !w).count_ones(), i));
        for &i in order.iter().take(extra) {
            layouts[i].isolated.push(v);
        }
    }
    for l in &mut layouts {
        l.isolated.sort_unstable();
        l.check()?;
        debug_assert!(l.is_w_exceptional(w));
    }
    Ok(layouts)
}

/// Assigns paths to layouts so that every layout gets a path with an unfixed edge and every
/// vertex `v` lies in at most `cap[v]` layouts.
fn assign(protos: &[Proto], ell: usize, cap: &[usize], w: u64, budget: &mut Budget) -> Result<Vec<usize>> {
    let masks: Vec<u64> = protos.iter().map(|p| p.mask() & !w).collect();
    let tight = |j: usize| bits(masks[j]).map(|v| cap[v]).min().unwrap_or(usize::MAX);
    let mut order: Vec<usize> = (0..protos.len()).collect();
    order.sort_by_key(|&j| (tight(j), std::cmp::Reverse(masks[j].count_ones()), j));
    let unfixed_left: Vec<usize> = {
        let mut acc = vec![0; order.len() + 1];
        for k in (0..order.len()).rev() {
            acc[k] = acc[k + 1] + protos[order[k]].has_unfixed() as usize;
        }
        acc
    };

    struct Ctx<'a> {
        protos: &'a [Proto],
        masks: &'a [u64],
        order: &'a [usize],
        cap: &'a [usize],
        unfixed_left: &'a [usize],
        layout_mask: Vec<u64>,
        layout_has_unfixed: Vec<bool>,
        used: Vec<usize>,
        count: Vec<usize>,
        ends: Vec<Vec<(usize, usize)>>,
        out: Vec<usize>,
    }

    fn rec(c: &mut Ctx<'_>, k: usize, budget: &mut Budget) -> Option<bool> {
        if !budget.tick() {
            return None;
        }
        let lacking = c.layout_has_unfixed.iter().filter(|&&h| !h).count();
        if lacking > c.unfixed_left[k] {
            return Some(false);
        }
        if k == c.order.len() {
            return Some(true);
        }
        let j = c.order[k];
        // Spread paths: emptier layouts first, and avoid layouts already holding a path
        // with the same ends (only one of them could use the direct edge).
        let (a, b) = (c.protos[j].seq[0], *c.protos[j].seq.last().unwrap());
        let mut cand: Vec<usize> = (0..c.layout_mask.len()).collect();
        cand.sort_by_key(|&i| (c.ends[i].contains(&(a, b)), c.count[i], i));
        let mut first_empty_tried = false;
        for i in cand {
            if c.count[i] == 0 {
                if first_empty_tried {
                    continue;
                }
                first_empty_tried = true;
            }
            let new = c.masks[j] & !c.layout_mask[i];
            if bits(new).any(|v| c.used[v] + 1 > c.cap[v]) {
                continue;
            }
            for v in bits(new) {
                c.used[v] += 1;
            }
            let (old_mask, old_unfixed) = (c.layout_mask[i], c.layout_has_unfixed[i]);
            c.layout_mask[i] |= c.masks[j];
            c.layout_has_unfixed[i] |= c.protos[j].has_unfixed();
            c.count[i] += 1;
            c.ends[i].push((a, b));
            c.out[j] = i;
            match rec(c, k + 1, budget) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            c.count[i] -= 1;
            c.ends[i].pop();
            c.layout_mask[i] = old_mask;
            c.layout_has_unfixed[i] = old_unfixed;
            for v in bits(new) {
                c.used[v] -= 1;
            }
        }
        Some(false)
    }

    let n = cap.len();
    let mut c = Ctx {
        protos,
        masks: &masks,
        order: &order,
        cap,
        unfixed_left: &unfixed_left,
        layout_mask: vec![0; ell],
        layout_has_unfixed: vec![false; ell],
        used: vec![0; n],
        count: vec![0; ell],
        ends: vec![Vec::new(); ell],
        out: vec![0; protos.len()],
    };
    match rec(&mut c, 0, budget) {
        Some(true) => Ok(c.out),
        Some(false) => Err(Error::Infeasible("no assignment of paths to layouts respects the pass counts".into())),
        None => Err(Error::Infeasible("budget exhausted while assigning paths to layouts".into())),
    }
}
