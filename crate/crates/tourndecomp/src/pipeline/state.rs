//! Endpoint reserves, absorbing edges and the auxiliary-excess bookkeeping of a
//! decomposition in progress.

use serde::{Deserialize, Serialize};

use crate::digraph::{bit, bits, mask_of, Digraph, Path};
use crate::error::{Error, Result};
use crate::excess::{exc_minus, exc_plus, excess_profile, texc, total_excess};

/// Absorbing edges: `a_plus` go from `W` into `V'`, `a_minus` from `V'` into `W`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsorbingSet {
    pub a_plus: Vec<(usize, usize)>,
    pub a_minus: Vec<(usize, usize)>,
}

impl AbsorbingSet {
    pub fn is_empty(&self) -> bool {
        self.a_plus.is_empty() && self.a_minus.is_empty()
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.a_plus.contains(&(u, v)) || self.a_minus.contains(&(u, v))
    }

    /// Number of `a_plus` edges starting at `v`.
    pub fn d_plus(&self, v: usize) -> usize {
        self.a_plus.iter().filter(|e| e.0 == v).count()
    }

    /// Number of `a_minus` edges ending at `v`.
    pub fn d_minus(&self, v: usize) -> usize {
        self.a_minus.iter().filter(|e| e.1 == v).count()
    }

    /// Heads of the `a_plus` edges, i.e. `V(A^+) ∩ V'`.
    pub fn plus_heads(&self) -> u64 {
        self.a_plus.iter().fold(0, |m, e| m | bit(e.1))
    }

    /// Tails of the `a_minus` edges, i.e. `V(A^-) ∩ V'`.
    pub fn minus_tails(&self) -> u64 {
        self.a_minus.iter().fold(0, |m, e| m | bit(e.0))
    }

    /// Checks the absorbing-set invariants against `d` and the exceptional set `w`.
    pub fn check(&self, d: &Digraph, w: u64) -> Result<()> {
        let mut heads = 0u64;
        for &(u, v) in &self.a_plus {
            if !d.has_edge(u, v) || w & bit(u) == 0 || w & bit(v) != 0 || heads & bit(v) != 0 {
                return Err(Error::Precondition(format!("bad starting absorbing edge {u}->{v}")));
            }
            heads |= bit(v);
        }
        let mut tails = 0u64;
        for &(u, v) in &self.a_minus {
            if !d.has_edge(u, v) || w & bit(v) == 0 || w & bit(u) != 0 || tails & bit(u) != 0 {
                return Err(Error::Precondition(format!("bad ending absorbing edge {u}->{v}")));
            }
            tails |= bit(u);
        }
        for x in bits(w) {
            if self.d_plus(x) > exc_plus(d, x) || self.d_minus(x) > exc_minus(d, x) {
                return Err(Error::Precondition(format!("vertex {x} carries more absorbing edges than its excess")));
            }
        }
        Ok(())
    }
}

/// `|U^0(D)| >= texc(D) - exc(D)`, so the first `texc - exc` zero-excess vertices by id
/// form the endpoint reserve.
pub fn select_u_star(d: &Digraph) -> Result<Vec<usize>> {
    if !d.is_oriented() {
        return Err(Error::Precondition("endpoint reserve needs an oriented digraph".into()));
    }
    let p = excess_profile(d);
    let k = p.texc - p.exc_total;
    if p.u_zero.len() < k {
        return Err(Error::Precondition(format!("|U^0| = {} < texc - exc = {k}", p.u_zero.len())));
    }
    Ok(p.u_zero[..k].to_vec())
}

/// Picks the absorbing vertices `W_A` and `r` absorbing edges per side whose `N` is below
/// `threshold`. Heads of the edges avoid `avoid` and `W_A` itself.
pub fn select_absorbing_sets(t: &Digraph, r: usize, threshold: usize) -> Result<(Vec<usize>, AbsorbingSet)> {
    select_absorbing_sets_avoiding(t, r, threshold, 0)
}

pub fn select_absorbing_sets_avoiding(t: &Digraph, r: usize, threshold: usize, avoid: u64) -> Result<(Vec<usize>, AbsorbingSet)> {
    if r == 0 {
        return Err(Error::InvalidArgument("absorbing budget r must be positive".into()));
    }
    if !t.is_tournament() {
        return Err(Error::NotTournament);
    }
    let p = excess_profile(t);
    let pick = |cands: &[usize], exc: &[usize]| -> Result<Vec<usize>> {
        let mut order = cands.to_vec();
        order.sort_by_key(|&v| (std::cmp::Reverse(exc[v]), v));
        let mut sum = 0;
        let mut out = Vec::new();
        for v in order {
            if sum >= r {
                break;
            }
            sum += exc[v];
            out.push(v);
        }
        if sum < r {
            return Err(Error::Infeasible(format!("excess {sum} on one side is below r = {r}")));
        }
        out.sort_unstable();
        Ok(out)
    };
    let wa_plus = if p.n_plus >= threshold { Vec::new() } else { pick(&p.u_plus, &p.exc_plus)? };
    let wa_minus = if p.n_minus >= threshold { Vec::new() } else { pick(&p.u_minus, &p.exc_minus)? };
    let wa = mask_of(&wa_plus) | mask_of(&wa_minus);
    let blocked = wa | avoid;
    let mut a = AbsorbingSet::default();
    let mut heads = 0u64;
    for &w in &wa_plus {
        let mut k = 0;
        for v in t.out_neighbours(w) {
            if a.a_plus.len() == r || k == p.exc_plus[w] {
                break;
            }
            if blocked & bit(v) == 0 && heads & bit(v) == 0 {
                a.a_plus.push((w, v));
                heads |= bit(v);
                k += 1;
            }
        }
    }
    let mut tails = 0u64;
    for &w in &wa_minus {
        let mut k = 0;
        for v in t.in_neighbours(w) {
            if a.a_minus.len() == r || k == p.exc_minus[w] {
                break;
            }
            if blocked & bit(v) == 0 && tails & bit(v) == 0 && heads & bit(v) == 0 {
                a.a_minus.push((v, w));
                tails |= bit(v);
                k += 1;
            }
        }
    }
    if !wa_plus.is_empty() && a.a_plus.len() < r || !wa_minus.is_empty() && a.a_minus.len() < r {
        return Err(Error::Infeasible("not enough absorbing edges into V'".into()));
    }
    let mut all: Vec<usize> = bits(wa).collect();
    all.sort_unstable();
    Ok((all, a))
}

/// Flags reported by [`DecompositionState::check_partial`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialCheck {
    /// Edge-disjoint paths of the remaining digraph satisfying (P1) to (P3).
    pub valid: bool,
    /// Every zero-excess endpoint lies in the reserve.
    pub within_reserve: bool,
    /// No absorbing edge is used and the exceptional endpoint caps hold.
    pub consistent: bool,
    /// `texc` drops by exactly the number of paths.
    pub good: bool,
}

/// One identity evaluated while applying a partial decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct DecompositionState {
    pub original: Digraph,
    pub remaining: Digraph,
    pub w: u64,
    pub w_star: u64,
    pub w_zero: u64,
    pub w_a: u64,
    pub a: AbsorbingSet,
    pub u_star: u64,
    pub r: usize,
    pub accumulated: Vec<Path>,
    pub used_plus: Vec<usize>,
    pub used_minus: Vec<usize>,
    pub identities: Vec<IdentityCheck>,
}

impl DecompositionState {
    /// Fresh state with the reserve chosen by [`select_u_star`]. `w` must contain `w_star`
    /// and `w_a` and no reserve vertex.
    pub fn new(d: &Digraph, r: usize, w: u64, w_star: u64, w_a: u64, a: AbsorbingSet) -> Result<Self> {
        let u_star = mask_of(&select_u_star(d)?);
        if w_star & !w != 0 || w_a & !w != 0 {
            return Err(Error::Precondition("W_star and W_A must lie in W".into()));
        }
        if u_star & w != 0 {
            return Err(Error::Precondition("the endpoint reserve meets W".into()));
        }
        a.check(d, w)?;
        Ok(DecompositionState {
            original: d.clone(),
            remaining: d.clone(),
            w,
            w_star,
            w_zero: w & !w_star,
            w_a,
            a,
            u_star,
            r,
            accumulated: Vec::new(),
            used_plus: vec![0; d.n()],
            used_minus: vec![0; d.n()],
            identities: Vec::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.original.n()
    }

    /// `W_1 = W_star ∪ W_A`: exceptional vertices that keep only absorbing edges at the end.
    pub fn w1(&self) -> u64 {
        self.w_star | self.w_a
    }

    pub fn w2(&self) -> u64 {
        self.w & !self.w1()
    }

    pub fn auxiliary_excess(&self, v: usize) -> (usize, usize) {
        if self.u_star & bit(v) != 0 {
            return (1, 1);
        }
        let (p, m) = (exc_plus(&self.remaining, v), exc_minus(&self.remaining, v));
        if self.w & bit(v) != 0 {
            (p.saturating_sub(self.a.d_plus(v)), m.saturating_sub(self.a.d_minus(v)))
        } else {
            (p, m)
        }
    }

    pub fn auxiliary_totals(&self) -> (usize, usize) {
        (0..self.n()).map(|v| self.auxiliary_excess(v)).fold((0, 0), |(a, b), (p, m)| (a + p, b + m))
    }

    /// Whether the accumulated paths form a good partial decomposition of the original digraph.
    pub fn accumulated_good(&self) -> bool {
        texc(&self.original) == texc(&self.remaining) + self.accumulated.len()
    }

    pub fn check_partial(&self, paths: &[Path]) -> PartialCheck {
        let d = &self.remaining;
        let n = d.n();
        let mut out = PartialCheck::default();
        if crate::digraph::validate_paths(d, paths, false).is_err() {
            return out;
        }
        let mut starts = vec![0usize; n];
        let mut ends = vec![0usize; n];
        for p in paths {
            starts[p.start()] += 1;
            ends[p.end()] += 1;
        }
        let p = excess_profile(d);
        let zero = mask_of(&p.u_zero);
        let mut zero_endpoints = 0usize;
        let mut valid = true;
        let mut within = true;
        for v in 0..n {
            if zero & bit(v) != 0 {
                valid &= starts[v] <= 1 && ends[v] <= 1;
                if starts[v] + ends[v] > 0 {
                    zero_endpoints += 1;
                    within &= self.u_star & bit(v) != 0;
                }
            } else {
                valid &= starts[v] <= p.exc_plus[v] && ends[v] <= p.exc_minus[v];
            }
        }
        valid &= zero_endpoints <= p.texc - p.exc_total;
        let mut consistent = paths.iter().all(|q| q.edges().all(|(u, v)| !self.a.contains(u, v)));
        for w in bits(self.w) {
            consistent &= starts[w] + self.a.d_plus(w) <= p.exc_plus[w] && ends[w] + self.a.d_minus(w) <= p.exc_minus[w];
        }
        out.valid = valid;
        out.within_reserve = within;
        out.consistent = consistent;
        out.good = texc(&d.without_paths(paths)) + paths.len() == p.texc;
        out
    }

    /// Removes `paths` from the remaining digraph, shrinks the reserve by the used endpoints
    /// and records the bookkeeping identities. Returns the flags of the applied set.
    pub fn apply_paths(&mut self, paths: &[Path]) -> Result<PartialCheck> {
        let check = self.check_partial(paths);
        if !(check.valid && check.within_reserve && check.consistent) {
            return Err(Error::Precondition(format!("not a reserve-respecting consistent partial decomposition: {check:?}")));
        }
        if paths.is_empty() {
            return Ok(check);
        }
        let old = self.remaining.clone();
        let before: Vec<(usize, usize)> = (0..self.n()).map(|v| self.auxiliary_excess(v)).collect();
        let (old_plus, old_minus) = self.auxiliary_totals();
        let old_p = excess_profile(&old);
        let mut starts = vec![0usize; self.n()];
        let mut ends = vec![0usize; self.n()];
        let mut endpoints = 0u64;
        for p in paths {
            starts[p.start()] += 1;
            ends[p.end()] += 1;
            endpoints |= bit(p.start()) | bit(p.end());
        }
        self.remaining = old.without_paths(paths);
        self.u_star &= !endpoints;
        for v in 0..self.n() {
            self.used_plus[v] += starts[v];
            self.used_minus[v] += ends[v];
        }
        self.accumulated.extend(paths.iter().cloned());

        let k = paths.len();
        let (new_plus, new_minus) = self.auxiliary_totals();
        self.record(
            "auxiliary excess drops by |P|",
            new_plus + k == old_plus && new_minus + k == old_minus,
            format!("({old_plus}, {old_minus}) -> ({new_plus}, {new_minus}) with |P| = {k}"),
        );
        let per_vertex = (0..self.n()).all(|v| {
            let (p, m) = self.auxiliary_excess(v);
            p + starts[v] == before[v].0 && m + ends[v] == before[v].1
        });
        self.record("per-vertex auxiliary excess", per_vertex, String::new());
        let zero_used = bits(endpoints & mask_of(&old_p.u_zero)).count();
        let new_exc = total_excess(&self.remaining);
        self.record(
            "excess after removing P",
            new_exc + k == old_p.exc_total + zero_used,
            format!("exc {} -> {new_exc}, |P| = {k}, zero-excess endpoints {zero_used}", old_p.exc_total),
        );
        if check.good {
            let new_p = excess_profile(&self.remaining);
            let reserve = self.u_star.count_ones() as usize;
            self.record(
                "reserve size after a good partial",
                reserve == new_p.texc - new_p.exc_total,
                format!("|U**| = {reserve}, texc - exc = {}", new_p.texc - new_p.exc_total),
            );
            let exhausted = |side: usize| {
                (0..self.n())
                    .filter(|&v| {
                        let cap = if side == 0 { before[v].0 } else { before[v].1 };
                        let used = if side == 0 { starts[v] } else { ends[v] };
                        cap > 0 && used == cap
                    })
                    .count()
            };
            let (xp, xm) = (exhausted(0), exhausted(1));
            self.record(
                "N drops by at most the exhausted endpoints",
                old_p.n_plus <= new_p.n_plus + xp && old_p.n_minus <= new_p.n_minus + xm,
                format!("N+ {} -> {}, |X+| = {xp}; N- {} -> {}, |X-| = {xm}", old_p.n_plus, new_p.n_plus, old_p.n_minus, new_p.n_minus),
            );
        }
        if self.accumulated_good() {
            let t = texc(&self.remaining);
            let (ap, am) = (self.a.a_plus.len(), self.a.a_minus.len());
            self.record(
                "auxiliary totals equal texc minus absorbing edges",
                new_plus + ap == t && new_minus + am == t,
                format!("({new_plus}, {new_minus}) vs texc {t} with |A| = ({ap}, {am})"),
            );
            self.record("absorbing edges stay valid", self.a.check(&self.remaining, self.w).is_ok(), String::new());
        }
        Ok(check)
    }

    fn record(&mut self, name: &'static str, holds: bool, detail: String) {
        self.identities.push(IdentityCheck { name, holds, detail });
    }

    pub fn identity_violations(&self) -> Vec<&IdentityCheck> {
        self.identities.iter().filter(|c| !c.holds).collect()
    }
}
