//! Excess of vertices and digraphs, the modified excess `texc`, and the
//! endpoint-capacity counts `N^+` and `N^-`.

use serde::{Deserialize, Serialize};

use crate::digraph::Digraph;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExcessProfile {
    pub exc: Vec<i64>,
    pub exc_plus: Vec<usize>,
    pub exc_minus: Vec<usize>,
    pub u_plus: Vec<usize>,
    pub u_minus: Vec<usize>,
    pub u_zero: Vec<usize>,
    pub delta0: usize,
    pub exc_total: usize,
    pub texc: usize,
    pub n_plus: usize,
    pub n_minus: usize,
}

impl ExcessProfile {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

pub fn vertex_excess(d: &Digraph, v: usize) -> i64 {
    d.out_degree(v) as i64 - d.in_degree(v) as i64
}

pub fn exc_plus(d: &Digraph, v: usize) -> usize {
    vertex_excess(d, v).max(0) as usize
}

pub fn exc_minus(d: &Digraph, v: usize) -> usize {
    (-vertex_excess(d, v)).max(0) as usize
}

/// `exc(D) = sum of exc^+(v)`.
pub fn total_excess(d: &Digraph) -> usize {
    (0..d.n()).map(|v| exc_plus(d, v)).sum()
}

/// `texc(D) = max(exc(D), Delta^0(D))`.
pub fn texc(d: &Digraph) -> usize {
    total_excess(d).max(d.max_semidegree())
}

pub fn excess_profile(d: &Digraph) -> ExcessProfile {
    let n = d.n();
    let exc: Vec<i64> = (0..n).map(|v| vertex_excess(d, v)).collect();
    let exc_plus: Vec<usize> = exc.iter().map(|&e| e.max(0) as usize).collect();
    let exc_minus: Vec<usize> = exc.iter().map(|&e| (-e).max(0) as usize).collect();
    let u_plus: Vec<usize> = (0..n).filter(|&v| exc[v] > 0).collect();
    let u_minus: Vec<usize> = (0..n).filter(|&v| exc[v] < 0).collect();
    let u_zero: Vec<usize> = (0..n).filter(|&v| exc[v] == 0).collect();
    let exc_total: usize = exc_plus.iter().sum();
    debug_assert_eq!(exc_total, exc_minus.iter().sum::<usize>());
    let delta0 = d.max_semidegree();
    let texc = exc_total.max(delta0);
    ExcessProfile {
        n_plus: u_plus.len() + texc - exc_total,
        n_minus: u_minus.len() + texc - exc_total,
        exc,
        exc_plus,
        exc_minus,
        u_plus,
        u_minus,
        u_zero,
        delta0,
        exc_total,
        texc,
    }
}

/// `(d_min(v), d_max(v)) = ((d(v) - |exc(v)|)/2, (d(v) + |exc(v)|)/2)`.
pub fn degree_identities(d: &Digraph, v: usize) -> (usize, usize) {
    let deg = d.degree(v);
    let a = vertex_excess(d, v).unsigned_abs() as usize;
    ((deg - a) / 2, (deg + a) / 2)
}

/// `exc^+(S)` and `exc^-(S)` summed over the vertices of `s`.
pub fn set_excess(d: &Digraph, s: &[usize]) -> (usize, usize) {
    s.iter().fold((0, 0), |(p, m), &v| (p + exc_plus(d, v), m + exc_minus(d, v)))
}

/// For an even-order tournament, checks `texc = exc` and `U^0 = {}` and returns the profile.
pub fn even_order_facts(t: &Digraph) -> Result<ExcessProfile> {
    if !t.is_tournament() {
        return Err(Error::NotTournament);
    }
    if t.n() % 2 == 1 {
        return Err(Error::Precondition(format!("tournament has odd order {}", t.n())));
    }
    let p = excess_profile(t);
    if p.texc != p.exc_total || !p.u_zero.is_empty() {
        return Err(Error::Precondition(format!(
            "even-order facts fail: texc = {}, exc = {}, |U^0| = {}",
            p.texc,
            p.exc_total,
            p.u_zero.len()
        )));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::*;

    #[test]
    fn c3_profile() {
        let p = excess_profile(&directed_cycle(3).unwrap());
        assert_eq!((p.exc_total, p.delta0, p.texc), (0, 1, 1));
        assert_eq!((p.n_plus, p.n_minus), (1, 1));
    }

    #[test]
    fn transitive_profile() {
        let t = transitive_tournament(4).unwrap();
        let p = excess_profile(&t);
        assert_eq!(p.exc, vec![3, 1, -1, -3]);
        assert_eq!((p.exc_total, p.delta0, p.texc), (4, 3, 4));
        assert_eq!(degree_identities(&t, 0), (0, 3));
        assert!(even_order_facts(&t).is_ok());
        assert!(even_order_facts(&directed_cycle(3).unwrap()).is_err());
    }

    #[test]
    fn apex_profile() {
        let apex = gen_apex(5, &directed_cycle(3).unwrap()).unwrap();
        let p = excess_profile(&apex);
        assert_eq!((p.exc_total, p.texc), (2, 3));
        assert_eq!(degree_identities(&apex, apex_vertices(5).0), (1, 3));
    }

    #[test]
    fn json_is_flat() {
        let v: serde_json::Value = serde_json::from_str(&excess_profile(&directed_cycle(3).unwrap()).to_json()).unwrap();
        assert_eq!(v["texc"], 1);
        assert_eq!(v["u_zero"], serde_json::json!([0, 1, 2]));
    }
}
