//! One line per acceptance criterion. Exits non-zero if any criterion fails.

use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use tourndecomp::digraph::*;
use tourndecomp::exceptional::{apex_characterization, classify, TournamentClass};
use tourndecomp::excess::{excess_profile, texc, total_excess};
use tourndecomp::expander::{is_robust_outexpander, robust_outneighbourhood, RobustParams};
use tourndecomp::matching::{is_matching_decomposition, matching_cover, vizing_matchings, BipartiteGraph};
use tourndecomp::pipeline::{complete_decomposition, decompose, CompletionPattern, Method, PipelineConfig};
use tourndecomp::solver::{pn_exact, pn_oracle};

const ORACLE_LIMIT: Duration = Duration::from_secs(300);
const EVEN_LIMIT: Duration = Duration::from_secs(1800);
const TRANSITIVE_LIMIT: Duration = Duration::from_secs(60);
const PIPELINE_TARGET: f64 = 0.60;

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, id: u32, ok: bool, what: &str, detail: String) {
        self.failed += !ok as usize;
        println!("{} [{id:>2}] {what}: {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn is_apex(d: &Digraph) -> bool {
    d.is_tournament() && matches!(classify(d), Ok(TournamentClass::Apex { .. }))
}

/// Criteria 1 and 2 share the corpus: all tournaments on 5 vertices and 500 random digraphs.
fn oracle_and_bounds(rep: &mut Report) {
    let start = Instant::now();
    let mut corpus: Vec<Digraph> = enumerate_tournaments(5).unwrap().collect();
    let mut r = rng(1);
    for _ in 0..500 {
        let n = r.gen_range(2..=8);
        let m = r.gen_range(0..=18.min(n * (n - 1)));
        corpus.push(random_digraph_with_edges(n, m, &mut r));
    }
    let results: Vec<(usize, usize, bool)> = corpus
        .par_iter()
        .map(|d| {
            let e = pn_exact(d).unwrap();
            (e.pn, pn_oracle(d).unwrap(), e.optimal)
        })
        .collect();
    let elapsed = start.elapsed();
    let disagreements = results.iter().filter(|(e, o, opt)| e != o || !opt).count();
    rep.line(
        1,
        disagreements == 0 && elapsed < ORACLE_LIMIT,
        "pn_exact == pn_oracle on 1024 tournaments (n=5) and 500 digraphs with <= 18 edges",
        format!(
            "{} instances, {disagreements} disagreements, {:.1}s (limit {}s)",
            corpus.len(),
            elapsed.as_secs_f64(),
            ORACLE_LIMIT.as_secs()
        ),
    );

    let (mut below, mut exceptional, mut exceptional_below) = (0, 0, 0);
    for (d, &(pn, _, _)) in corpus.iter().zip(&results) {
        let t = texc(d);
        below += (pn < t) as usize;
        if (d.edge_count() > 0 && d.regularity().is_some()) || is_apex(d) {
            exceptional += 1;
            exceptional_below += (pn < t + 1) as usize;
        }
    }
    rep.line(
        2,
        below == 0 && exceptional_below == 0,
        "pn >= texc, and pn >= texc+1 on regular digraphs and apex tournaments",
        format!("{below} violations of pn >= texc; {exceptional_below} of {exceptional} regular/apex instances below texc+1"),
    );
}

fn even_orders(rep: &mut Report) {
    let start = Instant::now();
    let mut total = 0;
    let mut bad = 0;
    for n in [2, 4, 6] {
        let ts: Vec<Digraph> = enumerate_tournaments(n).unwrap().collect();
        total += ts.len();
        bad += ts.par_iter().filter(|t| pn_exact(t).unwrap().pn != total_excess(t)).count();
    }
    let elapsed = start.elapsed();
    rep.line(
        3,
        bad == 0 && elapsed < EVEN_LIMIT,
        "pn == exc on every tournament with n in {2,4,6}",
        format!("{total} tournaments, {bad} mismatches, {:.1}s (limit {}s)", elapsed.as_secs_f64(), EVEN_LIMIT.as_secs()),
    );
}

fn exceptional_values(rep: &mut Report) {
    let mut detail = Vec::new();
    let mut ok = true;
    for n in [5, 7] {
        let pn = pn_exact(&gen_apex(n, &gen_regular_tournament(n - 2).unwrap()).unwrap()).unwrap().pn;
        ok &= pn == n - 1;
        detail.push(format!("apex({n}) = {pn}"));
    }
    for n in [3, 5, 7] {
        let pn = pn_exact(&gen_regular_tournament(n).unwrap()).unwrap().pn;
        ok &= pn == n.div_ceil(2);
        detail.push(format!("R{n} = {pn}"));
    }
    rep.line(4, ok, "apex(n) has pn = n-1 and R_n has pn = (n+1)/2", detail.join(", "));
}

fn transitive(rep: &mut Report) {
    let start = Instant::now();
    let mut detail = Vec::new();
    let mut ok = true;
    for n in 3..=8 {
        let pn = pn_exact(&transitive_tournament(n).unwrap()).unwrap().pn;
        ok &= pn == n * n / 4;
        detail.push(format!("TT{n} = {pn}"));
    }
    let elapsed = start.elapsed();
    rep.line(
        5,
        ok && elapsed < TRANSITIVE_LIMIT,
        "TT_n has pn = floor(n^2/4) for n in 3..=8",
        format!("{}, {:.2}s (limit {}s)", detail.join(", "), elapsed.as_secs_f64(), TRANSITIVE_LIMIT.as_secs()),
    );
}

fn characterization(rep: &mut Report) {
    let mut detail = Vec::new();
    let mut bad = 0;
    for n in [5usize, 7] {
        let codes: Vec<u64> = (0..1u64 << pair_count(n)).collect();
        let d = codes
            .par_iter()
            .filter(|&&c| {
                let t = tournament_from_code(n, c);
                is_apex(&t) != apex_characterization(&t)
            })
            .count();
        bad += d;
        detail.push(format!("n={n}: {} tournaments, {d} disagreements", codes.len()));
    }
    rep.line(6, bad == 0, "apex_characterization agrees with classify on n in {5,7}", detail.join("; "));
}

fn expander(rep: &mut Report) {
    let grid = [Ratio::new(1, 20), Ratio::new(1, 10), Ratio::new(1, 5), Ratio::new(3, 10)];
    let mut r = rng(7);
    let digraphs: Vec<Digraph> = (0..200)
        .map(|_| {
            let n = r.gen_range(2..=12);
            let p = r.gen_range(0.3..1.0);
            random_digraph(n, p, &mut r)
        })
        .collect();
    let violations: usize = digraphs
        .par_iter()
        .map(|d| {
            let mut table = [[false; 4]; 4];
            for (i, &nu) in grid.iter().enumerate() {
                for (j, &tau) in grid.iter().enumerate() {
                    table[i][j] = nu <= tau && is_robust_outexpander(d, RobustParams::new(nu, tau).unwrap()).unwrap();
                }
            }
            let mut v = 0;
            for i in 0..4 {
                for j in 0..4 {
                    if table[i][j] {
                        v += (0..=i).flat_map(|a| (j..4).map(move |b| (a, b))).filter(|&(a, b)| !table[a][b]).count();
                    }
                }
            }
            v
        })
        .sum();
    let mut rn_bad = 0;
    for _ in 0..2000 {
        let n = r.gen_range(1..=16);
        let d = random_digraph(n, r.gen_range(0.0..1.0), &mut r);
        let full = d.vertex_mask();
        let s = r.gen::<u64>() & full;
        let t = (s | r.gen::<u64>()) & full;
        let nu = Ratio::new(r.gen_range(0..5), 10);
        rn_bad += (robust_outneighbourhood(&d, s, nu) & !robust_outneighbourhood(&d, t, nu) != 0) as usize;
    }
    rep.line(
        7,
        violations == 0 && rn_bad == 0,
        "robust outexpansion is monotone over a 4x4 (nu, tau) grid; RN is monotone in S",
        format!("200 digraphs, {violations} grid violations; 2000 RN samples, {rn_bad} violations"),
    );
}

fn matchings(rep: &mut Report) {
    let mut r = rng(8);
    let mut no_cover = 0;
    let mut unmet = 0;
    for _ in 0..1000 {
        // Random graph topped up until d(a) >= |B|/2 and d(b) >= |A| - |B|/2.
        let b = r.gen_range(1..=20);
        let a = r.gen_range(1..=b);
        let p = r.gen_range(0.0..1.0);
        let mut adj = vec![vec![false; b]; a];
        for row in adj.iter_mut() {
            for cell in row.iter_mut() {
                *cell = r.gen_bool(p);
            }
        }
        for row in adj.iter_mut() {
            while 2 * row.iter().filter(|&&x| x).count() < b {
                let y = r.gen_range(0..b);
                row[y] = true;
            }
        }
        let mut deg_b: Vec<usize> = (0..b).map(|y| adj.iter().filter(|row| row[y]).count()).collect();
        for (y, deg) in deg_b.iter_mut().enumerate() {
            while 2 * *deg + b < 2 * a {
                let x = r.gen_range(0..a);
                if !adj[x][y] {
                    adj[x][y] = true;
                    *deg += 1;
                }
            }
        }
        let edges: Vec<(usize, usize)> = (0..a).flat_map(|x| (0..b).map(move |y| (x, y))).filter(|&(x, y)| adj[x][y]).collect();
        let g = BipartiteGraph::from_edges(a, b, &edges).unwrap();
        let holds =
            (0..a).all(|x| 2 * g.neighbours(x).len() >= b) && (0..b).all(|y| 2 * edges.iter().filter(|e| e.1 == y).count() + b >= 2 * a);
        unmet += !holds as usize;
        no_cover += matching_cover(&g).is_none() as usize;
    }
    let mut too_many = 0;
    let mut improper = 0;
    for _ in 0..500 {
        let n = r.gen_range(1..=40);
        let p = r.gen_range(0.0..1.0);
        let edges: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| r.gen_bool(p)).collect();
        let delta = (0..n).map(|v| edges.iter().filter(|e| e.0 == v || e.1 == v).count()).max().unwrap_or(0);
        let classes = vizing_matchings(n, &edges).unwrap();
        too_many += (classes.len() > delta + 1) as usize;
        improper += !is_matching_decomposition(n, &edges, &classes) as usize;
    }
    rep.line(
        8,
        unmet == 0 && no_cover == 0 && too_many == 0 && improper == 0,
        "Hall instances have a cover of A; Vizing uses <= Delta+1 colours",
        format!("1000 Hall instances ({unmet} off-condition), {no_cover} without cover; 500 graphs, {too_many} over Delta+1, {improper} improper"),
    );
}

fn bookkeeping(rep: &mut Report) {
    let mut r = rng(9);
    let ts: Vec<Digraph> = (0..200)
        .map(|_| {
            let n = r.gen_range(8..=14);
            random_tournament(n, &mut r)
        })
        .collect();
    let reports: Vec<_> = ts.par_iter().map(|t| decompose(t, &PipelineConfig::default()).unwrap()).collect();
    let checks: usize = reports.iter().map(|x| x.identity_checks).sum();
    let violations: usize = reports.iter().map(|x| x.identity_violations).sum();
    let runs = reports.iter().filter(|x| x.method == Method::Pipeline).count();
    rep.line(
        9,
        violations == 0 && checks > 0,
        "bookkeeping identities hold after every good application",
        format!("200 runs ({runs} completed by the pipeline), {checks} identities checked, {violations} violations"),
    );
}

/// Union of `r` edge-disjoint random Hamilton cycles on `n + 1` vertices, minus vertex `n`.
fn hamilton_pattern(n: usize, r: usize, rng: &mut ChaCha8Rng) -> Option<(Digraph, CompletionPattern)> {
    let mut full = Digraph::new(n + 1).unwrap();
    for _ in 0..r {
        let mut placed = false;
        for _ in 0..200 {
            let mut order: Vec<usize> = (0..=n).collect();
            order.shuffle(rng);
            let edges: Vec<(usize, usize)> = (0..=n).map(|i| (order[i], order[(i + 1) % (n + 1)])).collect();
            if edges.iter().all(|&(u, v)| !full.has_edge(u, v)) {
                for (u, v) in edges {
                    full.add_edge(u, v);
                }
                placed = true;
                break;
            }
        }
        if !placed {
            return None;
        }
    }
    let aux = n;
    let outs = full.out_mask(aux);
    let ins = full.in_mask(aux);
    let vertices: Vec<usize> = (0..n).collect();
    let d = full.induced(&vertices);
    let all = d.vertex_mask();
    let pattern = CompletionPattern {
        x_plus: outs & !ins & all,
        x_minus: ins & !outs & all,
        x_star: outs & ins & all,
        x_zero: all & !(outs | ins),
        r,
        ..Default::default()
    };
    Some((d, pattern))
}

fn completion(rep: &mut Report) {
    let mut r = rng(10);
    let mut instances = 0;
    let mut failures = 0;
    while instances < 100 {
        let n = r.gen_range(3..=10);
        let k = r.gen_range(1..=4.min(n / 2));
        let Some((d, pat)) = hamilton_pattern(n, k, &mut r) else { continue };
        instances += 1;
        let ok = match complete_decomposition(&d, &pat) {
            Ok(p) => {
                let starts = p.paths.iter().fold(0u64, |m, q| m | 1 << q.start());
                let ends = p.paths.iter().fold(0u64, |m, q| m | 1 << q.end());
                p.len() == k
                    && validate_decomposition(&d, &p).is_ok()
                    && p.paths.iter().all(|q| q.vertices().len() == n)
                    && starts.count_ones() as usize == k
                    && ends.count_ones() as usize == k
                    && starts & !(pat.x_plus | pat.x_star) == 0
                    && ends & !(pat.x_minus | pat.x_star) == 0
            }
            Err(_) => false,
        };
        failures += !ok as usize;
    }
    rep.line(
        10,
        failures == 0,
        "complete_decomposition returns r Hamilton paths with distinct starts and ends",
        format!("{instances} synthesized patterns (n <= 10, r <= 4), {failures} failures"),
    );
}

fn end_to_end(rep: &mut Report) {
    let mut r = rng(11);
    let ts: Vec<Digraph> = (0..50)
        .map(|_| {
            let n = r.gen_range(9..=13);
            random_tournament(n, &mut r)
        })
        .collect();
    let rows: Vec<_> = ts
        .par_iter()
        .map(|t| {
            let rep = decompose(t, &PipelineConfig::default()).unwrap();
            let exact = pn_exact(t).unwrap();
            (classify(t).unwrap().is_exceptional(), rep, exact)
        })
        .collect();
    let mut invalid = 0;
    let mut generic = 0;
    let mut hits = 0;
    let mut mismatched = 0;
    for (t, (exceptional, rep, exact)) in ts.iter().zip(&rows) {
        invalid += validate_decomposition(t, &rep.decomposition).is_err() as usize;
        if !exact.optimal {
            continue;
        }
        mismatched += (rep.decomposition.len() != exact.pn) as usize;
        if !exceptional {
            generic += 1;
            hits += (rep.method == Method::Pipeline && rep.decomposition.len() == texc(t)) as usize;
        }
    }
    let rate = hits as f64 / generic.max(1) as f64;
    rep.line(
        11,
        invalid == 0 && mismatched == 0 && rate >= PIPELINE_TARGET,
        "pipeline reaches texc without fallback on >= 60% of non-exceptional n in [9,13]",
        format!("{hits}/{generic} = {:.0}% without fallback, {invalid} invalid, {mismatched} differ from pn_exact", rate * 100.0),
    );
}

fn chain(rep: &mut Report) {
    let d = gen_chain_counterexample(2, 3).unwrap();
    let p = excess_profile(&d);
    let pn = pn_exact(&d).unwrap();
    rep.line(12, pn.optimal && pn.pn > p.texc + 1, "chain(2,3) has pn > texc + 1", format!("pn = {}, texc = {}", pn.pn, p.texc));
}

fn main() {
    let mut rep = Report { failed: 0 };
    let start = Instant::now();
    oracle_and_bounds(&mut rep);
    even_orders(&mut rep);
    exceptional_values(&mut rep);
    transitive(&mut rep);
    characterization(&mut rep);
    expander(&mut rep);
    matchings(&mut rep);
    bookkeeping(&mut rep);
    completion(&mut rep);
    end_to_end(&mut rep);
    chain(&mut rep);
    println!("{} of 12 criteria failed ({:.1}s)", rep.failed, start.elapsed().as_secs_f64());
    if rep.failed > 0 {
        std::process::exit(1);
    }
}
