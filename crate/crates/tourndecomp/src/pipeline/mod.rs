//! Constructive decomposition of a tournament into `texc(T)` paths: absorbing edges,
//! an endpoint reserve, cleaning inside the exceptional set, layouts realized as spanning
//! configurations, and a Hamilton-decomposition completion. Any stage that fails hands
//! the instance to the exact solver.

mod cleaning;
mod complete;
mod layout;
mod realize;
mod state;

use std::cell::Cell;

use serde::{Deserialize, Serialize};

use crate::digraph::{bit, bits, validate_decomposition, Digraph, Path, PathDecomposition};
use crate::error::{Error, Result};
use crate::exceptional::classify;
use crate::excess::{excess_profile, texc};
use crate::expander::{Budget, SearchOutcome, Visit};
use crate::solver::{pn_exact_with_budget, DEFAULT_SOLVER_BUDGET};

pub use cleaning::cleaning_lite;
pub use complete::{complete_decomposition, complete_decomposition_with, CompletionPattern, DEFAULT_COMPLETION_CAP};
pub use layout::{build_layouts, choose_endpoint_multiset, choose_x_sets, contract_layout, Layout, LayoutTargets};
pub use realize::{configuration_matches, realize_configuration, Configuration};
pub use state::{
    select_absorbing_sets, select_absorbing_sets_avoiding, select_u_star, AbsorbingSet, DecompositionState, IdentityCheck, PartialCheck,
};

/// Node budget of one pipeline attempt.
pub const DEFAULT_ATTEMPT_BUDGET: u64 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Absorbing budget; defaults to `max(1, n/8)`.
    pub r: Option<usize>,
    /// Vertices with `|exc| > cutoff` join `W`; defaults to `n/4`.
    pub cutoff: Option<usize>,
    /// A side with `N >= threshold` gets no absorbing edges; defaults to `2r`.
    pub threshold: Option<usize>,
    /// Largest allowed `|W|`; defaults to `max(1, n/8)`.
    pub w_cap: Option<usize>,
    /// Number of layouts; defaults to the smallest feasible number.
    pub ell: Option<usize>,
    pub attempt_budget: u64,
    pub completion_cap: usize,
    /// Retry with other `r` and larger cutoffs when an attempt fails.
    pub ladder: bool,
    pub max_attempts: usize,
    /// Hand failed instances to the exact solver.
    pub fallback: bool,
    pub solver_budget: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            r: None,
            cutoff: None,
            threshold: None,
            w_cap: None,
            ell: None,
            attempt_budget: DEFAULT_ATTEMPT_BUDGET,
            completion_cap: DEFAULT_COMPLETION_CAP,
            ladder: true,
            max_attempts: 32,
            fallback: true,
            solver_budget: DEFAULT_SOLVER_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: String,
    pub paths: usize,
    pub good: Option<bool>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttemptTrace {
    pub r: usize,
    pub cutoff: usize,
    pub w: Vec<usize>,
    pub stages: Vec<StageRecord>,
    pub failed_stage: Option<String>,
    pub reason: Option<String>,
    pub nodes: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    Pipeline,
    Solver,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fallback {
    pub stage: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecomposeReport {
    pub decomposition: PathDecomposition,
    pub texc: usize,
    pub class: String,
    pub method: Method,
    pub fallback: Option<Fallback>,
    /// Set when the solver produced the answer.
    pub optimal: Option<bool>,
    pub attempts: Vec<AttemptTrace>,
    /// Bookkeeping identities evaluated along the successful attempt, and how many failed.
    pub identity_checks: usize,
    pub identity_violations: usize,
}

impl DecomposeReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

/// Decomposes a tournament. Exceptional tournaments go straight to the solver; otherwise
/// the pipeline runs (over the parameter ladder if enabled) and the solver only steps in
/// when every attempt fails. The output always validates.
pub fn decompose(t: &Digraph, config: &PipelineConfig) -> Result<DecomposeReport> {
    let class = classify(t)?;
    let tx = texc(t);
    if class.is_exceptional() {
        return solve(
            t,
            config,
            class.to_string(),
            tx,
            Vec::new(),
            Fallback { stage: "routing".into(), reason: format!("{class} tournament") },
        );
    }
    let mut attempts = Vec::new();
    for (r, cutoff) in parameter_ladder(t, config) {
        let (outcome, trace) = run_attempt(t, r, cutoff, config);
        attempts.push(trace);
        if let Some((paths, checks, violations)) = outcome {
            let decomposition = PathDecomposition::new(paths);
            validate_decomposition(t, &decomposition).map_err(|e| Error::Precondition(format!("pipeline output is invalid: {e}")))?;
            return Ok(DecomposeReport {
                decomposition,
                texc: tx,
                class: class.to_string(),
                method: Method::Pipeline,
                fallback: None,
                optimal: None,
                attempts,
                identity_checks: checks,
                identity_violations: violations,
            });
        }
    }
    let last = attempts.last();
    let fb = Fallback {
        stage: last.and_then(|a| a.failed_stage.clone()).unwrap_or_else(|| "none".into()),
        reason: last.and_then(|a| a.reason.clone()).unwrap_or_else(|| "no attempt was possible".into()),
    };
    if !config.fallback {
        return Err(Error::Infeasible(format!("pipeline failed at {}: {}", fb.stage, fb.reason)));
    }
    solve(t, config, class.to_string(), tx, attempts, fb)
}

fn solve(
    t: &Digraph,
    config: &PipelineConfig,
    class: String,
    tx: usize,
    attempts: Vec<AttemptTrace>,
    fb: Fallback,
) -> Result<DecomposeReport> {
    let res = pn_exact_with_budget(t, config.solver_budget)?;
    Ok(DecomposeReport {
        decomposition: res.certificate,
        texc: tx,
        class,
        method: Method::Solver,
        fallback: Some(fb),
        optimal: Some(res.optimal),
        attempts,
        identity_checks: 0,
        identity_violations: 0,
    })
}

/// `(r, cutoff)` pairs to try: the defaults first, then (with the ladder) every other `r`
/// for each cutoff that yields a distinct, small enough exceptional set.
pub fn parameter_ladder(t: &Digraph, config: &PipelineConfig) -> Vec<(usize, usize)> {
    let n = t.n();
    let r0 = config.r.unwrap_or((n / 8).max(1));
    let c0 = config.cutoff.unwrap_or(n / 4);
    if !config.ladder {
        return vec![(r0, c0)];
    }
    let p = excess_profile(t);
    let big = |c: usize| p.exc.iter().enumerate().filter(|(_, &e)| e.unsigned_abs() as usize > c).fold(0u64, |m, (v, _)| m | bit(v));
    let cap = config.w_cap.unwrap_or((n / 8).max(1));
    let mut cutoffs = vec![c0];
    for c in c0 + 1..n {
        if big(c) != big(*cutoffs.last().unwrap()) {
            cutoffs.push(c);
        }
    }
    // The default cutoff survives an oversized W only when nothing else is left, so the
    // trace still records why the attempt failed.
    let mut cutoffs: Vec<usize> =
        cutoffs.into_iter().enumerate().filter(|&(i, c)| i == 0 || big(c).count_ones() as usize <= cap).map(|(_, c)| c).collect();
    if cutoffs.len() > 1 && big(cutoffs[0]).count_ones() as usize > cap {
        cutoffs.remove(0);
    }
    let mut rs = vec![r0];
    rs.extend((1..=n / 2).filter(|&r| r != r0));
    let mut out = Vec::new();
    for &c in &cutoffs {
        for &r in &rs {
            out.push((r, c));
        }
    }
    out.truncate(config.max_attempts.max(1));
    out
}

struct Ctx<'a> {
    layouts: &'a [Layout],
    targets: &'a LayoutTargets,
    cap: usize,
    checks: Cell<usize>,
    violations: Cell<usize>,
    completions: Cell<usize>,
}

type Found = (DecompositionState, Vec<Path>);

/// One pipeline run with fixed `r` and cutoff. Returns the paths and identity counts on success.
pub fn run_attempt(t: &Digraph, r: usize, cutoff: usize, config: &PipelineConfig) -> (Option<(Vec<Path>, usize, usize)>, AttemptTrace) {
    let mut trace = AttemptTrace { r, cutoff, w: Vec::new(), stages: Vec::new(), failed_stage: None, reason: None, nodes: 0 };
    let mut budget = Budget::new(config.attempt_budget);
    let result = attempt_inner(t, r, cutoff, config, &mut trace, &mut budget);
    trace.nodes = budget.used();
    match result {
        Ok(found) => (Some(found), trace),
        Err((stage, e)) => {
            trace.failed_stage = Some(stage.into());
            trace.reason = Some(e);
            (None, trace)
        }
    }
}

type StageResult<T> = std::result::Result<T, (&'static str, String)>;

fn at<T>(stage: &'static str, r: Result<T>) -> StageResult<T> {
    r.map_err(|e| (stage, e.to_string()))
}

fn attempt_inner(
    t: &Digraph,
    r: usize,
    cutoff: usize,
    config: &PipelineConfig,
    trace: &mut AttemptTrace,
    budget: &mut Budget,
) -> StageResult<(Vec<Path>, usize, usize)> {
    let n = t.n();
    let p = excess_profile(t);
    let big = (0..n).filter(|&v| p.exc[v].unsigned_abs() as usize > cutoff).fold(0u64, |m, v| m | bit(v));
    let threshold = config.threshold.unwrap_or(2 * r);
    let (wa, a) = at("absorbing", select_absorbing_sets_avoiding(t, r, threshold, big))?;
    let w_a = wa.iter().fold(0u64, |m, &v| m | bit(v));
    let w = big | w_a;
    trace.w = bits(w).collect();
    let cap = config.w_cap.unwrap_or((n / 8).max(1));
    if w.count_ones() as usize > cap {
        return Err(("absorbing", format!("|W| = {} exceeds the cap {cap}", w.count_ones())));
    }
    let w_star = bits(big & !w_a).filter(|&v| p.exc[v].unsigned_abs() as usize + 2 * r > n - 1).fold(0u64, |m, v| m | bit(v));
    trace.stages.push(StageRecord {
        stage: "absorbing".into(),
        paths: 0,
        good: None,
        detail: format!("|W| = {}, |W_A| = {}, |A+| = {}, |A-| = {}", w.count_ones(), wa.len(), a.a_plus.len(), a.a_minus.len()),
    });
    let mut state = at("reserve", DecompositionState::new(t, r, w, w_star, w_a, a))?;
    trace.stages.push(StageRecord {
        stage: "reserve".into(),
        paths: 0,
        good: None,
        detail: format!("|U*| = {}", state.u_star.count_ones()),
    });

    let cleaned = at("cleaning", cleaning_lite(&mut state, budget))?;
    trace.stages.push(StageRecord {
        stage: "cleaning".into(),
        paths: cleaned,
        good: Some(state.accumulated_good()),
        detail: String::new(),
    });
    if !state.accumulated_good() {
        return Err(("cleaning", "cleaning paths are not good".into()));
    }

    let (x_plus, x_minus) = at("layouts", choose_x_sets(&state))?;
    let targets = at("layouts", LayoutTargets::new(&state, x_plus, x_minus))?;
    let layouts = at("layouts", build_layouts(&state, &targets, config.ell, budget))?;
    trace.stages.push(StageRecord {
        stage: "layouts".into(),
        paths: targets.s(),
        good: None,
        detail: format!("{} layouts", layouts.len()),
    });
    for l in &layouts {
        let c = contract_layout(l, state.w);
        if c.vertex_mask() != l.vertex_mask() & !state.w || c.unfixed().len() != l.unfixed().len() {
            return Err(("layouts", "contraction changed the unfixed part of a layout".into()));
        }
    }

    let ctx = Ctx {
        layouts: &layouts,
        targets: &targets,
        cap: config.completion_cap,
        checks: Cell::new(0),
        violations: Cell::new(0),
        completions: Cell::new(0),
    };
    let base_checks = state.identities.len();
    let base_violations = state.identity_violations().len();
    let outcome = at("configurations", realize_rec(&ctx, 0, &state, budget))?;
    let (fin, p3) = match outcome {
        SearchOutcome::Found(x) => x,
        SearchOutcome::Absent => {
            return Err(("configurations", format!("none of {} realizations of the layouts admits a completion", ctx.completions.get())))
        }
        SearchOutcome::Timeout => return Err(("configurations", "budget exhausted while realizing layouts".into())),
    };
    let p2 = fin.accumulated.len() - state.accumulated.len();
    trace.stages.push(StageRecord {
        stage: "configurations".into(),
        paths: p2,
        good: Some(fin.accumulated_good()),
        detail: format!("texc after = {}", texc(&fin.remaining)),
    });
    trace.stages.push(StageRecord { stage: "completion".into(), paths: p3.len(), good: None, detail: String::new() });
    let mut all = fin.accumulated.clone();
    all.extend(p3);
    if all.len() != texc(t) {
        return Err(("completion", format!("{} paths instead of texc = {}", all.len(), texc(t))));
    }
    // Identities from every explored branch count, not only the one that completed.
    let checks = base_checks + ctx.checks.get();
    let violations = base_violations + ctx.violations.get();
    Ok((all, checks, violations))
}

fn realize_rec(ctx: &Ctx<'_>, i: usize, state: &DecompositionState, budget: &mut Budget) -> Result<SearchOutcome<Found>> {
    if i == ctx.layouts.len() {
        ctx.completions.set(ctx.completions.get() + 1);
        let vprime = state.remaining.vertex_mask() & !state.w1();
        let (xp, xm) = (ctx.targets.x_plus, ctx.targets.x_minus);
        let pattern = CompletionPattern {
            w1: state.w1(),
            a: state.a.clone(),
            x_plus: xp & !xm,
            x_minus: xm & !xp,
            x_star: xp & xm,
            x_zero: vprime & !(xp | xm),
            r: state.r,
        };
        return Ok(complete_decomposition_with(&state.remaining, &pattern, ctx.cap, budget)?.map(|p| (state.clone(), p.paths)));
    }
    let layout = &ctx.layouts[i];
    let mut found: Option<Result<Found>> = None;
    let outcome = realize::realize_each(&state.remaining, layout, state.w, budget, &mut |c, budget| {
        if !configuration_matches(&state.remaining, layout, c, state.w) {
            found = Some(Err(Error::Precondition("configuration does not match its layout".into())));
            return Visit::Stop;
        }
        let mut next = state.clone();
        let before = next.identities.len();
        if let Err(e) = next.apply_paths(&c.paths) {
            found = Some(Err(e));
            return Visit::Stop;
        }
        ctx.checks.set(ctx.checks.get() + next.identities.len() - before);
        ctx.violations.set(ctx.violations.get() + next.identities[before..].iter().filter(|c| !c.holds).count());
        match realize_rec(ctx, i + 1, &next, budget) {
            Ok(SearchOutcome::Found(x)) => {
                found = Some(Ok(x));
                Visit::Stop
            }
            Ok(SearchOutcome::Absent) => Visit::Continue,
            Ok(SearchOutcome::Timeout) => Visit::Timeout,
            Err(e) => {
                found = Some(Err(e));
                Visit::Stop
            }
        }
    })?;
    match (outcome, found) {
        (SearchOutcome::Found(()), Some(Ok(x))) => Ok(SearchOutcome::Found(x)),
        (_, Some(Err(e))) => Err(e),
        (SearchOutcome::Timeout, _) => Ok(SearchOutcome::Timeout),
        _ => Ok(SearchOutcome::Absent),
    }
}
