//! Exhaustive and branch-and-bound engines: theorem verification over all
//! graphs of a small order, exact extremal numbers, and empirical
//! minimum-degree thresholds.
//!
//! Parallel runs split the enumeration into shards. The reported witness is
//! always the first one in sequential enumeration order, so verdicts and
//! witnesses do not depend on the thread count. Statistics of a run that
//! stops early may.

use std::fmt;
use std::ops::ControlFlow;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::gen_family;
use crate::embedding::{check_free, check_free_through, is_free};
use crate::enumerate::{shards, EnumStats, Mode, Shard};
use crate::error::{Error, Result};
use crate::graph::{pairs, ColoredGraph, GREEN};
use crate::homomorphism::{find_hom_rk, find_hom_rk_minus, HomOutcome, HomSearch};
use crate::threshold::Threshold;

/// Largest order accepted by [`compute_ex`].
pub const EX_BOUND: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportKind {
    TheoremVerify,
    ExValue,
    Threshold,
}

/// `Odd`: `F_{2r+1}`-free graphs map to `RK_r`. `Even`: `F_{2r}`-free graphs map to `RK_r^-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremKind {
    Odd,
    Even,
}

impl TheoremKind {
    pub fn family_order(self, r: usize) -> usize {
        match self {
            TheoremKind::Odd => 2 * r + 1,
            TheoremKind::Even => 2 * r,
        }
    }

    pub fn threshold(self, r: usize) -> Result<Threshold> {
        let r = u32::try_from(r)
            .map_err(|_| Error::InvalidParameter(format!("r = {r} is too large")))?;
        match self {
            TheoremKind::Odd => Threshold::odd(r),
            TheoremKind::Even => Threshold::even(r),
        }
    }

    /// Runs the homomorphism search named by the conclusion.
    pub fn conclusion(self, g: &ColoredGraph, r: usize) -> Result<HomSearch> {
        match self {
            TheoremKind::Odd => find_hom_rk(g, r),
            TheoremKind::Even => find_hom_rk_minus(g, r),
        }
    }
}

impl fmt::Display for TheoremKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TheoremKind::Odd => "odd",
            TheoremKind::Even => "even",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorem: Option<TheoremKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<u8>,
}

/// The exact threshold and the integer degree cutoff it induces at order `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdInfo {
    pub threshold: Threshold,
    /// Least integer `d` with `d > threshold·n`.
    pub cutoff: i64,
}

impl ThresholdInfo {
    pub fn new(threshold: Threshold, n: usize) -> Self {
        ThresholdInfo {
            threshold,
            cutoff: threshold.cutoff(n as i64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Verified,
    Counterexample {
        /// Minimised counterexample.
        graph: ColoredGraph,
        /// The graph as first found by the enumeration.
        found: ColoredGraph,
        min_degree: u32,
        diagnosis: String,
    },
    /// The homomorphism search hit its node budget on `graph`.
    Inconclusive {
        graph: ColoredGraph,
    },
    Value {
        value: Option<i64>,
        witness: Option<ColoredGraph>,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Graphs visited (search nodes for branch and bound).
    pub enumerated: u64,
    /// Graphs satisfying the hypothesis. Threshold probes skip graphs that
    /// cannot beat the running maximum, so there it counts the improvements.
    pub passing_hypothesis: u64,
    pub wall_time_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub kind: ReportKind,
    pub parameters: Parameters,
    pub outcome: Outcome,
    pub stats: SearchStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<ThresholdInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl SearchReport {
    pub fn is_verified(&self) -> bool {
        self.outcome == Outcome::Verified
    }

    pub fn is_counterexample(&self) -> bool {
        matches!(self.outcome, Outcome::Counterexample { .. })
    }

    pub fn value(&self) -> Option<i64> {
        match self.outcome {
            Outcome::Value { value, .. } => value,
            _ => None,
        }
    }

    pub fn witness(&self) -> Option<&ColoredGraph> {
        match &self.outcome {
            Outcome::Value { witness, .. } => witness.as_ref(),
            Outcome::Counterexample { graph, .. } | Outcome::Inconclusive { graph } => Some(graph),
            Outcome::Verified => None,
        }
    }
}

/// `threads == 0` means the rayon default; `1` runs on the calling thread.
fn in_pool<R: Send>(threads: usize, op: impl FnOnce() -> R + Send) -> Result<R> {
    if threads == 1 {
        return Ok(op());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    Ok(pool.install(op))
}

struct ShardRun<T> {
    stats: EnumStats,
    passing: u64,
    hit: Option<T>,
}

/// Runs `work` over all shards; once shard `i` reports a hit, shards after
/// `i` are told to stop. The first hit in shard order wins.
fn first_hit<T: Send>(
    shards: &[Shard],
    threads: usize,
    work: impl Fn(&Shard, &dyn Fn() -> bool) -> ShardRun<T> + Sync,
) -> Result<(SearchStats, Option<T>)> {
    let best = AtomicUsize::new(usize::MAX);
    let runs: Vec<ShardRun<T>> = in_pool(threads, || {
        shards
            .par_iter()
            .enumerate()
            .map(|(i, shard)| {
                let cancelled = || best.load(Ordering::Relaxed) < i;
                let run = work(shard, &cancelled);
                if run.hit.is_some() {
                    best.fetch_min(i, Ordering::Relaxed);
                }
                run
            })
            .collect()
    })?;
    let mut stats = SearchStats::default();
    let mut hit = None;
    for run in runs {
        stats.enumerated += run.stats.visited;
        stats.passing_hypothesis += run.passing;
        if hit.is_none() {
            hit = run.hit;
        }
    }
    Ok((stats, hit))
}

enum Failure {
    NoHom(ColoredGraph),
    Budget(ColoredGraph),
}

struct Hypothesis {
    kind: TheoremKind,
    r: usize,
    n: usize,
    family: Vec<ColoredGraph>,
    threshold: Threshold,
}

impl Hypothesis {
    fn new(kind: TheoremKind, r: usize, n: usize) -> Result<Self> {
        let threshold = kind.threshold(r)?;
        Ok(Hypothesis {
            kind,
            r,
            n,
            family: gen_family(kind.family_order(r))?,
            threshold,
        })
    }

    /// Degree filter first; it rejects almost everything.
    fn holds(&self, g: &ColoredGraph) -> Option<u32> {
        let d = g.min_degree().ok()?;
        (self.threshold.exceeded_by(i64::from(d), self.n as i64) && is_free(g, &self.family))
            .then_some(d)
    }

    fn is_counterexample(&self, g: &ColoredGraph) -> bool {
        self.holds(g).is_some()
            && matches!(
                self.kind.conclusion(g, self.r).map(|h| h.outcome),
                Ok(HomOutcome::NotFound)
            )
    }
}

pub fn verify_theorem_odd(r: usize, n: usize, mode: Mode, threads: usize) -> Result<SearchReport> {
    verify_theorem(TheoremKind::Odd, r, n, mode, threads)
}

pub fn verify_theorem_even(r: usize, n: usize, mode: Mode, threads: usize) -> Result<SearchReport> {
    verify_theorem(TheoremKind::Even, r, n, mode, threads)
}

/// Checks the conclusion on every graph of order `n` satisfying the
/// hypothesis: family-free with minimum degree strictly above threshold.
pub fn verify_theorem(
    kind: TheoremKind,
    r: usize,
    n: usize,
    mode: Mode,
    threads: usize,
) -> Result<SearchReport> {
    let start = Instant::now();
    let hyp = Hypothesis::new(kind, r, n)?;
    let shards = shards(n, mode)?;
    let (mut stats, hit) = first_hit(&shards, threads, |shard, cancelled| {
        let mut passing = 0;
        let mut hit = None;
        let stats = shard.for_each(|g| {
            if cancelled() {
                return ControlFlow::Break(());
            }
            if hyp.holds(g).is_none() {
                return ControlFlow::Continue(());
            }
            passing += 1;
            match kind.conclusion(g, r).map(|h| h.outcome) {
                Ok(HomOutcome::Found { .. }) => ControlFlow::Continue(()),
                Ok(HomOutcome::NotFound) | Err(_) => {
                    hit = Some(Failure::NoHom(g.clone()));
                    ControlFlow::Break(())
                }
                Ok(HomOutcome::BudgetExceeded) => {
                    hit = Some(Failure::Budget(g.clone()));
                    ControlFlow::Break(())
                }
            }
        });
        ShardRun {
            stats,
            passing,
            hit,
        }
    })?;
    let outcome = match hit {
        None => Outcome::Verified,
        Some(Failure::Budget(graph)) => Outcome::Inconclusive { graph },
        Some(Failure::NoHom(found)) => {
            let graph = minimize_counterexample(&found, |g| hyp.is_counterexample(g));
            // Re-check the emitted graph on the independent paths.
            let d = graph.min_degree()?;
            let confirmed = check_free(&graph, &hyp.family).is_none()
                && hyp.threshold.exceeded_by(i64::from(d), n as i64)
                && kind.conclusion(&graph, r)?.exists() == Some(false);
            if !confirmed {
                return Err(Error::InvalidParameter(
                    "counterexample failed re-verification".into(),
                ));
            }
            let target = match kind {
                TheoremKind::Odd => format!("RK_{r}"),
                TheoremKind::Even => format!("RK_{r}^-"),
            };
            Outcome::Counterexample {
                diagnosis: format!(
                    "F_{}-free, min degree {d} > {}·{n}, no homomorphism to {target}",
                    kind.family_order(r),
                    hyp.threshold
                ),
                graph,
                found,
                min_degree: d,
            }
        }
    };
    stats.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    Ok(SearchReport {
        kind: ReportKind::TheoremVerify,
        parameters: Parameters {
            theorem: Some(kind),
            r: Some(r),
            n,
            family: Some(format!("F:{}", kind.family_order(r))),
            mode: Some(mode),
            cap: None,
        },
        outcome,
        stats,
        threshold: Some(ThresholdInfo::new(hyp.threshold, n)),
        note: None,
    })
}

/// Lowers single weights by one, in pair order, while `still_bad` holds,
/// until no pair can be lowered.
pub fn minimize_counterexample(
    g: &ColoredGraph,
    still_bad: impl Fn(&ColoredGraph) -> bool,
) -> ColoredGraph {
    let mut cur = g.clone();
    loop {
        let mut changed = false;
        for (x, y) in pairs(cur.order()) {
            let w = cur.weight(x, y);
            if w == GREEN {
                continue;
            }
            cur.set_weight(x, y, w - 1).expect("valid pair");
            if still_bad(&cur) {
                changed = true;
            } else {
                cur.set_weight(x, y, w).expect("valid pair");
            }
        }
        if !changed {
            return cur;
        }
    }
}

/// Exact maximum of `e(G)` over family-free graphs of order `n` with
/// weights in `0..=cap`. The value is `None` when even the all-green graph
/// contains a member.
pub fn compute_ex(n: usize, family: &[ColoredGraph], cap: u8) -> Result<SearchReport> {
    if n > EX_BOUND {
        return Err(Error::BoundExceeded {
            what: "extremal number search",
            n,
            bound: EX_BOUND,
        });
    }
    if !(1..=2).contains(&cap) {
        return Err(Error::InvalidParameter(format!(
            "weight cap must be 1 or 2, got {cap}"
        )));
    }
    let start = Instant::now();
    let mut g = ColoredGraph::new(n)?;
    let mut bb = ExSearch {
        family,
        cap,
        pairs: pairs(n).collect(),
        best: None,
        nodes: 0,
    };
    if is_free(&g, family) {
        bb.best = Some((0, g.clone()));
        bb.dfs(&mut g, 0, 0);
    }
    let (value, witness) = match bb.best {
        Some((v, w)) => (Some(i64::from(v)), Some(w)),
        None => (None, None),
    };
    Ok(SearchReport {
        kind: ReportKind::ExValue,
        parameters: Parameters {
            n,
            cap: Some(cap),
            ..Parameters::default()
        },
        outcome: Outcome::Value { value, witness },
        stats: SearchStats {
            enumerated: bb.nodes,
            passing_hypothesis: 0,
            wall_time_ms: Some(start.elapsed().as_millis() as u64),
        },
        threshold: None,
        note: None,
    })
}

struct ExSearch<'a> {
    family: &'a [ColoredGraph],
    cap: u8,
    pairs: Vec<(usize, usize)>,
    best: Option<(u32, ColoredGraph)>,
    nodes: u64,
}

impl ExSearch<'_> {
    /// Pairs before `idx` are fixed; the rest are green. The graph is free.
    fn dfs(&mut self, g: &mut ColoredGraph, idx: usize, sum: u32) {
        self.nodes += 1;
        let best = self.best.as_ref().map_or(0, |b| b.0);
        if sum > best {
            self.best = Some((sum, g.clone()));
        }
        let remaining = (self.pairs.len() - idx) as u32;
        if idx == self.pairs.len()
            || sum + u32::from(self.cap) * remaining <= self.best.as_ref().map_or(0, |b| b.0)
        {
            return;
        }
        let (x, y) = self.pairs[idx];
        for w in (1..=self.cap).rev() {
            g.set_weight(x, y, w).expect("valid pair");
            // The graph was free with this pair green, so any new copy uses it.
            if check_free_through(g, self.family, (x, y), 1).is_none() {
                self.dfs(g, idx + 1, sum + u32::from(w));
            }
            let best = self.best.as_ref().map_or(0, |b| b.0);
            if sum + u32::from(w - 1) + u32::from(self.cap) * (remaining - 1) <= best {
                g.set_weight(x, y, GREEN).expect("valid pair");
                return;
            }
        }
        g.set_weight(x, y, GREEN).expect("valid pair");
        self.dfs(g, idx + 1, sum);
    }
}

/// Running maximum degree and the first graph attaining it.
type Best = Option<(u32, ColoredGraph)>;

/// Largest minimum degree among family-free graphs of order `n` that admit
/// no homomorphism into the target of `kind`. A finite-order lower-bound
/// probe for the threshold, not the threshold itself.
pub fn empirical_threshold(
    n: usize,
    r: usize,
    kind: TheoremKind,
    mode: Mode,
    threads: usize,
) -> Result<SearchReport> {
    let start = Instant::now();
    let threshold = kind.threshold(r)?;
    let family = gen_family(kind.family_order(r))?;
    let shards = shards(n, mode)?;
    let runs: Vec<(EnumStats, u64, Best)> = in_pool(threads, || {
        shards
            .par_iter()
            .map(|shard| {
                let mut best: Best = None;
                let mut qualifying = 0;
                let stats = shard.for_each(|g| {
                    let Ok(d) = g.min_degree() else {
                        return ControlFlow::Continue(());
                    };
                    // Keep the first graph attaining each new maximum.
                    if best.as_ref().is_some_and(|b| d <= b.0) || !is_free(g, &family) {
                        return ControlFlow::Continue(());
                    }
                    if kind.conclusion(g, r).map(|h| h.outcome) == Ok(HomOutcome::NotFound) {
                        qualifying += 1;
                        best = Some((d, g.clone()));
                    }
                    ControlFlow::Continue(())
                });
                (stats, qualifying, best)
            })
            .collect()
    })?;
    let mut stats = SearchStats::default();
    let mut best: Best = None;
    for (s, q, b) in runs {
        stats.enumerated += s.visited;
        stats.passing_hypothesis += q;
        if let Some((d, g)) = b {
            if best.as_ref().is_none_or(|cur| d > cur.0) {
                best = Some((d, g));
            }
        }
    }
    stats.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    let (value, witness) = match best {
        Some((d, g)) => (Some(i64::from(d)), Some(g)),
        None => (None, None),
    };
    Ok(SearchReport {
        kind: ReportKind::Threshold,
        parameters: Parameters {
            theorem: Some(kind),
            r: Some(r),
            n,
            family: Some(format!("F:{}", kind.family_order(r))),
            mode: Some(mode),
            cap: None,
        },
        outcome: Outcome::Value { value, witness },
        stats,
        threshold: Some(ThresholdInfo::new(threshold, n)),
        note: Some(
            "finite-order probe: the value is a lower bound on threshold·n at this order only"
                .into(),
        ),
    })
}

/// A non-negative rational in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fraction {
    pub num: i64,
    pub den: i64,
}

impl Fraction {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den > 0, "denominator must be positive");
        let g = num.gcd(&den).max(1);
        Fraction {
            num: num / g,
            den: den / g,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Limiting density of `F_t`-free graphs: `2(r-1)/r` for `t = 2r+1` and
/// `2(3r-5)/(3r-2)` for `t = 2r`. Defined for `t >= 4`.
pub fn reference_density(t: usize) -> Option<Fraction> {
    if t < 4 {
        return None;
    }
    let r = (t / 2) as i64;
    Some(if t % 2 == 1 {
        Fraction::new(2 * (r - 1), r)
    } else {
        Fraction::new(2 * (3 * r - 5), 3 * r - 2)
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityRow {
    pub name: String,
    pub n: usize,
    pub edge_weight: u32,
    /// `2e/n^2`.
    pub density: Fraction,
    pub reference: Option<Fraction>,
}

/// `2e/n^2` for each construction beside the reference density of `F_t`.
/// Report only. No family (`None`) gives an empty table.
pub fn density_report(
    family_t: Option<usize>,
    constructions: &[(String, ColoredGraph)],
) -> Vec<DensityRow> {
    let Some(t) = family_t else {
        return Vec::new();
    };
    let reference = reference_density(t);
    constructions
        .iter()
        .filter(|(_, g)| g.order() > 0)
        .map(|(name, g)| {
            let n = g.order();
            let e = g.edge_weight_sum();
            DensityRow {
                name: name.clone(),
                n,
                edge_weight: e,
                density: Fraction::new(2 * i64::from(e), (n * n) as i64),
                reference,
            }
        })
        .collect()
}
