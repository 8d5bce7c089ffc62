//! Structural audits for `F_{2r}`-free graphs: extremal completion, secure
//! edges, wicked triangles, and the class decomposition that turns an
//! extremal graph above the `(14r-24)/(7r-5)` threshold into an `RK_r^-`
//! certificate.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::constructions::{gen_family, gen_j};
use crate::embedding::{check_free, check_free_through, find_embedding, Embedding, Violation};
use crate::error::{Error, Result};
use crate::graph::{bits, pairs, ColoredGraph, Layers, BLUE, RED};
use crate::homomorphism::{canonical_rk_minus, verify_certificate, HomCertificate, Target};
use crate::threshold::Threshold;
use crate::util;

/// `(x, y, z)` with `xy` red and `xz`, `yz` green or blue; `x < y`.
pub type Triple = (usize, usize, usize);

/// Order in which completion sweeps visit the pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "snake_case")]
pub enum CompletionPolicy {
    /// Row-major pair order on every sweep.
    Lexicographic,
    /// A fresh seeded shuffle of the pairs on every sweep.
    Shuffled { seed: u64 },
}

pub fn extremal_completion(g: &ColoredGraph, family: &[ColoredGraph]) -> Result<ColoredGraph> {
    extremal_completion_with(g, family, CompletionPolicy::Lexicographic)
}

/// Raises single pair weights by one while the graph stays family-free,
/// sweeping until a full sweep changes nothing. The result dominates `g`
/// pointwise and admits no single `+1` increment.
pub fn extremal_completion_with(
    g: &ColoredGraph,
    family: &[ColoredGraph],
    policy: CompletionPolicy,
) -> Result<ColoredGraph> {
    if let Some(v) = check_free(g, family) {
        return Err(Error::NotFamilyFree { member: v.member });
    }
    let mut out = g.clone();
    let mut order: Vec<(usize, usize)> = pairs(g.order()).collect();
    let mut rng = match policy {
        CompletionPolicy::Shuffled { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        CompletionPolicy::Lexicographic => None,
    };
    loop {
        if let Some(rng) = rng.as_mut() {
            order.shuffle(rng);
        }
        let mut changed = false;
        for &(x, y) in &order {
            let w = out.weight(x, y);
            if w == RED {
                continue;
            }
            out.set_weight(x, y, w + 1)?;
            // Any new copy must use this pair at the raised weight.
            if check_free_through(&out, family, (x, y), w + 1).is_some() {
                out.set_weight(x, y, w)?;
            } else {
                changed = true;
            }
        }
        if !changed {
            return Ok(out);
        }
    }
}

/// Family-free and no single pair can be raised by one without creating a member.
pub fn is_extremal(g: &ColoredGraph, family: &[ColoredGraph]) -> bool {
    if check_free(g, family).is_some() {
        return false;
    }
    let mut h = g.clone();
    pairs(g.order()).all(|(x, y)| {
        let w = h.weight(x, y);
        if w == RED {
            return true;
        }
        h.set_weight(x, y, w + 1).expect("valid pair");
        let blocked = check_free_through(&h, family, (x, y), w + 1).is_some();
        h.set_weight(x, y, w).expect("valid pair");
        blocked
    })
}

pub fn find_wicked(g: &ColoredGraph, blue_only: bool) -> Vec<Triple> {
    let l = g.layers();
    let mut out = Vec::new();
    for x in 0..l.n {
        for y in bits(l.ge2[x] & !((2u64 << x) - 1)) {
            let apex = if blue_only {
                l.blue(x) & l.blue(y)
            } else {
                !l.ge2[x] & !l.ge2[y] & l.all() & !(1 << x) & !(1 << y)
            };
            out.extend(bits(apex).map(|z| (x, y, z)));
        }
    }
    out
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecureAudit {
    pub insecure_blue_edges: Vec<(usize, usize)>,
    pub insecure_green_edges: Vec<(usize, usize)>,
}

impl SecureAudit {
    pub fn is_clean(&self) -> bool {
        self.insecure_blue_edges.is_empty() && self.insecure_green_edges.is_empty()
    }
}

/// A red `(r-2)`-clique whose common red neighbourhood contains `x` and `y`.
pub fn secure_witness(g: &ColoredGraph, r: usize, x: usize, y: usize) -> Option<Vec<usize>> {
    secure_witness_in(&g.layers(), r, x, y)
}

fn secure_witness_in(l: &Layers, r: usize, x: usize, y: usize) -> Option<Vec<usize>> {
    util::find_clique(&l.ge2[..l.n], l.ge2[x] & l.ge2[y], r - 2)
}

/// Lists the blue and green pairs that are not secure.
pub fn secure_audit(g: &ColoredGraph, r: usize) -> Result<SecureAudit> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!(
            "secure audit needs r >= 2, got {r}"
        )));
    }
    let l = g.layers();
    let mut audit = SecureAudit::default();
    for (x, y) in pairs(g.order()) {
        let w = l.weight(x, y);
        if w == RED || secure_witness_in(&l, r, x, y).is_some() {
            continue;
        }
        if w == BLUE {
            audit.insecure_blue_edges.push((x, y));
        } else {
            audit.insecure_green_edges.push((x, y));
        }
    }
    Ok(audit)
}

/// Components of the "weight at most 1" relation, sorted by least vertex,
/// and whether that relation is transitive (each component a clique in it).
pub fn weight_classes(g: &ColoredGraph) -> (bool, Vec<Vec<usize>>) {
    let l = g.layers();
    let mut seen = 0u64;
    let mut classes = Vec::new();
    let mut transitive = true;
    for start in 0..l.n {
        if seen & (1 << start) != 0 {
            continue;
        }
        let mut comp = 1u64 << start;
        let mut frontier = comp;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let next = l.all() & !l.ge2[v] & !comp;
            comp |= next;
            frontier |= next;
        }
        seen |= comp;
        for v in bits(comp) {
            if l.ge2[v] & comp != 0 {
                transitive = false;
            }
        }
        classes.push(bits(comp).collect());
    }
    (transitive, classes)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Preconditions {
    pub r: usize,
    pub threshold: Threshold,
    /// Smallest degree that strictly exceeds the threshold at this order.
    pub degree_cutoff: i64,
    pub min_degree: Option<u32>,
    pub degree_ok: bool,
    pub family_free: bool,
    pub violation: Option<Violation>,
    pub extremal: bool,
}

impl Preconditions {
    pub fn evaluate(g: &ColoredGraph, r: usize) -> Result<Self> {
        let threshold = Threshold::even(r as u32)?;
        let family = gen_family(2 * r)?;
        let n = g.order() as i64;
        let min_degree = g.min_degree().ok();
        let degree_ok = min_degree.is_some_and(|d| threshold.exceeded_by(i64::from(d), n));
        let violation = check_free(g, &family);
        let family_free = violation.is_none();
        let extremal = family_free && is_extremal(g, &family);
        Ok(Preconditions {
            r,
            threshold,
            degree_cutoff: threshold.cutoff(n),
            min_degree,
            degree_ok,
            family_free,
            violation,
            extremal,
        })
    }

    pub fn all_hold(&self) -> bool {
        self.degree_ok && self.family_free && self.extremal
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassInfo {
    pub vertices: Vec<usize>,
    pub has_blue: bool,
    /// For classes spanning a blue edge: the two green cliques `(B_i, C_i)`.
    pub split: Option<(Vec<usize>, Vec<usize>)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecomposeSuccess {
    pub m: usize,
    pub s: usize,
    /// Blue-spanning classes first, then the green ones.
    pub classes: Vec<ClassInfo>,
    /// Order-`r` target: a blue matching of size `s`, every other pair red.
    pub target: ColoredGraph,
    pub target_certificate: HomCertificate,
    pub certificate: HomCertificate,
}

/// The step at which the decomposition stopped, with a witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum FailureDiagnosis {
    WickedTriangle { triple: Triple },
    ClassCount { m: usize, s: usize, r: usize },
    NoBlueClass { m: usize },
    BlueTriangle { class: usize, triangle: [usize; 3] },
    OddBlueCycle { class: usize, cycle: Vec<usize> },
    InvalidCertificate,
}

impl FailureDiagnosis {
    pub fn step(&self) -> u8 {
        match self {
            FailureDiagnosis::WickedTriangle { .. } => 1,
            FailureDiagnosis::ClassCount { .. } | FailureDiagnosis::NoBlueClass { .. } => 4,
            FailureDiagnosis::BlueTriangle { .. } | FailureDiagnosis::OddBlueCycle { .. } => 5,
            FailureDiagnosis::InvalidCertificate => 6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DecomposeOutcome {
    Success(DecomposeSuccess),
    Failure(FailureDiagnosis),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub preconditions: Preconditions,
    pub outcome: DecomposeOutcome,
}

impl Decomposition {
    pub fn success(&self) -> Option<&DecomposeSuccess> {
        match &self.outcome {
            DecomposeOutcome::Success(s) => Some(s),
            DecomposeOutcome::Failure(_) => None,
        }
    }

    pub fn failure(&self) -> Option<&FailureDiagnosis> {
        match &self.outcome {
            DecomposeOutcome::Failure(f) => Some(f),
            DecomposeOutcome::Success(_) => None,
        }
    }

    /// A failure on an input satisfying every hypothesis contradicts the theorem.
    pub fn is_counterexample(&self) -> bool {
        self.preconditions.all_hold() && self.failure().is_some()
    }
}

/// Runs the class decomposition:
/// 1. reject wicked triangles;
/// 2. take classes of the relation `w <= 1`;
/// 3. count the classes spanning a blue edge (`s`) among all `m`;
/// 4. require `m + s = r` and `s >= 1`;
/// 5. split each blue class into two green cliques (its blue graph must be
///    triangle-free and bipartite);
/// 6. assemble and verify the certificate.
///
/// Preconditions are evaluated and reported, never assumed.
pub fn decompose(g: &ColoredGraph, r: usize) -> Result<Decomposition> {
    let preconditions = Preconditions::evaluate(g, r)?;
    let outcome = match run_decomposition(g, r) {
        Ok(success) => DecomposeOutcome::Success(success),
        Err(diagnosis) => DecomposeOutcome::Failure(diagnosis),
    };
    Ok(Decomposition {
        preconditions,
        outcome,
    })
}

fn run_decomposition(
    g: &ColoredGraph,
    r: usize,
) -> std::result::Result<DecomposeSuccess, FailureDiagnosis> {
    if let Some(&triple) = find_wicked(g, false).first() {
        return Err(FailureDiagnosis::WickedTriangle { triple });
    }
    let l = g.layers();
    let (_, raw_classes) = weight_classes(g);
    let (blue, green): (Vec<_>, Vec<_>) = raw_classes.into_iter().partition(|c| {
        let mask = c.iter().fold(0u64, |m, &v| m | (1 << v));
        c.iter().any(|&v| l.blue(v) & mask != 0)
    });
    let m = blue.len() + green.len();
    let s = blue.len();
    if m + s != r {
        return Err(FailureDiagnosis::ClassCount { m, s, r });
    }
    if s == 0 {
        return Err(FailureDiagnosis::NoBlueClass { m });
    }

    let mut classes = Vec::with_capacity(m);
    for (i, class) in blue.iter().enumerate() {
        let (b, c) = split_blue_class(&l, class).map_err(|e| match e {
            SplitError::Triangle(t) => FailureDiagnosis::BlueTriangle {
                class: i,
                triangle: t,
            },
            SplitError::OddCycle(cycle) => FailureDiagnosis::OddBlueCycle { class: i, cycle },
        })?;
        classes.push(ClassInfo {
            vertices: class.clone(),
            has_blue: true,
            split: Some((b, c)),
        });
    }
    classes.extend(green.into_iter().map(|vertices| ClassInfo {
        vertices,
        has_blue: false,
        split: None,
    }));

    // Target vertices: B_1, C_1, .., B_s, C_s, then one per green class.
    let mut parts: Vec<Vec<usize>> = Vec::with_capacity(r);
    for info in &classes {
        match &info.split {
            Some((b, c)) => {
                parts.push(b.clone());
                parts.push(c.clone());
            }
            None => parts.push(info.vertices.clone()),
        }
    }
    let target = ColoredGraph::from_fn(r, |x, y| {
        if y == x + 1 && x % 2 == 0 && y < 2 * s {
            BLUE
        } else {
            RED
        }
    })
    .expect("order r is small");
    let target_certificate = HomCertificate {
        classes: parts.clone(),
        target: Target::General {
            graph: target.clone(),
        },
    };
    let certificate = HomCertificate {
        classes: canonical_rk_minus(parts),
        target: Target::RkMinus { r },
    };
    let valid = verify_certificate(g, &target_certificate).unwrap_or(false)
        && verify_certificate(g, &certificate).unwrap_or(false);
    if !valid {
        return Err(FailureDiagnosis::InvalidCertificate);
    }
    Ok(DecomposeSuccess {
        m,
        s,
        classes,
        target,
        target_certificate,
        certificate,
    })
}

enum SplitError {
    Triangle([usize; 3]),
    OddCycle(Vec<usize>),
}

/// BFS 2-colouring of the blue graph on `class`; side 0 holds each
/// component's least vertex.
fn split_blue_class(
    l: &Layers,
    class: &[usize],
) -> std::result::Result<(Vec<usize>, Vec<usize>), SplitError> {
    let mask = class.iter().fold(0u64, |m, &v| m | (1 << v));
    for &x in class {
        for y in bits(l.blue(x) & mask & !((2u64 << x) - 1)) {
            if let Some(z) = bits(l.blue(x) & l.blue(y) & mask & !((2u64 << y) - 1)).next() {
                return Err(SplitError::Triangle([x, y, z]));
            }
        }
    }
    let n = l.n;
    let mut side = vec![u8::MAX; n];
    let mut parent = vec![usize::MAX; n];
    for &root in class {
        if side[root] != u8::MAX {
            continue;
        }
        side[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for u in bits(l.blue(v) & mask) {
                if side[u] == u8::MAX {
                    side[u] = 1 - side[v];
                    parent[u] = v;
                    queue.push_back(u);
                } else if side[u] == side[v] {
                    return Err(SplitError::OddCycle(odd_cycle(&parent, u, v)));
                }
            }
        }
    }
    let b = class.iter().copied().filter(|&v| side[v] == 0).collect();
    let c = class.iter().copied().filter(|&v| side[v] == 1).collect();
    Ok((b, c))
}

/// Closes the BFS-tree paths from `u` and `v` (same side, adjacent) into a cycle.
fn odd_cycle(parent: &[usize], u: usize, v: usize) -> Vec<usize> {
    let path = |mut x: usize| {
        let mut p = vec![x];
        while parent[x] != usize::MAX {
            x = parent[x];
            p.push(x);
        }
        p
    };
    let pu = path(u);
    let pv = path(v);
    let lca = *pu.iter().find(|x| pv.contains(x)).expect("same BFS tree");
    let mut cycle: Vec<usize> = pu.iter().copied().take_while(|&x| x != lca).collect();
    cycle.push(lca);
    let back: Vec<usize> = pv.iter().copied().take_while(|&x| x != lca).collect();
    cycle.extend(back.into_iter().rev());
    cycle
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub vertices: Vec<usize>,
    pub has_blue: bool,
}

/// Everything [`analyze`] reports about a graph relative to `F_{2r}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub n: usize,
    pub preconditions: Preconditions,
    pub wicked_triangles: Vec<Triple>,
    pub blue_wicked: Vec<Triple>,
    pub insecure_blue_edges: Vec<(usize, usize)>,
    pub insecure_green_edges: Vec<(usize, usize)>,
    /// A copy of `J` (order `r+1`), if present.
    pub j_embedding: Option<Embedding>,
    pub equivalence_ok: bool,
    pub classes: Vec<ClassSummary>,
    pub s: usize,
    pub m: usize,
    pub decomposition: DecomposeOutcome,
}

impl StructureReport {
    /// Conformance violations on a hypothesis-satisfying input.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !self.preconditions.all_hold() {
            return v;
        }
        if !self.insecure_blue_edges.is_empty() {
            v.push(format!(
                "insecure blue edges {:?}",
                self.insecure_blue_edges
            ));
        }
        if !self.insecure_green_edges.is_empty() {
            v.push(format!(
                "insecure green edges {:?}",
                self.insecure_green_edges
            ));
        }
        if !self.wicked_triangles.is_empty() {
            v.push(format!("wicked triangles {:?}", self.wicked_triangles));
        }
        if let DecomposeOutcome::Failure(f) = &self.decomposition {
            v.push(format!("decomposition failed: {f:?}"));
        }
        v
    }
}

pub fn analyze(g: &ColoredGraph, r: usize) -> Result<StructureReport> {
    let decomposition = decompose(g, r)?;
    let audit = secure_audit(g, r)?;
    let (equivalence_ok, raw) = weight_classes(g);
    let l = g.layers();
    let classes: Vec<ClassSummary> = if equivalence_ok {
        raw.into_iter()
            .map(|vertices| {
                let mask = vertices.iter().fold(0u64, |m, &v| m | (1 << v));
                let has_blue = vertices.iter().any(|&v| l.blue(v) & mask != 0);
                ClassSummary { vertices, has_blue }
            })
            .collect()
    } else {
        Vec::new()
    };
    let s = classes.iter().filter(|c| c.has_blue).count();
    Ok(StructureReport {
        n: g.order(),
        wicked_triangles: find_wicked(g, false),
        blue_wicked: find_wicked(g, true),
        insecure_blue_edges: audit.insecure_blue_edges,
        insecure_green_edges: audit.insecure_green_edges,
        j_embedding: find_embedding(&gen_j(r)?.graph, g),
        equivalence_ok,
        m: classes.len(),
        s,
        classes,
        preconditions: decomposition.preconditions,
        decomposition: decomposition.outcome,
    })
}
