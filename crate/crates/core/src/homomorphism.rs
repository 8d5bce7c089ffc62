//! Homomorphisms into `RK_r`, `RK_r^-` and arbitrary targets, with partition
//! certificates.
//!
//! A map `φ` is a homomorphism `G → T` when `w(x, y) <= w_T(φx, φy)` for all
//! distinct `x, y`. Since `w_T` vanishes on the diagonal, every preimage
//! class is a green clique. Into `RK_r` that is the whole condition; into
//! `RK_r^-` two designated classes must additionally have no red pair
//! between them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bits, ColoredGraph, Layers, RED};

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Target {
    Rk {
        r: usize,
    },
    /// Classes 0 and 1 are the endpoints of the blue pair.
    RkMinus {
        r: usize,
    },
    General {
        graph: ColoredGraph,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomCertificate {
    /// `classes[i]` is the preimage of target vertex `i`; classes may be empty.
    pub classes: Vec<Vec<usize>>,
    pub target: Target,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum HomOutcome {
    Found {
        certificate: HomCertificate,
    },
    NotFound,
    /// The node budget ran out before the search was decided.
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomSearch {
    pub outcome: HomOutcome,
    pub nodes: u64,
}

impl HomSearch {
    pub fn certificate(&self) -> Option<&HomCertificate> {
        match &self.outcome {
            HomOutcome::Found { certificate } => Some(certificate),
            _ => None,
        }
    }

    /// `Some(true)` / `Some(false)` when decided, `None` when the budget ran out.
    pub fn exists(&self) -> Option<bool> {
        match self.outcome {
            HomOutcome::Found { .. } => Some(true),
            HomOutcome::NotFound => Some(false),
            HomOutcome::BudgetExceeded => None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct HomOptions {
    pub node_budget: u64,
}

impl Default for HomOptions {
    fn default() -> Self {
        HomOptions {
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

pub fn find_hom_rk(g: &ColoredGraph, r: usize) -> Result<HomSearch> {
    find_hom_rk_with(g, r, HomOptions::default())
}

/// Partition into at most `r` green cliques.
pub fn find_hom_rk_with(g: &ColoredGraph, r: usize, opts: HomOptions) -> Result<HomSearch> {
    if r < 1 {
        return Err(Error::InvalidParameter("RK_r target needs r >= 1".into()));
    }
    let mut search = ClassSearch::new(g.layers(), r, false, opts.node_budget);
    let outcome = match search.run() {
        Some(Some(classes)) => found(g, canonical_rk(classes), Target::Rk { r }),
        Some(None) => HomOutcome::NotFound,
        None => HomOutcome::BudgetExceeded,
    };
    Ok(HomSearch {
        outcome,
        nodes: search.nodes,
    })
}

pub fn find_hom_rk_minus(g: &ColoredGraph, r: usize) -> Result<HomSearch> {
    find_hom_rk_minus_with(g, r, HomOptions::default())
}

/// Partition into `r` green cliques (empty ones allowed) such that the first
/// two have no red pair between them.
pub fn find_hom_rk_minus_with(g: &ColoredGraph, r: usize, opts: HomOptions) -> Result<HomSearch> {
    if r < 2 {
        return Err(Error::InvalidParameter("RK_r^- target needs r >= 2".into()));
    }
    let mut search = ClassSearch::new(g.layers(), r, true, opts.node_budget);
    let outcome = match search.run() {
        Some(Some(classes)) => found(g, canonical_rk_minus(classes), Target::RkMinus { r }),
        Some(None) => HomOutcome::NotFound,
        None => HomOutcome::BudgetExceeded,
    };
    Ok(HomSearch {
        outcome,
        nodes: search.nodes,
    })
}

pub fn find_hom_general(g: &ColoredGraph, target: &ColoredGraph) -> Result<HomSearch> {
    find_hom_general_with(g, target, HomOptions::default())
}

/// Backtracking over vertices of `g` in descending degree order.
pub fn find_hom_general_with(
    g: &ColoredGraph,
    target: &ColoredGraph,
    opts: HomOptions,
) -> Result<HomSearch> {
    let gl = g.layers();
    let tl = target.layers();
    let mut order: Vec<usize> = (0..g.order()).collect();
    let degrees = g.degrees();
    order.sort_by_key(|&v| (std::cmp::Reverse(degrees[v]), v));
    let mut search = GeneralSearch {
        g: &gl,
        t: &tl,
        order,
        image: vec![usize::MAX; g.order()],
        placed: 0,
        nodes: 0,
        budget: opts.node_budget,
    };
    let outcome = match search.extend(0) {
        Some(true) => {
            let mut classes = vec![Vec::new(); target.order()];
            for (v, &t) in search.image.iter().enumerate() {
                classes[t].push(v);
            }
            found(
                g,
                classes,
                Target::General {
                    graph: target.clone(),
                },
            )
        }
        Some(false) => HomOutcome::NotFound,
        None => HomOutcome::BudgetExceeded,
    };
    Ok(HomSearch {
        outcome,
        nodes: search.nodes,
    })
}

fn found(g: &ColoredGraph, classes: Vec<Vec<usize>>, target: Target) -> HomOutcome {
    let certificate = HomCertificate { classes, target };
    assert!(
        verify_certificate(g, &certificate).unwrap_or(false),
        "search produced an invalid certificate: {certificate:?}"
    );
    HomOutcome::Found { certificate }
}

fn canonical_rk(mut classes: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    classes.retain(|c| !c.is_empty());
    for c in &mut classes {
        c.sort_unstable();
    }
    classes.sort_by_key(|c| c[0]);
    classes
}

pub(crate) fn canonical_rk_minus(mut classes: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for c in &mut classes {
        c.sort_unstable();
    }
    let key = |c: &Vec<usize>| c.first().copied().unwrap_or(usize::MAX);
    if key(&classes[1]) < key(&classes[0]) {
        classes.swap(0, 1);
    }
    classes[2..].sort_by_key(key);
    classes
}

/// Independent certificate checker.
///
/// Returns `Err` for malformed partitions (a vertex out of range, repeated,
/// or missing; a class count that does not fit the target) and `Ok(valid)`
/// otherwise.
pub fn verify_certificate(g: &ColoredGraph, c: &HomCertificate) -> Result<bool> {
    let n = g.order();
    let malformed = |msg: String| Err(Error::MalformedCertificate(msg));
    let mut owner = vec![usize::MAX; n];
    for (i, class) in c.classes.iter().enumerate() {
        for &v in class {
            if v >= n {
                return malformed(format!("vertex {v} out of range for order {n}"));
            }
            if owner[v] != usize::MAX {
                return malformed(format!("vertex {v} in classes {} and {i}", owner[v]));
            }
            owner[v] = i;
        }
    }
    if let Some(v) = owner.iter().position(|&o| o == usize::MAX) {
        return malformed(format!("vertex {v} is not covered"));
    }
    let k = c.classes.len();
    match &c.target {
        Target::Rk { r } if k > *r => return malformed(format!("{k} classes for RK_{r}")),
        Target::RkMinus { r } if *r < 2 || k != *r => {
            return malformed(format!("{k} classes for RK_{r}^-"))
        }
        Target::General { graph } if k != graph.order() => {
            return malformed(format!(
                "{k} classes for a target of order {}",
                graph.order()
            ))
        }
        _ => {}
    }
    for x in 0..n {
        for y in x + 1..n {
            let w = g.weight(x, y);
            let (cx, cy) = (owner[x], owner[y]);
            let allowed = if cx == cy {
                0
            } else {
                match &c.target {
                    Target::Rk { .. } => RED,
                    Target::RkMinus { .. } => {
                        if cx.min(cy) == 0 && cx.max(cy) == 1 {
                            RED - 1
                        } else {
                            RED
                        }
                    }
                    Target::General { graph } => graph.weight(cx, cy),
                }
            };
            if w > allowed {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Colouring search for `RK_r` (all classes interchangeable) and `RK_r^-`
/// (classes 0 and 1 special, interchangeable with each other; classes
/// `2..r` interchangeable). A new class is only opened as the lowest unused
/// one of its kind.
struct ClassSearch {
    l: Layers,
    r: usize,
    special: bool,
    order: Vec<usize>,
    masks: Vec<u64>,
    nodes: u64,
    budget: u64,
}

impl ClassSearch {
    fn new(l: Layers, r: usize, special: bool, budget: u64) -> Self {
        let mut order: Vec<usize> = (0..l.n).collect();
        order.sort_by_key(|&v| {
            (
                std::cmp::Reverse(l.ge1[v].count_ones() + l.ge2[v].count_ones()),
                v,
            )
        });
        ClassSearch {
            l,
            r,
            special,
            order,
            masks: vec![0; r],
            nodes: 0,
            budget,
        }
    }

    /// `None` on budget exhaustion, otherwise the classes if any exist.
    fn run(&mut self) -> Option<Option<Vec<Vec<usize>>>> {
        match self.extend(0, 0) {
            None => None,
            Some(false) => Some(None),
            Some(true) => Some(Some(
                self.masks.iter().map(|&m| bits(m).collect()).collect(),
            )),
        }
    }

    fn fits(&self, v: usize, c: usize) -> bool {
        if self.masks[c] & self.l.ge1[v] != 0 {
            return false;
        }
        if self.special && c < 2 && self.masks[1 - c] & self.l.ge2[v] != 0 {
            return false;
        }
        true
    }

    /// `opened` counts the non-special classes in use.
    fn extend(&mut self, depth: usize, opened: usize) -> Option<bool> {
        if depth == self.order.len() {
            return Some(true);
        }
        let v = self.order[depth];
        let first_ordinary = if self.special { 2 } else { 0 };
        let mut options: Vec<usize> = Vec::with_capacity(self.r);
        if self.special {
            options.push(0);
            if self.masks[0] != 0 {
                options.push(1);
            }
        }
        let limit = (first_ordinary + opened + 1).min(self.r);
        options.extend(first_ordinary..limit);
        for c in options {
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            if !self.fits(v, c) {
                continue;
            }
            self.masks[c] |= 1 << v;
            let next_opened = if c >= first_ordinary && c == first_ordinary + opened {
                opened + 1
            } else {
                opened
            };
            match self.extend(depth + 1, next_opened) {
                Some(false) => self.masks[c] &= !(1 << v),
                other => return other,
            }
        }
        Some(false)
    }
}

struct GeneralSearch<'a> {
    g: &'a Layers,
    t: &'a Layers,
    order: Vec<usize>,
    image: Vec<usize>,
    placed: u64,
    nodes: u64,
    budget: u64,
}

impl GeneralSearch<'_> {
    fn extend(&mut self, depth: usize) -> Option<bool> {
        if depth == self.order.len() {
            return Some(true);
        }
        let v = self.order[depth];
        let mut cand = self.t.all();
        for u in bits(self.g.ge1[v] & self.placed) {
            cand &= self.t.at_least(self.image[u], self.g.weight(v, u));
        }
        while cand != 0 {
            let t = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            self.image[v] = t;
            self.placed |= 1 << v;
            let res = self.extend(depth + 1);
            self.placed &= !(1 << v);
            match res {
                Some(false) => {}
                other => return other,
            }
        }
        Some(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::*;

    #[test]
    fn rk_examples() {
        let green5 = ColoredGraph::new(5).unwrap();
        let s = find_hom_rk(&green5, 1).unwrap();
        assert_eq!(s.certificate().unwrap().classes, vec![vec![0, 1, 2, 3, 4]]);
        assert_eq!(
            find_hom_rk(&gen_rk(3).unwrap(), 2).unwrap().exists(),
            Some(false)
        );
        assert_eq!(
            find_hom_rk(&gen_odd_extremal(3, 1).unwrap().graph, 3)
                .unwrap()
                .exists(),
            Some(false)
        );
        assert!(find_hom_rk(&green5, 0).is_err());
        let empty = ColoredGraph::new(0).unwrap();
        assert_eq!(find_hom_rk(&empty, 1).unwrap().exists(), Some(true));
    }

    #[test]
    fn rk_minus_examples() {
        assert_eq!(
            find_hom_rk_minus(&gen_bk(3).unwrap(), 2).unwrap().exists(),
            Some(false)
        );
        let ehss = gen_ehss_blowup(3).unwrap().graph;
        let s = find_hom_rk_minus(&ehss, 3).unwrap();
        let c = s.certificate().unwrap();
        assert_eq!(c.classes, vec![vec![0, 1], vec![2, 3], vec![4, 5, 6]]);
        assert_eq!(
            find_hom_rk_minus(&gen_even_extremal(3, 1).unwrap().graph, 3)
                .unwrap()
                .exists(),
            Some(false)
        );
        assert!(find_hom_rk_minus(&ehss, 1).is_err());
    }

    #[test]
    fn rk_minus_allows_empty_classes() {
        // RK_2 maps to RK_3^- using classes 0 and 2, leaving one special class empty.
        let s = find_hom_rk_minus(&gen_rk(2).unwrap(), 3).unwrap();
        let c = s.certificate().unwrap();
        assert_eq!(c.classes.len(), 3);
        assert!(verify_certificate(&gen_rk(2).unwrap(), c).unwrap());
        assert!(c.classes[1].is_empty());
    }

    #[test]
    fn general_examples() {
        let g = gen_odd_extremal(2, 1).unwrap().graph;
        let s = find_hom_general(&g, &gen_rk(5).unwrap()).unwrap();
        assert_eq!(s.exists(), Some(true));
        assert_eq!(
            find_hom_general(&gen_rk(2).unwrap(), &gen_bk(2).unwrap())
                .unwrap()
                .exists(),
            Some(false)
        );
        let p = gen_rk_minus(3).unwrap();
        let b = blow_up(&p, &[2, 1, 3]).unwrap().graph;
        assert_eq!(find_hom_general(&b, &p).unwrap().exists(), Some(true));
    }

    #[test]
    fn verifier_rejects_bad_certificates() {
        let g = gen_bk(2).unwrap();
        let bad = HomCertificate {
            classes: vec![vec![0, 1]],
            target: Target::Rk { r: 2 },
        };
        assert_eq!(verify_certificate(&g, &bad), Ok(false));
        let ok = HomCertificate {
            classes: vec![vec![0], vec![1]],
            target: Target::Rk { r: 2 },
        };
        assert_eq!(verify_certificate(&g, &ok), Ok(true));

        let rk2 = gen_rk(2).unwrap();
        let red_across = HomCertificate {
            classes: vec![vec![0], vec![1]],
            target: Target::RkMinus { r: 2 },
        };
        assert_eq!(verify_certificate(&rk2, &red_across), Ok(false));

        let overlap = HomCertificate {
            classes: vec![vec![0, 1], vec![1]],
            target: Target::Rk { r: 2 },
        };
        assert!(verify_certificate(&g, &overlap).is_err());
        let missing = HomCertificate {
            classes: vec![vec![0]],
            target: Target::Rk { r: 2 },
        };
        assert!(verify_certificate(&g, &missing).is_err());
        let too_many = HomCertificate {
            classes: vec![vec![0], vec![1]],
            target: Target::Rk { r: 1 },
        };
        assert!(verify_certificate(&g, &too_many).is_err());
    }

    #[test]
    fn budget_is_reported() {
        let g = gen_odd_extremal(3, 1).unwrap().graph;
        let s = find_hom_rk_with(&g, 3, HomOptions { node_budget: 5 }).unwrap();
        assert_eq!(s.outcome, HomOutcome::BudgetExceeded);
        assert_eq!(s.exists(), None);
    }
}
