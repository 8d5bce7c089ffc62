//! Canonical forms for colored graphs.
//!
//! Vertices are first split into cells by colour refinement on the weighted
//! neighbourhood multiset; the canonical labelling is then the permutation,
//! among those respecting the cell order, that minimises the column-major
//! weight string. Equal prefixes are explored exhaustively so the search also
//! reports the automorphism orbit of the last canonical vertex, which drives
//! canonical augmentation in [`crate::enumerate`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ColoredGraph, Layers};

/// Default largest order accepted by [`canonical_form`].
pub const DEFAULT_CANON_BOUND: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalForm {
    n: usize,
    /// Row-major upper-triangle weights of the canonically relabelled graph.
    code: Vec<u8>,
}

impl CanonicalForm {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn code(&self) -> &[u8] {
        &self.code
    }

    /// The canonical representative itself.
    pub fn to_graph(&self) -> ColoredGraph {
        ColoredGraph::from_pair_weights(self.n, &self.code)
            .expect("canonical code is a valid weight string")
    }
}

pub fn canonical_form(g: &ColoredGraph) -> Result<CanonicalForm> {
    canonical_form_bounded(g, DEFAULT_CANON_BOUND)
}

pub fn canonical_form_bounded(g: &ColoredGraph, bound: usize) -> Result<CanonicalForm> {
    if g.order() > bound {
        return Err(Error::BoundExceeded {
            what: "canonical form",
            n: g.order(),
            bound,
        });
    }
    let labeling = canonical_labeling(&g.layers());
    Ok(form_from_labeling(g, &labeling))
}

pub(crate) fn form_from_labeling(g: &ColoredGraph, labeling: &Labeling) -> CanonicalForm {
    let relabelled = g
        .permuted(&labeling.order)
        .expect("labeling is a permutation");
    CanonicalForm {
        n: g.order(),
        code: relabelled.pair_weights().collect(),
    }
}

pub(crate) struct Labeling {
    /// `order[i]` is the vertex placed at canonical position `i`.
    pub order: Vec<usize>,
    /// Every vertex that can occupy the last canonical position.
    pub last_orbit: u64,
}

pub(crate) fn canonical_labeling(l: &Layers) -> Labeling {
    let n = l.n;
    if n == 0 {
        return Labeling {
            order: Vec::new(),
            last_orbit: 0,
        };
    }
    let colors = refine(l);
    let mut by_color: Vec<usize> = (0..n).collect();
    by_color.sort_by_key(|&v| (colors[v], v));
    let cell_at: Vec<u32> = by_color.iter().map(|&v| colors[v]).collect();

    let pairs = n * (n - 1) / 2;
    let mut search = LabelSearch {
        l,
        n,
        colors: &colors,
        cell_at: &cell_at,
        perm: Vec::with_capacity(n),
        used: 0,
        cur: vec![0; pairs],
        best: vec![0; pairs],
        has_best: false,
        best_perm: Vec::new(),
        last_orbit: 0,
        version: 0,
    };
    search.dfs(0, false);
    Labeling {
        order: search.best_perm,
        last_orbit: search.last_orbit,
    }
}

/// Iterated colour refinement; colour ids are ranks of sorted signatures,
/// so they depend only on the isomorphism class.
fn refine(l: &Layers) -> Vec<u32> {
    let n = l.n;
    let mut colors = vec![0u32; n];
    let mut k = 1usize;
    loop {
        let sigs: Vec<Vec<u32>> = (0..n)
            .map(|v| {
                let mut counts = vec![0u32; 3 * k + 1];
                counts[0] = colors[v];
                for u in 0..n {
                    if u != v {
                        let w = l.weight(v, u) as usize;
                        counts[1 + w * k + colors[u] as usize] += 1;
                    }
                }
                counts
            })
            .collect();
        let mut distinct = sigs.clone();
        distinct.sort_unstable();
        distinct.dedup();
        for v in 0..n {
            colors[v] = distinct.binary_search(&sigs[v]).unwrap() as u32;
        }
        if distinct.len() == k {
            return colors;
        }
        k = distinct.len();
    }
}

struct LabelSearch<'a> {
    l: &'a Layers,
    n: usize,
    colors: &'a [u32],
    cell_at: &'a [u32],
    perm: Vec<usize>,
    used: u64,
    cur: Vec<u8>,
    best: Vec<u8>,
    has_best: bool,
    best_perm: Vec<usize>,
    last_orbit: u64,
    /// Incremented whenever `best` is replaced.
    version: u64,
}

impl LabelSearch<'_> {
    /// `less` records whether the prefix placed so far is already strictly
    /// smaller than the best code's prefix.
    fn dfs(&mut self, p: usize, mut less: bool) {
        if p == self.n {
            let last = self.perm[self.n - 1];
            if !self.has_best || less {
                self.best.copy_from_slice(&self.cur);
                self.best_perm.clone_from(&self.perm);
                self.last_orbit = 1 << last;
                self.has_best = true;
                self.version += 1;
            } else {
                self.last_orbit |= 1 << last;
            }
            return;
        }
        let entry_version = self.version;
        let cell = self.cell_at[p];
        let off = p * p.saturating_sub(1) / 2;
        let mut candidates = self.l.all() & !self.used;
        while candidates != 0 {
            let v = candidates.trailing_zeros() as usize;
            candidates &= candidates - 1;
            if self.colors[v] != cell {
                continue;
            }
            if self.version != entry_version {
                // The best code was replaced inside this subtree, so it now
                // shares the current prefix.
                less = false;
            }
            for (i, &u) in self.perm.iter().enumerate() {
                self.cur[off + i] = self.l.weight(u, v);
            }
            let mut child_less = less || !self.has_best;
            if !child_less {
                match self.cur[off..off + p].cmp(&self.best[off..off + p]) {
                    std::cmp::Ordering::Greater => continue,
                    std::cmp::Ordering::Less => child_less = true,
                    std::cmp::Ordering::Equal => {}
                }
            }
            self.perm.push(v);
            self.used |= 1 << v;
            self.dfs(p + 1, child_less);
            self.used &= !(1 << v);
            self.perm.pop();
        }
    }
}

#[cfg(test)]
pub(crate) fn orbit_of_last(g: &ColoredGraph) -> Vec<usize> {
    crate::graph::bits(canonical_labeling(&g.layers()).last_orbit).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::pairs;

    fn all_graphs(n: usize) -> Vec<ColoredGraph> {
        let m = pairs(n).count();
        (0..3usize.pow(m as u32))
            .map(|mut code| {
                let w: Vec<u8> = (0..m)
                    .map(|_| {
                        let d = (code % 3) as u8;
                        code /= 3;
                        d
                    })
                    .collect();
                ColoredGraph::from_pair_weights(n, &w).unwrap()
            })
            .collect()
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for i in 0..n {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    /// Brute-force minimum of the row-major string over all relabellings.
    fn brute_min_code(g: &ColoredGraph) -> Vec<u8> {
        permutations(g.order())
            .into_iter()
            .map(|p| g.permuted(&p).unwrap().pair_weights().collect::<Vec<_>>())
            .min()
            .unwrap()
    }

    #[test]
    fn swapped_red_edge_is_equal() {
        let a = ColoredGraph::from_pair_weights(2, &[2]).unwrap();
        let b = a.permuted(&[1, 0]).unwrap();
        assert_eq!(canonical_form(&a).unwrap(), canonical_form(&b).unwrap());
        let blue = ColoredGraph::from_pair_weights(2, &[1]).unwrap();
        assert_ne!(canonical_form(&a).unwrap(), canonical_form(&blue).unwrap());
    }

    #[test]
    fn three_vertex_classes() {
        let codes: std::collections::HashSet<_> = all_graphs(3)
            .iter()
            .map(|g| canonical_form(g).unwrap())
            .collect();
        assert_eq!(codes.len(), 10);
    }

    #[test]
    fn equal_forms_iff_equal_brute_force_minima() {
        // Isomorphism is decided independently by the brute-force minimum.
        for n in 0..=4 {
            let gs = all_graphs(n);
            let brute: Vec<_> = gs.iter().map(brute_min_code).collect();
            let fast: Vec<_> = gs.iter().map(|g| canonical_form(g).unwrap()).collect();
            for i in 0..gs.len() {
                for j in (i..gs.len()).step_by(7) {
                    assert_eq!(
                        brute[i] == brute[j],
                        fast[i] == fast[j],
                        "{:?} {:?}",
                        gs[i],
                        gs[j]
                    );
                }
            }
        }
    }

    #[test]
    fn orbit_of_last_vertex() {
        // Red edge {0,1} plus a vertex 2 green to both: refinement orders the
        // red pair first, so vertex 2 is alone in the last cell.
        let g = ColoredGraph::from_pair_weights(3, &[2, 0, 0]).unwrap();
        assert_eq!(orbit_of_last(&g), vec![2]);
        let path = ColoredGraph::from_pair_weights(3, &[0, 2, 2]).unwrap();
        assert_eq!(orbit_of_last(&path), vec![0, 1]);
        let all_green = ColoredGraph::new(4).unwrap();
        assert_eq!(orbit_of_last(&all_green), vec![0, 1, 2, 3]);
    }

    #[test]
    fn bound_is_enforced() {
        let g = ColoredGraph::new(9).unwrap();
        assert!(matches!(
            canonical_form(&g),
            Err(Error::BoundExceeded { n: 9, bound: 8, .. })
        ));
        assert!(canonical_form_bounded(&g, 9).is_ok());
    }

    #[test]
    fn representative_round_trip() {
        let g = ColoredGraph::from_pair_weights(4, &[0, 1, 2, 2, 1, 0]).unwrap();
        let f = canonical_form(&g).unwrap();
        assert_eq!(canonical_form(&f.to_graph()).unwrap(), f);
    }
}
