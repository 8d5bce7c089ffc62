//! Weighted subgraph containment.
//!
//! A pattern `P` embeds into a host `H` when some injective map `φ` satisfies
//! `w_P(x, y) <= w_H(φx, φy)` for every pattern pair.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bits, mask_of, ColoredGraph, Layers, RED};
use crate::util;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    /// `map[x]` is the host vertex assigned to pattern vertex `x`.
    pub map: Vec<usize>,
}

impl Embedding {
    /// Checks injectivity and weight dominance directly against both graphs.
    pub fn verify(&self, pattern: &ColoredGraph, host: &ColoredGraph) -> bool {
        if self.map.len() != pattern.order() || self.map.iter().any(|&v| v >= host.order()) {
            return false;
        }
        let mut seen = vec![false; host.order()];
        for &v in &self.map {
            if std::mem::replace(&mut seen[v], true) {
                return false;
            }
        }
        (0..pattern.order()).all(|x| {
            (x + 1..pattern.order())
                .all(|y| pattern.weight(x, y) <= host.weight(self.map[x], self.map[y]))
        })
    }
}

/// A family member found in a host.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// Index of the member in the family as given.
    pub member: usize,
    pub embedding: Embedding,
}

pub fn find_embedding(pattern: &ColoredGraph, host: &ColoredGraph) -> Option<Embedding> {
    Matcher::new(&pattern.layers(), &host.layers()).run(&[])
}

/// Like [`find_embedding`], but restricted to embeddings that map some pattern
/// pair of weight at least `min_weight` onto the host pair `{a, b}`.
///
/// When a host was free before the weight of `{a, b}` was raised to `w`,
/// calling this with `min_weight = 1` (or the old weight plus one) finds
/// exactly the new copies.
pub fn find_embedding_through(
    pattern: &ColoredGraph,
    host: &ColoredGraph,
    (a, b): (usize, usize),
    min_weight: u8,
) -> Option<Embedding> {
    let pl = pattern.layers();
    let hl = host.layers();
    through(&pl, &hl, (a, b), min_weight)
}

fn through(pl: &Layers, hl: &Layers, (a, b): (usize, usize), min_weight: u8) -> Option<Embedding> {
    let hw = hl.weight(a, b);
    let min_weight = min_weight.max(1);
    if hw < min_weight {
        return None;
    }
    let mut matcher = Matcher::new(pl, hl);
    for x in 0..pl.n {
        for y in bits(pl.ge1[x]) {
            let pw = pl.weight(x, y);
            if pw < min_weight || pw > hw {
                continue;
            }
            // Ordered pattern pairs cover both orientations of {a, b}.
            if let Some(e) = matcher.run(&[(x, a), (y, b)]) {
                return Some(e);
            }
        }
    }
    None
}

pub fn is_free(host: &ColoredGraph, family: &[ColoredGraph]) -> bool {
    check_free(host, family).is_none()
}

/// The first family member (smallest order first, ties by index) that embeds.
pub fn check_free(host: &ColoredGraph, family: &[ColoredGraph]) -> Option<Violation> {
    let hl = host.layers();
    let mut order: Vec<usize> = (0..family.len()).collect();
    order.sort_by_key(|&i| (family[i].order(), i));
    order.into_iter().find_map(|i| {
        Matcher::new(&family[i].layers(), &hl)
            .run(&[])
            .map(|embedding| Violation {
                member: i,
                embedding,
            })
    })
}

/// As [`check_free`], restricted to copies that use the host pair `{a, b}`
/// with pattern weight at least `min_weight`.
pub fn check_free_through(
    host: &ColoredGraph,
    family: &[ColoredGraph],
    pair: (usize, usize),
    min_weight: u8,
) -> Option<Violation> {
    let hl = host.layers();
    let mut order: Vec<usize> = (0..family.len()).collect();
    order.sort_by_key(|&i| (family[i].order(), i));
    order.into_iter().find_map(|i| {
        through(&family[i].layers(), &hl, pair, min_weight).map(|embedding| Violation {
            member: i,
            embedding,
        })
    })
}

/// Largest `q` with `BK_q ⊆ host`, together with a witness vertex set.
pub fn max_blue_clique(host: &ColoredGraph) -> (usize, Vec<usize>) {
    let l = host.layers();
    let clique = util::max_clique(&l.ge1[..l.n], l.all());
    (clique.len(), clique)
}

/// Vertices outside `clique` that are red to every clique vertex.
pub fn common_red_neighborhood(host: &ColoredGraph, clique: &[usize]) -> Result<Vec<usize>> {
    for &v in clique {
        if v >= host.order() {
            return Err(Error::VertexOutOfRange {
                index: v,
                n: host.order(),
            });
        }
    }
    for (i, &x) in clique.iter().enumerate() {
        for &y in &clique[i + 1..] {
            if x == y || host.weight(x, y) != RED {
                return Err(Error::NotRedClique(x, y));
            }
        }
    }
    let l = host.layers();
    let common = clique
        .iter()
        .fold(l.all() & !mask_of(clique), |acc, &c| acc & l.ge2[c]);
    Ok(bits(common).collect())
}

/// Backtracking matcher over bitset layers.
struct Matcher<'a> {
    pat: &'a Layers,
    host: &'a Layers,
    /// Host vertices whose blue-or-red and red degrees are large enough for
    /// each pattern vertex.
    static_cands: Vec<u64>,
    map: [usize; 64],
    placed: u64,
    used: u64,
}

impl<'a> Matcher<'a> {
    fn new(pat: &'a Layers, host: &'a Layers) -> Self {
        let host_deg: Vec<(u32, u32)> = (0..host.n)
            .map(|v| (host.ge1[v].count_ones(), host.ge2[v].count_ones()))
            .collect();
        let static_cands = (0..pat.n)
            .map(|p| {
                let need1 = pat.ge1[p].count_ones();
                let need2 = pat.ge2[p].count_ones();
                host_deg
                    .iter()
                    .enumerate()
                    .filter(|(_, &(d1, d2))| d1 >= need1 && d2 >= need2)
                    .fold(0u64, |m, (v, _)| m | (1 << v))
            })
            .collect();
        Matcher {
            pat,
            host,
            static_cands,
            map: [0; 64],
            placed: 0,
            used: 0,
        }
    }

    /// Search order: fixed vertices first, then by descending pattern degree,
    /// ties broken by connectivity to already ordered vertices, then index.
    fn order(&self, fixed: &[(usize, usize)]) -> Vec<usize> {
        let n = self.pat.n;
        let mut order: Vec<usize> = fixed.iter().map(|&(p, _)| p).collect();
        let mut chosen = mask_of(&order);
        let degree = |p: usize| self.pat.ge1[p].count_ones() + self.pat.ge2[p].count_ones();
        while order.len() < n {
            let next = (0..n)
                .filter(|&p| chosen & (1 << p) == 0)
                .max_by_key(|&p| {
                    (
                        degree(p),
                        (self.pat.ge1[p] & chosen).count_ones(),
                        std::cmp::Reverse(p),
                    )
                })
                .unwrap();
            order.push(next);
            chosen |= 1 << next;
        }
        order
    }

    fn run(&mut self, fixed: &[(usize, usize)]) -> Option<Embedding> {
        if self.pat.n > self.host.n {
            return None;
        }
        self.placed = 0;
        self.used = 0;
        for &(p, h) in fixed {
            if self.placed & (1 << p) != 0 || self.used & (1 << h) != 0 {
                return None;
            }
            if self.candidates(p) & (1 << h) == 0 {
                return None;
            }
            self.place(p, h);
        }
        let order = self.order(fixed);
        if self.extend(&order, fixed.len()) {
            Some(Embedding {
                map: self.map[..self.pat.n].to_vec(),
            })
        } else {
            None
        }
    }

    /// Host vertices compatible with `p` given the vertices placed so far.
    #[inline]
    fn candidates(&self, p: usize) -> u64 {
        let mut cand = self.static_cands[p] & !self.used;
        for q in bits(self.pat.ge1[p] & self.placed) {
            let hq = self.map[q];
            cand &= if self.pat.ge2[p] & (1 << q) != 0 {
                self.host.ge2[hq]
            } else {
                self.host.ge1[hq]
            };
        }
        cand
    }

    #[inline]
    fn place(&mut self, p: usize, h: usize) {
        self.map[p] = h;
        self.placed |= 1 << p;
        self.used |= 1 << h;
    }

    #[inline]
    fn unplace(&mut self, p: usize, h: usize) {
        self.placed &= !(1 << p);
        self.used &= !(1 << h);
    }

    fn extend(&mut self, order: &[usize], depth: usize) -> bool {
        if depth == order.len() {
            return true;
        }
        let p = order[depth];
        let mut cand = self.candidates(p);
        while cand != 0 {
            let h = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            self.place(p, h);
            if self.forward_ok(p) && self.extend(order, depth + 1) {
                return true;
            }
            self.unplace(p, h);
        }
        false
    }

    /// Every unplaced pattern neighbour of `p` still has a candidate.
    fn forward_ok(&self, p: usize) -> bool {
        bits(self.pat.ge1[p] & !self.placed).all(|u| self.candidates(u) != 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::*;

    #[test]
    fn basic_containment() {
        let e = find_embedding(&gen_bk(3).unwrap(), &gen_bk(4).unwrap()).unwrap();
        assert!(e.verify(&gen_bk(3).unwrap(), &gen_bk(4).unwrap()));
        assert!(find_embedding(&gen_rk(2).unwrap(), &gen_bk(3).unwrap()).is_none());
        assert!(find_embedding(&gen_bk(4).unwrap(), &gen_rk(3).unwrap()).is_none());
        // Red dominates blue.
        assert!(find_embedding(&gen_bk(3).unwrap(), &gen_rk(3).unwrap()).is_some());
        // Empty pattern always embeds.
        assert!(find_embedding(&gen_rk(0).unwrap(), &gen_rk(0).unwrap()).is_some());
    }

    #[test]
    fn even_extremal_is_f6_free() {
        let host = gen_even_extremal(3, 1).unwrap().graph;
        assert!(find_embedding(&gen_gab(6, 2).unwrap(), &host).is_none());
        assert!(is_free(&host, &gen_family(6).unwrap()));
    }

    #[test]
    fn red_triangle_violates_f6() {
        let v = check_free(&gen_rk(3).unwrap(), &gen_family(6).unwrap()).unwrap();
        assert_eq!(v.member, 2);
        assert_eq!(v.embedding.map, vec![0, 1, 2]);
    }

    #[test]
    fn red_c5_is_f5_free() {
        let c5 = gen_odd_extremal(2, 1).unwrap().graph;
        assert!(is_free(&c5, &gen_family(5).unwrap()));
    }

    #[test]
    fn max_blue_clique_cases() {
        assert_eq!(max_blue_clique(&gen_bk(5).unwrap()).0, 5);
        assert_eq!(max_blue_clique(&ColoredGraph::new(6).unwrap()).0, 1);
        assert_eq!(max_blue_clique(&ColoredGraph::new(0).unwrap()).0, 0);
        let (q, w) = max_blue_clique(&gen_even_extremal(3, 1).unwrap().graph);
        assert_eq!(q, 3);
        assert_eq!(w.len(), 3);
    }

    #[test]
    fn red_neighborhoods() {
        let rk4 = gen_rk(4).unwrap();
        assert_eq!(common_red_neighborhood(&rk4, &[0, 2]).unwrap(), vec![1, 3]);
        let j = gen_j(4).unwrap();
        assert_eq!(
            common_red_neighborhood(&j.graph, &[0]).unwrap(),
            vec![1, 2, 3, 4]
        );
        let green = ColoredGraph::new(3).unwrap();
        assert_eq!(common_red_neighborhood(&green, &[]).unwrap(), vec![0, 1, 2]);
        assert_eq!(
            common_red_neighborhood(&green, &[0, 1]),
            Err(Error::NotRedClique(0, 1))
        );
    }

    #[test]
    fn through_pair_only_finds_copies_using_it() {
        // RK_3 on {0,1,2} plus a vertex 3 green to everything.
        let mut host = ColoredGraph::new(4).unwrap();
        for (x, y) in [(0, 1), (0, 2), (1, 2)] {
            host.set_weight(x, y, RED).unwrap();
        }
        let rk3 = gen_rk(3).unwrap();
        assert!(find_embedding_through(&rk3, &host, (0, 1), 1).is_some());
        assert!(find_embedding_through(&rk3, &host, (1, 2), 2).is_some());
        assert!(find_embedding_through(&rk3, &host, (0, 3), 1).is_none());
        let e = find_embedding_through(&rk3, &host, (2, 1), 1).unwrap();
        assert!(e.verify(&rk3, &host));
    }
}
