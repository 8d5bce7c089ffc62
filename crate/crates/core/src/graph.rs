//! The colored complete graph: a symmetric `{0, 1, 2}` weight function on
//! unordered vertex pairs, with a zero diagonal.
//!
//! Weights are stored as 2-bit codes over the strict upper triangle in
//! row-major order `(0,1), (0,2), .., (0,n-1), (1,2), ..`. Search code that
//! needs fast neighbourhood queries works on [`Layers`], a per-vertex bitset
//! view derived from the packed storage.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported order; bitset views use one `u64` per vertex.
pub const MAX_ORDER: usize = 64;

pub const GREEN: u8 = 0;
pub const BLUE: u8 = 1;
pub const RED: u8 = 2;

const PAIRS_PER_WORD: usize = 32;

/// Number of unordered pairs on `n` vertices.
#[inline]
pub const fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Row-major index of the pair `{x, y}` (requires `x < y < n`).
#[inline]
pub(crate) fn pair_index(n: usize, x: usize, y: usize) -> usize {
    debug_assert!(x < y && y < n);
    x * (2 * n - x - 1) / 2 + (y - x - 1)
}

/// All unordered pairs of `0..n` in row-major order.
pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |x| (x + 1..n).map(move |y| (x, y)))
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColoredGraph {
    n: usize,
    packed: Vec<u64>,
}

impl ColoredGraph {
    /// The all-green graph on `n` vertices.
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_ORDER {
            return Err(Error::OrderTooLarge { n, max: MAX_ORDER });
        }
        let words = pair_count(n).div_ceil(PAIRS_PER_WORD);
        Ok(ColoredGraph {
            n,
            packed: vec![0; words],
        })
    }

    /// Builds a graph from a weight function evaluated once per pair `x < y`.
    pub fn from_fn<F>(n: usize, mut weight: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> u8,
    {
        let mut g = Self::new(n)?;
        for (x, y) in pairs(n) {
            g.set_weight(x, y, weight(x, y))?;
        }
        Ok(g)
    }

    /// Builds a graph from its upper-triangle weight string (row-major).
    pub fn from_pair_weights(n: usize, weights: &[u8]) -> Result<Self> {
        if weights.len() != pair_count(n) {
            return Err(Error::InvalidParameter(format!(
                "expected {} pair weights for order {n}, got {}",
                pair_count(n),
                weights.len()
            )));
        }
        let mut g = Self::new(n)?;
        for (idx, &w) in weights.iter().enumerate() {
            if w > RED {
                return Err(Error::InvalidWeight(w));
            }
            g.set_by_index(idx, w);
        }
        Ok(g)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn pair_count(&self) -> usize {
        pair_count(self.n)
    }

    #[inline]
    pub(crate) fn get_by_index(&self, idx: usize) -> u8 {
        let word = self.packed[idx / PAIRS_PER_WORD];
        ((word >> ((idx % PAIRS_PER_WORD) * 2)) & 0b11) as u8
    }

    #[inline]
    pub(crate) fn set_by_index(&mut self, idx: usize, w: u8) {
        let shift = (idx % PAIRS_PER_WORD) * 2;
        let word = &mut self.packed[idx / PAIRS_PER_WORD];
        *word = (*word & !(0b11 << shift)) | (u64::from(w) << shift);
    }

    /// Weight of the pair `{x, y}`; the diagonal is 0.
    ///
    /// Panics if either index is out of range. See [`Self::try_weight`].
    #[inline]
    pub fn weight(&self, x: usize, y: usize) -> u8 {
        assert!(
            x < self.n && y < self.n,
            "vertex out of range for order {}",
            self.n
        );
        match x.cmp(&y) {
            std::cmp::Ordering::Equal => GREEN,
            std::cmp::Ordering::Less => self.get_by_index(pair_index(self.n, x, y)),
            std::cmp::Ordering::Greater => self.get_by_index(pair_index(self.n, y, x)),
        }
    }

    pub fn try_weight(&self, x: usize, y: usize) -> Result<u8> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        Ok(self.weight(x, y))
    }

    /// The complementary weight `2 - w(x, y)`; 0 on the diagonal.
    pub fn complement_weight(&self, x: usize, y: usize) -> u8 {
        if x == y {
            0
        } else {
            RED - self.weight(x, y)
        }
    }

    pub fn set_weight(&mut self, x: usize, y: usize, w: u8) -> Result<()> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        if x == y {
            return Err(Error::DiagonalPair(x));
        }
        if w > RED {
            return Err(Error::InvalidWeight(w));
        }
        let (a, b) = if x < y { (x, y) } else { (y, x) };
        self.set_by_index(pair_index(self.n, a, b), w);
        Ok(())
    }

    fn check_vertex(&self, x: usize) -> Result<()> {
        if x < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                index: x,
                n: self.n,
            })
        }
    }

    /// Upper-triangle weights in row-major order.
    pub fn pair_weights(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.pair_count()).map(|idx| self.get_by_index(idx))
    }

    pub fn degree(&self, x: usize) -> Result<u32> {
        self.check_vertex(x)?;
        Ok((0..self.n).map(|y| u32::from(self.weight(x, y))).sum())
    }

    /// Degrees of all vertices, computed in one pass over the packed pairs.
    pub fn degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.n];
        let mut idx = 0;
        for x in 0..self.n {
            for y in x + 1..self.n {
                let w = u32::from(self.get_by_index(idx));
                deg[x] += w;
                deg[y] += w;
                idx += 1;
            }
        }
        deg
    }

    pub fn min_degree(&self) -> Result<u32> {
        self.degrees().into_iter().min().ok_or(Error::EmptyGraph)
    }

    /// `e(G)`: the sum of weights over unordered pairs.
    pub fn edge_weight_sum(&self) -> u32 {
        self.pair_weights().map(u32::from).sum()
    }

    /// Number of pairs carrying each weight, indexed by weight.
    pub fn color_counts(&self) -> [usize; 3] {
        let mut counts = [0; 3];
        for w in self.pair_weights() {
            counts[w as usize] += 1;
        }
        counts
    }

    /// `true` iff `self` is pointwise dominated by `other` on the same vertex set.
    pub fn is_dominated_by(&self, other: &ColoredGraph) -> bool {
        self.n == other.n
            && self
                .pair_weights()
                .zip(other.pair_weights())
                .all(|(a, b)| a <= b)
    }

    /// Subgraph induced on `vertices`, relabelled `0..vertices.len()` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Result<ColoredGraph> {
        for &v in vertices {
            self.check_vertex(v)?;
        }
        ColoredGraph::from_fn(vertices.len(), |i, j| self.weight(vertices[i], vertices[j]))
    }

    /// Relabelled copy in which new vertex `i` is old vertex `order[i]`.
    ///
    /// `order` must be a permutation of `0..n`.
    pub fn permuted(&self, order: &[usize]) -> Result<ColoredGraph> {
        if order.len() != self.n {
            return Err(Error::InvalidParameter(format!(
                "permutation of length {} for order {}",
                order.len(),
                self.n
            )));
        }
        let mut seen = vec![false; self.n];
        for &v in order {
            self.check_vertex(v)?;
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidParameter(format!(
                    "vertex {v} repeated in permutation"
                )));
            }
        }
        self.induced(order)
    }

    pub fn layers(&self) -> Layers {
        Layers::new(self)
    }

    /// Serializes to the `.cwg` text format (two lines, newline-terminated).
    pub fn to_cwg(&self) -> String {
        let mut out = format!("cwg {}\n", self.n);
        out.extend(self.pair_weights().map(|w| char::from(b'0' + w)));
        out.push('\n');
        out
    }

    /// Parses a single graph in `.cwg` format.
    pub fn parse_cwg(text: &str) -> Result<ColoredGraph> {
        let mut graphs = parse_cwg_many(text)?;
        match graphs.len() {
            1 => Ok(graphs.pop().unwrap()),
            0 => Err(Error::Parse {
                line: 1,
                column: 1,
                message: "no graph found".into(),
            }),
            k => Err(Error::Parse {
                line: 1,
                column: 1,
                message: format!("expected one graph, found {k}"),
            }),
        }
    }
}

/// Parses zero or more `.cwg` graphs separated by blank lines.
pub fn parse_cwg_many(text: &str) -> Result<Vec<ColoredGraph>> {
    let lines: Vec<&str> = text.lines().collect();
    let mut graphs = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        if lines[i].trim().is_empty() {
            i += 1;
            continue;
        }
        let header_line = i + 1;
        let header = lines[i].trim_end_matches('\r');
        let n = parse_header(header, header_line)?;
        let expected = pair_count(n);
        let body = match lines.get(i + 1) {
            Some(l) => l.trim_end_matches('\r'),
            None if expected == 0 => "",
            None => {
                return Err(Error::Parse {
                    line: header_line + 1,
                    column: 1,
                    message: format!("missing weight line ({expected} characters expected)"),
                })
            }
        };
        let body_line = header_line + 1;
        let mut weights = Vec::with_capacity(expected);
        for (col, ch) in body.chars().enumerate() {
            match ch {
                '0'..='2' => weights.push(ch as u8 - b'0'),
                other => {
                    return Err(Error::Parse {
                        line: body_line,
                        column: col + 1,
                        message: format!("unexpected character {other:?}; weights are 0, 1 or 2"),
                    })
                }
            }
        }
        if weights.len() != expected {
            return Err(Error::Parse {
                line: body_line,
                column: weights.len().min(expected) + 1,
                message: format!(
                    "weight line has {} characters, expected C({n},2) = {expected}",
                    weights.len()
                ),
            });
        }
        graphs.push(ColoredGraph::from_pair_weights(n, &weights)?);
        i += 2;
    }
    Ok(graphs)
}

fn parse_header(header: &str, line: usize) -> Result<usize> {
    let err = |column: usize, message: String| Error::Parse {
        line,
        column,
        message,
    };
    let rest = header
        .strip_prefix("cwg ")
        .ok_or_else(|| err(1, format!("expected header \"cwg <n>\", found {header:?}")))?;
    let n: usize = rest
        .parse()
        .map_err(|_| err(5, format!("invalid vertex count {rest:?}")))?;
    if n > MAX_ORDER {
        return Err(err(5, format!("order {n} exceeds maximum {MAX_ORDER}")));
    }
    Ok(n)
}

impl FromStr for ColoredGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ColoredGraph::parse_cwg(s)
    }
}

impl fmt::Display for ColoredGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cwg())
    }
}

impl fmt::Debug for ColoredGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let code: String = self.pair_weights().map(|w| char::from(b'0' + w)).collect();
        write!(f, "ColoredGraph({}; {})", self.n, code)
    }
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    weights: String,
}

impl Serialize for ColoredGraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        GraphRepr {
            n: self.n,
            weights: self.pair_weights().map(|w| char::from(b'0' + w)).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ColoredGraph {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = GraphRepr::deserialize(deserializer)?;
        ColoredGraph::parse_cwg(&format!("cwg {}\n{}\n", repr.n, repr.weights))
            .map_err(serde::de::Error::custom)
    }
}

/// Per-vertex bitset view: `ge1[v]` holds the vertices joined to `v` by a
/// blue or red pair, `ge2[v]` those joined by a red pair.
#[derive(Clone)]
pub struct Layers {
    pub n: usize,
    pub ge1: [u64; MAX_ORDER],
    pub ge2: [u64; MAX_ORDER],
}

impl Layers {
    pub fn new(g: &ColoredGraph) -> Self {
        let n = g.order();
        let mut ge1 = [0u64; MAX_ORDER];
        let mut ge2 = [0u64; MAX_ORDER];
        let mut idx = 0;
        for x in 0..n {
            for y in x + 1..n {
                let w = g.get_by_index(idx);
                if w >= BLUE {
                    ge1[x] |= 1 << y;
                    ge1[y] |= 1 << x;
                }
                if w == RED {
                    ge2[x] |= 1 << y;
                    ge2[y] |= 1 << x;
                }
                idx += 1;
            }
        }
        Layers { n, ge1, ge2 }
    }

    #[inline]
    pub fn all(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    /// Vertices `u` with `w(v, u) >= level`; level 0 means every other vertex.
    #[inline]
    pub fn at_least(&self, v: usize, level: u8) -> u64 {
        match level {
            0 => self.all() & !(1 << v),
            1 => self.ge1[v],
            _ => self.ge2[v],
        }
    }

    /// Vertices `u != v` with `w(v, u) == 0`.
    #[inline]
    pub fn green(&self, v: usize) -> u64 {
        self.all() & !self.ge1[v] & !(1 << v)
    }

    /// Vertices `u` with `w(v, u) == 1`.
    #[inline]
    pub fn blue(&self, v: usize) -> u64 {
        self.ge1[v] & !self.ge2[v]
    }

    #[inline]
    pub fn weight(&self, x: usize, y: usize) -> u8 {
        (((self.ge1[x] >> y) & 1) + ((self.ge2[x] >> y) & 1)) as u8
    }
}

/// Iterates the set bits of a mask in increasing order.
#[inline]
pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

pub(crate) fn mask_of(vertices: &[usize]) -> u64 {
    vertices.iter().fold(0, |m, &v| m | (1 << v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rk(n: usize) -> ColoredGraph {
        ColoredGraph::from_fn(n, |_, _| RED).unwrap()
    }

    #[test]
    fn pair_index_is_row_major() {
        let n = 5;
        for (i, (x, y)) in pairs(n).enumerate() {
            assert_eq!(pair_index(n, x, y), i);
        }
    }

    #[test]
    fn weights_are_symmetric_with_zero_diagonal() {
        let mut g = ColoredGraph::new(4).unwrap();
        g.set_weight(3, 1, BLUE).unwrap();
        g.set_weight(0, 2, RED).unwrap();
        assert_eq!(g.weight(1, 3), BLUE);
        assert_eq!(g.weight(3, 1), BLUE);
        assert_eq!(g.weight(2, 0), RED);
        for x in 0..4 {
            assert_eq!(g.weight(x, x), GREEN);
        }
        assert_eq!(g.set_weight(2, 2, BLUE), Err(Error::DiagonalPair(2)));
        assert_eq!(g.set_weight(0, 1, 3), Err(Error::InvalidWeight(3)));
    }

    #[test]
    fn degrees_of_red_triangle() {
        let g = rk(3);
        assert_eq!(g.degree(0).unwrap(), 4);
        assert_eq!(g.edge_weight_sum(), 6);
        assert_eq!(g.min_degree().unwrap(), 4);
        assert_eq!(g.degree(3), Err(Error::VertexOutOfRange { index: 3, n: 3 }));
    }

    #[test]
    fn min_degree_cases() {
        assert_eq!(ColoredGraph::new(4).unwrap().min_degree().unwrap(), 0);
        assert_eq!(
            ColoredGraph::new(0).unwrap().min_degree(),
            Err(Error::EmptyGraph)
        );
        assert_eq!(ColoredGraph::new(0).unwrap().edge_weight_sum(), 0);
    }

    #[test]
    fn complement_weight() {
        let g = rk(2);
        assert_eq!(g.complement_weight(0, 1), 0);
        assert_eq!(g.complement_weight(0, 0), 0);
        assert_eq!(ColoredGraph::new(2).unwrap().complement_weight(1, 0), 2);
    }

    #[test]
    fn cwg_format_is_row_major() {
        let mut g = ColoredGraph::new(4).unwrap();
        g.set_weight(0, 3, RED).unwrap();
        g.set_weight(1, 2, BLUE).unwrap();
        assert_eq!(g.to_cwg(), "cwg 4\n002100\n");
        assert_eq!(ColoredGraph::parse_cwg("cwg 4\n002100\n").unwrap(), g);
        assert_eq!(ColoredGraph::parse_cwg("cwg 4\n002100").unwrap(), g);
    }

    #[test]
    fn cwg_rejects_bad_input() {
        let e = ColoredGraph::parse_cwg("cwg 3\n01\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e:?}");
        let e = ColoredGraph::parse_cwg("cwg 3\n0a1\n").unwrap_err();
        assert!(
            matches!(
                e,
                Error::Parse {
                    line: 2,
                    column: 2,
                    ..
                }
            ),
            "{e:?}"
        );
        let e = ColoredGraph::parse_cwg("cwg 3\n0121\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e:?}");
        let e = ColoredGraph::parse_cwg("graph 3\n012\n").unwrap_err();
        assert!(
            matches!(
                e,
                Error::Parse {
                    line: 1,
                    column: 1,
                    ..
                }
            ),
            "{e:?}"
        );
        let e = ColoredGraph::parse_cwg("cwg 65\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }), "{e:?}");
    }

    #[test]
    fn cwg_small_orders() {
        for n in 0..2 {
            let g = ColoredGraph::new(n).unwrap();
            assert_eq!(g.to_cwg(), format!("cwg {n}\n\n"));
            assert_eq!(ColoredGraph::parse_cwg(&g.to_cwg()).unwrap(), g);
            assert_eq!(ColoredGraph::parse_cwg(&format!("cwg {n}")).unwrap(), g);
        }
    }

    #[test]
    fn parse_many_with_blank_separators() {
        let text = "cwg 2\n2\n\ncwg 3\n111\n\n\ncwg 1\n\n";
        let gs = parse_cwg_many(text).unwrap();
        assert_eq!(gs.len(), 3);
        assert_eq!(gs[0], rk(2));
        assert_eq!(gs[1].edge_weight_sum(), 3);
        assert_eq!(gs[2].order(), 1);
    }

    #[test]
    fn layers_match_weights() {
        let g = ColoredGraph::from_pair_weights(4, &[0, 1, 2, 2, 1, 0]).unwrap();
        let l = g.layers();
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(l.weight(x, y), g.weight(x, y));
            }
            assert_eq!((l.green(x) | l.blue(x) | l.ge2[x]) | (1 << x), l.all());
        }
    }

    #[test]
    fn order_limit() {
        assert!(ColoredGraph::new(64).is_ok());
        assert_eq!(
            ColoredGraph::new(65),
            Err(Error::OrderTooLarge { n: 65, max: 64 })
        );
        let g = ColoredGraph::from_fn(64, |_, _| RED).unwrap();
        assert_eq!(g.layers().ge2[0].count_ones(), 63);
        assert_eq!(g.min_degree().unwrap(), 126);
    }

    #[test]
    fn permuted_and_induced() {
        let g = ColoredGraph::from_pair_weights(3, &[2, 1, 0]).unwrap();
        let p = g.permuted(&[2, 1, 0]).unwrap();
        assert_eq!(p.weight(1, 2), 2);
        assert_eq!(p.weight(0, 2), 1);
        assert!(g.permuted(&[0, 0, 1]).is_err());
        let sub = g.induced(&[0, 1]).unwrap();
        assert_eq!(sub, rk(2));
    }
}
