//! Named colored graphs and the extremal constructions.
//!
//! Vertex layout is fixed so that serialized outputs are reproducible: parts
//! are laid out as consecutive index ranges in the order they are listed
//! (A-parts first, then B, then C).

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ColoredGraph, BLUE, GREEN, RED};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Part {
    pub name: String,
    pub start: usize,
    pub end: usize,
}

impl Part {
    pub fn range(&self) -> Range<usize> {
        self.start..self.end
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

/// A graph together with a named partition of its vertex set into ranges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionedConstruction {
    pub graph: ColoredGraph,
    pub parts: Vec<Part>,
}

impl PartitionedConstruction {
    fn from_sizes<F>(sizes: &[(String, usize)], mut weight: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> u8,
    {
        let mut parts = Vec::with_capacity(sizes.len());
        let mut start = 0;
        for (name, len) in sizes {
            parts.push(Part {
                name: name.clone(),
                start,
                end: start + len,
            });
            start += len;
        }
        let mut part_of = vec![0usize; start];
        for (i, p) in parts.iter().enumerate() {
            part_of[p.range()].fill(i);
        }
        let graph = ColoredGraph::from_fn(start, |x, y| weight(part_of[x], part_of[y]))?;
        Ok(PartitionedConstruction { graph, parts })
    }

    pub fn part(&self, name: &str) -> Option<&Part> {
        self.parts.iter().find(|p| p.name == name)
    }

    /// Index of the part containing `v`.
    pub fn part_of(&self, v: usize) -> Option<usize> {
        self.parts.iter().position(|p| p.range().contains(&v))
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub fn gen_rk(n: usize) -> Result<ColoredGraph> {
    ColoredGraph::from_fn(n, |_, _| RED)
}

pub fn gen_bk(n: usize) -> Result<ColoredGraph> {
    ColoredGraph::from_fn(n, |_, _| BLUE)
}

/// `RK_n` with the pair `(0, 1)` recoloured blue.
pub fn gen_rk_minus(n: usize) -> Result<ColoredGraph> {
    if n < 2 {
        return Err(invalid(format!("RK_n^- needs n >= 2, got {n}")));
    }
    ColoredGraph::from_fn(n, |x, y| if (x, y) == (0, 1) { BLUE } else { RED })
}

/// `G_{a+b,b}`: a red `b`-clique (vertices `0..b`) joined by blue pairs to a
/// blue `(a-b)`-clique; order `a = a_plus_b - b`.
pub fn gen_gab(a_plus_b: usize, b: usize) -> Result<ColoredGraph> {
    if b == 0 || a_plus_b < 2 * b {
        return Err(invalid(format!(
            "G_{{{a_plus_b},{b}}} needs a >= b >= 1 with a = {a_plus_b} - {b}"
        )));
    }
    let a = a_plus_b - b;
    ColoredGraph::from_fn(a, |x, y| if y < b && x < b { RED } else { BLUE })
}

/// The forbidden family `F_t = [G_{t,1}, .., G_{t,floor(t/2)}]`.
pub fn gen_family(t: usize) -> Result<Vec<ColoredGraph>> {
    if t < 2 {
        return Err(invalid(format!("F_t needs t >= 2, got {t}")));
    }
    (1..=t / 2).map(|i| gen_gab(t, i)).collect()
}

/// The auxiliary graph `H_k` of order `q`: parts `A` (`k`, pairwise red),
/// `B` (`p_k = max(0, k+q+1-2b)`), and `C` (the rest, nonempty); pairs
/// between `A` and `A ∪ C` are red, all others blue.
pub fn gen_hk(q: usize, b: usize, k: usize) -> Result<PartitionedConstruction> {
    if !(q > b && b >= 1 && k < b) {
        return Err(invalid(format!(
            "H_k needs q > b >= 1 and 0 <= k <= b-1, got q={q}, b={b}, k={k}"
        )));
    }
    let p_k = (k + q + 1).saturating_sub(2 * b);
    let c = q - k - p_k;
    debug_assert!(c > 0);
    let sizes = [
        ("A".to_string(), k),
        ("B".to_string(), p_k),
        ("C".to_string(), c),
    ];
    PartitionedConstruction::from_sizes(&sizes, |pa, pb| match (pa.min(pb), pa.max(pb)) {
        (0, 0) | (0, 2) => RED,
        _ => BLUE,
    })
}

/// The graph `J` of order `r+1` on `A ∪ {b', b'', c', c''}` with `|A| = r-3`:
/// `c'c''` green, `b'c'` and `b''c''` blue, every other pair red.
pub fn gen_j(r: usize) -> Result<PartitionedConstruction> {
    if r < 3 {
        return Err(invalid(format!("J needs r >= 3, got {r}")));
    }
    let sizes = [
        ("A".to_string(), r - 3),
        ("b'".to_string(), 1),
        ("b''".to_string(), 1),
        ("c'".to_string(), 1),
        ("c''".to_string(), 1),
    ];
    const B1: usize = 1;
    const B2: usize = 2;
    const C1: usize = 3;
    const C2: usize = 4;
    PartitionedConstruction::from_sizes(&sizes, |pa, pb| match (pa.min(pb), pa.max(pb)) {
        (a, b) if a == b => RED, // pairs inside A
        (C1, C2) => GREEN,
        (B1, C1) | (B2, C2) => BLUE,
        _ => RED,
    })
}

/// Sharpness graph for the odd case, `n = scale·(3r-1)`: parts `A1..A5`
/// (size `scale`) and `B1..B{r-2}` (size `3·scale`). Red pairs join
/// `A_i`–`A_{i+1 mod 5}`, every `A_i`–`B_j`, and distinct `B_j`–`B_j'`; all
/// other pairs are green. Every vertex has degree `scale·(6r-8)`.
pub fn gen_odd_extremal(r: usize, scale: usize) -> Result<PartitionedConstruction> {
    if r < 2 || scale < 1 {
        return Err(invalid(format!(
            "odd extremal graph needs r >= 2 and scale >= 1, got r={r}, scale={scale}"
        )));
    }
    check_order(scale.checked_mul(3 * r - 1))?;
    let mut sizes: Vec<(String, usize)> = (1..=5).map(|i| (format!("A{i}"), scale)).collect();
    sizes.extend((1..=r - 2).map(|j| (format!("B{j}"), 3 * scale)));
    PartitionedConstruction::from_sizes(&sizes, |pa, pb| {
        let (lo, hi) = (pa.min(pb), pa.max(pb));
        match (lo < 5, hi < 5) {
            (true, true) => {
                if (lo + 1) % 5 == hi || (hi + 1) % 5 == lo {
                    RED
                } else {
                    GREEN
                }
            }
            (true, false) => RED,
            _ => {
                if lo == hi {
                    GREEN
                } else {
                    RED
                }
            }
        }
    })
}

/// Sharpness graph for the even case, `n = scale·(7r-5)`: parts
/// `A1..A{r-3}` (size `7·scale`), `B'`, `B''` (`6·scale`), `C'`, `C''`
/// (`2·scale`). Green inside parts and between `C'` and `C''`; blue
/// `B'`–`C'` and `B''`–`C''`; red elsewhere. Every vertex has degree
/// `scale·(14r-24)`.
pub fn gen_even_extremal(r: usize, scale: usize) -> Result<PartitionedConstruction> {
    if r < 3 || scale < 1 {
        return Err(invalid(format!(
            "even extremal graph needs r >= 3 and scale >= 1, got r={r}, scale={scale}"
        )));
    }
    check_order(scale.checked_mul(7 * r - 5))?;
    let mut sizes: Vec<(String, usize)> =
        (1..=r - 3).map(|i| (format!("A{i}"), 7 * scale)).collect();
    sizes.push(("B'".into(), 6 * scale));
    sizes.push(("B''".into(), 6 * scale));
    sizes.push(("C'".into(), 2 * scale));
    sizes.push(("C''".into(), 2 * scale));
    let b1 = r - 3;
    let (b2, c1, c2) = (b1 + 1, b1 + 2, b1 + 3);
    PartitionedConstruction::from_sizes(&sizes, |pa, pb| {
        let (lo, hi) = (pa.min(pb), pa.max(pb));
        if lo == hi || (lo, hi) == (c1, c2) {
            GREEN
        } else if (lo, hi) == (b1, c1) || (lo, hi) == (b2, c2) {
            BLUE
        } else {
            RED
        }
    })
}

/// Blow-up of `RK_r^-` on `3r-2` vertices: the two endpoints of the blue
/// pair become classes of size 2, the other `r-2` vertices classes of size 3.
pub fn gen_ehss_blowup(r: usize) -> Result<PartitionedConstruction> {
    if r < 2 {
        return Err(invalid(format!("RK_r^- blow-up needs r >= 2, got {r}")));
    }
    let mut sizes = vec![2, 2];
    sizes.resize(r, 3);
    blow_up(&gen_rk_minus(r)?, &sizes)
}

/// Replaces vertex `i` of `pattern` by a green class `W{i+1}` of
/// `sizes[i]` vertices; pairs across classes inherit the pattern weight.
pub fn blow_up(pattern: &ColoredGraph, sizes: &[usize]) -> Result<PartitionedConstruction> {
    if sizes.len() != pattern.order() {
        return Err(invalid(format!(
            "blow-up of an order-{} pattern needs {} sizes, got {}",
            pattern.order(),
            pattern.order(),
            sizes.len()
        )));
    }
    if let Some(i) = sizes.iter().position(|&s| s == 0) {
        return Err(invalid(format!("blow-up class {i} has size zero")));
    }
    check_order(Some(sizes.iter().sum()))?;
    let named: Vec<(String, usize)> = sizes
        .iter()
        .enumerate()
        .map(|(i, &s)| (format!("W{}", i + 1), s))
        .collect();
    PartitionedConstruction::from_sizes(&named, |a, b| pattern.weight(a, b))
}

fn check_order(n: Option<usize>) -> Result<()> {
    match n {
        Some(n) if n <= crate::graph::MAX_ORDER => Ok(()),
        Some(n) => Err(Error::OrderTooLarge {
            n,
            max: crate::graph::MAX_ORDER,
        }),
        None => Err(invalid("construction order overflows")),
    }
}
