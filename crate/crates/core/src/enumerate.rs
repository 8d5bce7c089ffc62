//! Exhaustive enumeration of colored graphs of a fixed order.
//!
//! `Raw` visits every labelled graph, in lexicographic order of the
//! row-major weight string. `IsomorphFree` visits one representative per
//! isomorphism class by canonical augmentation: a child built by appending a
//! vertex to a class representative of order `n-1` is accepted iff the new
//! vertex lies in the automorphism orbit of the last canonical vertex, and
//! isomorphic siblings from the same parent are collapsed.
//!
//! Both modes split the space into [`Shard`]s that can be processed
//! independently (and in parallel); concatenating the shards in order gives
//! the sequential enumeration order.

use std::collections::HashSet;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::canon::canonical_labeling;
use crate::error::{Error, Result};
use crate::graph::{pair_count, ColoredGraph, Layers};

/// Largest order accepted in raw mode (`3^15` labelled graphs).
pub const RAW_BOUND: usize = 6;
/// Largest order accepted in isomorph-free mode.
pub const ISO_BOUND: usize = 8;

const RAW_PREFIX: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Raw,
    IsomorphFree,
}

impl Mode {
    pub fn bound(self) -> usize {
        match self {
            Mode::Raw => RAW_BOUND,
            Mode::IsomorphFree => ISO_BOUND,
        }
    }

    pub fn check(self, n: usize) -> Result<()> {
        if n > self.bound() {
            Err(Error::BoundExceeded {
                what: match self {
                    Mode::Raw => "raw enumeration",
                    Mode::IsomorphFree => "isomorph-free enumeration",
                },
                n,
                bound: self.bound(),
            })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumStats {
    pub visited: u64,
    /// Set when the visitor stopped the enumeration early.
    pub stopped: bool,
}

impl EnumStats {
    pub fn merge(&mut self, other: EnumStats) {
        self.visited += other.visited;
        self.stopped |= other.stopped;
    }
}

/// An independently enumerable slice of the search space.
#[derive(Debug, Clone)]
pub struct Shard {
    kind: ShardKind,
}

#[derive(Debug, Clone)]
enum ShardKind {
    /// All labelled graphs whose first pairs carry `prefix`.
    Raw { n: usize, prefix: Vec<u8> },
    /// All accepted one-vertex extensions of an isomorphism-class representative.
    Extend { parent: ColoredGraph },
    /// Exactly one graph (orders 0 and 1).
    Single(ColoredGraph),
}

/// Splits the enumeration of order `n` into shards.
pub fn shards(n: usize, mode: Mode) -> Result<Vec<Shard>> {
    mode.check(n)?;
    match mode {
        Mode::Raw => {
            let k = RAW_PREFIX.min(pair_count(n));
            let count = 3usize.pow(k as u32);
            Ok((0..count)
                .map(|mut code| {
                    let mut prefix = vec![0u8; k];
                    for slot in prefix.iter_mut().rev() {
                        *slot = (code % 3) as u8;
                        code /= 3;
                    }
                    Shard {
                        kind: ShardKind::Raw { n, prefix },
                    }
                })
                .collect())
        }
        Mode::IsomorphFree => {
            if n <= 1 {
                return Ok(vec![Shard {
                    kind: ShardKind::Single(ColoredGraph::new(n)?),
                }]);
            }
            Ok(iso_representatives(n - 1)?
                .into_iter()
                .map(|parent| Shard {
                    kind: ShardKind::Extend { parent },
                })
                .collect())
        }
    }
}

impl Shard {
    /// Visits every graph in the shard until the visitor breaks.
    pub fn for_each<F>(&self, mut visit: F) -> EnumStats
    where
        F: FnMut(&ColoredGraph) -> ControlFlow<()>,
    {
        let mut stats = EnumStats::default();
        match &self.kind {
            ShardKind::Single(g) => {
                stats.visited = 1;
                stats.stopped = visit(g).is_break();
            }
            ShardKind::Raw { n, prefix } => {
                let m = pair_count(*n);
                let mut g = ColoredGraph::new(*n).expect("order within bound");
                for (idx, &w) in prefix.iter().enumerate() {
                    g.set_by_index(idx, w);
                }
                let k = prefix.len();
                loop {
                    stats.visited += 1;
                    if visit(&g).is_break() {
                        stats.stopped = true;
                        break;
                    }
                    // Odometer over the free pairs, last pair fastest.
                    let mut j = m;
                    loop {
                        if j == k {
                            return stats;
                        }
                        j -= 1;
                        let w = g.get_by_index(j);
                        if w < 2 {
                            g.set_by_index(j, w + 1);
                            break;
                        }
                        g.set_by_index(j, 0);
                    }
                }
            }
            ShardKind::Extend { parent } => {
                let base = parent.layers();
                let p = parent.order();
                let mut seen: HashSet<Vec<u8>> = HashSet::new();
                let mut ext = vec![0u8; p];
                loop {
                    let layers = extend_layers(&base, &ext);
                    let labeling = canonical_labeling(&layers);
                    if labeling.last_orbit & (1 << p) != 0 {
                        let child = graph_from_layers(&layers);
                        let code = child
                            .permuted(&labeling.order)
                            .expect("labeling is a permutation")
                            .pair_weights()
                            .collect::<Vec<u8>>();
                        if seen.insert(code) {
                            stats.visited += 1;
                            if visit(&child).is_break() {
                                stats.stopped = true;
                                return stats;
                            }
                        }
                    }
                    if !advance(&mut ext) {
                        break;
                    }
                }
            }
        }
        stats
    }
}

fn advance(digits: &mut [u8]) -> bool {
    for d in digits.iter_mut().rev() {
        if *d < 2 {
            *d += 1;
            return true;
        }
        *d = 0;
    }
    false
}

fn extend_layers(base: &Layers, ext: &[u8]) -> Layers {
    let mut l = base.clone();
    let v = base.n;
    l.n = v + 1;
    l.ge1[v] = 0;
    l.ge2[v] = 0;
    for (u, &w) in ext.iter().enumerate() {
        if w >= 1 {
            l.ge1[u] |= 1 << v;
            l.ge1[v] |= 1 << u;
        }
        if w == 2 {
            l.ge2[u] |= 1 << v;
            l.ge2[v] |= 1 << u;
        }
    }
    l
}

fn graph_from_layers(l: &Layers) -> ColoredGraph {
    ColoredGraph::from_fn(l.n, |x, y| l.weight(x, y)).expect("order within bound")
}

/// Visits every colored graph on `n` vertices (per `mode`) sequentially.
pub fn enumerate<F>(n: usize, mode: Mode, mut visit: F) -> Result<EnumStats>
where
    F: FnMut(&ColoredGraph) -> ControlFlow<()>,
{
    let mut total = EnumStats::default();
    for shard in shards(n, mode)? {
        let stats = shard.for_each(&mut visit);
        total.merge(stats);
        if stats.stopped {
            break;
        }
    }
    Ok(total)
}

/// One representative of every isomorphism class of order `n`.
pub fn iso_representatives(n: usize) -> Result<Vec<ColoredGraph>> {
    Mode::IsomorphFree.check(n)?;
    let mut out = Vec::new();
    enumerate(n, Mode::IsomorphFree, |g| {
        out.push(g.clone());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::canonical_form;

    fn count(n: usize, mode: Mode) -> u64 {
        enumerate(n, mode, |_| ControlFlow::Continue(()))
            .unwrap()
            .visited
    }

    #[test]
    fn raw_counts() {
        assert_eq!(count(0, Mode::Raw), 1);
        assert_eq!(count(1, Mode::Raw), 1);
        assert_eq!(count(2, Mode::Raw), 3);
        assert_eq!(count(3, Mode::Raw), 27);
        assert_eq!(count(4, Mode::Raw), 729);
        assert_eq!(count(5, Mode::Raw), 59049);
    }

    #[test]
    fn raw_is_lexicographic_and_distinct() {
        let mut all = Vec::new();
        enumerate(4, Mode::Raw, |g| {
            all.push(g.pair_weights().collect::<Vec<_>>());
            ControlFlow::Continue(())
        })
        .unwrap();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all.len(), 729);
    }

    #[test]
    fn iso_counts_small() {
        assert_eq!(count(0, Mode::IsomorphFree), 1);
        assert_eq!(count(1, Mode::IsomorphFree), 1);
        assert_eq!(count(2, Mode::IsomorphFree), 3);
        assert_eq!(count(3, Mode::IsomorphFree), 10);
    }

    #[test]
    fn iso_matches_dedup_of_raw() {
        for n in 2..=5 {
            let mut raw = HashSet::new();
            enumerate(n, Mode::Raw, |g| {
                raw.insert(canonical_form(g).unwrap());
                ControlFlow::Continue(())
            })
            .unwrap();
            let mut iso = Vec::new();
            enumerate(n, Mode::IsomorphFree, |g| {
                iso.push(canonical_form(g).unwrap());
                ControlFlow::Continue(())
            })
            .unwrap();
            let iso_set: HashSet<_> = iso.iter().cloned().collect();
            assert_eq!(iso.len(), iso_set.len(), "duplicate class at n={n}");
            assert_eq!(iso_set, raw, "class sets differ at n={n}");
        }
    }

    #[test]
    fn bounds() {
        assert!(matches!(
            shards(7, Mode::Raw),
            Err(Error::BoundExceeded { n: 7, bound: 6, .. })
        ));
        assert!(matches!(
            shards(9, Mode::IsomorphFree),
            Err(Error::BoundExceeded { n: 9, bound: 8, .. })
        ));
    }

    #[test]
    fn early_stop() {
        let mut seen = 0;
        let stats = enumerate(4, Mode::Raw, |_| {
            seen += 1;
            if seen == 10 {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })
        .unwrap();
        assert_eq!(stats.visited, 10);
        assert!(stats.stopped);
    }

    #[test]
    fn shards_concatenate_to_sequential_order() {
        let mut seq = Vec::new();
        enumerate(3, Mode::Raw, |g| {
            seq.push(g.clone());
            ControlFlow::Continue(())
        })
        .unwrap();
        let mut sharded = Vec::new();
        for s in shards(3, Mode::Raw).unwrap() {
            s.for_each(|g| {
                sharded.push(g.clone());
                ControlFlow::Continue(())
            });
        }
        assert_eq!(seq, sharded);
    }
}
