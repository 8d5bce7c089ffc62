//! Brute-force oracles. Deliberately naive and independent of the library's
//! search code; they only use the graph container.
#![allow(dead_code)]

use rand::Rng;
use wturan::ColoredGraph;

/// Every labelled graph of order `n`, counting the row-major weight string in base 3.
pub fn all_graphs(n: usize) -> impl Iterator<Item = ColoredGraph> {
    let m = n * n.saturating_sub(1) / 2;
    (0..3u64.pow(m as u32)).map(move |mut code| {
        let mut w = vec![0u8; m];
        for slot in w.iter_mut().rev() {
            *slot = (code % 3) as u8;
            code /= 3;
        }
        ColoredGraph::from_pair_weights(n, &w).unwrap()
    })
}

/// Tries every injective map from pattern vertices to host vertices.
pub fn brute_embeds(pattern: &ColoredGraph, host: &ColoredGraph) -> bool {
    fn go(p: &ColoredGraph, h: &ColoredGraph, map: &mut Vec<usize>) -> bool {
        let x = map.len();
        if x == p.order() {
            return true;
        }
        for v in 0..h.order() {
            if map.contains(&v) {
                continue;
            }
            if (0..x).all(|y| p.weight(x, y) <= h.weight(v, map[y])) {
                map.push(v);
                if go(p, h, map) {
                    return true;
                }
                map.pop();
            }
        }
        false
    }
    pattern.order() <= host.order() && go(pattern, host, &mut Vec::new())
}

pub fn brute_free(host: &ColoredGraph, family: &[ColoredGraph]) -> bool {
    family.iter().all(|p| !brute_embeds(p, host))
}

/// Fewest green cliques covering the vertex set (subset DP).
pub fn green_clique_cover_number(g: &ColoredGraph) -> usize {
    let n = g.order();
    let full = (1usize << n) - 1;
    let is_green = |s: usize| {
        (0..n)
            .all(|x| s >> x & 1 == 0 || (x + 1..n).all(|y| s >> y & 1 == 0 || g.weight(x, y) == 0))
    };
    let mut best = vec![usize::MAX; full + 1];
    best[0] = 0;
    for s in 1..=full {
        // Cover the lowest vertex of s with some green clique inside s.
        let low = s & s.wrapping_neg();
        let rest = s & !low;
        let mut sub = rest;
        loop {
            let clique = sub | low;
            if is_green(clique) && best[s & !clique] != usize::MAX {
                best[s] = best[s].min(best[s & !clique] + 1);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    best[full]
}

/// Maximum edge-weight sum over all family-free graphs of order `n` with weights `<= cap`.
pub fn brute_ex(n: usize, family: &[ColoredGraph], cap: u8) -> Option<u32> {
    all_graphs(n)
        .filter(|g| g.pair_weights().all(|w| w <= cap))
        .filter(|g| brute_free(g, family))
        .map(|g| g.edge_weight_sum())
        .max()
}

pub fn random_graph(rng: &mut impl Rng, n: usize) -> ColoredGraph {
    ColoredGraph::from_fn(n, |_, _| rng.gen_range(0..3u8)).unwrap()
}
