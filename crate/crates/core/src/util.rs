//! Bitset clique routines shared by the search modules.

/// Some clique of exactly `k` vertices inside `candidates`, lowest-index first.
pub(crate) fn find_clique(adj: &[u64], candidates: u64, k: usize) -> Option<Vec<usize>> {
    let mut chosen = Vec::with_capacity(k);
    if extend_clique(adj, candidates, k, &mut chosen) {
        Some(chosen)
    } else {
        None
    }
}

fn extend_clique(adj: &[u64], candidates: u64, k: usize, chosen: &mut Vec<usize>) -> bool {
    if chosen.len() == k {
        return true;
    }
    if (candidates.count_ones() as usize) < k - chosen.len() {
        return false;
    }
    let mut rest = candidates;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        chosen.push(v);
        // Only later vertices, so each clique is tried once.
        if extend_clique(adj, adj[v] & rest, k, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// A maximum clique inside `candidates` (lexicographically first among
/// maxima found by the search order).
pub(crate) fn max_clique(adj: &[u64], candidates: u64) -> Vec<usize> {
    let mut best = Vec::new();
    let mut cur = Vec::new();
    expand_max(adj, candidates, &mut cur, &mut best);
    best
}

fn expand_max(adj: &[u64], mut candidates: u64, cur: &mut Vec<usize>, best: &mut Vec<usize>) {
    if candidates == 0 {
        if cur.len() > best.len() {
            best.clone_from(cur);
        }
        return;
    }
    while candidates != 0 {
        if cur.len() + color_bound(adj, candidates) <= best.len() {
            return;
        }
        let v = candidates.trailing_zeros() as usize;
        candidates &= candidates - 1;
        cur.push(v);
        expand_max(adj, adj[v] & candidates, cur, best);
        cur.pop();
    }
}

/// Greedy colouring bound on the clique number of the induced subgraph.
fn color_bound(adj: &[u64], mut uncolored: u64) -> usize {
    let mut colors = 0;
    while uncolored != 0 {
        colors += 1;
        let mut avail = uncolored;
        while avail != 0 {
            let v = avail.trailing_zeros() as usize;
            avail &= !(1 << v) & !adj[v];
            uncolored &= !(1 << v);
        }
    }
    colors
}

#[cfg(test)]
pub(crate) fn is_clique(adj: &[u64], vertices: &[usize]) -> bool {
    let mask = vertices.iter().fold(0u64, |m, &v| m | (1 << v));
    vertices.iter().all(|&v| (adj[v] | (1 << v)) & mask == mask)
}
