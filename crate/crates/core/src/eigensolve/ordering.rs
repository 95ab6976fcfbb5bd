use std::collections::VecDeque;

/// Reverse Cuthill–McKee ordering; returns `perm` with `perm[new] = old`.
pub fn reverse_cuthill_mckee(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    let mut nbrs = Vec::new();
    while order.len() < n {
        // lowest-degree unvisited node seeds the next component
        let seed = (0..n).filter(|&i| !visited[i]).min_by_key(|&i| (degree[i], i)).unwrap();
        let start = pseudo_peripheral(adj, seed, &degree);
        visited[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            nbrs.clear();
            nbrs.extend(adj[v].iter().copied().filter(|&w| !visited[w]));
            nbrs.sort_by_key(|&w| (degree[w], w));
            nbrs.dedup();
            for &w in &nbrs {
                visited[w] = true;
                queue.push_back(w);
            }
        }
    }
    order.reverse();
    order
}

fn pseudo_peripheral(adj: &[Vec<usize>], seed: usize, degree: &[usize]) -> usize {
    let mut root = seed;
    let (mut ecc, mut last) = bfs_levels(adj, root);
    for _ in 0..10 {
        let cand = *last.iter().min_by_key(|&&w| (degree[w], w)).unwrap();
        let (e, l) = bfs_levels(adj, cand);
        if e <= ecc {
            break;
        }
        root = cand;
        ecc = e;
        last = l;
    }
    root
}

/// Eccentricity of `root` in its component and the nodes of the last level.
fn bfs_levels(adj: &[Vec<usize>], root: usize) -> (usize, Vec<usize>) {
    let mut level = vec![usize::MAX; adj.len()];
    level[root] = 0;
    let mut frontier = vec![root];
    let mut depth = 0;
    loop {
        let mut next = Vec::new();
        for &v in &frontier {
            for &w in &adj[v] {
                if level[w] == usize::MAX {
                    level[w] = depth + 1;
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            return (depth, frontier);
        }
        frontier = next;
        depth += 1;
    }
}
