//! Brute-force reference implementations for cross-checking the fast paths.
//!
//! Each works directly from the definitions (join recursion, explicit depths,
//! all-pairs breadth-first search) and shares no code with the single-pass
//! evaluators.

use std::collections::VecDeque;
use std::ops::Add;

use num_traits::Zero;

use crate::properties::AdditiveProperty;
use crate::tree::{unjoin, PlaneTree};

/// `P(T1 ⋉ T2) = P(T1) + P(T2) + f(T2)`, `P(single vertex) = c`, by recursion.
pub fn eval_by_join<V: Clone + Zero + Add<Output = V>>(p: &AdditiveProperty<V>, t: &PlaneTree) -> V {
    match unjoin(t) {
        Err(_) => p.constant().clone(),
        Ok((t1, t2)) => eval_by_join(p, &t1) + eval_by_join(p, &t2) + p.toll(t2.view()),
    }
}

/// `(Σ depth over all vertices, over leaves, over internal nodes)`.
pub fn depth_sums(t: &PlaneTree) -> (u64, u64, u64) {
    let mut depth = 0u64;
    let mut child_counts = vec![0usize];
    let (mut all, mut leaf, mut internal) = (0, 0, 0);
    for &s in t.steps() {
        if s {
            *child_counts.last_mut().expect("root frame") += 1;
            depth += 1;
            child_counts.push(0);
        } else {
            let c = child_counts.pop().expect("balanced word");
            all += depth;
            if c == 0 {
                leaf += depth;
            }
            if c == 1 {
                internal += depth;
            }
            depth -= 1;
        }
    }
    (all, leaf, internal)
}

/// Sum of distances over unordered vertex pairs, by BFS from every vertex.
pub fn bfs_wiener(t: &PlaneTree) -> u64 {
    let v = t.vertices();
    let mut adj = vec![Vec::new(); v];
    let mut stack = vec![0usize];
    let mut next = 1;
    for &s in t.steps() {
        if s {
            let p = *stack.last().expect("root");
            adj[p].push(next);
            adj[next].push(p);
            stack.push(next);
            next += 1;
        } else {
            stack.pop();
        }
    }
    let mut total = 0u64;
    let mut dist = vec![usize::MAX; v];
    for src in 0..v {
        dist.fill(usize::MAX);
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        total += dist.iter().map(|&d| d as u64).sum::<u64>();
    }
    total / 2
}
