//! Instance corpora and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use syswidth::content::canonical_sum;
use syswidth::generate;
use syswidth::space::SpaceKind;
use syswidth::DiscreteSpace;

pub struct Instance {
    pub name: String,
    pub space: DiscreteSpace,
}

fn inst(name: impl Into<String>, space: syswidth::Result<DiscreteSpace>) -> Instance {
    Instance {
        name: name.into(),
        space: space.expect("corpus instance builds"),
    }
}

/// Spaces with at most 8 points.
pub fn tiny_corpus() -> Vec<Instance> {
    let mut v = vec![
        inst("interval-8", generate::interval(1.0, 1.0 / 7.0)),
        inst("circle-8", generate::circle(1.0, 0.125)),
        inst("star-3x2", generate::star(3, 1.0, 0.5)),
        inst("theta-1-2", generate::theta(&[1.0, 2.0], 0.5)),
    ];
    for seed in 0..4 {
        v.push(inst(format!("points-8-{seed}"), generate::random_points(8, 2, 0.3, seed)));
    }
    for seed in 0..3 {
        v.push(inst(format!("metric-7-{seed}"), generate::random_metric(7, 0.5, seed)));
    }
    for v in &v {
        assert!(v.space.len() <= 8, "{} has {} points", v.name, v.space.len());
    }
    v
}

/// Spaces with at most 12 points.
pub fn small_corpus() -> Vec<Instance> {
    let mut v = vec![
        inst("interval-11", generate::interval(1.0, 0.1)),
        inst("circle-10", generate::circle(1.0, 0.1)),
        inst("star-3x2", generate::star(3, 1.0, 0.5)),
        inst("theta-1-2-3", generate::theta(&[1.0, 2.0, 3.0], 1.0)),
        inst("torus-3", generate::grid_torus(3)),
        inst("tree-4", generate::random_tree(4, 0.5, 1.0, 0.6, 5)),
    ];
    for seed in 0..3 {
        v.push(inst(format!("points-10-{seed}"), generate::random_points(10, 2, 0.4, seed)));
        v.push(inst(format!("points-12-{seed}"), generate::random_points(12, 2, 0.3, seed + 10)));
    }
    for v in &v {
        assert!(v.space.len() <= 12, "{} has {} points", v.name, v.space.len());
    }
    v
}

/// The full corpus: intervals, circles, trees, theta graphs, grid tori up to
/// 16 × 16, and point clouds of at most 50 points.
pub fn full_corpus() -> Vec<Instance> {
    let mut v = vec![
        inst("interval-1", generate::interval(1.0, 0.01)),
        inst("interval-3", generate::interval(3.0, 0.05)),
        inst("circle-1", generate::circle(1.0, 0.01)),
        inst("circle-5", generate::circle(5.0, 0.1)),
        inst("star-3", generate::star(3, 1.0, 0.1)),
        inst("star-5", generate::star(5, 0.7, 0.05)),
        inst("theta-1-2-3", generate::theta(&[1.0, 2.0, 3.0], 0.1)),
        inst("theta-1-1-1", generate::theta(&[1.0, 1.0, 1.0], 0.05)),
        inst("torus-3", generate::grid_torus(3)),
        inst("torus-4", generate::grid_torus(4)),
        inst("torus-8", generate::grid_torus(8)),
        inst("torus-16", generate::grid_torus(16)),
    ];
    for seed in 0..3 {
        v.push(inst(format!("tree-{seed}"), generate::random_tree(8 + 4 * seed as usize, 0.2, 1.0, 0.1, seed)));
        v.push(inst(format!("points2-50-{seed}"), generate::random_points(50, 2, 0.2, seed)));
        v.push(inst(format!("points3-30-{seed}"), generate::random_points(30, 3, 0.35, seed)));
    }
    v.extend(small_corpus());
    v
}

fn covers(space: &DiscreteSpace, c: usize, radius: f64, y: usize) -> bool {
    space.distance(c, y) + space.resolution() / 2.0 <= radius * (1.0 + 1e-12) + 1e-15
}

/// Content of every subset of a space with at most 16 points, by dynamic
/// programming over bitmasks. Entry `mask` is the minimal canonical sum over
/// all coverings of the subset `mask` by closed balls `(c, d(c,t) + h/2)`.
pub fn exhaustive_content(space: &DiscreteSpace, m: f64, cap: Option<f64>) -> Vec<f64> {
    let n = space.len();
    assert!(n <= 16);
    let h = space.resolution();
    let mut balls: Vec<(u32, f64)> = Vec::new();
    for c in 0..n {
        for t in 0..n {
            let radius = space.distance(c, t) + h / 2.0;
            if cap.is_some_and(|b| radius > b) {
                continue;
            }
            let mask = (0..n).filter(|&y| covers(space, c, radius, y)).fold(0u32, |acc, y| acc | 1 << y);
            balls.push((mask, radius.powf(m)));
        }
    }
    // every cost multiset within a relative 1e-9 of the optimum, per mask
    let full = 1usize << n;
    let mut pool: Vec<Vec<Vec<f64>>> = vec![Vec::new(); full];
    pool[0].push(Vec::new());
    let mut value = vec![f64::INFINITY; full];
    value[0] = 0.0;
    for s in 1..full {
        let low = s.trailing_zeros();
        let mut found: Vec<(f64, Vec<f64>)> = Vec::new();
        for &(mask, cost) in &balls {
            if mask >> low & 1 == 0 {
                continue;
            }
            let rest = s & !(mask as usize);
            for prev in &pool[rest] {
                let mut costs = prev.clone();
                costs.push(cost);
                costs.sort_by(f64::total_cmp);
                found.push((canonical_sum(costs.clone()), costs));
            }
        }
        let best = found.iter().map(|f| f.0).fold(f64::INFINITY, f64::min);
        value[s] = best;
        let mut keep: Vec<Vec<f64>> = found
            .into_iter()
            .filter(|f| f.0 <= best * (1.0 + 1e-9))
            .map(|f| f.1)
            .collect();
        keep.sort_by(|a, b| a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(a.len().cmp(&b.len())));
        keep.dedup();
        pool[s] = keep;
    }
    value
}

/// Shortest simple cycle of length at most `bound` accepted by `keep`,
/// found by depth-first enumeration. `keep` receives the vertex sequence.
pub fn shortest_cycle_brute(
    space: &DiscreteSpace,
    bound: f64,
    keep: &dyn Fn(&[usize]) -> bool,
) -> Option<f64> {
    let n = space.len();
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for e in space.edges() {
        adj[e.a].push((e.b, e.length));
        adj[e.b].push((e.a, e.length));
    }
    let mut best: Option<f64> = None;
    // cycles are rooted at their smallest vertex
    for root in 0..n {
        let mut path = vec![root];
        let mut on = vec![false; n];
        on[root] = true;
        dfs(&adj, root, 0.0, bound, &mut path, &mut on, keep, &mut best);
    }
    best
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    adj: &[Vec<(usize, f64)>],
    v: usize,
    len: f64,
    bound: f64,
    path: &mut Vec<usize>,
    on: &mut [bool],
    keep: &dyn Fn(&[usize]) -> bool,
    best: &mut Option<f64>,
) {
    let root = path[0];
    for &(w, l) in &adj[v] {
        let total = len + l;
        if total > bound + 1e-9 {
            continue;
        }
        if w == root && path.len() >= 3 {
            if keep(path) && best.is_none_or(|b| total < b) {
                *best = Some(total);
            }
            continue;
        }
        if w <= root || on[w] {
            continue;
        }
        on[w] = true;
        path.push(w);
        dfs(adj, w, total, bound, path, on, keep, best);
        path.pop();
        on[w] = false;
    }
}

/// Winding of a closed walk on the `k × k` grid torus, from vertex
/// coordinates `(i, j) = (v / k, v % k)`.
pub fn torus_winding(k: usize, cycle: &[usize]) -> (i64, i64) {
    let step = |a: usize, b: usize| -> i64 {
        let d = (b as i64 - a as i64).rem_euclid(k as i64);
        if d > k as i64 / 2 { d - k as i64 } else { d }
    };
    let (mut wi, mut wj) = (0i64, 0i64);
    for idx in 0..cycle.len() {
        let (a, b) = (cycle[idx], cycle[(idx + 1) % cycle.len()]);
        wi += step(a / k, b / k);
        wj += step(a % k, b % k);
    }
    (wi / k as i64, wj / k as i64)
}

/// Shortest cycle on the grid torus whose winding is nonzero mod 2.
pub fn torus_systole_brute(k: usize) -> f64 {
    let t = generate::grid_torus(k).unwrap();
    assert_eq!(t.kind(), SpaceKind::GridSurface);
    let keep = |c: &[usize]| {
        let (a, b) = torus_winding(k, c);
        a.rem_euclid(2) != 0 || b.rem_euclid(2) != 0
    };
    shortest_cycle_brute(&t, k as f64, &keep).expect("a straight loop has length k")
}
