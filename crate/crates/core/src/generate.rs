//! Deterministic instance generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::space::DiscreteSpace;

fn check_h(h: f64) -> Result<()> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidParameter(format!("resolution {h}")));
    }
    Ok(())
}

fn check_length(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::InvalidParameter(format!("{name} must be > 0, got {v}")));
    }
    Ok(())
}

fn pieces(length: f64, h: f64) -> usize {
    ((length / h) - 1e-9).ceil().max(1.0) as usize
}

/// Append a subdivided arc from `a` to `b`; returns the new vertex count.
fn arc(edges: &mut Vec<(usize, usize, f64)>, mut next: usize, a: usize, b: usize, length: f64, h: f64) -> usize {
    let k = pieces(length, h);
    let step = length / k as f64;
    let mut prev = a;
    for i in 0..k {
        let v = if i + 1 == k {
            b
        } else {
            next += 1;
            next - 1
        };
        edges.push((prev, v, step));
        prev = v;
    }
    next
}

/// Path graph on `[0, length]` with spacing at most `h`.
pub fn interval(length: f64, h: f64) -> Result<DiscreteSpace> {
    check_h(h)?;
    check_length("length", length)?;
    let k = pieces(length, h);
    let step = length / k as f64;
    let edges: Vec<_> = (0..k).map(|i| (i, i + 1, step)).collect();
    DiscreteSpace::metric_graph(k + 1, &edges, step)
}

/// Cycle graph of total length `length` with spacing at most `h`.
pub fn circle(length: f64, h: f64) -> Result<DiscreteSpace> {
    check_h(h)?;
    check_length("length", length)?;
    let k = pieces(length, h);
    if k < 3 {
        return Err(Error::InvalidParameter("a circle needs at least 3 points".into()));
    }
    let step = length / k as f64;
    let edges: Vec<_> = (0..k).map(|i| (i, (i + 1) % k, step)).collect();
    DiscreteSpace::metric_graph(k, &edges, step)
}

/// Star with `arms` edges of length `length`, subdivided; the hub is 0.
pub fn star(arms: usize, length: f64, h: f64) -> Result<DiscreteSpace> {
    check_h(h)?;
    check_length("length", length)?;
    if arms == 0 {
        return Err(Error::InvalidParameter("a star needs at least one arm".into()));
    }
    let mut edges = Vec::new();
    let mut next = 1;
    for _ in 0..arms {
        let tip = next;
        next += 1;
        next = arc(&mut edges, next, 0, tip, length, h);
    }
    DiscreteSpace::metric_graph(next, &edges, h)
}

/// Random tree with `count` edges of length in `[lo, hi]`, each edge
/// subdivided to spacing at most `h`. Vertex `i` attaches to a uniform
/// earlier vertex.
pub fn random_tree(count: usize, lo: f64, hi: f64, h: f64, seed: u64) -> Result<DiscreteSpace> {
    check_h(h)?;
    check_length("lo", lo)?;
    if !(hi >= lo) {
        return Err(Error::InvalidParameter(format!("need lo <= hi, got ({lo}, {hi})")));
    }
    if count == 0 {
        return Err(Error::InvalidParameter("a tree needs at least one edge".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    // branch vertices are 0..=count; subdivision points come after
    let mut next = count + 1;
    for i in 1..=count {
        let parent = rng.gen_range(0..i);
        let length = if hi > lo { rng.gen_range(lo..=hi) } else { lo };
        next = arc(&mut edges, next, parent, i, length, h);
    }
    DiscreteSpace::metric_graph(next, &edges, h)
}

/// Two vertices joined by arcs of the given lengths, each subdivided.
pub fn theta(arcs: &[f64], h: f64) -> Result<DiscreteSpace> {
    check_h(h)?;
    if arcs.len() < 2 {
        return Err(Error::InvalidParameter("a theta graph needs at least two arcs".into()));
    }
    let mut edges = Vec::new();
    let mut next = 2;
    for &len in arcs {
        check_length("arc length", len)?;
        next = arc(&mut edges, next, 0, 1, len, h);
    }
    DiscreteSpace::metric_graph(next, &edges, h)
}

/// `k × k` flat torus with unit axis edges, each square split along one
/// diagonal of length `√2`: from `(i, j)` to `(i+1, j+1)` when `i + j` is
/// even, from `(i+1, j)` to `(i, j+1)` otherwise. Vertex `(i, j)` has index
/// `i k + j`; the resolution is `√2`.
pub fn grid_torus(k: usize) -> Result<DiscreteSpace> {
    if k < 3 {
        return Err(Error::InvalidParameter("grid torus needs k >= 3".into()));
    }
    let id = |i: usize, j: usize| (i % k) * k + (j % k);
    let diag = std::f64::consts::SQRT_2;
    let mut edges = Vec::with_capacity(3 * k * k);
    let mut faces = Vec::with_capacity(2 * k * k);
    for i in 0..k {
        for j in 0..k {
            edges.push((id(i, j), id(i + 1, j), 1.0));
            edges.push((id(i, j), id(i, j + 1), 1.0));
        }
    }
    for i in 0..k {
        for j in 0..k {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            if (i + j) % 2 == 0 {
                edges.push((a, c, diag));
                faces.push([a, b, c]);
                faces.push([a, c, d]);
            } else {
                edges.push((b, d, diag));
                faces.push([a, b, d]);
                faces.push([b, c, d]);
            }
        }
    }
    DiscreteSpace::surface(k * k, &edges, &faces, diag)
}

/// `n` uniform points in the unit square (`dim = 2`) or cube (`dim = 3`)
/// with Euclidean distances; linked when within `h`.
pub fn random_points(n: usize, dim: usize, h: f64, seed: u64) -> Result<DiscreteSpace> {
    check_h(h)?;
    if !(dim == 2 || dim == 3) {
        return Err(Error::InvalidParameter(format!("dimension must be 2 or 3, got {dim}")));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one point".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<Vec<f64>> = (0..n).map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect()).collect();
    let mut lower = Vec::with_capacity(n * (n - 1) / 2);
    for i in 1..n {
        for j in 0..i {
            let d2: f64 = pts[i].iter().zip(&pts[j]).map(|(a, b)| (a - b) * (a - b)).sum();
            lower.push(d2.sqrt());
        }
    }
    DiscreteSpace::point_set(n, &lower, h, h)
}

/// Random finite metric on `n` points: distances uniform in `[1, 2]`
/// (always a metric).
pub fn random_metric(n: usize, h: f64, seed: u64) -> Result<DiscreteSpace> {
    check_h(h)?;
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one point".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lower: Vec<f64> = (0..n * (n - 1) / 2).map(|_| rng.gen_range(1.0..=2.0)).collect();
    DiscreteSpace::point_set(n, &lower, h, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::SpaceKind;

    #[test]
    fn circle_has_one_hundred_points() {
        let c = circle(1.0, 0.01).unwrap();
        assert_eq!(c.len(), 100);
        assert_eq!(c.edges().len(), 100);
    }

    #[test]
    fn torus_counts() {
        let t = grid_torus(16).unwrap();
        assert_eq!(t.kind(), SpaceKind::GridSurface);
        assert_eq!(t.len(), 256);
        assert_eq!(t.edges().iter().filter(|e| e.length == 1.0).count(), 512);
        assert_eq!(t.edges().len(), 768);
        assert_eq!(t.faces().len(), 512);
    }

    #[test]
    fn generators_are_deterministic() {
        let a = random_points(20, 2, 0.1, 7).unwrap().to_document().to_json();
        let b = random_points(20, 2, 0.1, 7).unwrap().to_document().to_json();
        assert_eq!(a, b);
        let c = random_points(20, 2, 0.1, 8).unwrap().to_document().to_json();
        assert_ne!(a, c);
        let t1 = random_tree(10, 0.2, 1.0, 0.1, 3).unwrap().to_document().to_json();
        let t2 = random_tree(10, 0.2, 1.0, 0.1, 3).unwrap().to_document().to_json();
        assert_eq!(t1, t2);
    }

    #[test]
    fn theta_and_star_shapes() {
        let t = theta(&[1.0, 2.0, 3.0], 0.5).unwrap();
        assert_eq!(t.len(), 2 + 1 + 3 + 5);
        let s = star(3, 1.0, 0.1).unwrap();
        assert_eq!(s.len(), 31);
        assert!((s.distance(0, 1) - 1.0).abs() < 1e-12);
    }
}
