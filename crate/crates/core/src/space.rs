//! Finite representations of compact metric spaces.
//!
//! A [`DiscreteSpace`] is a finite set of points with a full distance table,
//! an adjacency relation used for connectivity and a sampling pitch `h`.
//! Three kinds exist: explicit point sets (metric given, adjacency at a
//! declared scale `epsilon`), metric graphs (shortest-path metric over edge
//! lengths) and grid surfaces (metric graphs that also carry triangular
//! faces).

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack used when snapping distances onto the shell grid.
pub const BAND_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpaceKind {
    PointSet,
    MetricGraph,
    GridSurface,
}

impl SpaceKind {
    pub fn is_graph(self) -> bool {
        matches!(self, SpaceKind::MetricGraph | SpaceKind::GridSurface)
    }
}

/// On-disk form of a space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceDocument {
    pub kind: SpaceKind,
    pub n_points: usize,
    pub resolution: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<(usize, usize, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub faces: Option<Vec<[usize; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

impl SpaceDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidDocument(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("space documents always serialize")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub length: f64,
}

/// Connectivity rule for splitting a subset into components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Links {
    /// The space's own adjacency relation.
    Adjacency,
    /// Any two points at distance `<= scale`.
    Within(f64),
}

impl Links {
    /// Longest distance a link can span.
    pub fn scale(self, space: &DiscreteSpace) -> f64 {
        match self {
            Links::Adjacency => space.link_scale(),
            Links::Within(s) => s,
        }
    }

    /// Links joining points that share a neighbor under `self`.
    pub fn doubled(self, space: &DiscreteSpace) -> Links {
        Links::Within(2.0 * self.scale(space))
    }
}

#[derive(Debug, Clone)]
pub struct DiscreteSpace {
    kind: SpaceKind,
    n: usize,
    resolution: f64,
    dist: Vec<f64>,
    adjacency: Vec<Vec<usize>>,
    edges: Vec<Edge>,
    faces: Vec<[usize; 3]>,
    epsilon: Option<f64>,
}

#[derive(Clone, Copy, PartialEq)]
struct HeapItem(f64, usize);

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Single-source shortest paths with a deterministic parent choice
/// (smallest predecessor index among equal-length candidates).
pub(crate) fn dijkstra(
    n: usize,
    neighbors: &[Vec<(usize, f64)>],
    source: usize,
) -> (Vec<f64>, Vec<Option<usize>>) {
    let mut dist = vec![f64::INFINITY; n];
    let mut parent = vec![None; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(HeapItem(0.0, source));
    while let Some(HeapItem(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, w) in &neighbors[u] {
            let nd = d + w;
            if nd < dist[v] || (nd == dist[v] && parent[v].is_some_and(|p| u < p)) {
                let improved = nd < dist[v];
                dist[v] = nd;
                parent[v] = Some(u);
                if improved {
                    heap.push(HeapItem(nd, v));
                }
            }
        }
    }
    (dist, parent)
}

fn check_resolution(h: f64) -> Result<()> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidDocument(format!("resolution must be > 0, got {h}")));
    }
    Ok(())
}

impl DiscreteSpace {
    /// Point set from a row-major strictly-lower-triangular distance array
    /// (`d(1,0), d(2,0), d(2,1), ...`).
    pub fn point_set(n: usize, lower: &[f64], resolution: f64, epsilon: f64) -> Result<Self> {
        check_resolution(resolution)?;
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidDocument(
                "point-set spaces must declare a positive connectivity scale epsilon".into(),
            ));
        }
        if lower.len() != n * n.saturating_sub(1) / 2 {
            return Err(Error::InvalidDocument(format!(
                "metric array has {} entries, expected {}",
                lower.len(),
                n * n.saturating_sub(1) / 2
            )));
        }
        let mut dist = vec![0.0; n * n];
        let mut k = 0;
        for i in 0..n {
            for j in 0..i {
                let d = lower[k];
                k += 1;
                if !(d.is_finite() && d >= 0.0) {
                    return Err(Error::MetricViolation(format!("d({i},{j}) = {d}")));
                }
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        let scale = dist.iter().cloned().fold(0.0, f64::max);
        let tol = 1e-12 * scale.max(1.0);
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    if dist[i * n + l] > dist[i * n + j] + dist[j * n + l] + tol {
                        return Err(Error::MetricViolation(format!(
                            "triangle inequality fails for ({i},{j},{l})"
                        )));
                    }
                }
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        for i in 0..n {
            for j in 0..n {
                if i != j && dist[i * n + j] <= epsilon {
                    adjacency[i].push(j);
                }
            }
        }
        Ok(Self {
            kind: SpaceKind::PointSet,
            n,
            resolution,
            dist,
            adjacency,
            edges: Vec::new(),
            faces: Vec::new(),
            epsilon: Some(epsilon),
        })
    }

    /// Metric graph with the shortest-path metric of its edge lengths.
    pub fn metric_graph(n: usize, edges: &[(usize, usize, f64)], resolution: f64) -> Result<Self> {
        Self::graph_like(SpaceKind::MetricGraph, n, edges, &[], resolution)
    }

    /// Metric graph carrying triangular faces.
    pub fn surface(
        n: usize,
        edges: &[(usize, usize, f64)],
        faces: &[[usize; 3]],
        resolution: f64,
    ) -> Result<Self> {
        Self::graph_like(SpaceKind::GridSurface, n, edges, faces, resolution)
    }

    fn graph_like(
        kind: SpaceKind,
        n: usize,
        edge_list: &[(usize, usize, f64)],
        faces: &[[usize; 3]],
        resolution: f64,
    ) -> Result<Self> {
        check_resolution(resolution)?;
        let mut neighbors: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        let mut edges = Vec::with_capacity(edge_list.len());
        for &(a, b, length) in edge_list {
            if a >= n || b >= n {
                return Err(Error::InvalidDocument(format!("edge ({a},{b}) out of range")));
            }
            if a == b {
                return Err(Error::InvalidDocument(format!("self-loop at {a}")));
            }
            if !(length.is_finite() && length > 0.0) {
                return Err(Error::InvalidDocument(format!("edge ({a},{b}) has length {length}")));
            }
            neighbors[a].push((b, length));
            neighbors[b].push((a, length));
            edges.push(Edge { a, b, length });
        }
        for nb in &mut neighbors {
            nb.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.total_cmp(&y.1)));
        }
        for f in faces {
            if f.iter().any(|&v| v >= n) {
                return Err(Error::InvalidDocument(format!("face {f:?} out of range")));
            }
            for (u, v) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
                if !neighbors[u].iter().any(|&(w, _)| w == v) {
                    return Err(Error::InvalidDocument(format!(
                        "face {f:?} uses missing edge ({u},{v})"
                    )));
                }
            }
        }
        let mut dist = vec![0.0; n * n];
        for s in 0..n {
            let (row, _) = dijkstra(n, &neighbors, s);
            dist[s * n..(s + 1) * n].copy_from_slice(&row);
        }
        let mut adjacency: Vec<Vec<usize>> = neighbors
            .iter()
            .map(|nb| nb.iter().map(|&(v, _)| v).collect())
            .collect();
        for a in &mut adjacency {
            a.dedup();
        }
        Ok(Self {
            kind,
            n,
            resolution,
            dist,
            adjacency,
            edges,
            faces: faces.to_vec(),
            epsilon: None,
        })
    }

    pub fn from_document(doc: &SpaceDocument) -> Result<Self> {
        match doc.kind {
            SpaceKind::PointSet => {
                let metric = doc
                    .metric
                    .as_ref()
                    .ok_or_else(|| Error::InvalidDocument("point-set requires \"metric\"".into()))?;
                let eps = doc.epsilon.ok_or_else(|| {
                    Error::InvalidDocument("point-set requires \"epsilon\"".into())
                })?;
                Self::point_set(doc.n_points, metric, doc.resolution, eps)
            }
            SpaceKind::MetricGraph => {
                let edges = doc
                    .edges
                    .as_ref()
                    .ok_or_else(|| Error::InvalidDocument("metric-graph requires \"edges\"".into()))?;
                Self::metric_graph(doc.n_points, edges, doc.resolution)
            }
            SpaceKind::GridSurface => {
                let edges = doc
                    .edges
                    .as_ref()
                    .ok_or_else(|| Error::InvalidDocument("grid-surface requires \"edges\"".into()))?;
                let faces = doc
                    .faces
                    .as_ref()
                    .ok_or_else(|| Error::InvalidDocument("grid-surface requires \"faces\"".into()))?;
                Self::surface(doc.n_points, edges, faces, doc.resolution)
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_document(&SpaceDocument::from_json(text)?)
    }

    /// Hex SHA-256 of the canonical JSON document.
    pub fn instance_hash(&self) -> String {
        use sha2::{Digest, Sha256};
        hex::encode(Sha256::digest(self.to_document().to_json().as_bytes()))
    }

    pub fn to_document(&self) -> SpaceDocument {
        let n = self.n;
        match self.kind {
            SpaceKind::PointSet => {
                let mut metric = Vec::with_capacity(n * n.saturating_sub(1) / 2);
                for i in 0..n {
                    for j in 0..i {
                        metric.push(self.dist[i * n + j]);
                    }
                }
                SpaceDocument {
                    kind: self.kind,
                    n_points: n,
                    resolution: self.resolution,
                    metric: Some(metric),
                    edges: None,
                    faces: None,
                    epsilon: self.epsilon,
                }
            }
            _ => SpaceDocument {
                kind: self.kind,
                n_points: n,
                resolution: self.resolution,
                metric: None,
                edges: Some(self.edges.iter().map(|e| (e.a, e.b, e.length)).collect()),
                faces: (self.kind == SpaceKind::GridSurface).then(|| self.faces.clone()),
                epsilon: None,
            },
        }
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Sampling pitch `h`.
    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn epsilon(&self) -> Option<f64> {
        self.epsilon
    }

    #[inline]
    pub fn distance(&self, x: usize, y: usize) -> f64 {
        self.dist[x * self.n + y]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.dist[x * self.n..(x + 1) * self.n]
    }

    pub fn neighbors(&self, x: usize) -> &[usize] {
        &self.adjacency[x]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    /// Longest adjacency link; for graphs the longest edge, for point sets
    /// the declared epsilon.
    pub fn link_scale(&self) -> f64 {
        match self.kind {
            SpaceKind::PointSet => self.epsilon.unwrap_or(0.0),
            _ => self.edges.iter().map(|e| e.length).fold(0.0, f64::max),
        }
    }

    pub fn check_point(&self, x: usize) -> Result<()> {
        if x >= self.n {
            Err(Error::InvalidPoint { index: x, len: self.n })
        } else {
            Ok(())
        }
    }

    /// Index of the width-`h` band `[k h, (k+1) h)` holding distance `d`.
    pub fn band_index(&self, d: f64) -> usize {
        (d / self.resolution + BAND_TOL).floor().max(0.0) as usize
    }

    /// Closed ball `{y : d(x,y) <= r}`, with `1e-9 h` slack for summed
    /// edge lengths.
    pub fn ball(&self, x: usize, r: f64) -> Result<Subset> {
        self.check_point(x)?;
        if r.is_nan() || r < 0.0 {
            return Err(Error::InvalidParameter(format!("ball radius {r}")));
        }
        let r = r + BAND_TOL * self.resolution;
        Ok(Subset::from_fn(self.n, |y| self.distance(x, y) <= r))
    }

    /// Points with `d(x,·) ∈ [s − h/2, s + h/2)` and positive distance.
    pub fn shell(&self, x: usize, s: f64) -> Result<Subset> {
        self.check_point(x)?;
        if !(s > 0.0) {
            return Err(Error::InvalidParameter(format!("shell radius {s}")));
        }
        let h = self.resolution;
        let tol = BAND_TOL * h;
        let (lo, hi) = (s - h / 2.0, s + h / 2.0);
        Ok(Subset::from_fn(self.n, |y| {
            let d = self.distance(x, y);
            d > 0.0 && d + tol >= lo && d + tol < hi
        }))
    }

    /// `Ball(x, r2) \ Ball(x, r1)`.
    pub fn annulus(&self, x: usize, r1: f64, r2: f64) -> Result<Subset> {
        self.check_point(x)?;
        if !(r1 >= 0.0 && r1 < r2) {
            return Err(Error::InvalidParameter(format!("annulus radii ({r1}, {r2}]")));
        }
        let tol = BAND_TOL * self.resolution;
        Ok(Subset::from_fn(self.n, |y| {
            let d = self.distance(x, y);
            d > r1 + tol && d <= r2 + tol
        }))
    }

    fn linked(&self, links: Links, x: usize, y: usize) -> bool {
        match links {
            Links::Adjacency => self.adjacency[x].binary_search(&y).is_ok(),
            Links::Within(scale) => x != y && self.distance(x, y) <= scale + BAND_TOL * self.resolution,
        }
    }

    /// Connected components of `a` under the adjacency relation.
    pub fn components(&self, a: &Subset) -> Vec<Subset> {
        self.components_with(a, Links::Adjacency)
    }

    /// Components of `a` under the given link rule, ordered by smallest
    /// member.
    pub fn components_with(&self, a: &Subset, links: Links) -> Vec<Subset> {
        let mut label = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for start in a.iter() {
            if label[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut comp = Subset::empty(self.n);
            let mut queue = VecDeque::from([start]);
            label[start] = id;
            while let Some(u) = queue.pop_front() {
                comp.insert(u);
                let mut visit = |v: usize| {
                    if a.contains(v) && label[v] == usize::MAX {
                        label[v] = id;
                        queue.push_back(v);
                    }
                };
                match links {
                    Links::Adjacency => self.adjacency[u].iter().for_each(|&v| visit(v)),
                    Links::Within(_) => (0..self.n)
                        .filter(|&v| self.linked(links, u, v))
                        .for_each(&mut visit),
                }
            }
            out.push(comp);
        }
        out
    }

    /// True when every link leaving `inner` stays inside it (relative to `within`).
    pub fn is_closed_under_links(&self, inner: &Subset, within: &Subset, links: Links) -> bool {
        inner.iter().all(|u| {
            (0..self.n).all(|v| !within.contains(v) || inner.contains(v) || !self.linked(links, u, v))
        })
    }

    /// Pairs `(u, v)`, `u < v`, both in `a`, that are linked.
    pub fn link_pairs(&self, a: &Subset, links: Links) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in a.iter() {
            match links {
                Links::Adjacency => {
                    for &v in &self.adjacency[u] {
                        if v > u && a.contains(v) {
                            out.push((u, v));
                        }
                    }
                }
                Links::Within(_) => {
                    for v in a.iter().filter(|&v| v > u) {
                        if self.linked(links, u, v) {
                            out.push((u, v));
                        }
                    }
                }
            }
        }
        out
    }

    /// Radius of a nonempty set with centers ranging over the whole space:
    /// `min_x max_{y∈A} d(x,y)`, returned with the smallest witnessing center.
    pub fn radius(&self, a: &Subset) -> Result<(f64, usize)> {
        if a.is_empty() {
            return Err(Error::EmptySubset);
        }
        let members = a.indices();
        let mut best = (f64::INFINITY, 0);
        for x in 0..self.n {
            let row = self.row(x);
            let mut ecc: f64 = 0.0;
            for &y in &members {
                ecc = ecc.max(row[y]);
                if ecc >= best.0 {
                    break;
                }
            }
            if ecc < best.0 {
                best = (ecc, x);
            }
        }
        Ok(best)
    }

    pub fn diameter(&self, a: &Subset) -> f64 {
        let members = a.indices();
        let mut d: f64 = 0.0;
        for &x in &members {
            for &y in &members {
                d = d.max(self.distance(x, y));
            }
        }
        d
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.n)
    }
}

/// Member flags over the points of a space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    flags: Vec<bool>,
}

impl Subset {
    pub fn empty(n: usize) -> Self {
        Self { flags: vec![false; n] }
    }

    pub fn full(n: usize) -> Self {
        Self { flags: vec![true; n] }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> bool) -> Self {
        Self {
            flags: (0..n).map(f).collect(),
        }
    }

    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Self::empty(n);
        for i in indices {
            if i >= n {
                return Err(Error::InvalidPoint { index: i, len: n });
            }
            s.flags[i] = true;
        }
        Ok(s)
    }

    /// Size of the ambient space.
    pub fn universe(&self) -> usize {
        self.flags.len()
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.flags.get(i).copied().unwrap_or(false)
    }

    pub fn insert(&mut self, i: usize) {
        self.flags[i] = true;
    }

    pub fn remove(&mut self, i: usize) {
        self.flags[i] = false;
    }

    pub fn len(&self) -> usize {
        self.flags.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.flags.iter().any(|&b| b)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.flags.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn indices(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn union(&self, other: &Subset) -> Subset {
        Subset::from_fn(self.universe(), |i| self.flags[i] || other.contains(i))
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        Subset::from_fn(self.universe(), |i| self.flags[i] && other.contains(i))
    }

    pub fn difference(&self, other: &Subset) -> Subset {
        Subset::from_fn(self.universe(), |i| self.flags[i] && !other.contains(i))
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.iter().all(|i| other.contains(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize, step: f64) -> DiscreteSpace {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1, step)).collect();
        DiscreteSpace::metric_graph(n, &edges, step).unwrap()
    }

    fn cycle(n: usize, length: f64) -> DiscreteSpace {
        let h = length / n as f64;
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, h)).collect();
        DiscreteSpace::metric_graph(n, &edges, h).unwrap()
    }

    #[test]
    fn ball_on_unit_line() {
        let s = path(4, 1.0);
        assert_eq!(s.ball(0, 1.0).unwrap().indices(), vec![0, 1]);
        assert_eq!(s.ball(2, 0.0).unwrap().indices(), vec![2]);
        assert!(matches!(s.ball(9, 1.0), Err(Error::InvalidPoint { .. })));
    }

    #[test]
    fn ball_zero_keeps_duplicates() {
        let s = DiscreteSpace::point_set(3, &[0.0, 1.0, 1.0], 0.1, 0.1).unwrap();
        assert_eq!(s.ball(0, 0.0).unwrap().indices(), vec![0, 1]);
    }

    #[test]
    fn circle_ball_count() {
        let c = cycle(100, 1.0);
        assert_eq!(c.ball(0, 0.25).unwrap().len(), 51);
    }

    #[test]
    fn circle_shell_has_two_points() {
        let c = cycle(100, 1.0);
        assert_eq!(c.shell(0, 0.35).unwrap().indices(), vec![35, 65]);
    }

    #[test]
    fn interval_shell_and_far_shell() {
        let p = path(101, 0.01);
        assert_eq!(p.shell(0, 0.5).unwrap().indices(), vec![50]);
        assert!(p.shell(0, 2.0).unwrap().is_empty());
    }

    #[test]
    fn components_cases() {
        let mut metric = Vec::new();
        let pos: Vec<f64> = (0..5).map(|i| i as f64 * 0.1).chain((0..5).map(|i| 10.0 + i as f64 * 0.1)).collect();
        for i in 0..10 {
            for j in 0..i {
                metric.push((pos[i] - pos[j]).abs());
            }
        }
        let s = DiscreteSpace::point_set(10, &metric, 0.1, 0.15).unwrap();
        assert_eq!(s.components(&s.full()).len(), 2);
        assert!(s.components(&Subset::empty(10)).is_empty());

        let c = cycle(100, 1.0);
        let mut a = c.full();
        a.remove(0);
        a.remove(50);
        let comps = c.components(&a);
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].len(), 49);
    }

    #[test]
    fn radius_cases() {
        let s = DiscreteSpace::point_set(2, &[1.0], 0.1, 1.0).unwrap();
        assert_eq!(s.radius(&s.full()).unwrap().0, 1.0);
        let c = cycle(100, 1.0);
        let (r, _) = c.radius(&c.full()).unwrap();
        assert!((r - 0.5).abs() <= 0.01);
        assert_eq!(c.radius(&Subset::from_indices(100, [7]).unwrap()).unwrap(), (0.0, 7));
        assert_eq!(c.radius(&Subset::empty(100)), Err(Error::EmptySubset));
    }

    #[test]
    fn point_set_requires_epsilon_and_metric() {
        let doc = SpaceDocument {
            kind: SpaceKind::PointSet,
            n_points: 2,
            resolution: 0.1,
            metric: Some(vec![1.0]),
            edges: None,
            faces: None,
            epsilon: None,
        };
        assert!(matches!(DiscreteSpace::from_document(&doc), Err(Error::InvalidDocument(_))));
        assert!(matches!(
            DiscreteSpace::point_set(3, &[1.0, 5.0, 1.0], 0.1, 1.0),
            Err(Error::MetricViolation(_))
        ));
    }

    #[test]
    fn shells_partition_space_minus_center() {
        let c = cycle(40, 1.0);
        let h = c.resolution();
        for x in [0, 7, 23] {
            let mut seen = vec![0usize; 40];
            for k in 0..30 {
                for y in c.shell(x, (k as f64 + 0.5) * h).unwrap().iter() {
                    seen[y] += 1;
                }
            }
            for y in 0..40 {
                let expected = usize::from(c.distance(x, y) > 0.0);
                assert_eq!(seen[y], expected, "point {y} around {x}");
            }
        }
    }
}
