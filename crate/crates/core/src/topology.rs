//! Systoles of metric graphs and triangulated surfaces, metric-tree
//! geometry, and the check `sys ≤ 2 · UR` against width certificates.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;
use serde::Serialize;

use crate::content::ExactOptions;
use crate::error::{Error, Result};
use crate::space::{DiscreteSpace, SpaceKind};
use crate::width::{bound_width, theorem_radius, WidthOptions};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleWitness {
    /// Closed vertex walk; the first vertex is not repeated at the end.
    pub vertices: Vec<usize>,
    /// Edge indices, `edges[i]` joining `vertices[i]` and `vertices[i+1]`.
    pub edges: Vec<usize>,
    pub length: f64,
    /// Pairing with each cohomology basis element; empty for plain graphs.
    pub homology_class: Vec<u8>,
    pub nontrivial: bool,
}

#[derive(Clone, Copy, PartialEq)]
struct Item(f64, usize);
impl Eq for Item {}
impl Ord for Item {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0).then_with(|| o.1.cmp(&self.1))
    }
}
impl PartialOrd for Item {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Incidence lists `(neighbor, edge index)`.
fn incidence(space: &DiscreteSpace) -> Vec<Vec<(usize, usize)>> {
    let mut inc = vec![Vec::new(); space.len()];
    for (i, e) in space.edges().iter().enumerate() {
        inc[e.a].push((e.b, i));
        inc[e.b].push((e.a, i));
    }
    inc
}

struct Tree {
    dist: Vec<f64>,
    parent_edge: Vec<Option<usize>>,
    /// Child of the root on the tree path to each vertex (the root maps to
    /// itself).
    branch: Vec<usize>,
}

fn shortest_path_tree(space: &DiscreteSpace, inc: &[Vec<(usize, usize)>], root: usize) -> Tree {
    let n = space.len();
    let edges = space.edges();
    let mut dist = vec![f64::INFINITY; n];
    let mut parent_edge: Vec<Option<usize>> = vec![None; n];
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut heap = BinaryHeap::new();
    dist[root] = 0.0;
    heap.push(Item(0.0, root));
    while let Some(Item(d, u)) = heap.pop() {
        if done[u] || d > dist[u] {
            continue;
        }
        done[u] = true;
        order.push(u);
        for &(v, ei) in &inc[u] {
            let nd = d + edges[ei].length;
            if nd < dist[v] || (nd == dist[v] && !done[v] && parent_edge[v].is_some_and(|p| ei < p)) {
                if nd < dist[v] {
                    heap.push(Item(nd, v));
                }
                dist[v] = nd;
                parent_edge[v] = Some(ei);
            }
        }
    }
    let mut branch = vec![usize::MAX; n];
    for &u in &order {
        branch[u] = match parent_edge[u] {
            None => u,
            Some(ei) => {
                let p = other(space, ei, u);
                if p == root {
                    u
                } else {
                    branch[p]
                }
            }
        };
    }
    Tree {
        dist,
        parent_edge,
        branch,
    }
}

fn other(space: &DiscreteSpace, ei: usize, v: usize) -> usize {
    let e = space.edges()[ei];
    if e.a == v {
        e.b
    } else {
        e.a
    }
}

/// Tree path from `v` up to the root: (vertices from v to root, edges).
fn path_to_root(space: &DiscreteSpace, tree: &Tree, v: usize) -> (Vec<usize>, Vec<usize>) {
    let mut verts = vec![v];
    let mut es = Vec::new();
    let mut cur = v;
    while let Some(ei) = tree.parent_edge[cur] {
        es.push(ei);
        cur = other(space, ei, cur);
        verts.push(cur);
    }
    (verts, es)
}

/// Cycle root → u, edge, v → root.
fn assemble(space: &DiscreteSpace, tree: &Tree, ei: usize, u: usize, v: usize) -> (Vec<usize>, Vec<usize>) {
    let (pu, eu) = path_to_root(space, tree, u);
    let (pv, ev) = path_to_root(space, tree, v);
    // root ... u
    let mut verts: Vec<usize> = pu.iter().rev().copied().collect();
    let mut es: Vec<usize> = eu.iter().rev().copied().collect();
    es.push(ei);
    // v ... (excluding root)
    verts.extend(pv[..pv.len() - 1].iter().copied());
    es.extend(ev.iter().copied());
    (verts, es)
}

struct Candidate {
    length: f64,
    root: usize,
    edge: usize,
    u: usize,
    v: usize,
}

fn best_candidate(cands: Vec<Option<Candidate>>) -> Option<Candidate> {
    cands.into_iter().flatten().min_by(|a, b| {
        a.length
            .total_cmp(&b.length)
            .then(a.root.cmp(&b.root))
            .then(a.edge.cmp(&b.edge))
    })
}

fn require_graph(space: &DiscreteSpace) -> Result<()> {
    if space.kind().is_graph() {
        Ok(())
    } else {
        Err(Error::WrongKind {
            expected: "metric-graph or grid-surface",
        })
    }
}

/// Shortest cycle by total edge length, or `None` for a forest.
pub fn girth(space: &DiscreteSpace) -> Result<Option<CycleWitness>> {
    require_graph(space)?;
    let inc = incidence(space);
    let edges = space.edges();
    let per_root: Vec<Option<Candidate>> = (0..space.len())
        .into_par_iter()
        .map(|root| {
            let tree = shortest_path_tree(space, &inc, root);
            let mut best: Option<Candidate> = None;
            for (ei, e) in edges.iter().enumerate() {
                if tree.parent_edge[e.a] == Some(ei) || tree.parent_edge[e.b] == Some(ei) {
                    continue;
                }
                let same_branch = tree.branch[e.a] == tree.branch[e.b] && e.a != root && e.b != root;
                if !tree.dist[e.a].is_finite() || same_branch {
                    continue;
                }
                let length = tree.dist[e.a] + e.length + tree.dist[e.b];
                if best.as_ref().is_none_or(|b| length < b.length) {
                    best = Some(Candidate {
                        length,
                        root,
                        edge: ei,
                        u: e.a,
                        v: e.b,
                    });
                }
            }
            best
        })
        .collect();
    let Some(c) = best_candidate(per_root) else {
        return Ok(None);
    };
    let tree = shortest_path_tree(space, &inc, c.root);
    let (vertices, es) = assemble(space, &tree, c.edge, c.u, c.v);
    let length = es.iter().map(|&i| edges[i].length).sum();
    Ok(Some(CycleWitness {
        vertices,
        edges: es,
        length,
        homology_class: Vec::new(),
        nontrivial: true,
    }))
}

/// Bit-packed vectors over Z₂.
type Row = Vec<u64>;

fn row_get(r: &Row, i: usize) -> bool {
    r[i / 64] >> (i % 64) & 1 == 1
}

fn row_flip(r: &mut Row, i: usize) {
    r[i / 64] ^= 1 << (i % 64);
}

fn row_xor(a: &mut Row, b: &Row) {
    for (x, y) in a.iter_mut().zip(b) {
        *x ^= y;
    }
}

/// Basis of the null space of `rows` (each row a vector over `cols`).
fn null_space(rows: &[Row], cols: usize) -> Vec<Row> {
    let mut m: Vec<Row> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| row_get(&m[i], c)) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && row_get(row, c) {
                row_xor(row, &pivot);
            }
        }
        pivots.push(c);
        rank += 1;
    }
    let words = cols.div_ceil(64);
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; cols];
        for &p in &pivots {
            v[p] = true;
        }
        v
    };
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u64; words];
        row_flip(&mut v, free);
        for (i, &p) in pivots.iter().enumerate() {
            if row_get(&m[i], free) {
                row_flip(&mut v, p);
            }
        }
        basis.push(v);
    }
    basis
}

/// Extend `base` (independent) by vectors of `extra`, returning the added ones.
fn complement(base: &[Row], extra: &[Row], cols: usize) -> Vec<Row> {
    let mut reduced: Vec<(usize, Row)> = Vec::new();
    let reduce = |v: &mut Row, reduced: &[(usize, Row)]| {
        for (p, r) in reduced {
            if row_get(v, *p) {
                row_xor(v, r);
            }
        }
    };
    let insert = |v: Row, reduced: &mut Vec<(usize, Row)>| -> bool {
        let mut v = v;
        reduce(&mut v, reduced);
        match (0..cols).find(|&c| row_get(&v, c)) {
            None => false,
            Some(p) => {
                for (_, r) in reduced.iter_mut() {
                    if row_get(r, p) {
                        row_xor(r, &v);
                    }
                }
                reduced.push((p, v));
                true
            }
        }
    };
    for b in base {
        insert(b.clone(), &mut reduced);
    }
    extra
        .iter()
        .filter(|v| insert((*v).clone(), &mut reduced))
        .cloned()
        .collect()
}

/// Cocycles spanning `H¹(surface; Z₂)`, each as a vector over edges.
pub fn cohomology_basis(space: &DiscreteSpace) -> Result<Vec<Vec<u64>>> {
    if space.kind() != SpaceKind::GridSurface {
        return Err(Error::WrongKind {
            expected: "grid-surface",
        });
    }
    let edges = space.edges();
    let m = edges.len();
    let words = m.div_ceil(64);
    let mut index = std::collections::HashMap::new();
    for (i, e) in edges.iter().enumerate() {
        if index.insert((e.a.min(e.b), e.a.max(e.b)), i).is_some() {
            return Err(Error::NotClosedSurface(format!("parallel edges at ({}, {})", e.a, e.b)));
        }
    }
    let mut faces_per_edge = vec![0usize; m];
    let mut face_rows = Vec::new();
    for f in space.faces() {
        let mut row = vec![0u64; words];
        for (u, v) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
            let ei = index[&(u.min(v), u.max(v))];
            faces_per_edge[ei] += 1;
            row_flip(&mut row, ei);
        }
        face_rows.push(row);
    }
    if let Some(ei) = faces_per_edge.iter().position(|&c| c != 2) {
        return Err(Error::NotClosedSurface(format!(
            "edge {ei} lies in {} faces",
            faces_per_edge[ei]
        )));
    }
    let cocycles = null_space(&face_rows, m);
    let coboundaries: Vec<Row> = (0..space.len())
        .map(|v| {
            let mut row = vec![0u64; words];
            for (i, e) in edges.iter().enumerate() {
                if e.a == v || e.b == v {
                    row_flip(&mut row, i);
                }
            }
            row
        })
        .collect();
    let mut independent = Vec::new();
    let mut seen: Vec<Row> = Vec::new();
    for c in coboundaries {
        if !complement(&seen, std::slice::from_ref(&c), m).is_empty() {
            seen.push(c.clone());
            independent.push(c);
        }
    }
    Ok(complement(&independent, &cocycles, m))
}

fn class_of(basis: &[Row], edges: &[usize]) -> Vec<u8> {
    basis
        .iter()
        .map(|b| edges.iter().filter(|&&e| row_get(b, e)).count() as u8 % 2)
        .collect()
}

/// Shortest edge cycle with nonzero Z₂ homology class; `None` when
/// `H₁ = 0`.
pub fn homology_systole_z2(space: &DiscreteSpace) -> Result<Option<CycleWitness>> {
    let basis = cohomology_basis(space)?;
    if basis.is_empty() {
        return Ok(None);
    }
    let k = basis.len();
    let inc = incidence(space);
    let edges = space.edges();
    let edge_class: Vec<Vec<u8>> = (0..edges.len()).map(|e| class_of(&basis, &[e])).collect();
    let per_root: Vec<Option<Candidate>> = (0..space.len())
        .into_par_iter()
        .map(|root| {
            let tree = shortest_path_tree(space, &inc, root);
            // class of the tree path from the root to each vertex
            let mut order: Vec<usize> = (0..space.len()).filter(|&v| tree.dist[v].is_finite()).collect();
            order.sort_by(|&a, &b| tree.dist[a].total_cmp(&tree.dist[b]).then(a.cmp(&b)));
            let mut pot = vec![vec![0u8; k]; space.len()];
            for &v in &order {
                if let Some(ei) = tree.parent_edge[v] {
                    let p = other(space, ei, v);
                    let mut c = pot[p].clone();
                    for (x, y) in c.iter_mut().zip(&edge_class[ei]) {
                        *x ^= y;
                    }
                    pot[v] = c;
                }
            }
            let mut best: Option<Candidate> = None;
            for (ei, e) in edges.iter().enumerate() {
                if tree.parent_edge[e.a] == Some(ei) || tree.parent_edge[e.b] == Some(ei) {
                    continue;
                }
                if !tree.dist[e.a].is_finite() {
                    continue;
                }
                let nontrivial = (0..k).any(|j| pot[e.a][j] ^ pot[e.b][j] ^ edge_class[ei][j] == 1);
                if !nontrivial {
                    continue;
                }
                let length = tree.dist[e.a] + e.length + tree.dist[e.b];
                if best.as_ref().is_none_or(|b| length < b.length) {
                    best = Some(Candidate {
                        length,
                        root,
                        edge: ei,
                        u: e.a,
                        v: e.b,
                    });
                }
            }
            best
        })
        .collect();
    let Some(c) = best_candidate(per_root) else {
        return Ok(None);
    };
    let tree = shortest_path_tree(space, &inc, c.root);
    let (mut vertices, mut es) = assemble(space, &tree, c.edge, c.u, c.v);
    // strip a shared tree prefix: it is traversed twice and cancels
    while es.len() >= 2 && es[0] == es[es.len() - 1] {
        es.remove(0);
        es.pop();
        vertices.remove(0);
        vertices.pop();
    }
    let length = es.iter().map(|&i| edges[i].length).sum();
    let homology_class = class_of(&basis, &es);
    let nontrivial = homology_class.contains(&1);
    Ok(Some(CycleWitness {
        vertices,
        edges: es,
        length,
        homology_class,
        nontrivial,
    }))
}

/// A point of a metric graph: a vertex or an interior point of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GraphPoint {
    /// Edge endpoint the offset is measured from.
    pub from: usize,
    pub to: usize,
    pub edge: Option<usize>,
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallLength {
    pub t: f64,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeReport {
    pub center: GraphPoint,
    pub radius: f64,
    pub antipodes: (usize, usize),
    pub diameter: f64,
    pub total_length: f64,
    /// Ball lengths around the center on the `h`-grid up to `R`.
    pub center_table: Vec<BallLength>,
    /// Ball lengths around the farthest point `x` on the same grid.
    pub antipode_table: Vec<BallLength>,
    /// `length(Ball(center, t)) >= 2t` on the whole table.
    pub property_holds: bool,
}

/// Distances from a point of the graph to every vertex.
fn distances_from(space: &DiscreteSpace, p: &GraphPoint) -> Vec<f64> {
    match p.edge {
        None => space.row(p.from).to_vec(),
        Some(ei) => {
            let len = space.edges()[ei].length;
            (0..space.len())
                .map(|w| (p.offset + space.distance(p.from, w)).min(len - p.offset + space.distance(p.to, w)))
                .collect()
        }
    }
}

/// Total length of `Ball(p, t)`, clipping edges exactly.
pub fn ball_length(space: &DiscreteSpace, p: &GraphPoint, t: f64) -> f64 {
    let d = distances_from(space, p);
    let piece = |da: f64, db: f64, len: f64| -> f64 {
        let a = (t - da).clamp(0.0, len);
        let b = (t - db).clamp(0.0, len);
        (a + b).min(len)
    };
    let mut total = 0.0;
    for (ei, e) in space.edges().iter().enumerate() {
        if p.edge == Some(ei) {
            let (near, far) = if e.a == p.from { (e.a, e.b) } else { (e.b, e.a) };
            total += piece(0.0, d[near], p.offset);
            total += piece(0.0, d[far], e.length - p.offset);
        } else {
            total += piece(d[e.a], d[e.b], e.length);
        }
    }
    total
}

fn t_grid(h: f64, upto: f64) -> Vec<f64> {
    let steps = (upto / h + 1e-9).floor() as usize;
    let mut ts: Vec<f64> = (1..=steps).map(|j| j as f64 * h).collect();
    if ts.last().is_none_or(|&t| t < upto) && upto > 0.0 {
        ts.push(upto);
    }
    ts
}

fn require_tree(space: &DiscreteSpace) -> Result<()> {
    if space.kind() != SpaceKind::MetricGraph {
        return Err(Error::WrongKind {
            expected: "metric-graph",
        });
    }
    if space.is_empty() {
        return Err(Error::EmptySubset);
    }
    if space.row(0).iter().any(|d| !d.is_finite()) {
        return Err(Error::PreconditionFailed("graph is not connected".into()));
    }
    if space.edges().len() != space.len() - 1 {
        return Err(Error::HasCycle);
    }
    Ok(())
}

fn farthest(row: &[f64], start: usize) -> usize {
    let mut best = start;
    for (i, &d) in row.iter().enumerate() {
        if d.is_finite() && d > row[best] {
            best = i;
        }
    }
    best
}

/// Midpoint of a longest path in the tree component containing `start`,
/// with the path's ends.
fn tree_center(space: &DiscreteSpace, start: usize) -> (GraphPoint, usize, usize) {
    let a = farthest(space.row(start), start);
    let b = farthest(space.row(a), a);
    let diameter = space.distance(a, b);
    let radius = diameter / 2.0;
    // walk the a–b path to the point at distance R from a
    let inc = incidence(space);
    let tree = shortest_path_tree(space, &inc, a);
    let (path, path_edges) = path_to_root(space, &tree, b);
    let mut center = GraphPoint {
        from: a,
        to: a,
        edge: None,
        offset: 0.0,
    };
    for (i, &ei) in path_edges.iter().enumerate() {
        // path runs b → a; edge i joins path[i] and path[i+1]
        let (near, far) = (path[i + 1], path[i]);
        let (dn, df) = (tree.dist[near], tree.dist[far]);
        if dn <= radius && radius <= df {
            center = if dn == radius {
                GraphPoint {
                    from: near,
                    to: near,
                    edge: None,
                    offset: 0.0,
                }
            } else if df == radius {
                GraphPoint {
                    from: far,
                    to: far,
                    edge: None,
                    offset: 0.0,
                }
            } else {
                GraphPoint {
                    from: near,
                    to: far,
                    edge: Some(ei),
                    offset: radius - dn,
                }
            };
            break;
        }
    }
    (center, a, b)
}

/// Center, radius and antipodal pair of a metric tree, with ball-length
/// tables.
pub fn tree_report(space: &DiscreteSpace) -> Result<TreeReport> {
    require_tree(space)?;
    let (center, a, b) = tree_center(space, 0);
    let diameter = space.distance(a, b);
    let radius = diameter / 2.0;
    let ts = t_grid(space.resolution(), radius);
    let center_table: Vec<BallLength> = ts
        .iter()
        .map(|&t| BallLength {
            t,
            length: ball_length(space, &center, t),
        })
        .collect();
    let tip = GraphPoint {
        from: a,
        to: a,
        edge: None,
        offset: 0.0,
    };
    let antipode_table = ts
        .iter()
        .map(|&t| BallLength {
            t,
            length: ball_length(space, &tip, t),
        })
        .collect();
    let property_holds = center_table
        .iter()
        .all(|bl| bl.length >= 2.0 * bl.t * (1.0 - 1e-12) - 1e-12);
    Ok(TreeReport {
        center,
        radius,
        antipodes: (a, b),
        diameter,
        total_length: space.edges().iter().map(|e| e.length).sum(),
        center_table,
        antipode_table,
        property_holds,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub r: f64,
    pub hypothesis_holds: bool,
    /// First vertex with `length(Ball(x,t)) >= 2t` for every grid `t <= r`.
    pub violating_point: Option<usize>,
    /// Per vertex, the smallest grid `t` with `length(Ball(x,t)) < 2t`.
    pub witnesses: Vec<Option<f64>>,
    /// Centers of the tree components with their witnesses; a center may
    /// lie inside an edge.
    pub centers: Vec<(GraphPoint, Option<f64>)>,
    /// Radius of each connected component (exact for trees).
    pub component_radii: Vec<f64>,
    pub conclusion_holds: bool,
}

/// Check the hypothesis "every point has some `t ≤ r` with
/// `length(Ball(x,t)) < 2t`" on the `h`-grid plus `t = r` (with a `1e-9 h`
/// margin), and the conclusion that every component has radius `< r`.
///
/// The checked points are the vertices and the center of every tree
/// component.
pub fn lemma21_threshold(space: &DiscreteSpace, r: f64) -> Result<ThresholdReport> {
    if space.kind() != SpaceKind::MetricGraph {
        return Err(Error::WrongKind {
            expected: "metric-graph",
        });
    }
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("radius {r}")));
    }
    let ts = t_grid(space.resolution(), r);
    // edge clipping sums many lengths; demand a margin above rounding
    let margin = 1e-9 * space.resolution();
    let witness = |p: &GraphPoint| ts.iter().copied().find(|&t| ball_length(space, p, t) < 2.0 * t - margin);
    let witnesses: Vec<Option<f64>> = (0..space.len())
        .into_par_iter()
        .map(|x| {
            witness(&GraphPoint {
                from: x,
                to: x,
                edge: None,
                offset: 0.0,
            })
        })
        .collect();
    let violating_point = witnesses.iter().position(|w| w.is_none());
    let comps = space.components(&space.full());
    let component_radii: Vec<f64> = comps
        .iter()
        .map(|comp| component_radius(space, comp))
        .collect::<Result<_>>()?;
    let centers: Vec<(GraphPoint, Option<f64>)> = comps
        .iter()
        .filter(|comp| is_tree(space, comp))
        .map(|comp| {
            let (c, _, _) = tree_center(space, comp.iter().next().expect("components are nonempty"));
            (c, witness(&c))
        })
        .collect();
    let conclusion_holds = component_radii.iter().all(|&c| c < r);
    Ok(ThresholdReport {
        r,
        hypothesis_holds: violating_point.is_none() && centers.iter().all(|c| c.1.is_some()),
        violating_point,
        witnesses,
        centers,
        component_radii,
        conclusion_holds,
    })
}

fn is_tree(space: &DiscreteSpace, comp: &crate::space::Subset) -> bool {
    space.edges().iter().filter(|e| comp.contains(e.a)).count() + 1 == comp.len()
}

fn component_radius(space: &DiscreteSpace, comp: &crate::space::Subset) -> Result<f64> {
    if is_tree(space, comp) {
        // a tree: the continuum radius is half the diameter
        Ok(space.diameter(comp) / 2.0)
    } else {
        Ok(space.radius(comp)?.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub sys: f64,
    pub cycle: Vec<usize>,
    pub width_r: f64,
    pub ratio: f64,
    pub slack: f64,
    pub tolerance: f64,
    pub holds: bool,
    pub instance: String,
}

/// Systole by space kind: girth for metric graphs, the Z₂ systole for
/// surfaces; `None` when the instance has no nontrivial cycle.
pub fn systole(space: &DiscreteSpace) -> Result<Option<CycleWitness>> {
    match space.kind() {
        SpaceKind::MetricGraph => girth(space),
        SpaceKind::GridSurface => homology_systole_z2(space),
        SpaceKind::PointSet => Err(Error::WrongKind {
            expected: "metric-graph or grid-surface",
        }),
    }
}

/// Compare `sys` with `2 r`, allowing `2h`.
pub fn inequality_report(space: &DiscreteSpace, cycle: &CycleWitness, width_r: f64) -> InequalityReport {
    let tolerance = 2.0 * space.resolution();
    InequalityReport {
        sys: cycle.length,
        cycle: cycle.vertices.clone(),
        width_r,
        ratio: cycle.length / (2.0 * width_r),
        slack: 2.0 * width_r - cycle.length,
        tolerance,
        holds: cycle.length <= 2.0 * width_r + tolerance,
        instance: space.instance_hash(),
    }
}

/// Compute the systole and a width certificate at the content radius and
/// compare `sys` with `2 r`.
pub fn verify_inequality4(space: &DiscreteSpace, n: usize, exact: ExactOptions) -> Result<InequalityReport> {
    let cycle = systole(space)?.ok_or(Error::NotEssential)?;
    let y = space.full();
    let (r, hint) = theorem_radius(space, &y, n, exact)?;
    let opts = WidthOptions {
        exact,
        hints: vec![hint],
        ..Default::default()
    };
    let cert = bound_width(space, &y, n, r, &opts)?;
    Ok(inequality_report(space, &cycle, cert.r))
}
