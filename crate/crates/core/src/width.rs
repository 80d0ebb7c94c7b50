//! Bounded-multiplicity covers certifying upper bounds on Urysohn width.
//!
//! A cover of `Y` is accepted when its sets cover `Y`, each set lies in its
//! witness ball, no point lies in more than `n` sets, and every linked pair
//! of points of `Y` shares a set. The last condition is the discrete stand-in
//! for openness: without it singletons would cover any finite set with
//! multiplicity one and radius zero.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::content::{hc_best, Covering, ExactOptions};
use crate::error::{Error, Result};
use crate::separator::{
    check_hypothesis, minimize_separator_with, HypothesisReport, SeparatorCertificate,
    SeparatorOptions,
};
use crate::space::{DiscreteSpace, Links, Subset, BAND_TOL};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverSet {
    pub points: Vec<usize>,
    pub center: usize,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Cover {
    pub sets: Vec<CoverSet>,
}

impl Cover {
    pub fn multiplicity(&self, len: usize) -> usize {
        let mut count = vec![0usize; len];
        for s in &self.sets {
            for &p in &s.points {
                count[p] += 1;
            }
        }
        count.into_iter().max().unwrap_or(0)
    }

    pub fn max_radius(&self) -> f64 {
        self.sets.iter().map(|s| s.radius).fold(0.0, f64::max)
    }

    fn push(&mut self, space: &DiscreteSpace, set: &Subset) -> Result<()> {
        let (radius, center) = space.radius(set)?;
        self.sets.push(CoverSet {
            points: set.indices(),
            center,
            radius,
        });
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NerveComplex {
    /// Largest simplex dimension; `-1` for the empty cover.
    pub dim: i64,
    /// Distinct membership patterns, each a sorted list of cover-set indices.
    pub simplices: Vec<Vec<usize>>,
    /// For each point of the cover, the index of its simplex.
    pub assignment: Vec<(usize, usize)>,
}

/// Nerve of a cover with the membership-pattern map; checks that each
/// fiber lies in one of the sets of its simplex.
pub fn nerve(cover: &Cover, len: usize) -> Result<NerveComplex> {
    let mut pattern: Vec<Vec<usize>> = vec![Vec::new(); len];
    for (i, s) in cover.sets.iter().enumerate() {
        for &p in &s.points {
            pattern[p].push(i);
        }
    }
    let distinct: BTreeSet<Vec<usize>> = pattern.iter().filter(|p| !p.is_empty()).cloned().collect();
    let simplices: Vec<Vec<usize>> = distinct.into_iter().collect();
    let mut assignment = Vec::new();
    for (p, pat) in pattern.iter().enumerate() {
        if pat.is_empty() {
            continue;
        }
        let idx = simplices.binary_search(pat).expect("pattern was collected");
        assignment.push((p, idx));
    }
    for (idx, simplex) in simplices.iter().enumerate() {
        let fiber: Vec<usize> = assignment
            .iter()
            .filter(|&&(_, s)| s == idx)
            .map(|&(p, _)| p)
            .collect();
        let inside = simplex
            .iter()
            .any(|&i| fiber.iter().all(|p| cover.sets[i].points.binary_search(p).is_ok()));
        if !inside {
            return Err(Error::Internal(format!("fiber of simplex {simplex:?} escapes its sets")));
        }
    }
    let dim = simplices.iter().map(|s| s.len() as i64 - 1).max().unwrap_or(-1);
    Ok(NerveComplex {
        dim,
        simplices,
        assignment,
    })
}

fn band_width(space: &DiscreteSpace, links: Links) -> f64 {
    space.resolution().max(links.scale(space))
}

/// Multiplicity-one cover of `Y` by sets of radius `< r`.
///
/// Repeatedly takes the smallest unassigned point `x` and the outermost
/// empty band `[k w, (k+1) w)` around it with `(k + 1/2) w < r`, where `w`
/// is the larger of `h` and the link scale; the points inside the band
/// become one set.
pub fn ur0_cover(space: &DiscreteSpace, y: &Subset, r: f64, links: Links) -> Result<Cover> {
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("radius {r}")));
    }
    let w = band_width(space, links);
    let mut remaining = y.clone();
    let mut cover = Cover::default();
    let top = ((r / w - 0.5 - BAND_TOL).ceil() as i64 - 1).max(0) as usize;
    loop {
        let Some(x) = remaining.iter().next() else {
            break;
        };
        let mut occupied = vec![false; top + 1];
        for p in remaining.iter() {
            let k = (space.distance(x, p) / w + BAND_TOL).floor() as usize;
            if k <= top {
                occupied[k] = true;
            }
        }
        let mut chosen = None;
        for k in (1..=top).rev() {
            if occupied[k] {
                continue;
            }
            let inner = Subset::from_fn(space.len(), |p| {
                remaining.contains(p) && ((space.distance(x, p) / w + BAND_TOL).floor() as usize) < k
            });
            if space.is_closed_under_links(&inner, &remaining, links) {
                chosen = Some(inner);
                break;
            }
        }
        let inner = chosen.ok_or(Error::NoEmptyShell { center: x, radius: r })?;
        cover.push(space, &inner)?;
        remaining = remaining.difference(&inner);
    }
    Ok(cover)
}

/// Extend a cover of `Z` to `Y` by adding each point of `Y \ Z` to sets
/// holding its linked neighbors in `Z`, then appending the components of
/// `Y \ Z`.
///
/// `n` is the multiplicity allowed for the result.
pub fn extend_cover(
    space: &DiscreteSpace,
    y: &Subset,
    z: &Subset,
    zcover: &Cover,
    n: usize,
    links: Links,
) -> Result<Cover> {
    let rest = y.difference(z);
    let mut grown: Vec<Subset> = zcover
        .sets
        .iter()
        .map(|s| Subset::from_indices(space.len(), s.points.iter().copied()))
        .collect::<Result<_>>()?;
    let original = grown.clone();
    for p in rest.iter() {
        let neighbors: Vec<usize> = z.iter().filter(|&q| linked(space, links, p, q)).collect();
        if neighbors.is_empty() {
            continue;
        }
        // fewest zcover sets jointly containing every neighbor: a single
        // set when one exists, else a greedy hitting family
        let mut left = neighbors.clone();
        let mut picks = Vec::new();
        while !left.is_empty() {
            let (best, hit) = original
                .iter()
                .enumerate()
                .map(|(i, s)| (i, left.iter().filter(|&&q| s.contains(q)).count()))
                .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
                .ok_or_else(|| Error::PreconditionFailed("zcover does not cover Z".into()))?;
            if hit == 0 {
                return Err(Error::PreconditionFailed("zcover does not cover Z".into()));
            }
            picks.push(best);
            left.retain(|&q| !original[best].contains(q));
        }
        if 1 + picks.len() > n {
            return Err(Error::MultiplicityOverflow {
                limit: n,
                halvings: 0,
            });
        }
        for i in picks {
            grown[i].insert(p);
        }
    }
    let mut cover = Cover::default();
    for set in &grown {
        cover.push(space, set)?;
    }
    for comp in space.components_with(&rest, links) {
        cover.push(space, &comp)?;
    }
    Ok(cover)
}

fn linked(space: &DiscreteSpace, links: Links, p: usize, q: usize) -> bool {
    if p == q {
        return false;
    }
    match links {
        Links::Adjacency => space.neighbors(p).binary_search(&q).is_ok(),
        Links::Within(s) => space.distance(p, q) <= s + BAND_TOL * space.resolution(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelTrace {
    pub level: usize,
    pub n: usize,
    pub r: f64,
    pub points: usize,
    pub links: Links,
    pub hypothesis: Option<HypothesisReport>,
    pub separator: Option<SeparatorCertificate>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NerveSummary {
    pub dim: i64,
    pub simplices: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WidthCertificate {
    pub n: usize,
    pub r: f64,
    pub links: Links,
    pub cover: Vec<CoverSet>,
    pub multiplicity: usize,
    pub max_radius: f64,
    pub levels: Vec<LevelTrace>,
    pub nerve: NerveSummary,
}

#[derive(Debug, Clone)]
pub struct WidthOptions {
    pub exact: ExactOptions,
    pub links: Links,
    /// Coverings of `Y` offered to the top-level hypothesis check.
    pub hints: Vec<Covering>,
}

impl Default for WidthOptions {
    fn default() -> Self {
        Self {
            exact: ExactOptions::default(),
            links: Links::Adjacency,
            hints: Vec::new(),
        }
    }
}

/// Certify `UR_{n-1}(Y) < r` by a cover of multiplicity `<= n` whose sets
/// have radius `< r`.
///
/// Requires `HC_n(B ∩ Y) < (r/4n)^n` for every `r`-ball `B`.
pub fn bound_width(
    space: &DiscreteSpace,
    y: &Subset,
    n: usize,
    r: f64,
    opts: &WidthOptions,
) -> Result<WidthCertificate> {
    let mut levels = Vec::new();
    let hints: Vec<&Covering> = opts.hints.iter().collect();
    let cover = build(space, y, n, r, opts.links, opts.exact, &hints, 0, &mut levels)?;
    let cert = WidthCertificate {
        n,
        r,
        links: opts.links,
        multiplicity: cover.multiplicity(space.len()),
        max_radius: cover.max_radius(),
        nerve: {
            let nv = nerve(&cover, space.len())?;
            NerveSummary {
                dim: nv.dim,
                simplices: nv.simplices,
            }
        },
        cover: cover.sets,
        levels,
    };
    revalidate(space, y, &cert)?;
    Ok(cert)
}

#[allow(clippy::too_many_arguments)]
fn build(
    space: &DiscreteSpace,
    y: &Subset,
    n: usize,
    r: f64,
    links: Links,
    exact: ExactOptions,
    hints: &[&Covering],
    level: usize,
    levels: &mut Vec<LevelTrace>,
) -> Result<Cover> {
    if n == 0 {
        return Err(Error::InvalidParameter("multiplicity must be >= 1".into()));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("radius {r}")));
    }
    let mut trace = LevelTrace {
        level,
        n,
        r,
        points: y.len(),
        links,
        hypothesis: None,
        separator: None,
    };
    if y.len() <= 1 {
        let mut cover = Cover::default();
        if !y.is_empty() {
            cover.push(space, y)?;
        }
        levels.push(trace);
        return Ok(cover);
    }
    let nf = n as f64;
    let threshold = (r / (4.0 * nf)).powf(nf);
    let hyp = check_hypothesis(space, y, r, nf, threshold, level, exact, hints)?;
    trace.hypothesis = Some(hyp);
    if n == 1 {
        let cover = ur0_cover(space, y, r, links)?;
        levels.push(trace);
        return Ok(cover);
    }
    let sep = minimize_separator_with(
        space,
        y,
        r,
        n - 1,
        None,
        SeparatorOptions {
            exact,
            level,
            links,
        },
        hints,
    )?;
    let z = sep.z.clone();
    let rho = sep.params.rho;
    let w = sep.covering.clone();
    trace.separator = Some(sep);
    levels.push(trace);
    let zcover = build(space, &z, n - 1, rho, links.doubled(space), exact, &[&w], level + 1, levels)?;
    extend_cover(space, y, &z, &zcover, n, links)
}

/// `r = 4n · HC_n(Y)^{1/n} · (1 + 1e-3)` with the content exact when
/// within budget and greedy otherwise; also returns the covering used.
pub fn theorem_radius(
    space: &DiscreteSpace,
    y: &Subset,
    n: usize,
    exact: ExactOptions,
) -> Result<(f64, Covering)> {
    if n == 0 {
        return Err(Error::InvalidParameter("dimension must be >= 1".into()));
    }
    let nf = n as f64;
    let est = hc_best(space, y, nf, None, exact)?;
    Ok((4.0 * nf * est.value.powf(1.0 / nf) * (1.0 + 1e-3), est.covering()))
}

/// Certified bound on `UW_{n-1}` from a radius certificate.
pub fn uw_from_ur(cert: &WidthCertificate) -> f64 {
    2.0 * cert.r
}

/// Recheck a width certificate from scratch using only distances and the
/// raw adjacency lists.
pub fn revalidate(space: &DiscreteSpace, y: &Subset, cert: &WidthCertificate) -> Result<()> {
    let reject = |m: String| Err(Error::CertificateRejected(m));
    let len = space.len();
    let slack = 1e-9 * space.resolution();
    let mut count = vec![0usize; len];
    let mut owner: Vec<Vec<usize>> = vec![Vec::new(); len];
    let mut worst: f64 = 0.0;
    for (i, set) in cert.cover.iter().enumerate() {
        if set.center >= len {
            return reject(format!("set {i} has an invalid center"));
        }
        worst = worst.max(set.radius);
        for &p in &set.points {
            if p >= len || !y.contains(p) {
                return reject(format!("set {i} contains {p} outside Y"));
            }
            if space.distance(set.center, p) > set.radius + slack {
                return reject(format!("point {p} of set {i} lies outside its ball"));
            }
            count[p] += 1;
            owner[p].push(i);
        }
    }
    for p in 0..len {
        if y.contains(p) && count[p] == 0 {
            return reject(format!("point {p} is not covered"));
        }
    }
    let mult = count.iter().copied().max().unwrap_or(0);
    if mult != cert.multiplicity || mult > cert.n {
        return reject(format!("multiplicity {mult} (claimed {}, limit {})", cert.multiplicity, cert.n));
    }
    if worst != cert.max_radius || !(worst < cert.r) {
        return reject(format!("max radius {worst} (claimed {}, limit {})", cert.max_radius, cert.r));
    }
    let members: Vec<usize> = (0..len).filter(|&p| y.contains(p)).collect();
    for (a, &p) in members.iter().enumerate() {
        for &q in &members[a + 1..] {
            let joined = match cert.links {
                Links::Adjacency => space.neighbors(p).contains(&q),
                Links::Within(s) => space.distance(p, q) <= s + slack,
            };
            if joined && !owner[p].iter().any(|i| owner[q].contains(i)) {
                return reject(format!("linked points {p} and {q} share no set"));
            }
        }
    }
    let top = owner.iter().map(|o| o.len()).max().unwrap_or(0) as i64 - 1;
    if cert.nerve.dim != top || cert.nerve.dim > cert.n as i64 - 1 {
        return reject(format!("nerve dimension {}", cert.nerve.dim));
    }
    Ok(())
}

/// Smallest `r` admitting a cover of `Y` with multiplicity `<= n`, sets in
/// `r`-balls, and every linked pair sharing a set. Exhaustive; `|Y| <= 12`.
pub fn ur_exact_small(space: &DiscreteSpace, y: &Subset, n: usize, links: Links) -> Result<f64> {
    const NODE_LIMIT: u64 = 5_000_000;
    let pts = y.indices();
    let k = pts.len();
    if k > 12 {
        return Err(Error::BudgetExceeded {
            what: format!("exact width over {k} points"),
            limit: 12,
        });
    }
    if n == 0 {
        return Err(Error::InvalidParameter("multiplicity must be >= 1".into()));
    }
    if k <= 1 {
        return Ok(0.0);
    }
    // items to cover: linked pairs, plus points with no link
    let mut items: Vec<u32> = Vec::new();
    let mut has_link = vec![false; k];
    for a in 0..k {
        for b in a + 1..k {
            if linked(space, links, pts[a], pts[b]) {
                items.push((1 << a) | (1 << b));
                has_link[a] = true;
                has_link[b] = true;
            }
        }
    }
    for a in 0..k {
        if !has_link[a] {
            items.push(1 << a);
        }
    }
    // radius needed for each mask
    let full = 1usize << k;
    let mut need = vec![f64::INFINITY; full];
    need[0] = 0.0;
    for c in 0..space.len() {
        let row = space.row(c);
        let mut ecc = vec![0.0f64; full];
        for mask in 1..full {
            let low = mask.trailing_zeros() as usize;
            let e = ecc[mask & (mask - 1)].max(row[pts[low]]);
            ecc[mask] = e;
            if e < need[mask] {
                need[mask] = e;
            }
        }
    }
    let mut radii: Vec<f64> = need[1..].to_vec();
    radii.sort_by(f64::total_cmp);
    radii.dedup();

    let feasible_at = |r: f64| -> Result<bool> {
        let sets: Vec<u32> = (1..full as u32).filter(|&m| need[m as usize] <= r).collect();
        let mut counts = vec![0usize; k];
        let mut nodes = 0u64;
        search(&items, &sets, n, &mut counts, &mut nodes, NODE_LIMIT)
    };
    let (mut lo, mut hi) = (0usize, radii.len() - 1);
    if !feasible_at(radii[hi])? {
        return Err(Error::Internal("no cover at the largest radius".into()));
    }
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible_at(radii[mid])? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(radii[lo])
}

fn search(
    items: &[u32],
    sets: &[u32],
    n: usize,
    counts: &mut Vec<usize>,
    nodes: &mut u64,
    limit: u64,
) -> Result<bool> {
    *nodes += 1;
    if *nodes > limit {
        return Err(Error::BudgetExceeded {
            what: "exact width search nodes".into(),
            limit: limit as usize,
        });
    }
    let Some(&item) = items.first() else {
        return Ok(true);
    };
    let saturated: u32 = (0..counts.len())
        .filter(|&i| counts[i] >= n)
        .fold(0, |acc, i| acc | (1 << i));
    for &s in sets.iter().rev() {
        if s & item != item || s & saturated != 0 {
            continue;
        }
        for i in 0..counts.len() {
            if s >> i & 1 == 1 {
                counts[i] += 1;
            }
        }
        let rest: Vec<u32> = items.iter().copied().filter(|&it| it & s != it).collect();
        let found = search(&rest, sets, n, counts, nodes, limit)?;
        for i in 0..counts.len() {
            if s >> i & 1 == 1 {
                counts[i] -= 1;
            }
        }
        if found {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize, length: f64) -> DiscreteSpace {
        let h = length / n as f64;
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, h)).collect();
        DiscreteSpace::metric_graph(n, &edges, h).unwrap()
    }

    fn line_points(xs: &[f64], h: f64, eps: f64) -> DiscreteSpace {
        let mut lower = Vec::new();
        for i in 1..xs.len() {
            for j in 0..i {
                lower.push((xs[i] - xs[j]).abs());
            }
        }
        DiscreteSpace::point_set(xs.len(), &lower, h, eps).unwrap()
    }

    #[test]
    fn ur0_on_circle_with_large_radius_is_one_set() {
        let c = cycle(100, 1.0);
        let cover = ur0_cover(&c, &c.full(), 1.1, Links::Adjacency).unwrap();
        assert_eq!(cover.sets.len(), 1);
        assert!((cover.sets[0].radius - 0.5).abs() < 1e-9);
        assert!(ur0_cover(&c, &Subset::empty(100), 1.0, Links::Adjacency)
            .unwrap()
            .sets
            .is_empty());
    }

    #[test]
    fn ur0_splits_far_clusters() {
        let s = line_points(&[0.0, 0.05, 0.1, 10.0, 10.05, 10.1], 0.05, 0.05);
        let cover = ur0_cover(&s, &s.full(), 0.5, Links::Adjacency).unwrap();
        assert_eq!(cover.sets.len(), 2);
        assert!(cover.max_radius() < 0.5);
        assert_eq!(cover.multiplicity(6), 1);
    }

    #[test]
    fn ur0_fails_without_empty_shell() {
        let c = cycle(100, 1.0);
        assert!(matches!(
            ur0_cover(&c, &c.full(), 0.3, Links::Adjacency),
            Err(Error::NoEmptyShell { .. })
        ));
    }

    #[test]
    fn extend_circle_from_two_cut_points() {
        let c = cycle(100, 1.0);
        let z = Subset::from_indices(100, [0, 50]).unwrap();
        let zcover = Cover {
            sets: vec![
                CoverSet {
                    points: vec![0],
                    center: 0,
                    radius: 0.0,
                },
                CoverSet {
                    points: vec![50],
                    center: 50,
                    radius: 0.0,
                },
            ],
        };
        let cover = extend_cover(&c, &c.full(), &z, &zcover, 2, Links::Adjacency).unwrap();
        assert_eq!(cover.sets.len(), 4);
        assert_eq!(cover.multiplicity(100), 2);
        assert!(cover.max_radius() <= 0.25 + 0.01 + 1e-9);
    }

    #[test]
    fn nerve_of_three_arcs_is_a_triangle_boundary() {
        let c = cycle(9, 0.9);
        let arcs = [[0, 1, 2, 3], [3, 4, 5, 6], [6, 7, 8, 0]];
        let cover = Cover {
            sets: arcs
                .iter()
                .map(|a| CoverSet {
                    points: {
                        let mut v = a.to_vec();
                        v.sort_unstable();
                        v
                    },
                    center: a[1],
                    radius: 0.2,
                })
                .collect(),
        };
        let nv = nerve(&cover, c.len()).unwrap();
        assert_eq!(nv.dim, 1);
        assert_eq!(nv.simplices.iter().filter(|s| s.len() == 2).count(), 3);
        let single = Cover {
            sets: vec![CoverSet {
                points: (0..9).collect(),
                center: 0,
                radius: 0.45,
            }],
        };
        assert_eq!(nerve(&single, 9).unwrap().dim, 0);
    }

    #[test]
    fn circle_width_at_theorem_radius() {
        let c = cycle(100, 1.0);
        let (r, _) = theorem_radius(&c, &c.full(), 1, ExactOptions { budget: 200, ..Default::default() }).unwrap();
        assert!(r <= 2.0 + 0.05);
        let cert = bound_width(&c, &c.full(), 1, r, &Default::default()).unwrap();
        assert_eq!(cert.multiplicity, 1);
        assert!(cert.max_radius < r);
        assert_eq!(uw_from_ur(&cert), 2.0 * r);
    }

    #[test]
    fn circle_two_dimensional_width() {
        let c = cycle(100, 1.0);
        let (r, w) = theorem_radius(&c, &c.full(), 2, Default::default()).unwrap();
        let opts = WidthOptions {
            hints: vec![w],
            ..Default::default()
        };
        let cert = bound_width(&c, &c.full(), 2, r, &opts).unwrap();
        assert!(cert.multiplicity <= 2);
        assert!(cert.max_radius < r);
        assert!(cert.nerve.dim <= 1);
    }

    #[test]
    fn singleton_is_trivial() {
        let c = cycle(10, 1.0);
        let y = Subset::from_indices(10, [4]).unwrap();
        for n in 1..=3 {
            let cert = bound_width(&c, &y, n, 0.15, &Default::default()).unwrap();
            assert_eq!(cert.cover.len(), 1);
            assert_eq!(ur_exact_small(&c, &y, n, Links::Adjacency).unwrap(), 0.0);
        }
    }

    #[test]
    fn exact_width_of_two_far_pairs() {
        let s = line_points(&[0.0, 1.0, 50.0, 51.0], 1.0, 1.0);
        assert_eq!(ur_exact_small(&s, &s.full(), 1, Links::Adjacency).unwrap(), 1.0);
    }

    #[test]
    fn revalidator_rejects_tampering() {
        let c = cycle(100, 1.0);
        let mut cert = bound_width(&c, &c.full(), 1, 2.1, &Default::default()).unwrap();
        revalidate(&c, &c.full(), &cert).unwrap();
        cert.cover[0].points.pop();
        assert!(revalidate(&c, &c.full(), &cert).is_err());
    }
}
