//! Separating subsets and a potential-decreasing descent that makes their
//! traces on all `ρ`-balls small in content.
//!
//! `Z ⊆ Y` is `d`-separating when every component of `Y \ Z` (under the
//! chosen [`Links`]) has radius at most `d`. The descent starts from `Z = Y`
//! and replaces a violating ball's interior by a light shell. The potential
//! is the value of a covering `W` of `Z` with radii capped at `b`, carried
//! along explicitly, so every logged drop is exact arithmetic on that
//! covering rather than a fresh estimate.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::content::{
    greedy_covering, hc_best, hc_exact, Covering, ExactOptions, Side,
};
use crate::error::{Error, Result};
use crate::space::{DiscreteSpace, Links, Subset, BAND_TOL};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentWitness {
    pub points: Vec<usize>,
    pub center: usize,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Separation {
    pub separating: bool,
    pub witnesses: Vec<ComponentWitness>,
    pub violating: Option<ComponentWitness>,
}

fn witness_of(space: &DiscreteSpace, comp: &Subset) -> Result<ComponentWitness> {
    let (radius, center) = space.radius(comp)?;
    Ok(ComponentWitness {
        points: comp.indices(),
        center,
        radius,
    })
}

/// Check that every component of `Y \ Z` fits in a ball of radius `d`.
pub fn is_separating(
    space: &DiscreteSpace,
    y: &Subset,
    z: &Subset,
    d: f64,
    links: Links,
) -> Result<Separation> {
    if !z.is_subset_of(y) {
        return Err(Error::PreconditionFailed("Z is not a subset of Y".into()));
    }
    let rest = y.difference(z);
    let limit = d + BAND_TOL * space.resolution();
    let mut witnesses = Vec::new();
    for comp in space.components_with(&rest, links) {
        let w = witness_of(space, &comp)?;
        if w.radius > limit {
            return Ok(Separation {
                separating: false,
                witnesses,
                violating: Some(w),
            });
        }
        witnesses.push(w);
    }
    Ok(Separation {
        separating: true,
        witnesses,
        violating: None,
    })
}

/// How a ball's content bound was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Empty,
    Witness,
    Greedy,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Estimate {
    pub value: f64,
    pub side: Side,
    pub method: Method,
}

/// Cheapest available certified upper bound on `HC_m(a)`, stopping early
/// once one falls below `threshold`. The exact solver runs only when
/// nothing cheaper got below the threshold.
pub(crate) fn estimate_below(
    space: &DiscreteSpace,
    a: &Subset,
    m: f64,
    threshold: f64,
    hints: &[&Covering],
    opts: ExactOptions,
) -> Result<Estimate> {
    if a.is_empty() {
        return Ok(Estimate {
            value: 0.0,
            side: Side::Exact,
            method: Method::Empty,
        });
    }
    let mut best = Estimate {
        value: f64::INFINITY,
        side: Side::Upper,
        method: Method::Witness,
    };
    for hint in hints {
        if let Some(c) = hint.with_dimension(m).restrict(space, a) {
            best.value = best.value.min(c.value());
        }
    }
    if best.value < threshold {
        return Ok(best);
    }
    let g = greedy_covering(space, a, m, None).value();
    if g < best.value {
        best = Estimate {
            value: g,
            side: Side::Upper,
            method: Method::Greedy,
        };
    }
    if best.value < threshold || a.len() > opts.budget {
        return Ok(best);
    }
    match hc_exact(space, a, m, None, opts) {
        Ok(e) => Ok(Estimate {
            value: e.value,
            side: Side::Exact,
            method: Method::Exact,
        }),
        Err(Error::BudgetExceeded { .. }) => Ok(best),
        Err(e) => Err(e),
    }
}

/// Upper estimates for `HC_m(Ball(x, radius) ∩ set)` at every center,
/// sharing work between centers whose balls meet `set` identically.
pub(crate) fn ball_estimates(
    space: &DiscreteSpace,
    set: &Subset,
    radius: f64,
    m: f64,
    threshold: f64,
    hints: &[&Covering],
    opts: ExactOptions,
    centers: std::ops::Range<usize>,
) -> Result<Vec<(usize, usize, Estimate)>> {
    let mut keys: HashMap<Subset, usize> = HashMap::new();
    let mut unique: Vec<Subset> = Vec::new();
    let mut slot = Vec::new();
    for x in centers.clone() {
        let trace = space.ball(x, radius)?.intersection(set);
        let next = unique.len();
        let id = *keys.entry(trace.clone()).or_insert(next);
        if id == next {
            unique.push(trace);
        }
        slot.push(id);
    }
    let values: Vec<Estimate> = unique
        .par_iter()
        .map(|a| estimate_below(space, a, m, threshold, hints, opts))
        .collect::<Result<_>>()?;
    Ok(centers
        .zip(slot)
        .map(|(x, id)| (x, unique[id].len(), values[id]))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub m: f64,
    pub radius: f64,
    pub threshold: f64,
    pub min_gap: f64,
    pub worst_center: usize,
    pub worst_upper: f64,
}

/// Check `HC_m(Ball(x, radius) ∩ Y) < threshold` for every center.
pub fn check_hypothesis(
    space: &DiscreteSpace,
    y: &Subset,
    radius: f64,
    m: f64,
    threshold: f64,
    level: usize,
    opts: ExactOptions,
    hints: &[&Covering],
) -> Result<HypothesisReport> {
    let global = greedy_covering(space, y, m, None);
    let mut all_hints = vec![&global];
    all_hints.extend_from_slice(hints);
    let all = ball_estimates(space, y, radius, m, threshold, &all_hints, opts, 0..space.len())?;
    let mut report = HypothesisReport {
        m,
        radius,
        threshold,
        min_gap: f64::INFINITY,
        worst_center: 0,
        worst_upper: 0.0,
    };
    for (x, _, est) in all {
        let gap = threshold - est.value;
        if gap < report.min_gap {
            report.min_gap = gap;
            report.worst_center = x;
            report.worst_upper = est.value;
        }
    }
    if report.min_gap <= 0.0 {
        return Err(Error::HypothesisViolation {
            level,
            center: report.worst_center,
            radius,
            measured: report.worst_upper,
            threshold,
        });
    }
    Ok(report)
}

/// Derived constants of the descent for content dimension `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparatorParams {
    pub n: usize,
    pub r: f64,
    pub mu: f64,
    pub mu1: f64,
    pub b: f64,
    pub rho: f64,
    /// `(ρ/4n)^n`, the bound every final ball must meet.
    pub ball_threshold: f64,
    /// `(r/4(n+1))^(n+1)`, the bound on `(n+1)`-content of `r`-balls.
    pub hypothesis_threshold: f64,
    /// `b^n = (r/4(n+1))^n − 4(n+1)μ/r`, the admissible shell weight.
    pub weight_limit: f64,
    /// `4(n+1)μ/r`.
    pub required_drop: f64,
    pub band_width: f64,
    pub links: Links,
}

impl SeparatorParams {
    pub fn new(space: &DiscreteSpace, n: usize, r: f64, mu: f64, links: Links) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("separator dimension must be >= 1".into()));
        }
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidParameter(format!("radius {r}")));
        }
        if !(mu > 0.0) {
            return Err(Error::InvalidParameter(format!("mu must be > 0, got {mu}")));
        }
        let nf = n as f64;
        let q = r / (4.0 * (nf + 1.0));
        let required_drop = 4.0 * (nf + 1.0) * mu / r;
        let inner = q.powf(nf) - required_drop;
        if !(inner > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "mu = {mu} leaves no admissible shell weight at r = {r}"
            )));
        }
        let mu1 = q - inner.powf(1.0 / nf);
        let b = q - mu1;
        let rho = r * (1.0 - 1.0 / (nf + 1.0));
        Ok(Self {
            n,
            r,
            mu,
            mu1,
            b,
            rho,
            ball_threshold: (rho / (4.0 * nf)).powf(nf),
            hypothesis_threshold: q.powf(nf + 1.0),
            weight_limit: inner,
            required_drop,
            band_width: space.resolution().max(links.scale(space)),
            links,
        })
    }

    /// Inner radius of the annulus searched for a replacement shell.
    pub fn r1(&self) -> f64 {
        self.r * (1.0 - 1.0 / (2.0 * (self.n as f64 + 1.0)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepRecord {
    pub step: usize,
    pub center: usize,
    pub s: f64,
    pub band: usize,
    pub weight: f64,
    pub violation_upper: f64,
    /// True when the violating ball's content was computed exactly.
    pub certified_violation: bool,
    pub phi_before: f64,
    pub phi_after: f64,
    pub drop: f64,
    pub required_drop: f64,
    pub removed: usize,
    pub added: usize,
}

/// New separator with the covering that carries the potential.
#[derive(Debug, Clone)]
pub struct Replacement {
    pub z: Subset,
    pub covering: Covering,
    pub record: StepRecord,
}

/// Replace `Z ∩ Ball(x, s)` by the lightest shell `S ∩ Y` with
/// `s ∈ (r1, r)`.
///
/// `w` must cover `Z` with radii at most `b`; the returned covering covers
/// the new separator with the same cap.
pub fn replacement_step(
    space: &DiscreteSpace,
    y: &Subset,
    z: &Subset,
    w: &Covering,
    x: usize,
    params: &SeparatorParams,
    level: usize,
    opts: ExactOptions,
) -> Result<Replacement> {
    let nf = params.n as f64;
    let trace = space.ball(x, params.rho)?.intersection(z);
    if trace.is_empty() {
        return Err(Error::PreconditionFailed(format!(
            "separator does not meet the ball around {x}"
        )));
    }
    let violation = estimate_below(space, &trace, nf, params.ball_threshold, &[w], opts)?;
    if violation.value < params.ball_threshold {
        return Err(Error::PreconditionFailed(format!(
            "ball around {x} already has content {} below {}",
            violation.value, params.ball_threshold
        )));
    }

    let r1 = params.r1();
    let annulus = space.annulus(x, r1, params.r)?.intersection(y);
    let m = nf + 1.0;
    let mut coverings = vec![hc_best(space, &annulus, m, None, opts)?.covering()];
    if let Some(c) = greedy_covering(space, y, m, None).restrict(space, &annulus) {
        coverings.push(c);
    }
    let mut selection = None;
    for c in &coverings {
        let sel = crate::content::select_shell_banded(
            space,
            y,
            x,
            r1,
            params.r,
            m,
            Some(c),
            params.band_width,
            opts,
        )?;
        if selection
            .as_ref()
            .is_none_or(|s: &crate::content::CoareaSelection| sel.weight < s.weight)
        {
            selection = Some(sel);
        }
    }
    let sel = selection.expect("at least one covering");
    if !(sel.weight < params.weight_limit) {
        return Err(Error::HypothesisViolation {
            level,
            center: x,
            radius: params.r,
            measured: sel.weight,
            threshold: params.weight_limit,
        });
    }

    let inner = Subset::from_fn(space.len(), |p| sel.is_inner(space.distance(x, p)));
    let z1 = z.difference(&inner);
    let z_next = z1.union(&sel.shell);

    let mut balls: Vec<_> = w
        .balls
        .iter()
        .filter(|b| z1.iter().any(|p| b.covers(space, p)))
        .copied()
        .collect();
    for &i in &sel.touched {
        balls.push(sel.covering.balls[i]);
    }
    let covering = Covering {
        m: nf,
        cap: Some(params.b),
        balls,
    };
    if !covering.covers(space, &z_next) || covering.balls.iter().any(|b| b.radius > params.b) {
        return Err(Error::Internal("replacement covering lost coverage or cap".into()));
    }
    let sep = is_separating(space, y, &z_next, params.r, params.links)?;
    if !sep.separating {
        return Err(Error::Internal(format!(
            "replacement around {x} broke separation"
        )));
    }
    let phi_before = w.value();
    let phi_after = covering.value();
    let record = StepRecord {
        step: 0,
        center: x,
        s: sel.s,
        band: sel.band,
        weight: sel.weight,
        violation_upper: violation.value,
        certified_violation: violation.side == Side::Exact,
        phi_before,
        phi_after,
        drop: phi_before - phi_after,
        required_drop: params.required_drop,
        removed: z.difference(&z_next).len(),
        added: z_next.difference(z).len(),
    };
    Ok(Replacement {
        z: z_next,
        covering,
        record,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallBound {
    pub center: usize,
    pub points: usize,
    pub upper: f64,
    pub threshold: f64,
    pub method: Method,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparatorCertificate {
    pub params: SeparatorParams,
    pub z: Subset,
    pub d: f64,
    pub component_witnesses: Vec<ComponentWitness>,
    pub ball_bounds: Vec<BallBound>,
    pub hypothesis: HypothesisReport,
    pub phi_initial: f64,
    pub phi_final: f64,
    pub step_budget: usize,
    pub pruned: usize,
    pub steps: Vec<StepRecord>,
    /// Covering of `Z` with radii at most `b` whose value is `phi_final`.
    pub covering: Covering,
}

#[derive(Debug, Clone, Copy)]
pub struct SeparatorOptions {
    pub exact: ExactOptions,
    /// Recursion level reported in hypothesis failures.
    pub level: usize,
    pub links: Links,
}

impl Default for SeparatorOptions {
    fn default() -> Self {
        Self {
            exact: ExactOptions::default(),
            level: 0,
            links: Links::Adjacency,
        }
    }
}

const SCAN_CHUNK: usize = 64;

fn first_violation(
    space: &DiscreteSpace,
    z: &Subset,
    w: &Covering,
    params: &SeparatorParams,
    opts: ExactOptions,
) -> Result<Option<(usize, Estimate)>> {
    let nf = params.n as f64;
    let mut start = 0;
    while start < space.len() {
        let end = (start + SCAN_CHUNK).min(space.len());
        let chunk = ball_estimates(space, z, params.rho, nf, params.ball_threshold, &[w], opts, start..end)?;
        if let Some(&(x, _, est)) = chunk.iter().find(|(_, _, e)| e.value >= params.ball_threshold) {
            return Ok(Some((x, est)));
        }
        start = end;
    }
    Ok(None)
}

/// Drop points of `Z` whose removal keeps every component of `Y \ Z`
/// strictly inside an `r`-ball. Returns the number of dropped points.
fn prune(space: &DiscreteSpace, y: &Subset, z: &mut Subset, r: f64, links: Links) -> Result<usize> {
    let mut label: Vec<Option<usize>> = vec![None; space.len()];
    let mut comps: Vec<Subset> = Vec::new();
    for comp in space.components_with(&y.difference(z), links) {
        for p in comp.iter() {
            label[p] = Some(comps.len());
        }
        comps.push(comp);
    }
    let mut dropped = 0;
    for p in z.indices() {
        let mut merged = Subset::from_indices(space.len(), [p])?;
        let mut ids: Vec<usize> = y
            .iter()
            .filter(|&q| !z.contains(q) && linked(space, links, p, q))
            .filter_map(|q| label[q])
            .collect();
        ids.sort_unstable();
        ids.dedup();
        for &i in &ids {
            merged = merged.union(&comps[i]);
        }
        if space.radius(&merged)?.0 < r {
            z.remove(p);
            let id = comps.len();
            for q in merged.iter() {
                label[q] = Some(id);
            }
            for &i in &ids {
                comps[i] = Subset::empty(space.len());
            }
            comps.push(merged);
            dropped += 1;
        }
    }
    Ok(dropped)
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

/// Descend from `Z = Y` to an `r`-separating set whose `ρ`-ball traces all
/// have `n`-content below `(ρ/4n)^n`.
///
/// `mu` defaults to half the smallest hypothesis gap.
pub fn minimize_separator(
    space: &DiscreteSpace,
    y: &Subset,
    r: f64,
    n: usize,
    mu: Option<f64>,
    opts: SeparatorOptions,
) -> Result<SeparatorCertificate> {
    minimize_separator_with(space, y, r, n, mu, opts, &[])
}

/// [`minimize_separator`] with extra coverings of `Y` (in any dimension)
/// offered to the hypothesis check.
pub fn minimize_separator_with(
    space: &DiscreteSpace,
    y: &Subset,
    r: f64,
    n: usize,
    mu: Option<f64>,
    opts: SeparatorOptions,
    hints: &[&Covering],
) -> Result<SeparatorCertificate> {
    if n == 0 {
        return Err(Error::InvalidParameter("separator dimension must be >= 1".into()));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("radius {r}")));
    }
    let nf = n as f64;
    let q = r / (4.0 * (nf + 1.0));
    let hyp_threshold = q.powf(nf + 1.0);
    let hypothesis =
        check_hypothesis(space, y, r, nf + 1.0, hyp_threshold, opts.level, opts.exact, hints)?;
    let mu = match mu {
        None => hypothesis.min_gap / 2.0,
        Some(mu) if mu < hypothesis.min_gap => mu,
        Some(mu) => {
            return Err(Error::HypothesisViolation {
                level: opts.level,
                center: hypothesis.worst_center,
                radius: r,
                measured: hypothesis.worst_upper,
                threshold: hyp_threshold - mu,
            })
        }
    };
    let params = SeparatorParams::new(space, n, r, mu, opts.links)?;

    let mut z = y.clone();
    let mut w = greedy_covering(space, &z, nf, Some(params.b));
    let phi_initial = w.value();
    let step_budget = ((2.0 * phi_initial * r / (4.0 * (nf + 1.0) * mu)).ceil() as usize).max(1);
    let mut steps = Vec::new();
    while let Some((x, _)) = first_violation(space, &z, &w, &params, opts.exact)? {
        if steps.len() >= step_budget {
            return Err(Error::StepBudgetExhausted { steps: steps.len() });
        }
        let mut rep = replacement_step(space, y, &z, &w, x, &params, opts.level, opts.exact)?;
        rep.record.step = steps.len();
        steps.push(rep.record);
        z = rep.z;
        w = rep.covering;
    }

    let pruned = prune(space, y, &mut z, r, params.links)?;
    if pruned > 0 {
        let balls = w
            .balls
            .iter()
            .filter(|b| z.iter().any(|p| b.covers(space, p)))
            .copied()
            .collect();
        w = Covering { balls, ..w };
    }

    let sep = is_separating(space, y, &z, r, params.links)?;
    if !sep.separating {
        return Err(Error::Internal("descent ended with a non-separating set".into()));
    }
    let bounds = ball_estimates(
        space,
        &z,
        params.rho,
        nf,
        params.ball_threshold,
        &[&w],
        opts.exact,
        0..space.len(),
    )?;
    let ball_bounds: Vec<BallBound> = bounds
        .into_iter()
        .map(|(center, points, e)| BallBound {
            center,
            points,
            upper: e.value,
            threshold: params.ball_threshold,
            method: e.method,
        })
        .collect();
    if let Some(bad) = ball_bounds.iter().find(|b| b.upper >= b.threshold) {
        return Err(Error::Internal(format!(
            "ball around {} still exceeds its bound after descent",
            bad.center
        )));
    }
    Ok(SeparatorCertificate {
        phi_final: w.value(),
        params,
        z,
        d: r,
        component_witnesses: sep.witnesses,
        ball_bounds,
        hypothesis,
        phi_initial,
        step_budget,
        pruned,
        steps,
        covering: w,
    })
}

impl SeparatorCertificate {
    /// Recheck the certificate's claims against the space.
    pub fn validate(&self, space: &DiscreteSpace, y: &Subset) -> Result<()> {
        let reject = |m: String| Err(Error::CertificateRejected(m));
        let p = &self.params;
        let nf = p.n as f64;
        let q = p.r / (4.0 * (nf + 1.0));
        let mu1 = q - (q.powf(nf) - 4.0 * (nf + 1.0) * p.mu / p.r).powf(1.0 / nf);
        if (mu1 - p.mu1).abs() > 1e-12 * q || (q - mu1 - p.b).abs() > 1e-12 * q {
            return reject("mu1 or b do not match their definition".into());
        }
        if (p.rho - p.r * (1.0 - 1.0 / (nf + 1.0))).abs() > 1e-12 * p.r {
            return reject("rho does not match its definition".into());
        }
        if !self.z.is_subset_of(y) {
            return reject("Z is not a subset of Y".into());
        }
        let rest = y.difference(&self.z);
        let mut seen = Subset::empty(space.len());
        for w in &self.component_witnesses {
            for &pt in &w.points {
                if !rest.contains(pt) || space.distance(w.center, pt) > w.radius + BAND_TOL * space.resolution() {
                    return reject(format!("point {pt} escapes its component witness"));
                }
                seen.insert(pt);
            }
            if w.radius > self.d + BAND_TOL * space.resolution() {
                return reject(format!("component witness radius {} exceeds {}", w.radius, self.d));
            }
        }
        if seen != rest {
            return reject("component witnesses do not partition Y \\ Z".into());
        }
        if !self.covering.covers(space, &self.z) {
            return reject("potential covering does not cover Z".into());
        }
        for b in &self.ball_bounds {
            if !(b.upper < b.threshold) {
                return reject(format!("ball around {} exceeds its bound", b.center));
            }
        }
        for pair in self.steps.windows(2) {
            if !(pair[1].phi_before == pair[0].phi_after) {
                return reject("step log is not contiguous".into());
            }
        }
        for s in &self.steps {
            if !(s.drop > 0.0) {
                return reject(format!("step {} did not decrease the potential", s.step));
            }
        }
        Ok(())
    }

    /// Smallest logged drop relative to the guaranteed one.
    pub fn min_drop_ratio(&self) -> Option<f64> {
        self.steps
            .iter()
            .map(|s| s.drop / s.required_drop)
            .min_by(f64::total_cmp)
    }
}
