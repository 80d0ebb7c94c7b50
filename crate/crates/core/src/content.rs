//! Hausdorff content of finite subsets and the coarea shell selection.
//!
//! Every point stands for a cell of diameter `h`, so a ball of radius `R`
//! centred at `c` covers `y` only when `d(c, y) + h/2 <= R`. Radii therefore
//! never drop below `h/2`, and the content of a discretized interval or
//! circle converges to the continuum value instead of collapsing to zero.
//!
//! Content values are always summed in ascending order of the individual
//! costs so that two witnesses with the same multiset of radii report the
//! same bits.

use std::collections::HashMap;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::space::{DiscreteSpace, Subset, BAND_TOL};

/// Default point budget for the exhaustive solver.
pub const DEFAULT_BUDGET: usize = 24;
/// Default node limit for the branch-and-bound search.
pub const DEFAULT_NODE_LIMIT: u64 = 2_000_000;

const TIE: f64 = 1e-9;
/// Up to this many target points the exact search also explores coverings
/// tied with the incumbent, so the smallest canonical sum is reported.
const TIE_SEARCH_LIMIT: usize = 16;

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

/// A closed covering ball, serialized as `[center, radius]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(usize, f64)", into = "(usize, f64)")]
pub struct Ball {
    pub center: usize,
    pub radius: f64,
}

impl From<(usize, f64)> for Ball {
    fn from((center, radius): (usize, f64)) -> Self {
        Ball { center, radius }
    }
}

impl From<Ball> for (usize, f64) {
    fn from(b: Ball) -> Self {
        (b.center, b.radius)
    }
}

impl Ball {
    #[inline]
    pub fn covers(&self, space: &DiscreteSpace, y: usize) -> bool {
        let reach = space.distance(self.center, y) + space.resolution() / 2.0;
        reach <= self.radius * (1.0 + 1e-12) + 1e-15
    }
}

#[inline]
pub fn ball_cost(radius: f64, m: f64) -> f64 {
    radius.powf(m)
}

/// Sum of costs in ascending order.
pub fn canonical_sum(mut costs: Vec<f64>) -> f64 {
    costs.sort_by(f64::total_cmp);
    costs.iter().sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Covering {
    pub m: f64,
    pub cap: Option<f64>,
    pub balls: Vec<Ball>,
}

impl Covering {
    pub fn empty(m: f64, cap: Option<f64>) -> Self {
        Self {
            m,
            cap,
            balls: Vec::new(),
        }
    }

    pub fn value(&self) -> f64 {
        canonical_sum(self.balls.iter().map(|b| ball_cost(b.radius, self.m)).collect())
    }

    pub fn covers(&self, space: &DiscreteSpace, target: &Subset) -> bool {
        target
            .iter()
            .all(|y| self.balls.iter().any(|b| b.covers(space, y)))
    }

    /// Keep the balls that cover some point of `target`; `None` if the
    /// result does not cover `target`.
    pub fn restrict(&self, space: &DiscreteSpace, target: &Subset) -> Option<Covering> {
        let balls: Vec<Ball> = self
            .balls
            .iter()
            .filter(|b| target.iter().any(|y| b.covers(space, y)))
            .copied()
            .collect();
        let out = Covering {
            m: self.m,
            cap: self.cap,
            balls,
        };
        out.covers(space, target).then_some(out)
    }

    /// Same balls, valued in another dimension.
    pub fn with_dimension(&self, m: f64) -> Covering {
        Covering {
            m,
            cap: self.cap,
            balls: self.balls.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Exact,
    Upper,
    Lower,
}

/// Record of an exhausted branch-and-bound search backing an exact value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub candidates: usize,
    pub nodes: u64,
    pub root_lower_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContentEstimate {
    pub m: f64,
    pub cap: Option<f64>,
    pub value: f64,
    pub side: Side,
    pub balls: Vec<Ball>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchRecord>,
}

impl ContentEstimate {
    pub fn covering(&self) -> Covering {
        Covering {
            m: self.m,
            cap: self.cap,
            balls: self.balls.clone(),
        }
    }

    fn from_covering(c: Covering, side: Side, search: Option<SearchRecord>) -> Self {
        Self {
            m: c.m,
            cap: c.cap,
            value: c.value(),
            side,
            balls: c.balls,
            search,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ExactOptions {
    pub budget: usize,
    pub node_limit: u64,
}

impl Default for ExactOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            node_limit: DEFAULT_NODE_LIMIT,
        }
    }
}

fn validate(space: &DiscreteSpace, m: f64, cap: Option<f64>) -> Result<()> {
    if !(m.is_finite() && m >= 0.0) {
        return Err(Error::InvalidParameter(format!("content dimension {m}")));
    }
    if let Some(b) = cap {
        let floor = space.resolution() / 2.0;
        if b.is_nan() || b < floor {
            return Err(Error::InvalidCap { cap: b, floor });
        }
    }
    Ok(())
}

/// Greedy covering by best cost per newly covered point.
///
/// Ratios within a relative `1e-9` count as ties; ties prefer the larger
/// coverage, then the smaller center index, then the smaller radius.
pub fn hc_greedy(space: &DiscreteSpace, a: &Subset, m: f64, cap: Option<f64>) -> Result<ContentEstimate> {
    validate(space, m, cap)?;
    let covering = greedy_covering(space, a, m, cap);
    Ok(ContentEstimate::from_covering(covering, Side::Upper, None))
}

pub(crate) fn greedy_covering(space: &DiscreteSpace, a: &Subset, m: f64, cap: Option<f64>) -> Covering {
    let targets = a.indices();
    let half = space.resolution() / 2.0;
    let limit = cap.unwrap_or(f64::INFINITY);
    let mut balls = Vec::new();
    if targets.is_empty() {
        return Covering::empty(m, cap);
    }
    // per center: target positions sorted by distance
    let orders: Vec<Vec<usize>> = (0..space.len())
        .map(|c| {
            let row = space.row(c);
            let mut ord: Vec<usize> = (0..targets.len()).collect();
            ord.sort_by(|&i, &j| row[targets[i]].total_cmp(&row[targets[j]]).then(i.cmp(&j)));
            ord
        })
        .collect();
    let mut covered = vec![false; targets.len()];
    let mut remaining = targets.len();
    while remaining > 0 {
        // (ratio, count, center, radius, prefix length)
        let mut best: Option<(f64, usize, usize, f64, usize)> = None;
        for (c, ord) in orders.iter().enumerate() {
            let row = space.row(c);
            let mut count = 0usize;
            let mut i = 0;
            while i < ord.len() {
                let d = row[targets[ord[i]]];
                let radius = d + half;
                if radius > limit {
                    break;
                }
                let reach = radius * (1.0 + 1e-12) + 1e-15;
                while i < ord.len() && row[targets[ord[i]]] + half <= reach {
                    if !covered[ord[i]] {
                        count += 1;
                    }
                    i += 1;
                }
                if count == 0 {
                    continue;
                }
                let ratio = ball_cost(radius, m) / count as f64;
                let better = match best {
                    None => true,
                    Some((br, bc, _, _, _)) => {
                        if ratio < br * (1.0 - TIE) {
                            true
                        } else if ratio <= br * (1.0 + TIE) {
                            count > bc
                        } else {
                            false
                        }
                    }
                };
                if better {
                    best = Some((ratio, count, c, radius, i));
                }
            }
        }
        let (_, _, c, radius, prefix) =
            best.expect("a radius-h/2 ball always covers its own center");
        for &t in &orders[c][..prefix] {
            if !covered[t] {
                covered[t] = true;
                remaining -= 1;
            }
        }
        balls.push(Ball { center: c, radius });
    }
    // a point that is not itself a space point can still be missed by
    // the floor-radius ball around it only if the cap is below h/2,
    // which validate() rejects
    Covering { m, cap, balls }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }
    fn full(len: usize) -> Self {
        let mut b = Bits::new(len);
        for i in 0..len {
            b.set(i);
        }
        b
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn count_and(&self, other: &Bits) -> u32 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a & b).count_ones()).sum()
    }
    fn is_zero(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }
    fn minus(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & !b).collect())
    }
    fn is_subset_of(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let t = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + t)
            })
        })
    }
}

#[derive(Clone, Debug)]
struct Candidate {
    center: usize,
    radius: f64,
    cost: f64,
    mask: Bits,
    count: u32,
}

/// Shrink-to-fit candidate balls: for each center, one ball per realized
/// distance to a target point, capped at `cap`. One candidate is kept per
/// coverage pattern (the cheapest, then the smallest center and radius), and
/// candidates dominated by a cheaper superset are dropped when the list is
/// small enough to afford the quadratic scan.
fn candidates(space: &DiscreteSpace, targets: &[usize], m: f64, cap: Option<f64>) -> Vec<Candidate> {
    let half = space.resolution() / 2.0;
    let limit = cap.unwrap_or(f64::INFINITY);
    let k = targets.len();
    let mut by_mask: HashMap<Bits, Candidate> = HashMap::new();
    for c in 0..space.len() {
        let row = space.row(c);
        let mut ord: Vec<usize> = (0..k).collect();
        ord.sort_by(|&i, &j| row[targets[i]].total_cmp(&row[targets[j]]).then(i.cmp(&j)));
        let mut mask = Bits::new(k);
        let mut count = 0;
        let mut i = 0;
        while i < k {
            let d = row[targets[ord[i]]];
            let radius = d + half;
            if radius > limit {
                break;
            }
            let reach = radius * (1.0 + 1e-12) + 1e-15;
            while i < k && row[targets[ord[i]]] + half <= reach {
                mask.set(ord[i]);
                count += 1;
                i += 1;
            }
            let cand = Candidate {
                center: c,
                radius,
                cost: ball_cost(radius, m),
                mask: mask.clone(),
                count,
            };
            match by_mask.get(&cand.mask) {
                Some(old)
                    if (old.cost, old.center, old.radius) <= (cand.cost, cand.center, cand.radius) => {}
                _ => {
                    by_mask.insert(cand.mask.clone(), cand);
                }
            }
        }
    }
    let mut list: Vec<Candidate> = by_mask.into_values().collect();
    list.sort_by(|a, b| {
        (a.cost / a.count as f64)
            .total_cmp(&(b.cost / b.count as f64))
            .then(a.center.cmp(&b.center))
            .then(a.radius.total_cmp(&b.radius))
    });
    if list.len() <= 3000 {
        let keep: Vec<bool> = (0..list.len())
            .map(|i| {
                !list.iter().enumerate().any(|(j, o)| {
                    j != i
                        && o.cost <= list[i].cost
                        && list[i].mask.is_subset_of(&o.mask)
                        && (o.cost < list[i].cost || o.count > list[i].count || j < i)
                })
            })
            .collect();
        list = list
            .into_iter()
            .zip(keep)
            .filter_map(|(c, k)| k.then_some(c))
            .collect();
    }
    list
}

/// Additive lower bound: every uncovered point is charged the cheapest
/// per-point price of any candidate covering it.
fn price_bound(cands: &[Candidate], uncovered: &Bits, k: usize) -> f64 {
    let mut price = vec![f64::INFINITY; k];
    for c in cands {
        let n = c.mask.count_and(uncovered);
        if n == 0 {
            continue;
        }
        let p = c.cost / n as f64;
        for e in c.mask.ones() {
            if uncovered.get(e) && p < price[e] {
                price[e] = p;
            }
        }
    }
    uncovered.ones().map(|e| price[e]).sum()
}

struct Search<'a> {
    cands: &'a [Candidate],
    by_element: Vec<Vec<usize>>,
    k: usize,
    best_value: f64,
    best: Vec<usize>,
    nodes: u64,
    node_limit: u64,
    ties: bool,
}

impl Search<'_> {
    fn pruned(&self, bound: f64) -> bool {
        if self.ties {
            bound > self.best_value * (1.0 + TIE)
        } else {
            bound >= self.best_value * (1.0 - 1e-12)
        }
    }

    fn run(&mut self, uncovered: &Bits, chosen: &mut Vec<usize>, partial: f64) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            return Err(Error::BudgetExceeded {
                what: "branch-and-bound nodes".into(),
                limit: self.node_limit as usize,
            });
        }
        if uncovered.is_zero() {
            let value = canonical_sum(chosen.iter().map(|&i| self.cands[i].cost).collect());
            if value < self.best_value {
                self.best_value = value;
                self.best = chosen.clone();
            }
            return Ok(());
        }
        let lb = price_bound(self.cands, uncovered, self.k);
        if self.pruned(partial + lb) {
            return Ok(());
        }
        let pivot = uncovered
            .ones()
            .min_by_key(|&e| (self.by_element[e].len(), e))
            .expect("uncovered is nonempty");
        let branch = self.by_element[pivot].clone();
        for ci in branch {
            let cand = &self.cands[ci];
            if self.pruned(partial + cand.cost) {
                continue;
            }
            let next = uncovered.minus(&cand.mask);
            chosen.push(ci);
            self.run(&next, chosen, partial + cand.cost)?;
            chosen.pop();
        }
        Ok(())
    }
}

/// Exact content by branch-and-bound over shrink-to-fit candidate balls.
pub fn hc_exact(
    space: &DiscreteSpace,
    a: &Subset,
    m: f64,
    cap: Option<f64>,
    opts: ExactOptions,
) -> Result<ContentEstimate> {
    validate(space, m, cap)?;
    let targets = a.indices();
    let k = targets.len();
    if k == 0 {
        return Ok(ContentEstimate {
            m,
            cap,
            value: 0.0,
            side: Side::Exact,
            balls: Vec::new(),
            search: Some(SearchRecord {
                candidates: 0,
                nodes: 0,
                root_lower_bound: 0.0,
            }),
        });
    }
    if k > opts.budget {
        return Err(Error::BudgetExceeded {
            what: format!("exact content over {k} points"),
            limit: opts.budget,
        });
    }
    let cands = candidates(space, &targets, m, cap);
    let mut by_element = vec![Vec::new(); k];
    for (i, c) in cands.iter().enumerate() {
        for e in c.mask.ones() {
            by_element[e].push(i);
        }
    }
    let incumbent = greedy_covering(space, a, m, cap);
    let full = Bits::full(k);
    let root_lb = price_bound(&cands, &full, k);
    let mut search = Search {
        cands: &cands,
        by_element,
        k,
        best_value: incumbent.value(),
        best: Vec::new(),
        nodes: 0,
        node_limit: opts.node_limit,
        ties: k <= TIE_SEARCH_LIMIT,
    };
    search.run(&full, &mut Vec::new(), 0.0)?;
    let covering = if search.best.is_empty() {
        incumbent
    } else {
        let mut idx = search.best.clone();
        idx.sort_by(|&i, &j| {
            cands[i]
                .center
                .cmp(&cands[j].center)
                .then(cands[i].radius.total_cmp(&cands[j].radius))
        });
        Covering {
            m,
            cap,
            balls: idx
                .iter()
                .map(|&i| Ball {
                    center: cands[i].center,
                    radius: cands[i].radius,
                })
                .collect(),
        }
    };
    let record = SearchRecord {
        candidates: cands.len(),
        nodes: search.nodes,
        root_lower_bound: root_lb,
    };
    Ok(ContentEstimate::from_covering(covering, Side::Exact, Some(record)))
}

/// Certified lower bound (root price bound of the exact search).
pub fn hc_lower(space: &DiscreteSpace, a: &Subset, m: f64, cap: Option<f64>) -> Result<ContentEstimate> {
    validate(space, m, cap)?;
    let targets = a.indices();
    let k = targets.len();
    let value = if k == 0 {
        0.0
    } else {
        let cands = candidates(space, &targets, m, cap);
        price_bound(&cands, &Bits::full(k), k)
    };
    Ok(ContentEstimate {
        m,
        cap,
        value,
        side: Side::Lower,
        balls: Vec::new(),
        search: None,
    })
}

/// Exact when within budget, greedy otherwise.
pub fn hc_best(
    space: &DiscreteSpace,
    a: &Subset,
    m: f64,
    cap: Option<f64>,
    opts: ExactOptions,
) -> Result<ContentEstimate> {
    if a.len() <= opts.budget {
        match hc_exact(space, a, m, cap, opts) {
            Ok(e) => return Ok(e),
            Err(Error::BudgetExceeded { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    hc_greedy(space, a, m, cap)
}

/// Certified upper estimate: the cheaper of a greedy covering and the
/// restrictions of the supplied coverings to `a`.
pub fn hc_upper_with(
    space: &DiscreteSpace,
    a: &Subset,
    m: f64,
    cap: Option<f64>,
    hints: &[&Covering],
) -> Result<ContentEstimate> {
    let mut best = hc_greedy(space, a, m, cap)?;
    for hint in hints {
        if let Some(r) = hint.with_dimension(m).restrict(space, a) {
            let within_cap = cap.is_none_or(|b| r.balls.iter().all(|ball| ball.radius <= b));
            let v = r.value();
            if within_cap && v < best.value {
                best = ContentEstimate::from_covering(Covering { cap, ..r }, Side::Upper, None);
            }
        }
    }
    Ok(best)
}

/// `δ` used when the caller does not supply one.
pub fn default_delta(incumbent: f64) -> f64 {
    1e-6 * incumbent
}

/// Covering with value within `delta` of the content.
pub fn optimal_covering(
    space: &DiscreteSpace,
    w: &Subset,
    n: f64,
    delta: Option<f64>,
    opts: ExactOptions,
) -> Result<Covering> {
    if let Some(d) = delta {
        if !(d > 0.0) {
            return Err(Error::InvalidParameter(format!("delta must be > 0, got {d}")));
        }
    }
    if w.is_empty() {
        return Ok(Covering::empty(n, None));
    }
    if w.len() <= opts.budget {
        match hc_exact(space, w, n, None, opts) {
            Ok(e) => return Ok(e.covering()),
            Err(Error::BudgetExceeded { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    let upper = hc_greedy(space, w, n, None)?;
    let lower = hc_lower(space, w, n, None)?;
    let delta = delta.unwrap_or_else(|| default_delta(upper.value));
    let gap = upper.value - lower.value;
    if gap <= delta {
        Ok(upper.covering())
    } else {
        Err(Error::GapNotCertified {
            upper: upper.value,
            lower: lower.value,
            gap,
            delta,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShellWeight {
    pub band: usize,
    pub s: f64,
    pub weight: f64,
}

/// Index of the band `(r1 + j w, r1 + (j+1) w]` containing distance `d`.
fn band_from(d: f64, r1: f64, w: f64) -> Option<usize> {
    let t = (d - r1) / w;
    (t > BAND_TOL).then(|| (t - BAND_TOL).ceil() as usize - 1)
}

/// Result of the coarea shell selection.
///
/// Band `j` holds the points at distance in `(r1 + j w, r1 + (j+1) w]`
/// from the center.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoareaSelection {
    /// Nominal radius `r1 + (band + 1/2) w`.
    pub s: f64,
    pub band: usize,
    /// Inner radius of the first band.
    pub r1: f64,
    pub shell: Subset,
    /// `Σ_{i ∈ I_s} r_i^{m-1}`.
    pub weight: f64,
    /// `Σ_i r_i^{m-1} (2 r_i + w) / (K w)`.
    pub certified_bound: f64,
    /// Indices into `covering.balls` meeting the chosen shell.
    pub touched: Vec<usize>,
    /// Mean shell weight over the candidate bands.
    pub mean_weight: f64,
    /// Width of one band.
    pub band_width: f64,
    /// `K w`, the total width of the candidate bands.
    pub effective_width: f64,
    pub profile: Vec<ShellWeight>,
    pub covering: Covering,
}

impl CoareaSelection {
    /// Band containing distance `d`; `None` at or inside `r1`.
    pub fn band_index(&self, d: f64) -> Option<usize> {
        band_from(d, self.r1, self.band_width)
    }

    /// Whether a point at distance `d` lies strictly inside the chosen band.
    pub fn is_inner(&self, d: f64) -> bool {
        self.band_index(d).is_none_or(|k| k < self.band)
    }

    /// `Σ_i r_i^{m-1} T_i / K` with `T_i` the number of bands ball `i`
    /// meets; equals `mean_weight` up to rounding.
    pub fn averaged_weight(&self, space: &DiscreteSpace, y: &Subset, x: usize) -> f64 {
        let bands = self.profile.len();
        let m = self.covering.m;
        let mut total = 0.0;
        for ball in &self.covering.balls {
            let mut bands: Vec<usize> = y
                .iter()
                .filter(|&p| ball.covers(space, p))
                .filter_map(|p| self.band_index(space.distance(x, p)))
                .filter(|&k| k < bands)
                .collect();
            bands.sort_unstable();
            bands.dedup();
            total += ball_cost(ball.radius, m - 1.0) * bands.len() as f64;
        }
        total / self.profile.len() as f64
    }
}

/// Choose a shell around `x` between `r1` and `r2` whose weight under a
/// covering of `Annulus(x, r1, r2) ∩ Y` is minimal.
///
/// Candidate shells are the `K = floor((r2 - r1) / h)` bands
/// `(r1 + j h, r1 + (j+1) h]`. Ties go to the innermost band.
#[allow(clippy::too_many_arguments)]
pub fn select_shell(
    space: &DiscreteSpace,
    y: &Subset,
    x: usize,
    r1: f64,
    r2: f64,
    m: f64,
    covering: Option<&Covering>,
    opts: ExactOptions,
) -> Result<CoareaSelection> {
    select_shell_banded(space, y, x, r1, r2, m, covering, space.resolution(), opts)
}

/// [`select_shell`] with bands of width `width >= h`.
#[allow(clippy::too_many_arguments)]
pub fn select_shell_banded(
    space: &DiscreteSpace,
    y: &Subset,
    x: usize,
    r1: f64,
    r2: f64,
    m: f64,
    covering: Option<&Covering>,
    width: f64,
    opts: ExactOptions,
) -> Result<CoareaSelection> {
    space.check_point(x)?;
    if !(width >= space.resolution()) {
        return Err(Error::InvalidParameter(format!("band width {width}")));
    }
    let h = width;
    if !(r1 >= 0.0 && r1 < r2) {
        return Err(Error::InvalidParameter(format!("need 0 <= r1 < r2, got ({r1}, {r2})")));
    }
    if !(m.is_finite() && m > 0.0) {
        return Err(Error::InvalidParameter(format!("content dimension {m}")));
    }
    let bands = ((r2 - r1) / h + BAND_TOL).floor() as usize;
    if bands == 0 {
        return Err(Error::IntervalTooNarrow { r1, r2, h });
    }
    let target = space.annulus(x, r1, r2)?.intersection(y);
    let covering = match covering {
        Some(c) => {
            if !c.covers(space, &target) {
                return Err(Error::PreconditionFailed(
                    "covering does not cover the annulus".into(),
                ));
            }
            c.clone()
        }
        None => {
            let w = optimal_covering(space, &target, m, None, opts)
                .or_else(|_| hc_greedy(space, &target, m, None).map(|e| e.covering()))?;
            w.with_dimension(m)
        }
    };
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); bands];
    for p in target.iter() {
        if let Some(k) = band_from(space.distance(x, p), r1, h).filter(|&k| k < bands) {
            members[k].push(p);
        }
    }
    let costs: Vec<f64> = covering
        .balls
        .iter()
        .map(|b| ball_cost(b.radius, m - 1.0))
        .collect();
    let mut profile = Vec::with_capacity(bands);
    let mut touched_per_band = Vec::with_capacity(bands);
    for (j, pts) in members.iter().enumerate() {
        let touched: Vec<usize> = (0..covering.balls.len())
            .filter(|&i| pts.iter().any(|&p| covering.balls[i].covers(space, p)))
            .collect();
        let weight = canonical_sum(touched.iter().map(|&i| costs[i]).collect());
        profile.push(ShellWeight {
            band: j,
            s: r1 + (j as f64 + 0.5) * h,
            weight,
        });
        touched_per_band.push(touched);
    }
    let (j, _) = profile
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.weight.total_cmp(&b.1.weight).then(a.0.cmp(&b.0)))
        .expect("at least one band");
    let effective_width = bands as f64 * h;
    let certified_bound = canonical_sum(
        covering
            .balls
            .iter()
            .zip(&costs)
            .map(|(b, c)| c * (2.0 * b.radius + h))
            .collect(),
    ) / effective_width;
    let mean_weight = profile.iter().map(|p| p.weight).sum::<f64>() / bands as f64;
    let shell = Subset::from_indices(space.len(), members[j].iter().copied())?;
    Ok(CoareaSelection {
        s: profile[j].s,
        band: profile[j].band,
        r1,
        shell,
        weight: profile[j].weight,
        certified_bound,
        touched: touched_per_band[j].clone(),
        mean_weight,
        band_width: h,
        effective_width,
        profile,
        covering,
    })
}
