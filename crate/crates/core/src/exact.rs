//! Exact capacities: single channels, uniform sunflowers, two intersecting
//! sets and paths, plus the dispatcher that reduces and routes a system.
//!
//! All values are capacities in `[0, 1]`, i.e. rates normalised by `log q`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bounds::{bounds_cycle, bounds_general};
use crate::channel::Alphabet;
use crate::error::{Error, Result};
use crate::special::{entropy_unchecked as h, log_q};
use crate::system::{
    classify_irreducible, cover_system, edge_clique_cover, pairs_graph, remove_dominated,
    separable_split, ChannelSystem, SystemClass, MAX_COVER_ALPHABET,
};

/// Exact value or a lower/upper pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Capacity {
    Exact { value: f64 },
    Bounds { lower: f64, upper: f64 },
}

impl Capacity {
    pub fn lower(&self) -> f64 {
        match *self {
            Capacity::Exact { value } => value,
            Capacity::Bounds { lower, .. } => lower,
        }
    }

    pub fn upper(&self) -> f64 {
        match *self {
            Capacity::Exact { value } => value,
            Capacity::Bounds { upper, .. } => upper,
        }
    }

    pub fn exact(&self) -> Option<f64> {
        match *self {
            Capacity::Exact { value } => Some(value),
            Capacity::Bounds { .. } => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Capacity::Exact { .. })
    }
}

/// Which result produced a capacity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    SingleChannel,
    Clique,
    Sunflower,
    TwoSets,
    Path,
    Separable,
    CycleBounds,
    GeneralBounds,
}

/// Optimizer internals and parameters behind a result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    SingleChannel {
        size: usize,
    },
    Sunflower {
        k: usize,
        p: usize,
        t: usize,
        y_star: f64,
    },
    TwoSets {
        k: usize,
        p1: usize,
        p2: usize,
        x1_star: f64,
        x2_star: f64,
    },
    Path {
        t: usize,
        m_star: f64,
        r_star: Vec<f64>,
        alpha_star: Vec<f64>,
    },
    Separable {
        components: Vec<CapacityResult>,
    },
    CycleBounds {
        t: usize,
        /// Path of length `t - 1` giving the lower bound.
        lower_path: PathSolution,
        /// The upper bound is `log_q(upper_base)`.
        upper_base: f64,
    },
    GeneralBounds {
        omega: usize,
        t: usize,
    },
}

/// One step of the reduction chain applied before a formula was used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum Reduction {
    RemovedDominated { removed: usize },
    SeparableSplit { components: usize },
    /// Replaced by the system read off a minimum edge-clique cover of the
    /// pairs graph; the output count is unchanged.
    PairsGraphCover { cover: ChannelSystem },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityResult {
    #[serde(flatten)]
    pub capacity: Capacity,
    pub method: Method,
    pub witness: Witness,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reductions: Vec<Reduction>,
}

impl CapacityResult {
    pub(crate) fn exact(value: f64, method: Method, witness: Witness) -> Self {
        Self {
            capacity: Capacity::Exact { value },
            method,
            witness,
            reductions: Vec::new(),
        }
    }

    pub(crate) fn bounds(lower: f64, upper: f64, method: Method, witness: Witness) -> Self {
        Self {
            capacity: Capacity::Bounds { lower, upper },
            method,
            witness,
            reductions: Vec::new(),
        }
    }
}

fn require_positive(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        Err(Error::InvalidParameter(format!("{name} must be at least 1")))
    } else {
        Ok(())
    }
}

fn require_fits(needed: usize, q: usize) -> Result<()> {
    Alphabet::new(q)?;
    if needed > q {
        Err(Error::Infeasible { needed, q })
    } else {
        Ok(())
    }
}

/// `log_q |I|` for a single channel.
pub fn capacity_single(size: usize, q: usize) -> Result<CapacityResult> {
    require_positive("channel size", size)?;
    require_fits(size, q)?;
    Ok(CapacityResult::exact(
        log_q(size as f64, q),
        Method::SingleChannel,
        Witness::SingleChannel { size },
    ))
}

/// Rate function of a `(k, p, t)`-sunflower after symmetrisation, as a
/// function of the total petal fraction `y ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SunflowerObjective {
    pub k: usize,
    pub p: usize,
    pub t: usize,
    pub q: usize,
}

impl SunflowerObjective {
    pub fn value(&self, y: f64) -> f64 {
        let (k, p, t, q) = (self.k as f64, self.p as f64, self.t as f64, self.q);
        let spread = t - (t - 1.0) * y;
        (1.0 - y) * log_q(k, q) + y * log_q(p, q) + spread * h(y / spread) * log_q(2.0, q)
    }

    /// `g'(y) = log_q( p t (1-y)^t / (k y (1 - (t-1) y / t)^(t-1)) )`, in log form.
    pub fn slope(&self, y: f64) -> f64 {
        let (k, p, t) = (self.k as f64, self.p as f64, self.t as f64);
        let ln = (p * t).ln() + t * (1.0 - y).ln()
            - k.ln()
            - y.ln()
            - (t - 1.0) * (1.0 - (t - 1.0) * y / t).ln();
        ln / (self.q as f64).ln()
    }

    pub fn curvature(&self, y: f64) -> f64 {
        let t = self.t as f64;
        -t / ((self.q as f64).ln() * y * (1.0 - y) * (t - (t - 1.0) * y))
    }

    /// Root of the slope in `(0, 1)` by bisection.
    pub fn stationary_point(&self) -> f64 {
        let (mut lo, mut hi) = (1e-15, 1.0 - 1e-15);
        for _ in 0..200 {
            if hi - lo <= 1e-14 {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if self.slope(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Capacity of a `(k, p, t)`-sunflower: `g(y*)` at the unique stationary point.
pub fn capacity_sunflower(k: usize, p: usize, t: usize, q: usize) -> Result<CapacityResult> {
    require_positive("k", k)?;
    require_positive("p", p)?;
    require_positive("t", t)?;
    require_fits(k + t * p, q)?;
    let objective = SunflowerObjective { k, p, t, q };
    let y_star = objective.stationary_point();
    Ok(CapacityResult::exact(
        objective.value(y_star),
        Method::Sunflower,
        Witness::Sunflower { k, p, t, y_star },
    ))
}

/// Rate function `M(x1, x2)` of two intersecting channels with
/// `|I1 ∩ I2| = k`, `|I1 \ I2| = p1`, `|I2 \ I1| = p2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSetsObjective {
    pub k: usize,
    pub p1: usize,
    pub p2: usize,
    pub q: usize,
}

impl TwoSetsObjective {
    pub fn value(&self, x1: f64, x2: f64) -> f64 {
        let q = self.q;
        let l2 = log_q(2.0, q);
        (1.0 - x1 - x2) * log_q(self.k as f64, q)
            + x1 * log_q(self.p1 as f64, q)
            + x2 * log_q(self.p2 as f64, q)
            + (1.0 - x2) * h(x1 / (1.0 - x2)) * l2
            + (1.0 - x1) * h(x2 / (1.0 - x1)) * l2
    }

    pub fn gradient(&self, x1: f64, x2: f64) -> [f64; 2] {
        let q = self.q;
        let free = (1.0 - x1 - x2).powi(2);
        let lk = log_q(self.k as f64, q);
        [
            log_q(free / (x1 * (1.0 - x1)), q) - lk + log_q(self.p1 as f64, q),
            log_q(free / (x2 * (1.0 - x2)), q) - lk + log_q(self.p2 as f64, q),
        ]
    }

    /// Second derivatives of `M`. The scale is `1 / ln q`, the derivative
    /// of [`Self::gradient`].
    pub fn hessian(&self, x1: f64, x2: f64) -> [[f64; 2]; 2] {
        let scale = 1.0 / (self.q as f64).ln();
        let rest = 1.0 - x1 - x2;
        let num = x1 + x2 - 2.0 * x1 * x2 - 1.0;
        let cross = -2.0 / rest * scale;
        [
            [num / (x1 * (1.0 - x1) * rest) * scale, cross],
            [cross, num / (x2 * (1.0 - x2) * rest) * scale],
        ]
    }

    /// Closed-form maximiser.
    pub fn optimum(&self) -> (f64, f64) {
        let (k, p1, p2) = (self.k as f64, self.p1 as f64, self.p2 as f64);
        let root = ((k + p1 + p2).powi(2) - 4.0 * p1 * p2).sqrt();
        (
            0.5 - (k + p2 - p1) / (2.0 * root),
            0.5 - (k + p1 - p2) / (2.0 * root),
        )
    }
}

pub fn capacity_two_sets(k: usize, p1: usize, p2: usize, q: usize) -> Result<CapacityResult> {
    require_positive("k", k)?;
    require_positive("p1", p1)?;
    require_positive("p2", p2)?;
    require_fits(k + p1 + p2, q)?;
    let objective = TwoSetsObjective { k, p1, p2, q };
    let (x1_star, x2_star) = objective.optimum();
    Ok(CapacityResult::exact(
        objective.value(x1_star, x2_star),
        Method::TwoSets,
        Witness::TwoSets {
            k,
            p1,
            p2,
            x1_star,
            x2_star,
        },
    ))
}

/// The optimal letter distribution on a path of length `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSolution {
    pub t: usize,
    pub m_star: f64,
    /// Consecutive ratios `α_{i+1} / α_i`, `i = 0..t`.
    pub r_star: Vec<f64>,
    /// Letter frequencies `α_0..=α_t`, summing to one.
    pub alpha_star: Vec<f64>,
}

/// `r_0 = m - 1`, `r_i = ((m-1) r_{i-1} - 1) / (r_{i-1} + 1)`; returns `r_0..r_{count-1}`.
pub fn path_ratios(m: f64, count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    let mut r = m - 1.0;
    for i in 0..count {
        if i > 0 {
            r = ((m - 1.0) * r - 1.0) / (r + 1.0);
        }
        out.push(r);
    }
    out
}

impl PathSolution {
    pub fn new(t: usize) -> Result<Self> {
        if t < 2 {
            return Err(Error::InvalidParameter(format!(
                "path length must be at least 2, got {t}"
            )));
        }
        let m_star = 2.0 + 2.0 * (2.0 * PI / (t as f64 + 3.0)).cos();
        let r_star = path_ratios(m_star, t);
        let mut prefix = Vec::with_capacity(t + 1);
        let mut acc = 1.0;
        prefix.push(acc);
        for r in &r_star {
            acc *= r;
            prefix.push(acc);
        }
        let total: f64 = prefix.iter().sum();
        let alpha_star = prefix.into_iter().map(|x| x / total).collect();
        Ok(Self {
            t,
            m_star,
            r_star,
            alpha_star,
        })
    }
}

/// `G(α) = Σ_{i=1..t} (α_{i-1} + α_i) H(α_i / (α_{i-1} + α_i)) log_q 2`.
pub fn path_objective(alpha: &[f64], q: usize) -> f64 {
    alpha
        .windows(2)
        .map(|w| {
            let s = w[0] + w[1];
            if s > 0.0 {
                s * h(w[1] / s)
            } else {
                0.0
            }
        })
        .sum::<f64>()
        * log_q(2.0, q)
}

/// Partial derivatives of [`path_objective`] with respect to each `α_i`.
pub fn path_gradient(alpha: &[f64], q: usize) -> Vec<f64> {
    let n = alpha.len();
    (0..n)
        .map(|i| {
            let mut d = 0.0;
            if i > 0 {
                d += log_q((alpha[i - 1] + alpha[i]) / alpha[i], q);
            }
            if i + 1 < n {
                d += log_q((alpha[i + 1] + alpha[i]) / alpha[i], q);
            }
            d
        })
        .collect()
}

/// Capacity of a path of length `t >= 2` on `t + 1` distinct letters.
pub fn capacity_path(t: usize, q: usize) -> Result<CapacityResult> {
    let solution = PathSolution::new(t)?;
    require_fits(t + 1, q)?;
    let value = path_objective(&solution.alpha_star, q);
    Ok(CapacityResult::exact(
        value,
        Method::Path,
        Witness::Path {
            t,
            m_star: solution.m_star,
            r_star: solution.r_star,
            alpha_star: solution.alpha_star,
        },
    ))
}

/// Capacity of an arbitrary system: exact where a formula applies,
/// bounds otherwise.
pub fn capacity(system: &ChannelSystem) -> CapacityResult {
    let reduced = remove_dominated(system);
    let mut steps = Vec::new();
    if reduced.len() != system.len() {
        steps.push(Reduction::RemovedDominated {
            removed: system.len() - reduced.len(),
        });
    }
    let parts = separable_split(&reduced);
    let mut result = if parts.len() > 1 {
        steps.push(Reduction::SeparableSplit {
            components: parts.len(),
        });
        combine_separable(parts.iter().map(capacity_irreducible).collect())
    } else {
        capacity_irreducible(&reduced)
    };
    steps.append(&mut result.reductions);
    result.reductions = steps;
    result
}

fn combine_separable(components: Vec<CapacityResult>) -> CapacityResult {
    let lower = components
        .iter()
        .map(|c| c.capacity.lower())
        .fold(f64::NEG_INFINITY, f64::max);
    let upper = components
        .iter()
        .map(|c| c.capacity.upper())
        .fold(f64::NEG_INFINITY, f64::max);
    let witness = Witness::Separable {
        components: components.clone(),
    };
    if components.iter().all(|c| c.capacity.is_exact()) {
        CapacityResult::exact(lower, Method::Separable, witness)
    } else {
        CapacityResult::bounds(lower, upper, Method::Separable, witness)
    }
}

const FEASIBLE: &str = "classified parameters fit the alphabet";

fn capacity_irreducible(system: &ChannelSystem) -> CapacityResult {
    let q = system.q();
    match classify_irreducible(system) {
        SystemClass::SingleChannel { size } => capacity_single(size, q).expect(FEASIBLE),
        SystemClass::FullClique { size } => {
            let mut r = capacity_single(size, q).expect(FEASIBLE);
            r.method = Method::Clique;
            r
        }
        SystemClass::Sunflower { k, p, t } => capacity_sunflower(k, p, t, q).expect(FEASIBLE),
        SystemClass::TwoSets { k, p1, p2 } => capacity_two_sets(k, p1, p2, q).expect(FEASIBLE),
        SystemClass::Path { t } => capacity_path(t, q).expect(FEASIBLE),
        SystemClass::Cycle { t } => bounds_cycle(t, q).expect(FEASIBLE),
        SystemClass::General => {
            if let Some(r) = capacity_via_cover(system) {
                return r;
            }
            bounds_general(system).expect("irreducible system with t >= 2")
        }
        SystemClass::Separable { .. } | SystemClass::Reducible { .. } => {
            unreachable!("input is irreducible")
        }
    }
}

/// Re-analyses a general system through a minimum edge-clique cover of its
/// pairs graph, which has the same output count for every `n`.
fn capacity_via_cover(system: &ChannelSystem) -> Option<CapacityResult> {
    if system.q() > MAX_COVER_ALPHABET {
        return None;
    }
    let cover = edge_clique_cover(&pairs_graph(system)).ok()?;
    let cover = cover_system(system.alphabet(), &cover).ok()?;
    if classify_irreducible(&cover) == SystemClass::General {
        return None;
    }
    let mut r = capacity_irreducible(&cover);
    r.reductions.insert(0, Reduction::PairsGraphCover { cover });
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn value(r: Result<CapacityResult>) -> f64 {
        r.unwrap().capacity.exact().unwrap()
    }

    fn sys(q: usize, chans: &[&[usize]]) -> ChannelSystem {
        ChannelSystem::from_lists(q, chans).unwrap()
    }

    #[test]
    fn single_channel() {
        assert_eq!(value(capacity_single(4, 4)), 1.0);
        assert_eq!(value(capacity_single(1, 4)), 0.0);
        assert!((value(capacity_single(2, 4)) - 0.5).abs() < 1e-15);
        assert!(capacity_single(0, 4).is_err());
        assert!(matches!(capacity_single(5, 4), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn sunflower_table_values() {
        assert!((value(capacity_sunflower(2, 1, 2, 4)) - 0.94998).abs() < 5e-6);
        assert!((value(capacity_sunflower(1, 1, 2, 3)) - 0.87604).abs() < 5e-6);
        // Closed-form value of the (1,1,3)-sunflower over q=4.
        assert!((value(capacity_sunflower(1, 1, 3, 4)) - 0.827_194_634_6).abs() < 1e-9);
    }

    #[test]
    fn sunflower_errors() {
        assert!(matches!(capacity_sunflower(2, 1, 3, 4), Err(Error::Infeasible { .. })));
        assert!(capacity_sunflower(0, 1, 2, 4).is_err());
        assert!(capacity_sunflower(1, 0, 2, 4).is_err());
        assert!(capacity_sunflower(1, 1, 0, 4).is_err());
    }

    #[test]
    fn one_petal_sunflower_is_single_channel() {
        for (k, p) in [(1, 1), (2, 3), (4, 1)] {
            let a = value(capacity_sunflower(k, p, 1, 8));
            let b = value(capacity_single(k + p, 8));
            assert!((a - b).abs() < 1e-10, "k={k} p={p}: {a} vs {b}");
        }
    }

    #[test]
    fn two_sets_values() {
        assert!((value(capacity_two_sets(2, 1, 1, 4)) - 0.94998).abs() < 5e-6);
        assert!((value(capacity_two_sets(1, 1, 2, 4)) - 0.88578).abs() < 5e-6);
        let r = capacity_two_sets(1, 1, 2, 4).unwrap();
        match r.witness {
            Witness::TwoSets { x2_star, .. } => assert!((x2_star - 0.5).abs() < 1e-15),
            w => panic!("unexpected witness {w:?}"),
        }
        assert!(capacity_two_sets(1, 1, 3, 4).is_err());
        assert!(capacity_two_sets(0, 1, 1, 4).is_err());
    }

    #[test]
    fn path_three_witness() {
        let r = capacity_path(3, 4).unwrap();
        assert!((r.capacity.exact().unwrap() - 0.79248).abs() < 5e-6);
        let Witness::Path {
            m_star,
            r_star,
            alpha_star,
            ..
        } = r.witness
        else {
            panic!("expected path witness");
        };
        assert!((m_star - 3.0).abs() < 1e-12);
        for (got, want) in r_star.iter().zip([2.0, 1.0, 0.5]) {
            assert!((got - want).abs() < 1e-12);
        }
        for (got, want) in alpha_star.iter().zip([1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!((r_star[2] - 1.0 / (m_star - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn path_two_matches_sunflower() {
        let a = value(capacity_path(2, 3));
        let b = value(capacity_sunflower(1, 1, 2, 3));
        assert!((a - 0.87604).abs() < 5e-6);
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn path_errors() {
        assert!(capacity_path(1, 4).is_err());
        assert!(matches!(capacity_path(4, 4), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn dispatcher_examples() {
        let r = capacity(&sys(4, &[&[1, 2], &[3, 4]]));
        assert_eq!(r.method, Method::Separable);
        assert!((r.capacity.exact().unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(r.reductions, vec![Reduction::SeparableSplit { components: 2 }]);

        let r = capacity(&sys(4, &[&[1, 2, 3], &[2, 3, 4]]));
        assert!((r.capacity.exact().unwrap() - 0.94998).abs() < 5e-6);

        let r = capacity(&sys(4, &[&[1, 2], &[2, 3], &[3, 4], &[4, 1]]));
        assert_eq!(r.method, Method::CycleBounds);
        assert!((r.capacity.lower() - 0.79248).abs() < 5e-6);
        assert!((r.capacity.upper() - 0.94998).abs() < 5e-6);
    }

    #[test]
    fn dispatcher_reductions() {
        let r = capacity(&sys(3, &[&[1, 2], &[1, 2, 3]]));
        assert_eq!(r.capacity, Capacity::Exact { value: 1.0 });
        assert_eq!(r.reductions, vec![Reduction::RemovedDominated { removed: 1 }]);

        let r = capacity(&sys(3, &[&[1, 2], &[2, 3], &[1, 3]]));
        assert_eq!(r.method, Method::Clique);
        assert_eq!(r.capacity, Capacity::Exact { value: 1.0 });

        // Triangle plus pendant edge: its cover ({1,2,3},{3,4}) is two sets.
        let r = capacity(&sys(4, &[&[1, 2], &[2, 3], &[1, 3], &[3, 4]]));
        assert_eq!(r.method, Method::TwoSets);
        assert!((r.capacity.exact().unwrap() - 0.88578).abs() < 5e-6);
        assert!(matches!(r.reductions[0], Reduction::PairsGraphCover { .. }));
    }

    #[test]
    fn separable_with_bounds_component() {
        // A 4-cycle next to a single edge over q = 6.
        let r = capacity(&sys(6, &[&[1, 2], &[2, 3], &[3, 4], &[4, 1], &[5, 6]]));
        assert_eq!(r.method, Method::Separable);
        let cycle = bounds_cycle(4, 6).unwrap().capacity;
        assert_eq!(r.capacity, Capacity::Bounds { lower: cycle.lower(), upper: cycle.upper() });
    }

    #[test]
    fn general_falls_back_to_bounds() {
        // A 4-cycle with a chord-free tail: no formula applies.
        let s = sys(5, &[&[1, 2], &[2, 3], &[3, 4], &[4, 1], &[4, 5]]);
        let r = capacity(&s);
        assert_eq!(r.method, Method::GeneralBounds);
        assert_eq!(r.capacity.lower(), log_q(2.0, 5));
        assert_eq!(r.capacity.upper(), 1.0);
    }
}
