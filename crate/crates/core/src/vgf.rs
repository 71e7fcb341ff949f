//! The value generating function `f_k` and everything computed from it: the
//! value CDF `alpha(k)`, positivity, essential supremum, critical activation,
//! per-player conditional probabilities and n-ary asymptotics.

use alloc::{format, vec, vec::Vec};

use crate::error::{Error, Result};
use crate::model::{Block, BlockSumMode, CapacityLaw, OffspringLaw, Player, PrimitiveDistribution};

/// `G_i(k, x) = E(1{player = i, capacity >= k} x^offspring)`.
pub fn gen_fun(p: &PrimitiveDistribution, i: Player, k: f64, x: f64) -> f64 {
    p.block_sum(i, k, BlockSumMode::Leaf) + p.block_sum(i, k, BlockSumMode::InternalPgf(x))
}

/// The value generating function `f_k(x)`.
pub fn vgf(p: &PrimitiveDistribution, k: f64, x: f64) -> f64 {
    let gi = |y| gen_fun(p, Player::I, k, y);
    1.0 - gi(0.0) - gi(1.0) + gi(x) - gen_fun(p, Player::II, k, 1.0 - x)
}

/// `d(k)`: the left derivative of `f_k` at 1. Infinite means propagate as
/// `f64::INFINITY`.
pub fn d_param(p: &PrimitiveDistribution, k: f64) -> f64 {
    p.block_sum(Player::I, k, BlockSumMode::InternalMean)
        + p.block_sum(Player::II, k, BlockSumMode::InternalAt1)
}

/// `[alpha_0, ..., alpha_t]` with `alpha_j = f_k^{j+1}(0)`, the CDF at `k` of
/// the value truncated at depth `j`.
pub fn alpha_iterates(p: &PrimitiveDistribution, k: f64, t: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(t + 1);
    let mut x = vgf(p, k, 0.0);
    out.push(x);
    for _ in 0..t {
        let next = vgf(p, k, x);
        debug_assert!(next >= x - 1e-12, "iterates must be nondecreasing");
        x = next;
        out.push(x);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixedPointOptions {
    pub step_tol: f64,
    pub resid_tol: f64,
    pub max_iter: usize,
}

impl Default for FixedPointOptions {
    fn default() -> Self {
        FixedPointOptions {
            step_tol: 1e-13,
            resid_tol: 1e-11,
            max_iter: 200_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixedPointMethod {
    ShortcutOne,
    Iteration,
    IterationPlusBisection,
}

impl FixedPointMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            FixedPointMethod::ShortcutOne => "shortcut_one",
            FixedPointMethod::Iteration => "iteration",
            FixedPointMethod::IterationPlusBisection => "iteration_plus_bisection",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixedPointResult {
    pub alpha: f64,
    pub iterations: usize,
    pub residual: f64,
    pub method: FixedPointMethod,
    pub bracket: Option<(f64, f64)>,
}

impl FixedPointResult {
    pub fn beta(&self) -> f64 {
        1.0 - self.alpha
    }
}

/// `alpha(k) = P(v < k)` as the smallest fixed point of `f_k`.
pub fn smallest_fixed_point(
    p: &PrimitiveDistribution,
    k: f64,
    opts: FixedPointOptions,
) -> Result<FixedPointResult> {
    if !positivity(p, k).beta_positive {
        return Ok(FixedPointResult {
            alpha: 1.0,
            iterations: 0,
            residual: 0.0,
            method: FixedPointMethod::ShortcutOne,
            bracket: None,
        });
    }
    let f = |x: f64| vgf(p, k, x);
    let g = |x: f64| f(x) - x;

    let mut x = 0.0;
    let mut step = f64::INFINITY;
    let mut prev_step = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        let next = f(x).max(x);
        prev_step = step;
        step = next - x;
        x = next;
        iterations += 1;
        if step < opts.step_tol {
            converged = true;
            break;
        }
        // Linear rate near 1: iteration would crawl, hand over to bisection.
        if iterations >= 64 && step / prev_step > 0.99 {
            break;
        }
    }
    let rate = if prev_step.is_finite() && prev_step > 0.0 {
        (step / prev_step).clamp(0.0, 0.999_999)
    } else {
        0.0
    };
    let err_est = step * rate / (1.0 - rate);
    let residual = g(x).abs();
    if converged && residual <= opts.resid_tol && err_est <= 1e-12 {
        return Ok(FixedPointResult {
            alpha: x,
            iterations,
            residual,
            method: FixedPointMethod::Iteration,
            bracket: None,
        });
    }

    // g >= 0 left of the smallest fixed point. Probe rightwards with doubling
    // steps from x and with halving gaps towards 1 (the negative stretch can be
    // a thin layer below 1), then bisect the first sign change.
    let top = 1.0 - 1e-15;
    let delta = err_est.max(step).max(1e-14);
    let mut probes: Vec<f64> = Vec::with_capacity(128);
    for j in 0..64 {
        let up = x + delta * ((1u64 << j) - 1) as f64;
        if up < top {
            probes.push(up);
        }
        let near_one = 1.0 - (1.0 - x) * crate::num::powu(0.5, j + 1);
        if near_one > x && near_one < top {
            probes.push(near_one);
        }
    }
    probes.push(top);
    probes.sort_by(f64::total_cmp);
    let mut lo = x;
    let mut hi = f64::NAN;
    for &c in &probes {
        if g(c) < 0.0 {
            hi = c;
            break;
        }
        lo = c;
    }
    if hi.is_nan() {
        return Err(Error::NoConvergence {
            max_iter: opts.max_iter,
            bracket: (lo, top),
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let (glo, ghi) = (g(lo).abs(), g(hi).abs());
    let alpha = if glo <= ghi { lo } else { hi };
    Ok(FixedPointResult {
        alpha,
        iterations,
        residual: glo.min(ghi),
        method: FixedPointMethod::IterationPlusBisection,
        bracket: Some((lo, hi)),
    })
}

/// `alpha(k)` with default tolerances.
pub fn alpha(p: &PrimitiveDistribution, k: f64) -> Result<f64> {
    smallest_fixed_point(p, k, FixedPointOptions::default()).map(|r| r.alpha)
}

/// The three quantities deciding whether `P(v >= k) > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PositivityReport {
    pub beta_positive: bool,
    /// `p(capacity < k)`.
    pub cond_gamma_lt_k: f64,
    /// `p(capacity >= k, offspring = 0)`.
    pub cond_leaf_mass: f64,
    pub d_of_k: f64,
}

pub fn positivity(p: &PrimitiveDistribution, k: f64) -> PositivityReport {
    let cond_gamma_lt_k = p.prob_capacity_below(k);
    let cond_leaf_mass = p.leaf_mass_at_least(k);
    let d_of_k = d_param(p, k);
    let beta_zero = cond_gamma_lt_k > 0.0 && cond_leaf_mass == 0.0 && d_of_k <= 1.0;
    PositivityReport {
        beta_positive: !beta_zero,
        cond_gamma_lt_k,
        cond_leaf_mass,
        d_of_k,
    }
}

/// Essential supremum of the value: `max(k1, k2, k3)` with `k1` the essential
/// infimum of the capacity, `k2` the essential supremum of leaf capacities and
/// `k3 = inf{k : d(k) <= 1}`.
pub fn essential_supremum(p: &PrimitiveDistribution, tol: f64) -> f64 {
    let k1 = p.capacity_essinf();
    let k2 = p.capacity_esssup_on_leaves();
    let k3 = if d_param(p, 0.0) <= 1.0 {
        0.0
    } else {
        let mut lo = 0.0;
        let mut hi = p.capacity_esssup() + 1.0;
        for _ in 0..200 {
            if hi - lo <= tol * 1e-3 {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if d_param(p, mid) <= 1.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        // d is left-continuous in k, so the infimum is the right end of the
        // last bracket.
        hi
    };
    k1.max(k2).max(k3)
}

/// Player I's `k`-critical activation probability for the activation-independent
/// family whose `(capacity, offspring)` marginal is that of `marginal`.
pub fn critical_activation(marginal: &PrimitiveDistribution, k: f64) -> f64 {
    let mean = marginal.block_sum(Player::I, k, BlockSumMode::InternalMean)
        + marginal.block_sum(Player::II, k, BlockSumMode::InternalMean);
    let at1 = marginal.block_sum(Player::I, k, BlockSumMode::InternalAt1)
        + marginal.block_sum(Player::II, k, BlockSumMode::InternalAt1);
    if mean == f64::INFINITY {
        0.0
    } else if mean > 1.0 {
        (1.0 - at1) / (mean - at1)
    } else {
        1.0
    }
}

/// `P(v < k | root player = i)` and complements; `None` where `q_i = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConditionalSplit {
    pub alpha_i: Option<f64>,
    pub alpha_ii: Option<f64>,
    pub beta_i: Option<f64>,
    pub beta_ii: Option<f64>,
}

impl ConditionalSplit {
    pub fn beta_of(&self, player: Player) -> Result<f64> {
        match player {
            Player::I => self.beta_i,
            Player::II => self.beta_ii,
        }
        .ok_or(Error::UndefinedConditional(player))
    }

    pub fn alpha_of(&self, player: Player) -> Result<f64> {
        self.beta_of(player).map(|b| 1.0 - b)
    }
}

pub fn conditional_split(p: &PrimitiveDistribution, k: f64, alpha: f64) -> ConditionalSplit {
    let beta = 1.0 - alpha;
    let (qi, qii) = (p.activation(Player::I), p.activation(Player::II));
    let gi = |x| gen_fun(p, Player::I, k, x);
    let beta_i = (qi > 0.0).then(|| ((gi(0.0) + gi(1.0) - gi(alpha)) / qi).clamp(0.0, 1.0));
    let beta_ii = (qii > 0.0).then(|| (gen_fun(p, Player::II, k, beta) / qii).clamp(0.0, 1.0));
    ConditionalSplit {
        alpha_i: beta_i.map(|b| 1.0 - b),
        alpha_ii: beta_ii.map(|b| 1.0 - b),
        beta_i,
        beta_ii,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatioRow {
    pub q: f64,
    pub ratio_i: f64,
    pub ratio_ii: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalRatios {
    pub q_c: f64,
    pub rows: Vec<RatioRow>,
    /// Linear extrapolation of `beta_I / beta` to `q = q_c`.
    pub limit_i: f64,
    /// Linear extrapolation of `beta_II / beta` to `q = q_c`.
    pub limit_ii: f64,
}

/// `beta_I / beta` and `beta_II / beta` just above the critical activation
/// probability, for each offset in `eps_list`.
pub fn critical_ratios(
    marginal: &PrimitiveDistribution,
    k: f64,
    eps_list: &[f64],
) -> Result<CriticalRatios> {
    if !marginal.is_escape() || !marginal.is_activation_independent() {
        return Err(Error::NotApplicable(
            "needs an activation-independent escape model".into(),
        ));
    }
    let mean = marginal.block_sum(Player::I, k, BlockSumMode::InternalMean)
        + marginal.block_sum(Player::II, k, BlockSumMode::InternalMean);
    if !(mean > 1.0 && mean.is_finite()) {
        return Err(Error::NotApplicable(format!(
            "restricted offspring mean {mean} must lie in (1, inf)"
        )));
    }
    if eps_list.is_empty() {
        return Err(Error::NotApplicable("empty offset list".into()));
    }
    let q_c = critical_activation(marginal, k);
    let mut rows = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let q = q_c + eps;
        if !(eps > 0.0 && q < 1.0) {
            return Err(Error::NotApplicable(format!(
                "offset {eps} leaves (q_c, 1)"
            )));
        }
        let model = marginal.with_activation(q)?;
        let a = alpha(&model, k)?;
        let split = conditional_split(&model, k, a);
        let beta = 1.0 - a;
        rows.push(RatioRow {
            q,
            ratio_i: split.beta_of(Player::I)? / beta,
            ratio_ii: split.beta_of(Player::II)? / beta,
        });
    }
    let mut sorted = rows.clone();
    sorted.sort_by(|a, b| a.q.total_cmp(&b.q));
    let extrapolate = |get: fn(&RatioRow) -> f64| {
        if sorted.len() == 1 {
            return get(&sorted[0]);
        }
        let (r0, r1) = (&sorted[0], &sorted[1]);
        let slope = (get(r1) - get(r0)) / (r1.q - r0.q);
        get(r0) - slope * (r0.q - q_c)
    };
    let limit_i = extrapolate(|r| r.ratio_i);
    let limit_ii = extrapolate(|r| r.ratio_ii);
    Ok(CriticalRatios {
        q_c,
        rows,
        limit_i,
        limit_ii,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AsymptoticCase {
    Constant,
    EventuallyIncreasing,
    EventuallyDecreasing,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticReport {
    pub case: AsymptoticCase,
    pub limit: f64,
    pub rho_i: f64,
    pub rho_ii: f64,
}

/// Long-run behaviour in `n` of `P(v < k)` on `n`-ary trees where
/// `rho_i = p(player = i, capacity >= k)`.
pub fn asymptotic_nary(rho_i: f64, rho_ii: f64) -> Result<AsymptoticReport> {
    check_rhos(rho_i, rho_ii)?;
    let case = if rho_i == 0.0 {
        AsymptoticCase::Constant
    } else if rho_i > 0.5 && rho_ii > 0.0 {
        AsymptoticCase::EventuallyIncreasing
    } else {
        AsymptoticCase::EventuallyDecreasing
    };
    Ok(AsymptoticReport {
        case,
        limit: 1.0 - rho_i,
        rho_i,
        rho_ii,
    })
}

fn check_rhos(rho_i: f64, rho_ii: f64) -> Result<()> {
    if rho_i >= 0.0 && rho_ii >= 0.0 && rho_i + rho_ii < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!(
            "need rho_I, rho_II >= 0 with sum < 1, got ({rho_i}, {rho_ii})"
        )))
    }
}

/// Model on `n`-ary trees whose vgf at `k = 1` is
/// `1 - rho_I (1 - x^n) - rho_II (1 - x)^n`.
pub fn nary_model(rho_i: f64, rho_ii: f64, n: u32) -> Result<PrimitiveDistribution> {
    check_rhos(rho_i, rho_ii)?;
    let one = CapacityLaw::PointMass(1.0);
    let zero = CapacityLaw::PointMass(0.0);
    let mut blocks = vec![];
    for (w, player, cap) in [
        (rho_i, Player::I, &one),
        (rho_ii, Player::II, &one),
        (1.0 - rho_i - rho_ii, Player::I, &zero),
    ] {
        if w > 0.0 {
            blocks.push(Block::new(
                w,
                player,
                OffspringLaw::PointMass(n),
                cap.clone(),
                cap.clone(),
            ));
        }
    }
    PrimitiveDistribution::new(blocks)
}

/// Smallest fixed point of the `n`-ary vgf above.
pub fn nary_alpha(rho_i: f64, rho_ii: f64, n: u32) -> Result<f64> {
    alpha(&nary_model(rho_i, rho_ii, n)?, 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AtomGap {
    pub delta: f64,
    pub gap: f64,
}

/// `alpha(k + delta) - alpha(k - delta)` for each `delta`, valid when `k` is
/// not a capacity atom and `p(capacity < k) > 0`.
pub fn atom_check(p: &PrimitiveDistribution, k: f64, deltas: &[f64]) -> Result<Vec<AtomGap>> {
    if p.prob_capacity_eq(k) > 0.0 {
        return Err(Error::HypothesisFailed(format!(
            "capacity has an atom at {k}"
        )));
    }
    if p.prob_capacity_below(k) <= 0.0 {
        return Err(Error::HypothesisFailed(format!("p(capacity < {k}) = 0")));
    }
    deltas
        .iter()
        .map(|&delta| {
            if !(delta > 0.0 && delta < k) {
                return Err(Error::HypothesisFailed(format!(
                    "offset {delta} must lie in (0, {k})"
                )));
            }
            Ok(AtomGap {
                delta,
                gap: alpha(p, k + delta)? - alpha(p, k - delta)?,
            })
        })
        .collect()
}
