//! α-densities: numerical liminf/limsup estimates, exact closed forms, and
//! checkable diagnostics for the consistency, monotonicity and continuity
//! relations between densities at different exponents.

use num_integer::Integer;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{DensityError, Result};
use crate::numeric::{check_alpha, weight, CompensatedSum};
use crate::set_algebra::{contains, materialize, CountingProfile, MemberTable, SetExpr};
use crate::tolerances::{
    EPS_MONO, EPS_NUM, GRID_GROWTH, MIN_TAIL_CHECKPOINTS, TAIL_DIVISOR, TOL_EXIST,
};

pub type Rational = Ratio<u64>;

/// Longest period the exact fast path will enumerate.
const MAX_PERIOD: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityEstimate {
    #[serde(rename = "liminf")]
    pub liminf_est: f64,
    #[serde(rename = "limsup")]
    pub limsup_est: f64,
    pub exists: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_rational")]
    pub exact: Option<Rational>,
    pub alpha: f64,
    pub horizon: u64,
    #[serde(rename = "checkpoints")]
    pub checkpoint_count: usize,
    /// Set when the α = −1 estimate was extrapolated across log-periods.
    pub extrapolated: bool,
}

fn ser_rational<S: Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.collect_str(&format_args!("{}/{}", r.numer(), r.denom())),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateOptions {
    pub tol_exist: f64,
    pub growth: f64,
    pub tail_divisor: u64,
    pub min_tail_checkpoints: usize,
    /// At α = −1 the ratio approaches its limit only like `1/ln n`. When
    /// set, each extreme is replaced by the increment ratio
    /// `(A(n) − A(n/R)) / (N(n) − N(n/R))` over a whole number `R` of the
    /// set's multiplicative periods, which removes the bounded offset.
    pub log_extrapolation: bool,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        Self {
            tol_exist: TOL_EXIST,
            growth: GRID_GROWTH,
            tail_divisor: TAIL_DIVISOR,
            min_tail_checkpoints: MIN_TAIL_CHECKPOINTS,
            log_extrapolation: true,
        }
    }
}

/// Geometric grid `⌊growth^i⌋` up to `horizon`, plus `horizon` itself.
pub fn geometric_grid(horizon: u64, growth: f64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut x = 1.0f64;
    while x <= horizon as f64 {
        out.push(x.floor() as u64);
        x *= growth;
    }
    out.push(horizon);
    out.sort_unstable();
    out.dedup();
    out
}

/// Geometric grid merged with the expression's critical points.
pub fn checkpoint_grid(expr: &SetExpr, horizon: u64, growth: f64) -> Vec<u64> {
    let mut g = geometric_grid(horizon, growth);
    g.extend(expr.critical_points(horizon).into_iter().filter(|&c| c >= 1));
    g.sort_unstable();
    g.dedup();
    g
}

/// Smallest `g` with `g^e = b`, returned as `(g, e)`.
fn perfect_root(b: u64) -> (u64, u32) {
    for e in (2..=63u32).rev() {
        let g = (b as f64).powf(1.0 / e as f64).round() as u64;
        for cand in g.saturating_sub(1).max(2)..=g + 1 {
            if cand.checked_pow(e) == Some(b) {
                return (cand, e);
            }
        }
    }
    (b, 1)
}

/// A multiplicative period `R >= tail_divisor` of the expression's block
/// structure, or `tail_divisor` when there are no blocks. `None` when the
/// block bases are multiplicatively incommensurable.
pub fn log_period(expr: &SetExpr, tail_divisor: u64) -> Option<u64> {
    let blocks = expr.block_structures();
    if blocks.is_empty() {
        return Some(tail_divisor);
    }
    let mut root = None;
    let mut exp: u64 = 1;
    for (b, p) in blocks {
        let (g, e) = perfect_root(b);
        if root.is_some_and(|r| r != g) {
            return None;
        }
        root = Some(g);
        exp = exp.lcm(&(e as u64 * p as u64));
    }
    let unit = root?.checked_pow(u32::try_from(exp).ok()?)?;
    let mut r = unit;
    while r < tail_divisor {
        r = r.checked_mul(unit)?;
    }
    Some(r)
}

struct Extremes {
    lo: f64,
    hi: f64,
    extrapolated: bool,
}

fn tail_extremes(
    table: &MemberTable,
    alpha: f64,
    grid: &[u64],
    horizon: u64,
    opts: &EstimateOptions,
    period: Option<u64>,
) -> Result<(Extremes, usize)> {
    let tail_start = horizon / opts.tail_divisor;
    let tail: Vec<u64> = grid.iter().copied().filter(|&c| c >= tail_start).collect();
    if tail.len() < opts.min_tail_checkpoints {
        return Err(DensityError::InsufficientHorizon(format!(
            "{} tail checkpoints in [{tail_start}, {horizon}], need {}",
            tail.len(),
            opts.min_tail_checkpoints
        )));
    }
    let period = period.filter(|&r| alpha == -1.0 && opts.log_extrapolation && tail_start / r >= 2);
    let mut points = grid.to_vec();
    if let Some(r) = period {
        points.extend(tail.iter().map(|c| c / r));
        points.sort_unstable();
        points.dedup();
    }
    let profile = CountingProfile::from_table(table, alpha, &points)?;
    let ratios = profile.ratios();
    let at = |n: u64| points.binary_search(&n).expect("checkpoint present");

    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut argmin, mut argmax) = (0, 0);
    for &c in &tail {
        let r = ratios[at(c)];
        if r < lo {
            lo = r;
            argmin = c;
        }
        if r > hi {
            hi = r;
            argmax = c;
        }
    }
    let mut extrapolated = false;
    if let Some(r) = period {
        let increment = |n: u64| {
            let (i, j) = (at(n), at(n / r));
            (profile.weighted[i] - profile.weighted[j])
                / (profile.normalizers[i] - profile.normalizers[j])
        };
        let (a, b) = (increment(argmin), increment(argmax));
        lo = a.min(b);
        hi = a.max(b);
        extrapolated = true;
    }
    Ok((
        Extremes {
            lo: lo.clamp(0.0, 1.0),
            hi: hi.clamp(0.0, 1.0),
            extrapolated,
        },
        tail.len(),
    ))
}

pub(crate) fn estimate_from_table(
    table: &MemberTable,
    alpha: f64,
    grid: &[u64],
    period: Option<u64>,
    opts: &EstimateOptions,
) -> Result<DensityEstimate> {
    let horizon = table.horizon();
    let (ext, _) = tail_extremes(table, alpha, grid, horizon, opts, period)?;
    let exists = ext.hi - ext.lo <= opts.tol_exist;
    Ok(DensityEstimate {
        liminf_est: ext.lo,
        limsup_est: ext.hi,
        exists,
        value: exists.then_some(0.5 * (ext.lo + ext.hi)),
        exact: None,
        alpha,
        horizon,
        checkpoint_count: grid.len(),
        extrapolated: ext.extrapolated,
    })
}

/// Lower and upper α-density estimated over the tail window of a checkpoint grid.
pub fn estimate_alpha_density(
    expr: &SetExpr,
    alpha: f64,
    horizon: u64,
    opts: &EstimateOptions,
) -> Result<DensityEstimate> {
    check_alpha(alpha)?;
    if horizon < 1 << 10 {
        return Err(DensityError::InsufficientHorizon(format!(
            "horizon {horizon} below 2^10"
        )));
    }
    let grid = checkpoint_grid(expr, horizon, opts.growth);
    let table = materialize(expr, horizon);
    let period = log_period(expr, opts.tail_divisor);
    let mut est = estimate_from_table(&table, alpha, &grid, period, opts)?;
    est.exact = exact_density(expr);
    Ok(est)
}

/// `(period, threshold)` such that membership of `n > threshold` depends on
/// `n mod period` only.
fn periodic_form(expr: &SetExpr) -> Option<(u64, u64)> {
    let combine = |a: &SetExpr, b: &SetExpr| -> Option<(u64, u64)> {
        let (pa, ta) = periodic_form(a)?;
        let (pb, tb) = periodic_form(b)?;
        let p = pa.lcm(&pb);
        (p <= MAX_PERIOD).then_some((p, ta.max(tb)))
    };
    match expr {
        SetExpr::Nat | SetExpr::Empty => Some((1, 0)),
        SetExpr::Finite(v) => Some((1, v.last().copied().unwrap_or(0))),
        SetExpr::Ap { modulus, .. } => (*modulus <= MAX_PERIOD).then_some((*modulus, 0)),
        SetExpr::Blocks { period, on, .. } => {
            if on.is_empty() {
                Some((1, 0))
            } else if on.len() == *period as usize {
                Some((1, 1))
            } else {
                None
            }
        }
        SetExpr::Union(a, b) | SetExpr::Inter(a, b) | SetExpr::Diff(a, b) => combine(a, b),
        SetExpr::Compl(a) => periodic_form(a),
        SetExpr::MCopy { inner, m, rule } => match rule {
            crate::CopyRule::Seeded(_) => None,
            _ => {
                let (p, t) = periodic_form(inner)?;
                let p = p.checked_mul(*m)?;
                (p <= MAX_PERIOD).then_some((p, t.checked_mul(*m)?.checked_add(*m)?))
            }
        },
    }
}

/// Exact asymptotic density for eventually periodic sets and m-copies of them.
pub fn exact_density(expr: &SetExpr) -> Option<Rational> {
    if let SetExpr::MCopy { inner, m, .. } = expr {
        return exact_density(inner).map(|d| d / *m);
    }
    let (p, t) = periodic_form(expr)?;
    let hits = (t + 1..=t + p).filter(|&n| contains(expr, n)).count() as u64;
    Some(Ratio::new(hits, p))
}

/// Closed-form `(lda_α, uda_α)` for a pure block set, α > −1.
///
/// Along `n = b^J` with `J ≡ s (mod p)` the ratio converges to
/// `(1 − q⁻¹)/(1 − q⁻ᵖ) · Σ_{i=1..p} [s − i ∈ on] q^{1−i}` with `q = b^{α+1}`;
/// the ratio is monotone inside each block, so the extremes over all `n`
/// are the extremes over the `p` phases.
pub fn exact_alpha_extremes(expr: &SetExpr, alpha: f64) -> Result<Option<(f64, f64)>> {
    if !(alpha > -1.0) {
        return Err(DensityError::Domain(format!(
            "closed form claimed only for alpha > -1 (got {alpha})"
        )));
    }
    check_alpha(alpha)?;
    let SetExpr::Blocks { base, period, on } = expr else {
        return Ok(None);
    };
    let p = *period as i64;
    let q = (*base as f64).powf(alpha + 1.0);
    let scale = (1.0 - 1.0 / q) / (1.0 - q.powi(-(p as i32)));
    let phase = |s: i64| -> f64 {
        (1..=p)
            .filter(|i| on.binary_search(&((s - i).rem_euclid(p) as u32)).is_ok())
            .map(|i| q.powi(1 - i as i32))
            .sum::<f64>()
            * scale
    };
    let values: Vec<f64> = (0..p).map(phase).collect();
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(Some((lo.clamp(0.0, 1.0), hi.clamp(0.0, 1.0))))
}

#[derive(Debug, Clone, Serialize)]
pub struct AlphaResidual {
    pub alpha: f64,
    pub liminf: f64,
    pub limsup: f64,
    pub residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConsistencyReport {
    pub density: f64,
    pub rows: Vec<AlphaResidual>,
    pub passed: bool,
}

/// Checks that every α-density estimate agrees with the exact density.
pub fn fuchs_consistency_check(
    expr: &SetExpr,
    alpha_grid: &[f64],
    horizon: u64,
    tol: f64,
) -> Result<ConsistencyReport> {
    let d = exact_density(expr).ok_or_else(|| {
        DensityError::PreconditionFailed(format!("{expr} has no exact asymptotic density"))
    })?;
    if let Some(a) = alpha_grid.iter().find(|&&a| !(a > -1.0)) {
        return Err(DensityError::Domain(format!("alpha {a} must exceed -1")));
    }
    let d = *d.numer() as f64 / *d.denom() as f64;
    let opts = EstimateOptions::default();
    let rows = alpha_grid
        .par_iter()
        .map(|&alpha| {
            let e = estimate_alpha_density(expr, alpha, horizon, &opts)?;
            let residual = (e.liminf_est - d).abs().max((e.limsup_est - d).abs());
            Ok(AlphaResidual {
                alpha,
                liminf: e.liminf_est,
                limsup: e.limsup_est,
                residual,
                passed: residual <= tol,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let passed = rows.iter().all(|r| r.passed);
    Ok(ConsistencyReport {
        density: d,
        rows,
        passed,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MonotonicityReport {
    pub alpha: f64,
    pub beta: f64,
    pub lower_beta: f64,
    pub lower_alpha: f64,
    pub upper_alpha: f64,
    pub upper_beta: f64,
    pub holds: bool,
}

/// `lda_β ≤ lda_α ≤ uda_α ≤ uda_β` for `α ≤ β`, on estimates, with slack.
pub fn rajagopal_monotonicity_check(
    expr: &SetExpr,
    alpha: f64,
    beta: f64,
    horizon: u64,
) -> Result<MonotonicityReport> {
    if !(alpha >= -1.0 && alpha <= beta) {
        return Err(DensityError::Domain(format!(
            "need -1 <= alpha <= beta (got {alpha}, {beta})"
        )));
    }
    let opts = EstimateOptions::default();
    let ea = estimate_alpha_density(expr, alpha, horizon, &opts)?;
    let eb = if beta == alpha {
        ea.clone()
    } else {
        estimate_alpha_density(expr, beta, horizon, &opts)?
    };
    let holds = eb.liminf_est <= ea.liminf_est + EPS_MONO
        && ea.liminf_est <= ea.limsup_est + EPS_MONO
        && ea.limsup_est <= eb.limsup_est + EPS_MONO;
    Ok(MonotonicityReport {
        alpha,
        beta,
        lower_beta: eb.liminf_est,
        lower_alpha: ea.liminf_est,
        upper_alpha: ea.limsup_est,
        upper_beta: eb.limsup_est,
        holds,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ContinuityReport {
    pub alpha: f64,
    pub delta: f64,
    /// Max tail gap between the α and α+δ ratios.
    pub upper_gap: f64,
    pub upper_bound: f64,
    /// Max tail gap between the α and α−δ ratios.
    pub lower_gap: f64,
    pub lower_bound: f64,
    pub holds: bool,
}

/// Tail gaps between ratio sequences at nearby exponents against
/// `2δ/(α+1)` and `2δ/(α−δ+1)`.
pub fn ggm_continuity_check(
    expr: &SetExpr,
    alpha: f64,
    delta: f64,
    horizon: u64,
) -> Result<ContinuityReport> {
    if !(alpha > -1.0) || !(delta > 0.0 && delta < alpha + 1.0) {
        return Err(DensityError::Domain(format!(
            "need alpha > -1 and 0 < delta < alpha + 1 (got {alpha}, {delta})"
        )));
    }
    check_alpha(alpha + delta)?;
    let grid = checkpoint_grid(expr, horizon, GRID_GROWTH);
    let table = materialize(expr, horizon);
    let tail_start = horizon / TAIL_DIVISOR;
    let ratios = |a: f64| -> Result<Vec<f64>> {
        Ok(CountingProfile::from_table(&table, a, &grid)?.ratios())
    };
    let (mid, up, down) = (ratios(alpha)?, ratios(alpha + delta)?, ratios(alpha - delta)?);
    let max_gap = |other: &[f64]| {
        grid.iter()
            .zip(mid.iter().zip(other))
            .filter(|(&n, _)| n >= tail_start)
            .map(|(_, (x, y))| (x - y).abs())
            .fold(0.0, f64::max)
    };
    let upper_gap = max_gap(&up);
    let lower_gap = max_gap(&down);
    let upper_bound = 2.0 * delta / (alpha + 1.0);
    let lower_bound = 2.0 * delta / (alpha - delta + 1.0);
    Ok(ContinuityReport {
        alpha,
        delta,
        upper_gap,
        upper_bound,
        lower_gap,
        lower_bound,
        holds: upper_gap < upper_bound + EPS_NUM && lower_gap < lower_bound + EPS_NUM,
    })
}

/// `max |r(n) − r(n+1)|` over every `n ∈ [horizon/2, horizon]`, where
/// `r = A_α/N_α`.
pub fn oscillation_diagnostic(expr: &SetExpr, alpha: f64, horizon: u64) -> Result<f64> {
    check_alpha(alpha)?;
    let end = horizon + 1;
    let table = materialize(expr, end);
    let bits = table.bits();
    let (mut a, mut n_sum) = (CompensatedSum::new(), CompensatedSum::new());
    let mut prev: Option<f64> = None;
    let mut worst = 0.0f64;
    for k in 1..=end {
        let w = weight(k, alpha);
        if bits[k as usize] {
            a.add(w);
        }
        n_sum.add(w);
        if k >= horizon / 2 {
            let r = a.value() / n_sum.value();
            if let Some(p) = prev {
                worst = worst.max((r - p).abs());
            }
            prev = Some(r);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set_algebra::m_copy;
    use crate::CopyRule;

    fn a_blocks() -> SetExpr {
        SetExpr::blocks(2, 2, [0]).unwrap()
    }

    fn r(n: u64, d: u64) -> Rational {
        Ratio::new(n, d)
    }

    #[test]
    fn exact_density_examples() {
        assert_eq!(exact_density(&SetExpr::ap(0, 3).unwrap()), Some(r(1, 3)));
        let e = SetExpr::diff(SetExpr::ap(0, 2).unwrap(), SetExpr::finite([2, 4]).unwrap());
        assert_eq!(exact_density(&e), Some(r(1, 2)));
        assert_eq!(exact_density(&a_blocks()), None);
        let u = SetExpr::union(SetExpr::ap(0, 4).unwrap(), SetExpr::ap(1, 4).unwrap());
        assert_eq!(exact_density(&u), Some(r(1, 2)));
        let c = m_copy(SetExpr::ap(0, 2).unwrap(), 3, CopyRule::Seeded(5)).unwrap();
        assert_eq!(exact_density(&c), Some(r(1, 6)));
        let mixed = SetExpr::union(
            m_copy(SetExpr::ap(0, 2).unwrap(), 3, CopyRule::First).unwrap(),
            SetExpr::ap(0, 3).unwrap(),
        );
        // mcopy(evens, 3) = {7, 13, ...} ≡ 1 mod 6, disjoint from multiples of 3.
        assert_eq!(exact_density(&mixed), Some(r(1, 2)));
        assert_eq!(exact_density(&SetExpr::compl(SetExpr::Nat)), Some(r(0, 1)));
    }

    #[test]
    fn closed_form_extremes() {
        let (lo, hi) = exact_alpha_extremes(&a_blocks(), 0.0).unwrap().unwrap();
        assert!((lo - 1.0 / 3.0).abs() < 1e-15 && (hi - 2.0 / 3.0).abs() < 1e-15);
        let (lo, hi) = exact_alpha_extremes(&a_blocks(), 1.0).unwrap().unwrap();
        assert!((lo - 0.2).abs() < 1e-15 && (hi - 0.8).abs() < 1e-15);
        let full = SetExpr::blocks(2, 2, [0, 1]).unwrap();
        let (lo, hi) = exact_alpha_extremes(&full, 3.0).unwrap().unwrap();
        assert!((lo - 1.0).abs() < 1e-12 && (hi - 1.0).abs() < 1e-12);
        assert!(exact_alpha_extremes(&SetExpr::Nat, 0.0).unwrap().is_none());
        assert!(matches!(
            exact_alpha_extremes(&a_blocks(), -1.0),
            Err(DensityError::Domain(_))
        ));
    }

    #[test]
    fn closed_form_sums_to_one_and_is_monotone() {
        let mut prev = (1.0, 0.0);
        for i in 0..40 {
            let alpha = -0.9 + 0.25 * i as f64;
            let (lo, hi) = exact_alpha_extremes(&a_blocks(), alpha).unwrap().unwrap();
            assert!((lo + hi - 1.0).abs() < 1e-12);
            assert!(lo <= prev.0 + 1e-15 && hi >= prev.1 - 1e-15);
            prev = (lo, hi);
        }
    }

    #[test]
    fn estimate_examples() {
        let opts = EstimateOptions::default();
        let h = 1 << 20;
        let e = estimate_alpha_density(&a_blocks(), 0.0, h, &opts).unwrap();
        assert!((e.liminf_est - 1.0 / 3.0).abs() < 0.01, "{e:?}");
        assert!((e.limsup_est - 2.0 / 3.0).abs() < 0.01, "{e:?}");
        assert!(!e.exists && e.value.is_none());

        let evens = estimate_alpha_density(&SetExpr::ap(0, 2).unwrap(), 0.0, h, &opts).unwrap();
        assert!(evens.exists);
        assert!((evens.value.unwrap() - 0.5).abs() < 0.005);
        assert_eq!(evens.exact, Some(r(1, 2)));

        let log = estimate_alpha_density(&a_blocks(), -1.0, h, &opts).unwrap();
        assert!(log.extrapolated && log.exists, "{log:?}");
        assert!((log.value.unwrap() - 0.5).abs() < 0.01);
    }

    #[test]
    fn estimate_errors() {
        let opts = EstimateOptions::default();
        assert!(matches!(
            estimate_alpha_density(&SetExpr::Nat, 0.0, 100, &opts),
            Err(DensityError::InsufficientHorizon(_))
        ));
        assert!(matches!(
            estimate_alpha_density(&SetExpr::Nat, 50.0, 1 << 12, &opts),
            Err(DensityError::Domain(_))
        ));
        let sparse = EstimateOptions {
            growth: 1.5,
            ..opts
        };
        assert!(matches!(
            estimate_alpha_density(&SetExpr::Nat, 0.0, 1 << 12, &sparse),
            Err(DensityError::InsufficientHorizon(_))
        ));
    }

    #[test]
    fn log_period_detection() {
        assert_eq!(log_period(&a_blocks(), 64), Some(64));
        assert_eq!(log_period(&SetExpr::blocks(3, 2, [0]).unwrap(), 64), Some(81));
        let mixed = SetExpr::union(a_blocks(), SetExpr::blocks(8, 1, [0]).unwrap());
        assert_eq!(log_period(&mixed, 64), Some(64));
        let clash = SetExpr::union(a_blocks(), SetExpr::blocks(3, 1, [0]).unwrap());
        assert_eq!(log_period(&clash, 64), None);
        assert_eq!(log_period(&SetExpr::ap(0, 2).unwrap(), 64), Some(64));
    }

    #[test]
    fn consistency_examples() {
        let h = 1 << 20;
        let rep = fuchs_consistency_check(&SetExpr::ap(0, 2).unwrap(), &[-0.5, 0.0, 1.0, 2.0], h, 0.01)
            .unwrap();
        assert!(rep.passed, "{rep:?}");
        let rep = fuchs_consistency_check(&SetExpr::Nat, &[0.0, 3.0], h, 1e-12).unwrap();
        assert!(rep.passed);
        let e = SetExpr::diff(SetExpr::ap(1, 4).unwrap(), SetExpr::finite([1]).unwrap());
        let rep = fuchs_consistency_check(&e, &[0.0, 3.0], h, 0.01).unwrap();
        assert!(rep.passed && rep.density == 0.25);
        assert!(matches!(
            fuchs_consistency_check(&a_blocks(), &[0.0], h, 0.01),
            Err(DensityError::PreconditionFailed(_))
        ));
    }

    #[test]
    fn monotonicity_examples() {
        let h = 1 << 20;
        let rep = rajagopal_monotonicity_check(&a_blocks(), 0.0, 1.0, h).unwrap();
        assert!(rep.holds);
        assert!((rep.lower_beta - 0.2).abs() < 0.01 && (rep.upper_beta - 0.8).abs() < 0.01);
        let same = rajagopal_monotonicity_check(&a_blocks(), 1.0, 1.0, h).unwrap();
        assert_eq!(same.lower_alpha, same.lower_beta);
        assert!(rajagopal_monotonicity_check(&a_blocks(), 2.0, 1.0, h).is_err());
    }

    #[test]
    fn continuity_examples() {
        let h = 1 << 20;
        let rep = ggm_continuity_check(&a_blocks(), 0.0, 0.1, h).unwrap();
        assert!(rep.holds && rep.upper_gap <= 0.2, "{rep:?}");
        let nat = ggm_continuity_check(&SetExpr::Nat, 2.0, 0.5, h).unwrap();
        assert!(nat.upper_gap < 1e-12 && nat.lower_gap < 1e-12);
        assert!(ggm_continuity_check(&a_blocks(), 0.0, 1.0, h).is_err());
    }

    #[test]
    fn oscillation_examples() {
        let h = 1 << 16;
        let d = oscillation_diagnostic(&a_blocks(), 0.0, h).unwrap();
        assert!(d <= 2.0 / (h / 2) as f64);
        assert_eq!(oscillation_diagnostic(&SetExpr::Empty, 1.0, h).unwrap(), 0.0);
    }
}
