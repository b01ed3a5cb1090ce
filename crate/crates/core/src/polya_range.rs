//! Pólya minimal/maximal density through the windowed ratio
//! `(A(n) − A(θn)) / (n − θn)`, gap density, α-envelopes, and sampling of
//! the density set of subsets.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::density_core::{
    checkpoint_grid, estimate_alpha_density, estimate_from_table, exact_alpha_extremes,
    EstimateOptions,
};
use crate::error::{DensityError, Result};
use crate::numeric::{check_alpha, mix64};
use crate::set_algebra::{materialize, MemberTable, PrefixTable, SetExpr};
use crate::tolerances::{ESTIMATE_WINDOW, GRID_GROWTH, MIN_WINDOW, TAIL_DIVISOR, TOL};

#[derive(Debug, Clone, Serialize)]
pub struct ThetaRow {
    pub theta: f64,
    pub liminf: f64,
    pub limsup: f64,
    /// Tail checkpoints whose window ratio is within `TOL/2` of the liminf.
    #[serde(skip)]
    pub minimizers: Vec<u64>,
    /// Tail checkpoints whose window ratio is within `TOL/2` of the limsup.
    #[serde(skip)]
    pub maximizers: Vec<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PolyaEstimate {
    pub lld_est: f64,
    pub uud_est: f64,
    pub theta_grid: Vec<f64>,
    pub per_theta: Vec<ThetaRow>,
    pub horizon: u64,
}

impl PolyaEstimate {
    /// Row of the largest θ.
    pub fn last_row(&self) -> &ThetaRow {
        self.per_theta.last().expect("theta grid is nonempty")
    }

    /// Row attaining `lld_est` (largest θ on ties).
    pub fn min_row(&self) -> &ThetaRow {
        self.per_theta
            .iter()
            .rev()
            .find(|r| r.liminf == self.lld_est)
            .expect("theta grid is nonempty")
    }

    /// Row attaining `uud_est` (largest θ on ties).
    pub fn max_row(&self) -> &ThetaRow {
        self.per_theta
            .iter()
            .rev()
            .find(|r| r.limsup == self.uud_est)
            .expect("theta grid is nonempty")
    }
}

/// Window ratio at `n`, or `None` when the window `(⌊θn⌋, n]` holds fewer
/// than [`MIN_WINDOW`] integers.
#[inline]
pub(crate) fn window_ratio(prefix: &PrefixTable, n: u64, theta: f64) -> Option<f64> {
    let lo = (theta * n as f64).floor() as u64;
    let width = n - lo;
    (width >= MIN_WINDOW && n <= prefix.horizon())
        .then(|| (prefix.count(n) - prefix.count(lo)) as f64 / width as f64)
}

fn check_thetas(thetas: &[f64]) -> Result<()> {
    if thetas.is_empty()
        || thetas.iter().any(|&t| !(t > 0.0 && t < 1.0))
        || thetas.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(DensityError::Domain(
            "theta grid must be nonempty, increasing, inside (0, 1)".into(),
        ));
    }
    Ok(())
}

/// Windowed liminf/limsup over the tail for each θ.
pub fn polya_bounds(expr: &SetExpr, thetas: &[f64], horizon: u64) -> Result<PolyaEstimate> {
    check_thetas(thetas)?;
    if horizon < 1 << 12 {
        return Err(DensityError::InsufficientHorizon(format!(
            "horizon {horizon} below 2^12"
        )));
    }
    // Each θ uses the tail past both horizon/64 and the point where its
    // window reaches ESTIMATE_WINDOW integers; that stretch must still
    // cover the last quarter of the range.
    let tail_starts: Vec<u64> = thetas
        .iter()
        .map(|&t| (horizon / TAIL_DIVISOR).max((ESTIMATE_WINDOW as f64 / (1.0 - t)).ceil() as u64))
        .collect();
    let theta_max = *thetas.last().unwrap();
    if *tail_starts.last().unwrap() > horizon / 4 {
        return Err(DensityError::InsufficientHorizon(format!(
            "theta {theta_max} needs horizon >= {}",
            4 * tail_starts.last().unwrap()
        )));
    }
    let prefix = materialize(expr, horizon).prefix_counts();
    let mut grid = checkpoint_grid(expr, horizon, GRID_GROWTH);
    let critical = expr.critical_points(horizon);
    for &t in thetas {
        grid.extend(
            critical
                .iter()
                .map(|&c| (c as f64 / t).ceil() as u64)
                .filter(|&n| n <= horizon),
        );
    }
    grid.sort_unstable();
    grid.dedup();

    let per_theta: Vec<ThetaRow> = thetas
        .par_iter()
        .zip(&tail_starts)
        .map(|(&theta, &start)| {
            let values: Vec<(u64, f64)> = grid
                .iter()
                .filter(|&&n| n >= start)
                .filter_map(|&n| window_ratio(&prefix, n, theta).map(|w| (n, w)))
                .collect();
            let liminf = values.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
            let limsup = values.iter().map(|v| v.1).fold(f64::NEG_INFINITY, f64::max);
            let near = TOL / 2.0;
            ThetaRow {
                theta,
                liminf,
                limsup,
                minimizers: values.iter().filter(|v| v.1 <= liminf + near).map(|v| v.0).collect(),
                maximizers: values.iter().filter(|v| v.1 >= limsup - near).map(|v| v.0).collect(),
            }
        })
        .collect();
    // The windowed liminf only decreases (limsup only increases) as θ → 1,
    // so the extremes over all rows are the best available estimates; the
    // smaller θ keep the longer tail when the horizon is tight.
    let lld_est = per_theta.iter().map(|r| r.liminf).fold(f64::INFINITY, f64::min);
    let uud_est = per_theta.iter().map(|r| r.limsup).fold(f64::NEG_INFINITY, f64::max);
    Ok(PolyaEstimate {
        lld_est,
        uud_est,
        theta_grid: thetas.to_vec(),
        per_theta,
        horizon,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GapDensity {
    Finite(f64),
    /// Consecutive ratios keep growing through the end of the window.
    Infinite,
}

impl GapDensity {
    pub fn value(self) -> f64 {
        match self {
            GapDensity::Finite(x) => x,
            GapDensity::Infinite => f64::INFINITY,
        }
    }
}

impl Serialize for GapDensity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            GapDensity::Finite(x) => s.serialize_f64(*x),
            GapDensity::Infinite => s.serialize_str("infinite"),
        }
    }
}

/// Largest ratio `a_{i+1}/a_i` between consecutive elements in the tail
/// window `[horizon/64, horizon]`.
pub fn gap_density(expr: &SetExpr, horizon: u64) -> Result<GapDensity> {
    gap_density_of_table(&materialize(expr, horizon))
}

pub(crate) fn gap_density_of_table(table: &MemberTable) -> Result<GapDensity> {
    let horizon = table.horizon();
    let from = horizon / TAIL_DIVISOR;
    let elems: Vec<u64> = table.elements().filter(|&a| a >= from).collect();
    if elems.len() < 2 {
        return Err(DensityError::InsufficientElements { from, to: horizon });
    }
    let ratios = |xs: &[u64]| -> Vec<f64> {
        xs.windows(2).map(|w| w[1] as f64 / w[0] as f64).collect()
    };
    // Thin-set heuristic: strictly growing ratios across the last decade.
    let last_decade: Vec<u64> = elems.iter().copied().filter(|&a| a >= horizon / 10).collect();
    let decade_ratios = ratios(&last_decade);
    if decade_ratios.len() >= 3 && decade_ratios.windows(2).all(|w| w[1] > w[0]) {
        return Ok(GapDensity::Infinite);
    }
    Ok(GapDensity::Finite(ratios(&elems).into_iter().fold(1.0, f64::max)))
}

#[derive(Debug, Clone, Serialize)]
pub struct Envelopes {
    /// Upper bound on `inf_α lda_α` (the grid only reaches finitely many α).
    pub lda_inf_est: f64,
    /// Lower bound on `sup_α uda_α`.
    pub uda_inf_est: f64,
    pub alpha_grid: Vec<f64>,
}

/// Infimum of lower and supremum of upper α-densities over a finite α grid.
pub fn alpha_envelopes(expr: &SetExpr, alpha_grid: &[f64], horizon: u64) -> Result<Envelopes> {
    if alpha_grid.is_empty() {
        return Err(DensityError::Domain("empty alpha grid".into()));
    }
    let opts = EstimateOptions::default();
    let extremes = alpha_grid
        .par_iter()
        .map(|&alpha| {
            check_alpha(alpha)?;
            if alpha > -1.0 {
                if let Some(lohi) = exact_alpha_extremes(expr, alpha)? {
                    return Ok(lohi);
                }
            }
            let e = estimate_alpha_density(expr, alpha, horizon, &opts)?;
            Ok((e.liminf_est, e.limsup_est))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Envelopes {
        lda_inf_est: extremes.iter().map(|e| e.0).fold(f64::INFINITY, f64::min),
        uda_inf_est: extremes.iter().map(|e| e.1).fold(f64::NEG_INFINITY, f64::max),
        alpha_grid: alpha_grid.to_vec(),
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DensityPoint {
    pub keep: f64,
    pub ld: f64,
    pub ud: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DensitySample {
    pub points: Vec<DensityPoint>,
    pub lambda: GapDensity,
}

impl DensitySample {
    /// Indices of points below the line `y = λx − eps`.
    pub fn line_violations(&self, eps: f64) -> Vec<usize> {
        self.points
            .iter()
            .enumerate()
            .filter(|(_, p)| match self.lambda {
                GapDensity::Finite(l) => p.ud < l * p.ld - eps,
                GapDensity::Infinite => p.ld > eps,
            })
            .map(|(i, _)| i)
            .collect()
    }
}

/// Random subsets of `expr` (each element kept independently with a
/// probability cycled from `palette`) and their lower/upper density estimates.
pub fn density_set_sample(
    expr: &SetExpr,
    num_subsets: usize,
    horizon: u64,
    seed: u64,
    palette: &[f64],
) -> Result<DensitySample> {
    if num_subsets == 0 || palette.is_empty() || palette.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(DensityError::Domain(
            "need at least one subset and probabilities in [0, 1]".into(),
        ));
    }
    let table = materialize(expr, horizon);
    let lambda = gap_density_of_table(&table)?;
    let grid = checkpoint_grid(expr, horizon, GRID_GROWTH);
    let opts = EstimateOptions::default();
    let points = (0..num_subsets)
        .into_par_iter()
        .map(|i| {
            let keep = palette[i % palette.len()];
            let mut rng = ChaCha8Rng::seed_from_u64(mix64(seed ^ mix64(i as u64)));
            let mut bits = vec![false; horizon as usize + 1];
            for a in table.elements() {
                bits[a as usize] = keep >= 1.0 || rng.random_bool(keep);
            }
            let sub = MemberTable::from_bits(bits);
            let e = estimate_from_table(&sub, 0.0, &grid, None, &opts)?;
            Ok(DensityPoint {
                keep,
                ld: e.liminf_est,
                ud: e.limsup_est,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DensitySample { points, lambda })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerances::{DEFAULT_THETAS, SAMPLE_PALETTE};

    fn a_blocks() -> SetExpr {
        SetExpr::blocks(2, 2, [0]).unwrap()
    }

    const H: u64 = 1 << 20;

    #[test]
    fn polya_examples() {
        let p = polya_bounds(&a_blocks(), &DEFAULT_THETAS, H).unwrap();
        assert!(p.lld_est <= 0.02 && p.uud_est >= 0.98, "{p:?}");
        let evens = polya_bounds(&SetExpr::ap(0, 2).unwrap(), &DEFAULT_THETAS, H).unwrap();
        assert!((evens.lld_est - 0.5).abs() < 0.01 && (evens.uud_est - 0.5).abs() < 0.01);
        assert!(!evens.last_row().minimizers.is_empty());
    }

    #[test]
    fn polya_union_dominated_by_ap() {
        // Direct window scan: every window of length >= 64 holds at least
        // floor(len/4) multiples of 4.
        let e = SetExpr::union(SetExpr::ap(0, 4).unwrap(), a_blocks());
        let p = polya_bounds(&e, &DEFAULT_THETAS, H).unwrap();
        assert!(p.lld_est >= 0.25 - 0.02);
    }

    #[test]
    fn polya_rejects_short_windows() {
        assert!(matches!(
            polya_bounds(&SetExpr::Nat, &DEFAULT_THETAS, 1 << 13),
            Err(DensityError::InsufficientHorizon(_))
        ));
        assert!(polya_bounds(&SetExpr::Nat, &[0.9, 0.5], H).is_err());
    }

    #[test]
    fn gap_density_examples() {
        match gap_density(&a_blocks(), H).unwrap() {
            GapDensity::Finite(x) => assert!((x - 2.0).abs() < 1e-3),
            g => panic!("{g:?}"),
        }
        match gap_density(&SetExpr::ap(0, 5).unwrap(), H).unwrap() {
            GapDensity::Finite(x) => assert!((x - 1.0).abs() < 1e-3),
            g => panic!("{g:?}"),
        }
        assert!(matches!(
            gap_density(&SetExpr::finite([3, 9, 27]).unwrap(), H),
            Err(DensityError::InsufficientElements { .. })
        ));
        let thin = SetExpr::finite((1..=22).map(|k| 1u64 << k).chain([(1 << 22) - 1])).unwrap();
        // Powers of two plus one extra: ratios not monotone, so finite.
        assert!(matches!(gap_density(&thin, 1 << 22).unwrap(), GapDensity::Finite(_)));
        let factorial_like = SetExpr::finite([1_700_000, 2_000_000, 2_600_000, 4_160_000, 8_320_000]).unwrap();
        assert_eq!(gap_density(&factorial_like, 1 << 24).unwrap(), GapDensity::Infinite);
    }

    #[test]
    fn envelope_examples() {
        let grid: Vec<f64> = (0..=8).map(|a| a as f64).collect();
        let env = alpha_envelopes(&a_blocks(), &grid, H).unwrap();
        assert!((env.lda_inf_est - 1.0 / 513.0).abs() < 1e-12);
        assert!((env.uda_inf_est - 512.0 / 513.0).abs() < 1e-12);
        let evens = alpha_envelopes(&SetExpr::ap(0, 2).unwrap(), &[0.0, 2.0], H).unwrap();
        assert!((evens.lda_inf_est - 0.5).abs() < 0.005 && (evens.uda_inf_est - 0.5).abs() < 0.005);
    }

    #[test]
    fn density_set_examples() {
        let all = density_set_sample(&SetExpr::Nat, 1, H, 1, &[1.0]).unwrap();
        assert_eq!((all.points[0].ld, all.points[0].ud), (1.0, 1.0));

        let half = density_set_sample(&SetExpr::ap(0, 2).unwrap(), 1, H, 7, &[0.5]).unwrap();
        // Oracle: direct count of the sampled subset at the horizon.
        assert!((half.points[0].ld - 0.25).abs() < 0.02 && (half.points[0].ud - 0.25).abs() < 0.02);

        let s = density_set_sample(&a_blocks(), 10, H, 3, &SAMPLE_PALETTE).unwrap();
        for p in s.points.iter().filter(|p| p.ld > 0.02) {
            assert!(p.ud >= 2.0 * p.ld - 0.05, "{p:?}");
        }
        assert!(s.line_violations(0.05).is_empty());
        let again = density_set_sample(&a_blocks(), 10, H, 3, &SAMPLE_PALETTE).unwrap();
        assert_eq!(
            serde_json::to_string(&s).unwrap(),
            serde_json::to_string(&again).unwrap()
        );
    }
}
