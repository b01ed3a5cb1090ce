//! The invariant and acceptance suite run by `densitylab verify`.
//!
//! Each check is independent, returns pass/fail with a one-line detail,
//! and is timed. A check that errors counts as failed.

use std::time::Instant;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constructions::{
    corollary_superset, counterexample_set, difference_matching_subset, intermediate_subset,
    Construction,
};
use crate::density_core::{
    estimate_alpha_density, exact_alpha_extremes, exact_density, ggm_continuity_check,
    oscillation_diagnostic, rajagopal_monotonicity_check, EstimateOptions,
};
use crate::error::Result;
use crate::measures::{
    additivity_check, evaluate_measure, extension_check, mu_alpha, range_witness, Atom,
    FilterSurrogate, FlimOptions, MeasureSpec,
};
use crate::polya_range::{alpha_envelopes, density_set_sample, gap_density, polya_bounds};
use crate::set_algebra::{contains, count, materialize, weighted_count, CopyRule, SetExpr};
use crate::tolerances::{
    CONSTRUCTION_HORIZON, DEFAULT_HORIZON, DEFAULT_THETAS, EPS_LINE, EPS_MEASURE, SAMPLE_PALETTE,
    TOL,
};

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

impl VerifyReport {
    /// Fixed-width table, one row per check.
    pub fn table(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(4);
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{:<width$}  {}  {:>7} ms  {}\n",
                c.name,
                if c.passed { "PASS" } else { "FAIL" },
                c.millis,
                c.detail
            ));
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        out.push_str(&format!("{} checks, {} failed\n", self.checks.len(), failed));
        out
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Horizon for density estimates and Pólya bounds.
    pub horizon: u64,
    /// Horizon for measure evaluations and property sweeps.
    pub measure_horizon: u64,
    pub construction_horizon: u64,
    pub seed: u64,
    /// Only run checks whose name contains this substring.
    pub only: Option<String>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            horizon: DEFAULT_HORIZON,
            measure_horizon: 1 << 20,
            construction_horizon: CONSTRUCTION_HORIZON,
            seed: 0x5eed,
            only: None,
        }
    }
}

type Outcome = Result<(bool, String)>;
type CheckFn = fn(&VerifyOptions) -> Outcome;

const CHECKS: &[(&str, CheckFn)] = &[
    ("set.count_increments", set_count_increments),
    ("set.complement_partition", set_complement_partition),
    ("set.inclusion_exclusion", set_inclusion_exclusion),
    ("set.weighted_monotone_additive", set_weighted),
    ("set.mcopy_count", set_mcopy_count),
    ("density.bounds_ordered", density_bounds_ordered),
    ("density.exact_within_estimate", density_exact_within),
    ("density.closed_form_chain", density_closed_form_chain),
    ("density.closed_form_sum", density_closed_form_sum),
    ("density.complement_duality", density_complement_duality),
    ("polya.ordering", polya_ordering),
    ("polya.envelopes", polya_envelopes),
    ("polya.complement_duality", polya_duality),
    ("polya.periodic_exact", polya_periodic),
    ("gap.ap_and_finite_removal", gap_ap_removal),
    ("measure.monotonicity", measure_monotonicity),
    ("measure.range_and_nat", measure_range),
    ("measure.sandwich", measure_sandwich),
    ("measure.mcopy_scaling", measure_mcopy_scaling),
    ("construction.intermediate", construction_intermediate),
    ("construction.difference_matching", construction_difference),
    ("construction.superset", construction_superset),
    ("acceptance.1_closed_forms", acc1_closed_forms),
    ("acceptance.2_numerical_agreement", acc2_numerical),
    ("acceptance.3_log_density", acc3_log_density),
    ("acceptance.4_polya_bounds", acc4_polya),
    ("acceptance.5_gap_density", acc5_gap),
    ("acceptance.6_alpha_measure_exceeds_ud", acc6_lauwers),
    ("acceptance.7_range_witness", acc7_witness),
    ("acceptance.8_intermediate_subset", acc8_construction),
    ("acceptance.9_measure_axioms", acc9_axioms),
    ("acceptance.10_property_suites", acc10_properties),
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.0).collect()
}

pub fn run_suite(opts: &VerifyOptions) -> VerifyReport {
    let checks: Vec<CheckResult> = CHECKS
        .iter()
        .filter(|(name, _)| opts.only.as_deref().is_none_or(|s| name.contains(s)))
        .map(|(name, f)| {
            let start = Instant::now();
            let (passed, detail) = match f(opts) {
                Ok(x) => x,
                Err(e) => (false, format!("error: {e}")),
            };
            CheckResult {
                name: name.to_string(),
                passed,
                detail,
                millis: start.elapsed().as_millis(),
            }
        })
        .collect();
    let passed = checks.iter().all(|c| c.passed);
    VerifyReport { checks, passed }
}

fn e(text: &str) -> SetExpr {
    text.parse().expect("fixture expression parses")
}

fn blocks() -> SetExpr {
    counterexample_set()
}

fn set_fixtures() -> Vec<SetExpr> {
    [
        "nat",
        "empty",
        "finite{3,7,8,100}",
        "ap(2,5)",
        "blocks(2,2,on=[0])",
        "blocks(3,3,on=[0,2])",
        "union(ap(0,3),blocks(2,2,on=[1]))",
        "inter(ap(1,2),compl(finite{1,3,5}))",
        "diff(nat,blocks(2,3,on=[1]))",
        "mcopy(ap(0,2),3)",
        "mcopy(blocks(2,2,on=[0]),4,offset:3)",
        "mcopy(nat,5,seed:11)",
    ]
    .iter()
    .map(|s| e(s))
    .collect()
}

fn periodic_fixtures() -> Vec<SetExpr> {
    [
        "ap(0,2)",
        "ap(1,3)",
        "ap(0,5)",
        "union(ap(0,4),ap(1,4))",
        "diff(ap(0,2),finite{2,4,6})",
        "compl(ap(0,7))",
        "inter(ap(0,2),ap(0,3))",
        "ap(2,9)",
        "nat",
        "finite{1,2,3}",
    ]
    .iter()
    .map(|s| e(s))
    .collect()
}

fn disjoint_pairs() -> Vec<(SetExpr, SetExpr)> {
    [
        ("ap(0,2)", "ap(1,2)"),
        ("blocks(2,2,on=[0])", "blocks(2,2,on=[1])"),
        ("ap(0,4)", "ap(2,4)"),
        ("ap(0,3)", "ap(1,3)"),
        ("inter(blocks(2,2,on=[0]),ap(0,2))", "inter(blocks(2,2,on=[0]),ap(1,2))"),
        ("ap(1,5)", "finite{2,3,4}"),
        ("inter(blocks(2,2,on=[1]),ap(0,3))", "blocks(2,2,on=[0])"),
        ("ap(0,6)", "ap(3,6)"),
        ("diff(nat,ap(0,2))", "ap(0,4)"),
        ("inter(blocks(2,2,on=[1]),ap(1,2))", "ap(0,2)"),
    ]
    .iter()
    .map(|(x, y)| (e(x), e(y)))
    .collect()
}

fn even_bounds() -> FilterSurrogate {
    FilterSurrogate::BlockBoundaries { base: 2, stride: 2, phase: 0 }
}

fn odd_bounds() -> FilterSurrogate {
    FilterSurrogate::BlockBoundaries { base: 2, stride: 2, phase: 1 }
}

/// Five specs: single α-atoms, single θ-atoms and one mixture.
pub fn measure_fixtures() -> Vec<MeasureSpec> {
    vec![
        MeasureSpec::single(Atom::alpha(1.0, 0.0, even_bounds())),
        MeasureSpec::single(Atom::alpha(1.0, 1.0, odd_bounds())),
        MeasureSpec::single(Atom::theta(1.0, 0.9, odd_bounds())),
        MeasureSpec::single(Atom::theta(1.0, 0.5, even_bounds())),
        MeasureSpec::new(vec![
            Atom::alpha(0.3, 0.5, even_bounds()),
            Atom::theta(0.3, 0.75, odd_bounds()),
            Atom::alpha(0.4, 2.0, odd_bounds()),
        ]),
    ]
    .into_iter()
    .map(|s| s.expect("fixture spec is valid"))
    .collect()
}

/// Random nonempty proper block sets.
pub fn random_blocks(n: usize, seed: u64) -> Vec<SetExpr> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let base = rng.random_range(2..=4u64);
            let period = rng.random_range(2..=4u32);
            let mut on: Vec<u32> = (0..period).filter(|_| rng.random_bool(0.5)).collect();
            if on.is_empty() {
                on.push(rng.random_range(0..period));
            }
            if on.len() == period as usize {
                on.pop();
            }
            SetExpr::blocks(base, period, on).expect("valid random blocks")
        })
        .collect()
}

fn set_count_increments(_: &VerifyOptions) -> Outcome {
    for x in set_fixtures() {
        let mut prev = 0;
        for n in 1..=3000 {
            let c = count(&x, n);
            if c - prev != contains(&x, n) as u64 {
                return Ok((false, format!("{x} at n = {n}")));
            }
            prev = c;
        }
    }
    Ok((true, "12 expressions, n <= 3000".into()))
}

fn set_complement_partition(_: &VerifyOptions) -> Outcome {
    for x in set_fixtures() {
        let c = SetExpr::compl(x.clone());
        for n in (1..=5000).step_by(7).chain([1 << 20]) {
            if count(&c, n) + count(&x, n) != n {
                return Ok((false, format!("{x} at n = {n}")));
            }
        }
    }
    Ok((true, "count(compl e) + count(e) = n".into()))
}

fn set_inclusion_exclusion(_: &VerifyOptions) -> Outcome {
    let xs = set_fixtures();
    for x in &xs {
        for y in &xs {
            let (u, i) = (SetExpr::union(x.clone(), y.clone()), SetExpr::inter(x.clone(), y.clone()));
            for n in [1, 10, 99, 1000, 4097] {
                if count(&u, n) + count(&i, n) != count(x, n) + count(y, n) {
                    return Ok((false, format!("{x}, {y} at n = {n}")));
                }
            }
        }
    }
    Ok((true, "144 pairs".into()))
}

fn set_weighted(_: &VerifyOptions) -> Outcome {
    let pairs = disjoint_pairs();
    for alpha in [-1.0, 0.0, 0.5, 2.0] {
        for (x, y) in &pairs {
            let u = SetExpr::union(x.clone(), y.clone());
            let mut prev = 0.0;
            for n in [1, 50, 500, 5000, 50_000] {
                let (wx, wy, wu) = (
                    weighted_count(x, alpha, n)?,
                    weighted_count(y, alpha, n)?,
                    weighted_count(&u, alpha, n)?,
                );
                let scale = wu.abs().max(1.0);
                let exact = alpha == 0.0 && wu != wx + wy;
                if wu < prev || exact || (wu - wx - wy).abs() > 1e-12 * scale {
                    return Ok((false, format!("{x} ∪ {y}, alpha {alpha}, n = {n}")));
                }
                prev = wu;
            }
        }
    }
    Ok((true, "monotone and additive on 10 disjoint pairs".into()))
}

fn set_mcopy_count(_: &VerifyOptions) -> Outcome {
    let inners = ["ap(1,3)", "blocks(2,2,on=[0])", "nat", "finite{2,9}"];
    for inner in inners.iter().map(|s| e(s)) {
        for m in [2, 3, 7] {
            for rule in [CopyRule::First, CopyRule::Offset(m - 1), CopyRule::Seeded(99)] {
                let c = SetExpr::m_copy(inner.clone(), m, rule)?;
                for n in 1..=400 {
                    if count(&c, m * n + m).abs_diff(count(&inner, n)) > 1 {
                        return Ok((false, format!("{c} at n = {n}")));
                    }
                }
            }
        }
    }
    Ok((true, "|B(mn+m) - A(n)| <= 1".into()))
}

fn density_bounds_ordered(o: &VerifyOptions) -> Outcome {
    let est = EstimateOptions::default();
    for x in set_fixtures() {
        for alpha in [-1.0, 0.0, 1.0, 3.0] {
            let d = estimate_alpha_density(&x, alpha, o.measure_horizon, &est)?;
            if !(0.0 <= d.liminf_est && d.liminf_est <= d.limsup_est && d.limsup_est <= 1.0) {
                return Ok((false, format!("{x}, alpha {alpha}: {d:?}")));
            }
        }
    }
    Ok((true, "0 <= liminf <= limsup <= 1".into()))
}

fn density_exact_within(o: &VerifyOptions) -> Outcome {
    let est = EstimateOptions::default();
    for x in periodic_fixtures().into_iter().chain([e("mcopy(ap(0,3),4)")]) {
        let d = exact_density(&x).map(|r| *r.numer() as f64 / *r.denom() as f64);
        let Some(d) = d else {
            return Ok((false, format!("{x} has no exact density")));
        };
        let s = estimate_alpha_density(&x, 0.0, o.measure_horizon, &est)?;
        if d < s.liminf_est - TOL || d > s.limsup_est + TOL {
            return Ok((false, format!("{x}: exact {d}, estimate [{}, {}]", s.liminf_est, s.limsup_est)));
        }
    }
    Ok((true, "11 eventually periodic sets".into()))
}

fn density_closed_form_chain(o: &VerifyOptions) -> Outcome {
    let grid = [-0.5, 0.0, 0.5, 1.0, 2.0, 4.0, 8.0];
    for x in random_blocks(10, o.seed).into_iter().chain([blocks()]) {
        let mut prev: Option<(f64, f64)> = None;
        for &alpha in &grid {
            let (lo, hi) = exact_alpha_extremes(&x, alpha)?.expect("block sets have closed forms");
            if let Some((plo, phi)) = prev {
                if lo > plo + 1e-12 || hi < phi - 1e-12 {
                    return Ok((false, format!("{x} at alpha {alpha}")));
                }
            }
            prev = Some((lo, hi));
        }
    }
    Ok((true, "lower nonincreasing, upper nondecreasing in alpha".into()))
}

fn density_closed_form_sum(_: &VerifyOptions) -> Outcome {
    for alpha in [-0.9, 0.0, 0.5, 1.0, 2.0, 10.0, 40.0] {
        let (lo, hi) = exact_alpha_extremes(&blocks(), alpha)?.expect("closed form");
        if (lo + hi - 1.0).abs() > 1e-12 {
            return Ok((false, format!("alpha {alpha}: {lo} + {hi}")));
        }
    }
    Ok((true, "components sum to 1".into()))
}

fn density_complement_duality(o: &VerifyOptions) -> Outcome {
    let est = EstimateOptions::default();
    let mut worst = 0.0f64;
    for x in set_fixtures() {
        for alpha in [0.0, 1.0] {
            let a = estimate_alpha_density(&x, alpha, o.measure_horizon, &est)?;
            let c = estimate_alpha_density(&SetExpr::compl(x.clone()), alpha, o.measure_horizon, &est)?;
            worst = worst.max((c.liminf_est - (1.0 - a.limsup_est)).abs());
        }
    }
    Ok((worst <= 2.0 * TOL, format!("max residual {worst:.2e}")))
}

fn polya_ordering(o: &VerifyOptions) -> Outcome {
    let est = EstimateOptions::default();
    for x in set_fixtures().into_iter().filter(|x| !matches!(x, SetExpr::Finite(_))) {
        let p = polya_bounds(&x, &DEFAULT_THETAS, o.measure_horizon)?;
        let d = estimate_alpha_density(&x, 0.0, o.measure_horizon, &est)?;
        let s = 2.0 * TOL;
        if !(p.lld_est <= d.liminf_est + s && d.liminf_est <= d.limsup_est + s && d.limsup_est <= p.uud_est + s) {
            return Ok((false, format!("{x}: lld {} ld {} ud {} uud {}", p.lld_est, d.liminf_est, d.limsup_est, p.uud_est)));
        }
    }
    Ok((true, "lld <= ld <= ud <= uud".into()))
}

fn polya_envelopes(o: &VerifyOptions) -> Outcome {
    let grid = [0.0, 1.0, 2.0, 4.0, 8.0];
    let sets = random_blocks(6, o.seed ^ 1).into_iter().chain(periodic_fixtures().into_iter().take(4));
    for x in sets {
        let p = polya_bounds(&x, &DEFAULT_THETAS, o.measure_horizon)?;
        let env = alpha_envelopes(&x, &grid, o.measure_horizon)?;
        let s = 3.0 * TOL;
        if !(p.lld_est <= env.lda_inf_est + s
            && env.lda_inf_est <= env.uda_inf_est + s
            && env.uda_inf_est <= p.uud_est + s)
        {
            return Ok((false, format!("{x}: {} {} {} {}", p.lld_est, env.lda_inf_est, env.uda_inf_est, p.uud_est)));
        }
    }
    Ok((true, "lld <= inf lda <= sup uda <= uud".into()))
}

fn polya_duality(o: &VerifyOptions) -> Outcome {
    let mut worst = 0.0f64;
    for x in set_fixtures().into_iter().filter(|x| !matches!(x, SetExpr::Finite(_) | SetExpr::Empty | SetExpr::Nat)) {
        let p = polya_bounds(&x, &DEFAULT_THETAS, o.measure_horizon)?;
        let c = polya_bounds(&SetExpr::compl(x.clone()), &DEFAULT_THETAS, o.measure_horizon)?;
        worst = worst.max((p.uud_est - (1.0 - c.lld_est)).abs());
    }
    Ok((worst <= 2.0 * TOL, format!("max residual {worst:.2e}")))
}

fn polya_periodic(o: &VerifyOptions) -> Outcome {
    for x in periodic_fixtures() {
        let d = exact_density(&x).expect("periodic");
        let d = *d.numer() as f64 / *d.denom() as f64;
        let p = polya_bounds(&x, &DEFAULT_THETAS, o.measure_horizon)?;
        if (p.lld_est - d).abs() > 2.0 * TOL || (p.uud_est - d).abs() > 2.0 * TOL {
            return Ok((false, format!("{x}: exact {d}, [{}, {}]", p.lld_est, p.uud_est)));
        }
    }
    Ok((true, "lld = uud = d on 10 periodic sets".into()))
}

fn gap_ap_removal(o: &VerifyOptions) -> Outcome {
    for (r, m) in [(0, 2), (1, 3), (0, 5), (4, 11)] {
        let a = SetExpr::ap(r, m)?;
        let g = gap_density(&a, o.measure_horizon)?.value();
        let removed = SetExpr::diff(a.clone(), SetExpr::finite([m, m + r, 2 * m + r, 5 * m + r])?);
        let h = gap_density(&removed, o.measure_horizon)?.value();
        if (g - 1.0).abs() > 1e-3 || g != h {
            return Ok((false, format!("{a}: {g} vs {h}")));
        }
    }
    Ok((true, "AP gap density 1, unchanged by finite removal".into()))
}

fn measure_monotonicity(o: &VerifyOptions) -> Outcome {
    let f = FlimOptions::default();
    let chains = [
        ("ap(0,4)", "ap(0,2)"),
        ("inter(blocks(2,2,on=[0]),ap(0,2))", "blocks(2,2,on=[0])"),
        ("blocks(2,2,on=[0])", "union(blocks(2,2,on=[0]),ap(0,3))"),
        ("finite{4,7}", "ap(1,3)"),
    ];
    for spec in measure_fixtures() {
        for (x, y) in chains.iter().map(|(x, y)| (e(x), e(y))) {
            let (tx, ty) = (materialize(&x, o.measure_horizon), materialize(&y, o.measure_horizon));
            if tx.elements().any(|n| !ty.contains(n)) {
                return Ok((false, format!("fixture {x} ⊄ {y}")));
            }
            let (mx, my) = (
                evaluate_measure(&spec, &x, o.measure_horizon, &f)?,
                evaluate_measure(&spec, &y, o.measure_horizon, &f)?,
            );
            if mx > my + EPS_MEASURE {
                return Ok((false, format!("μ({x}) = {mx} > μ({y}) = {my}")));
            }
        }
    }
    Ok((true, "X ⊆ Y ⇒ μ(X) <= μ(Y)".into()))
}

fn measure_range(o: &VerifyOptions) -> Outcome {
    let f = FlimOptions::default();
    for spec in measure_fixtures() {
        if evaluate_measure(&spec, &SetExpr::Nat, o.measure_horizon, &f)? != 1.0 {
            return Ok((false, "μ(nat) != 1".into()));
        }
        for x in periodic_fixtures().into_iter().chain([blocks()]) {
            let v = evaluate_measure(&spec, &x, o.measure_horizon, &f)?;
            if !(0.0..=1.0).contains(&v) {
                return Ok((false, format!("μ({x}) = {v}")));
            }
        }
    }
    Ok((true, "values in [0,1], μ(nat) = 1".into()))
}

fn measure_sandwich(o: &VerifyOptions) -> Outcome {
    let f = FlimOptions::default();
    let est = EstimateOptions::default();
    let filters = [even_bounds(), odd_bounds()];
    let sets = [blocks(), e("blocks(2,2,on=[1])"), e("union(blocks(2,2,on=[0]),ap(0,3))")];
    for alpha in [0.0, 1.0, 2.0] {
        for x in &sets {
            let d = estimate_alpha_density(x, alpha, o.measure_horizon, &est)?;
            for filter in &filters {
                let mu = mu_alpha(x, alpha, filter, o.measure_horizon, &f)?;
                if mu < d.liminf_est - EPS_MEASURE || mu > d.limsup_est + EPS_MEASURE {
                    return Ok((false, format!("{x}, alpha {alpha}: μ {mu} outside [{}, {}]", d.liminf_est, d.limsup_est)));
                }
            }
        }
    }
    Ok((true, "lda <= μ_α <= uda".into()))
}

fn measure_mcopy_scaling(o: &VerifyOptions) -> Outcome {
    let f = FlimOptions::default();
    let m = 3;
    let mut worst = 0.0f64;
    for x in [blocks(), e("ap(1,2)"), e("blocks(2,2,on=[1])")] {
        let copy = SetExpr::m_copy(x.clone(), m, CopyRule::First)?;
        let base_idx = even_bounds().indices(o.measure_horizon / (m + 1), f.max_terms)?;
        let moved = FilterSurrogate::Explicit { indices: base_idx.iter().map(|n| m * n + m).collect() };
        let mu_x = mu_alpha(&x, 0.0, &FilterSurrogate::Explicit { indices: base_idx }, o.measure_horizon, &f)?;
        let mu_c = mu_alpha(&copy, 0.0, &moved, o.measure_horizon, &f)?;
        worst = worst.max((mu_x - m as f64 * mu_c).abs());
    }
    Ok((worst <= EPS_MEASURE, format!("max |μ(A) - 3μ(copy)| = {worst:.2e}")))
}

fn construction_intermediate(o: &VerifyOptions) -> Outcome {
    let h = o.construction_horizon;
    for (a, b) in [("ap(0,3)", "ap(0,2)"), ("ap(0,2)", "nat"), ("ap(1,5)", "ap(0,2)")] {
        let (a, b) = (e(a), e(b));
        let c = Construction::run(&a, &b, h, "intermediate_subset");
        if let Some(n) = inclusion_violation(&c, &a, &b, h) {
            return Ok((false, format!("({a}, {b}) fails at n = {n}")));
        }
        let d = intermediate_subset(&a, &b, h)?;
        let da = exact_density(&a).map(|r| *r.numer() as f64 / *r.denom() as f64).unwrap_or(0.0);
        if (d.count(h) as f64 / h as f64 - da).abs() > 0.02 {
            return Ok((false, format!("({a}, {b}): D(h)/h = {}", d.count(h) as f64 / h as f64)));
        }
    }
    if intermediate_subset(&SetExpr::Empty, &e("ap(0,2)"), h)?.count(h) != 0 {
        return Ok((false, "A = ∅ should give D = ∅".into()));
    }
    Ok((true, "A∩B ⊆ D ⊆ B, D'(n) <= A'(n), d(D) = d(A)".into()))
}

/// First `n` violating `A∩B ⊆ D ⊆ B` or `D'(n) <= A'(n)`.
pub fn inclusion_violation(c: &Construction, a: &SetExpr, b: &SetExpr, h: u64) -> Option<u64> {
    let (ta, tb) = (materialize(a, h), materialize(b, h));
    let (mut dp, mut ap) = (0u64, 0u64);
    for n in 1..=h {
        let d = c.set.contains(n);
        dp += c.d_prime.contains(n) as u64;
        ap += c.a_prime.contains(n) as u64;
        if (ta.contains(n) && tb.contains(n) && !d) || (d && !tb.contains(n)) || dp > ap {
            return Some(n);
        }
    }
    None
}

fn construction_difference(o: &VerifyOptions) -> Outcome {
    let h = o.construction_horizon;
    for (a, b) in [("ap(0,4)", "ap(0,2)"), ("ap(1,3)", "ap(0,2)"), ("ap(0,2)", "ap(0,2)")] {
        let (a, b) = (e(a), e(b));
        let d = difference_matching_subset(&a, &b, h)?;
        let worst = (h / 2..=h)
            .map(|n| (d.count(n) as f64 - count(&a, n) as f64).abs() / n as f64)
            .fold(0.0, f64::max);
        if worst > 0.02 {
            return Ok((false, format!("({a}, {b}): {worst}")));
        }
    }
    Ok((true, "|D(n) - A(n)|/n <= 0.02 on [h/2, h]".into()))
}

fn construction_superset(o: &VerifyOptions) -> Outcome {
    let h = o.construction_horizon;
    for (a, b) in [("ap(0,4)", "ap(0,2)"), ("ap(0,5)", "ap(1,2)"), ("empty", "ap(0,3)")] {
        let (a, b) = (e(a), e(b));
        let d = corollary_superset(&a, &b, h)?;
        let (ta, tb) = (materialize(&a, h), materialize(&b, h));
        if let Some(n) = (1..=h).find(|&n| {
            (ta.contains(n) && !d.contains(n)) || (d.contains(n) && !ta.contains(n) && !tb.contains(n))
        }) {
            return Ok((false, format!("({a}, {b}) fails inclusion at {n}")));
        }
        let db = exact_density(&b).map(|r| *r.numer() as f64 / *r.denom() as f64).unwrap();
        if (d.count(h) as f64 / h as f64 - db).abs() > 0.02 {
            return Ok((false, format!("({a}, {b}): d(D) off")));
        }
    }
    Ok((true, "A ⊆ D ⊆ A∪B, d(D) = d(B)".into()))
}

fn closed_form(alpha: f64) -> (f64, f64) {
    let q = 2f64.powf(alpha + 1.0);
    (1.0 / (q + 1.0), q / (q + 1.0))
}

fn acc1_closed_forms(_: &VerifyOptions) -> Outcome {
    let mut worst = 0.0f64;
    let mut slowest = 0u128;
    for alpha in [0.0, 0.5, 1.0, 2.0] {
        let t = Instant::now();
        let (lo, hi) = exact_alpha_extremes(&blocks(), alpha)?.expect("closed form");
        slowest = slowest.max(t.elapsed().as_micros());
        let (elo, ehi) = closed_form(alpha);
        worst = worst.max(((lo - elo) / elo).abs()).max(((hi - ehi) / ehi).abs());
    }
    Ok((worst <= 1e-12 && slowest < 1000, format!("max rel err {worst:.1e}, slowest {slowest} µs")))
}

fn acc2_numerical(o: &VerifyOptions) -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for alpha in [0.0, 1.0] {
        let t = Instant::now();
        let d = estimate_alpha_density(&blocks(), alpha, o.horizon, &EstimateOptions::default())?;
        let secs = t.elapsed().as_secs_f64();
        let (lo, hi) = closed_form(alpha);
        let err = (d.liminf_est - lo).abs().max((d.limsup_est - hi).abs());
        ok &= err <= 1e-2 && secs < 30.0;
        detail.push(format!("alpha {alpha}: err {err:.1e} in {secs:.1}s"));
    }
    Ok((ok, detail.join("; ")))
}

fn acc3_log_density(o: &VerifyOptions) -> Outcome {
    let d = estimate_alpha_density(&blocks(), -1.0, o.horizon, &EstimateOptions::default())?;
    let v = d.value.unwrap_or(f64::NAN);
    Ok(((v - 0.5).abs() <= 1e-2, format!("value {v:.5} (extrapolated: {})", d.extrapolated)))
}

fn acc4_polya(o: &VerifyOptions) -> Outcome {
    let p = polya_bounds(&blocks(), &DEFAULT_THETAS, o.horizon)?;
    Ok((p.lld_est <= 0.02 && p.uud_est >= 0.98, format!("lld {:.4}, uud {:.4}", p.lld_est, p.uud_est)))
}

fn acc5_gap(o: &VerifyOptions) -> Outcome {
    let g = gap_density(&blocks(), o.horizon)?.value();
    let a = gap_density(&SetExpr::ap(0, 5)?, o.horizon)?.value();
    Ok(((g - 2.0).abs() <= 1e-3 && (a - 1.0).abs() <= 1e-3, format!("blocks {g:.6}, ap(0,5) {a:.6}")))
}

fn acc6_lauwers(o: &VerifyOptions) -> Outcome {
    let f = FlimOptions::default();
    let mu = mu_alpha(&blocks(), 1.0, &odd_bounds(), o.measure_horizon, &f)?;
    let ud = estimate_alpha_density(&blocks(), 0.0, o.measure_horizon, &EstimateOptions::default())?.limsup_est;
    let ok = (mu - 0.8).abs() <= 0.02 && mu > 2.0 / 3.0 + 0.02 && mu > ud + 0.02;
    Ok((ok, format!("μ_1 = {mu:.4}, ud = {ud:.4}")))
}

fn acc7_witness(o: &VerifyOptions) -> Outcome {
    let f = FlimOptions::default();
    let mut detail = Vec::new();
    let mut ok = true;
    for x in [0.1, 0.5, 0.9] {
        let spec = range_witness(&blocks(), x, o.measure_horizon, &f)?;
        let v = evaluate_measure(&spec, &blocks(), o.measure_horizon, &f)?;
        ok &= (v - x).abs() <= 0.02;
        detail.push(format!("{x} -> {v:.4}"));
    }
    Ok((ok, detail.join(", ")))
}

fn acc8_construction(o: &VerifyOptions) -> Outcome {
    let h = o.construction_horizon;
    let (a, b) = (e("ap(0,3)"), e("ap(0,2)"));
    let t = Instant::now();
    let d = intermediate_subset(&a, &b, h)?;
    let secs = t.elapsed().as_secs_f64();
    let c = Construction::run(&a, &b, h, "intermediate_subset");
    let bad = inclusion_violation(&c, &a, &b, h);
    let ratio = d.count(h) as f64 / h as f64;
    let ok = bad.is_none() && (ratio - 1.0 / 3.0).abs() <= 0.02 && secs < 1.0;
    Ok((ok, format!("D(h)/h = {ratio:.5}, violation {bad:?}, {secs:.3}s")))
}

fn acc9_axioms(o: &VerifyOptions) -> Outcome {
    let f = FlimOptions::default();
    let (pairs, sets) = (disjoint_pairs(), periodic_fixtures());
    for (i, spec) in measure_fixtures().iter().enumerate() {
        let add = additivity_check(spec, &pairs, o.measure_horizon, EPS_MEASURE, &f)?;
        let ext = extension_check(spec, &sets, o.measure_horizon, EPS_MEASURE, &f)?;
        if !add.passed || !ext.passed {
            return Ok((false, format!("spec {i}: additivity {}, extension {}", add.passed, ext.passed)));
        }
    }
    Ok((true, "5 specs × (10 pairs + 10 periodic sets)".into()))
}

fn acc10_properties(o: &VerifyOptions) -> Outcome {
    let h = o.measure_horizon;
    let chain = [-1.0, 0.0, 1.0, 2.0, 4.0];
    let sets = random_blocks(20, o.seed);
    for x in &sets {
        for w in chain.windows(2) {
            let r = rajagopal_monotonicity_check(x, w[0], w[1], h)?;
            if !r.holds {
                return Ok((false, format!("chain fails for {x}: {r:?}")));
            }
        }
    }
    for (alpha, delta) in [(0.0, 0.1), (1.0, 0.5)] {
        let r = ggm_continuity_check(&blocks(), alpha, delta, h)?;
        if !r.holds {
            return Ok((false, format!("continuity fails: {r:?}")));
        }
    }
    let est = EstimateOptions::default();
    for x in sets.iter().take(5) {
        let a = estimate_alpha_density(x, 0.0, h, &est)?;
        let c = estimate_alpha_density(&SetExpr::compl(x.clone()), 0.0, h, &est)?;
        if (c.liminf_est - (1.0 - a.limsup_est)).abs() > 2.0 * TOL {
            return Ok((false, format!("duality fails for {x}")));
        }
    }
    let sample = density_set_sample(&blocks(), 50, h, o.seed, &SAMPLE_PALETTE)?;
    let bad = sample.line_violations(EPS_LINE);
    if !bad.is_empty() {
        return Ok((false, format!("{} sample points below the line", bad.len())));
    }
    let osc = oscillation_diagnostic(&blocks(), 0.0, h)?;
    Ok((osc <= 1e-3, format!("20 chains, 2 continuity bounds, 50 samples, oscillation {osc:.1e}")))
}
