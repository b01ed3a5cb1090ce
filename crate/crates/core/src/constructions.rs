//! Explicit set constructions: the inductive intermediate-subset algorithm,
//! its difference-matching and superset variants, and the block
//! counterexample.
//!
//! Constructions are materialized on `[1, horizon]`. The induction decides
//! membership of `n` from the prefix `[1, n]` only, so rebuilding at a
//! larger horizon from the same provenance extends the set without changing
//! its prefix.

use serde::Serialize;

use crate::density_core::{
    estimate_alpha_density, estimate_from_table, geometric_grid, DensityEstimate, EstimateOptions,
};
use crate::error::{DensityError, Result};
use crate::measures::difference_limit;
use crate::set_algebra::{materialize, MemberTable, PrefixTable, SetExpr};
use crate::tolerances::{GRID_GROWTH, TOL};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub algorithm: &'static str,
    pub sources: Vec<SetExpr>,
    pub horizon: u64,
}

#[derive(Debug, Clone)]
pub struct ConstructedSet {
    members: MemberTable,
    prefix: PrefixTable,
    pub provenance: Provenance,
}

impl ConstructedSet {
    fn new(members: MemberTable, provenance: Provenance) -> Self {
        let prefix = members.prefix_counts();
        Self { members, prefix, provenance }
    }

    /// Wraps an already materialized set.
    pub fn from_table(members: MemberTable, algorithm: &'static str, sources: Vec<SetExpr>) -> Self {
        let horizon = members.horizon();
        Self::new(members, Provenance { algorithm, sources, horizon })
    }

    pub fn horizon(&self) -> u64 {
        self.members.horizon()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.members.contains(n)
    }

    /// `D(n)` for `n <= horizon`.
    pub fn count(&self, n: u64) -> u64 {
        self.prefix.count(n)
    }

    pub fn members(&self) -> &MemberTable {
        &self.members
    }

    /// Maximal runs of members as `"a-b,c-d"`; singleton runs print as `"a"`.
    pub fn to_rle(&self) -> String {
        let mut runs = Vec::new();
        let mut start: Option<u64> = None;
        for n in 1..=self.horizon() + 1 {
            let inside = n <= self.horizon() && self.contains(n);
            match (inside, start) {
                (true, None) => start = Some(n),
                (false, Some(s)) => {
                    runs.push(if s == n - 1 { s.to_string() } else { format!("{s}-{}", n - 1) });
                    start = None;
                }
                _ => {}
            }
        }
        runs.join(",")
    }

    /// Asymptotic density estimate over the materialized prefix.
    pub fn density_estimate(&self) -> Result<DensityEstimate> {
        let grid = geometric_grid(self.horizon(), GRID_GROWTH);
        estimate_from_table(&self.members, 0.0, &grid, None, &EstimateOptions::default())
    }
}

/// The raw induction together with the primed sets it runs on.
#[derive(Debug, Clone)]
pub struct Construction {
    pub set: ConstructedSet,
    /// `A' = A ∖ (A ∩ B)`.
    pub a_prime: MemberTable,
    /// `B' = B ∖ (A ∩ B)`.
    pub b_prime: MemberTable,
    /// The induced subset `D' ⊆ B'`.
    pub d_prime: MemberTable,
    /// Largest `n ∈ B'` rejected because `D'(n−1) + 1 > A'(n)`.
    pub last_rejection: Option<u64>,
}

impl Construction {
    /// Runs the induction without any density precondition: with
    /// `C = A ∩ B`, an element `n ∈ B'` joins `D'` exactly when
    /// `D'(n−1) + 1 <= A'(n)`. The result is `D = C ∪ D'`.
    pub fn run(a: &SetExpr, b: &SetExpr, horizon: u64, algorithm: &'static str) -> Self {
        let (ta, tb) = (materialize(a, horizon), materialize(b, horizon));
        let mut a_prime = MemberTable::empty(horizon);
        let mut b_prime = MemberTable::empty(horizon);
        let mut d_prime = MemberTable::empty(horizon);
        let mut d = MemberTable::empty(horizon);
        let (mut a_count, mut d_count) = (0u64, 0u64);
        let mut last_rejection = None;
        for n in 1..=horizon {
            let (in_a, in_b) = (ta.contains(n), tb.contains(n));
            if in_a && in_b {
                d.set(n, true);
                continue;
            }
            if in_a {
                a_prime.set(n, true);
                a_count += 1;
            } else if in_b {
                b_prime.set(n, true);
                if d_count < a_count {
                    d_count += 1;
                    d_prime.set(n, true);
                    d.set(n, true);
                } else {
                    last_rejection = Some(n);
                }
            }
        }
        let provenance = Provenance {
            algorithm,
            sources: vec![a.clone(), b.clone()],
            horizon,
        };
        Self {
            set: ConstructedSet::new(d, provenance),
            a_prime,
            b_prime,
            d_prime,
            last_rejection,
        }
    }
}

fn density_value(expr: &SetExpr, horizon: u64) -> Result<f64> {
    let est = estimate_alpha_density(expr, 0.0, horizon, &EstimateOptions::default())?;
    est.value.ok_or_else(|| {
        DensityError::PreconditionFailed(format!(
            "density of {expr} not resolved at horizon {horizon} (spread {:.3e})",
            est.limsup_est - est.liminf_est
        ))
    })
}

fn require_gap(a: &SetExpr, b: &SetExpr, horizon: u64) -> Result<()> {
    let (da, db) = (density_value(a, horizon)?, density_value(b, horizon)?);
    if db - da < 3.0 * TOL {
        return Err(DensityError::PreconditionFailed(format!(
            "need d(A) < d(B) with gap >= {}: got {da:.4} and {db:.4}",
            3.0 * TOL
        )));
    }
    Ok(())
}

/// `D` with `A ∩ B ⊆ D ⊆ B` and `d(D) = d(A)`, given `d(A) < d(B)`.
pub fn intermediate_subset(a: &SetExpr, b: &SetExpr, horizon: u64) -> Result<ConstructedSet> {
    require_gap(a, b, horizon)?;
    Ok(Construction::run(a, b, horizon, "intermediate_subset").set)
}

/// `D` with `A ∩ B ⊆ D ⊆ B` and `(D(n) − A(n))/n → 0`, given that
/// `(B(n) − A(n))/n` converges to a nonnegative limit.
pub fn difference_matching_subset(a: &SetExpr, b: &SetExpr, horizon: u64) -> Result<ConstructedSet> {
    let (limit, spread) = difference_limit(a, b, horizon)?;
    if spread > TOL || limit < -TOL {
        return Err(DensityError::PreconditionFailed(format!(
            "(B(n) - A(n))/n not resolved to a nonnegative limit: midpoint {limit:.4}, spread {spread:.3e}"
        )));
    }
    Ok(Construction::run(a, b, horizon, "difference_matching_subset").set)
}

/// `D` with `A ⊆ D ⊆ A ∪ B` and `d(D) = d(B)`, given `d(A) < d(B)`: the
/// complement of the intermediate subset between `ℕ∖B` and `ℕ∖A`.
pub fn corollary_superset(a: &SetExpr, b: &SetExpr, horizon: u64) -> Result<ConstructedSet> {
    require_gap(a, b, horizon)?;
    let (ca, cb) = (SetExpr::compl(a.clone()), SetExpr::compl(b.clone()));
    let e = Construction::run(&cb, &ca, horizon, "corollary_superset").set;
    let mut d = MemberTable::empty(horizon);
    for n in 1..=horizon {
        d.set(n, !e.contains(n));
    }
    let provenance = Provenance {
        algorithm: "corollary_superset",
        sources: vec![a.clone(), b.clone()],
        horizon,
    };
    Ok(ConstructedSet::new(d, provenance))
}

/// `⋃_k (2^{2k}, 2^{2k+1}]`, whose α-densities differ for every α.
pub fn counterexample_set() -> SetExpr {
    SetExpr::blocks(2, 2, [0]).expect("valid block set")
}
