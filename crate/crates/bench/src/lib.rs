//! Fixtures shared by the benchmarks.

use densitylab::{counterexample_set, SetExpr};

/// Expressions of increasing evaluation cost.
pub fn fixtures() -> Vec<(&'static str, SetExpr)> {
    vec![
        ("ap", SetExpr::ap(0, 7).unwrap()),
        ("blocks", counterexample_set()),
        ("composite", "union(inter(ap(1,3),blocks(2,2,on=[1])),finite{5,9})".parse().unwrap()),
        ("mcopy_seeded", "mcopy(blocks(2,2,on=[0]),3,seed:7)".parse().unwrap()),
    ]
}
