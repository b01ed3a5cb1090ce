//! Symbolic subsets of ℕ = {1, 2, 3, …}.
//!
//! A [`SetExpr`] is built from a few primitive families (finite sets,
//! arithmetic progressions, geometric block sets) closed under the boolean
//! operations and the m-copy transform. Counting functions have closed forms
//! for the primitives; everything else is answered by materializing a
//! membership table over a prefix `[1, n]`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{DensityError, Result};
use crate::numeric::{check_alpha, mix64, weight, CompensatedSum};

/// How an m-copy picks `b_i` from `{m·a_i + 1, …, m·a_i + m}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CopyRule {
    /// `b_i = m·a_i + 1`.
    #[default]
    First,
    /// `b_i = m·a_i + t` with `1 <= t <= m`.
    Offset(u64),
    /// `b_i` uniform in the allowed range, derived from `(seed, a_i)`.
    Seeded(u64),
}

impl CopyRule {
    /// The offset `t ∈ [1, m]` chosen for element `a`.
    #[inline]
    pub fn offset_for(self, a: u64, m: u64) -> u64 {
        match self {
            CopyRule::First => 1,
            CopyRule::Offset(t) => t,
            CopyRule::Seeded(seed) => 1 + mix64(seed ^ mix64(a)) % m,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SetExpr {
    Nat,
    Empty,
    /// Strictly increasing, all elements `>= 1`.
    Finite(Vec<u64>),
    /// `{n >= 1 : n ≡ residue (mod modulus)}`.
    Ap { residue: u64, modulus: u64 },
    /// Union of the blocks `(base^j, base^(j+1)]` with `j mod period ∈ on`.
    Blocks { base: u64, period: u32, on: Vec<u32> },
    Union(Box<SetExpr>, Box<SetExpr>),
    Inter(Box<SetExpr>, Box<SetExpr>),
    Diff(Box<SetExpr>, Box<SetExpr>),
    Compl(Box<SetExpr>),
    MCopy {
        inner: Box<SetExpr>,
        m: u64,
        rule: CopyRule,
    },
}

impl SetExpr {
    pub fn finite<I: IntoIterator<Item = u64>>(elements: I) -> Result<Self> {
        let mut v: Vec<u64> = elements.into_iter().collect();
        if v.contains(&0) {
            return Err(DensityError::InvalidSet(
                "finite sets contain positive integers only".into(),
            ));
        }
        v.sort_unstable();
        v.dedup();
        Ok(SetExpr::Finite(v))
    }

    pub fn ap(residue: u64, modulus: u64) -> Result<Self> {
        if modulus == 0 || residue >= modulus {
            return Err(DensityError::InvalidSet(format!(
                "ap({residue},{modulus}) needs 0 <= residue < modulus"
            )));
        }
        Ok(SetExpr::Ap { residue, modulus })
    }

    pub fn blocks<I: IntoIterator<Item = u32>>(base: u64, period: u32, on: I) -> Result<Self> {
        if base < 2 || period == 0 {
            return Err(DensityError::InvalidSet(format!(
                "blocks needs base >= 2 and period >= 1 (got base {base}, period {period})"
            )));
        }
        let mut on: Vec<u32> = on.into_iter().collect();
        if let Some(&r) = on.iter().find(|&&r| r >= period) {
            return Err(DensityError::InvalidSet(format!(
                "blocks residue {r} not below period {period}"
            )));
        }
        on.sort_unstable();
        on.dedup();
        Ok(SetExpr::Blocks { base, period, on })
    }

    pub fn union(a: SetExpr, b: SetExpr) -> Self {
        SetExpr::Union(Box::new(a), Box::new(b))
    }

    pub fn inter(a: SetExpr, b: SetExpr) -> Self {
        SetExpr::Inter(Box::new(a), Box::new(b))
    }

    pub fn diff(a: SetExpr, b: SetExpr) -> Self {
        SetExpr::Diff(Box::new(a), Box::new(b))
    }

    pub fn compl(a: SetExpr) -> Self {
        SetExpr::Compl(Box::new(a))
    }

    pub fn m_copy(inner: SetExpr, m: u64, rule: CopyRule) -> Result<Self> {
        m_copy(inner, m, rule)
    }

    /// Re-checks the invariants of every node (for trees built by hand).
    pub fn validate(&self) -> Result<()> {
        match self {
            SetExpr::Nat | SetExpr::Empty => Ok(()),
            SetExpr::Finite(v) => {
                if v.first() == Some(&0) || v.windows(2).any(|w| w[0] >= w[1]) {
                    Err(DensityError::InvalidSet(
                        "finite list must be strictly increasing and positive".into(),
                    ))
                } else {
                    Ok(())
                }
            }
            SetExpr::Ap { residue, modulus } => SetExpr::ap(*residue, *modulus).map(|_| ()),
            SetExpr::Blocks { base, period, on } => {
                if on.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(DensityError::InvalidSet("blocks residues must be sorted".into()));
                }
                SetExpr::blocks(*base, *period, on.iter().copied()).map(|_| ())
            }
            SetExpr::Union(a, b) | SetExpr::Inter(a, b) | SetExpr::Diff(a, b) => {
                a.validate()?;
                b.validate()
            }
            SetExpr::Compl(a) => a.validate(),
            SetExpr::MCopy { inner, m, rule } => {
                check_copy(*m, *rule)?;
                inner.validate()
            }
        }
    }

    /// Algebraic clean-up that preserves the denoted set.
    pub fn simplify(&self) -> SetExpr {
        use SetExpr::*;
        match self {
            Ap { modulus: 1, .. } => Nat,
            Finite(v) if v.is_empty() => Empty,
            Blocks { on, .. } if on.is_empty() => Empty,
            Union(a, b) => match (a.simplify(), b.simplify()) {
                (Empty, x) | (x, Empty) => x,
                (Nat, _) | (_, Nat) => Nat,
                (x, y) if x == y => x,
                (x, y) => SetExpr::union(x, y),
            },
            Inter(a, b) => match (a.simplify(), b.simplify()) {
                (Empty, _) | (_, Empty) => Empty,
                (Nat, x) | (x, Nat) => x,
                (x, y) if x == y => x,
                (x, y) => SetExpr::inter(x, y),
            },
            Diff(a, b) => match (a.simplify(), b.simplify()) {
                (Empty, _) | (_, Nat) => Empty,
                (x, Empty) => x,
                (x, y) if x == y => Empty,
                (x, y) => SetExpr::diff(x, y),
            },
            Compl(a) => match a.simplify() {
                Nat => Empty,
                Empty => Nat,
                Compl(inner) => *inner,
                x => SetExpr::compl(x),
            },
            MCopy { inner, m, rule } => match inner.simplify() {
                Empty => Empty,
                x => MCopy {
                    inner: Box::new(x),
                    m: *m,
                    rule: *rule,
                },
            },
            other => other.clone(),
        }
    }

    /// True when `count` has an `O(log n)`-ish closed form for this tree.
    fn has_closed_count(&self) -> bool {
        match self {
            SetExpr::Nat
            | SetExpr::Empty
            | SetExpr::Finite(_)
            | SetExpr::Ap { .. }
            | SetExpr::Blocks { .. } => true,
            SetExpr::Compl(e) => e.has_closed_count(),
            SetExpr::MCopy { inner, .. } => inner.has_closed_count(),
            _ => false,
        }
    }

    /// Upper bound on the elements when the set is provably finite.
    pub fn finite_bound(&self) -> Option<u64> {
        match self {
            SetExpr::Empty => Some(0),
            SetExpr::Finite(v) => Some(v.last().copied().unwrap_or(0)),
            SetExpr::Blocks { on, .. } if on.is_empty() => Some(0),
            SetExpr::Union(a, b) => Some(a.finite_bound()?.max(b.finite_bound()?)),
            SetExpr::Inter(a, b) => match (a.finite_bound(), b.finite_bound()) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (Some(x), None) | (None, Some(x)) => Some(x),
                (None, None) => None,
            },
            SetExpr::Diff(a, _) => a.finite_bound(),
            SetExpr::MCopy { inner, m, .. } => {
                let b = inner.finite_bound()?;
                Some(b.saturating_mul(*m).saturating_add(*m))
            }
            _ => None,
        }
    }

    /// Points where liminf/limsup of the ratio sequences are attained:
    /// block boundaries of every `Blocks` subterm, pushed through m-copies.
    pub fn critical_points(&self, horizon: u64) -> Vec<u64> {
        let mut out = Vec::new();
        self.collect_critical(horizon, &mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    fn collect_critical(&self, horizon: u64, out: &mut Vec<u64>) {
        match self {
            SetExpr::Blocks { base, .. } => {
                let mut p: u64 = 1;
                while p <= horizon {
                    out.push(p);
                    match p.checked_mul(*base) {
                        Some(next) => p = next,
                        None => break,
                    }
                }
            }
            SetExpr::Union(a, b) | SetExpr::Inter(a, b) | SetExpr::Diff(a, b) => {
                a.collect_critical(horizon, out);
                b.collect_critical(horizon, out);
            }
            SetExpr::Compl(a) => a.collect_critical(horizon, out),
            SetExpr::MCopy { inner, m, .. } => {
                // A_copy(m·c + m) = A(c).
                let mut inner_pts = Vec::new();
                inner.collect_critical(horizon / m, &mut inner_pts);
                out.extend(
                    inner_pts
                        .into_iter()
                        .map(|c| m * c + m)
                        .filter(|&x| x <= horizon),
                );
            }
            _ => {}
        }
    }

    /// `(base, period)` of every `Blocks` subterm.
    pub fn block_structures(&self) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        self.collect_blocks(&mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    fn collect_blocks(&self, out: &mut Vec<(u64, u32)>) {
        match self {
            SetExpr::Blocks { base, period, .. } => out.push((*base, *period)),
            SetExpr::Union(a, b) | SetExpr::Inter(a, b) | SetExpr::Diff(a, b) => {
                a.collect_blocks(out);
                b.collect_blocks(out);
            }
            SetExpr::Compl(a) => a.collect_blocks(out),
            SetExpr::MCopy { inner, .. } => inner.collect_blocks(out),
            _ => {}
        }
    }
}

fn check_copy(m: u64, rule: CopyRule) -> Result<()> {
    if m == 0 {
        return Err(DensityError::InvalidSet("m-copy needs m >= 1".into()));
    }
    if let CopyRule::Offset(t) = rule {
        if t == 0 || t > m {
            return Err(DensityError::InvalidSet(format!(
                "m-copy offset {t} outside [1, {m}]"
            )));
        }
    }
    Ok(())
}

/// Wraps `inner` in an m-copy node.
pub fn m_copy(inner: SetExpr, m: u64, rule: CopyRule) -> Result<SetExpr> {
    check_copy(m, rule)?;
    Ok(SetExpr::MCopy {
        inner: Box::new(inner),
        m,
        rule,
    })
}

/// Index `j` of the block `(base^j, base^(j+1)]` holding `n >= 2`.
fn block_index(base: u64, n: u64) -> u32 {
    let (b, n) = (base as u128, n as u128);
    let mut p: u128 = 1;
    let mut j = 0;
    while n > p * b {
        p *= b;
        j += 1;
    }
    j
}

/// Membership test (the characteristic function of the set).
pub fn contains(expr: &SetExpr, n: u64) -> bool {
    if n == 0 {
        return false;
    }
    match expr {
        SetExpr::Nat => true,
        SetExpr::Empty => false,
        SetExpr::Finite(v) => v.binary_search(&n).is_ok(),
        SetExpr::Ap { residue, modulus } => n % modulus == *residue,
        SetExpr::Blocks { base, period, on } => {
            n >= 2 && on.binary_search(&(block_index(*base, n) % period)).is_ok()
        }
        SetExpr::Union(a, b) => contains(a, n) || contains(b, n),
        SetExpr::Inter(a, b) => contains(a, n) && contains(b, n),
        SetExpr::Diff(a, b) => contains(a, n) && !contains(b, n),
        SetExpr::Compl(a) => !contains(a, n),
        SetExpr::MCopy { inner, m, rule } => {
            if n <= *m {
                return false;
            }
            let a = (n - 1) / m;
            let t = n - m * a;
            contains(inner, a) && rule.offset_for(a, *m) == t
        }
    }
}

/// `A(n) = |A ∩ [1, n]|`.
pub fn count(expr: &SetExpr, n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    if expr.has_closed_count() {
        closed_count(expr, n)
    } else {
        cached_prefix(expr, n).count(n)
    }
}

fn closed_count(expr: &SetExpr, n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    match expr {
        SetExpr::Nat => n,
        SetExpr::Empty => 0,
        SetExpr::Finite(v) => v.partition_point(|&x| x <= n) as u64,
        SetExpr::Ap { residue, modulus } => {
            if *residue == 0 {
                n / modulus
            } else if n >= *residue {
                (n - residue) / modulus + 1
            } else {
                0
            }
        }
        SetExpr::Blocks { base, period, on } => {
            let mut total = 0u64;
            let mut lo: u64 = 1;
            let mut j: u32 = 0;
            while lo < n {
                let hi = lo.saturating_mul(*base);
                if on.binary_search(&(j % period)).is_ok() {
                    total += hi.min(n) - lo;
                }
                lo = hi;
                j += 1;
            }
            total
        }
        SetExpr::Compl(e) => n - closed_count(e, n),
        SetExpr::MCopy { inner, m, rule } => {
            // n = m·q + s with s ∈ [1, m]; elements a < q all land below n,
            // a = q lands below n iff its offset is at most s.
            let q = (n - 1) / m;
            if q == 0 {
                return 0;
            }
            let s = n - m * q;
            let last = contains(inner, q) && rule.offset_for(q, *m) <= s;
            closed_count(inner, q - 1) + last as u64
        }
        _ => unreachable!("closed_count called on a composite expression"),
    }
}

/// Dense membership over `[1, horizon]`; index 0 is always absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemberTable {
    bits: Vec<bool>,
}

impl MemberTable {
    pub fn empty(horizon: u64) -> Self {
        Self {
            bits: vec![false; horizon as usize + 1],
        }
    }

    pub fn from_bits(mut bits: Vec<bool>) -> Self {
        if bits.is_empty() {
            bits.push(false);
        }
        bits[0] = false;
        Self { bits }
    }

    pub fn horizon(&self) -> u64 {
        (self.bits.len() - 1) as u64
    }

    #[inline]
    pub fn contains(&self, n: u64) -> bool {
        self.bits.get(n as usize).copied().unwrap_or(false)
    }

    #[inline]
    pub fn set(&mut self, n: u64, value: bool) {
        if n >= 1 {
            self.bits[n as usize] = value;
        }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Elements in increasing order.
    pub fn elements(&self) -> impl Iterator<Item = u64> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i as u64)
    }

    pub fn count(&self, n: u64) -> u64 {
        let n = n.min(self.horizon()) as usize;
        self.bits[..=n].iter().filter(|&&b| b).count() as u64
    }

    pub fn prefix_counts(&self) -> PrefixTable {
        let mut counts = Vec::with_capacity(self.bits.len());
        let mut c = 0u32;
        for &b in &self.bits {
            c += b as u32;
            counts.push(c);
        }
        PrefixTable { counts }
    }

    fn zip_with(mut self, other: &MemberTable, f: impl Fn(bool, bool) -> bool) -> Self {
        for (x, &y) in self.bits.iter_mut().zip(&other.bits) {
            *x = f(*x, y);
        }
        self.bits[0] = false;
        self
    }
}

/// Prefix counts `A(0..=horizon)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixTable {
    counts: Vec<u32>,
}

impl PrefixTable {
    pub fn horizon(&self) -> u64 {
        (self.counts.len() - 1) as u64
    }

    /// `A(n)`; panics if `n` exceeds the horizon.
    #[inline]
    pub fn count(&self, n: u64) -> u64 {
        self.counts[n as usize] as u64
    }
}

/// Membership of `expr` over `[1, horizon]`.
pub fn materialize(expr: &SetExpr, horizon: u64) -> MemberTable {
    let mut t = MemberTable::empty(horizon);
    match expr {
        SetExpr::Nat => {
            t.bits.iter_mut().skip(1).for_each(|b| *b = true);
        }
        SetExpr::Empty => {}
        SetExpr::Finite(v) => {
            for &x in v.iter().take_while(|&&x| x <= horizon) {
                t.set(x, true);
            }
        }
        SetExpr::Ap { residue, modulus } => {
            let mut n = if *residue == 0 { *modulus } else { *residue };
            while n <= horizon {
                t.set(n, true);
                n += modulus;
            }
        }
        SetExpr::Blocks { base, period, on } => {
            let mut lo: u64 = 1;
            let mut j: u32 = 0;
            while lo < horizon {
                let hi = lo.saturating_mul(*base);
                if on.binary_search(&(j % period)).is_ok() {
                    let end = hi.min(horizon) as usize;
                    t.bits[lo as usize + 1..=end].iter_mut().for_each(|b| *b = true);
                }
                lo = hi;
                j += 1;
            }
        }
        SetExpr::Union(a, b) => {
            t = materialize(a, horizon).zip_with(&materialize(b, horizon), |x, y| x || y)
        }
        SetExpr::Inter(a, b) => {
            t = materialize(a, horizon).zip_with(&materialize(b, horizon), |x, y| x && y)
        }
        SetExpr::Diff(a, b) => {
            t = materialize(a, horizon).zip_with(&materialize(b, horizon), |x, y| x && !y)
        }
        SetExpr::Compl(a) => {
            t = materialize(a, horizon);
            t.bits.iter_mut().for_each(|b| *b = !*b);
            t.bits[0] = false;
        }
        SetExpr::MCopy { inner, m, rule } => {
            if horizon > *m {
                let inner_t = materialize(inner, (horizon - 1) / m);
                for a in inner_t.elements() {
                    let b = m * a + rule.offset_for(a, *m);
                    if b <= horizon {
                        t.set(b, true);
                    }
                }
            }
        }
    }
    t
}

const PREFIX_CACHE_ENTRIES: usize = 8;

type PrefixCache = Mutex<HashMap<SetExpr, Arc<PrefixTable>>>;

fn prefix_cache() -> &'static PrefixCache {
    static CACHE: OnceLock<PrefixCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Prefix counts for composite expressions, memoized per expression.
/// A table is computed outside the lock and published whole, so readers
/// never observe a partial fill.
fn cached_prefix(expr: &SetExpr, n: u64) -> Arc<PrefixTable> {
    if let Some(t) = prefix_cache().lock().unwrap().get(expr) {
        if t.horizon() >= n {
            return Arc::clone(t);
        }
    }
    let horizon = n.next_power_of_two().max(1024);
    let table = Arc::new(materialize(expr, horizon).prefix_counts());
    let mut cache = prefix_cache().lock().unwrap();
    if cache.len() >= PREFIX_CACHE_ENTRIES && !cache.contains_key(expr) {
        cache.clear();
    }
    let entry = cache
        .entry(expr.clone())
        .or_insert_with(|| Arc::clone(&table));
    if entry.horizon() < horizon {
        *entry = Arc::clone(&table);
    }
    Arc::clone(entry)
}

/// `A_α(n) = Σ_{k <= n, k ∈ A} k^α`, summed in ascending `k` with compensation.
pub fn weighted_count(expr: &SetExpr, alpha: f64, n: u64) -> Result<f64> {
    check_alpha(alpha)?;
    if alpha == 0.0 {
        return Ok(count(expr, n) as f64);
    }
    if n == 0 {
        return Ok(0.0);
    }
    let table = materialize(expr, n);
    let mut s = CompensatedSum::new();
    for k in table.elements() {
        s.add(weight(k, alpha));
    }
    Ok(s.value())
}

/// `N_α(n) = Σ_{k <= n} k^α`.
pub fn normalizer(alpha: f64, n: u64) -> Result<f64> {
    check_alpha(alpha)?;
    if alpha == 0.0 {
        return Ok(n as f64);
    }
    let mut s = CompensatedSum::new();
    for k in 1..=n {
        s.add(weight(k, alpha));
    }
    Ok(s.value())
}

/// `n^(α+1) / N_α(n)` (or `ln n / N_{-1}(n)`), which tends to `α + 1` (or 1).
pub fn normalizer_ratio(alpha: f64, n: u64) -> Result<f64> {
    let norm = normalizer(alpha, n)?;
    if alpha == -1.0 {
        Ok((n as f64).ln() / norm)
    } else {
        Ok((n as f64).powf(alpha + 1.0) / norm)
    }
}

/// Default search cap for [`nth_element`].
pub const NTH_ELEMENT_CAP: u64 = 1 << 26;

/// The `i`-th smallest element, `None` when the set has fewer than `i` elements.
pub fn nth_element(expr: &SetExpr, i: u64, cap: u64) -> Result<Option<u64>> {
    if i == 0 {
        return Err(DensityError::Domain("element index starts at 1".into()));
    }
    match expr {
        SetExpr::Nat => return Ok(Some(i)),
        SetExpr::Empty => return Ok(None),
        SetExpr::Finite(v) => return Ok(v.get(i as usize - 1).copied()),
        SetExpr::Ap { residue, modulus } => {
            let first = if *residue == 0 { *modulus } else { *residue };
            return Ok(Some(first + (i - 1) * modulus));
        }
        _ => {}
    }
    let bound = expr.finite_bound();
    let limit = bound.map_or(cap, |b| b.min(cap));
    let mut h: u64 = 1024;
    loop {
        let h_eff = h.min(limit.max(1));
        if count(expr, h_eff) >= i {
            // Binary search the first n with A(n) >= i.
            let (mut lo, mut hi) = (1u64, h_eff);
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                if count(expr, mid) >= i {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            return Ok(Some(lo));
        }
        if h_eff >= limit {
            return match bound {
                Some(b) if b <= cap => Ok(None),
                _ => Err(DensityError::HorizonExceeded { index: i, cap }),
            };
        }
        h = h.saturating_mul(2);
    }
}

/// Memoized counting data of one expression at a fixed weight exponent.
#[derive(Debug, Clone)]
pub struct CountingProfile {
    pub expr: SetExpr,
    pub alpha: f64,
    pub checkpoints: Vec<u64>,
    pub counts: Vec<u64>,
    pub weighted: Vec<f64>,
    pub normalizers: Vec<f64>,
}

impl CountingProfile {
    /// `checkpoints` must be strictly increasing and positive.
    pub fn build(expr: &SetExpr, alpha: f64, checkpoints: &[u64]) -> Result<Self> {
        let horizon = checkpoints.last().copied().unwrap_or(0);
        let table = materialize(expr, horizon);
        let mut p = Self::from_table(&table, alpha, checkpoints)?;
        p.expr = expr.clone();
        Ok(p)
    }

    pub(crate) fn from_table(table: &MemberTable, alpha: f64, checkpoints: &[u64]) -> Result<Self> {
        check_alpha(alpha)?;
        if checkpoints.first() == Some(&0) || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(DensityError::Domain(
                "checkpoints must be positive and strictly increasing".into(),
            ));
        }
        let horizon = checkpoints.last().copied().unwrap_or(0);
        if horizon > table.horizon() {
            return Err(DensityError::InsufficientHorizon(format!(
                "checkpoint {horizon} beyond materialized horizon {}",
                table.horizon()
            )));
        }
        let n_cp = checkpoints.len();
        let mut counts = Vec::with_capacity(n_cp);
        let mut weighted = Vec::with_capacity(n_cp);
        let mut normalizers = Vec::with_capacity(n_cp);
        let mut a = 0u64;
        let mut wa = CompensatedSum::new();
        let mut wn = CompensatedSum::new();
        let mut next = 0usize;
        let bits = table.bits();
        for k in 1..=horizon {
            let member = bits[k as usize];
            a += member as u64;
            if alpha != 0.0 {
                let w = weight(k, alpha);
                if member {
                    wa.add(w);
                }
                wn.add(w);
            }
            if k == checkpoints[next] {
                counts.push(a);
                if alpha == 0.0 {
                    weighted.push(a as f64);
                    normalizers.push(k as f64);
                } else {
                    weighted.push(wa.value());
                    normalizers.push(wn.value());
                }
                next += 1;
            }
        }
        Ok(Self {
            expr: SetExpr::Empty,
            alpha,
            checkpoints: checkpoints.to_vec(),
            counts,
            weighted,
            normalizers,
        })
    }

    /// `A_α(n_j) / N_α(n_j)` at every checkpoint.
    pub fn ratios(&self) -> Vec<f64> {
        self.weighted
            .iter()
            .zip(&self.normalizers)
            .map(|(a, n)| a / n)
            .collect()
    }
}

impl fmt::Display for CopyRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CopyRule::First => write!(f, "first"),
            CopyRule::Offset(t) => write!(f, "offset:{t}"),
            CopyRule::Seeded(s) => write!(f, "seed:{s}"),
        }
    }
}

/// Canonical text form; parses back to the same tree.
impl fmt::Display for SetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join<T: fmt::Display>(v: &[T]) -> String {
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        }
        match self {
            SetExpr::Nat => write!(f, "nat"),
            SetExpr::Empty => write!(f, "empty"),
            SetExpr::Finite(v) => write!(f, "finite{{{}}}", join(v)),
            SetExpr::Ap { residue, modulus } => write!(f, "ap({residue},{modulus})"),
            SetExpr::Blocks { base, period, on } => {
                write!(f, "blocks({base},{period},on=[{}])", join(on))
            }
            SetExpr::Union(a, b) => write!(f, "union({a},{b})"),
            SetExpr::Inter(a, b) => write!(f, "inter({a},{b})"),
            SetExpr::Diff(a, b) => write!(f, "diff({a},{b})"),
            SetExpr::Compl(a) => write!(f, "compl({a})"),
            SetExpr::MCopy { inner, m, rule } => match rule {
                CopyRule::First => write!(f, "mcopy({inner},{m})"),
                r => write!(f, "mcopy({inner},{m},{r})"),
            },
        }
    }
}
