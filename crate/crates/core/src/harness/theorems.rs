//! Checkers for the freeness results on arrangements over `F_q`.
//!
//! Each checker recomputes its inputs from scratch (lattice, counts,
//! derivation modules) and reports whether the claimed relation holds.

use serde::Serialize;

use crate::arrangement::{all_hyperplanes, Arrangement, Hyperplane};
use crate::charpoly::CharPoly;
use crate::counting::complement_points;
use crate::derivations::{decide_freeness, saito_check, Derivation, Verdict};
use crate::field::Elem;
use crate::lattice::char_poly;
use crate::linalg::row_space;
use crate::poly::PolyRing;

use super::HarnessError;

/// `q^k` as an `i64`.
fn qpow(q: u32, k: u32) -> i64 {
    (q as i64).pow(k)
}

/// `1 + q + ... + q^{n-1}`.
fn geometric(q: u32, n: u32) -> i64 {
    (0..n).map(|i| qpow(q, i)).sum()
}

/// Sorted exponents of `A` when the freeness decision says free, `None`
/// when it says not free.
pub fn free_exponents(arr: &Arrangement) -> Result<Option<Vec<u32>>, HarnessError> {
    let r = decide_freeness(arr)?;
    match r.verdict {
        Verdict::Free => Ok(r.exponents),
        Verdict::NotFree => Ok(None),
        Verdict::Undetermined => Err(HarnessError::Undetermined(arr.id())),
    }
}

/// `exps` with entry `k` raised or lowered by one, re-sorted.
fn shifted(exps: &[u32], k: usize, up: bool) -> Vec<u32> {
    let mut out = exps.to_vec();
    if up {
        out[k] += 1;
    } else {
        out[k] -= 1;
    }
    out.sort_unstable();
    out
}

/// `exps` with entry `k` removed.
fn removed(exps: &[u32], k: usize) -> Vec<u32> {
    let mut out = exps.to_vec();
    out.remove(k);
    out
}

/// Exponents of a restriction `A''`. Every arrangement in a plane is free:
/// `(0, 0)` when empty, `(0, 1)` for one line and `(1, n - 1)` otherwise.
/// In higher dimensions the derivation module decides.
pub fn restriction_exponents(restricted: &Arrangement) -> Result<Option<Vec<u32>>, HarnessError> {
    if restricted.ell() != 2 {
        return free_exponents(restricted);
    }
    let n = restricted.len() as u32;
    Ok(Some(match n {
        0 => vec![0, 0],
        1 => vec![0, 1],
        n => vec![1, n - 1],
    }))
}

/// The addition-deletion relation for a triple `(A, A', A'')` given the
/// sorted exponents of each (`None` = not free). Returns `false` exactly
/// when two of
///
/// * `A` free with exponents `(d_1, ..., d_ell)`,
/// * `A'` free with exponents `(d_1, ..., d_ell - 1)`,
/// * `A''` free with exponents `(d_1, ..., d_{ell-1})`,
///
/// hold for some choice of the distinguished slot `d_ell` while the third
/// fails.
pub fn addition_deletion_consistent(
    full: Option<&[u32]>,
    deleted: Option<&[u32]>,
    restriction: Option<&[u32]>,
) -> bool {
    if let (Some(a), Some(b)) = (full, deleted) {
        for k in 0..a.len() {
            if a[k] >= 1
                && shifted(a, k, false) == b
                && restriction != Some(removed(a, k).as_slice())
            {
                return false;
            }
        }
    }
    if let (Some(b), Some(r)) = (deleted, restriction) {
        for k in 0..b.len() {
            if removed(b, k) == r && full != Some(shifted(b, k, true).as_slice()) {
                return false;
            }
        }
    }
    if let (Some(a), Some(r)) = (full, restriction) {
        for k in 0..a.len() {
            if a[k] >= 1 && removed(a, k) == r && deleted != Some(shifted(a, k, false).as_slice()) {
                return false;
            }
        }
    }
    true
}

/// The printed three-dimensional form, where the third condition is only
/// `|A''| = d_1 + d_2`. It admits a labelling with the Euler exponent in
/// the `d_3` slot, which the exponent form above excludes.
pub fn addition_deletion_by_size(
    full: Option<&[u32]>,
    deleted: Option<&[u32]>,
    restriction_size: usize,
) -> bool {
    let r = restriction_size as i64;
    let sum = |v: &[u32]| v.iter().map(|&x| x as i64).sum::<i64>();
    if let (Some(a), Some(b)) = (full, deleted) {
        for k in 0..a.len() {
            if a[k] >= 1 && shifted(a, k, false) == b && sum(a) - a[k] as i64 != r {
                return false;
            }
        }
    }
    if let Some(b) = deleted {
        for k in 0..b.len() {
            if sum(b) - b[k] as i64 == r && full != Some(shifted(b, k, true).as_slice()) {
                return false;
            }
        }
    }
    if let Some(a) = full {
        for k in 0..a.len() {
            if a[k] >= 1
                && sum(a) - a[k] as i64 == r
                && deleted != Some(shifted(a, k, false).as_slice())
            {
                return false;
            }
        }
    }
    true
}

/// Decides freeness of `A`, `A \ {h}` and `A''`, then checks the
/// addition-deletion relation.
pub fn verify_addition_deletion(arr: &Arrangement, h: &Hyperplane) -> Result<bool, HarnessError> {
    let deleted = arr.delete(h)?;
    let restriction = restriction_exponents(&arr.restrict(h)?.restricted)?;
    let a = free_exponents(arr)?;
    let b = free_exponents(&deleted)?;
    Ok(addition_deletion_consistent(
        a.as_deref(),
        b.as_deref(),
        restriction.as_deref(),
    ))
}

/// Whenever `chi(A, q^k) = 0` for some `k ≤ k_max`, also
/// `chi(A, q^j) = 0` for every `1 ≤ j ≤ k`.
pub fn zeros_descend(cp: &CharPoly, q: u32, k_max: u32) -> Result<bool, HarnessError> {
    let values: Vec<i64> = (1..=k_max)
        .map(|k| cp.eval(qpow(q, k)))
        .collect::<Result<_, _>>()?;
    Ok((0..values.len()).all(|k| values[k] != 0 || values[..k].iter().all(|&v| v == 0)))
}

pub fn verify_zeros_descend(arr: &Arrangement, k_max: u32) -> Result<bool, HarnessError> {
    zeros_descend(&char_poly(arr)?, arr.q(), k_max)
}

/// Four characterizations of the arrangement of all hyperplanes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AllHyperplaneTests {
    /// `A` contains every hyperplane
    pub is_all: bool,
    /// `|A| = (q^ell - 1)/(q - 1)`
    pub has_all_count: bool,
    /// `chi(A, t) = (t - 1)(t - q) ... (t - q^{ell-1})`
    pub has_all_char_poly: bool,
    /// `chi(A, q^{ell-1}) = 0`
    pub vanishes_at_top: bool,
}

impl AllHyperplaneTests {
    pub fn agree(&self) -> bool {
        let v = [self.is_all, self.has_all_count, self.has_all_char_poly];
        v.iter().all(|&b| b == self.vanishes_at_top)
    }
}

pub fn all_hyperplane_tests(
    arr: &Arrangement,
    cp: &CharPoly,
) -> Result<AllHyperplaneTests, HarnessError> {
    let q = arr.q();
    let ell = arr.ell() as u32;
    let all = all_hyperplanes(arr.ctx().clone(), arr.ell())?;
    let roots: Vec<i64> = (0..ell).map(|i| qpow(q, i)).collect();
    Ok(AllHyperplaneTests {
        is_all: *arr == all,
        has_all_count: arr.len() as i64 == geometric(q, ell),
        has_all_char_poly: *cp == CharPoly::from_roots(&roots),
        vanishes_at_top: cp.eval(qpow(q, ell - 1))? == 0,
    })
}

pub fn verify_all_hyperplane_tests(arr: &Arrangement) -> Result<bool, HarnessError> {
    Ok(all_hyperplane_tests(arr, &char_poly(arr)?)?.agree())
}

/// Which size regime decided a prediction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `|A| ≥ 2q`: free iff `chi(A, q) = 0`
    Large,
    /// `|A| = 2q - 1`: free iff `chi(A, q) = 0` or `chi = (t-1)(t-q+1)^2`
    OneBelow,
    /// `|A| = 2q - 2`: free iff `chi(A, q) = 0` or
    /// `chi = (t-1)(t-q+1)(t-q+2)`
    TwoBelow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Prediction {
    pub free: bool,
    pub regime: Regime,
}

/// `(t-1)(t-q+1)^2` for `|A| = 2q-1`, `(t-1)(t-q+1)(t-q+2)` for `2q-2`.
pub fn near_threshold_char_poly(q: u32, regime: Regime) -> Option<CharPoly> {
    let q = q as i64;
    match regime {
        Regime::Large => None,
        Regime::OneBelow => Some(CharPoly::from_roots(&[1, q - 1, q - 1])),
        Regime::TwoBelow => Some(CharPoly::from_roots(&[1, q - 1, q - 2])),
    }
}

/// Predicts freeness of `A ⊂ F_q^3` with `|A| ≥ 2q - 2` from `|A|` and
/// `chi(A, t)` alone.
pub fn predict_freeness(arr: &Arrangement, cp: &CharPoly) -> Result<Prediction, HarnessError> {
    if arr.ell() != 3 {
        return Err(HarnessError::PreconditionMismatch(format!(
            "prediction needs ell = 3, got {}",
            arr.ell()
        )));
    }
    let q = arr.q() as usize;
    let n = arr.len();
    let regime = match n {
        n if n >= 2 * q => Regime::Large,
        n if n + 1 == 2 * q => Regime::OneBelow,
        n if n + 2 == 2 * q => Regime::TwoBelow,
        _ => {
            return Err(HarnessError::BelowThreshold {
                size: n,
                threshold: 2 * q - 2,
            })
        }
    };
    let vanishes = cp.eval(q as i64)? == 0;
    let special = near_threshold_char_poly(q as u32, regime).is_some_and(|p| p == *cp);
    Ok(Prediction {
        free: vanishes || special,
        regime,
    })
}

/// Exponents `(1, q, ..., q^{ell-2}, |A| - 1 - q - ... - q^{ell-2})`,
/// sorted; `None` if the last entry would be negative.
pub fn vanishing_exponents(q: u32, ell: usize, size: usize) -> Option<Vec<u32>> {
    let ell = ell as u32;
    let last = size as i64 - geometric(q, ell - 1);
    if last < 0 {
        return None;
    }
    let mut e: Vec<u32> = (0..ell - 1).map(|i| qpow(q, i) as u32).collect();
    e.push(last as u32);
    e.sort_unstable();
    Some(e)
}

/// One addition in a resolution chain.
#[derive(Clone, Debug, Serialize)]
pub struct ChainStep {
    /// hyperplane added, as its canonical covector
    pub added: Vec<u32>,
    /// size after the addition
    pub size: usize,
    /// `|A''|` for the added hyperplane inside the enlarged arrangement
    pub restriction_size: usize,
    /// claimed sorted exponents of the arrangement before the addition
    pub exponents_before: Vec<u32>,
}

/// `A = A_0 ⊂ A_1 ⊂ ... ⊂ A_all`, adding at each step the smallest
/// canonical covector missing from the current arrangement. Every `A_i`
/// has `chi(A_i, q^{ell-2}) = 0`, and addition-deletion along the chain
/// transports freeness down from `A_all`.
#[derive(Clone, Debug, Serialize)]
pub struct ResolutionChain {
    pub exponents: Vec<u32>,
    pub steps: Vec<ChainStep>,
    /// sorted exponents of the arrangement of all hyperplanes
    pub top_exponents: Vec<u32>,
}

fn chi_at_top_minus_one(arr: &Arrangement) -> Result<i64, HarnessError> {
    let ell = arr.ell() as u32;
    Ok(char_poly(arr)?.eval(qpow(arr.q(), ell - 2))?)
}

/// Builds the resolution chain of an arrangement with
/// `chi(A, q^{ell-2}) = 0`.
pub fn resolution_chain(arr: &Arrangement) -> Result<ResolutionChain, HarnessError> {
    let ell = arr.ell();
    if ell < 3 {
        return Err(HarnessError::PreconditionMismatch(format!(
            "resolution chains need ell ≥ 3, got {ell}"
        )));
    }
    let q = arr.q();
    let value = chi_at_top_minus_one(arr)?;
    if value != 0 {
        return Err(HarnessError::ChiNonzero {
            at: qpow(q, ell as u32 - 2),
            value,
        });
    }
    let all = all_hyperplanes(arr.ctx().clone(), ell)?;
    let exps = |n: usize| {
        vanishing_exponents(q, ell, n).ok_or_else(|| {
            HarnessError::PreconditionMismatch(format!("|A| = {n} is too small for the chain"))
        })
    };
    let mut current = arr.clone();
    let mut steps = Vec::new();
    for h in all.hyperplanes() {
        if current.contains(h) {
            continue;
        }
        let before = exps(current.len())?;
        current = current.add(h);
        steps.push(ChainStep {
            added: h.covector().iter().map(|c| c.0).collect(),
            size: current.len(),
            restriction_size: current.restrict(h)?.restricted.len(),
            exponents_before: before,
        });
    }
    Ok(ResolutionChain {
        exponents: exps(arr.len())?,
        steps,
        top_exponents: exps(all.len())?,
    })
}

/// Checks a resolution chain independently of how it was built:
/// the additions rebuild `A_all` from `A`, each intermediate arrangement
/// has `chi(A_i, q^{ell-2}) = 0` and `|A_i''| = 1 + q + ... + q^{ell-2}`,
/// the recorded exponents drop by one in the last slot at each step, and
/// `δ_0, ..., δ_{ell-1}` pass Saito's test on `A_all` with the recorded
/// top exponents.
pub fn verify_chain(arr: &Arrangement, chain: &ResolutionChain) -> Result<bool, HarnessError> {
    let ctx = arr.ctx();
    let q = arr.q();
    let ell = arr.ell();
    let target = geometric(q, ell as u32 - 1) as usize;
    if chi_at_top_minus_one(arr)? != 0 {
        return Ok(false);
    }
    let mut current = arr.clone();
    let mut prev_exps = chain.exponents.clone();
    if Some(&prev_exps) != vanishing_exponents(q, ell, arr.len()).as_ref() {
        return Ok(false);
    }
    for step in &chain.steps {
        if step.exponents_before != prev_exps {
            return Ok(false);
        }
        let cov: Vec<Elem> = step.added.iter().map(|&c| Elem(c)).collect();
        let Some(h) = Hyperplane::new(ctx, &cov) else {
            return Ok(false);
        };
        if current.contains(&h) {
            return Ok(false);
        }
        current = current.add(&h);
        let restriction = current.restrict(&h)?.restricted.len();
        if current.len() != step.size
            || restriction != step.restriction_size
            || restriction != target
            || chi_at_top_minus_one(&current)? != 0
        {
            return Ok(false);
        }
        // the largest exponent is the one that grows: (.., d) -> (.., d + 1)
        let Some(next) = vanishing_exponents(q, ell, current.len()) else {
            return Ok(false);
        };
        prev_exps = next;
    }
    if prev_exps != chain.top_exponents {
        return Ok(false);
    }
    let all = all_hyperplanes(ctx.clone(), ell)?;
    if current != all {
        return Ok(false);
    }
    let ring = PolyRing::new(ctx.clone(), ell);
    let fields: Vec<Derivation> = (0..ell as u32)
        .map(|k| Derivation::frobenius(&ring, k))
        .collect();
    Ok(saito_check(&all, &fields)?.is_some_and(|c| c.exponents == chain.top_exponents))
}

/// Output of [`line_completion`].
#[derive(Clone, Debug, Serialize)]
pub struct LineCompletion {
    /// one spanning vector per line making up `M(A) ∪ {0}`
    pub lines: Vec<Vec<u32>>,
    /// covector of the added hyperplane
    pub hyperplane: Vec<u32>,
    /// sorted exponents of `A ∪ {H}` as decided from its derivation module
    pub completed_exponents: Vec<u32>,
    /// sorted exponents of `A` as decided from its derivation module
    pub exponents: Vec<u32>,
}

/// For `|A| = 2q - 1` with `chi = (t-1)(t-q+1)^2`, the complement is a
/// punctured line `L`; adding a hyperplane through `L` gives a free
/// arrangement with exponents `(1, q-1, q)`. For `|A| = 2q - 2` with
/// `chi = (t-1)(t-q+1)(t-q+2)` the complement is two punctured lines, and
/// a hyperplane through the first but not the second reduces to the
/// previous case with exponents `(1, q-1, q-1)`.
///
/// Returns `None` when the complement does not have the expected shape or
/// no completing hyperplane exists.
pub fn line_completion(arr: &Arrangement) -> Result<Option<LineCompletion>, HarnessError> {
    let cp = char_poly(arr)?;
    let q = arr.q();
    let regime = match predict_freeness(arr, &cp) {
        Ok(p) if p.regime != Regime::Large => p.regime,
        _ => {
            return Err(HarnessError::PreconditionMismatch(
                "line completion needs ell = 3 and |A| = 2q-1 or 2q-2".into(),
            ))
        }
    };
    if Some(&cp) != near_threshold_char_poly(q, regime).as_ref() {
        return Err(HarnessError::PreconditionMismatch(format!(
            "characteristic polynomial {cp} does not match"
        )));
    }
    let ctx = arr.ctx();
    let want_lines = match regime {
        Regime::OneBelow => 1,
        _ => 2,
    };
    let points = complement_points(arr)?;
    let mut lines: Vec<Vec<Vec<Elem>>> = Vec::new();
    for p in &points {
        let key = row_space(ctx, 3, std::slice::from_ref(p));
        if !lines.contains(&key) {
            lines.push(key);
        }
    }
    let full_lines = points.len() == lines.len() * (q as usize - 1);
    if lines.len() != want_lines || !full_lines {
        return Ok(None);
    }
    let all = all_hyperplanes(ctx.clone(), 3)?;
    let through = |h: &Hyperplane, line: &[Vec<Elem>]| h.contains(ctx, &line[0]);
    let Some(h) = all.hyperplanes().iter().find(|h| {
        !arr.contains(h) && through(h, &lines[0]) && lines[1..].iter().all(|l| !through(h, l))
    }) else {
        return Ok(None);
    };
    let completed = arr.add(h);
    let Some(completed_exponents) = free_exponents(&completed)? else {
        return Ok(None);
    };
    let expected = match regime {
        Regime::OneBelow => vec![1, q - 1, q],
        _ => {
            let mut e = vec![1, q - 1, q - 1];
            e.sort_unstable();
            e
        }
    };
    if completed_exponents != expected {
        return Ok(None);
    }
    let restriction = restriction_exponents(&completed.restrict(h)?.restricted)?;
    let Some(exponents) = free_exponents(arr)? else {
        return Ok(None);
    };
    if !addition_deletion_consistent(
        Some(&completed_exponents),
        Some(&exponents),
        restriction.as_deref(),
    ) {
        return Ok(None);
    }
    Ok(Some(LineCompletion {
        lines: lines
            .iter()
            .map(|l| l[0].iter().map(|c| c.0).collect())
            .collect(),
        hyperplane: h.covector().iter().map(|c| c.0).collect(),
        completed_exponents,
        exponents,
    }))
}

/// Result of [`check_vanishing_freeness`].
#[derive(Clone, Debug, Serialize)]
pub struct VanishingFreeness {
    /// `chi(A, t) = (t-1)(t-q)...(t-q^{ell-2})(t - (|A| - 1 - ... - q^{ell-2}))`
    pub factorization_holds: bool,
    pub chain_verified: bool,
    /// exponents found by the derivation search, when it was run
    pub computed_exponents: Option<Vec<u32>>,
    pub claimed_exponents: Vec<u32>,
}

impl VanishingFreeness {
    pub fn holds(&self) -> bool {
        self.factorization_holds
            && self.chain_verified
            && self
                .computed_exponents
                .as_ref()
                .is_none_or(|e| *e == self.claimed_exponents)
    }
}

/// For `A ⊂ F_q^ell` with `chi(A, q^{ell-2}) = 0`: checks the predicted
/// factorization of `chi`, builds and verifies the resolution chain and,
/// if `search_generators` is set, compares against the exponents found by
/// the derivation module.
pub fn check_vanishing_freeness(
    arr: &Arrangement,
    search_generators: bool,
) -> Result<VanishingFreeness, HarnessError> {
    let ell = arr.ell();
    let q = arr.q();
    if ell < 3 || chi_at_top_minus_one(arr)? != 0 {
        return Err(HarnessError::PreconditionMismatch(
            "needs ell ≥ 3 and chi(A, q^{ell-2}) = 0".into(),
        ));
    }
    let claimed = vanishing_exponents(q, ell, arr.len()).ok_or_else(|| {
        HarnessError::PreconditionMismatch("arrangement too small for the claimed exponents".into())
    })?;
    let roots: Vec<i64> = claimed.iter().map(|&e| e as i64).collect();
    let factorization_holds = char_poly(arr)? == CharPoly::from_roots(&roots);
    let chain = resolution_chain(arr)?;
    let chain_verified = verify_chain(arr, &chain)?;
    let computed_exponents = if search_generators {
        free_exponents(arr)?
    } else {
        None
    };
    Ok(VanishingFreeness {
        factorization_holds,
        chain_verified,
        computed_exponents,
        claimed_exponents: claimed,
    })
}

/// How the exponents of a free arrangement with `|A| ≥ 2q` compare with the
/// two patterns `(1, q, |A|-q-1)` and `(1, q-1, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExponentPattern {
    Vanishing,
    Balanced,
    /// both patterns coincide (this happens exactly at `|A| = 2q`)
    Both,
    Neither,
}

pub fn exponent_pattern(q: u32, size: usize, exps: &[u32]) -> ExponentPattern {
    let vanishing = vanishing_exponents(q, 3, size).is_some_and(|e| e == exps);
    let balanced = size == 2 * q as usize && exps == [1, q - 1, q];
    match (vanishing, balanced) {
        (true, true) => ExponentPattern::Both,
        (true, false) => ExponentPattern::Vanishing,
        (false, true) => ExponentPattern::Balanced,
        (false, false) => ExponentPattern::Neither,
    }
}
