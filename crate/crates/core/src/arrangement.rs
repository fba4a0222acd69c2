//! Central hyperplane arrangements in `F_q^ell`.
//!
//! A hyperplane is stored by its defining covector, scaled so the first
//! nonzero coefficient is 1. Arrangements keep their hyperplanes sorted and
//! deduplicated, so two arrangements are equal exactly when they contain the
//! same hyperplanes.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::field::{Elem, FieldCtx};
use crate::linalg::Matrix;

/// Largest number of hyperplanes `all_hyperplanes` will enumerate.
pub const DEFAULT_ENUMERATION_CEILING: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArrangementError {
    #[error("covector {index} is zero")]
    ZeroCovector { index: usize },
    #[error("covector {index} has length {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("coefficient {value} of covector {index} is not an element of F_{q}")]
    ElementOutOfRange { index: usize, value: u32, q: u32 },
    #[error("hyperplane {0} is not in the arrangement")]
    HyperplaneNotPresent(String),
    #[error("enumeration of {count} objects exceeds the ceiling {ceiling}")]
    EnumerationOverflow { count: u64, ceiling: u64 },
    #[error("this construction needs F_{expected}, got F_{found}")]
    WrongField { expected: u32, found: u32 },
    #[error("dimension must be at least {min}, got {found}")]
    DimensionTooSmall { min: usize, found: usize },
    #[error("arrangements live over different fields or dimensions")]
    Incompatible,
}

/// A hyperplane given by a canonical covector (first nonzero entry 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    covector: Vec<Elem>,
}

impl Hyperplane {
    /// Canonicalizes a nonzero covector; `None` if it is zero.
    pub fn new(ctx: &FieldCtx, covector: &[Elem]) -> Option<Self> {
        let lead = covector.iter().copied().find(|c| !c.is_zero())?;
        let inv = ctx.inv(lead).unwrap();
        Some(Self {
            covector: covector.iter().map(|&c| ctx.mul(c, inv)).collect(),
        })
    }

    pub fn covector(&self) -> &[Elem] {
        &self.covector
    }

    pub fn dim(&self) -> usize {
        self.covector.len()
    }

    /// Index of the first nonzero coefficient.
    pub fn pivot(&self) -> usize {
        self.covector.iter().position(|c| !c.is_zero()).unwrap()
    }

    pub fn eval(&self, ctx: &FieldCtx, v: &[Elem]) -> Elem {
        ctx.dot(&self.covector, v)
    }

    pub fn contains(&self, ctx: &FieldCtx, v: &[Elem]) -> bool {
        self.eval(ctx, v).is_zero()
    }

    /// Basis of the hyperplane as a subspace: for each non-pivot index `f`
    /// the vector `e_f - c_f e_pivot`, in increasing `f`.
    pub fn basis(&self, ctx: &FieldCtx) -> Vec<Vec<Elem>> {
        let m = Matrix::from_rows(self.dim(), std::slice::from_ref(&self.covector));
        m.kernel_basis(ctx)
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.covector.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug)]
pub struct Arrangement {
    ctx: Arc<FieldCtx>,
    ell: usize,
    hyperplanes: Vec<Hyperplane>,
}

impl PartialEq for Arrangement {
    fn eq(&self, other: &Self) -> bool {
        self.ell == other.ell
            && self.hyperplanes == other.hyperplanes
            && (Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx)
    }
}

impl Eq for Arrangement {}

impl Arrangement {
    /// Builds an arrangement from raw covectors, canonicalizing and dropping
    /// scalar duplicates.
    pub fn new(
        ctx: Arc<FieldCtx>,
        ell: usize,
        covectors: &[Vec<Elem>],
    ) -> Result<Self, ArrangementError> {
        if ell == 0 {
            return Err(ArrangementError::DimensionTooSmall { min: 1, found: 0 });
        }
        let mut hyperplanes = Vec::with_capacity(covectors.len());
        for (index, c) in covectors.iter().enumerate() {
            if c.len() != ell {
                return Err(ArrangementError::DimensionMismatch {
                    index,
                    expected: ell,
                    found: c.len(),
                });
            }
            if let Some(bad) = c.iter().find(|x| !ctx.contains(**x)) {
                return Err(ArrangementError::ElementOutOfRange {
                    index,
                    value: bad.0,
                    q: ctx.order(),
                });
            }
            let h = Hyperplane::new(&ctx, c).ok_or(ArrangementError::ZeroCovector { index })?;
            hyperplanes.push(h);
        }
        Ok(Self::from_hyperplanes(ctx, ell, hyperplanes))
    }

    /// Same as [`Arrangement::new`] with integer coefficients.
    pub fn from_ints(
        ctx: Arc<FieldCtx>,
        ell: usize,
        covectors: &[&[u32]],
    ) -> Result<Self, ArrangementError> {
        let rows: Vec<Vec<Elem>> = covectors
            .iter()
            .map(|c| c.iter().map(|&x| Elem(x)).collect())
            .collect();
        Self::new(ctx, ell, &rows)
    }

    fn from_hyperplanes(ctx: Arc<FieldCtx>, ell: usize, mut hyperplanes: Vec<Hyperplane>) -> Self {
        hyperplanes.sort();
        hyperplanes.dedup();
        Self {
            ctx,
            ell,
            hyperplanes,
        }
    }

    pub fn empty(ctx: Arc<FieldCtx>, ell: usize) -> Self {
        Self {
            ctx,
            ell,
            hyperplanes: Vec::new(),
        }
    }

    /// The coordinate hyperplanes `x_i = 0`.
    pub fn boolean(ctx: Arc<FieldCtx>, ell: usize) -> Self {
        let hs = (0..ell)
            .map(|i| {
                let mut c = vec![Elem::ZERO; ell];
                c[i] = Elem::ONE;
                Hyperplane { covector: c }
            })
            .collect();
        Self::from_hyperplanes(ctx, ell, hs)
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn q(&self) -> u32 {
        self.ctx.order()
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn covectors(&self) -> Vec<Vec<Elem>> {
        self.hyperplanes
            .iter()
            .map(|h| h.covector.clone())
            .collect()
    }

    pub fn contains(&self, h: &Hyperplane) -> bool {
        self.hyperplanes.binary_search(h).is_ok()
    }

    /// Position of `h` in the sorted hyperplane list.
    pub fn position(&self, h: &Hyperplane) -> Option<usize> {
        self.hyperplanes.binary_search(h).ok()
    }

    fn same_space(&self, other: &Arrangement) -> bool {
        self.ell == other.ell && (Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx)
    }

    pub fn is_subarrangement_of(&self, other: &Arrangement) -> bool {
        self.same_space(other) && self.hyperplanes.iter().all(|h| other.contains(h))
    }

    /// `A \ {h}`.
    pub fn delete(&self, h: &Hyperplane) -> Result<Arrangement, ArrangementError> {
        let pos = self
            .position(h)
            .ok_or_else(|| ArrangementError::HyperplaneNotPresent(h.to_string()))?;
        let mut hs = self.hyperplanes.clone();
        hs.remove(pos);
        Ok(Self {
            ctx: self.ctx.clone(),
            ell: self.ell,
            hyperplanes: hs,
        })
    }

    /// `A ∪ {h}`; a hyperplane already present leaves `A` unchanged.
    pub fn add(&self, h: &Hyperplane) -> Arrangement {
        assert_eq!(h.dim(), self.ell);
        let mut hs = self.hyperplanes.clone();
        if let Err(pos) = hs.binary_search(h) {
            hs.insert(pos, h.clone());
        }
        Self {
            ctx: self.ctx.clone(),
            ell: self.ell,
            hyperplanes: hs,
        }
    }

    /// Sub-arrangement picked by indices into the hyperplane list.
    pub fn subset(&self, indices: &[usize]) -> Arrangement {
        let hs = indices
            .iter()
            .map(|&i| self.hyperplanes[i].clone())
            .collect();
        Self::from_hyperplanes(self.ctx.clone(), self.ell, hs)
    }

    /// Rank over `F_q` of the covector matrix.
    pub fn rank(&self) -> usize {
        if self.is_empty() {
            return 0;
        }
        Matrix::from_rows(self.ell, &self.covectors()).rank(&self.ctx)
    }

    pub fn is_essential(&self) -> bool {
        self.rank() == self.ell
    }

    /// The restriction `A'' = {K ∩ H : K ∈ A, K ≠ H}` written in the
    /// coordinates of the canonical basis of `H`.
    pub fn restrict(&self, h: &Hyperplane) -> Result<RestrictionMap, ArrangementError> {
        if !self.contains(h) {
            return Err(ArrangementError::HyperplaneNotPresent(h.to_string()));
        }
        if self.ell < 2 {
            return Err(ArrangementError::DimensionTooSmall {
                min: 2,
                found: self.ell,
            });
        }
        let basis = h.basis(&self.ctx);
        self.restrict_with_basis(h, basis)
    }

    /// Restriction using caller-provided basis vectors of `H`.
    pub fn restrict_with_basis(
        &self,
        h: &Hyperplane,
        basis: Vec<Vec<Elem>>,
    ) -> Result<RestrictionMap, ArrangementError> {
        if !self.contains(h) {
            return Err(ArrangementError::HyperplaneNotPresent(h.to_string()));
        }
        assert_eq!(basis.len(), self.ell - 1);
        debug_assert!(basis.iter().all(|b| h.contains(&self.ctx, b)));
        let pulled: Vec<Hyperplane> = self
            .hyperplanes
            .iter()
            .filter(|k| *k != h)
            .map(|k| {
                let c: Vec<Elem> = basis.iter().map(|b| k.eval(&self.ctx, b)).collect();
                Hyperplane::new(&self.ctx, &c)
                    .expect("distinct hyperplanes restrict to nonzero forms")
            })
            .collect();
        let restricted = Self::from_hyperplanes(self.ctx.clone(), self.ell - 1, pulled);
        Ok(RestrictionMap {
            hyperplane: h.clone(),
            basis,
            restricted,
        })
    }

    /// `Q = prod alpha_H` evaluated at a point.
    pub fn defining_value(&self, v: &[Elem]) -> Elem {
        self.hyperplanes
            .iter()
            .fold(Elem::ONE, |acc, h| self.ctx.mul(acc, h.eval(&self.ctx, v)))
    }

    /// Canonical text id: covectors joined by `;`, coefficients by `,`.
    pub fn id(&self) -> String {
        if self.is_empty() {
            return "-".to_string();
        }
        self.hyperplanes
            .iter()
            .map(|h| {
                h.covector
                    .iter()
                    .map(|c| c.0.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Orders arrangements by their sorted covector lists.
    pub fn canonical_cmp(&self, other: &Arrangement) -> Ordering {
        self.hyperplanes.cmp(&other.hyperplanes)
    }
}

/// A restriction `A''` together with the basis of `H` it was computed in.
#[derive(Clone, Debug)]
pub struct RestrictionMap {
    pub hyperplane: Hyperplane,
    /// `ell - 1` vectors spanning `H`
    pub basis: Vec<Vec<Elem>>,
    pub restricted: Arrangement,
}

impl RestrictionMap {
    /// Pushes a vector of `F_q^{ell-1}` forward into `H ⊂ F_q^ell`.
    pub fn lift(&self, ctx: &FieldCtx, coords: &[Elem]) -> Vec<Elem> {
        let ell = self.hyperplane.dim();
        let mut v = vec![Elem::ZERO; ell];
        for (b, &c) in self.basis.iter().zip(coords) {
            ctx.axpy(&mut v, c, b);
        }
        v
    }
}

/// Number of hyperplanes in `F_q^ell`: `(q^ell - 1)/(q - 1)`.
pub fn hyperplane_count(q: u64, ell: u32) -> Option<u64> {
    Some((q.checked_pow(ell)? - 1) / (q - 1))
}

/// `A_all`: every hyperplane of `F_q^ell`.
pub fn all_hyperplanes(ctx: Arc<FieldCtx>, ell: usize) -> Result<Arrangement, ArrangementError> {
    all_hyperplanes_with_ceiling(ctx, ell, DEFAULT_ENUMERATION_CEILING)
}

pub fn all_hyperplanes_with_ceiling(
    ctx: Arc<FieldCtx>,
    ell: usize,
    ceiling: u64,
) -> Result<Arrangement, ArrangementError> {
    if ell == 0 {
        return Err(ArrangementError::DimensionTooSmall { min: 1, found: 0 });
    }
    let q = ctx.order() as u64;
    let count = hyperplane_count(q, ell as u32).unwrap_or(u64::MAX);
    if count > ceiling {
        return Err(ArrangementError::EnumerationOverflow { count, ceiling });
    }
    let mut hs = Vec::with_capacity(count as usize);
    for pivot in 0..ell {
        let free = ell - pivot - 1;
        for n in 0..q.pow(free as u32) {
            let mut c = vec![Elem::ZERO; ell];
            c[pivot] = Elem::ONE;
            let mut m = n;
            for slot in c[pivot + 1..].iter_mut().rev() {
                *slot = Elem((m % q) as u32);
                m /= q;
            }
            hs.push(Hyperplane { covector: c });
        }
    }
    Ok(Arrangement::from_hyperplanes(ctx, ell, hs))
}

/// The arrangement of all hyperplanes of `F_3^3` that do not contain the
/// line spanned by `(0,0,1)`.
pub fn ziegler(ctx: Arc<FieldCtx>) -> Result<Arrangement, ArrangementError> {
    if ctx.order() != 3 {
        return Err(ArrangementError::WrongField {
            expected: 3,
            found: ctx.order(),
        });
    }
    let all = all_hyperplanes(ctx.clone(), 3)?;
    let line = [Elem::ZERO, Elem::ZERO, Elem::ONE];
    let hs = all
        .hyperplanes
        .into_iter()
        .filter(|h| !h.contains(&ctx, &line))
        .collect();
    Ok(Arrangement::from_hyperplanes(ctx, 3, hs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::field_of_order;
    use crate::linalg::row_space;

    fn f(q: u64) -> Arc<FieldCtx> {
        field_of_order(q).unwrap()
    }

    #[test]
    fn make_arrangement_examples() {
        let a = Arrangement::from_ints(f(2), 3, &[&[1, 0, 0]]).unwrap();
        assert_eq!(a.len(), 1);
        let a = Arrangement::from_ints(f(3), 3, &[&[1, 0, 0], &[2, 0, 0]]).unwrap();
        assert_eq!(a.len(), 1);
        let all: Vec<Vec<u32>> = (1..8)
            .map(|n| vec![n >> 2 & 1, n >> 1 & 1, n & 1])
            .collect();
        let refs: Vec<&[u32]> = all.iter().map(|v| v.as_slice()).collect();
        let a = Arrangement::from_ints(f(2), 3, &refs).unwrap();
        assert_eq!(a.len(), 7);
        assert_eq!(a, all_hyperplanes(f(2), 3).unwrap());
    }

    #[test]
    fn make_arrangement_errors() {
        assert_eq!(
            Arrangement::from_ints(f(2), 3, &[&[1, 0, 0], &[0, 0, 0]]).unwrap_err(),
            ArrangementError::ZeroCovector { index: 1 }
        );
        assert!(matches!(
            Arrangement::from_ints(f(2), 3, &[&[1, 0]]),
            Err(ArrangementError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            Arrangement::from_ints(f(2), 3, &[&[1, 0, 2]]),
            Err(ArrangementError::ElementOutOfRange { .. })
        ));
    }

    #[test]
    fn all_hyperplanes_counts() {
        assert_eq!(all_hyperplanes(f(2), 3).unwrap().len(), 7);
        assert_eq!(all_hyperplanes(f(3), 3).unwrap().len(), 13);
        assert_eq!(all_hyperplanes(f(2), 2).unwrap().len(), 3);
        assert!(matches!(
            all_hyperplanes_with_ceiling(f(3), 3, 10),
            Err(ArrangementError::EnumerationOverflow { count: 13, .. })
        ));
    }

    #[test]
    fn all_hyperplanes_pairwise_non_proportional() {
        for q in [2u64, 3, 4] {
            for ell in 1..=4usize {
                let ctx = f(q);
                let a = all_hyperplanes(ctx.clone(), ell).unwrap();
                assert_eq!(a.len() as u64, hyperplane_count(q, ell as u32).unwrap());
                for (i, h) in a.hyperplanes().iter().enumerate() {
                    for k in &a.hyperplanes()[i + 1..] {
                        let m = Matrix::from_rows(ell, &[h.covector.clone(), k.covector.clone()]);
                        assert_eq!(m.rank(&ctx), 2);
                    }
                }
            }
        }
    }

    #[test]
    fn delete_and_add() {
        let all = all_hyperplanes(f(2), 3).unwrap();
        for h in all.hyperplanes() {
            let d = all.delete(h).unwrap();
            assert_eq!(d.len(), 6);
            assert_eq!(d.add(h), all);
        }
        let one = Arrangement::from_ints(f(2), 3, &[&[1, 0, 0]]).unwrap();
        let h = one.hyperplanes()[0].clone();
        assert!(one.delete(&h).unwrap().is_empty());
        assert!(matches!(
            one.delete(&h).unwrap().delete(&h),
            Err(ArrangementError::HyperplaneNotPresent(_))
        ));
    }

    #[test]
    fn restriction_examples() {
        let ctx = f(2);
        let b = Arrangement::boolean(ctx.clone(), 3);
        let x = Hyperplane::new(&ctx, &[Elem(1), Elem(0), Elem(0)]).unwrap();
        assert_eq!(b.restrict(&x).unwrap().restricted.len(), 2);
        assert_eq!(b.restrict(&x).unwrap().restricted.ell(), 2);

        let xy = Arrangement::from_ints(ctx.clone(), 3, &[&[1, 0, 0], &[0, 1, 0]]).unwrap();
        assert_eq!(xy.restrict(&x).unwrap().restricted.len(), 1);

        let only = Arrangement::from_ints(ctx.clone(), 3, &[&[1, 0, 0]]).unwrap();
        assert!(only.restrict(&x).unwrap().restricted.is_empty());
    }

    #[test]
    fn restriction_basis_lies_in_h() {
        let ctx = f(3);
        let all = all_hyperplanes(ctx.clone(), 3).unwrap();
        for h in all.hyperplanes() {
            let r = all.restrict(h).unwrap();
            assert_eq!(Matrix::from_rows(3, &r.basis).rank(&ctx), 2);
            for b in &r.basis {
                assert!(h.contains(&ctx, b));
            }
            // A'' of A_all(F_q^3) is A_all(F_q^2)
            assert_eq!(r.restricted.len(), 4);
        }
    }

    /// The set of subspaces `K ∩ H` does not depend on the basis of `H`.
    #[test]
    fn restriction_is_basis_independent() {
        let ctx = f(3);
        let a = ziegler(ctx.clone()).unwrap();
        for h in a.hyperplanes() {
            let b0 = h.basis(&ctx);
            // another basis: (b0 + b1, 2 b1)
            let mut s = b0[0].clone();
            ctx.axpy(&mut s, Elem::ONE, &b0[1]);
            let mut t = b0[1].clone();
            ctx.scale_in_place(&mut t, Elem(2));
            let b1 = vec![t, s];
            let flats = |r: &RestrictionMap| {
                let mut out: Vec<Vec<Vec<Elem>>> = r
                    .restricted
                    .hyperplanes()
                    .iter()
                    .map(|k| {
                        let gens: Vec<Vec<Elem>> =
                            k.basis(&ctx).iter().map(|v| r.lift(&ctx, v)).collect();
                        row_space(&ctx, 3, &gens)
                    })
                    .collect();
                out.sort();
                out
            };
            let r0 = a.restrict(h).unwrap();
            let r1 = a.restrict_with_basis(h, b1).unwrap();
            assert_eq!(flats(&r0), flats(&r1));
        }
    }

    #[test]
    fn ranks() {
        let ctx = f(2);
        assert_eq!(Arrangement::empty(ctx.clone(), 3).rank(), 0);
        assert_eq!(all_hyperplanes(ctx.clone(), 3).unwrap().rank(), 3);
        let xy = Arrangement::from_ints(ctx, 3, &[&[1, 0, 0], &[0, 1, 0]]).unwrap();
        assert_eq!(xy.rank(), 2);
        let xy3 = Arrangement::from_ints(f(3), 3, &[&[1, 0, 0], &[0, 1, 0]]).unwrap();
        assert_eq!(xy3.rank(), 2);
    }

    #[test]
    fn ziegler_fixture() {
        let ctx = f(3);
        let z = ziegler(ctx.clone()).unwrap();
        assert_eq!(z.len(), 9);
        assert!(z.hyperplanes().iter().all(|h| !h.covector()[2].is_zero()));
        let all = all_hyperplanes(ctx, 3).unwrap();
        let rest = all.hyperplanes().iter().filter(|h| !z.contains(h)).count();
        assert_eq!(rest, 4);
        assert!(matches!(
            ziegler(f(2)),
            Err(ArrangementError::WrongField { .. })
        ));
    }

    #[test]
    fn ids_sort_like_covectors() {
        let ctx = f(2);
        let a = Arrangement::from_ints(ctx.clone(), 3, &[&[0, 0, 1], &[1, 1, 0]]).unwrap();
        assert_eq!(a.id(), "0,0,1;1,1,0");
        assert_eq!(Arrangement::empty(ctx, 3).id(), "-");
    }
}
