//! Brute-force complement counts.
//!
//! Two independent routes to `chi(A, q^k)`: enumerate `F_{q^k}^ell` and test
//! every lifted hyperplane, or enumerate ordered `k`-tuples of `F_q`-points
//! such that every hyperplane misses at least one of them. Nothing here
//! looks at the intersection lattice.

use rayon::prelude::*;
use thiserror::Error;

use crate::arrangement::Arrangement;
use crate::field::{extend_with_ceiling, Elem, ExtensionCtx, FieldCtx, FieldError};

/// Largest number of points (or tuples) enumerated by default.
pub const DEFAULT_POINT_CEILING: u64 = 1 << 24;

const PAR_MIN_LEN: usize = 1 << 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error("enumerating {count} points exceeds the ceiling {ceiling}")]
    EnumerationOverflow { count: u64, ceiling: u64 },
    #[error("the first arrangement is not contained in the second")]
    NotSubarrangement,
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error(transparent)]
    Field(#[from] FieldError),
}

fn checked_points(q: u64, exponent: u64, ceiling: u64) -> Result<u64, CountError> {
    let count = u32::try_from(exponent)
        .ok()
        .and_then(|e| q.checked_pow(e))
        .unwrap_or(u64::MAX);
    if count > ceiling {
        return Err(CountError::EnumerationOverflow { count, ceiling });
    }
    Ok(count)
}

/// The `n`-th vector of `F^ell` in lexicographic order (first coordinate
/// most significant).
pub fn point(q: u32, ell: usize, mut n: u64) -> Vec<Elem> {
    let mut v = vec![Elem::ZERO; ell];
    for slot in v.iter_mut().rev() {
        *slot = Elem((n % q as u64) as u32);
        n /= q as u64;
    }
    v
}

pub fn point_index(q: u32, v: &[Elem]) -> u64 {
    v.iter().fold(0, |acc, c| acc * q as u64 + c.0 as u64)
}

fn count_off_all(ctx: &FieldCtx, ell: usize, covectors: &[Vec<Elem>], total: u64) -> u64 {
    let q = ctx.order();
    (0..total as usize)
        .into_par_iter()
        .with_min_len(PAR_MIN_LEN)
        .filter(|&n| {
            let v = point(q, ell, n as u64);
            covectors.iter().all(|c| !ctx.dot(c, &v).is_zero())
        })
        .count() as u64
}

/// `|M(A)|`: points of `F_q^ell` on no hyperplane of `A`.
pub fn count_complement(arr: &Arrangement) -> Result<u64, CountError> {
    count_complement_with_ceiling(arr, DEFAULT_POINT_CEILING)
}

pub fn count_complement_with_ceiling(arr: &Arrangement, ceiling: u64) -> Result<u64, CountError> {
    let total = checked_points(arr.q() as u64, arr.ell() as u64, ceiling)?;
    Ok(count_off_all(arr.ctx(), arr.ell(), &arr.covectors(), total))
}

/// The points of `M(A)` in enumeration order.
pub fn complement_points(arr: &Arrangement) -> Result<Vec<Vec<Elem>>, CountError> {
    let total = checked_points(arr.q() as u64, arr.ell() as u64, DEFAULT_POINT_CEILING)?;
    let ctx = arr.ctx();
    Ok((0..total)
        .map(|n| point(arr.q(), arr.ell(), n))
        .filter(|v| arr.hyperplanes().iter().all(|h| !h.contains(ctx, v)))
        .collect())
}

/// `|M(A ⊗ F_{q^k})|` by enumerating `F_{q^k}^ell`.
pub fn count_complement_extension(arr: &Arrangement, k: u32) -> Result<u64, CountError> {
    count_complement_extension_with_ceiling(arr, k, DEFAULT_POINT_CEILING)
}

pub fn count_complement_extension_with_ceiling(
    arr: &Arrangement,
    k: u32,
    ceiling: u64,
) -> Result<u64, CountError> {
    if k == 0 {
        return Err(CountError::ZeroDegree);
    }
    checked_points(arr.q() as u64, k as u64 * arr.ell() as u64, ceiling)?;
    let ext = extend_with_ceiling(arr.ctx(), k, ceiling)?;
    Ok(count_complement_in(arr, &ext))
}

/// Counts the complement of `A` over a prebuilt extension of its field.
pub fn count_complement_in(arr: &Arrangement, ext: &ExtensionCtx) -> u64 {
    let lifted = lift_covectors(arr, ext);
    let f = ext.field();
    let total = (f.order() as u64).pow(arr.ell() as u32);
    count_off_all(f, arr.ell(), &lifted, total)
}

fn lift_covectors(arr: &Arrangement, ext: &ExtensionCtx) -> Vec<Vec<Elem>> {
    arr.hyperplanes()
        .iter()
        .map(|h| h.covector().iter().map(|&c| ext.embed(c)).collect())
        .collect()
}

/// For each point of `F_q^ell`, the set of hyperplanes it lies off, packed
/// into 64-bit words.
struct OffMasks {
    words: usize,
    masks: Vec<u64>,
    full: Vec<u64>,
}

impl OffMasks {
    fn new(arr: &Arrangement) -> Self {
        let n = arr.len();
        let words = n.div_ceil(64).max(1);
        let points = (arr.q() as u64).pow(arr.ell() as u32);
        let ctx = arr.ctx();
        let mut masks = vec![0u64; words * points as usize];
        for p in 0..points {
            let v = point(arr.q(), arr.ell(), p);
            let m = &mut masks[p as usize * words..(p as usize + 1) * words];
            for (i, h) in arr.hyperplanes().iter().enumerate() {
                if !h.contains(ctx, &v) {
                    m[i / 64] |= 1 << (i % 64);
                }
            }
        }
        let mut full = vec![0u64; words];
        for i in 0..n {
            full[i / 64] |= 1 << (i % 64);
        }
        Self { words, masks, full }
    }

    fn mask(&self, p: u64) -> &[u64] {
        &self.masks[p as usize * self.words..(p as usize + 1) * self.words]
    }

    /// Condition (*): every hyperplane misses some point of the tuple.
    fn covers(&self, tuple: &[u64]) -> bool {
        (0..self.words).all(|w| {
            let mut acc = 0u64;
            for &p in tuple {
                acc |= self.mask(p)[w];
                if acc == self.full[w] {
                    break;
                }
            }
            acc == self.full[w]
        })
    }
}

fn tuple(points: u64, k: u32, mut n: u64) -> Vec<u64> {
    let mut t = vec![0u64; k as usize];
    for slot in t.iter_mut().rev() {
        *slot = n % points;
        n /= points;
    }
    t
}

/// Number of ordered `k`-tuples of points of `F_q^ell` such that each
/// hyperplane of `A` misses at least one point of the tuple.
pub fn crapo_rota_count(arr: &Arrangement, k: u32) -> Result<u64, CountError> {
    crapo_rota_count_with_ceiling(arr, k, DEFAULT_POINT_CEILING)
}

pub fn crapo_rota_count_with_ceiling(
    arr: &Arrangement,
    k: u32,
    ceiling: u64,
) -> Result<u64, CountError> {
    if k == 0 {
        return Err(CountError::ZeroDegree);
    }
    let total = checked_points(arr.q() as u64, k as u64 * arr.ell() as u64, ceiling)?;
    let masks = OffMasks::new(arr);
    let points = (arr.q() as u64).pow(arr.ell() as u32);
    Ok((0..total as usize)
        .into_par_iter()
        .with_min_len(PAR_MIN_LEN)
        .filter(|&n| masks.covers(&tuple(points, k, n as u64)))
        .count() as u64)
}

/// Checks that writing each coordinate of a point of `F_{q^k}^ell` in the
/// basis `1, x, ..., x^{k-1}` and reading off the `k` columns gives a
/// bijection from `M(A ⊗ F_{q^k})` onto the tuples counted by
/// [`crapo_rota_count`].
pub fn bijection_check(arr: &Arrangement, k: u32) -> Result<bool, CountError> {
    if k == 0 {
        return Err(CountError::ZeroDegree);
    }
    let total = checked_points(
        arr.q() as u64,
        k as u64 * arr.ell() as u64,
        DEFAULT_POINT_CEILING,
    )?;
    let ext = extend_with_ceiling(arr.ctx(), k, DEFAULT_POINT_CEILING)?;
    let f = ext.field();
    let lifted = lift_covectors(arr, &ext);
    let masks = OffMasks::new(arr);
    let q = arr.q();
    let ell = arr.ell();
    let points = (q as u64).pow(ell as u32);

    let mut hit = vec![false; total as usize];
    let mut image_of_complement = vec![false; total as usize];
    for n in 0..total {
        let big = point(f.order(), ell, n);
        let coords: Vec<Vec<Elem>> = big.iter().map(|&c| ext.coordinates(c)).collect();
        let t: u64 = (0..k as usize).fold(0, |acc, j| {
            let column: Vec<Elem> = coords.iter().map(|row| row[j]).collect();
            acc * points + point_index(q, &column)
        });
        if std::mem::replace(&mut hit[t as usize], true) {
            return Ok(false);
        }
        if lifted.iter().all(|c| !f.dot(c, &big).is_zero()) {
            image_of_complement[t as usize] = true;
        }
    }
    Ok((0..total).all(|t| image_of_complement[t as usize] == masks.covers(&tuple(points, k, t))))
}

/// `chi(A1, q^k) >= chi(A2, q^k)` for `A1 ⊆ A2`, via direct counts.
pub fn monotonicity_check(
    small: &Arrangement,
    big: &Arrangement,
    k: u32,
) -> Result<bool, CountError> {
    if !small.is_subarrangement_of(big) {
        return Err(CountError::NotSubarrangement);
    }
    Ok(count_complement_extension(small, k)? >= count_complement_extension(big, k)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{all_hyperplanes, ziegler};
    use crate::field::field_of_order;

    fn single(q: u64) -> Arrangement {
        Arrangement::from_ints(field_of_order(q).unwrap(), 3, &[&[1, 0, 0]]).unwrap()
    }

    #[test]
    fn complement_counts() {
        let all = all_hyperplanes(field_of_order(2).unwrap(), 3).unwrap();
        assert_eq!(count_complement(&all).unwrap(), 0);
        assert_eq!(count_complement(&single(2)).unwrap(), 4);
        let z = ziegler(field_of_order(3).unwrap()).unwrap();
        assert_eq!(count_complement(&z).unwrap(), 2);
    }

    #[test]
    fn extension_counts() {
        let all = all_hyperplanes(field_of_order(2).unwrap(), 3).unwrap();
        assert_eq!(count_complement_extension(&all, 2).unwrap(), 0);
        assert_eq!(count_complement_extension(&single(2), 2).unwrap(), 48);
        let z = ziegler(field_of_order(3).unwrap()).unwrap();
        assert_eq!(count_complement_extension(&z, 2).unwrap(), 200);
        assert_eq!(count_complement_extension(&z, 1).unwrap(), 2);
    }

    #[test]
    fn tuple_counts() {
        let z = ziegler(field_of_order(3).unwrap()).unwrap();
        assert_eq!(
            crapo_rota_count(&z, 1).unwrap(),
            count_complement(&z).unwrap()
        );
        // 8^2 - 4^2: tuples with some point off x = 0
        assert_eq!(crapo_rota_count(&single(2), 2).unwrap(), 48);
        let empty = Arrangement::empty(field_of_order(3).unwrap(), 3);
        assert_eq!(crapo_rota_count(&empty, 2).unwrap(), 729);
        assert_eq!(crapo_rota_count(&z, 2).unwrap(), 200);
    }

    #[test]
    fn bijections() {
        assert!(bijection_check(&single(2), 2).unwrap());
        let all = all_hyperplanes(field_of_order(2).unwrap(), 3).unwrap();
        assert!(bijection_check(&all, 2).unwrap());
        let z = ziegler(field_of_order(3).unwrap()).unwrap();
        assert!(bijection_check(&z, 2).unwrap());
        assert!(bijection_check(&single(4), 2).unwrap());
    }

    #[test]
    fn monotone_under_inclusion() {
        let ctx = field_of_order(2).unwrap();
        let all = all_hyperplanes(ctx.clone(), 3).unwrap();
        let empty = Arrangement::empty(ctx.clone(), 3);
        assert!(monotonicity_check(&empty, &all, 1).unwrap());
        let x = Arrangement::from_ints(ctx.clone(), 3, &[&[1, 0, 0]]).unwrap();
        let xy = Arrangement::from_ints(ctx, 3, &[&[1, 0, 0], &[0, 1, 0]]).unwrap();
        assert_eq!(count_complement(&xy).unwrap(), 2);
        assert!(monotonicity_check(&x, &xy, 1).unwrap());
        assert_eq!(
            monotonicity_check(&xy, &x, 1).unwrap_err(),
            CountError::NotSubarrangement
        );
        let f3 = field_of_order(3).unwrap();
        let z = ziegler(f3.clone()).unwrap();
        assert!(monotonicity_check(&z, &all_hyperplanes(f3, 3).unwrap(), 1).unwrap());
    }

    #[test]
    fn ceilings() {
        let z = ziegler(field_of_order(3).unwrap()).unwrap();
        assert!(matches!(
            crapo_rota_count_with_ceiling(&z, 2, 100),
            Err(CountError::EnumerationOverflow { count: 729, .. })
        ));
        assert!(matches!(
            count_complement_extension_with_ceiling(&z, 2, 100),
            Err(CountError::EnumerationOverflow { .. })
        ));
        assert!(count_complement_with_ceiling(&z, 10).is_err());
    }

    #[test]
    fn point_indexing_roundtrip() {
        for n in 0..27 {
            assert_eq!(point_index(3, &point(3, 3, n)), n);
        }
        assert_eq!(point(3, 3, 5), vec![Elem(0), Elem(1), Elem(2)]);
    }
}
