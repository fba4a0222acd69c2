//! Logarithmic derivations `D(A)`, minimal generators and Saito's criterion.
//!
//! A derivation `δ = Σ f_i ∂/∂x_i` is logarithmic for `A` when `α_H` divides
//! `δ(α_H) = Σ c_i f_i` for every hyperplane. Each graded piece `D(A)_d` is
//! the kernel of a linear system over `F_q` whose unknowns are the
//! coefficients of the `f_i`, one block of monomials per coordinate.

use std::collections::HashMap;

use itertools::Itertools;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;
use thiserror::Error;

use crate::arrangement::{Arrangement, Hyperplane};
use crate::charpoly::CharPoly;
use crate::field::Elem;
use crate::lattice::{char_poly, LatticeError};
use crate::linalg::{EchelonSpace, Matrix};
use crate::poly::{monomial_count, monomials_of_degree, Monomial, MultiPoly, PolyRing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogError {
    #[error("expected {expected} derivations, found {found}")]
    WrongCount { expected: usize, found: usize },
    #[error("derivation {index} is not logarithmic along the arrangement")]
    NotLogarithmic { index: usize },
    #[error("derivation components must be homogeneous of one degree")]
    NotHomogeneous,
    #[error("arrangement is not essential")]
    NotEssential,
    #[error("no derivation outside S·θ_E up to degree {q}")]
    DegreeBoundExceeded { q: u32 },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A homogeneous polynomial vector field `Σ f_i ∂/∂x_i`; its degree is the
/// common degree of the `f_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    components: Vec<MultiPoly>,
    degree: u32,
}

impl Derivation {
    pub fn new(components: Vec<MultiPoly>, degree: u32) -> Result<Self, LogError> {
        let ok = components
            .iter()
            .all(|f| f.is_zero() || f.homogeneous_degree() == Some(degree));
        if !ok {
            return Err(LogError::NotHomogeneous);
        }
        Ok(Self { components, degree })
    }

    /// `θ_E = Σ x_i ∂/∂x_i`.
    pub fn euler(ring: &PolyRing) -> Self {
        Self::power_field(ring, 1)
    }

    /// `δ_k = Σ x_i^{q^k} ∂/∂x_i`; `δ_0` is the Euler field.
    pub fn frobenius(ring: &PolyRing, k: u32) -> Self {
        let q = ring.ctx().order();
        Self::power_field(ring, q.pow(k))
    }

    fn power_field(ring: &PolyRing, e: u32) -> Self {
        let n = ring.nvars();
        Self {
            components: (0..n).map(|i| ring.var_pow(i, e)).collect(),
            degree: e,
        }
    }

    /// `∂/∂x_i`.
    pub fn coordinate(ring: &PolyRing, i: usize) -> Self {
        let mut components = vec![ring.zero(); ring.nvars()];
        components[i] = ring.one();
        Self {
            components,
            degree: 0,
        }
    }

    /// `x_i ∂/∂x_i`.
    pub fn scaled_coordinate(ring: &PolyRing, i: usize) -> Self {
        let mut components = vec![ring.zero(); ring.nvars()];
        components[i] = ring.var(i);
        Self {
            components,
            degree: 1,
        }
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.components
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|f| f.is_zero())
    }

    /// `g·δ` for a homogeneous `g`.
    pub fn multiply(&self, ring: &PolyRing, g: &MultiPoly) -> Self {
        let dg = g.homogeneous_degree().unwrap_or(0);
        Self {
            components: self.components.iter().map(|f| ring.mul(f, g)).collect(),
            degree: self.degree + dg,
        }
    }

    /// `δ(p) = Σ f_i ∂p/∂x_i`.
    pub fn apply(&self, ring: &PolyRing, p: &MultiPoly) -> MultiPoly {
        self.components
            .iter()
            .enumerate()
            .fold(ring.zero(), |acc, (i, f)| {
                ring.add(&acc, &ring.mul(f, &ring.partial(p, i)))
            })
    }

    /// `δ(α) = Σ c_i f_i` for a linear form with covector `c`.
    pub fn apply_linear(&self, ring: &PolyRing, covector: &[Elem]) -> MultiPoly {
        self.components
            .iter()
            .zip(covector)
            .fold(ring.zero(), |acc, (f, &c)| {
                ring.add(&acc, &ring.scale(f, c))
            })
    }

    /// Whether `α_H` divides `δ(α_H)`, tested by symbolic substitution.
    pub fn preserves(&self, ring: &PolyRing, h: &Hyperplane) -> bool {
        let image = self.apply_linear(ring, h.covector());
        ring.reduce_mod_linear(&image, h.covector())
            .is_some_and(|r| r.is_zero())
    }

    pub fn is_logarithmic(&self, ring: &PolyRing, arr: &Arrangement) -> bool {
        arr.hyperplanes().iter().all(|h| self.preserves(ring, h))
    }

    pub fn format(&self, ring: &PolyRing) -> String {
        let parts: Vec<String> = self.components.iter().map(|f| ring.format(f)).collect();
        format!("({})", parts.join(", "))
    }
}

impl Serialize for Derivation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let comps: Vec<Vec<(&Monomial, u32)>> = self
            .components
            .iter()
            .map(|f| f.terms().iter().map(|(m, c)| (m, c.0)).collect())
            .collect();
        let mut st = s.serialize_struct("Derivation", 2)?;
        st.serialize_field("degree", &self.degree)?;
        st.serialize_field("components", &comps)?;
        st.end()
    }
}

/// An `F_q`-basis of `D(A)_d`.
#[derive(Clone, Debug)]
pub struct GradedBasis {
    pub degree: u32,
    pub members: Vec<Derivation>,
}

impl GradedBasis {
    pub fn dim(&self) -> usize {
        self.members.len()
    }
}

/// Coordinates for the degree-`d` piece of `Der_V`: unknown `(i, m)` sits at
/// `i * M + index(m)` where `M` is the number of degree-`d` monomials.
struct Layout {
    ell: usize,
    degree: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl Layout {
    fn new(ell: usize, degree: u32) -> Self {
        let monomials = monomials_of_degree(ell, degree);
        let index = monomials
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        Self {
            ell,
            degree,
            monomials,
            index,
        }
    }

    fn width(&self) -> usize {
        self.ell * self.monomials.len()
    }

    fn to_derivation(&self, ring: &PolyRing, v: &[Elem]) -> Derivation {
        let m = self.monomials.len();
        let components = (0..self.ell)
            .map(|i| {
                ring.from_terms(
                    self.monomials
                        .iter()
                        .zip(&v[i * m..(i + 1) * m])
                        .map(|(mono, &c)| (mono.clone(), c)),
                )
            })
            .collect();
        Derivation {
            components,
            degree: self.degree,
        }
    }

    /// Dense coordinates of `x^shift · δ`; `δ` has degree `degree - |shift|`.
    fn dense_shifted(&self, delta: &Derivation, shift: &[u32]) -> Vec<Elem> {
        let m = self.monomials.len();
        let mut v = vec![Elem::ZERO; self.width()];
        for (i, f) in delta.components.iter().enumerate() {
            for (mono, &c) in f.terms() {
                let key: Monomial = mono.iter().zip(shift).map(|(a, b)| a + b).collect();
                v[i * m + self.index[&key]] = c;
            }
        }
        v
    }
}

/// Kernel basis (dense) of the logarithmic conditions in degree `d`.
fn solve_piece(ring: &PolyRing, arr: &Arrangement, layout: &Layout) -> Vec<Vec<Elem>> {
    let ctx = ring.ctx();
    let m = layout.monomials.len();
    let width = layout.width();
    let mut rows: Vec<Vec<Elem>> = Vec::new();
    for h in arr.hyperplanes() {
        let c = h.covector();
        let j = h.pivot();
        // canonical covectors have c_j = 1, so x_j ≡ -Σ_{i>j} c_i x_i
        let inv = ctx.inv(c[j]).unwrap();
        let sub: Vec<Elem> = c
            .iter()
            .enumerate()
            .map(|(i, &ci)| {
                if i == j {
                    Elem::ZERO
                } else {
                    ctx.neg(ctx.mul(ci, inv))
                }
            })
            .collect();
        let lin = ring.linear_form(&sub);
        let mut powers = vec![ring.one()];
        for _ in 0..layout.degree {
            let next = ring.mul(powers.last().unwrap(), &lin);
            powers.push(next);
        }
        let mut row_of: HashMap<Monomial, usize> = HashMap::new();
        let first = rows.len();
        for (k, mono) in layout.monomials.iter().enumerate() {
            let mut rest = mono.clone();
            let e = rest[j] as usize;
            rest[j] = 0;
            let residue = ring.shift(&powers[e], &rest);
            for (r, &a) in residue.terms() {
                let row = *row_of.entry(r.clone()).or_insert_with(|| {
                    rows.push(vec![Elem::ZERO; width]);
                    rows.len() - 1
                });
                for (i, &ci) in c.iter().enumerate() {
                    if !ci.is_zero() {
                        let cell = &mut rows[row][i * m + k];
                        *cell = ctx.add(*cell, ctx.mul(ci, a));
                    }
                }
            }
        }
        debug_assert!(rows.len() - first <= monomial_count(layout.ell, layout.degree as i64));
    }
    if rows.is_empty() {
        return (0..width)
            .map(|k| {
                let mut v = vec![Elem::ZERO; width];
                v[k] = Elem::ONE;
                v
            })
            .collect();
    }
    Matrix::from_rows(width, &rows).kernel_basis(ctx)
}

fn ring_of(arr: &Arrangement) -> PolyRing {
    PolyRing::new(arr.ctx().clone(), arr.ell())
}

/// An `F_q`-basis of `D(A)_d`.
pub fn graded_piece(arr: &Arrangement, d: u32) -> GradedBasis {
    let ring = ring_of(arr);
    let layout = Layout::new(arr.ell(), d);
    let members = solve_piece(&ring, arr, &layout)
        .iter()
        .map(|v| layout.to_derivation(&ring, v))
        .collect();
    GradedBasis { degree: d, members }
}

/// `dim D(A)_d` for `d = 0..=d_max`.
pub fn hilbert_function(arr: &Arrangement, d_max: u32) -> Vec<usize> {
    let ring = ring_of(arr);
    (0..=d_max)
        .map(|d| solve_piece(&ring, arr, &Layout::new(arr.ell(), d)).len())
        .collect()
}

/// `Σ_i #{monomials of degree d - d_i}`: the Hilbert function of a free
/// module with generators in degrees `degrees`.
pub fn free_hilbert_value(ell: usize, degrees: &[u32], d: u32) -> usize {
    degrees
        .iter()
        .map(|&e| monomial_count(ell, d as i64 - e as i64))
        .sum()
}

/// Degree-by-degree extraction of minimal homogeneous generators.
struct GeneratorSearch<'a> {
    arr: &'a Arrangement,
    ring: PolyRing,
    generators: Vec<Derivation>,
    /// whether the generators are known to be independent over `S`
    independent: bool,
    hilbert: Vec<usize>,
}

impl<'a> GeneratorSearch<'a> {
    fn new(arr: &'a Arrangement) -> Self {
        Self {
            arr,
            ring: ring_of(arr),
            generators: Vec::new(),
            independent: true,
            hilbert: Vec::new(),
        }
    }

    /// Processes degree `d` (called with `d = 0, 1, 2, ...`) and returns
    /// the number of new generators found.
    fn step(&mut self, d: u32) -> usize {
        let ctx = self.ring.ctx().clone();
        let layout = Layout::new(self.arr.ell(), d);
        let piece = solve_piece(&self.ring, self.arr, &layout);
        self.hilbert.push(piece.len());
        let degrees: Vec<u32> = self.generators.iter().map(|g| g.degree).collect();
        if self.independent && free_hilbert_value(self.arr.ell(), &degrees, d) == piece.len() {
            return 0;
        }
        let mut span = EchelonSpace::new(layout.width());
        'outer: for g in &self.generators {
            for shift in monomials_of_degree(self.arr.ell(), d - g.degree) {
                span.insert(&ctx, &layout.dense_shifted(g, &shift));
                if span.rank() == piece.len() {
                    break 'outer;
                }
            }
        }
        let mut found = 0;
        for v in &piece {
            if span.rank() == piece.len() {
                break;
            }
            if span.insert(&ctx, v) {
                self.generators.push(layout.to_derivation(&self.ring, v));
                found += 1;
            }
        }
        if found > 0 {
            self.independent = self.generators.len() <= self.arr.ell()
                && has_nonzero_maximal_minor(&self.ring, &self.generators);
        }
        found
    }
}

fn has_nonzero_maximal_minor(ring: &PolyRing, gens: &[Derivation]) -> bool {
    let k = gens.len();
    (0..ring.nvars()).combinations(k).any(|cols| {
        let m: Vec<Vec<MultiPoly>> = gens
            .iter()
            .map(|g| cols.iter().map(|&c| g.components[c].clone()).collect())
            .collect();
        !determinant(ring, &m).is_zero()
    })
}

/// Minimal homogeneous generators of `D(A)` in degrees `0..=d_max`, in
/// weakly increasing degree.
pub fn minimal_generators(arr: &Arrangement, d_max: u32) -> Vec<Derivation> {
    let mut search = GeneratorSearch::new(arr);
    for d in 0..=d_max {
        search.step(d);
    }
    search.generators
}

/// Leibniz expansion of a square polynomial matrix.
pub fn determinant(ring: &PolyRing, m: &[Vec<MultiPoly>]) -> MultiPoly {
    let n = m.len();
    let ctx = ring.ctx();
    let mut det = ring.zero();
    for perm in (0..n).permutations(n) {
        let inversions = (0..n)
            .tuple_combinations()
            .filter(|&(i, j)| perm[i] > perm[j])
            .count();
        let mut term = ring.one();
        for (row, &col) in perm.iter().enumerate() {
            term = ring.mul(&term, &m[row][col]);
            if term.is_zero() {
                break;
            }
        }
        if term.is_zero() {
            continue;
        }
        if inversions % 2 == 1 {
            term = ring.scale(&term, ctx.neg(Elem::ONE));
        }
        det = ring.add(&det, &term);
    }
    det
}

/// `Q = Π α_H`.
pub fn defining_polynomial(ring: &PolyRing, arr: &Arrangement) -> MultiPoly {
    arr.hyperplanes().iter().fold(ring.one(), |acc, h| {
        ring.mul(&acc, &ring.linear_form(h.covector()))
    })
}

/// Outcome of a successful Saito test: `det = scalar · Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaitoCertificate {
    pub scalar: Elem,
    /// sorted degrees of the derivations
    pub exponents: Vec<u32>,
}

/// Saito's criterion: `ell` logarithmic derivations form a basis of `D(A)`
/// exactly when their coefficient determinant is a nonzero scalar multiple
/// of the defining polynomial.
pub fn saito_check(
    arr: &Arrangement,
    derivations: &[Derivation],
) -> Result<Option<SaitoCertificate>, LogError> {
    let ring = ring_of(arr);
    if derivations.len() != arr.ell() {
        return Err(LogError::WrongCount {
            expected: arr.ell(),
            found: derivations.len(),
        });
    }
    for (index, d) in derivations.iter().enumerate() {
        if d.components.len() != arr.ell() || !d.is_logarithmic(&ring, arr) {
            return Err(LogError::NotLogarithmic { index });
        }
    }
    let m: Vec<Vec<MultiPoly>> = derivations.iter().map(|d| d.components.clone()).collect();
    let det = determinant(&ring, &m);
    if det.is_zero() {
        return Ok(None);
    }
    let q = defining_polynomial(&ring, arr);
    let Some(quot) = ring.div_exact(&det, &q) else {
        return Ok(None);
    };
    let zero_exp = vec![0; arr.ell()];
    if quot.len() != 1 || quot.terms().keys().next() != Some(&zero_exp) {
        return Ok(None);
    }
    let mut exponents: Vec<u32> = derivations.iter().map(|d| d.degree).collect();
    exponents.sort_unstable();
    Ok(Some(SaitoCertificate {
        scalar: quot.coeff(&zero_exp),
        exponents,
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Free,
    NotFree,
    Undetermined,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Free => "free",
            Verdict::NotFree => "not_free",
            Verdict::Undetermined => "undetermined",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `ell` derivations with `det = scalar · Q`
    SaitoBasis {
        scalar: u32,
        derivations: Vec<Derivation>,
    },
    /// `chi(A, t)` has a root that is not an integer
    TeraoObstruction {
        char_poly: Vec<i64>,
    },
    /// more than `ell` minimal generators, with their degrees
    GeneratorExcess {
        degrees: Vec<u32>,
    },
    /// exactly `ell` generators up to the bound, with zero determinant
    DependentGenerators {
        degrees: Vec<u32>,
    },
    None,
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::SaitoBasis { .. } => "saito_basis",
            Certificate::TeraoObstruction { .. } => "terao_obstruction",
            Certificate::GeneratorExcess { .. } => "generator_excess",
            Certificate::DependentGenerators { .. } => "dependent_generators",
            Certificate::None => "none",
        }
    }
}

#[derive(Clone, Debug)]
pub struct FreenessReport {
    pub verdict: Verdict,
    /// sorted exponents when free
    pub exponents: Option<Vec<u32>>,
    pub certificate: Certificate,
    pub char_poly: CharPoly,
    /// `dim D(A)_d` for every degree examined
    pub hilbert: Vec<usize>,
    pub generator_degrees: Vec<u32>,
    pub degree_bound: u32,
}

impl Serialize for FreenessReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FreenessReport", 7)?;
        st.serialize_field("verdict", &self.verdict)?;
        st.serialize_field("exponents", &self.exponents)?;
        st.serialize_field("char_poly", &self.char_poly.coeffs_high_first())?;
        st.serialize_field("certificate", &self.certificate)?;
        st.serialize_field("hilbert", &self.hilbert)?;
        st.serialize_field("generator_degrees", &self.generator_degrees)?;
        st.serialize_field("degree_bound", &self.degree_bound)?;
        st.end()
    }
}

impl FreenessReport {
    /// Re-runs Saito's criterion on the certificate from scratch.
    pub fn verify(&self, arr: &Arrangement) -> bool {
        match (&self.verdict, &self.certificate) {
            (
                Verdict::Free,
                Certificate::SaitoBasis {
                    scalar,
                    derivations,
                },
            ) => match saito_check(arr, derivations) {
                Ok(Some(cert)) => {
                    cert.scalar.0 == *scalar && Some(&cert.exponents) == self.exponents.as_ref()
                }
                _ => false,
            },
            (Verdict::NotFree, Certificate::TeraoObstruction { .. }) => {
                char_poly(arr).is_ok_and(|cp| cp.integer_roots().is_none())
            }
            (Verdict::NotFree, Certificate::GeneratorExcess { degrees }) => {
                degrees.len() > arr.ell()
            }
            (Verdict::NotFree, Certificate::DependentGenerators { degrees }) => {
                degrees.len() == arr.ell()
            }
            (Verdict::Undetermined, _) => true,
            _ => false,
        }
    }
}

/// Decides whether `D(A)` is a free `S`-module.
///
/// Splitting of `chi(A, t)` over the integers is checked first. Then minimal
/// generators are extracted degree by degree up to `|A|`, which bounds every
/// exponent of a free arrangement. More than `ell` generators, or exactly
/// `ell` generators at the bound that fail Saito's criterion, rule freeness
/// out; `ell` generators passing it prove freeness.
pub fn decide_freeness(arr: &Arrangement) -> Result<FreenessReport, LogError> {
    let cp = char_poly(arr)?;
    let ell = arr.ell();
    let bound = arr.len() as u32;
    let mut report = FreenessReport {
        verdict: Verdict::Undetermined,
        exponents: None,
        certificate: Certificate::None,
        char_poly: cp.clone(),
        hilbert: Vec::new(),
        generator_degrees: Vec::new(),
        degree_bound: bound,
    };
    if cp.integer_roots().is_none() {
        report.verdict = Verdict::NotFree;
        report.certificate = Certificate::TeraoObstruction {
            char_poly: cp.coeffs_high_first(),
        };
        return Ok(report);
    }
    let mut search = GeneratorSearch::new(arr);
    let mut full_count = false;
    for d in 0..=bound {
        let found = search.step(d);
        let gens = &search.generators;
        report.hilbert = search.hilbert.clone();
        report.generator_degrees = gens.iter().map(|g| g.degree).collect();
        if gens.len() > ell {
            report.verdict = Verdict::NotFree;
            report.certificate = Certificate::GeneratorExcess {
                degrees: report.generator_degrees.clone(),
            };
            return Ok(report);
        }
        if found > 0 && gens.len() == ell {
            let total: u32 = report.generator_degrees.iter().sum();
            full_count = true;
            if total == bound {
                if let Some(cert) = saito_check(arr, gens)? {
                    report.verdict = Verdict::Free;
                    report.exponents = Some(cert.exponents);
                    report.certificate = Certificate::SaitoBasis {
                        scalar: cert.scalar.0,
                        derivations: gens.clone(),
                    };
                    return Ok(report);
                }
            }
        }
    }
    if full_count && !search.independent {
        report.verdict = Verdict::NotFree;
        report.certificate = Certificate::DependentGenerators {
            degrees: report.generator_degrees.clone(),
        };
    }
    Ok(report)
}

/// The least `d` with `D(A)_d ≠ S_{d-1}·θ_E`, for essential `A`. Since
/// `δ_1` has degree `q`, the answer never exceeds `q`.
pub fn minimal_nontrivial_degree(arr: &Arrangement) -> Result<u32, LogError> {
    if !arr.is_essential() {
        return Err(LogError::NotEssential);
    }
    let ring = ring_of(arr);
    let q = arr.q();
    for d in 1..=q {
        let dim = solve_piece(&ring, arr, &Layout::new(arr.ell(), d)).len();
        if dim > monomial_count(arr.ell(), d as i64 - 1) {
            return Ok(d);
        }
    }
    Err(LogError::DegreeBoundExceeded { q })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{all_hyperplanes, ziegler};
    use crate::field::field_of_order;

    fn degrees(gens: &[Derivation]) -> Vec<u32> {
        gens.iter().map(|g| g.degree()).collect()
    }

    #[test]
    fn euler_field_is_always_logarithmic() {
        for q in [2, 3, 4] {
            let a = all_hyperplanes(field_of_order(q).unwrap(), 3).unwrap();
            let ring = ring_of(&a);
            assert!(Derivation::euler(&ring).is_logarithmic(&ring, &a));
            assert!(Derivation::frobenius(&ring, 1).is_logarithmic(&ring, &a));
            let piece = graded_piece(&a, 1);
            assert_eq!(piece.dim(), 1);
        }
    }

    #[test]
    fn empty_arrangement_pieces_are_unconstrained() {
        let a = Arrangement::empty(field_of_order(3).unwrap(), 3);
        for d in 0..4 {
            assert_eq!(graded_piece(&a, d).dim(), 3 * monomial_count(3, d as i64));
        }
        assert_eq!(degrees(&minimal_generators(&a, 3)), vec![0, 0, 0]);
    }

    #[test]
    fn all_hyperplanes_f2_generators() {
        let a = all_hyperplanes(field_of_order(2).unwrap(), 3).unwrap();
        let piece = graded_piece(&a, 2);
        let ring = ring_of(&a);
        let delta1 = Derivation::frobenius(&ring, 1);
        assert_eq!(piece.dim(), 4);
        let layout = Layout::new(3, 2);
        let mut span = EchelonSpace::new(layout.width());
        for m in &piece.members {
            span.insert(ring.ctx(), &layout.dense_shifted(m, &[0, 0, 0]));
        }
        assert!(span.contains(ring.ctx(), &layout.dense_shifted(&delta1, &[0, 0, 0])));
        assert_eq!(degrees(&minimal_generators(&a, 7)), vec![1, 2, 4]);
    }

    #[test]
    fn boolean_generators_and_saito() {
        let ctx = field_of_order(2).unwrap();
        let a = Arrangement::boolean(ctx, 3);
        assert_eq!(degrees(&minimal_generators(&a, 3)), vec![1, 1, 1]);
        let ring = ring_of(&a);
        let basis: Vec<Derivation> = (0..3)
            .map(|i| Derivation::scaled_coordinate(&ring, i))
            .collect();
        let cert = saito_check(&a, &basis).unwrap().unwrap();
        assert_eq!(cert.scalar, Elem::ONE);
        assert_eq!(cert.exponents, vec![1, 1, 1]);
    }

    #[test]
    fn saito_on_frobenius_fields() {
        let a = all_hyperplanes(field_of_order(2).unwrap(), 3).unwrap();
        let ring = ring_of(&a);
        let basis: Vec<Derivation> = (0..3).map(|k| Derivation::frobenius(&ring, k)).collect();
        let cert = saito_check(&a, &basis).unwrap().unwrap();
        assert!(!cert.scalar.is_zero());
        assert_eq!(cert.exponents, vec![1, 2, 4]);
    }

    #[test]
    fn saito_rejects_proportional_fields() {
        let a = all_hyperplanes(field_of_order(3).unwrap(), 3).unwrap();
        let ring = ring_of(&a);
        let e = Derivation::euler(&ring);
        let basis = vec![
            e.clone(),
            e.multiply(&ring, &ring.var(0)),
            e.multiply(&ring, &ring.var_pow(0, 2)),
        ];
        assert_eq!(saito_check(&a, &basis).unwrap(), None);
    }

    #[test]
    fn saito_errors() {
        let a = Arrangement::boolean(field_of_order(3).unwrap(), 3);
        let ring = ring_of(&a);
        let e = Derivation::euler(&ring);
        assert_eq!(
            saito_check(&a, std::slice::from_ref(&e)).unwrap_err(),
            LogError::WrongCount {
                expected: 3,
                found: 1
            }
        );
        let bad = Derivation::coordinate(&ring, 0);
        assert_eq!(
            saito_check(&a, &[e.clone(), bad, e]).unwrap_err(),
            LogError::NotLogarithmic { index: 1 }
        );
    }

    #[test]
    fn freeness_of_fixtures() {
        let a = all_hyperplanes(field_of_order(3).unwrap(), 3).unwrap();
        let r = decide_freeness(&a).unwrap();
        assert_eq!(r.verdict, Verdict::Free);
        assert_eq!(r.exponents, Some(vec![1, 3, 9]));
        assert!(r.verify(&a));

        let z = ziegler(field_of_order(3).unwrap()).unwrap();
        let r = decide_freeness(&z).unwrap();
        assert_eq!(r.verdict, Verdict::NotFree);
        assert!(r.verify(&z));

        let x = Arrangement::from_ints(field_of_order(2).unwrap(), 3, &[&[1, 0, 0]]).unwrap();
        let r = decide_freeness(&x).unwrap();
        assert_eq!(r.verdict, Verdict::Free);
        assert_eq!(r.exponents, Some(vec![0, 0, 1]));

        let e = Arrangement::empty(field_of_order(2).unwrap(), 3);
        assert_eq!(decide_freeness(&e).unwrap().exponents, Some(vec![0, 0, 0]));
    }

    #[test]
    fn terao_filter_fires_first() {
        // four generic planes in F_3^3: chi = (t-1)(t^2 - 3t + 3)
        let a = Arrangement::from_ints(
            field_of_order(3).unwrap(),
            3,
            &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]],
        )
        .unwrap();
        let r = decide_freeness(&a).unwrap();
        assert_eq!(r.verdict, Verdict::NotFree);
        assert_eq!(r.certificate.kind(), "terao_obstruction");
        assert!(r.hilbert.is_empty());
    }

    #[test]
    fn minimal_nontrivial_degrees() {
        let a = all_hyperplanes(field_of_order(2).unwrap(), 3).unwrap();
        assert_eq!(minimal_nontrivial_degree(&a).unwrap(), 2);
        let b = Arrangement::boolean(field_of_order(2).unwrap(), 3);
        assert_eq!(minimal_nontrivial_degree(&b).unwrap(), 1);
        let z = ziegler(field_of_order(3).unwrap()).unwrap();
        assert!(minimal_nontrivial_degree(&z).unwrap() <= 3);
        let x = Arrangement::from_ints(field_of_order(2).unwrap(), 3, &[&[1, 0, 0]]).unwrap();
        assert_eq!(
            minimal_nontrivial_degree(&x).unwrap_err(),
            LogError::NotEssential
        );
    }

    #[test]
    fn report_serializes() {
        let b = Arrangement::boolean(field_of_order(2).unwrap(), 3);
        let r = decide_freeness(&b).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["verdict"], "free");
        assert_eq!(json["certificate"]["kind"], "saito_basis");
        assert_eq!(json["exponents"], serde_json::json!([1, 1, 1]));
    }
}
