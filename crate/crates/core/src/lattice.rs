//! Intersection lattices, Möbius functions and characteristic polynomials.
//!
//! Flats are found by closing `{V}` under intersection with the hyperplanes
//! of the arrangement, deduplicating by the reduced echelon basis of each
//! subspace. The Möbius function is filled in by its defining recursion,
//! from `V` downwards in dimension.

use std::collections::HashMap;
use std::collections::VecDeque;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::arrangement::{Arrangement, ArrangementError, Hyperplane};
use crate::charpoly::{CharPoly, Overflow};
use crate::field::Elem;
use crate::linalg::{row_space, Matrix};

pub const DEFAULT_LATTICE_CEILING: usize = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("intersection lattice has more than {0} flats")]
    LatticeOverflow(usize),
    #[error(transparent)]
    Overflow(#[from] Overflow),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
}

/// A subspace of `F_q^ell` that is an intersection of hyperplanes of `A`.
#[derive(Clone, Debug)]
pub struct Flat {
    /// reduced echelon basis of the subspace
    basis: Vec<Vec<Elem>>,
    /// reduced echelon basis of the annihilating covectors
    annihilator: Vec<Vec<Elem>>,
    /// positions (in `A`) of the hyperplanes containing this flat
    hyperplanes: FixedBitSet,
}

impl Flat {
    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn codim(&self) -> usize {
        self.annihilator.len()
    }

    pub fn containing_hyperplanes(&self) -> impl Iterator<Item = usize> + '_ {
        self.hyperplanes.ones()
    }
}

#[derive(Clone, Debug)]
pub struct IntersectionLattice {
    ell: usize,
    /// sorted by decreasing dimension, `V` first
    flats: Vec<Flat>,
    mobius: Vec<i64>,
}

impl IntersectionLattice {
    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn mobius(&self) -> &[i64] {
        &self.mobius
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    /// Number of flats of each dimension, indexed by dimension.
    pub fn flat_counts_by_dim(&self) -> Vec<usize> {
        let mut out = vec![0; self.ell + 1];
        for f in &self.flats {
            out[f.dim()] += 1;
        }
        out
    }

    /// `Y < X` in the lattice order, i.e. `X ⊊ Y`.
    pub fn below(&self, y: usize, x: usize) -> bool {
        let (hy, hx) = (&self.flats[y].hyperplanes, &self.flats[x].hyperplanes);
        hy.is_subset(hx) && hy != hx
    }

    /// Recomputes `mu(X) = -sum_{Y<X} mu(Y)` for every flat.
    pub fn mobius_is_consistent(&self) -> bool {
        if self.mobius.first() != Some(&1) || self.flats[0].dim() != self.ell {
            return false;
        }
        (1..self.flats.len()).all(|x| {
            let s: i64 = (0..self.flats.len())
                .filter(|&y| self.below(y, x))
                .map(|y| self.mobius[y])
                .sum();
            self.mobius[x] == -s
        })
    }

    pub fn char_poly(&self) -> CharPoly {
        let mut c = vec![0i64; self.ell + 1];
        for (f, &m) in self.flats.iter().zip(&self.mobius) {
            c[f.dim()] += m;
        }
        CharPoly::from_coeffs(c)
    }

    /// `sum mu(X) n^{dim X}` straight from the lattice.
    pub fn eval_char_poly(&self, n: i64) -> Result<i64, Overflow> {
        self.flats
            .iter()
            .zip(&self.mobius)
            .try_fold(0i64, |acc, (f, &m)| {
                let p = n.checked_pow(f.dim() as u32).ok_or(Overflow)?;
                acc.checked_add(m.checked_mul(p).ok_or(Overflow)?)
                    .ok_or(Overflow)
            })
    }
}

pub fn build_lattice(arr: &Arrangement) -> Result<IntersectionLattice, LatticeError> {
    build_lattice_with_ceiling(arr, DEFAULT_LATTICE_CEILING)
}

pub fn build_lattice_with_ceiling(
    arr: &Arrangement,
    ceiling: usize,
) -> Result<IntersectionLattice, LatticeError> {
    let ctx = arr.ctx();
    let ell = arr.ell();
    let n = arr.len();
    let make_flat = |annihilator: Vec<Vec<Elem>>| {
        let basis = if annihilator.is_empty() {
            identity(ell)
        } else {
            let k = Matrix::from_rows(ell, &annihilator).kernel_basis(ctx);
            row_space(ctx, ell, &k)
        };
        let mut hyperplanes = FixedBitSet::with_capacity(n);
        for (i, h) in arr.hyperplanes().iter().enumerate() {
            if basis.iter().all(|b| h.contains(ctx, b)) {
                hyperplanes.insert(i);
            }
        }
        Flat {
            basis,
            annihilator,
            hyperplanes,
        }
    };

    let mut flats = vec![make_flat(Vec::new())];
    let mut seen: HashMap<Vec<Vec<Elem>>, usize> = HashMap::new();
    seen.insert(flats[0].basis.clone(), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (i, h) in arr.hyperplanes().iter().enumerate() {
            if flats[x].hyperplanes.contains(i) {
                continue;
            }
            let mut rows = flats[x].annihilator.clone();
            rows.push(h.covector().to_vec());
            let flat = make_flat(row_space(ctx, ell, &rows));
            if seen.contains_key(&flat.basis) {
                continue;
            }
            if flats.len() >= ceiling {
                return Err(LatticeError::LatticeOverflow(ceiling));
            }
            seen.insert(flat.basis.clone(), flats.len());
            queue.push_back(flats.len());
            flats.push(flat);
        }
    }

    flats.sort_by(|a, b| b.dim().cmp(&a.dim()).then_with(|| a.basis.cmp(&b.basis)));
    let mut lattice = IntersectionLattice {
        ell,
        mobius: vec![0; flats.len()],
        flats,
    };
    lattice.mobius[0] = 1;
    for x in 1..lattice.flats.len() {
        // every Y < X has strictly larger dimension, so it sits earlier
        let s: i64 = (0..x)
            .filter(|&y| lattice.below(y, x))
            .map(|y| lattice.mobius[y])
            .sum();
        lattice.mobius[x] = -s;
    }
    Ok(lattice)
}

fn identity(ell: usize) -> Vec<Vec<Elem>> {
    (0..ell)
        .map(|i| {
            let mut v = vec![Elem::ZERO; ell];
            v[i] = Elem::ONE;
            v
        })
        .collect()
}

/// `chi(A, t) = sum_{X in L(A)} mu(X) t^{dim X}`.
pub fn char_poly(arr: &Arrangement) -> Result<CharPoly, LatticeError> {
    Ok(build_lattice(arr)?.char_poly())
}

/// Checks `chi(A) = chi(A \ H) - chi(A'')` as exact polynomials.
pub fn char_poly_recursion_check(arr: &Arrangement, h: &Hyperplane) -> Result<bool, LatticeError> {
    let deleted = arr.delete(h)?;
    let restricted = arr.restrict(h)?.restricted;
    let lhs = char_poly(arr)?;
    let rhs = char_poly(&deleted)?.sub(&char_poly(&restricted)?)?;
    Ok(lhs == rhs)
}
