//! Reference implementations used to cross-check the library. They share
//! no code with it beyond reading covectors and field digits.

#![allow(dead_code)]

use std::sync::Arc;

use freearr::arrangement::Arrangement;
use freearr::field::{Elem, FieldCtx};
use rand::Rng;

/// Rank over `F_p` by plain elimination on integer rows.
pub fn rank_mod_p(rows: &[Vec<u64>], p: u64) -> usize {
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| !m[r][c].is_multiple_of(p)) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = mod_pow(m[rank][c], p - 2, p);
        for x in m[rank].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn mod_pow(mut a: u64, mut n: u64, p: u64) -> u64 {
    let mut out = 1 % p;
    a %= p;
    while n > 0 {
        if n & 1 == 1 {
            out = out * a % p;
        }
        a = a * a % p;
        n >>= 1;
    }
    out
}

fn int_rows(arr: &Arrangement) -> Vec<Vec<u64>> {
    arr.covectors()
        .iter()
        .map(|c| c.iter().map(|x| x.0 as u64).collect())
        .collect()
}

/// `chi(A, t) = Σ_{S ⊆ A} (-1)^{|S|} t^{ell - rank S}`, lowest degree first.
/// Prime fields only.
pub fn whitney_char_poly(arr: &Arrangement) -> Vec<i64> {
    let p = arr.q() as u64;
    let rows = int_rows(arr);
    let n = rows.len();
    let mut coeffs = vec![0i64; arr.ell() + 1];
    for mask in 0u64..1 << n {
        let sub: Vec<Vec<u64>> = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| rows[i].clone())
            .collect();
        let sign = if sub.len().is_multiple_of(2) { 1 } else { -1 };
        coeffs[arr.ell() - rank_mod_p(&sub, p)] += sign;
    }
    coeffs
}

/// Points of `F_p^ell` on no hyperplane. Prime fields only.
pub fn naive_complement(arr: &Arrangement) -> u64 {
    let p = arr.q() as u64;
    let ell = arr.ell();
    let rows = int_rows(arr);
    let mut count = 0;
    for n in 0..p.pow(ell as u32) {
        let v: Vec<u64> = (0..ell).map(|i| n / p.pow(i as u32) % p).collect();
        if rows
            .iter()
            .all(|r| r.iter().zip(&v).map(|(a, b)| a * b).sum::<u64>() % p != 0)
        {
            count += 1;
        }
    }
    count
}

/// Product in `F_p[x]/(f)` computed from digit vectors by schoolbook
/// multiplication and long division.
pub fn reference_mul(f: &FieldCtx, a: Elem, b: Elem) -> Elem {
    let p = f.characteristic() as u64;
    let da: Vec<u64> = f.prime_coefficients(a).iter().map(|&x| x as u64).collect();
    let db: Vec<u64> = f.prime_coefficients(b).iter().map(|&x| x as u64).collect();
    let modulus: Vec<u64> = f.modulus().iter().map(|c| c.0 as u64).collect();
    let e = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * e];
    for (i, x) in da.iter().enumerate() {
        for (j, y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for deg in (e..prod.len()).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        for (k, m) in modulus.iter().enumerate() {
            let idx = deg - e + k;
            prod[idx] = (prod[idx] + (p - c) * m % p) % p;
        }
    }
    let digits: Vec<u32> = prod[..e].iter().map(|&x| x as u32).collect();
    f.from_prime_coefficients(&digits).expect("digits in range")
}

/// Sum in `F_p[x]/(f)`, digit by digit.
pub fn reference_add(f: &FieldCtx, a: Elem, b: Elem) -> Elem {
    let p = f.characteristic();
    let digits: Vec<u32> = f
        .prime_coefficients(a)
        .iter()
        .zip(f.prime_coefficients(b))
        .map(|(x, y)| (x + y) % p)
        .collect();
    f.from_prime_coefficients(&digits).expect("digits in range")
}

/// Rebuilds a census record's arrangement from its id.
pub fn from_id(ctx: Arc<FieldCtx>, ell: usize, id: &str) -> Arrangement {
    let rows: Vec<Vec<Elem>> = if id == "-" {
        Vec::new()
    } else {
        id.split(';')
            .map(|h| h.split(',').map(|c| Elem(c.parse().unwrap())).collect())
            .collect()
    };
    Arrangement::new(ctx, ell, &rows).unwrap()
}

/// Each hyperplane of `all` kept with probability 1/2.
pub fn random_subset(all: &Arrangement, rng: &mut impl Rng) -> Arrangement {
    let idx: Vec<usize> = (0..all.len()).filter(|_| rng.random_bool(0.5)).collect();
    all.subset(&idx)
}
