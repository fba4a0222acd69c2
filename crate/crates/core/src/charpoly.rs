//! Integer polynomials in one variable `t`, as produced by the Möbius sum
//! over an intersection lattice.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("64-bit overflow in characteristic polynomial arithmetic")]
pub struct Overflow;

/// An integer polynomial, coefficients stored lowest degree first with no
/// trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CharPoly {
    coeffs: Vec<i64>,
}

impl CharPoly {
    pub fn from_coeffs(mut coeffs: Vec<i64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0);
        }
        Self { coeffs }
    }

    /// Coefficients highest degree first.
    pub fn from_coeffs_high_first(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().rev().copied().collect())
    }

    /// `prod (t - r)`.
    pub fn from_roots(roots: &[i64]) -> Self {
        let mut c = vec![1i64];
        for &r in roots {
            let mut next = vec![0i64; c.len() + 1];
            for (i, &a) in c.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * r;
            }
            c = next;
        }
        Self::from_coeffs(c)
    }

    /// `t^d`.
    pub fn monomial(d: usize) -> Self {
        let mut c = vec![0; d + 1];
        c[d] = 1;
        Self { coeffs: c }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeffs_high_first(&self) -> Vec<i64> {
        self.coeffs.iter().rev().copied().collect()
    }

    pub fn is_monic(&self) -> bool {
        *self.coeffs.last().unwrap() == 1
    }

    /// Exact value at an integer, failing on 64-bit overflow.
    pub fn eval(&self, n: i64) -> Result<i64, Overflow> {
        self.coeffs
            .iter()
            .rev()
            .try_fold(0i64, |acc, &c| acc.checked_mul(n)?.checked_add(c))
            .ok_or(Overflow)
    }

    pub fn sub(&self, other: &CharPoly) -> Result<CharPoly, Overflow> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                a.checked_sub(b).ok_or(Overflow)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_coeffs(c))
    }

    /// Multiplicity of 0 as a root.
    pub fn t_adic_valuation(&self) -> usize {
        self.coeffs
            .iter()
            .take_while(|&&c| c == 0)
            .count()
            .min(self.degree())
    }

    /// The integer roots with multiplicity, sorted, if the polynomial splits
    /// into linear factors over the integers. Candidates are divisors of the
    /// constant term after removing factors of `t`.
    pub fn integer_roots(&self) -> Option<Vec<i64>> {
        if !self.is_monic() {
            return None;
        }
        let mut roots = Vec::new();
        let mut c: Vec<i128> = self.coeffs.iter().map(|&x| x as i128).collect();
        while c.len() > 1 && c[0] == 0 {
            roots.push(0);
            c.remove(0);
        }
        while c.len() > 1 {
            let c0 = c[0].unsigned_abs();
            let root = (1..=c0)
                .filter(|d| c0.is_multiple_of(*d))
                .flat_map(|d| [d as i128, -(d as i128)])
                .find(|&r| eval_wide(&c, r) == 0)?;
            roots.push(root as i64);
            c = synthetic_division(&c, root);
        }
        roots.sort_unstable();
        Some(roots)
    }

    /// Product form such as `(t-1)(t-4)^2`, when the polynomial splits.
    pub fn factored(&self) -> Option<String> {
        let roots = self.integer_roots()?;
        if roots.is_empty() {
            return Some("1".to_string());
        }
        let mut out = String::new();
        let mut i = 0;
        while i < roots.len() {
            let r = roots[i];
            let mult = roots[i..].iter().take_while(|&&x| x == r).count();
            let factor = match r {
                0 => "t".to_string(),
                r if r > 0 => format!("(t-{r})"),
                r => format!("(t+{})", -r),
            };
            out.push_str(&factor);
            if mult > 1 {
                out.push_str(&format!("^{mult}"));
            }
            i += mult;
        }
        Some(out)
    }
}

fn eval_wide(c: &[i128], x: i128) -> i128 {
    c.iter()
        .rev()
        .fold(0i128, |acc, &a| acc.saturating_mul(x).saturating_add(a))
}

/// Quotient of `c` (lowest first) by `t - r`, assuming `r` is a root.
fn synthetic_division(c: &[i128], r: i128) -> Vec<i128> {
    let n = c.len() - 1;
    let mut q = vec![0i128; n];
    let mut carry = 0i128;
    for i in (0..n).rev() {
        carry = c[i + 1] + carry * r;
        q[i] = carry;
    }
    q
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mag = c.unsigned_abs();
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c < 0 { '-' } else { '+' })?;
            }
            first = false;
            match (d, mag) {
                (0, m) => write!(f, "{m}")?,
                (1, 1) => write!(f, "t")?,
                (1, m) => write!(f, "{m}t")?,
                (d, 1) => write!(f, "t^{d}")?,
                (d, m) => write!(f, "{m}t^{d}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
