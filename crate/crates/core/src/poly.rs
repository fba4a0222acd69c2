//! Sparse multivariate polynomials over a finite field.

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::sync::Arc;

use crate::field::{Elem, FieldCtx};

/// Exponent vector, one entry per variable.
pub type Monomial = Vec<u32>;

/// A polynomial as a map from exponent vectors to nonzero coefficients.
/// The `BTreeMap` order is lexicographic in the exponents with `x_1` most
/// significant, which is the monomial order used for division.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Elem>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Elem> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &[u32]) -> Elem {
        self.terms.get(m).copied().unwrap_or(Elem::ZERO)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, Elem)> {
        self.terms.last_key_value().map(|(m, &c)| (m, c))
    }

    /// Largest total degree of a term; `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    /// The common degree of all terms, if there is one. Zero counts as
    /// homogeneous of every degree and reports `None`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|m| m.iter().sum::<u32>());
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    fn add_term(&mut self, ctx: &FieldCtx, m: Monomial, c: Elem) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = ctx.add(*e.get(), c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }
}

/// `F_q[x_1, ..., x_n]`.
#[derive(Clone, Debug)]
pub struct PolyRing {
    ctx: Arc<FieldCtx>,
    nvars: usize,
}

impl PolyRing {
    pub fn new(ctx: Arc<FieldCtx>, nvars: usize) -> Self {
        Self { ctx, nvars }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn zero(&self) -> MultiPoly {
        MultiPoly::zero(self.nvars)
    }

    pub fn constant(&self, c: Elem) -> MultiPoly {
        self.term(vec![0; self.nvars], c)
    }

    pub fn one(&self) -> MultiPoly {
        self.constant(Elem::ONE)
    }

    pub fn term(&self, m: Monomial, c: Elem) -> MultiPoly {
        assert_eq!(m.len(), self.nvars);
        let mut p = self.zero();
        p.add_term(&self.ctx, m, c);
        p
    }

    /// `x_i^e`.
    pub fn var_pow(&self, i: usize, e: u32) -> MultiPoly {
        let mut m = vec![0; self.nvars];
        m[i] = e;
        self.term(m, Elem::ONE)
    }

    pub fn var(&self, i: usize) -> MultiPoly {
        self.var_pow(i, 1)
    }

    /// `sum c_i x_i`.
    pub fn linear_form(&self, covector: &[Elem]) -> MultiPoly {
        assert_eq!(covector.len(), self.nvars);
        let mut p = self.zero();
        for (i, &c) in covector.iter().enumerate() {
            let mut m = vec![0; self.nvars];
            m[i] = 1;
            p.add_term(&self.ctx, m, c);
        }
        p
    }

    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Monomial, Elem)>) -> MultiPoly {
        let mut p = self.zero();
        for (m, c) in terms {
            assert_eq!(m.len(), self.nvars);
            p.add_term(&self.ctx, m, c);
        }
        p
    }

    pub fn add(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        let mut out = a.clone();
        for (m, &c) in &b.terms {
            out.add_term(&self.ctx, m.clone(), c);
        }
        out
    }

    pub fn neg(&self, a: &MultiPoly) -> MultiPoly {
        MultiPoly {
            nvars: a.nvars,
            terms: a
                .terms
                .iter()
                .map(|(m, &c)| (m.clone(), self.ctx.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &MultiPoly, c: Elem) -> MultiPoly {
        if c.is_zero() {
            return self.zero();
        }
        MultiPoly {
            nvars: a.nvars,
            terms: a
                .terms
                .iter()
                .map(|(m, &x)| (m.clone(), self.ctx.mul(x, c)))
                .collect(),
        }
    }

    pub fn mul(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        let mut acc: HashMap<Monomial, Elem> = HashMap::new();
        for (ma, &ca) in &a.terms {
            for (mb, &cb) in &b.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                let c = self.ctx.mul(ca, cb);
                let e = acc.entry(m).or_insert(Elem::ZERO);
                *e = self.ctx.add(*e, c);
            }
        }
        MultiPoly {
            nvars: self.nvars,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Multiplies by the monomial `x^m`.
    pub fn shift(&self, a: &MultiPoly, m: &[u32]) -> MultiPoly {
        MultiPoly {
            nvars: a.nvars,
            terms: a
                .terms
                .iter()
                .map(|(k, &c)| (k.iter().zip(m).map(|(x, y)| x + y).collect(), c))
                .collect(),
        }
    }

    pub fn pow(&self, a: &MultiPoly, n: u32) -> MultiPoly {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn product<'a>(&self, factors: impl IntoIterator<Item = &'a MultiPoly>) -> MultiPoly {
        factors
            .into_iter()
            .fold(self.one(), |acc, f| self.mul(&acc, f))
    }

    /// `∂a/∂x_i`.
    pub fn partial(&self, a: &MultiPoly, i: usize) -> MultiPoly {
        let mut out = self.zero();
        for (m, &c) in &a.terms {
            if m[i] == 0 {
                continue;
            }
            let mut d = m.clone();
            d[i] -= 1;
            out.add_term(
                &self.ctx,
                d,
                self.ctx.mul(c, self.ctx.from_int(m[i] as i64)),
            );
        }
        out
    }

    pub fn eval(&self, a: &MultiPoly, point: &[Elem]) -> Elem {
        a.terms.iter().fold(Elem::ZERO, |acc, (m, &c)| {
            let v = m
                .iter()
                .zip(point)
                .fold(c, |t, (&e, &x)| self.ctx.mul(t, self.ctx.pow(x, e as u64)));
            self.ctx.add(acc, v)
        })
    }

    /// Exact quotient `a / b`, or `None` when `b` does not divide `a`.
    pub fn div_exact(&self, a: &MultiPoly, b: &MultiPoly) -> Option<MultiPoly> {
        let (lm_b, lc_b) = b.leading_term()?;
        let lm_b = lm_b.clone();
        let inv = self.ctx.inv(lc_b).unwrap();
        let mut rem = a.clone();
        let mut quot = self.zero();
        while let Some((lm, lc)) = rem.leading_term() {
            if lm.iter().zip(&lm_b).any(|(x, y)| x < y) {
                return None;
            }
            let m: Monomial = lm.iter().zip(&lm_b).map(|(x, y)| x - y).collect();
            let c = self.ctx.mul(lc, inv);
            let t = self.term(m, c);
            rem = self.sub(&rem, &self.mul(&t, b));
            quot = self.add(&quot, &t);
        }
        Some(quot)
    }

    /// The residue of `p` modulo the linear form `alpha`: the variable at
    /// the first nonzero coefficient of `alpha` is eliminated by symbolic
    /// substitution. The residue is zero exactly when `alpha` divides `p`.
    /// `None` if `alpha` is zero.
    pub fn reduce_mod_linear(&self, p: &MultiPoly, alpha: &[Elem]) -> Option<MultiPoly> {
        let ctx = &self.ctx;
        let j = alpha.iter().position(|c| !c.is_zero())?;
        let inv = ctx.inv(alpha[j]).unwrap();
        // x_j = -(sum_{i != j} c_i x_i) / c_j
        let sub_coeffs: Vec<Elem> = alpha
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                if i == j {
                    Elem::ZERO
                } else {
                    ctx.neg(ctx.mul(c, inv))
                }
            })
            .collect();
        let replacement = self.linear_form(&sub_coeffs);
        let mut powers = vec![self.one()];
        let mut out = self.zero();
        for (m, &c) in &p.terms {
            let e = m[j] as usize;
            while powers.len() <= e {
                let next = self.mul(powers.last().unwrap(), &replacement);
                powers.push(next);
            }
            let mut rest = m.clone();
            rest[j] = 0;
            let t = self.shift(&self.scale(&powers[e], c), &rest);
            out = self.add(&out, &t);
        }
        Some(out)
    }

    pub fn format(&self, a: &MultiPoly) -> String {
        if a.is_zero() {
            return "0".to_string();
        }
        let names: Vec<String> = if self.nvars <= 3 {
            ["x", "y", "z"][..self.nvars]
                .iter()
                .map(|s| s.to_string())
                .collect()
        } else {
            (1..=self.nvars).map(|i| format!("x{i}")).collect()
        };
        let mut parts = Vec::new();
        for (m, &c) in a.terms.iter().rev() {
            let mono: Vec<String> = m
                .iter()
                .zip(&names)
                .filter(|(e, _)| **e > 0)
                .map(|(&e, n)| {
                    if e == 1 {
                        n.clone()
                    } else {
                        format!("{n}^{e}")
                    }
                })
                .collect();
            let coeff = if self.ctx.is_prime_field() {
                c.0.to_string()
            } else {
                format!("[{c}]")
            };
            parts.push(match (mono.is_empty(), c == Elem::ONE) {
                (true, _) => coeff,
                (false, true) => mono.join("*"),
                (false, false) => format!("{coeff}*{}", mono.join("*")),
            });
        }
        parts.join(" + ")
    }
}

/// All exponent vectors of total degree `d` in `n` variables, in decreasing
/// lexicographic order.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(n, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

/// `C(d + n - 1, n - 1)`, the number of monomials of degree `d` in `n`
/// variables (zero for negative `d`).
pub fn monomial_count(n: usize, d: i64) -> usize {
    if d < 0 || n == 0 {
        return usize::from(n == 0 && d == 0);
    }
    let (d, k) = (d as u128, (n - 1) as u128);
    let mut c: u128 = 1;
    for i in 1..=k {
        c = c * (d + i) / i;
    }
    c as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::field_of_order;

    fn ring(q: u64, n: usize) -> PolyRing {
        PolyRing::new(field_of_order(q).unwrap(), n)
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(3, 0), vec![vec![0, 0, 0]]);
        assert_eq!(
            monomials_of_degree(2, 2),
            vec![vec![2, 0], vec![1, 1], vec![0, 2]]
        );
        for n in 1..5 {
            for d in 0..8 {
                assert_eq!(monomials_of_degree(n, d).len(), monomial_count(n, d as i64));
            }
        }
        assert_eq!(monomial_count(3, -1), 0);
    }

    #[test]
    fn reduce_mod_linear_examples() {
        let r = ring(2, 2);
        let (x, y) = (r.var(0), r.var(1));
        let xy = r.mul(&x, &y);
        assert!(r
            .reduce_mod_linear(&xy, &[Elem(1), Elem(0)])
            .unwrap()
            .is_zero());
        // x^2 + y^2 = (x + y)^2 in characteristic 2
        let p = r.add(&r.mul(&x, &x), &r.mul(&y, &y));
        assert!(r
            .reduce_mod_linear(&p, &[Elem(1), Elem(1)])
            .unwrap()
            .is_zero());
        let x2 = r.mul(&x, &x);
        let res = r.reduce_mod_linear(&x2, &[Elem(0), Elem(1)]).unwrap();
        assert_eq!(res, x2);
        assert!(r.reduce_mod_linear(&x2, &[Elem(0), Elem(0)]).is_none());
    }

    /// `x^q - x` vanishes on every point of `F_q` but `y` does not divide
    /// `x^q y - x y + x`, for instance; the residue test must be symbolic.
    #[test]
    fn vanishing_on_points_is_not_divisibility() {
        let r = ring(3, 2);
        let (x, y) = (r.var(0), r.var(1));
        // p = x^3 y^0 - x: vanishes on all of F_3^2 yet y does not divide it
        let p = r.sub(&r.var_pow(0, 3), &x);
        let ctx = r.ctx().clone();
        for a in ctx.elements() {
            for b in ctx.elements() {
                assert!(r.eval(&p, &[a, b]).is_zero());
            }
        }
        assert!(!r
            .reduce_mod_linear(&p, &[Elem(0), Elem(1)])
            .unwrap()
            .is_zero());
        let py = r.mul(&p, &y);
        assert!(r
            .reduce_mod_linear(&py, &[Elem(0), Elem(1)])
            .unwrap()
            .is_zero());
    }

    #[test]
    fn exact_division() {
        let r = ring(3, 3);
        let a = r.linear_form(&[Elem(1), Elem(2), Elem(0)]);
        let b = r.linear_form(&[Elem(0), Elem(1), Elem(1)]);
        let c = r.add(&r.var_pow(2, 2), &r.constant(Elem(2)));
        let prod = r.product([&a, &b, &c]);
        let q = r.div_exact(&prod, &r.mul(&a, &c)).unwrap();
        assert_eq!(q, b);
        assert!(r.div_exact(&r.add(&prod, &r.one()), &a).is_none());
        assert!(r.div_exact(&a, &r.zero()).is_none());
    }

    #[test]
    fn partials_and_frobenius() {
        let r = ring(3, 3);
        let alpha = r.linear_form(&[Elem(1), Elem(2), Elem(1)]);
        let cube = r.pow(&alpha, 3);
        // (sum c_i x_i)^3 = sum c_i x_i^3 in characteristic 3
        let expected = r.from_terms([
            (vec![3, 0, 0], Elem(1)),
            (vec![0, 3, 0], Elem(2)),
            (vec![0, 0, 3], Elem(1)),
        ]);
        assert_eq!(cube, expected);
        assert!(r.partial(&cube, 0).is_zero());
        assert_eq!(r.partial(&alpha, 1), r.constant(Elem(2)));
    }

    #[test]
    fn homogeneity() {
        let r = ring(2, 3);
        let p = r.add(&r.var_pow(0, 2), &r.mul(&r.var(1), &r.var(2)));
        assert_eq!(p.homogeneous_degree(), Some(2));
        let p = r.add(&p, &r.var(0));
        assert!(!p.is_homogeneous());
        assert!(r.zero().is_homogeneous());
        assert_eq!(r.format(&r.add(&r.var_pow(0, 2), &r.one())), "x^2 + 1");
    }
}
