//! Sparse multivariate polynomials over f64 with exact term arithmetic.
//!
//! Exponents are packed into a `u64` (8 bits per variable, so at most 8
//! ambient variables and per-variable degree < 256). Terms are kept sorted
//! by packed key, which makes every operation deterministic.
//!
//! Polynomials represent functions on the radius-`rho` sphere through
//! [`Poly::reduce_sphere`], which rewrites powers of the first variable via
//! `x_0^2 = rho^2 - x_1^2 - ... - x_{n-1}^2`. The reduced form is a canonical
//! representative of the residue class modulo `|x|^2 - rho^2`, so a field
//! vanishes on the sphere exactly when its reduced coefficients vanish.

use crate::error::{Error, Result};

pub const MAX_VARS: usize = 8;

#[inline]
fn exp_of(key: u64, v: usize) -> usize {
    ((key >> (8 * v)) & 0xff) as usize
}

#[inline]
fn key_from_exps(exps: &[usize]) -> u64 {
    let mut k = 0u64;
    for (v, &e) in exps.iter().enumerate() {
        k |= (e as u64) << (8 * v);
    }
    k
}

#[inline]
fn total_degree_of(key: u64, n: usize) -> usize {
    (0..n).map(|v| exp_of(key, v)).sum()
}

/// Sparse polynomial in `n` variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    pub n: usize,
    /// Sorted by packed exponent key; no exact-zero coefficients.
    terms: Vec<(u64, f64)>,
}

impl Poly {
    pub fn zero(n: usize) -> Self {
        assert!(n >= 1 && n <= MAX_VARS, "unsupported variable count {n}");
        Poly { n, terms: Vec::new() }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        let mut p = Poly::zero(n);
        if c != 0.0 {
            p.terms.push((0, c));
        }
        p
    }

    pub fn var(n: usize, v: usize) -> Self {
        assert!(v < n);
        let mut exps = vec![0usize; n];
        exps[v] = 1;
        let mut p = Poly::zero(n);
        p.terms.push((key_from_exps(&exps), 1.0));
        p
    }

    pub fn monomial(n: usize, exps: &[usize], c: f64) -> Self {
        assert_eq!(exps.len(), n);
        let mut p = Poly::zero(n);
        if c != 0.0 {
            p.terms.push((key_from_exps(exps), c));
        }
        p
    }

    pub fn from_terms(n: usize, raw: Vec<(Vec<usize>, f64)>) -> Self {
        let mut terms: Vec<(u64, f64)> = raw
            .into_iter()
            .filter(|(_, c)| *c != 0.0)
            .map(|(e, c)| (key_from_exps(&e), c))
            .collect();
        terms.sort_unstable_by_key(|t| t.0);
        let mut p = Poly { n, terms };
        p.merge_duplicates();
        p
    }

    fn merge_duplicates(&mut self) {
        let mut out: Vec<(u64, f64)> = Vec::with_capacity(self.terms.len());
        for &(k, c) in &self.terms {
            match out.last_mut() {
                Some(last) if last.0 == k => last.1 += c,
                _ => out.push((k, c)),
            }
        }
        out.retain(|t| t.1 != 0.0);
        self.terms = out;
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        self.terms
            .iter()
            .map(move |&(k, c)| ((0..self.n).map(|v| exp_of(k, v)).collect(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> usize {
        self.terms
            .iter()
            .map(|&(k, _)| total_degree_of(k, self.n))
            .max()
            .unwrap_or(0)
    }

    fn max_var_degs(&self) -> Vec<usize> {
        let mut d = vec![0usize; self.n];
        for &(k, _) in &self.terms {
            for (v, dv) in d.iter_mut().enumerate() {
                *dv = (*dv).max(exp_of(k, v));
            }
        }
        d
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.iter().map(|t| t.1.abs()).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.n, other.n);
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ka, ca) = self.terms[i];
            let (kb, cb) = other.terms[j];
            if ka < kb {
                terms.push((ka, ca));
                i += 1;
            } else if kb < ka {
                terms.push((kb, cb));
                j += 1;
            } else {
                let c = ca + cb;
                if c != 0.0 {
                    terms.push((ka, c));
                }
                i += 1;
                j += 1;
            }
        }
        terms.extend_from_slice(&self.terms[i..]);
        terms.extend_from_slice(&other.terms[j..]);
        Poly { n: self.n, terms }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, c: f64) -> Poly {
        if c == 0.0 {
            return Poly::zero(self.n);
        }
        Poly {
            n: self.n,
            terms: self.terms.iter().map(|&(k, a)| (k, a * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.n, other.n);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.n);
        }
        // Dense accumulation buffer sized by the per-variable output degrees.
        let da = self.max_var_degs();
        let db = other.max_var_degs();
        let dims: Vec<usize> = (0..self.n).map(|v| da[v] + db[v] + 1).collect();
        let mut strides = vec![1usize; self.n];
        for v in 1..self.n {
            strides[v] = strides[v - 1] * dims[v - 1];
        }
        let size: usize = strides[self.n - 1] * dims[self.n - 1];
        let offset = |k: u64| -> usize {
            let mut o = 0usize;
            for v in 0..self.n {
                o += exp_of(k, v) * strides[v];
            }
            o
        };
        let mut buf = vec![0.0f64; size];
        let offs_b: Vec<(usize, f64)> = other.terms.iter().map(|&(k, c)| (offset(k), c)).collect();
        for &(ka, ca) in &self.terms {
            let oa = offset(ka);
            for &(ob, cb) in &offs_b {
                buf[oa + ob] += ca * cb;
            }
        }
        // Sweep in index order: deterministic canonical term order.
        let mut terms = Vec::new();
        for (idx, &c) in buf.iter().enumerate() {
            if c != 0.0 {
                let mut rem = idx;
                let mut key = 0u64;
                for v in (0..self.n).rev() {
                    let e = rem / strides[v];
                    rem %= strides[v];
                    key |= (e as u64) << (8 * v);
                }
                terms.push((key, c));
            }
        }
        terms.sort_unstable_by_key(|t| t.0);
        Poly { n: self.n, terms }
    }

    pub fn pow(&self, e: usize) -> Poly {
        let mut out = Poly::constant(self.n, 1.0);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Plain ambient partial derivative.
    pub fn partial(&self, v: usize) -> Poly {
        assert!(v < self.n);
        let mut terms = Vec::new();
        for &(k, c) in &self.terms {
            let e = exp_of(k, v);
            if e > 0 {
                let nk = k - (1u64 << (8 * v));
                terms.push((nk, c * e as f64));
            }
        }
        terms.sort_unstable_by_key(|t| t.0);
        let mut p = Poly { n: self.n, terms };
        p.merge_duplicates();
        p
    }

    /// Derivative of the 0-homogeneous extension, restricted back to the
    /// radius-`rho` sphere: per monomial of degree d this is
    /// `d/dx_v - (d / rho^2) x_v`.
    pub fn homog_ext_partial(&self, v: usize, rho: f64) -> Poly {
        let mut out = self.partial(v);
        let inv_r2 = 1.0 / (rho * rho);
        let mut extra: Vec<(u64, f64)> = Vec::new();
        for &(k, c) in &self.terms {
            let d = total_degree_of(k, self.n) as f64;
            if d != 0.0 {
                let nk = k + (1u64 << (8 * v));
                extra.push((nk, -c * d * inv_r2));
            }
        }
        extra.sort_unstable_by_key(|t| t.0);
        let mut ep = Poly { n: self.n, terms: extra };
        ep.merge_duplicates();
        out = out.add(&ep);
        out
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.n);
        let mut s = 0.0;
        for &(k, c) in &self.terms {
            let mut m = c;
            for (v, xv) in x.iter().enumerate() {
                let e = exp_of(k, v);
                for _ in 0..e {
                    m *= xv;
                }
            }
            s += m;
        }
        s
    }

    /// Split into (even, odd) parts by total monomial degree.
    pub fn degree_parity_split(&self) -> (Poly, Poly) {
        let mut even = Vec::new();
        let mut odd = Vec::new();
        for &(k, c) in &self.terms {
            if total_degree_of(k, self.n) % 2 == 0 {
                even.push((k, c));
            } else {
                odd.push((k, c));
            }
        }
        (
            Poly { n: self.n, terms: even },
            Poly { n: self.n, terms: odd },
        )
    }

    /// Canonical representative modulo `|x|^2 - rho^2`: rewrites powers
    /// `x_0^e` with `e >= 2` using `x_0^2 = rho^2 - sum_{v>=1} x_v^2`.
    pub fn reduce_sphere(&self, rho: f64) -> Poly {
        let rho2 = rho * rho;
        let mut cur = self.clone();
        loop {
            let needs = cur.terms.iter().any(|&(k, _)| exp_of(k, 0) >= 2);
            if !needs {
                return cur;
            }
            let mut keep: Vec<(u64, f64)> = Vec::with_capacity(cur.terms.len());
            let mut rewritten: Vec<(u64, f64)> = Vec::new();
            for &(k, c) in &cur.terms {
                let e0 = exp_of(k, 0);
                if e0 < 2 {
                    keep.push((k, c));
                } else {
                    let base = k - 2; // exponent of var 0 occupies the low byte
                    rewritten.push((base, c * rho2));
                    for v in 1..cur.n {
                        rewritten.push((base + (2u64 << (8 * v)), -c));
                    }
                }
            }
            rewritten.sort_unstable_by_key(|t| t.0);
            let mut rp = Poly { n: cur.n, terms: rewritten };
            rp.merge_duplicates();
            let kp = Poly { n: cur.n, terms: keep };
            cur = kp.add(&rp);
        }
    }

    /// Splits into homogeneous parts by total degree; index = degree.
    pub fn homogeneous_parts(&self) -> Vec<Poly> {
        let d = self.total_degree();
        let mut parts = vec![Poly::zero(self.n); d + 1];
        for &(k, c) in &self.terms {
            let deg = total_degree_of(k, self.n);
            parts[deg].terms.push((k, c));
        }
        parts
    }

    /// Substitute `x_i -> sum_j m[i][j] x_j` (used for rotations in tests
    /// and the chart oracle).
    pub fn substitute_linear(&self, m: &[Vec<f64>]) -> Poly {
        assert_eq!(m.len(), self.n);
        let rows: Vec<Poly> = (0..self.n)
            .map(|i| {
                let mut row = Poly::zero(self.n);
                for (j, &c) in m[i].iter().enumerate() {
                    if c != 0.0 {
                        row = row.add(&Poly::var(self.n, j).scale(c));
                    }
                }
                row
            })
            .collect();
        let mut out = Poly::zero(self.n);
        for &(k, c) in &self.terms {
            let mut term = Poly::constant(self.n, c);
            for (v, row) in rows.iter().enumerate() {
                for _ in 0..exp_of(k, v) {
                    term = term.mul(row);
                }
            }
            out = out.add(&term);
        }
        out
    }

    pub fn check_degree(&self, limit: usize) -> Result<()> {
        let d = self.total_degree();
        if d > limit {
            Err(Error::DegreeOverflow { degree: d, limit })
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn mul_matches_hand_expansion() {
        // (1 + x0)(1 + x0) = 1 + 2 x0 + x0^2
        let p = Poly::constant(3, 1.0).add(&Poly::var(3, 0));
        let q = p.mul(&p);
        assert_eq!(q.num_terms(), 3);
        assert_abs_diff_eq!(q.eval(&[2.0, 0.0, 0.0]), 9.0);
    }

    #[test]
    fn reduce_sphere_kills_norm_polynomial() {
        // |x|^2 - rho^2 reduces to zero.
        let n = 3;
        let rho = 1.5f64;
        let mut p = Poly::constant(n, -rho * rho);
        for v in 0..n {
            p = p.add(&Poly::var(n, v).mul(&Poly::var(n, v)));
        }
        let r = p.reduce_sphere(rho);
        assert!(r.is_zero(), "got {:?}", r);
    }

    #[test]
    fn reduce_preserves_values_on_sphere() {
        let n = 3;
        let rho = 2.0f64;
        let p = Poly::from_terms(
            n,
            vec![
                (vec![3, 1, 0], 0.7),
                (vec![2, 0, 2], -1.3),
                (vec![0, 1, 1], 0.25),
            ],
        );
        let r = p.reduce_sphere(rho);
        // point on radius-2 sphere
        let x = [2.0 * 0.36, 2.0 * 0.48, 2.0 * 0.8];
        assert_abs_diff_eq!(p.eval(&x), r.eval(&x), epsilon = 1e-12);
        // reduced form has x0-degree <= 1
        for (e, _) in r.terms() {
            assert!(e[0] <= 1);
        }
    }

    #[test]
    fn homog_ext_partial_is_tangential() {
        // x . grad of the extension vanishes on the sphere (Euler identity).
        let n = 3;
        let rho = 1.0;
        let p = Poly::from_terms(n, vec![(vec![1, 2, 0], 1.0), (vec![0, 0, 1], -2.0)]);
        let x = [0.6, 0.64, 0.48];
        let radial: f64 = (0..n)
            .map(|v| x[v] * p.homog_ext_partial(v, rho).eval(&x))
            .sum();
        assert_abs_diff_eq!(radial, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn substitute_linear_rotation() {
        let n = 3;
        let c = (0.5f64).sqrt();
        let rot = vec![
            vec![c, -c, 0.0],
            vec![c, c, 0.0],
            vec![0.0, 0.0, 1.0],
        ];
        let p = Poly::var(n, 0).mul(&Poly::var(n, 1));
        let q = p.substitute_linear(&rot);
        let x = [0.2, -0.3, 0.5];
        let rx = [
            c * x[0] - c * x[1],
            c * x[0] + c * x[1],
            x[2],
        ];
        assert_abs_diff_eq!(q.eval(&x), p.eval(&rx), epsilon = 1e-13);
    }

    #[test]
    fn partial_derivative() {
        let p = Poly::from_terms(3, vec![(vec![2, 1, 0], 3.0)]);
        let d = p.partial(0);
        assert_abs_diff_eq!(d.eval(&[2.0, 5.0, 0.0]), 60.0);
    }
}
