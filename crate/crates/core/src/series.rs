//! Truncated power series in the boundary-defining variable with
//! boundary-field coefficients, and the matrix-series algebra (determinant,
//! inverse) needed by the metric and Laplacian jets.
//!
//! Exact polynomial closure restricts pointwise inverses to series whose
//! leading tangential coefficient is a constant multiple of the round
//! metric; that covers every boundary geometry treated here (round spheres
//! and projective space).

use crate::error::{Error, Result};
use crate::field::{mat_mul, projector, sym_index, BoundaryField, Rank};
use crate::poly::Poly;
use crate::sphere::SphereSpec;

/// Truncated series `c_0 + c_1 x + ... + c_N x^N` of boundary fields of one
/// rank.
#[derive(Debug, Clone, PartialEq)]
pub struct JetSeries {
    pub rank: Rank,
    pub spec: SphereSpec,
    coeffs: Vec<BoundaryField>,
}

impl JetSeries {
    pub fn zero(rank: Rank, spec: &SphereSpec, order: usize) -> Self {
        JetSeries {
            rank,
            spec: spec.clone(),
            coeffs: vec![BoundaryField::zero(rank, spec); order + 1],
        }
    }

    pub fn from_coeffs(rank: Rank, spec: &SphereSpec, coeffs: Vec<BoundaryField>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter("series needs at least one coefficient".into()));
        }
        for c in &coeffs {
            if c.rank != rank {
                return Err(Error::RankMismatch { expected: rank.as_str(), got: c.rank.as_str() });
            }
        }
        Ok(JetSeries { rank, spec: spec.clone(), coeffs })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, j: usize) -> &BoundaryField {
        &self.coeffs[j]
    }

    pub fn coeffs(&self) -> &[BoundaryField] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, j: usize, f: BoundaryField) -> Result<()> {
        if f.rank != self.rank {
            return Err(Error::RankMismatch { expected: self.rank.as_str(), got: f.rank.as_str() });
        }
        self.coeffs[j] = f;
        Ok(())
    }

    pub fn truncate(&self, order: usize) -> JetSeries {
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(order + 1);
        while coeffs.len() < order + 1 {
            coeffs.push(BoundaryField::zero(self.rank, &self.spec));
        }
        JetSeries { rank: self.rank, spec: self.spec.clone(), coeffs }
    }

    pub fn add(&self, other: &JetSeries) -> Result<JetSeries> {
        let order = self.order().max(other.order());
        let a = self.truncate(order);
        let b = other.truncate(order);
        let coeffs: Result<Vec<_>> = a
            .coeffs
            .iter()
            .zip(b.coeffs.iter())
            .map(|(x, y)| x.add(y))
            .collect();
        JetSeries::from_coeffs(self.rank, &self.spec, coeffs?)
    }

    pub fn sub(&self, other: &JetSeries) -> Result<JetSeries> {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, c: f64) -> JetSeries {
        JetSeries {
            rank: self.rank,
            spec: self.spec.clone(),
            coeffs: self.coeffs.iter().map(|f| f.scale(c)).collect(),
        }
    }

    /// Multiply by a scalar series, truncating at this series' order.
    pub fn mul_scalar_series(&self, s: &JetSeries) -> Result<JetSeries> {
        if s.rank != Rank::Scalar {
            return Err(Error::RankMismatch { expected: "scalar", got: s.rank.as_str() });
        }
        let order = self.order();
        let mut out = JetSeries::zero(self.rank, &self.spec, order);
        for m in 0..=order {
            let mut acc = BoundaryField::zero(self.rank, &self.spec);
            for j in 0..=m.min(s.order()) {
                let l = m - j;
                if l <= self.order() {
                    acc = acc.add(&self.coeffs[l].mul_scalar_field(s.coeff(j))?)?;
                }
            }
            out.coeffs[m] = acc;
        }
        Ok(out)
    }

    /// Multiply by x^p (shifting coefficients up), truncating at the same
    /// order.
    pub fn shift_up(&self, p: usize) -> JetSeries {
        let order = self.order();
        let mut out = JetSeries::zero(self.rank, &self.spec, order);
        for m in p..=order {
            out.coeffs[m] = self.coeffs[m - p].clone();
        }
        out
    }

    pub fn sup_norm_per_order(&self) -> Vec<f64> {
        self.coeffs.iter().map(BoundaryField::sup_norm).collect()
    }

    pub fn sup_norm(&self) -> f64 {
        self.sup_norm_per_order().into_iter().fold(0.0, f64::max)
    }

    /// Index of the first coefficient with sup norm above `tol`, if any.
    pub fn first_nonzero(&self, tol: f64) -> Option<usize> {
        self.sup_norm_per_order().iter().position(|&s| s > tol)
    }
}

// ----------------------------------------------------------------------
// poly-series plumbing (coefficients are raw reduced polynomials)
// ----------------------------------------------------------------------

pub(crate) mod ps {
    use super::*;

    pub fn zero(n: usize, order: usize) -> Vec<Poly> {
        vec![Poly::zero(n); order + 1]
    }

    pub fn constant(n: usize, c: f64, order: usize) -> Vec<Poly> {
        let mut s = zero(n, order);
        s[0] = Poly::constant(n, c);
        s
    }

    pub fn add(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
        let order = a.len().max(b.len());
        let n = a.first().or_else(|| b.first()).unwrap().n;
        let mut out = Vec::with_capacity(order);
        for m in 0..order {
            let mut p = Poly::zero(n);
            if m < a.len() {
                p = p.add(&a[m]);
            }
            if m < b.len() {
                p = p.add(&b[m]);
            }
            out.push(p);
        }
        out
    }

    pub fn scale(a: &[Poly], c: f64) -> Vec<Poly> {
        a.iter().map(|p| p.scale(c)).collect()
    }

    pub fn sub(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
        add(a, &scale(b, -1.0))
    }

    /// Product truncated at `order`.
    pub fn mul(a: &[Poly], b: &[Poly], order: usize, rho: f64) -> Vec<Poly> {
        let n = a[0].n;
        let mut out = zero(n, order);
        for (i, pa) in a.iter().enumerate().take(order + 1) {
            if pa.is_zero() {
                continue;
            }
            for (j, pb) in b.iter().enumerate() {
                if i + j > order {
                    break;
                }
                if pb.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&pa.mul(pb));
            }
        }
        for p in out.iter_mut() {
            *p = p.reduce_sphere(rho);
        }
        out
    }

    pub fn shift_up(a: &[Poly], p: usize, order: usize) -> Vec<Poly> {
        let n = a[0].n;
        let mut out = zero(n, order);
        for m in p..=order {
            if m - p < a.len() {
                out[m] = a[m - p].clone();
            }
        }
        out
    }

    /// d/dx of the series (coefficients shift down).
    pub fn derivative_x(a: &[Poly]) -> Vec<Poly> {
        let n = a[0].n;
        if a.len() == 1 {
            return vec![Poly::zero(n)];
        }
        (1..a.len()).map(|m| a[m].scale(m as f64)).collect()
    }

    /// Leading coefficient as a constant; errors if it is not constant on
    /// the sphere.
    pub fn leading_constant(a: &[Poly], spec: &SphereSpec) -> Result<f64> {
        let pts = spec.sample_points(24);
        let c = a[0].eval(&pts[0]);
        let mut worst = 0.0f64;
        let mut at = pts[0].clone();
        for p in &pts {
            let d = (a[0].eval(p) - c).abs();
            if d > worst {
                worst = d;
                at = p.clone();
            }
        }
        if worst > 1e-9 * (c.abs() + 1.0) {
            return Err(Error::LeadingNotRound { point: at, deviation: worst });
        }
        if c.abs() < 1e-12 {
            return Err(Error::SingularLeading {
                point: at,
                detail: "leading scalar coefficient vanishes".into(),
            });
        }
        Ok(c)
    }

    /// Reciprocal of a series with constant invertible leading coefficient.
    pub fn reciprocal(a: &[Poly], order: usize, spec: &SphereSpec) -> Result<Vec<Poly>> {
        let c = leading_constant(a, spec)?;
        let n = a[0].n;
        let mut r = zero(n, order);
        r[0] = Poly::constant(n, 1.0 / c);
        for m in 1..=order {
            let mut acc = Poly::zero(n);
            for j in 1..=m {
                if j < a.len() {
                    acc = acc.add(&a[j].mul(&r[m - j]));
                }
            }
            r[m] = acc.scale(-1.0 / c).reduce_sphere(spec.rho);
        }
        Ok(r)
    }

    /// Square root of a series with constant positive leading coefficient.
    pub fn sqrt(a: &[Poly], order: usize, spec: &SphereSpec) -> Result<Vec<Poly>> {
        let c = leading_constant(a, spec)?;
        if c <= 0.0 {
            return Err(Error::SingularLeading {
                point: spec.sample_points(1)[0].clone(),
                detail: format!("leading coefficient {c} not positive"),
            });
        }
        let n = a[0].n;
        let s0 = c.sqrt();
        let mut s = zero(n, order);
        s[0] = Poly::constant(n, s0);
        for m in 1..=order {
            let mut acc = if m < a.len() { a[m].clone() } else { Poly::zero(n) };
            for j in 1..m {
                acc = acc.sub(&s[j].mul(&s[m - j]));
            }
            s[m] = acc.scale(0.5 / s0).reduce_sphere(spec.rho);
        }
        Ok(s)
    }

    /// `(1 + w)^alpha` for a series `w` with zero constant term.
    pub fn binomial_pow(w: &[Poly], alpha: f64, order: usize, rho: f64) -> Vec<Poly> {
        let n = w[0].n;
        debug_assert!(w[0].is_zero() || w[0].max_abs_coeff() < 1e-13);
        let mut out = constant(n, 1.0, order);
        let mut wk = constant(n, 1.0, order);
        let mut coef = 1.0;
        for k in 1..=order {
            wk = mul(&wk, w, order, rho);
            coef *= (alpha - (k as f64 - 1.0)) / k as f64;
            out = add(&out, &scale(&wk, coef));
        }
        out
    }

    pub fn first_nonzero(a: &[Poly], spec: &SphereSpec, tol: f64) -> Option<usize> {
        let pts = spec.sample_points(60);
        for (m, p) in a.iter().enumerate() {
            let sup = pts.iter().map(|x| p.eval(x).abs()).fold(0.0, f64::max);
            if sup > tol {
                return Some(m);
            }
        }
        None
    }
}

// ----------------------------------------------------------------------
// matrix series (full n x n coefficients)
// ----------------------------------------------------------------------

pub(crate) struct MatSeries {
    pub n: usize,
    /// coeffs[m] is row-major n x n
    pub coeffs: Vec<Vec<Poly>>,
}

impl MatSeries {
    pub fn zero(n: usize, order: usize) -> Self {
        MatSeries { n, coeffs: vec![vec![Poly::zero(n); n * n]; order + 1] }
    }

    pub fn from_sym2_series(s: &JetSeries) -> Result<Self> {
        if s.rank != Rank::Sym2 {
            return Err(Error::RankMismatch { expected: "sym2", got: s.rank.as_str() });
        }
        let n = s.spec.n;
        let mut out = MatSeries::zero(n, s.order());
        for (m, f) in s.coeffs().iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    out.coeffs[m][i * n + j] = f.components()[sym_index(n, i, j)].clone();
                }
            }
        }
        Ok(out)
    }

    pub fn to_sym2_series(&self, spec: &SphereSpec) -> Result<JetSeries> {
        let n = self.n;
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for m in &self.coeffs {
            let mut comps = Vec::with_capacity(n * (n + 1) / 2);
            for i in 0..n {
                for j in i..n {
                    comps.push(m[i * n + j].add(&m[j * n + i]).scale(0.5));
                }
            }
            coeffs.push(BoundaryField::from_components(Rank::Sym2, spec, comps)?);
        }
        JetSeries::from_coeffs(Rank::Sym2, spec, coeffs)
    }

    pub fn add(&self, other: &MatSeries) -> MatSeries {
        let order = self.coeffs.len().max(other.coeffs.len());
        let mut out = MatSeries::zero(self.n, order - 1);
        for m in 0..order {
            for e in 0..self.n * self.n {
                let mut p = Poly::zero(self.n);
                if m < self.coeffs.len() {
                    p = p.add(&self.coeffs[m][e]);
                }
                if m < other.coeffs.len() {
                    p = p.add(&other.coeffs[m][e]);
                }
                out.coeffs[m][e] = p;
            }
        }
        out
    }

    pub fn mul(&self, other: &MatSeries, order: usize, rho: f64) -> MatSeries {
        let n = self.n;
        let mut out = MatSeries::zero(n, order);
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j > order {
                    break;
                }
                let prod = mat_mul(n, a, b);
                for e in 0..n * n {
                    out.coeffs[i + j][e] = out.coeffs[i + j][e].add(&prod[e]);
                }
            }
        }
        for m in out.coeffs.iter_mut() {
            for e in m.iter_mut() {
                *e = e.reduce_sphere(rho);
            }
        }
        out
    }

    pub fn scale_scalar_series(&self, s: &[Poly], order: usize, rho: f64) -> MatSeries {
        let n = self.n;
        let mut out = MatSeries::zero(n, order);
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            for (j, c) in s.iter().enumerate() {
                if i + j > order {
                    break;
                }
                if c.is_zero() {
                    continue;
                }
                for e in 0..n * n {
                    if !a[e].is_zero() {
                        out.coeffs[i + j][e] = out.coeffs[i + j][e].add(&a[e].mul(c));
                    }
                }
            }
        }
        for m in out.coeffs.iter_mut() {
            for e in m.iter_mut() {
                *e = e.reduce_sphere(rho);
            }
        }
        out
    }

    pub fn trace(&self) -> Vec<Poly> {
        let n = self.n;
        self.coeffs
            .iter()
            .map(|m| {
                let mut p = Poly::zero(n);
                for i in 0..n {
                    p = p.add(&m[i * n + i]);
                }
                p
            })
            .collect()
    }

    pub fn add_constant_matrix(&self, c: &[Poly]) -> MatSeries {
        let mut out = MatSeries { n: self.n, coeffs: self.coeffs.clone() };
        for e in 0..self.n * self.n {
            out.coeffs[0][e] = out.coeffs[0][e].add(&c[e]);
        }
        out
    }
}

/// Normal-direction rank-one completion `x x^T / rho^2` used to turn
/// tangential determinants and inverses into full-matrix ones.
pub(crate) fn radial_completion(spec: &SphereSpec) -> Vec<Poly> {
    let n = spec.n;
    let inv_r2 = 1.0 / (spec.rho * spec.rho);
    let mut m = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            m.push(Poly::var(n, i).mul(&Poly::var(n, j)).scale(inv_r2));
        }
    }
    m
}

/// Determinant of a tangential sym2 series restricted to the tangent space,
/// computed as the full determinant of `H + x x^T / rho^2` by the
/// Faddeev-LeVerrier recursion over the series ring.
pub(crate) fn det_tangential(h: &JetSeries, order: usize) -> Result<Vec<Poly>> {
    let spec = &h.spec;
    let n = spec.n;
    let rho = spec.rho;
    let m = MatSeries::from_sym2_series(h)?.add_constant_matrix(&radial_completion(spec));
    // char poly lambda^n + a_{n-1} lambda^{n-1} + ... + a_0; det = (-1)^n a_0
    let mut a_k = m.coeffs.clone(); // A_1 = M (series of matrices)
    let mut a_series = MatSeries { n, coeffs: a_k.clone() };
    let mut coeff = ps::scale(&a_series.trace(), -1.0); // a_{n-1}
    for k in 2..=n {
        // A_k = M (A_{k-1} + a_{n-k+1} I)
        let mut shifted = MatSeries { n, coeffs: a_k.clone() };
        for (mth, c) in coeff.iter().enumerate() {
            if mth < shifted.coeffs.len() {
                for i in 0..n {
                    shifted.coeffs[mth][i * n + i] = shifted.coeffs[mth][i * n + i].add(c);
                }
            }
        }
        a_series = m.mul(&shifted, order, rho);
        a_k = a_series.coeffs.clone();
        coeff = ps::scale(&a_series.trace(), -1.0 / k as f64); // a_{n-k}
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    Ok(ps::scale(&coeff, sign))
}

/// Inverse of a tangential sym2 series within the algebra of tangential
/// endomorphisms; requires the leading coefficient to be `c * g_eps`.
pub(crate) fn inverse_tangential(h: &JetSeries, order: usize) -> Result<JetSeries> {
    let spec = &h.spec;
    let n = spec.n;
    let rho = spec.rho;
    let leading = h.coeff(0);
    // detect c from the trace; verify h_0 = c g_eps
    let tr = leading.g_trace()?;
    let pts = spec.sample_points(24);
    let c = tr.eval_scalar(&pts[0]) / spec.boundary_dim() as f64;
    if c.abs() < 1e-12 {
        return Err(Error::SingularLeading {
            point: pts[0].clone(),
            detail: "leading tangential coefficient has vanishing trace".into(),
        });
    }
    let g = BoundaryField::round_metric(spec);
    let dev = leading.sub(&g.scale(c))?;
    let (dev_sup, at) = {
        let mut worst = 0.0f64;
        let mut at = pts[0].clone();
        for p in &pts {
            let m = dev.eval_sym2(p);
            for v in &m {
                if v.abs() > worst {
                    worst = v.abs();
                    at = p.clone();
                }
            }
        }
        (worst, at)
    };
    if dev_sup > 1e-9 * (c.abs() + 1.0) {
        return Err(Error::LeadingNotRound { point: at, deviation: dev_sup });
    }

    let hm = MatSeries::from_sym2_series(h)?;
    let proj = projector(spec);
    let mut k = MatSeries::zero(n, order);
    for e in 0..n * n {
        k.coeffs[0][e] = proj[e].scale(1.0 / c);
    }
    for m in 1..=order {
        let mut acc = vec![Poly::zero(n); n * n];
        for j in 1..=m.min(hm.coeffs.len() - 1) {
            let prod = mat_mul(n, &hm.coeffs[j], &k.coeffs[m - j]);
            for e in 0..n * n {
                acc[e] = acc[e].add(&prod[e]);
            }
        }
        for e in 0..n * n {
            k.coeffs[m][e] = acc[e].scale(-1.0 / c).reduce_sphere(rho);
        }
    }
    k.to_sym2_series(spec)
}

/// Determinant and inverse of a tangential sym2 series, with the leading
/// structure of the first-order expansion available to callers. `k` is the
/// declared order of the leading perturbation (diagnostic only).
pub fn jet_det_inverse(h: &JetSeries, _k: usize) -> Result<(JetSeries, JetSeries)> {
    let order = h.order();
    let spec = &h.spec;
    let det = det_tangential(h, order)?;
    // surface singularities of the leading coefficient explicitly
    ps::leading_constant(&det, spec).map_err(|e| match e {
        Error::LeadingNotRound { point, .. } => Error::SingularLeading {
            point,
            detail: "tangential determinant leading coefficient is not constant".into(),
        },
        other => other,
    })?;
    let inv = inverse_tangential(h, order)?;
    let det_coeffs: Result<Vec<_>> = det
        .into_iter()
        .map(|p| Ok(BoundaryField::scalar(spec, p)))
        .collect();
    let det_series = JetSeries::from_coeffs(Rank::Scalar, spec, det_coeffs?)?;
    Ok((det_series, inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::random_tangential_sym2;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn spec() -> SphereSpec {
        SphereSpec::default_s2()
    }

    fn planted_series(spec: &SphereSpec, pert: &[(usize, BoundaryField)], order: usize) -> JetSeries {
        let mut s = JetSeries::zero(Rank::Sym2, spec, order);
        s.set_coeff(0, BoundaryField::round_metric(spec)).unwrap();
        for (ord, f) in pert {
            s.set_coeff(*ord, f.clone()).unwrap();
        }
        s
    }

    #[test]
    fn constant_series_det_inverse() {
        let spec = spec();
        let h = planted_series(&spec, &[], 4);
        let (det, inv) = jet_det_inverse(&h, 2).unwrap();
        // det = 1 exactly, inverse = g_eps
        assert!((det.coeff(0).eval_scalar(&[0.0, 0.0, 1.0]) - 1.0).abs() < 1e-12);
        for m in 1..=4 {
            assert!(det.coeff(m).sup_norm() < 1e-12);
            assert!(inv.coeff(m).sup_norm() < 1e-12);
        }
        let g = BoundaryField::round_metric(&spec);
        assert!(inv.coeff(0).sub(&g).unwrap().sup_norm() < 1e-12);
    }

    #[test]
    fn first_order_structure_of_det_and_inverse() {
        // planted diagonal perturbation at order 2: det = 1 + x^2 tr + O(x^3),
        // inv = g - x^2 H_2 + O(x^3) at points where h_0 acts as the identity.
        let spec = spec();
        let n = 3;
        let mut comps = vec![Poly::zero(n); 6];
        comps[sym_index(n, 0, 0)] = Poly::constant(n, 0.8);
        comps[sym_index(n, 1, 1)] = Poly::constant(n, -0.3);
        let raw = BoundaryField::from_components(Rank::Sym2, &spec, comps).unwrap();
        let h2 = raw.project_tangential().unwrap();
        let h = planted_series(&spec, &[(2, h2.clone())], 5);
        let (det, inv) = jet_det_inverse(&h, 2).unwrap();

        let tr = h2.g_trace().unwrap();
        assert!(det.coeff(1).sup_norm() < 1e-12);
        assert!(det.coeff(2).sub(&tr).unwrap().sup_norm() < 1e-11);

        assert!(inv.coeff(1).sup_norm() < 1e-12);
        assert!(inv.coeff(2).add(&h2).unwrap().sup_norm() < 1e-11);

        // pole of the x3 axis: tangent plane is spanned by e1, e2 and the
        // perturbation acts as diag(0.8, -0.3) there.
        let pole = [0.0, 0.0, 1.0];
        let d2 = det.coeff(2).eval_scalar(&pole);
        assert!((d2 - 0.5).abs() < 1e-11, "tr at pole = {d2}");
    }

    #[test]
    fn random_series_inverse_is_two_sided() {
        let spec = spec();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let order = 6;
        let mut h = planted_series(&spec, &[], order);
        for m in 1..=order {
            h.set_coeff(m, random_tangential_sym2(&spec, &mut rng, 2).unwrap().scale(0.5))
                .unwrap();
        }
        let (det, inv) = jet_det_inverse(&h, 1).unwrap();

        // H . inv = P + O(x^{N+1})
        let hm = MatSeries::from_sym2_series(&h).unwrap();
        let km = MatSeries::from_sym2_series(&inv).unwrap();
        let prod = hm.mul(&km, order, spec.rho);
        let id = projector(&spec);
        let pts = spec.sample_points(40);
        for m in 0..=order {
            let mut sup = 0.0f64;
            for p in &pts {
                for e in 0..9 {
                    let target = if m == 0 { id[e].eval(p) } else { 0.0 };
                    sup = sup.max((prod.coeffs[m][e].eval(p) - target).abs());
                }
            }
            assert!(sup < 1e-10, "order {m}: sup {sup}");
        }

        // det . (1/det) = 1 + O(x^{N+1})
        let det_ps: Vec<Poly> = det.coeffs().iter().map(|f| f.components()[0].clone()).collect();
        let rec = ps::reciprocal(&det_ps, order, &spec).unwrap();
        let one = ps::mul(&det_ps, &rec, order, spec.rho);
        for (m, p) in one.iter().enumerate() {
            let target = if m == 0 { 1.0 } else { 0.0 };
            let sup = pts.iter().map(|x| (p.eval(x) - target).abs()).fold(0.0, f64::max);
            assert!(sup < 1e-10, "recip order {m}");
        }
    }

    #[test]
    fn singular_leading_is_rejected_with_point() {
        let spec = spec();
        let mut h = JetSeries::zero(Rank::Sym2, &spec, 3);
        // leading coefficient zero -> singular
        h.set_coeff(1, BoundaryField::round_metric(&spec)).unwrap();
        match jet_det_inverse(&h, 1) {
            Err(Error::SingularLeading { point, .. }) => {
                assert_eq!(point.len(), 3);
            }
            other => panic!("expected SingularLeading, got {other:?}"),
        }
    }

    #[test]
    fn sqrt_and_binomial_series() {
        let spec = spec();
        let n = 3;
        // s = sqrt(1 + x a(y)) with a = x1 restriction
        let mut a = ps::constant(n, 1.0, 5);
        a[1] = Poly::var(n, 0);
        let s = ps::sqrt(&a, 5, &spec).unwrap();
        let sq = ps::mul(&s, &s, 5, spec.rho);
        let pts = spec.sample_points(20);
        for m in 0..=5 {
            let sup = pts
                .iter()
                .map(|x| (sq[m].eval(x) - a[m].eval(x)).abs())
                .fold(0.0, f64::max);
            assert!(sup < 1e-12, "sqrt order {m}");
        }
        // (1+w)^(-1/2) * (1+w)^(1/2) = 1
        let w: Vec<Poly> = {
            let mut w = ps::zero(n, 5);
            w[2] = Poly::var(n, 1).scale(0.7);
            w
        };
        let p1 = ps::binomial_pow(&w, 0.5, 5, spec.rho);
        let p2 = ps::binomial_pow(&w, -0.5, 5, spec.rho);
        let prod = ps::mul(&p1, &p2, 5, spec.rho);
        for m in 1..=5 {
            let sup = pts.iter().map(|x| prod[m].eval(x).abs()).fold(0.0, f64::max);
            assert!(sup < 1e-13);
        }
    }
}
