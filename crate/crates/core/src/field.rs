//! Extrinsic tensor calculus on the boundary sphere.
//!
//! Fields are stored through ambient polynomial components and kept
//! tangential by explicit projection. Tangential differentiation extends
//! components 0-homogeneously off the sphere, takes ambient partials and
//! projects every index; on polynomial data this realizes the Levi-Civita
//! connection of the induced round metric exactly.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::sphere::SphereSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rank {
    Scalar,
    Covector,
    Vector,
    Sym2,
}

impl Rank {
    pub fn as_str(self) -> &'static str {
        match self {
            Rank::Scalar => "scalar",
            Rank::Covector => "covector",
            Rank::Vector => "vector",
            Rank::Sym2 => "sym2",
        }
    }

    pub fn from_str(s: &str) -> Option<Rank> {
        match s {
            "scalar" => Some(Rank::Scalar),
            "covector" => Some(Rank::Covector),
            "vector" => Some(Rank::Vector),
            "sym2" => Some(Rank::Sym2),
            _ => None,
        }
    }

    fn component_count(self, n: usize) -> usize {
        match self {
            Rank::Scalar => 1,
            Rank::Covector | Rank::Vector => n,
            Rank::Sym2 => n * (n + 1) / 2,
        }
    }

    /// Sign picked up by the induced antipodal action on the index slots.
    fn antipodal_index_sign(self) -> f64 {
        match self {
            Rank::Scalar | Rank::Sym2 => 1.0,
            Rank::Covector | Rank::Vector => -1.0,
        }
    }
}

/// Index into the packed symmetric storage (i <= j).
#[inline]
pub fn sym_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + j
}

/// Scalar, covector, vector or symmetric-2-tensor field on the boundary
/// sphere, with ambient polynomial components reduced modulo the sphere
/// relation.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryField {
    pub rank: Rank,
    pub spec: SphereSpec,
    comps: Vec<Poly>,
}

impl BoundaryField {
    pub fn zero(rank: Rank, spec: &SphereSpec) -> Self {
        let m = rank.component_count(spec.n);
        BoundaryField {
            rank,
            spec: spec.clone(),
            comps: vec![Poly::zero(spec.n); m],
        }
    }

    pub fn from_components(rank: Rank, spec: &SphereSpec, comps: Vec<Poly>) -> Result<Self> {
        let m = rank.component_count(spec.n);
        if comps.len() != m {
            return Err(Error::InvalidParameter(format!(
                "expected {m} components for rank {}, got {}",
                rank.as_str(),
                comps.len()
            )));
        }
        let comps = comps
            .into_iter()
            .map(|p| p.reduce_sphere(spec.rho))
            .collect();
        Ok(BoundaryField { rank, spec: spec.clone(), comps })
    }

    pub fn scalar(spec: &SphereSpec, p: Poly) -> Self {
        BoundaryField {
            rank: Rank::Scalar,
            spec: spec.clone(),
            comps: vec![p.reduce_sphere(spec.rho)],
        }
    }

    pub fn components(&self) -> &[Poly] {
        &self.comps
    }

    pub fn component(&self, idx: &[usize]) -> &Poly {
        match self.rank {
            Rank::Scalar => &self.comps[0],
            Rank::Covector | Rank::Vector => &self.comps[idx[0]],
            Rank::Sym2 => &self.comps[sym_index(self.spec.n, idx[0], idx[1])],
        }
    }

    pub fn is_zero_exact(&self) -> bool {
        self.comps.iter().all(Poly::is_zero)
    }

    /// The round metric of the radius-rho sphere, i.e. the tangential
    /// projector `P_ij = delta_ij - x_i x_j / rho^2` as a sym2 field.
    pub fn round_metric(spec: &SphereSpec) -> Self {
        let n = spec.n;
        let inv_r2 = 1.0 / (spec.rho * spec.rho);
        let mut comps = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in i..n {
                let mut p = Poly::zero(n);
                if i == j {
                    p = p.add(&Poly::constant(n, 1.0));
                }
                let xx = Poly::var(n, i).mul(&Poly::var(n, j)).scale(-inv_r2);
                p = p.add(&xx);
                comps.push(p.reduce_sphere(spec.rho));
            }
        }
        BoundaryField { rank: Rank::Sym2, spec: spec.clone(), comps }
    }

    pub fn add(&self, other: &BoundaryField) -> Result<BoundaryField> {
        self.check_same_shape(other)?;
        let comps = self
            .comps
            .iter()
            .zip(other.comps.iter())
            .map(|(a, b)| a.add(b))
            .collect();
        Ok(BoundaryField { rank: self.rank, spec: self.spec.clone(), comps })
    }

    pub fn sub(&self, other: &BoundaryField) -> Result<BoundaryField> {
        self.check_same_shape(other)?;
        let comps = self
            .comps
            .iter()
            .zip(other.comps.iter())
            .map(|(a, b)| a.sub(b))
            .collect();
        Ok(BoundaryField { rank: self.rank, spec: self.spec.clone(), comps })
    }

    pub fn scale(&self, c: f64) -> BoundaryField {
        BoundaryField {
            rank: self.rank,
            spec: self.spec.clone(),
            comps: self.comps.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Multiply by a scalar field.
    pub fn mul_scalar_field(&self, f: &BoundaryField) -> Result<BoundaryField> {
        if f.rank != Rank::Scalar {
            return Err(Error::RankMismatch { expected: "scalar", got: f.rank.as_str() });
        }
        let limit = self.spec.working_degree_limit();
        let comps: Vec<Poly> = self
            .comps
            .iter()
            .map(|p| p.mul(&f.comps[0]).reduce_sphere(self.spec.rho))
            .collect();
        for p in &comps {
            p.check_degree(limit)?;
        }
        Ok(BoundaryField { rank: self.rank, spec: self.spec.clone(), comps })
    }

    fn check_same_shape(&self, other: &BoundaryField) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                expected: self.rank.as_str(),
                got: other.rank.as_str(),
            });
        }
        if self.spec.n != other.spec.n {
            return Err(Error::InvalidParameter("ambient dimension mismatch".into()));
        }
        Ok(())
    }

    // ------------------------------------------------------------------
    // evaluation
    // ------------------------------------------------------------------

    pub fn eval_scalar(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(self.rank, Rank::Scalar);
        self.comps[0].eval(x)
    }

    pub fn eval_vector(&self, x: &[f64]) -> Vec<f64> {
        debug_assert!(matches!(self.rank, Rank::Covector | Rank::Vector));
        self.comps.iter().map(|p| p.eval(x)).collect()
    }

    /// Full n x n matrix of a sym2 field at a point (row major).
    pub fn eval_sym2(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(self.rank, Rank::Sym2);
        let n = self.spec.n;
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                m[i * n + j] = self.comps[sym_index(n, i, j)].eval(x);
            }
        }
        m
    }

    pub fn sym2_bilinear(&self, x: &[f64], u: &[f64], v: &[f64]) -> f64 {
        let n = self.spec.n;
        let m = self.eval_sym2(x);
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += m[i * n + j] * u[i] * v[j];
            }
        }
        s
    }

    /// Max absolute component value over the deterministic sample set.
    pub fn sup_norm(&self) -> f64 {
        let pts = self.spec.sample_points(160);
        let mut m = 0.0f64;
        for p in &pts {
            for c in &self.comps {
                m = m.max(c.eval(p).abs());
            }
        }
        m
    }

    pub fn max_component_degree(&self) -> usize {
        self.comps.iter().map(Poly::total_degree).max().unwrap_or(0)
    }

    // ------------------------------------------------------------------
    // projection / tangentiality / parity
    // ------------------------------------------------------------------

    /// Tangential projection. For sym2 this is `W -> P W P`, for (co)vectors
    /// `w -> P w`; scalars are unchanged. Projection raises the ambient
    /// degree by two per projected index.
    pub fn project_tangential(&self) -> Result<BoundaryField> {
        if self.max_component_degree() > self.spec.degree_cap + 2 {
            return Err(Error::DegreeOverflow {
                degree: self.max_component_degree(),
                limit: self.spec.degree_cap + 2,
            });
        }
        Ok(self.project_tangential_unchecked())
    }

    pub(crate) fn project_tangential_unchecked(&self) -> BoundaryField {
        let n = self.spec.n;
        let rho = self.spec.rho;
        match self.rank {
            Rank::Scalar => self.clone(),
            Rank::Covector | Rank::Vector => {
                let proj = projector(&self.spec);
                let mut comps = Vec::with_capacity(n);
                for i in 0..n {
                    let mut p = Poly::zero(n);
                    for j in 0..n {
                        p = p.add(&proj[i * n + j].mul(&self.comps[j]));
                    }
                    comps.push(p.reduce_sphere(rho));
                }
                BoundaryField { rank: self.rank, spec: self.spec.clone(), comps }
            }
            Rank::Sym2 => {
                let proj = projector(&self.spec);
                // full matrix, then P W P, then repack
                let mut full = vec![Poly::zero(n); n * n];
                for i in 0..n {
                    for j in 0..n {
                        full[i * n + j] = self.comps[sym_index(n, i, j)].clone();
                    }
                }
                let pw = mat_mul(n, &proj, &full);
                let pwp = mat_mul(n, &pw, &proj);
                let mut comps = Vec::with_capacity(n * (n + 1) / 2);
                for i in 0..n {
                    for j in i..n {
                        // symmetrize to wash out roundoff asymmetry
                        let s = pwp[i * n + j].add(&pwp[j * n + i]).scale(0.5);
                        comps.push(s.reduce_sphere(rho));
                    }
                }
                BoundaryField { rank: Rank::Sym2, spec: self.spec.clone(), comps }
            }
        }
    }

    /// Largest contraction with the normal direction over sample points,
    /// together with the point where it is attained.
    pub fn tangentiality_residual_at(&self) -> (f64, Vec<f64>) {
        let n = self.spec.n;
        let rho = self.spec.rho;
        let pts = self.spec.sample_points(60);
        let mut worst = 0.0f64;
        let mut at = pts[0].clone();
        for x in &pts {
            let r = match self.rank {
                Rank::Scalar => 0.0,
                Rank::Covector | Rank::Vector => {
                    let w = self.eval_vector(x);
                    let r: f64 = w.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
                    r.abs() / rho
                }
                Rank::Sym2 => {
                    let m = self.eval_sym2(x);
                    (0..n)
                        .map(|i| {
                            let r: f64 = (0..n).map(|j| m[i * n + j] * x[j]).sum();
                            r.abs() / rho
                        })
                        .fold(0.0, f64::max)
                }
            };
            if r > worst {
                worst = r;
                at = x.clone();
            }
        }
        (worst, at)
    }

    pub fn tangentiality_residual(&self) -> f64 {
        self.tangentiality_residual_at().0
    }

    pub fn require_tangential(&self, tol: f64) -> Result<()> {
        let (r, at) = self.tangentiality_residual_at();
        let scale = self.sup_norm().max(1.0);
        if r > tol * scale {
            return Err(Error::NonTangential { point: at, residual: r });
        }
        Ok(())
    }

    /// Splits into parts that are invariant / anti-invariant under pullback
    /// by the antipodal map (with the induced action on index slots).
    pub fn antipodal_parity_split(&self) -> (BoundaryField, BoundaryField) {
        let idx_sign = self.rank.antipodal_index_sign();
        let mut even = Vec::with_capacity(self.comps.len());
        let mut odd = Vec::with_capacity(self.comps.len());
        for c in &self.comps {
            let (de, d_o) = c.degree_parity_split();
            // a*T component picks up idx_sign * (-1)^deg
            if idx_sign > 0.0 {
                even.push(de);
                odd.push(d_o);
            } else {
                even.push(d_o);
                odd.push(de);
            }
        }
        (
            BoundaryField { rank: self.rank, spec: self.spec.clone(), comps: even },
            BoundaryField { rank: self.rank, spec: self.spec.clone(), comps: odd },
        )
    }

    /// Pullback by an orthogonal map of the ambient space (rotations in
    /// tests and diagnostics). `r` is row-major n x n.
    pub fn pullback_rotation(&self, r: &[Vec<f64>]) -> BoundaryField {
        let n = self.spec.n;
        let sub = |p: &Poly| p.substitute_linear(r).reduce_sphere(self.spec.rho);
        let comps = match self.rank {
            Rank::Scalar => vec![sub(&self.comps[0])],
            Rank::Covector | Rank::Vector => {
                // (R^* w)_i = sum_j R_{ji} w_j(Rx)
                (0..n)
                    .map(|i| {
                        let mut p = Poly::zero(n);
                        for j in 0..n {
                            if r[j][i] != 0.0 {
                                p = p.add(&sub(&self.comps[j]).scale(r[j][i]));
                            }
                        }
                        p
                    })
                    .collect()
            }
            Rank::Sym2 => {
                let mut comps = Vec::with_capacity(n * (n + 1) / 2);
                for i in 0..n {
                    for j in i..n {
                        let mut p = Poly::zero(n);
                        for k in 0..n {
                            for l in 0..n {
                                let c = r[k][i] * r[l][j];
                                if c != 0.0 {
                                    p = p.add(&sub(&self.comps[sym_index(n, k, l)]).scale(c));
                                }
                            }
                        }
                        comps.push(p);
                    }
                }
                comps
            }
        };
        BoundaryField { rank: self.rank, spec: self.spec.clone(), comps }
    }

    // ------------------------------------------------------------------
    // differential operators
    // ------------------------------------------------------------------

    /// Tangential gradient of a scalar field, as a vector field.
    pub fn tangential_gradient(&self) -> Result<BoundaryField> {
        if self.rank != Rank::Scalar {
            return Err(Error::RankMismatch { expected: "scalar", got: self.rank.as_str() });
        }
        let n = self.spec.n;
        let rho = self.spec.rho;
        let proj = projector(&self.spec);
        let raw: Vec<Poly> = (0..n).map(|v| self.comps[0].homog_ext_partial(v, rho)).collect();
        let mut comps = Vec::with_capacity(n);
        for i in 0..n {
            let mut p = Poly::zero(n);
            for j in 0..n {
                p = p.add(&proj[i * n + j].mul(&raw[j]));
            }
            comps.push(p.reduce_sphere(rho));
        }
        let out = BoundaryField { rank: Rank::Vector, spec: self.spec.clone(), comps };
        out.check_working_degree()?;
        Ok(out)
    }

    /// Divergence of a tangential (co)vector field.
    pub fn scalar_divergence(&self) -> Result<BoundaryField> {
        if !matches!(self.rank, Rank::Covector | Rank::Vector) {
            return Err(Error::RankMismatch { expected: "covector", got: self.rank.as_str() });
        }
        let n = self.spec.n;
        let rho = self.spec.rho;
        let proj = projector(&self.spec);
        let mut p = Poly::zero(n);
        for a in 0..n {
            for b in 0..n {
                p = p.add(&proj[a * n + b].mul(&self.comps[b].homog_ext_partial(a, rho)));
            }
        }
        let out = BoundaryField::scalar(&self.spec, p);
        out.check_working_degree()?;
        Ok(out)
    }

    /// Divergence of a tangential sym2 field: `(div K)_m = P_mc P_ab d_a K_bc`.
    pub fn divergence(&self) -> Result<BoundaryField> {
        if self.rank != Rank::Sym2 {
            return Err(Error::RankMismatch { expected: "sym2", got: self.rank.as_str() });
        }
        let n = self.spec.n;
        let rho = self.spec.rho;
        let proj = projector(&self.spec);
        let mut inner = vec![Poly::zero(n); n]; // indexed by c
        for c in 0..n {
            let mut p = Poly::zero(n);
            for a in 0..n {
                for b in 0..n {
                    let kbc = &self.comps[sym_index(n, b, c)];
                    p = p.add(&proj[a * n + b].mul(&kbc.homog_ext_partial(a, rho)));
                }
            }
            inner[c] = p.reduce_sphere(rho);
        }
        let mut comps = Vec::with_capacity(n);
        for m in 0..n {
            let mut p = Poly::zero(n);
            for c in 0..n {
                p = p.add(&proj[m * n + c].mul(&inner[c]));
            }
            comps.push(p.reduce_sphere(rho));
        }
        let out = BoundaryField { rank: Rank::Covector, spec: self.spec.clone(), comps };
        out.check_working_degree()?;
        Ok(out)
    }

    /// Laplace-Beltrami operator (div grad, nonpositive spectrum) on scalars.
    pub fn laplace_beltrami(&self) -> Result<BoundaryField> {
        self.tangential_gradient()?.scalar_divergence()
    }

    /// Metric trace of a tangential sym2 field (ambient trace).
    pub fn g_trace(&self) -> Result<BoundaryField> {
        if self.rank != Rank::Sym2 {
            return Err(Error::RankMismatch { expected: "sym2", got: self.rank.as_str() });
        }
        let n = self.spec.n;
        let mut p = Poly::zero(n);
        for i in 0..n {
            p = p.add(&self.comps[sym_index(n, i, i)]);
        }
        Ok(BoundaryField::scalar(&self.spec, p))
    }

    fn check_working_degree(&self) -> Result<()> {
        let limit = self.spec.working_degree_limit();
        for p in &self.comps {
            p.check_degree(limit)?;
        }
        Ok(())
    }
}

/// Lie derivative of the round metric along a tangential vector field:
/// `K_ab = (nabla xi)_ab + (nabla xi)_ba` with `xi` the Euclidean-dual
/// covector of `X`.
pub fn lie_derivative_round_metric(x_field: &BoundaryField) -> Result<BoundaryField> {
    if !matches!(x_field.rank, Rank::Vector | Rank::Covector) {
        return Err(Error::RankMismatch { expected: "vector", got: x_field.rank.as_str() });
    }
    x_field.require_tangential(1e-10)?;
    let spec = &x_field.spec;
    let n = spec.n;
    let rho = spec.rho;
    let proj = projector(spec);
    // U_ab = d~_a xi_b
    let mut u = vec![Poly::zero(n); n * n];
    for a in 0..n {
        for b in 0..n {
            u[a * n + b] = x_field.components()[b].homog_ext_partial(a, rho);
        }
    }
    let pu = mat_mul(n, &proj, &u);
    let t = mat_mul(n, &pu, &proj);
    let mut comps = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            comps.push(t[i * n + j].add(&t[j * n + i]).reduce_sphere(rho));
        }
    }
    let out = BoundaryField { rank: Rank::Sym2, spec: spec.clone(), comps };
    out.check_working_degree()?;
    Ok(out)
}

/// Residual of the identity satisfied by Lie derivatives of the round
/// metric: `div div K + Delta Tr K - c Tr K`, where Delta is the
/// Laplace-Beltrami operator in the geometer's sign convention (-div grad).
pub fn michel_residual(k: &BoundaryField, c: f64) -> Result<BoundaryField> {
    if k.rank != Rank::Sym2 {
        return Err(Error::RankMismatch { expected: "sym2", got: k.rank.as_str() });
    }
    let dd = k.divergence()?.scalar_divergence()?;
    let tr = k.g_trace()?;
    let lap_tr = tr.laplace_beltrami()?;
    // geometer's Delta = -div grad
    dd.sub(&lap_tr)?.sub(&tr.scale(c))
}

/// Least-squares calibration of the constant in the identity above over
/// seeded random Lie-derivative tensors. Returns (c_star, max post-fit
/// residual over the calibration set).
pub fn calibrate_michel_constant(
    spec: &SphereSpec,
    seed: u64,
    count: usize,
    degree: usize,
) -> Result<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = spec.sample_points(120);
    let mut num = 0.0;
    let mut den = 0.0;
    let mut fields = Vec::new();
    for _ in 0..count {
        let x = random_tangential_vector(spec, &mut rng, degree)?;
        let k = lie_derivative_round_metric(&x)?;
        let dd = k.divergence()?.scalar_divergence()?;
        let tr = k.g_trace()?;
        let lap_tr = tr.laplace_beltrami()?;
        let lhs = dd.sub(&lap_tr)?; // div div K + Delta_geo Tr K
        for p in &pts {
            let a = lhs.eval_scalar(p);
            let b = tr.eval_scalar(p);
            num += a * b;
            den += b * b;
        }
        fields.push((lhs, tr));
    }
    if den == 0.0 {
        return Err(Error::InvalidParameter(
            "calibration set has identically vanishing traces".into(),
        ));
    }
    let c_star = num / den;
    let mut worst = 0.0f64;
    for (lhs, tr) in &fields {
        let res = lhs.sub(&tr.scale(c_star))?;
        worst = worst.max(res.sup_norm());
    }
    Ok((c_star, worst))
}

// ----------------------------------------------------------------------
// helpers shared by the jet modules
// ----------------------------------------------------------------------

/// Tangential projector as an n x n polynomial matrix (row major).
pub(crate) fn projector(spec: &SphereSpec) -> Vec<Poly> {
    let n = spec.n;
    let inv_r2 = 1.0 / (spec.rho * spec.rho);
    let mut m = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut p = Poly::zero(n);
            if i == j {
                p = p.add(&Poly::constant(n, 1.0));
            }
            p = p.add(&Poly::var(n, i).mul(&Poly::var(n, j)).scale(-inv_r2));
            m.push(p);
        }
    }
    m
}

pub(crate) fn mat_mul(n: usize, a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut p = Poly::zero(n);
            for k in 0..n {
                p = p.add(&a[i * n + k].mul(&b[k * n + j]));
            }
            out.push(p);
        }
    }
    out
}

// ----------------------------------------------------------------------
// seeded random fields
// ----------------------------------------------------------------------

pub fn random_scalar<R: Rng>(spec: &SphereSpec, rng: &mut R, degree: usize) -> BoundaryField {
    let n = spec.n;
    let mut raw = Vec::new();
    let mut exps = vec![0usize; n];
    loop {
        let total: usize = exps.iter().sum();
        if total <= degree {
            raw.push((exps.clone(), normal(rng)));
        }
        // odometer over exponent tuples with per-var bound `degree`
        let mut v = 0;
        loop {
            if v == n {
                let p = Poly::from_terms(n, raw);
                return BoundaryField::scalar(spec, p);
            }
            exps[v] += 1;
            if exps[v] > degree {
                exps[v] = 0;
                v += 1;
            } else {
                break;
            }
        }
    }
}

/// Random tangential vector field: random ambient components of the given
/// degree, projected. The resulting component degree is at most degree + 2.
pub fn random_tangential_vector<R: Rng>(
    spec: &SphereSpec,
    rng: &mut R,
    degree: usize,
) -> Result<BoundaryField> {
    let comps: Vec<Poly> = (0..spec.n)
        .map(|_| random_scalar(spec, rng, degree).components()[0].clone())
        .collect();
    let raw = BoundaryField::from_components(Rank::Vector, spec, comps)?;
    Ok(raw.project_tangential_unchecked())
}

pub fn random_tangential_sym2<R: Rng>(
    spec: &SphereSpec,
    rng: &mut R,
    degree: usize,
) -> Result<BoundaryField> {
    let n = spec.n;
    let mut comps = Vec::with_capacity(n * (n + 1) / 2);
    for _ in 0..n * (n + 1) / 2 {
        comps.push(random_scalar(spec, rng, degree).components()[0].clone());
    }
    let raw = BoundaryField::from_components(Rank::Sym2, spec, comps)?;
    Ok(raw.project_tangential_unchecked())
}

pub(crate) fn normal<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.gen_range(1e-12..1.0f64);
    let u2: f64 = rng.gen_range(0.0..1.0f64);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn spec() -> SphereSpec {
        SphereSpec::default_s2()
    }

    #[test]
    fn identity_projects_to_round_metric() {
        let spec = SphereSpec::new(3, 1.5, 8).unwrap();
        let n = spec.n;
        let mut comps = Vec::new();
        for i in 0..n {
            for j in i..n {
                comps.push(Poly::constant(n, if i == j { 1.0 } else { 0.0 }));
            }
        }
        let id = BoundaryField::from_components(Rank::Sym2, &spec, comps).unwrap();
        let proj = id.project_tangential().unwrap();
        let g = BoundaryField::round_metric(&spec);
        assert!(proj.sub(&g).unwrap().sup_norm() < 1e-13);
    }

    #[test]
    fn projection_is_idempotent() {
        let spec = spec();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let w = random_tangential_sym2(&spec, &mut rng, 3).unwrap();
        let w2 = w.project_tangential().unwrap();
        assert!(w.sub(&w2).unwrap().sup_norm() < 1e-12);
        assert!(w.tangentiality_residual() < 1e-12);
    }

    #[test]
    fn pole_projection_annihilates_axis_tensor() {
        // e1 (x) e1 projected at the point e1 is zero.
        let spec = spec();
        let n = spec.n;
        let mut comps = vec![Poly::zero(n); n * (n + 1) / 2];
        comps[sym_index(n, 0, 0)] = Poly::constant(n, 1.0);
        let m = BoundaryField::from_components(Rank::Sym2, &spec, comps).unwrap();
        let w = m.project_tangential().unwrap();
        let at_pole = w.eval_sym2(&[1.0, 0.0, 0.0]);
        for v in at_pole {
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-14);
        }
        // independent pointwise oracle at a generic point: P M P evaluated
        // numerically.
        let x = [0.6, 0.64, 0.48];
        let mut pm = [[0.0f64; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                pm[i][j] = (if i == j { 1.0 } else { 0.0 }) - x[i] * x[j];
            }
        }
        // M = e1 e1^T, so P M P = p_col0 p_row0 outer product
        let got = w.eval_sym2(&x);
        for i in 0..3 {
            for j in 0..3 {
                assert_abs_diff_eq!(got[i * 3 + j], pm[i][0] * pm[0][j], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn parity_split_reconstructs_and_classifies() {
        let spec = spec();
        let g = BoundaryField::round_metric(&spec);
        let (e, o) = g.antipodal_parity_split();
        assert!(o.is_zero_exact());
        assert!(e.sub(&g).unwrap().sup_norm() < 1e-15);

        let x1 = BoundaryField::scalar(&spec, Poly::var(3, 0));
        let xg = g.mul_scalar_field(&x1).unwrap();
        let (e2, o2) = xg.antipodal_parity_split();
        assert!(e2.is_zero_exact());
        assert!(o2.sub(&xg).unwrap().sup_norm() < 1e-15);

        // double split returns the same pair, and even + odd = input
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let w = random_tangential_sym2(&spec, &mut rng, 3).unwrap();
        let (we, wo) = w.antipodal_parity_split();
        let (wee, weo) = we.antipodal_parity_split();
        assert!(weo.is_zero_exact());
        assert!(wee.sub(&we).unwrap().sup_norm() < 1e-15);
        assert!(we.add(&wo).unwrap().sub(&w).unwrap().sup_norm() < 1e-13);
    }

    #[test]
    fn killing_field_has_zero_lie_derivative() {
        let spec = spec();
        let n = 3;
        // rotation generator about the x3 axis: X = (-x2, x1, 0)
        let comps = vec![
            Poly::var(n, 1).scale(-1.0),
            Poly::var(n, 0),
            Poly::zero(n),
        ];
        let x = BoundaryField::from_components(Rank::Vector, &spec, comps).unwrap();
        let k = lie_derivative_round_metric(&x).unwrap();
        assert!(k.sup_norm() < 1e-13, "sup = {}", k.sup_norm());
    }

    #[test]
    fn lie_derivative_of_zero_is_zero() {
        let spec = spec();
        let x = BoundaryField::zero(Rank::Vector, &spec);
        let k = lie_derivative_round_metric(&x).unwrap();
        assert!(k.is_zero_exact());
    }

    #[test]
    fn laplace_beltrami_eigenvalue_on_linear_restriction() {
        // Delta x3 = -2 x3 on the unit 2-sphere
        let spec = spec();
        let f = BoundaryField::scalar(&spec, Poly::var(3, 2));
        let lap = f.laplace_beltrami().unwrap();
        let res = lap.add(&f.scale(2.0)).unwrap();
        assert!(res.sup_norm() < 1e-13);
    }

    #[test]
    fn michel_residual_vanishes_for_lie_tensors() {
        let spec = spec();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..3 {
            let x = random_tangential_vector(&spec, &mut rng, 3).unwrap();
            let k = lie_derivative_round_metric(&x).unwrap();
            let res = michel_residual(&k, 1.0).unwrap();
            let scale = k.sup_norm().max(1.0);
            assert!(res.sup_norm() < 1e-11 * scale, "res = {}", res.sup_norm());
        }
    }

    #[test]
    fn michel_residual_on_round_metric_is_trace_term() {
        // div div g = 0 and Tr g = n_b, so the residual is the constant -c n_b.
        let spec = spec();
        let g = BoundaryField::round_metric(&spec);
        let c = 1.0;
        let res = michel_residual(&g, c).unwrap();
        let expected = BoundaryField::scalar(&spec, Poly::constant(3, -c * 2.0));
        assert!(res.sub(&expected).unwrap().sup_norm() < 1e-12);
    }

    #[test]
    fn calibration_recovers_boundary_constant() {
        let spec = spec();
        let (c_star, worst) = calibrate_michel_constant(&spec, 42, 6, 3).unwrap();
        assert_abs_diff_eq!(c_star, 1.0, epsilon = 1e-9);
        assert!(worst < 1e-9);
    }

    #[test]
    fn operators_are_linear() {
        let spec = spec();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_tangential_sym2(&spec, &mut rng, 3).unwrap();
        let b = random_tangential_sym2(&spec, &mut rng, 3).unwrap();
        let lin = a.scale(2.5).add(&b.scale(-1.25)).unwrap();
        let d1 = lin.divergence().unwrap();
        let d2 = a
            .divergence()
            .unwrap()
            .scale(2.5)
            .add(&b.divergence().unwrap().scale(-1.25))
            .unwrap();
        assert!(d1.sub(&d2).unwrap().sup_norm() < 1e-12);
    }

    #[test]
    fn degree_overflow_is_reported() {
        let spec = SphereSpec::new(3, 1.0, 1).unwrap(); // working limit 10
        let mut comps = vec![Poly::zero(3); 6];
        comps[0] = Poly::monomial(3, &[0, 5, 4], 1.0);
        let w = BoundaryField::from_components(Rank::Sym2, &spec, comps).unwrap();
        // projection input cap is degree_cap + 2 = 3 < 9
        assert!(matches!(
            w.project_tangential(),
            Err(Error::DegreeOverflow { .. })
        ));
    }
}
