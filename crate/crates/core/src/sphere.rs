//! Boundary-sphere geometry: the problem specification and deterministic
//! sample grids used for pointwise diagnostics and L2 inner products.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::quad::gauss_legendre;

/// Ambient-space description of the scattering problem. The boundary is the
/// sphere `S^{n-1}` of radius `rho` sitting in `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereSpec {
    pub n: usize,
    pub rho: f64,
    pub degree_cap: usize,
}

impl SphereSpec {
    pub fn new(n: usize, rho: f64, degree_cap: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!("n = {n} < 3")));
        }
        if n > crate::poly::MAX_VARS {
            return Err(Error::InvalidParameter(format!(
                "n = {n} exceeds supported variable count"
            )));
        }
        if !(rho > 0.0) {
            return Err(Error::InvalidParameter(format!("rho = {rho} must be positive")));
        }
        Ok(SphereSpec { n, rho, degree_cap })
    }

    /// Default desk-scale setting: S^2 of radius 1 in R^3, degree cap 8.
    pub fn default_s2() -> Self {
        SphereSpec { n: 3, rho: 1.0, degree_cap: 8 }
    }

    pub fn unit(n: usize) -> Result<Self> {
        SphereSpec::new(n, 1.0, 8)
    }

    /// Boundary dimension n_b = n - 1.
    pub fn boundary_dim(&self) -> usize {
        self.n - 1
    }

    /// Hard ceiling on intermediate polynomial degrees. Operations that would
    /// exceed it fail with an explicit overflow error instead of truncating.
    pub fn working_degree_limit(&self) -> usize {
        2 * self.degree_cap + 8
    }

    /// Deterministic well-spread sample points on the sphere (axis points
    /// plus seeded unit vectors), used for sup norms and pointwise checks.
    pub fn sample_points(&self, count: usize) -> Vec<Vec<f64>> {
        let mut pts = Vec::with_capacity(count + 2 * self.n);
        for v in 0..self.n {
            for s in [1.0f64, -1.0] {
                let mut p = vec![0.0; self.n];
                p[v] = s * self.rho;
                pts.push(p);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5a_17_3e_01);
        while pts.len() < count + 2 * self.n {
            let mut p: Vec<f64> = (0..self.n).map(|_| gauss_sample(&mut rng)).collect();
            let norm: f64 = p.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm < 1e-3 {
                continue;
            }
            for x in p.iter_mut() {
                *x *= self.rho / norm;
            }
            pts.push(p);
        }
        pts
    }

    /// Quadrature grid on S^2 that integrates spherical polynomials exactly
    /// up to the given degree: Gauss-Legendre in the polar cosine times a
    /// uniform grid in azimuth. Only available for n = 3.
    pub fn l2_grid(&self, degree: usize) -> Result<Vec<(Vec<f64>, f64)>> {
        if self.n != 3 {
            return Err(Error::InvalidParameter(
                "L2 quadrature grid is implemented for the 2-sphere only".into(),
            ));
        }
        let mz = degree / 2 + 2;
        let mphi = degree + 2;
        let (nodes, weights) = gauss_legendre(mz, -1.0, 1.0);
        let mut grid = Vec::with_capacity(mz * mphi);
        let dphi = 2.0 * std::f64::consts::PI / mphi as f64;
        for (z, wz) in nodes.iter().zip(weights.iter()) {
            let s = (1.0 - z * z).max(0.0).sqrt();
            for j in 0..mphi {
                let phi = dphi * j as f64;
                let p = vec![
                    self.rho * s * phi.cos(),
                    self.rho * s * phi.sin(),
                    self.rho * z,
                ];
                grid.push((p, self.rho * self.rho * wz * dphi));
            }
        }
        Ok(grid)
    }
}

fn gauss_sample<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller; only the first component is used.
    let u1: f64 = rng.gen_range(1e-12..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn sample_points_lie_on_sphere() {
        let spec = SphereSpec::new(3, 2.0, 8).unwrap();
        for p in spec.sample_points(50) {
            let r: f64 = p.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert_abs_diff_eq!(r, 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn l2_grid_integrates_polynomials() {
        let spec = SphereSpec::default_s2();
        let grid = spec.l2_grid(6).unwrap();
        // integral of x_2^2 over unit sphere = 4 pi / 3
        let val: f64 = grid.iter().map(|(p, w)| p[2] * p[2] * w).sum();
        assert_abs_diff_eq!(val, 4.0 * std::f64::consts::PI / 3.0, epsilon = 1e-12);
        // integral of an odd monomial vanishes
        let odd: f64 = grid.iter().map(|(p, w)| p[0] * p[1] * p[2] * w).sum();
        assert_abs_diff_eq!(odd, 0.0, epsilon = 1e-13);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(SphereSpec::new(2, 1.0, 8).is_err());
        assert!(SphereSpec::new(3, -1.0, 8).is_err());
    }
}
