//! Closed geodesics of the boundary sphere, stored as orthonormal frame
//! pairs, plus deterministic frame families for sampling.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::normal;

/// Oriented great circle of the radius-rho sphere:
/// `gamma(t) = rho (u cos(t/rho) + v sin(t/rho))`, unit speed, period
/// `2 pi rho`.
#[derive(Debug, Clone, PartialEq)]
pub struct GreatCircle {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub rho: f64,
}

impl GreatCircle {
    pub fn new(u: Vec<f64>, v: Vec<f64>, rho: f64) -> Result<Self> {
        if u.len() != v.len() || u.len() < 3 {
            return Err(Error::InvalidParameter("frame dimension mismatch".into()));
        }
        if !(rho > 0.0) {
            return Err(Error::InvalidParameter("rho must be positive".into()));
        }
        let nu = norm(&u);
        let nv = norm(&v);
        let dot: f64 = u.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
        if (nu - 1.0).abs() > 1e-12 || (nv - 1.0).abs() > 1e-12 || dot.abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "frame not orthonormal: |u| = {nu}, |v| = {nv}, u.v = {dot}"
            )));
        }
        Ok(GreatCircle { u, v, rho })
    }

    /// Orthonormalizes an arbitrary frame pair by Gram-Schmidt.
    pub fn from_frame(u: Vec<f64>, v: Vec<f64>, rho: f64) -> Result<Self> {
        let nu = norm(&u);
        if nu < 1e-12 {
            return Err(Error::InvalidParameter("degenerate u".into()));
        }
        let u: Vec<f64> = u.iter().map(|x| x / nu).collect();
        let dot: f64 = u.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
        let mut w: Vec<f64> = v.iter().zip(u.iter()).map(|(b, a)| b - dot * a).collect();
        let nw = norm(&w);
        if nw < 1e-12 {
            return Err(Error::InvalidParameter("frame pair is collinear".into()));
        }
        for x in w.iter_mut() {
            *x /= nw;
        }
        GreatCircle::new(u, w, rho)
    }

    pub fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.rho
    }

    pub fn point(&self, t: f64) -> Vec<f64> {
        let (s, c) = (t / self.rho).sin_cos();
        self.u
            .iter()
            .zip(self.v.iter())
            .map(|(a, b)| self.rho * (a * c + b * s))
            .collect()
    }

    /// Unit-speed tangent.
    pub fn tangent(&self, t: f64) -> Vec<f64> {
        let (s, c) = (t / self.rho).sin_cos();
        self.u
            .iter()
            .zip(self.v.iter())
            .map(|(a, b)| -a * s + b * c)
            .collect()
    }

    /// Rotates the frame within its plane: the new circle traces the same
    /// set with parameter shifted by `rho * theta0`.
    pub fn rotate_frame(&self, theta0: f64) -> GreatCircle {
        let (s, c) = theta0.sin_cos();
        let u: Vec<f64> = self
            .u
            .iter()
            .zip(self.v.iter())
            .map(|(a, b)| a * c + b * s)
            .collect();
        let v: Vec<f64> = self
            .u
            .iter()
            .zip(self.v.iter())
            .map(|(a, b)| -a * s + b * c)
            .collect();
        GreatCircle { u, v, rho: self.rho }
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|a| a * a).sum::<f64>().sqrt()
}

fn halton(index: usize, base: usize) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    let mut i = index;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Deterministic well-spread family of great circles. For n = 3 the frames
/// come from a Halton sequence mapped uniformly onto SO(3); in higher
/// dimensions from a seeded Gaussian Gram-Schmidt draw.
pub fn frame_family(n: usize, rho: f64, count: usize, seed: u64) -> Result<Vec<GreatCircle>> {
    let mut out = Vec::with_capacity(count);
    if n == 3 {
        let offset = (seed % 8191) as usize;
        for k in 0..count {
            let idx = k + 1 + offset;
            let (u1, u2, u3) = (halton(idx, 2), halton(idx, 3), halton(idx, 5));
            // uniform quaternion (Shoemake)
            let two_pi = 2.0 * std::f64::consts::PI;
            let q = [
                (1.0 - u1).sqrt() * (two_pi * u2).sin(),
                (1.0 - u1).sqrt() * (two_pi * u2).cos(),
                u1.sqrt() * (two_pi * u3).sin(),
                u1.sqrt() * (two_pi * u3).cos(),
            ];
            let r = quat_to_rotation(&q);
            let u = vec![r[0][0], r[1][0], r[2][0]];
            let v = vec![r[0][1], r[1][1], r[2][1]];
            out.push(GreatCircle::new(u, v, rho)?);
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        while out.len() < count {
            let u: Vec<f64> = (0..n).map(|_| normal(&mut rng)).collect();
            let v: Vec<f64> = (0..n).map(|_| normal(&mut rng)).collect();
            if let Ok(c) = GreatCircle::from_frame(u, v, rho) {
                out.push(c);
            }
        }
    }
    Ok(out)
}

/// Seeded random circles (used by scenario generators and tests).
pub fn random_circles<R: Rng>(n: usize, rho: f64, count: usize, rng: &mut R) -> Vec<GreatCircle> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let u: Vec<f64> = (0..n).map(|_| normal(rng)).collect();
        let v: Vec<f64> = (0..n).map(|_| normal(rng)).collect();
        if let Ok(c) = GreatCircle::from_frame(u, v, rho) {
            out.push(c);
        }
    }
    out
}

fn quat_to_rotation(q: &[f64; 4]) -> [[f64; 3]; 3] {
    let (x, y, z, w) = (q[0], q[1], q[2], q[3]);
    [
        [
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - z * w),
            2.0 * (x * z + y * w),
        ],
        [
            2.0 * (x * y + z * w),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - x * w),
        ],
        [
            2.0 * (x * z - y * w),
            2.0 * (y * z + x * w),
            1.0 - 2.0 * (x * x + y * y),
        ],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn circle_is_closed_unit_speed() {
        let c = GreatCircle::from_frame(
            vec![1.0, 2.0, -0.5],
            vec![0.0, 1.0, 1.0],
            (2.0f64).sqrt(),
        )
        .unwrap();
        let p0 = c.point(0.0);
        let p1 = c.point(c.period());
        for (a, b) in p0.iter().zip(p1.iter()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(norm(&c.tangent(0.7)), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(norm(&c.point(0.7)), c.rho, epsilon = 1e-12);
    }

    #[test]
    fn frame_family_is_orthonormal_and_deterministic() {
        let a = frame_family(3, 1.0, 10, 7).unwrap();
        let b = frame_family(3, 1.0, 10, 7).unwrap();
        assert_eq!(a, b);
        for c in &a {
            assert_abs_diff_eq!(norm(&c.u), 1.0, epsilon = 1e-12);
            let dot: f64 = c.u.iter().zip(c.v.iter()).map(|(x, y)| x * y).sum();
            assert_abs_diff_eq!(dot, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn rotate_frame_shifts_parameter() {
        let c = GreatCircle::new(vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], 1.0).unwrap();
        let r = c.rotate_frame(0.3);
        let p1 = c.point(0.3 + 0.5);
        let p2 = r.point(0.5);
        for (a, b) in p1.iter().zip(p2.iter()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }
}
