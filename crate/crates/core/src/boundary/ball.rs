//! Points of the Poincaré ball in `R^{n+1}`, its boundary sphere `S^n`,
//! isometries, and the kernels built from them.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Distance to the boundary below which inputs are rejected.
pub const GUARD: f64 = 1e-12;

/// The guard band, widened to a few ulps for narrow float types.
fn guard<R: Real>() -> R {
    R::lit(GUARD).max(R::epsilon() * R::lit(8.0))
}

fn dot<R: Real>(a: &[R], b: &[R]) -> R {
    a.iter().zip(b).fold(R::zero(), |s, (x, y)| s + *x * *y)
}

fn dist2<R: Real>(a: &[R], b: &[R]) -> R {
    a.iter().zip(b).fold(R::zero(), |s, (x, y)| s + (*x - *y) * (*x - *y))
}

/// A point of the open unit ball in `R^{n+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BallPoint<R = f64> {
    coords: Vec<R>,
}

impl<R: Real> BallPoint<R> {
    pub fn new(coords: Vec<R>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::Domain("ball points need at least 2 coordinates".into()));
        }
        let norm = dot(&coords, &coords).sqrt();
        if !(norm < R::one() - guard::<R>()) {
            return Err(Error::Domain(format!("|x| = {norm} is not inside the guard band")));
        }
        Ok(BallPoint { coords })
    }

    pub fn origin(n: usize) -> Self {
        BallPoint { coords: vec![R::zero(); n + 1] }
    }

    pub fn coords(&self) -> &[R] {
        &self.coords
    }

    /// Dimension `n` of the boundary sphere.
    pub fn n(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn norm(&self) -> R {
        dot(&self.coords, &self.coords).sqrt()
    }

    /// Hyperbolic distance to the origin, `log((1+|x|)^2 / (1-|x|^2))`.
    pub fn rho(&self) -> R {
        let r = self.norm();
        ((R::one() + r) * (R::one() + r) / (R::one() - r * r)).ln()
    }

    /// `t xi` for `0 <= t < 1`.
    pub fn on_ray(xi: &BoundaryPoint<R>, t: R) -> Result<Self> {
        Self::new(xi.coords.iter().map(|&c| c * t).collect())
    }

    /// Point at hyperbolic distance `s` from the origin towards `xi`.
    pub fn at_distance(xi: &BoundaryPoint<R>, s: R) -> Result<Self> {
        Self::on_ray(xi, (s / R::lit(2.0)).tanh())
    }
}

/// A point of the unit sphere `S^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryPoint<R = f64> {
    coords: Vec<R>,
}

impl<R: Real> BoundaryPoint<R> {
    pub fn new(coords: Vec<R>) -> Result<Self> {
        let norm = dot(&coords, &coords).sqrt();
        if coords.len() < 2 || (norm - R::one()).abs() >= guard::<R>() {
            return Err(Error::Domain(format!("|xi| = {norm} is not on the unit sphere")));
        }
        Ok(BoundaryPoint { coords })
    }

    /// Normalize a nonzero vector onto the sphere.
    pub fn normalized(v: Vec<R>) -> Result<Self> {
        let norm = dot(&v, &v).sqrt();
        if norm <= R::zero() {
            return Err(Error::Domain("cannot normalize the zero vector".into()));
        }
        Ok(BoundaryPoint { coords: v.into_iter().map(|c| c / norm).collect() })
    }

    pub fn coords(&self) -> &[R] {
        &self.coords
    }

    pub fn n(&self) -> usize {
        self.coords.len() - 1
    }

    /// A point of `nu_0`, the normalized round measure.
    pub fn random<G: Rng + ?Sized>(n: usize, rng: &mut G) -> Self {
        loop {
            let v: Vec<R> = (0..=n).map(|_| R::lit(rng.sample::<f64, _>(StandardNormal))).collect();
            if let Ok(p) = Self::normalized(v) {
                return p;
            }
        }
    }
}

/// Random point of the ball with `|x| <= radius`, uniform in direction.
pub fn random_ball_point<R: Real, G: Rng + ?Sized>(n: usize, radius: f64, rng: &mut G) -> BallPoint<R> {
    let dir = BoundaryPoint::<R>::random(n, rng);
    let t = R::lit(radius * rng.random::<f64>());
    BallPoint::on_ray(&dir, t).expect("radius below 1")
}

/// An isometry `x -> Q T_a(x)` of the ball, where `T_a` is the standard
/// automorphism sending `a` to the origin and `Q` is orthogonal.
#[derive(Clone, Debug, PartialEq)]
pub struct MoebiusMap<R = f64> {
    /// Row-major `(n+1) x (n+1)` orthogonal matrix.
    rotation: Vec<R>,
    a: BallPoint<R>,
    a2: R,
}

impl<R: Real> MoebiusMap<R> {
    pub fn new(rotation: Vec<R>, a: BallPoint<R>) -> Result<Self> {
        let d = a.coords.len();
        if rotation.len() != d * d {
            return Err(Error::DimensionMismatch(format!("rotation needs {} entries", d * d)));
        }
        for i in 0..d {
            for j in 0..d {
                let s = (0..d).fold(R::zero(), |s, k| s + rotation[i * d + k] * rotation[j * d + k]);
                let target = if i == j { R::one() } else { R::zero() };
                if (s - target).abs() > R::lit(1e-9).max(R::epsilon() * R::lit(64.0)) {
                    return Err(Error::Domain("rotation is not orthogonal".into()));
                }
            }
        }
        let a2 = dot(&a.coords, &a.coords);
        Ok(MoebiusMap { rotation, a, a2 })
    }

    /// `T_a` alone.
    pub fn translation(a: BallPoint<R>) -> Self {
        let d = a.coords.len();
        let mut rot = vec![R::zero(); d * d];
        for i in 0..d {
            rot[i * d + i] = R::one();
        }
        Self::new(rot, a).expect("identity is orthogonal")
    }

    pub fn identity(n: usize) -> Self {
        Self::translation(BallPoint::origin(n))
    }

    /// Random rotation (Gram-Schmidt on a Gaussian matrix) composed with a
    /// translation by a point of norm at most `radius`.
    pub fn random<G: Rng + ?Sized>(n: usize, radius: f64, rng: &mut G) -> Self {
        let d = n + 1;
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(d);
        while rows.len() < d {
            let mut v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
            for r in &rows {
                let p: f64 = v.iter().zip(r).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(r).for_each(|(a, b)| *a -= p * b);
            }
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if norm > 1e-6 {
                rows.push(v.into_iter().map(|a| a / norm).collect());
            }
        }
        let rot = rows.into_iter().flatten().map(R::lit).collect();
        Self::new(rot, random_ball_point(n, radius, rng)).expect("orthonormal rows")
    }

    /// The translation parameter `a`, the point sent to the origin.
    pub fn a(&self) -> &BallPoint<R> {
        &self.a
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }

    fn rotate(&self, v: &[R]) -> Vec<R> {
        let d = v.len();
        (0..d).map(|i| dot(&self.rotation[i * d..(i + 1) * d], v)).collect()
    }

    /// `[x, a]^2 = 1 - 2 x.a + |x|^2 |a|^2`.
    fn bracket(&self, x: &[R]) -> R {
        R::one() - R::lit(2.0) * dot(x, &self.a.coords) + dot(x, x) * self.a2
    }

    /// Image of any point of the closed ball.
    pub fn apply_raw(&self, x: &[R]) -> Vec<R> {
        let a = &self.a.coords;
        let xa2 = dist2(x, a);
        let den = self.bracket(x);
        let one_a = R::one() - self.a2;
        let t: Vec<R> = x.iter().zip(a).map(|(&xi, &ai)| (one_a * (xi - ai) - xa2 * ai) / den).collect();
        self.rotate(&t)
    }

    pub fn apply(&self, x: &BallPoint<R>) -> Result<BallPoint<R>> {
        BallPoint::new(self.apply_raw(&x.coords))
    }

    pub fn apply_boundary(&self, xi: &BoundaryPoint<R>) -> BoundaryPoint<R> {
        BoundaryPoint::normalized(self.apply_raw(&xi.coords)).expect("sphere maps to sphere")
    }

    /// Linear conformal factor `|g'(x)| = (1 - |a|^2) / [x, a]^2`.
    pub fn conformal_factor(&self, x: &[R]) -> R {
        (R::one() - self.a2) / self.bracket(x)
    }

    /// `Q^T` followed by `T_{-a}` written as `Q^T T_{-Qa}`.
    pub fn inverse(&self) -> Self {
        let d = self.a.coords.len();
        let mut rt = vec![R::zero(); d * d];
        for i in 0..d {
            for j in 0..d {
                rt[j * d + i] = self.rotation[i * d + j];
            }
        }
        let qa: Vec<R> = self.rotate(&self.a.coords).into_iter().map(|c| -c).collect();
        Self::new(rt, BallPoint { coords: qa }).expect("transpose of an orthogonal matrix")
    }
}

/// `P(x, xi) = (1 - |x|^2) / |x - xi|^2`.
pub fn poisson_kernel<R: Real>(x: &BallPoint<R>, xi: &BoundaryPoint<R>) -> R {
    let x2 = dot(&x.coords, &x.coords);
    if x2 == R::zero() {
        // |xi| = 1 up to rounding; the kernel is exactly 1 at the origin
        return R::one();
    }
    (R::one() - x2) / dist2(&x.coords, &xi.coords)
}

/// `d_x(xi, eta) = P(x,xi)^{1/2} P(x,eta)^{1/2} |xi - eta|`.
pub fn visual_metric<R: Real>(x: &BallPoint<R>, xi: &BoundaryPoint<R>, eta: &BoundaryPoint<R>) -> R {
    (poisson_kernel(x, xi) * poisson_kernel(x, eta)).sqrt() * dist2(&xi.coords, &eta.coords).sqrt()
}

/// Density `P(x, xi)^n` of the harmonic measure `nu_x` against `nu_0`.
pub fn harmonic_measure_density<R: Real>(x: &BallPoint<R>, xi: &BoundaryPoint<R>) -> R {
    poisson_kernel(x, xi).powi(x.n() as i32)
}

/// Uniform draw from `nu_0` with importance weight `P(x, xi)^n`.
pub fn sample_harmonic_measure<R: Real, G: Rng + ?Sized>(x: &BallPoint<R>, rng: &mut G) -> (BoundaryPoint<R>, R) {
    let xi = BoundaryPoint::random(x.n(), rng);
    let w = harmonic_measure_density(x, &xi);
    (xi, w)
}

pub fn hyperbolic_distance<R: Real>(x: &BallPoint<R>, y: &BallPoint<R>) -> R {
    let t = MoebiusMap::translation(y.clone());
    BallPoint { coords: t.apply_raw(&x.coords) }.rho()
}

/// `u_i(x, xi) = ((xi_i - x_i)(1 - |x|^2) - x_i |xi - x|^2) / |x - xi|^2`.
pub fn u_functions<R: Real>(x: &BallPoint<R>, xi: &BoundaryPoint<R>) -> Vec<R> {
    let x2 = dot(&x.coords, &x.coords);
    let d2 = dist2(&x.coords, &xi.coords);
    x.coords
        .iter()
        .zip(&xi.coords)
        .map(|(&xc, &c)| ((c - xc) * (R::one() - x2) - xc * d2) / d2)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn maps_and_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let g = MoebiusMap::<f64>::random(2, 0.8, &mut rng);
            let x = random_ball_point::<f64, _>(2, 0.9, &mut rng);
            let y = g.inverse().apply(&g.apply(&x).unwrap()).unwrap();
            for (a, b) in x.coords().iter().zip(y.coords()) {
                assert!((a - b).abs() < 1e-12);
            }
            assert!(g.apply(g.a()).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn hand_values() {
        let x = BallPoint::<f64>::new(vec![0.5, 0.0, 0.0]).unwrap();
        let xi = BoundaryPoint::<f64>::new(vec![1.0, 0.0, 0.0]).unwrap();
        assert!((poisson_kernel(&x, &xi) - 3.0).abs() < 1e-15);
        assert!((x.rho() - 3f64.ln()).abs() < 1e-15);
        assert!(BallPoint::new(vec![1.0, 0.0]).is_err());
        assert!(BoundaryPoint::new(vec![0.5, 0.5]).is_err());
        let f32_point = BallPoint::<f32>::new(vec![0.5, 0.0, 0.0]).unwrap();
        assert!((f32_point.rho() - 3f32.ln()).abs() < 1e-6);
    }
}
