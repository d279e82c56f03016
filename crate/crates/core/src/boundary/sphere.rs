//! Quasi-uniform point sets on `S^1` and `S^2` carrying equal weights.

use std::f64::consts::PI;

use crate::error::{Error, Result};

use super::ball::BoundaryPoint;

#[derive(Clone, Debug)]
pub struct SphereGrid {
    n: usize,
    points: Vec<BoundaryPoint>,
}

impl SphereGrid {
    /// Equally spaced angles on `S^1`, Fibonacci lattice on `S^2`.
    pub fn new(n: usize, size: usize) -> Result<Self> {
        if size < 2 {
            return Err(Error::Domain(format!("sphere grid needs at least 2 points, got {size}")));
        }
        let points = match n {
            1 => (0..size)
                .map(|i| {
                    let th = 2.0 * PI * (i as f64 + 0.5) / size as f64;
                    BoundaryPoint::normalized(vec![th.cos(), th.sin()])
                })
                .collect::<Result<Vec<_>>>()?,
            2 => {
                let golden = PI * (3.0 - 5f64.sqrt());
                (0..size)
                    .map(|i| {
                        let z = 1.0 - (2.0 * i as f64 + 1.0) / size as f64;
                        let r = (1.0 - z * z).sqrt();
                        let ph = golden * i as f64;
                        BoundaryPoint::normalized(vec![r * ph.cos(), r * ph.sin(), z])
                    })
                    .collect::<Result<Vec<_>>>()?
            }
            _ => return Err(Error::Domain(format!("sphere grids exist for n = 1, 2 only, got n = {n}"))),
        };
        Ok(SphereGrid { n, points })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[BoundaryPoint] {
        &self.points
    }

    /// Equal quadrature weight of each node.
    pub fn weight(&self) -> f64 {
        1.0 / self.points.len() as f64
    }

    pub fn sample(&self, f: impl Fn(&[f64]) -> f64) -> Vec<f64> {
        self.points.iter().map(|p| f(p.coords())).collect()
    }

    /// Mean of `f` over the nodes.
    pub fn integrate(&self, f: impl Fn(&[f64]) -> f64) -> f64 {
        self.points.iter().map(|p| f(p.coords())).sum::<f64>() * self.weight()
    }

    /// Weighted `L^2` norm of grid values.
    pub fn norm(&self, v: &[f64]) -> f64 {
        (v.iter().map(|x| x * x).sum::<f64>() * self.weight()).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_moments() {
        let g = SphereGrid::new(2, 2000).unwrap();
        assert!(g.integrate(|p| p[2]).abs() < 1e-12);
        assert!((g.integrate(|p| p[0] * p[0]) - 1.0 / 3.0).abs() < 1e-3);
        let c = SphereGrid::new(1, 64).unwrap();
        assert!((c.integrate(|p| p[0] * p[0]) - 0.5).abs() < 1e-12);
        assert!(SphereGrid::new(3, 10).is_err());
    }
}
