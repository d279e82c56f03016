//! The hypersingular operator `Delta` on harmonic-measure spaces and the
//! potential term `H` of its gauge decomposition.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::ball::{poisson_kernel, BallPoint, BoundaryPoint};
use super::quadrature::gauss_jacobi;
use super::sphere::SphereGrid;

fn check_dims(grid: &SphereGrid, x: &BallPoint) -> Result<()> {
    if x.n() != grid.n() {
        return Err(Error::DimensionMismatch(format!("ball point in R^{} but grid on S^{}", x.n() + 1, grid.n())));
    }
    Ok(())
}

/// Nystrom evaluation of
/// `Delta f(xi) = int (f(xi) - f(eta)) / d_x(xi, eta)^n d nu_x(eta)`
/// at the grid nodes, against `nu_x = P^n nu_0`.
///
/// The difference `f(xi) - f(eta)` tames the kernel; the diagonal term is
/// dropped.
pub fn hypersingular_apply(f: &[f64], grid: &SphereGrid, x: &BallPoint) -> Result<Vec<f64>> {
    check_dims(grid, x)?;
    if f.len() != grid.len() {
        return Err(Error::DimensionMismatch(format!("{} samples on a {}-point grid", f.len(), grid.len())));
    }
    let n = grid.n() as i32;
    let pts = grid.points();
    let ph: Vec<f64> = pts.iter().map(|p| poisson_kernel(x, p).powf(n as f64 / 2.0)).collect();
    let w = grid.weight();
    let out = (0..pts.len())
        .map(|i| {
            let xi = pts[i].coords();
            let mut s = 0.0;
            for j in 0..pts.len() {
                if j == i {
                    continue;
                }
                let r2: f64 = xi.iter().zip(pts[j].coords()).map(|(a, b)| (a - b) * (a - b)).sum();
                let k = if n == 2 { r2 } else { r2.sqrt().powi(n) };
                s += (f[i] - f[j]) * ph[j] / k;
            }
            w * s / ph[i]
        })
        .collect();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NystromRun {
    pub grid_size: usize,
    pub values: Vec<f64>,
    pub fine_norm: f64,
    pub coarse_norm: f64,
    /// Richardson estimate of the relative error at the fine grid,
    /// assuming first order in the mesh width.
    pub convergence_estimate: f64,
}

/// `hypersingular_apply` on grids of `size` and `size / 2` nodes, failing
/// when the estimated relative error exceeds `tol`.
pub fn hypersingular_checked(
    f: impl Fn(&[f64]) -> f64,
    n: usize,
    size: usize,
    x: &BallPoint,
    tol: f64,
) -> Result<NystromRun> {
    let fine = SphereGrid::new(n, size)?;
    let coarse = SphereGrid::new(n, size / 2)?;
    let values = hypersingular_apply(&fine.sample(&f), &fine, x)?;
    let cvals = hypersingular_apply(&coarse.sample(&f), &coarse, x)?;
    let fine_norm = fine.norm(&values);
    let coarse_norm = coarse.norm(&cvals);
    // mesh width ratio sqrt(2) on S^2 and 2 on S^1
    let ratio = if n == 1 { 2.0 } else { 2f64.sqrt() };
    let diff = (fine_norm - coarse_norm).abs() / (ratio - 1.0);
    let convergence_estimate = if fine_norm > 1e-12 { diff / fine_norm } else { diff };
    if convergence_estimate > tol {
        return Err(Error::Domain(format!(
            "grid too coarse: estimated relative error {convergence_estimate:.3e} exceeds {tol:.1e} at {size} nodes"
        )));
    }
    Ok(NystromRun { grid_size: size, values, fine_norm, coarse_norm, convergence_estimate })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HQuadrature {
    pub radial: usize,
    pub angular: usize,
    pub tol: f64,
    /// Number of node doublings tried before giving up.
    pub max_refinements: usize,
}

impl Default for HQuadrature {
    fn default() -> Self {
        HQuadrature { radial: 16, angular: 16, tol: 1e-8, max_refinements: 6 }
    }
}

fn frame(xi: &[f64]) -> (Vec<f64>, Vec<f64>) {
    // any unit vector off xi, then Gram-Schmidt and a cross product
    let k = (0..3).min_by(|&a, &b| xi[a].abs().total_cmp(&xi[b].abs())).unwrap_or(0);
    let mut e = [0.0; 3];
    e[k] = 1.0;
    let d: f64 = e.iter().zip(xi).map(|(a, b)| a * b).sum();
    let mut e1: Vec<f64> = e.iter().zip(xi).map(|(a, b)| a - d * b).collect();
    let l = e1.iter().map(|v| v * v).sum::<f64>().sqrt();
    e1.iter_mut().for_each(|v| *v /= l);
    let e2 = vec![
        xi[1] * e1[2] - xi[2] * e1[1],
        xi[2] * e1[0] - xi[0] * e1[2],
        xi[0] * e1[1] - xi[1] * e1[0],
    ];
    (e1, e2)
}

fn delta0_rule(g: &dyn Fn(&[f64]) -> f64, xi: &[f64], radial: usize, angular: usize) -> Result<f64> {
    let (nodes, weights) = gauss_jacobi(radial, 0.0, 0.0)?;
    let g0 = g(xi);
    match xi.len() {
        2 => {
            // eta at angle theta on either side, d nu_0 = d theta / 2 pi
            let mut s = 0.0;
            for (u, w) in nodes.iter().zip(&weights) {
                let th = PI * (u + 1.0) / 2.0;
                let (c, sn) = (th.cos(), th.sin());
                let a = [c * xi[0] - sn * xi[1], sn * xi[0] + c * xi[1]];
                let b = [c * xi[0] + sn * xi[1], -sn * xi[0] + c * xi[1]];
                s += w * (2.0 * g0 - g(&a) - g(&b)) / (2.0 * (th / 2.0).sin());
            }
            Ok(s * (PI / 2.0) / (2.0 * PI))
        }
        3 => {
            // t = 1 - 2 s^2 turns the zonal marginal dt / 2 into 2 s ds
            let (e1, e2) = frame(xi);
            let mut s_acc = 0.0;
            for (u, w) in nodes.iter().zip(&weights) {
                let s = (u + 1.0) / 2.0;
                let t = 1.0 - 2.0 * s * s;
                let r = 2.0 * s * (1.0 - s * s).sqrt();
                let mut avg = 0.0;
                for k in 0..angular {
                    let ph = 2.0 * PI * k as f64 / angular as f64;
                    let (c, sn) = (ph.cos(), ph.sin());
                    let eta: Vec<f64> = (0..3).map(|i| t * xi[i] + r * (c * e1[i] + sn * e2[i])).collect();
                    avg += g0 - g(&eta);
                }
                avg /= angular as f64;
                s_acc += w / 2.0 * avg / (2.0 * s);
            }
            Ok(s_acc)
        }
        d => Err(Error::Domain(format!("quadrature for Delta_0 exists on S^1 and S^2 only, got R^{d}"))),
    }
}

/// `Delta_0 g(xi) = int (g(xi) - g(eta)) / |xi - eta|^n d nu_0(eta)` by
/// polar quadrature around `xi`, refined until two levels agree.
pub fn delta0_at(g: &dyn Fn(&[f64]) -> f64, xi: &BoundaryPoint, q: &HQuadrature) -> Result<f64> {
    let (mut r, mut a) = (q.radial, q.angular);
    let mut prev = delta0_rule(g, xi.coords(), r, a)?;
    for _ in 0..q.max_refinements {
        r *= 2;
        a *= 2;
        let next = delta0_rule(g, xi.coords(), r, a)?;
        if (next - prev).abs() <= q.tol * next.abs().max(1.0) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Domain(format!("Delta_0 quadrature did not converge at {r} radial nodes")))
}

/// `H(x, xi) = P(x,xi)^{n/2} Delta_0(P_x^{-n/2})(xi)`.
pub fn h_function(x: &BallPoint, xi: &BoundaryPoint, q: &HQuadrature) -> Result<f64> {
    let h = x.n() as f64 / 2.0;
    let g = |eta: &[f64]| poisson_at(x, eta).powf(-h);
    Ok(poisson_kernel(x, xi).powf(h) * delta0_at(&g, xi, q)?)
}

/// The potential that makes `v Delta v* = Delta_0 + H` hold for the
/// unitary `v f = P^{n/2} f` from `L^2(nu_x)` to `L^2(nu_0)`:
/// `-P^{-n/2} Delta_0(P^{n/2})`.
pub fn h_function_gauge(x: &BallPoint, xi: &BoundaryPoint, q: &HQuadrature) -> Result<f64> {
    let h = x.n() as f64 / 2.0;
    let g = |eta: &[f64]| poisson_at(x, eta).powf(h);
    Ok(-poisson_kernel(x, xi).powf(-h) * delta0_at(&g, xi, q)?)
}

fn poisson_at(x: &BallPoint, eta: &[f64]) -> f64 {
    let x2: f64 = x.coords().iter().map(|c| c * c).sum();
    if x2 == 0.0 {
        return 1.0;
    }
    let d2: f64 = x.coords().iter().zip(eta).map(|(a, b)| (a - b) * (a - b)).sum();
    (1.0 - x2) / d2
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeConsistency {
    pub grid_size: usize,
    /// Relative `L^2` gap between `P^{n/2} Delta (P^{-n/2} phi)` and
    /// `Delta_0 phi + H phi` with the gauge potential.
    pub rel_error_gauge: f64,
    /// The same gap with `h_function` in place of the gauge potential.
    pub rel_error_h_function: f64,
}

/// Two-path computation of `Delta` at `x` on the test function `phi`.
pub fn gauge_consistency(
    phi: impl Fn(&[f64]) -> f64,
    x: &BallPoint,
    grid: &SphereGrid,
    q: &HQuadrature,
) -> Result<GaugeConsistency> {
    check_dims(grid, x)?;
    let h = grid.n() as f64 / 2.0;
    let pts = grid.points();
    let p: Vec<f64> = pts.iter().map(|e| poisson_kernel(x, e).powf(h)).collect();
    let phi_v = grid.sample(&phi);
    let psi: Vec<f64> = phi_v.iter().zip(&p).map(|(f, p)| f / p).collect();
    let lhs: Vec<f64> = hypersingular_apply(&psi, grid, x)?.iter().zip(&p).map(|(v, p)| v * p).collect();
    let base = hypersingular_apply(&phi_v, grid, &BallPoint::origin(grid.n()))?;
    let mut gap_gauge = Vec::with_capacity(pts.len());
    let mut gap_h = Vec::with_capacity(pts.len());
    for (i, e) in pts.iter().enumerate() {
        let hg = h_function_gauge(x, e, q)?;
        let hf = h_function(x, e, q)?;
        gap_gauge.push(lhs[i] - base[i] - hg * phi_v[i]);
        gap_h.push(lhs[i] - base[i] - hf * phi_v[i]);
    }
    let scale = grid.norm(&lhs).max(1e-300);
    Ok(GaugeConsistency {
        grid_size: grid.len(),
        rel_error_gauge: grid.norm(&gap_gauge) / scale,
        rel_error_h_function: grid.norm(&gap_h) / scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta0_on_harmonics() {
        let q = HQuadrature::default();
        let xi = BoundaryPoint::normalized(vec![0.3, -0.4, 0.8]).unwrap();
        // degree 1 on S^2 has multiplier 1/2
        let v = delta0_at(&|e: &[f64]| e[2], &xi, &q).unwrap();
        assert!((v - 0.5 * xi.coords()[2]).abs() < 1e-10);
        let c = BoundaryPoint::normalized(vec![0.6, 0.8]).unwrap();
        // degree 1 on S^1 has multiplier 2 / pi
        let v = delta0_at(&|e: &[f64]| e[0], &c, &q).unwrap();
        assert!((v - 0.6 * 2.0 / PI).abs() < 1e-10);
    }

    #[test]
    fn h_vanishes_at_origin() {
        let q = HQuadrature::default();
        let xi = BoundaryPoint::normalized(vec![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(h_function(&BallPoint::origin(2), &xi, &q).unwrap(), 0.0);
    }
}
