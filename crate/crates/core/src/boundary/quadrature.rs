//! Gauss-Jacobi quadrature and the spherical multipliers of the
//! hypersingular operator.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Eigenvalues of a symmetric tridiagonal matrix and the first component
/// of each normalized eigenvector, by the implicit QL method.
pub fn tridiagonal_eigen(diag: &[f64], off: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    if off.len() + 1 != n.max(1) {
        return Err(Error::DimensionMismatch("off-diagonal length".into()));
    }
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    // z[i][k]: component i of eigenvector k
    let mut z = vec![vec![0.0; n]; n];
    for (i, row) in z.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Domain("QL iteration did not converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut early = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for row in z.iter_mut() {
                    let f2 = row[i + 1];
                    row[i + 1] = s * row[i] + c * f2;
                    row[i] = c * row[i] - s * f2;
                }
            }
            if early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok((d, z[0].clone()))
}

/// Total mass `int (1-t)^a (1+t)^b dt` over `[-1, 1]`.
pub fn jacobi_mass(a: f64, b: f64) -> f64 {
    ((a + b + 1.0) * std::f64::consts::LN_2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0) - ln_gamma(a + b + 2.0)).exp()
}

/// `k`-point Gauss rule for the weight `(1-t)^a (1+t)^b` on `[-1, 1]`,
/// nodes ascending.
pub fn gauss_jacobi(k: usize, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if k == 0 || a <= -1.0 || b <= -1.0 {
        return Err(Error::Domain(format!("Gauss-Jacobi needs k >= 1, a, b > -1 (k={k}, a={a}, b={b})")));
    }
    let ab = a + b;
    let diag: Vec<f64> = (0..k)
        .map(|j| {
            let j = j as f64;
            if j == 0.0 {
                (b - a) / (ab + 2.0)
            } else {
                (b * b - a * a) / ((2.0 * j + ab) * (2.0 * j + ab + 2.0))
            }
        })
        .collect();
    let off: Vec<f64> = (1..k)
        .map(|j| {
            let j = j as f64;
            let v = if j == 1.0 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                let s = 2.0 * j + ab;
                4.0 * j * (j + a) * (j + b) * (j + ab) / (s * s * (s + 1.0) * (s - 1.0))
            };
            v.sqrt()
        })
        .collect();
    let (nodes, first) = tridiagonal_eigen(&diag, &off)?;
    let mu0 = jacobi_mass(a, b);
    let mut pairs: Vec<(f64, f64)> = nodes.into_iter().zip(first).map(|(t, v)| (t, mu0 * v * v)).collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(pairs.into_iter().unzip())
}

fn binom(n: u64, k: u64) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Integer coefficients of `2^m P_m(t)`, constant term first.
pub fn legendre_scaled(m: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); m + 1];
    for k in 0..=m / 2 {
        let v = binom(m as u64, k as u64) * binom((2 * m - 2 * k) as u64, m as u64);
        c[m - 2 * k] = if k % 2 == 0 { v } else { -v };
    }
    c
}

/// Exact quotient `2^m (1 - P_m(t)) / (1 - t)`, constant term first.
pub fn legendre_quotient(m: usize) -> Result<Vec<BigInt>> {
    if m == 0 {
        return Ok(Vec::new());
    }
    let mut num: Vec<BigInt> = legendre_scaled(m).into_iter().map(|c| -c).collect();
    num[0] += BigInt::one() << m;
    // divide by (t - 1) from the top, then negate for (1 - t)
    let deg = num.len() - 1;
    let mut q = vec![BigInt::zero(); deg];
    let mut carry = BigInt::zero();
    for i in (1..=deg).rev() {
        carry = &num[i] + carry;
        q[i - 1] = carry.clone();
    }
    if !(&num[0] + carry).is_zero() {
        return Err(Error::Invariant("1 - P_m does not vanish at t = 1".into()));
    }
    Ok(q.into_iter().map(|c| -c).collect())
}

/// Evaluate an integer polynomial exactly at a float, rounding once.
fn eval_exact(p: &[BigInt], t: f64) -> f64 {
    let x = BigRational::from_float(t).expect("finite node");
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * &x + BigRational::from_integer(c.clone());
    }
    acc.to_f64().expect("finite value")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MultiplierMethod {
    GaussJacobi,
    ClosedForm,
}

/// `lambda_m = int (1+t)^{(n-3)/2} (1-t)^{-1} (1 - P_m(t)) dt`, by exact
/// division followed by Gauss-Jacobi quadrature in the weight `(1+t)^alpha`.
pub fn multiplier_gauss_jacobi(m: usize, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain("multiplier formula needs n >= 2".into()));
    }
    if m == 0 {
        return Ok(0.0);
    }
    let alpha = (n as f64 - 3.0) / 2.0;
    let q = legendre_quotient(m)?;
    let (nodes, weights) = gauss_jacobi(m.div_ceil(2) + 2, 0.0, alpha)?;
    let s: f64 = nodes.iter().zip(&weights).map(|(&t, &w)| w * eval_exact(&q, t)).sum();
    Ok(s / 2f64.powi(m as i32))
}

/// Transcription of the summation formula
/// `2^alpha sum_{k=1}^m C(m,k) C(m+k,k) (k-1)! / ((alpha+1)...(alpha+k-1))`.
pub fn multiplier_closed_form_value(m: usize, n: usize) -> f64 {
    let alpha = (n as f64 - 3.0) / 2.0;
    let mut s = 0.0;
    for k in 1..=m {
        let c = (binom(m as u64, k as u64) * binom((m + k) as u64, k as u64)).to_f64().unwrap_or(f64::INFINITY);
        let mut ratio = 1.0;
        for j in 1..k {
            ratio *= j as f64 / (alpha + j as f64);
        }
        s += c * ratio;
    }
    2f64.powf(alpha) * s
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormReport {
    pub m: usize,
    pub n: usize,
    pub closed_form: f64,
    pub gauss_jacobi: f64,
    pub abs_difference: f64,
    /// The lower bound `2^alpha (2^m - 1)`.
    pub bound: f64,
    pub bound_holds: bool,
    pub agrees: bool,
}

/// Closed form and lower bound against the quadrature value.
pub fn multiplier_closed_form(m: usize, n: usize) -> Result<ClosedFormReport> {
    let gj = multiplier_gauss_jacobi(m, n)?;
    let alpha = (n as f64 - 3.0) / 2.0;
    let (cf, bound) = if m == 0 {
        (0.0, 0.0)
    } else {
        (multiplier_closed_form_value(m, n), 2f64.powf(alpha) * (2f64.powi(m as i32) - 1.0))
    };
    let diff = (cf - gj).abs();
    Ok(ClosedFormReport {
        m,
        n,
        closed_form: cf,
        gauss_jacobi: gj,
        abs_difference: diff,
        bound,
        bound_holds: gj >= bound - 1e-12,
        agrees: diff <= 1e-9 * gj.abs().max(1.0),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphericalMultiplier {
    pub n: usize,
    pub alpha: f64,
    pub values: Vec<f64>,
    pub method: MultiplierMethod,
}

impl SphericalMultiplier {
    pub fn compute(n: usize, max_m: usize, method: MultiplierMethod) -> Result<Self> {
        let values = (0..=max_m)
            .map(|m| match method {
                MultiplierMethod::GaussJacobi => multiplier_gauss_jacobi(m, n),
                MultiplierMethod::ClosedForm => Ok(if m == 0 { 0.0 } else { multiplier_closed_form_value(m, n) }),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SphericalMultiplier { n, alpha: (n as f64 - 3.0) / 2.0, values, method })
    }

    /// `lambda_0 = 0` and `lambda_m > 0` afterwards.
    pub fn check(&self) -> bool {
        self.values.first() == Some(&0.0) && self.values.iter().skip(1).all(|&v| v > 0.0)
    }
}

/// Zonal polynomial of degree `m` on `S^n`, normalized to 1 at `t = 1`:
/// Chebyshev for `n = 1`, Gegenbauer `C^{(n-1)/2}_m` otherwise.
pub fn zonal(m: usize, n: usize, t: f64) -> f64 {
    let lam = (n as f64 - 1.0) / 2.0;
    let raw = |t: f64| {
        if m == 0 {
            return 1.0;
        }
        let (mut p0, mut p1) = (1.0, if lam == 0.0 { t } else { 2.0 * lam * t });
        for k in 1..m {
            let k = k as f64;
            let p2 = if lam == 0.0 {
                2.0 * t * p1 - p0
            } else {
                (2.0 * (k + lam) * t * p1 - (k + 2.0 * lam - 1.0) * p0) / (k + 1.0)
            };
            p0 = p1;
            p1 = p2;
        }
        p1
    };
    raw(t) / raw(1.0)
}

/// Eigenvalue of `f -> int (f(xi) - f(eta)) / |xi - eta|^n d nu_0(eta)` on
/// degree-`m` harmonics, by the Funk-Hecke formula against the normalized
/// round measure.
pub fn funk_hecke_multiplier(m: usize, n: usize) -> Result<f64> {
    if n < 1 {
        return Err(Error::Domain("sphere dimension must be positive".into()));
    }
    if m == 0 {
        return Ok(0.0);
    }
    let nf = n as f64;
    let b = (nf - 2.0) / 2.0;
    // zonal marginal of nu_0 is c_n (1 - t^2)^{(n-2)/2} dt
    let c_n = 1.0 / jacobi_mass(b, b);
    let (nodes, weights) = gauss_jacobi(m.div_ceil(2) + 2, 0.0, b)?;
    let s: f64 = nodes
        .iter()
        .zip(&weights)
        .map(|(&t, &w)| w * (1.0 - zonal(m, n, t)) / (1.0 - t))
        .sum();
    Ok(c_n * 2f64.powf(-nf / 2.0) * s)
}

/// `I_s` at the origin: `int |xi - eta|^{-(n-s)} d nu_0(eta)` by
/// Gauss-Jacobi quadrature in the polar variable.
pub fn riesz_origin_quadrature(s: f64, n: usize) -> Result<f64> {
    let nf = n as f64;
    if !(s > 0.0 && s < nf) {
        return Err(Error::Domain(format!("Riesz exponent s = {s} outside (0, {n})")));
    }
    let b = (nf - 2.0) / 2.0;
    let a = b - (nf - s) / 2.0;
    let (_, weights) = gauss_jacobi(4, a, b)?;
    let c_n = 1.0 / jacobi_mass(b, b);
    Ok(c_n * 2f64.powf(-(nf - s) / 2.0) * weights.iter().sum::<f64>())
}

/// Largest relative difference, for reports.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Whether an integer polynomial is exactly the zero polynomial.
pub fn is_zero_poly(p: &[BigInt]) -> bool {
    p.iter().all(|c| c.is_zero() || c.abs().is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_exactness() {
        let (x, w) = gauss_jacobi(5, 0.0, 0.0).unwrap();
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        let m8: f64 = x.iter().zip(&w).map(|(t, w)| w * t.powi(8)).sum();
        assert!((m8 - 2.0 / 9.0).abs() < 1e-14);
        // half-integer weight
        let (x, w) = gauss_jacobi(4, 0.0, -0.5).unwrap();
        let m1: f64 = x.iter().zip(&w).map(|(t, w)| w * (1.0 + t)).sum();
        assert!((m1 - 2f64.powf(1.5) / 1.5).abs() < 1e-13);
    }

    #[test]
    fn legendre_division() {
        assert_eq!(legendre_scaled(2), vec![BigInt::from(-2), BigInt::zero(), BigInt::from(6)]);
        // 4 (1 - P_2) / (1 - t) = 6 (1 + t)
        assert_eq!(legendre_quotient(2).unwrap(), vec![BigInt::from(6), BigInt::from(6)]);
        assert!(legendre_quotient(25).is_ok());
    }

    #[test]
    fn funk_hecke_values() {
        // n = 2: harmonic numbers over two
        for (m, h) in [(1, 1.0), (2, 1.5), (3, 11.0 / 6.0)] {
            assert!((funk_hecke_multiplier(m, 2).unwrap() - h / 2.0).abs() < 1e-13);
        }
        assert!((riesz_origin_quadrature(1.0, 2).unwrap() - 1.0).abs() < 1e-13);
        assert!((zonal(3, 1, 0.3) - (3.0 * 0.3f64.acos()).cos()).abs() < 1e-14);
    }
}
