//! The boundary identity suite, multiplier tables, and the report that
//! collects them with the discrepancy flags.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::Result;
use crate::io::report::Flag;

use super::ball::{
    poisson_kernel, random_ball_point, sample_harmonic_measure, u_functions, visual_metric, BallPoint, BoundaryPoint,
    MoebiusMap,
};
use super::experiments::{
    harmonic_extension_limit, localized_s_spectrum, riesz_constancy, shadow_experiment, stream_rng,
    HarmonicExtensionReport, MonteCarloEstimate, RieszReport, ShadowReport, SpectrumTable,
};
use super::operators::{gauge_consistency, hypersingular_apply, GaugeConsistency, HQuadrature};
use super::quadrature::{
    funk_hecke_multiplier, multiplier_closed_form, multiplier_gauss_jacobi, riesz_origin_quadrature, zonal,
    ClosedFormReport,
};
use super::sphere::SphereGrid;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub poisson_origin_exact: bool,
    /// Relative error of `P(gx, g xi) = |g'(xi)|^{-1} P(x, xi)`.
    pub poisson_transform_max: f64,
    /// Relative error of `d_{gx}(g xi, g eta) = d_x(xi, eta)`.
    pub visual_invariance_max: f64,
    pub triangle_violations: usize,
    /// `|sum u_i^2 - 1|`.
    pub u_norm_max: f64,
    /// Error of `sum (u_i(xi) - u_i(eta))^2 = d_x(xi, eta)^2`, relative
    /// to `max(1, d_x^2)`.
    pub u_metric_max: f64,
    pub harmonic_mass: MonteCarloEstimate,
}

impl IdentityReport {
    pub fn passes(&self, tol_transform: f64, tol_u_norm: f64) -> bool {
        self.poisson_origin_exact
            && self.poisson_transform_max <= tol_transform
            && self.visual_invariance_max <= tol_transform
            && self.u_norm_max <= tol_u_norm
            && self.u_metric_max <= tol_transform
            && self.triangle_violations == 0
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

/// Poisson, visual-metric and `u`-function identities on random data.
pub fn identity_suite(n: usize, samples: usize, seed: u64) -> Result<IdentityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let origin = BallPoint::origin(n);
    let mut report = IdentityReport {
        n,
        samples,
        seed,
        poisson_origin_exact: true,
        poisson_transform_max: 0.0,
        visual_invariance_max: 0.0,
        triangle_violations: 0,
        u_norm_max: 0.0,
        u_metric_max: 0.0,
        harmonic_mass: MonteCarloEstimate { value: 0.0, stderr: 0.0, samples: 0, seed },
    };
    for _ in 0..samples {
        let g = MoebiusMap::random(n, 0.8, &mut rng);
        let x: BallPoint = random_ball_point(n, 0.9, &mut rng);
        let xi = BoundaryPoint::random(n, &mut rng);
        let eta = BoundaryPoint::random(n, &mut rng);
        let zeta = BoundaryPoint::random(n, &mut rng);
        if poisson_kernel(&origin, &xi) != 1.0 {
            report.poisson_origin_exact = false;
        }
        let gx = g.apply(&x)?;
        let (gxi, geta) = (g.apply_boundary(&xi), g.apply_boundary(&eta));
        let lhs = poisson_kernel(&gx, &gxi);
        let rhs = poisson_kernel(&x, &xi) / g.conformal_factor(xi.coords());
        report.poisson_transform_max = report.poisson_transform_max.max(rel(lhs, rhs));
        let d = visual_metric(&x, &xi, &eta);
        report.visual_invariance_max = report.visual_invariance_max.max(rel(visual_metric(&gx, &gxi, &geta), d));
        let (a, b) = (visual_metric(&x, &xi, &zeta), visual_metric(&x, &zeta, &eta));
        if d > (a + b) * (1.0 + 1e-12) {
            report.triangle_violations += 1;
        }
        let (u, v) = (u_functions(&x, &xi), u_functions(&x, &eta));
        let norm: f64 = u.iter().map(|c| c * c).sum();
        report.u_norm_max = report.u_norm_max.max((norm - 1.0).abs());
        let gap: f64 = u.iter().zip(&v).map(|(a, b)| (a - b) * (a - b)).sum();
        report.u_metric_max = report.u_metric_max.max((gap - d * d).abs() / (d * d).max(1.0));
    }
    let mut mass_rng = stream_rng(seed, 1);
    let x: BallPoint = random_ball_point(n, 0.5, &mut mass_rng);
    let draws: Vec<f64> = (0..samples).map(|_| sample_harmonic_measure(&x, &mut mass_rng).1).collect();
    report.harmonic_mass = MonteCarloEstimate::from_draws(&draws, seed);
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplierReport {
    pub n: usize,
    /// The defining integral, by Gauss-Jacobi quadrature.
    pub gauss_jacobi: Vec<f64>,
    /// Eigenvalues of `Delta_0` against the probability measure `nu_0`.
    pub funk_hecke: Vec<f64>,
    pub closed_form: Vec<ClosedFormReport>,
    pub positive: bool,
    pub nondecreasing: bool,
    /// Consecutive modes with equal multipliers.
    pub ties: Vec<usize>,
}

pub fn multiplier_report(n: usize, max_m: usize) -> Result<MultiplierReport> {
    let gj = (0..=max_m).map(|m| multiplier_gauss_jacobi(m, n)).collect::<Result<Vec<_>>>()?;
    let fh = (0..=max_m).map(|m| funk_hecke_multiplier(m, n)).collect::<Result<Vec<_>>>()?;
    let closed_form = (1..=max_m).map(|m| multiplier_closed_form(m, n)).collect::<Result<Vec<_>>>()?;
    let ties = (1..max_m).filter(|&m| (gj[m + 1] - gj[m]).abs() <= 1e-12 * gj[m]).collect();
    Ok(MultiplierReport {
        n,
        positive: gj[0] == 0.0 && gj[1..].iter().all(|&v| v > 0.0),
        nondecreasing: gj.windows(2).all(|w| w[1] >= w[0] - 1e-12 * w[0].abs()),
        gauss_jacobi: gj,
        funk_hecke: fh,
        closed_form,
        ties,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenRow {
    pub m: usize,
    /// `<Delta f, f> / <f, f>` on the grid.
    pub rayleigh: f64,
    pub gauss_jacobi: f64,
    pub funk_hecke: f64,
    /// `|Delta f - lambda f| / |lambda f|` with the quadrature multiplier.
    pub rel_error_gauss_jacobi: f64,
    /// The same with the Funk-Hecke eigenvalue.
    pub rel_error_funk_hecke: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenrelationReport {
    pub n: usize,
    pub grid_size: usize,
    /// `|Delta 1|` on the grid.
    pub constant_residual: f64,
    pub rows: Vec<EigenRow>,
}

/// Nystrom `Delta` at the origin on zonal harmonics about a tilted axis.
pub fn eigenrelation_at_origin(n: usize, grid_size: usize, max_m: usize) -> Result<EigenrelationReport> {
    let grid = SphereGrid::new(n, grid_size)?;
    let x = BallPoint::origin(n);
    let axis: Vec<f64> = {
        let raw: Vec<f64> = (0..=n).map(|i| 0.3 + 0.25 * i as f64).collect();
        let l = raw.iter().map(|c| c * c).sum::<f64>().sqrt();
        raw.into_iter().map(|c| c / l).collect()
    };
    let ones = vec![1.0; grid.len()];
    let constant_residual = grid.norm(&hypersingular_apply(&ones, &grid, &x)?);
    let mut rows = Vec::new();
    for m in 1..=max_m {
        let f = grid.sample(|p| zonal(m, n, p.iter().zip(&axis).map(|(a, b)| a * b).sum()));
        let out = hypersingular_apply(&f, &grid, &x)?;
        let ff: f64 = f.iter().map(|v| v * v).sum();
        let rayleigh = out.iter().zip(&f).map(|(a, b)| a * b).sum::<f64>() / ff;
        let err = |lam: f64| {
            let gap: Vec<f64> = out.iter().zip(&f).map(|(o, v)| o - lam * v).collect();
            grid.norm(&gap) / (lam.abs() * grid.norm(&f))
        };
        let gj = if n >= 2 { multiplier_gauss_jacobi(m, n)? } else { f64::NAN };
        let fh = funk_hecke_multiplier(m, n)?;
        rows.push(EigenRow {
            m,
            rayleigh,
            gauss_jacobi: gj,
            funk_hecke: fh,
            rel_error_gauss_jacobi: err(gj),
            rel_error_funk_hecke: err(fh),
        });
    }
    Ok(EigenrelationReport { n, grid_size, constant_residual, rows })
}

/// Items where a formula taken as stated disagrees with an independent
/// computation. They are reported and never fail a run.
pub fn discrepancy_flags(
    multipliers: &MultiplierReport,
    shadows: &[ShadowReport],
    eigen: Option<&EigenrelationReport>,
    gauge: Option<&GaugeConsistency>,
) -> Vec<Flag> {
    let mut flags = Vec::new();
    let bad_cf: Vec<&ClosedFormReport> = multipliers.closed_form.iter().filter(|c| !c.agrees).collect();
    if !bad_cf.is_empty() {
        flags.push(Flag {
            id: "multiplier_closed_form".into(),
            summary: "summation formula for lambda_m disagrees with the defining integral".into(),
            values: json!(bad_cf
                .iter()
                .map(|c| json!({"m": c.m, "n": c.n, "closed_form": c.closed_form, "integral": c.gauss_jacobi}))
                .collect::<Vec<_>>()),
        });
    }
    let bad_bound: Vec<&ClosedFormReport> = multipliers.closed_form.iter().filter(|c| !c.bound_holds).collect();
    if !bad_bound.is_empty() {
        flags.push(Flag {
            id: "multiplier_bound".into(),
            summary: "lower bound 2^alpha (2^m - 1) exceeds the defining integral".into(),
            values: json!(bad_bound
                .iter()
                .map(|c| json!({"m": c.m, "n": c.n, "bound": c.bound, "integral": c.gauss_jacobi}))
                .collect::<Vec<_>>()),
        });
    }
    if !multipliers.ties.is_empty() {
        flags.push(Flag {
            id: "multiplier_monotonicity".into(),
            summary: "consecutive multipliers coincide, so the sequence is not strictly increasing".into(),
            values: json!(multipliers
                .ties
                .iter()
                .map(|&m| json!({"m": m, "lambda_m": multipliers.gauss_jacobi[m], "lambda_m_plus_1": multipliers.gauss_jacobi[m + 1]}))
                .collect::<Vec<_>>()),
        });
    }
    let literal: Vec<&ShadowReport> = shadows.iter().filter(|s| !s.literal_lower_holds).collect();
    if !literal.is_empty() {
        flags.push(Flag {
            id: "shadow_lower_bound_reading".into(),
            summary: "e^{-r} e^{d} <= d_x(xi, eta) fails on the shadow; the measured diameter scales like e^{-d}".into(),
            values: json!(literal
                .iter()
                .map(|s| json!({
                    "distance": s.distance, "r": s.r,
                    "literal_lower": s.literal_lower, "observed_min_pairwise": s.min_pairwise,
                    "literal_upper": s.literal_upper, "observed_diameter": s.diameter,
                    "diameter_times_e_d": s.diameter_ratio, "measure_times_e_nd": s.measure_ratio,
                }))
                .collect::<Vec<_>>()),
        });
    }
    if let Some(e) = eigen {
        let off: Vec<&EigenRow> = e.rows.iter().filter(|r| r.rel_error_gauss_jacobi > 1e-2).collect();
        if !off.is_empty() {
            flags.push(Flag {
                id: "multiplier_eigenrelation".into(),
                summary: "Nystrom Delta_0 at the origin does not have the integral lambda_m as eigenvalue".into(),
                values: json!(off
                    .iter()
                    .map(|r| json!({"m": r.m, "rayleigh": r.rayleigh, "integral": r.gauss_jacobi, "funk_hecke": r.funk_hecke}))
                    .collect::<Vec<_>>()),
            });
        }
    }
    if let Some(g) = gauge {
        if g.rel_error_h_function > 1e-2 {
            flags.push(Flag {
                id: "h_function_gauge".into(),
                summary: "P^{n/2} Delta_0(P^{-n/2}) is not the potential of the gauge decomposition".into(),
                values: json!({"rel_error_h_function": g.rel_error_h_function, "rel_error_gauge_potential": g.rel_error_gauge}),
            });
        }
    }
    flags
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub n: usize,
    pub seed: u64,
    pub samples: usize,
    pub grid_size: usize,
    pub riesz_samples: usize,
    pub riesz_points: usize,
    pub shadow_samples: usize,
    pub max_mode: usize,
    pub tol: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            n: 2,
            seed: 20_240_601,
            samples: 100_000,
            grid_size: 5000,
            riesz_samples: 100_000,
            riesz_points: 10,
            shadow_samples: 20_000,
            max_mode: 25,
            tol: 1e-9,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub identities: IdentityReport,
    pub multipliers: MultiplierReport,
    pub eigenrelation: EigenrelationReport,
    pub riesz: Vec<RieszReport>,
    pub riesz_origin_quadrature: Vec<f64>,
    pub shadows: Vec<ShadowReport>,
    pub extension: HarmonicExtensionReport,
    pub spectrum: SpectrumTable,
    pub gauge: GaugeConsistency,
    /// Checks that decide the outcome of the run.
    pub hard_pass: bool,
    pub flags: Vec<Flag>,
}

/// Runs every boundary experiment for `n = 2` and collects the results.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    let n = config.n;
    let identities = identity_suite(n, config.samples, config.seed)?;
    let multipliers = multiplier_report(n, config.max_mode)?;
    let eigenrelation = eigenrelation_at_origin(n, config.grid_size, 4)?;
    let ss = [0.5, 1.0, 1.5];
    let riesz = ss
        .iter()
        .enumerate()
        .map(|(k, &s)| riesz_constancy(n, s, config.riesz_points, config.riesz_samples, config.seed + 100 * k as u64))
        .collect::<Result<Vec<_>>>()?;
    let riesz_origin_quadrature = ss.iter().map(|&s| riesz_origin_quadrature(s, n)).collect::<Result<Vec<_>>>()?;
    let x = BallPoint::origin(n);
    let axis = BoundaryPoint::normalized((0..=n).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect())?;
    let shadows = [2.0, 3.0, 4.0, 5.0]
        .iter()
        .enumerate()
        .map(|(k, &d)| shadow_experiment(&x, &BallPoint::at_distance(&axis, d)?, 1.0, config.shadow_samples, config.seed + k as u64))
        .collect::<Result<Vec<_>>>()?;
    let coarse = SphereGrid::new(n, config.grid_size)?;
    let f = |p: &[f64]| p[0] + 0.5 * p[1].abs();
    let xi = BoundaryPoint::normalized((0..=n).map(|i| 0.4 + 0.1 * i as f64).collect())?;
    let extension = harmonic_extension_limit(&f, &xi, &[0.9, 0.99, 0.999], &coarse)?;
    let spectrum = localized_s_spectrum(&[0.0, 0.3, 0.6, 0.9], config.max_mode, n, 64)?;
    let small = SphereGrid::new(n, config.grid_size.min(2000))?;
    let mut gx = vec![0.0; n + 1];
    gx[0] = 0.3;
    gx[1] = -0.2;
    let gauge = gauge_consistency(|p: &[f64]| p[n] + p[0] * p[1], &BallPoint::new(gx)?, &small, &HQuadrature::default())?;

    let riesz_ok = riesz.iter().all(|r| r.max_pairwise_z < 3.0);
    let eigen_ok = eigenrelation.rows.iter().all(|r| r.rel_error_funk_hecke < 1e-2);
    let hard_pass = identities.passes(config.tol, config.tol.min(1e-10))
        && multipliers.positive
        && multipliers.nondecreasing
        && eigen_ok
        && riesz_ok
        && extension.monotone
        && spectrum.projection_block_exact
        && spectrum.divergent_trend
        && gauge.rel_error_gauge < 1e-2;
    let flags = discrepancy_flags(&multipliers, &shadows, Some(&eigenrelation), Some(&gauge));
    Ok(SuiteReport {
        config: config.clone(),
        identities,
        multipliers,
        eigenrelation,
        riesz,
        riesz_origin_quadrature,
        shadows,
        extension,
        spectrum,
        gauge,
        hard_pass,
        flags,
    })
}
