//! Monte Carlo and deterministic experiments on the boundary sphere.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta as BetaLaw, ContinuousCDF};
use statrs::function::beta::{beta_reg, ln_beta};

use crate::error::{Error, Result};

use super::ball::{poisson_kernel, random_ball_point, BallPoint, BoundaryPoint, MoebiusMap};
use super::operators::{h_function, HQuadrature};
use super::quadrature::multiplier_gauss_jacobi;
use super::sphere::SphereGrid;

/// Independent stream `stream` of the generator seeded by `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
}

impl MonteCarloEstimate {
    /// Mean and `sd / sqrt(N)` of the draws.
    pub fn from_draws(draws: &[f64], seed: u64) -> Self {
        let n = draws.len();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = if n > 1 {
            draws.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        MonteCarloEstimate { value: mean, stderr: (var / n as f64).sqrt(), samples: n, seed }
    }

    /// `|a - b| / sqrt(sa^2 + sb^2)`, with the denominator floored at the
    /// rounding level of the values so constant draws compare sensibly.
    pub fn z_score(&self, other: &Self) -> f64 {
        let diff = (self.value - other.value).abs();
        let floor = 1e-12 * self.value.abs().max(other.value.abs()).max(1.0);
        diff / self.stderr.hypot(other.stderr).max(floor)
    }
}

fn unit_perp<G: Rng + ?Sized>(zeta: &[f64], rng: &mut G) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = zeta.iter().map(|_| rng.sample(StandardNormal)).collect();
        let d: f64 = v.iter().zip(zeta).map(|(a, b)| a * b).sum();
        v.iter_mut().zip(zeta).for_each(|(a, b)| *a -= d * b);
        let l = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if l > 1e-8 {
            return v.into_iter().map(|a| a / l).collect();
        }
    }
}

/// Point at polar coordinate `t = zeta . eta` around `zeta`.
fn polar_point<G: Rng + ?Sized>(zeta: &[f64], t: f64, rng: &mut G) -> Result<BoundaryPoint> {
    let w = unit_perp(zeta, rng);
    let r = (1.0 - t * t).max(0.0).sqrt();
    BoundaryPoint::normalized(zeta.iter().zip(&w).map(|(z, w)| t * z + r * w).collect())
}

/// `I_s(x, xi) = int d_x(xi, eta)^{-(n-s)} d nu_x(eta)`.
///
/// Proposal: `|xi - eta|^2 / 4 ~ Beta(s/2, n/2)`, which has density
/// `|xi - eta|^{s-n} / I_0` against `nu_0`, so every weight is bounded.
pub fn riesz_potential(s: f64, x: &BallPoint, xi: &BoundaryPoint, samples: usize, seed: u64) -> Result<MonteCarloEstimate> {
    let draws = riesz_draws(s, x, xi, samples, &mut ChaCha8Rng::seed_from_u64(seed))?;
    Ok(MonteCarloEstimate::from_draws(&draws, seed))
}

fn riesz_draws(s: f64, x: &BallPoint, xi: &BoundaryPoint, samples: usize, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    let n = x.n() as f64;
    if !(s > 0.0 && s < n) {
        return Err(Error::Domain(format!("Riesz exponent s = {s} outside (0, {n})")));
    }
    if samples == 0 {
        return Err(Error::Domain("no samples requested".into()));
    }
    let i0 = ((s - n) * std::f64::consts::LN_2 + ln_beta(s / 2.0, n / 2.0) - ln_beta(n / 2.0, n / 2.0)).exp();
    let beta = Beta::new(s / 2.0, n / 2.0).map_err(|e| Error::Domain(e.to_string()))?;
    let p_xi = poisson_kernel(x, xi);
    let pre = i0 * p_xi.powf(-(n - s) / 2.0);
    let mut draws = Vec::with_capacity(samples);
    for _ in 0..samples {
        let b: f64 = beta.sample(rng);
        let eta = polar_point(xi.coords(), 1.0 - 2.0 * b, rng)?;
        // d_x^{-(n-s)} P(eta)^n I_0 / |xi - eta|^{s-n}
        draws.push(pre * poisson_kernel(x, &eta).powf((n + s) / 2.0));
    }
    Ok(draws)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RieszSample {
    pub x: Vec<f64>,
    pub xi: Vec<f64>,
    pub estimate: MonteCarloEstimate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RieszReport {
    pub n: usize,
    pub s: f64,
    pub estimates: Vec<RieszSample>,
    pub max_pairwise_z: f64,
}

/// `riesz_potential` at `points` random base data. Base data come from
/// stream 0 of `seed` and estimate `k` from stream `k + 1`.
pub fn riesz_constancy(n: usize, s: f64, points: usize, samples: usize, seed: u64) -> Result<RieszReport> {
    let mut pick = stream_rng(seed, 0);
    let mut estimates = Vec::with_capacity(points);
    for k in 0..points {
        let x: BallPoint = random_ball_point(n, 0.6, &mut pick);
        let xi = BoundaryPoint::random(n, &mut pick);
        let draws = riesz_draws(s, &x, &xi, samples, &mut stream_rng(seed, k as u64 + 1))?;
        let est = MonteCarloEstimate::from_draws(&draws, seed);
        estimates.push(RieszSample { x: x.coords().to_vec(), xi: xi.coords().to_vec(), estimate: est });
    }
    let mut max_z: f64 = 0.0;
    for i in 0..estimates.len() {
        for j in i + 1..estimates.len() {
            max_z = max_z.max(estimates[i].estimate.z_score(&estimates[j].estimate));
        }
    }
    Ok(RieszReport { n, s, estimates, max_pairwise_z: max_z })
}

fn rho_of_norm(r: f64) -> f64 {
    ((1.0 + r) / (1.0 - r)).ln()
}

/// Distance from `y` to the point at hyperbolic distance `s` along the ray
/// from the origin towards `xi`.
fn ray_distance(to_y: &MoebiusMap, xi: &[f64], s: f64) -> f64 {
    let t = (s / 2.0).tanh();
    let p: Vec<f64> = xi.iter().map(|c| t * c).collect();
    let q = to_y.apply_raw(&p);
    rho_of_norm(q.iter().map(|c| c * c).sum::<f64>().sqrt().min(1.0 - 1e-16))
}

/// Shadow membership seen from the origin: the ray towards `xi` is
/// sampled on a grid and the minimum refined by golden section.
pub fn shadow_member_tracked(y: &BallPoint, r: f64, xi: &BoundaryPoint) -> bool {
    let to_y = MoebiusMap::translation(y.clone());
    let d = y.rho();
    let s_max = (d + r + 3.0).min(25.0);
    let step = 0.1;
    let k = (s_max / step).ceil() as usize;
    let vals: Vec<f64> = (0..=k).map(|i| ray_distance(&to_y, xi.coords(), i as f64 * step)).collect();
    let (imin, &vmin) = vals.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("nonempty");
    if vmin <= r {
        return true;
    }
    // the distance along a geodesic is convex
    let (mut a, mut b) = (imin.saturating_sub(1) as f64 * step, ((imin + 1).min(k)) as f64 * step);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut e = a + g * (b - a);
    let (mut fc, mut fe) = (ray_distance(&to_y, xi.coords(), c), ray_distance(&to_y, xi.coords(), e));
    for _ in 0..60 {
        if fc < fe {
            b = e;
            e = c;
            fe = fc;
            c = b - g * (b - a);
            fc = ray_distance(&to_y, xi.coords(), c);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + g * (b - a);
            fe = ray_distance(&to_y, xi.coords(), e);
        }
    }
    fc.min(fe) <= r
}

/// Shadow membership from the right-angled triangle at the origin:
/// `sinh(dist) = sinh(d) sin(theta)` when `theta < pi/2`, else `dist = d`.
pub fn shadow_member_closed_form(y: &BallPoint, r: f64, xi: &BoundaryPoint) -> bool {
    let d = y.rho();
    let norm = y.norm();
    if norm == 0.0 {
        return d <= r;
    }
    let cos_t: f64 = y.coords().iter().zip(xi.coords()).map(|(a, b)| a * b).sum::<f64>() / norm;
    if cos_t <= 0.0 {
        return d <= r;
    }
    let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
    (d.sinh() * sin_t).asinh() <= r
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShadowReport {
    pub n: usize,
    pub distance: f64,
    pub r: f64,
    pub samples: usize,
    pub hits: usize,
    /// Polar angle of the sampled cap around the direction of `y`.
    pub cap_angle: f64,
    pub cap_measure: f64,
    pub measure: MonteCarloEstimate,
    /// `nu_x(shadow) e^{n d}`.
    pub measure_ratio: f64,
    pub diameter: f64,
    /// `diameter e^{d}`.
    pub diameter_ratio: f64,
    pub min_pairwise: f64,
    /// Literal reading `e^{-r} e^{d} <= d_x <= e^{d}` on every pair.
    pub literal_lower: f64,
    pub literal_upper: f64,
    pub literal_lower_holds: bool,
    pub literal_upper_holds: bool,
    /// Samples where ray tracking and the closed form disagree.
    pub tracking_disagreements: usize,
}

/// Harmonic measure and visual diameter of the shadow `O_r(x, y)`.
///
/// Everything is moved to the frame where `x` is the origin, so `nu_x`
/// becomes `nu_0` and `d_x` the chordal metric.
pub fn shadow_experiment(x: &BallPoint, y: &BallPoint, r: f64, samples: usize, seed: u64) -> Result<ShadowReport> {
    if r.is_nan() || r < 0.0 {
        return Err(Error::Domain(format!("shadow radius {r} must be nonnegative")));
    }
    if x.n() != y.n() {
        return Err(Error::DimensionMismatch("x and y live in different balls".into()));
    }
    let n = x.n();
    let nf = n as f64;
    let yp = MoebiusMap::translation(x.clone()).apply(y)?;
    let d = yp.rho();
    let mut zeta = vec![0.0; n + 1];
    zeta[0] = 1.0;
    let cap_angle = if d <= r {
        std::f64::consts::PI
    } else {
        let norm = yp.norm();
        zeta = yp.coords().iter().map(|c| c / norm).collect();
        (2.0 * (r.sinh() / d.sinh()).asin()).min(std::f64::consts::PI)
    };
    let b_max = (1.0 - cap_angle.cos()) / 2.0;
    let cap_measure = if b_max >= 1.0 { 1.0 } else { beta_reg(nf / 2.0, nf / 2.0, b_max) };
    let law = BetaLaw::new(nf / 2.0, nf / 2.0).map_err(|e| Error::Domain(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inside: Vec<BoundaryPoint> = Vec::new();
    let mut draws = Vec::with_capacity(samples);
    let mut disagreements = 0;
    for _ in 0..samples {
        let u: f64 = rng.random();
        let b = if n == 2 { u * cap_measure } else { law.inverse_cdf(u * cap_measure) };
        let xi = polar_point(&zeta, 1.0 - 2.0 * b, &mut rng)?;
        let hit = shadow_member_tracked(&yp, r, &xi);
        if hit != shadow_member_closed_form(&yp, r, &xi) {
            disagreements += 1;
        }
        draws.push(if hit { cap_measure } else { 0.0 });
        if hit {
            inside.push(xi);
        }
    }
    if inside.is_empty() {
        return Err(Error::Domain(format!("empty shadow sample at distance {d:.3} with r = {r}")));
    }
    let keep = &inside[..inside.len().min(2000)];
    let (mut diam, mut min_pair) = (0.0f64, f64::INFINITY);
    for i in 0..keep.len() {
        for j in i + 1..keep.len() {
            let dd: f64 =
                keep[i].coords().iter().zip(keep[j].coords()).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            diam = diam.max(dd);
            min_pair = min_pair.min(dd);
        }
    }
    if keep.len() < 2 {
        min_pair = 0.0;
    }
    let measure = MonteCarloEstimate::from_draws(&draws, seed);
    let literal_lower = (-r).exp() * d.exp();
    let literal_upper = d.exp();
    Ok(ShadowReport {
        n,
        distance: d,
        r,
        samples,
        hits: inside.len(),
        cap_angle,
        cap_measure,
        measure_ratio: measure.value * (nf * d).exp(),
        measure,
        diameter: diam,
        diameter_ratio: diam * d.exp(),
        min_pairwise: min_pair,
        literal_lower,
        literal_upper,
        literal_lower_holds: min_pair >= literal_lower,
        literal_upper_holds: diam <= literal_upper,
        tracking_disagreements: disagreements,
    })
}

/// `h(x) = int f d nu_x`, as the grid average of `f` pushed forward by
/// the isometry taking the origin to `x`.
pub fn harmonic_extension(f: &dyn Fn(&[f64]) -> f64, x: &BallPoint, grid: &SphereGrid) -> Result<f64> {
    if x.n() != grid.n() {
        return Err(Error::DimensionMismatch("ball point and grid dimensions differ".into()));
    }
    let g = MoebiusMap::translation(x.clone()).inverse();
    Ok(grid.points().iter().map(|p| f(g.apply_boundary(p).coords())).sum::<f64>() * grid.weight())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtensionRow {
    pub t: f64,
    pub value: f64,
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarmonicExtensionReport {
    pub xi: Vec<f64>,
    pub target: f64,
    pub rows: Vec<ExtensionRow>,
    pub monotone: bool,
}

/// `|h(t xi) - f(xi)|` along the radius towards `xi`.
pub fn harmonic_extension_limit(
    f: &dyn Fn(&[f64]) -> f64,
    xi: &BoundaryPoint,
    ts: &[f64],
    grid: &SphereGrid,
) -> Result<HarmonicExtensionReport> {
    let target = f(xi.coords());
    let rows = ts
        .iter()
        .map(|&t| {
            let value = harmonic_extension(f, &BallPoint::on_ray(xi, t)?, grid)?;
            Ok(ExtensionRow { t, value, error: (value - target).abs() })
        })
        .collect::<Result<Vec<_>>>()?;
    let monotone = rows.windows(2).all(|w| w[1].error < w[0].error);
    Ok(HarmonicExtensionReport { xi: xi.coords().to_vec(), target, rows, monotone })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub radius: f64,
    pub rho: f64,
    /// Mode 0 first, then `-lambda_m - rho` for `m >= 1`.
    pub eigenvalues: Vec<f64>,
    /// `sup |H(x, .)|` on a sample grid, `x` on the first axis.
    pub h_sup: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub n: usize,
    pub max_mode: usize,
    pub multipliers: Vec<f64>,
    pub rows: Vec<SpectrumRow>,
    /// The projection onto constants commutes with `Delta` and kills it.
    pub projection_block_exact: bool,
    /// Minima of `|eigenvalue|` over modes `> M` never decrease in `M` or
    /// in `rho`, and grow overall.
    pub divergent_trend: bool,
}

/// Diagonal action of `S = -Delta + rho F_p` on harmonic modes at points
/// of radius `radii`, in the gauge centred at the origin.
pub fn localized_s_spectrum(radii: &[f64], max_mode: usize, n: usize, h_grid: usize) -> Result<SpectrumTable> {
    let multipliers = (0..=max_mode).map(|m| multiplier_gauss_jacobi(m, n)).collect::<Result<Vec<_>>>()?;
    let grid = if h_grid > 0 && n <= 2 { Some(SphereGrid::new(n, h_grid)?) } else { None };
    let q = HQuadrature::default();
    let mut rows = Vec::with_capacity(radii.len());
    for &radius in radii {
        if !(0.0..1.0).contains(&radius) {
            return Err(Error::Domain(format!("radius {radius} outside [0, 1)")));
        }
        let mut c = vec![0.0; n + 1];
        c[0] = radius;
        let x = BallPoint::new(c)?;
        let rho = x.rho();
        let eigenvalues =
            multipliers.iter().enumerate().map(|(m, l)| if m == 0 { rho } else { -l - rho }).collect();
        let h_sup = match &grid {
            Some(g) if radius > 0.0 => {
                let mut s: f64 = 0.0;
                for p in g.points() {
                    s = s.max(h_function(&x, p, &q)?.abs());
                }
                Some(s)
            }
            Some(_) => Some(0.0),
            None => None,
        };
        rows.push(SpectrumRow { radius, rho, eigenvalues, h_sup });
    }
    let tails = |row: &SpectrumRow| -> Vec<f64> {
        (0..=max_mode)
            .map(|k| row.eigenvalues[k..].iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min))
            .collect()
    };
    let all_tails: Vec<Vec<f64>> = rows.iter().map(tails).collect();
    let in_mode = all_tails.iter().all(|t| t.windows(2).all(|w| w[1] >= w[0]) && t.last() > t.first());
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&a, &b| rows[a].rho.total_cmp(&rows[b].rho));
    let in_rho = order.windows(2).all(|w| all_tails[w[0]].iter().zip(&all_tails[w[1]]).all(|(a, b)| b >= a));
    Ok(SpectrumTable {
        n,
        max_mode,
        projection_block_exact: multipliers.first() == Some(&0.0),
        multipliers,
        rows,
        divergent_trend: in_mode && in_rho,
    })
}
