//! Batch jobs: load inputs, run one command, and collect a report.

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::boundary::suite::{run_suite, SuiteConfig};
use crate::error::{Error, Result};
use crate::exact::ring::Disc;
use crate::group::abelian::{presentation_h2, GroupInvariants};
use crate::group::presentation::Presentation;
use crate::group::subgroup::SubgroupModel;
use crate::hecke::{double_coset_reps, DoubleCosetDecomposition, HeckeElement, HeckeMatrix, HeckeOperator, SearchOptions};
use crate::io::cache::{Cache, Lookup};
use crate::io::format::{load_hecke, prepare_subgroup_file, LoadedSubgroup};
use crate::io::report::{int_value, ints_value, matrix_value, Flag, Report};
use crate::kk::{
    assemble_k_groups, boundary_duality_model, boundary_rank_cross_check, fredholm_index_oracle, gysin_check,
    hecke_on_k_groups, hecke_selfadjoint_check, index_pairing, normalize_cocycle, pairing_matrix, unitary_model,
    Algebra, Geometry, GradedAbelianGroup, HeckeBlocks, KGroupModel, Variance,
};
use crate::{Int, ProjMatrix};

pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_PAIR_SAMPLES: usize = 50;
pub const PAIR_WINDOWS: [usize; 3] = [12, 16, 32];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    GroupAnalyze,
    HeckeMatrix,
    KgroupsAssemble,
    PairIndex,
    BoundarySuite,
    VerifyAll,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::GroupAnalyze => "group analyze",
            Command::HeckeMatrix => "hecke matrix",
            Command::KgroupsAssemble => "kgroups assemble",
            Command::PairIndex => "pair index",
            Command::BoundarySuite => "boundary suite",
            Command::VerifyAll => "verify all",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JobSpec {
    pub command: Command,
    pub subgroup: Option<PathBuf>,
    pub hecke: Vec<PathBuf>,
    /// Boundary experiment configuration.
    pub config: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub samples: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub cap: usize,
}

impl JobSpec {
    pub fn new(command: Command) -> Self {
        JobSpec {
            command,
            subgroup: None,
            hecke: Vec::new(),
            config: None,
            output: None,
            seed: None,
            tol: None,
            samples: None,
            cache_dir: None,
            cap: crate::hecke::DEFAULT_CAP,
        }
    }

    /// Referenced files exist and overrides are in range.
    pub fn validate(&self) -> Result<()> {
        let needs_subgroup = !matches!(self.command, Command::BoundarySuite);
        if needs_subgroup && self.subgroup.is_none() {
            return Err(Error::parse("job", format!("`{}` needs a subgroup file", self.command.name())));
        }
        for p in self.subgroup.iter().chain(&self.hecke).chain(&self.config) {
            if !p.is_file() {
                return Err(Error::parse(p.display().to_string(), "file not found"));
            }
        }
        if let Some(t) = self.tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::parse("--tol", format!("tolerance must be positive, got {t}")));
            }
        }
        if self.cap == 0 {
            return Err(Error::parse("--cap", "cap must be at least 1"));
        }
        Ok(())
    }

    fn inputs(&self) -> Vec<String> {
        self.subgroup
            .iter()
            .chain(&self.hecke)
            .chain(&self.config)
            .map(|p| p.display().to_string())
            .collect()
    }
}

/// Exit status: 0 when every hard check passes, 1 on a failed check or
/// invariant, 2 on unparsable input, 3 when a search cap is hit.
pub fn exit_code(outcome: &Result<Report>) -> i32 {
    match outcome {
        Ok(r) if r.passed() => 0,
        Ok(_) => 1,
        Err(Error::Parse { .. }) => 2,
        Err(Error::CapExceeded { .. }) => 3,
        Err(_) => 1,
    }
}

struct Runner {
    cache: Option<Cache>,
    cap: usize,
    seed: u64,
}

struct Analysis {
    geometry: Geometry,
    cohomology: GradedAbelianGroup,
    euler_expected: Option<i64>,
    torsion_free: bool,
}

struct HeckeData {
    op: HeckeOperator,
    h1: HeckeMatrix,
    homology: HeckeMatrix,
}

impl Runner {
    fn load_subgroup(&self, path: &Path) -> Result<LoadedSubgroup> {
        let prep = prepare_subgroup_file(path)?;
        let Some(cache) = &self.cache else {
            return prep.build(None);
        };
        let fp = prep.fingerprint.clone();
        if let Lookup::Hit(t) = cache.load_coset_table(&fp, &prep.ambient) {
            return prep.build(Some(t));
        }
        let loaded = prep.build(None)?;
        cache.store_coset_table(&fp, loaded.model.table())?;
        Ok(loaded)
    }

    fn reduced_presentation(&self, sub: &LoadedSubgroup) -> Result<Presentation> {
        let key = format!("{}|reduced", sub.fingerprint);
        if let Some(cache) = &self.cache {
            if let Lookup::Hit(p) = cache.load_presentation(&key) {
                return Ok(p);
            }
        }
        let p = sub.model.reduced_presentation();
        if let Some(cache) = &self.cache {
            cache.store_presentation(&key, &p)?;
        }
        Ok(p)
    }

    fn decomposition(&self, sub: &LoadedSubgroup, h: &HeckeElement) -> Result<DoubleCosetDecomposition> {
        if let Some(cache) = &self.cache {
            if let Lookup::Hit(d) = cache.load_decomposition(&sub.fingerprint, &sub.model, h) {
                return Ok(d);
            }
        }
        let d = double_coset_reps(&sub.model, h, &SearchOptions { cap: self.cap, generator_order: None })?;
        if let Some(cache) = &self.cache {
            cache.store_decomposition(&sub.fingerprint, &d)?;
        }
        Ok(d)
    }

    fn hecke(&self, sub: &LoadedSubgroup, h: &HeckeElement) -> Result<HeckeData> {
        let op = HeckeOperator::new(&sub.model, self.decomposition(sub, h)?)?;
        let h1 = op.matrix_h1(&sub.model)?;
        let homology = op.matrix_h1_homology(&sub.model, &sub.model.homology_basis())?;
        Ok(HeckeData { op, h1, homology })
    }
}

fn geometry_of(sub: &SubgroupModel) -> Geometry {
    if sub.ambient().disc().is_rational() {
        Geometry::Fuchsian
    } else {
        Geometry::Bianchi
    }
}

fn group_section(runner: &Runner, sub: &LoadedSubgroup, report: &mut Report) -> Result<Analysis> {
    let m = &sub.model;
    let geometry = geometry_of(m);
    let closure = m.table().check_relators(m.ambient().relators());
    report.check("coset_table_closure", closure.is_ok(), closure.err().map(|e| e.to_string()).unwrap_or_default());
    let r = m.rank_h1();
    let h1 = m.abelianization().invariants.clone();
    let pres = runner.reduced_presentation(sub)?;
    let h2_pres = presentation_h2(pres.ngens(), pres.relators());
    let mut data = json!({
        "discriminant": m.ambient().disc().value(),
        "geometry": geometry,
        "index": m.index(),
        "subgroup_generators": m.schreier_generators().len(),
        "reduced_generators": pres.ngens(),
        "reduced_relators": pres.relators().len(),
        "h1": h1.to_string(),
        "rank_h1": r,
        "h2_presentation": h2_pres.to_string(),
    });
    let (torsion_free, euler_expected, h2) = match geometry {
        Geometry::Fuchsian => {
            let s = m.surface_data()?;
            data["genus"] = json!(s.genus);
            data["cusps"] = json!(s.cusps);
            data["elliptic2"] = json!(s.elliptic2);
            data["elliptic3"] = json!(s.elliptic3);
            data["torsion_free"] = json!(s.torsion_free);
            if let Some(fr) = s.free_rank {
                report.check("rank_h1_equals_2g_plus_c_minus_1", fr == r, format!("2g + c - 1 = {fr}, rank H^1 = {r}"));
            }
            (s.torsion_free, Some(2 - 2 * s.genus - s.cusps as i64), h2_pres.clone())
        }
        Geometry::Bianchi => {
            let t = m.torsion_check(&sub.torsion_words);
            data["torsion_free"] = json!(t.torsion_free);
            data["torsion_check_exact"] = json!(t.exact);
            data["torsion_elements_tested"] = json!(t.tested);
            // a torsion-free Bianchi group is the fundamental group of an
            // aspherical open 3-manifold, so chi = 0 forces rank H^2 = r - 1
            let expected = r.saturating_sub(1);
            let h2 = GroupInvariants { free_rank: expected, divisors: h2_pres.divisors.clone() };
            if h2_pres.free_rank != expected {
                report.flag(Flag {
                    id: "h2_euler_correction".into(),
                    summary: "presentation complex is not aspherical; H^2 rank replaced by rank H^1 - 1 from chi = 0".into(),
                    values: json!({"presentation_rank": h2_pres.free_rank, "used_rank": expected}),
                });
            }
            (t.torsion_free, Some(0), h2)
        }
    };
    data["h2_used"] = json!(h2.to_string());
    report.section("group", data);
    let cohomology = GradedAbelianGroup::cohomology(r, h2)?;
    Ok(Analysis { geometry, cohomology, euler_expected, torsion_free })
}

fn default_hecke(sub: &SubgroupModel) -> Result<Vec<HeckeElement>> {
    if !sub.ambient().disc().is_rational() {
        return Err(Error::parse("job", "Bianchi subgroups need explicit Hecke element files"));
    }
    [2, 3]
        .iter()
        .map(|&p| Ok(HeckeElement::new(format!("T_{p}"), ProjMatrix::from_ints([[1, 0], [0, p]], Disc::RATIONAL)?)))
        .collect()
}

fn hecke_section(runner: &Runner, sub: &LoadedSubgroup, elements: &[HeckeElement], report: &mut Report) -> Result<Vec<HeckeData>> {
    let m = &sub.model;
    let p = pairing_matrix(m, &m.h1_basis(), &m.homology_basis())?;
    let mut rows = Vec::new();
    let mut out = Vec::new();
    for h in elements {
        let d = runner.hecke(sub, h)?;
        let (roots, rest) = d.h1.integer_eigenvalues()?;
        let label = h.label.clone();
        report.check(
            format!("{label}: homology matrix is the transpose"),
            d.homology.matrix.transpose() == d.h1.matrix,
            "",
        );
        report.check(format!("{label}: self-adjoint under the index pairing"), hecke_selfadjoint_check(&d.h1, &d.homology, &p)?, "");
        rows.push(json!({
            "label": label,
            "degree": d.op.degree(),
            "h1_matrix": matrix_value(&d.h1.matrix),
            "homology_matrix": matrix_value(&d.homology.matrix),
            "char_poly": ints_value(&d.h1.char_poly()?),
            "integer_eigenvalues": ints_value(&roots),
            "remaining_factor": ints_value(&rest),
        }));
        out.push(d);
    }
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            let (a, b) = (&out[i].h1.matrix, &out[j].h1.matrix);
            report.check(
                format!("{} and {} commute", elements[i].label, elements[j].label),
                a.mul(b)? == b.mul(a)?,
                "",
            );
        }
    }
    report.section("hecke", json!({"pairing_matrix": matrix_value(&p.matrix), "operators": rows}));
    Ok(out)
}

fn model_value(mdl: &KGroupModel) -> Value {
    json!({
        "algebra": mdl.algebra,
        "variance": mdl.variance,
        "parity": mdl.parity,
        "group": mdl.invariants.to_string(),
        "rank": mdl.rank(),
        "extension_ambiguous": mdl.extension_ambiguous,
        "extension": mdl.extension.as_ref().map(|e| json!({"sub": e.sub.to_string(), "quotient": e.quotient.to_string()})),
        "generators": serde_json::to_value(&mdl.generators).expect("serializable"),
    })
}

fn kgroups_section(a: &Analysis, hecke: &[(String, &HeckeData)], report: &mut Report) -> Result<()> {
    if !a.torsion_free {
        return Err(Error::InvalidInput("K-group models need a torsion-free subgroup".into()));
    }
    let h = &a.cohomology;
    let r = h.degree(1).free_rank;
    let models = assemble_k_groups(h, a.geometry)?;
    for mdl in &models {
        mdl.check()?;
    }
    let gysin = gysin_check(&models, h, a.euler_expected)?;
    report.check("gysin_rank_identities", gysin.ranks_hold(), "");
    report.check("euler_class", gysin.euler_consistent, format!("chi = {}", gysin.euler_characteristic));
    let duality = boundary_duality_model(&GroupInvariants::free(r))?;
    if a.geometry == Geometry::Bianchi {
        report.check(
            "boundary_rank_equals_twice_rank_h1",
            boundary_rank_cross_check(&models, &duality) && duality.rank() == 2 * r,
            format!("rank H^1 = {r}"),
        );
    }
    if a.geometry == Geometry::Fuchsian {
        let rank = |alg, p| KGroupModel::find(&models, alg, Variance::Homology, p).map(|m| m.rank());
        let ok = rank(Algebra::Reduced, 0) == Some(1)
            && rank(Algebra::Reduced, 1) == Some(r)
            && rank(Algebra::Boundary, 0) == Some(1 + r)
            && rank(Algebra::Boundary, 1) == Some(1 + r);
        report.check("fuchsian_ranks", ok, format!("expected (1, {r}) and boundary (1 + {r}, 1 + {r})"));
    }
    let unitary = unitary_model(&GroupInvariants::free(r));
    let mut actions = Vec::new();
    for (label, d) in hecke {
        let blocks = HeckeBlocks {
            h1: &d.h1.matrix,
            homology: Some(&d.homology.matrix),
            h2: None,
            degree: d.op.degree(),
        };
        let mut per = Vec::new();
        for mdl in models.iter().chain([&duality, &unitary]) {
            let v = match hecke_on_k_groups(mdl, &blocks) {
                Ok(mx) => matrix_value(&mx),
                Err(e) => Value::String(format!("not computed: {e}")),
            };
            per.push(json!({"algebra": mdl.algebra, "variance": mdl.variance, "parity": mdl.parity, "matrix": v}));
        }
        actions.push(json!({"label": label, "actions": per}));
    }
    report.section(
        "kgroups",
        json!({
            "geometry": a.geometry,
            "models": models.iter().map(model_value).collect::<Vec<_>>(),
            "boundary_duality": model_value(&duality),
            "unitary": model_value(&unitary),
            "gysin": {
                "identities": gysin.rank_identities.iter().map(|i| json!({
                    "parity": i.parity, "boundary": i.boundary, "c0m_shifted": i.c0m_shifted,
                    "reduced": i.reduced, "holds": i.holds,
                })).collect::<Vec<_>>(),
                "euler_characteristic": gysin.euler_characteristic,
                "euler_expected": gysin.euler_expected,
            },
            "hecke_actions": actions,
        }),
    );
    Ok(())
}

fn random_element(sub: &SubgroupModel, rng: &mut ChaCha8Rng, len: usize) -> ProjMatrix {
    let gens = sub.schreier_generators();
    let mut m = ProjMatrix::identity(sub.ambient().disc());
    for _ in 0..len {
        let s = &gens[rng.random_range(0..gens.len())].matrix;
        m = m.mul(&if rng.random_bool(0.5) { s.clone() } else { s.inverse() });
    }
    m
}

fn pair_section(runner: &Runner, sub: &LoadedSubgroup, samples: usize, report: &mut Report) -> Result<()> {
    let m = &sub.model;
    let r = m.rank_h1();
    let p = pairing_matrix(m, &m.h1_basis(), &m.homology_basis())?;
    let smith = p.matrix.smith();
    let unimodular = p.matrix.rows() == r && smith.rank() == r && smith.diagonal.iter().all(|d| d == &Int::from(1) || d == &Int::from(-1));
    report.check("pairing_matrix_unimodular", unimodular, "");
    let mut rng = ChaCha8Rng::seed_from_u64(runner.seed);
    let (mut agree, mut tested, mut skipped) = (0usize, 0usize, 0usize);
    let mut mismatches = Vec::new();
    let mut draws = 0usize;
    while tested < samples && r > 0 {
        draws += 1;
        if draws > 100 * samples.max(1) {
            break;
        }
        let coords: Vec<Int> = (0..r).map(|_| Int::from(rng.random_range(-3i64..=3))).collect();
        let c = m.cocycle_from_coords(coords)?;
        let len = rng.random_range(1..=6);
        let delta = random_element(m, &mut rng, len);
        let (norm, cn) = normalize_cocycle(&c);
        let Some(size) = norm.value().cloned() else {
            skipped += 1;
            continue;
        };
        let k = m.evaluate(&cn, &delta)?;
        let Some(k64) = num_traits::ToPrimitive::to_i64(&k).filter(|v| v.abs() <= 10) else {
            skipped += 1;
            continue;
        };
        let value = index_pairing(m, &c, &delta)?;
        tested += 1;
        let mut ok = true;
        for n in PAIR_WINDOWS {
            if value != &size * Int::from(fredholm_index_oracle(k64, n)?) {
                ok = false;
            }
        }
        if ok {
            agree += 1;
        } else if mismatches.len() < 5 {
            mismatches.push(json!({"pairing": int_value(&value), "norm": int_value(&size), "normalized_value": k64}));
        }
    }
    report.check(
        "index_pairing_matches_fredholm_oracle",
        agree == tested && (tested == samples || r == 0),
        format!("{agree}/{tested} samples agree at windows {PAIR_WINDOWS:?}"),
    );
    report.section(
        "pairing",
        json!({
            "pairing_matrix": matrix_value(&p.matrix),
            "samples": tested,
            "agree": agree,
            "skipped": skipped,
            "windows": PAIR_WINDOWS,
            "mismatches": mismatches,
        }),
    );
    Ok(())
}

fn boundary_section(job: &JobSpec, seed: u64, report: &mut Report) -> Result<()> {
    let mut config = match &job.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::parse(p.display().to_string(), e.to_string()))?;
            serde_json::from_str::<SuiteConfig>(&text)
                .map_err(|e| Error::parse(format!("{}:{}:{}", p.display(), e.line(), e.column()), e.to_string()))?
        }
        None => SuiteConfig::default(),
    };
    if job.seed.is_some() {
        config.seed = seed;
    }
    if let Some(t) = job.tol {
        config.tol = t;
    }
    if let Some(s) = job.samples {
        config.samples = s;
        config.riesz_samples = s;
    }
    let suite = run_suite(&config)?;
    let id = &suite.identities;
    report.check("boundary_identities", id.passes(config.tol, config.tol.min(1e-10)), format!(
        "transform {:.2e}, invariance {:.2e}, u-norm {:.2e}, u-metric {:.2e}",
        id.poisson_transform_max, id.visual_invariance_max, id.u_norm_max, id.u_metric_max
    ));
    report.check("multipliers_positive", suite.multipliers.positive && suite.multipliers.nondecreasing, "");
    report.check(
        "nystrom_matches_funk_hecke",
        suite.eigenrelation.rows.iter().all(|r| r.rel_error_funk_hecke < 1e-2),
        "",
    );
    report.check("riesz_constancy", suite.riesz.iter().all(|r| r.max_pairwise_z < 3.0), format!(
        "max pairwise z {:?}",
        suite.riesz.iter().map(|r| r.max_pairwise_z).collect::<Vec<_>>()
    ));
    report.check("harmonic_extension_radial_limit", suite.extension.monotone, "");
    report.check("spectrum_trend", suite.spectrum.projection_block_exact && suite.spectrum.divergent_trend, "");
    report.check("gauge_decomposition", suite.gauge.rel_error_gauge < 1e-2, format!("{:.2e}", suite.gauge.rel_error_gauge));
    for f in &suite.flags {
        report.flag(f.clone());
    }
    let mut value = serde_json::to_value(&suite).expect("serializable");
    if let Some(o) = value.as_object_mut() {
        o.remove("flags");
        o.remove("hard_pass");
    }
    report.section("boundary", value);
    Ok(())
}

/// Runs a job and returns its report; the caller writes it out.
pub fn run(job: &JobSpec) -> Result<Report> {
    job.validate()?;
    let seed = job.seed.unwrap_or(DEFAULT_SEED);
    let cache = job.cache_dir.as_ref().map(Cache::open).transpose()?;
    let runner = Runner { cache, cap: job.cap, seed };
    let mut report = Report::new(job.command.name(), seed, job.inputs());
    if job.command == Command::BoundarySuite {
        boundary_section(job, seed, &mut report)?;
        return Ok(report);
    }
    let sub = runner.load_subgroup(job.subgroup.as_deref().expect("validated"))?;
    let analysis = group_section(&runner, &sub, &mut report)?;
    let elements = || -> Result<Vec<HeckeElement>> {
        if job.hecke.is_empty() {
            default_hecke(&sub.model)
        } else {
            job.hecke.iter().map(|p| load_hecke(p)).collect()
        }
    };
    let samples = job.samples.unwrap_or(DEFAULT_PAIR_SAMPLES);
    match job.command {
        Command::GroupAnalyze => {}
        Command::HeckeMatrix => {
            hecke_section(&runner, &sub, &elements()?, &mut report)?;
        }
        Command::KgroupsAssemble => {
            let els: Vec<HeckeElement> = job.hecke.iter().map(|p| load_hecke(p)).collect::<Result<_>>()?;
            let data = hecke_section(&runner, &sub, &els, &mut report)?;
            let labelled: Vec<(String, &HeckeData)> = els.iter().map(|e| e.label.clone()).zip(&data).collect();
            kgroups_section(&analysis, &labelled, &mut report)?;
        }
        Command::PairIndex => pair_section(&runner, &sub, samples, &mut report)?,
        Command::VerifyAll => {
            let els = elements()?;
            let data = hecke_section(&runner, &sub, &els, &mut report)?;
            let labelled: Vec<(String, &HeckeData)> = els.iter().map(|e| e.label.clone()).zip(&data).collect();
            kgroups_section(&analysis, &labelled, &mut report)?;
            pair_section(&runner, &sub, samples, &mut report)?;
        }
        Command::BoundarySuite => unreachable!("handled above"),
    }
    Ok(report)
}
