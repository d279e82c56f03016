//! JSON input formats: presentations, subgroup specifications and Hecke
//! elements.

use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::ring::Disc;
use crate::group::presentation::{Generator, Presentation, Role};
use crate::group::word::Word;
use crate::group::{CongruenceKind, CosetTable, SubgroupModel};
use crate::hecke::HeckeElement;
use crate::{ProjMatrix, QuadInt};

/// Ambient name that selects the built-in `PSL_2(Z)` presentation.
pub const BUILTIN_MODULAR: &str = "builtin:modular";

/// A ring element: an integer, or `[a, b]` for `a + b w`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Quad([i64; 2]),
}

impl Entry {
    pub fn to_quad(&self, disc: Disc) -> Result<QuadInt> {
        match *self {
            Entry::Int(a) => Ok(QuadInt::small(a, 0, disc)),
            Entry::Quad([a, b]) => {
                if disc.is_rational() && b != 0 {
                    return Err(Error::InvalidInput("quadratic entry over Z".into()));
                }
                Ok(QuadInt::small(a, b, disc))
            }
        }
    }

    pub fn from_quad(x: &QuadInt) -> Result<Self> {
        let small = |v: &BigInt| {
            i64::try_from(v).map_err(|_| Error::InvalidInput("entry exceeds 64 bits".into()))
        };
        Ok(if x.b == BigInt::from(0) {
            Entry::Int(small(&x.a)?)
        } else {
            Entry::Quad([small(&x.a)?, small(&x.b)?])
        })
    }
}

/// Four `[numerator, denominator]` pairs in row-major order.
pub type MatrixEntries = Vec<(Entry, i64)>;

pub fn matrix_from_entries(m: &MatrixEntries, disc: Disc) -> Result<ProjMatrix> {
    if m.len() != 4 {
        return Err(Error::InvalidInput(format!("matrix needs 4 entries, found {}", m.len())));
    }
    let mut out = Vec::with_capacity(4);
    for (num, den) in m {
        out.push((num.to_quad(disc)?, BigInt::from(*den)));
    }
    let arr: [(QuadInt, BigInt); 4] = out.try_into().expect("length checked");
    ProjMatrix::from_fractions(arr)
}

pub fn matrix_to_entries(m: &ProjMatrix) -> Result<MatrixEntries> {
    m.entries().iter().map(|x| Ok((Entry::from_quad(x)?, 1))).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorFile {
    pub name: String,
    pub matrix: MatrixEntries,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub role: Option<Role>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationFile {
    pub discriminant: i64,
    pub generators: Vec<GeneratorFile>,
    pub relators: Vec<String>,
    /// Free-form provenance note.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubgroupKind {
    Gamma0,
    GammaFull,
    Table,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupFile {
    /// Path of the ambient presentation, relative to this file, or
    /// `builtin:modular`.
    pub ambient: String,
    pub kind: SubgroupKind,
    #[serde(default)]
    pub level: Option<Entry>,
    /// One-based permutation images, one list per ambient generator.
    #[serde(default)]
    pub table: Option<Vec<Vec<usize>>>,
    /// Extra finite-order ambient elements for the torsion check.
    #[serde(default)]
    pub torsion_words: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeckeFile {
    pub label: String,
    pub matrix: MatrixEntries,
    pub discriminant: i64,
}

/// A subgroup loaded from a specification file.
#[derive(Clone, Debug)]
pub struct LoadedSubgroup {
    pub model: SubgroupModel,
    pub kind: SubgroupKind,
    pub torsion_words: Vec<Word>,
    /// Canonical JSON of the inputs, used as the cache key.
    pub fingerprint: String,
}

fn json_error(origin: &str, e: &serde_json::Error) -> Error {
    Error::parse(format!("{origin}:{}:{}", e.line(), e.column()), e.to_string())
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::parse(path.display().to_string(), format!("cannot read file: {e}")))
}

pub fn parse_presentation(text: &str, origin: &str) -> Result<Presentation> {
    let f: PresentationFile = serde_json::from_str(text).map_err(|e| json_error(origin, &e))?;
    presentation_from_file(&f, origin)
}

pub fn presentation_from_file(f: &PresentationFile, origin: &str) -> Result<Presentation> {
    let disc = Disc::new(f.discriminant)?;
    let mut gens = Vec::with_capacity(f.generators.len());
    for (k, g) in f.generators.iter().enumerate() {
        let matrix = matrix_from_entries(&g.matrix, disc).map_err(|e| {
            Error::parse(format!("{origin}: generators[{k}]"), e.to_string())
        })?;
        gens.push(Generator { name: g.name.clone(), matrix, role: g.role });
    }
    let names: Vec<String> = gens.iter().map(|g| g.name.clone()).collect();
    let mut rels = Vec::with_capacity(f.relators.len());
    for (k, r) in f.relators.iter().enumerate() {
        let w = Word::parse(r, &names).map_err(|e| match e {
            Error::Parse { location, message } => {
                Error::parse(format!("{origin}: relators[{k}] {location}"), message)
            }
            other => other,
        })?;
        rels.push(w);
    }
    Presentation::new(disc, gens, rels)
}

pub fn load_presentation(path: &Path) -> Result<Presentation> {
    parse_presentation(&read(path)?, &path.display().to_string())
}

fn resolve_ambient(spec: &SubgroupFile, base: Option<&Path>) -> Result<(Presentation, String)> {
    if spec.ambient == BUILTIN_MODULAR {
        return Ok((Presentation::modular_group(), BUILTIN_MODULAR.to_string()));
    }
    let p = PathBuf::from(&spec.ambient);
    let full = match base {
        Some(b) if p.is_relative() => b.join(p),
        _ => p,
    };
    let text = read(&full)?;
    let pres = parse_presentation(&text, &full.display().to_string())?;
    let canon: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| json_error(&full.display().to_string(), &e))?;
    Ok((pres, canon.to_string()))
}

/// A parsed subgroup specification with its ambient group, before the
/// coset table is built.
#[derive(Clone, Debug)]
pub struct PreparedSubgroup {
    spec: SubgroupFile,
    origin: String,
    pub ambient: Presentation,
    /// Canonical JSON of the inputs, used as the cache key.
    pub fingerprint: String,
}

/// Parse a subgroup specification; relative ambient paths are resolved
/// against `base`.
pub fn prepare_subgroup(text: &str, origin: &str, base: Option<&Path>) -> Result<PreparedSubgroup> {
    let spec: SubgroupFile = serde_json::from_str(text).map_err(|e| json_error(origin, &e))?;
    let (ambient, ambient_canon) = resolve_ambient(&spec, base)?;
    let mut canon = serde_json::to_value(&spec).expect("serializable");
    canon["ambient"] = serde_json::Value::String(ambient_canon);
    Ok(PreparedSubgroup { spec, origin: origin.to_string(), ambient, fingerprint: canon.to_string() })
}

impl PreparedSubgroup {
    /// Builds the subgroup, from `table` when one is supplied.
    pub fn build(self, table: Option<CosetTable>) -> Result<LoadedSubgroup> {
        let PreparedSubgroup { spec, origin, ambient, fingerprint } = self;
        let origin = origin.as_str();
        let model = match (table, spec.kind) {
            (Some(t), _) => SubgroupModel::from_table(&ambient, t)?,
            (None, SubgroupKind::Gamma0 | SubgroupKind::GammaFull) => {
                let level = spec
                    .level
                    .as_ref()
                    .ok_or_else(|| Error::parse(origin, "congruence subgroup needs a level"))?
                    .to_quad(ambient.disc())?;
                if level.norm() < BigInt::from(1) {
                    return Err(Error::parse(origin, "level must be nonzero"));
                }
                let kind = if spec.kind == SubgroupKind::Gamma0 {
                    CongruenceKind::Gamma0
                } else {
                    CongruenceKind::GammaFull
                };
                SubgroupModel::congruence(&ambient, kind, level)?
            }
            (None, SubgroupKind::Table) => {
                let t = spec
                    .table
                    .clone()
                    .ok_or_else(|| Error::parse(origin, "table subgroup needs a table"))?;
                SubgroupModel::from_table(&ambient, CosetTable::from_one_based(t)?)?
            }
        };
        let names = ambient.names();
        let torsion_words = spec
            .torsion_words
            .iter()
            .map(|w| Word::parse(w, &names))
            .collect::<Result<Vec<_>>>()?;
        Ok(LoadedSubgroup { model, kind: spec.kind, torsion_words, fingerprint })
    }
}

pub fn parse_subgroup(text: &str, origin: &str, base: Option<&Path>) -> Result<LoadedSubgroup> {
    prepare_subgroup(text, origin, base)?.build(None)
}

pub fn prepare_subgroup_file(path: &Path) -> Result<PreparedSubgroup> {
    prepare_subgroup(&read(path)?, &path.display().to_string(), path.parent())
}

pub fn load_subgroup(path: &Path) -> Result<LoadedSubgroup> {
    parse_subgroup(&read(path)?, &path.display().to_string(), path.parent())
}

pub fn parse_hecke(text: &str, origin: &str) -> Result<HeckeElement> {
    let f: HeckeFile = serde_json::from_str(text).map_err(|e| json_error(origin, &e))?;
    let disc = Disc::new(f.discriminant)?;
    let g = matrix_from_entries(&f.matrix, disc)
        .map_err(|e| Error::parse(format!("{origin}: matrix"), e.to_string()))?;
    Ok(HeckeElement::new(f.label, g))
}

pub fn load_hecke(path: &Path) -> Result<HeckeElement> {
    parse_hecke(&read(path)?, &path.display().to_string())
}

pub fn hecke_to_json(h: &HeckeElement) -> Result<String> {
    let f = HeckeFile {
        label: h.label.clone(),
        matrix: matrix_to_entries(&h.g)?,
        discriminant: h.g.disc().value(),
    };
    Ok(serde_json::to_string(&f).expect("serializable"))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MODULAR: &str = r#"{
        "discriminant": 0,
        "generators": [
            {"name": "S", "matrix": [[0,1],[-1,1],[1,1],[0,1]], "role": "S"},
            {"name": "T", "matrix": [[1,1],[1,1],[0,1],[1,1]], "role": "T1"}
        ],
        "relators": ["S^2", "(S T)^3"]
    }"#;

    #[test]
    fn parses_modular_group() {
        let p = parse_presentation(MODULAR, "inline").unwrap();
        assert_eq!(p, Presentation::modular_group());
    }

    #[test]
    fn reports_locations() {
        let bad = MODULAR.replace("\"S^2\"", "\"S^2 X\"");
        match parse_presentation(&bad, "inline") {
            Err(Error::Parse { location, .. }) => assert!(location.contains("relators[0]")),
            other => panic!("unexpected {other:?}"),
        }
        let broken = &MODULAR[..40];
        match parse_presentation(broken, "inline") {
            Err(Error::Parse { location, .. }) => assert!(location.starts_with("inline:")),
            other => panic!("unexpected {other:?}"),
        }
        let d5 = MODULAR.replace("\"discriminant\": 0", "\"discriminant\": 5");
        assert!(matches!(
            parse_presentation(&d5, "inline"),
            Err(Error::UnsupportedDiscriminant(5))
        ));
    }

    #[test]
    fn subgroup_and_hecke_specs() {
        let s = r#"{"ambient": "builtin:modular", "kind": "gamma0", "level": 11}"#;
        let l = parse_subgroup(s, "inline", None).unwrap();
        assert_eq!(l.model.index(), 12);
        let h = parse_hecke(r#"{"label":"T_2","matrix":[[1,1],[0,1],[0,1],[2,1]],"discriminant":0}"#, "x")
            .unwrap();
        let back = parse_hecke(&hecke_to_json(&h).unwrap(), "y").unwrap();
        assert_eq!(h, back);
        let t = r#"{"ambient": "builtin:modular", "kind": "table", "table": [[1],[1]]}"#;
        assert_eq!(parse_subgroup(t, "inline", None).unwrap().model.index(), 1);
    }
}
