//! On-disk cache for coset tables, double coset decompositions and reduced
//! presentations. Every payload is re-checked against its invariants when
//! it is loaded.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::group::coset::CosetTable;
use crate::group::presentation::Presentation;
use crate::group::subgroup::SubgroupModel;
use crate::hecke::{DoubleCosetDecomposition, HeckeElement};
use crate::io::format::{
    hecke_to_json, matrix_from_entries, matrix_to_entries, presentation_from_file, GeneratorFile, MatrixEntries,
    PresentationFile,
};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArtifactKind {
    CosetTable,
    Decomposition,
    Presentation,
}

impl ArtifactKind {
    fn tag(self) -> &'static str {
        match self {
            ArtifactKind::CosetTable => "coset_table",
            ArtifactKind::Decomposition => "decomposition",
            ArtifactKind::Presentation => "presentation",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    /// SHA-256 of the input fingerprint.
    pub input_hash: String,
    pub kind: ArtifactKind,
    pub tool_version: String,
    /// SHA-256 of the serialized payload.
    pub payload_hash: String,
    pub payload: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MissReason {
    Absent,
    VersionMismatch(String),
    HashMismatch,
    /// The payload parsed but failed revalidation.
    Invalid(String),
}

#[derive(Clone, Debug)]
pub enum Lookup<T> {
    Hit(T),
    Miss(MissReason),
}

impl<T> Lookup<T> {
    pub fn hit(self) -> Option<T> {
        match self {
            Lookup::Hit(t) => Some(t),
            Lookup::Miss(_) => None,
        }
    }
}

pub fn sha256_hex(data: &[u8]) -> String {
    hex::encode(Sha256::digest(data))
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| Error::Cache(format!("cannot create {}: {e}", dir.display())))?;
        Ok(Cache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, kind: ArtifactKind, fingerprint: &str) -> PathBuf {
        let h = sha256_hex(fingerprint.as_bytes());
        self.dir.join(format!("{}-{}.json", kind.tag(), &h[..32]))
    }

    pub fn store_raw(&self, kind: ArtifactKind, fingerprint: &str, payload: serde_json::Value) -> Result<PathBuf> {
        let entry = CacheEntry {
            input_hash: sha256_hex(fingerprint.as_bytes()),
            kind,
            tool_version: TOOL_VERSION.to_string(),
            payload_hash: sha256_hex(payload.to_string().as_bytes()),
            payload,
        };
        let path = self.path_for(kind, fingerprint);
        let text = serde_json::to_string_pretty(&entry).expect("serializable");
        fs::write(&path, text).map_err(|e| Error::Cache(format!("cannot write {}: {e}", path.display())))?;
        Ok(path)
    }

    /// The stored payload when the entry matches kind, inputs, version and
    /// payload hash.
    pub fn load_raw(&self, kind: ArtifactKind, fingerprint: &str) -> Lookup<serde_json::Value> {
        let path = self.path_for(kind, fingerprint);
        let Ok(text) = fs::read_to_string(&path) else {
            return Lookup::Miss(MissReason::Absent);
        };
        let entry: CacheEntry = match serde_json::from_str(&text) {
            Ok(e) => e,
            Err(e) => return Lookup::Miss(MissReason::Invalid(e.to_string())),
        };
        if entry.tool_version != TOOL_VERSION {
            return Lookup::Miss(MissReason::VersionMismatch(entry.tool_version));
        }
        if entry.kind != kind
            || entry.input_hash != sha256_hex(fingerprint.as_bytes())
            || entry.payload_hash != sha256_hex(entry.payload.to_string().as_bytes())
        {
            return Lookup::Miss(MissReason::HashMismatch);
        }
        Lookup::Hit(entry.payload)
    }

    pub fn store_coset_table(&self, fingerprint: &str, t: &CosetTable) -> Result<PathBuf> {
        self.store_raw(ArtifactKind::CosetTable, fingerprint, serde_json::json!(t.to_one_based()))
    }

    /// Reloads a table and checks closure and the ambient relators.
    pub fn load_coset_table(&self, fingerprint: &str, ambient: &Presentation) -> Lookup<CosetTable> {
        let raw = match self.load_raw(ArtifactKind::CosetTable, fingerprint) {
            Lookup::Hit(v) => v,
            Lookup::Miss(r) => return Lookup::Miss(r),
        };
        let checked = serde_json::from_value::<Vec<Vec<usize>>>(raw)
            .map_err(|e| Error::Cache(e.to_string()))
            .and_then(CosetTable::from_one_based)
            .and_then(|t| {
                if t.ngens() != ambient.ngens() {
                    return Err(Error::Cache("generator count differs from the ambient group".into()));
                }
                t.check_relators(ambient.relators())?;
                Ok(t)
            });
        match checked {
            Ok(t) => Lookup::Hit(t),
            Err(e) => Lookup::Miss(MissReason::Invalid(e.to_string())),
        }
    }

    fn decomposition_key(sub_fingerprint: &str, element: &HeckeElement) -> Result<String> {
        Ok(format!("{sub_fingerprint}|{}", hecke_to_json(element)?))
    }

    pub fn store_decomposition(&self, sub_fingerprint: &str, d: &DoubleCosetDecomposition) -> Result<PathBuf> {
        let deltas: Vec<MatrixEntries> = d.deltas.iter().map(matrix_to_entries).collect::<Result<_>>()?;
        let key = Self::decomposition_key(sub_fingerprint, &d.element)?;
        self.store_raw(ArtifactKind::Decomposition, &key, serde_json::json!(deltas))
    }

    /// Reloads the representatives and re-runs the disjointness and
    /// completeness checks.
    pub fn load_decomposition(
        &self,
        sub_fingerprint: &str,
        sub: &SubgroupModel,
        element: &HeckeElement,
    ) -> Lookup<DoubleCosetDecomposition> {
        let key = match Self::decomposition_key(sub_fingerprint, element) {
            Ok(k) => k,
            Err(e) => return Lookup::Miss(MissReason::Invalid(e.to_string())),
        };
        let raw = match self.load_raw(ArtifactKind::Decomposition, &key) {
            Lookup::Hit(v) => v,
            Lookup::Miss(r) => return Lookup::Miss(r),
        };
        let disc = sub.ambient().disc();
        let checked = serde_json::from_value::<Vec<MatrixEntries>>(raw)
            .map_err(|e| Error::Cache(e.to_string()))
            .and_then(|ds| ds.iter().map(|m| matrix_from_entries(m, disc)).collect::<Result<Vec<_>>>())
            .and_then(|ds| DoubleCosetDecomposition::from_deltas(sub, element.clone(), ds));
        match checked {
            Ok(d) => Lookup::Hit(d),
            Err(e) => Lookup::Miss(MissReason::Invalid(e.to_string())),
        }
    }

    pub fn store_presentation(&self, fingerprint: &str, p: &Presentation) -> Result<PathBuf> {
        let names = p.names();
        let file = PresentationFile {
            discriminant: p.disc().value(),
            generators: p
                .generators()
                .iter()
                .map(|g| Ok(GeneratorFile { name: g.name.clone(), matrix: matrix_to_entries(&g.matrix)?, role: g.role }))
                .collect::<Result<_>>()?,
            relators: p.relators().iter().map(|w| w.display(&names)).collect(),
            source: None,
        };
        self.store_raw(ArtifactKind::Presentation, fingerprint, serde_json::to_value(file).expect("serializable"))
    }

    /// Reloads a presentation; every relator must evaluate to the identity.
    pub fn load_presentation(&self, fingerprint: &str) -> Lookup<Presentation> {
        let raw = match self.load_raw(ArtifactKind::Presentation, fingerprint) {
            Lookup::Hit(v) => v,
            Lookup::Miss(r) => return Lookup::Miss(r),
        };
        let checked = serde_json::from_value::<PresentationFile>(raw)
            .map_err(|e| Error::Cache(e.to_string()))
            .and_then(|f| presentation_from_file(&f, "cache"));
        match checked {
            Ok(p) => Lookup::Hit(p),
            Err(e) => Lookup::Miss(MissReason::Invalid(e.to_string())),
        }
    }
}
