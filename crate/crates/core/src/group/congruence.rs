//! Congruence subgroups `Gamma_0(N)` and `Gamma(N)` described by their
//! action on residues modulo `N`.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::coset::CosetTable;
use crate::group::presentation::Presentation;
use crate::{ProjMatrix, QuadInt, ResidueRing};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CongruenceKind {
    /// Lower-left entry divisible by `N`.
    Gamma0,
    /// Kernel of reduction modulo `N`.
    GammaFull,
}

/// Reduction data for a congruence subgroup of level `N`.
#[derive(Clone, Debug)]
pub struct Congruence {
    pub kind: CongruenceKind,
    ring: ResidueRing,
    /// Residue units used to normalize labels.
    scalars: Vec<QuadInt>,
}

/// Canonical invariant of a coset `gamma H`.
pub type Label = Vec<QuadInt>;

impl Congruence {
    pub fn new(kind: CongruenceKind, level: QuadInt) -> Result<Self> {
        let ring = ResidueRing::new(level)?;
        let disc = ring.modulus().disc;
        let scalars = match kind {
            CongruenceKind::Gamma0 => ring.units(),
            CongruenceKind::GammaFull => {
                let one = QuadInt::one(disc);
                let mut v = vec![ring.reduce(&one), ring.reduce(&one.neg())];
                v.dedup();
                v
            }
        };
        Ok(Congruence { kind, ring, scalars })
    }

    pub fn level(&self) -> &QuadInt {
        self.ring.modulus()
    }

    /// Label of the coset `m H`: the first column in `P^1(O/N)` for
    /// `Gamma_0`, the whole matrix modulo `+-1` for `Gamma(N)`.
    pub fn label(&self, m: &ProjMatrix) -> Result<Label> {
        let e = m.sl2_entries().ok_or_else(|| Error::NotInAmbient(m.to_string()))?;
        let base: Vec<QuadInt> = match self.kind {
            CongruenceKind::Gamma0 => vec![e[0].clone(), e[2].clone()],
            CongruenceKind::GammaFull => e.to_vec(),
        };
        let best = self
            .scalars
            .iter()
            .map(|u| base.iter().map(|x| self.ring.reduce(&x.mul(u))).collect::<Label>())
            .min()
            .expect("at least one scalar");
        Ok(best)
    }

    pub fn contains(&self, m: &ProjMatrix) -> bool {
        match self.label(m) {
            Ok(l) => l == self.label(&ProjMatrix::identity(m.disc())).expect("identity"),
            Err(_) => false,
        }
    }

    /// Coset table by breadth-first enumeration of labels, together with
    /// the label of each coset.
    pub fn coset_table(&self, ambient: &Presentation) -> Result<(CosetTable, HashMap<Label, usize>)> {
        if ambient.disc() != self.level().disc {
            return Err(Error::InvalidInput("level and ambient ring differ".into()));
        }
        let id = ProjMatrix::identity(ambient.disc());
        let mut labels: HashMap<Label, usize> = HashMap::new();
        labels.insert(self.label(&id)?, 0);
        let mut reps = vec![id];
        let n = ambient.ngens();
        let mut perms: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (g, perm) in perms.iter_mut().enumerate() {
                let m = ambient.generators()[g].matrix.mul(&reps[i]);
                let l = self.label(&m)?;
                let next = labels.len();
                let j = *labels.entry(l).or_insert(next);
                if j == next {
                    reps.push(m);
                    queue.push_back(j);
                }
                if perm.len() <= i {
                    perm.resize(i + 1, usize::MAX);
                }
                perm[i] = j;
            }
            // inverse images may discover cosets that no forward edge from
            // an already-processed coset has reached yet
            for g in 0..n {
                let m = ambient.generators()[g].matrix.inverse().mul(&reps[i]);
                let l = self.label(&m)?;
                let next = labels.len();
                let j = *labels.entry(l).or_insert(next);
                if j == next {
                    reps.push(m);
                    queue.push_back(j);
                }
            }
        }
        let idx = labels.len();
        for p in &mut perms {
            p.resize(idx, usize::MAX);
        }
        let table = CosetTable::new(perms)?;
        table.check_relators(ambient.relators())?;
        Ok((table, labels))
    }
}
