//! Finite presentations whose generators carry explicit matrix images.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::ring::Disc;
use crate::group::word::{Letter, Word};
use crate::{ProjMatrix, QuadInt};

/// Role of a generator in matrix-to-word rewriting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    /// `[[0,-1],[1,0]]`
    #[serde(rename = "S")]
    S,
    /// `[[1,1],[0,1]]`
    #[serde(rename = "T1")]
    T1,
    /// `[[1,w],[0,1]]`
    #[serde(rename = "Tw")]
    Tw,
    /// A diagonal matrix `diag(u, u^-1)` for a unit `u`.
    #[serde(rename = "diag")]
    Diag,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub matrix: ProjMatrix,
    pub role: Option<Role>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    disc: Disc,
    generators: Vec<Generator>,
    relators: Vec<Word>,
}

impl Presentation {
    /// Validates role tags and that every relator evaluates to the identity.
    pub fn new(disc: Disc, generators: Vec<Generator>, relators: Vec<Word>) -> Result<Self> {
        for g in &generators {
            if g.matrix.disc() != disc {
                return Err(Error::InvalidInput(format!(
                    "generator {} has discriminant {}, expected {}",
                    g.name,
                    g.matrix.disc(),
                    disc
                )));
            }
            if let Some(role) = g.role {
                check_role(role, &g.matrix).map_err(|m| {
                    Error::InvalidInput(format!("generator {} tagged {:?}: {}", g.name, role, m))
                })?;
            }
        }
        for (i, a) in generators.iter().enumerate() {
            if generators[..i].iter().any(|b| b.name == a.name) {
                return Err(Error::InvalidInput(format!("duplicate generator name {}", a.name)));
            }
        }
        let n = generators.len();
        if relators.iter().flat_map(|r| r.letters()).any(|l| l.gen >= n) {
            return Err(Error::InvalidInput("relator uses an undeclared generator".into()));
        }
        let p = Presentation { disc, generators, relators };
        for (k, r) in p.relators.iter().enumerate() {
            if !p.eval(r).is_identity() {
                return Err(Error::Invariant(format!(
                    "relator {} ({}) does not evaluate to the identity",
                    k + 1,
                    r.display(&p.names())
                )));
            }
        }
        Ok(p)
    }

    /// `PSL_2(Z) = <S, T | S^2, (S T)^3>`.
    pub fn modular_group() -> Self {
        let z = Disc::RATIONAL;
        let s = ProjMatrix::from_ints([[0, -1], [1, 0]], z).expect("nonsingular");
        let t = ProjMatrix::from_ints([[1, 1], [0, 1]], z).expect("nonsingular");
        let gens = vec![
            Generator { name: "S".into(), matrix: s, role: Some(Role::S) },
            Generator { name: "T".into(), matrix: t, role: Some(Role::T1) },
        ];
        let st = Word::gen(0).concat(&Word::gen(1));
        Presentation::new(z, gens, vec![Word::power_of(0, 2), st.pow(3)])
            .expect("standard presentation is valid")
    }

    pub fn disc(&self) -> Disc {
        self.disc
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn with_role(&self, role: Role) -> Option<usize> {
        self.generators.iter().position(|g| g.role == Some(role))
    }

    pub fn letter_matrix(&self, l: Letter) -> ProjMatrix {
        let m = &self.generators[l.gen].matrix;
        if l.inv {
            m.inverse()
        } else {
            m.clone()
        }
    }

    pub fn eval(&self, w: &Word) -> ProjMatrix {
        w.letters()
            .iter()
            .fold(ProjMatrix::identity(self.disc), |acc, &l| acc.mul(&self.letter_matrix(l)))
    }

    pub fn parse_word(&self, s: &str) -> Result<Word> {
        Word::parse(s, &self.names())
    }

    /// Roots of relators that are proper powers, with their orders. These
    /// are elements of finite order in the group.
    pub fn torsion_roots(&self) -> Vec<(Word, u32)> {
        let mut out: Vec<(Word, u32)> = Vec::new();
        for r in &self.relators {
            if let Some((w, k)) = r.cyclically_reduced().proper_root() {
                if !out.iter().any(|(v, _)| v.cyclic_key() == w.cyclic_key()) {
                    out.push((w, k));
                }
            }
        }
        out
    }
}

fn check_role(role: Role, m: &ProjMatrix) -> std::result::Result<(), String> {
    let disc = m.disc();
    let q = |a, b| QuadInt::small(a, b, disc);
    let expect = match role {
        Role::S => ProjMatrix::new([q(0, 0), q(-1, 0), q(1, 0), q(0, 0)]),
        Role::T1 => ProjMatrix::new([q(1, 0), q(1, 0), q(0, 0), q(1, 0)]),
        Role::Tw => {
            if disc.is_rational() {
                return Err("no w translation over Z".into());
            }
            ProjMatrix::new([q(1, 0), q(0, 1), q(0, 0), q(1, 0)])
        }
        Role::Diag => {
            let e = m.entries();
            return if e[1].is_zero() && e[2].is_zero() && m.in_ambient() {
                Ok(())
            } else {
                Err("not a diagonal element of the ambient group".into())
            };
        }
    }
    .map_err(|e| e.to_string())?;
    if *m == expect {
        Ok(())
    } else {
        Err(format!("expected {expect}, found {m}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modular_group_relators_hold() {
        let p = Presentation::modular_group();
        assert_eq!(p.ngens(), 2);
        let roots = p.torsion_roots();
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].1, 2);
        assert_eq!(roots[1].1, 3);
    }

    #[test]
    fn false_relator_is_rejected() {
        let p = Presentation::modular_group();
        let bad = Presentation::new(
            p.disc(),
            p.generators().to_vec(),
            vec![Word::power_of(1, 2)],
        );
        assert!(matches!(bad, Err(Error::Invariant(_))));
    }

    #[test]
    fn role_mismatch_is_rejected() {
        let z = Disc::RATIONAL;
        let g = Generator {
            name: "T".into(),
            matrix: ProjMatrix::from_ints([[1, 2], [0, 1]], z).unwrap(),
            role: Some(Role::T1),
        };
        assert!(Presentation::new(z, vec![g], vec![]).is_err());
    }
}
