//! Matrix-to-word rewriting by Euclidean elementary-matrix decomposition.

use std::collections::{HashMap, VecDeque};

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::group::presentation::{Presentation, Role};
use crate::group::word::{Letter, Word};
use crate::{ProjMatrix, QuadInt};

/// Writes elements of `PSL_2(O_d)` as words in a role-tagged presentation.
#[derive(Clone, Debug)]
pub struct Rewriter {
    s: usize,
    t1: usize,
    tw: Option<usize>,
    /// Words for `diag(u, u^-1)`, keyed by the projective matrix.
    diag_words: HashMap<ProjMatrix, Word>,
}

/// Longest word searched when expressing unit diagonals.
const DIAG_SEARCH_DEPTH: usize = 6;

impl Rewriter {
    pub fn new(p: &Presentation) -> Result<Self> {
        let need = |r: Role| {
            p.with_role(r).ok_or_else(|| {
                Error::InvalidInput(format!("presentation has no generator tagged {r:?}"))
            })
        };
        let s = need(Role::S)?;
        let t1 = need(Role::T1)?;
        let tw = if p.disc().is_rational() { None } else { Some(need(Role::Tw)?) };
        let diag_gens: Vec<usize> = (0..p.ngens())
            .filter(|&g| p.generators()[g].role == Some(Role::Diag))
            .collect();
        let mut diag_words = HashMap::new();
        let id = ProjMatrix::identity(p.disc());
        diag_words.insert(id.clone(), Word::empty());
        let mut queue = VecDeque::from([(id, Word::empty())]);
        while let Some((m, w)) = queue.pop_front() {
            if w.len() >= DIAG_SEARCH_DEPTH {
                continue;
            }
            for &g in &diag_gens {
                for inv in [false, true] {
                    let l = Letter::new(g, inv);
                    let next = m.mul(&p.letter_matrix(l));
                    if !diag_words.contains_key(&next) {
                        let mut nw = w.clone();
                        nw.push(l);
                        diag_words.insert(next.clone(), nw.clone());
                        queue.push_back((next, nw));
                    }
                }
            }
        }
        Ok(Rewriter { s, t1, tw, diag_words })
    }

    /// Word `w` with `eval(w) = m`.
    pub fn rewrite(&self, m: &ProjMatrix) -> Result<Word> {
        let [mut a, mut b, mut c, mut d] = m
            .sl2_entries()
            .ok_or_else(|| Error::NotInAmbient(m.to_string()))?;
        let mut word = Word::empty();
        while !c.is_zero() {
            let (q, r) = a.div_rem_euclid(&c)?;
            // M = T(q) S M' with M' = S^-1 T(-q) M
            self.push_translation(&mut word, &q)?;
            word.push(Letter::new(self.s, false));
            let nb = b.sub(&q.mul(&d));
            let (na, nc, nd) = (c.clone(), r.neg(), nb.neg());
            b = d;
            a = na;
            c = nc;
            d = nd;
        }
        // M = diag(a, d) T(b / a), a d = 1
        let disc = m.disc();
        let zero = QuadInt::zero(disc);
        let diag = ProjMatrix::new([a.clone(), zero.clone(), zero, d.clone()])?;
        let dw = self.diag_words.get(&diag).ok_or_else(|| {
            Error::InvalidInput(format!(
                "no word for unit diagonal {diag}; add generators tagged diag"
            ))
        })?;
        word.append(dw);
        let y = b.mul(&d);
        self.push_translation(&mut word, &y)?;
        Ok(word)
    }

    fn push_translation(&self, w: &mut Word, x: &QuadInt) -> Result<()> {
        let small = |v: &crate::Int| {
            v.to_i64()
                .filter(|k| k.unsigned_abs() < 1 << 20)
                .ok_or_else(|| Error::InvalidInput("translation exponent too large".into()))
        };
        let ka = small(&x.a)?;
        w.append(&Word::power_of(self.t1, ka));
        if !x.b.is_zero() {
            let tw = self.tw.ok_or_else(|| Error::InvalidInput("irrational translation over Z".into()))?;
            w.append(&Word::power_of(tw, small(&x.b)?));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ring::Disc;

    #[test]
    fn modular_examples() {
        let p = Presentation::modular_group();
        let rw = Rewriter::new(&p).unwrap();
        let z = Disc::RATIONAL;
        let id = ProjMatrix::identity(z);
        assert!(rw.rewrite(&id).unwrap().is_empty());
        let t5 = ProjMatrix::from_ints([[1, 5], [0, 1]], z).unwrap();
        assert_eq!(rw.rewrite(&t5).unwrap(), Word::power_of(1, 5));
        let m = ProjMatrix::from_ints([[2, 1], [1, 1]], z).unwrap();
        let w = rw.rewrite(&m).unwrap();
        assert_eq!(p.eval(&w), m);
        let bad = ProjMatrix::from_ints([[1, 0], [0, 2]], z).unwrap();
        assert!(matches!(rw.rewrite(&bad), Err(Error::NotInAmbient(_))));
    }
}
