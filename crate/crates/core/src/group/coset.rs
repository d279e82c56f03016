//! Permutation actions of an ambient group on the cosets of a subgroup.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::word::{Letter, Word};

/// Left action of the ambient generators on the cosets `gamma_i H`, with
/// cosets numbered `0..index` and the subgroup itself at `0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetTable {
    perms: Vec<Vec<usize>>,
    #[serde(skip)]
    inv_perms: Vec<Vec<usize>>,
}

impl CosetTable {
    /// Checks that each entry is a bijection of a common set and that the
    /// action is transitive.
    pub fn new(perms: Vec<Vec<usize>>) -> Result<Self> {
        let n = perms.first().map_or(1, Vec::len);
        if n == 0 {
            return Err(Error::InvalidInput("coset table with zero cosets".into()));
        }
        let mut inv_perms = Vec::with_capacity(perms.len());
        for (g, p) in perms.iter().enumerate() {
            if p.len() != n {
                return Err(Error::InvalidInput(format!(
                    "permutation {} has {} points, expected {n}",
                    g + 1,
                    p.len()
                )));
            }
            let mut inv = vec![usize::MAX; n];
            for (i, &j) in p.iter().enumerate() {
                if j >= n || inv[j] != usize::MAX {
                    return Err(Error::InvalidInput(format!(
                        "permutation {} is not a bijection",
                        g + 1
                    )));
                }
                inv[j] = i;
            }
            inv_perms.push(inv);
        }
        let t = CosetTable { perms, inv_perms };
        if t.orbit_of_base().len() != n {
            return Err(Error::InvalidInput("coset action is not transitive".into()));
        }
        Ok(t)
    }

    /// From 1-based permutation images.
    pub fn from_one_based(perms: Vec<Vec<usize>>) -> Result<Self> {
        let shifted = perms
            .into_iter()
            .map(|p| {
                p.into_iter()
                    .map(|x| {
                        x.checked_sub(1)
                            .ok_or_else(|| Error::InvalidInput("coset labels start at 1".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(shifted)
    }

    pub fn to_one_based(&self) -> Vec<Vec<usize>> {
        self.perms.iter().map(|p| p.iter().map(|x| x + 1).collect()).collect()
    }

    /// Rebuild inverse permutations after deserialization.
    pub fn revalidated(self) -> Result<Self> {
        Self::new(self.perms)
    }

    pub fn index(&self) -> usize {
        self.perms.first().map_or(1, Vec::len)
    }

    pub fn ngens(&self) -> usize {
        self.perms.len()
    }

    pub fn perm(&self, g: usize) -> &[usize] {
        &self.perms[g]
    }

    pub fn act(&self, l: Letter, i: usize) -> usize {
        if l.inv {
            self.inv_perms[l.gen][i]
        } else {
            self.perms[l.gen][i]
        }
    }

    /// Action of the element `x1 ... xk`: the rightmost letter acts first.
    pub fn act_word(&self, w: &Word, i: usize) -> usize {
        w.letters().iter().rev().fold(i, |c, &l| self.act(l, c))
    }

    /// Permutation induced by a word.
    pub fn word_perm(&self, w: &Word) -> Vec<usize> {
        (0..self.index()).map(|i| self.act_word(w, i)).collect()
    }

    /// Every relator must fix every coset.
    pub fn check_relators(&self, relators: &[Word]) -> Result<()> {
        for (k, r) in relators.iter().enumerate() {
            if let Some(i) = (0..self.index()).find(|&i| self.act_word(r, i) != i) {
                return Err(Error::Invariant(format!(
                    "relator {} moves coset {}",
                    k + 1,
                    i + 1
                )));
            }
        }
        Ok(())
    }

    /// Letters in breadth-first order: generators in order, then inverses.
    pub fn bfs_letters(&self) -> Vec<Letter> {
        let n = self.ngens();
        (0..n)
            .map(|g| Letter::new(g, false))
            .chain((0..n).map(|g| Letter::new(g, true)))
            .collect()
    }

    /// Breadth-first spanning tree from coset 0: for each coset the word
    /// `w` with `w(0) = i`, plus the tree edges `(coset, generator)`.
    pub fn spanning_tree(&self) -> (Vec<Word>, Vec<(usize, usize)>) {
        let n = self.index();
        let mut reps: Vec<Option<Word>> = vec![None; n];
        reps[0] = Some(Word::empty());
        let mut tree = Vec::new();
        let mut queue = std::collections::VecDeque::from([0usize]);
        let letters = self.bfs_letters();
        while let Some(i) = queue.pop_front() {
            for &l in &letters {
                let j = self.act(l, i);
                if reps[j].is_none() {
                    let w = Word::from_letters(std::iter::once(l))
                        .concat(reps[i].as_ref().expect("visited"));
                    reps[j] = Some(w);
                    tree.push(if l.inv { (j, l.gen) } else { (i, l.gen) });
                    queue.push_back(j);
                }
            }
        }
        (reps.into_iter().map(|w| w.expect("transitive")).collect(), tree)
    }

    fn orbit_of_base(&self) -> Vec<usize> {
        let n = self.index();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0];
        let mut out = vec![0];
        while let Some(i) = stack.pop() {
            for g in 0..self.ngens() {
                for j in [self.perms[g][i], self.inv_perms[g][i]] {
                    if !seen[j] {
                        seen[j] = true;
                        out.push(j);
                        stack.push(j);
                    }
                }
            }
        }
        out
    }
}

/// Cycle decomposition of a permutation.
pub fn cycles(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut c = Vec::new();
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            c.push(i);
            i = perm[i];
        }
        out.push(c);
    }
    out
}

pub fn fixed_points(perm: &[usize]) -> usize {
    perm.iter().enumerate().filter(|(i, &j)| *i == j).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_tables() {
        assert!(CosetTable::new(vec![vec![0, 0]]).is_err());
        assert!(CosetTable::new(vec![vec![0, 1]]).is_err());
        assert!(CosetTable::from_one_based(vec![vec![0, 1]]).is_err());
        assert!(CosetTable::new(vec![vec![1, 0]]).is_ok());
    }

    #[test]
    fn word_action_is_right_to_left() {
        // a = (0 1 2), b = (1 2)
        let t = CosetTable::new(vec![vec![1, 2, 0], vec![0, 2, 1]]).unwrap();
        let ab = Word::from_letters([Letter::new(0, false), Letter::new(1, false)]);
        // b first: 0 -> 0, then a: 0 -> 1
        assert_eq!(t.act_word(&ab, 0), 1);
        assert_eq!(t.act_word(&ab.inverse(), 1), 0);
        let (reps, tree) = t.spanning_tree();
        assert_eq!(tree.len(), 2);
        for (i, w) in reps.iter().enumerate() {
            assert_eq!(t.act_word(w, 0), i);
        }
    }

    #[test]
    fn cycle_counts() {
        assert_eq!(cycles(&[1, 0, 2]).len(), 2);
        assert_eq!(fixed_points(&[1, 0, 2]), 1);
    }
}
