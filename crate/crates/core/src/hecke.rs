//! Double coset decompositions `Gamma g^-1 Gamma = disjoint union of g_i Gamma`
//! and the Hecke operators they induce on `H^1` and `H_1`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::linalg::integer_roots;
use crate::group::subgroup::{dot, Cocycle, HomologyClass, SubgroupModel};
use crate::group::word::Letter;
use crate::{Int, IntMatrix, ProjMatrix};

pub const DEFAULT_CAP: usize = 10_000;

/// A commensurating element `g` with a display label such as `T_2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeElement {
    pub label: String,
    pub g: ProjMatrix,
}

impl HeckeElement {
    pub fn new(label: impl Into<String>, g: ProjMatrix) -> Self {
        HeckeElement { label: label.into(), g }
    }
}

/// Options for the breadth-first search over `Gamma / Gamma_{g^-1}`.
#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub cap: usize,
    /// Order in which subgroup generators are tried; defaults to file order.
    pub generator_order: Option<Vec<usize>>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { cap: DEFAULT_CAP, generator_order: None }
    }
}

/// Representatives `delta_i` of `Gamma / Gamma_{g^-1}`, where
/// `Gamma_{g^-1} = Gamma ∩ g^-1 Gamma g`, and `g_i = delta_i g^-1`.
#[derive(Clone, Debug)]
pub struct DoubleCosetDecomposition {
    pub element: HeckeElement,
    pub deltas: Vec<ProjMatrix>,
    pub reps: Vec<ProjMatrix>,
    rep_invs: Vec<ProjMatrix>,
}

impl DoubleCosetDecomposition {
    pub fn degree(&self) -> usize {
        self.deltas.len()
    }

    pub fn g(&self) -> &ProjMatrix {
        &self.element.g
    }

    /// Rebuild from stored `delta_i`, re-running both invariants.
    pub fn from_deltas(
        sub: &SubgroupModel,
        element: HeckeElement,
        deltas: Vec<ProjMatrix>,
    ) -> Result<Self> {
        let g_inv = element.g.inverse();
        let reps: Vec<ProjMatrix> = deltas.iter().map(|d| d.mul(&g_inv)).collect();
        let rep_invs = reps.iter().map(ProjMatrix::inverse).collect();
        let dec = DoubleCosetDecomposition { element, deltas, reps, rep_invs };
        dec.verify(sub)?;
        Ok(dec)
    }

    /// Pairwise disjointness and closure under the subgroup generators.
    pub fn verify(&self, sub: &SubgroupModel) -> Result<()> {
        for (i, d) in self.deltas.iter().enumerate() {
            if !sub.contains(d)? {
                return Err(Error::Invariant(format!("delta_{} is not in the subgroup", i + 1)));
            }
        }
        for i in 0..self.degree() {
            for j in 0..self.degree() {
                let same = sub.contains(&self.rep_invs[i].mul(&self.reps[j]))?;
                if same != (i == j) {
                    return Err(Error::Invariant(format!(
                        "cosets g_{} Gamma and g_{} Gamma are not disjoint",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        for s in sub.schreier_generators() {
            for i in 0..self.degree() {
                self.cocycle(sub, i, &s.matrix)?;
            }
        }
        Ok(())
    }

    /// `(gamma(i), t_i(gamma))` with `gamma g_i = g_{gamma(i)} t_i(gamma)`.
    pub fn cocycle(&self, sub: &SubgroupModel, i: usize, gamma: &ProjMatrix) -> Result<(usize, ProjMatrix)> {
        let x = gamma.mul(&self.reps[i]);
        for j in 0..self.degree() {
            let t = self.rep_invs[j].mul(&x);
            if sub.contains(&t)? {
                return Ok((j, t));
            }
        }
        Err(Error::Invariant(format!(
            "gamma g_{} lies in no coset g_j Gamma; decomposition is incomplete",
            i + 1
        )))
    }

    /// Factorization data `t_g(u_gamma) = tau(gamma) diag(u_{t_k(gamma)})`:
    /// the permutation `k -> gamma(k)` and the elements `t_k(gamma)`.
    pub fn covariant_rep_factor(
        &self,
        sub: &SubgroupModel,
        gamma: &ProjMatrix,
    ) -> Result<(Vec<usize>, Vec<ProjMatrix>)> {
        let mut perm = Vec::with_capacity(self.degree());
        let mut diag = Vec::with_capacity(self.degree());
        for i in 0..self.degree() {
            let (j, t) = self.cocycle(sub, i, gamma)?;
            perm.push(j);
            diag.push(t);
        }
        Ok((perm, diag))
    }
}

/// Breadth-first enumeration of `Gamma / Gamma_{g^-1}` starting at the
/// identity, over the subgroup generators and then their inverses.
pub fn double_coset_reps(
    sub: &SubgroupModel,
    element: &HeckeElement,
    opts: &SearchOptions,
) -> Result<DoubleCosetDecomposition> {
    if opts.cap == 0 {
        return Err(Error::InvalidInput("cap must be at least 1".into()));
    }
    let g = &element.g;
    if g.disc() != sub.ambient().disc() {
        return Err(Error::InvalidInput("Hecke element over the wrong field".into()));
    }
    let g_inv = g.inverse();
    let gens = sub.schreier_generators();
    let order: Vec<usize> = match &opts.generator_order {
        Some(o) => {
            let mut sorted = o.clone();
            sorted.sort_unstable();
            if sorted != (0..gens.len()).collect::<Vec<_>>() {
                return Err(Error::InvalidInput("generator order is not a permutation".into()));
            }
            o.clone()
        }
        None => (0..gens.len()).collect(),
    };
    let letters: Vec<Letter> = order
        .iter()
        .map(|&k| Letter::new(k, false))
        .chain(order.iter().map(|&k| Letter::new(k, true)))
        .collect();
    let letter_mats: Vec<ProjMatrix> = letters
        .iter()
        .map(|l| {
            let m = &gens[l.gen].matrix;
            if l.inv {
                m.inverse()
            } else {
                m.clone()
            }
        })
        .collect();
    // delta ~ delta' iff g delta^-1 delta' g^-1 in Gamma
    let mut deltas = vec![ProjMatrix::identity(g.disc())];
    let mut delta_invs = vec![ProjMatrix::identity(g.disc())];
    let mut queue = VecDeque::from([0usize]);
    while let Some(k) = queue.pop_front() {
        for x in &letter_mats {
            let cand = x.mul(&deltas[k]);
            let mut known = false;
            for di in &delta_invs {
                if sub.contains(&g.mul(di).mul(&cand).mul(&g_inv))? {
                    known = true;
                    break;
                }
            }
            if !known {
                if deltas.len() >= opts.cap {
                    return Err(Error::CapExceeded {
                        cap: opts.cap,
                        context: format!("enumerating cosets for {}", element.label),
                    });
                }
                delta_invs.push(cand.inverse());
                deltas.push(cand);
                queue.push_back(deltas.len() - 1);
            }
        }
    }
    DoubleCosetDecomposition::from_deltas(sub, element.clone(), deltas)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Cohomology,
    Homology,
}

/// Matrix of `T_g` acting on column coordinate vectors in the dual bases
/// of [`SubgroupModel::h1_basis`] / [`SubgroupModel::homology_basis`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeMatrix {
    pub label: String,
    pub side: Side,
    pub matrix: IntMatrix,
}

impl HeckeMatrix {
    /// Characteristic polynomial, constant term first.
    pub fn char_poly(&self) -> Result<Vec<Int>> {
        self.matrix.char_poly()
    }

    /// Integer eigenvalues with multiplicity, and the cofactor with no
    /// integer roots.
    pub fn integer_eigenvalues(&self) -> Result<(Vec<Int>, Vec<Int>)> {
        Ok(integer_roots(&self.char_poly()?))
    }
}

/// A decomposition together with the transfer sums on Schreier generators.
#[derive(Clone, Debug)]
pub struct HeckeOperator {
    pub decomposition: DoubleCosetDecomposition,
    /// `sums[l]` = exponent vector of `sum_i [t_i(s_l)]`.
    sums: Vec<Vec<Int>>,
}

impl HeckeOperator {
    pub fn new(sub: &SubgroupModel, decomposition: DoubleCosetDecomposition) -> Result<Self> {
        let sums = sub
            .schreier_generators()
            .iter()
            .map(|s| transfer_sum(sub, &decomposition, &s.matrix))
            .collect::<Result<Vec<_>>>()?;
        Ok(HeckeOperator { decomposition, sums })
    }

    pub fn label(&self) -> &str {
        &self.decomposition.element.label
    }

    pub fn degree(&self) -> usize {
        self.decomposition.degree()
    }

    /// `(T_g c)(gamma) = sum_i c(t_i(gamma))`.
    pub fn apply_cocycle(&self, sub: &SubgroupModel, c: &Cocycle) -> Result<Cocycle> {
        let values: Vec<Int> = self.sums.iter().map(|e| dot(e, &c.values)).collect();
        sub.cocycle_from_values(values)
    }

    /// `T_g` on `H^1` in the dual basis; column `k` is the image of `c_k`.
    pub fn matrix_h1(&self, sub: &SubgroupModel) -> Result<HeckeMatrix> {
        let basis = sub.h1_basis();
        let r = basis.len();
        let mut m = IntMatrix::zeros(r, r);
        for (k, c) in basis.iter().enumerate() {
            let img = self.apply_cocycle(sub, c)?;
            for (j, v) in img.coords.into_iter().enumerate() {
                m[(j, k)] = v;
            }
        }
        Ok(HeckeMatrix { label: self.label().to_string(), side: Side::Cohomology, matrix: m })
    }

    /// `T_g` on the free part of `H_1`, pushing each basis element `delta`
    /// to `sum_i [t_i(delta)]` directly.
    pub fn matrix_h1_homology(&self, sub: &SubgroupModel, basis: &[HomologyClass]) -> Result<HeckeMatrix> {
        let r = basis.len();
        let mut m = IntMatrix::zeros(r, r);
        for (k, h) in basis.iter().enumerate() {
            let e = transfer_sum(sub, &self.decomposition, &h.element)?;
            let coords = sub.abelianization().free_coordinates(&e);
            if coords.len() != r {
                return Err(Error::DimensionMismatch("homology basis does not span the free part".into()));
            }
            for (j, v) in coords.into_iter().enumerate() {
                m[(j, k)] = v;
            }
        }
        Ok(HeckeMatrix { label: self.label().to_string(), side: Side::Homology, matrix: m })
    }
}

/// Exponent vector of `sum_i [t_i(gamma)]`.
fn transfer_sum(sub: &SubgroupModel, dec: &DoubleCosetDecomposition, gamma: &ProjMatrix) -> Result<Vec<Int>> {
    let mut acc = vec![Int::from(0); sub.presentation().ngens()];
    for i in 0..dec.degree() {
        let (_, t) = dec.cocycle(sub, i, gamma)?;
        for (a, b) in acc.iter_mut().zip(sub.abelianize(&t)?) {
            *a += b;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ring::Disc;
    use crate::group::{CongruenceKind, Presentation};
    use crate::QuadInt;

    fn diag(a: i64, d: i64) -> HeckeElement {
        HeckeElement::new("g", ProjMatrix::from_ints([[a, 0], [0, d]], Disc::RATIONAL).unwrap())
    }

    #[test]
    fn identity_has_degree_one() {
        let p = Presentation::modular_group();
        let sub = SubgroupModel::whole(&p).unwrap();
        let dec = double_coset_reps(&sub, &diag(1, 1), &SearchOptions::default()).unwrap();
        assert_eq!(dec.degree(), 1);
        assert!(dec.reps[0].is_identity());
    }

    #[test]
    fn full_modular_group_t2_has_degree_three() {
        let p = Presentation::modular_group();
        let sub = SubgroupModel::whole(&p).unwrap();
        let dec = double_coset_reps(&sub, &diag(1, 2), &SearchOptions::default()).unwrap();
        assert_eq!(dec.degree(), 3);
    }

    #[test]
    fn cap_is_enforced() {
        let p = Presentation::modular_group();
        let sub = SubgroupModel::congruence(&p, CongruenceKind::Gamma0, QuadInt::small(11, 0, Disc::RATIONAL))
            .unwrap();
        let opts = SearchOptions { cap: 2, generator_order: None };
        assert!(matches!(
            double_coset_reps(&sub, &diag(1, 2), &opts),
            Err(Error::CapExceeded { cap: 2, .. })
        ));
    }
}
