//! K-theory and K-homology of the three C*-algebras attached to an
//! arithmetic group: `C_0(M)`, the reduced group algebra `C*_r(Gamma)` and
//! the boundary crossed product `C(dH) x Gamma`.
//!
//! Groups are assembled from group cohomology. Generators carry symbolic
//! tags naming the cycle they stand for; only free generators are tagged,
//! torsion lives in the invariants.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Cocycle, GroupInvariants, HomologyClass, SubgroupModel};
use crate::hecke::HeckeMatrix;
use crate::{Int, IntMatrix, ProjMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Algebra {
    #[serde(rename = "C0(M)")]
    C0M,
    #[serde(rename = "CrGamma")]
    Reduced,
    Boundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    /// Lattices in `PSL_2(R)`.
    Fuchsian,
    /// Lattices in `PSL_2(C)`.
    Bianchi,
}

/// K-homology (`K^i`) or K-theory (`K_i`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variance {
    Homology,
    Theory,
}

/// Symbolic name of a free generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum GeneratorTag {
    /// The Dirac class `[D_{c,s}]` of the `index`-th basis cocycle. `copy`
    /// separates the two summands of `Z^2` coefficients.
    CocycleClass { index: usize, copy: usize },
    /// The unitary `[u_delta]` of the `index`-th homology basis element.
    UnitaryClass { index: usize },
    /// The point class `[pt]`, from `H^0`.
    PointClass { copy: usize },
    /// A free generator of `H^2`.
    H2Class { index: usize, copy: usize },
    /// A properly embedded surface, matched with the `index`-th basis
    /// cocycle by Lefschetz duality.
    SurfaceClass { index: usize },
}

/// Abelian groups indexed by degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedAbelianGroup {
    pub degrees: Vec<GroupInvariants>,
}

impl GradedAbelianGroup {
    pub fn new(degrees: Vec<GroupInvariants>) -> Result<Self> {
        for (i, g) in degrees.iter().enumerate() {
            let two = Int::from(2);
            if g.divisors.iter().any(|d| *d < two) {
                return Err(Error::InvalidInput(format!("degree {i}: divisor below 2")));
            }
            if g.divisors.windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
                return Err(Error::InvalidInput(format!("degree {i}: divisors do not form a chain")));
            }
        }
        Ok(GradedAbelianGroup { degrees })
    }

    /// `H^0 = Z`, `H^1 = Z^r`, `H^2` as given.
    pub fn cohomology(r: usize, h2: GroupInvariants) -> Result<Self> {
        Self::new(vec![GroupInvariants::free(1), GroupInvariants::free(r), h2])
    }

    pub fn degree(&self, i: usize) -> GroupInvariants {
        self.degrees.get(i).cloned().unwrap_or_else(GroupInvariants::trivial)
    }

    /// Alternating sum of ranks.
    pub fn euler_characteristic(&self) -> i64 {
        self.degrees
            .iter()
            .enumerate()
            .map(|(i, g)| if i % 2 == 0 { g.free_rank as i64 } else { -(g.free_rank as i64) })
            .sum()
    }
}

/// Both ends of a short exact sequence `0 -> sub -> K -> quotient -> 0`
/// whose splitting is not known.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extension {
    pub sub: GroupInvariants,
    pub quotient: GroupInvariants,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KGroupModel {
    pub algebra: Algebra,
    pub variance: Variance,
    pub parity: u8,
    /// When `extension_ambiguous`, only the free rank is meaningful and the
    /// torsion is described by `extension`.
    pub invariants: GroupInvariants,
    pub extension_ambiguous: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<Extension>,
    pub generators: Vec<GeneratorTag>,
}

impl KGroupModel {
    pub fn rank(&self) -> usize {
        self.invariants.free_rank
    }

    /// Every free generator is tagged exactly once.
    pub fn check(&self) -> Result<()> {
        if self.generators.len() != self.rank() {
            return Err(Error::Invariant(format!(
                "{:?}^{}: rank {} but {} tagged generators",
                self.algebra,
                self.parity,
                self.rank(),
                self.generators.len()
            )));
        }
        if self.extension_ambiguous != self.extension.is_some() {
            return Err(Error::Invariant("extension data out of sync".into()));
        }
        Ok(())
    }

    fn plain(algebra: Algebra, parity: u8, invariants: GroupInvariants, generators: Vec<GeneratorTag>) -> Self {
        KGroupModel {
            algebra,
            variance: Variance::Homology,
            parity,
            invariants,
            extension_ambiguous: false,
            extension: None,
            generators,
        }
    }

    /// Extension of `quotient` by `sub`, split when `quotient` is free.
    fn extension_of(
        algebra: Algebra,
        parity: u8,
        sub: GroupInvariants,
        quotient: GroupInvariants,
        generators: Vec<GeneratorTag>,
    ) -> Self {
        let free_rank = sub.free_rank + quotient.free_rank;
        if quotient.has_torsion() {
            KGroupModel {
                algebra,
                variance: Variance::Homology,
                parity,
                invariants: GroupInvariants::free(free_rank),
                extension_ambiguous: true,
                extension: Some(Extension { sub, quotient }),
                generators,
            }
        } else {
            let mut divisors = sub.divisors;
            divisors.extend(quotient.divisors);
            Self::plain(algebra, parity, GroupInvariants { free_rank, divisors }, generators)
        }
    }

    pub fn find(models: &[KGroupModel], algebra: Algebra, variance: Variance, parity: u8) -> Option<&Self> {
        models
            .iter()
            .find(|m| m.algebra == algebra && m.variance == variance && m.parity == parity)
    }
}

fn cocycle_tags(r: usize, copy: usize) -> impl Iterator<Item = GeneratorTag> {
    (0..r).map(move |index| GeneratorTag::CocycleClass { index, copy })
}

fn h2_tags(t: usize, copy: usize) -> impl Iterator<Item = GeneratorTag> {
    (0..t).map(move |index| GeneratorTag::H2Class { index, copy })
}

fn double(g: &GroupInvariants) -> GroupInvariants {
    let mut divisors: Vec<Int> = g.divisors.iter().flat_map(|d| [d.clone(), d.clone()]).collect();
    divisors.sort();
    GroupInvariants { free_rank: 2 * g.free_rank, divisors }
}

/// K-homology of `C_0(M)`, `C*_r(Gamma)` and the boundary crossed product
/// in both parities, from `H^0, H^1, H^2` of `Gamma`.
pub fn assemble_k_groups(h: &GradedAbelianGroup, geometry: Geometry) -> Result<Vec<KGroupModel>> {
    if h.degree(0) != GroupInvariants::free(1) {
        return Err(Error::InvalidInput(format!("H^0 must be Z, got {}", h.degree(0))));
    }
    let h1 = h.degree(1);
    if h1.has_torsion() {
        return Err(Error::InvalidInput(format!("H^1 with integer coefficients is free, got {h1}")));
    }
    let h2 = h.degree(2);
    let r = h1.free_rank;
    let point = |copy| GeneratorTag::PointClass { copy };
    let models = match geometry {
        Geometry::Fuchsian => {
            if !h2.is_trivial() {
                return Err(Error::InvalidInput(format!("fuchsian input needs H^2 = 0, got {h2}")));
            }
            let boundary = |parity: u8| {
                let copy = parity as usize;
                let tags = std::iter::once(point(copy)).chain(cocycle_tags(r, copy)).collect();
                KGroupModel::plain(Algebra::Boundary, parity, GroupInvariants::free(1 + r), tags)
            };
            vec![
                KGroupModel::plain(Algebra::Reduced, 0, GroupInvariants::free(1), vec![point(0)]),
                KGroupModel::plain(Algebra::Reduced, 1, h1.clone(), cocycle_tags(r, 0).collect()),
                KGroupModel::plain(Algebra::C0M, 0, GroupInvariants::free(1), vec![point(0)]),
                KGroupModel::plain(Algebra::C0M, 1, h1.clone(), cocycle_tags(r, 0).collect()),
                boundary(0),
                boundary(1),
            ]
        }
        Geometry::Bianchi => {
            let t = h2.free_rank;
            let even_tags = |copy| std::iter::once(point(copy)).chain(h2_tags(t, copy));
            let h0 = GroupInvariants::free(1);
            vec![
                KGroupModel::extension_of(Algebra::Reduced, 0, h0.clone(), h2.clone(), even_tags(0).collect()),
                KGroupModel::plain(Algebra::Reduced, 1, h1.clone(), cocycle_tags(r, 0).collect()),
                KGroupModel::plain(Algebra::C0M, 0, h1.clone(), cocycle_tags(r, 0).collect()),
                KGroupModel::extension_of(Algebra::C0M, 1, h0.clone(), h2.clone(), even_tags(0).collect()),
                KGroupModel::extension_of(
                    Algebra::Boundary,
                    0,
                    double(&h0),
                    double(&h2),
                    even_tags(0).chain(even_tags(1)).collect(),
                ),
                KGroupModel::plain(
                    Algebra::Boundary,
                    1,
                    double(&h1),
                    cocycle_tags(r, 0).chain(cocycle_tags(r, 1)).collect(),
                ),
            ]
        }
    };
    for m in &models {
        m.check()?;
    }
    Ok(models)
}

/// Odd boundary K-homology as `H^1 + H_2(M, dM)`, the second summand
/// identified with `H^1` by Lefschetz duality (identity transport).
pub fn boundary_duality_model(h1: &GroupInvariants) -> Result<KGroupModel> {
    if h1.has_torsion() {
        return Err(Error::InvalidInput(format!("H^1 with integer coefficients is free, got {h1}")));
    }
    let r = h1.free_rank;
    let tags = cocycle_tags(r, 0)
        .chain((0..r).map(|index| GeneratorTag::SurfaceClass { index }))
        .collect();
    let m = KGroupModel::plain(Algebra::Boundary, 1, GroupInvariants::free(2 * r), tags);
    m.check()?;
    Ok(m)
}

/// K-theory `K_1(C*_r(Gamma))` on the free homology basis.
pub fn unitary_model(h1: &GroupInvariants) -> KGroupModel {
    let tags = (0..h1.free_rank).map(|index| GeneratorTag::UnitaryClass { index }).collect();
    KGroupModel {
        variance: Variance::Theory,
        ..KGroupModel::plain(Algebra::Reduced, 1, GroupInvariants::free(h1.free_rank), tags)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankIdentity {
    pub parity: u8,
    pub boundary: usize,
    /// Rank of `K^{i+1}(C_0(M))`.
    pub c0m_shifted: usize,
    pub reduced: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GysinReport {
    pub rank_identities: Vec<RankIdentity>,
    /// Alternating sum of cohomology ranks.
    pub euler_characteristic: i64,
    /// `Eul_0 = chi [pt]`; `Eul_1` vanishes identically.
    pub eul0_coefficient: i64,
    pub eul1_zero: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler_expected: Option<i64>,
    pub euler_consistent: bool,
}

impl GysinReport {
    pub fn ranks_hold(&self) -> bool {
        self.rank_identities.iter().all(|r| r.holds)
    }
}

/// Rank additivity `K^i(B) = K^{i+1}(C_0(M)) + K^i(C*_r)` and the Euler
/// map. `euler_expected` is the Euler characteristic of `M` when known
/// from geometry (0 for a cusped hyperbolic 3-manifold).
pub fn gysin_check(models: &[KGroupModel], h: &GradedAbelianGroup, euler_expected: Option<i64>) -> Result<GysinReport> {
    let rank = |a, p| {
        KGroupModel::find(models, a, Variance::Homology, p)
            .map(KGroupModel::rank)
            .ok_or_else(|| Error::InvalidInput(format!("model set lacks {a:?}^{p}")))
    };
    let mut rank_identities = Vec::new();
    for parity in 0..2u8 {
        let boundary = rank(Algebra::Boundary, parity)?;
        let c0m_shifted = rank(Algebra::C0M, 1 - parity)?;
        let reduced = rank(Algebra::Reduced, parity)?;
        rank_identities.push(RankIdentity {
            parity,
            boundary,
            c0m_shifted,
            reduced,
            holds: boundary == c0m_shifted + reduced,
        });
    }
    let chi = h.euler_characteristic();
    Ok(GysinReport {
        rank_identities,
        euler_characteristic: chi,
        eul0_coefficient: chi,
        eul1_zero: true,
        euler_expected,
        euler_consistent: euler_expected.is_none_or(|e| e == chi),
    })
}

/// Rank of odd boundary K-homology from `Z^2` coefficients against the
/// duality model.
pub fn boundary_rank_cross_check(models: &[KGroupModel], duality: &KGroupModel) -> bool {
    KGroupModel::find(models, Algebra::Boundary, Variance::Homology, 1)
        .is_some_and(|m| m.rank() == duality.rank())
}

/// Norm of a cocycle: the gcd of its values, infinite for the zero cocycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CocycleNorm {
    Finite(Int),
    Infinite,
}

impl CocycleNorm {
    pub fn value(&self) -> Option<&Int> {
        match self {
            CocycleNorm::Finite(n) => Some(n),
            CocycleNorm::Infinite => None,
        }
    }
}

/// `c = |c| c_norm` with `c_norm` primitive. The zero cocycle is returned
/// unchanged with infinite norm.
pub fn normalize_cocycle(c: &Cocycle) -> (CocycleNorm, Cocycle) {
    let g = c.values.iter().fold(Int::zero(), |g, v| g.gcd(v));
    if g.is_zero() {
        return (CocycleNorm::Infinite, c.clone());
    }
    let div = |v: &Vec<Int>| v.iter().map(|x| x / &g).collect::<Vec<_>>();
    let norm = Cocycle { coords: div(&c.coords), values: div(&c.values) };
    (CocycleNorm::Finite(g), norm)
}

/// `<[u_delta], [D_c]> = c(delta)`.
pub fn index_pairing(sub: &SubgroupModel, c: &Cocycle, delta: &ProjMatrix) -> Result<Int> {
    sub.evaluate(c, delta)
}

/// Index of the compressed shift `n -> n + k` on `l^2` of the non-positive
/// modes, computed from a finite window.
///
/// Columns are the modes `[-N, N]`, rows their images `[-N + k, N + k]`,
/// so the truncation edge carries no kernel or cokernel. Kernel and
/// cokernel dimensions come from the exact rank of the 0/1 matrix.
pub fn fredholm_index_oracle(k: i64, window: usize) -> Result<i64> {
    let n = window as i64;
    if n <= k.abs() + 1 {
        return Err(Error::InvalidInput(format!("window {window} too small for shift {k}")));
    }
    let size = 2 * window + 1;
    let mut m = IntMatrix::zeros(size, size);
    for col in 0..size {
        let mode = col as i64 - n;
        let image = mode + k;
        if mode <= 0 && image <= 0 {
            let row = (image - (k - n)) as usize;
            m[(row, col)] = Int::one();
        }
    }
    let domain = (0..size).filter(|&c| c as i64 - n <= 0).count();
    let codomain = (0..size).filter(|&r| r as i64 + k - n <= 0).count();
    let rank = m.rank();
    Ok((domain - rank) as i64 - (codomain - rank) as i64)
}

/// Integer matrix of pairings between K-theory and K-homology generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingMatrix {
    /// Entry `(j, k)` is `c_k(delta_j)`.
    pub matrix: IntMatrix,
}

pub fn pairing_matrix(sub: &SubgroupModel, cocycles: &[Cocycle], homology: &[HomologyClass]) -> Result<PairingMatrix> {
    let mut m = IntMatrix::zeros(homology.len(), cocycles.len());
    for (j, h) in homology.iter().enumerate() {
        for (k, c) in cocycles.iter().enumerate() {
            m[(j, k)] = index_pairing(sub, c, &h.element)?;
        }
    }
    Ok(PairingMatrix { matrix: m })
}

/// `(T on H_1)^T P = P (T on H^1)`.
pub fn hecke_selfadjoint_check(t_h1: &HeckeMatrix, t_homology: &HeckeMatrix, p: &PairingMatrix) -> Result<bool> {
    let lhs = t_homology.matrix.transpose().mul(&p.matrix)?;
    let rhs = p.matrix.mul(&t_h1.matrix)?;
    Ok(lhs == rhs)
}

/// Hecke data needed to act on tagged generators.
#[derive(Clone, Copy, Debug)]
pub struct HeckeBlocks<'a> {
    pub h1: &'a IntMatrix,
    pub homology: Option<&'a IntMatrix>,
    pub h2: Option<&'a IntMatrix>,
    /// Degree of the double coset decomposition.
    pub degree: usize,
}

/// Matrix of `T_g` on the tagged generators of a model; column `k` is the
/// image of the `k`-th generator.
pub fn hecke_on_k_groups(model: &KGroupModel, blocks: &HeckeBlocks) -> Result<IntMatrix> {
    let gens = &model.generators;
    let pos = |t: &GeneratorTag| {
        gens.iter()
            .position(|g| g == t)
            .ok_or_else(|| Error::Invariant(format!("image tag {t:?} missing from model")))
    };
    let missing = |what: &str| Error::InvalidInput(format!("no Hecke matrix on {what}"));
    let mut out = IntMatrix::zeros(gens.len(), gens.len());
    for (col, tag) in gens.iter().enumerate() {
        let (block, index): (&IntMatrix, usize) = match *tag {
            GeneratorTag::PointClass { .. } => {
                out[(col, col)] = Int::from(blocks.degree);
                continue;
            }
            GeneratorTag::CocycleClass { index, .. } | GeneratorTag::SurfaceClass { index } => (blocks.h1, index),
            GeneratorTag::UnitaryClass { index } => (blocks.homology.ok_or_else(|| missing("H_1"))?, index),
            GeneratorTag::H2Class { index, .. } => (blocks.h2.ok_or_else(|| missing("H^2"))?, index),
        };
        if index >= block.cols() {
            return Err(Error::DimensionMismatch(format!("{tag:?} outside a {}-column block", block.cols())));
        }
        for j in 0..block.rows() {
            let v = &block[(j, index)];
            if v.is_zero() {
                continue;
            }
            let image = match *tag {
                GeneratorTag::CocycleClass { copy, .. } => GeneratorTag::CocycleClass { index: j, copy },
                GeneratorTag::SurfaceClass { .. } => GeneratorTag::SurfaceClass { index: j },
                GeneratorTag::UnitaryClass { .. } => GeneratorTag::UnitaryClass { index: j },
                GeneratorTag::H2Class { copy, .. } => GeneratorTag::H2Class { index: j, copy },
                GeneratorTag::PointClass { .. } => unreachable!(),
            };
            out[(pos(&image)?, col)] = v.clone();
        }
    }
    Ok(out)
}

/// Largest absolute entry, for reports.
pub fn max_abs_entry(m: &IntMatrix) -> Option<i64> {
    m.to_rows().iter().flatten().map(|v| v.abs()).max().and_then(|v| v.to_i64())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(r: usize, t: usize, tors: &[i64]) -> GradedAbelianGroup {
        let h2 = GroupInvariants { free_rank: t, divisors: tors.iter().map(|&d| Int::from(d)).collect() };
        GradedAbelianGroup::cohomology(r, h2).unwrap()
    }

    #[test]
    fn fuchsian_ranks() {
        let ms = assemble_k_groups(&h(3, 0, &[]), Geometry::Fuchsian).unwrap();
        let r = |a, p| KGroupModel::find(&ms, a, Variance::Homology, p).unwrap().rank();
        assert_eq!((r(Algebra::Reduced, 0), r(Algebra::Reduced, 1)), (1, 3));
        assert_eq!((r(Algebra::Boundary, 0), r(Algebra::Boundary, 1)), (4, 4));
        assert!(gysin_check(&ms, &h(3, 0, &[]), None).unwrap().ranks_hold());
    }

    #[test]
    fn bianchi_torsion_is_ambiguous() {
        let input = h(2, 1, &[2]);
        let ms = assemble_k_groups(&input, Geometry::Bianchi).unwrap();
        let k0 = KGroupModel::find(&ms, Algebra::Reduced, Variance::Homology, 0).unwrap();
        assert!(k0.extension_ambiguous);
        assert_eq!(k0.rank(), 2);
        let b1 = KGroupModel::find(&ms, Algebra::Boundary, Variance::Homology, 1).unwrap();
        assert_eq!(b1.rank(), 4);
        assert!(!b1.extension_ambiguous);
        let rep = gysin_check(&ms, &input, Some(0)).unwrap();
        assert!(rep.ranks_hold());
        assert_eq!(rep.euler_characteristic, 0);
        assert!(rep.euler_consistent);
    }

    #[test]
    fn trivial_input() {
        let ms = assemble_k_groups(&h(0, 0, &[]), Geometry::Bianchi).unwrap();
        let k = |p| KGroupModel::find(&ms, Algebra::Reduced, Variance::Homology, p).unwrap();
        assert_eq!(k(0).invariants, GroupInvariants::free(1));
        assert!(k(1).invariants.is_trivial());
        assert_eq!(boundary_duality_model(&GroupInvariants::trivial()).unwrap().rank(), 0);
    }

    #[test]
    fn rejects_bad_input() {
        let bad = GradedAbelianGroup::new(vec![GroupInvariants::free(2)]).unwrap();
        assert!(assemble_k_groups(&bad, Geometry::Bianchi).is_err());
        assert!(assemble_k_groups(&h(1, 1, &[]), Geometry::Fuchsian).is_err());
        let chain = GroupInvariants { free_rank: 0, divisors: vec![Int::from(2), Int::from(3)] };
        assert!(GradedAbelianGroup::new(vec![chain]).is_err());
    }

    #[test]
    fn fredholm_examples() {
        assert_eq!(fredholm_index_oracle(0, 4).unwrap(), 0);
        assert_eq!(fredholm_index_oracle(3, 16).unwrap(), 3);
        assert_eq!(fredholm_index_oracle(-2, 16).unwrap(), -2);
        assert!(fredholm_index_oracle(5, 6).is_err());
    }

    #[test]
    fn normalization() {
        let c = Cocycle { coords: vec![Int::from(2), Int::from(-4)], values: vec![2, 4, 6].into_iter().map(Int::from).collect() };
        let (n, cn) = normalize_cocycle(&c);
        assert_eq!(n, CocycleNorm::Finite(Int::from(2)));
        assert_eq!(cn.values, vec![Int::from(1), Int::from(2), Int::from(3)]);
        assert_eq!(normalize_cocycle(&cn).0, CocycleNorm::Finite(Int::one()));
        let z = Cocycle { coords: vec![Int::zero()], values: vec![Int::zero(); 3] };
        assert_eq!(normalize_cocycle(&z).0, CocycleNorm::Infinite);
    }
}
