//! Finite-index subgroups: coset data, Schreier generators, the
//! Reidemeister-Schreier presentation and (co)homology.

use std::collections::HashMap;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::abelian::{presentation_h2, AbelianInvariants, GroupInvariants};
use crate::group::congruence::{Congruence, CongruenceKind, Label};
use crate::group::coset::{cycles, fixed_points, CosetTable};
use crate::group::presentation::{Generator, Presentation, Role};
use crate::group::rewrite::Rewriter;
use crate::group::tietze;
use crate::group::word::{Letter, Word};
use crate::{Int, ProjMatrix, QuadInt};

/// How membership in the subgroup is decided.
#[derive(Clone, Debug)]
pub enum Membership {
    Congruence { data: Congruence, labels: HashMap<Label, usize> },
    /// Only the coset table is known; elements are located by rewriting.
    Table,
}

/// A Schreier generator `s_i(x) = gamma_{x(i)}^-1 x gamma_i`.
#[derive(Clone, Debug)]
pub struct SchreierGen {
    pub coset: usize,
    pub gen: usize,
    /// The element as a word in the ambient generators.
    pub word: Word,
    pub matrix: ProjMatrix,
}

/// Values `s_i(gamma)` for all cosets `i`, with the permutation `i -> gamma(i)`.
#[derive(Clone, Debug)]
pub struct Transfer {
    pub perm: Vec<usize>,
    pub elements: Vec<ProjMatrix>,
}

/// An integral 1-cocycle `c: Gamma -> Z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cocycle {
    /// Coordinates in the dual basis of `H^1`.
    pub coords: Vec<Int>,
    /// Values on the Schreier generators.
    pub values: Vec<Int>,
}

/// A free homology class, with an explicit representative element.
#[derive(Clone, Debug)]
pub struct HomologyClass {
    /// Exponents of the Schreier generators.
    pub exponents: Vec<Int>,
    pub element: ProjMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceData {
    pub index: usize,
    pub genus: i64,
    pub cusps: usize,
    pub elliptic2: usize,
    pub elliptic3: usize,
    pub torsion_free: bool,
    /// `2g + c - 1` when torsion-free.
    pub free_rank: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionCheck {
    pub torsion_free: bool,
    /// True when the tested elements represent every conjugacy class of
    /// torsion in the ambient group, so the answer is exact.
    pub exact: bool,
    pub tested: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct H2Result {
    pub invariants: GroupInvariants,
    pub aspherical_assumed: bool,
}

#[derive(Clone, Debug)]
pub struct SubgroupModel {
    ambient: Presentation,
    rewriter: Rewriter,
    table: CosetTable,
    membership: Membership,
    reps: Vec<Word>,
    rep_mats: Vec<ProjMatrix>,
    schreier: Vec<SchreierGen>,
    /// `schreier_index[coset][gen]`: `None` for spanning-tree edges.
    schreier_index: Vec<Vec<Option<usize>>>,
    presentation: Presentation,
    abelian: AbelianInvariants,
}

impl SubgroupModel {
    pub fn congruence(ambient: &Presentation, kind: CongruenceKind, level: QuadInt) -> Result<Self> {
        let data = Congruence::new(kind, level)?;
        let (table, labels) = data.coset_table(ambient)?;
        Self::build(ambient.clone(), table, Membership::Congruence { data, labels })
    }

    pub fn from_table(ambient: &Presentation, table: CosetTable) -> Result<Self> {
        Self::build(ambient.clone(), table, Membership::Table)
    }

    /// The ambient group viewed as an index-one subgroup.
    pub fn whole(ambient: &Presentation) -> Result<Self> {
        let table = CosetTable::new(vec![vec![0]; ambient.ngens()])?;
        Self::from_table(ambient, table)
    }

    fn build(ambient: Presentation, table: CosetTable, membership: Membership) -> Result<Self> {
        if table.ngens() != ambient.ngens() {
            return Err(Error::InvalidInput(format!(
                "coset table has {} permutations for {} generators",
                table.ngens(),
                ambient.ngens()
            )));
        }
        table.check_relators(ambient.relators())?;
        let rewriter = Rewriter::new(&ambient)?;
        let (reps, tree) = table.spanning_tree();
        let rep_mats: Vec<ProjMatrix> = reps.iter().map(|w| ambient.eval(w)).collect();
        let n = table.index();
        let mut schreier = Vec::new();
        let mut schreier_index = vec![vec![None; ambient.ngens()]; n];
        for (i, row) in schreier_index.iter_mut().enumerate() {
            for (g, slot) in row.iter_mut().enumerate() {
                if tree.contains(&(i, g)) {
                    continue;
                }
                let j = table.act(Letter::new(g, false), i);
                let word = reps[j].inverse().concat(&Word::gen(g)).concat(&reps[i]);
                let matrix = rep_mats[j]
                    .inverse()
                    .mul(&ambient.generators()[g].matrix)
                    .mul(&rep_mats[i]);
                *slot = Some(schreier.len());
                schreier.push(SchreierGen { coset: i, gen: g, word, matrix });
            }
        }
        let names = ambient.names();
        let gens: Vec<Generator> = schreier
            .iter()
            .map(|s| Generator {
                name: format!("{}_{}", names[s.gen], s.coset + 1),
                matrix: s.matrix.clone(),
                role: None,
            })
            .collect();
        let mut relators = Vec::new();
        for r in ambient.relators() {
            for i in 0..n {
                relators.push(schreier_rewrite(&table, &schreier_index, r, i).0);
            }
        }
        let presentation = Presentation::new(ambient.disc(), gens, relators)?;
        let abelian = AbelianInvariants::from_relators(presentation.ngens(), presentation.relators());
        let model = SubgroupModel {
            ambient,
            rewriter,
            table,
            membership,
            reps,
            rep_mats,
            schreier,
            schreier_index,
            presentation,
            abelian,
        };
        if let Membership::Congruence { data, labels } = &model.membership {
            for (i, m) in model.rep_mats.iter().enumerate() {
                if labels.get(&data.label(m)?) != Some(&i) {
                    return Err(Error::Invariant(format!("coset {} label mismatch", i + 1)));
                }
            }
        }
        for s in &model.schreier {
            if !model.contains(&s.matrix)? {
                return Err(Error::Invariant(format!(
                    "Schreier generator at coset {} is not in the subgroup",
                    s.coset + 1
                )));
            }
        }
        Ok(model)
    }

    pub fn ambient(&self) -> &Presentation {
        &self.ambient
    }

    pub fn table(&self) -> &CosetTable {
        &self.table
    }

    pub fn membership(&self) -> &Membership {
        &self.membership
    }

    pub fn index(&self) -> usize {
        self.table.index()
    }

    pub fn coset_reps(&self) -> &[Word] {
        &self.reps
    }

    pub fn coset_rep_matrices(&self) -> &[ProjMatrix] {
        &self.rep_mats
    }

    pub fn schreier_generators(&self) -> &[SchreierGen] {
        &self.schreier
    }

    /// Reidemeister-Schreier presentation on the Schreier generators.
    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn abelianization(&self) -> &AbelianInvariants {
        &self.abelian
    }

    pub fn rank_h1(&self) -> usize {
        self.abelian.free_rank()
    }

    pub fn rewrite_ambient(&self, m: &ProjMatrix) -> Result<Word> {
        self.rewriter.rewrite(m)
    }

    /// The coset `m H`.
    pub fn coset_of(&self, m: &ProjMatrix) -> Result<usize> {
        match &self.membership {
            Membership::Congruence { data, labels } => {
                let l = data.label(m)?;
                labels
                    .get(&l)
                    .copied()
                    .ok_or_else(|| Error::Invariant("label outside the coset table".into()))
            }
            Membership::Table => {
                let w = self.rewriter.rewrite(m)?;
                Ok(self.table.act_word(&w, 0))
            }
        }
    }

    /// Membership predicate. Elements outside the ambient group are not
    /// members.
    pub fn contains(&self, m: &ProjMatrix) -> Result<bool> {
        if m.disc() != self.ambient.disc() || !m.in_ambient() {
            return Ok(false);
        }
        Ok(self.coset_of(m)? == 0)
    }

    /// `gamma(i)`, the coset of `gamma gamma_i`.
    pub fn act(&self, gamma: &ProjMatrix, i: usize) -> Result<usize> {
        self.coset_of(&gamma.mul(&self.rep_mats[i]))
    }

    /// `s_i(gamma) = gamma_{gamma(i)}^-1 gamma gamma_i` for every coset.
    pub fn schreier_transfer(&self, gamma: &ProjMatrix) -> Result<Transfer> {
        if !gamma.in_ambient() {
            return Err(Error::NotInAmbient(gamma.to_string()));
        }
        let n = self.index();
        let mut perm = Vec::with_capacity(n);
        let mut elements = Vec::with_capacity(n);
        for i in 0..n {
            let j = self.act(gamma, i)?;
            let s = self.rep_mats[j].inverse().mul(gamma).mul(&self.rep_mats[i]);
            if !self.contains(&s)? {
                return Err(Error::Invariant(format!("s_{}(gamma) is not in the subgroup", i + 1)));
            }
            perm.push(j);
            elements.push(s);
        }
        let mut seen = vec![false; n];
        for &j in &perm {
            if std::mem::replace(&mut seen[j], true) {
                return Err(Error::Invariant("transfer permutation is not a bijection".into()));
            }
        }
        Ok(Transfer { perm, elements })
    }

    /// Express a subgroup element as a word in the Schreier generators.
    pub fn subgroup_word(&self, h: &ProjMatrix) -> Result<Word> {
        let w = self.rewriter.rewrite(h)?;
        let (sw, end) = schreier_rewrite(&self.table, &self.schreier_index, &w, 0);
        if end != 0 {
            return Err(Error::NotInSubgroup);
        }
        Ok(sw)
    }

    /// Exponent vector of a subgroup element in the abelianization.
    pub fn abelianize(&self, h: &ProjMatrix) -> Result<Vec<Int>> {
        let w = self.subgroup_word(h)?;
        Ok(w.exponent_sums(self.presentation.ngens())
            .into_iter()
            .map(Int::from)
            .collect())
    }

    /// Dual basis of `Hom(Gamma, Z)`.
    pub fn h1_basis(&self) -> Vec<Cocycle> {
        let r = self.rank_h1();
        (0..r)
            .map(|k| {
                let mut coords = vec![Int::zero(); r];
                coords[k] = Int::from(1);
                self.cocycle_from_coords(coords).expect("basis coordinates have the right length")
            })
            .collect()
    }

    pub fn cocycle_from_coords(&self, coords: Vec<Int>) -> Result<Cocycle> {
        let r = self.rank_h1();
        if coords.len() != r {
            return Err(Error::DimensionMismatch(format!("{} coordinates for rank {r}", coords.len())));
        }
        let mut values = vec![Int::zero(); self.presentation.ngens()];
        for (k, ck) in coords.iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            for (v, b) in values.iter_mut().zip(self.abelian.cocycle_values(k)) {
                *v += ck * b;
            }
        }
        Ok(Cocycle { coords, values })
    }

    /// The cocycle with the given values on the Schreier generators.
    pub fn cocycle_from_values(&self, values: Vec<Int>) -> Result<Cocycle> {
        if values.len() != self.presentation.ngens() {
            return Err(Error::DimensionMismatch("cocycle value vector".into()));
        }
        if !self.abelian.is_homomorphism(&values) {
            return Err(Error::Invariant("values do not define a homomorphism".into()));
        }
        let coords = self.abelian.hom_coordinates(&values);
        Ok(Cocycle { coords, values })
    }

    pub fn zero_cocycle(&self) -> Cocycle {
        self.cocycle_from_coords(vec![Int::zero(); self.rank_h1()]).expect("right length")
    }

    /// `c(gamma)` for `gamma` in the subgroup.
    pub fn evaluate(&self, c: &Cocycle, gamma: &ProjMatrix) -> Result<Int> {
        let e = self.abelianize(gamma)?;
        Ok(dot(&e, &c.values))
    }

    /// Free homology basis dual to [`Self::h1_basis`].
    pub fn homology_basis(&self) -> Vec<HomologyClass> {
        (0..self.rank_h1())
            .map(|k| {
                let exponents = self.abelian.homology_exponents(k);
                let element = self.element_from_exponents(&exponents);
                HomologyClass { exponents, element }
            })
            .collect()
    }

    /// Product of Schreier generator powers in generator order.
    pub fn element_from_exponents(&self, e: &[Int]) -> ProjMatrix {
        let mut m = ProjMatrix::identity(self.ambient.disc());
        for (s, k) in self.schreier.iter().zip(e) {
            if !k.is_zero() {
                let k = i64::try_from(k).expect("exponent fits in i64");
                m = m.mul(&s.matrix.pow(k));
            }
        }
        m
    }

    /// Free-part homology coordinates of a subgroup element.
    pub fn homology_coordinates(&self, h: &ProjMatrix) -> Result<Vec<Int>> {
        Ok(self.abelian.free_coordinates(&self.abelianize(h)?))
    }

    /// Tietze-reduced form of the subgroup presentation.
    pub fn reduced_presentation(&self) -> Presentation {
        tietze::reduce(&self.presentation)
    }

    /// `H^2` of the reduced presentation complex.
    pub fn h2(&self) -> H2Result {
        let p = self.reduced_presentation();
        H2Result {
            invariants: presentation_h2(p.ngens(), p.relators()),
            aspherical_assumed: true,
        }
    }

    /// Every finite-order element must act without fixed cosets. The test
    /// elements are the roots of proper-power relators (all their nontrivial
    /// powers are tested) plus any extra words supplied.
    pub fn torsion_check(&self, extra: &[Word]) -> TorsionCheck {
        let mut tested = 0;
        let mut free = true;
        let roots = self.ambient.torsion_roots();
        let mut elems: Vec<Word> = Vec::new();
        for (w, k) in &roots {
            for j in 1..*k {
                elems.push(w.pow(j as i64));
            }
        }
        elems.extend(extra.iter().cloned());
        for w in &elems {
            tested += 1;
            if fixed_points(&self.table.word_perm(w)) > 0 {
                free = false;
            }
        }
        let exact = self.modular_roles().is_some() && extra.is_empty();
        TorsionCheck { torsion_free: free, exact, tested }
    }

    /// `(S, T)` generator indices when the ambient group is `PSL_2(Z)`.
    fn modular_roles(&self) -> Option<(usize, usize)> {
        if !self.ambient.disc().is_rational() {
            return None;
        }
        Some((self.ambient.with_role(Role::S)?, self.ambient.with_role(Role::T1)?))
    }

    /// Signature of the quotient curve for subgroups of `PSL_2(Z)`.
    pub fn surface_data(&self) -> Result<SurfaceData> {
        let (s, t) = self.modular_roles().ok_or_else(|| {
            Error::InvalidInput("surface data needs a PSL_2(Z) ambient with S and T roles".into())
        })?;
        let idx = self.index();
        let sw = Word::gen(s);
        let u = sw.concat(&Word::gen(t));
        let e2 = fixed_points(&self.table.word_perm(&sw));
        let e3 = fixed_points(&self.table.word_perm(&u));
        let cusps = cycles(self.table.perm(t)).len();
        // 12 (g - 1) = idx - 3 e2 - 4 e3 - 6 c
        let twelve_g = 12 + idx as i64 - 3 * e2 as i64 - 4 * e3 as i64 - 6 * cusps as i64;
        let (genus, rem) = twelve_g.div_rem(&12);
        if rem != 0 || genus < 0 {
            return Err(Error::Invariant(format!("non-integral genus 12g = {twelve_g}")));
        }
        let torsion_free = e2 == 0 && e3 == 0;
        let free_rank = torsion_free.then(|| (2 * genus) as usize + cusps - 1);
        Ok(SurfaceData { index: idx, genus, cusps, elliptic2: e2, elliptic3: e3, torsion_free, free_rank })
    }

    /// Ambient word for a subgroup word in Schreier generators.
    pub fn ambient_word(&self, w: &Word) -> Word {
        let mut out = Word::empty();
        for l in w.letters() {
            let sw = &self.schreier[l.gen].word;
            out.append(&if l.inv { sw.inverse() } else { sw.clone() });
        }
        out
    }
}

/// Rewrite an ambient word read from coset `start` into Schreier
/// generators; returns the subgroup word and the coset reached.
fn schreier_rewrite(
    table: &CosetTable,
    index: &[Vec<Option<usize>>],
    w: &Word,
    start: usize,
) -> (Word, usize) {
    let mut c = start;
    let mut letters: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in w.letters().iter().rev() {
        if l.inv {
            let j = table.act(l, c);
            if let Some(k) = index[j][l.gen] {
                letters.push(Letter::new(k, true));
            }
            c = j;
        } else {
            if let Some(k) = index[c][l.gen] {
                letters.push(Letter::new(k, false));
            }
            c = table.act(l, c);
        }
    }
    letters.reverse();
    (Word::from_letters(letters), c)
}

pub fn dot(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `gcd` of a list, zero for the empty or all-zero list.
pub fn gcd_all(v: &[Int]) -> Int {
    v.iter().fold(Int::zero(), |g, x| g.gcd(x)).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ring::Disc;

    fn gamma0(n: i64) -> SubgroupModel {
        let p = Presentation::modular_group();
        SubgroupModel::congruence(&p, CongruenceKind::Gamma0, QuadInt::small(n, 0, Disc::RATIONAL))
            .unwrap()
    }

    #[test]
    fn gamma0_11_structure() {
        let g = gamma0(11);
        assert_eq!(g.index(), 12);
        assert_eq!(g.presentation().relators().len(), 24);
        assert_eq!(g.rank_h1(), 3);
        assert!(g.abelianization().invariants.divisors.is_empty());
        let sd = g.surface_data().unwrap();
        assert_eq!((sd.genus, sd.cusps, sd.torsion_free, sd.free_rank), (1, 2, true, Some(3)));
        let red = g.reduced_presentation();
        assert!(red.relators().is_empty());
        assert_eq!(red.ngens(), 3);
        assert!(g.h2().invariants.is_trivial());
    }

    #[test]
    fn whole_group() {
        let p = Presentation::modular_group();
        let g = SubgroupModel::whole(&p).unwrap();
        assert_eq!(g.index(), 1);
        assert_eq!(g.presentation().ngens(), 2);
        let sd = g.surface_data().unwrap();
        assert!(!sd.torsion_free);
        assert_eq!(g.abelianization().invariants.divisors, vec![Int::from(6)]);
        assert!(g.h1_basis().is_empty());
        let h2 = g.h2();
        assert!(h2.aspherical_assumed);
        assert_eq!(h2.invariants.divisors, vec![Int::from(6)]);
    }

    #[test]
    fn dual_bases_pair_to_identity() {
        let g = gamma0(11);
        let cs = g.h1_basis();
        let hs = g.homology_basis();
        for (j, h) in hs.iter().enumerate() {
            for (k, c) in cs.iter().enumerate() {
                assert_eq!(g.evaluate(c, &h.element).unwrap(), Int::from((j == k) as i64));
            }
        }
    }

    #[test]
    fn non_members_are_rejected() {
        let g = gamma0(11);
        let t = ProjMatrix::from_ints([[1, 0], [1, 1]], Disc::RATIONAL).unwrap();
        assert!(!g.contains(&t).unwrap());
        assert!(matches!(g.evaluate(&g.h1_basis()[0], &t), Err(Error::NotInSubgroup)));
    }
}
