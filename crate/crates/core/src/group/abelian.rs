//! Abelian group invariants from relation matrices.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::group::word::Word;
use crate::{Int, IntMatrix};

/// Rank and torsion of a finitely generated abelian group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupInvariants {
    pub free_rank: usize,
    /// Elementary divisors `>= 2` forming a divisibility chain.
    pub divisors: Vec<Int>,
}

impl GroupInvariants {
    pub fn trivial() -> Self {
        GroupInvariants { free_rank: 0, divisors: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        GroupInvariants { free_rank: rank, divisors: Vec::new() }
    }

    pub fn has_torsion(&self) -> bool {
        !self.divisors.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.divisors.is_empty()
    }
}

impl std::fmt::Display for GroupInvariants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = self.divisors.iter().map(|d| format!("Z/{d}")).collect();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.free_rank)
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// The abelian group `Z^n / rowspace(R)` together with the unimodular
/// change of basis `P R Q = D` that exhibits its invariants.
///
/// A generator-exponent row vector `e` has invariant coordinates `e Q`. The
/// first `relation_rank` coordinates are torsion (or zero); the remaining
/// `free_rank` coordinates are the free part.
#[derive(Clone, Debug)]
pub struct AbelianInvariants {
    pub ngens: usize,
    pub relation_rank: usize,
    pub invariants: GroupInvariants,
    /// Diagonal of `D`, length `relation_rank`.
    pub diagonal: Vec<Int>,
    /// `Q`: generator exponents to invariant coordinates.
    pub to_invariant: IntMatrix,
    /// `Q^-1`.
    pub from_invariant: IntMatrix,
    relations: IntMatrix,
}

impl AbelianInvariants {
    /// Group with one generator per column of `rel` and one relation per row.
    pub fn from_relation_matrix(rel: IntMatrix) -> Self {
        let ngens = rel.cols();
        let s = rel.smith();
        let r = s.rank();
        let divisors: Vec<Int> = s.diagonal.iter().filter(|d| !d.is_one()).cloned().collect();
        AbelianInvariants {
            ngens,
            relation_rank: r,
            invariants: GroupInvariants { free_rank: ngens - r, divisors },
            diagonal: s.diagonal.clone(),
            to_invariant: s.right,
            from_invariant: s.right_inv,
            relations: rel,
        }
    }

    pub fn from_relators(ngens: usize, relators: &[Word]) -> Self {
        Self::from_relation_matrix(relator_matrix(ngens, relators))
    }

    pub fn free_rank(&self) -> usize {
        self.invariants.free_rank
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    /// Invariant coordinates `e Q` of an exponent vector.
    pub fn coordinates(&self, e: &[Int]) -> Vec<Int> {
        self.to_invariant.vec_mul(e)
    }

    /// Free-part coordinates of an exponent vector.
    pub fn free_coordinates(&self, e: &[Int]) -> Vec<Int> {
        self.coordinates(e).split_off(self.relation_rank)
    }

    /// Value vector (one entry per generator) of the `k`-th dual basis
    /// homomorphism to `Z`.
    pub fn cocycle_values(&self, k: usize) -> Vec<Int> {
        self.to_invariant.column(self.relation_rank + k)
    }

    /// Exponent vector of the `k`-th free homology basis element.
    pub fn homology_exponents(&self, k: usize) -> Vec<Int> {
        self.from_invariant.row(self.relation_rank + k).to_vec()
    }

    /// Whether a value vector on the generators kills every relation.
    pub fn is_homomorphism(&self, values: &[Int]) -> bool {
        self.relations.mul_vec(values).iter().all(Zero::is_zero)
    }

    /// Free coordinates of a homomorphism given by its generator values.
    pub fn hom_coordinates(&self, values: &[Int]) -> Vec<Int> {
        self.from_invariant.mul_vec(values).split_off(self.relation_rank)
    }

    /// Whether the invariant coordinates describe the zero element.
    pub fn is_zero_class(&self, coords: &[Int]) -> bool {
        coords.iter().enumerate().all(|(k, c)| {
            if k < self.relation_rank {
                (c % &self.diagonal[k]).is_zero()
            } else {
                c.is_zero()
            }
        })
    }

    /// Largest absolute entry of the basis change, for diagnostics.
    pub fn max_transform_entry(&self) -> Int {
        self.to_invariant
            .to_rows()
            .into_iter()
            .flatten()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(Int::zero)
    }
}

/// Abelianized relator matrix: row `k` holds the exponent sums of relator `k`.
pub fn relator_matrix(ngens: usize, relators: &[Word]) -> IntMatrix {
    let mut m = IntMatrix::zeros(relators.len(), ngens);
    for (k, r) in relators.iter().enumerate() {
        for (g, e) in r.exponent_sums(ngens).into_iter().enumerate() {
            m[(k, g)] = Int::from(e);
        }
    }
    m
}

/// Second cohomology of the presentation 2-complex: the cokernel of the
/// transposed relator matrix. Equals `H^2` of the group only when the
/// complex is aspherical.
pub fn presentation_h2(ngens: usize, relators: &[Word]) -> GroupInvariants {
    let r = relator_matrix(ngens, relators);
    AbelianInvariants::from_relation_matrix(r.transpose()).invariants
}
