//! Projective 2x2 matrices over the fraction field of `O_d`.
//!
//! A [`ProjMatrix`] is always stored in canonical form: integral, content
//! one, and scaled by the unit that makes the first nonzero entry
//! lexicographically largest. Two matrices describe the same element of
//! `PGL_2(K)` iff their canonical forms coincide, so `Eq`/`Hash` are exact.

use std::fmt;

use crate::error::{Error, Result};
use crate::exact::ring::{Disc, QuadInt};
use crate::scalar::ExactInt;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjMatrix<T> {
    e: [QuadInt<T>; 4],
}

impl<T: ExactInt> ProjMatrix<T> {
    /// Build from integral entries `[a, b, c, d]` (row-major).
    pub fn new(entries: [QuadInt<T>; 4]) -> Result<Self> {
        let disc = entries[0].disc;
        if entries.iter().any(|x| x.disc != disc) {
            return Err(Error::InvalidInput("mixed discriminants in matrix".into()));
        }
        let det = entries[0].mul(&entries[3]).sub(&entries[1].mul(&entries[2]));
        if det.is_zero() {
            return Err(Error::InvalidInput("singular matrix".into()));
        }
        Ok(Self::canonicalize(entries))
    }

    /// Build from field entries given as `(numerator, denominator)` pairs.
    pub fn from_fractions(entries: [(QuadInt<T>, T); 4]) -> Result<Self> {
        if entries.iter().any(|(_, den)| den.is_zero()) {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        let lcm = entries
            .iter()
            .fold(T::one(), |acc, (_, den)| acc.lcm(den));
        let scaled = entries.map(|(num, den)| num.scale(&(lcm.clone() / den)));
        Self::new(scaled)
    }

    pub fn from_ints(m: [[i64; 2]; 2], disc: Disc) -> Result<Self> {
        let q = |v| QuadInt::small(v, 0, disc);
        Self::new([q(m[0][0]), q(m[0][1]), q(m[1][0]), q(m[1][1])])
    }

    pub fn identity(disc: Disc) -> Self {
        let z = QuadInt::zero(disc);
        let o = QuadInt::one(disc);
        ProjMatrix { e: [o.clone(), z.clone(), z, o] }
    }

    pub fn translation(x: QuadInt<T>) -> Self {
        let disc = x.disc;
        Self::canonicalize([QuadInt::one(disc), x, QuadInt::zero(disc), QuadInt::one(disc)])
    }

    pub fn disc(&self) -> Disc {
        self.e[0].disc
    }

    pub fn entries(&self) -> &[QuadInt<T>; 4] {
        &self.e
    }

    pub fn det(&self) -> QuadInt<T> {
        self.e[0].mul(&self.e[3]).sub(&self.e[1].mul(&self.e[2]))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.disc())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let [a, b, c, d] = &self.e;
        let [p, q, r, s] = &o.e;
        Self::canonicalize([
            a.mul(p).add(&b.mul(r)),
            a.mul(q).add(&b.mul(s)),
            c.mul(p).add(&d.mul(r)),
            c.mul(q).add(&d.mul(s)),
        ])
    }

    /// Projective inverse (the adjugate).
    pub fn inverse(&self) -> Self {
        let [a, b, c, d] = &self.e;
        Self::canonicalize([d.clone(), b.neg(), c.neg(), a.clone()])
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Self::identity(self.disc());
        let mut sq = base;
        let mut n = k.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&sq);
            }
            sq = sq.mul(&sq);
            n >>= 1;
        }
        acc
    }

    /// `g * self * g^{-1}`.
    pub fn conjugate_by(&self, g: &Self) -> Self {
        g.mul(self).mul(&g.inverse())
    }

    /// A representative with determinant exactly one, if the element lies in
    /// `PSL_2(O_d)`.
    pub fn sl2_entries(&self) -> Option<[QuadInt<T>; 4]> {
        let v = self.det().inverse_square_root_unit()?;
        Some(self.e.clone().map(|x| x.mul(&v)))
    }

    /// Membership in `PSL_2(O_d)`.
    pub fn in_ambient(&self) -> bool {
        self.sl2_entries().is_some()
    }

    fn canonicalize(e: [QuadInt<T>; 4]) -> Self {
        let disc = e[0].disc;
        let det = e[0].mul(&e[3]).sub(&e[1].mul(&e[2]));
        // the content squared divides the determinant
        let mut g = QuadInt::one(disc);
        if !det.is_unit() {
            g = QuadInt::zero(disc);
            for x in &e {
                g = g.gcd(x).expect("supported rings are Euclidean");
            }
        }
        let e = if g.is_one() {
            e
        } else {
            e.map(|x| x.div_exact(&g).expect("gcd divides every entry"))
        };
        let lead = e.iter().find(|x| !x.is_zero()).expect("nonzero matrix");
        let (u, _) = lead.normalize_unit();
        let e = if u.is_one() { e } else { e.map(|x| x.mul(&u)) };
        ProjMatrix { e }
    }
}

impl<T: ExactInt> fmt::Display for ProjMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.e[0], self.e[1], self.e[2], self.e[3])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = ProjMatrix<i64>;

    fn z() -> Disc {
        Disc::RATIONAL
    }

    #[test]
    fn sign_is_projective() {
        let a = M::from_ints([[2, 1], [1, 1]], z()).unwrap();
        let b = M::from_ints([[-2, -1], [-1, -1]], z()).unwrap();
        assert_eq!(a, b);
        let c = M::from_ints([[4, 2], [2, 2]], z()).unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn fractions_are_scaled_out() {
        let q = |n, d| (QuadInt::small(n, 0, z()), d);
        let g = M::from_fractions([q(1, 2), q(0, 1), q(0, 1), q(1, 1)]).unwrap();
        assert_eq!(g, M::from_ints([[1, 0], [0, 2]], z()).unwrap());
    }

    #[test]
    fn gaussian_units_are_scalars() {
        let d1 = Disc::new(1).unwrap();
        let i = QuadInt::<i64>::omega(d1);
        let m = M::from_ints([[2, 1], [1, 1]], d1).unwrap();
        let scaled = M::new(m.entries().clone().map(|x| x.mul(&i))).unwrap();
        assert_eq!(m, scaled);
        assert!(m.in_ambient());
    }

    #[test]
    fn inverse_and_membership() {
        let m = M::from_ints([[2, 1], [1, 1]], z()).unwrap();
        assert!(m.mul(&m.inverse()).is_identity());
        assert!(m.in_ambient());
        assert!(!M::from_ints([[1, 0], [0, 2]], z()).unwrap().in_ambient());
        // det -1 is not in PSL_2(Z)
        assert!(!M::from_ints([[0, 1], [1, 0]], z()).unwrap().in_ambient());
        assert!(M::from_ints([[1, 2], [2, 4]], z()).is_err());
    }

    #[test]
    fn powers() {
        let t = M::from_ints([[1, 1], [0, 1]], z()).unwrap();
        assert_eq!(t.pow(5), M::from_ints([[1, 5], [0, 1]], z()).unwrap());
        assert_eq!(t.pow(-3), M::from_ints([[1, -3], [0, 1]], z()).unwrap());
        let s = M::from_ints([[0, -1], [1, 0]], z()).unwrap();
        assert!(s.pow(2).is_identity());
    }
}
