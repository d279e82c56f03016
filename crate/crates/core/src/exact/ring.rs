//! Rings of integers `O_d` of the imaginary quadratic fields `Q(sqrt(-d))`
//! that are Euclidean for the norm, together with `Z` itself (`d = 0`).
//!
//! Elements are written `a + b*w` where `w = sqrt(-d)` for `d = 1, 2` and
//! `w = (1 + sqrt(-d))/2` for `d = 3, 7, 11`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::ExactInt;

/// Discriminant tag. `0` stands for the ring `Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct Disc(u8);

impl Disc {
    pub const RATIONAL: Disc = Disc(0);

    pub fn new(d: i64) -> Result<Self> {
        match d {
            0 | 1 | 2 | 3 | 7 | 11 => Ok(Disc(d as u8)),
            _ => Err(Error::UnsupportedDiscriminant(d)),
        }
    }

    pub fn value(self) -> i64 {
        self.0 as i64
    }

    pub fn is_rational(self) -> bool {
        self.0 == 0
    }

    /// `w^2 = p + q*w`; returns `(p, q)`.
    fn omega_square(self) -> (i64, i64) {
        match self.0 {
            0 => (0, 0),
            1 | 2 => (-(self.0 as i64), 0),
            d => (-((1 + d as i64) / 4), 1),
        }
    }
}

impl TryFrom<i64> for Disc {
    type Error = Error;
    fn try_from(d: i64) -> Result<Self> {
        Disc::new(d)
    }
}

impl From<Disc> for i64 {
    fn from(d: Disc) -> i64 {
        d.value()
    }
}

impl fmt::Display for Disc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Element `a + b*w` of `O_d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadInt<T> {
    pub a: T,
    pub b: T,
    pub disc: Disc,
}

impl<T: ExactInt> QuadInt<T> {
    pub fn new(a: T, b: T, disc: Disc) -> Self {
        debug_assert!(!disc.is_rational() || b.is_zero(), "b must vanish over Z");
        QuadInt { a, b, disc }
    }

    pub fn from_int(a: T, disc: Disc) -> Self {
        QuadInt { a, b: T::zero(), disc }
    }

    pub fn small(a: i64, b: i64, disc: Disc) -> Self {
        QuadInt::new(T::of(a), T::of(b), disc)
    }

    pub fn zero(disc: Disc) -> Self {
        Self::from_int(T::zero(), disc)
    }

    pub fn one(disc: Disc) -> Self {
        Self::from_int(T::one(), disc)
    }

    /// The generator `w` (only meaningful for `d > 0`).
    pub fn omega(disc: Disc) -> Self {
        QuadInt::new(T::zero(), T::one(), disc)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        QuadInt::new(self.a.clone() + o.a.clone(), self.b.clone() + o.b.clone(), self.disc)
    }

    pub fn sub(&self, o: &Self) -> Self {
        QuadInt::new(self.a.clone() - o.a.clone(), self.b.clone() - o.b.clone(), self.disc)
    }

    pub fn neg(&self) -> Self {
        QuadInt::new(-self.a.clone(), -self.b.clone(), self.disc)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (p, q) = self.disc.omega_square();
        let bb = self.b.clone() * o.b.clone();
        let a = self.a.clone() * o.a.clone() + bb.clone() * T::of(p);
        let b = self.a.clone() * o.b.clone() + self.b.clone() * o.a.clone() + bb * T::of(q);
        QuadInt::new(a, b, self.disc)
    }

    pub fn scale(&self, k: &T) -> Self {
        QuadInt::new(self.a.clone() * k.clone(), self.b.clone() * k.clone(), self.disc)
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        match self.disc.value() {
            0 => self.clone(),
            1 | 2 => QuadInt::new(self.a.clone(), -self.b.clone(), self.disc),
            _ => QuadInt::new(self.a.clone() + self.b.clone(), -self.b.clone(), self.disc),
        }
    }

    /// Field norm `x * conj(x)`, a nonnegative integer.
    pub fn norm(&self) -> T {
        let (p, q) = self.disc.omega_square();
        // (a + b w)(a + b conj(w)), w + conj(w) = q, w conj(w) = -p
        self.a.clone() * self.a.clone()
            + self.a.clone() * self.b.clone() * T::of(q)
            - self.b.clone() * self.b.clone() * T::of(p)
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    /// All units of the ring, in a fixed order starting with `1`.
    pub fn units(disc: Disc) -> Vec<Self> {
        let s = |a, b| QuadInt::small(a, b, disc);
        match disc.value() {
            1 => vec![s(1, 0), s(-1, 0), s(0, 1), s(0, -1)],
            3 => vec![s(1, 0), s(-1, 0), s(0, 1), s(0, -1), s(-1, 1), s(1, -1)],
            _ => vec![s(1, 0), s(-1, 0)],
        }
    }

    /// Exact quotient `self / o`, or `None` if `o` does not divide `self`.
    pub fn div_exact(&self, o: &Self) -> Option<Self> {
        if o.is_zero() {
            return None;
        }
        let n = o.norm();
        let z = self.mul(&o.conj());
        let (qa, ra) = z.a.div_rem(&n);
        let (qb, rb) = z.b.div_rem(&n);
        if ra.is_zero() && rb.is_zero() {
            Some(QuadInt::new(qa, qb, self.disc))
        } else {
            None
        }
    }

    pub fn divides(&self, o: &Self) -> bool {
        if self.is_zero() {
            return o.is_zero();
        }
        o.div_exact(self).is_some()
    }

    /// Division with remainder: returns `(q, r)` with `self = q*o + r` and
    /// `N(r) < N(o)`. The quotient is a nearest lattice point to `self/o`.
    pub fn div_rem_euclid(&self, o: &Self) -> Result<(Self, Self)> {
        if o.is_zero() {
            return Err(Error::InvalidInput("division by zero".into()));
        }
        let n = o.norm();
        let z = self.mul(&o.conj());
        let fa = z.a.div_floor(&n);
        let fb = z.b.div_floor(&n);
        // For d = 0, 1, 2 the coordinates are orthogonal and rounding each
        // one gives the nearest point. For d = 3, 7, 11 the nearest point is
        // a corner of the cell containing the quotient.
        let (a_range, b_range): (Vec<i64>, Vec<i64>) = match self.disc.value() {
            0..=2 => {
                let two = T::of(2);
                let ra = (z.a.clone() * two.clone() + n.clone()).div_floor(&(n.clone() * two.clone()));
                let rb = (z.b.clone() * two.clone() + n.clone()).div_floor(&(n.clone() * two));
                let q = QuadInt::new(ra, if self.disc.is_rational() { T::zero() } else { rb }, self.disc);
                let r = self.sub(&q.mul(o));
                if r.norm() < n {
                    return Ok((q, r));
                }
                (vec![-1, 0, 1, 2], vec![-1, 0, 1, 2])
            }
            _ => (vec![0, 1], vec![0, 1]),
        };
        let b_range = if self.disc.is_rational() { vec![0] } else { b_range };
        let mut best: Option<(T, Self, Self)> = None;
        for &db in &b_range {
            for &da in &a_range {
                let q = QuadInt::new(
                    fa.clone() + T::of(da),
                    if self.disc.is_rational() { T::zero() } else { fb.clone() + T::of(db) },
                    self.disc,
                );
                let r = self.sub(&q.mul(o));
                let rn = r.norm();
                let better = match &best {
                    None => true,
                    Some((bn, _, _)) => rn < *bn,
                };
                if better {
                    best = Some((rn, q, r));
                }
            }
        }
        let (rn, q, r) = best.expect("candidate set is nonempty");
        if rn >= n {
            return Err(Error::InvalidInput(format!(
                "ring O_{} is not norm-Euclidean for this pair",
                self.disc
            )));
        }
        Ok((q, r))
    }

    pub fn gcd(&self, o: &Self) -> Result<Self> {
        let mut x = self.clone();
        let mut y = o.clone();
        while !y.is_zero() {
            let (_, r) = x.div_rem_euclid(&y)?;
            x = y;
            y = r;
        }
        Ok(x)
    }

    /// Multiply by the unit that makes `(a, b)` lexicographically largest.
    /// Returns the chosen unit and the normalized element.
    pub fn normalize_unit(&self) -> (Self, Self) {
        let mut best: Option<(Self, Self)> = None;
        for u in Self::units(self.disc) {
            let v = u.mul(self);
            let better = match &best {
                None => true,
                Some((_, bv)) => (v.a.clone(), v.b.clone()) > (bv.a.clone(), bv.b.clone()),
            };
            if better {
                best = Some((u, v));
            }
        }
        best.expect("unit group is nonempty")
    }

    /// Inverse of a unit.
    pub fn unit_inverse(&self) -> Option<Self> {
        if !self.is_unit() {
            return None;
        }
        Some(self.conj())
    }

    /// Some unit `v` with `v^2 * self = 1`, when `self` is a unit square class.
    pub fn inverse_square_root_unit(&self) -> Option<Self> {
        Self::units(self.disc)
            .into_iter()
            .find(|v| v.mul(v).mul(self).is_one())
    }
}

impl<T: ExactInt> fmt::Display for QuadInt<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}w", self.b)
        } else if self.b.is_negative() {
            write!(f, "{}-{}w", self.a, -self.b.clone())
        } else {
            write!(f, "{}+{}w", self.a, self.b)
        }
    }
}

/// Quotient ring `O / (m)` with canonical residue representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueRing<T> {
    modulus: QuadInt<T>,
    // lattice (m) in coordinates (a, b): basis (p, q), (0, r)
    p: T,
    q: T,
    r: T,
}

impl<T: ExactInt> ResidueRing<T> {
    pub fn new(modulus: QuadInt<T>) -> Result<Self> {
        if modulus.is_zero() {
            return Err(Error::InvalidInput("zero modulus".into()));
        }
        let disc = modulus.disc;
        if disc.is_rational() {
            return Ok(ResidueRing {
                p: modulus.a.abs(),
                q: T::zero(),
                r: T::one(),
                modulus,
            });
        }
        let v1 = (modulus.a.clone(), modulus.b.clone());
        let mw = modulus.mul(&QuadInt::omega(disc));
        let v2 = (mw.a.clone(), mw.b.clone());
        // Euclid on first coordinates.
        let (mut x, mut y) = (v1, v2);
        while !y.0.is_zero() {
            let k = x.0.div_floor(&y.0);
            let nx = (x.0.clone() - k.clone() * y.0.clone(), x.1.clone() - k * y.1.clone());
            x = y;
            y = nx;
        }
        // y = (0, r'), x = (p', q')
        let (mut p, mut q) = x;
        if p.is_negative() {
            p = -p;
            q = -q;
        }
        let r = y.1.abs();
        let q = q.mod_floor(&r);
        Ok(ResidueRing { modulus, p, q, r })
    }

    pub fn modulus(&self) -> &QuadInt<T> {
        &self.modulus
    }

    pub fn size(&self) -> T {
        self.p.clone() * self.r.clone()
    }

    pub fn reduce(&self, x: &QuadInt<T>) -> QuadInt<T> {
        if x.disc.is_rational() {
            return QuadInt::from_int(x.a.mod_floor(&self.p), x.disc);
        }
        let k = x.a.div_floor(&self.p);
        let a = x.a.clone() - k.clone() * self.p.clone();
        let b = (x.b.clone() - k * self.q.clone()).mod_floor(&self.r);
        QuadInt::new(a, b, x.disc)
    }

    pub fn is_zero(&self, x: &QuadInt<T>) -> bool {
        self.reduce(x).is_zero()
    }

    pub fn elements(&self) -> Vec<QuadInt<T>> {
        let disc = self.modulus.disc;
        let mut out = Vec::new();
        let mut a = T::zero();
        while a < self.p {
            let mut b = T::zero();
            while b < self.r {
                out.push(QuadInt::new(a.clone(), b.clone(), disc));
                b = b + T::one();
            }
            a = a + T::one();
        }
        out
    }

    /// The residues that are units modulo the modulus.
    pub fn units(&self) -> Vec<QuadInt<T>> {
        let elems = self.elements();
        elems
            .iter()
            .filter(|x| {
                elems
                    .iter()
                    .any(|y| self.reduce(&x.mul(y).sub(&QuadInt::one(x.disc))).is_zero())
            })
            .cloned()
            .collect()
    }
}
