//! Dense exact integer matrices and the Smith normal form.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::ExactInt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: ExactInt> IntMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| T::of(v)).collect()).collect())
            .expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let v = out[(i, j)].clone() + a.clone() * o[(k, j)].clone();
                    out[(i, j)] = v;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|j| {
                (0..self.rows).fold(T::zero(), |acc, i| acc + v[i].clone() * self[(i, j)].clone())
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row_dst += k * row_src
    fn add_row(&mut self, dst: usize, src: usize, k: &T) {
        for j in 0..self.cols {
            let v = self[(dst, j)].clone() + k.clone() * self[(src, j)].clone();
            self[(dst, j)] = v;
        }
    }

    /// col_dst += k * col_src
    fn add_col(&mut self, dst: usize, src: usize, k: &T) {
        for i in 0..self.rows {
            let v = self[(i, dst)].clone() + k.clone() * self[(i, src)].clone();
            self[(i, dst)] = v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -self[(r, j)].clone();
            self[(r, j)] = v;
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let v = -self[(i, c)].clone();
            self[(i, c)] = v;
        }
    }

    /// Smith normal form `P * A * Q = D` with unimodular `P`, `Q`.
    pub fn smith(&self) -> Smith<T> {
        SmithCalc::new(self.clone()).run()
    }

    /// Rank over `Q`.
    pub fn rank(&self) -> usize {
        self.smith().rank()
    }

    /// Characteristic polynomial `det(xI - A)`, coefficients from the
    /// constant term upward (monic, so the last entry is 1).
    pub fn char_poly(&self) -> Result<Vec<T>> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("char_poly of non-square matrix".into()));
        }
        // Faddeev-LeVerrier; the divisions by k are exact over Z.
        let n = self.rows;
        let mut coeffs = vec![T::zero(); n + 1];
        coeffs[n] = T::one();
        let mut m = Self::zeros(n, n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = self.mul(&m)?;
            for i in 0..n {
                let v = next[(i, i)].clone() + coeffs[n - k + 1].clone();
                next[(i, i)] = v;
            }
            m = next;
            let tr = self.mul(&m)?.trace();
            let kk = T::of(k as i64);
            if !(tr.clone() % kk.clone()).is_zero() {
                return Err(Error::Invariant("inexact Faddeev-LeVerrier step".into()));
            }
            coeffs[n - k] = -(tr / kk);
        }
        Ok(coeffs)
    }
}

impl<T> std::ops::Index<(usize, usize)> for IntMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for IntMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Debug> fmt::Debug for IntMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

/// Result of a Smith normal form computation.
#[derive(Clone, Debug)]
pub struct Smith<T> {
    /// Nonzero diagonal entries `d_1 | d_2 | ...`, all positive.
    pub diagonal: Vec<T>,
    pub left: IntMatrix<T>,
    pub left_inv: IntMatrix<T>,
    pub right: IntMatrix<T>,
    pub right_inv: IntMatrix<T>,
    pub shape: (usize, usize),
}

impl<T: ExactInt> Smith<T> {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// The diagonal matrix `D` itself.
    pub fn d_matrix(&self) -> IntMatrix<T> {
        let mut d = IntMatrix::zeros(self.shape.0, self.shape.1);
        for (i, v) in self.diagonal.iter().enumerate() {
            d[(i, i)] = v.clone();
        }
        d
    }
}

struct SmithCalc<T> {
    a: IntMatrix<T>,
    p: IntMatrix<T>,
    pinv: IntMatrix<T>,
    q: IntMatrix<T>,
    qinv: IntMatrix<T>,
}

impl<T: ExactInt> SmithCalc<T> {
    fn new(a: IntMatrix<T>) -> Self {
        let (r, c) = (a.rows, a.cols);
        SmithCalc {
            a,
            p: IntMatrix::identity(r),
            pinv: IntMatrix::identity(r),
            q: IntMatrix::identity(c),
            qinv: IntMatrix::identity(c),
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.p.swap_rows(i, j);
        self.pinv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.q.swap_cols(i, j);
        self.qinv.swap_rows(i, j);
    }

    /// row_dst += k row_src
    fn row_op(&mut self, dst: usize, src: usize, k: &T) {
        self.a.add_row(dst, src, k);
        self.p.add_row(dst, src, k);
        self.pinv.add_col(src, dst, &-k.clone());
    }

    /// col_dst += k col_src
    fn col_op(&mut self, dst: usize, src: usize, k: &T) {
        self.a.add_col(dst, src, k);
        self.q.add_col(dst, src, k);
        self.qinv.add_row(src, dst, &-k.clone());
    }

    fn min_abs_in(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows {
            for j in t..self.a.cols {
                let v = &self.a[(i, j)];
                if v.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| v.abs() < self.a[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    fn run(mut self) -> Smith<T> {
        let (r, c) = (self.a.rows, self.a.cols);
        let mut t = 0;
        let mut diagonal = Vec::new();
        while t < r.min(c) {
            let Some((pi, pj)) = self.min_abs_in(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut clean = true;
                for i in t + 1..r {
                    if !self.a[(i, t)].is_zero() {
                        let k = self.a[(i, t)].div_floor(&self.a[(t, t)]);
                        self.row_op(i, t, &-k);
                        if !self.a[(i, t)].is_zero() {
                            clean = false;
                        }
                    }
                }
                for j in t + 1..c {
                    if !self.a[(t, j)].is_zero() {
                        let k = self.a[(t, j)].div_floor(&self.a[(t, t)]);
                        self.col_op(j, t, &-k);
                        if !self.a[(t, j)].is_zero() {
                            clean = false;
                        }
                    }
                }
                if !clean {
                    // move the smallest remaining entry of row/col t to the pivot
                    let mut best = (t, t);
                    for i in t + 1..r {
                        let v = &self.a[(i, t)];
                        if !v.is_zero() && v.abs() < self.a[best].abs() {
                            best = (i, t);
                        }
                    }
                    for j in t + 1..c {
                        let v = &self.a[(t, j)];
                        if !v.is_zero() && v.abs() < self.a[best].abs() {
                            best = (t, j);
                        }
                    }
                    self.swap_rows(t, best.0);
                    self.swap_cols(t, best.1);
                    continue;
                }
                // divisibility condition on the remaining block
                let piv = self.a[(t, t)].clone();
                let bad = (t + 1..r).find(|&i| {
                    (t + 1..c).any(|j| !(self.a[(i, j)].clone() % piv.clone()).is_zero())
                });
                match bad {
                    Some(i) => self.row_op(t, i, &T::one()),
                    None => break,
                }
            }
            if self.a[(t, t)].is_negative() {
                self.a.negate_row(t);
                self.p.negate_row(t);
                self.pinv.negate_col(t);
            }
            diagonal.push(self.a[(t, t)].clone());
            t += 1;
        }
        Smith {
            diagonal,
            left: self.p,
            left_inv: self.pinv,
            right: self.q,
            right_inv: self.qinv,
            shape: (r, c),
        }
    }
}

/// Integer roots of a polynomial (coefficients from the constant term up),
/// with multiplicity, and the remaining cofactor.
pub fn integer_roots<T: ExactInt>(poly: &[T]) -> (Vec<T>, Vec<T>) {
    let mut p: Vec<T> = poly.to_vec();
    while p.len() > 1 && p.last().is_some_and(|x| x.is_zero()) {
        p.pop();
    }
    let mut roots = Vec::new();
    // zero roots
    while p.len() > 1 && p[0].is_zero() {
        roots.push(T::zero());
        p.remove(0);
    }
    loop {
        if p.len() <= 1 {
            break;
        }
        let c0 = p[0].abs();
        let mut found = None;
        let mut k = T::one();
        while k.clone() * k.clone() <= c0 || k <= c0 {
            if (c0.clone() % k.clone()).is_zero() {
                for cand in [k.clone(), -k.clone()] {
                    if eval_poly(&p, &cand).is_zero() {
                        found = Some(cand);
                        break;
                    }
                }
            }
            if found.is_some() || k > c0 {
                break;
            }
            k = k + T::one();
        }
        match found {
            Some(root) => {
                p = deflate(&p, &root);
                roots.push(root);
            }
            None => break,
        }
    }
    roots.sort();
    (roots, p)
}

pub fn eval_poly<T: ExactInt>(p: &[T], x: &T) -> T {
    p.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
}

/// Divide by `(x - root)`; assumes exact.
fn deflate<T: ExactInt>(p: &[T], root: &T) -> Vec<T> {
    let n = p.len() - 1;
    let mut out = vec![T::zero(); n];
    let mut carry = T::zero();
    for i in (0..n).rev() {
        carry = p[i + 1].clone() + carry * root.clone();
        out[i] = carry.clone();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type M = IntMatrix<i64>;

    fn check(a: &M) -> Smith<i64> {
        let s = a.smith();
        let d = s.left.mul(a).unwrap().mul(&s.right).unwrap();
        assert_eq!(d, s.d_matrix(), "P A Q != D for {a:?}");
        assert_eq!(s.left.mul(&s.left_inv).unwrap(), M::identity(a.rows()));
        assert_eq!(s.right.mul(&s.right_inv).unwrap(), M::identity(a.cols()));
        for w in s.diagonal.windows(2) {
            assert_eq!(w[1] % w[0], 0, "divisibility chain");
        }
        assert!(s.diagonal.iter().all(|&x| x > 0));
        s
    }

    #[test]
    fn psl2z_abelianization_matrix() {
        let s = check(&M::from_i64_rows(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.diagonal, vec![1, 6]);
    }

    #[test]
    fn commutator_relator() {
        let s = check(&M::from_i64_rows(&[&[0, 0]]));
        assert!(s.diagonal.is_empty());
    }

    #[test]
    fn empty_shapes() {
        let s = check(&M::zeros(0, 3));
        assert_eq!(s.rank(), 0);
        let s = check(&M::zeros(2, 0));
        assert_eq!(s.rank(), 0);
    }

    #[test]
    fn char_poly_and_roots() {
        let a = M::from_i64_rows(&[&[3, 0, 0], &[0, -2, 1], &[0, 0, -2]]);
        let cp = a.char_poly().unwrap();
        // (x-3)(x+2)^2 = x^3 + x^2 - 8x - 12
        assert_eq!(cp, vec![-12, -8, 1, 1]);
        let (roots, rest) = integer_roots(&cp);
        assert_eq!(roots, vec![-2, -2, 3]);
        assert_eq!(rest, vec![1]);
        let (roots, rest) = integer_roots(&[-2i64, 0, 1]);
        assert!(roots.is_empty());
        assert_eq!(rest, vec![-2, 0, 1]);
    }

    proptest! {
        #[test]
        fn smith_is_a_valid_factorization(
            rows in 0usize..5, cols in 0usize..5,
            vals in proptest::collection::vec(-12i64..12, 25)
        ) {
            let data: Vec<Vec<i64>> = (0..rows)
                .map(|i| (0..cols).map(|j| vals[i * 5 + j]).collect())
                .collect();
            let a = if rows == 0 { M::zeros(0, cols) } else { M::from_rows(data).unwrap() };
            let s = check(&a);
            // determinant of D equals |det A| for square full-rank A
            if rows == cols && s.rank() == rows {
                let prod: i64 = s.diagonal.iter().product();
                let cp = a.char_poly().unwrap();
                let det = if rows % 2 == 0 { cp[0] } else { -cp[0] };
                prop_assert_eq!(prod, det.abs());
            }
        }
    }
}
