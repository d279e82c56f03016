//! Freely reduced words over a numbered generating set.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub gen: usize,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: usize, inv: bool) -> Self {
        Letter { gen, inv }
    }

    pub fn inverse(self) -> Self {
        Letter { gen: self.gen, inv: !self.inv }
    }

    pub fn exponent(self) -> i64 {
        if self.inv {
            -1
        } else {
            1
        }
    }
}

/// A freely reduced word. Evaluation order is left to right: the word
/// `x1 x2 ... xk` denotes the product `x1 * x2 * ... * xk`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut w = Word::empty();
        for l in letters {
            w.push(l);
        }
        w
    }

    pub fn gen(g: usize) -> Self {
        Word(vec![Letter::new(g, false)])
    }

    /// `g^k`.
    pub fn power_of(g: usize, k: i64) -> Self {
        let l = Letter::new(g, k < 0);
        Word(vec![l; k.unsigned_abs() as usize])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Append a letter, cancelling against the last one if possible.
    pub fn push(&mut self, l: Letter) {
        if self.0.last() == Some(&l.inverse()) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn append(&mut self, o: &Word) {
        for &l in &o.0 {
            self.push(l);
        }
    }

    pub fn concat(&self, o: &Word) -> Word {
        let mut w = self.clone();
        w.append(o);
        w
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::empty();
        for _ in 0..k.unsigned_abs() {
            w.append(&base);
        }
        w
    }

    /// Remove inverse pairs wrapping around the ends.
    pub fn cyclically_reduced(&self) -> Word {
        let mut v = self.0.as_slice();
        while v.len() >= 2 && v[0] == v[v.len() - 1].inverse() {
            v = &v[1..v.len() - 1];
        }
        Word(v.to_vec())
    }

    /// Lexicographically least representative among the cyclic
    /// permutations of the word and of its inverse.
    pub fn cyclic_key(&self) -> Word {
        let c = self.cyclically_reduced();
        let inv = c.inverse();
        let n = c.len();
        let mut best = c.clone();
        for w in [&c, &inv] {
            for s in 0..n {
                let rot: Vec<Letter> = w.0[s..].iter().chain(&w.0[..s]).copied().collect();
                if rot < best.0 {
                    best = Word(rot);
                }
            }
        }
        best
    }

    /// Exponent sum of each generator.
    pub fn exponent_sums(&self, ngens: usize) -> Vec<i64> {
        let mut v = vec![0i64; ngens];
        for l in &self.0 {
            v[l.gen] += l.exponent();
        }
        v
    }

    pub fn occurrences(&self, g: usize) -> usize {
        self.0.iter().filter(|l| l.gen == g).count()
    }

    /// Replace every occurrence of generator `g` by `by` (and `g^-1` by its
    /// inverse).
    pub fn substitute(&self, g: usize, by: &Word) -> Word {
        let by_inv = by.inverse();
        let mut w = Word::empty();
        for &l in &self.0 {
            if l.gen == g {
                w.append(if l.inv { &by_inv } else { by });
            } else {
                w.push(l);
            }
        }
        w
    }

    /// Renumber generators; `map[g]` is the new index of `g`.
    pub fn renumber(&self, map: &[usize]) -> Word {
        Word::from_letters(self.0.iter().map(|l| Letter::new(map[l.gen], l.inv)))
    }

    /// If the word is a proper power `r^k` (k >= 2) of a shorter word,
    /// returns `(r, k)` with `k` maximal.
    pub fn proper_root(&self) -> Option<(Word, u32)> {
        let n = self.len();
        (1..n).filter(|&d| n.is_multiple_of(d)).find_map(|d| {
            let root = &self.0[..d];
            let ok = self.0.chunks(d).all(|c| c == root);
            (ok && n / d >= 2).then(|| (Word(root.to_vec()), (n / d) as u32))
        })
    }

    /// Parse words like `S T^-1`, `a b A^3`, `(S T)^3`, separated by
    /// whitespace or `*`.
    pub fn parse(s: &str, names: &[String]) -> Result<Word> {
        let mut p = WordParser { src: s, pos: 0, names };
        let w = p.sequence()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.error("unexpected character"));
        }
        Ok(w)
    }

    pub fn display(&self, names: &[String]) -> String {
        let mut out = String::new();
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut run = 1;
            while i + run < self.0.len() && self.0[i + run] == l {
                run += 1;
            }
            if !out.is_empty() {
                out.push(' ');
            }
            out.push_str(&names[l.gen]);
            let e = if l.inv { -(run as i64) } else { run as i64 };
            if e != 1 {
                let _ = write!(out, "^{e}");
            }
            i += run;
        }
        out
    }
}

struct WordParser<'a> {
    src: &'a str,
    pos: usize,
    names: &'a [String],
}

impl WordParser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::parse(format!("column {}", self.pos + 1), format!("{msg} in word {:?}", self.src))
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() || c == '*' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn sequence(&mut self) -> Result<Word> {
        let mut w = Word::empty();
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some(')') => return Ok(w),
                _ => {
                    let f = self.factor()?;
                    w.append(&f);
                }
            }
        }
    }

    fn factor(&mut self) -> Result<Word> {
        let base = if self.peek() == Some('(') {
            self.pos += 1;
            let inner = self.sequence()?;
            if self.peek() != Some(')') {
                return Err(self.error("missing ')'"));
            }
            self.pos += 1;
            inner
        } else {
            let start = self.pos;
            while let Some(c) = self.peek() {
                if c.is_alphanumeric() || c == '_' || c == '\'' {
                    self.pos += c.len_utf8();
                } else {
                    break;
                }
            }
            let name = &self.src[start..self.pos];
            if name.is_empty() {
                return Err(self.error("expected generator name"));
            }
            let g = self
                .names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| self.error(&format!("unknown generator {name:?}")))?;
            Word::gen(g)
        };
        if self.peek() == Some('^') {
            self.pos += 1;
            let start = self.pos;
            if self.peek() == Some('-') {
                self.pos += 1;
            }
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            let k: i64 = self.src[start..self.pos]
                .parse()
                .map_err(|_| self.error("bad exponent"))?;
            Ok(base.pow(k))
        } else {
            Ok(base)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        vec!["S".into(), "T".into()]
    }

    #[test]
    fn free_reduction() {
        let w = Word::parse("S T T^-1 S^-1 T", &names()).unwrap();
        assert_eq!(w, Word::gen(1));
        assert!(Word::parse("T^3 T^-3", &names()).unwrap().is_empty());
    }

    #[test]
    fn parse_and_display() {
        let w = Word::parse("(S T)^3", &names()).unwrap();
        assert_eq!(w.len(), 6);
        assert_eq!(w.display(&names()), "S T S T S T");
        let v = Word::parse("T^-2*S", &names()).unwrap();
        assert_eq!(v.display(&names()), "T^-2 S");
        assert!(Word::parse("S X", &names()).is_err());
        assert!(Word::parse("(S T", &names()).is_err());
    }

    #[test]
    fn roots_and_cyclic_keys() {
        let w = Word::parse("(S T)^3", &names()).unwrap();
        let (r, k) = w.proper_root().unwrap();
        assert_eq!((r.len(), k), (2, 3));
        let a = Word::parse("S T S^-1", &names()).unwrap();
        assert_eq!(a.cyclically_reduced(), Word::gen(1));
        let b = Word::parse("T S", &names()).unwrap();
        let c = Word::parse("S T", &names()).unwrap();
        assert_eq!(b.cyclic_key(), c.cyclic_key());
        assert_eq!(c.inverse().cyclic_key(), c.cyclic_key());
    }

    #[test]
    fn substitution() {
        let w = Word::parse("S T S^-1", &names()).unwrap();
        let by = Word::parse("T T", &names()).unwrap();
        assert_eq!(w.substitute(0, &by).display(&names()), "T");
    }
}
