//! The quantum matrix algebra generated by M_α^β and M_α̇^β̇: words,
//! elements, relations, the normal form engine, Hopf operations and the
//! exchange functionals f_±.

pub mod checks;
mod engine;
mod functional;
mod hopf;
mod relations;

pub use engine::{Certificate, NormalFormEngine, SectorStats, DEGREE_CAP};
pub use functional::{convolve, Functionals, Order, WordFunctional};
pub use hopf::{antipode, antipode_gen, antipode_inverse, coproduct, coproduct_word, counit, TensorElement};
pub use relations::{build_relations, CrossRelations, Relation, RelationKind, RelationSet};

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Prec, Real, Scalar};

/// One of the eight generators, encoded as 4·dotted + 2·row + col.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gen(u8);

impl Gen {
    pub const COUNT: usize = 8;

    pub fn new(dotted: bool, row: usize, col: usize) -> Self {
        assert!(row < 2 && col < 2);
        Gen(4 * u8::from(dotted) + 2 * row as u8 + col as u8)
    }

    pub fn undotted(row: usize, col: usize) -> Self {
        Gen::new(false, row, col)
    }

    pub fn dotted_gen(row: usize, col: usize) -> Self {
        Gen::new(true, row, col)
    }

    pub fn from_code(code: u8) -> Result<Self> {
        if code < 8 {
            Ok(Gen(code))
        } else {
            Err(Error::UnknownGenerator(code))
        }
    }

    pub fn all() -> impl Iterator<Item = Gen> {
        (0..8).map(Gen)
    }

    pub fn code(self) -> u8 {
        self.0
    }

    pub fn is_dotted(self) -> bool {
        self.0 >= 4
    }

    pub fn row(self) -> usize {
        usize::from((self.0 % 4) / 2)
    }

    pub fn col(self) -> usize {
        usize::from(self.0 % 2)
    }

    /// The same indices with the dotting toggled.
    pub fn toggled(self) -> Gen {
        Gen((self.0 + 4) % 8)
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = if self.is_dotted() { "Ṁ" } else { "M" };
        write!(f, "{m}{}^{}", self.row() + 1, self.col() + 1)
    }
}

/// An ordered product of generators; the empty word is the unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Gen>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn new(gens: Vec<Gen>) -> Self {
        Word(gens)
    }

    pub fn from_codes(codes: &[u8]) -> Result<Self> {
        codes.iter().map(|&c| Gen::from_code(c)).collect::<Result<Vec<_>>>().map(Word)
    }

    pub fn gens(&self) -> &[Gen] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Non-decreasing codes: undotted block first, each block by (row, col).
    pub fn is_sorted(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    /// All words of length ≤ `n` over the given letters, shortest first.
    pub fn all_up_to(letters: &[Gen], n: usize) -> Vec<Word> {
        let mut out = vec![Word::unit()];
        let mut layer = vec![Word::unit()];
        for _ in 0..n {
            let next: Vec<Word> = layer
                .iter()
                .flat_map(|w| letters.iter().map(move |&g| w.concat(&Word(vec![g]))))
                .collect();
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    /// Dense index among all words of length ≤ max over the 8 generators.
    pub(crate) fn index(&self) -> usize {
        let offset: usize = (0..self.len()).map(|k| 8usize.pow(k as u32)).sum();
        offset + self.0.iter().fold(0usize, |acc, g| acc * 8 + usize::from(g.0))
    }
}

impl From<Gen> for Word {
    fn from(g: Gen) -> Self {
        Word(vec![g])
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("I");
        }
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

/// A finite linear combination of words.
#[derive(Clone, PartialEq)]
pub struct AlgebraElement {
    terms: BTreeMap<Word, Scalar>,
    prec: Prec,
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, c)| format!("({c:.6})·{w}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl AlgebraElement {
    pub fn zero(prec: Prec) -> Self {
        AlgebraElement { terms: BTreeMap::new(), prec }
    }

    pub fn one(prec: Prec) -> Self {
        Self::word(Word::unit(), prec)
    }

    pub fn scalar(c: Scalar) -> Self {
        let prec = c.prec();
        let mut e = Self::zero(prec);
        e.add_term(Word::unit(), &c);
        e
    }

    pub fn word(w: Word, prec: Prec) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(w, Scalar::one(prec));
        AlgebraElement { terms, prec }
    }

    pub fn gen(g: Gen, prec: Prec) -> Self {
        Self::word(Word::from(g), prec)
    }

    pub fn prec(&self) -> Prec {
        self.prec
    }

    pub fn terms(&self) -> &BTreeMap<Word, Scalar> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(|| Scalar::zero(self.prec))
    }

    /// Highest word length present (0 for the zero element).
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    /// `self += c · w`.
    pub fn add_term(&mut self, w: Word, c: &Scalar) {
        match self.terms.get_mut(&w) {
            Some(v) => *v += c,
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, c: &Scalar, other: &AlgebraElement) {
        for (w, v) in &other.terms {
            self.add_term(w.clone(), &(c * v));
        }
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        out.add_scaled(&Scalar::one(self.prec), other);
        out
    }

    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        out.add_scaled(&-Scalar::one(self.prec), other);
        out
    }

    pub fn scale(&self, c: &Scalar) -> AlgebraElement {
        AlgebraElement { terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect(), prec: self.prec }
    }

    pub fn mul(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = Self::zero(self.prec);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), &(c1 * c2));
            }
        }
        out
    }

    /// Antilinear, antimultiplicative involution: conjugate, toggle dots, reverse.
    pub fn star(&self) -> AlgebraElement {
        let terms = self
            .terms
            .iter()
            .map(|(w, c)| (Word(w.0.iter().rev().map(|g| g.toggled()).collect()), c.conj()))
            .collect();
        AlgebraElement { terms, prec: self.prec }
    }

    /// Apply a linear map defined word by word.
    pub fn map_words(&self, mut f: impl FnMut(&Word) -> AlgebraElement) -> AlgebraElement {
        let mut out = Self::zero(self.prec);
        for (w, c) in &self.terms {
            out.add_scaled(c, &f(w));
        }
        out
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> Real {
        let mut m = Real::new(self.prec.bits());
        for c in self.terms.values() {
            let a = c.abs();
            if a > m {
                m = a;
            }
        }
        m
    }

    /// Remove and return the coefficient of `w`.
    pub fn take(&mut self, w: &Word) -> Scalar {
        self.terms.remove(w).unwrap_or_else(|| Scalar::zero(self.prec))
    }

    /// Drop coefficients with modulus ≤ `drop`.
    pub fn prune(mut self, drop: &Real) -> AlgebraElement {
        self.terms.retain(|_, v| v.abs() > *drop);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_encoding() {
        let g = Gen::new(true, 1, 0);
        assert_eq!(g.code(), 6);
        assert!(g.is_dotted());
        assert_eq!((g.row(), g.col()), (1, 0));
        assert_eq!(g.toggled(), Gen::undotted(1, 0));
        assert!(Gen::from_code(8).is_err());
        assert_eq!(g.to_string(), "Ṁ2^1");
    }

    #[test]
    fn word_indices_are_dense() {
        let all = Word::all_up_to(&Gen::all().collect::<Vec<_>>(), 3);
        let mut idx: Vec<usize> = all.iter().map(Word::index).collect();
        idx.sort_unstable();
        assert_eq!(idx, (0..all.len()).collect::<Vec<_>>());
    }

    #[test]
    fn star_reverses_and_conjugates() {
        let p = Prec::from_digits(40);
        let x = AlgebraElement::word(Word::from_codes(&[0, 5]).unwrap(), p).scale(&Scalar::i(p));
        let y = x.star();
        assert_eq!(y.coefficient(&Word::from_codes(&[1, 4]).unwrap()), -Scalar::i(p));
        assert_eq!(y.star(), x);
    }
}
