//! The Drinfel'd mode algebra.
//!
//! Words in the mode generators `e_k`, `f_k`, `h_k` and the abbreviations
//! `E_{2k+1} = {e_k,e_{k+1}} − e_k²/4`, `F_{2k+1} = {f_k,f_{k+1}} − f_k²/4`,
//! with exact rational coefficients. Equalities in the quotient algebra are
//! produced either by rewriting with the exchange relations ([`rewrite`]) or
//! by exact linear algebra inside a finite window ([`linalg`]).

pub mod linalg;
pub mod pbw;
pub mod rewrite;
pub mod serre;

pub use pbw::{pbw_enumerate, pbw_enumerate_levels, Level, PbwIndex, Side};
pub use rewrite::{normal_order_plus, rewrite_step, Normalizer, Strategy, TraceStep};
pub use serre::{graded_limit_check, serre_mode_check, SerreWindow};

use crate::scalars::{int, rat, Rational};
use num_traits::{One, Zero};
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// `e_k`
    E,
    /// `f_k`
    F,
    /// `h_k`
    H,
    /// `E_{2k+1}`
    BigE,
    /// `F_{2k+1}`
    BigF,
}

/// One mode generator. For `E`/`F` abbreviations `mode` is the odd label `2k+1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenSymbol {
    pub family: Family,
    pub mode: i64,
}

impl GenSymbol {
    pub fn e(k: i64) -> Self {
        GenSymbol { family: Family::E, mode: k }
    }
    pub fn f(k: i64) -> Self {
        GenSymbol { family: Family::F, mode: k }
    }
    pub fn h(k: i64) -> Self {
        GenSymbol { family: Family::H, mode: k }
    }
    /// `E_{2k+1}`.
    pub fn big_e(k: i64) -> Self {
        GenSymbol { family: Family::BigE, mode: 2 * k + 1 }
    }
    /// `F_{2k+1}`.
    pub fn big_f(k: i64) -> Self {
        GenSymbol { family: Family::BigF, mode: 2 * k + 1 }
    }

    /// `k` for `E_{2k+1}`/`F_{2k+1}`, the mode otherwise.
    pub fn level(&self) -> i64 {
        match self.family {
            Family::BigE | Family::BigF => (self.mode - 1).div_euclid(2),
            _ => self.mode,
        }
    }

    pub fn parity(&self) -> u8 {
        match self.family {
            Family::E | Family::F => 1,
            _ => 0,
        }
    }

    /// Filtration degree: `deg e_k = k`, `deg E_{2k+1} = 2k+1`.
    pub fn degree(&self) -> i64 {
        self.mode
    }

    /// Number of `e`/`f` letters after expanding abbreviations.
    pub fn length(&self) -> usize {
        match self.family {
            Family::BigE | Family::BigF => 2,
            _ => 1,
        }
    }

    pub fn is_capital(&self) -> bool {
        matches!(self.family, Family::BigE | Family::BigF)
    }

    /// Belongs to the `e`-block (`e`, `E`).
    pub fn is_e_like(&self) -> bool {
        matches!(self.family, Family::E | Family::BigE)
    }

    /// Belongs to the `f`-block (`f`, `F`).
    pub fn is_f_like(&self) -> bool {
        matches!(self.family, Family::F | Family::BigF)
    }

    /// PBW key inside a block: `e_k ↦ 2k`, `E_{2k+1} ↦ 2k+1` (same for `f`, `F`).
    pub fn block_key(&self) -> i64 {
        match self.family {
            Family::E | Family::F => 2 * self.mode,
            Family::BigE | Family::BigF => self.mode,
            Family::H => self.mode,
        }
    }

    /// Definition of an abbreviation as an element; other symbols map to themselves.
    pub fn expand(&self) -> Element {
        match self.family {
            Family::BigE => capital_definition(GenSymbol::e(self.level()), GenSymbol::e(self.level() + 1)),
            Family::BigF => capital_definition(GenSymbol::f(self.level()), GenSymbol::f(self.level() + 1)),
            _ => Element::gen(*self),
        }
    }
}

/// `{x,y} − x²/4`.
fn capital_definition(x: GenSymbol, y: GenSymbol) -> Element {
    let (x, y) = (Element::gen(x), Element::gen(y));
    anti(&x, &y) - (&x * &x).scale(&rat(1, 4))
}

impl fmt::Display for GenSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.family {
            Family::E => "e",
            Family::F => "f",
            Family::H => "h",
            Family::BigE => "E",
            Family::BigF => "F",
        };
        write!(f, "{name}{}", self.mode)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub Vec<GenSymbol>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parity(&self) -> u8 {
        self.0.iter().map(|s| s.parity()).sum::<u8>() % 2
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|s| s.degree()).sum()
    }

    /// Letter count with abbreviations expanded.
    pub fn expanded_length(&self) -> usize {
        self.0.iter().map(|s| s.length()).sum()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn min_mode(&self) -> Option<i64> {
        self.0.iter().map(|s| s.level()).min()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Finite rational combination of words; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Element(BTreeMap<Word, Rational>);

impl Element {
    pub fn zero() -> Self {
        Element(BTreeMap::new())
    }

    pub fn one() -> Self {
        Self::from_word(Word::empty())
    }

    pub fn gen(s: GenSymbol) -> Self {
        Self::from_word(Word(vec![s]))
    }

    pub fn from_word(w: Word) -> Self {
        let mut m = BTreeMap::new();
        m.insert(w, int(1));
        Element(m)
    }

    /// Product of generators.
    pub fn monomial(symbols: &[GenSymbol]) -> Self {
        Self::from_word(Word(symbols.to_vec()))
    }

    pub fn term(c: Rational, w: Word) -> Self {
        let mut e = Self::zero();
        e.add_term(w, c);
        e
    }

    pub fn add_term(&mut self, w: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.0.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Word, Rational)> {
        self.0.into_iter()
    }

    pub fn coeff(&self, w: &Word) -> Rational {
        self.0.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeff_of(&self, symbols: &[GenSymbol]) -> Rational {
        self.coeff(&Word(symbols.to_vec()))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Element(self.0.iter().map(|(w, c)| (w.clone(), c * q)).collect())
    }

    /// Largest filtration degree among the words (`None` for zero).
    pub fn degree(&self) -> Option<i64> {
        self.0.keys().map(|w| w.degree()).max()
    }

    /// Terms of exactly the given degree.
    pub fn degree_part(&self, d: i64) -> Self {
        Element(self.0.iter().filter(|(w, _)| w.degree() == d).map(|(w, c)| (w.clone(), c.clone())).collect())
    }

    /// `Some(p)` if every word has parity `p`.
    pub fn parity(&self) -> Option<u8> {
        let mut it = self.0.keys().map(|w| w.parity());
        let first = it.next()?;
        if it.all(|p| p == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn min_mode(&self) -> Option<i64> {
        self.0.keys().filter_map(|w| w.min_mode()).min()
    }

    pub fn max_mode(&self) -> Option<i64> {
        self.0.keys().flat_map(|w| w.0.iter().map(|s| s.mode)).max()
    }

    /// Replace every `E`/`F` abbreviation by its definition.
    pub fn expand_capitals(&self) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.0 {
            let mut acc = Self::one();
            for s in &w.0 {
                acc = &acc * &s.expand();
            }
            out = out + acc.scale(c);
        }
        out
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.0 {
            let neg = c < &Rational::zero();
            let a = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            if a.is_one() {
                write!(f, "{w}")?;
            } else if w.is_empty() {
                write!(f, "{a}")?;
            } else {
                write!(f, "{a} {w}")?;
            }
        }
        Ok(())
    }
}

impl std::ops::Add for Element {
    type Output = Element;
    fn add(mut self, rhs: Element) -> Element {
        for (w, c) in rhs.0 {
            self.add_term(w, c);
        }
        self
    }
}

impl std::ops::Sub for Element {
    type Output = Element;
    fn sub(self, rhs: Element) -> Element {
        self + rhs.scale(&int(-1))
    }
}

impl std::ops::Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(&int(-1))
    }
}

impl<'a> std::ops::Mul<&'a Element> for &'a Element {
    type Output = Element;
    fn mul(self, rhs: &'a Element) -> Element {
        let mut out = Element::zero();
        for (w1, c1) in &self.0 {
            for (w2, c2) in &rhs.0 {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        out
    }
}

impl std::ops::Mul for Element {
    type Output = Element;
    fn mul(self, rhs: Element) -> Element {
        &self * &rhs
    }
}

/// `{x,y} = xy + yx`.
pub fn anti(x: &Element, y: &Element) -> Element {
    x * y + y * x
}

/// `[x,y] = xy − yx`.
pub fn comm(x: &Element, y: &Element) -> Element {
    x * y - y * x
}

/// Shorthand generators as elements.
pub fn e(k: i64) -> Element {
    Element::gen(GenSymbol::e(k))
}
pub fn f(k: i64) -> Element {
    Element::gen(GenSymbol::f(k))
}
pub fn h(k: i64) -> Element {
    Element::gen(GenSymbol::h(k))
}
pub fn big_e(k: i64) -> Element {
    Element::gen(GenSymbol::big_e(k))
}
pub fn big_f(k: i64) -> Element {
    Element::gen(GenSymbol::big_f(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbol_data() {
        let s = GenSymbol::big_e(1);
        assert_eq!(s.mode, 3);
        assert_eq!(s.level(), 1);
        assert_eq!(s.parity(), 0);
        assert_eq!(GenSymbol::big_f(-1).mode, -1);
        assert_eq!(GenSymbol::big_f(-1).level(), -1);
        assert_eq!(GenSymbol::big_e(-2).level(), -2);
        assert_eq!(GenSymbol::e(3).parity(), 1);
        assert_eq!(Word(vec![GenSymbol::e(1), GenSymbol::big_e(0)]).degree(), 2);
    }

    #[test]
    fn zero_coefficients_vanish() {
        let x = e(0) - e(0);
        assert!(x.is_zero());
        let y = anti(&e(1), &e(0)) - e(1) * e(0) - e(0) * e(1);
        assert!(y.is_zero());
    }

    #[test]
    fn capital_coherence() {
        // expanding E_{2k+1} and re-deriving from the definition is the identity
        for k in -3..4 {
            let want = anti(&e(k), &e(k + 1)) - (e(k) * e(k)).scale(&rat(1, 4));
            assert_eq!(big_e(k).expand_capitals(), want);
            let want = anti(&f(k), &f(k + 1)) - (f(k) * f(k)).scale(&rat(1, 4));
            assert_eq!(big_f(k).expand_capitals(), want);
        }
    }

    #[test]
    fn parity_bookkeeping() {
        assert_eq!((e(0) * f(1)).parity(), Some(0));
        assert_eq!((e(0) * big_e(0)).parity(), Some(1));
        assert_eq!((e(0) + h(0)).parity(), None);
    }

    #[test]
    fn display() {
        let x = e(0) * e(1) - h(2).scale(&rat(1, 2)) + Element::one();
        assert_eq!(x.to_string(), "1 + e0 e1 - 1/2 h2");
    }
}
