//! Exact sparse elimination over words, relation generators, and the
//! windowed PBW reducer for the `e`- and `f`-blocks.

use super::{anti, comm, Element, GenSymbol, Word};
use crate::error::{Error, Result};
use crate::scalars::{int, rat, Rational};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};

/// Row echelon form over words. Each stored row is normalised so that its
/// pivot (largest word under `(class, word)`) has coefficient 1.
pub struct Echelon {
    class: Box<dyn Fn(&Word) -> u8 + Send + Sync>,
    rows: HashMap<Word, Vec<(Word, Rational)>>,
}

impl Echelon {
    /// `class` ranks words; higher classes are eliminated first.
    pub fn new(class: impl Fn(&Word) -> u8 + Send + Sync + 'static) -> Self {
        Echelon { class: Box::new(class), rows: HashMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, w: &Word) -> bool {
        self.rows.contains_key(w)
    }

    pub fn pivots(&self) -> impl Iterator<Item = &Word> {
        self.rows.keys()
    }

    /// Remainder of `v` modulo the row space; contains no pivot words.
    pub fn reduce(&self, v: &Element) -> Element {
        let mut work: BTreeMap<(u8, Word), Rational> = BTreeMap::new();
        for (w, c) in v.terms() {
            work.insert(((self.class)(w), w.clone()), c.clone());
        }
        let mut out = Element::zero();
        while let Some(((_, w), c)) = work.pop_last() {
            if c.is_zero() {
                continue;
            }
            match self.rows.get(&w) {
                Some(row) => {
                    for (w2, c2) in row {
                        let key = ((self.class)(w2), w2.clone());
                        let slot = work.entry(key).or_insert_with(Rational::zero);
                        *slot -= &c * c2;
                    }
                }
                None => out.add_term(w, c),
            }
        }
        out
    }

    /// Insert `v`; returns `false` when it was already in the span.
    pub fn insert(&mut self, v: &Element) -> bool {
        let r = self.reduce(v);
        if r.is_zero() {
            return false;
        }
        let (pivot, lead) = r
            .terms()
            .max_by(|a, b| ((self.class)(a.0), a.0).cmp(&((self.class)(b.0), b.0)))
            .map(|(w, c)| (w.clone(), c.clone()))
            .unwrap();
        let inv = lead.recip();
        let row = r.terms().filter(|(w, _)| **w != pivot).map(|(w, c)| (w.clone(), c * &inv)).collect();
        self.rows.insert(pivot, row);
        true
    }
}

/// The positive `e`-block or `f`-block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    E,
    F,
}

impl Block {
    pub fn letter(self, k: i64) -> GenSymbol {
        match self {
            Block::E => GenSymbol::e(k),
            Block::F => GenSymbol::f(k),
        }
    }

    pub fn capital(self, k: i64) -> GenSymbol {
        match self {
            Block::E => GenSymbol::big_e(k),
            Block::F => GenSymbol::big_f(k),
        }
    }

    /// `+1` for `e`, `−1` for `f`: the sign of the commutator terms in the
    /// quadratic relation and of the middle term of the cubic one.
    pub fn sign(self) -> i64 {
        match self {
            Block::E => 1,
            Block::F => -1,
        }
    }

    fn x(self, k: i64) -> Element {
        Element::gen(self.letter(k))
    }

    /// Word is in canonical PBW order: ascending keys for `E⁺`, descending for `F⁺`.
    pub fn is_pbw(self, w: &Word) -> bool {
        w.0.windows(2).all(|p| match self {
            Block::E => p[0].block_key() <= p[1].block_key(),
            Block::F => p[0].block_key() >= p[1].block_key(),
        })
    }

    pub fn owns(self, s: &GenSymbol) -> bool {
        match self {
            Block::E => s.is_e_like(),
            Block::F => s.is_f_like(),
        }
    }
}

/// Quadratic exchange relation for `(k,l)`:
/// `2{x_{k+2},x_l} + 2{x_k,x_{l+2}} − 4{x_{k+1},x_{l+1}} − {x_k,x_l} − s[x_{k+1},x_l] + s[x_k,x_{l+1}]`.
pub fn quadratic(block: Block, k: i64, l: i64) -> Element {
    let x = |m| block.x(m);
    let s = int(block.sign());
    anti(&x(k + 2), &x(l)).scale(&int(2)) + anti(&x(k), &x(l + 2)).scale(&int(2))
        - anti(&x(k + 1), &x(l + 1)).scale(&int(4))
        - anti(&x(k), &x(l))
        - comm(&x(k + 1), &x(l)).scale(&s)
        + comm(&x(k), &x(l + 1)).scale(&s)
}

/// Coefficient of `u^{−N−3}` in the generating-function Serre relation
/// `x(u)³ − s·x(u){x(u),x₀} − [x₀², x(u)]`, `N ≥ −1`.
pub fn serre_coefficient(block: Block, n: i64) -> Element {
    let x = |m| block.x(m);
    let mut out = Element::zero();
    for a in 0..=n {
        for b in 0..=(n - a) {
            out = out + &(&x(a) * &x(b)) * &x(n - a - b);
        }
    }
    let s = int(block.sign());
    for a in 0..=(n + 1) {
        out = out - (&x(a) * &anti(&x(n + 1 - a), &x(0))).scale(&s);
    }
    out - comm(&(&x(0) * &x(0)), &x(n + 2))
}

/// `X_{2k+1} − {x_k,x_{k+1}} + x_k²/4`.
pub fn capital_relation(block: Block, k: i64) -> Element {
    Element::gen(block.capital(k)) - Element::gen(block.capital(k)).expand_capitals()
}

/// All words of weighted length `len` (capitals count 2) with modes ≥ 0 and
/// degree ≤ `max_deg`.
pub fn block_words(block: Block, len: usize, max_deg: i64) -> Vec<Word> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(block: Block, len: usize, budget: i64, cur: &mut Vec<GenSymbol>, out: &mut Vec<Word>) {
        if len == 0 {
            out.push(Word(cur.clone()));
            return;
        }
        if budget < 0 {
            return;
        }
        for k in 0..=budget {
            cur.push(block.letter(k));
            rec(block, len - 1, budget - k, cur, out);
            cur.pop();
        }
        if len >= 2 {
            let mut k = 0;
            while 2 * k < budget {
                cur.push(block.capital(k));
                rec(block, len - 2, budget - (2 * k + 1), cur, out);
                cur.pop();
                k += 1;
            }
        }
    }
    rec(block, len, max_deg, &mut cur, &mut out);
    out
}

/// Relation cores with their weighted length and top degree.
fn cores(block: Block, max_len: usize, max_deg: i64) -> Vec<(usize, i64, Element)> {
    let mut out = Vec::new();
    let mut k = 0;
    while 2 * k < max_deg && max_len >= 2 {
        out.push((2, 2 * k + 1, capital_relation(block, k)));
        k += 1;
    }
    if max_len >= 2 {
        for k in 0..=max_deg {
            for l in 0..=max_deg {
                if k + l + 2 <= max_deg {
                    out.push((2, k + l + 2, quadratic(block, k, l)));
                }
            }
        }
    }
    if max_len >= 3 {
        for n in -1..=(max_deg - 2) {
            out.push((3, n + 2, serre_coefficient(block, n)));
        }
    }
    out
}

/// Exact PBW reduction inside the window of weighted length `len` and degree
/// `≤ degree` of one block.
pub struct BlockReducer {
    pub block: Block,
    pub length: usize,
    pub degree: i64,
    pub word_count: usize,
    pub pbw_count: usize,
    echelon: Echelon,
}

impl BlockReducer {
    pub fn build(block: Block, length: usize, degree: i64) -> Result<Self> {
        let class = move |w: &Word| if block.is_pbw(w) { 0 } else { 1 };
        let mut echelon = Echelon::new(class);
        let words = block_words(block, length, degree);
        let pbw_count = words.iter().filter(|w| block.is_pbw(w)).count();
        for (clen, cdeg, core) in cores(block, length, degree) {
            if clen > length {
                continue;
            }
            let rest = length - clen;
            let budget = degree - cdeg;
            for lp in 0..=rest {
                for p in block_words(block, lp, budget) {
                    let pe = Element::from_word(p.clone());
                    let left = &pe * &core;
                    for s in block_words(block, rest - lp, budget - p.degree()) {
                        echelon.insert(&(&left * &Element::from_word(s)));
                    }
                }
            }
        }
        let bad_pivot = echelon.pivots().find(|w| block.is_pbw(w)).cloned();
        if let Some(w) = bad_pivot {
            return Err(Error::PbwDefect(format!("PBW word {w} is dependent (length {length}, degree {degree})")));
        }
        if echelon.rank() + pbw_count != words.len() {
            return Err(Error::PbwDefect(format!(
                "window (length {length}, degree {degree}): {} words, rank {}, {} PBW words",
                words.len(),
                echelon.rank(),
                pbw_count
            )));
        }
        Ok(BlockReducer { block, length, degree, word_count: words.len(), pbw_count, echelon })
    }

    /// Normal form of a block element (all words of this window's length).
    pub fn reduce(&self, x: &Element) -> Element {
        self.echelon.reduce(x)
    }
}

/// Bounded two-sided ideal membership: is `target` in the span of `gens`?
pub fn in_span(gens: &[Element], target: &Element) -> bool {
    let mut ech = Echelon::new(|_| 0);
    for g in gens {
        ech.insert(g);
    }
    ech.reduce(target).is_zero()
}

/// `x/4` and friends, used by rule tables.
pub fn quarter() -> Rational {
    rat(1, 4)
}

pub fn is_one(q: &Rational) -> bool {
    q.is_one()
}
