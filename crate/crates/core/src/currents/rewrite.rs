//! Ordering rewrites for the positive half.
//!
//! Target order: every `e`/`E` symbol, then every `h`, then every `f`/`F`.
//! Inside the `e`-block keys ascend (`e_k ↦ 2k`, `E_{2k+1} ↦ 2k+1`), inside
//! the `f`-block they descend, and `h`'s ascend by mode.
//!
//! Letter–letter exchanges use closed rules solved from the quadratic
//! relations. Pairs involving an `E`/`F` inside a block are reduced by exact
//! linear algebra in the smallest window containing them
//! ([`BlockReducer`](super::linalg::BlockReducer)).

use super::linalg::{Block, BlockReducer};
use super::{anti, comm, Element, Family, GenSymbol, Word};
use crate::error::{Error, Result};
use crate::scalars::{int, rat};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// Which out-of-order pair is rewritten first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

/// One audited rewrite.
#[derive(Clone, Debug)]
pub struct TraceStep {
    pub rule: &'static str,
    pub position: usize,
    pub word: Word,
    pub result: Element,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] @{} {} -> {}", self.rule, self.position, self.word, self.result)
    }
}

fn rank(s: &GenSymbol) -> u8 {
    match s.family {
        Family::E | Family::BigE => 0,
        Family::H => 1,
        Family::F | Family::BigF => 2,
    }
}

/// Is the adjacent pair `(x, y)` out of the target order?
pub fn out_of_order(x: &GenSymbol, y: &GenSymbol) -> bool {
    let (rx, ry) = (rank(x), rank(y));
    if rx != ry {
        return rx > ry;
    }
    match rx {
        0 => x.block_key() > y.block_key(),
        1 => x.mode > y.mode,
        _ => x.block_key() < y.block_key(),
    }
}

/// Position of the first (or last) out-of-order pair.
pub fn find_disorder(w: &Word, strategy: Strategy) -> Option<usize> {
    let mut hits = (0..w.len().saturating_sub(1)).filter(|&p| out_of_order(&w.0[p], &w.0[p + 1]));
    match strategy {
        Strategy::Leftmost => hits.next(),
        Strategy::Rightmost => hits.next_back(),
    }
}

pub fn is_ordered(w: &Word) -> bool {
    find_disorder(w, Strategy::Leftmost).is_none()
}

fn g(s: GenSymbol) -> Element {
    Element::gen(s)
}

/// `[h_a, x_l]` for `a ≥ 0`, expressed through lower `h`-indices.
/// `sign = +1` for `e`, `−1` for `f`.
fn h_bracket(a: i64, x: GenSymbol, sign: i64) -> Element {
    let fam = |m: i64| GenSymbol { family: x.family, mode: m };
    let l = x.mode;
    let s = int(sign);
    match a {
        0 => g(x).scale(&s),
        1 => {
            let h0 = g(GenSymbol::h(0));
            (g(fam(l + 1)) + anti(&h0, &g(x)).scale(&rat(1, 2))).scale(&s)
        }
        _ => {
            let h2 = g(GenSymbol::h(a - 2));
            let h1 = g(GenSymbol::h(a - 1));
            comm(&h2, &g(fam(l + 2))).scale(&int(-1))
                + comm(&h1, &g(fam(l + 1))).scale(&int(2))
                + comm(&h2, &g(x)).scale(&rat(1, 2))
                + anti(&h1, &g(x)).scale(&rat(sign, 2))
                - anti(&h2, &g(fam(l + 1))).scale(&rat(sign, 2))
        }
    }
}

/// `{x_a, x_b}` for letters of one block with `a > b`, from the quadratic relation.
fn letter_anti(block: Block, a: i64, b: i64) -> Element {
    let x = |m| g(block.letter(m));
    let s = block.sign();
    match a - b {
        1 => g(block.capital(b)) + (&x(b) * &x(b)).scale(&rat(1, 4)),
        2 => {
            (&x(b + 1) * &x(b + 1)).scale(&int(2))
                + (&x(b) * &x(b)).scale(&rat(1, 2))
                + comm(&x(b + 1), &x(b)).scale(&rat(s, 2))
        }
        _ => (anti(&x(a - 1), &x(b + 1)).scale(&int(4)) - anti(&x(a - 2), &x(b + 2)).scale(&int(2))
            + anti(&x(a - 2), &x(b))
            + comm(&x(a - 1), &x(b)).scale(&int(s))
            - comm(&x(a - 2), &x(b + 1)).scale(&int(s)))
        .scale(&rat(1, 2)),
    }
}

/// Super-bracket `[a, b}` of two letters from different blocks.
fn letter_bracket(a: GenSymbol, b: GenSymbol) -> Result<Element> {
    use Family::*;
    let neg = |m: i64| m < 0;
    match (a.family, b.family) {
        (H, H) => Ok(Element::zero()),
        (E, F) | (F, E) => Ok(g(GenSymbol::h(a.mode + b.mode))),
        (H, E) | (H, F) | (E, H) | (F, H) => {
            let (hh, x) = if a.family == H { (a, b) } else { (b, a) };
            if neg(hh.mode) || neg(x.mode) {
                return Err(Error::Unorderable(format!("[{a}, {b}]: negative modes in an h exchange")));
            }
            let sign = if x.family == E { 1 } else { -1 };
            let v = h_bracket(hh.mode, x, sign);
            Ok(if a.family == H { v } else { -v })
        }
        _ => Err(Error::NoRule { position: 0, reason: format!("no bracket rule for {a}, {b}") }),
    }
}

/// `[u, v}` on words, by the graded Leibniz rule down to letters.
fn bracket_words(u: &Word, v: &Word) -> Result<Element> {
    let mut out = Element::zero();
    if u.len() == 1 {
        let a = u.0[0];
        let mut pre_parity = 0u8;
        for (j, &b) in v.0.iter().enumerate() {
            let sign = if a.parity() * pre_parity == 1 { -1 } else { 1 };
            let pre = Element::from_word(Word(v.0[..j].to_vec()));
            let post = Element::from_word(Word(v.0[j + 1..].to_vec()));
            out = out + (&(&pre * &letter_bracket(a, b)?) * &post).scale(&int(sign));
            pre_parity ^= b.parity();
        }
        return Ok(out);
    }
    let vp = v.parity();
    for i in 0..u.len() {
        let post_parity = Word(u.0[i + 1..].to_vec()).parity();
        let sign = if vp * post_parity == 1 { -1 } else { 1 };
        let pre = Element::from_word(Word(u.0[..i].to_vec()));
        let post = Element::from_word(Word(u.0[i + 1..].to_vec()));
        let inner = bracket_words(&Word(vec![u.0[i]]), v)?;
        out = out + (&(&pre * &inner) * &post).scale(&int(sign));
    }
    Ok(out)
}

/// Bilinear extension of [`bracket_words`].
fn bracket(u: &Element, v: &Element) -> Result<Element> {
    let mut out = Element::zero();
    for (wu, cu) in u.terms() {
        for (wv, cv) in v.terms() {
            out = out + bracket_words(wu, wv)?.scale(&(cu * cv));
        }
    }
    Ok(out)
}

/// Rewrites with a shared cache of window reducers.
pub struct Normalizer {
    reducers: Mutex<HashMap<(Block, usize), Arc<BlockReducer>>>,
    pub budget: usize,
}

impl Default for Normalizer {
    fn default() -> Self {
        Self::new()
    }
}

impl Normalizer {
    pub fn new() -> Self {
        Normalizer { reducers: Mutex::new(HashMap::new()), budget: 2_000_000 }
    }

    pub fn with_budget(budget: usize) -> Self {
        Normalizer { budget, ..Self::new() }
    }

    /// Process-wide instance.
    pub fn global() -> &'static Normalizer {
        static N: OnceLock<Normalizer> = OnceLock::new();
        N.get_or_init(Normalizer::new)
    }

    /// Reducer for the window of weighted `length` and degree at least `degree`.
    pub fn reducer(&self, block: Block, length: usize, degree: i64) -> Result<Arc<BlockReducer>> {
        let mut cache = self.reducers.lock().unwrap();
        if let Some(r) = cache.get(&(block, length)) {
            if r.degree >= degree {
                return Ok(r.clone());
            }
        }
        let r = Arc::new(BlockReducer::build(block, length, degree)?);
        cache.insert((block, length), r.clone());
        Ok(r)
    }

    /// Rewrite the pair at `p`, `p+1` and return the new element with the rule id.
    pub fn step(&self, w: &Word, p: usize) -> Result<(Element, &'static str)> {
        if p + 1 >= w.len() {
            return Err(Error::NoRule { position: p, reason: format!("no pair at {p} in a word of length {}", w.len()) });
        }
        let (x, y) = (w.0[p], w.0[p + 1]);
        if !out_of_order(&x, &y) {
            return Err(Error::NoRule { position: p, reason: format!("{x} {y} is already ordered") });
        }
        let (mid, rule) = self.pair(x, y)?;
        let pre = Element::from_word(Word(w.0[..p].to_vec()));
        let post = Element::from_word(Word(w.0[p + 2..].to_vec()));
        Ok((&(&pre * &mid) * &post, rule))
    }

    fn pair(&self, x: GenSymbol, y: GenSymbol) -> Result<(Element, &'static str)> {
        let (gx, gy) = (g(x), g(y));
        let swapped = &gy * &gx;
        match (rank(&x), rank(&y)) {
            (2, 0) | (1, 0) | (2, 1) if x.is_capital() || y.is_capital() => {
                // x y = ± y x + [x, y}, the bracket taken on the expansions
                let sign = if x.parity() * y.parity() == 1 { -1 } else { 1 };
                Ok((swapped.scale(&int(sign)) + bracket(&x.expand(), &y.expand())?, "capital_bracket"))
            }
            (2, 0) => {
                // {e_k, f_m} = h_{k+m}
                Ok((g(GenSymbol::h(x.mode + y.mode)) - swapped, "e_f"))
            }
            (1, 0) => {
                if x.mode < 0 || y.mode < 0 {
                    return Err(Error::Unorderable(format!("{x} {y}: negative modes in an h–e exchange")));
                }
                let rule = match x.mode {
                    0 => "h0_e",
                    1 => "h1_e",
                    _ => "h_e",
                };
                Ok((swapped + h_bracket(x.mode, y, 1), rule))
            }
            (2, 1) => {
                if x.mode < 0 || y.mode < 0 {
                    return Err(Error::Unorderable(format!("{x} {y}: negative modes in an f–h exchange")));
                }
                let rule = match y.mode {
                    0 => "h0_f",
                    1 => "h1_f",
                    _ => "h_f",
                };
                Ok((swapped - h_bracket(y.mode, x, -1), rule))
            }
            (1, 1) => Ok((swapped, "h_h")),
            (r, _) => {
                let block = if r == 0 { Block::E } else { Block::F };
                if x.is_capital() || y.is_capital() {
                    if x.level() < 0 || y.level() < 0 {
                        return Err(Error::Unorderable(format!("{x} {y}: capital exchange with negative modes")));
                    }
                    let len = x.length() + y.length();
                    let red = self.reducer(block, len, x.degree() + y.degree())?;
                    return Ok((red.reduce(&(&gx * &gy)), "pbw_window"));
                }
                let (a, b) = (x.mode.max(y.mode), x.mode.min(y.mode));
                let rule = match (a - b, r) {
                    (1, 0) => "e_e_def",
                    (1, _) => "f_f_def",
                    (_, 0) => "e_e",
                    _ => "f_f",
                };
                Ok((letter_anti(block, a, b) - swapped, rule))
            }
        }
    }

    /// Normal form of `x`; negative modes are allowed only where a rule applies.
    pub fn normal_order(&self, x: &Element, strategy: Strategy) -> Result<Element> {
        let mut memo: HashMap<Word, Element> = HashMap::new();
        let mut steps = 0usize;
        let mut out = Element::zero();
        for (w, c) in x.terms() {
            let nf = self.word_normal(w, strategy, &mut memo, &mut steps)?;
            out = out + nf.scale(c);
        }
        Ok(out)
    }

    fn word_normal(
        &self,
        w: &Word,
        strategy: Strategy,
        memo: &mut HashMap<Word, Element>,
        steps: &mut usize,
    ) -> Result<Element> {
        if let Some(r) = memo.get(w) {
            return Ok(r.clone());
        }
        let res = match find_disorder(w, strategy) {
            None => Element::from_word(w.clone()),
            Some(p) => {
                *steps += 1;
                if *steps > self.budget {
                    return Err(Error::Budget(self.budget));
                }
                let (next, _) = self.step(w, p)?;
                let mut acc = Element::zero();
                for (w2, c2) in next.terms() {
                    acc = acc + self.word_normal(w2, strategy, memo, steps)?.scale(c2);
                }
                acc
            }
        };
        memo.insert(w.clone(), res.clone());
        Ok(res)
    }

    /// Rewrite one word at a time (smallest unordered word first), recording
    /// every step. Meant for small inputs.
    pub fn normal_order_traced(&self, x: &Element, strategy: Strategy) -> Result<(Element, Vec<TraceStep>)> {
        let mut cur = x.clone();
        let mut trace = Vec::new();
        loop {
            let target = cur.terms().find_map(|(w, c)| find_disorder(w, strategy).map(|p| (w.clone(), c.clone(), p)));
            let Some((w, c, p)) = target else { break };
            if trace.len() >= self.budget {
                return Err(Error::Budget(self.budget));
            }
            let (next, rule) = self.step(&w, p)?;
            cur = cur - Element::term(c.clone(), w.clone()) + next.scale(&c);
            trace.push(TraceStep { rule, position: p, word: w, result: cur.clone() });
        }
        Ok((cur, trace))
    }
}

/// One rewrite of the pair at `p`. The result equals `w` in the algebra.
pub fn rewrite_step(w: &Word, p: usize) -> Result<Element> {
    Normalizer::global().step(w, p).map(|r| r.0)
}

/// PBW normal form in the order `Ẽ⁺ H̃⁺ F̃⁺`; every mode must be `≥ 0`.
pub fn normal_order_plus(x: &Element) -> Result<Element> {
    if let Some(m) = x.terms().flat_map(|(w, _)| w.0.iter()).find(|s| s.level() < 0) {
        return Err(Error::NegativeMode(format!("{m} (use the ideal-membership checks for negative modes)")));
    }
    Normalizer::global().normal_order(x, Strategy::Leftmost)
}
