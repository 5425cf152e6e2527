//! PBW monomials of `Ẽ⁺`, `F̃⁻`, `F̃⁺`, `Ẽ⁻` by exponent vectors.

use super::{Element, Family, GenSymbol, Word};
use crate::error::{Error, Result};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    EPlus,
    FMinus,
    FPlus,
    EMinus,
}

impl Side {
    pub fn dual(self) -> Side {
        match self {
            Side::EPlus => Side::FMinus,
            Side::FMinus => Side::EPlus,
            Side::FPlus => Side::EMinus,
            Side::EMinus => Side::FPlus,
        }
    }

    pub fn is_plus(self) -> bool {
        matches!(self, Side::EPlus | Side::FPlus)
    }

    /// Letter and capital at level `l`.
    pub fn symbols(self, l: i64) -> (GenSymbol, GenSymbol) {
        match self {
            Side::EPlus => (GenSymbol::e(l), GenSymbol::big_e(l)),
            Side::FPlus => (GenSymbol::f(l), GenSymbol::big_f(l)),
            Side::FMinus => (GenSymbol::f(-l - 1), GenSymbol::big_f(-l - 1)),
            Side::EMinus => (GenSymbol::e(-l - 1), GenSymbol::big_e(-l - 1)),
        }
    }

    /// `|label|` of the letter and capital at level `l`.
    fn labels(self, l: i64) -> (i64, i64) {
        if self.is_plus() {
            (l, 2 * l + 1)
        } else {
            (l + 1, 2 * l + 1)
        }
    }

    fn letter_family(self) -> Family {
        match self {
            Side::EPlus | Side::EMinus => Family::E,
            _ => Family::F,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Side::EPlus => "E+",
            Side::FMinus => "F-",
            Side::FPlus => "F+",
            Side::EMinus => "E-",
        };
        write!(f, "{s}")
    }
}

/// Exponents at one level, in the labelling of the PBW pairing:
/// `E⁺: e_l^{2b+c} E_{2l+1}^a`, `F⁻: F_{−2l−1}^b f_{−l−1}^{2a+c}`,
/// `F⁺: F_{2l+1}^a f_l^{2b+c}`, `E⁻: e_{−l−1}^{2a+c} E_{−2l−1}^b`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Level {
    pub a: u32,
    pub b: u32,
    pub c: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PbwIndex {
    pub side: Side,
    /// Level `l` is `levels[l]`; no trailing zero levels.
    pub levels: Vec<Level>,
}

impl PbwIndex {
    pub fn new(side: Side, mut levels: Vec<Level>) -> Result<Self> {
        if let Some(l) = levels.iter().find(|l| l.c > 1) {
            return Err(Error::MalformedIndex(format!("c must be 0 or 1, got {}", l.c)));
        }
        while levels.last() == Some(&Level::default()) {
            levels.pop();
        }
        Ok(PbwIndex { side, levels })
    }

    pub fn unit(side: Side) -> Self {
        PbwIndex { side, levels: Vec::new() }
    }

    /// Build from per-level (letter count, capital count).
    pub fn from_counts(side: Side, counts: &[(u32, u32)]) -> Self {
        let levels = counts
            .iter()
            .map(|&(n, m)| {
                let (half, c) = (n / 2, (n % 2) as u8);
                match side {
                    Side::EPlus | Side::FPlus => Level { a: m, b: half, c },
                    Side::FMinus | Side::EMinus => Level { a: half, b: m, c },
                }
            })
            .collect();
        PbwIndex::new(side, levels).unwrap()
    }

    /// (letter count, capital count) at each level.
    pub fn counts(&self) -> Vec<(u32, u32)> {
        self.levels
            .iter()
            .map(|l| match self.side {
                Side::EPlus | Side::FPlus => (2 * l.b + l.c as u32, l.a),
                Side::FMinus | Side::EMinus => (2 * l.a + l.c as u32, l.b),
            })
            .collect()
    }

    pub fn dual(&self) -> PbwIndex {
        PbwIndex { side: self.side.dual(), levels: self.levels.clone() }
    }

    /// The monomial in the displayed ordering.
    pub fn word(&self) -> Word {
        let counts = self.counts();
        let mut parts: Vec<Vec<GenSymbol>> = Vec::new();
        for (l, &(n, m)) in counts.iter().enumerate() {
            let (x, big) = self.side.symbols(l as i64);
            let letters = std::iter::repeat_n(x, n as usize);
            let caps = std::iter::repeat_n(big, m as usize);
            let level: Vec<GenSymbol> = match self.side {
                Side::EPlus | Side::EMinus => letters.chain(caps).collect(),
                Side::FPlus | Side::FMinus => caps.chain(letters).collect(),
            };
            parts.push(level);
        }
        if matches!(self.side, Side::FPlus | Side::EMinus) {
            parts.reverse();
        }
        Word(parts.concat())
    }

    pub fn element(&self) -> Element {
        Element::from_word(self.word())
    }

    /// Recover the index of a word in canonical order.
    pub fn from_word(side: Side, w: &Word) -> Result<Self> {
        let idx = Self::scan(side, w).ok_or_else(|| Error::MalformedIndex(format!("{w} is not a {side} basis word")))?;
        if idx.word() != *w {
            return Err(Error::MalformedIndex(format!("{w} is not in {side} order")));
        }
        Ok(idx)
    }

    fn scan(side: Side, w: &Word) -> Option<Self> {
        let mut counts: Vec<(u32, u32)> = Vec::new();
        for s in &w.0 {
            let letter = s.family == side.letter_family();
            let capital = s.is_capital() && s.is_e_like() == (side.letter_family() == Family::E);
            if !letter && !capital {
                return None;
            }
            let l = if side.is_plus() { s.level() } else { -s.level() - 1 };
            if l < 0 {
                return None;
            }
            let l = l as usize;
            if counts.len() <= l {
                counts.resize(l + 1, (0, 0));
            }
            if letter {
                counts[l].0 += 1;
            } else {
                counts[l].1 += 1;
            }
        }
        Some(PbwIndex::from_counts(side, &counts))
    }

    /// Word length with capitals counted twice.
    pub fn length(&self) -> usize {
        self.counts().iter().map(|&(n, m)| (n + 2 * m) as usize).sum()
    }

    /// Largest `|label|` of a symbol present.
    pub fn max_label(&self) -> i64 {
        let mut best = 0;
        for (l, &(n, m)) in self.counts().iter().enumerate() {
            let (xl, cl) = self.side.labels(l as i64);
            if n > 0 {
                best = best.max(xl);
            }
            if m > 0 {
                best = best.max(cl);
            }
        }
        best
    }

    pub fn c_vector(&self) -> Vec<u8> {
        self.levels.iter().map(|l| l.c).collect()
    }
}

impl fmt::Display for PbwIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.side, self.word())
    }
}

fn enumerate_with(side: Side, max_len: usize, allowed: impl Fn(i64, bool) -> bool, max_level: i64) -> Vec<PbwIndex> {
    let mut out = Vec::new();
    let mut counts: Vec<(u32, u32)> = Vec::new();
    fn rec(
        side: Side,
        l: i64,
        max_level: i64,
        left: usize,
        allowed: &dyn Fn(i64, bool) -> bool,
        counts: &mut Vec<(u32, u32)>,
        out: &mut Vec<PbwIndex>,
    ) {
        if l > max_level {
            out.push(PbwIndex::from_counts(side, counts));
            return;
        }
        let max_n = if allowed(l, false) { left } else { 0 };
        for n in 0..=max_n {
            let rest = left - n;
            let max_m = if allowed(l, true) { rest / 2 } else { 0 };
            for m in 0..=max_m {
                counts.push((n as u32, m as u32));
                rec(side, l + 1, max_level, rest - 2 * m, allowed, counts, out);
                counts.pop();
            }
        }
    }
    rec(side, 0, max_level, max_len, &allowed, &mut counts, &mut out);
    out.sort_by_key(|x| (x.length(), x.word()));
    out.dedup();
    out
}

/// Basis monomials with expanded length `≤ max_word_length` and every
/// symbol label `|n| ≤ max_mode`, sorted by (length, word).
pub fn pbw_enumerate(side: Side, max_word_length: usize, max_mode: i64) -> Vec<PbwIndex> {
    let allowed = move |l: i64, cap: bool| {
        let (xl, cl) = side.labels(l);
        if cap {
            cl <= max_mode
        } else {
            xl <= max_mode
        }
    };
    enumerate_with(side, max_word_length, allowed, max_mode.max(0))
}

/// Basis monomials using levels `0..=max_level` only.
pub fn pbw_enumerate_levels(side: Side, max_word_length: usize, max_level: i64) -> Vec<PbwIndex> {
    enumerate_with(side, max_word_length, |_, _| true, max_level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn show(v: &[PbwIndex]) -> BTreeSet<String> {
        v.iter().map(|p| p.word().to_string()).collect()
    }

    #[test]
    fn small_e_plus_list() {
        let got = show(&pbw_enumerate(Side::EPlus, 2, 1));
        let want: BTreeSet<String> =
            ["1", "e0", "e1", "E1", "e0 e1", "e0 e0", "e1 e1"].iter().map(|s| s.to_string()).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn displayed_orderings() {
        let counts = [(1, 1), (2, 1)];
        assert_eq!(PbwIndex::from_counts(Side::EPlus, &counts).word().to_string(), "e0 E1 e1 e1 E3");
        assert_eq!(PbwIndex::from_counts(Side::FMinus, &counts).word().to_string(), "F-1 f-1 F-3 f-2 f-2");
        assert_eq!(PbwIndex::from_counts(Side::FPlus, &counts).word().to_string(), "F3 f1 f1 F1 f0");
        assert_eq!(PbwIndex::from_counts(Side::EMinus, &counts).word().to_string(), "e-2 e-2 E-3 e-1 E-1");
    }

    #[test]
    fn word_round_trip() {
        for side in [Side::EPlus, Side::FMinus, Side::FPlus, Side::EMinus] {
            for p in pbw_enumerate_levels(side, 5, 2) {
                assert_eq!(PbwIndex::from_word(side, &p.word()).unwrap(), p);
            }
        }
        let bad = Word(vec![GenSymbol::e(1), GenSymbol::e(0)]);
        assert!(PbwIndex::from_word(Side::EPlus, &bad).is_err());
    }

    /// Brute force: all (n_l, m_l) tuples with the label bounds, counted directly.
    fn brute(side: Side, len: usize, mode: i64) -> usize {
        let mut slots: Vec<usize> = Vec::new();
        for l in 0..=mode {
            let (xl, cl) = side.labels(l);
            if xl <= mode {
                slots.push(1);
            }
            if cl <= mode {
                slots.push(2);
            }
        }
        let mut ways = vec![0usize; len + 1];
        ways[0] = 1;
        for w in slots {
            for t in w..=len {
                ways[t] += ways[t - w];
            }
        }
        ways.iter().sum()
    }

    #[test]
    fn counts_match_brute_force() {
        for side in [Side::EPlus, Side::FMinus, Side::FPlus, Side::EMinus] {
            for len in 0..=5 {
                for mode in 0..=3 {
                    assert_eq!(pbw_enumerate(side, len, mode).len(), brute(side, len, mode), "{side} {len} {mode}");
                }
            }
        }
        assert_eq!(pbw_enumerate(Side::EPlus, 4, 2).len(), brute(Side::EPlus, 4, 2));
    }

    #[test]
    fn malformed_c() {
        assert!(PbwIndex::new(Side::EPlus, vec![Level { a: 0, b: 0, c: 2 }]).is_err());
    }
}
