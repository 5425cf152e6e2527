//! Truncated universal R-matrix factors `ℛ_E`, `ℛ_F`, `ℛ_H`, their duality with
//! the pairing, and their image in `π_z ⊗ π_w`.
//!
//! Matrices are in operator form (see [`crate::superlin`]).

use crate::currents::{big_e, big_f, e, f, pbw_enumerate_levels, Element, GenSymbol, PbwIndex, Side, Word};
use crate::error::{Error, Result};
use crate::evalrep::{pi, pi_element, EvalPoint};
use crate::pairing::pair_pbw;
use crate::rmatrix::{r_full_f64, r_tilde, QMatrix};
use crate::scalars::{gamma1, int, ln_gamma, rat, rho, to_f64, Rational};
use crate::superlin::{e as unit, embed_12, embed_13, embed_23, graded_kron, id3, GradedMatrix};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FactorSide {
    E,
    F,
}

impl fmt::Display for FactorSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if *self == FactorSide::E { "E" } else { "F" })
    }
}

/// Finite sum `Σ c · a⊗b` of word pairs, truncated at left word length `cutoff`
/// (capitals count as two letters). Products follow the Koszul rule
/// `(a⊗b)(c⊗d) = (−1)^{[b][c]} ac⊗bd`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedTensor {
    terms: BTreeMap<(Word, Word), Rational>,
    cutoff: usize,
}

impl TruncatedTensor {
    pub fn zero(cutoff: usize) -> Self {
        TruncatedTensor { terms: BTreeMap::new(), cutoff }
    }

    pub fn one(cutoff: usize) -> Self {
        let mut t = Self::zero(cutoff);
        t.add_term(Word::empty(), Word::empty(), Rational::one());
        t
    }

    /// `a ⊗ b` expanded bilinearly.
    pub fn pair(a: &Element, b: &Element, cutoff: usize) -> Self {
        let mut t = Self::zero(cutoff);
        for (wa, ca) in a.terms() {
            for (wb, cb) in b.terms() {
                t.add_term(wa.clone(), wb.clone(), ca * cb);
            }
        }
        t
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Word, &Rational)> {
        self.terms.iter().map(|((a, b), c)| (a, b, c))
    }

    pub fn coeff(&self, left: &[GenSymbol], right: &[GenSymbol]) -> Rational {
        let key = (Word(left.to_vec()), Word(right.to_vec()));
        self.terms.get(&key).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, a: Word, b: Word, c: Rational) {
        if c.is_zero() || a.expanded_length() > self.cutoff {
            return;
        }
        match self.terms.entry((a, b)) {
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

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for ((a, b), c) in &rhs.terms {
            out.add_term(a.clone(), b.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, q: &Rational) -> Self {
        let mut out = Self::zero(self.cutoff);
        for ((a, b), c) in &self.terms {
            out.add_term(a.clone(), b.clone(), c * q);
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(self.cutoff.min(rhs.cutoff));
        for ((a, b), c) in &self.terms {
            let la = a.expanded_length();
            for ((x, y), d) in &rhs.terms {
                if la + x.expanded_length() > out.cutoff {
                    continue;
                }
                let sign = if b.parity() * x.parity() == 1 { int(-1) } else { Rational::one() };
                out.add_term(a.concat(x), b.concat(y), sign * c * d);
            }
        }
        out
    }

    /// `exp(X)` for `X` without a `1⊗1` component.
    pub fn exp(&self) -> Result<Self> {
        if self.terms.keys().any(|(a, _)| a.is_empty()) {
            return Err(Error::Unsupported("exp of a tensor with a constant term".into()));
        }
        let mut out = Self::one(self.cutoff);
        let mut power = Self::one(self.cutoff);
        let mut n = 0i64;
        loop {
            n += 1;
            power = power.mul(self).scale(&rat(1, n));
            if power.is_empty() {
                return Ok(out);
            }
            out = out.add(&power);
        }
    }
}

/// Which definition of the capital is used on the left of the third factor.
/// `DropQuarter` replaces `E = {e_i, e_{i+1}} − e_i²/4` by `{e_i, e_{i+1}}` and
/// is only a negative control.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CapitalDefinition {
    Standard,
    DropQuarter,
}

fn level_factor(side: FactorSide, i: i64, cutoff: usize, def: CapitalDefinition) -> Result<TruncatedTensor> {
    let one = TruncatedTensor::one(cutoff);
    let quarter = |x: Element| match def {
        CapitalDefinition::Standard => Element::zero(),
        CapitalDefinition::DropQuarter => (&x * &x).scale(&rat(1, 4)),
    };
    let m = -i - 1;
    match side {
        FactorSide::E => {
            let x1 = TruncatedTensor::pair(&(e(i) * e(i)), &big_f(m), cutoff);
            let x2 = TruncatedTensor::pair(&e(i), &f(m), cutoff).scale(&int(-1));
            let cap = big_e(i) + quarter(e(i));
            let x3 = TruncatedTensor::pair(&cap, &(f(m) * f(m)), cutoff);
            Ok(x1.exp()?.mul(&one.add(&x2)).mul(&x3.exp()?))
        }
        FactorSide::F => {
            let cap = big_f(i) + quarter(f(i));
            let y1 = TruncatedTensor::pair(&cap, &(e(m) * e(m)), cutoff);
            let y2 = TruncatedTensor::pair(&f(i), &e(m), cutoff);
            let y3 = TruncatedTensor::pair(&(f(i) * f(i)), &big_e(m), cutoff);
            Ok(y1.exp()?.mul(&one.add(&y2)).mul(&y3.exp()?))
        }
    }
}

/// Ordered product over levels `0..=max_level`: ascending to the right for
/// `ℛ_E`, ascending to the left for `ℛ_F`.
pub fn expand_factor_levels(
    side: FactorSide,
    cutoff: usize,
    max_level: i64,
    def: CapitalDefinition,
) -> Result<TruncatedTensor> {
    let mut t = TruncatedTensor::one(cutoff);
    if cutoff == 0 {
        return Ok(t);
    }
    for i in 0..=max_level {
        let fac = level_factor(side, i, cutoff, def)?;
        t = match side {
            FactorSide::E => t.mul(&fac),
            FactorSide::F => fac.mul(&t),
        };
    }
    Ok(t)
}

/// Expansion with all levels that can carry a monomial of length `≤ D`
/// within the default level range `0..D`.
pub fn expand_factor(side: FactorSide, cutoff: usize) -> TruncatedTensor {
    let max_level = cutoff as i64 - 1;
    expand_factor_levels(side, cutoff, max_level, CapitalDefinition::Standard).expect("factor expansion")
}

fn sides(side: FactorSide) -> (Side, Side) {
    match side {
        FactorSide::E => (Side::EPlus, Side::FMinus),
        FactorSide::F => (Side::FPlus, Side::EMinus),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DualityReport {
    pub side: FactorSide,
    pub cutoff: usize,
    pub basis_size: usize,
    pub terms: usize,
    /// Terms whose words are not PBW monomials of the expected halves.
    pub stray_terms: usize,
    /// Entries of `Σ c·⟨b₋, b₊'⟩` that differ from `δ(b₊, b₊')`.
    pub defects: usize,
    pub first_failure: Option<String>,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.stray_terms == 0 && self.defects == 0
    }
}

/// Checks that `ℛ = Σ c_{b₊b₋} b₊⊗b₋` is the canonical element of the pairing:
/// `Σ_{b₋} c_{b₊b₋} ⟨b₋, b₊'⟩ = δ(b₊, b₊')` on the PBW basis of length `≤ D`.
pub fn duality_report(side: FactorSide, cutoff: usize, def: CapitalDefinition) -> Result<DualityReport> {
    if cutoff == 0 {
        return Err(Error::Config("dual-basis check needs D ≥ 1".into()));
    }
    let max_level = cutoff as i64 - 1;
    let t = expand_factor_levels(side, cutoff, max_level, def)?;
    let (plus, minus) = sides(side);
    let basis = pbw_enumerate_levels(plus, cutoff, max_level);
    let mut by_length: HashMap<usize, Vec<&PbwIndex>> = HashMap::new();
    for b in &basis {
        by_length.entry(b.length()).or_default().push(b);
    }
    let mut stray = 0;
    let mut first_failure = None;
    let mut product: HashMap<(PbwIndex, PbwIndex), Rational> = HashMap::new();
    for (a, b, c) in t.terms() {
        let (bp, bm) = match (PbwIndex::from_word(plus, a), PbwIndex::from_word(minus, b)) {
            (Ok(x), Ok(y)) => (x, y),
            _ => {
                stray += 1;
                first_failure.get_or_insert_with(|| format!("non-PBW term {c} · {a} ⊗ {b}"));
                continue;
            }
        };
        // the pairing preserves length, so only same-length partners can contribute
        for partner in by_length.get(&bm.length()).into_iter().flatten() {
            let v = pair_pbw(&bm, partner)?;
            if !v.is_zero() {
                *product.entry((bp.clone(), (*partner).clone())).or_insert_with(Rational::zero) += c * v;
            }
        }
    }
    let mut defects = 0;
    for x in &basis {
        for y in by_length.get(&x.length()).into_iter().flatten() {
            let got = product.get(&(x.clone(), (*y).clone())).cloned().unwrap_or_else(Rational::zero);
            let want = if x == *y { Rational::one() } else { Rational::zero() };
            if got != want {
                defects += 1;
                first_failure.get_or_insert_with(|| format!("({x}, {y}) gives {got}, expected {want}"));
            }
        }
    }
    Ok(DualityReport {
        side,
        cutoff,
        basis_size: basis.len(),
        terms: t.len(),
        stray_terms: stray,
        defects,
        first_failure,
    })
}

/// Duality of both factors up to length `D`.
pub fn dual_basis_consistency(cutoff: usize) -> bool {
    [FactorSide::E, FactorSide::F].iter().all(|&s| {
        duality_report(s, cutoff, CapitalDefinition::Standard).map(|r| r.passed()).unwrap_or(false)
    })
}

/// Polynomial in `T^{1/2}` with integer coefficients, keyed by the power of `T^{1/2}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ShiftExpr(pub BTreeMap<i64, i64>);

impl ShiftExpr {
    pub fn monomial(half_steps: i64, c: i64) -> Self {
        let mut m = BTreeMap::new();
        if c != 0 {
            m.insert(half_steps, c);
        }
        ShiftExpr(m)
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `C(q) = q + 1 + q⁻¹` at `q = T^{1/2}`.
    pub fn c_operator() -> Self {
        ShiftExpr([(-1, 1), (0, 1), (1, 1)].into_iter().collect())
    }

    /// `T⁻¹ + T^{1/2} − T − T^{−1/2}`, the operator in `⟨K₋′(u), K₊(v)⟩`.
    pub fn difference_operator() -> Self {
        ShiftExpr([(-2, 1), (-1, -1), (1, 1), (2, -1)].into_iter().collect())
    }

    /// `Σ_{n<N} C(T^{1/2}) T^{3n+3/2}`, the truncated formal inverse.
    pub fn inverse_partial(n_terms: usize) -> Self {
        let mut acc = ShiftExpr::default();
        for n in 0..n_terms as i64 {
            acc = acc.add(&Self::c_operator().mul(&Self::monomial(6 * n + 3, 1)));
        }
        acc
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.0.clone();
        for (k, c) in &rhs.0 {
            let v = out.entry(*k).or_insert(0);
            *v += c;
            if *v == 0 {
                out.remove(k);
            }
        }
        ShiftExpr(out)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut acc = ShiftExpr::default();
        for (a, c) in &self.0 {
            for (b, d) in &rhs.0 {
                acc = acc.add(&Self::monomial(a + b, c * d));
            }
        }
        acc
    }

    /// Shifts `k/2` of the terms, as exact rationals.
    pub fn shifts(&self) -> Vec<(Rational, i64)> {
        self.0.iter().map(|(k, c)| (rat(*k, 2), *c)).collect()
    }

    /// Apply to a sampled function: `Σ c_k f(v + k/2)`.
    pub fn apply(&self, f: impl Fn(f64) -> f64, v: f64) -> f64 {
        self.0.iter().map(|(k, c)| *c as f64 * f(v + *k as f64 / 2.0)).sum()
    }
}

/// Sign applied to the odd⊗odd middle factors when assembling.
/// `Twisted` conjugates by `1⊗diag(1,−1,1)`, which flips the sign of
/// `e_i⊗f_{−i−1}` and `f_i⊗e_{−i−1}` and nothing else.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum OddTwist {
    Literal,
    Twisted,
}

/// Slot reading of the `ℛ_H` product. `Printed` pairs a zero/pole `c` of the
/// first slot with `d` of the second through `c − d + s`; `Swapped` uses `d − c + s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SlotOrder {
    Printed,
    Swapped,
}

/// `Plus` raises `(c − d + s)` to `+εη` in the product over `n`; `Minus` to `−εη`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ExponentSign {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Convention {
    pub twist: OddTwist,
    pub slots: SlotOrder,
    pub sign: ExponentSign,
}

impl Convention {
    pub fn all() -> Vec<Convention> {
        let mut v = Vec::new();
        for twist in [OddTwist::Literal, OddTwist::Twisted] {
            for slots in [SlotOrder::Printed, SlotOrder::Swapped] {
                for sign in [ExponentSign::Plus, ExponentSign::Minus] {
                    v.push(Convention { twist, slots, sign });
                }
            }
        }
        v
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}/{:?}/{:?}", self.twist, self.slots, self.sign)
    }
}

/// `max(|z|,|z′|) / min(|w|,|w′|)`, which must be `< 1` for the geometric tails.
pub fn region_ratio(z: &Rational, w: &Rational) -> Result<Rational> {
    let (pz, pw) = (EvalPoint::new(z.clone()), EvalPoint::new(w.clone()));
    let num = pz.z.abs().max(pz.zp.abs());
    let den = pw.z.abs().min(pw.zp.abs());
    if den.is_zero() {
        return Err(Error::Region(format!("w = {w} puts a pole at w or w+1/2")));
    }
    let r = num / den;
    if r >= Rational::one() {
        let name = if pz.zp.abs() > pz.z.abs() { "|z+1/2|" } else { "|z|" };
        let wname = if pw.zp.abs() < pw.z.abs() { "|w+1/2|" } else { "|w|" };
        return Err(Error::Region(format!("{name}/{wname} = {r} is not below 1 at (z, w) = ({z}, {w})")));
    }
    Ok(r)
}

/// `r^M / (1 − r)`.
pub fn geometric_bound(z: &Rational, w: &Rational, m: usize) -> Result<Rational> {
    let r = region_ratio(z, w)?;
    Ok(crate::scalars::pow(&r, m as i64) / (Rational::one() - r))
}

fn op(a: &QMatrix, b: &QMatrix) -> QMatrix {
    graded_kron(a, b)
}

/// `(π_z⊗π_w)` of the factor, levels `0..=M`, exactly.
pub fn evaluate_factor(side: FactorSide, z: &Rational, w: &Rational, m: usize) -> Result<QMatrix> {
    if m == 0 {
        return Err(Error::Config("mode cutoff M must be at least 1".into()));
    }
    region_ratio(z, w)?;
    let (pz, pw) = (EvalPoint::new(z.clone()), EvalPoint::new(w.clone()));
    let id = QMatrix::identity(2);
    let mut r = id.clone();
    for i in 0..=m as i64 {
        let k = -i - 1;
        let fac = match side {
            FactorSide::E => {
                let ei = pi(&pz, GenSymbol::e(i))?;
                let fk = pi(&pw, GenSymbol::f(k))?;
                let a = id.add(&op(&ei.mul(&ei), &pi(&pw, GenSymbol::big_f(k))?));
                let b = id.sub(&op(&ei, &fk));
                let c = id.add(&op(&pi(&pz, GenSymbol::big_e(i))?, &fk.mul(&fk)));
                a.mul(&b).mul(&c)
            }
            FactorSide::F => {
                let fi = pi(&pz, GenSymbol::f(i))?;
                let ek = pi(&pw, GenSymbol::e(k))?;
                let a = id.add(&op(&pi(&pz, GenSymbol::big_f(i))?, &ek.mul(&ek)));
                let b = id.add(&op(&fi, &ek));
                let c = id.add(&op(&fi.mul(&fi), &pi(&pw, GenSymbol::big_e(k))?));
                a.mul(&b).mul(&c)
            }
        };
        r = match side {
            FactorSide::E => r.mul(&fac),
            FactorSide::F => fac.mul(&r),
        };
    }
    Ok(r)
}

/// `(π_z⊗π_w)` applied term by term to a [`TruncatedTensor`].
pub fn evaluate_tensor(t: &TruncatedTensor, z: &Rational, w: &Rational) -> Result<QMatrix> {
    let (pz, pw) = (EvalPoint::new(z.clone()), EvalPoint::new(w.clone()));
    let mut out = QMatrix::zero(2);
    for (a, b, c) in t.terms() {
        let x = pi_element(&pz, &Element::from_word(a.clone()))?;
        let y = pi_element(&pw, &Element::from_word(b.clone()))?;
        out = out.add(&op(&x, &y).scale(c));
    }
    Ok(out)
}

fn check_x(x: &Rational) -> Result<()> {
    let half = rat(1, 2);
    if x.is_zero() || *x == half || *x == -half.clone() {
        return Err(Error::Singular(format!("z − w = {x} is a pole of the evaluated factors")));
    }
    Ok(())
}

/// Closed forms of the evaluated factors at `x = z − w`.
///
/// `ℛ_E`: `1 + E₁₂⊗E₂₁/x − E₂₃⊗E₃₂/x − E₁₂⊗E₃₂/(x−½) + E₂₃⊗E₂₁/(x+½) + (4x+3)/(x(2x+1)) E₁₃⊗E₃₁`;
/// `ℛ_F`: `1 − E₂₁⊗E₁₂/x + E₃₂⊗E₂₃/x − E₂₁⊗E₂₃/(x−½) + E₃₂⊗E₁₂/(x+½) + (4x+3)/(x(2x+1)) E₃₁⊗E₁₃`.
pub fn closed_form(side: FactorSide, x: &Rational) -> Result<QMatrix> {
    check_x(x)?;
    Ok(closed_form_terms(side, x).into_iter().fold(QMatrix::identity(2), |acc, (a, b, c)| {
        acc.add(&op(&unit(a.0, a.1), &unit(b.0, b.1)).scale(&c))
    }))
}

type Slot = ((usize, usize), (usize, usize), Rational);

/// The five displayed coefficients (matrix units and value).
pub fn closed_form_terms(side: FactorSide, x: &Rational) -> Vec<Slot> {
    let half = rat(1, 2);
    let one = Rational::one();
    let inv = |y: Rational| one.clone() / y;
    match side {
        FactorSide::E => vec![
            ((1, 2), (2, 1), inv(x.clone())),
            ((2, 3), (3, 2), -inv(x.clone())),
            ((1, 2), (3, 2), -inv(x - &half)),
            ((2, 3), (2, 1), inv(x + &half)),
            ((1, 3), (3, 1), (int(4) * x + int(3)) / (x * (int(2) * x + int(1)))),
        ],
        FactorSide::F => vec![
            ((2, 1), (1, 2), -inv(x.clone())),
            ((3, 2), (2, 3), inv(x.clone())),
            ((2, 1), (2, 3), -inv(x - &half)),
            ((3, 2), (1, 2), inv(x + &half)),
            ((3, 1), (1, 3), (int(4) * x + int(3)) / (x * (int(2) * x + int(1)))),
        ],
    }
}

/// Display coefficient of `E_ab ⊗ E_cd` in an operator-form matrix.
pub fn coefficient(m: &QMatrix, a: (usize, usize), b: (usize, usize)) -> Rational {
    m.display_at(&[a.0, b.0], &[a.1, b.1])
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorReport {
    pub side: FactorSide,
    pub z: String,
    pub w: String,
    pub m: usize,
    pub bound: String,
    /// Largest distance to the closed form over all 81 entries.
    pub closed_form_gap: String,
    /// Largest distance between the partial sums at `M` and `2M`.
    pub doubling_gap: String,
    pub closed_form_ok: bool,
    pub doubling_ok: bool,
}

impl FactorReport {
    pub fn passed(&self) -> bool {
        self.closed_form_ok && self.doubling_ok
    }
}

fn max_abs(m: &QMatrix) -> Rational {
    crate::rmatrix::max_norm(m)
}

/// Partial sums against the closed form and against the sum at `2M`, both
/// within the exact geometric bound `r^M/(1−r)`.
pub fn factor_report(side: FactorSide, z: &Rational, w: &Rational, m: usize) -> Result<FactorReport> {
    let bound = geometric_bound(z, w, m)?;
    let at_m = evaluate_factor(side, z, w, m)?;
    let at_2m = evaluate_factor(side, z, w, 2 * m)?;
    let closed = closed_form(side, &(z - w))?;
    let gap = max_abs(&at_m.sub(&closed));
    let dgap = max_abs(&at_m.sub(&at_2m));
    Ok(FactorReport {
        side,
        z: z.to_string(),
        w: w.to_string(),
        m,
        bound: format!("{:.3e}", to_f64(&bound)),
        closed_form_gap: format!("{:.3e}", to_f64(&gap)),
        doubling_gap: format!("{:.3e}", to_f64(&dgap)),
        closed_form_ok: gap < bound,
        doubling_ok: dgap < bound,
    })
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer().sqrt(), q.denom().sqrt());
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Zeros (`+1`) and poles (`−1`) of slot `a ∈ {1,2,3}` of
/// `π_z(h⁺(u)) = 1 + Σ_{n≥0} π_z(h_n) u^{−n−1}`, summed geometrically:
/// slot 1 is `1 + 1/(u−z)`, slot 2 is `1 + 1/(u−z) − 1/(u−z′)`, slot 3 is `1 − 1/(u−z′)`.
pub fn h_image_roots(p: &EvalPoint, slot: usize) -> Result<Vec<(Rational, i8)>> {
    let one = Rational::one();
    Ok(match slot {
        1 => vec![(&p.z - &one, 1), (p.z.clone(), -1)],
        3 => vec![(&p.zp + &one, 1), (p.zp.clone(), -1)],
        2 => {
            // (u−z)(u−z′) + (u−z′) − (u−z) = u² + b u + c
            let b = -(&p.z + &p.zp);
            let c = &p.z * &p.zp + &p.z - &p.zp;
            let disc = &b * &b - int(4) * &c;
            let s = rational_sqrt(&disc)
                .ok_or_else(|| Error::Unsupported(format!("slot 2 of π(h) has irrational zeros (disc {disc})")))?;
            let two = int(2);
            vec![
                ((-&b + &s) / &two, 1),
                ((-&b - &s) / &two, 1),
                (p.z.clone(), -1),
                (p.zp.clone(), -1),
            ]
        }
        _ => return Err(Error::Config(format!("slot {slot} outside 1..=3"))),
    })
}

/// Sign of `Γ(x)` for non-pole `x`.
fn gamma_sign(x: f64) -> f64 {
    if x > 0.0 || (x.floor() as i64) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[derive(Clone, Debug)]
pub struct RhEvaluation {
    /// Diagonal 9×9 matrix.
    pub matrix: GradedMatrix<f64>,
    /// Largest `|tail − 1|` over slots, the correction carried by `n ≥ N`.
    pub tail: f64,
    pub n_terms: usize,
}

fn rh_slot(
    zs: &[(Rational, i8)],
    ws: &[(Rational, i8)],
    n_terms: usize,
    slots: SlotOrder,
    sign: ExponentSign,
) -> Result<(f64, f64)> {
    // C(T^{1/2})T^{3/2}: the shifts 1, 3/2, 2 of one period
    let period = ShiftExpr::c_operator().mul(&ShiftExpr::monomial(3, 1));
    let mut ln_finite = 0.0;
    let mut sgn = 1.0;
    let mut ln_tail = 0.0;
    let mut sgn_tail = 1.0;
    for (s0, mult) in period.shifts() {
        for (c, eps) in zs {
            for (d, eta) in ws {
                let base = match slots {
                    SlotOrder::Printed => c - d,
                    SlotOrder::Swapped => d - c,
                };
                let t = to_f64(&(base + &s0));
                let ex = (*eps as i64 * *eta as i64 * mult) as f64 * if sign == ExponentSign::Plus { 1.0 } else { -1.0 };
                for n in 0..n_terms {
                    let v = t + 3.0 * n as f64;
                    if v == 0.0 {
                        return Err(Error::GammaPole(v));
                    }
                    ln_finite += ex * v.abs().ln();
                    if v < 0.0 && ex != 0.0 {
                        sgn = -sgn;
                    }
                }
                // ∏_{n≥N} (t + 3n)^{ex} ~ Γ(t/3 + N)^{−ex}; the 3^… factors cancel
                // because the exponents and exponent-weighted bases both sum to zero
                let g = t / 3.0 + n_terms as f64;
                ln_tail -= ex * ln_gamma(g)?;
                if gamma_sign(g) < 0.0 && ex != 0.0 {
                    sgn_tail = -sgn_tail;
                }
            }
        }
    }
    let tail = sgn_tail * ln_tail.exp();
    Ok((sgn * (ln_finite + ln_tail).exp() * sgn_tail, (tail - 1.0).abs()))
}

/// `(π_z⊗π_w)ℛ_H` with the product over `n` truncated at `N` and the
/// remainder supplied by its `Γ` asymptotics.
pub fn evaluate_rh_with(
    z: &Rational,
    w: &Rational,
    n_terms: usize,
    slots: SlotOrder,
    sign: ExponentSign,
) -> Result<RhEvaluation> {
    let (pz, pw) = (EvalPoint::new(z.clone()), EvalPoint::new(w.clone()));
    let mut matrix = GradedMatrix::<f64>::zero(2);
    let mut tail: f64 = 0.0;
    for a in 1..=3 {
        let zs = h_image_roots(&pz, a)?;
        for b in 1..=3 {
            let ws = h_image_roots(&pw, b)?;
            let (v, t) = rh_slot(&zs, &ws, n_terms, slots, sign)?;
            let k = (a - 1) * 3 + (b - 1);
            matrix.set(k, k, v);
            tail = tail.max(t);
        }
    }
    Ok(RhEvaluation { matrix, tail, n_terms })
}

pub fn evaluate_rh(z: &Rational, w: &Rational, n_terms: usize) -> Result<RhEvaluation> {
    evaluate_rh_with(z, w, n_terms, SlotOrder::Printed, ExponentSign::Plus)
}

/// One balanced pair of instances of
/// `∏_{n≥0} (γ−α+Nn+1)/(γ−β+Nn+1) ≐ Γ((γ−β+1)/N)/Γ((γ−α+1)/N)`:
/// the left side multiplied by its partner `(α′,β′,γ′)` with `β−α = β′−α′`
/// converges. Returns `(summed, gamma side)`.
pub fn formula_horribilis_instance(
    abg: (f64, f64, f64),
    partner: (f64, f64, f64),
    period: f64,
    n_sum: usize,
) -> Result<(f64, f64)> {
    let (a, b, g) = abg;
    let (a2, b2, g2) = partner;
    if ((b - a) - (b2 - a2)).abs() > 1e-12 {
        return Err(Error::Config("instances are not balanced".into()));
    }
    // numerator shifts with sign +1, denominator shifts with −1
    let shifts = [(g - a + 1.0, 1.0), (g - b + 1.0, -1.0), (g2 - a2 + 1.0, -1.0), (g2 - b2 + 1.0, 1.0)];
    let mut ln = 0.0;
    for n in 0..n_sum {
        for (s, e) in shifts {
            ln += e * (s + period * n as f64).ln();
        }
    }
    // Σ_{n≥K} of the 1/n² term in the Taylor expansion of the logarithms
    let q: f64 = shifts.iter().map(|(s, e)| e * s * s).sum();
    ln += -q / (2.0 * period * period) / (n_sum as f64 - 0.5);
    let g1 = |x: f64| gamma1(x, period);
    let rhs = g1(g - b + 1.0)? / g1(g - a + 1.0)? * (g1(g2 - a2 + 1.0)? / g1(g2 - b2 + 1.0)?);
    Ok((ln.exp(), rhs))
}

/// `1 ⊗ diag(1, −1, 1)`.
pub fn odd_twist_matrix() -> QMatrix {
    graded_kron(&id3(), &crate::superlin::int_matrix3([[1, 0, 0], [0, -1, 0], [0, 0, 1]]))
}

#[derive(Clone, Debug, Serialize)]
pub struct AssemblyReport {
    pub z: String,
    pub w: String,
    pub m: usize,
    pub n: usize,
    pub selected: Convention,
    pub max_abs_error: f64,
    /// Error of every convention, in [`Convention::all`] order.
    pub all_errors: Vec<(String, f64)>,
    /// `(T E_cl T)⁻¹ R̃(x) (T F_cl T)⁻¹` is exactly diagonal for the selected twist.
    pub exact_diagonal: bool,
    /// Entry `((1,1),(1,1))` of the assembled matrix and `ρ(z−w)`.
    pub normalization_slot: (f64, f64),
    pub rh_tail: f64,
    pub tolerance: f64,
}

impl AssemblyReport {
    pub fn passed(&self) -> bool {
        self.max_abs_error < self.tolerance && self.exact_diagonal
    }
}

struct Pieces {
    e: GradedMatrix<f64>,
    f: GradedMatrix<f64>,
    rh: [RhEvaluation; 4],
}

fn pieces(z: &Rational, w: &Rational, m: usize, n: usize) -> Result<Pieces> {
    let e = evaluate_factor(FactorSide::E, z, w, m)?.to_f64();
    let f = evaluate_factor(FactorSide::F, z, w, m)?.to_f64();
    let rh = [
        evaluate_rh_with(z, w, n, SlotOrder::Printed, ExponentSign::Plus)?,
        evaluate_rh_with(z, w, n, SlotOrder::Printed, ExponentSign::Minus)?,
        evaluate_rh_with(z, w, n, SlotOrder::Swapped, ExponentSign::Plus)?,
        evaluate_rh_with(z, w, n, SlotOrder::Swapped, ExponentSign::Minus)?,
    ];
    Ok(Pieces { e, f, rh })
}

fn rh_index(c: &Convention) -> usize {
    match (c.slots, c.sign) {
        (SlotOrder::Printed, ExponentSign::Plus) => 0,
        (SlotOrder::Printed, ExponentSign::Minus) => 1,
        (SlotOrder::Swapped, ExponentSign::Plus) => 2,
        (SlotOrder::Swapped, ExponentSign::Minus) => 3,
    }
}

fn combine(p: &Pieces, c: &Convention) -> GradedMatrix<f64> {
    let prod = p.e.mul(&p.rh[rh_index(c)].matrix).mul(&p.f);
    match c.twist {
        OddTwist::Literal => prod,
        OddTwist::Twisted => {
            let s = odd_twist_matrix().to_f64();
            s.mul(&prod).mul(&s)
        }
    }
}

/// `(π_z⊗π_w)(ℛ_E ℛ_H ℛ_F)` under a fixed convention.
pub fn assembled_matrix(z: &Rational, w: &Rational, m: usize, n: usize, c: Convention) -> Result<GradedMatrix<f64>> {
    Ok(combine(&pieces(z, w, m, n)?, &c))
}

/// The convention under which the assembly reproduces `R(z − w)`.
pub fn selected_convention() -> Convention {
    Convention { twist: OddTwist::Twisted, slots: SlotOrder::Printed, sign: ExponentSign::Plus }
}

/// Assemble under every convention, pick the one closest to
/// `R(z−w) = ρ(z−w)(z−w)/(z−w+1) R̃(z−w)` and report the choice.
pub fn assemble_evaluated_r(z: &Rational, w: &Rational, m: usize, n: usize, tolerance: f64) -> Result<AssemblyReport> {
    let x = z - w;
    check_x(&x)?;
    let target = r_full_f64(&x)?;
    let p = pieces(z, w, m, n)?;
    let mut all = Vec::new();
    let mut best: Option<(Convention, f64, GradedMatrix<f64>)> = None;
    for c in Convention::all() {
        let a = combine(&p, &c);
        let err = a.sub(&target).max_abs();
        all.push((c.to_string(), err));
        if best.as_ref().is_none_or(|(_, b, _)| err < *b) {
            best = Some((c, err, a));
        }
    }
    let (selected, err, a) = best.expect("eight conventions");
    let t = match selected.twist {
        OddTwist::Literal => QMatrix::identity(2),
        OddTwist::Twisted => odd_twist_matrix(),
    };
    let ecl = t.mul(&closed_form(FactorSide::E, &x)?).mul(&t);
    let fcl = t.mul(&closed_form(FactorSide::F, &x)?).mul(&t);
    let d = ecl.inverse()?.mul(&r_tilde(&x)?).mul(&fcl.inverse()?);
    let exact_diagonal = (0..9).all(|r| (0..9).all(|c| r == c || d.get(r, c).is_zero()));
    Ok(AssemblyReport {
        z: z.to_string(),
        w: w.to_string(),
        m,
        n,
        selected,
        max_abs_error: err,
        all_errors: all,
        exact_diagonal,
        normalization_slot: (*a.get(0, 0), rho(to_f64(&x))?),
        rh_tail: p.rh[rh_index(&selected)].tail,
        tolerance,
    })
}

/// Exact diagonal `(T E_cl T)⁻¹ R̃(x) (T F_cl T)⁻¹`, the rational part `ℛ_H` must supply.
pub fn exact_h_part(x: &Rational) -> Result<QMatrix> {
    let t = odd_twist_matrix();
    let ecl = t.mul(&closed_form(FactorSide::E, x)?).mul(&t);
    let fcl = t.mul(&closed_form(FactorSide::F, x)?).mul(&t);
    Ok(ecl.inverse()?.mul(&r_tilde(x)?).mul(&fcl.inverse()?))
}

/// Reports at several points, evaluated in parallel.
pub fn assemble_points(points: &[(Rational, Rational)], m: usize, n: usize, tolerance: f64) -> Vec<Result<AssemblyReport>> {
    points.par_iter().map(|(z, w)| assemble_evaluated_r(z, w, m, n, tolerance)).collect()
}

/// YBE residual of the assembled matrices at `z₁, z₂, z₃` (each pair in the
/// convergence region), `R₁₂(z₁−z₂)R₁₃(z₁−z₃)R₂₃(z₂−z₃) − R₂₃R₁₃R₁₂`.
pub fn assembled_ybe_residual(zs: [&Rational; 3], m: usize, n: usize) -> Result<f64> {
    let c = selected_convention();
    let r12 = assembled_matrix(zs[0], zs[1], m, n, c)?;
    let r13 = assembled_matrix(zs[0], zs[2], m, n, c)?;
    let r23 = assembled_matrix(zs[1], zs[2], m, n, c)?;
    let (a, b, d) = (embed_12(&r12), embed_13(&r13), embed_23(&r23));
    let lhs = a.mul(&b).mul(&d);
    let rhs = d.mul(&b).mul(&a);
    let scale = lhs.max_abs().max(1.0);
    Ok(lhs.sub(&rhs).max_abs() / scale)
}
