//! Hopf pairing between the negative and positive halves, in closed form.

use crate::currents::{Family, GenSymbol, PbwIndex, Side};
use crate::error::{Error, Result};
use crate::scalars::{int, rat, Rational, TruncatedSeries};
use num_integer::binomial;
use num_traits::{One, Zero};

pub type PairingValue = Rational;

/// `⟨a, b⟩` for a negative-mode generator `a` and a non-negative-mode generator `b`:
/// `⟨f_{−k−1}, e_n⟩ = −δ_{nk}`, `⟨e_{−k−1}, f_n⟩ = δ_{nk}`,
/// `⟨h_{−k−1}, h_n⟩ = −⅓(2 + (−½)^{n−k}) C(n,k)`; all other families pair to 0.
pub fn pair_generators(a: GenSymbol, b: GenSymbol) -> Result<PairingValue> {
    if a.is_capital() || b.is_capital() {
        return Err(Error::Unsupported(format!("pair_generators takes e, f, h only, got {a}, {b}")));
    }
    if a.mode >= 0 || b.mode < 0 {
        return Err(Error::ModeSign(format!("need ⟨negative, non-negative⟩, got ⟨{a}, {b}⟩")));
    }
    let k = -a.mode - 1;
    let n = b.mode;
    Ok(match (a.family, b.family) {
        (Family::F, Family::E) => {
            if n == k {
                int(-1)
            } else {
                Rational::zero()
            }
        }
        (Family::E, Family::F) => {
            if n == k {
                Rational::one()
            } else {
                Rational::zero()
            }
        }
        (Family::H, Family::H) => hh_value(k, n),
        _ => Rational::zero(),
    })
}

/// `⟨h_{−k−1}, h_n⟩`.
fn hh_value(k: i64, n: i64) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let c = Rational::from_integer(binomial(num_bigint::BigInt::from(n), num_bigint::BigInt::from(k)));
    let p = crate::scalars::pow(&rat(-1, 2), n - k);
    -(int(2) + p) * c / int(3)
}

fn factorial(n: u32) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, i| acc * int(i))
}

/// `⟨b₋, b₊⟩` on the PBW bases: the displayed factorial-sign value when the
/// exponent vectors coincide, zero otherwise.
pub fn pair_pbw(b_minus: &PbwIndex, b_plus: &PbwIndex) -> Result<PairingValue> {
    let with_c_sign = match (b_minus.side, b_plus.side) {
        (Side::FMinus, Side::EPlus) => true,
        (Side::EMinus, Side::FPlus) => false,
        (m, p) => return Err(Error::MalformedIndex(format!("no pairing between sides {m} and {p}"))),
    };
    if b_minus.levels != b_plus.levels {
        return Ok(Rational::zero());
    }
    let c = b_plus.c_vector();
    let mut odd_pairs = 0u32;
    for m in 0..c.len() {
        for n in 0..m {
            odd_pairs += (c[n] * c[m]) as u32;
        }
    }
    let mut v = if odd_pairs % 2 == 1 { int(-1) } else { Rational::one() };
    for l in &b_plus.levels {
        v *= factorial(l.a) * factorial(l.b);
        if with_c_sign && l.c == 1 {
            v = -v;
        }
    }
    Ok(v)
}

/// `⟨h₋, h₊⟩` for monomials of length ≤ 1.
fn pair_h(h_minus: &[GenSymbol], h_plus: &[GenSymbol]) -> Result<PairingValue> {
    if h_minus.len() > 1 || h_plus.len() > 1 {
        return Err(Error::Unsupported("pairing of h-monomials of length ≥ 2 requires the coproduct of h".into()));
    }
    match (h_minus.first(), h_plus.first()) {
        (None, None) => Ok(Rational::one()),
        (Some(a), Some(b)) => {
            if a.family != Family::H || b.family != Family::H {
                return Err(Error::MalformedIndex(format!("expected h symbols, got {a}, {b}")));
            }
            pair_generators(*a, *b)
        }
        // counit of a single h vanishes
        _ => Ok(Rational::zero()),
    }
}

/// `⟨f₋h₋e₋, e₊h₊f₊⟩ = (−1)^{[e₊][e₋]} ⟨f₋,e₊⟩⟨h₋,h₊⟩⟨e₋,f₊⟩`.
pub fn pair_mixed(
    f_minus: &PbwIndex,
    h_minus: &[GenSymbol],
    e_minus: &PbwIndex,
    e_plus: &PbwIndex,
    h_plus: &[GenSymbol],
    f_plus: &PbwIndex,
) -> Result<PairingValue> {
    let hv = pair_h(h_minus, h_plus)?;
    let fe = pair_pbw(f_minus, e_plus)?;
    let ef = pair_pbw(e_minus, f_plus)?;
    let odd = e_plus.word().parity() * e_minus.word().parity();
    let sign = if odd == 1 { int(-1) } else { Rational::one() };
    Ok(sign * fe * hv * ef)
}

/// Outcome of the three `h`–`h` consistency checks.
#[derive(Clone, Debug)]
pub struct HhReport {
    pub max_order: i64,
    /// Coefficient extraction region of the double series.
    pub region: &'static str,
    pub series_ok: bool,
    pub recursion_ok: bool,
    pub closed_form_ok: bool,
    pub first_failure: Option<String>,
}

impl HhReport {
    pub fn passed(&self) -> bool {
        self.series_ok && self.recursion_ok && self.closed_form_ok
    }
}

/// Series in `u` (exponent `−a` for `u^a`) with coefficients series in `v⁻¹`.
type Bivariate = TruncatedSeries<TruncatedSeries<Rational>>;

fn bi_const(c: Rational, n: i64) -> Bivariate {
    let mut out = TruncatedSeries::with_window(-n, i64::MAX / 4);
    out.add_term(0, TruncatedSeries::constant(c, n + 1));
    out
}

/// `(u−v−1)(2u−2v+1)/((u−v+1)(2u−2v−1))` expanded for `|u| < |v|` through
/// `u^n` and `v^{−n−1}`. With `s = 1/(u−v) = −Σ uᵃ v^{−a−1}` the function is
/// `(1−s)(2+s)/(2+s−s²)`.
fn hh_generating_function(n: i64) -> Bivariate {
    let mut s = TruncatedSeries::with_window(-n, i64::MAX / 4);
    for a in 0..=n {
        s.add_term(-a, TruncatedSeries::from_terms(n + 1, [(a + 1, int(-1))]));
    }
    let one = || bi_const(Rational::one(), n);
    let two = || bi_const(int(2), n);
    let num = (one() - s.clone()) * (two() + s.clone());
    // 1/(2 + t) = ½ Σ (−t/2)^j, t = s − s²; each power of t lowers v by one
    let t = s.clone() - &s * &s;
    let step = t.scale(&rat(-1, 2));
    let mut term = one();
    let mut inv = one();
    for _ in 0..=n + 1 {
        term = &term * &step;
        inv = inv + term.clone();
    }
    (num * inv).scale(&rat(1, 2))
}

/// Polynomials in `u` as coefficient vectors.
fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] += y;
    }
    while out.len() > 1 && out.last().unwrap().is_zero() {
        out.pop();
    }
    out
}

fn poly_scale(a: &[Rational], q: &Rational) -> Vec<Rational> {
    a.iter().map(|x| x * q).collect()
}

fn poly_pow(a: &[Rational], n: u32) -> Vec<Rational> {
    (0..n).fold(vec![Rational::one()], |acc, _| poly_mul(&acc, a))
}

/// `⟨h⁻(u), h_n⟩` by the three-term recursion, `n = 0..=max`.
pub fn hh_recursion(max: usize) -> Vec<Vec<Rational>> {
    let mut p = vec![vec![Rational::one()], vec![rat(1, 2), Rational::one()]];
    let lin = [rat(1, 2), int(2)];
    let quad = poly_mul(&[Rational::one(), Rational::one()], &[rat(-1, 2), Rational::one()]);
    while p.len() <= max {
        let n = p.len();
        let a = poly_mul(&lin, &p[n - 1]);
        let b = poly_mul(&quad, &p[n - 2]);
        p.push(poly_add(&a, &poly_scale(&b, &int(-1))));
    }
    p.truncate(max + 1);
    p
}

/// `⅓(u−½)^{m} + ⅔(u+½)(u+1)^{m−1} + ⅓(u+1)^{m−1}`, valid for `m ≥ 1`.
pub fn hh_closed_form(m: u32) -> Vec<Rational> {
    let third = rat(1, 3);
    let a = poly_scale(&poly_pow(&[rat(-1, 2), Rational::one()], m), &third);
    let u1 = poly_pow(&[Rational::one(), Rational::one()], m - 1);
    let b = poly_scale(&poly_mul(&[rat(1, 2), Rational::one()], &u1), &rat(2, 3));
    let c = poly_scale(&u1, &third);
    poly_add(&poly_add(&a, &b), &c)
}

fn poly_coeff(p: &[Rational], k: usize) -> Rational {
    p.get(k).cloned().unwrap_or_else(Rational::zero)
}

/// Series, recursion and closed form against the mode formula, `n, k ≤ max_order`.
pub fn hh_series_report(max_order: i64) -> HhReport {
    let mut report = HhReport {
        max_order,
        region: "|u| < |v|; coefficient of u^k v^(-n-1) equals -<h_(-k-1), h_n>",
        series_ok: true,
        recursion_ok: true,
        closed_form_ok: true,
        first_failure: None,
    };
    let fail = |r: &mut HhReport, what: String| {
        if r.first_failure.is_none() {
            r.first_failure = Some(what);
        }
    };
    let series = hh_generating_function(max_order);
    let rec = hh_recursion(max_order.max(2) as usize);
    for n in 0..=max_order {
        let inner = series.coeff(0);
        if n == 0 && inner.coeff(0) != Rational::one() {
            report.series_ok = false;
            fail(&mut report, "constant term of the series".into());
        }
        for k in 0..=max_order {
            let want = hh_value(k, n);
            let got = -series.coeff(-k).coeff(n + 1);
            if got != want {
                report.series_ok = false;
                fail(&mut report, format!("series coefficient n={n} k={k}: {got} vs {want}"));
            }
            if poly_coeff(&rec[n as usize], k as usize) != -want.clone() {
                report.recursion_ok = false;
                fail(&mut report, format!("recursion n={n} k={k}"));
            }
        }
        if n >= 2 && hh_closed_form(n as u32) != rec[n as usize] {
            report.closed_form_ok = false;
            fail(&mut report, format!("closed form at n={n}"));
        }
    }
    report
}

pub fn hh_series_check(max_order: i64) -> bool {
    max_order >= 2 && hh_series_report(max_order).passed()
}
