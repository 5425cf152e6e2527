//! Truncated Laurent-type series `Σ c_n u⁻ⁿ` over a coefficient ring.
//!
//! A series is known on a window of exponents `floor ..= order`. Terms with
//! `n > order` (high powers of `u⁻¹`) or `n < floor` (high positive powers of
//! `u`) are discarded and the `truncated` flag records that something was
//! dropped. Exact polynomials use an unbounded window.

use super::{Rational, Scalar};
use crate::error::{Error, Result};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

const UNBOUNDED_HI: i64 = i64::MAX / 4;
const UNBOUNDED_LO: i64 = i64::MIN / 4;

#[derive(Clone, Debug)]
pub struct TruncatedSeries<R> {
    coeffs: BTreeMap<i64, R>,
    order: i64,
    floor: i64,
    truncated: bool,
}

impl<R: Scalar> TruncatedSeries<R> {
    /// Empty series known through `u⁻ᵒʳᵈᵉʳ`, with no cap on positive powers.
    pub fn new(order: i64) -> Self {
        Self::with_window(UNBOUNDED_LO, order)
    }

    /// Empty series known on exponents `floor ..= order`.
    pub fn with_window(floor: i64, order: i64) -> Self {
        TruncatedSeries { coeffs: BTreeMap::new(), order, floor, truncated: false }
    }

    /// Exact polynomial in `u⁻¹` (and `u`) from `(exponent, coefficient)` pairs.
    pub fn exact<I: IntoIterator<Item = (i64, R)>>(terms: I) -> Self {
        let mut s = Self::with_window(UNBOUNDED_LO, UNBOUNDED_HI);
        for (n, c) in terms {
            s.add_term(n, c);
        }
        s
    }

    /// Series with the given terms, truncated at `order`.
    pub fn from_terms<I: IntoIterator<Item = (i64, R)>>(order: i64, terms: I) -> Self {
        let mut s = Self::new(order);
        for (n, c) in terms {
            s.add_term(n, c);
        }
        s
    }

    pub fn constant(c: R, order: i64) -> Self {
        Self::from_terms(order, [(0, c)])
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn floor(&self) -> i64 {
        self.floor
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn is_exact(&self) -> bool {
        self.order >= UNBOUNDED_HI && self.floor <= UNBOUNDED_LO
    }

    /// Restrict the known window, discarding terms outside it.
    pub fn truncate(mut self, floor: i64, order: i64) -> Self {
        self.order = self.order.min(order);
        self.floor = self.floor.max(floor);
        let (lo, hi) = (self.floor, self.order);
        let before = self.coeffs.len();
        self.coeffs.retain(|n, _| *n >= lo && *n <= hi);
        if self.coeffs.len() != before {
            self.truncated = true;
        }
        self
    }

    /// Coefficient of `u⁻ⁿ` (zero when absent).
    pub fn coeff(&self, n: i64) -> R {
        self.coeffs.get(&n).cloned().unwrap_or_else(R::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &R)> {
        self.coeffs.iter().map(|(n, c)| (*n, c))
    }

    pub fn add_term(&mut self, n: i64, c: R) {
        if n > self.order || n < self.floor {
            if !c.is_zero() {
                self.truncated = true;
            }
            return;
        }
        let updated = match self.coeffs.remove(&n) {
            Some(old) => old + c,
            None => c,
        };
        if !updated.is_zero() {
            self.coeffs.insert(n, updated);
        }
    }

    fn lowest(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    fn highest(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn scale(&self, q: &Rational) -> Self {
        let mut out = Self::with_window(self.floor, self.order);
        out.truncated = self.truncated;
        for (n, c) in &self.coeffs {
            out.add_term(*n, c.scale_q(q));
        }
        out
    }

    /// Multiplicative inverse through the truncation order.
    pub fn invert(&self) -> Result<Self> {
        if self.order >= UNBOUNDED_HI {
            return Err(Error::Unsupported("series_invert needs a finite truncation order".into()));
        }
        if let Some(lo) = self.lowest() {
            if lo < 0 {
                return Err(Error::NonInvertible(format!(
                    "series has a u^{} term; only power series in u^-1 are inverted",
                    -lo
                )));
            }
        }
        let c0 = self.coeff(0);
        let r0 = c0
            .try_inverse()
            .ok_or_else(|| Error::NonInvertible(format!("u^0 coefficient {:?}", c0)))?;
        let n_max = self.order;
        let mut r: Vec<R> = Vec::with_capacity((n_max + 1) as usize);
        r.push(r0.clone());
        for n in 1..=n_max {
            let mut acc = R::zero();
            for (k, ck) in self.coeffs.range(1..=n) {
                acc = acc + ck.clone() * r[(n - k) as usize].clone();
            }
            r.push(-(r0.clone() * acc));
        }
        let mut out = Self::new(n_max);
        for (n, c) in r.into_iter().enumerate() {
            out.add_term(n as i64, c);
        }
        Ok(out)
    }

    fn require_power_series(&self, what: &str) -> Result<()> {
        if self.order >= UNBOUNDED_HI {
            return Err(Error::Unsupported(format!("{what} needs a finite truncation order")));
        }
        match self.lowest() {
            Some(lo) if lo < 0 => Err(Error::Unsupported(format!(
                "{what} is defined for power series in u^-1 only"
            ))),
            _ => Ok(()),
        }
    }

    /// `ln s` for a series with constant term 1 (Mercator series).
    pub fn log(&self) -> Result<Self> {
        self.require_power_series("series_log")?;
        let c0 = self.coeff(0);
        if c0 != R::one() {
            return Err(Error::BadConstantTerm { expected: "1".into(), found: format!("{:?}", c0) });
        }
        let mut t = self.clone();
        t.coeffs.remove(&0);
        let mut out = Self::new(self.order);
        let mut power = t.clone();
        for m in 1..=self.order.max(0) {
            if power.coeffs.is_empty() {
                break;
            }
            let sign = if m % 2 == 1 { 1 } else { -1 };
            out = out + power.scale(&super::rat(sign, m));
            power = &power * &t;
        }
        Ok(out)
    }

    /// `exp t` for a series without constant term.
    pub fn exp(&self) -> Result<Self> {
        self.require_power_series("series_exp")?;
        if !self.coeff(0).is_zero() {
            return Err(Error::BadConstantTerm { expected: "0".into(), found: format!("{:?}", self.coeff(0)) });
        }
        let mut out = Self::constant(R::one(), self.order);
        let mut power = Self::constant(R::one(), self.order);
        let mut fact = Rational::one();
        for m in 1..=self.order.max(0) {
            power = &power * self;
            if power.coeffs.is_empty() {
                break;
            }
            fact *= super::int(m);
            out = out + power.scale(&fact.recip());
        }
        Ok(out)
    }

    /// Substitute a number for `u⁻¹` (finite sum of the stored terms).
    pub fn evaluate_inverse(&self, x: &R) -> R
    where
        R: Scalar,
    {
        let mut acc = R::zero();
        for (n, c) in &self.coeffs {
            let mut p = R::one();
            if *n >= 0 {
                for _ in 0..*n {
                    p = p * x.clone();
                }
            } else {
                let xi = x.try_inverse().expect("u^-1 = 0 with positive powers of u present");
                for _ in 0..(-*n) {
                    p = p * xi.clone();
                }
            }
            acc = acc + c.clone() * p;
        }
        acc
    }
}

fn sat_add(a: i64, b: i64) -> i64 {
    (a + b).clamp(UNBOUNDED_LO, UNBOUNDED_HI)
}

impl<'a, R: Scalar> Mul<&'a TruncatedSeries<R>> for &'a TruncatedSeries<R> {
    type Output = TruncatedSeries<R>;
    fn mul(self, rhs: &'a TruncatedSeries<R>) -> TruncatedSeries<R> {
        let (order, floor) = match (self.lowest(), rhs.lowest()) {
            (Some(l1), Some(l2)) => {
                let h1 = self.highest().unwrap();
                let h2 = rhs.highest().unwrap();
                let order = sat_add(self.order, l2).min(sat_add(rhs.order, l1));
                let floor = sat_add(self.floor, h2).max(sat_add(rhs.floor, h1));
                (order, floor)
            }
            _ => (self.order.min(rhs.order), self.floor.max(rhs.floor)),
        };
        let mut out = TruncatedSeries::with_window(floor, order);
        out.truncated = self.truncated || rhs.truncated;
        for (a, ca) in &self.coeffs {
            for (b, cb) in &rhs.coeffs {
                out.add_term(a + b, ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<R: Scalar> Mul for TruncatedSeries<R> {
    type Output = TruncatedSeries<R>;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<R: Scalar> Add for TruncatedSeries<R> {
    type Output = TruncatedSeries<R>;
    fn add(self, rhs: Self) -> Self {
        let mut out = TruncatedSeries::with_window(self.floor.max(rhs.floor), self.order.min(rhs.order));
        out.truncated = self.truncated || rhs.truncated;
        for (n, c) in self.coeffs.into_iter().chain(rhs.coeffs) {
            out.add_term(n, c);
        }
        out
    }
}

impl<R: Scalar> Neg for TruncatedSeries<R> {
    type Output = TruncatedSeries<R>;
    fn neg(mut self) -> Self {
        for c in self.coeffs.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl<R: Scalar> Sub for TruncatedSeries<R> {
    type Output = TruncatedSeries<R>;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<R: Scalar> PartialEq for TruncatedSeries<R> {
    /// Coefficientwise equality; the truncation windows are not compared.
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<R: Scalar> Zero for TruncatedSeries<R> {
    fn zero() -> Self {
        Self::exact(std::iter::empty())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<R: Scalar> One for TruncatedSeries<R> {
    fn one() -> Self {
        Self::exact([(0, R::one())])
    }
}

impl<R: Scalar> Scalar for TruncatedSeries<R> {
    fn scale_q(&self, q: &Rational) -> Self {
        self.scale(q)
    }
    fn try_inverse(&self) -> Option<Self> {
        if self.coeffs.len() == 1 && self.coeffs.contains_key(&0) {
            let c = self.coeff(0).try_inverse()?;
            let mut out = Self::with_window(self.floor, self.order);
            out.add_term(0, c);
            return Some(out);
        }
        self.invert().ok()
    }
    fn magnitude(&self) -> f64 {
        self.coeffs.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{int, rat};
    use super::*;
    use proptest::prelude::*;

    type S = TruncatedSeries<Rational>;

    #[test]
    fn invert_identity() {
        let one = S::constant(int(1), 5);
        assert_eq!(one.invert().unwrap(), one);
    }

    #[test]
    fn invert_geometric() {
        let s = S::from_terms(3, [(0, int(1)), (1, int(1))]);
        let inv = s.invert().unwrap();
        let want = S::from_terms(3, [(0, int(1)), (1, int(-1)), (2, int(1)), (3, int(-1))]);
        assert_eq!(inv, want);
    }

    #[test]
    fn invert_round_trip() {
        let s = S::from_terms(3, [(0, int(1)), (1, int(2)), (2, int(1))]);
        let prod = &s * &s.invert().unwrap();
        assert_eq!(prod, S::constant(int(1), 3));
        assert_eq!(prod.order(), 3);
    }

    #[test]
    fn invert_rejects_zero_constant() {
        let s = S::from_terms(3, [(1, int(1))]);
        assert!(matches!(s.invert(), Err(Error::NonInvertible(_))));
    }

    #[test]
    fn log_of_one_is_zero() {
        assert!(S::constant(int(1), 4).log().unwrap().is_zero());
    }

    #[test]
    fn mercator() {
        let s = S::from_terms(3, [(0, int(1)), (1, int(1))]);
        let want = S::from_terms(3, [(1, int(1)), (2, rat(-1, 2)), (3, rat(1, 3))]);
        assert_eq!(s.log().unwrap(), want);
    }

    #[test]
    fn log_rejects_bad_constant() {
        let s = S::from_terms(3, [(0, int(2)), (1, int(1))]);
        assert!(matches!(s.log(), Err(Error::BadConstantTerm { .. })));
    }

    #[test]
    fn exp_log_round_trip() {
        let s = S::from_terms(6, [(0, int(1)), (1, int(3)), (2, int(-1))]);
        assert_eq!(s.log().unwrap().exp().unwrap(), s);
    }

    #[test]
    fn truncation_is_flagged() {
        let s = S::from_terms(2, [(0, int(1)), (3, int(7))]);
        assert!(s.is_truncated());
        assert_eq!(s.coeff(3), int(0));
    }

    #[test]
    fn positive_powers_with_floor() {
        // (1 + u)(1 - u) = 1 - u^2 ; with floor -1 the u^2 term is dropped
        let a = TruncatedSeries::exact([(0, int(1)), (-1, int(1))]).truncate(-1, i64::MAX);
        let b = TruncatedSeries::exact([(0, int(1)), (-1, int(-1))]).truncate(-1, i64::MAX);
        let p = &a * &b;
        assert_eq!(p.coeff(0), int(1));
        assert_eq!(p.coeff(-1), int(0));
        assert!(p.is_truncated());
    }

    fn series_strategy() -> impl Strategy<Value = (i64, Vec<Rational>)> {
        (1i64..=20).prop_flat_map(|n| {
            (Just(n), proptest::collection::vec((-9i64..10, 1i64..5).prop_map(|(a, b)| rat(a, b)), n as usize))
        })
    }

    proptest! {
        #[test]
        fn invert_property((n, cs) in series_strategy(), c0 in (1i64..6, 1i64..6)) {
            let mut terms = vec![(0, rat(c0.0, c0.1))];
            for (k, c) in cs.into_iter().enumerate() {
                terms.push((k as i64 + 1, c));
            }
            let s = S::from_terms(n, terms);
            let prod = &s * &s.invert().unwrap();
            prop_assert_eq!(prod, S::constant(int(1), n));
        }

        #[test]
        fn log_exp_property((n, cs) in series_strategy()) {
            let n = n.min(8);
            let mut terms = vec![(0, int(1))];
            for (k, c) in cs.into_iter().take(n as usize).enumerate() {
                terms.push((k as i64 + 1, c));
            }
            let s = S::from_terms(n, terms);
            prop_assert_eq!(s.log().unwrap().exp().unwrap(), s);
        }
    }
}
