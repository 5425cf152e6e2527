//! Bounded ideal-membership checks of the cubic mode relations, and the
//! graded (top filtration degree) limit.

use super::linalg::{quadratic, serre_coefficient, Block, Echelon};
use super::rewrite::Normalizer;
use super::{anti, comm, e, f, h, Element, Word};
use crate::error::{Error, Result};
use crate::scalars::{int, rat};

/// Mode bounds `[lo, hi]` and an optional bound on word degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SerreWindow {
    pub lo: i64,
    pub hi: i64,
    pub max_degree: Option<i64>,
}

impl SerreWindow {
    pub fn new(lo: i64, hi: i64) -> Self {
        SerreWindow { lo, hi, max_degree: None }
    }

    /// Default window for relations at `k`.
    pub fn for_k(k: i64) -> Self {
        if k >= 0 {
            SerreWindow::new(0, 3 * k + 3)
        } else {
            SerreWindow::new(k - 2, 2)
        }
    }

    fn admits(&self, x: &Element) -> bool {
        x.terms().all(|(w, _)| {
            w.0.iter().all(|s| s.mode >= self.lo && s.mode <= self.hi)
                && self.max_degree.is_none_or(|d| w.degree() <= d)
        })
    }
}

fn x(block: Block, k: i64) -> Element {
    Element::gen(block.letter(k))
}

fn cube(a: &Element, b: &Element, c: &Element) -> Element {
    &(a * b) * c
}

/// Left side `[{x_k,x_{k+1}}, x_{k+j−1}]` of relation `j ∈ {1,2,3}`.
pub fn serre_lhs(block: Block, which: u8, k: i64) -> Element {
    let a = anti(&x(block, k), &x(block, k + 1));
    comm(&a, &x(block, k + which as i64 - 1))
}

/// Right side of relation `j` (`s = +1` for `e`, `−1` for `f`):
/// `2s x_k³`, `−s(x_k x_{k+1} x_k + ½x_k² x_{k+1} + ½x_{k+1} x_k²)`,
/// `−2s(x_{k+1}² x_k + x_{k+1} x_k x_{k+1} + x_k x_{k+1}²)`.
pub fn serre_rhs(block: Block, which: u8, k: i64) -> Element {
    let s = block.sign();
    let (a, b) = (x(block, k), x(block, k + 1));
    match which {
        1 => cube(&a, &a, &a).scale(&int(2 * s)),
        2 => (cube(&a, &b, &a) + cube(&a, &a, &b).scale(&rat(1, 2)) + cube(&b, &a, &a).scale(&rat(1, 2)))
            .scale(&int(-s)),
        3 => (cube(&b, &b, &a) + cube(&b, &a, &b) + cube(&a, &b, &b)).scale(&int(-2 * s)),
        _ => panic!("relation index must be 1, 2 or 3"),
    }
}

/// `lhs − rhs`, which should lie in the ideal.
pub fn serre_candidate(block: Block, which: u8, k: i64) -> Element {
    serre_lhs(block, which, k) - serre_rhs(block, which, k)
}

/// `lhs + rhs`: the sign-flipped control.
pub fn flipped_candidate(block: Block, which: u8, k: i64) -> Element {
    serre_lhs(block, which, k) + serre_rhs(block, which, k)
}

/// Coefficient of `u^n` in the double's Serre relation for `x⁻(u) = −Σ_{m≥0} x_{−m−1} u^m`:
/// `{x₀,x}x − s·5/2{x₀²,x} + 2u[x₀²,x] − s·x₀xx₀ + [{x₀,x₁},x]`.
pub fn double_serre_minus(block: Block, n: i64) -> Element {
    let s = block.sign();
    let c = |m: i64| if m >= 0 { x(block, -m - 1).scale(&int(-1)) } else { Element::zero() };
    let x0 = x(block, 0);
    let x00 = &x0 * &x0;
    let mut out = Element::zero();
    for a in 0..=n {
        out = out + &anti(&x0, &c(a)) * &c(n - a);
    }
    out - anti(&x00, &c(n)).scale(&rat(5 * s, 2)) + comm(&x00, &c(n - 1)).scale(&int(2))
        - cube(&x0, &c(n), &x0).scale(&int(s))
        + comm(&anti(&x0, &x(block, 1)), &c(n))
}

/// Coefficient of `u^{−n}` of the same relation for `x⁺(u) = Σ_{k≥0} x_k u^{−k−1}`.
pub fn double_serre_plus(block: Block, n: i64) -> Element {
    let s = block.sign();
    let x0 = x(block, 0);
    let x00 = &x0 * &x0;
    let mut out = Element::zero();
    for a in 0..=(n - 2) {
        out = out + &anti(&x0, &x(block, a)) * &x(block, n - 2 - a);
    }
    if n >= 1 {
        let p = x(block, n - 1);
        out = out - anti(&x00, &p).scale(&rat(5 * s, 2)) - cube(&x0, &p, &x0).scale(&int(s))
            + comm(&anti(&x0, &x(block, 1)), &p);
    }
    out + comm(&x00, &x(block, n)).scale(&int(2))
}

/// Length-3 generators of the two-sided ideal inside `window`.
pub fn ideal_generators(block: Block, window: &SerreWindow) -> Vec<Element> {
    let (lo, hi) = (window.lo, window.hi);
    let mut gens = Vec::new();
    for k in (lo - 2)..=hi {
        for l in (lo - 2)..=hi {
            let q = quadratic(block, k, l);
            if q.is_zero() {
                continue;
            }
            for m in lo..=hi {
                for t in [&x(block, m) * &q, &q * &x(block, m)] {
                    if window.admits(&t) {
                        gens.push(t);
                    }
                }
            }
        }
    }
    let span = 3 * (hi - lo) + 6;
    if lo >= 0 {
        for n in -1..=span {
            let t = serre_coefficient(block, n);
            if !t.is_zero() && window.admits(&t) {
                gens.push(t);
            }
        }
    } else {
        for n in 0..=span {
            for t in [double_serre_minus(block, n), double_serre_plus(block, n)] {
                if !t.is_zero() && window.admits(&t) {
                    gens.push(t);
                }
            }
        }
    }
    gens
}

/// Is `target` in the ideal truncated to `window`?
pub fn ideal_contains(block: Block, target: &Element, window: &SerreWindow) -> Result<bool> {
    if !window.admits(target) {
        let lo = target.min_mode().unwrap_or(0).min(window.lo);
        let hi = target.max_mode().unwrap_or(0).max(window.hi);
        let deg = target.degree().unwrap_or(0);
        let cap = window.max_degree.map_or("none".to_string(), |d| d.to_string());
        return Err(Error::WindowTooSmall(format!(
            "candidate needs modes in [{lo}, {hi}] and degree {deg}, window is [{}, {}] with degree cap {cap}",
            window.lo, window.hi
        )));
    }
    let mut ech = Echelon::new(|_: &Word| 0);
    for g in ideal_generators(block, window) {
        ech.insert(&g);
    }
    Ok(ech.reduce(target).is_zero())
}

/// One relation `j ∈ {1,2,3}` at mode `k`.
pub fn serre_relation_check(block: Block, which: u8, k: i64, window: &SerreWindow) -> Result<bool> {
    ideal_contains(block, &serre_candidate(block, which, k), window)
}

/// All three cubic relations at `k` hold in the window.
pub fn serre_mode_check(block: Block, k: i64, window: &SerreWindow) -> Result<bool> {
    let mut ech = Echelon::new(|_: &Word| 0);
    for g in ideal_generators(block, window) {
        ech.insert(&g);
    }
    for which in 1..=3 {
        let c = serre_candidate(block, which, k);
        if !window.admits(&c) {
            return ideal_contains(block, &c, window);
        }
        if !ech.reduce(&c).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Per relation `j` at `k`: whether the candidate lies in the ideal and
/// whether the sign-flipped control is rejected. One elimination is shared.
pub fn serre_family_report(block: Block, k: i64, window: &SerreWindow) -> Result<Vec<(u8, bool, bool)>> {
    let cands: Vec<_> = (1..=3u8).map(|j| (j, serre_candidate(block, j, k), flipped_candidate(block, j, k))).collect();
    if let Some((_, c, _)) = cands.iter().find(|(_, c, _)| !window.admits(c)) {
        return ideal_contains(block, c, window).map(|_| Vec::new());
    }
    let mut ech = Echelon::new(|_: &Word| 0);
    for g in ideal_generators(block, window) {
        ech.insert(&g);
    }
    Ok(cands
        .iter()
        .map(|(j, c, flip)| (*j, ech.reduce(c).is_zero(), !ech.reduce(flip).is_zero()))
        .collect())
}

/// Named top-degree checks up to `max_mode`.
pub fn graded_limit_report(max_mode: i64) -> Result<Vec<(String, bool)>> {
    let nz = Normalizer::global();
    let nf = |x: &Element| nz.normal_order(x, super::Strategy::Leftmost);
    let top = |x: &Element, d: i64| -> Result<Element> { Ok(nf(x)?.degree_part(d)) };
    let mut out = Vec::new();
    let mut push = |name: String, ok: bool| out.push((name, ok));
    for k in 0..=max_mode {
        for l in 0..=max_mode {
            let d = k + l;
            push(format!("[h{k},h{l}]"), top(&comm(&h(k), &h(l)), d)?.is_zero());
            push(format!("{{e{k},f{l}}}"), top(&anti(&e(k), &f(l)), d)? == h(d));
            push(format!("[h{k},e{l}]"), top(&comm(&h(k), &e(l)), d)? == e(d));
            push(format!("[h{k},f{l}]"), top(&comm(&h(k), &f(l)), d)? == -f(d));
            push(
                format!("{{e{k},e{l}}}"),
                top(&(anti(&e(k), &e(l)) - anti(&e(0), &e(d))), d)?.is_zero(),
            );
            push(
                format!("{{f{k},f{l}}}"),
                top(&(anti(&f(k), &f(l)) - anti(&f(0), &f(d))), d)?.is_zero(),
            );
            for n in 0..=max_mode {
                let d3 = d + n;
                let ce = comm(&anti(&e(k), &e(l)), &e(n));
                push(format!("[{{e{k},e{l}}},e{n}]"), top(&ce, d3)?.is_zero());
                let cf = comm(&anti(&f(k), &f(l)), &f(n));
                push(format!("[{{f{k},f{l}}},f{n}]"), top(&cf, d3)?.is_zero());
            }
        }
    }
    Ok(out)
}

/// Every relation's top-degree part is the corresponding `osp(1|2)[u]` relation.
pub fn graded_limit_check(max_mode: i64) -> Result<bool> {
    Ok(graded_limit_report(max_mode)?.iter().all(|(_, ok)| *ok))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k0_relations_hold_and_controls_fail() {
        for block in [Block::E, Block::F] {
            let w = SerreWindow::for_k(0);
            assert!(serre_mode_check(block, 0, &w).unwrap(), "{block:?}");
            for which in 1..=3 {
                assert!(!ideal_contains(block, &flipped_candidate(block, which, 0), &w).unwrap());
            }
        }
    }

    #[test]
    fn k1_k2_and_graded_limit() {
        for block in [Block::E, Block::F] {
            for k in 1..=2 {
                let w = SerreWindow::for_k(k);
                for which in 1..=3 {
                    assert!(serre_relation_check(block, which, k, &w).unwrap(), "{block:?} {which} {k}");
                    assert!(!ideal_contains(block, &flipped_candidate(block, which, k), &w).unwrap());
                }
            }
        }
        assert!(graded_limit_check(4).unwrap());
    }

    #[test]
    fn negative_k_is_not_reached_by_the_double_relations() {
        let w = SerreWindow::for_k(-1);
        assert!(!serre_relation_check(Block::E, 1, -1, &w).unwrap());
    }

    #[test]
    fn window_too_small() {
        let w = SerreWindow::new(0, 2);
        assert!(matches!(serre_relation_check(Block::E, 3, 1, &w), Err(Error::WindowTooSmall(_))));
    }

    #[test]
    fn first_coefficients_of_double_relation() {
        // u⁻⁰ coefficient of the x⁺ form is 2[x₀², x₀] = 0
        assert!(double_serre_plus(Block::E, 0).is_zero());
        // n = 1: −5/2{e0²,e0} − e0³ + [{e0,e1},e0] + 2[e0²,e1]
        let e0 = e(0);
        let want = (&(&e0 * &e0) * &e0).scale(&int(-6)) + comm(&anti(&e0, &e(1)), &e0) + comm(&(&e0 * &e0), &e(1)).scale(&int(2));
        assert_eq!(double_serre_plus(Block::E, 1), want);
    }

    #[test]
    fn graded_examples() {
        let nz = Normalizer::global();
        let x = nz.normal_order(&(h(2) * e(1)), crate::currents::Strategy::Leftmost).unwrap() - e(1) * h(2);
        assert_eq!(x.degree_part(3), e(3));
        let g = nz.normal_order(&(anti(&e(1), &e(1)) - anti(&e(0), &e(2))), crate::currents::Strategy::Leftmost).unwrap();
        assert!(g.degree().unwrap() < 2);
        let hf = nz.normal_order(&comm(&h(0), &f(3)), crate::currents::Strategy::Leftmost).unwrap();
        assert_eq!(hf, -f(3));
        assert!(graded_limit_check(2).unwrap());
    }
}
