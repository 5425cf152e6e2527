//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use num_traits::Signed;
use std::time::{Duration, Instant};
use superyangian::cli::{rational_pairs, run_suite, Check, SuiteConfig};
use superyangian::currents::graded_limit_check;
use superyangian::report::{Record, Status};
use superyangian::rmatrix::{max_norm, r_tilde, ybe_residual, Variant};
use superyangian::scalars::{int, rat, to_f64, Rational};
use superyangian::urmatrix::{
    coefficient, dual_basis_consistency, evaluate_factor, factor_report, geometric_bound, FactorSide,
};

struct Outcome {
    ok: bool,
    detail: String,
}

fn suite(checks: &[Check], tweak: impl FnOnce(&mut SuiteConfig)) -> Vec<Record> {
    let mut cfg = SuiteConfig { checks: checks.to_vec(), ..SuiteConfig::default() };
    tweak(&mut cfg);
    run_suite(&cfg).expect("valid configuration").records
}

fn tally(recs: &[Record], check: &str) -> (usize, usize, usize) {
    let of = |s| recs.iter().filter(|r| r.check == check && r.status == s).count();
    (of(Status::Pass), of(Status::Fail), of(Status::Skip))
}

fn first_failure(recs: &[Record]) -> String {
    recs.iter()
        .find(|r| r.status != Status::Pass)
        .map(|r| {
            let p: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let err = r.max_abs_error.map(|e| format!(" err={e:.3e}")).unwrap_or_default();
            format!("; first non-pass: {} {}{err} {}", r.check, p.join(" "), r.note.clone().unwrap_or_default())
        })
        .unwrap_or_default()
}

fn ybe() -> Outcome {
    let start = Instant::now();
    let regular = |u: &Rational| r_tilde(u).is_ok();
    let pairs = rational_pairs(7, 0, 25, |u, v| regular(u) && regular(v) && regular(&(u + v)));
    let zero = pairs
        .iter()
        .filter(|(u, v)| ybe_residual(u, v, Variant::Standard).map(|m| max_norm(&m) == int(0)).unwrap_or(false))
        .count();
    let t = start.elapsed();
    Outcome {
        ok: pairs.len() == 25 && zero == 25 && t < Duration::from_secs(10),
        detail: format!("{zero}/{} samples with exact zero residual in {:.2}s (limit 10s)", pairs.len(), t.as_secs_f64()),
    }
}

fn exact_and_real64(check: Check, exact: &str, real: &str) -> Outcome {
    let recs = suite(&[check], |c| {
        c.samples = 10;
        c.tolerance = 1e-9;
    });
    let (ep, ef, es) = tally(&recs, exact);
    let (rp, rf, rs) = tally(&recs, real);
    let worst = recs.iter().filter(|r| r.check == real).filter_map(|r| r.max_abs_error).fold(0.0, f64::max);
    Outcome {
        ok: ep == 10 && ef + es == 0 && rp == 5 && rf + rs == 0,
        detail: format!(
            "exact {ep}/10 pass; Real64 {rp}/5 pass (tolerance 1e-9, worst {worst:.3e}){}",
            if rf + rs > 0 { first_failure(&recs) } else { String::new() }
        ),
    }
}

fn serre() -> Outcome {
    let start = Instant::now();
    let recs = suite(&[Check::Serre], |c| c.window_mode = 3);
    let t = start.elapsed();
    let (p, f, s) = tally(&recs, "serre");
    let controls = recs.iter().filter(|r| r.params.get("control").map(String::as_str) == Some("rejected")).count();
    Outcome {
        ok: p == 18 && f + s == 0 && controls == 18 && t < Duration::from_secs(300),
        detail: format!(
            "{p}/18 relations (e, f; k = 0,1,2) in the ideal, {controls}/18 sign-flipped controls rejected, {:.1}s (limit 300s){}",
            t.as_secs_f64(),
            first_failure(&recs)
        ),
    }
}

fn graded() -> Outcome {
    let ok = graded_limit_check(4).unwrap_or(false);
    Outcome { ok, detail: "top-degree parts of all relations with modes <= 4".into() }
}

fn pairing() -> Outcome {
    let recs = suite(&[Check::Pairing], |c| c.d = 6);
    let (p, f, s) = tally(&recs, "pairing");
    let tables = recs.iter().filter(|r| r.params.get("value").map(String::as_str) == Some("pbw-table")).count();
    let hh = recs.iter().any(|r| r.params.get("order").map(String::as_str) == Some("12") && r.passed());
    Outcome {
        ok: f + s == 0 && tables == 2 && hh,
        detail: format!("{p} records pass (displayed values, PBW tables E/F of length <= 6, h-h order 12){}", first_failure(&recs)),
    }
}

fn dual_basis() -> Outcome {
    let recs = suite(&[Check::DualBasis], |c| c.d = 6);
    let (p, f, s) = tally(&recs, "dual-basis");
    let direct = dual_basis_consistency(6);
    Outcome {
        ok: f + s == 0 && p == 3 && direct,
        detail: format!("E and F dual at D = 6 ({direct}), quarter-dropped control breaks duality{}", first_failure(&recs)),
    }
}

type Slot = ((usize, usize), (usize, usize), Rational);

/// Displayed coefficients of the evaluated factors at `x = z − w`.
fn displayed(side: FactorSide, x: &Rational) -> Vec<Slot> {
    let half = rat(1, 2);
    let inv = |q: Rational| q.recip();
    let even = (int(4) * x + int(3)) / (x * (int(2) * x + int(1)));
    match side {
        FactorSide::E => vec![
            ((1, 2), (2, 1), inv(x.clone())),
            ((2, 3), (3, 2), -inv(x.clone())),
            ((1, 2), (3, 2), -inv(x - &half)),
            ((2, 3), (2, 1), inv(x + &half)),
            ((1, 3), (3, 1), even),
        ],
        FactorSide::F => vec![
            ((2, 1), (1, 2), -inv(x.clone())),
            ((3, 2), (2, 3), inv(x.clone())),
            ((2, 1), (2, 3), -inv(x - &half)),
            ((3, 2), (1, 2), inv(x + &half)),
            ((3, 1), (1, 3), even),
        ],
    }
}

fn eval_factors() -> Outcome {
    let (z, w) = (rat(1, 10), rat(23, 10));
    let x = &z - &w;
    let bound = geometric_bound(&z, &w, 60).expect("in region");
    let mut ok = true;
    let mut worst = Rational::from_integer(0.into());
    for side in [FactorSide::E, FactorSide::F] {
        let m = evaluate_factor(side, &z, &w, 60).expect("evaluates");
        for (a, b, want) in displayed(side, &x) {
            let gap = (coefficient(&m, a, b) - want).abs();
            ok &= gap < bound;
            worst = worst.max(gap);
        }
        ok &= factor_report(side, &z, &w, 60).map(|r| r.passed()).unwrap_or(false);
    }
    Outcome {
        ok,
        detail: format!(
            "M = 60 at (1/10, 23/10): worst displayed-coefficient gap {:.3e} < bound {:.3e}; all 81 entries within bound",
            to_f64(&worst),
            to_f64(&bound)
        ),
    }
}

fn assemble() -> Outcome {
    let start = Instant::now();
    let recs = suite(&[Check::Assemble], |c| {
        c.m = 60;
        c.n = 200;
        c.tolerance = 1e-8;
    });
    let t = start.elapsed();
    let points: Vec<&Record> = recs.iter().filter(|r| r.params.contains_key("w")).collect();
    let worst = points.iter().filter_map(|r| r.max_abs_error).fold(0.0, f64::max);
    let all = recs.iter().all(Record::passed);
    Outcome {
        ok: points.len() == 3 && all && t < Duration::from_secs(120),
        detail: format!(
            "3 points, worst entrywise error {worst:.3e} (tolerance 1e-8), assembled YBE included, {:.1}s (limit 120s){}",
            t.as_secs_f64(),
            first_failure(&recs)
        ),
    }
}

fn rep() -> Outcome {
    let recs = suite(&[Check::Rep], |_| {});
    let zs: std::collections::BTreeSet<&String> = recs.iter().filter_map(|r| r.params.get("z")).collect();
    let control = recs.iter().find(|r| r.params.get("relation").map(String::as_str) == Some("control"));
    let (p, f, s) = tally(&recs, "rep");
    Outcome {
        ok: f + s == 0 && zs.len() == 3 && control.is_some_and(Record::passed),
        detail: format!("{p} family records over [-4,4] at z in {zs:?}, z' = z+1 control fails{}", first_failure(&recs)),
    }
}

fn gauss() -> Outcome {
    let recs = suite(&[Check::Gauss], |c| c.samples = 10);
    let g: Vec<&Record> = recs.iter().filter(|r| r.check == "gauss").collect();
    let us: std::collections::BTreeSet<(&String, &String)> =
        g.iter().filter_map(|r| Some((r.params.get("z")?, r.params.get("u")?))).collect();
    let ok = recs.iter().all(Record::passed) && us.len() == 20;
    Outcome {
        ok,
        detail: format!(
            "{} identity records at {} (z, u) samples, C22 = C33 projectively, RLL on the literal L{}",
            g.len(),
            us.len(),
            first_failure(&recs)
        ),
    }
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: Vec<Criterion> = vec![
        ("1 YBE", ybe),
        ("2 unitarity", || exact_and_real64(Check::Unitarity, "unitarity-exact", "unitarity-real64")),
        ("3 crossing", || exact_and_real64(Check::Crossing, "crossing-exact", "crossing-real64")),
        ("4 Serre relations", serre),
        ("5 graded limit", graded),
        ("6 pairing", pairing),
        ("7 dual basis", dual_basis),
        ("8 evaluated factors", eval_factors),
        ("9 assembly", assemble),
        ("10 representation relations", rep),
        ("11 Gauss/RTT", gauss),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let o = run();
        println!("{} [{name}] {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.ok);
    }
    println!("acceptance: {} of 11 criteria pass", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
