//! Batch front-end: parse a suite configuration, run the selected checks and
//! emit a flat report.

use crate::currents::linalg::Block;
use crate::currents::serre::{graded_limit_report, serre_family_report};
use crate::currents::{pbw_enumerate_levels, PbwIndex, Side, SerreWindow};
use crate::error::{Error, Result};
use crate::evalrep::{gauss_check, verify_rep_relations, verify_rll, EvalPoint};
use crate::pairing::{hh_series_report, pair_pbw};
use crate::report::{all_pass, Record, Status};
use crate::rmatrix::{
    r_tilde, verify_crossing, verify_crossing_f64, verify_unitarity, verify_unitarity_f64, verify_ybe,
};
use crate::scalars::{int, kappa, rat, to_f64, Rational};
use crate::urmatrix::{
    assemble_points, assembled_ybe_residual, duality_report, evaluate_rh, expand_factor_levels, factor_report,
    CapitalDefinition, FactorSide,
};
use clap::{Parser, ValueEnum};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    Ybe,
    Unitarity,
    Crossing,
    Serre,
    Graded,
    Pairing,
    DualBasis,
    EvalFactors,
    EvalRh,
    Assemble,
    Rep,
    Gauss,
}

impl Check {
    pub const ALL: [Check; 12] = [
        Check::Ybe,
        Check::Unitarity,
        Check::Crossing,
        Check::Serre,
        Check::Graded,
        Check::Pairing,
        Check::DualBasis,
        Check::EvalFactors,
        Check::EvalRh,
        Check::Assemble,
        Check::Rep,
        Check::Gauss,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Ybe => "ybe",
            Check::Unitarity => "unitarity",
            Check::Crossing => "crossing",
            Check::Serre => "serre",
            Check::Graded => "graded",
            Check::Pairing => "pairing",
            Check::DualBasis => "dual-basis",
            Check::EvalFactors => "eval-factors",
            Check::EvalRh => "eval-rh",
            Check::Assemble => "assemble",
            Check::Rep => "rep",
            Check::Gauss => "gauss",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .iter()
            .copied()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| Error::Config(format!("unknown check \"{s}\"")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

/// Command-line flags.
#[derive(Parser, Debug, Clone)]
#[command(name = "superyangian", about = "Exact verification suite for the double super Yangian DY(osp(1|2))")]
pub struct Args {
    /// Checks to run (repeatable or comma separated); all when omitted.
    #[arg(long = "check", value_delimiter = ',')]
    pub checks: Vec<String>,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Number of rational samples per sampled check.
    #[arg(long, default_value_t = 10)]
    pub samples: usize,
    /// PBW word-length truncation for pairing and dual-basis.
    #[arg(short = 'D', default_value_t = 6)]
    pub d: usize,
    /// Mode cutoff of the evaluated factors.
    #[arg(short = 'M', default_value_t = 60)]
    pub m: usize,
    /// Product cutoff of the Cartan factor.
    #[arg(short = 'N', default_value_t = 200)]
    pub n: usize,
    /// Absolute tolerance of the Real64 checks.
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
    /// Write intermediate reports (JSON) to this path.
    #[arg(long)]
    pub dump: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Cubic relations are checked at modes `0..window_mode`.
    #[arg(long, default_value_t = 3)]
    pub window_mode: i64,
    /// Optional bound on word degree inside the membership window.
    #[arg(long)]
    pub window_degree: Option<i64>,
    /// Largest mode of the graded-limit check.
    #[arg(long, default_value_t = 4)]
    pub graded_max_mode: i64,
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub checks: Vec<Check>,
    pub seed: u64,
    pub samples: usize,
    pub d: usize,
    pub m: usize,
    pub n: usize,
    pub tolerance: f64,
    pub output: OutputFormat,
    pub dump: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub jobs: usize,
    pub window_mode: i64,
    pub window_degree: Option<i64>,
    pub graded_max_mode: i64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            checks: Check::ALL.to_vec(),
            seed: 7,
            samples: 10,
            d: 6,
            m: 60,
            n: 200,
            tolerance: 1e-8,
            output: OutputFormat::Json,
            dump: None,
            out: None,
            jobs: 0,
            window_mode: 3,
            window_degree: None,
            graded_max_mode: 4,
        }
    }
}

impl SuiteConfig {
    pub fn from_args(args: Args) -> Result<Self> {
        let mut checks = Vec::new();
        for token in args.checks.iter().filter(|t| !t.trim().is_empty()) {
            let c: Check = token.parse()?;
            if !checks.contains(&c) {
                checks.push(c);
            }
        }
        if checks.is_empty() {
            checks = Check::ALL.to_vec();
        }
        checks.sort();
        let cfg = SuiteConfig {
            checks,
            seed: args.seed,
            samples: args.samples,
            d: args.d,
            m: args.m,
            n: args.n,
            tolerance: args.tolerance,
            output: args.output,
            dump: args.dump,
            out: args.out,
            jobs: args.jobs,
            window_mode: args.window_mode,
            window_degree: args.window_degree,
            graded_max_mode: args.graded_max_mode,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let has = |c| self.checks.contains(&c);
        if self.samples == 0 {
            return Err(Error::Config("--samples must be at least 1".into()));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::Config(format!("--tolerance must be positive, got {}", self.tolerance)));
        }
        if self.d == 0 && (has(Check::DualBasis) || has(Check::Pairing)) {
            return Err(Error::Config("D = 0 leaves nothing to check for dual-basis/pairing".into()));
        }
        if self.m == 0 && (has(Check::EvalFactors) || has(Check::Assemble)) {
            return Err(Error::Config("M = 0 truncates the factors to the identity".into()));
        }
        if self.n == 0 && (has(Check::EvalRh) || has(Check::Assemble)) {
            return Err(Error::Config("N = 0 leaves the Cartan product to its asymptotics".into()));
        }
        if self.window_mode < 1 && has(Check::Serre) {
            return Err(Error::Config("--window-mode must be at least 1".into()));
        }
        if self.window_degree.is_some_and(|d| d < 3) {
            return Err(Error::Config("--window-degree below 3 excludes every cubic".into()));
        }
        Ok(())
    }
}

/// Record with the schema tag, as emitted in JSON.
#[derive(Serialize)]
struct Tagged<'a> {
    schema_version: u32,
    #[serde(flatten)]
    record: &'a Record,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub records: Vec<Record>,
    pub passed: bool,
    /// Intermediate reports, written by `--dump`.
    pub artifacts: serde_json::Map<String, serde_json::Value>,
}

impl Report {
    fn verdict(&self) -> Record {
        let failed = self.records.iter().filter(|r| r.status == Status::Fail).count();
        let skipped = self.records.iter().filter(|r| r.status == Status::Skip).count();
        Record::new("suite")
            .param("records", self.records.len())
            .param("failed", failed)
            .param("skipped", skipped)
            .pass_if(self.passed)
    }

    pub fn to_json(&self) -> String {
        let verdict = self.verdict();
        let rows: Vec<Tagged> = self
            .records
            .iter()
            .chain(std::iter::once(&verdict))
            .map(|record| Tagged { schema_version: SCHEMA_VERSION, record })
            .collect();
        serde_json::to_string_pretty(&rows).expect("records serialize") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in self.records.iter().chain(std::iter::once(&self.verdict())) {
            let tag = match r.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            s += &format!("{tag} {} {}", r.check, params.join(" "));
            if let Some(res) = &r.residual {
                s += &format!(" residual={res}");
            }
            if let Some(e) = r.max_abs_error {
                s += &format!(" max_abs_error={e:.3e}");
            }
            if let Some(n) = &r.note {
                s += &format!(" ({n})");
            }
            s.push('\n');
        }
        s
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Text => self.to_text(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

/// Coprime pairs `p/q` with `1 ≤ q ≤ 12`, `0 < |p| ≤ 3q`, in a fixed order.
fn rational_pool() -> Vec<Rational> {
    let mut v = Vec::new();
    for q in 1..=12i64 {
        for a in 1..=3 * q {
            if a.gcd(&q) == 1 {
                v.push(rat(a, q));
                v.push(rat(-a, q));
            }
        }
    }
    v
}

/// Deterministic sample stream: the pool shuffled by `seed` and filtered by
/// `keep`. `stream` separates independent draws under one seed.
pub fn rational_samples(seed: u64, stream: u64, count: usize, keep: impl Fn(&Rational) -> bool) -> Vec<Rational> {
    let mut pool = rational_pool();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    pool.shuffle(&mut rng);
    pool.into_iter().filter(|q| keep(q)).take(count).collect()
}

/// Pairs drawn from two streams, kept when `keep` accepts both entries together.
pub fn rational_pairs(
    seed: u64,
    stream: u64,
    count: usize,
    keep: impl Fn(&Rational, &Rational) -> bool,
) -> Vec<(Rational, Rational)> {
    let a = rational_samples(seed, 2 * stream, usize::MAX, |_| true);
    let b = rational_samples(seed, 2 * stream + 1, usize::MAX, |_| true);
    let mut out = Vec::new();
    for (i, u) in a.iter().enumerate() {
        // walk b with an offset so each u meets several partners
        for j in 0..b.len() {
            let v = &b[(i + j) % b.len()];
            if keep(u, v) {
                out.push((u.clone(), v.clone()));
                break;
            }
        }
        if out.len() == count {
            break;
        }
    }
    out
}

fn regular(u: &Rational) -> bool {
    r_tilde(u).is_ok()
}

/// `(z, w)` points used by the evaluated-factor and assembly checks.
pub fn assembly_points() -> Vec<(Rational, Rational)> {
    vec![(rat(1, 10), rat(23, 10)), (rat(1, 5), rat(31, 10)), (rat(-3, 10), int(2))]
}

fn stamp(mut recs: Vec<Record>, start: Instant) -> Vec<Record> {
    let ms = start.elapsed().as_millis() as u64;
    for r in &mut recs {
        r.elapsed_ms = ms;
    }
    recs
}

type Artifacts = Vec<(String, serde_json::Value)>;

fn run_ybe(cfg: &SuiteConfig) -> Vec<Record> {
    let pairs = rational_pairs(cfg.seed, 0, cfg.samples, |u, v| regular(u) && regular(v) && regular(&(u + v)));
    pairs.par_chunks(1).flat_map(verify_ybe).collect()
}

fn real64_count(cfg: &SuiteConfig) -> usize {
    cfg.samples.min(5)
}

/// `ρ` is finite at `u`, so the normalised matrix exists in `f64`.
fn rho_regular(u: &Rational) -> bool {
    crate::scalars::rho(to_f64(u)).is_ok_and(f64::is_finite)
}

fn run_unitarity(cfg: &SuiteConfig) -> Vec<Record> {
    let us = rational_samples(cfg.seed, 1, cfg.samples, |u| regular(u) && regular(&-u));
    let mut out: Vec<Record> = us
        .iter()
        .map(|u| verify_unitarity(u).unwrap_or_else(|e| Record::new("unitarity-exact").param("u", u).skip(e.to_string())))
        .collect();
    for u in us.iter().filter(|u| rho_regular(u) && rho_regular(&-*u)).take(real64_count(cfg)) {
        out.push(
            verify_unitarity_f64(u, cfg.tolerance)
                .unwrap_or_else(|e| Record::new("unitarity-real64").param("u", u).skip(e.to_string())),
        );
    }
    out
}

fn run_crossing(cfg: &SuiteConfig) -> Vec<Record> {
    let us = rational_samples(cfg.seed, 2, cfg.samples, |u| regular(u) && regular(&(-u - kappa())));
    let mut out: Vec<Record> = us
        .iter()
        .map(|u| verify_crossing(u).unwrap_or_else(|e| Record::new("crossing-exact").param("u", u).skip(e.to_string())))
        .collect();
    for u in us.iter().filter(|u| rho_regular(u) && rho_regular(&(-*u - kappa()))).take(real64_count(cfg)) {
        out.push(
            verify_crossing_f64(u, cfg.tolerance)
                .unwrap_or_else(|e| Record::new("crossing-real64").param("u", u).skip(e.to_string())),
        );
    }
    out
}

fn run_serre(cfg: &SuiteConfig) -> Vec<Record> {
    let jobs: Vec<(Block, i64)> =
        [Block::E, Block::F].iter().flat_map(|&b| (0..cfg.window_mode).map(move |k| (b, k))).collect();
    jobs.par_iter()
        .flat_map_iter(|&(block, k)| {
            let mut window = SerreWindow::for_k(k);
            window.max_degree = cfg.window_degree;
            let base = |j: u8| {
                Record::new("serre")
                    .param("family", format!("{block:?}").to_lowercase())
                    .param("k", k)
                    .param("relation", j)
                    .param("window", format!("[{},{}]", window.lo, window.hi))
            };
            match serre_family_report(block, k, &window) {
                Ok(rows) => rows
                    .into_iter()
                    .map(|(j, holds, control_rejected)| {
                        base(j)
                            .param("control", if control_rejected { "rejected" } else { "accepted" })
                            .pass_if(holds && control_rejected)
                    })
                    .collect::<Vec<_>>(),
                Err(e) => (1..=3).map(|j| base(j).pass_if(false).note(e.to_string())).collect(),
            }
        })
        .collect()
}

fn run_graded(cfg: &SuiteConfig) -> Vec<Record> {
    let rec = Record::new("graded").param("max_mode", cfg.graded_max_mode);
    vec![match graded_limit_report(cfg.graded_max_mode) {
        Ok(rows) => {
            let bad: Vec<&String> = rows.iter().filter(|(_, ok)| !ok).map(|(n, _)| n).collect();
            let rec = rec.param("relations", rows.len()).pass_if(bad.is_empty());
            match bad.first() {
                Some(n) => rec.note(format!("{} relations fail, first {n}", bad.len())),
                None => rec,
            }
        }
        Err(e) => rec.pass_if(false).note(e.to_string()),
    }]
}

fn pbw(side: Side, counts: &[(u32, u32)]) -> PbwIndex {
    PbwIndex::from_counts(side, counts)
}

fn value_record(name: &str, got: Result<Rational>, want: Rational) -> Record {
    let rec = Record::new("pairing").param("value", name);
    match got {
        Ok(v) => rec.pass_if(v == want).residual(v - want),
        Err(e) => rec.pass_if(false).note(e.to_string()),
    }
}

/// Closed-form pairing of every PBW pair of length `≤ D` against the
/// coefficients of the expanded factor: on the diagonal `⟨b₋,b₊⟩ = 1/c(b₊⊗b₋)`.
fn pbw_table(side: FactorSide, d: usize) -> Result<Record> {
    let (plus, minus) = match side {
        FactorSide::E => (Side::EPlus, Side::FMinus),
        FactorSide::F => (Side::FPlus, Side::EMinus),
    };
    let max_level = d as i64 - 1;
    let t = expand_factor_levels(side, d, max_level, CapitalDefinition::Standard)?;
    let bp = pbw_enumerate_levels(plus, d, max_level);
    let bm = pbw_enumerate_levels(minus, d, max_level);
    let mut checked = 0usize;
    let mut bad: Option<String> = None;
    for m in &bm {
        for p in bp.iter().filter(|p| p.length() == m.length()) {
            let v = pair_pbw(m, p)?;
            checked += 1;
            let ok = if p.levels == m.levels {
                let c = t.coeff(&p.word().0, &m.word().0);
                !c.is_zero() && v == c.recip()
            } else {
                v.is_zero()
            };
            if !ok && bad.is_none() {
                bad = Some(format!("<{m}, {p}> = {v}"));
            }
        }
    }
    let rec = Record::new("pairing")
        .param("value", "pbw-table")
        .param("side", format!("{side:?}"))
        .param("D", d)
        .param("pairs", checked)
        .pass_if(bad.is_none());
    Ok(match bad {
        Some(b) => rec.note(b),
        None => rec,
    })
}

fn run_pairing(cfg: &SuiteConfig) -> Vec<Record> {
    let fm = |c: &[(u32, u32)]| pbw(Side::FMinus, c);
    let ep = |c: &[(u32, u32)]| pbw(Side::EPlus, c);
    let mut out = vec![
        value_record("<F_-1, e_0^2>", pair_pbw(&fm(&[(0, 1)]), &ep(&[(2, 0)])), int(1)),
        value_record("<f_-1^2, E_1>", pair_pbw(&fm(&[(2, 0)]), &ep(&[(0, 1)])), int(1)),
    ];
    for k in 0..3usize {
        for b in 1..=3u32 {
            let mut cf = vec![(0, 0); k + 1];
            cf[k] = (0, b);
            let mut ce = vec![(0, 0); k + 1];
            ce[k] = (2 * b, 0);
            let fact = (1..=b as i64).fold(Rational::one(), |a, i| a * int(i));
            let label = format!("<F_{}^{b}, e_{k}^{}>", -2 * k as i64 - 1, 2 * b);
            out.push(value_record(&label, pair_pbw(&fm(&cf), &ep(&ce)), fact));
        }
    }
    let tables: Vec<Record> = [FactorSide::E, FactorSide::F]
        .par_iter()
        .map(|&s| pbw_table(s, cfg.d).unwrap_or_else(|e| Record::new("pairing").param("value", "pbw-table").pass_if(false).note(e.to_string())))
        .collect();
    out.extend(tables);
    let order = 2 * cfg.d as i64;
    let hh = hh_series_report(order);
    let rec = Record::new("pairing")
        .param("value", "h-h series")
        .param("order", order)
        .param("region", hh.region)
        .pass_if(hh.passed());
    out.push(match hh.first_failure {
        Some(f) => rec.note(f),
        None => rec.note(format!("series {}, recursion {}, closed form {}", hh.series_ok, hh.recursion_ok, hh.closed_form_ok)),
    });
    out
}

fn run_dual_basis(cfg: &SuiteConfig, art: &mut Artifacts) -> Vec<Record> {
    let cases = [
        (FactorSide::E, CapitalDefinition::Standard),
        (FactorSide::F, CapitalDefinition::Standard),
        (FactorSide::E, CapitalDefinition::DropQuarter),
    ];
    let reports: Vec<_> = cases.par_iter().map(|&(s, def)| (s, def, duality_report(s, cfg.d, def))).collect();
    let mut dumps = Vec::new();
    let recs = reports
        .into_iter()
        .map(|(side, def, r)| {
            let control = def == CapitalDefinition::DropQuarter;
            let rec = Record::new("dual-basis")
                .param("side", format!("{side:?}"))
                .param("D", cfg.d)
                .param("definition", format!("{def:?}"));
            match r {
                Ok(rep) => {
                    dumps.push(serde_json::to_value(&rep).expect("serialize"));
                    let rec = rec.param("basis", rep.basis_size).param("defects", rep.defects);
                    if control {
                        rec.pass_if(!rep.passed()).note("control: E without the quarter term must break duality")
                    } else {
                        let ok = rep.passed();
                        match rep.first_failure {
                            Some(f) if !ok => rec.pass_if(false).note(f),
                            _ => rec.pass_if(ok),
                        }
                    }
                }
                Err(e) => rec.pass_if(false).note(e.to_string()),
            }
        })
        .collect();
    art.push(("dual-basis".into(), serde_json::Value::Array(dumps)));
    recs
}

fn run_eval_factors(cfg: &SuiteConfig, art: &mut Artifacts) -> Vec<Record> {
    let jobs: Vec<_> = assembly_points()
        .into_iter()
        .flat_map(|p| [FactorSide::E, FactorSide::F].map(|s| (s, p.clone())))
        .collect();
    let reports: Vec<_> = jobs.par_iter().map(|(s, (z, w))| (s, z, w, factor_report(*s, z, w, cfg.m))).collect();
    let mut dumps = Vec::new();
    let recs = reports
        .into_iter()
        .map(|(s, z, w, r)| {
            let rec = Record::new("eval-factors").param("side", format!("{s:?}")).param("z", z).param("w", w).param("M", cfg.m);
            match r {
                Ok(rep) => {
                    dumps.push(serde_json::to_value(&rep).expect("serialize"));
                    rec.pass_if(rep.passed()).note(format!(
                        "closed-form gap {}, M vs 2M gap {}, bound {}",
                        rep.closed_form_gap, rep.doubling_gap, rep.bound
                    ))
                }
                Err(e) => rec.pass_if(false).note(e.to_string()),
            }
        })
        .collect();
    art.push(("eval-factors".into(), serde_json::Value::Array(dumps)));
    recs
}

fn run_eval_rh(cfg: &SuiteConfig) -> Vec<Record> {
    assembly_points()
        .par_iter()
        .map(|(z, w)| {
            let rec = Record::new("eval-rh").param("z", z).param("w", w).param("N", cfg.n);
            let run = || -> Result<(f64, f64, bool)> {
                let a = evaluate_rh(z, w, cfg.n)?;
                let b = evaluate_rh(z, w, 2 * cfg.n)?;
                let gap = a.matrix.sub(&b.matrix).max_abs();
                let diag = (0..9).all(|r| (0..9).all(|c| r == c || *a.matrix.get(r, c) == 0.0));
                Ok((gap, a.tail, diag))
            };
            match run() {
                Ok((gap, tail, diag)) => rec
                    .pass_if(diag && gap < cfg.tolerance)
                    .error(gap)
                    .note(format!("N vs 2N gap; diagonal {diag}; asymptotic tail |t-1| = {tail:.3e}")),
                Err(e) => rec.pass_if(false).note(e.to_string()),
            }
        })
        .collect()
}

fn run_assemble(cfg: &SuiteConfig, art: &mut Artifacts) -> Vec<Record> {
    let points = assembly_points();
    let reports = assemble_points(&points, cfg.m, cfg.n, cfg.tolerance);
    let mut dumps = Vec::new();
    let mut recs: Vec<Record> = points
        .iter()
        .zip(reports)
        .map(|((z, w), r)| {
            let rec = Record::new("assemble").param("z", z).param("w", w).param("M", cfg.m).param("N", cfg.n);
            match r {
                Ok(rep) => {
                    dumps.push(serde_json::to_value(&rep).expect("serialize"));
                    rec.pass_if(rep.passed()).error(rep.max_abs_error).note(format!(
                        "convention {}; exact diagonal {}; tolerance {:e}",
                        rep.selected, rep.exact_diagonal, rep.tolerance
                    ))
                }
                Err(e) => rec.pass_if(false).note(e.to_string()),
            }
        })
        .collect();
    let zs = [rat(1, 10), rat(23, 10), rat(67, 10)];
    let rec = Record::new("assemble")
        .param("ybe", format!("{}, {}, {}", zs[0], zs[1], zs[2]))
        .param("M", cfg.m)
        .param("N", cfg.n);
    recs.push(match assembled_ybe_residual([&zs[0], &zs[1], &zs[2]], cfg.m, cfg.n) {
        Ok(e) => rec.pass_if(e < cfg.tolerance).error(e).note("relative YBE residual of the assembled matrices"),
        Err(e) => rec.pass_if(false).note(e.to_string()),
    });
    art.push(("assemble".into(), serde_json::Value::Array(dumps)));
    recs
}

/// `z` with both `z` and `z + 1/2` nonzero, so every negative mode is defined.
fn rep_points(cfg: &SuiteConfig, count: usize) -> Vec<Rational> {
    rational_samples(cfg.seed, 3, count, |z| !z.is_zero() && !(z + rat(1, 2)).is_zero())
}

fn run_rep(cfg: &SuiteConfig) -> Vec<Record> {
    let zs = rep_points(cfg, 3);
    let mut out: Vec<Record> = zs
        .par_iter()
        .flat_map_iter(|z| {
            verify_rep_relations(&EvalPoint::new(z.clone()), (-4, 4))
                .unwrap_or_else(|e| vec![Record::new("rep").param("z", z).pass_if(false).note(e.to_string())])
        })
        .collect();
    let z = &zs[0];
    let control = EvalPoint::with_shift(z.clone(), int(1));
    let rec = Record::new("rep").param("z", z).param("z'", &control.zp).param("relation", "control");
    out.push(match verify_rep_relations(&control, (-4, 4)) {
        Ok(rs) => {
            let broken: Vec<String> = rs.iter().filter(|r| !r.passed()).filter_map(|r| r.params.get("relation").cloned()).collect();
            rec.pass_if(!broken.is_empty()).note(format!("z' = z+1 must break a relation; broken: {}", broken.join(" ")))
        }
        Err(e) => rec.pass_if(false).note(e.to_string()),
    });
    out
}

fn run_gauss(cfg: &SuiteConfig) -> Vec<Record> {
    let zs = rep_points(cfg, 2);
    let us = rational_samples(cfg.seed, 4, cfg.samples, |_| true);
    let pairs = rational_pairs(cfg.seed, 5, cfg.samples.min(5), |u, v| regular(&(u - v)));
    zs.iter()
        .flat_map(|z| {
            let p = EvalPoint::new(z.clone());
            let mut recs = gauss_check(&p, &us);
            // RLL on L(u) = R̃(u − z), with the RTT pole structure of the literal L
            let shifted: Vec<_> = pairs.iter().map(|(u, v)| (u + z, v + z)).collect();
            recs.extend(verify_rll(&p, &shifted));
            recs
        })
        .collect()
}

fn run_one(check: Check, cfg: &SuiteConfig) -> (Vec<Record>, Artifacts) {
    let start = Instant::now();
    let mut art = Vec::new();
    let recs = match check {
        Check::Ybe => run_ybe(cfg),
        Check::Unitarity => run_unitarity(cfg),
        Check::Crossing => run_crossing(cfg),
        Check::Serre => run_serre(cfg),
        Check::Graded => run_graded(cfg),
        Check::Pairing => run_pairing(cfg),
        Check::DualBasis => run_dual_basis(cfg, &mut art),
        Check::EvalFactors => run_eval_factors(cfg, &mut art),
        Check::EvalRh => run_eval_rh(cfg),
        Check::Assemble => run_assemble(cfg, &mut art),
        Check::Rep => run_rep(cfg),
        Check::Gauss => run_gauss(cfg),
    };
    (stamp(recs, start), art)
}

/// Runs the selected checks concurrently (up to `jobs` threads) and collects
/// the records in check order.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Report> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let results: Vec<(Vec<Record>, Artifacts)> =
        pool.install(|| cfg.checks.par_iter().map(|&c| run_one(c, cfg)).collect());
    let mut records = Vec::new();
    let mut artifacts = serde_json::Map::new();
    for (recs, art) in results {
        records.extend(recs);
        artifacts.extend(art);
    }
    let passed = all_pass(&records);
    Ok(Report { records, passed, artifacts })
}

/// Full binary behaviour: returns the process exit code.
pub fn main_with(args: Args) -> i32 {
    let cfg = match SuiteConfig::from_args(args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("superyangian: {e}");
            return 2;
        }
    };
    let report = match run_suite(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("superyangian: {e}");
            return 2;
        }
    };
    let text = report.render(cfg.output);
    let write = |path: &PathBuf, body: &str| {
        std::fs::write(path, body).map_err(|e| eprintln!("superyangian: cannot write {}: {e}", path.display()))
    };
    match &cfg.out {
        Some(path) => {
            if write(path, &text).is_err() {
                return 2;
            }
        }
        None => print!("{text}"),
    }
    if let Some(path) = &cfg.dump {
        let body = serde_json::to_string_pretty(&report.artifacts).expect("artifacts serialize");
        if write(path, &body).is_err() {
            return 2;
        }
    }
    report.exit_code()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(checks: &[Check]) -> SuiteConfig {
        SuiteConfig { checks: checks.to_vec(), ..SuiteConfig::default() }
    }

    fn parse(argv: &[&str]) -> Result<SuiteConfig> {
        let mut full = vec!["superyangian"];
        full.extend_from_slice(argv);
        SuiteConfig::from_args(Args::parse_from(full))
    }

    #[test]
    fn unknown_check_names_token() {
        let err = parse(&["--check", "bogus"]).unwrap_err();
        assert!(err.to_string().contains("bogus"));
        assert_eq!(main_with(Args::parse_from(["superyangian", "--check", "ybe,bogus"])), 2);
    }

    #[test]
    fn incompatible_bounds() {
        assert!(parse(&["--check", "dual-basis", "-D", "0"]).is_err());
        assert!(parse(&["--check", "ybe", "-D", "0"]).is_ok());
        assert!(parse(&["--samples", "0"]).is_err());
        assert!(parse(&["--tolerance", "0"]).is_err());
    }

    #[test]
    fn checks_parse_in_both_forms() {
        let c = parse(&["--check", "rep,ybe", "--check", "ybe"]).unwrap();
        assert_eq!(c.checks, vec![Check::Ybe, Check::Rep]);
        assert_eq!(parse(&[]).unwrap().checks.len(), 12);
    }

    #[test]
    fn samples_are_deterministic_and_distinct() {
        let a = rational_samples(7, 0, 25, |_| true);
        assert_eq!(a, rational_samples(7, 0, 25, |_| true));
        assert_ne!(a, rational_samples(8, 0, 25, |_| true));
        let mut sorted = a.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 25);
        let p = rational_pairs(7, 0, 25, |u, v| regular(u) && regular(v) && regular(&(u + v)));
        assert_eq!(p.len(), 25);
    }

    #[test]
    fn ybe_report_is_exact_and_reproducible() {
        let mut c = cfg(&[Check::Ybe]);
        c.samples = 25;
        let a = run_suite(&c).unwrap();
        assert!(a.passed);
        assert_eq!(a.records.len(), 25);
        assert!(a.records.iter().all(|r| r.residual.as_deref() == Some("0")));
        let strip = |r: &Report| {
            let mut r = r.clone();
            r.records.iter_mut().for_each(|x| x.elapsed_ms = 0);
            r.to_json()
        };
        assert_eq!(strip(&a), strip(&run_suite(&c).unwrap()));
        assert_eq!(a.exit_code(), 0);
    }

    #[test]
    fn json_is_flat_and_versioned() {
        let r = run_suite(&cfg(&[Check::Unitarity])).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        let rows = v.as_array().unwrap();
        assert!(rows.iter().all(|x| x["schema_version"] == 1));
        assert_eq!(rows.last().unwrap()["check"], "suite");
    }

    #[test]
    fn failing_suite_exits_one() {
        // the normalised crossing check fails in Real64
        let r = run_suite(&cfg(&[Check::Crossing])).unwrap();
        assert!(!r.passed);
        assert_eq!(r.exit_code(), 1);
        assert!(r.records.iter().filter(|x| x.check == "crossing-exact").all(|x| x.passed()));
    }
}
