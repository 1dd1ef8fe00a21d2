#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use edgejump::asympt::{self, ReportRow, Sweep, Verdict};
use edgejump::fredholm::{airy_fredholm_det, finite_n_det, NystromConfig};
use edgejump::numerics::PrecisionCtx;
use edgejump::painleve::{as_asymptote_minus, solve_as};
use edgejump::rmt::{gap_probability_mc, plancherel_edge_cdf, thinning_experiment};
use edgejump::specfun::airy;
use edgejump::weightlab::{build_op_system, edge_lambda0, gaussian_hankel, kappa_of_beta, beta_of_kappa, WeightParams};

#[derive(Parser, Debug)]
#[command(name = "edgejump", version, about = "Finite-n and asymptotic checks for Gaussian weights with a jump")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Hankel determinants, norms and recurrence data against the pure Gaussian.
    Hankel,
    /// The Ablowitz–Segur solution u(t; κ) and −F(t) on a grid.
    Painleve,
    /// Nyström values of det(1 − κ²K_Ai) on a t-grid.
    Fredholm,
    /// Run one verification and report PASS/FAIL.
    Verify {
        #[arg(value_enum)]
        check: Check,
    },
    /// Monte Carlo experiments.
    Mc {
        #[arg(value_enum)]
        kind: McKind,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum Check {
    #[value(name = "thm1.2")]
    Thm12,
    #[value(name = "thm1.4")]
    Thm14,
    #[value(name = "thm1.5")]
    Thm15,
    Noncrit,
    #[value(name = "conj1.3")]
    Conj13,
    TwIdentity,
    FiniteNIdentity,
    DiffIdentity,
    QnIdentity,
    #[value(name = "thm1.6")]
    Thm16,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum McKind {
    Gue,
    Plancherel,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    #[default]
    Csv,
    Json,
}

/// Run parameters. Every field can also come from the `--config` JSON file;
/// flags win.
#[derive(Args, Debug, Default, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct Opts {
    #[arg(long, global = true, allow_hyphen_values = true)]
    beta: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    beta_im: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    kappa: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    kappa_im: Option<f64>,
    /// Comma-separated, strictly increasing.
    #[arg(long, global = true, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    t: Option<Vec<f64>>,
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    lambda0: Option<Vec<f64>>,
    #[arg(long, global = true)]
    bits: Option<u32>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    t_min: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    t_max: Option<f64>,
    #[arg(long, global = true)]
    step: Option<f64>,
    /// Quadrature nodes (Nyström), grid points (painleve) or RSK rows (plancherel).
    #[arg(long, global = true)]
    nodes: Option<usize>,
    #[arg(long, global = true)]
    trials: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Deletion probability for thinning experiments.
    #[arg(long, global = true)]
    s: Option<f64>,
    /// Step of the central difference in diff-identity.
    #[arg(long, global = true)]
    delta: Option<f64>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Plot-data CSV (painleve: t, u, v, −F).
    #[arg(long, global = true)]
    series: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    #[serde(skip)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    no_timestamp: bool,
}

macro_rules! merge {
    ($a:ident, $b:ident; $($f:ident),*) => { $( if $a.$f.is_none() { $a.$f = $b.$f.clone(); } )* };
}

impl Opts {
    fn merged(mut self) -> Result<Self> {
        let Some(path) = self.config.clone() else { return Ok(self) };
        let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        let file: Opts = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        merge!(self, file; beta, beta_im, kappa, kappa_im, n, t, lambda0, bits, tol, t_min, t_max, step,
            nodes, trials, seed, s, delta, out, series, format);
        self.no_timestamp |= file.no_timestamp;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if let Some(ns) = &self.n {
            if ns.is_empty() || ns.windows(2).any(|w| w[0] >= w[1]) {
                bail!("--n must be a strictly increasing list, got {ns:?}");
            }
        }
        if let Some(b) = self.bits {
            PrecisionCtx::new(b).map_err(|_| anyhow::anyhow!("--bits {b} is too low"))?;
        }
        if let Some(s) = self.s {
            if !(0.0..=1.0).contains(&s) {
                bail!("--s must lie in [0, 1]");
            }
        }
        if self.tol.is_some_and(|t| !(t > 0.0)) || self.step.is_some_and(|s| !(s > 0.0)) {
            bail!("--tol and --step must be positive");
        }
        Ok(())
    }

    /// (β, κ) from whichever of the two was given, or the default β.
    fn weight(&self, default_beta: Complex64) -> Result<(Complex64, Complex64)> {
        let has_beta = self.beta.is_some() || self.beta_im.is_some();
        let has_kappa = self.kappa.is_some() || self.kappa_im.is_some();
        let (beta, kappa) = match (has_beta, has_kappa) {
            (true, true) => bail!("give either β or κ, not both"),
            (false, true) => {
                let k = Complex64::new(self.kappa.unwrap_or(0.0), self.kappa_im.unwrap_or(0.0));
                (beta_of_kappa(k), k)
            }
            (true, false) => {
                let b = Complex64::new(self.beta.unwrap_or(0.0), self.beta_im.unwrap_or(0.0));
                (b, kappa_of_beta(b))
            }
            (false, false) => (default_beta, kappa_of_beta(default_beta)),
        };
        if !(beta.re.abs() <= 0.5) || !beta.im.is_finite() {
            bail!("β = {beta} is outside the strip |Re β| ≤ 1/2");
        }
        Ok((beta, kappa))
    }

    fn ns(&self, default: &[usize]) -> Vec<usize> {
        self.n.clone().unwrap_or_else(|| default.to_vec())
    }

    fn ts(&self, default: &[f64]) -> Vec<f64> {
        self.t.clone().unwrap_or_else(|| default.to_vec())
    }

    fn lambda0s(&self, default: &[f64]) -> Vec<f64> {
        self.lambda0.clone().unwrap_or_else(|| default.to_vec())
    }

    fn ctx(&self, n: usize) -> PrecisionCtx {
        self.bits.map(|b| PrecisionCtx::new(b).expect("validated")).unwrap_or_else(|| PrecisionCtx::for_hankel(n))
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn sweep(criterion: &str, rows: Vec<ReportRow>, verdict: Option<Verdict>, summary: String) -> Run {
    Run { criterion: criterion.into(), rows, verdict, summary }
}

/// A finished subcommand: rows plus an optional overall verdict.
struct Run {
    criterion: String,
    rows: Vec<ReportRow>,
    verdict: Option<Verdict>,
    summary: String,
}

impl From<Sweep> for Run {
    fn from(s: Sweep) -> Self {
        Run { criterion: s.criterion, rows: s.rows, verdict: Some(s.verdict), summary: s.summary }
    }
}

#[derive(Serialize)]
struct Summary<'a> {
    criterion: &'a str,
    verdict: Option<Verdict>,
    summary: &'a str,
    rows: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    generated: Option<u64>,
}

fn hankel(o: &Opts) -> Result<Run> {
    let (beta, kappa) = o.weight(c(0.0, 0.0))?;
    let n = *o.ns(&[10]).last().unwrap();
    let ctx = o.ctx(n);
    let (params, l0) = match (&o.t, &o.lambda0) {
        (Some(_), Some(_)) => bail!("give either --t or --lambda0, not both"),
        (Some(t), None) => (WeightParams::edge(beta, n, t[0])?, edge_lambda0(n, t[0], &ctx).to_f64()),
        (None, l) => {
            let l0 = l.as_ref().map_or(0.0, |l| l[0]);
            (WeightParams::direct(beta, l0)?, l0)
        }
    };
    let sys = build_op_system(&params, n, &ctx)?;
    let mut rows = Vec::new();
    let mut h_gauss = PI.sqrt();
    for k in 0..=n {
        if k > 0 {
            h_gauss *= k as f64 / 2.0;
        }
        let at = |r: ReportRow| r.at(Some(k), None, Some(l0));
        let gauss_h = gaussian_hankel(k, &ctx).to_f64();
        rows.push(at(ReportRow::new("H", beta, kappa, sys.hankel[k].to_c64(), c(gauss_h, 0.0))));
        rows.push(at(ReportRow::new("log H", beta, kappa, sys.log_hankel(k).to_c64(), c(asympt::log_gaussian_hankel(k), 0.0))));
        rows.push(at(ReportRow::new("h", beta, kappa, sys.norms[k].to_c64(), c(h_gauss, 0.0))));
        rows.push(at(ReportRow::new("R", beta, kappa, sys.r[k].to_c64(), c(k as f64 / 2.0, 0.0))));
        rows.push(at(ReportRow::new("Q", beta, kappa, sys.q[k].to_c64(), c(0.0, 0.0))));
    }
    Ok(sweep("hankel", rows, None, format!("n = {n}, λ0 = {l0}, {} bits", ctx.bits())))
}

fn painleve(o: &Opts) -> Result<Run> {
    let (beta, kappa) = o.weight(c(0.0, 0.4))?;
    let tol = o.tol.unwrap_or(1e-12);
    let t_min = o.t_min.unwrap_or(-10.0);
    let t_max = o.t_max.unwrap_or(6.0);
    if !(t_min < t_max) {
        bail!("--t-min must be below --t-max");
    }
    let sol = solve_as(kappa, t_min, tol)?;
    let pts = o.nodes.unwrap_or(161).max(2);
    let mut rows = Vec::new();
    let mut series = Vec::new();
    for i in 0..pts {
        let t = t_min + (t_max - t_min) * i as f64 / (pts - 1) as f64;
        let st = sol.state(t)?;
        let (ai, aip) = airy(t);
        let u_asym = match as_asymptote_minus(t, beta) {
            Ok(a) if t < -1.0 => a,
            _ => kappa * ai,
        };
        let log_det = asympt::log_tw(&sol, t)?;
        let log_asym = match asympt::conj13_expansion(t, beta) {
            Ok(a) if t < -1.0 && beta.re.abs() < 0.25 => a,
            _ => -kappa * kappa * (2.0 * t * t * ai * ai - ai * aip - 2.0 * t * aip * aip) / 3.0,
        };
        rows.push(ReportRow::new("u", beta, kappa, st.u, u_asym).at(None, Some(t), None));
        rows.push(ReportRow::new("log det", beta, kappa, log_det, log_asym).at(None, Some(t), None));
        series.push([t, st.u.re, st.u.im, st.v.re, st.v.im, log_det.re, log_det.im]);
    }
    if let Some(path) = &o.series {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["t", "u_re", "u_im", "v_re", "v_im", "logdet_re", "logdet_im"])?;
        for r in &series {
            w.write_record(r.iter().map(|x| x.to_string()))?;
        }
        w.flush()?;
    }
    let poles: Vec<String> = sol.poles.iter().map(|p| format!("{:.6}", p.a)).collect();
    Ok(sweep("painleve", rows, None, format!("{} steps, poles at [{}]", sol.steps, poles.join(", "))))
}

fn fredholm(o: &Opts) -> Result<Run> {
    let (beta, kappa) = o.weight(c(0.0, 0.4))?;
    let t_min = o.t_min.unwrap_or(-8.0);
    let t_max = o.t_max.unwrap_or(4.0);
    let step = o.step.unwrap_or(0.5);
    if !(t_min <= t_max) {
        bail!("--t-min must not exceed --t-max");
    }
    let cfg = NystromConfig { m: o.nodes.unwrap_or(40), ..NystromConfig::with_tol(o.tol.unwrap_or(1e-12)) };
    let k = ((t_max - t_min) / step).round() as usize;
    let mut rows = Vec::new();
    for i in 0..=k {
        let t = t_min + step * i as f64;
        let d = airy_fredholm_det(kappa * kappa, t, &cfg)?;
        let (ai, aip) = airy(t);
        let asym = match asympt::conj13_expansion(t, beta) {
            Ok(a) if t < -1.0 && beta.re.abs() < 0.25 => a.exp(),
            // 1 − κ²·tr K_Ai on [t, ∞)
            _ => 1.0 - kappa * kappa * (2.0 * t * t * ai * ai - ai * aip - 2.0 * t * aip * aip) / 3.0,
        };
        rows.push(ReportRow::new("det", beta, kappa, d, asym).at(None, Some(t), None));
    }
    Ok(sweep("fredholm", rows, None, format!("{} points, {} base nodes", k + 1, cfg.m)))
}

fn verify(check: Check, o: &Opts) -> Result<Run> {
    let tol = o.tol.unwrap_or(1e-12);
    let sweep: Sweep = match check {
        Check::Thm12 => {
            let (beta, _) = o.weight(c(0.0, 0.4))?;
            asympt::thm12_sweep(beta, &o.ts(&[0.0, 2.0]), &o.ns(&[20, 40, 80]), tol, 0.05)?
        }
        Check::Thm14 => {
            let (beta, _) = o.weight(c(0.0, 0.4))?;
            asympt::thm14_sweep(beta, &o.ts(&[-2.0, 0.0, 2.0]), &o.ns(&[64, 128, 256]), tol, 1.5)?
        }
        Check::Thm15 => {
            let (beta, _) = o.weight(c(0.0, 0.4))?;
            asympt::thm15_sweep(beta, &o.ts(&[0.5]), &o.ns(&[64, 128, 256]), tol, 1.0 / 3.0, 0.15)?
        }
        Check::Noncrit => {
            let (beta, _) = o.weight(c(0.0, 0.2))?;
            asympt::noncrit_sweep(beta, &o.ts(&[0.0, 0.5, 0.9]), &o.ns(&[30, 60, 120]))?
        }
        Check::Conj13 => {
            let (beta, _) = o.weight(c(0.0, 0.15))?;
            asympt::conj13_sweep(beta, &o.ts(&[-10.0, -25.0]), tol, 0.05)?
        }
        Check::TwIdentity => {
            let (_, kappa) = o.weight(kappa_to_beta(0.7))?;
            let t_min = o.t_min.unwrap_or(-8.0);
            let t_max = o.t_max.unwrap_or(4.0);
            if !(t_min < t_max) {
                bail!("--t-min must be below --t-max");
            }
            asympt::tw_identity_sweep(kappa, t_min, t_max, o.step.unwrap_or(0.5), tol, 1e-8)?
        }
        Check::FiniteNIdentity => {
            let (beta, _) = o.weight(c(0.0, 0.4))?;
            let cases: Vec<(usize, Complex64, f64)> =
                o.ns(&[12]).iter().flat_map(|&n| o.lambda0s(&[0.5]).into_iter().map(move |l| (n, beta, l))).collect();
            asympt::finite_n_identity_sweep(&cases, o.bits, 1e-18)?
        }
        Check::DiffIdentity => {
            let (beta, _) = o.weight(c(0.0, 0.5))?;
            let n = *o.ns(&[6]).last().unwrap();
            let ctx = o.bits.map(|b| PrecisionCtx::new(b).expect("validated")).unwrap_or(PrecisionCtx::new(256)?);
            let l0 = o.lambda0s(&[0.9])[0];
            asympt::diff_identity_check(n, beta, l0, Some(o.delta.unwrap_or(1e-6)), &ctx, 1e-9)?
        }
        Check::QnIdentity => {
            let (beta, _) = o.weight(c(0.0, 0.4))?;
            let n = *o.ns(&[8]).last().unwrap();
            let ctx = o.ctx(n);
            let params = match &o.t {
                Some(t) => WeightParams::edge(beta, n, t[0])?,
                None => WeightParams::direct(beta, o.lambda0s(&[1.1])[0])?,
            };
            asympt::qn_identity_check(n, &params, &ctx)?
        }
        Check::Thm16 => {
            let (beta, _) = o.weight(c(0.5, 0.0))?;
            if (beta.re - 0.5).abs() > 1e-12 {
                bail!("thm1.6 needs β = 1/2 + iγ; give --beta 0.5 --beta-im γ");
            }
            let near = o.ts(&[-12.0])[0];
            asympt::thm16_sweep(beta.im, near, tol, 0.05, 0.3, 1e-6)?
        }
    };
    Ok(sweep.into())
}

/// β for a real κ in (0, 1), used only for defaults given as κ.
fn kappa_to_beta(k: f64) -> Complex64 {
    beta_of_kappa(c(k, 0.0))
}

fn mc(kind: McKind, o: &Opts) -> Result<Run> {
    let seed = o.seed.unwrap_or(7);
    let s = o.s.unwrap_or(if kind == McKind::Gue { 0.0 } else { 0.5 });
    let beta = beta_of_kappa(c((1.0 - s).sqrt(), 0.0));
    let kappa = c((1.0 - s).sqrt(), 0.0);
    match kind {
        McKind::Gue => {
            let n = *o.ns(&[8]).last().unwrap();
            let trials = o.trials.unwrap_or(100_000);
            let mut rows = Vec::new();
            let mut ok = true;
            for l0 in o.lambda0s(&[3.0]) {
                let (p, se) = if s == 0.0 {
                    gap_probability_mc(n, l0, trials, seed)
                } else {
                    let st = thinning_experiment(n, s, l0, trials, seed);
                    (st.p_thinned, st.stderr)
                };
                let det = finite_n_det(n, l0, c(1.0 - s, 0.0));
                let pass = (p - det.re).abs() <= 3.0 * se;
                ok &= pass;
                let label = if s == 0.0 { "gap" } else { "thinned gap" };
                rows.push(
                    ReportRow::new(label, beta, kappa, c(p, 0.0), det)
                        .at(Some(n), None, Some(l0))
                        .verdict(Verdict::from_bool(pass)),
                );
            }
            Ok(sweep("mc gue", rows, Some(Verdict::from_bool(ok)), format!("{trials} trials, seed {seed}, band 3σ")))
        }
        McKind::Plancherel => {
            let n = *o.ns(&[10_000]).last().unwrap();
            let trials = o.trials.unwrap_or(4000);
            let ts = o.ts(&[-2.0, 0.0, 1.0]);
            let cdf = plancherel_edge_cdf(n, s, &ts, trials, o.nodes.unwrap_or(20), seed);
            let cfg = NystromConfig::with_tol(1e-10);
            let mut rows = Vec::new();
            let mut ok = true;
            for e in cdf {
                let det = airy_fredholm_det(c(1.0 - s, 0.0), e.t, &cfg)?;
                let pass = (e.p - det.re).abs() <= 3.0 * e.stderr + 0.03;
                ok &= pass;
                rows.push(
                    ReportRow::new("plancherel cdf", beta, kappa, c(e.p, 0.0), det)
                        .at(Some(n), Some(e.t), None)
                        .verdict(Verdict::from_bool(pass)),
                );
            }
            Ok(sweep("mc plancherel", rows, Some(Verdict::from_bool(ok)), format!("{trials} trials, seed {seed}, band 3σ + 0.03")))
        }
    }
}

fn sort_rows(rows: &mut [ReportRow]) {
    let key = |x: Option<f64>| x.unwrap_or(f64::NEG_INFINITY);
    rows.sort_by(|a, b| {
        a.label
            .cmp(&b.label)
            .then(a.n.cmp(&b.n))
            .then(key(a.t).total_cmp(&key(b.t)))
            .then(key(a.lambda0).total_cmp(&key(b.lambda0)))
    });
}

fn write_report(run: &Run, o: &Opts) -> Result<()> {
    let sink: Box<dyn Write> = match &o.out {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = io::BufWriter::new(sink);
    let stamp = (!o.no_timestamp).then(|| {
        std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
    });
    match o.format.unwrap_or_default() {
        Format::Csv => {
            if let Some(s) = stamp {
                writeln!(sink, "# generated {s}")?;
            }
            let mut w = csv::Writer::from_writer(&mut sink);
            for r in &run.rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut sink, &run.rows)?;
            writeln!(sink)?;
        }
    }
    sink.flush()?;
    let summary = Summary { criterion: &run.criterion, verdict: run.verdict, summary: &run.summary, rows: run.rows.len(), generated: stamp };
    let text = serde_json::to_string(&summary)?;
    match &o.out {
        Some(p) => std::fs::write(summary_path(p), text + "\n")?,
        None => eprintln!("{text}"),
    }
    Ok(())
}

fn summary_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".summary.json");
    out.with_file_name(name)
}

fn threads() -> Result<()> {
    if let Ok(v) = std::env::var("EDGEJUMP_THREADS") {
        let n: usize = v.trim().parse().with_context(|| format!("EDGEJUMP_THREADS = {v:?}"))?;
        if n == 0 {
            bail!("EDGEJUMP_THREADS must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<Option<Verdict>> {
    threads()?;
    let o = cli.opts.merged()?;
    o.validate()?;
    let mut run = match cli.cmd {
        Cmd::Hankel => hankel(&o)?,
        Cmd::Painleve => painleve(&o)?,
        Cmd::Fredholm => fredholm(&o)?,
        Cmd::Verify { check } => verify(check, &o)?,
        Cmd::Mc { kind } => mc(kind, &o)?,
    };
    sort_rows(&mut run.rows);
    write_report(&run, &o)?;
    if let Some(v) = run.verdict {
        eprintln!("{v} {}: {}", run.criterion, run.summary);
    }
    Ok(run.verdict)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Some(Verdict::Fail)) => ExitCode::from(1),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
