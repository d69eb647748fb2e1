//! Command-line frontend: `search`, `merit`, `bounds`, `converge` and `vol`.
//!
//! Exit codes: 0 on success, 1 on usage or configuration errors, 2 when a search
//! target is not met.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::basefield::checked_pow;
use crate::error::{Error, Result};
use crate::integrate::{convergence_experiment, fit_log_error_vs_d2, to_csv, ExperimentConfig, Family, ERROR_FLOOR};
use crate::merit::{
    default_precision, lower_bound_box, lower_bound_n, search_net, BoundConstants, MeritReport, Regime,
    SearchConfig, Target, REPORT_CSV_HEADER,
};
use crate::nets::{read_matrices, write_matrices};
use crate::weights::{c_vol, vol, vol_bound_conv, vol_bound_trac, WeightSequence, DEFAULT_VOL_CAP};

pub const JOBS_ENV: &str = "WAFOM_NETS_JOBS";

/// Comma-separated integers, with `a..b` for inclusive ranges: `1,2,4` or `2..8`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntList(pub Vec<usize>);

impl FromStr for IntList {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("bad integer list {s:?}"));
        let mut out = Vec::new();
        for part in s.split(',') {
            if let Some((lo, hi)) = part.split_once("..") {
                let lo: usize = lo.trim().parse().map_err(|_| bad())?;
                let hi: usize = hi.trim().parse().map_err(|_| bad())?;
                if lo > hi {
                    return Err(bad());
                }
                out.extend(lo..=hi);
            } else {
                out.push(part.trim().parse().map_err(|_| bad())?);
            }
        }
        Ok(IntList(out))
    }
}

impl fmt::Display for IntList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// Comma-separated reals.
#[derive(Debug, Clone, PartialEq)]
pub struct RealList(pub Vec<f64>);

impl FromStr for RealList {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| Error::InvalidArgument(format!("bad number {p:?}")))
            })
            .collect::<Result<_>>()
            .map(RealList)
    }
}

impl fmt::Display for RealList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(f64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundsRegime {
    Conv,
    Trac,
    /// Dimension-independent `exp(-c (log n)^2)`; always refused.
    P2,
}

impl FromStr for BoundsRegime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "conv" => Ok(BoundsRegime::Conv),
            "trac" => Ok(BoundsRegime::Trac),
            "p2" => Ok(BoundsRegime::P2),
            other => Err(Error::Regime(format!("unknown regime {other:?} (expected conv, trac or p2)"))),
        }
    }
}

impl fmt::Display for BoundsRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundsRegime::Conv => "conv",
            BoundsRegime::Trac => "trac",
            BoundsRegime::P2 => "p2",
        })
    }
}

/// Parsed command line. Its `Display` form is a canonical argument string that parses
/// back to the same value.
#[derive(Debug, Clone, PartialEq, Parser)]
#[command(name = "wafom-nets", version, about = "Digital nets over Z_b: search, merit, bounds and QMC experiments")]
pub struct RunConfig {
    /// Worker threads (default: logical cores)
    #[arg(long, env = JOBS_ENV, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// Random search for generating matrices
    Search(SearchArgs),
    /// Merit report of a matrix file
    Merit(MeritArgs),
    /// Lower bounds, error-bound constants and targets
    Bounds(BoundsArgs),
    /// Convergence experiment written as CSV
    Converge(ConvergeArgs),
    /// Exact volume counts against the analytic bounds
    Vol(VolArgs),
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 2)]
    pub b: u32,
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub d: usize,
    /// Precision (default: d(d+1)/2 + 2, capped at double precision)
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long, default_value = "power:a=0,r=1,c=0")]
    pub weights: String,
    /// min-wafom, max-delta or delta:M
    #[arg(long, default_value = "min-wafom")]
    pub target: Target,
    #[arg(long, default_value_t = 64)]
    pub trials: u64,
    /// Master seed (default: drawn from entropy and printed)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Matrix file to write
    #[arg(long, default_value = "net.txt")]
    pub out: PathBuf,
    /// Also write the report to this file
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct MeritArgs {
    /// Matrix file
    pub matrices: PathBuf,
    #[arg(long, default_value = "power:a=0,r=1,c=0")]
    pub weights: String,
    /// Print a CSV header and row instead of key=value lines
    #[arg(long)]
    pub csv: bool,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct BoundsArgs {
    #[arg(long, default_value_t = 2)]
    pub b: u32,
    #[arg(long)]
    pub s: usize,
    #[arg(long, default_value = "power:a=0,r=1,c=0")]
    pub weights: String,
    /// Number of points (default: b^d)
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub d: Option<usize>,
    /// conv, trac or p2
    #[arg(long, default_value = "conv")]
    pub regime: BoundsRegime,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct ConvergeArgs {
    #[arg(long, default_value_t = 2)]
    pub b: u32,
    #[arg(long = "s-list", default_value = "1,2")]
    pub s_list: IntList,
    #[arg(long = "d-list", default_value = "2..8")]
    pub d_list: IntList,
    /// Smooth-space weights u; the integrand uses c_j = u_j
    #[arg(long, default_value = "smooth-power:u0=0.5,q=0.5")]
    pub weights: String,
    /// exp-linear or cosine
    #[arg(long, default_value = "exp-linear")]
    pub family: Family,
    #[arg(long, default_value_t = 64)]
    pub trials: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value = "converge.csv")]
    pub out: PathBuf,
    /// Errors at or below this are left out of the fitted slope
    #[arg(long = "float-floor", default_value_t = ERROR_FLOOR)]
    pub float_floor: f64,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct VolArgs {
    #[arg(long, default_value_t = 2)]
    pub b: u32,
    #[arg(long)]
    pub s: usize,
    #[arg(long, default_value = "power:a=0,r=1,c=0")]
    pub weights: String,
    /// Radii M
    #[arg(long, default_value = "0,1,2,3,4,5,6,7,8,9,10")]
    pub m: RealList,
    /// Enumeration cap
    #[arg(long = "vol-cap", default_value_t = DEFAULT_VOL_CAP)]
    pub vol_cap: u64,
}

fn quote(token: &str) -> String {
    if !token.is_empty() && !token.chars().any(|c| c.is_whitespace() || c == '\'' || c == '\\') {
        token.to_string()
    } else {
        format!("'{}'", token.replace('\'', r"'\''"))
    }
}

/// Splits a canonical string into arguments; understands single quotes and `\'`.
fn split_args(s: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut in_token = false;
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        match c {
            '\'' => {
                in_token = true;
                loop {
                    match chars.next() {
                        Some('\'') => break,
                        Some(x) => cur.push(x),
                        None => return Err(Error::InvalidArgument("unterminated quote".into())),
                    }
                }
            }
            '\\' => {
                in_token = true;
                cur.push(chars.next().ok_or_else(|| Error::InvalidArgument("dangling escape".into()))?);
            }
            c if c.is_whitespace() => {
                if in_token {
                    out.push(std::mem::take(&mut cur));
                    in_token = false;
                }
            }
            c => {
                in_token = true;
                cur.push(c);
            }
        }
    }
    if in_token {
        out.push(cur);
    }
    Ok(out)
}

impl RunConfig {
    /// Arguments after the program name, in canonical order with every value explicit.
    pub fn to_args(&self) -> Vec<String> {
        let mut a: Vec<String> = Vec::new();
        let flag = |a: &mut Vec<String>, name: &str, value: String| {
            a.push(format!("--{name}"));
            a.push(value);
        };
        if let Some(j) = self.jobs {
            flag(&mut a, "jobs", j.to_string());
        }
        match &self.command {
            Command::Search(x) => {
                a.push("search".into());
                flag(&mut a, "b", x.b.to_string());
                flag(&mut a, "s", x.s.to_string());
                flag(&mut a, "d", x.d.to_string());
                if let Some(l) = x.l {
                    flag(&mut a, "l", l.to_string());
                }
                flag(&mut a, "weights", x.weights.clone());
                flag(&mut a, "target", x.target.to_string());
                flag(&mut a, "trials", x.trials.to_string());
                if let Some(seed) = x.seed {
                    flag(&mut a, "seed", seed.to_string());
                }
                flag(&mut a, "out", x.out.display().to_string());
                if let Some(r) = &x.report {
                    flag(&mut a, "report", r.display().to_string());
                }
            }
            Command::Merit(x) => {
                a.push("merit".into());
                flag(&mut a, "weights", x.weights.clone());
                if x.csv {
                    a.push("--csv".into());
                }
                a.push("--".into());
                a.push(x.matrices.display().to_string());
            }
            Command::Bounds(x) => {
                a.push("bounds".into());
                flag(&mut a, "b", x.b.to_string());
                flag(&mut a, "s", x.s.to_string());
                flag(&mut a, "weights", x.weights.clone());
                if let Some(n) = x.n {
                    flag(&mut a, "n", n.to_string());
                }
                if let Some(d) = x.d {
                    flag(&mut a, "d", d.to_string());
                }
                flag(&mut a, "regime", x.regime.to_string());
            }
            Command::Converge(x) => {
                a.push("converge".into());
                flag(&mut a, "b", x.b.to_string());
                flag(&mut a, "s-list", x.s_list.to_string());
                flag(&mut a, "d-list", x.d_list.to_string());
                flag(&mut a, "weights", x.weights.clone());
                flag(&mut a, "family", x.family.to_string());
                flag(&mut a, "trials", x.trials.to_string());
                if let Some(seed) = x.seed {
                    flag(&mut a, "seed", seed.to_string());
                }
                flag(&mut a, "out", x.out.display().to_string());
                flag(&mut a, "float-floor", x.float_floor.to_string());
            }
            Command::Vol(x) => {
                a.push("vol".into());
                flag(&mut a, "b", x.b.to_string());
                flag(&mut a, "s", x.s.to_string());
                flag(&mut a, "weights", x.weights.clone());
                flag(&mut a, "m", x.m.to_string());
                flag(&mut a, "vol-cap", x.vol_cap.to_string());
            }
        }
        a
    }

    /// Fills an absent seed from entropy and returns the seed now in effect.
    pub fn fix_seed(&mut self) -> Option<u64> {
        let slot = match &mut self.command {
            Command::Search(x) => &mut x.seed,
            Command::Converge(x) => &mut x.seed,
            _ => return None,
        };
        Some(*slot.get_or_insert_with(rand::random))
    }
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.to_args().iter().map(|t| quote(t)).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for RunConfig {
    type Err = Error;

    /// Parses a canonical string. The jobs variable of the environment is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let mut args = vec!["wafom-nets".to_string()];
        args.extend(split_args(s)?);
        let mut cfg =
            RunConfig::try_parse_from(args).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        if !s.split_whitespace().any(|t| t == "--jobs") {
            cfg.jobs = None;
        }
        Ok(cfg)
    }
}

/// What a successful command concluded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Done,
    TargetMissed,
}

fn walsh_seq(spec: &str, b: u32) -> Result<WeightSequence> {
    let seq = WeightSequence::parse(spec, b)?;
    seq.walsh_weights(1)?;
    Ok(seq)
}

fn write_file(path: &PathBuf, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Runs one command, writing its report to `out` and diagnostics to `err`.
pub fn execute(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<Outcome> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cfg.jobs {
        if j == 0 {
            return Err(Error::InvalidArgument("--jobs must be positive".into()));
        }
        builder = builder.num_threads(j);
    }
    let pool = builder.build().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let (mut o, mut e): (Vec<u8>, Vec<u8>) = (Vec::new(), Vec::new());
    let result = pool.install(|| match &cfg.command {
        Command::Search(x) => cmd_search(x, &mut o, &mut e),
        Command::Merit(x) => cmd_merit(x, &mut o),
        Command::Bounds(x) => cmd_bounds(x, &mut o),
        Command::Converge(x) => cmd_converge(x, &mut o),
        Command::Vol(x) => cmd_vol(x, &mut o),
    });
    err.write_all(&e).map_err(io)?;
    out.write_all(&o).map_err(io)?;
    result
}

fn io(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn cmd_search(x: &SearchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<Outcome> {
    let weights = walsh_seq(&x.weights, x.b)?;
    let seed = x.seed.ok_or_else(|| Error::InvalidArgument("seed must be fixed before running".into()))?;
    let outcome = search_net(&SearchConfig {
        dim: x.s,
        log_size: x.d,
        precision: x.l.unwrap_or_else(|| default_precision(x.d, x.b)),
        weights,
        target: x.target,
        trials: x.trials,
        seed,
    })?;
    for w in &outcome.warnings {
        writeln!(err, "warning: {w}").map_err(io)?;
    }
    write_file(&x.out, &write_matrices(&outcome.matrices))?;
    let mut text = outcome.report.to_key_value();
    text.push_str(&format!(
        "seed={seed}\ntrial={}\ntarget={}\ntarget_met={}\n",
        outcome.trial, x.target, outcome.target_met
    ));
    if let Some(path) = &x.report {
        write_file(path, &text)?;
    }
    out.write_all(text.as_bytes()).map_err(io)?;
    Ok(if outcome.target_met { Outcome::Done } else { Outcome::TargetMissed })
}

fn cmd_merit(x: &MeritArgs, out: &mut dyn Write) -> Result<Outcome> {
    let g = read_matrices(&x.matrices)?;
    let seq = walsh_seq(&x.weights, g.base() as u32)?;
    let report = MeritReport::compute(&g, &seq)?;
    let text = if x.csv {
        format!("{REPORT_CSV_HEADER}\n{}\n", report.to_csv_row())
    } else {
        report.to_key_value()
    };
    out.write_all(text.as_bytes()).map_err(io)?;
    Ok(Outcome::Done)
}

fn cmd_bounds(x: &BoundsArgs, out: &mut dyn Write) -> Result<Outcome> {
    let regime = match x.regime {
        BoundsRegime::P2 => {
            return Err(Error::Regime(
                "no bound of the form C exp(A s) exp(-c (log n)^2) holds for all s: \
                 there do not exist constants A, C, c >= 0 with that property, so the p = 2 regime is refused"
                    .into(),
            ))
        }
        BoundsRegime::Conv => Regime::Conv,
        BoundsRegime::Trac => Regime::Trac,
    };
    let seq = walsh_seq(&x.weights, x.b)?;
    let constants = BoundConstants::new(&seq, x.s)?;
    if regime == Regime::Trac && constants.trac.is_none() {
        seq.trac_params()?;
        c_vol(&seq)?;
    }
    let n = match (x.n, x.d) {
        (Some(n), _) => n,
        (None, Some(d)) => checked_pow(x.b, d)
            .ok_or_else(|| Error::InvalidArgument(format!("b^d overflows for d = {d}")))?,
        (None, None) => return Err(Error::InvalidArgument("give --n or --d".into())),
    };
    let a = seq.walsh_weights(x.s)?;
    let mut t = String::new();
    let mut line = |k: &str, v: String| t.push_str(&format!("{k}={v}\n"));
    line("regime", x.regime.to_string());
    line("b", x.b.to_string());
    line("s", x.s.to_string());
    line("weights", seq.rule().to_string());
    line("n", n.to_string());
    line("lower_bound_n", lower_bound_n(n, &a, x.b)?.to_string());
    if let Some(d) = x.d {
        if a.iter().all(|&w| w >= 0.0) {
            line("lower_bound_box", lower_bound_box(d, &a, x.b)?.to_string());
        }
    }
    line("rho_b", constants.rho_b.to_string());
    line("sigma_bar", constants.sigma_bar.to_string());
    line("c_prime", constants.c_prime.to_string());
    line("c_bar", constants.c_bar.to_string());
    line("c_double_prime", constants.c_double_prime.to_string());
    if let Some(tr) = constants.trac {
        line("r", tr.r.to_string());
        line("c_vol", tr.c_vol.to_string());
        line("c_bd", tr.c_bd.to_string());
        line("c_help", tr.c_help.to_string());
    }
    if let Some(d) = x.d {
        let target = match regime {
            Regime::Conv => constants.conv_target(d),
            Regime::Trac => constants.trac_target(d)?,
        };
        line("guaranteed_delta", constants.guaranteed_delta(d, regime)?.to_string());
        line("wce_target", target.to_string());
    }
    out.write_all(t.as_bytes()).map_err(io)?;
    Ok(Outcome::Done)
}

fn cmd_converge(x: &ConvergeArgs, out: &mut dyn Write) -> Result<Outcome> {
    let seed = x.seed.ok_or_else(|| Error::InvalidArgument("seed must be fixed before running".into()))?;
    let cfg = ExperimentConfig {
        family: x.family,
        smooth_weights: WeightSequence::parse(&x.weights, x.b)?,
        s_list: x.s_list.0.clone(),
        d_list: x.d_list.0.clone(),
        trials: x.trials,
        seed,
    };
    let records = convergence_experiment(&cfg)?;
    write_file(&x.out, &to_csv(&records))?;
    let lb2 = (x.b as f64).ln().powi(2);
    let mut t = format!("rows={}\n", records.len());
    for &s in &x.s_list.0 {
        match fit_log_error_vs_d2(&records, s, x.float_floor) {
            Some(fit) => t.push_str(&format!(
                "s={s} slope_vs_log_n_squared={} slope_vs_d_squared={} r_squared={}\n",
                fit.slope / lb2,
                fit.slope,
                fit.r_squared
            )),
            None => t.push_str(&format!("s={s} slope=none (fewer than two rows above the floor)\n")),
        }
    }
    out.write_all(t.as_bytes()).map_err(io)?;
    Ok(Outcome::Done)
}

fn cmd_vol(x: &VolArgs, out: &mut dyn Write) -> Result<Outcome> {
    let seq = walsh_seq(&x.weights, x.b)?;
    let a = seq.walsh_weights(x.s)?;
    let mut t = String::new();
    for &m in &x.m.0 {
        let count = match vol(m, &a, x.b, x.vol_cap) {
            Ok(v) => v.to_string(),
            Err(Error::EnumerationCap { cap }) => format!(">{cap}"),
            Err(e) => return Err(e),
        };
        t.push_str(&format!("M={m} vol={count} bound_conv={}", vol_bound_conv(m, &a, x.b)));
        if let Ok(bound) = vol_bound_trac(m, &seq) {
            t.push_str(&format!(" bound_trac={bound}"));
        }
        t.push('\n');
    }
    out.write_all(t.as_bytes()).map_err(io)?;
    Ok(Outcome::Done)
}

/// Entry point used by the binary.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut cfg = match RunConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let explicit = match &cfg.command {
        Command::Search(x) => x.seed.is_some(),
        Command::Converge(x) => x.seed.is_some(),
        _ => true,
    };
    if let Some(seed) = cfg.fix_seed() {
        if !explicit {
            eprintln!("seed={seed} (drawn from entropy)");
        }
    }
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    match execute(&cfg, &mut stdout.lock(), &mut stderr.lock()) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::TargetMissed) => {
            eprintln!("target not met");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> RunConfig {
        RunConfig::try_parse_from(std::iter::once("wafom-nets").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn canonical_round_trip() {
        let cases = [
            parse(&["search", "--s", "1", "--d", "3", "--l", "8", "--target", "delta:3", "--seed", "7"]),
            parse(&["--jobs", "3", "converge", "--d-list", "2..5", "--seed", "1", "--out", "my file.csv"]),
            parse(&["merit", "--csv", "it's.txt"]),
            parse(&["bounds", "--s", "2", "--d", "4", "--regime", "trac", "--weights", "power:a=1,r=1,c=0"]),
            parse(&["vol", "--s", "2", "--m", "0.5,1,2.25"]),
        ];
        for cfg in cases {
            let text = cfg.to_string();
            let back: RunConfig = text.parse().unwrap();
            assert_eq!(back, cfg, "{text}");
        }
    }

    #[test]
    fn lists() {
        assert_eq!("2..5".parse::<IntList>().unwrap().0, vec![2, 3, 4, 5]);
        assert_eq!("1,2,4".parse::<IntList>().unwrap().0, vec![1, 2, 4]);
        assert_eq!("1,3..4".parse::<IntList>().unwrap().0, vec![1, 3, 4]);
        assert!("5..2".parse::<IntList>().is_err());
        assert!("x".parse::<IntList>().is_err());
        assert!("1,nan".parse::<RealList>().is_err());
    }

    #[test]
    fn split_handles_quotes() {
        assert_eq!(split_args("a 'b c' d\\'e").unwrap(), vec!["a", "b c", "d'e"]);
        assert_eq!(split_args("''").unwrap(), vec![""]);
        assert!(split_args("'open").is_err());
    }

    #[test]
    fn bounds_output() {
        let cfg = parse(&["bounds", "--s", "1", "--n", "1"]);
        let mut out = Vec::new();
        execute(&cfg, &mut out, &mut Vec::new()).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("lower_bound_n=0.5\n"), "{text}");
        assert!(text.contains("sigma_bar=1\n"));

        let p2 = parse(&["bounds", "--s", "1", "--n", "4", "--regime", "p2"]);
        let e = execute(&p2, &mut Vec::new(), &mut Vec::new()).unwrap_err();
        assert!(e.to_string().contains("do not exist"));

        let trac = parse(&["bounds", "--s", "1", "--n", "4", "--regime", "trac", "--weights", "explicit:0,1"]);
        assert!(execute(&trac, &mut Vec::new(), &mut Vec::new()).is_err());
    }
}
