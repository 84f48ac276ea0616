//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 on malformed input. Well-formed requests with
//! a negative answer (no certificate, wrong regime, budget spent) exit 1.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::channel::{classify_regime, CellParams, Model, RegimeTag};
use crate::error::Error;
use crate::rates::{
    achievable_sum, integer_alphas, upper_bound_ktx, upper_bound_sum, wcurve_csv, wcurve_sweep, Rate,
};
use crate::scheme::{construct_imac, dualize, search_best, verify, Certificate, LinearScheme, SearchConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ldcell", version, about = "Linear deterministic interfering MAC/BC toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct ParamFlags {
    #[arg(long)]
    pub n1: usize,
    #[arg(long)]
    pub n2: usize,
    #[arg(long)]
    pub n3: usize,
    #[arg(long)]
    pub n4: usize,
    #[arg(long)]
    pub nm: usize,
    #[arg(long)]
    pub nd: usize,
    /// Ambient vector length; defaults to the largest gain.
    #[arg(long)]
    pub q: Option<usize>,
}

impl ParamFlags {
    pub fn params(&self) -> Result<CellParams, Error> {
        match self.q {
            Some(q) => CellParams::with_q(self.n1, self.n2, self.n3, self.n4, self.nm, self.nd, q),
            None => CellParams::new(self.n1, self.n2, self.n3, self.n4, self.nm, self.nd),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sum-rate bounds and the achievable rate.
    Bound {
        #[command(flatten)]
        params: ParamFlags,
        /// Also report the bound for k transmitters per cell.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Build and certify the alignment scheme (SubA only).
    Construct {
        #[command(flatten)]
        params: ParamFlags,
        #[arg(long)]
        out: PathBuf,
    },
    /// Certify a scheme file.
    Verify { scheme: PathBuf },
    /// Transform an IMAC scheme into its IBC dual.
    Dualize {
        scheme: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        verify: bool,
    },
    /// Symmetric sweep over every integer interference level.
    Wcurve {
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        delta: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exhaustive search for the best certified scheme (q <= 6).
    Oracle {
        #[command(flatten)]
        params: ParamFlags,
        #[arg(long, default_value_t = 1)]
        weight: usize,
        #[arg(long, default_value_t = SearchConfig::default().budget)]
        budget: u64,
        /// Where to write the best scheme; printed to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses `args` and runs the command, writing the summary to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = write!(out, "{e}");
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Regime(_) | Error::Construction { .. } | Error::Budget { .. } | Error::Capacity(_) => EXIT_FAIL,
        _ => EXIT_INPUT,
    }
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32, Error> {
    match cmd {
        Command::Bound { params, k } => cmd_bound(&params.params()?, k, out),
        Command::Construct { params, out: path } => cmd_construct(&params.params()?, &path, out),
        Command::Verify { scheme } => cmd_verify(&LinearScheme::read(&scheme)?, out),
        Command::Dualize { scheme, out: path, verify } => cmd_dualize(&LinearScheme::read(&scheme)?, &path, verify, out),
        Command::Wcurve { n1, delta, out: path } => cmd_wcurve(n1, delta, &path, out),
        Command::Oracle {
            params,
            weight,
            budget,
            out: path,
        } => {
            let config = SearchConfig {
                max_col_weight: weight,
                budget,
                ..SearchConfig::default()
            };
            cmd_oracle(&params.params()?, &config, path.as_deref(), out)
        }
    }
}

fn rate_line(label: &str, r: Rate) -> String {
    format!("{label}: {}", r.describe())
}

fn cmd_bound(p: &CellParams, k: Option<usize>, out: &mut dyn Write) -> Result<i32, Error> {
    let regime = classify_regime(p);
    writeln!(out, "params: {p}")?;
    writeln!(out, "regime: {}", regime.tag)?;
    if regime.tag == RegimeTag::OutOfVeryWeak {
        return Err(Error::Regime("bounds apply in the very weak regime only".into()));
    }
    if let Ok(a) = achievable_sum(p) {
        writeln!(out, "{}", rate_line("achievable", a))?;
    }
    writeln!(out, "{}", rate_line("bound", upper_bound_sum(p)?))?;
    if let Some(k) = k {
        writeln!(out, "{}", rate_line(&format!("bound_k{k}"), upper_bound_ktx(p, k)?))?;
    }
    Ok(EXIT_OK)
}

fn write_certificate(c: &Certificate, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "rx  desired  rank(D)  rank(N)  rank([D|N])  pass")?;
    for r in &c.receivers {
        writeln!(
            out,
            "{:<3} {:<8} {:<8} {:<8} {:<12} {}",
            r.receiver, r.desired_bits, r.desired_rank, r.nuisance_rank, r.joint_rank, r.pass
        )?;
    }
    writeln!(out, "pass: {}", c.pass)?;
    writeln!(out, "certified rate: {}", c.rate)
}

fn cmd_construct(p: &CellParams, path: &std::path::Path, out: &mut dyn Write) -> Result<i32, Error> {
    let target = achievable_sum(p)?;
    let bound = upper_bound_sum(p)?;
    let s = construct_imac(p)?;
    let c = verify(&s);
    s.write(path)?;
    writeln!(out, "params: {p}")?;
    writeln!(out, "certified rate: {}", c.rate)?;
    writeln!(out, "achievable target {target}: {}", if c.rate == target { "met" } else { "missed" })?;
    writeln!(out, "upper bound {bound}: {}", if c.rate == bound { "met" } else { "below" })?;
    writeln!(out, "wrote {}", path.display())?;
    Ok(if c.pass { EXIT_OK } else { EXIT_FAIL })
}

fn cmd_verify(s: &LinearScheme, out: &mut dyn Write) -> Result<i32, Error> {
    writeln!(out, "model: {}  params: {}", s.model, s.params)?;
    let c = verify(s);
    write_certificate(&c, out)?;
    Ok(if c.pass { EXIT_OK } else { EXIT_FAIL })
}

fn cmd_dualize(s: &LinearScheme, path: &std::path::Path, check: bool, out: &mut dyn Write) -> Result<i32, Error> {
    if s.model != Model::Imac {
        return Err(Error::Format(format!("dualize needs an imac scheme, got {}", s.model)));
    }
    let d = dualize(s)?;
    d.write(path)?;
    writeln!(out, "wrote {} ({} bits, params {})", path.display(), d.total_bits(), d.params)?;
    if !check {
        return Ok(EXIT_OK);
    }
    let before = verify(s);
    let after = verify(&d);
    write_certificate(&after, out)?;
    let preserved = after.pass && after.rate == before.rate;
    writeln!(
        out,
        "rate preserved: {} (imac {}, ibc {})",
        preserved, before.rate, after.rate
    )?;
    Ok(if preserved { EXIT_OK } else { EXIT_FAIL })
}

fn cmd_wcurve(n1: usize, delta: usize, path: &std::path::Path, out: &mut dyn Write) -> Result<i32, Error> {
    let (points, diagnostics) = wcurve_sweep(n1, delta, &integer_alphas(n1))?;
    for d in &diagnostics {
        writeln!(out, "skipped: {d}")?;
    }
    std::fs::write(path, wcurve_csv(&points))?;
    let gaps: Vec<_> = points.iter().filter_map(|p| p.gap.map(|g| (p, g))).collect();
    match gaps.iter().map(|(_, g)| *g).max() {
        Some(max) => writeln!(out, "max gap: {max}")?,
        None => writeln!(out, "max gap: n/a (no SubA points)")?,
    }
    let zeros: Vec<String> = gaps
        .iter()
        .filter(|(_, g)| *g == 0)
        .map(|(p, _)| p.alpha.to_string())
        .collect();
    writeln!(out, "gap = 0 at alpha: {}", zeros.join(" "))?;
    writeln!(out, "wrote {} ({} points)", path.display(), points.len())?;
    Ok(EXIT_OK)
}

fn cmd_oracle(
    p: &CellParams,
    config: &SearchConfig,
    path: Option<&std::path::Path>,
    out: &mut dyn Write,
) -> Result<i32, Error> {
    writeln!(out, "params: {p}  regime: {}", classify_regime(p).tag)?;
    let (scheme, rate, complete) = match search_best(p, config) {
        Ok(o) => {
            writeln!(out, "evaluated: {}", o.evaluated)?;
            (o.scheme, o.rate, true)
        }
        Err(Error::Budget { message, partial, rate }) => {
            writeln!(out, "partial result: {message}")?;
            (*partial, rate, false)
        }
        Err(e) => return Err(e),
    };
    writeln!(out, "best verified rate: {rate}")?;
    match upper_bound_sum(p) {
        Ok(b) => writeln!(
            out,
            "floor(bound) = {}: {}",
            b.floor(),
            if rate <= b.floor() { "respected" } else { "EXCEEDED" }
        )?,
        Err(_) => writeln!(out, "floor(bound): n/a outside the very weak regime")?,
    }
    if let Ok(a) = achievable_sum(p) {
        writeln!(out, "achievable formula: {a}")?;
    }
    match path {
        Some(path) => {
            scheme.write(path)?;
            writeln!(out, "wrote {}", path.display())?;
        }
        None => writeln!(out, "{}", scheme.to_json_pretty())?,
    }
    Ok(if complete { EXIT_OK } else { EXIT_FAIL })
}
