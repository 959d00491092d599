//! The `peakcount` command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Map, Value};

use crate::configurations::{first_contained, sp_forbidden_set};
use crate::counting::{
    factorial, iac_bounds, ic_probability_bounds, mallows_lower, mallows_lower_simple, polya_lower,
    polya_lower_certified, polya_lower_simple, sp_count_exact, total_elections, BoundResult,
    Quantity,
};
use crate::decimal::{parse_decimal, Rounding};
use crate::error::{Error, Result};
use crate::estimate::estimate_sp;
use crate::io::{parse_elections, write_election};
use crate::recognition::{recognize_exhaustive, recognize_fast};
use crate::sampling::{sample, ModelSpec, RngStream};
use crate::tables::{table, TableKind};
use crate::vote::Vote;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_CAPABILITY: i32 = 2;

/// Significant digits in plain-text decimal renderings.
const TEXT_DIGITS: usize = 6;
/// Significant digits in JSON numbers.
const JSON_DIGITS: usize = 12;
/// Rationals with longer renderings are summarized by their digit counts.
const MAX_RATIONAL_CHARS: usize = 120;

#[derive(Parser, Debug)]
#[command(
    name = "peakcount",
    version,
    about = "Single-peaked elections: recognition, exact counts, bounds and simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether the elections in a file are single-peaked.
    Recognize {
        file: PathBuf,
        /// Name a forbidden configuration the election contains when it is not
        /// single-peaked.
        #[arg(long)]
        explain: bool,
        /// Scan all axes and report the lexicographically first witness.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Exact single-peakedness probability where a closed form exists.
    Count(ModelArgs),
    /// Lower and upper bounds on the single-peakedness probability.
    Bound {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        json: bool,
    },
    /// Recompute one of the standard probability tables.
    Tables {
        #[arg(value_enum)]
        which: Which,
    },
    /// Draw elections and write them in the election file format.
    Sample {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write to this file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo estimate of the single-peakedness probability.
    Estimate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Which {
    Ic,
    Iac,
    Polya,
    Mallows,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModelName {
    Ic,
    Iac,
    Polya,
    Mallows,
}

#[derive(Args, Debug)]
struct ModelArgs {
    #[arg(long, value_enum)]
    model: ModelName,
    #[arg(long)]
    n: u64,
    #[arg(long)]
    m: u64,
    /// Pólya homogeneity; defaults to m!.
    #[arg(long)]
    a: Option<u64>,
    /// Mallows dispersion, as a decimal (`0.1`) or a fraction (`1/3`).
    #[arg(long)]
    phi: Option<String>,
    /// Mallows reference vote, e.g. `2 4 1 3`; defaults to the identity.
    #[arg(long)]
    reference: Option<String>,
}

fn parse_phi(s: &str) -> Result<BigRational> {
    match s.split_once('/') {
        Some((num, den)) => {
            let parse = |t: &str| {
                t.trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::Parameter(format!("not a fraction: {s:?}")))
            };
            let den = parse(den)?;
            if den == BigInt::from(0) {
                return Err(Error::Parameter("zero denominator in phi".into()));
            }
            Ok(BigRational::new(parse(num)?, den))
        }
        None => parse_decimal(s),
    }
}

impl ModelArgs {
    fn spec(&self) -> Result<ModelSpec> {
        if self.n == 0 || self.m == 0 {
            return Err(Error::Parameter("n and m must be positive".into()));
        }
        if self.m > u16::MAX as u64 {
            return Err(Error::Parameter(format!("m = {} is too large", self.m)));
        }
        let unused = |flag: &str| {
            Err(Error::Parameter(format!(
                "--{flag} does not apply to the {:?} model",
                self.model
            )))
        };
        if self.model != ModelName::Polya && self.a.is_some() {
            return unused("a");
        }
        if self.model != ModelName::Mallows {
            if self.phi.is_some() {
                return unused("phi");
            }
            if self.reference.is_some() {
                return unused("reference");
            }
        }
        let spec = match self.model {
            ModelName::Ic => ModelSpec::Ic,
            ModelName::Iac => ModelSpec::Iac,
            ModelName::Polya => ModelSpec::Polya {
                a: match self.a {
                    Some(a) => a,
                    None => factorial(self.m).to_u64().ok_or_else(|| {
                        Error::Parameter("m! does not fit in 64 bits; pass --a".into())
                    })?,
                },
            },
            ModelName::Mallows => {
                let phi = self
                    .phi
                    .as_deref()
                    .ok_or_else(|| Error::Parameter("the Mallows model needs --phi".into()))?;
                let reference = match &self.reference {
                    Some(r) => r.parse::<Vote>()?,
                    None => Vote::identity(self.m as usize),
                };
                ModelSpec::Mallows {
                    phi: parse_phi(phi)?,
                    reference,
                }
            }
        };
        spec.validate(self.m as usize)?;
        Ok(spec)
    }
}

fn params_json(spec: &ModelSpec) -> Value {
    match spec {
        ModelSpec::Ic | ModelSpec::Iac => json!({}),
        ModelSpec::Polya { a } => json!({ "a": a }),
        ModelSpec::Mallows { phi, reference } => json!({
            "phi": phi.to_string(),
            "reference": reference.to_string(),
        }),
    }
}

/// A JSON number with 12 significant digits, or a string when the value lies
/// outside the `f64` range.
fn json_quantity(q: &Quantity, rounding: Rounding) -> Value {
    let d = q.to_decimal(JSON_DIGITS, rounding);
    let text = d.scientific();
    match text.parse::<f64>() {
        Ok(x) if x.is_finite() && (x != 0.0 || d.is_zero()) => json!(x),
        _ => Value::String(text),
    }
}

fn json_f64(x: f64) -> Value {
    match BigRational::from_float(x) {
        Some(q) => json_quantity(&Quantity::Exact(q), Rounding::Nearest),
        None => Value::Null,
    }
}

fn render_rational(q: &BigRational) -> String {
    let s = q.to_string();
    if s.len() <= MAX_RATIONAL_CHARS {
        s
    } else {
        let digits = |x: &BigInt| x.magnitude().to_string().len();
        format!(
            "({}-digit)/({}-digit)",
            digits(q.numer()),
            digits(q.denom())
        )
    }
}

fn render(q: &Quantity, rounding: Rounding) -> String {
    let dec = q.to_decimal(TEXT_DIGITS, rounding);
    match q {
        Quantity::Exact(r) if r.is_integer() => r.to_string(),
        Quantity::Exact(r) => format!("{} ≈ {}", render_rational(r), dec),
        Quantity::Log(l) => format!("exp({l:.9}) ≈ {dec}"),
    }
}

struct Io<'a> {
    out: &'a mut dyn Write,
}

impl Io<'_> {
    fn line(&mut self, s: impl AsRef<str>) -> Result<()> {
        writeln!(self.out, "{}", s.as_ref())
            .map_err(|e| Error::Parameter(format!("write failed: {e}")))
    }
}

fn cmd_recognize(io: &mut Io, file: &PathBuf, explain: bool, exhaustive: bool) -> Result<()> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| Error::Parameter(format!("cannot read {}: {e}", file.display())))?;
    let elections = parse_elections(&text)?;
    let forbidden = sp_forbidden_set();
    for (i, e) in elections.iter().enumerate() {
        if elections.len() > 1 {
            io.line(format!("election {}: ({}, {})", i + 1, e.n(), e.m()))?;
        }
        let axis = if exhaustive {
            recognize_exhaustive(e)?
        } else {
            recognize_fast(e)
        };
        match axis {
            Some(a) => {
                io.line("single-peaked: yes")?;
                io.line(format!("axis: {a}"))?;
            }
            None => {
                io.line("single-peaked: no")?;
                if explain {
                    match first_contained(e, &forbidden) {
                        Some((k, w)) => io.line(format!("contains {}: {w}", forbidden[k]))?,
                        None => {
                            return Err(Error::InvalidElection(
                                "no forbidden configuration found for a non-single-peaked election"
                                    .into(),
                            ))
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn cmd_count(io: &mut Io, args: &ModelArgs) -> Result<()> {
    let spec = args.spec()?;
    let (n, m) = (args.n, args.m);
    match spec {
        ModelSpec::Ic => {
            let count = sp_count_exact(n, m).map_err(|e| hint(e, "bound"))?;
            let total = total_elections(n, m)?;
            let p = Quantity::Exact(BigRational::new(count.clone().into(), total.clone().into()));
            io.line(format!("model: ic  n: {n}  m: {m}"))?;
            io.line(format!("single-peaked elections: {count} of {total}"))?;
            io.line(format!("probability: {}", render(&p, Rounding::Nearest)))?;
        }
        ModelSpec::Iac => {
            let p =
                Quantity::Exact(crate::counting::iac_exact(n, m).map_err(|e| hint(e, "bound"))?);
            io.line(format!("model: iac  n: {n}  m: {m}"))?;
            io.line(format!("probability: {}", render(&p, Rounding::Nearest)))?;
        }
        _ => {
            return Err(Error::Capability(format!(
                "no exact formula for the {} model; use `peakcount bound`",
                spec.name()
            )))
        }
    }
    Ok(())
}

fn hint(e: Error, cmd: &str) -> Error {
    match e {
        Error::Capability(msg) => Error::Capability(format!("{msg}; try `peakcount {cmd}`")),
        other => other,
    }
}

fn bounds_for(spec: &ModelSpec, n: u64, m: u64) -> Result<Vec<(String, BoundResult)>> {
    let mut out = Vec::new();
    match spec {
        ModelSpec::Ic => out.push(("counting".into(), ic_probability_bounds(n, m)?)),
        ModelSpec::Iac => out.push(("multiset counting".into(), iac_bounds(n, m)?)),
        ModelSpec::Polya { a } => {
            out.push((
                "urn, closed form (may overshoot)".into(),
                BoundResult {
                    lower: Some(polya_lower(n, m, *a)?),
                    upper: None,
                    exact: None,
                    formula: "polya-lower",
                },
            ));
            match polya_lower_certified(n, m, *a) {
                Ok(q) => out.push((
                    "urn, at most two distinct votes (guaranteed)".into(),
                    BoundResult {
                        lower: Some(Quantity::Exact(q)),
                        upper: None,
                        exact: None,
                        formula: "polya-lower-certified",
                    },
                )),
                Err(e) if e.is_capability() => {}
                Err(e) => return Err(e),
            }
            if factorial(m).to_u64() == Some(*a) {
                let simple = polya_lower_simple(n, m)?;
                out.push((
                    "urn, simplified closed form (may overshoot)".into(),
                    BoundResult {
                        lower: Some(Quantity::Log(simple.ln())),
                        upper: None,
                        exact: None,
                        formula: "polya-lower-simple",
                    },
                ));
            }
        }
        ModelSpec::Mallows { phi, .. } => {
            out.push((
                "dispersion".into(),
                BoundResult {
                    lower: Some(Quantity::Exact(mallows_lower(n, m, phi)?)),
                    upper: None,
                    exact: None,
                    formula: "mallows-lower",
                },
            ));
            if *phi == BigRational::new(BigInt::one(), BigInt::from(m)) {
                let (refined, rough) = mallows_lower_simple(n, m)?;
                for (name, q, formula) in [
                    ("phi = 1/m, refined", refined, "mallows-lower-refined"),
                    ("phi = 1/m, rough", rough, "mallows-lower-rough"),
                ] {
                    out.push((
                        name.into(),
                        BoundResult {
                            lower: Some(Quantity::Exact(q)),
                            upper: None,
                            exact: None,
                            formula,
                        },
                    ));
                }
            }
        }
    }
    Ok(out)
}

fn cmd_bound(io: &mut Io, args: &ModelArgs, as_json: bool) -> Result<()> {
    let spec = args.spec()?;
    let (n, m) = (args.n, args.m);
    let results = bounds_for(&spec, n, m)?;
    if as_json {
        let bounds: Vec<Value> = results
            .iter()
            .map(|(_, b)| {
                let mut o = Map::new();
                o.insert("formula".into(), json!(b.formula));
                for (key, q, r) in [
                    ("lower", &b.lower, Rounding::Floor),
                    ("upper", &b.upper, Rounding::Ceil),
                    ("exact", &b.exact, Rounding::Nearest),
                ] {
                    o.insert(
                        key.into(),
                        q.as_ref().map_or(Value::Null, |q| json_quantity(q, r)),
                    );
                }
                Value::Object(o)
            })
            .collect();
        let record = json!({
            "model": spec.name(),
            "n": n,
            "m": m,
            "params": params_json(&spec),
            "bounds": bounds,
        });
        return io.line(record.to_string());
    }
    io.line(format!("model: {spec}  n: {n}  m: {m}"))?;
    for (name, b) in &results {
        io.line(format!("[{name}]"))?;
        if let Some(x) = &b.exact {
            io.line(format!("  exact: {}", render(x, Rounding::Nearest)))?;
        }
        if let Some(x) = &b.lower {
            io.line(format!("  lower: >= {}", render(x, Rounding::Floor)))?;
        }
        if let Some(x) = &b.upper {
            io.line(format!("  upper: <= {}", render(x, Rounding::Ceil)))?;
        }
    }
    Ok(())
}

fn cmd_sample(
    io: &mut Io,
    args: &ModelArgs,
    count: u64,
    seed: u64,
    out: &Option<PathBuf>,
) -> Result<()> {
    let spec = args.spec()?;
    let mut text = String::new();
    text.push_str(&format!("# peakcount sample: model {spec}, seed {seed}\n"));
    for i in 0..count {
        let e = sample(
            &spec,
            args.n as usize,
            args.m as usize,
            &mut RngStream::new(seed, i),
        )?;
        text.push_str(&format!("# election {}\n", i + 1));
        text.push_str(&write_election(&e));
    }
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Parameter(format!("cannot write {}: {e}", path.display()))),
        None => io.line(text.trim_end()),
    }
}

fn cmd_estimate(
    io: &mut Io,
    args: &ModelArgs,
    trials: u64,
    seed: u64,
    workers: usize,
    as_json: bool,
) -> Result<()> {
    let spec = args.spec()?;
    let est = estimate_sp(
        &spec,
        args.n as usize,
        args.m as usize,
        trials,
        seed,
        workers,
    )?;
    if as_json {
        let record = json!({
            "model": spec.name(),
            "n": args.n,
            "m": args.m,
            "params": params_json(&spec),
            "trials": est.trials,
            "successes": est.successes,
            "estimate": json_quantity(&Quantity::Exact(est.point.clone()), Rounding::Nearest),
            "ci_low": json_f64(est.ci_low),
            "ci_high": json_f64(est.ci_high),
            "seed": seed,
        });
        return io.line(record.to_string());
    }
    io.line(format!("model: {spec}  n: {}  m: {}", args.n, args.m))?;
    io.line(format!(
        "trials: {}  successes: {}  seed: {seed}",
        est.trials, est.successes
    ))?;
    io.line(format!("estimate: {}", est.point.to_f64().unwrap_or(0.0)))?;
    io.line(format!(
        "95% interval: [{:.6}, {:.6}]",
        est.ci_low, est.ci_high
    ))
}

fn dispatch(cli: Cli, io: &mut Io) -> Result<()> {
    match cli.command {
        Command::Recognize {
            file,
            explain,
            exhaustive,
        } => cmd_recognize(io, &file, explain, exhaustive),
        Command::Count(args) => cmd_count(io, &args),
        Command::Bound { model, json } => cmd_bound(io, &model, json),
        Command::Tables { which } => {
            let kind = match which {
                Which::Ic => TableKind::Ic,
                Which::Iac => TableKind::Iac,
                Which::Polya => TableKind::Polya,
                Which::Mallows => TableKind::Mallows,
            };
            io.line(table(kind)?.to_string().trim_end())
        }
        Command::Sample {
            model,
            count,
            seed,
            out,
        } => cmd_sample(io, &model, count, seed, &out),
        Command::Estimate {
            model,
            trials,
            seed,
            workers,
            json,
        } => cmd_estimate(io, &model, trials, seed, workers, json),
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// code: 0 on success, 1 for invalid input, 2 when a size guard or a missing
/// closed form stops the request.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_VALIDATION,
            };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    match dispatch(cli, &mut Io { out }) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_capability() {
                EXIT_CAPABILITY
            } else {
                EXIT_VALIDATION
            }
        }
    }
}
