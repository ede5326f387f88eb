//! `cfdim`: estimate, certify and tabulate Hausdorff dimensions of
//! continued-fraction Cantor sets.

mod tables;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cfdim::certify::{certify_with_table, Params};
use cfdim::determinant::estimate_from_table;
use cfdim::disc::optimize_disc;
use cfdim::mobius::DigitSet;
use cfdim::numerics::{format_fixed, format_significant, PrecisionContext};
use cfdim::orbits::cached_orbit_table;
use cfdim::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tables::{Table, TableInputs};

#[derive(Parser, Debug)]
#[command(
    name = "cfdim",
    version,
    about = "Hausdorff dimension of continued-fraction Cantor sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Cap on worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Directory for cached orbit tables.
    #[arg(long, global = true, env = "CFDIM_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    /// Decimal digits carried by every real (default: 1.5 x target + 50).
    #[arg(long, global = true)]
    working_digits: Option<u32>,

    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the zero s_P of the truncated determinant.
    Estimate {
        #[command(flatten)]
        set: SetArg,
        /// Orbit period P.
        #[arg(long, default_value_t = 18)]
        period: usize,
        /// Digits to print and to resolve the zero to.
        #[arg(long, default_value_t = 50)]
        digits: u32,
    },
    /// Certify the dimension to a number of decimal digits and emit a certificate.
    Certify {
        #[command(flatten)]
        set: SetArg,
        #[arg(long, default_value_t = 50)]
        digits: u32,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Print the optimised disc: centre, radius, image radius and contraction ratio.
    Disc {
        #[command(flatten)]
        set: SetArg,
        #[arg(long, default_value_t = 60)]
        digits: u32,
    },
    /// Emit one of the six tables of intermediate quantities.
    Tables {
        /// 1 estimates s_n, 2 coefficients delta_n, 3 Hardy norms,
        /// 4 approximation bounds, 5 Euler bounds, 6 Taylor bounds.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=6))]
        which: u8,
        #[command(flatten)]
        set: SetArg,
        /// Target digits; sets the default working precision.
        #[arg(long, default_value_t = 50)]
        digits: u32,
        #[command(flatten)]
        params: ParamArgs,
        /// Evaluation point s (default: the lower endpoint derived from s_P).
        #[arg(long)]
        s: Option<String>,
        /// Decimal places of the derived lower endpoint.
        #[arg(long)]
        s_digits: Option<u32>,
        /// Orbit period of the estimate behind the derived endpoint (default: P).
        #[arg(long)]
        s_period: Option<usize>,
        /// First row index.
        #[arg(long)]
        from: Option<usize>,
        /// Last row index.
        #[arg(long)]
        to: Option<usize>,
        /// Significant digits per cell.
        #[arg(long)]
        sig: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct SetArg {
    /// Digit set as a comma-separated list.
    #[arg(long = "set", default_value = "1,2")]
    set: DigitSet,
}

#[derive(Args, Debug)]
struct ParamArgs {
    /// Orbit period P.
    #[arg(long)]
    period: Option<usize>,
    /// Taylor-bound cutoff Q.
    #[arg(long = "Q")]
    q: Option<usize>,
    /// Product length M.
    #[arg(long = "M")]
    m: Option<usize>,
    /// Norm truncation N.
    #[arg(long = "N")]
    n: Option<usize>,
}

impl ParamArgs {
    fn resolve(&self) -> Params {
        let desk = Params::DESK;
        Params {
            p: self.period.unwrap_or(desk.p),
            q: self.q.unwrap_or(desk.q),
            m: self.m.unwrap_or(desk.m),
            n: self.n.unwrap_or(desk.n),
        }
    }
}

/// Failure classes mapped to exit statuses.
enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        match err {
            Error::InvalidArgument(_) | Error::PrecisionPolicy { .. } => {
                Failure::Usage(err.to_string())
            }
            other => Failure::Compute(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Failure::Compute(err.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn context(target: u32, working: Option<u32>) -> Result<PrecisionContext, Failure> {
    Ok(match working {
        Some(w) => PrecisionContext::with_working_digits(target, w)?,
        None => PrecisionContext::new(target)?,
    })
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build_global()
            .map_err(|e| Failure::Compute(e.to_string()))?;
    }
    let cache = cli.cache_dir.as_deref();
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Estimate {
            set,
            period,
            digits,
        } => {
            let ctx = context(*digits, cli.working_digits)?;
            let table = cached_orbit_table(&set.set, *period, &ctx, cache)?;
            let s = estimate_from_table(&table, *period, &ctx)?;
            let value = format_fixed(&s, *digits as usize);
            let text = match cli.format.unwrap_or(Format::Text) {
                Format::Json => format!(
                    "{}\n",
                    json!({ "digit_set": set.set, "period": period, "estimate": value })
                ),
                _ => format!("{value}\n"),
            };
            emit(out, &text)
        }
        Command::Certify {
            set,
            digits,
            params,
        } => {
            let params = params.resolve();
            params.validate()?;
            let ctx = context(*digits, cli.working_digits)?;
            let table = cached_orbit_table(&set.set, params.p, &ctx, cache)?;
            let (certificate, failure) = match certify_with_table(&table, &params, &ctx) {
                Ok(c) => (c, None),
                Err(Error::Inconclusive { tail, certificate }) => (
                    *certificate,
                    Some(format!(
                        "certification inconclusive: tail bound {tail}; raise P"
                    )),
                ),
                Err(other) => return Err(other.into()),
            };
            let summary = format!(
                "verdict: {}\ns_minus: {}\ns_plus:  {}\n",
                if certificate.verdict {
                    "certified"
                } else {
                    "not certified"
                },
                certificate.s_minus,
                certificate.s_plus
            );
            let body = match cli.format.unwrap_or(Format::Json) {
                Format::Text => summary.clone(),
                _ => format!("{}\n", certificate.to_json()?),
            };
            match out {
                Some(path) => {
                    fs::write(path, &body)?;
                    print!("{summary}");
                }
                None => {
                    eprint!("{summary}");
                    emit(None, &body)?;
                }
            }
            match failure {
                Some(message) => Err(Failure::Compute(message)),
                None => Ok(()),
            }
        }
        Command::Disc { set, digits } => {
            let ctx = context(*digits, cli.working_digits)?;
            let cd = optimize_disc(&set.set, &ctx)?;
            let sig = *digits as usize;
            let fields = [
                ("c", format_significant(&cd.disc.center, sig)),
                ("rho", format_significant(&cd.disc.radius, sig)),
                ("rho_prime", format_significant(&cd.image_radius, sig)),
                ("h", format_significant(&cd.ratio, sig)),
            ];
            let text = match cli.format.unwrap_or(Format::Text) {
                Format::Json => {
                    let map: serde_json::Map<String, serde_json::Value> = fields
                        .iter()
                        .map(|(k, v)| (k.to_string(), json!(v)))
                        .collect();
                    format!("{}\n", serde_json::Value::Object(map))
                }
                Format::Csv => {
                    let mut text = String::from("quantity,value\n");
                    for (k, v) in &fields {
                        text.push_str(&format!("{k},{v}\n"));
                    }
                    text
                }
                Format::Text => fields.iter().map(|(k, v)| format!("{k} = {v}\n")).collect(),
            };
            emit(out, &text)
        }
        Command::Tables {
            which,
            set,
            digits,
            params,
            s,
            s_digits,
            s_period,
            from,
            to,
            sig,
        } => {
            let params = params.resolve();
            params.validate()?;
            let s_places = s_digits.unwrap_or(*digits);
            let ctx = context((*digits).max(s_places), cli.working_digits)?;
            let rows = match (from, to) {
                (None, None) => None,
                (lo, hi) => Some((lo.unwrap_or(0), hi.unwrap_or(usize::MAX / 2))),
            };
            let inputs = TableInputs {
                digits: &set.set,
                ctx: &ctx,
                period: params.p,
                q: params.q,
                m: params.m,
                n: params.n,
                rows,
                sig: sig.unwrap_or_else(|| (ctx.working_digits() as usize - 10).min(70)),
            };
            let needs_orbits = matches!(which, 1 | 2) || (s.is_none() && s_period.is_none());
            let orbits = if needs_orbits {
                Some(cached_orbit_table(&set.set, params.p, &ctx, cache)?)
            } else {
                None
            };
            let point = match s {
                Some(text) => ctx.parse(text)?,
                None => {
                    let estimate_period = s_period.unwrap_or(params.p);
                    let estimate = match &orbits {
                        Some(table) if table.max_period() >= estimate_period => {
                            estimate_from_table(table, estimate_period, &ctx)?
                        }
                        _ => {
                            let table = cached_orbit_table(&set.set, estimate_period, &ctx, cache)?;
                            estimate_from_table(&table, estimate_period, &ctx)?
                        }
                    };
                    ctx.parse(&tables::lower_endpoint(&estimate, s_places))?
                }
            };
            let table = match which {
                1 => tables::dimension_estimates(orbits.as_ref().expect("built"), &inputs)?,
                2 => tables::determinant_coefficients(
                    orbits.as_ref().expect("built"),
                    &point,
                    &inputs,
                )?,
                3 => tables::hardy_norms(&point, &inputs)?,
                4 => tables::approximation_bounds(&point, &inputs)?,
                5 => tables::euler_bounds(&point, &inputs)?,
                _ => tables::taylor_bounds(&point, &inputs)?,
            };
            let s_text = format_significant(&point, s_places as usize + 1);
            emit(
                out,
                &render(&table, cli.format.unwrap_or(Format::Csv), &s_text),
            )
        }
    }
}

fn render(table: &Table, format: Format, s: &str) -> String {
    match format {
        Format::Csv => {
            let mut text = table.header.join(",");
            text.push('\n');
            for row in &table.rows {
                text.push_str(&row.join(","));
                text.push('\n');
            }
            text
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = table
                .rows
                .iter()
                .map(|row| {
                    table
                        .header
                        .iter()
                        .zip(row)
                        .map(|(h, v)| (h.clone(), json!(v)))
                        .collect::<serde_json::Map<_, _>>()
                        .into()
                })
                .collect();
            format!(
                "{}\n",
                serde_json::to_string_pretty(
                    &json!({ "title": table.title, "s": s, "rows": rows })
                )
                .expect("JSON values serialise")
            )
        }
        Format::Text => {
            let width = table
                .rows
                .iter()
                .map(|r| r[0].len())
                .max()
                .unwrap_or(1)
                .max(table.header[0].len());
            let mut text = format!("# {} at s = {s}\n", table.title);
            text.push_str(&format!(
                "{:>width$}  {}\n",
                table.header[0], table.header[1]
            ));
            for row in &table.rows {
                text.push_str(&format!("{:>width$}  {}\n", row[0], row[1]));
            }
            text
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
