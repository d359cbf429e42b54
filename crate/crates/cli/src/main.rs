use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use milnor_core::bsreport::{self, load_bfixture, load_spectrum_fixture, ReportConfig};
use milnor_core::jacobian::{gamma, MilnorContext};
use milnor_core::koszulss::{default_ss_hi, pole_spectrum_from, SSTable, SpectralSequence};
use milnor_core::localinv::{local_milnor, local_tjurina, LocalGerm};
use milnor_core::polyforms::parse_poly;
use milnor_core::spectra::{
    puiseux_spectrum_below1, qh_spectrum, symmetrize, ts_join, PuiseuxPairs, SpectrumMS,
    WeightSystem,
};
use milnor_core::vfilt::{attained_values, example_conditions, grv_vanishes, VCondition};
use milnor_core::{Poly, Rational};

#[derive(Parser)]
#[command(
    name = "milnor",
    version,
    about = "Graded Milnor algebras and pole order spectral sequences"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Dimensions of M_k, M'_k, M''_k, N_k over a window.
    Hilbert(PolyArgs),
    /// Pages of the pole order spectral sequence.
    SsTable(PolyArgs),
    /// Steenbrink spectra.
    Spectrum {
        #[command(subcommand)]
        kind: SpectrumCmd,
    },
    /// Monomial V-filtration criteria.
    Vfilt(VfiltArgs),
    /// Milnor and Tjurina numbers at a point.
    Local(LocalArgs),
    /// Run a verification report; exit code 0 pass, 1 fail, 2 inconclusive.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PolyArgs {
    /// Homogeneous polynomial, e.g. `x^5+y^4*z+x^4*y`.
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    poly: Option<String>,
    /// One of the bundled examples f1..f4.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, default_value = "x,y,z", value_delimiter = ',')]
    vars: Vec<String>,
    /// Degree window `A..B`.
    #[arg(long)]
    range: Option<String>,
    /// Last page computed.
    #[arg(long, default_value_t = milnor_core::koszulss::DEFAULT_R_MAX)]
    pages: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Subcommand)]
enum SpectrumCmd {
    /// Quasi-homogeneous germ with the given weights, e.g. `1/5,1/4`.
    Qh {
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<String>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Irreducible plane curve from Puiseux pairs `k:n`, e.g. `5:4`.
    Puiseux {
        #[arg(long, value_delimiter = ',', required = true)]
        pairs: Vec<String>,
        /// Complete to the full spectrum by symmetry about 1.
        #[arg(long)]
        full: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Thom-Sebastiani sum of two spectra given as value lists or fixtures.
    Join {
        #[arg(long, value_delimiter = ',')]
        left: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        right: Vec<String>,
        /// Spectrum fixtures `{"spectrum": [...]}`, used in place of the lists.
        #[arg(long, num_args = 2)]
        fixture: Vec<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args)]
struct VfiltArgs {
    /// Affine condition such as `(4i+5j+9)/20`; repeatable. Defaults to the
    /// conditions for x^5+x^4y+y^4.
    #[arg(long = "cond")]
    conds: Vec<String>,
    #[arg(long, default_value = "i,j,k", value_delimiter = ',')]
    vars: Vec<String>,
    /// Test vanishing of Gr_V at these values.
    #[arg(long, value_delimiter = ',')]
    alpha: Vec<String>,
    /// Search bound per exponent.
    #[arg(long)]
    bound: Option<i64>,
    /// List the values attained below this bound instead.
    #[arg(long)]
    values: Option<i64>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct LocalArgs {
    /// Projective hypersurface, with --point; or an affine germ at the origin.
    #[arg(long)]
    poly: String,
    #[arg(long, default_value = "x,y,z", value_delimiter = ',')]
    vars: Vec<String>,
    /// Projective point `a:b:c`. Without it the polynomial is a germ at 0.
    #[arg(long)]
    point: Option<String>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Bundled configuration: f1, f2, f3 or f4.
    #[arg(long, conflicts_with = "poly", required_unless_present = "poly")]
    preset: Option<String>,
    #[arg(long)]
    poly: Option<String>,
    #[arg(long, default_value = "x,y,z", value_delimiter = ',')]
    vars: Vec<String>,
    /// b-function fixture for --poly.
    #[arg(long)]
    fixture: Option<PathBuf>,
    /// Local spectrum fixtures, one per singular point, for --poly.
    #[arg(long = "local-spectrum")]
    local_spectra: Vec<PathBuf>,
    /// Singular points `a:b:c` for --poly; repeatable.
    #[arg(long = "point")]
    points: Vec<String>,
    /// Degree window for the root comparisons.
    #[arg(long)]
    range: Option<String>,
    #[arg(long)]
    pages: Option<usize>,
    #[command(flatten)]
    out: OutArgs,
}

fn parse_range(text: &str) -> Result<(i32, i32)> {
    let (a, b) = text
        .split_once("..")
        .ok_or_else(|| anyhow!("range must look like A..B, got `{text}`"))?;
    let a: i32 = a.trim().parse().context("range start")?;
    let b: i32 = b.trim().parse().context("range end")?;
    if a > b {
        bail!("empty range {a}..{b}");
    }
    Ok((a, b))
}

fn parse_rational(text: &str) -> Result<Rational> {
    let point = bsreport::parse_point(text)?;
    match point.as_slice() {
        [x] => Ok(x.clone()),
        _ => bail!("`{text}` is not a rational number"),
    }
}

fn emit(out: &OutArgs, text: String) -> Result<()> {
    match &out.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json") + "\n"
}

fn context(args: &PolyArgs) -> Result<MilnorContext> {
    let f: Poly = match (&args.poly, &args.preset) {
        (Some(p), _) => parse_poly(p, &args.vars)?,
        (None, Some(name)) => {
            let cfg = bsreport::preset(name)?;
            cfg.validate()?
        }
        (None, None) => bail!("one of --poly or --preset is required"),
    };
    Ok(MilnorContext::new(f)?)
}

fn hilbert(args: &PolyArgs) -> Result<()> {
    let ctx = context(args)?;
    let (lo, hi) = match &args.range {
        Some(r) => parse_range(r)?,
        None => (ctx.n() as i32, 2 * ctx.nd()),
    };
    let row = ctx.hilbert_row(lo, hi)?;
    let nu: Vec<usize> = (lo..=hi).map(|k| ctx.nu(k)).collect();
    let gam: Vec<usize> = (lo..=hi).map(|k| gamma(ctx.d(), ctx.n(), k)).collect();
    let columns: Vec<(&str, &[usize])> = vec![
        ("gamma_k", &gam),
        ("mu'_k", &row.mu_prime),
        ("mu''_k", &row.mu_double_prime),
        ("nu_k", &nu),
        ("mu_k", &row.mu),
    ];
    let text = match args.out.format {
        Format::Json => pretty(&json!({
            "lo": lo, "hi": hi, "gamma": gam, "mu": row.mu, "mu_prime": row.mu_prime,
            "mu_double_prime": row.mu_double_prime, "nu": nu,
        })),
        Format::Csv => {
            let mut s = String::from("row");
            for k in lo..=hi {
                s += &format!(",{k}");
            }
            s.push('\n');
            for (label, vals) in &columns {
                s += label;
                for v in vals.iter() {
                    s += &format!(",{v}");
                }
                s.push('\n');
            }
            s
        }
        Format::Text => {
            let w = (lo..=hi)
                .map(|k| k.to_string().len())
                .max()
                .unwrap_or(2)
                .max(2);
            let mut s = format!("{:>8}", "k:");
            for k in lo..=hi {
                s += &format!(" {k:>w$}");
            }
            s.push('\n');
            for (label, vals) in &columns {
                s += &format!("{:>8}", format!("{label}:"));
                for v in vals.iter() {
                    s += &format!(" {v:>w$}");
                }
                s.push('\n');
            }
            s
        }
    };
    emit(&args.out, text)
}

fn ss_table(args: &PolyArgs) -> Result<()> {
    let ctx = context(args)?;
    let (lo, hi) = match &args.range {
        Some(r) => parse_range(r)?,
        None => (ctx.n() as i32, ctx.nd() - 1),
    };
    if args.pages < 2 {
        bail!("--pages must be at least 2");
    }
    let ss = SpectralSequence::compute(&ctx, hi.max(default_ss_hi(&ctx)), args.pages)?;
    let table = SSTable::build(&ctx, &ss, lo.max(0))?.restrict(lo, hi);
    let text = match args.out.format {
        Format::Text => {
            let poles = pole_spectrum_from(&ss);
            let mut s = table.to_text();
            s += &format!("pole spectrum: {}", poles.spectrum);
            if !poles.is_certain() {
                s += " (not certified at all degrees)";
            }
            s.push('\n');
            s
        }
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json() + "\n",
    };
    emit(&args.out, text)
}

fn spectrum_from_list(values: &[String]) -> Result<SpectrumMS> {
    Ok(SpectrumMS::from_values(
        values
            .iter()
            .map(|v| parse_rational(v))
            .collect::<Result<Vec<_>>>()?,
    ))
}

fn spectrum(kind: &SpectrumCmd) -> Result<()> {
    let (s, out) = match kind {
        SpectrumCmd::Qh { weights, out } => {
            let w = weights
                .iter()
                .map(|v| parse_rational(v))
                .collect::<Result<Vec<_>>>()?;
            (qh_spectrum(&WeightSystem::new(w)?), out)
        }
        SpectrumCmd::Puiseux { pairs, full, out } => {
            let parsed = pairs
                .iter()
                .map(|p| {
                    let (k, n) = p
                        .split_once(':')
                        .ok_or_else(|| anyhow!("pair must look like k:n, got `{p}`"))?;
                    Ok((k.trim().parse()?, n.trim().parse()?))
                })
                .collect::<Result<Vec<(u64, u64)>>>()?;
            let below = puiseux_spectrum_below1(&PuiseuxPairs::new(parsed)?);
            let s = if *full {
                symmetrize(&below, &Rational::from_integer(1.into()))?
            } else {
                below
            };
            (s, out)
        }
        SpectrumCmd::Join {
            left,
            right,
            fixture,
            out,
        } => {
            let (a, b) = match fixture.as_slice() {
                [a, b] => (load_spectrum_fixture(a)?, load_spectrum_fixture(b)?),
                [] => (spectrum_from_list(left)?, spectrum_from_list(right)?),
                _ => bail!("--fixture takes exactly two files"),
            };
            (ts_join(&a, &b), out)
        }
    };
    let text = match out.format {
        Format::Json => pretty(&json!(s)),
        Format::Csv => {
            let mut t = String::from("value,mult\n");
            for (v, m) in s.iter() {
                t += &format!("{v},{m}\n");
            }
            t
        }
        Format::Text => format!("{s}\n"),
    };
    emit(out, text)
}

fn vfilt(args: &VfiltArgs) -> Result<()> {
    let conds = if args.conds.is_empty() {
        example_conditions()
    } else {
        args.conds
            .iter()
            .map(|c| VCondition::parse(c, &args.vars))
            .collect::<milnor_core::Result<Vec<_>>>()?
    };
    if let Some(bound) = args.values {
        let vals: Vec<String> = attained_values(&conds, bound)?
            .iter()
            .map(|v| v.to_string())
            .collect();
        let text = match args.out.format {
            Format::Json => pretty(&json!(vals)),
            Format::Csv => vals.join("\n") + "\n",
            Format::Text => vals.join(" ") + "\n",
        };
        return emit(&args.out, text);
    }
    if args.alpha.is_empty() {
        bail!("give --alpha values or --values BOUND");
    }
    let mut rows = Vec::new();
    for a in &args.alpha {
        let alpha = parse_rational(a)?;
        rows.push((alpha.to_string(), grv_vanishes(&alpha, &conds, args.bound)?));
    }
    let text = match args.out.format {
        Format::Json => pretty(&json!(rows
            .iter()
            .map(|(a, v)| json!({ "alpha": a, "vanishes": v }))
            .collect::<Vec<_>>())),
        Format::Csv => {
            let mut t = String::from("alpha,vanishes\n");
            for (a, v) in &rows {
                t += &format!("{a},{v}\n");
            }
            t
        }
        Format::Text => rows
            .iter()
            .map(|(a, v)| format!("Gr_V^{a} {}\n", if *v { "vanishes" } else { "is nonzero" }))
            .collect(),
    };
    emit(&args.out, text)
}

fn local(args: &LocalArgs) -> Result<()> {
    let f = parse_poly(&args.poly, &args.vars)?;
    let germ = match &args.point {
        Some(p) => LocalGerm::at_point(&f, &bsreport::parse_point(p)?)?,
        None => LocalGerm::new(f)?,
    };
    let (mu, tau) = (local_milnor(&germ)?, local_tjurina(&germ)?);
    let text = match args.out.format {
        Format::Json => pretty(&json!({ "mu": mu, "tau": tau })),
        Format::Csv => format!("mu,tau\n{mu},{tau}\n"),
        Format::Text => format!("mu = {mu}\ntau = {tau}\n"),
    };
    emit(&args.out, text)
}

fn verify_config(args: &VerifyArgs) -> Result<ReportConfig> {
    let mut cfg = match (&args.preset, &args.poly) {
        (Some(name), _) => bsreport::preset(name)?,
        (None, Some(p)) => {
            let vars: Vec<&str> = args.vars.iter().map(String::as_str).collect();
            let mut cfg = ReportConfig::new("custom", p, &vars);
            cfg.points = args
                .points
                .iter()
                .map(|p| bsreport::parse_point(p))
                .collect::<milnor_core::Result<_>>()?;
            if let Some(path) = &args.fixture {
                cfg.bfunction = Some(load_bfixture(path)?);
            }
            if !args.local_spectra.is_empty() {
                cfg.local_spectra = Some(
                    args.local_spectra
                        .iter()
                        .map(|p| load_spectrum_fixture(p))
                        .collect::<milnor_core::Result<_>>()?,
                );
            }
            cfg
        }
        (None, None) => bail!("one of --preset or --poly is required"),
    };
    if let Some(r) = &args.range {
        cfg.r0_window = parse_range(r)?;
    }
    if let Some(p) = args.pages {
        cfg.r_max = p;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn verify(args: &VerifyArgs) -> Result<ExitCode> {
    let cfg = verify_config(args)?;
    let report = bsreport::run_report(&cfg)?;
    let text = match args.out.format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => {
            let mut t = String::from("name,status\n");
            for c in &report.checks {
                t += &format!(
                    "\"{}\",{}\n",
                    c.name.replace('"', "\"\""),
                    json!(c.status).as_str().unwrap_or("")
                );
            }
            t
        }
        Format::Text => report.to_text(),
    };
    emit(&args.out, text)?;
    Ok(ExitCode::from(report.exit_code() as u8))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match &cli.cmd {
        Cmd::Hilbert(a) => hilbert(a)?,
        Cmd::SsTable(a) => ss_table(a)?,
        Cmd::Spectrum { kind } => spectrum(kind)?,
        Cmd::Vfilt(a) => vfilt(a)?,
        Cmd::Local(a) => local(a)?,
        Cmd::Verify(a) => return verify(a),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
