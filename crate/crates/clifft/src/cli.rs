//! Command-line surface. `run` writes everything destined for standard
//! output to the given writer so the commands can be driven in-process.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use clifft_core::cft::{cft_forward, cft_forward_polar, kernel_eval, KernelOracle};
use clifft_core::convolution::{convolution_theorem_check, convolve, translate, translate_spec};
use clifft_core::field::{sample, SampledField};
use clifft_core::grid::Grid;
use clifft_core::interp::Interpolation;
use clifft_core::operators::{apply_angular_exponential, gamma_exponential_oracle};
use clifft_core::spec::FunctionSpec;
use clifft_core::uncertainty::{
    b_membership_check, beurling_report, cowling_price_integrals, gelfand_shilov_integrals, hardy_report,
    QuadratureOptions, UncertaintyParams, VerdictRule, CONVERGED_TOL, GROWTH_THRESHOLD,
};
use clifft_core::{Sign, VectorM};

use crate::criteria::{self, SuiteConfig};
use crate::error::{CliError, Result};
use crate::io::{b_membership_json, load_field_csv, load_spec, report_json, save_field_csv};
use crate::parallel;

#[derive(Debug, Parser)]
#[command(name = "clifft", version, about = "Clifford-Fourier transforms, kernels and uncertainty functionals in Cl(0,m)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Transform a spec or field CSV, write the result as CSV and print the Plancherel ratio.
    Transform(TransformArgs),
    /// Evaluate the transform kernel K(x, y) and its Clifford norm.
    Kernel(KernelArgs),
    /// Evaluate an uncertainty functional and emit a JSON report.
    Uncertainty(UncertaintyArgs),
    /// Translate a spec by y and compare with the exact shift.
    Translate(TranslateArgs),
    /// Clifford convolution of two specs.
    Convolve(ConvolveArgs),
    /// Apply exp(-+ i pi/2 Gamma) on a polar grid (mode path or dense oracle).
    Angular(AngularArgs),
    /// Run the acceptance checks and print a pass/fail table.
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Plus,
    Minus,
}

impl From<SignArg> for Sign {
    fn from(s: SignArg) -> Sign {
        match s {
            SignArg::Plus => Sign::Plus,
            SignArg::Minus => Sign::Minus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum InterpolationArg {
    Linear,
    Cubic,
    Quintic,
}

impl From<InterpolationArg> for Interpolation {
    fn from(i: InterpolationArg) -> Interpolation {
        match i {
            InterpolationArg::Linear => Interpolation::Linear,
            InterpolationArg::Cubic => Interpolation::Cubic,
            InterpolationArg::Quintic => Interpolation::Quintic,
        }
    }
}

#[derive(Clone, Copy, Debug, Args)]
pub struct GridArgs {
    /// Nodes per axis of the Cartesian grid.
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    /// Half-width R of the truncation box [-R, R]^m.
    #[arg(long, default_value_t = 8.0)]
    pub radius: f64,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long, value_enum, default_value_t = SignArg::Minus)]
    pub sign: SignArg,
    /// Function spec (JSON).
    #[arg(long, required_unless_present = "field")]
    pub spec: Option<PathBuf>,
    /// Field CSV sampled on the grid given by --n/--radius.
    #[arg(long, conflicts_with = "spec")]
    pub field: Option<PathBuf>,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Output CSV of the transformed field.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the transform on a polar grid with this many shells.
    #[arg(long)]
    pub n_r: Option<usize>,
    /// Angles per shell of the polar output grid.
    #[arg(long, default_value_t = 256)]
    pub n_theta: usize,
    #[arg(long, value_enum, default_value_t = InterpolationArg::Quintic)]
    pub interpolation: InterpolationArg,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    /// Comma-separated coordinates, e.g. 1,0.
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    #[arg(long, allow_hyphen_values = true)]
    pub y: String,
    #[arg(long, value_enum, default_value_t = SignArg::Minus)]
    pub sign: SignArg,
    /// Cross-check against the dense angular quadrature.
    #[arg(long)]
    pub oracle: bool,
    /// Angular nodes of the oracle.
    #[arg(long, default_value_t = 256)]
    pub n_theta: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FunctionalArg {
    Beurling,
    Hardy,
    CowlingPrice,
    GelfandShilov,
    BMembership,
}

#[derive(Debug, Args)]
pub struct UncertaintyArgs {
    #[arg(value_enum)]
    pub functional: FunctionalArg,
    #[arg(long)]
    pub spec: PathBuf,
    /// Polynomial weight exponent N.
    #[arg(long = "N", default_value_t = 6)]
    pub weight: u32,
    /// Increasing truncation radii, comma-separated.
    #[arg(long, default_value = "4,6,8")]
    pub radii: String,
    #[arg(long, default_value_t = 0.5)]
    pub a: f64,
    #[arg(long, default_value_t = 0.5)]
    pub b: f64,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum, default_value_t = SignArg::Minus)]
    pub sign: SignArg,
    /// Relative change over the last radius pair below which a series is converged.
    #[arg(long, default_value_t = CONVERGED_TOL)]
    pub converged_tol: f64,
    /// Per-step relative growth above which a series is diverging.
    #[arg(long, default_value_t = GROWTH_THRESHOLD)]
    pub growth: f64,
    /// Angles per circle of the radial reduction.
    #[arg(long, default_value_t = 256)]
    pub n_theta: usize,
    /// Sum grid cells instead of sampling circles.
    #[arg(long)]
    pub cells: bool,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TranslateArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub y: String,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Evaluate the kernel integral directly (O(nodes^2), n <= 128).
    #[arg(long)]
    pub kernel: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConvolveArgs {
    #[arg(long)]
    pub f: PathBuf,
    #[arg(long)]
    pub g: PathBuf,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Also check the convolution theorem and commutativity (f must be radial).
    #[arg(long)]
    pub check: bool,
    #[arg(long, value_enum, default_value_t = SignArg::Minus)]
    pub sign: SignArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AngularArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, default_value_t = 64)]
    pub n_r: usize,
    #[arg(long, default_value_t = 64)]
    pub n_theta: usize,
    #[arg(long, default_value_t = 8.0)]
    pub radius: f64,
    #[arg(long, value_enum, default_value_t = SignArg::Minus)]
    pub sign: SignArg,
    /// Write the dense oracle result instead of the mode path.
    #[arg(long)]
    pub oracle: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 128)]
    pub n: usize,
}

/// Largest grid accepted by `translate --kernel`.
pub const KERNEL_TRANSLATE_MAX_N: usize = 128;

pub fn parse_vector(text: &str) -> Result<VectorM> {
    let parts: Vec<&str> = text.split(',').collect();
    let mut v = Vec::with_capacity(parts.len());
    for p in parts {
        match p.trim().parse::<f64>() {
            Ok(x) if x.is_finite() => v.push(x),
            _ => return Err(CliError::Usage(format!("malformed vector {text:?}"))),
        }
    }
    Ok(VectorM::new(v)?)
}

pub fn parse_radii(text: &str) -> Result<Vec<f64>> {
    parse_vector(text)
        .map(|v| v.components().to_vec())
        .map_err(|_| CliError::Usage(format!("malformed radii {text:?}")))
}

fn cartesian(m: usize, grid: &GridArgs) -> Result<Grid> {
    Ok(Grid::cartesian(m, grid.n, grid.radius)?)
}

fn sample_spec(spec: &FunctionSpec, grid: &GridArgs) -> Result<SampledField> {
    Ok(sample(spec, &cartesian(spec.m(), grid)?)?)
}

fn emit(out: &mut dyn Write, text: &str, path: Option<&PathBuf>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => Ok(writeln!(out, "{text}")?),
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Transform(a) => transform(a, out),
        Command::Kernel(a) => kernel(a, out),
        Command::Uncertainty(a) => uncertainty(a, out),
        Command::Translate(a) => translate_cmd(a, out),
        Command::Convolve(a) => convolve_cmd(a, out),
        Command::Angular(a) => angular(a, out),
        Command::Selftest(a) => selftest(a, out),
    }
}

fn transform(a: TransformArgs, out: &mut dyn Write) -> Result<()> {
    if a.m % 2 != 0 {
        return Err(CliError::Usage(format!("m must be even, got {}", a.m)));
    }
    let f = match (&a.spec, &a.field) {
        (Some(path), _) => {
            let spec = load_spec(path)?;
            if spec.m() != a.m {
                return Err(CliError::Usage(format!("spec has m = {} but --m is {}", spec.m(), a.m)));
            }
            sample_spec(&spec, &a.grid)?
        }
        (None, Some(path)) => load_field_csv(path, &cartesian(a.m, &a.grid)?)?,
        (None, None) => return Err(CliError::Usage(String::from("one of --spec or --field is required"))),
    };
    let sign = Sign::from(a.sign);
    let ff = cft_forward(&f, sign)?;
    let nf = f.lp_norm(2.0)?;
    let nff = ff.lp_norm(2.0)?;
    let ratio = if nf > 0.0 { nff / nf } else { 1.0 };
    if let Some(path) = &a.out {
        match a.n_r {
            Some(n_r) => {
                let polar = Grid::polar(n_r, a.n_theta, a.grid.radius)?;
                save_field_csv(&cft_forward_polar(&f, sign, &polar, a.interpolation.into())?, path)?;
            }
            None => save_field_csv(&ff, path)?,
        }
    }
    writeln!(out, "norm_f {nf:.15e}")?;
    writeln!(out, "norm_transform {nff:.15e}")?;
    writeln!(out, "plancherel_ratio {ratio:.12}")?;
    Ok(())
}

fn kernel(a: KernelArgs, out: &mut dyn Write) -> Result<()> {
    let x = parse_vector(&a.x)?;
    let y = parse_vector(&a.y)?;
    if x.m() != y.m() {
        return Err(CliError::Usage(format!("x has {} coordinates but y has {}", x.m(), y.m())));
    }
    let sign = Sign::from(a.sign);
    let k = kernel_eval(&x, &y, sign)?;
    writeln!(out, "{k}")?;
    writeln!(out, "norm {}", k.norm())?;
    if a.oracle {
        let o = KernelOracle::new(a.n_theta, sign)?.eval(&x, &y)?;
        writeln!(out, "oracle {o}")?;
        writeln!(out, "oracle_diff {:e}", (&k - &o).norm())?;
    }
    Ok(())
}

fn uncertainty(a: UncertaintyArgs, out: &mut dyn Write) -> Result<()> {
    let mut params = UncertaintyParams::new(a.weight, parse_radii(&a.radii)?);
    params.a = a.a;
    params.b = a.b;
    params.alpha = a.alpha;
    params.beta = a.beta;
    params.p = a.p;
    params.q = a.q;
    params.validate()?;
    if !(a.converged_tol > 0.0 && a.growth > 0.0) {
        return Err(CliError::Usage(String::from("--converged-tol and --growth must be positive")));
    }
    let rule = VerdictRule { converged_tol: a.converged_tol, growth: a.growth };
    let opts = QuadratureOptions { n_theta: a.n_theta, cells: a.cells, ..QuadratureOptions::default() };
    let spec = load_spec(&a.spec)?;
    let f = sample_spec(&spec, &a.grid)?;
    let ff = cft_forward(&f, a.sign.into())?;
    let text = match a.functional {
        FunctionalArg::Beurling => report_json(&beurling_report(&f, &ff, &params, &rule, &opts)?, &params, spec.m()),
        FunctionalArg::Hardy => report_json(&hardy_report(&f, &ff, &params)?, &params, spec.m()),
        FunctionalArg::CowlingPrice => {
            report_json(&cowling_price_integrals(&f, &ff, &params, &rule, &opts)?, &params, spec.m())
        }
        FunctionalArg::GelfandShilov => {
            report_json(&gelfand_shilov_integrals(&f, &ff, &params, &rule, &opts)?, &params, spec.m())
        }
        FunctionalArg::BMembership => {
            b_membership_json(&b_membership_check(&f, &ff, params.n, &params.radii, &rule, &opts)?, params.n)
        }
    };
    emit(out, &text, a.out.as_ref())
}

fn translate_cmd(a: TranslateArgs, out: &mut dyn Write) -> Result<()> {
    let spec = load_spec(&a.spec)?;
    let y = parse_vector(&a.y)?;
    let grid = cartesian(spec.m(), &a.grid)?;
    let f = sample(&spec, &grid)?;
    let t = if a.kernel {
        if a.grid.n > KERNEL_TRANSLATE_MAX_N {
            return Err(CliError::Usage(format!("--kernel needs --n <= {KERNEL_TRANSLATE_MAX_N}")));
        }
        parallel::translate_by_kernel(&f, std::slice::from_ref(&y))?.remove(0)
    } else {
        translate(&f, &y)?
    };
    let exact = translate_spec(&spec, &y, &grid)?;
    if let Some(path) = &a.out {
        save_field_csv(&t, path)?;
    }
    writeln!(out, "sup_error_vs_exact {:e}", t.sub(&exact)?.sup_norm())?;
    Ok(())
}

fn convolve_cmd(a: ConvolveArgs, out: &mut dyn Write) -> Result<()> {
    let fs = load_spec(&a.f)?;
    let gs = load_spec(&a.g)?;
    if fs.m() != gs.m() {
        return Err(CliError::Usage(format!("specs have m = {} and m = {}", fs.m(), gs.m())));
    }
    let grid = cartesian(fs.m(), &a.grid)?;
    let c = convolve(&sample(&fs, &grid)?, &sample(&gs, &grid)?)?;
    if let Some(path) = &a.out {
        save_field_csv(&c, path)?;
    }
    writeln!(out, "sup {:e}", c.sup_norm())?;
    if a.check {
        let rep = convolution_theorem_check(&fs, &gs, &grid, a.sign.into())?;
        writeln!(out, "theorem_sup {:e}", rep.transform_sup)?;
        writeln!(out, "theorem_relative {:e}", rep.transform_relative)?;
        writeln!(out, "commutativity_sup {:e}", rep.commutativity_sup)?;
        writeln!(out, "commutativity_relative {:e}", rep.commutativity_relative)?;
    }
    Ok(())
}

fn angular(a: AngularArgs, out: &mut dyn Write) -> Result<()> {
    let spec = load_spec(&a.spec)?;
    let grid = Grid::polar(a.n_r, a.n_theta, a.radius)?;
    let f = sample(&spec, &grid)?;
    let sign = Sign::from(a.sign);
    let modes = apply_angular_exponential(&f, sign)?;
    let dense = gamma_exponential_oracle(&f, sign)?;
    if let Some(path) = &a.out {
        save_field_csv(if a.oracle { &dense } else { &modes }, path)?;
    }
    writeln!(out, "sup_modes_vs_oracle {:e}", modes.sub(&dense)?.sup_norm())?;
    Ok(())
}

fn selftest(a: SelftestArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = SuiteConfig::new(a.n);
    let outcomes = criteria::run_all(&cfg, true);
    write!(out, "{}", criteria::render(&cfg, &outcomes))?;
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    if failed > 0 {
        return Err(CliError::Numerical(format!("{failed} of {} checks failed", outcomes.len())));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn vectors() {
        assert_eq!(parse_vector("1, -2.5").unwrap().components(), &[1.0, -2.5]);
        assert!(matches!(parse_vector("1,,2"), Err(CliError::Usage(_))));
        assert!(parse_vector("").is_err());
        assert!(parse_vector("1,nan").is_err());
    }

    #[test]
    fn kernel_at_origin() {
        let cli = Cli::parse_from(["clifft", "kernel", "--x", "0,0", "--y", "2,1"]);
        let mut buf = Vec::new();
        run(cli, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next(), Some("1+0i"));
    }

    #[test]
    fn odd_dimension_is_rejected() {
        let cli = Cli::parse_from(["clifft", "transform", "--m", "3", "--spec", "missing.json"]);
        let err = run(cli, &mut Vec::new()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("m must be even"));
    }
}
