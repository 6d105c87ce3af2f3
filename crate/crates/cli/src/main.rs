use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qha_core::bochner_wiener::{bochner_reconstruct, twisted_pd_check, wiener_report};
use qha_core::convolution::{conv_ab, conv_fa};
use qha_core::coorbit::{co_norm, Window};
use qha_core::correspondence::{apply_rule, verify_berezin_lieb, verify_rule, verify_uniqueness, ConvexFn};
use qha_core::fourier::{fourier_sigma, fourier_weyl, fourier_weyl_inv, wigner};
use qha_core::io::{
    read_json, to_json, wigner_csv, FamilySpec, FunctionSpec, MultiplierSpec, OperatorSpec, RuleSpec, VectorSpec,
};
use qha_core::linalg::Exponent;
use qha_core::suite::{run_verify, RunConfig};
use qha_core::{random, FiniteAbelianGroup, MixedElement, Multiplier, MultiplierKind, PhaseFunction, PhaseSpace, QhaError, Representation};

#[derive(Parser)]
#[command(name = "qha", version, about = "Quantum harmonic analysis on finite abelian phase spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Canonical,
    Weyl,
    Modified,
}

#[derive(Args, Clone)]
struct Common {
    /// Group as cyclic orders, e.g. Z3 or Z2xZ2.
    #[arg(long)]
    group: Option<String>,
    #[arg(long, value_enum, default_value = "canonical")]
    multiplier: KindArg,
    /// Multiplier JSON; overrides --group and --multiplier.
    #[arg(long, value_name = "FILE")]
    multiplier_file: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Write the result here instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full verification suite.
    Verify(Common),
    /// Export the Wigner function of an operator as CSV.
    Wigner {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "FILE")]
        op: PathBuf,
    },
    /// Fourier transforms of operators and functions.
    #[command(subcommand)]
    Fourier(FourierCmd),
    /// Function-operator and operator-operator convolutions.
    #[command(subcommand)]
    Conv(ConvCmd),
    /// Apply or audit a correspondence rule.
    #[command(subcommand)]
    Channel(ChannelCmd),
    /// Regularity report for an operator family.
    Wiener {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "FILE")]
        family: PathBuf,
        #[arg(long, value_name = "FILE")]
        report: Option<PathBuf>,
    },
    /// Twisted positive-definiteness test and reconstruction.
    Bochner {
        #[command(flatten)]
        common: Common,
        #[arg(long = "fn", value_name = "FILE")]
        function: PathBuf,
    },
    /// Wavelet-transform norms.
    #[command(subcommand)]
    Coorbit(CoorbitCmd),
    /// Projective representation tables.
    #[command(subcommand)]
    Rep(RepCmd),
}

#[derive(Subcommand)]
enum FourierCmd {
    /// Fourier–Weyl transform `tr(A U_ξ*)`.
    Weyl {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "FILE")]
        op: PathBuf,
    },
    /// Inverse Fourier–Weyl transform.
    Inverse {
        #[command(flatten)]
        common: Common,
        #[arg(long = "fn", value_name = "FILE")]
        function: PathBuf,
    },
    /// Symplectic Fourier transform of a function.
    Sigma {
        #[command(flatten)]
        common: Common,
        #[arg(long = "fn", value_name = "FILE")]
        function: PathBuf,
    },
}

#[derive(Subcommand)]
enum ConvCmd {
    /// `f∗A`.
    Fa {
        #[command(flatten)]
        common: Common,
        #[arg(long = "fn", value_name = "FILE")]
        function: PathBuf,
        #[arg(long, value_name = "FILE")]
        op: PathBuf,
    },
    /// `A∗B`.
    Ab {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "FILE")]
        a: PathBuf,
        #[arg(long, value_name = "FILE")]
        b: PathBuf,
    },
}

#[derive(Subcommand)]
enum ChannelCmd {
    /// Apply `Γ(f, A) = (A∗B₁, f∗B₂)`.
    Apply {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "FILE")]
        rule: PathBuf,
        #[arg(long = "fn", value_name = "FILE")]
        function: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        op: Option<PathBuf>,
    },
    /// Audit covariance, positivity, Kadison–Schwarz and Berezin–Lieb.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "FILE")]
        rule: PathBuf,
    },
}

#[derive(Subcommand)]
enum CoorbitCmd {
    /// `‖f‖_{p,φ₀}`.
    Wnorm {
        #[command(flatten)]
        common: Common,
        #[arg(long = "vec", value_name = "FILE")]
        vector: PathBuf,
        #[arg(long, default_value = "2")]
        p: String,
        /// Window vector; `e_0` when omitted.
        #[arg(long, value_name = "FILE")]
        window: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum RepCmd {
    /// Tabulate the unitaries `U_z` and their defects.
    Build(Common),
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<QhaError> for Failure {
    fn from(e: QhaError) -> Self {
        match e {
            QhaError::InvalidMultiplier(_) => Failure::Check(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type CliResult = Result<ExitCode, Failure>;

impl Common {
    fn multiplier(&self) -> Result<Multiplier, Failure> {
        if let Some(path) = &self.multiplier_file {
            return Ok(read_json::<MultiplierSpec>(path)?.build()?);
        }
        let spec = self
            .group
            .as_deref()
            .ok_or_else(|| Failure::Usage("--group or --multiplier-file is required".into()))?;
        let g: FiniteAbelianGroup = spec.parse()?;
        let kind = match self.multiplier {
            KindArg::Canonical => MultiplierKind::Canonical,
            KindArg::Weyl => MultiplierKind::Weyl,
            KindArg::Modified => MultiplierKind::Modified,
        };
        Ok(RunConfig::standard(&g, kind, self.seed, self.trials, self.tol)?.multiplier)
    }

    fn representation(&self) -> Result<Representation, Failure> {
        Ok(Representation::new(PhaseSpace::new(self.multiplier()?)?)?)
    }

    fn emit(&self, text: &str) -> Result<(), Failure> {
        match &self.out {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn check_tol(&self) -> Result<(), Failure> {
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Failure::Usage(format!("--tol must be positive, got {}", self.tol)));
        }
        Ok(())
    }
}

fn load_op(path: &Path) -> Result<qha_core::Operator, Failure> {
    Ok(read_json::<OperatorSpec>(path)?.build()?)
}

fn load_fn(path: &Path) -> Result<PhaseFunction, Failure> {
    Ok(read_json::<FunctionSpec>(path)?.build()?)
}

fn status(passed: bool) -> ExitCode {
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_verify(c: &Common) -> CliResult {
    c.check_tol()?;
    let config = RunConfig::new(c.multiplier()?, c.seed, c.trials, c.tol);
    let report = run_verify(&config)?;
    c.emit(&to_json(&report))?;
    if let Some(m) = report.check("multiplier").filter(|m| !m.passed) {
        let dev = |k: &str| m.details[k].as_f64().unwrap_or(f64::NAN);
        return Err(Failure::Check(format!(
            "multiplier check failed: cocycle deviation {:e}, symmetry deviation {:e}, normalization deviation {:e}",
            dev("cocycle_max_dev"),
            dev("symmetry_max_dev"),
            dev("normalization_max_dev")
        )));
    }
    if !report.passed {
        eprintln!("failed checks: {}", report.failed.join(", "));
    }
    Ok(status(report.passed))
}

fn cmd_wigner(c: &Common, op: &Path) -> CliResult {
    let rep = c.representation()?;
    let a = load_op(op)?;
    let w = wigner(&rep, &a)?;
    let min = a.hermitian_part().min_eigenvalue();
    let herm = a.max_abs_diff(&a.adjoint());
    let warning = if herm > c.tol || min < -c.tol {
        Some(format!("input is not a density operator (hermitian deviation {herm:e}, min eigenvalue {min:e})"))
    } else {
        None
    };
    c.emit(&wigner_csv(rep.phase_space(), &w, warning.as_deref()))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_fourier(cmd: &FourierCmd) -> CliResult {
    let (c, out) = match cmd {
        FourierCmd::Weyl { common, op } => {
            let rep = common.representation()?;
            (common, fourier_weyl(&rep, &load_op(op)?)?)
        }
        FourierCmd::Sigma { common, function } => {
            let rep = common.representation()?;
            (common, fourier_sigma(rep.phase_space(), &load_fn(function)?)?)
        }
        FourierCmd::Inverse { common, function } => {
            let rep = common.representation()?;
            let a = fourier_weyl_inv(&rep, &load_fn(function)?)?;
            common.emit(&to_json(&OperatorSpec::from_operator(&a)))?;
            return Ok(ExitCode::SUCCESS);
        }
    };
    c.emit(&to_json(&FunctionSpec::from_function(&out)))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_conv(cmd: &ConvCmd) -> CliResult {
    match cmd {
        ConvCmd::Fa { common, function, op } => {
            let rep = common.representation()?;
            let out = conv_fa(&rep, &load_fn(function)?, &load_op(op)?)?;
            common.emit(&to_json(&OperatorSpec::from_operator(&out)))?;
        }
        ConvCmd::Ab { common, a, b } => {
            let rep = common.representation()?;
            let out = conv_ab(&rep, &load_op(a)?, &load_op(b)?)?;
            common.emit(&to_json(&FunctionSpec::from_function(&out)))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_channel(cmd: &ChannelCmd) -> CliResult {
    match cmd {
        ChannelCmd::Apply {
            common,
            rule,
            function,
            op,
        } => {
            let rep = common.representation()?;
            let rule = read_json::<RuleSpec>(rule)?.build(common.tol)?;
            let n = rep.dim();
            let f = match function {
                Some(p) => load_fn(p)?,
                None => PhaseFunction::zeros(n),
            };
            let a = match op {
                Some(p) => load_op(p)?,
                None => qha_core::Operator::zeros(n),
            };
            let out = apply_rule(&rep, &rule, &MixedElement::new(f, a)?)?;
            let body = json!({
                "function": FunctionSpec::from_function(&out.fun),
                "operator": OperatorSpec::from_operator(&out.op),
            });
            common.emit(&to_json(&body))?;
            Ok(ExitCode::SUCCESS)
        }
        ChannelCmd::Verify { common, rule } => {
            common.check_tol()?;
            let rep = common.representation()?;
            let rule = read_json::<RuleSpec>(rule)?.build(common.tol)?;
            let mut rng = random::rng(common.seed);
            let rr = verify_rule(&rep, &rule, common.trials, &mut rng, common.tol)?;
            let bl = ConvexFn::ALL
                .iter()
                .map(|&phi| verify_berezin_lieb(&rep, &rule, phi, common.trials, &mut rng, common.tol))
                .collect::<Result<Vec<_>, _>>()?;
            let uq = verify_uniqueness(&rep, &rule, common.trials, &mut rng, common.tol * 10.0)?;
            let passed = rr.passed && bl.iter().all(|b| b.passed) && uq.passed;
            let body = json!({
                "generator": random::GENERATOR_NAME,
                "seed": common.seed,
                "rule": rr,
                "berezin_lieb": bl,
                "uniqueness": uq,
                "passed": passed,
            });
            common.emit(&to_json(&body))?;
            Ok(status(passed))
        }
    }
}

fn cmd_wiener(c: &Common, family: &Path, report: Option<&Path>) -> CliResult {
    let rep = c.representation()?;
    let fam = read_json::<FamilySpec>(family)?.build()?;
    let r = wiener_report(&rep, &fam)?;
    let text = to_json(&r);
    match report {
        Some(p) => std::fs::write(p, &text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?,
        None => c.emit(&text)?,
    }
    Ok(status(r.consistent))
}

fn cmd_bochner(c: &Common, function: &Path) -> CliResult {
    let rep = c.representation()?;
    let f = load_fn(function)?;
    let pd = twisted_pd_check(rep.phase_space(), &f, c.tol)?;
    let rec = bochner_reconstruct(&rep, &f, c.tol)?;
    let body = json!({
        "is_pd": pd.is_pd,
        "gram_min_eigenvalue": pd.min_eigenvalue,
        "gram_hermitian_dev": pd.hermitian_dev,
        "certified": rec.certified,
        "operator": OperatorSpec::from_operator(&rec.operator),
        "operator_min_eigenvalue": rec.min_eigenvalue,
        "roundtrip_dev": rec.roundtrip_dev,
    });
    c.emit(&to_json(&body))?;
    Ok(status(pd.is_pd && rec.certified))
}

fn cmd_coorbit(cmd: &CoorbitCmd) -> CliResult {
    let CoorbitCmd::Wnorm {
        common,
        vector,
        p,
        window,
    } = cmd;
    let rep = common.representation()?;
    let p: Exponent = p.parse()?;
    let f = read_json::<VectorSpec>(vector)?.build()?;
    let win = match window {
        Some(path) => Window::new(&rep, read_json::<VectorSpec>(path)?.build()?, 1e-9)?,
        None => Window::basis(&rep),
    };
    let norm = co_norm(&rep, &f, p, &win)?;
    let body = json!({"p": p.to_string(), "norm": norm, "hilbert_norm": f.norm()});
    common.emit(&to_json(&body))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_rep(cmd: &RepCmd) -> CliResult {
    let RepCmd::Build(c) = cmd;
    let rep = c.representation()?;
    let ps = rep.phase_space();
    let unitaries: Vec<_> = (0..rep.points())
        .map(|z| {
            let pt = ps.point(z);
            json!({
                "x": pt.pos.coords(),
                "xi": pt.mom.coords(),
                "operator": OperatorSpec::from_operator(&rep.unitary(z)),
            })
        })
        .collect();
    let body = json!({
        "multiplier": MultiplierSpec::from_multiplier(ps.multiplier()),
        "dim": rep.dim(),
        "points": rep.points(),
        "weight": rep.weight(),
        "ccr_max_dev": rep.ccr_max_dev(),
        "unitarity_max_dev": rep.unitarity_max_dev(),
        "parity": OperatorSpec::from_operator(&rep.parity()),
        "unitaries": unitaries,
    });
    c.emit(&to_json(&body))?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Verify(c) => cmd_verify(c),
        Command::Wigner { common, op } => cmd_wigner(common, op),
        Command::Fourier(cmd) => cmd_fourier(cmd),
        Command::Conv(cmd) => cmd_conv(cmd),
        Command::Channel(cmd) => cmd_channel(cmd),
        Command::Wiener { common, family, report } => cmd_wiener(common, family, report.as_deref()),
        Command::Bochner { common, function } => cmd_bochner(common, function),
        Command::Coorbit(cmd) => cmd_coorbit(cmd),
        Command::Rep(cmd) => cmd_rep(cmd),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
    }
}
