//! Command-line front end: argument parsing, dispatch and output formatting.

pub mod doc;
pub mod selftest;

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hypercov::multivariate::{gram_multivar, make_bivariate, validate, BivariateVariant, ConditionSet};
use hypercov::oracles::{convergence_harness_with, gram, simulate_field, LimitPath};
use hypercov::univariate::{
    check_param_space, cov_eval, descente, make_askey, make_spherical, make_wendland, montee, smoothness,
    spectral_eval, KernelParams, LimitFamily, LimitKernelSpec, Transfer,
};
use hypercov::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERICAL: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_INPUT: i32 = 65;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "hypercov", version, about = "Gauss hypergeometric covariance kernels")]
struct Cli {
    /// Output format
    #[arg(long, value_enum, global = true, default_value = "csv")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct KernelArgs {
    #[arg(long)]
    d: usize,
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    gamma: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma2: f64,
}

#[derive(Debug, Args)]
struct ShapeArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    gamma: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Covariance at a radius or over a grid start:stop:count
    Eval {
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long)]
        r: String,
    },
    /// Spectral density at a frequency or over a grid start:stop:count
    Spectral {
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long)]
        u: String,
    },
    /// Membership of (alpha, beta, gamma) in the admissible region
    CheckParams {
        #[command(flatten)]
        shapes: ShapeArgs,
    },
    /// Differentiability orders at the origin and at the range
    Smoothness {
        #[command(flatten)]
        shapes: ShapeArgs,
    },
    /// Montée of order k
    Montee {
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long)]
        k: usize,
    },
    /// Descente of order k
    Descente {
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long)]
        k: usize,
    },
    /// Parameters of a named special case
    Make {
        #[command(subcommand)]
        kind: MakeKind,
    },
    /// Validity of a multivariate model document under a condition set
    CheckMultivar {
        #[arg(long)]
        model: String,
        #[arg(long)]
        condition_set: Option<String>,
    },
    /// Gram matrix eigenvalue summary over a points file
    Gram {
        #[arg(long)]
        points: String,
        /// Multivariate model document; the univariate kernel flags are used otherwise
        #[arg(long)]
        model: Option<String>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
    },
    /// Gaussian realizations over a points file
    Simulate {
        #[arg(long)]
        points: String,
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long, default_value_t = 1)]
        n_real: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Convergence trace towards a limit kernel
    Converge {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[arg(long, default_value_t = 0.5)]
        shape: f64,
        #[arg(long, default_value_t = 0.0)]
        shape2: f64,
        #[arg(long, value_enum, default_value = "default")]
        path: PathArg,
        #[arg(long, default_value_t = 4)]
        steps: usize,
        #[arg(long, default_value_t = 1)]
        d: usize,
    },
    /// Fast oracle checks
    Selftest {
        /// Include the slow checks
        #[arg(long)]
        nightly: bool,
    },
}

#[derive(Debug, Subcommand)]
enum MakeKind {
    Spherical {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0.0)]
        kappa: f64,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[command(flatten)]
        out: MakeOutput,
    },
    Askey {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        ell: f64,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[command(flatten)]
        out: MakeOutput,
    },
    Wendland {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        kappa: f64,
        #[arg(long)]
        ell: f64,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[command(flatten)]
        out: MakeOutput,
    },
    Bivariate {
        #[arg(long)]
        variant: String,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long)]
        shape1: f64,
        #[arg(long)]
        shape2: f64,
        #[arg(long)]
        common: f64,
        #[arg(long)]
        rho: Option<f64>,
    },
}

#[derive(Debug, Args)]
struct MakeOutput {
    /// Print the (alpha, beta, gamma) parameters
    #[arg(long)]
    emit_params: bool,
    /// Evaluate the covariance at a radius or grid instead
    #[arg(long)]
    r: Option<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    Matern,
    Gaussian,
    Incgamma,
    Erfc,
    Laguerre,
    Tricomi,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PathArg {
    Default,
    BetaToAlpha,
}

enum Failure {
    Usage(String),
    Input(String),
    Validation(Value),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonConvergence { .. } | Error::Quadrature(_) | Error::Pole(_) => Failure::Numerical(e.to_string()),
            Error::ParamSpace(_) => Failure::Validation(json!({"error": "param_space", "message": e.to_string()})),
            _ => Failure::Validation(json!({"error": "invalid", "message": e.to_string()})),
        }
    }
}

type Outcome = Result<Output, Failure>;

/// What a command prints: a table, a structured report, or both with an exit code.
enum Output {
    Table { header: Vec<String>, rows: Vec<Vec<f64>> },
    Report(Value),
    Fail(Value, Value, i32),
}

/// Rounds to 15 significant digits; the trailing digits of a kernel value are rounding noise.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

fn num(x: f64) -> String {
    format!("{:?}", round_sig(x))
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Null => out.push((prefix.to_string(), String::new())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn write_value(w: &mut dyn Write, format: Format, v: &Value) -> std::io::Result<()> {
    match format {
        Format::Json => writeln!(w, "{}", serde_json::to_string_pretty(v).expect("serializable")),
        Format::Csv => {
            let mut rows = Vec::new();
            flatten("", v, &mut rows);
            writeln!(w, "key,value")?;
            for (k, x) in rows {
                writeln!(w, "{k},{x}")?;
            }
            Ok(())
        }
    }
}

fn write_table(w: &mut dyn Write, format: Format, header: &[String], rows: &[Vec<f64>]) -> std::io::Result<()> {
    match format {
        Format::Csv => {
            writeln!(w, "{}", header.join(","))?;
            for row in rows {
                writeln!(w, "{}", row.iter().map(|&x| num(x)).collect::<Vec<_>>().join(","))?;
            }
            Ok(())
        }
        Format::Json => {
            let objs: Vec<Value> = rows
                .iter()
                .map(|row| Value::Object(header.iter().cloned().zip(row.iter().map(|&x| json!(round_sig(x)))).collect()))
                .collect();
            writeln!(w, "{}", serde_json::to_string_pretty(&objs).expect("serializable"))
        }
    }
}

/// Parses a single value or an inclusive grid `start:stop:count`.
pub fn parse_abscissae(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let parse = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("cannot parse {t:?} as a number"));
    match parts.as_slice() {
        [one] => Ok(vec![parse(one)?]),
        [start, stop, count] => {
            let (a, b) = (parse(start)?, parse(stop)?);
            let n: usize = count.trim().parse().map_err(|_| format!("grid count {count:?} must be a positive integer"))?;
            if n == 0 {
                return Err("grid count must be positive".into());
            }
            if n == 1 {
                return Ok(vec![a]);
            }
            Ok((0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect())
        }
        _ => Err(format!("expected a number or start:stop:count, got {s:?}")),
    }
}

fn abscissae(s: &str) -> Result<Vec<f64>, Failure> {
    parse_abscissae(s).map_err(Failure::Usage)
}

fn kernel(k: &KernelArgs) -> Result<KernelParams, Failure> {
    Ok(KernelParams::with_sigma2(k.a, k.alpha, k.beta, k.gamma, k.sigma2)?)
}

fn read_file(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {path}: {e}")))
}

fn table(header: &[&str], rows: Vec<Vec<f64>>) -> Output {
    Output::Table {
        header: header.iter().map(|s| s.to_string()).collect(),
        rows,
    }
}

fn params_json(p: &KernelParams, d: usize) -> Value {
    json!({"d": d, "a": p.a, "alpha": p.alpha, "beta": p.beta, "gamma": p.gamma})
}

fn transfer_json(t: &Transfer) -> Value {
    json!({
        "dim": t.dim,
        "scale": t.scale,
        "params": {"a": t.params.a, "alpha": t.params.alpha, "beta": t.params.beta, "gamma": t.params.gamma, "sigma2": t.params.sigma2},
    })
}

fn eval_table(p: &KernelParams, d: usize, r: &str) -> Outcome {
    let mut rows = Vec::new();
    for x in abscissae(r)? {
        rows.push(vec![x, cov_eval(p, d, x)?]);
    }
    Ok(table(&["r", "cov"], rows))
}

fn make_output(p: KernelParams, d: usize, out: &MakeOutput) -> Outcome {
    match (&out.r, out.emit_params) {
        (Some(r), false) => eval_table(&p, d, r),
        _ => Ok(Output::Report(params_json(&p, d))),
    }
}

fn execute(cmd: Command) -> Outcome {
    match cmd {
        Command::Eval { kernel: k, r } => eval_table(&kernel(&k)?, k.d, &r),
        Command::Spectral { kernel: k, u } => {
            let p = kernel(&k)?;
            let mut rows = Vec::new();
            for x in abscissae(&u)? {
                rows.push(vec![x, spectral_eval(&p, k.d, x)?]);
            }
            Ok(table(&["u", "spectral"], rows))
        }
        Command::CheckParams { shapes: s } => {
            let rep = check_param_space(s.alpha, s.beta, s.gamma, s.d);
            let report = json!({
                "dimension": rep.dimension,
                "in_space": rep.in_space,
                "cond_alpha": rep.cond_alpha,
                "cond_product": rep.cond_product,
                "cond_sum": rep.cond_sum,
                "boundary": rep.boundary,
                "failures": rep.failures(),
            });
            if rep.in_space {
                Ok(Output::Report(report))
            } else {
                let diag = json!({"error": "param_space", "failures": rep.failures()});
                Ok(Output::Fail(report, diag, EXIT_VALIDATION))
            }
        }
        Command::Smoothness { shapes: s } => {
            let p = KernelParams::new(1.0, s.alpha, s.beta, s.gamma)?;
            Ok(Output::Report(serde_json::to_value(smoothness(&p, s.d)?).expect("serializable")))
        }
        Command::Montee { kernel: k, k: order } => Ok(Output::Report(transfer_json(&montee(&kernel(&k)?, k.d, order)?))),
        Command::Descente { kernel: k, k: order } => {
            Ok(Output::Report(transfer_json(&descente(&kernel(&k)?, k.d, order)?)))
        }
        Command::Make { kind } => match kind {
            MakeKind::Spherical { d, kappa, a, out } => make_output(make_spherical(d, kappa, a)?, d, &out),
            MakeKind::Askey { d, ell, a, out } => make_output(make_askey(d, ell, a)?, d, &out),
            MakeKind::Wendland { d, kappa, ell, a, out } => make_output(make_wendland(d, kappa, ell, a)?, d, &out),
            MakeKind::Bivariate {
                variant,
                d,
                a,
                shape1,
                shape2,
                common,
                rho,
            } => {
                let v: BivariateVariant = variant.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
                let (spec, mp) = make_bivariate(v, d, a, shape1, shape2, common, rho)?;
                Ok(Output::Report(json!({
                    "spec": serde_json::to_value(&spec).expect("serializable"),
                    "model": serde_json::to_value(mp.to_doc()).expect("serializable"),
                })))
            }
        },
        Command::CheckMultivar { model, condition_set } => {
            let parsed = doc::parse_multivar_doc(&read_file(&model)?).map_err(Failure::Input)?;
            let set = match condition_set {
                Some(s) => s.parse::<ConditionSet>().map_err(|e| Failure::Usage(e.to_string()))?,
                None => parsed
                    .condition_set
                    .ok_or_else(|| Failure::Input("model document has no condition_set; pass --condition-set".into()))?,
            };
            let rep = validate(&parsed.params, set, parsed.psi1.as_ref(), parsed.psi2.as_ref())?;
            let value = serde_json::to_value(&rep).expect("serializable");
            if rep.satisfied {
                Ok(Output::Report(value))
            } else {
                let labels: Vec<&str> = rep.failures.iter().map(|(l, _)| l.as_str()).collect();
                let diag = json!({"error": "conditions_not_satisfied", "failures": labels});
                Ok(Output::Fail(value, diag, EXIT_VALIDATION))
            }
        }
        Command::Gram {
            points,
            model,
            d,
            a,
            alpha,
            beta,
            gamma,
        } => {
            let pts = doc::parse_points(&read_file(&points)?).map_err(Failure::Input)?;
            let dim = pts[0].len();
            let g = match model {
                Some(path) => {
                    let parsed = doc::parse_multivar_doc(&read_file(&path)?).map_err(Failure::Input)?;
                    if parsed.params.d != dim {
                        return Err(Failure::Input(format!(
                            "points have {dim} coordinates but the model has d = {}",
                            parsed.params.d
                        )));
                    }
                    gram_multivar(&parsed.params, &pts)?
                }
                None => {
                    let (Some(al), Some(be), Some(ga)) = (alpha, beta, gamma) else {
                        return Err(Failure::Usage("gram needs --model or --alpha, --beta and --gamma".into()));
                    };
                    if d.is_some_and(|d| d != dim) {
                        return Err(Failure::Input(format!("points have {dim} coordinates, --d says {}", d.unwrap())));
                    }
                    gram(&pts, &KernelParams::new(a, al, be, ga)?, dim)?
                }
            };
            let report = json!({
                "n": g.matrix.nrows(),
                "min_eig": g.min_eig,
                "max_eig": g.max_eig,
                "psd": g.psd,
                "nnz_fraction": g.nnz_fraction,
            });
            if g.psd {
                Ok(Output::Report(report))
            } else {
                Ok(Output::Fail(report, json!({"error": "not_psd", "min_eig": g.min_eig}), EXIT_VALIDATION))
            }
        }
        Command::Simulate {
            points,
            kernel: k,
            n_real,
            seed,
        } => {
            let pts = doc::parse_points(&read_file(&points)?).map_err(Failure::Input)?;
            if pts[0].len() != k.d {
                return Err(Failure::Input(format!("points have {} coordinates, --d says {}", pts[0].len(), k.d)));
            }
            let sim = simulate_field(&pts, &kernel(&k)?, k.d, n_real, seed)?;
            let mut header = vec!["realization".to_string()];
            header.extend((0..pts.len()).map(|i| format!("z{i}")));
            let rows = (0..sim.samples.nrows())
                .map(|i| {
                    let mut row = vec![i as f64];
                    row.extend(sim.samples.row(i).iter());
                    row
                })
                .collect();
            Ok(Output::Table { header, rows })
        }
        Command::Converge {
            family,
            b,
            shape,
            shape2,
            path,
            steps,
            d,
        } => {
            let fam = match family {
                FamilyArg::Matern => LimitFamily::Matern,
                FamilyArg::Gaussian => LimitFamily::Gaussian,
                FamilyArg::Incgamma => LimitFamily::IncGamma,
                FamilyArg::Erfc => LimitFamily::Erfc,
                FamilyArg::Laguerre => LimitFamily::Laguerre,
                FamilyArg::Tricomi => LimitFamily::Tricomi,
            };
            let path = match path {
                PathArg::Default => LimitPath::Default,
                PathArg::BetaToAlpha => LimitPath::GaussianBetaToAlpha,
            };
            let target = LimitKernelSpec::new(fam, b, shape, shape2)?;
            let tr = convergence_harness_with(&target, path, steps, d)?;
            let rows = tr
                .parameter_path
                .iter()
                .zip(&tr.sup_errors)
                .enumerate()
                .map(|(m, (&(a, al, be, ga), &e))| vec![(m + 1) as f64, a, al, be, ga, e])
                .collect();
            Ok(table(&["m", "a", "alpha", "beta", "gamma", "sup_error"], rows))
        }
        Command::Selftest { nightly } => {
            let checks = selftest::run_checks(nightly);
            let all = checks.iter().all(|c| c.passed);
            let list: Vec<Value> = checks
                .iter()
                .map(|c| json!({"check": c.name, "passed": c.passed, "detail": c.detail}))
                .collect();
            let report = json!({"passed": all, "checks": list});
            if all {
                Ok(Output::Report(report))
            } else {
                let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
                Ok(Output::Fail(report, json!({"error": "selftest", "failures": failed}), EXIT_NUMERICAL))
            }
        }
    }
}

/// Runs the command line `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let format = cli.format;
    let written = match execute(cli.command) {
        Ok(Output::Table { header, rows }) => write_table(out, format, &header, &rows).map(|_| EXIT_OK),
        Ok(Output::Report(v)) => write_value(out, format, &v).map(|_| EXIT_OK),
        Ok(Output::Fail(v, diag, code)) => write_value(out, format, &v)
            .and_then(|_| writeln!(err, "{diag}"))
            .map(|_| code),
        Err(Failure::Usage(m)) => writeln!(err, "{}", json!({"error": "usage", "message": m})).map(|_| EXIT_USAGE),
        Err(Failure::Input(m)) => writeln!(err, "{}", json!({"error": "input", "message": m})).map(|_| EXIT_INPUT),
        Err(Failure::Validation(v)) => writeln!(err, "{v}").map(|_| EXIT_VALIDATION),
        Err(Failure::Numerical(m)) => {
            writeln!(err, "{}", json!({"error": "numerical", "message": m})).map(|_| EXIT_NUMERICAL)
        }
    };
    written.unwrap_or(EXIT_NUMERICAL)
}
