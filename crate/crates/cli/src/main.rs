use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use leblab::chebyshev::{best_trig_approx, DEFAULT_GAP_TOL};
use leblab::extremal::{choose_delta, verify_equality_case};
use leblab::kernel::{tail_sum, DEFAULT_KERNEL_TOL};
use leblab::norms::{l1_norm_tail_kernel, lebesgue_constant};
use leblab::params::Exponent;
use leblab::poisson::{deviation_rho, deviation_sup};
use leblab::sequences::{check_abs_monotone, DEFAULT_K_MAX, DEFAULT_M_MAX};
use leblab::sweep::{run_sweep, SweepSpec};
use leblab::thresholds::{ThresholdSet, DEFAULT_CEILING};
use leblab::trig::{Interpolation, SampledFunction};
use leblab::zeros::{bracket_membership, corollary_brackets, locate_zeros, route_for, Route, DEFAULT_ZERO_TOL};
use leblab::{Error, ErrorClass, KernelParams, Result, TailKernel, TrigPolynomial};

/// Lebesgue-type inequalities for generalized Poisson integrals with ψ(k) = exp(−α k^r).
#[derive(Parser)]
#[command(name = "leblab", version)]
struct Cli {
    /// Kernel and quadrature tolerance, relative to ψ(n); overrides LEBLAB_TOL.
    #[arg(long, global = true)]
    tol: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct ParamArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    r: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    beta: f64,
}

impl ParamArgs {
    fn params(&self) -> Result<KernelParams> {
        KernelParams::new(self.alpha, self.r, self.beta)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Thresholds n₀(p), n₁ and n*.
    Thresholds {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        r: f64,
        /// Exponents p for n₀; `inf` allowed.
        #[arg(long, value_delimiter = ',', default_values_t = ["1".to_string(), "inf".to_string()])]
        p: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_CEILING)]
        ceiling: u64,
    },
    /// Evaluate the tail kernel P⁽ⁿ⁾ at the given points.
    Kernel {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        n: u64,
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        t: Vec<f64>,
    },
    /// Locate the 2n zeros of P⁽ⁿ⁾ on [0, 2π).
    Zeros {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        n: u64,
    },
    /// L₁ norm of P⁽ⁿ⁾ and its logarithmic decomposition.
    Norm {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        n: u64,
    },
    /// Lebesgue constants L_{n−1} for n = 1..=n_max (or a single n).
    Lebesgue {
        #[arg(long, conflicts_with = "n_max")]
        n: Option<u64>,
        #[arg(long)]
        n_max: Option<u64>,
    },
    /// Best uniform approximation of sampled data by polynomials of degree < n.
    Bestapprox {
        /// `t,f` rows; a first line `# interpolation=linear|trigonometric` picks the rule.
        #[arg(long)]
        samples: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_GAP_TOL)]
        gap_tol: f64,
    },
    /// Deviation ρ_n of the Poisson integral of a trigonometric polynomial.
    Rho {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        n: usize,
        /// JSON `{"a0": .., "cos": [..], "sin": [..]}`.
        #[arg(long)]
        phi: PathBuf,
        #[arg(long, value_delimiter = ',', conflicts_with = "supgrid", allow_hyphen_values = true)]
        x: Vec<f64>,
        #[arg(long)]
        supgrid: Option<usize>,
    },
    /// Equality case built from the ramped sign function Φ_δ.
    Extremal {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1.0)]
        level: f64,
        #[arg(long, conflicts_with = "auto_delta")]
        delta: Option<f64>,
        /// Default when no δ is given.
        #[arg(long)]
        auto_delta: bool,
        /// Number of δ-halvings to report.
        #[arg(long, default_value_t = 0)]
        sweep: u32,
    },
    /// Absolute monotonicity of exp(−α k^r).
    Monotone {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        r: f64,
        #[arg(long, default_value_t = DEFAULT_M_MAX)]
        m_max: usize,
        #[arg(long, default_value_t = DEFAULT_K_MAX)]
        k_max: u64,
    },
    /// Run a parameter sweep described by a JSON spec.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        /// Overrides the spec's output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn tolerance(flag: Option<f64>) -> Result<f64> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var("LEBLAB_TOL") {
            Ok(s) => s
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::Domain(format!("LEBLAB_TOL is not a number: {s:?}")))?,
            Err(_) => DEFAULT_KERNEL_TOL,
        },
    };
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    Ok(tol)
}

/// Pretty JSON with keys sorted.
fn emit<T: Serialize>(v: &T) -> Result<()> {
    let v: Value = serde_json::to_value(v)?;
    write_out(&format!("{}\n", serde_json::to_string_pretty(&v)?))
}

fn write_out(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    Ok(out.flush()?)
}

fn read(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn parse_exponent(s: &str) -> Result<Exponent> {
    match s.trim() {
        "inf" | "infinity" => Ok(Exponent::Infinity),
        other => {
            let p: f64 = other
                .parse()
                .map_err(|_| Error::Domain(format!("not an exponent: {other:?}")))?;
            Exponent::new(p)
        }
    }
}

fn read_samples(path: &Path) -> Result<SampledFunction> {
    let text = read(path)?;
    let mut rule = Interpolation::Linear;
    if let Some(first) = text.lines().next() {
        if let Some(rest) = first.trim().strip_prefix('#') {
            if let Some(v) = rest.trim().strip_prefix("interpolation=") {
                rule = match v.trim() {
                    "linear" => Interpolation::Linear,
                    "trigonometric" => Interpolation::Trigonometric,
                    other => return Err(Error::Domain(format!("unknown interpolation {other:?}"))),
                };
            }
        }
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut samples = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| Error::Domain(format!("bad sample row: {e}")))?;
        if row.len() != 2 {
            return Err(Error::Domain(format!("expected two columns, got {}", row.len())));
        }
        let num = |i: usize| {
            row[i]
                .parse::<f64>()
                .map_err(|_| Error::Domain(format!("not a number: {:?}", &row[i])))
        };
        samples.push((num(0)?, num(1)?));
    }
    SampledFunction::new(samples, rule)
}

fn run(cli: Cli) -> Result<()> {
    let tol = tolerance(cli.tol)?;
    match cli.command {
        Command::Thresholds { alpha, r, p, ceiling } => {
            let params = KernelParams::new(alpha, r, 0.0)?;
            let exps = p.iter().map(|s| parse_exponent(s)).collect::<Result<Vec<_>>>()?;
            emit(&ThresholdSet::compute(&params, &exps, ceiling))
        }
        Command::Kernel { params, n, t } => {
            let kernel = TailKernel::new(params.params()?, n, tol)?;
            let scale = kernel.scale();
            let values: Vec<Value> = t
                .iter()
                .map(|&t| {
                    let (v, e) = kernel.eval_scaled(t);
                    json!({ "t": t, "value": v * scale, "error_bound": e * scale })
                })
                .collect();
            let sum = tail_sum(kernel.params(), n, tol)?;
            emit(&json!({ "n": n, "psi_n": scale, "tail_sum": sum.value, "values": values }))
        }
        Command::Zeros { params, n } => {
            let kernel = TailKernel::new(params.params()?, n, tol)?;
            let set = locate_zeros(&kernel, DEFAULT_ZERO_TOL)?;
            let membership = match route_for(kernel.params()) {
                Route::Brackets { beta, .. } => Some(bracket_membership(&set, &corollary_brackets(n, beta)?)),
                Route::Phase => None,
            };
            emit(&json!({ "zero_set": set, "bracket_membership": membership }))
        }
        Command::Norm { params, n } => {
            let kernel = TailKernel::new(params.params()?, n, tol)?;
            let set = locate_zeros(&kernel, DEFAULT_ZERO_TOL)?;
            emit(&l1_norm_tail_kernel(&kernel, &set, tol)?)
        }
        Command::Lebesgue { n, n_max } => {
            let range = match (n, n_max) {
                (Some(n), _) => n..=n,
                (None, Some(m)) => 1..=m,
                (None, None) => return Err(Error::Domain("give --n or --n-max".into())),
            };
            let list = range.map(lebesgue_constant).collect::<Result<Vec<_>>>()?;
            emit(&list)
        }
        Command::Bestapprox { samples, n, gap_tol } => {
            let f = read_samples(&samples)?;
            emit(&best_trig_approx(&f, n, gap_tol)?)
        }
        Command::Rho {
            params,
            n,
            phi,
            x,
            supgrid,
        } => {
            let p = params.params()?;
            let poly: TrigPolynomial = serde_json::from_str(&read(&phi)?)?;
            let poly = TrigPolynomial::new(poly.a0, poly.cos, poly.sin)?;
            if let Some(m) = supgrid {
                emit(&json!({ "n": n, "grid": m, "sup": deviation_sup(&p, &poly, n, m)? }))
            } else {
                let xs = if x.is_empty() { vec![0.0] } else { x };
                let values = xs
                    .iter()
                    .map(|&x| Ok(json!({ "x": x, "rho": deviation_rho(&p, &poly, n, x)? })))
                    .collect::<Result<Vec<_>>>()?;
                emit(&json!({ "n": n, "values": values }))
            }
        }
        Command::Extremal {
            params,
            n,
            level,
            delta,
            auto_delta: _,
            sweep,
        } => {
            let kernel = TailKernel::new(params.params()?, n, tol)?;
            let set = locate_zeros(&kernel, DEFAULT_ZERO_TOL)?;
            let choice = choose_delta(&kernel, &set);
            let delta = delta.unwrap_or(choice.delta);
            let reports = (0..=sweep)
                .map(|j| verify_equality_case(&kernel, &set, level, delta / 2f64.powi(j as i32), tol))
                .collect::<Result<Vec<_>>>()?;
            let ratios: Vec<f64> = reports.iter().map(|r| r.ratio).collect();
            let halving: Vec<f64> = reports.windows(2).map(|w| w[0].r / w[1].r).collect();
            let head = &reports[0];
            emit(&json!({
                "A": head.a,
                "B": head.b,
                "R": head.r,
                "bound": head.r_bound,
                "delta": delta,
                "delta_choice": choice,
                "ratios": ratios,
                "r_halving_ratios": halving,
                "reports": reports,
            }))
        }
        Command::Monotone { alpha, r, m_max, k_max } => {
            let params = KernelParams::new(alpha, r, 0.0)?;
            emit(&check_abs_monotone(&params, m_max, k_max)?)
        }
        Command::Sweep { spec, out } => {
            let mut spec = SweepSpec::from_json(&read(&spec)?)?;
            if out.is_some() {
                spec.output.path = out;
            }
            let text = run_sweep(&spec)?;
            if spec.output.path.is_none() {
                write_out(&text)?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.class() {
                ErrorClass::Domain => 2,
                ErrorClass::Numeric => 3,
                ErrorClass::Io => 4,
            })
        }
    }
}
