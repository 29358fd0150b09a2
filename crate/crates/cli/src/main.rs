use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{builder::PossibleValuesParser, Parser, Subcommand, ValueEnum};
use connint::basic_integrals::{basic_integral, n_scalar_sum_form, MultiIndex};
use connint::model_integral::{model_lhs, model_rhs, ModelParams};
use connint::moment_engine::{
    full_moments, moment_via_jets, moment_via_measure, physical_moments, residual_node_fit, HKernel, MomentSpec, SupportSet,
};
use connint::quadrature::QuadratureSpec;
use connint::report::RunReport;
use connint::simplicial::{
    action, build_prism_complex, f_set, independent_set, parse_action_data, parse_complex_vector, parse_leaf, DiagonalRule,
};
use connint::special_fn::{table_integral, CouplingConfig};
use connint::verify::{run_suite, SUITES};

#[derive(Debug, Parser)]
#[command(name = "connint", version, about = "Connection integrals: verification suites and single evaluations")]
struct Cli {
    /// Also write the report to this file.
    #[arg(long, global = true, env = "CONNINT_REPORT")]
    report: Option<PathBuf>,

    /// Append the wall-clock time to the report.
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kernel {
    Linear,
    Holst,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Diagonal {
    Staircase,
    Reverse,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run acceptance checks.
    Verify {
        #[arg(long, default_value = "all", value_parser = PossibleValuesParser::new(SUITES))]
        suite: String,
    },
    /// Scalar and tensor parts of the basic integral at a complex vector.
    BasicIntegral {
        #[arg(long, default_value_t = 0)]
        j: usize,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        gamma: f64,
        /// Three complex components, e.g. `0.3,1+2i,-0.5i`.
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        /// One-based tensor indices such as `1,3`; defaults to `3` repeated j times.
        #[arg(long)]
        alpha: Option<String>,
        /// Use the Euclidean coupling `1/gamma + 1`.
        #[arg(long)]
        euclidean: bool,
    },
    /// Damped-quadrature and closed-form values of the boost model integral.
    ModelIntegral {
        #[arg(long = "A", allow_hyphen_values = true)]
        a: f64,
        #[arg(long)]
        lambda: f64,
    },
    /// Moments by the measure and jet routes, plus the support-node fit.
    Moments {
        #[arg(long, default_value_t = 0)]
        j: usize,
        #[arg(long, default_value_t = 0)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        l: usize,
        #[arg(long, default_value_t = 0)]
        m: usize,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        gamma: f64,
        #[arg(long, value_enum, default_value_t = Kernel::Linear)]
        kernel: Kernel,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        beta: Option<String>,
        #[arg(long)]
        gamma_idx: Option<String>,
        #[arg(long)]
        delta_idx: Option<String>,
    },
    /// Action of a prism complex with area and connection data.
    Action {
        /// Leaf complex file.
        #[arg(long)]
        complex: PathBuf,
        /// Area, connection and curvature-chain file.
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        gamma: f64,
        #[arg(long, default_value_t = 2)]
        leaves: usize,
        #[arg(long, value_enum, default_value_t = Diagonal::Staircase)]
        diagonal: Diagonal,
    },
    /// Numerical against closed-form value of the table integral.
    TableIntegral {
        #[arg(long, allow_hyphen_values = true)]
        h: f64,
        #[arg(long)]
        n: usize,
    },
}

/// Bad input that is not a numerical failure; exits with status 2.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Usage> {
    fs::read_to_string(path).map_err(|e| Usage(format!("cannot read {}: {e}", path.display())))
}

fn index_or_default(s: &Option<String>, len: usize) -> Result<MultiIndex, Usage> {
    let idx = match s {
        Some(s) => MultiIndex::parse(s)?,
        None => MultiIndex::repeated(2, len)?,
    };
    if idx.len() != len {
        return Err(Usage(format!("index `{idx}` has length {}, expected {len}", idx.len())));
    }
    Ok(idx)
}

fn run(command: &Command) -> Result<RunReport, Usage> {
    match command {
        Command::Verify { suite } => Ok(run_suite(suite)?),
        Command::BasicIntegral { j, gamma, v, alpha, euclidean } => {
            let cfg = if *euclidean { CouplingConfig::euclidean(*gamma)? } else { CouplingConfig::new(*gamma)? };
            let vec = parse_complex_vector(v)?;
            let alpha = index_or_default(alpha, *j)?;
            let mut r = RunReport::new("basic-integral");
            r.input("j", j);
            r.input("gamma", gamma);
            r.input("euclidean", euclidean);
            r.input("v", v);
            r.input("alpha", &alpha);
            match basic_integral(&vec, &alpha, &cfg) {
                Ok(b) => {
                    r.output("scalar", b.scalar, None);
                    r.output("suppression", b.suppression, None);
                    r.output("component", b.component, None);
                    r.output("value", b.value(), None);
                    match n_scalar_sum_form(vec.norm_v(), *j, &cfg) {
                        Ok(s) => {
                            r.check_close("scalar vs partial fractions", s, b.scalar, 1e-10, 1e-300, "partial-fraction form");
                        }
                        Err(e) => r.fail("partial fractions", &e),
                    }
                }
                Err(e) => r.fail("basic integral", &e),
            }
            Ok(r)
        }
        Command::ModelIntegral { a, lambda } => {
            let p = ModelParams::new(*a, *lambda)?;
            let mut r = RunReport::new("model-integral");
            r.input("A", a);
            r.input("lambda", lambda);
            let rhs = model_rhs(&p);
            if let Ok(v) = &rhs {
                r.output("rhs", *v, None);
            }
            match (model_lhs(&p), rhs) {
                (Ok(l), Ok(v)) => {
                    r.output("lhs", l.value, Some(l.error_estimate));
                    r.check_close("lhs vs rhs", v, l.value, 1e-5, 1.0, "hypergeometric closed form");
                }
                (Err(e), _) => r.fail("damped quadrature", &e),
                (_, Err(e)) => r.fail("closed form", &e),
            }
            Ok(r)
        }
        Command::Moments { j, k, l, m, gamma, kernel, alpha, beta, gamma_idx, delta_idx } => {
            let cfg = CouplingConfig::new(*gamma)?;
            let holst = HKernel::holst(*gamma)?;
            let hk = match kernel {
                Kernel::Linear => HKernel::linear(),
                Kernel::Holst => holst,
            };
            let spec = MomentSpec::new(
                *l,
                *m,
                index_or_default(alpha, *j)?,
                index_or_default(beta, *k)?,
                index_or_default(gamma_idx, *j)?,
                index_or_default(delta_idx, *k)?,
                hk,
            )?;
            let mut r = RunReport::new("moments");
            for (name, v) in [("j", j), ("k", k), ("l", l), ("m", m)] {
                r.input(name, v);
            }
            r.input("gamma", gamma);
            r.input("kernel", format!("{kernel:?}").to_lowercase());
            r.input("alpha", &spec.alpha);
            r.input("beta", &spec.beta);
            r.input("gamma_idx", &spec.gamma_idx);
            r.input("delta_idx", &spec.delta_idx);
            let jets = moment_via_jets(&spec);
            match &jets {
                Ok(v) => r.output("moment_jets", *v, None),
                Err(e) => r.fail("jet route", e),
            }
            if matches!(kernel, Kernel::Linear) {
                match (moment_via_measure(*l, *m, &spec), &jets) {
                    (Ok(v), Ok(jv)) => {
                        r.output("moment_measure", v, None);
                        r.check_close("measure vs jets", v, *jv, 1e-10, 1e-300, "exact measure Taylor coefficients");
                    }
                    (Err(e), _) => r.fail("measure route", &e),
                    _ => {}
                }
            }
            let count = 2 * (j + 1) + 4;
            let quad = QuadratureSpec::default().with_tolerances(1e-11, 1e-14);
            let fit = SupportSet::for_fit(*j, *gamma).and_then(|nodes| {
                let full = full_moments(*j, count, &holst)?;
                let phys = physical_moments(*j, count, &cfg, &quad)?;
                residual_node_fit(&full, &phys, &nodes, 2)
            });
            match fit {
                Ok(f) => {
                    r.output_text("fit_moments", count);
                    r.output_text("fit_condition", format!("{:.3e}", f.condition));
                    for w in &f.weights {
                        r.output(&format!("fit_weight[n={},node={},d={}]", w.label, connint::report::fmt_complex(w.node), w.derivative), w.weight, None);
                    }
                    r.check_below("support-node fit residual", f.residual, 1e-5, "jet moments minus quadrature moments");
                    if let Some(w) = f.warning {
                        r.output_text("fit_warning", w);
                    }
                }
                Err(e) => r.fail("support-node fit", &e),
            }
            Ok(r)
        }
        Command::Action { complex, data, gamma, leaves, diagonal } => {
            let cfg = CouplingConfig::new(*gamma)?;
            let leaf = parse_leaf(&read(complex)?)?;
            let rule = match diagonal {
                Diagonal::Staircase => DiagonalRule::Staircase,
                Diagonal::Reverse => DiagonalRule::ReverseStaircase,
            };
            let cx = build_prism_complex(&leaf, *leaves, rule)?;
            let d = parse_action_data(&read(data)?, &cx)?;
            let mut r = RunReport::new("action");
            r.input("complex", complex.display());
            r.input("data", data.display());
            r.input("gamma", gamma);
            r.input("leaves", leaves);
            r.input("diagonal", format!("{diagonal:?}").to_lowercase());
            let c = cx.counts();
            r.output_text("simplices", format!("{} {} {} {} {}", c[0], c[1], c[2], c[3], c[4]));
            r.output_text("f_set", f_set(&cx).len());
            r.output_text("independent", independent_set(&cx).len());
            r.check_true("incidence", cx.check_incidence().is_ok(), "", "face enumeration");
            match d.curvatures().and_then(|curv| action(&cx, &d.areas, &curv, &cfg)) {
                Ok(s) => r.output("action", s, None),
                Err(e) => r.fail("action", &e),
            }
            Ok(r)
        }
        Command::TableIntegral { h, n } => {
            let spec = QuadratureSpec::default().with_tolerances(1e-12, 1e-14);
            let mut r = RunReport::new("table-integral");
            r.input("h", h);
            r.input("n", n);
            match table_integral(*h, *n, &spec) {
                Ok((lhs, rhs)) => {
                    r.output("lhs", lhs, None);
                    r.output("rhs", rhs, None);
                    r.check_close("lhs vs rhs", rhs, lhs, 1e-8, 1.0, "table closed form");
                }
                Err(e) => r.fail("table integral", &e),
            }
            Ok(r)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut report = match run(&cli.command) {
        Ok(r) => r,
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    if cli.timing {
        report.wall_time = Some(start.elapsed());
    }
    let text = report.render();
    print!("{text}");
    if let Some(path) = &cli.report {
        if let Err(e) = fs::write(path, &text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(report.exit_code() as u8)
}
