//! `proxexp`: command-line front end.
//!
//! Exit status is 0 on success, 2 when an exact check fails and 1 on usage
//! or input errors.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use proximity_expansion::curves::{
    build_family, multiplicity_classes, predict_gamma0, verify_upper_accounting_with, FamilyMode,
};
use proximity_expansion::exact::{parse_scalar, parse_scalar_list, BiPoly, Point2, UniPoly};
use proximity_expansion::expansion::{
    count_quadruples, image_set, level_sets, verify_lower_chain, GroundData, GroundSets,
};
use proximity_expansion::geometry::{fixes_graph, graph_symmetries, sigma_dichotomy, SigmaOutcome, TriplePair};
use proximity_expansion::harness::{
    default_s, fit_rows, generate_sets, load_config, read_rows, run_experiment, write_csv,
    write_json_lines, Generator, OutputFormat, CURVE_GUARD_N, Q_GUARD_N,
};
use proximity_expansion::{Error, Result};

#[derive(Parser)]
#[command(name = "proxexp", version, about = "Exact desk-scale expansion experiments")]
struct Cli {
    /// Emit JSON instead of text or CSV.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Size of the image set, optionally with its values.
    Image {
        #[command(flatten)]
        inst: Instance,
        /// Print every value of the image set.
        #[arg(long)]
        dump: bool,
    },
    /// Quadruple counts and the lower-bound chain.
    Quadruples {
        #[command(flatten)]
        inst: Instance,
        #[command(flatten)]
        part: PartitionArgs,
    },
    /// Classify two point triples, each given as `x1,y1 x2,y2 x3,y3`.
    Dichotomy {
        #[arg(long)]
        p: String,
        #[arg(long = "p-prime")]
        p_prime: String,
    },
    /// Isometries fixing the graph of phi.
    Symmetries {
        #[arg(long, default_value = "[0,0,0,1]")]
        phi: String,
    },
    /// Curve family, shared components and the exceptional family.
    Family {
        #[command(flatten)]
        inst: Instance,
        #[command(flatten)]
        part: PartitionArgs,
        #[arg(long, value_enum, default_value_t = Mode::Strict)]
        mode: Mode,
        /// Also run the incidence accounting.
        #[arg(long)]
        accounting: bool,
    },
    /// Full pipeline from a configuration file.
    Experiment {
        config: PathBuf,
        /// Overrides the configured output path; `-` is stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exponent of |D| against n from CSV or JSON-lines rows (`-` for stdin).
    Fit { rows: PathBuf },
}

#[derive(Args)]
struct Instance {
    /// Coefficients `[c0, c1, ..., cd]`.
    #[arg(long, default_value = "[0,0,0,1]")]
    phi: String,
    #[arg(long, value_enum, default_value_t = Kind::Arithmetic)]
    generator: Kind,
    #[arg(short, long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    start: String,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    step: String,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    first: String,
    #[arg(long, default_value = "2", allow_hyphen_values = true)]
    ratio: String,
    #[arg(long, allow_hyphen_values = true)]
    low: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    high: Option<i64>,
    /// Values `[v1, v2, ...]` for the explicit generator.
    #[arg(long, allow_hyphen_values = true)]
    values: Option<String>,
    /// Lift the desk-scale guardrails.
    #[arg(long)]
    allow_large: bool,
}

#[derive(Args)]
struct PartitionArgs {
    /// Defaults to `8 deg(phi) + 1`.
    #[arg(long)]
    s: Option<u64>,
    /// Forced segment count; chosen from |D| when absent.
    #[arg(long)]
    t: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Arithmetic,
    Geometric,
    RandomInteger,
    Symmetric,
    Explicit,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Strict,
    Relaxed,
}

impl From<Mode> for FamilyMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Strict => FamilyMode::Strict,
            Mode::Relaxed => FamilyMode::Relaxed,
        }
    }
}

/// Outcome of a command: whether every exact check held.
type Outcome = Result<bool>;

fn parse_phi(text: &str) -> Result<UniPoly> {
    let phi = UniPoly::new(parse_scalar_list(text)?);
    match phi.degree() {
        Some(d) if d >= 3 => Ok(phi),
        Some(d) => Err(Error::DegreeTooLow(d)),
        None => Err(Error::ZeroPolynomial),
    }
}

impl Instance {
    fn sets(&self) -> Result<GroundSets> {
        let phi = parse_phi(&self.phi)?;
        let generator = match self.generator {
            Kind::Arithmetic => Generator::Arithmetic {
                start: parse_scalar(&self.start)?,
                step: parse_scalar(&self.step)?,
            },
            Kind::Geometric => Generator::Geometric {
                first: parse_scalar(&self.first)?,
                ratio: parse_scalar(&self.ratio)?,
            },
            Kind::RandomInteger => match (self.low, self.high) {
                (Some(low), Some(high)) => Generator::RandomInteger { low, high },
                _ => return Err(Error::InvalidParameter("random-integer needs --low and --high".into())),
            },
            Kind::Symmetric => Generator::Symmetric,
            Kind::Explicit => {
                let text = self
                    .values
                    .as_deref()
                    .ok_or_else(|| Error::InvalidParameter("explicit needs --values".into()))?;
                Generator::Explicit(parse_scalar_list(text)?)
            }
        };
        let n = match (&generator, self.n) {
            (_, Some(n)) => n,
            (Generator::Explicit(v), None) => v.len(),
            _ => return Err(Error::InvalidParameter("--n is required".into())),
        };
        generate_sets(&generator, n, self.seed, &phi)
    }

    fn guard(&self, n: usize, limit: usize, what: &str) -> Result<()> {
        if n > limit && !self.allow_large {
            return Err(Error::Guardrail(format!(
                "{what} needs n <= {limit} without --allow-large, got {n}"
            )));
        }
        Ok(())
    }
}

impl PartitionArgs {
    fn ground(&self, sets: GroundSets) -> Result<GroundData> {
        let s = self.s.unwrap_or_else(|| default_s(sets.phi()));
        match self.t {
            Some(t) => GroundData::new(sets, s, t),
            None => GroundData::with_chosen_t(sets, s),
        }
    }
}

fn print_value(json_out: bool, v: &Value) {
    if json_out {
        println!("{v}");
        return;
    }
    if let Value::Object(map) = v {
        for (k, val) in map {
            match val {
                Value::String(s) => println!("{k}: {s}"),
                Value::Array(items) if items.iter().all(|i| !i.is_object()) => {
                    let parts: Vec<String> = items
                        .iter()
                        .map(|i| i.as_str().map(str::to_string).unwrap_or_else(|| i.to_string()))
                        .collect();
                    println!("{k}: [{}]", parts.join(", "));
                }
                other => println!("{k}: {other}"),
            }
        }
    } else {
        println!("{v}");
    }
}

fn ineq(i: &proximity_expansion::expansion::Inequality) -> Value {
    json!({
        "lhs": i.lhs.to_string(),
        "rhs": i.rhs.to_string(),
        "slack": i.slack().to_string(),
        "holds": i.holds(),
    })
}

fn cmd_image(inst: &Instance, dump: bool, json_out: bool) -> Outcome {
    let sets = inst.sets()?;
    inst.guard(sets.n(), Q_GUARD_N, "image enumeration")?;
    let values = image_set(&sets);
    let mut out = json!({ "n": sets.n(), "image_size": values.len() });
    if dump {
        out["values"] = values.iter().map(|v| Value::String(v.to_string())).collect();
    }
    print_value(json_out, &out);
    Ok(true)
}

fn cmd_quadruples(inst: &Instance, part: &PartitionArgs, json_out: bool) -> Outcome {
    let sets = inst.sets()?;
    inst.guard(sets.n(), Q_GUARD_N, "quadruple counting")?;
    let g = part.ground(sets)?;
    let chain = verify_lower_chain(&g)?;
    let q = count_quadruples(&level_sets(&g)?)?;
    let consistent =
        q.strict_ordered == chain.strict_ordered && q.relaxed_ordered == chain.relaxed_ordered;
    let out = json!({
        "n": chain.n,
        "t": chain.t,
        "s": chain.s,
        "image_size": chain.image_size,
        "q_strict": q.strict_ordered,
        "q_relaxed": q.relaxed_ordered,
        "heavy_threshold": chain.heavy_threshold.to_string(),
        "heavy_count": chain.heavy_count,
        "step_a": ineq(&chain.step_a),
        "step_b_passes": chain.step_b_passes,
        "step_b_total": chain.step_b.len(),
        "step_c": ineq(&chain.step_c),
        "step_c_chain": ineq(&chain.step_c_chain),
        "surface_ratio": chain.surface_ratio.to_string(),
    });
    print_value(json_out, &out);
    Ok(consistent && chain.step_a.holds())
}

fn parse_triple(text: &str) -> Result<[Point2; 3]> {
    let pts = text
        .split_whitespace()
        .map(|tok| {
            let (x, y) = tok
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected `x,y`, got {tok:?}")))?;
            Ok(Point2::new(parse_scalar(x)?, parse_scalar(y)?))
        })
        .collect::<Result<Vec<_>>>()?;
    pts.try_into()
        .map_err(|v: Vec<Point2>| Error::Parse(format!("expected 3 points, got {}", v.len())))
}

fn poly_json(p: &BiPoly) -> Value {
    Value::String(p.display_with(["x", "y"]))
}

fn cmd_dichotomy(p: &str, p_prime: &str) -> Outcome {
    let tp = TriplePair::new(parse_triple(p)?, parse_triple(p_prime)?)?;
    let out = match sigma_dichotomy(&tp)? {
        SigmaOutcome::Congruent(r) => json!({ "outcome": "congruent", "isometry": r.to_repr() }),
        SigmaOutcome::ConicPair { sigma, sigma_prime } => json!({
            "outcome": "conic-pair",
            "sigma": poly_json(&sigma),
            "sigma_prime": poly_json(&sigma_prime),
        }),
        SigmaOutcome::VerticalLines { x0, x0_prime, sigma, sigma_prime } => json!({
            "outcome": "vertical-lines",
            "x0": x0.to_string(),
            "x0_prime": x0_prime.to_string(),
            "sigma": poly_json(&sigma),
            "sigma_prime": poly_json(&sigma_prime),
        }),
        SigmaOutcome::Empty => json!({ "outcome": "empty" }),
    };
    println!("{out}");
    Ok(true)
}

fn cmd_symmetries(phi: &str, json_out: bool) -> Outcome {
    let phi = parse_phi(phi)?;
    let syms = graph_symmetries(&phi)?;
    let deg = phi.degree().unwrap_or(0);
    let ok = syms.len() <= 4 * deg && syms.iter().all(|r| fixes_graph(r, &phi));
    if json_out {
        let reprs: Vec<_> = syms.iter().map(|r| r.to_repr()).collect();
        println!("{}", json!({ "phi": phi.to_string(), "count": syms.len(), "isometries": reprs }));
    } else {
        println!("phi: {phi}");
        println!("count: {}", syms.len());
        for r in &syms {
            println!("{r}");
        }
    }
    Ok(ok)
}

fn cmd_family(inst: &Instance, part: &PartitionArgs, mode: Mode, accounting: bool, json_out: bool) -> Outcome {
    let sets = inst.sets()?;
    inst.guard(sets.n(), CURVE_GUARD_N, "curve-family accounting")?;
    let g = part.ground(sets)?;
    let mode = FamilyMode::from(mode);
    let family = build_family(&g, mode)?;
    let report = multiplicity_classes(&family, g.phi())?;
    let names = ["x", "x'"];
    let gamma0: Vec<Value> = report
        .exceptional
        .iter()
        .map(|&i| {
            let c = &report.classes[i];
            json!({ "component": c.component.display_with(names), "members": c.members.len() })
        })
        .collect();
    let predicted: Vec<Value> = predict_gamma0(g.phi())?
        .iter()
        .map(|p| p.component.display_with(names))
        .map(Value::String)
        .collect();
    let mut out = json!({
        "n": g.n(),
        "t": g.t(),
        "family_size": family.len(),
        "classes": report.classes.len(),
        "gamma0": gamma0,
        "predicted": predicted,
        "gamma0_hat_size": report.gamma0_hat_size(),
        "residual_curves": report.residual.len(),
        "max_residual_class": report.max_residual_class,
        "max_residual_sources": report.max_residual_sources,
        "violations": report.violations,
    });
    let mut ok = report.ok();
    if accounting {
        let acc = verify_upper_accounting_with(&g, mode, 4, 0.0)?;
        ok &= acc.holds();
        out["accounting"] = serde_json::to_value(&acc).map_err(|e| Error::Io(e.to_string()))?;
    }
    if json_out {
        println!("{out}");
    } else {
        print_value(false, &out);
    }
    Ok(ok)
}

fn cmd_experiment(config: &Path, output: Option<&PathBuf>, json_out: bool) -> Outcome {
    let mut cfg = load_config(config)?;
    if json_out {
        cfg.format = OutputFormat::Json;
    }
    if let Some(o) = output {
        cfg.output = Some(o.clone());
    }
    let result = run_experiment(&cfg)?;
    let mut buf = Vec::new();
    match cfg.format {
        OutputFormat::Csv => write_csv(&result.rows, &mut buf)?,
        OutputFormat::Json => write_json_lines(&result.rows, &mut buf)?,
    }
    match cfg.output.as_deref() {
        Some(p) if p.as_os_str() != "-" => fs::write(p, &buf)?,
        _ => io::stdout().write_all(&buf)?,
    }
    Ok(result.all_ok())
}

fn cmd_fit(path: &Path, json_out: bool) -> Outcome {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path)?
    };
    let fit = fit_rows(&read_rows(&text)?)?;
    if json_out {
        println!("{}", serde_json::to_string(&fit).map_err(|e| Error::Io(e.to_string()))?);
    } else {
        println!("slope_approx: {:.11e}", fit.slope);
        println!("intercept_approx: {:.11e}", fit.intercept);
        let res: Vec<String> = fit.residuals.iter().map(|r| format!("{r:.11e}")).collect();
        println!("residuals_approx: [{}]", res.join(", "));
    }
    Ok(true)
}

fn run(cli: &Cli) -> Outcome {
    let j = cli.json;
    match &cli.command {
        Command::Image { inst, dump } => cmd_image(inst, *dump, j),
        Command::Quadruples { inst, part } => cmd_quadruples(inst, part, j),
        Command::Dichotomy { p, p_prime } => cmd_dichotomy(p, p_prime),
        Command::Symmetries { phi } => cmd_symmetries(phi, j),
        Command::Family { inst, part, mode, accounting } => cmd_family(inst, part, *mode, *accounting, j),
        Command::Experiment { config, output } => cmd_experiment(config, output.as_ref(), j),
        Command::Fit { rows } => cmd_fit(rows, j),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("proxexp: a check failed");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("proxexp: {e}");
            ExitCode::from(1)
        }
    }
}
