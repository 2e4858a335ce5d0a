//! Command-line interface: parse a generating-function spec (JSON), run the
//! library operations, and emit exact (`p/q`) or plot-ready (CSV) output.
//!
//! Exit codes: 0 ok, 1 usage, 2 domain error, 3 class-check failure.

use clap::{Parser, Subcommand};
use cstbin::conjecture::{multi_term_check, single_term_check, Convention, RecursionReport};
use cstbin::cst::{deformed_binomial, i_coefficients, pn_polynomials, sequence_from_series};
use cstbin::deform::{
    d_alpha, d_alpha_i_coefficients, d_alpha_polynomials, d_alpha_sequence, e_alpha,
    e_alpha_sequence_and_polys, eta_deform, flow_iterate, q_polynomials, FlowState, MonotoneMap,
};
use cstbin::detection::helstrom_nonlinear;
use cstbin::families::FamilySpec;
use cstbin::poly::RatPoly;
use cstbin::rational::{parse_rational, rational_to_f64, Rational};
use cstbin::report::ClassReport;
use cstbin::series::TruncSeries;
use cstbin::sigma::{check_sigma, check_sigma0, check_sigma_plus, Sigma0Expr};
use serde::Deserialize;
use std::fmt::Write as _;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "cstbin",
    version,
    about = "Deformed binomial distributions from generating functions"
)]
struct Cli {
    /// Truncation order for series arithmetic (max 512)
    #[arg(long, global = true, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..=512))]
    order: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Class-membership reports for a spec
    Spec {
        #[command(subcommand)]
        action: SpecAction,
    },
    /// x_n, x_n! and I_n table
    Sequence {
        /// JSON spec (inline or @file)
        spec: String,
        #[arg(long, default_value_t = 20)]
        n_max: usize,
    },
    /// Win-parameter polynomials p_n, exact coefficients
    Poly {
        spec: String,
        #[arg(long, default_value_t = 20)]
        n_max: usize,
        /// Also sample each polynomial on a uniform grid with this many steps
        #[arg(long)]
        eta_grid: Option<usize>,
    },
    /// Deformed binomial table at n trials, win parameter eta
    Dist {
        spec: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eta: String,
        /// Monotone reparametrization: pow:C or poly:c0,c1,...
        #[arg(long)]
        g: Option<String>,
    },
    /// Apply a deformation operator and cross-check formula vs series routes
    Deform {
        spec: String,
        /// d (quotient) or e (product)
        #[arg(long)]
        op: DeformOp,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
    },
    /// Iterate the coefficient flow
    Flow {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        /// Comma-separated exponent coefficients f_0,f_1,...
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long)]
        steps: u64,
    },
    /// Recursion harnesses (1: single term, 2: multi term)
    Conjecture {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        m: Option<u32>,
        /// Comma-separated a_2,...,a_m for the multi-term harness
        #[arg(long)]
        coeffs: Option<String>,
        #[arg(long, value_enum, default_value_t = ConventionArg::Both)]
        convention: ConventionArg,
        #[arg(long, default_value_t = 200)]
        n_max: usize,
    },
    /// Detection bound through the generating function
    Helstrom {
        spec: String,
        #[arg(long)]
        t: f64,
    },
    /// CSV of (eta, p_n(eta)) on a 201-point grid for a named configuration
    Figure {
        name: String,
        /// Write to a file instead of stdout
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Subcommand)]
enum SpecAction {
    /// Report Sigma0/Sigma/SigmaPlus membership up to the truncation order
    Check { spec: String },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum DeformOp {
    D,
    E,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ConventionArg {
    AsPrinted,
    ScaledByN,
    Both,
}

/// A generating-function spec: raw coefficients, a closed-form family, or a
/// class-member expression whose exponential is taken.
#[derive(Deserialize)]
#[serde(untagged)]
enum GfSpec {
    Raw { raw: Vec<String> },
    Family(FamilySpec),
    Sigma0(Sigma0Expr),
}

struct CliError {
    message: String,
}

fn domain<E: std::fmt::Display>(e: E) -> CliError {
    CliError { message: e.to_string() }
}

fn load_spec(arg: &str) -> Result<GfSpec, CliError> {
    let text = if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(|e| domain(format!("cannot read {path}: {e}")))?
    } else {
        arg.to_string()
    };
    serde_json::from_str(&text).map_err(|e| domain(format!("malformed spec JSON: {e}")))
}

impl GfSpec {
    /// Raw coefficient lists carry their own truncation order; families and
    /// expressions are evaluated at the requested one.
    fn series(&self, order: usize) -> Result<TruncSeries, CliError> {
        match self {
            GfSpec::Raw { raw } => {
                if raw.is_empty() {
                    return Err(domain("raw: needs at least one coefficient"));
                }
                let coeffs = raw
                    .iter()
                    .map(|s| parse_rational(s))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| domain(format!("raw: {e}")))?;
                Ok(TruncSeries::from_coeffs(coeffs))
            }
            GfSpec::Family(f) => f.series(order).map_err(domain),
            GfSpec::Sigma0(expr) => Ok(expr.eval(order).map_err(domain)?.exp().map_err(domain)?),
        }
    }
}

fn parse_rat_arg(s: &str, field: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(|e| domain(format!("{field}: {e}")))
}

fn parse_rat_list(s: &str, field: &str) -> Result<Vec<Rational>, CliError> {
    s.split(',')
        .map(|part| parse_rational(part.trim()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| domain(format!("{field}: {e}")))
}

fn parse_monotone_map(s: &str) -> Result<MonotoneMap, CliError> {
    if let Some(c) = s.strip_prefix("pow:") {
        return Ok(MonotoneMap::Power { c: parse_rat_arg(c, "g")? });
    }
    if let Some(list) = s.strip_prefix("poly:") {
        return Ok(MonotoneMap::Poly { coeffs: parse_rat_list(list, "g")? });
    }
    Err(domain(format!("g: expected pow:C or poly:c0,c1,..., got {s:?}")))
}

fn rat_strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(Rational::to_string).collect()
}

fn poly_json(n: usize, p: &RatPoly) -> serde_json::Value {
    serde_json::json!({ "n": n, "coeffs": rat_strings(p.coeffs()) })
}

fn recursion_json(
    which: u8,
    convention: Option<Convention>,
    r: &RecursionReport,
) -> serde_json::Value {
    let mut v = serde_json::json!({
        "conjecture": which,
        "n_max": r.n_max,
        "verdict": if r.passed() { "pass" } else { "fail" },
        "first_failure": r.first_failure,
        "ratios": r.ratios,
    });
    if let Some(c) = convention {
        v["convention"] = serde_json::to_value(c).expect("convention serializes");
    }
    v
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("valid JSON"));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // help/version exit clean, anything else is a usage error
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let order = cli.order as usize;
    match run(cli.command, order) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, order: usize) -> Result<ExitCode, CliError> {
    match command {
        Command::Spec { action: SpecAction::Check { spec } } => spec_check(&spec, order),
        Command::Sequence { spec, n_max } => sequence_cmd(&spec, order, n_max),
        Command::Poly { spec, n_max, eta_grid } => poly_cmd(&spec, order, n_max, eta_grid),
        Command::Dist { spec, n, eta, g } => dist_cmd(&spec, order, n, &eta, g.as_deref()),
        Command::Deform { spec, op, alpha, n_max } => deform_cmd(&spec, order, op, &alpha, n_max),
        Command::Flow { alpha, f, steps } => flow_cmd(&alpha, &f, steps),
        Command::Conjecture { which, a, m, coeffs, convention, n_max } => {
            conjecture_cmd(which, a.as_deref(), m, coeffs.as_deref(), convention, n_max)
        }
        Command::Helstrom { spec, t } => helstrom_cmd(&spec, order, t),
        Command::Figure { name, out } => figure_cmd(&name, out.as_deref()),
    }
}

fn spec_check(spec: &str, order: usize) -> Result<ExitCode, CliError> {
    let parsed = load_spec(spec)?;
    let mut reports: Vec<ClassReport> = Vec::new();
    if let GfSpec::Sigma0(expr) = &parsed {
        let f = expr.eval(order).map_err(domain)?;
        reports.push(check_sigma0(&f));
    }
    let series = parsed.series(order)?;
    reports.push(check_sigma(&series));
    if series.coeff(0) == &cstbin::rational::rat_int(1) {
        reports.push(check_sigma_plus(&series).map_err(domain)?);
    }
    let all_pass = reports.iter().all(ClassReport::passed);
    let json: Vec<_> = reports
        .iter()
        .map(|r| serde_json::to_value(r).expect("report serializes"))
        .collect();
    print_json(&serde_json::Value::Array(json));
    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(3) })
}

fn sequence_cmd(spec: &str, order: usize, n_max: usize) -> Result<ExitCode, CliError> {
    let order = order.max(n_max);
    let series = load_spec(spec)?.series(order)?;
    let seq = sequence_from_series(&series).map_err(domain)?;
    let icoeffs = i_coefficients(&series).map_err(domain)?;
    let n_max = n_max.min(seq.order());
    let rows: Vec<_> = (0..=n_max)
        .map(|n| {
            serde_json::json!({
                "n": n,
                "x": seq.x(n).to_string(),
                "x_factorial": seq.x_factorial(n).to_string(),
                "i": icoeffs[n].to_string(),
            })
        })
        .collect();
    print_json(&serde_json::json!({ "order": order, "rows": rows }));
    Ok(ExitCode::SUCCESS)
}

fn poly_cmd(
    spec: &str,
    order: usize,
    n_max: usize,
    eta_grid: Option<usize>,
) -> Result<ExitCode, CliError> {
    let order = order.max(n_max);
    let series = load_spec(spec)?.series(order)?;
    let polys = pn_polynomials(&series).map_err(domain)?;
    let n_max = n_max.min(polys.len() - 1);
    let mut out = serde_json::json!({
        "polys": (0..=n_max).map(|n| poly_json(n, &polys[n])).collect::<Vec<_>>(),
    });
    if let Some(steps) = eta_grid {
        if steps == 0 {
            return Err(domain("eta-grid: must be >= 1"));
        }
        let etas: Vec<f64> = (0..=steps).map(|j| j as f64 / steps as f64).collect();
        let values: Vec<Vec<f64>> = (0..=n_max)
            .map(|n| etas.iter().map(|&e| polys[n].eval_f64(e)).collect())
            .collect();
        out["samples"] = serde_json::json!({ "etas": etas, "values": values });
    }
    print_json(&out);
    Ok(ExitCode::SUCCESS)
}

fn dist_cmd(
    spec: &str,
    order: usize,
    n: usize,
    eta: &str,
    g: Option<&str>,
) -> Result<ExitCode, CliError> {
    let order = order.max(n);
    let eta = parse_rat_arg(eta, "eta")?;
    let series = load_spec(spec)?.series(order)?;
    let table = match g {
        None => deformed_binomial(&series, n, &eta).map_err(domain)?,
        Some(map) => {
            let map = parse_monotone_map(map)?;
            eta_deform(&series, &map, n, &eta).map_err(domain)?
        }
    };
    if !table.probabilistic {
        eprintln!(
            "note: source series failed the SigmaPlus check; table is formal (entries may be negative)"
        );
    }
    println!("{}", rat_strings(&table.probs).join(","));
    Ok(ExitCode::SUCCESS)
}

fn deform_cmd(
    spec: &str,
    order: usize,
    op: DeformOp,
    alpha: &str,
    n_max: usize,
) -> Result<ExitCode, CliError> {
    let alpha = parse_rat_arg(alpha, "alpha")?;
    let series = load_spec(spec)?.series(order)?;
    let seq = sequence_from_series(&series).map_err(domain)?;
    let polys = pn_polynomials(&series).map_err(domain)?;
    let n_max = n_max.min(order);

    let (transformed, route_ok) = match op {
        DeformOp::D => {
            let transformed = d_alpha(&series, &alpha).map_err(domain)?;
            let series_seq = sequence_from_series(&transformed).map_err(domain)?;
            let formula_seq = d_alpha_sequence(&seq, &polys, &alpha).map_err(domain)?;
            let icoeffs = i_coefficients(&series).map_err(domain)?;
            let formula_i = d_alpha_i_coefficients(&seq, &icoeffs, &alpha).map_err(domain)?;
            let series_i = i_coefficients(&transformed).map_err(domain)?;
            let formula_p = d_alpha_polynomials(&seq, &polys, &alpha).map_err(domain)?;
            let series_p = pn_polynomials(&transformed).map_err(domain)?;
            let ok = (0..=n_max).all(|k| {
                formula_seq.x(k) == series_seq.x(k)
                    && formula_i[k] == series_i[k]
                    && formula_p[k] == series_p[k]
            });
            (transformed, ok)
        }
        DeformOp::E => {
            let transformed = e_alpha(&series, &alpha).map_err(domain)?;
            let series_seq = sequence_from_series(&transformed).map_err(domain)?;
            let q = q_polynomials(&seq);
            let (formula_seq, formula_p) =
                e_alpha_sequence_and_polys(&seq, &polys, &q, &alpha).map_err(domain)?;
            let series_p = pn_polynomials(&transformed).map_err(domain)?;
            let ok = (0..=n_max)
                .all(|k| formula_seq.x(k) == series_seq.x(k) && formula_p[k] == series_p[k]);
            (transformed, ok)
        }
    };

    let new_seq = sequence_from_series(&transformed).map_err(domain)?;
    print_json(&serde_json::json!({
        "op": match op { DeformOp::D => "d", DeformOp::E => "e" },
        "alpha": alpha.to_string(),
        "series": rat_strings(&transformed.coeffs()[..=n_max]),
        "sequence": rat_strings(&new_seq.xs()[..=n_max]),
        "route_check": if route_ok { "pass" } else { "fail" },
    }));
    Ok(if route_ok { ExitCode::SUCCESS } else { ExitCode::from(3) })
}

fn flow_cmd(alpha: &str, f: &str, steps: u64) -> Result<ExitCode, CliError> {
    let alpha = parse_rat_arg(alpha, "alpha")?;
    let coeffs = parse_rat_list(f, "f")?;
    let state = FlowState::new(coeffs, alpha).map_err(domain)?;
    let (end, axes) = flow_iterate(&state, steps);
    print_json(&serde_json::json!({
        "alpha": end.alpha.to_string(),
        "steps": steps,
        "initial": rat_strings(&state.coeffs),
        "final": rat_strings(&end.coeffs),
        "axes": axes,
    }));
    Ok(ExitCode::SUCCESS)
}

fn conjecture_cmd(
    which: u8,
    a: Option<&str>,
    m: Option<u32>,
    coeffs: Option<&str>,
    convention: ConventionArg,
    n_max: usize,
) -> Result<ExitCode, CliError> {
    match which {
        1 => {
            let a = parse_rat_arg(a.ok_or_else(|| domain("conjecture 1 needs --a"))?, "a")?;
            let m = m.ok_or_else(|| domain("conjecture 1 needs --m"))?;
            let report = single_term_check(&a, m, n_max).map_err(domain)?;
            print_json(&recursion_json(1, None, &report));
            Ok(ExitCode::SUCCESS)
        }
        _ => {
            let coeffs = parse_rat_list(
                coeffs.ok_or_else(|| domain("conjecture 2 needs --coeffs"))?,
                "coeffs",
            )?;
            let conventions: Vec<Convention> = match convention {
                ConventionArg::AsPrinted => vec![Convention::AsPrinted],
                ConventionArg::ScaledByN => vec![Convention::ScaledByN],
                ConventionArg::Both => vec![Convention::AsPrinted, Convention::ScaledByN],
            };
            let mut out = Vec::new();
            for c in conventions {
                let report = multi_term_check(&coeffs, c, n_max).map_err(domain)?;
                out.push(recursion_json(2, Some(c), &report));
            }
            print_json(&serde_json::Value::Array(out));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn helstrom_cmd(spec: &str, order: usize, t: f64) -> Result<ExitCode, CliError> {
    let series = load_spec(spec)?.series(order)?;
    let bound = helstrom_nonlinear(&series, t).map_err(domain)?;
    print_json(&serde_json::json!({
        "t": t,
        "n_value": bound.n_value,
        "bound": bound.bound,
        "tail_ratio": bound.tail_ratio,
    }));
    Ok(ExitCode::SUCCESS)
}

/// Named plot-data configurations: the negative power at n0 = 5 (k = 1..7),
/// the three two-factor pairs (k = 1..4), and the quadratic exponential at
/// a = 1/2 (n = 1..5).
fn figure_config(name: &str) -> Option<(FamilySpec, Vec<usize>)> {
    let rat = cstbin::rational::rat;
    match name {
        "negpow-n5" => Some((FamilySpec::NegPow { a: rat(1, 1), n0: 5 }, (1..=7).collect())),
        "twofactor-14-12" => {
            Some((FamilySpec::TwoFactor { a1: rat(1, 4), a2: rat(1, 2) }, (1..=4).collect()))
        }
        "twofactor-13-43" => {
            Some((FamilySpec::TwoFactor { a1: rat(1, 3), a2: rat(4, 3) }, (1..=4).collect()))
        }
        "twofactor-54-64" => {
            Some((FamilySpec::TwoFactor { a1: rat(5, 4), a2: rat(6, 4) }, (1..=4).collect()))
        }
        "gauss-a12" => Some((FamilySpec::Gauss { a: rat(1, 2) }, (1..=5).collect())),
        _ => None,
    }
}

const FIGURE_NAMES: [&str; 5] =
    ["negpow-n5", "twofactor-14-12", "twofactor-13-43", "twofactor-54-64", "gauss-a12"];

fn figure_cmd(name: &str, out: Option<&str>) -> Result<ExitCode, CliError> {
    let Some((family, ns)) = figure_config(name) else {
        eprintln!("error: unknown figure {name:?}; available: {}", FIGURE_NAMES.join(", "));
        return Ok(ExitCode::from(1));
    };
    let order = *ns.last().expect("nonempty");
    let series = family.series(order).map_err(domain)?;
    let polys = pn_polynomials(&series).map_err(domain)?;
    let mut csv = String::new();
    let header: Vec<String> = ns.iter().map(|n| format!("p{n}")).collect();
    let _ = writeln!(csv, "eta,{}", header.join(","));
    for j in 0..=200u32 {
        let eta = Rational::new(j.into(), 200.into());
        let mut row = vec![format!("{}", f64::from(j) / 200.0)];
        for &n in &ns {
            row.push(format!("{}", rational_to_f64(&polys[n].eval(&eta))));
        }
        let _ = writeln!(csv, "{}", row.join(","));
    }
    match out {
        None => print!("{csv}"),
        Some(path) => std::fs::write(path, csv)
            .map_err(|e| domain(format!("cannot write {path}: {e}")))?,
    }
    Ok(ExitCode::SUCCESS)
}
