mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gconst_core::asymptotics::{asymptotic_report, eta_bracket, gamma_bracket_with, laplace_delta};
use gconst_core::constants::{
    delta_star, display_value, eta_value, Engine, Quantity, Route, DEFAULT_N_CAP, MAX_ESCALATIONS,
};
use gconst_core::efunction::eval_f;
use gconst_core::precision::{enclose_decimal, to_scientific};
use gconst_core::verify::{run_suite, SuiteLevel};
use gconst_core::{Ball, Error, PrecisionContext};
use serde_json::json;

use output::{Format, Precision, Report};

#[derive(Parser, Debug)]
#[command(name = "gconst", version, about = "Certified values of the generalized eta, gamma and delta constants")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Fractional digits to print (truncated, certified).
    #[arg(short, long, global = true, env = "GCONST_DIGITS", default_value_t = 10,
          value_parser = clap::value_parser!(u32).range(1..=10_000))]
    digits: u32,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Override the working precision in bits.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(16..))]
    precision_bits: Option<u32>,

    /// Cross-validate every value against its independent routes.
    #[arg(long, global = true)]
    seed_check: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Table of eta(n), gamma(n), delta(n) for n = 0..=n_max.
    Table {
        #[arg(short = 'n', long, default_value_t = 15)]
        n_max: u32,
    },
    /// A single constant.
    Value {
        #[arg(value_enum)]
        which: Which,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// Run the verification suite.
    Verify {
        #[arg(long, value_enum, default_value_t = Level::Quick)]
        level: Level,
    },
    /// Asymptotic brackets and the Laplace estimate.
    Asym {
        #[arg(value_enum)]
        kind: AsymKind,
        /// Comma-separated list of n.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u32>,
    },
    /// The E-function F_n(t).
    Efun {
        #[arg(long)]
        n: u32,
        /// Decimal string, e.g. -1 or 0.25.
        #[arg(long, allow_hyphen_values = true)]
        t: String,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Which {
    Eta,
    Gamma,
    Delta,
    DeltaStar,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Level {
    Quick,
    Full,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum AsymKind {
    EtaBracket,
    GammaBracket,
    DeltaLaplace,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Failure::Runtime(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            print!("{}", report.render(cli.format));
            if report.verdict {
                ExitCode::SUCCESS
            } else {
                if let Some(reason) = &report.failure {
                    eprintln!("failed: {reason}");
                }
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn context(cli: &Cli) -> Result<PrecisionContext, Failure> {
    Ok(match cli.precision_bits {
        Some(bits) => PrecisionContext::with_working_bits(cli.digits, bits)?,
        None => PrecisionContext::new(cli.digits)?,
    })
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let ctx = context(cli)?;
    match &cli.command {
        Command::Table { n_max } => cmd_table(*n_max, cli.digits, &ctx),
        Command::Value { which, n } => cmd_value(*which, *n, cli.digits, cli.seed_check, &ctx),
        Command::Verify { level } => cmd_verify(*level, &ctx),
        Command::Asym { kind, n } => cmd_asym(*kind, n, cli.digits, &ctx),
        Command::Efun { n, t } => cmd_efun(*n, t, cli.digits, &ctx),
    }
}

fn precision(ctx: &PrecisionContext, working_bits: u32, escalations: u32) -> Precision {
    Precision { target_digits: ctx.target_digits(), working_bits, escalations }
}

fn cmd_table(n_max: u32, digits: u32, ctx: &PrecisionContext) -> Result<Report, Failure> {
    if n_max > DEFAULT_N_CAP {
        return Err(Failure::Usage(format!("--n-max must be at most {DEFAULT_N_CAP}")));
    }
    let table = Engine::new().table(n_max, digits, ctx)?;
    let mut report =
        Report::new("table", precision(ctx, table.working_bits, table.escalations), &["n", "eta", "gamma", "delta"]);
    for r in &table.records {
        let [eta, gamma, delta] = r.render(digits);
        let residual = to_scientific(&r.hardy_residual.abs().add_error(r.hardy_residual.rad()), 3);
        let ok = r.certified && r.checks.all();
        report.push(
            vec![r.n.to_string(), eta.0.clone(), gamma.0.clone(), delta.0.clone()],
            vec![true, eta.1, gamma.1, delta.1],
            json!({
                "n": r.n,
                "eta": eta.0,
                "gamma": gamma.0,
                "delta": delta.0,
                "certified": { "eta": eta.1, "gamma": gamma.1, "delta": delta.1 },
                "residual": residual,
            }),
        );
        if !ok {
            report.fail(format!("row n = {} not certified", r.n));
        }
    }
    Ok(report)
}

/// Evaluates `f` at increasing precision until `digits` are certified.
fn certify(
    ctx: &PrecisionContext,
    digits: u32,
    f: impl Fn(&PrecisionContext) -> Result<Ball, Error>,
) -> Result<(Ball, String, bool, PrecisionContext, u32), Failure> {
    let mut cur = *ctx;
    let mut escalations = 0;
    loop {
        let v = f(&cur)?;
        let (s, ok) = display_value(&v, digits);
        if ok || escalations == MAX_ESCALATIONS {
            return Ok((v, s, ok, cur, escalations));
        }
        cur = cur.escalate();
        escalations += 1;
    }
}

fn cmd_value(which: Which, n: u32, digits: u32, seed_check: bool, ctx: &PrecisionContext) -> Result<Report, Failure> {
    if n > DEFAULT_N_CAP && !matches!(which, Which::DeltaStar) {
        return Err(Failure::Usage(format!("--n must be at most {DEFAULT_N_CAP}")));
    }
    let engine = Engine::new();
    let (name, route, n_field) = match which {
        Which::Eta => ("eta", "series", Some(n)),
        Which::Gamma => ("gamma", "recurrence", Some(n)),
        Which::Delta => ("delta", "quadrature", Some(n)),
        Which::DeltaStar => ("delta-star", "exponential-integral", None),
    };
    let (_, s, ok, cur, escalations) = certify(ctx, digits, |c| match which {
        Which::Eta => Ok(eta_value(n, c)),
        Which::Gamma if n == 0 => Ok(Ball::one(c.working_bits())),
        Which::Gamma => Ok(engine.gamma_recurrence(n, c)?.swap_remove(n as usize)),
        Which::Delta if n == 0 => Ok(Ball::from_i64(-1, c.working_bits())),
        Which::Delta => Ok(engine.delta_quadrature(n, c)?.swap_remove(n as usize)),
        Which::DeltaStar => delta_star(c),
    })?;
    let mut report =
        Report::new("value", precision(ctx, cur.working_bits(), escalations), &["quantity", "n", "value", "route"]);
    let mut row = json!({ "quantity": name, "n": n_field, "value": s, "certified": ok, "route": route });
    let mut cross = None;
    if seed_check && n_field.is_some() {
        let rec = engine.records(n, digits, &cur)?.swap_remove(n as usize);
        let q = match which {
            Which::Eta => Quantity::Eta,
            Which::Gamma => Quantity::Gamma,
            _ => Quantity::Delta,
        };
        let passed = match q {
            Quantity::Eta => rec.checks.eta_routes,
            Quantity::Gamma => rec.checks.gamma_routes,
            Quantity::Delta => rec.checks.delta_routes,
        } && rec.checks.hardy;
        let routes: Vec<String> =
            rec.route_values.iter().filter(|v| v.quantity == q).map(|v| route_name(v.route).to_string()).collect();
        row["cross_check"] = json!({ "routes": routes, "passed": passed });
        cross = Some(passed);
    }
    report.push(
        vec![name.to_string(), n_field.map_or(String::new(), |n| n.to_string()), s, route.to_string()],
        vec![true, true, ok, true],
        row,
    );
    if !ok {
        report.fail(format!("{name} not certified to {digits} digits"));
    }
    if cross == Some(false) {
        report.fail(format!("{name} routes disagree"));
    }
    Ok(report)
}

fn route_name(r: Route) -> &'static str {
    match r {
        Route::Series => "series",
        Route::Quadrature => "quadrature",
        Route::Recurrence => "recurrence",
        Route::Identity => "identity",
    }
}

fn cmd_verify(level: Level, ctx: &PrecisionContext) -> Result<Report, Failure> {
    let level = match level {
        Level::Quick => SuiteLevel::Quick,
        Level::Full => SuiteLevel::Full,
    };
    let suite = run_suite(level, ctx);
    let mut report = Report::new(
        "verify",
        precision(ctx, ctx.working_bits(), 0),
        &["check", "passed", "margin", "elapsed_ms", "detail"],
    );
    for c in &suite.checks {
        let margin = c.worst_margin.map_or(String::new(), |m| format!("{m:e}"));
        report.push(
            vec![c.name.clone(), c.passed.to_string(), margin.clone(), c.elapsed_ms.to_string(), c.detail.clone()],
            vec![true; 5],
            json!({ "check": c.name, "passed": c.passed, "margin": c.worst_margin, "detail": c.detail }),
        );
        if !c.passed {
            report.fail(format!("check {}", c.name));
        }
    }
    Ok(report)
}

fn cmd_asym(kind: AsymKind, ns: &[u32], digits: u32, ctx: &PrecisionContext) -> Result<Report, Failure> {
    if let Some(&bad) = ns.iter().find(|&&n| if kind == AsymKind::DeltaLaplace { n < 3 } else { n < 1 }) {
        let min = if kind == AsymKind::DeltaLaplace { 3 } else { 1 };
        return Err(Failure::Usage(format!("n = {bad} is out of range; this report needs n >= {min}")));
    }
    if let Some(&bad) = ns.iter().find(|&&n| n > 4 * DEFAULT_N_CAP) {
        return Err(Failure::Usage(format!("n = {bad} exceeds {}", 4 * DEFAULT_N_CAP)));
    }
    let show = |b: &Ball| display_value(b, digits);
    let (name, cols): (&str, &[&str]) = match kind {
        AsymKind::EtaBracket => ("eta-bracket", &["n", "lower", "value", "upper", "contained"]),
        AsymKind::GammaBracket => ("gamma-bracket", &["n", "lower", "value", "upper", "contained"]),
        AsymKind::DeltaLaplace => ("delta-laplace", &["n", "estimate", "certified", "relative_error"]),
    };
    let mut report = Report::new(&format!("asym {name}"), precision(ctx, ctx.working_bits(), 0), cols);
    let estimates = match kind {
        AsymKind::EtaBracket => None,
        _ => Some(asymptotic_report(ns, ctx)?),
    };
    for (i, &n) in ns.iter().enumerate() {
        match kind {
            AsymKind::EtaBracket | AsymKind::GammaBracket => {
                let (value, (lo, hi)) = match &estimates {
                    None => (eta_value(n, ctx), eta_bracket(n, ctx)?),
                    Some(e) => (e[i].gamma_n.clone(), gamma_bracket_with(n, &e[i].delta_n, ctx)?),
                };
                let inside = gconst_core::asymptotics::contained(&value, &lo, &hi);
                let (l, v, h) = (show(&lo), show(&value), show(&hi));
                report.push(
                    vec![n.to_string(), l.0.clone(), v.0.clone(), h.0.clone(), inside.to_string()],
                    vec![true, l.1, v.1, h.1, true],
                    json!({ "n": n, "lower": l.0, "value": v.0, "upper": h.0, "contained": inside,
                            "certified": { "lower": l.1, "value": v.1, "upper": h.1 } }),
                );
                if !inside {
                    report.fail(format!("n = {n} outside its bracket"));
                }
            }
            AsymKind::DeltaLaplace => {
                let e = &estimates.as_ref().expect("computed above")[i];
                let est = laplace_delta(n, ctx)?;
                let (l, d) = (show(&est), show(&e.delta_n.abs()));
                let rel = e.relative_error.as_ref().map_or(String::new(), |r| to_scientific(r, 4));
                report.push(
                    vec![n.to_string(), l.0.clone(), d.0.clone(), rel.clone()],
                    vec![true, true, d.1, true],
                    json!({ "n": n, "estimate": l.0, "certified": d.0, "relative_error": rel,
                            "certified_flag": d.1 }),
                );
                if !d.1 {
                    report.fail(format!("|delta({n})| not certified"));
                }
            }
        }
    }
    Ok(report)
}

fn cmd_efun(n: u32, t: &str, digits: u32, ctx: &PrecisionContext) -> Result<Report, Failure> {
    let (_, s, ok, cur, escalations) = certify(ctx, digits, |c| {
        let tb = enclose_decimal(t, c)?;
        Ok(eval_f(n, &tb, c))
    })?;
    let mut report = Report::new("efun", precision(ctx, cur.working_bits(), escalations), &["n", "t", "value"]);
    report.push(
        vec![n.to_string(), t.to_string(), s.clone()],
        vec![true, true, ok],
        json!({ "n": n, "t": t, "value": s, "certified": ok }),
    );
    if !ok {
        report.fail(format!("F_{n}({t}) not certified to {digits} digits"));
    }
    Ok(report)
}
