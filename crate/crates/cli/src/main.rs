//! `torsheaf`: compute generating functions, wall-crossings and cross-checks
//! from the command line.
//!
//! Exit codes: 0 ok, 1 usage, 2 integrality violated, 3 enumeration or limit
//! did not stabilize, 4 cross-check mismatch.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use serde::Serialize;

use torsheaf::closedforms::{fa_rank2, p2_rank2, p2_rank3, rank1_series};
use torsheaf::oracles::{klyachko_series, yoshioka_series};
use torsheaf::wallcross::{goettsche_series, joyce_wallcross, numeric_wallcross, p1p1_wallcross_closed, WallContext};
use torsheaf::{generating_function_rank2, DivisorClass, Error, Fan, LaurentSeries};

#[derive(Parser)]
#[command(name = "torsheaf", version, about = "Euler characteristics of moduli of sheaves on toric surfaces")]
struct Cli {
    /// Worker threads for the enumeration kernels.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Generating function of Euler characteristics through q^order.
    Compute(ComputeArgs),
    /// Infinitesimal wall-crossing on a Hirzebruch surface.
    Wallcross(WallArgs),
    /// Compare independent routes to the same series.
    Crosscheck(CrossArgs),
    /// Rays and intersection data of a fan.
    FanInfo(FanArgs),
}

#[derive(Args)]
struct FanArgs {
    /// Preset (`P2`, `Fa:<a>`) or path to a JSON file `{"rays": [[x,y], ...]}`.
    #[arg(long, default_value = "P2")]
    fan: String,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    fan: FanArgs,
    #[arg(long, default_value_t = 2)]
    rank: u32,
    /// c1 in the basis D3..DN, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    c1: Vec<i64>,
    /// Polarization as raw coefficients on D1..DN, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with_all = ["alpha", "beta"])]
    h: Option<Vec<i64>>,
    /// H = alpha D1 + beta D2 on a Hirzebruch surface.
    #[arg(long, requires = "beta")]
    alpha: Option<i64>,
    #[arg(long, requires = "alpha")]
    beta: Option<i64>,
    #[arg(long, default_value_t = 10)]
    order: i64,
    #[arg(long, value_enum, default_value_t = Engine::Auto)]
    engine: Engine,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    /// Closed form when one exists, otherwise the generic engine.
    Auto,
    Generic,
    Closed,
    /// Göttsche's sum; needs c1 = (eps - a, 1) with eps in {0, 1}.
    Goettsche,
}

#[derive(Args)]
struct WallArgs {
    /// `Fa:<a>`.
    #[arg(long, default_value = "Fa:0")]
    fan: String,
    /// The wall is lambda0 = alpha / beta.
    #[arg(long)]
    alpha: i64,
    #[arg(long)]
    beta: i64,
    /// c1 = f3 D3 + f4 D4, as `f3,f4`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,0")]
    c1: Vec<i64>,
    #[arg(long, default_value_t = 10)]
    order: i64,
    #[arg(long, value_enum, default_value_t = Route::Numeric)]
    route: Route,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Route {
    Numeric,
    Closed,
    Joyce,
    /// Every applicable route; fails unless they agree.
    All,
}

#[derive(Args)]
struct CrossArgs {
    #[arg(long, value_enum, default_value_t = Suite::Hurwitz)]
    suite: Suite,
    #[arg(long, default_value_t = 12)]
    order: i64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    /// P2 rank 2 with c1 = 1 against Klyachko and Yoshioka.
    Hurwitz,
    /// The three wall-crossing routes on P1xP1 at lambda0 in {1/2, 1, 2}.
    Wallcross,
}

/// Failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::IntegralityViolated(_) | Error::NonUnitSeries => 2,
            Error::LimitDidNotStabilize(_) | Error::BoundDoublingMismatch(_) | Error::ShellCapExceeded(_) => 3,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

type Outcome<T> = Result<T, Failure>;

#[derive(Serialize)]
struct SeriesDoc {
    scale: i64,
    order: i64,
    terms: Vec<TermDoc>,
}

#[derive(Serialize)]
struct TermDoc {
    exp: i64,
    coeff: String,
}

fn series_doc(s: &LaurentSeries, order: i64) -> SeriesDoc {
    SeriesDoc {
        scale: s.scale(),
        order,
        terms: s
            .numerators()
            .map(|(e, c)| TermDoc { exp: e, coeff: c.to_string() })
            .collect(),
    }
}

fn render_series(s: &LaurentSeries, order: i64, format: Format) -> String {
    let doc = series_doc(s, order);
    match format {
        Format::Json => serde_json::to_string(&doc).expect("series serializes") + "\n",
        Format::Csv => {
            let mut out = String::from("exp,coeff\n");
            for t in &doc.terms {
                let _ = writeln!(out, "{},{}", t.exp, t.coeff);
            }
            out
        }
        Format::Plain => {
            let mut out = String::new();
            for t in &doc.terms {
                let _ = writeln!(out, "{} {}", t.exp, t.coeff);
            }
            out
        }
    }
}

fn load_fan(spec: &str) -> Outcome<Fan> {
    if spec == "P2" || spec.starts_with("Fa:") {
        let fan = Fan::from_preset(spec)?;
        if hirzebruch_parameter(spec).is_some_and(|a| a < 0) {
            return Err(Failure::usage("Hirzebruch parameter must be nonnegative"));
        }
        return Ok(fan);
    }
    let text = std::fs::read_to_string(spec).map_err(|e| Failure::usage(format!("cannot read fan file {spec}: {e}")))?;
    Ok(Fan::from_json(&text)?)
}

fn hirzebruch_parameter(spec: &str) -> Option<i64> {
    spec.strip_prefix("Fa:").and_then(|a| a.trim().parse().ok())
}

fn check_order(order: i64) -> Outcome<()> {
    if order < 0 {
        return Err(Failure::usage("order must be nonnegative"));
    }
    Ok(())
}

fn c1_class(fan: &Fan, c1: &[i64]) -> Outcome<DivisorClass> {
    let n = fan.len() - 2;
    match c1.len() {
        0 => Ok(fan.class_canonical(&vec![0; n])),
        k if k == n => Ok(fan.class_canonical(c1)),
        k => Err(Failure::usage(format!("--c1 needs {n} coefficients (D3..DN), got {k}"))),
    }
}

fn compute(args: &ComputeArgs) -> Outcome<LaurentSeries> {
    check_order(args.order)?;
    let fan = load_fan(&args.fan.fan)?;
    let preset_a = hirzebruch_parameter(&args.fan.fan);
    let is_p2 = args.fan.fan == "P2";
    let c1 = c1_class(&fan, &args.c1)?;
    let order = args.order;
    match args.rank {
        1 => return Ok(rank1_series(&fan, order)?),
        2 => {}
        3 => {
            if !is_p2 {
                return Err(Failure::usage("rank 3 is only available on P2"));
            }
            if matches!(args.engine, Engine::Generic | Engine::Goettsche) {
                return Err(Failure::usage("rank 3 has only the closed form"));
            }
            return Ok(p2_rank3(c1.canonical()[0], order)?);
        }
        r => return Err(Failure::usage(format!("unsupported rank {r}; expected 1, 2 or 3"))),
    }

    let h = match (&args.h, args.alpha, args.beta) {
        (Some(raw), _, _) => {
            if raw.len() != fan.len() {
                return Err(Failure::usage(format!("--h needs {} coefficients, got {}", fan.len(), raw.len())));
            }
            fan.class(raw.clone())
        }
        (None, Some(alpha), Some(beta)) => {
            if preset_a.is_none() {
                return Err(Failure::usage("--alpha/--beta need a Fa:<a> fan"));
            }
            fan.alpha_beta(alpha, beta)
        }
        _ if is_p2 => fan.ray_class(2),
        _ => return Err(Failure::usage("give --h or --alpha/--beta")),
    };

    let closed = match args.engine {
        Engine::Generic => None,
        Engine::Goettsche => {
            let (Some(a), Some(alpha), Some(beta)) = (preset_a, args.alpha, args.beta) else {
                return Err(Failure::usage("the Goettsche engine needs a Fa:<a> fan and --alpha/--beta"));
            };
            let f = c1.canonical();
            let eps = f[0] + a;
            if f[1] != 1 || !(0..=1).contains(&eps) {
                return Err(Failure::usage("the Goettsche engine needs c1 = (eps - a, 1) with eps in {0, 1}"));
            }
            if beta <= 0 {
                return Err(Failure::usage("beta must be positive"));
            }
            return Ok(goettsche_series(a, Rational64::new(alpha, beta), eps, order)?);
        }
        Engine::Auto | Engine::Closed => {
            if is_p2 && args.h.is_none() {
                Some(p2_rank2(c1.canonical()[0], order)?)
            } else if let (Some(a), Some(alpha), Some(beta)) = (preset_a, args.alpha, args.beta) {
                let f = c1.canonical();
                Some(fa_rank2(a, alpha, beta, f[0], f[1], order)?)
            } else if args.engine == Engine::Closed {
                return Err(Failure::usage("no closed form for this fan and polarization"));
            } else {
                None
            }
        }
    };
    match closed {
        Some(s) => Ok(s),
        None => Ok(generating_function_rank2(&fan, &h, &c1, order)?),
    }
}

fn wall_context(args: &WallArgs) -> Outcome<WallContext> {
    check_order(args.order)?;
    let Some(a) = hirzebruch_parameter(&args.fan) else {
        return Err(Failure::usage("wall-crossing needs a Fa:<a> fan"));
    };
    let [f3, f4] = args.c1[..] else {
        return Err(Failure::usage("--c1 needs two coefficients f3,f4"));
    };
    Ok(WallContext::new(a, args.alpha, args.beta, f3, f4, args.order)?)
}

fn wallcross(args: &WallArgs) -> Outcome<LaurentSeries> {
    let ctx = wall_context(args)?;
    let joyce = || joyce_wallcross(ctx.a, ctx.lambda0(), ctx.f3, ctx.f4, ctx.order);
    match args.route {
        Route::Numeric => Ok(numeric_wallcross(&ctx)?),
        Route::Closed => Ok(p1p1_wallcross_closed(&ctx)?),
        Route::Joyce => Ok(joyce()?),
        Route::All => {
            let numeric = numeric_wallcross(&ctx)?;
            let mut others = vec![("joyce", joyce()?)];
            if ctx.a == 0 {
                others.push(("closed", p1p1_wallcross_closed(&ctx)?));
            }
            for (name, s) in others {
                if s != numeric {
                    return Err(Failure {
                        code: 4,
                        message: format!("{name} route disagrees with the numeric route"),
                    });
                }
            }
            Ok(numeric)
        }
    }
}

#[derive(Serialize)]
struct CrossRow {
    exp: i64,
    label: String,
    diff: String,
}

fn diff_rows(label: &str, a: &LaurentSeries, b: &LaurentSeries, order: i64) -> Vec<CrossRow> {
    (0..=order)
        .map(|e| CrossRow {
            exp: e,
            label: label.to_string(),
            diff: (a.coeff_at(e) - b.coeff_at(e)).to_string(),
        })
        .collect()
}

fn crosscheck(args: &CrossArgs, format: Format) -> Outcome<String> {
    check_order(args.order)?;
    let order = args.order;
    let mut rows = Vec::new();
    match args.suite {
        Suite::Hurwitz => {
            let p2 = p2_rank2(1, order)?;
            rows.extend(diff_rows("klyachko-p2", &klyachko_series(order)?, &p2, order));
            rows.extend(diff_rows("yoshioka-p2", &yoshioka_series(order)?, &p2, order));
        }
        Suite::Wallcross => {
            for (alpha0, beta0) in [(1, 2), (1, 1), (2, 1)] {
                for (f3, f4) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                    let ctx = WallContext::new(0, alpha0, beta0, f3, f4, order)?;
                    let numeric = numeric_wallcross(&ctx)?;
                    let tag = format!("{alpha0}/{beta0},({f3},{f4})");
                    rows.extend(diff_rows(&format!("closed-numeric@{tag}"), &p1p1_wallcross_closed(&ctx)?, &numeric, order));
                    let joyce = joyce_wallcross(0, ctx.lambda0(), f3, f4, order)?;
                    rows.extend(diff_rows(&format!("joyce-numeric@{tag}"), &joyce, &numeric, order));
                }
            }
        }
    }
    let pass = rows.iter().all(|r| r.diff == "0");
    let verdict = if pass { "PASS" } else { "FAIL" };
    let out = match format {
        Format::Json => {
            let doc = serde_json::json!({ "result": verdict, "order": order, "rows": rows });
            serde_json::to_string(&doc).expect("rows serialize") + "\n"
        }
        Format::Csv => {
            let mut out = String::from("exp,label,diff\n");
            for r in &rows {
                let _ = writeln!(out, "{},{},{}", r.exp, r.label, r.diff);
            }
            let _ = writeln!(out, "# {verdict}");
            out
        }
        Format::Plain => {
            let mut out = String::new();
            for r in &rows {
                let _ = writeln!(out, "{} {} {}", r.label, r.exp, r.diff);
            }
            let _ = writeln!(out, "{verdict}");
            out
        }
    };
    if pass {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure { code: 4, message: "cross-check found nonzero differences".into() })
    }
}

#[derive(Serialize)]
struct FanDoc {
    rays: Vec<[i64; 2]>,
    self_intersections: Vec<i64>,
    euler_number: usize,
    canonical_squared: i64,
    intersection_matrix: Vec<Vec<i64>>,
}

fn fan_info(args: &FanArgs, format: Format) -> Outcome<String> {
    let fan = load_fan(&args.fan)?;
    let n = fan.len();
    let k = vec![1; n];
    let doc = FanDoc {
        rays: fan.rays().to_vec(),
        self_intersections: fan.a().iter().map(|a| -a).collect(),
        euler_number: n,
        canonical_squared: fan.intersect_raw(&k, &k),
        intersection_matrix: (0..n).map(|i| (0..n).map(|j| fan.pairing(i, j)).collect()).collect(),
    };
    Ok(match format {
        Format::Json => serde_json::to_string(&doc).expect("fan serializes") + "\n",
        Format::Csv => {
            let mut out = String::from("ray,x,y,self_intersection\n");
            for (i, (r, s)) in doc.rays.iter().zip(&doc.self_intersections).enumerate() {
                let _ = writeln!(out, "D{},{},{},{}", i + 1, r[0], r[1], s);
            }
            out
        }
        Format::Plain => {
            let mut out = String::new();
            for (i, (r, s)) in doc.rays.iter().zip(&doc.self_intersections).enumerate() {
                let _ = writeln!(out, "D{}  ({}, {})  D{}^2 = {}", i + 1, r[0], r[1], i + 1, s);
            }
            let _ = writeln!(out, "e(X) = {}", doc.euler_number);
            let _ = writeln!(out, "K^2 = {}", doc.canonical_squared);
            out
        }
    })
}

fn run(cli: &Cli) -> Outcome<String> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(Failure::usage("--jobs must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Failure::usage(e.to_string()))?;
    }
    match &cli.command {
        Command::Compute(args) => Ok(render_series(&compute(args)?, args.order, cli.format)),
        Command::Wallcross(args) => Ok(render_series(&wallcross(args)?, args.order, cli.format)),
        Command::Crosscheck(args) => crosscheck(args, cli.format),
        Command::FanInfo(args) => fan_info(args, cli.format),
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
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
