use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};

use hornbern::certify;
use hornbern::funcs::{self, EvalRequest};
use hornbern::moments::MomentTable;
use hornbern::rat::{format_decimal, format_ratio, parse_rational, pow10_rat};
use hornbern::real::PrecisionReal;
use hornbern::Error;

/// Frozen reference values, printed next to computed results for comparison
/// only — nothing downstream reads them back.
const BETA_STAR_REFERENCE: &str = "2.18858634466175709765";
const ALPHA_STAR_REFERENCE: &str = "2.2996564432534613";

#[derive(Parser)]
#[command(
    name = "hornbern",
    version,
    about = "Moment sequences, special functions and positivity certificates \
             for the family (1 + 1/x)^(alpha x)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact moment table (rho, s, t, a columns) up to a given order
    Moments {
        /// Largest index to tabulate
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Render rationals as rounded decimals instead of exact p/q
        #[arg(long)]
        decimal: bool,
        /// Significant digits for --decimal rendering
        #[arg(long, env = "HB_PRECISION_DEFAULT", default_value_t = 30)]
        digits: usize,
    },
    /// Certify t_n > c/(n+1) on a range, plus the geometric tail cutoff
    Certify {
        /// The bound constant c (rational or decimal literal)
        #[arg(long, value_parser = parse_rat)]
        c: BigRational,
        /// Geometric ratio for the tail certificate; omit to skip the tail
        #[arg(long, value_parser = parse_rat)]
        sigma: Option<BigRational>,
        /// First index of the explicitly checked range
        #[arg(long)]
        from: usize,
        /// Last index of the explicitly checked range
        #[arg(long)]
        to: usize,
        #[arg(long, env = "HB_PRECISION_DEFAULT", default_value_t = 30)]
        digits: usize,
    },
    /// Certified bracket of the truncation positivity threshold
    BetaStar {
        /// Truncation order to start from (auto-escalates when too blunt)
        #[arg(long = "N")]
        n: usize,
        /// Target bracket width 10^-digits
        #[arg(long, default_value_t = 5)]
        digits: usize,
    },
    /// Non-certified estimate of the density positivity cutoff
    AlphaStar {
        /// Target estimate width 10^-digits (effective range 4..=10)
        #[arg(long, default_value_t = 6)]
        digits: usize,
    },
    /// Evaluate one function at a point with a rigorous error bound
    Eval {
        /// h|G|phi need --alpha and --x; rho|g|M|d need --x; tau0 needs
        /// --t; F needs --alpha and --t
        #[arg(long = "fn", value_enum)]
        func: Func,
        #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
        x: Option<BigRational>,
        #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
        t: Option<BigRational>,
        #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
        alpha: Option<BigRational>,
        #[arg(long, env = "HB_PRECISION_DEFAULT", default_value_t = 30)]
        digits: usize,
    },
    /// Sample a function over a range as CSV (x,value,abs_error)
    PlotData {
        /// tau0 | M | PN (PN also needs --N and --alpha)
        #[arg(long = "fn", value_enum)]
        func: PlotFunc,
        #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
        from: BigRational,
        #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
        to: BigRational,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long = "N")]
        n: Option<usize>,
        #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
        alpha: Option<BigRational>,
        #[arg(long, env = "HB_PRECISION_DEFAULT", default_value_t = 30)]
        digits: usize,
        /// Output file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Finite-difference (moment-sequence) table check for t_n or a_n
    Hausdorff {
        #[arg(long, value_enum)]
        seq: Seq,
        /// Depth of the difference table
        #[arg(long = "K")]
        k: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Func {
    /// (1 + 1/x)^(alpha x)
    H,
    /// log(1 + 1/x) - 1/(x+1)
    Rho,
    /// 1 / (x (x+1) [(x+1) log(1 + 1/x) - 1])
    G,
    /// Density of the base moment sequence on (0, 1)
    Tau0,
    /// Bernstein density of the derivative family (series form)
    Phi,
    /// Threshold series 2 + sum (x^n/n!) (t_n - alpha/(n+1))
    #[value(name = "G")]
    BigG,
    /// Laplace-side form of the Bernstein density
    #[value(name = "F")]
    F,
    /// Ratio whose infimum over the ray is the positivity threshold
    #[value(name = "M")]
    M,
    /// tau0 transported to (0, infinity): tau0(1 - e^-s) e^-s
    D,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlotFunc {
    Tau0,
    #[value(name = "M")]
    M,
    #[value(name = "PN")]
    Pn,
}

#[derive(Clone, Copy, ValueEnum)]
enum Seq {
    /// Moments of tau0 (a provable moment sequence)
    T,
    /// Increments of the reciprocal moments (status experimental)
    A,
}

fn parse_rat(text: &str) -> Result<BigRational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            // Usage/domain problems exit 2, computational failures exit 1.
            match err {
                AppError::Lib(Error::Domain(_) | Error::Invalid(_)) | AppError::Io(..) => {
                    ExitCode::from(2)
                }
                _ => ExitCode::from(1),
            }
        }
    }
}

enum AppError {
    Lib(Error),
    Io(std::io::Error, PathBuf),
}

impl std::fmt::Display for AppError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AppError::Lib(e) => write!(f, "{e}"),
            AppError::Io(e, path) => write!(f, "cannot write {}: {e}", path.display()),
        }
    }
}

impl From<Error> for AppError {
    fn from(e: Error) -> Self {
        AppError::Lib(e)
    }
}

fn run(command: Command) -> Result<u8, AppError> {
    match command {
        Command::Moments { n, format, decimal, digits } => cmd_moments(n, format, decimal, digits),
        Command::Certify { c, sigma, from, to, digits } => cmd_certify(&c, sigma.as_ref(), from, to, digits),
        Command::BetaStar { n, digits } => cmd_beta_star(n, digits),
        Command::AlphaStar { digits } => cmd_alpha_star(digits),
        Command::Eval { func, x, t, alpha, digits } => cmd_eval(func, x, t, alpha, digits),
        Command::PlotData { func, from, to, points, n, alpha, digits, out } => {
            cmd_plot_data(func, &from, &to, points, n, alpha.as_ref(), digits, out.as_deref())
        }
        Command::Hausdorff { seq, k } => cmd_hausdorff(seq, k),
    }
}

/// Fixed output shape shared by the JSON-emitting commands. Key order is
/// insertion order, number formatting is all-strings-and-integers, so the
/// output is deterministic and survives a parse/re-serialize round trip
/// byte for byte.
fn emit_envelope(command: &str, parameters: Value, results: Value, provenance: Value) {
    let envelope = json!({
        "command": command,
        "parameters": parameters,
        "results": results,
        "provenance": provenance,
    });
    println!("{}", serde_json::to_string(&envelope).expect("serializable"));
}

fn render_rational(q: &BigRational, decimal: bool, digits: usize) -> String {
    if decimal {
        format_decimal(q, digits)
    } else {
        format_ratio(q)
    }
}

fn cmd_moments(n: usize, format: Format, decimal: bool, digits: usize) -> Result<u8, AppError> {
    let table = MomentTable::new(n);
    let cell = |q: &BigRational| render_rational(q, decimal, digits);
    match format {
        Format::Csv => {
            println!("n,rho,s,t,a");
            for i in 0..=n {
                println!(
                    "{i},{},{},{},{}",
                    cell(&table.rho[i]),
                    cell(&table.s[i]),
                    cell(&table.t[i]),
                    cell(&table.a[i])
                );
            }
        }
        Format::Table => {
            let header = ["n", "rho", "s", "t", "a"];
            let mut rows: Vec<[String; 5]> = Vec::with_capacity(n + 1);
            for i in 0..=n {
                rows.push([
                    i.to_string(),
                    cell(&table.rho[i]),
                    cell(&table.s[i]),
                    cell(&table.t[i]),
                    cell(&table.a[i]),
                ]);
            }
            let widths: Vec<usize> = (0..5)
                .map(|c| {
                    rows.iter()
                        .map(|r| r[c].len())
                        .chain([header[c].len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let print_row = |cells: [&str; 5]| {
                let mut line = String::new();
                for (c, cell) in cells.iter().enumerate() {
                    if c > 0 {
                        line.push_str("  ");
                    }
                    line.push_str(&format!("{:>width$}", cell, width = widths[c]));
                }
                println!("{line}");
            };
            print_row(header);
            for row in &rows {
                print_row([&row[0], &row[1], &row[2], &row[3], &row[4]]);
            }
        }
        Format::Json => {
            let rows: Vec<Value> = (0..=n)
                .map(|i| {
                    json!({
                        "n": i,
                        "rho": cell(&table.rho[i]),
                        "s": cell(&table.s[i]),
                        "t": cell(&table.t[i]),
                        "a": cell(&table.a[i]),
                    })
                })
                .collect();
            emit_envelope(
                "moments",
                json!({ "n": n, "decimal": decimal }),
                json!({ "n_max": n, "rows": rows }),
                json!({
                    "moment_reference": "t_0..t_5 = 1, 2/3, 5/9, 67/135, 371/810, 1465/3402 \
                                         (frozen; display only)"
                }),
            );
        }
    }
    Ok(0)
}

fn cmd_certify(
    c: &BigRational,
    sigma: Option<&BigRational>,
    from: usize,
    to: usize,
    digits: usize,
) -> Result<u8, AppError> {
    let range = certify::verify_moment_bound(c, from, to)?;
    let tail = match sigma {
        Some(s) => Some(certify::tail_threshold(c, s, &EvalRequest::digits(digits))?),
        None => None,
    };
    let passed = range.all_pass && tail.as_ref().map_or(true, |t| t.valid);
    let tail_json = tail.as_ref().map_or(Value::Null, |t| t.to_json(digits));
    emit_envelope(
        "certify",
        json!({
            "c": format_ratio(c),
            "sigma": sigma.map(format_ratio),
            "from": from,
            "to": to,
        }),
        json!({ "range": range.to_json(digits), "tail": tail_json, "certified": passed }),
        json!({
            "threshold_reference": "cutoff 57 for (c, sigma) = (2, 197/200) and 71 for \
                                    (23/10, 989/1000) (frozen; display only)"
        }),
    );
    Ok(if passed { 0 } else { 1 })
}

fn cmd_beta_star(n: usize, digits: usize) -> Result<u8, AppError> {
    let bracket = certify::bracket_beta_star(n, digits, &EvalRequest::digits(digits))?;
    let reference = parse_rational(BETA_STAR_REFERENCE).expect("literal parses");
    let contains = bracket.lower <= reference && reference <= bracket.upper;
    emit_envelope(
        "beta-star",
        json!({ "N": n, "digits": digits }),
        json!({
            "bracket": bracket.to_json(digits),
            "reference": BETA_STAR_REFERENCE,
            "contains_reference": contains,
        }),
        json!({
            "beta_star_reference": "2.18858634466175709765 (frozen 20-digit value; \
                                    display only)"
        }),
    );
    Ok(0)
}

fn cmd_alpha_star(digits: usize) -> Result<u8, AppError> {
    let estimate = certify::estimate_alpha_star(&EvalRequest::digits(digits))?;
    let reference = parse_rational(ALPHA_STAR_REFERENCE).expect("literal parses");
    let within = estimate
        .lower_rational()
        .zip(estimate.upper_rational())
        .is_some_and(|(lo, hi)| lo <= reference && reference <= hi);
    let (value, abs_error) = estimate.to_decimal(digits.clamp(4, 10) + 2);
    emit_envelope(
        "alpha-star",
        json!({ "digits": digits }),
        json!({
            "estimate": { "value": value, "abs_error": abs_error },
            "certified": false,
            "reference": ALPHA_STAR_REFERENCE,
            "reference_within_error": within,
        }),
        json!({
            "alpha_star_reference": "2.2996564432534613 (frozen value; not certified; \
                                     display only)"
        }),
    );
    Ok(0)
}

fn need(
    arg: Option<BigRational>,
    flag: &str,
    func: &str,
) -> Result<BigRational, AppError> {
    arg.ok_or_else(|| {
        AppError::Lib(Error::Invalid(format!("--fn {func} requires --{flag}")))
    })
}

fn cmd_eval(
    func: Func,
    x: Option<BigRational>,
    t: Option<BigRational>,
    alpha: Option<BigRational>,
    digits: usize,
) -> Result<u8, AppError> {
    let req = EvalRequest::digits(digits);
    let (name, point, value): (&str, Value, PrecisionReal) = match func {
        Func::H => {
            let a = need(alpha, "alpha", "h")?;
            let x = need(x, "x", "h")?;
            let v = funcs::eval_h(&a, &x, &req)?;
            ("h", json!({ "alpha": format_ratio(&a), "x": format_ratio(&x) }), v)
        }
        Func::Rho => {
            let x = need(x, "x", "rho")?;
            let v = funcs::eval_rho(&x, &req)?;
            ("rho", json!({ "x": format_ratio(&x) }), v)
        }
        Func::G => {
            let x = need(x, "x", "g")?;
            let v = funcs::eval_g(&x, &req)?;
            ("g", json!({ "x": format_ratio(&x) }), v)
        }
        Func::Tau0 => {
            let t = need(t, "t", "tau0")?;
            let v = funcs::eval_tau0(&t, &req)?;
            ("tau0", json!({ "t": format_ratio(&t) }), v)
        }
        Func::Phi => {
            let a = need(alpha, "alpha", "phi")?;
            let x = need(x, "x", "phi")?;
            let v = funcs::eval_phi_series(&a, &x, &req)?;
            ("phi", json!({ "alpha": format_ratio(&a), "x": format_ratio(&x) }), v)
        }
        Func::BigG => {
            let a = need(alpha, "alpha", "G")?;
            let x = need(x, "x", "G")?;
            let v = funcs::eval_big_g(&a, &x, &req)?;
            ("G", json!({ "alpha": format_ratio(&a), "x": format_ratio(&x) }), v)
        }
        Func::F => {
            let a = need(alpha, "alpha", "F")?;
            let t = need(t, "t", "F")?;
            let v = funcs::eval_f_density(&a, &t, &req)?;
            ("F", json!({ "alpha": format_ratio(&a), "t": format_ratio(&t) }), v)
        }
        Func::M => {
            let x = need(x, "x", "M")?;
            let v = funcs::eval_m(&x, &req)?;
            ("M", json!({ "x": format_ratio(&x) }), v)
        }
        Func::D => {
            let x = need(x, "x", "d")?;
            let v = funcs::eval_d(&x, &req)?;
            ("d", json!({ "x": format_ratio(&x) }), v)
        }
    };
    if !value.err_within(&pow10_rat(-(digits as i64))) {
        return Err(AppError::Lib(Error::Precision(format!(
            "result error bound exceeds 10^-{digits}"
        ))));
    }
    let (v, e) = value.to_decimal(digits);
    emit_envelope(
        "eval",
        json!({ "fn": name, "point": point, "digits": digits }),
        json!({ "value": v, "abs_error": e }),
        json!({}),
    );
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_plot_data(
    func: PlotFunc,
    from: &BigRational,
    to: &BigRational,
    points: usize,
    n: Option<usize>,
    alpha: Option<&BigRational>,
    digits: usize,
    out: Option<&std::path::Path>,
) -> Result<u8, AppError> {
    if points == 0 {
        return Err(AppError::Lib(Error::Invalid("--points must be at least 1".into())));
    }
    if from > to {
        return Err(AppError::Lib(Error::Invalid(format!(
            "empty range: --from {} exceeds --to {}",
            format_ratio(from),
            format_ratio(to)
        ))));
    }
    let req = EvalRequest::digits(digits);
    let pn = match func {
        PlotFunc::Pn => {
            let order = n.ok_or_else(|| {
                AppError::Lib(Error::Invalid("--fn PN requires --N".into()))
            })?;
            let a = alpha.ok_or_else(|| {
                AppError::Lib(Error::Invalid("--fn PN requires --alpha".into()))
            })?;
            Some(certify::build_pn(order, a)?)
        }
        _ => None,
    };
    let count = if from == to { 1 } else { points };
    let mut rows = String::new();
    rows.push_str("x,value,abs_error\n");
    for i in 0..count {
        let x = if count == 1 {
            from.clone()
        } else {
            from + (to - from) * BigRational::new((i as i64).into(), ((count - 1) as i64).into())
        };
        let value = match func {
            PlotFunc::Tau0 => funcs::eval_tau0(&x, &req)?,
            PlotFunc::M => funcs::eval_m(&x, &req)?,
            PlotFunc::Pn => {
                // Exact rational evaluation; the only error is the final
                // decimal conversion.
                let exact = pn.as_ref().expect("built above").eval(&x);
                PrecisionReal::from_rational(&exact, hornbern::real::bits_for_digits(digits + 5))
            }
        };
        let (v, e) = value.to_decimal(digits);
        rows.push_str(&format!("{},{v},{e}\n", format_decimal(&x, digits.min(17))));
    }
    match out {
        Some(path) => {
            let mut file = std::fs::File::create(path)
                .map_err(|e| AppError::Io(e, path.to_path_buf()))?;
            file.write_all(rows.as_bytes())
                .map_err(|e| AppError::Io(e, path.to_path_buf()))?;
        }
        None => print!("{rows}"),
    }
    Ok(0)
}

fn cmd_hausdorff(seq: Seq, k: usize) -> Result<u8, AppError> {
    let (name, data, interpretation) = match seq {
        Seq::T => (
            "t",
            hornbern::moments::t_moments(k),
            "exact difference table of a provable moment sequence",
        ),
        Seq::A => (
            "a",
            hornbern::moments::a_sequence(k),
            "experimental evidence only, not a proof: the exact table is \
             checked up to depth K and nothing is claimed beyond it",
        ),
    };
    let report = certify::hausdorff_check(&data, k)?;
    emit_envelope(
        "hausdorff",
        json!({ "seq": name, "K": k }),
        json!({ "report": report.to_json(0), "interpretation": interpretation }),
        json!({}),
    );
    Ok(0)
}
