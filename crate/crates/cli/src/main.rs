//! Command-line front end: classification, oracle scans, certificates,
//! quadratic-field scans, polynomial sweeps and grid validation, with
//! deterministic text, JSON (schema `totient-gcd/1`) and CSV output.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use totient_gcd::oracle::{self, Verdict};
use totient_gcd::polyscan::{self, Poly};
use totient_gcd::quadfield::{self, FieldTag, QuadInt};
use totient_gcd::theorem1::{self, Convention};

const SCHEMA: &str = "totient-gcd/1";

#[derive(Parser)]
#[command(name = "totient-gcd", version, about = "gcds of Euler-phi values over arithmetic progressions: classify, scan, certify")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    Positive,
    All,
    Paper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the report to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Classify g(a, b) exactly
    #[command(allow_negative_numbers = true)]
    Classify {
        a: i64,
        b: i64,
        #[arg(long, value_enum, default_value = "positive")]
        convention: ConventionArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the brute-force running-gcd oracle
    #[command(allow_negative_numbers = true)]
    Scan {
        a: i64,
        b: i64,
        #[arg(long, value_enum, default_value = "positive")]
        convention: ConventionArg,
        #[arg(long, default_value_t = 5000)]
        x_limit: i64,
        #[arg(long, default_value_t = 500)]
        window: usize,
        /// Include the per-sample trace in the report
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Build a witness certificate for the classified g
    #[command(allow_negative_numbers = true)]
    Certify {
        a: i64,
        b: i64,
        #[arg(long, value_enum, default_value = "positive")]
        convention: ConventionArg,
        #[arg(long, default_value_t = 5000)]
        x_limit: i64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Cross-validate classifiers against oracles on a coprime grid
    Validate {
        #[arg(long, default_value_t = 64)]
        a_max: u64,
        #[arg(long, default_value_t = 10_000)]
        x_limit: i64,
        #[arg(long, default_value_t = 500)]
        window: usize,
        /// Treat literal-case discrepancies as failures
        #[arg(long)]
        strict_paper: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Box scan of gcd(phi(a*x+b)) over Z[i] or Z[omega]
    #[command(allow_negative_numbers = true)]
    FieldScan {
        /// gauss or eisenstein
        #[arg(long)]
        field: String,
        a_u: i64,
        a_v: i64,
        b_u: i64,
        b_v: i64,
        #[arg(long, default_value_t = 20)]
        box_radius: i64,
        #[arg(long, default_value_t = 500)]
        window: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// gcd of phi(P(x)) for one polynomial (coefficients a0 a1 ... an)
    #[command(allow_negative_numbers = true)]
    PolyScan {
        #[arg(required = true, num_args = 2..)]
        coeffs: Vec<i64>,
        #[arg(long, default_value_t = 5000)]
        x_limit: i64,
        #[arg(long, default_value_t = 500)]
        window: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exhaustive sweep over content-1 polynomials of one degree
    Sweep {
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        bound: i64,
        #[arg(long, default_value_t = 5000)]
        x_limit: i64,
        #[arg(long, default_value_t = 500)]
        window: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

enum Failure {
    /// Invalid input or I/O problem: exit 2.
    Usage(String),
    /// A validation finding or violation: exit 1.
    Finding,
}

impl From<totient_gcd::Error> for Failure {
    fn from(e: totient_gcd::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Finding) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(text: String, out: &Option<PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_line(value: &Value) -> String {
    let mut s = serde_json::to_string(value).expect("serializable");
    s.push('\n');
    s
}

fn schema_object(fields: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    map.insert("schema".into(), Value::String(SCHEMA.into()));
    for (k, v) in fields {
        map.insert(k.into(), v);
    }
    Value::Object(map)
}

fn convention_name(c: Convention) -> &'static str {
    match c {
        Convention::PositiveValues => "positive",
        Convention::AllIntegers => "all",
    }
}

fn case_name(c: theorem1::GcdCase) -> &'static str {
    match c {
        theorem1::GcdCase::UnitValue => "Unit",
        theorem1::GcdCase::Four => "Four",
        theorem1::GcdCase::Two => "Two",
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Classify { a, b, convention, output } => classify(a, b, convention, output),
        Command::Scan { a, b, convention, x_limit, window, trace, output } => {
            scan(a, b, convention, x_limit, window, trace, output)
        }
        Command::Certify { a, b, convention, x_limit, output } => {
            certify(a, b, convention, x_limit, output)
        }
        Command::Validate { a_max, x_limit, window, strict_paper, output } => {
            validate(a_max, x_limit, window, strict_paper, output)
        }
        Command::FieldScan { field, a_u, a_v, b_u, b_v, box_radius, window, output } => {
            field_scan(&field, (a_u, a_v), (b_u, b_v), box_radius, window, output)
        }
        Command::PolyScan { coeffs, x_limit, window, output } => {
            poly_scan(coeffs, x_limit, window, output)
        }
        Command::Sweep { degree, bound, x_limit, window, output } => {
            sweep(degree, bound, x_limit, window, output)
        }
    }
}

fn require_not_csv(output: &OutputArgs) -> Result<(), Failure> {
    if output.format == Format::Csv {
        return Err(Failure::Usage("csv output is only available for sweep".into()));
    }
    Ok(())
}

fn classify(a: i64, b: i64, convention: ConventionArg, output: OutputArgs) -> Result<(), Failure> {
    require_not_csv(&output)?;
    let (an, bn) = theorem1::normalize(a, b)?;
    let (classification, convention_label, discrepancy) = match convention {
        ConventionArg::Positive => (theorem1::classify_positive(an, bn)?, "positive", None),
        ConventionArg::All => (theorem1::classify_all(an, bn)?, "all", None),
        ConventionArg::Paper => {
            let (c, flag) = theorem1::classify_paper(an, bn)?;
            (c, "paper", Some(flag))
        }
    };
    let text = match output.format {
        Format::Json => {
            let mut fields = vec![
                ("a", json!(an)),
                ("b", json!(bn)),
                ("g", json!(classification.g)),
                ("case", json!(case_name(classification.case_tag))),
                ("convention", json!(convention_label)),
            ];
            if let Some(flag) = discrepancy {
                fields.push(("discrepancy", json!(flag)));
            }
            json_line(&schema_object(fields))
        }
        _ => {
            let mut line = format!(
                "g={} case={} convention={}",
                classification.g,
                case_name(classification.case_tag),
                convention_label
            );
            if let Some(flag) = discrepancy {
                line.push_str(&format!(" discrepancy={flag}"));
            }
            line.push('\n');
            line
        }
    };
    emit(text, &output.out)
}

fn oracle_convention(c: ConventionArg) -> Result<Convention, Failure> {
    match c {
        ConventionArg::Positive => Ok(Convention::PositiveValues),
        ConventionArg::All => Ok(Convention::AllIntegers),
        ConventionArg::Paper => Err(Failure::Usage(
            "the paper classifier has no oracle; use --convention positive or all".into(),
        )),
    }
}

fn scan(
    a: i64,
    b: i64,
    convention: ConventionArg,
    x_limit: i64,
    window: usize,
    trace: bool,
    output: OutputArgs,
) -> Result<(), Failure> {
    require_not_csv(&output)?;
    let conv = oracle_convention(convention)?;
    let result = oracle::empirical_gcd(a, b, conv, x_limit, window, trace)?;
    let text = match output.format {
        Format::Json => {
            let mut fields = vec![
                ("a", json!(a)),
                ("b", json!(b)),
                ("convention", json!(convention_name(conv))),
                ("g", json!(result.g)),
                ("stabilized_at", json!(result.stabilized_at)),
                ("samples", json!(result.samples_used)),
                ("stable", json!(result.stable)),
            ];
            if let Some(t) = &result.trace {
                fields.push(("trace", serde_json::to_value(t).expect("serializable")));
            }
            json_line(&schema_object(fields))
        }
        _ => {
            let mut s = format!(
                "g={} stabilized_at={} samples={} stable={} convention={}\n",
                result.g,
                result.stabilized_at,
                result.samples_used,
                result.stable,
                convention_name(conv)
            );
            if let Some(t) = &result.trace {
                for p in t {
                    s.push_str(&format!(
                        "x={} value={} phi={} gcd={}\n",
                        p.x, p.value, p.phi, p.running_gcd
                    ));
                }
            }
            s
        }
    };
    emit(text, &output.out)
}

fn certify(
    a: i64,
    b: i64,
    convention: ConventionArg,
    x_limit: i64,
    output: OutputArgs,
) -> Result<(), Failure> {
    require_not_csv(&output)?;
    let conv = oracle_convention(convention)?;
    let cert = oracle::certificate(a, b, conv, x_limit)?;
    let (paper, paper_discrepancy) = theorem1::classify_paper(cert.a, cert.b)?;
    let verdict_name = match cert.verdict {
        Verdict::Confirmed => "Confirmed",
        Verdict::UpperBoundOnly => "UpperBoundOnly",
        Verdict::Violated(_) => "Violated",
    };
    let text = match output.format {
        Format::Json => {
            let mut fields = vec![
                ("a", json!(cert.a)),
                ("b", json!(cert.b)),
                ("convention", json!(convention_name(conv))),
                ("claimed_g", json!(cert.claimed_g)),
                ("witnesses", serde_json::to_value(&cert.witnesses).expect("serializable")),
                ("extra_samples", serde_json::to_value(&cert.extra_samples).expect("serializable")),
                ("divisibility_range", json!([cert.divisibility_range.0, cert.divisibility_range.1])),
                ("verdict", json!(verdict_name)),
            ];
            if let Verdict::Violated(x) = cert.verdict {
                fields.push(("violated_at", json!(x)));
            }
            fields.push(("paper_g", json!(paper.g)));
            fields.push(("paper_discrepancy", json!(paper_discrepancy)));
            json_line(&schema_object(fields))
        }
        _ => {
            let mut s = format!(
                "a={} b={} convention={} claimed_g={} verdict={}\n",
                cert.a,
                cert.b,
                convention_name(conv),
                cert.claimed_g,
                verdict_name
            );
            for w in &cert.witnesses {
                s.push_str(&format!(
                    "witness l={} x={} value={} phi={} v_l={}\n",
                    w.l, w.x, w.value, w.phi, w.claimed_valuation
                ));
            }
            for e in &cert.extra_samples {
                s.push_str(&format!("sample x={} value={} phi={}\n", e.x, e.value, e.phi));
            }
            s.push_str(&format!(
                "divisibility checked on x in [{}, {}]\n",
                cert.divisibility_range.0, cert.divisibility_range.1
            ));
            if paper_discrepancy {
                s.push_str(&format!(
                    "note: literal published case split gives g={} here, disagreeing with the all-integers value\n",
                    paper.g
                ));
            }
            s
        }
    };
    emit(text, &output.out)?;
    match cert.verdict {
        Verdict::Confirmed => Ok(()),
        _ => Err(Failure::Finding),
    }
}

fn validate(
    a_max: u64,
    x_limit: i64,
    window: usize,
    strict_paper: bool,
    output: OutputArgs,
) -> Result<(), Failure> {
    require_not_csv(&output)?;
    let reports = oracle::validate_grid(a_max, x_limit, window)?;
    let mismatches: Vec<&oracle::CrossReport> =
        reports.iter().filter(|r| !r.consistent()).collect();
    let discrepancies: Vec<(u64, u64)> = reports
        .iter()
        .filter(|r| r.paper_discrepancy)
        .map(|r| (r.a, r.b))
        .collect();
    let ok = mismatches.is_empty() && (!strict_paper || discrepancies.is_empty());
    let text = match output.format {
        Format::Json => json_line(&schema_object(vec![
            ("a_max", json!(a_max)),
            ("x_limit", json!(x_limit)),
            ("window", json!(window)),
            ("pairs", json!(reports.len())),
            (
                "mismatches",
                json!(mismatches
                    .iter()
                    .map(|r| json!({
                        "a": r.a,
                        "b": r.b,
                        "positive_oracle_g": r.positive_oracle.g,
                        "classify_positive_g": r.classify_positive_g,
                        "all_oracle_g": r.all_oracle.g,
                        "classify_all_g": r.classify_all_g,
                    }))
                    .collect::<Vec<_>>()),
            ),
            (
                "paper_discrepancies",
                json!(discrepancies.iter().map(|&(a, b)| json!([a, b])).collect::<Vec<_>>()),
            ),
            ("strict_paper", json!(strict_paper)),
            ("ok", json!(ok)),
        ])),
        _ => {
            let mut s = format!(
                "validated {} coprime pairs with a <= {} (x_limit={}, window={})\n",
                reports.len(),
                a_max,
                x_limit,
                window
            );
            for r in &mismatches {
                s.push_str(&format!(
                    "MISMATCH a={} b={}: oracle positive={} all={}, classifier positive={} all={}\n",
                    r.a, r.b, r.positive_oracle.g, r.all_oracle.g,
                    r.classify_positive_g, r.classify_all_g
                ));
            }
            for &(a, b) in &discrepancies {
                s.push_str(&format!(
                    "paper-discrepancy a={a} b={b}: literal case split disagrees with all-integers gcd\n"
                ));
            }
            s.push_str(if ok { "OK\n" } else { "FAILED\n" });
            s
        }
    };
    emit(text, &output.out)?;
    if ok {
        Ok(())
    } else {
        Err(Failure::Finding)
    }
}

fn field_scan(
    field: &str,
    a: (i64, i64),
    b: (i64, i64),
    box_radius: i64,
    window: usize,
    output: OutputArgs,
) -> Result<(), Failure> {
    require_not_csv(&output)?;
    let tag: FieldTag = field.parse()?;
    if tag == FieldTag::RationalQ {
        return Err(Failure::Usage("field-scan needs gauss or eisenstein".into()));
    }
    let a = QuadInt::new(a.0, a.1, tag)?;
    let b = QuadInt::new(b.0, b.1, tag)?;
    let result = quadfield::field_empirical_gcd(&a, &b, box_radius, window)?;
    let bound = quadfield::theorem2_bound(tag, None)?;
    let divides = bound % result.g == 0;
    let text = match output.format {
        Format::Json => json_line(&schema_object(vec![
            ("field", json!(field)),
            ("a", json!([a.u, a.v])),
            ("b", json!([b.u, b.v])),
            ("box_radius", json!(box_radius)),
            ("g", json!(result.g)),
            ("stabilized_at", json!(result.stabilized_at)),
            ("samples", json!(result.samples_used)),
            ("stable", json!(result.stable)),
            ("mu", json!(quadfield::mu(tag))),
            ("bound", json!(bound)),
            ("divides_bound", json!(divides)),
        ])),
        _ => format!(
            "field={} a={} b={} g={} stabilized_at={} samples={} stable={} bound={} divides_bound={}\n",
            field, a, b, result.g, result.stabilized_at, result.samples_used,
            result.stable, bound, divides
        ),
    };
    emit(text, &output.out)?;
    if divides {
        Ok(())
    } else {
        Err(Failure::Finding)
    }
}

fn poly_scan(coeffs: Vec<i64>, x_limit: i64, window: usize, output: OutputArgs) -> Result<(), Failure> {
    require_not_csv(&output)?;
    let poly = Poly::new(coeffs)?;
    let result = polyscan::poly_empirical_gcd(&poly, x_limit, window)?;
    let text = match output.format {
        Format::Json => json_line(&schema_object(vec![
            ("coeffs", json!(result.coeffs)),
            ("g", json!(result.g)),
            ("stabilized_at", json!(result.stabilized_at)),
            ("samples", json!(result.samples_used)),
            ("stable", json!(result.stable)),
        ])),
        _ => format!(
            "coeffs={:?} g={} stabilized_at={} samples={} stable={}\n",
            result.coeffs, result.g, result.stabilized_at, result.samples_used, result.stable
        ),
    };
    emit(text, &output.out)
}

fn sweep(
    degree: u32,
    bound: i64,
    x_limit: i64,
    window: usize,
    output: OutputArgs,
) -> Result<(), Failure> {
    let report = polyscan::sweep(degree, bound, x_limit, window)?;
    let text = match output.format {
        Format::Csv => {
            let mut s = String::from("degree,coeffs,g,stabilized_at,samples\n");
            for r in &report.results {
                let coeffs = r
                    .coeffs
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(" ");
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    report.degree, coeffs, r.g, r.stabilized_at, r.samples_used
                ));
            }
            s
        }
        Format::Json => json_line(&schema_object(vec![
            ("degree", json!(report.degree)),
            ("bound", json!(report.coeff_bound)),
            ("x_limit", json!(report.sample_limit)),
            ("window", json!(report.window)),
            ("polynomials", json!(report.results.len())),
            ("max_g", json!(report.max_g)),
            ("argmax_coeffs", json!(report.argmax_coeffs)),
            (
                "results",
                serde_json::to_value(&report.results).expect("serializable"),
            ),
        ])),
        Format::Text => format!(
            "degree={} bound={} x_limit={} window={} polynomials={} max_g={} argmax={:?}\n",
            report.degree,
            report.coeff_bound,
            report.sample_limit,
            report.window,
            report.results.len(),
            report.max_g,
            report.argmax_coeffs
        ),
    };
    emit(text, &output.out)
}
