//! Command-line front end: parse group specs, run the operations, emit
//! human-readable or JSON results.
//!
//! Exit codes: 0 = true/member/success, 1 = false/non-member, 2 = parse
//! error, 3 = invalid input, 4 = precision exhausted.

use clap::{Parser, Subcommand};
use padic_groups::classify::{
    hom_check, iso_check, quotient_structure, rank1_type, RationalMatrix, Verdict,
};
use padic_groups::error::Error;
use padic_groups::functional::{admissible_values, extend_from_subgroup, separating_functional};
use padic_groups::group::{FactoredForm, GroupElement, Metric};
use padic_groups::io::{
    factored_form_to_spec, functional_to_doc, parse_group_spec, parse_rational_matrix,
    resolve_group_spec, LoadedGroup,
};
use padic_groups::linalg::MARGIN_WARN;
use padic_groups::oracle;
use padic_groups::padic::{parse_literal, DiskRadius, PadicInt};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "padic-groups",
    about = "p-adic duals, metrics, and classification of finite-rank torsion-free abelian groups",
    version
)]
struct Cli {
    /// Working precision N (values are known mod p^N); minimum 8
    #[arg(long, global = true)]
    precision: Option<u32>,

    /// Emit machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Re-run supported commands through the brute-force oracle and fail on
    /// mismatch (inductive-limit specs only)
    #[arg(long, global = true)]
    oracle: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the factored form of an inductive-limit spec
    Dual {
        spec: PathBuf,
        /// Restrict output to one prime
        #[arg(long)]
        p: Option<u64>,
    },
    /// Is the vector a member of the group?
    Member {
        spec: PathBuf,
        #[arg(allow_hyphen_values = true)]
        vector: String,
    },
    /// p-adic distance of the vector from zero
    Metric {
        spec: PathBuf,
        #[arg(allow_hyphen_values = true)]
        vector: String,
        #[arg(long)]
        p: u64,
    },
    /// Is the vector divisible by p^k in the group?
    Divisible {
        spec: PathBuf,
        #[arg(allow_hyphen_values = true)]
        vector: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
    },
    /// Does V define a homomorphism from the first group to the second?
    Hom {
        spec_a: PathBuf,
        spec_b: PathBuf,
        /// Matrix as JSON rows, a bare rational for rank 1, `identity`, or @file
        #[arg(long = "V", allow_hyphen_values = true)]
        v: String,
    },
    /// Does V define an isomorphism from the first group onto the second?
    Iso {
        spec_a: PathBuf,
        spec_b: PathBuf,
        #[arg(long = "V")]
        v: String,
    },
    /// Baer type of a rank-1 group
    Type { spec: PathBuf },
    /// Invariant factors of G/p^k G
    Quotient {
        spec: PathBuf,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
    },
    /// p-simplicity classification at a prime
    Simple {
        spec: PathBuf,
        #[arg(long)]
        p: u64,
    },
    /// Extend prescribed values on generators to a functional
    Extend {
        spec: PathBuf,
        #[arg(long)]
        p: u64,
        /// Semicolon-separated generator vectors, e.g. "1,0;0,1"
        #[arg(long, allow_hyphen_values = true)]
        gens: String,
        /// Comma-separated p-adic values, one per generator
        #[arg(long, allow_hyphen_values = true)]
        values: String,
        /// Also report the disk of admissible values at this element
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// Separating functional for a bounded-exponent subgroup
    Separate {
        spec: PathBuf,
        #[arg(long)]
        p: u64,
        /// Semicolon-separated subgroup generators
        #[arg(long = "h-gens", allow_hyphen_values = true)]
        h_gens: String,
        /// The element to separate
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long)]
        m: u32,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parse(_) => 2,
        Error::PrecisionExhausted { .. } => 4,
        _ => 3,
    }
}

fn load(path: &PathBuf, precision: Option<u32>) -> Result<LoadedGroup, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let raw = parse_group_spec(&text)?;
    resolve_group_spec(&raw, precision)
}

fn parse_vectors(s: &str) -> Result<Vec<GroupElement>, Error> {
    s.split(';')
        .map(|part| GroupElement::parse(part.trim()))
        .collect()
}

fn matrix_arg(arg: &str, identity_size: Option<usize>) -> Result<RationalMatrix, Error> {
    let text = match arg.strip_prefix('@') {
        Some(path) => {
            std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?
        }
        None => arg.to_string(),
    };
    parse_rational_matrix(&text, identity_size)
}

fn ensure_prime(p: u64) -> Result<(), Error> {
    if padic_groups::padic::is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

fn effective_precision(flag: Option<u32>) -> Result<Option<u32>, Error> {
    match flag {
        Some(n) if n < 8 => Err(Error::InvalidInput(format!(
            "precision must be at least 8, got {n}"
        ))),
        other => Ok(other),
    }
}

fn print_verdict(kind: &str, verdict: &Verdict, json_mode: bool) {
    if let Some(m) = verdict.min_margin {
        if m < MARGIN_WARN {
            eprintln!("warning: decision margin {m} is below {MARGIN_WARN} digits; consider raising --precision");
        }
    }
    if json_mode {
        println!("{}", serde_json::to_string(verdict).expect("serializable"));
    } else {
        let margin = verdict
            .min_margin
            .map_or("-".to_string(), |m| m.to_string());
        println!(
            "{kind}: {} (primes {:?}, min margin {margin}, precision {})",
            verdict.verdict, verdict.checked_primes, verdict.precision
        );
    }
}

fn bool_exit(b: bool) -> ExitCode {
    if b {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let precision = effective_precision(cli.precision)?;
    match cli.command {
        Command::Dual { spec, p } => {
            if let Some(p) = p {
                ensure_prime(p)?;
            }
            let loaded = load(&spec, precision)?;
            if loaded.limit.is_none() {
                return Err(Error::InvalidInput(
                    "dual needs an inductive-limit spec (`limit_matrix`)".into(),
                ));
            }
            let mut form = loaded.form;
            if let Some(p) = p {
                let keep = form.exceptional().get(&p).cloned();
                let mut map = std::collections::BTreeMap::new();
                if let Some(dual) = keep {
                    map.insert(p, dual);
                }
                form = FactoredForm::new(form.rank(), form.precision(), map)?;
            }
            let doc = factored_form_to_spec(&form, Some("computed dual".into()));
            println!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("serializable")
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Member { spec, vector } => {
            let loaded = load(&spec, precision)?;
            let v = GroupElement::parse(&vector)?;
            let ans = loaded.form.membership(&v)?;
            if cli.json {
                println!("{}", json!({"verdict": ans, "precision": loaded.precision}));
            } else {
                println!("member: {ans}");
            }
            Ok(bool_exit(ans))
        }
        Command::Metric { spec, vector, p } => {
            ensure_prime(p)?;
            let loaded = load(&spec, precision)?;
            let v = GroupElement::parse(&vector)?;
            let m = loaded.form.p_metric(p, &v)?;
            let text = match m {
                Metric::Exact(k) => format!("{p}^-{k}"),
                Metric::AtMost(b) => format!("<={p}^-{b}"),
            };
            if cli.json {
                let (kind, exp) = match m {
                    Metric::Exact(k) => ("exact", k),
                    Metric::AtMost(b) => ("at_most", b),
                };
                println!(
                    "{}",
                    json!({"metric": text, "kind": kind, "exponent": exp,
                           "precision": loaded.precision})
                );
            } else {
                println!("{text}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Divisible { spec, vector, p, k } => {
            ensure_prime(p)?;
            let loaded = load(&spec, precision)?;
            let v = GroupElement::parse(&vector)?;
            let ans = loaded.form.divisible(p, k, &v)?;
            if cli.oracle {
                match &loaded.limit {
                    Some(limit) => {
                        let a: Vec<Vec<i64>> = int_matrix_rows(limit.matrix())?;
                        let g: Vec<i64> = integer_vector(&v)?;
                        let oracle_ans = oracle::oracle_divisible(&a, &g, p, k, None);
                        if oracle_ans.divisible != ans {
                            return Err(Error::InvalidInput(format!(
                                "oracle disagreement: main path says {ans}, oracle says {} (exhausted: {})",
                                oracle_ans.divisible, oracle_ans.exhausted
                            )));
                        }
                    }
                    None => eprintln!("note: --oracle ignored (not an inductive-limit spec)"),
                }
            }
            if cli.json {
                println!(
                    "{}",
                    json!({"verdict": ans, "p": p, "k": k, "precision": loaded.precision})
                );
            } else {
                println!("divisible by {p}^{k}: {ans}");
            }
            Ok(bool_exit(ans))
        }
        Command::Hom { spec_a, spec_b, v } => {
            let a = load(&spec_a, precision)?;
            let b = load(&spec_b, precision)?;
            let v = matrix_arg(&v, Some(a.form.rank()))?;
            let verdict = hom_check(&a.form, &b.form, &v)?;
            print_verdict("hom", &verdict, cli.json);
            Ok(bool_exit(verdict.verdict))
        }
        Command::Iso { spec_a, spec_b, v } => {
            let a = load(&spec_a, precision)?;
            let b = load(&spec_b, precision)?;
            let v = matrix_arg(&v, Some(a.form.rank()))?;
            let verdict = iso_check(&a.form, &b.form, &v)?;
            print_verdict("iso", &verdict, cli.json);
            Ok(bool_exit(verdict.verdict))
        }
        Command::Type { spec } => {
            let loaded = load(&spec, precision)?;
            let t = rank1_type(&loaded.form)?;
            if cli.json {
                let entries: serde_json::Map<String, serde_json::Value> = t
                    .entries()
                    .iter()
                    .map(|(p, e)| (p.to_string(), json!(e.to_string())))
                    .collect();
                println!("{}", serde_json::Value::Object(entries));
            } else {
                println!("{t}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Quotient { spec, p, k } => {
            ensure_prime(p)?;
            let loaded = load(&spec, precision)?;
            let q = quotient_structure(&loaded.form, p, k)?;
            if cli.oracle {
                match &loaded.limit {
                    Some(limit) => {
                        let a: Vec<Vec<i64>> = int_matrix_rows(limit.matrix())?;
                        let oracle_exps = oracle::oracle_quotient(&a, p, k)?;
                        if oracle_exps != q.exponents {
                            return Err(Error::InvalidInput(format!(
                                "oracle disagreement: main path {:?}, oracle {:?}",
                                q.exponents, oracle_exps
                            )));
                        }
                    }
                    None => eprintln!("note: --oracle ignored (not an inductive-limit spec)"),
                }
            }
            if cli.json {
                println!("{}", serde_json::to_string(&q).expect("serializable"));
            } else {
                println!("{q}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Simple { spec, p } => {
            ensure_prime(p)?;
            let loaded = load(&spec, precision)?;
            let s = loaded.form.is_p_simple(p);
            if cli.json {
                println!("{}", json!({"simplicity": s.to_string(), "p": p}));
            } else {
                println!("{s}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Extend {
            spec,
            p,
            gens,
            values,
            at,
        } => {
            ensure_prime(p)?;
            let loaded = load(&spec, precision)?;
            let gens = parse_vectors(&gens)?;
            let values: Vec<PadicInt> = values
                .split(',')
                .map(|tok| parse_literal(tok.trim(), p, loaded.precision))
                .collect::<Result<_, _>>()?;
            let f = extend_from_subgroup(&loaded.form, p, &gens, &values)?;
            let doc = functional_to_doc(&f);
            let mut output = serde_json::to_value(&doc).expect("serializable");
            if let Some(at) = at {
                let g = GroupElement::parse(&at)?;
                let disk = admissible_values(&loaded.form, p, &gens, &values, &g)?;
                let radius = match disk.radius() {
                    DiskRadius::Exponent(e) => json!(format!("{p}^-{e}")),
                    DiskRadius::Point => json!("point"),
                    DiskRadius::Empty => json!("empty"),
                };
                output["admissible_at"] = json!({
                    "element": at,
                    "center": disk.center().to_string(),
                    "radius": radius,
                });
            }
            if cli.json {
                println!("{output}");
            } else {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&output).expect("serializable")
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Separate {
            spec,
            p,
            h_gens,
            g,
            m,
        } => {
            ensure_prime(p)?;
            let loaded = load(&spec, precision)?;
            let h = parse_vectors(&h_gens)?;
            let g = GroupElement::parse(&g)?;
            let f = separating_functional(&loaded.form, p, &h, &g, m)?;
            let value = f.evaluate(&loaded.form, &g)?;
            let doc = functional_to_doc(&f);
            let mut output = serde_json::to_value(&doc).expect("serializable");
            output["value_at_g"] = json!(value.to_string());
            if cli.json {
                println!("{output}");
            } else {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&output).expect("serializable")
                );
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn int_matrix_rows(m: &padic_groups::intmat::IntMatrix) -> Result<Vec<Vec<i64>>, Error> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    i64::try_from(m.entry(i, j).clone()).map_err(|_| {
                        Error::InvalidInput("matrix entry out of i64 range for oracle".into())
                    })
                })
                .collect()
        })
        .collect()
}

fn integer_vector(v: &GroupElement) -> Result<Vec<i64>, Error> {
    v.coords()
        .iter()
        .map(|c| {
            if !c.is_integer() {
                return Err(Error::InvalidInput(
                    "oracle cross-check needs an integer vector".into(),
                ));
            }
            i64::try_from(c.numer().clone())
                .map_err(|_| Error::InvalidInput("vector entry out of i64 range".into()))
        })
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
