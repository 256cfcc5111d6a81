//! Command-line front end: loads DNF files, runs the exact analyses and
//! prints text or JSON.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 verification mismatch,
//! 3 resource limit exceeded.

use std::fs;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use stackfilter::{
    a_profile, balanced_eval_f64, balanced_profile, build_ced, enumerate_zeros, joint_profile,
    parse_balanced_dnf, parse_dnf, rank_selection, render_mixed, transfer, verify_balanced,
    verify_joint, verify_pbf, BalancedPbf, Error, JointDistribution, JointMatrix, Oracle, Pbf,
    RowSet, ThresholdQuadruple, TransferPolynomial,
};

#[derive(Parser)]
#[command(
    name = "stackfilter",
    about = "Exact output-distribution analysis of stack filters given as positive DNFs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TSign {
    /// t <= 0
    Neg,
    /// t > 0
    Pos,
}

#[derive(Subcommand)]
enum Command {
    /// Zero count N and row count R of a DNF file.
    Count { file: String },
    /// The final multivalued rows covering the zero set.
    Rows { file: String },
    /// The transfer polynomial (mixed and expanded form).
    Transfer {
        file: String,
        /// Evaluate the polynomial at this probability.
        #[arg(long)]
        p: Option<f64>,
    },
    /// Weight profile A_0..A_w and rank selection probabilities.
    Profile { file: String },
    /// Joint pair-count matrix of two filters on one window.
    Joint {
        file1: String,
        file2: String,
        /// Evaluate the joint distribution at (p, pi).
        #[arg(long, requires = "pi")]
        p: Option<f64>,
        #[arg(long, requires = "p")]
        pi: Option<f64>,
    },
    /// Exponent-tuple profile of a two-block function, optionally
    /// evaluated at mirrored-threshold probabilities.
    Balanced {
        file: String,
        #[arg(long = "F-t", requires = "f_neg_t")]
        f_t: Option<f64>,
        #[arg(long = "F-neg-t", requires = "f_t")]
        f_neg_t: Option<f64>,
        /// Sign case of the threshold t.
        #[arg(long = "t-sign", value_enum, default_value_t = TSign::Neg)]
        t_sign: TSign,
    },
    /// Build a smoother cascade such as U2L2 and emit its DNF file.
    Ced { spec: String },
    /// Emit the DNF of the dual function.
    Dualize { file: String },
    /// Compare the fast analyses against brute force on this instance.
    Verify {
        file: String,
        /// Second DNF: verify the joint matrix of the pair instead.
        #[arg(long)]
        with: Option<String>,
        /// Brute-force width limit.
        #[arg(long, default_value_t = 22)]
        limit: usize,
    },
}

fn main() -> ExitCode {
    // Die quietly when the consumer of a pipe goes away (e.g. `| head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::WidthLimit { .. }) => 3,
        _ => 1,
    }
}

fn load_pbf(path: &str) -> Result<Pbf> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    parse_dnf(&text).with_context(|| format!("parsing {path}"))
}

fn load_balanced(path: &str) -> Result<BalancedPbf> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    parse_balanced_dnf(&text).with_context(|| format!("parsing {path}"))
}

fn check_prob(name: &str, v: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(anyhow!(Error::BadParameter(format!(
            "{name} = {v} outside [0, 1]"
        ))))
    }
}

fn execute(cli: &Cli) -> Result<u8> {
    let json = cli.format == Format::Json;
    match &cli.command {
        Command::Count { file } => {
            let rows = enumerate_zeros(&load_pbf(file)?);
            if json {
                print_json(&json!({
                    "N": rows.member_count().to_string(),
                    "R": rows.row_count(),
                }));
            } else {
                println!("N = {}", rows.member_count());
                println!("R = {}", rows.row_count());
            }
            Ok(0)
        }
        Command::Rows { file } => {
            let rows = enumerate_zeros(&load_pbf(file)?);
            if json {
                print_json(&json!({
                    "window": rows.window().to_string(),
                    "N": rows.member_count().to_string(),
                    "R": rows.row_count(),
                    "rows": rows.rows().iter().map(ToString::to_string).collect::<Vec<_>>(),
                }));
            } else {
                for row in rows.rows() {
                    println!("{row}");
                }
            }
            Ok(0)
        }
        Command::Transfer { file, p } => {
            let p = p.map(|v| check_prob("--p", v)).transpose()?;
            let rows = enumerate_zeros(&load_pbf(file)?);
            let phi = transfer(&rows);
            if json {
                print_json(&transfer_json(&rows, &phi, p));
            } else {
                println!("mixed:    {}", render_mixed(phi.mixed()));
                println!("expanded: {phi}");
                if let Some(p) = p {
                    println!("phi({p}) = {}", phi.eval(p));
                }
            }
            Ok(0)
        }
        Command::Profile { file } => {
            let rows = enumerate_zeros(&load_pbf(file)?);
            let profile = a_profile(&rows);
            let rank = rank_selection(&profile)?;
            if json {
                let counts: Vec<String> =
                    profile.counts().iter().map(ToString::to_string).collect();
                let rank_exact: Vec<String> =
                    rank.probs().iter().map(ToString::to_string).collect();
                print_json(&json!({
                    "A": counts,
                    "N": profile.total().to_string(),
                    "rank": rank_exact,
                    "rank_float": rank.probs_f64(),
                }));
            } else {
                println!("A = {profile}");
                println!("N = {}", profile.total());
                println!("rank selection probabilities:");
                for (i, (exact, approx)) in rank.probs().iter().zip(rank.probs_f64()).enumerate() {
                    println!("  p_{} = {} ({:.6})", i + 1, exact, approx);
                }
            }
            Ok(0)
        }
        Command::Joint {
            file1,
            file2,
            p,
            pi,
        } => {
            let b1 = load_pbf(file1)?;
            let b2 = load_pbf(file2)?;
            let eval = match (p, pi) {
                (Some(p), Some(pi)) => {
                    let p = check_prob("--p", *p)?;
                    let pi = check_prob("--pi", *pi)?;
                    let jd = JointDistribution::new(&b1, &b2)?;
                    Some((p, pi, jd.eval(p, pi)?))
                }
                _ => None,
            };
            let matrix = joint_profile(&b1, &b2)?;
            if json {
                let mut doc = json!({
                    "w": matrix.width(),
                    "A": matrix_json(&matrix),
                });
                if let Some((p, pi, value)) = eval {
                    doc["p"] = json!(p);
                    doc["pi"] = json!(pi);
                    doc["value"] = json!(value);
                }
                print_json(&doc);
            } else {
                println!("w = {}", matrix.width());
                for (i, row) in matrix.entries().iter().enumerate() {
                    let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
                    println!("A[{i}] = [{}]", cells.join(", "));
                }
                if let Some((p, pi, value)) = eval {
                    println!("JD({p}, {pi}) = {value}");
                }
            }
            Ok(0)
        }
        Command::Balanced {
            file,
            f_t,
            f_neg_t,
            t_sign,
        } => {
            let bpbf = load_balanced(file)?;
            let profile = balanced_profile(&bpbf);
            let eval = match (f_t, f_neg_t) {
                (Some(f_t), Some(f_neg_t)) => {
                    let f_t = check_prob("--F-t", *f_t)?;
                    let f_neg_t = check_prob("--F-neg-t", *f_neg_t)?;
                    let quad =
                        ThresholdQuadruple::from_f64(f_t, f_neg_t, matches!(t_sign, TSign::Neg))?;
                    Some((f_t, f_neg_t, balanced_eval_f64(&profile, &quad)))
                }
                _ => None,
            };
            if json {
                let tuples: Vec<Value> = profile
                    .counts()
                    .iter()
                    .map(|(t, c)| {
                        json!({
                            "tuple": [t.pp, t.pm, t.mp, t.mm],
                            "count": c.to_string(),
                        })
                    })
                    .collect();
                let mut doc = json!({
                    "w": profile.width(),
                    "total": profile.total().to_string(),
                    "profile": tuples,
                });
                if let Some((f_t, f_neg_t, value)) = eval {
                    doc["F_t"] = json!(f_t);
                    doc["F_neg_t"] = json!(f_neg_t);
                    doc["value"] = json!(value);
                }
                print_json(&doc);
            } else {
                print!("{profile}");
                println!("total = {}", profile.total());
                if let Some((f_t, f_neg_t, value)) = eval {
                    println!("F_SZ(t) = {value}  (F(t) = {f_t}, F(-t) = {f_neg_t})");
                }
            }
            Ok(0)
        }
        Command::Ced { spec } => {
            let pbf = build_ced(spec)?;
            print!("{pbf}");
            Ok(0)
        }
        Command::Dualize { file } => {
            let pbf = load_pbf(file)?.absorb();
            print!("{}", pbf.dualize());
            Ok(0)
        }
        Command::Verify { file, with, limit } => {
            let oracle = Oracle::new(*limit);
            let reports = match with {
                Some(second) => {
                    let b1 = load_pbf(file)?;
                    let b2 = load_pbf(second)?;
                    verify_joint(&b1, &b2, &oracle, &format!("{file} / {second}"))?
                }
                None => {
                    let text =
                        fs::read_to_string(file).with_context(|| format!("reading {file}"))?;
                    match parse_dnf(&text) {
                        Ok(pbf) => verify_pbf(&pbf, &oracle, file)?,
                        Err(plain_err) => match parse_balanced_dnf(&text) {
                            Ok(bpbf) => verify_balanced(&bpbf, &oracle, file)?,
                            Err(_) => {
                                return Err(anyhow!(plain_err).context(format!("parsing {file}")))
                            }
                        },
                    }
                }
            };
            let mut ok = true;
            for r in &reports {
                if r.equal {
                    println!("{}: OK", r.quantity);
                } else {
                    ok = false;
                    println!("{}: MISMATCH", r.quantity);
                    println!("  fast:  {}", r.fast);
                    println!("  brute: {}", r.brute);
                }
            }
            Ok(if ok { 0 } else { 2 })
        }
    }
}

fn transfer_json(rows: &RowSet, phi: &TransferPolynomial, p: Option<f64>) -> Value {
    let mixed: Vec<Value> = phi
        .collected_mixed()
        .iter()
        .map(|m| {
            json!({
                "coeff": m.coeff.to_string(),
                "p": m.p_exp,
                "q": m.q_exp,
            })
        })
        .collect();
    let expanded: Vec<String> = phi.expanded().iter().map(ToString::to_string).collect();
    let mut doc = json!({
        "N": rows.member_count().to_string(),
        "R": rows.row_count(),
        "mixed": mixed,
        "expanded": expanded,
        "degree": phi.degree(),
    });
    if let Some(p) = p {
        doc["p"] = json!(p);
        doc["value"] = json!(phi.eval(p));
    }
    doc
}

fn matrix_json(matrix: &JointMatrix) -> Value {
    let rows: Vec<Vec<String>> = matrix
        .entries()
        .iter()
        .map(|row| row.iter().map(ToString::to_string).collect())
        .collect();
    json!(rows)
}

fn print_json(value: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializable")
    );
}
