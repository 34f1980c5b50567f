//! Batch command-line front end; every subcommand is a thin wrapper over one
//! library operation and prints that operation's serialized output.

use std::fmt;
use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use matlog::algebra::{
    algebra_from_text, algebra_to_text, check_identity, identity_suite_for, make_named_algebra,
    AlgebraName, FiniteAlgebra,
};
use matlog::calculus::{
    builtin_ruleset, derives_analytic, or_transform, soundness_suite, RuleSet, RuleSetName,
    SchemaName,
};
use matlog::formula::{parse_formula, parse_sequent, Formula, Sequent};
use matlog::harness::{random_sequent_crosscheck, run_checks, CrossPairing, Profile};
use matlog::matrix::{
    builtin_matrix, lattice_filters, leibniz_congruence, matrix_from_text, matrix_isomorphism,
    matrix_nabla_lift, matrix_to_text, mc_semantic_consequence, reduce, LogicalMatrix,
};
use matlog::Budget;

#[derive(Parser)]
#[command(name = "matlog", version, about = "Finite-matrix logic workbench")]
struct Cli {
    /// Worker threads for the operations with deterministic parallelism.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect algebras and their identity suites.
    Algebra {
        #[command(subcommand)]
        command: AlgebraCommand,
    },
    /// Matrix constructions: reduction, Leibniz congruence, lifts, filters,
    /// isomorphism.
    Matrix {
        #[command(subcommand)]
        command: MatrixCommand,
    },
    /// Semantic consequence over one or more matrices.
    Entail {
        /// Matrix address (`builtin:IS6:up_a`) or file; repeatable.
        #[arg(long = "matrix", required = true)]
        matrices: Vec<String>,
        #[command(flatten)]
        sequents: SequentSource,
    },
    /// Analytic proof search in a calculus.
    Prove {
        /// Rule set names joined by `+` (e.g. `RB_MC+RNABLA`) or a file.
        #[arg(long)]
        calculus: String,
        /// `S`, `SNABLA`, or a file with one schema formula per line.
        #[arg(long)]
        schema: String,
        #[command(flatten)]
        sequents: SequentSource,
    },
    /// Check every rule of a calculus against matrices.
    Soundness {
        #[arg(long)]
        calculus: String,
        #[arg(long = "matrix", required = true)]
        matrices: Vec<String>,
    },
    /// Print the ∨-transform of a calculus.
    TransformOr {
        #[arg(long)]
        calculus: String,
    },
    /// Compare analytic proof search against matrix semantics on seeded
    /// sequents.
    Crosscheck {
        #[arg(long)]
        calculus: String,
        #[arg(long)]
        schema: String,
        #[arg(long = "matrix", required = true)]
        matrices: Vec<String>,
        /// Number of seeded sequents.
        #[arg(long, default_value_t = 500)]
        count: usize,
        #[arg(long, default_value_t = 2)]
        vars: usize,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Sampling seed (required: runs are reproducible by construction).
        #[arg(long)]
        seed: u64,
        /// Exclude the constants from the sequent pool.
        #[arg(long)]
        no_constants: bool,
    },
    /// Run the named verification checks.
    PaperCheck {
        /// Comma-separated check names (default: all).
        #[arg(long, value_delimiter = ',')]
        select: Option<Vec<String>>,
        /// Master seed (required: runs are reproducible by construction).
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "full")]
        profile: String,
        #[arg(long, default_value = "text")]
        format: String,
    },
}

#[derive(Subcommand)]
enum AlgebraCommand {
    /// Print the operation tables in the algebra file format.
    Show {
        #[arg(long)]
        algebra: String,
    },
    /// Run the identity suite for the algebra's signature.
    CheckIdentities {
        #[arg(long)]
        algebra: String,
    },
}

#[derive(Subcommand)]
enum MatrixCommand {
    /// Quotient by the Leibniz congruence.
    Reduce {
        #[arg(long)]
        matrix: String,
    },
    /// Print the Leibniz congruence as a partition.
    Leibniz {
        #[arg(long)]
        matrix: String,
    },
    /// Adjoin a fresh top and bottom and designate the new top.
    Lift {
        #[arg(long)]
        matrix: String,
    },
    /// List the lattice filters of an algebra.
    Filters {
        #[arg(long)]
        algebra: String,
    },
    /// Search for a matrix isomorphism between two matrices.
    Iso {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        matrix2: String,
    },
}

#[derive(Args)]
struct SequentSource {
    /// A sequent such as `p & ~p |- q, ~q` (`.` or nothing for an empty
    /// side).
    #[arg(long)]
    sequent: Option<String>,
    /// File with one sequent per line (`#` comments in column 0).
    #[arg(long)]
    sequents: Option<String>,
}

impl SequentSource {
    fn load(&self) -> Result<Vec<Sequent>, CliError> {
        match (&self.sequent, &self.sequents) {
            (Some(s), None) => Ok(vec![parse_sequent(s).map_err(CliError::msg)?]),
            (None, Some(path)) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| CliError(format!("cannot read {path}: {e}")))?;
                let mut out = Vec::new();
                for (lineno, line) in text.lines().enumerate() {
                    if line.trim().is_empty() || line.starts_with('#') {
                        continue;
                    }
                    let s = parse_sequent(line)
                        .map_err(|e| CliError(format!("{path}:{}: {e}", lineno + 1)))?;
                    out.push(s);
                }
                Ok(out)
            }
            _ => Err(CliError(
                "exactly one of --sequent/--sequents is required".into(),
            )),
        }
    }
}

struct CliError(String);

impl CliError {
    fn msg(e: impl fmt::Display) -> CliError {
        CliError(e.to_string())
    }
}

fn resolve_algebra(spec: &str) -> Result<FiniteAlgebra, CliError> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        let name: AlgebraName = name.parse().map_err(CliError::msg)?;
        return Ok(make_named_algebra(name));
    }
    let text =
        fs::read_to_string(spec).map_err(|e| CliError(format!("cannot read {spec}: {e}")))?;
    algebra_from_text(&text).map_err(CliError::msg)
}

fn resolve_matrix(spec: &str) -> Result<LogicalMatrix, CliError> {
    if spec.starts_with("builtin:") {
        return builtin_matrix(spec).map_err(CliError::msg);
    }
    let text =
        fs::read_to_string(spec).map_err(|e| CliError(format!("cannot read {spec}: {e}")))?;
    matrix_from_text(&text).map_err(CliError::msg)
}

fn resolve_matrices(specs: &[String]) -> Result<Vec<LogicalMatrix>, CliError> {
    specs.iter().map(|s| resolve_matrix(s)).collect()
}

fn resolve_calculus(spec: &str) -> Result<RuleSet, CliError> {
    let mut combined: Option<RuleSet> = None;
    for part in spec.split('+') {
        let rs = match part.parse::<RuleSetName>() {
            Ok(name) => builtin_ruleset(name),
            Err(_) => {
                let text = fs::read_to_string(part).map_err(|_| {
                    CliError(format!(
                        "'{part}' is neither a built-in rule set nor a readable file"
                    ))
                })?;
                RuleSet::from_text(part, &text).map_err(CliError::msg)?
            }
        };
        combined = Some(match combined {
            None => rs,
            Some(acc) => acc.union(&rs).map_err(CliError::msg)?,
        });
    }
    combined.ok_or_else(|| CliError("empty calculus specification".into()))
}

fn resolve_schema(spec: &str) -> Result<Vec<Formula>, CliError> {
    if let Ok(name) = spec.parse::<SchemaName>() {
        return Ok(name.formulas());
    }
    let text = fs::read_to_string(spec).map_err(|_| {
        CliError(format!(
            "'{spec}' is neither a schema name nor a readable file"
        ))
    })?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(parse_formula(line).map_err(|e| CliError(format!("{spec}:{}: {e}", lineno + 1)))?);
    }
    Ok(out)
}

fn var_names(n: usize) -> Vec<&'static str> {
    const NAMES: [&str; 6] = ["p", "q", "r", "s", "t", "u"];
    NAMES[..n.min(6)].to_vec()
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let budget = Budget {
        jobs: cli.jobs.max(1),
        ..Budget::default()
    };
    match cli.command {
        Command::Algebra { command } => match command {
            AlgebraCommand::Show { algebra } => {
                print!("{}", algebra_to_text(&resolve_algebra(&algebra)?));
                Ok(true)
            }
            AlgebraCommand::CheckIdentities { algebra } => {
                let a = resolve_algebra(&algebra)?;
                let mut ok = true;
                for (name, lhs, rhs) in identity_suite_for(&a) {
                    let outcome = check_identity(&a, &lhs, &rhs).map_err(CliError::msg)?;
                    if outcome.holds {
                        println!("CHECK {name} PASS");
                    } else {
                        ok = false;
                        let witness = outcome
                            .witness
                            .map(|w| {
                                w.into_iter()
                                    .map(|(v, e)| format!("{v}={e}"))
                                    .collect::<Vec<_>>()
                                    .join(", ")
                            })
                            .unwrap_or_default();
                        println!("CHECK {name} FAIL {witness}");
                    }
                }
                Ok(ok)
            }
        },
        Command::Matrix { command } => match command {
            MatrixCommand::Reduce { matrix } => {
                let m = resolve_matrix(&matrix)?;
                let reduced = reduce(&m, &budget).map_err(CliError::msg)?;
                print!("{}", matrix_to_text(&reduced));
                Ok(true)
            }
            MatrixCommand::Leibniz { matrix } => {
                let m = resolve_matrix(&matrix)?;
                let partition = leibniz_congruence(&m, &budget).map_err(CliError::msg)?;
                println!("{}", partition.render(m.algebra()));
                Ok(true)
            }
            MatrixCommand::Lift { matrix } => {
                let m = resolve_matrix(&matrix)?;
                let lifted = matrix_nabla_lift(&m).map_err(CliError::msg)?;
                print!("{}", matrix_to_text(&lifted));
                Ok(true)
            }
            MatrixCommand::Filters { algebra } => {
                let a = resolve_algebra(&algebra)?;
                for filter in lattice_filters(&a) {
                    let names: Vec<&str> =
                        filter.elements.iter().map(|&i| a.element_name(i)).collect();
                    let flag = if filter.improper { " improper" } else { "" };
                    println!(
                        "up({}) = {{{}}}{}",
                        a.element_name(filter.generator),
                        names.join(","),
                        flag
                    );
                }
                Ok(true)
            }
            MatrixCommand::Iso { matrix, matrix2 } => {
                let m1 = resolve_matrix(&matrix)?;
                let m2 = resolve_matrix(&matrix2)?;
                match matrix_isomorphism(&m1, &m2, &budget).map_err(CliError::msg)? {
                    Some(map) => {
                        let pairs: Vec<String> = map
                            .iter()
                            .enumerate()
                            .map(|(x, &v)| {
                                format!(
                                    "{}->{}",
                                    m1.algebra().element_name(x),
                                    m2.algebra().element_name(v)
                                )
                            })
                            .collect();
                        println!("ISOMORPHIC {}", pairs.join(" "));
                    }
                    None => println!("NOT-ISOMORPHIC"),
                }
                Ok(true)
            }
        },
        Command::Entail { matrices, sequents } => {
            let ms = resolve_matrices(&matrices)?;
            let refs: Vec<&LogicalMatrix> = ms.iter().collect();
            for s in sequents.load()? {
                let verdict = mc_semantic_consequence(&refs, &s.premises, &s.conclusions, &budget)
                    .map_err(CliError::msg)?;
                match verdict.witness() {
                    None => println!("YES {s}"),
                    Some(w) => println!("NO {s} countermodel: {w}"),
                }
            }
            Ok(true)
        }
        Command::Prove {
            calculus,
            schema,
            sequents,
        } => {
            let rs = resolve_calculus(&calculus)?;
            let schema = resolve_schema(&schema)?;
            for s in sequents.load()? {
                let report = derives_analytic(&rs, &schema, &s.premises, &s.conclusions, &budget)
                    .map_err(CliError::msg)?;
                match report.theory() {
                    None => println!("DERIVABLE {s}"),
                    Some(theory) => {
                        let fs: Vec<String> = theory.iter().map(|f| f.to_string()).collect();
                        println!(
                            "UNDERIVABLE {s} theory: {{{}}} (universe of {})",
                            fs.join(", "),
                            report.universe.len()
                        );
                    }
                }
            }
            Ok(true)
        }
        Command::Soundness { calculus, matrices } => {
            let rs = resolve_calculus(&calculus)?;
            let ms = resolve_matrices(&matrices)?;
            let refs: Vec<&LogicalMatrix> = ms.iter().collect();
            let mut ok = true;
            for report in soundness_suite(&rs, &refs, &budget).map_err(CliError::msg)? {
                if report.sound {
                    println!("SOUND {}", report.rule);
                } else {
                    ok = false;
                    let witness = report.witness.map(|w| w.to_string()).unwrap_or_default();
                    println!("UNSOUND {} {}", report.rule, witness);
                }
            }
            Ok(ok)
        }
        Command::TransformOr { calculus } => {
            let rs = resolve_calculus(&calculus)?;
            print!("{}", or_transform(&rs).to_text());
            Ok(true)
        }
        Command::Crosscheck {
            calculus,
            schema,
            matrices,
            count,
            vars,
            depth,
            seed,
            no_constants,
        } => {
            let rs = resolve_calculus(&calculus)?;
            let schema = resolve_schema(&schema)?;
            let ms = resolve_matrices(&matrices)?;
            let alphabet = matlog::formula::Alphabet {
                constants: !no_constants,
                nabla: rs.signature() == matlog::algebra::Signature::InvolutiveStone,
            };
            let pairing = CrossPairing {
                name: "cli",
                ruleset: rs,
                schema,
                matrices: ms,
                alphabet,
            };
            let names = var_names(vars);
            let report =
                random_sequent_crosscheck(&pairing, count, &names, depth, 2, 2, seed, &budget)
                    .map_err(CliError::msg)?;
            for d in &report.disagreements {
                println!(
                    "DISAGREE {} derivable={} semantic={}",
                    d.sequent, d.derivable, d.semantically_valid
                );
            }
            println!(
                "CHECK crosscheck {} {} sequents, {} disagreements",
                if report.clean() { "PASS" } else { "FAIL" },
                report.checked,
                report.disagreements.len()
            );
            Ok(report.clean())
        }
        Command::PaperCheck {
            select,
            seed,
            profile,
            format,
        } => {
            let profile = Profile::from_token(&profile)
                .ok_or_else(|| CliError(format!("unknown profile '{profile}'")))?;
            let report = run_checks(select.as_deref(), seed, &profile, &budget);
            match format.as_str() {
                "records" => print!("{}", report.render_records()),
                "text" => print!("{}", report.render_text()),
                other => return Err(CliError(format!("unknown format '{other}'"))),
            }
            Ok(report.all_pass())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(CliError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
