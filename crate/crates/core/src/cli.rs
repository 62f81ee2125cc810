//! Command-line front end. `main` parses arguments and calls [`run`].
//!
//! Exit status: 0 on success, 1 when the input is well formed but violates
//! a law (or a check fails), 2 when the input cannot be read or parsed.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::dot::{extension_dot, hasse_dot, irreducibles_dot};
use crate::extension::free_extension;
use crate::format::{dn_to_json, nearlattice_to_json, parse_input, FormatError, Input};
use crate::nearlattice::find_isomorphism;
use crate::properties::{check_all, corpus_subjects, CheckOutcome, Context, Subject, PROPERTIES};
use crate::report::AnalysisReport;
use crate::representation::{check_round_trip, dn_corpus, n_of, s_of};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SEMANTIC: i32 = 1;
pub const EXIT_PARSE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "nearlat",
    version,
    about = "Finite distributive nearlattices: analysis, representation and checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DotWhat {
    Hasse,
    Extension,
    Irr,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a nearlattice or DN file is valid.
    Validate { file: PathBuf },
    /// Classify the elements of a structure.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print the DN-structure S(A) of a nearlattice.
    Represent { file: PathBuf },
    /// Print the nearlattice N(X) of a DN-structure.
    Construct { file: PathBuf },
    /// Print the free distributive lattice extension as a nearlattice file.
    Extend { file: PathBuf },
    /// Write every DN-structure up to a poset size, with its nearlattice.
    Generate {
        #[arg(long)]
        max_size: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run every property on the generated corpus or on one file.
    Check {
        #[arg(long, conflicts_with = "file", required_unless_present = "file")]
        corpus: Option<usize>,
        file: Option<PathBuf>,
        /// Print every outcome instead of failures only.
        #[arg(long)]
        verbose: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print a Graphviz diagram.
    ExportDot {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "hasse")]
        what: DotWhat,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        let code = if e.is_parse_error() { EXIT_PARSE } else { EXIT_SEMANTIC };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn semantic(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_SEMANTIC,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<Input, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_PARSE,
        message: format!("ParseError: cannot read {}: {e}", path.display()),
    })?;
    Ok(parse_input(&text)?)
}

/// Runs one command, writing results to `out` and diagnostics to `err`,
/// and returns the exit status.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    let io = |e: std::io::Error| semantic(format!("write failed: {e}"));
    match command {
        Command::Validate { file } => {
            read(&file)?;
            writeln!(out, "valid").map_err(io)?;
        }
        Command::Analyze { file, format } => {
            let report = AnalysisReport::of(&read(&file)?.into_nearlattice());
            let text = match format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json(),
            };
            out.write_all(text.as_bytes()).map_err(io)?;
        }
        Command::Represent { file } => {
            let nl = read(&file)?.into_nearlattice();
            let dn = s_of(&nl);
            if find_isomorphism(&nl, &n_of(&dn)).is_none() {
                return Err(semantic("internal error: N(S(A)) is not isomorphic to A"));
            }
            out.write_all(dn_to_json(&dn).as_bytes()).map_err(io)?;
        }
        Command::Construct { file } => {
            let Input::Dn(dn) = read(&file)? else {
                return Err(Failure {
                    code: EXIT_PARSE,
                    message: "ParseError: construct expects a DN file".into(),
                });
            };
            if !check_round_trip(&dn) {
                return Err(semantic("internal error: X is not isomorphic to Irr(N(X))"));
            }
            out.write_all(nearlattice_to_json(&n_of(&dn)).as_bytes()).map_err(io)?;
        }
        Command::Extend { file } => {
            let ext = free_extension(&read(&file)?.into_nearlattice());
            out.write_all(nearlattice_to_json(ext.lattice()).as_bytes())
                .map_err(io)?;
        }
        Command::Generate { max_size, out: dir } => {
            let corpus = dn_corpus(max_size).map_err(|e| semantic(e.to_string()))?;
            fs::create_dir_all(&dir).map_err(io)?;
            let mut index = vec![0; max_size + 1];
            for dn in &corpus.structures {
                let size = dn.poset().size();
                let stem = format!("corpus-{size}-{:03}", index[size]);
                index[size] += 1;
                fs::write(dir.join(format!("{stem}.dn.json")), dn_to_json(dn)).map_err(io)?;
                fs::write(dir.join(format!("{stem}.json")), nearlattice_to_json(&n_of(dn))).map_err(io)?;
            }
            let list = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(", ");
            writeln!(out, "generated {} structures", corpus.structures.len()).map_err(io)?;
            writeln!(out, "nearlattices per poset size: {}", list(&corpus.counts)).map_err(io)?;
            writeln!(
                out,
                "(poset, family) pairs per poset size: {}",
                list(&corpus.raw_counts)
            )
            .map_err(io)?;
        }
        Command::Check {
            corpus,
            file,
            verbose,
            format,
        } => {
            let subjects = match (corpus, file) {
                (Some(n), _) => corpus_subjects(n).map_err(|e| semantic(e.to_string()))?,
                (None, Some(path)) => match read(&path) {
                    Ok(input) => {
                        let id = path.display().to_string();
                        vec![match input {
                            Input::Nearlattice(nl) => Subject::new(id, nl),
                            Input::Dn(dn) => Subject::from_dn(id, dn),
                        }]
                    }
                    Err(f) if f.code == EXIT_SEMANTIC => {
                        writeln!(out, "validation failed: {}", f.message).map_err(io)?;
                        writeln!(out, "properties skipped").map_err(io)?;
                        return Ok(EXIT_SEMANTIC);
                    }
                    Err(f) => return Err(f),
                },
                (None, None) => return Err(semantic("give --corpus N or a file")),
            };
            let outcomes = check_all(&subjects, Context::standard());
            for o in outcomes.iter().filter(|o| verbose || !o.pass) {
                writeln!(out, "{}", outcome_line(o, format)).map_err(io)?;
            }
            let failures = outcomes.iter().filter(|o| !o.pass).count();
            writeln!(out, "{}", summary(subjects.len(), PROPERTIES.len(), failures)).map_err(io)?;
            return Ok(if failures == 0 { EXIT_OK } else { EXIT_SEMANTIC });
        }
        Command::ExportDot { file, what } => {
            let nl = read(&file)?.into_nearlattice();
            let text = match what {
                DotWhat::Hasse => hasse_dot(&nl),
                DotWhat::Extension => extension_dot(&free_extension(&nl)),
                DotWhat::Irr => irreducibles_dot(&free_extension(&nl)),
            };
            out.write_all(text.as_bytes()).map_err(io)?;
        }
    }
    Ok(EXIT_OK)
}

pub fn summary(structures: usize, properties: usize, failures: usize) -> String {
    format!("checked {structures} structures, {properties} properties, {failures} failures")
}

fn outcome_line(o: &CheckOutcome, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string(o).expect("outcomes serialize"),
        Format::Text => {
            let status = if o.pass { "PASS" } else { "FAIL" };
            match &o.witness {
                Some(w) => format!("{status} {} {}: {} {:?}", o.property, o.structure, w.detail, w.elements),
                None => format!("{status} {} {}", o.property, o.structure),
            }
        }
    }
}
