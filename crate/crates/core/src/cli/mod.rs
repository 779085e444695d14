//! Command-line frontend.
//!
//! Exit codes: 0 when a result was computed (including hypothesis
//! violations, which are reported in the output), 2 on usage errors, 3 on
//! invalid input.

pub mod input;
pub mod output;

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::decide::{
    classify_tower3, corollary43_report, decide_mpb_split, decide_pb_chow, decide_pb_split_same_base,
    multiset_from_poincare, DecideError, Tower3, Verdict,
};
use crate::oracle::{check_generated_in_degree_one, find_graded_iso_parallel, verify_matrix};
use input::{
    chern_vector, multiproj_split, parse_document, poincare_text, space_ring, split_on_projective_space,
    tower2, BundleDoc, BundlePair, InputError, SpacePair, SpaceQuery,
};
use output::{DecisionOutput, OracleOutput, PoincareOutput, RingOutput, ViolationOutput};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVALID_INPUT: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "chowtower",
    version,
    about = "Chow rings of projective bundles and towers over projective spaces, with isomorphism decisions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
struct Common {
    /// Input JSON document; standard input when absent.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Explain what the verdict's fidelity label certifies.
    #[arg(long)]
    fidelity_note: bool,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    common: Common,
    /// Largest absolute matrix entry to try.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    bound: u32,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Presentation and Poincaré polynomial of a space's Chow ring.
    #[command(name = "ring")]
    Ring(Common),
    /// Poincaré polynomial and recovered dimension multiset.
    #[command(name = "poincare")]
    Poincare(Common),
    /// P(E) vs P(F) over projective spaces of different dimensions.
    #[command(name = "decide-pb")]
    DecidePb(Common),
    /// P(E) vs P(F) for split bundles on the same projective space.
    #[command(name = "decide-pb-samebase")]
    DecidePbSamebase(Common),
    /// Multiprojective bundles of split bundles.
    #[command(name = "decide-mpb")]
    DecideMpb(Common),
    /// Necessary conditions for height-3 tower isomorphism.
    #[command(name = "decide-tower3")]
    DecideTower3(Common),
    /// Necessary conditions for P(E) ≅ P(F) with m < n.
    #[command(name = "cor43")]
    Cor43(Common),
    /// Bounded search for a graded ring isomorphism.
    #[command(name = "oracle")]
    Oracle(OracleArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Ring(_) => "ring",
            Command::Poincare(_) => "poincare",
            Command::DecidePb(_) => "decide-pb",
            Command::DecidePbSamebase(_) => "decide-pb-samebase",
            Command::DecideMpb(_) => "decide-mpb",
            Command::DecideTower3(_) => "decide-tower3",
            Command::Cor43(_) => "cor43",
            Command::Oracle(_) => "oracle",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Ring(c)
            | Command::Poincare(c)
            | Command::DecidePb(c)
            | Command::DecidePbSamebase(c)
            | Command::DecideMpb(c)
            | Command::DecideTower3(c)
            | Command::Cor43(c) => c,
            Command::Oracle(o) => &o.common,
        }
    }
}

/// Run the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let common = cli.command.common();
    let text = match read_input(common.input.as_ref(), stdin) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_INVALID_INPUT;
        }
    };
    match dispatch(&cli.command, &text) {
        Ok(value) => {
            let rendered = match common.format {
                Format::Json => serde_json::to_string_pretty(&value).expect("serializable") + "\n",
                Format::Text => output::to_text(&value),
            };
            let _ = stdout.write_all(rendered.as_bytes());
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_INVALID_INPUT
        }
    }
}

fn read_input(path: Option<&PathBuf>, stdin: &mut dyn Read) -> Result<String, InputError> {
    let mut text = String::new();
    match path {
        Some(p) => {
            text = std::fs::read_to_string(p)
                .map_err(|e| InputError::at("--input", format!("cannot read {}: {e}", p.display())))?;
        }
        None => {
            stdin
                .read_to_string(&mut text)
                .map_err(|e| InputError::at("stdin", e))?;
        }
    }
    Ok(text)
}

fn to_value<T: Serialize>(doc: &T) -> serde_json::Value {
    serde_json::to_value(doc).expect("serializable")
}

fn check_query(declared: &Option<String>, expected: &str) -> Result<(), InputError> {
    match declared {
        Some(q) if q != expected => Err(InputError::at(
            "query",
            format!("document is for `{q}` but the subcommand is `{expected}`"),
        )),
        _ => Ok(()),
    }
}

fn verdict_value(
    query: &str,
    result: Result<Verdict, DecideError>,
    routed_to: Option<&'static str>,
    fidelity_note: bool,
) -> Result<serde_json::Value, InputError> {
    match result {
        Ok(v) => Ok(to_value(&DecisionOutput {
            query: query.to_string(),
            status: "OK",
            routed_to,
            fidelity_note: fidelity_note.then(|| v.fidelity.explanation()),
            verdict: (&v).into(),
        })),
        Err(DecideError::HypothesisViolation(msg)) => Ok(to_value(&ViolationOutput::new(query, msg))),
        Err(e) => Err(InputError::at(".", e)),
    }
}

fn dispatch(command: &Command, text: &str) -> Result<serde_json::Value, InputError> {
    let name = command.name();
    let note = command.common().fidelity_note;
    match command {
        Command::Ring(_) => {
            let doc: SpaceQuery = parse_document(text)?;
            check_query(&doc.query, name)?;
            if doc.polynomial.is_some() {
                return Err(InputError::at("polynomial", "not accepted by `ring`"));
            }
            let space = doc.space.as_ref().ok_or_else(|| InputError::at(".", "missing field `space`"))?;
            let ring = space_ring(space, "space")?;
            Ok(to_value(&RingOutput::new(name, &ring)))
        }
        Command::Poincare(_) => {
            let doc: SpaceQuery = parse_document(text)?;
            check_query(&doc.query, name)?;
            let (presentation, p) = match (&doc.space, &doc.polynomial) {
                (Some(space), None) => {
                    let ring = space_ring(space, "space")?;
                    (Some(ring.render()), ring.poincare_polynomial())
                }
                (None, Some(poly)) => (None, poincare_text(poly, "polynomial")?),
                _ => return Err(InputError::at(".", "give exactly one of `space` and `polynomial`")),
            };
            let recovered = multiset_from_poincare(&p).map_err(|e| match e {
                DecideError::NotAProduct(msg) => format!("NOT_A_PRODUCT: {msg}"),
                other => other.to_string(),
            });
            Ok(to_value(&PoincareOutput::new(presentation, &p, recovered)))
        }
        Command::DecidePb(_) => {
            let doc: BundlePair = parse_document(text)?;
            check_query(&doc.query, name)?;
            let e = chern_vector(&doc.e, None, "E")?;
            let f = chern_vector(&doc.f, None, "F")?;
            let both_split = matches!((&doc.e, &doc.f), (BundleDoc::SplitBundle(_), BundleDoc::SplitBundle(_)));
            if e.base_dim() == f.base_dim() && both_split {
                let se = split_on_projective_space(&doc.e, "E")?;
                let sf = split_on_projective_space(&doc.f, "F")?;
                return verdict_value(name, decide_pb_split_same_base(&se, &sf), Some("decide-pb-samebase"), note);
            }
            verdict_value(name, decide_pb_chow(&e, &f), None, note)
        }
        Command::DecidePbSamebase(_) => {
            let doc: BundlePair = parse_document(text)?;
            check_query(&doc.query, name)?;
            let e = split_on_projective_space(&doc.e, "E")?;
            let f = split_on_projective_space(&doc.f, "F")?;
            verdict_value(name, decide_pb_split_same_base(&e, &f), None, note)
        }
        Command::DecideMpb(_) => {
            let doc: SpacePair = parse_document(text)?;
            check_query(&doc.query, name)?;
            let (m, es) = multiproj_split(&doc.left, "left")?;
            let (n, fs) = multiproj_split(&doc.right, "right")?;
            verdict_value(name, decide_mpb_split(m, &es, n, &fs), None, note)
        }
        Command::DecideTower3(_) => {
            let doc: SpacePair = parse_document(text)?;
            check_query(&doc.query, name)?;
            let left = tower2(&doc.left, "left")?;
            let right = tower2(&doc.right, "right")?;
            let (m, n) = (left.base, right.base);
            let rank_problem = if m < n && left.second_rank != n + 1 {
                Some(format!("E_2 must have rank n+1 = {}, found {}", n + 1, left.second_rank))
            } else if m < n && right.second_rank != m + 1 {
                Some(format!("F_2 must have rank m+1 = {}, found {}", m + 1, right.second_rank))
            } else {
                None
            };
            let result = match rank_problem {
                Some(msg) => Err(DecideError::HypothesisViolation(msg)),
                None => classify_tower3(&Tower3 {
                    m,
                    n,
                    r: left.first.rank() - 1,
                    e1: left.first,
                    e2: left.second,
                    f1: right.first,
                    f2: right.second,
                }),
            };
            verdict_value(name, result, None, note)
        }
        Command::Cor43(_) => {
            let doc: BundlePair = parse_document(text)?;
            check_query(&doc.query, name)?;
            let e = chern_vector(&doc.e, None, "E")?;
            let f = chern_vector(&doc.f, None, "F")?;
            verdict_value(name, corollary43_report(&e, &f), None, note)
        }
        Command::Oracle(args) => {
            let doc: SpacePair = parse_document(text)?;
            check_query(&doc.query, name)?;
            let left = space_ring(&doc.left, "left")?;
            let right = space_ring(&doc.right, "right")?;
            check_generated_in_degree_one(&left).map_err(|e| InputError::at("left", e))?;
            check_generated_in_degree_one(&right).map_err(|e| InputError::at("right", e))?;
            let report = find_graded_iso_parallel(&left, &right, args.bound).map_err(|e| InputError::at(".", e))?;
            let verified = match &report.found {
                Some(a) => Some(verify_matrix(&left, &right, a.rows()).map_err(|e| InputError::at(".", e))?),
                None => None,
            };
            Ok(to_value(&OracleOutput::new(&left, &right, &report, verified)))
        }
    }
}
