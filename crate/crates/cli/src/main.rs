//! Command-line frontend: formulas, counts, generating functions, bounds, and
//! oracle verification for nonattacking piece configurations on strips.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 verification mismatch.

use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use nonattack::chromatic::ChromaticEngine;
use nonattack::gaingraph::GainGraph;
use nonattack::genfunc::{expression_gf, RationalCountSeries};
use nonattack::oracle::{brute_count_capped, EnumerationCap};
use nonattack::pieces::{
    asymptotic_probability, build_gain_graph, count_formula_with, second_coefficient,
    slope_threshold, sufficient_width_bound, BoardSpec, CountFormula, Piece, PieceError,
    BUILTIN_NAMES,
};
use nonattack::pluspoly::{DensePolynomial, PluspartExpression};

#[derive(Parser)]
#[command(
    name = "nonattack",
    version,
    about = "Exact counts of nonattacking chess and fairy-chess configurations on an m-row strip"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct BoardArgs {
    /// Built-in piece name or path to a piece-definition file
    #[arg(long)]
    piece: String,
    /// Number of rows of the strip
    #[arg(long)]
    rows: usize,
    /// Comma-separated pieces per row, e.g. 1,1,2 (default: one per row)
    #[arg(long)]
    occupancy: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Evaluate independent recursion branches on a thread pool
    #[arg(long)]
    parallel: bool,
    /// Override the rows guard and the oracle enumeration cap
    #[arg(long)]
    force: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Piecewise counting formula, eventual polynomial, threshold, divisor
    Formula(BoardArgs),
    /// Exact count of nonattacking configurations at a given width
    Count {
        #[command(flatten)]
        board: BoardArgs,
        /// Board width n
        #[arg(long)]
        cols: u64,
    },
    /// Rational generating function of the counting sequence
    Gf(BoardArgs),
    /// Cross-check the symbolic count, the brute-force oracle, and the series
    Verify {
        #[command(flatten)]
        board: BoardArgs,
        /// Largest width to check
        #[arg(long, default_value_t = 8)]
        max_cols: u64,
    },
    /// Width bounds: sufficient bound, max path gain, threshold, slope formula
    Bound(BoardArgs),
    /// List the built-in pieces
    PiecesList {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn main() {
    let code = match try_main() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            1
        }
    };
    std::process::exit(code);
}

fn try_main() -> Result<i32> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return Ok(0);
        }
        Err(e) => {
            eprint!("{e}");
            return Ok(1);
        }
    };
    match cli.command {
        Command::Formula(args) => cmd_formula(&args),
        Command::Count { board, cols } => cmd_count(&board, cols),
        Command::Gf(args) => cmd_gf(&args),
        Command::Verify { board, max_cols } => cmd_verify(&board, max_cols),
        Command::Bound(args) => cmd_bound(&args),
        Command::PiecesList { format } => cmd_pieces_list(format),
    }
}

struct Setup {
    piece: Piece,
    board: BoardSpec,
    engine: ChromaticEngine,
}

fn setup(args: &BoardArgs) -> Result<Setup> {
    if args.rows == 0 {
        bail!("--rows must be at least 1");
    }
    if args.rows > 8 && !args.force {
        bail!(
            "rows {} exceeds the guard (8); deletion-contraction cost grows steeply, pass --force to override",
            args.rows
        );
    }
    let piece = resolve_piece(&args.piece)?;
    let occupancy = match &args.occupancy {
        None => vec![1u64; args.rows],
        Some(text) => {
            let values: Vec<u64> = text
                .split(',')
                .map(|part| {
                    part.trim()
                        .parse::<u64>()
                        .with_context(|| format!("invalid occupancy entry `{part}`"))
                })
                .collect::<Result<_>>()?;
            if values.len() != args.rows {
                bail!(
                    "--occupancy has {} entries but --rows is {}",
                    values.len(),
                    args.rows
                );
            }
            values
        }
    };
    let board = BoardSpec::new(occupancy)?;
    if board.total_pieces() == 0 {
        bail!("occupancy places no pieces on the board");
    }
    Ok(Setup {
        piece,
        board,
        engine: ChromaticEngine::new().parallel(args.parallel),
    })
}

fn resolve_piece(name_or_path: &str) -> Result<Piece> {
    if BUILTIN_NAMES.contains(&name_or_path) {
        return Ok(Piece::builtin(name_or_path)?);
    }
    let path = Path::new(name_or_path);
    if !path.exists() {
        bail!(
            "`{name_or_path}` is neither a built-in piece ({}) nor a readable file",
            BUILTIN_NAMES.join(", ")
        );
    }
    Piece::from_file(path).with_context(|| format!("loading piece file `{name_or_path}`"))
}

/// The counting formula, with the identically-zero signal mapped to the zero
/// formula so the board stays reportable.
fn formula_or_zero(s: &Setup) -> Result<(CountFormula, bool)> {
    match count_formula_with(&s.piece.moves, &s.board, &s.engine) {
        Ok(cf) => Ok((cf, false)),
        Err(PieceError::IdenticallyZero) => Ok((CountFormula::zero(&s.board), true)),
        Err(e) => Err(e.into()),
    }
}

fn jint(v: i128) -> Value {
    Value::from(i64::try_from(v).expect("value exceeds the JSON-safe integer range"))
}

fn jpoly(p: &DensePolynomial) -> Value {
    Value::Array(p.coefficients().iter().map(|&c| jint(c)).collect())
}

fn jexpr(e: &PluspartExpression) -> Value {
    let terms: Vec<Value> = e
        .terms()
        .iter()
        .map(|t| json!({"coeff": jint(t.coeff), "shifts": t.shifts}))
        .collect();
    json!({ "terms": terms })
}

fn jgf(gf: &RationalCountSeries) -> (Value, Value) {
    (
        jpoly(gf.numerator()),
        Value::from(gf.denominator_exponent()),
    )
}

fn base_json(s: &Setup) -> serde_json::Map<String, Value> {
    let mut map = serde_json::Map::new();
    map.insert("piece".into(), Value::from(s.piece.name.clone()));
    map.insert("rows".into(), Value::from(s.board.rows()));
    map.insert(
        "occupancy".into(),
        Value::Array(
            s.board
                .occupancy()
                .iter()
                .map(|&q| Value::from(q))
                .collect(),
        ),
    );
    map
}

fn emit(format: Format, text: String, json: serde_json::Map<String, Value>) {
    match format {
        Format::Text => println!("{text}"),
        Format::Json => println!("{}", Value::Object(json)),
    }
}

fn board_header(s: &Setup) -> String {
    format!(
        "piece: {}\nrows: {}\noccupancy: {}",
        s.piece.name,
        s.board.rows(),
        s.board
    )
}

fn cmd_formula(args: &BoardArgs) -> Result<i32> {
    let s = setup(args)?;
    let (cf, zero) = formula_or_zero(&s)?;
    let eventual = cf.eventual_labelled();
    let mut text = format!(
        "{}\npiecewise: {}\ndivisor: {}\neventual: {}\nthreshold: {}",
        board_header(&s),
        cf.labelled(),
        cf.divisor(),
        eventual,
        cf.threshold()
    );
    if zero {
        text.push_str(
            "\nnote: identically zero (unbounded horizontal moves with a doubly occupied row)",
        );
    }
    let mut json = base_json(&s);
    json.insert("piecewise".into(), jexpr(cf.labelled()));
    json.insert("divisor".into(), jint(cf.divisor()));
    json.insert("eventual".into(), jpoly(&eventual));
    json.insert("threshold".into(), Value::from(cf.threshold()));
    if zero {
        json.insert("identically_zero".into(), Value::from(true));
    }
    emit(args.format, text, json);
    Ok(0)
}

fn cmd_count(args: &BoardArgs, cols: u64) -> Result<i32> {
    let s = setup(args)?;
    let (cf, zero) = formula_or_zero(&s)?;
    let count = cf.count(cols)?;
    let mut json = base_json(&s);
    json.insert("cols".into(), Value::from(cols));
    json.insert("count".into(), jint(count));
    if zero {
        json.insert("identically_zero".into(), Value::from(true));
    }
    emit(args.format, count.to_string(), json);
    Ok(0)
}

fn cmd_gf(args: &BoardArgs) -> Result<i32> {
    let s = setup(args)?;
    let (cf, zero) = formula_or_zero(&s)?;
    let gf = cf.gf()?;
    let mut text = format!("{}\ngf: {}", board_header(&s), gf);
    if zero {
        text.push_str(
            "\nnote: identically zero (unbounded horizontal moves with a doubly occupied row)",
        );
    }
    let (numerator, den) = jgf(&gf);
    let mut json = base_json(&s);
    json.insert("numerator".into(), numerator);
    json.insert("denominator_exponent".into(), den);
    if zero {
        json.insert("identically_zero".into(), Value::from(true));
    }
    emit(args.format, text, json);
    Ok(0)
}

fn cmd_verify(args: &BoardArgs, max_cols: u64) -> Result<i32> {
    let s = setup(args)?;
    let (cf, _) = formula_or_zero(&s)?;
    // Expand the labelled generating function and fold the divisor in per
    // coefficient, so inexact divisions surface as fractions in the table
    // rather than aborting the comparison.
    let labelled_series = expression_gf(cf.labelled(), cf.pieces())?.series(max_cols as usize + 1);
    let divisor = cf.divisor();
    let cap = if args.force {
        EnumerationCap::Unlimited
    } else {
        EnumerationCap::Default
    };
    let mut rows_text = String::from("   n    symbolic      oracle      series\n");
    let mut mismatches = Vec::new();
    let mut json_rows = Vec::new();
    for n in 0..=max_cols {
        let oracle = brute_count_capped(&s.piece.moves, &s.board, n, cap)
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        let as_exact = |labelled: i128| -> (String, Option<i128>) {
            if labelled % divisor == 0 {
                let v = labelled / divisor;
                (v.to_string(), Some(v))
            } else {
                (format!("{labelled}/{divisor}"), None)
            }
        };
        let (symbolic_text, symbolic) = as_exact(cf.labelled().evaluate(n));
        let (series_text, from_series) = as_exact(labelled_series[n as usize]);
        let agree = symbolic == Some(oracle) && from_series == Some(oracle);
        let marker = if agree { " " } else { "!" };
        rows_text.push_str(&format!(
            "{marker}{n:>4} {symbolic_text:>11} {oracle:>11} {series_text:>11}\n"
        ));
        let jvalue = |value: Option<i128>, text: &str| match value {
            Some(v) => jint(v),
            None => Value::from(text),
        };
        json_rows.push(json!({
            "n": n,
            "oracle": jint(oracle),
            "series": jvalue(from_series, &series_text),
            "symbolic": jvalue(symbolic, &symbolic_text),
        }));
        if !agree {
            mismatches.push(n);
        }
    }
    let ok = mismatches.is_empty();
    let verdict = if ok {
        format!("verify: OK ({} widths checked)", max_cols + 1)
    } else {
        format!("verify: MISMATCH at n = {mismatches:?}")
    };
    let mut json = base_json(&s);
    json.insert("max_cols".into(), Value::from(max_cols));
    json.insert("rows_checked".into(), Value::Array(json_rows));
    json.insert("ok".into(), Value::from(ok));
    emit(
        args.format,
        format!("{}\n{rows_text}{verdict}", board_header(&s)),
        json,
    );
    Ok(if ok { 0 } else { 2 })
}

fn cmd_bound(args: &BoardArgs) -> Result<i32> {
    let s = setup(args)?;
    if s.board.total_pieces() > 24 {
        bail!("path-gain search is limited to 24 piece slots");
    }
    let graph = match build_gain_graph(&s.piece.moves, &s.board) {
        Ok(g) => Some(g),
        Err(PieceError::IdenticallyZero) => None,
        Err(e) => return Err(e.into()),
    };
    let (cf, zero) = formula_or_zero(&s)?;
    let max_path_gain = graph.as_ref().map_or(0, GainGraph::max_path_gain);
    let sufficient = sufficient_width_bound(&s.piece.moves, &s.board);
    let threshold = cf.threshold();
    let slope = s
        .piece
        .slope
        .map(|b| slope_threshold(b, s.board.rows() as i64));
    let mut text = format!(
        "{}\nsufficient_width_bound: {sufficient}\nmax_path_gain: {max_path_gain}\nthreshold: {threshold}",
        board_header(&s)
    );
    let mut json = base_json(&s);
    json.insert("sufficient_width_bound".into(), Value::from(sufficient));
    json.insert("max_path_gain".into(), Value::from(max_path_gain));
    json.insert("threshold".into(), Value::from(threshold));
    if let Some(st) = slope {
        text.push_str(&format!("\nslope_threshold: {st}"));
        json.insert("slope_threshold".into(), Value::from(st));
    }
    if let Ok(c1) = second_coefficient(&s.piece.moves, &s.board) {
        text.push_str(&format!("\nsecond_coefficient: {c1}"));
        json.insert("second_coefficient".into(), jint(c1));
    }
    let k = asymptotic_probability(&s.piece.moves, &s.board);
    text.push_str(&format!("\nprobability_constant: {k}"));
    json.insert("probability_constant".into(), jint(k));
    if zero {
        json.insert("identically_zero".into(), Value::from(true));
    }
    emit(args.format, text, json);
    Ok(0)
}

fn cmd_pieces_list(format: Format) -> Result<i32> {
    let mut text = String::new();
    let mut entries = Vec::new();
    for name in BUILTIN_NAMES {
        let piece = Piece::builtin(name)?;
        let ms = &piece.moves;
        let fmt_vecs = |set: &std::collections::BTreeSet<(i64, i64)>| {
            set.iter()
                .map(|(dx, dy)| format!("({dx},{dy})"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let mut parts = Vec::new();
        if ms.horizontal_unbounded() {
            parts.push("horizontal: unbounded".to_string());
        }
        if !ms.generators().is_empty() {
            parts.push(format!("generators: {}", fmt_vecs(ms.generators())));
        }
        if !ms.moves().is_empty() {
            parts.push(format!("moves: {}", fmt_vecs(ms.moves())));
        }
        if let Some(b) = piece.slope {
            parts.push(format!("slope: {b}"));
        }
        text.push_str(&format!("{name}: {}\n", parts.join("; ")));
        let mut entry = serde_json::Map::new();
        entry.insert("name".into(), Value::from(name));
        entry.insert(
            "horizontal_unbounded".into(),
            Value::from(ms.horizontal_unbounded()),
        );
        entry.insert(
            "moves".into(),
            Value::Array(ms.moves().iter().map(|&(dx, dy)| json!([dx, dy])).collect()),
        );
        entry.insert(
            "generators".into(),
            Value::Array(
                ms.generators()
                    .iter()
                    .map(|&(dx, dy)| json!([dx, dy]))
                    .collect(),
            ),
        );
        if let Some(b) = piece.slope {
            entry.insert("slope".into(), Value::from(b));
        }
        entries.push(Value::Object(entry));
    }
    match format {
        Format::Text => print!("{text}"),
        Format::Json => println!("{}", json!({ "pieces": entries })),
    }
    Ok(0)
}
