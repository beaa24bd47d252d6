//! Command-line front door: generate, verify, count, encode, decode, and
//! export the cycle families the `cyclesmith` library builds.
//!
//! Exit codes: 0 success (or a valid verification), 1 invalid verification,
//! 2 usage error (bad flags or unparseable symbols), 3 infeasible
//! parameters (sizes, gcd conditions, disconnected families).

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cyclesmith::coding::{decode_code, encode_poset, CyclicCode, DecodeMode, PosetCode};
use cyclesmith::juggling::{self, JuggleParams, JugglingSequence};
use cyclesmith::poset::NlPoset;
use cyclesmith::posetcycle::{build_arc_digraph, count_ucycles, generate_ucycle};
use cyclesmith::symbols;
use cyclesmith::verify::{verify_cycle, CycleReport, Decoder, WindowScheme};
use cyclesmith::words::{self, OverlapVertex, WordCycleParams};

#[derive(Parser)]
#[command(name = "cyclesmith", version, about = "Universal and overlap cycle toolkit")]
struct Cli {
    /// Print results (and errors) as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Write the result to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Cache directory for enumerations; defaults to $CYCLESMITH_CACHE.
    #[arg(long, global = true, value_name = "DIR")]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Naturally labeled posets and their universal cycles.
    #[command(subcommand)]
    Posets(PosetsCmd),
    /// Fixed-weight words and their overlap cycles.
    #[command(subcommand)]
    Words(WordsCmd),
    /// Juggling sequences and their overlap cycles.
    #[command(subcommand)]
    Juggle(JuggleCmd),
    /// Check that a cyclic string spells a family exactly once.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum PosetsCmd {
    /// List the code of every poset of one size, one per line.
    Enumerate(SizeArgs),
    /// Generate the universal cycle of all posets of one size.
    Ucycle(SizeArgs),
    /// Count Eulerian circuits and arborescences of the arc digraph.
    CountCircuits(SizeArgs),
    /// Encode a poset given by its cover pairs.
    Encode(EncodeArgs),
    /// Decode a code string back to cover pairs.
    Decode(DecodeArgs),
    /// Export the arc digraph.
    Graph(GraphArgs),
}

#[derive(Args)]
struct SizeArgs {
    /// Poset size k.
    #[arg(long)]
    size: usize,
}

#[derive(Args)]
struct EncodeArgs {
    /// Poset size k.
    #[arg(long)]
    size: usize,
    /// Cover pairs, e.g. "1-2,1-4,2-5,4-5,3-6,5-6"; empty for an antichain.
    #[arg(long, default_value = "")]
    covers: String,
}

#[derive(Args)]
struct DecodeArgs {
    /// Close the named pairs transitively instead of requiring exact covers.
    #[arg(long)]
    normalize: bool,
    /// The code, compact ("10455") or comma-separated ("1,0,4,5,5").
    code: String,
}

#[derive(Args)]
struct GraphArgs {
    /// Poset size k of the edges; vertices have size k−1.
    #[arg(long)]
    size: usize,
    /// Export format.
    #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
    format: GraphFormat,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum GraphFormat {
    Dot,
    Json,
}

#[derive(Subcommand)]
enum WordsCmd {
    /// Generate the overlap cycle of all length-n weight-k words.
    Ocycle(WordParamsArgs),
    /// Trace the append/rearrange descent from a vertex to the sink.
    Reduce(WordReduceArgs),
    /// Check a claimed overlap cycle of weight words.
    Verify(WordVerifyArgs),
}

#[derive(Args)]
struct WordParamsArgs {
    /// Word length n.
    #[arg(long)]
    length: usize,
    /// Letter sum k of every word.
    #[arg(long)]
    weight: u64,
    /// Largest letter q.
    #[arg(long)]
    alphabet: u64,
    /// Overlap s between consecutive windows.
    #[arg(long)]
    overlap: usize,
}

#[derive(Args)]
struct WordReduceArgs {
    #[command(flatten)]
    params: WordParamsArgs,
    /// The length-s start vertex.
    vertex: String,
}

#[derive(Args)]
struct WordVerifyArgs {
    #[command(flatten)]
    params: WordParamsArgs,
    /// The cyclic symbol string to check.
    cycle: String,
}

#[derive(Subcommand)]
enum JuggleCmd {
    /// Check one site-swap sequence.
    Validate(SeqArgs),
    /// Print the landing permutation of a valid sequence.
    Permutation(SeqArgs),
    /// Generate the overlap cycle of all sequences of a family.
    Ocycle(JuggleFamilyArgs),
    /// Walk a sequence down to all zeros through legal transitions.
    Reduce(SeqArgs),
}

#[derive(Args)]
struct SeqArgs {
    /// Throw heights, compact ("531537") or comma-separated.
    sequence: String,
}

#[derive(Args)]
struct JuggleFamilyArgs {
    /// Period n (must be odd).
    #[arg(long)]
    period: usize,
    /// Ball bound b.
    #[arg(long)]
    balls: u64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Window length.
    #[arg(long)]
    window: usize,
    /// Positions between window starts.
    #[arg(long)]
    stride: usize,
    /// How windows decode to objects.
    #[arg(long, value_enum)]
    decoder: DecoderKind,
    /// Largest letter (literal decoder).
    #[arg(long)]
    alphabet: Option<u64>,
    /// Ground-set size (subset decoder).
    #[arg(long)]
    ground: Option<u64>,
    /// Smallest accepted weight (charvec decoder).
    #[arg(long)]
    min_weight: Option<u64>,
    /// Largest accepted weight (charvec decoder).
    #[arg(long)]
    max_weight: Option<u64>,
    /// The cyclic symbol string to check.
    cycle: String,
}

#[derive(ValueEnum, Clone, Copy)]
enum DecoderKind {
    /// Any word over 0..=alphabet.
    Literal,
    /// Windows are subsets of {1..ground}.
    Subset,
    /// Binary windows with a bounded letter sum.
    Charvec,
    /// Windows are permutations of {1..window}.
    Permutation,
    /// Windows reduce to poset codes.
    Poset,
}

/// What a subcommand produced: a text rendering, a JSON rendering, and the
/// verdict when the command was a verification.
struct Outcome {
    text: String,
    json: Value,
    valid: Option<bool>,
}

impl Outcome {
    fn new(text: impl Into<String>, json: Value) -> Self {
        Outcome { text: text.into(), json, valid: None }
    }

    fn verdict(text: impl Into<String>, json: Value, valid: bool) -> Self {
        Outcome { text: text.into(), json, valid: Some(valid) }
    }
}

struct Failure {
    exit: u8,
    message: String,
}

impl Failure {
    /// Bad input syntax: exit 2, like a flag error.
    fn usage(err: impl ToString) -> Self {
        Failure { exit: 2, message: err.to_string() }
    }

    /// Well-formed but impossible parameters: exit 3.
    fn domain(err: impl ToString) -> Self {
        Failure { exit: 3, message: err.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json_mode = cli.json;
    let output = cli.output.clone();
    match run(cli) {
        Ok(outcome) => {
            let payload = if json_mode { outcome.json.to_string() } else { outcome.text };
            if let Some(path) = output {
                if let Err(err) = fs::write(&path, payload + "\n") {
                    eprintln!("error: cannot write {}: {err}", path.display());
                    return ExitCode::from(2);
                }
            } else if let Err(err) = writeln!(io::stdout(), "{payload}") {
                // A closed pipe (e.g. `cyclesmith ... | head`) is not our error.
                if err.kind() != io::ErrorKind::BrokenPipe {
                    eprintln!("error: cannot write output: {err}");
                    return ExitCode::from(2);
                }
            }
            match outcome.valid {
                Some(false) => ExitCode::from(1),
                _ => ExitCode::SUCCESS,
            }
        }
        Err(failure) => {
            if json_mode {
                eprintln!("{}", json!({ "error": failure.message, "exit": failure.exit }));
            } else {
                eprintln!("error: {}", failure.message);
            }
            ExitCode::from(failure.exit)
        }
    }
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    let cache = cli.cache.or_else(|| std::env::var_os("CYCLESMITH_CACHE").map(PathBuf::from));
    match cli.command {
        Command::Posets(cmd) => run_posets(cmd, cache.as_deref(), cli.json),
        Command::Words(cmd) => run_words(cmd),
        Command::Juggle(cmd) => run_juggle(cmd),
        Command::Verify(args) => run_verify(args),
    }
}

fn run_posets(cmd: PosetsCmd, cache: Option<&Path>, json_mode: bool) -> Result<Outcome, Failure> {
    match cmd {
        PosetsCmd::Enumerate(args) => {
            if args.size < 2 {
                return Err(Failure::domain("codes exist for sizes 2 and up"));
            }
            let codes = enumerate_codes(args.size, cache);
            Ok(Outcome::new(
                codes.join("\n"),
                json!({ "size": args.size, "count": codes.len(), "codes": codes }),
            ))
        }
        PosetsCmd::Ucycle(args) => {
            let cycle = generate_ucycle(args.size).map_err(Failure::domain)?;
            let canonical = cycle.canonical_rotation();
            let mut body = canonical.to_json();
            body["compact"] = match canonical.compact_string() {
                Some(s) => Value::String(s),
                None => Value::Null,
            };
            Ok(Outcome::new(canonical.to_string(), body))
        }
        PosetsCmd::CountCircuits(args) => {
            let counts = count_ucycles(args.size).map_err(Failure::domain)?;
            Ok(Outcome::new(
                counts.circuits.to_string(),
                json!({
                    "size": args.size,
                    "arborescences": counts.arborescences.to_string(),
                    "circuits": counts.circuits.to_string(),
                }),
            ))
        }
        PosetsCmd::Encode(args) => {
            let covers = parse_covers(&args.covers)?;
            let poset = NlPoset::from_covers(args.size, &covers).map_err(Failure::domain)?;
            let code = encode_poset(&poset).map_err(Failure::domain)?;
            Ok(Outcome::new(
                code.to_string(),
                json!({
                    "size": args.size,
                    "covers": covers.iter().map(|&(a, b)| json!([a, b])).collect::<Vec<_>>(),
                    "code": code.to_string(),
                }),
            ))
        }
        PosetsCmd::Decode(args) => {
            let syms = symbols::parse(&args.code).map_err(Failure::usage)?;
            let code = PosetCode::new(syms).map_err(Failure::domain)?;
            let mode = if args.normalize { DecodeMode::Normalize } else { DecodeMode::Strict };
            let poset = decode_code(&code, mode).map_err(Failure::domain)?;
            Ok(Outcome::new(render_poset(&poset), poset.to_json()))
        }
        PosetsCmd::Graph(args) => {
            let arc = build_arc_digraph(args.size).map_err(Failure::domain)?;
            let as_json = json_mode || args.format == GraphFormat::Json;
            let text = if as_json { arc.to_json().to_string() } else { arc.to_dot() };
            Ok(Outcome { text, json: arc.to_json(), valid: None })
        }
    }
}

fn run_words(cmd: WordsCmd) -> Result<Outcome, Failure> {
    match cmd {
        WordsCmd::Ocycle(args) => {
            let params = word_params(&args)?;
            let cycle = words::generate_ocycle(&params).map_err(Failure::domain)?;
            Ok(Outcome::new(
                symbols::render(&cycle),
                json!({
                    "length": params.length(),
                    "weight": params.weight(),
                    "alphabet": params.alphabet(),
                    "overlap": params.overlap(),
                    "cycle_length": cycle.len(),
                    "cycle": symbols::render(&cycle),
                }),
            ))
        }
        WordsCmd::Reduce(args) => {
            let params = word_params(&args.params)?;
            let letters = symbols::parse(&args.vertex).map_err(Failure::usage)?;
            let start = OverlapVertex::new(letters, &params).map_err(Failure::domain)?;
            let trace = words::reduction_trace(&start, &params).map_err(Failure::domain)?;
            let steps: Vec<Value> = trace
                .steps
                .iter()
                .map(|s| {
                    json!({
                        "appended": s.appended.to_string(),
                        "rearranged": s.rearranged.to_string(),
                        "vertex": s.vertex.to_string(),
                    })
                })
                .collect();
            Ok(Outcome::new(
                trace.to_string(),
                json!({
                    "start": trace.start.to_string(),
                    "steps": steps,
                    "end": trace.end().to_string(),
                }),
            ))
        }
        WordsCmd::Verify(args) => {
            let params = word_params(&args.params)?;
            let cycle = symbols::parse(&args.cycle).map_err(Failure::usage)?;
            let report = words::verify_ocycle(&cycle, &params);
            Ok(Outcome::verdict(report.to_string(), report_json(&report), report.valid))
        }
    }
}

fn run_juggle(cmd: JuggleCmd) -> Result<Outcome, Failure> {
    match cmd {
        JuggleCmd::Validate(args) => {
            let throws = symbols::parse(&args.sequence).map_err(Failure::usage)?;
            match JugglingSequence::new(throws) {
                Ok(seq) => Ok(Outcome::verdict(
                    format!("valid ({} balls)", seq.ball_count()),
                    json!({
                        "sequence": seq.to_string(),
                        "valid": true,
                        "balls": seq.ball_count(),
                        "permutation": symbols::render(&seq.underlying_permutation()),
                    }),
                    true,
                )),
                Err(err) => Ok(Outcome::verdict(
                    format!("invalid: {err}"),
                    json!({ "sequence": args.sequence, "valid": false, "error": err.to_string() }),
                    false,
                )),
            }
        }
        JuggleCmd::Permutation(args) => {
            let throws = symbols::parse(&args.sequence).map_err(Failure::usage)?;
            let seq = JugglingSequence::new(throws).map_err(Failure::domain)?;
            let perm = seq.underlying_permutation();
            Ok(Outcome::new(
                symbols::render(&perm),
                json!({
                    "sequence": seq.to_string(),
                    "permutation": symbols::render(&perm),
                    "balls": seq.ball_count(),
                }),
            ))
        }
        JuggleCmd::Ocycle(args) => {
            let params = JuggleParams::new(args.period, args.balls).map_err(Failure::domain)?;
            let cycle = juggling::generate_ocycle(&params).map_err(Failure::domain)?;
            Ok(Outcome::new(
                symbols::render(&cycle),
                json!({
                    "period": args.period,
                    "balls": args.balls,
                    "cycle_length": cycle.len(),
                    "cycle": symbols::render(&cycle),
                }),
            ))
        }
        JuggleCmd::Reduce(args) => {
            let throws = symbols::parse(&args.sequence).map_err(Failure::usage)?;
            let seq = JugglingSequence::new(throws).map_err(Failure::domain)?;
            let params =
                JuggleParams::new(seq.period(), seq.ball_count()).map_err(Failure::domain)?;
            let chain = juggling::reduce_to_zero(&seq, &params).map_err(Failure::domain)?;
            let rendered: Vec<String> = chain.iter().map(ToString::to_string).collect();
            Ok(Outcome::new(
                rendered.join(" -> "),
                json!({ "start": rendered[0], "chain": rendered }),
            ))
        }
    }
}

fn run_verify(args: VerifyArgs) -> Result<Outcome, Failure> {
    let decoder = match args.decoder {
        DecoderKind::Literal => Decoder::LiteralWord {
            alphabet: args
                .alphabet
                .ok_or_else(|| Failure::usage("--alphabet is required for --decoder literal"))?,
        },
        DecoderKind::Subset => Decoder::SubsetOfN {
            ground: args
                .ground
                .ok_or_else(|| Failure::usage("--ground is required for --decoder subset"))?,
        },
        DecoderKind::Charvec => Decoder::CharacteristicVector {
            min: args
                .min_weight
                .ok_or_else(|| Failure::usage("--min-weight is required for --decoder charvec"))?,
            max: args
                .max_weight
                .ok_or_else(|| Failure::usage("--max-weight is required for --decoder charvec"))?,
        },
        DecoderKind::Permutation => Decoder::Permutation,
        DecoderKind::Poset => Decoder::PosetCode,
    };
    let scheme = WindowScheme::new(args.window, args.stride, decoder).map_err(Failure::domain)?;
    // Accept both a bare symbol string and the `k=<k>;...` form that
    // `posets ucycle` prints.
    let cycle = if args.cycle.trim_start().starts_with("k=") {
        let code = CyclicCode::from_str(&args.cycle).map_err(Failure::usage)?;
        if code.window() != args.window {
            return Err(Failure::domain(format!(
                "code declares windows of length {}, but --window is {}",
                code.window(),
                args.window
            )));
        }
        code.symbols().to_vec()
    } else {
        symbols::parse(&args.cycle).map_err(Failure::usage)?
    };
    let report = verify_cycle(&cycle, &scheme);
    Ok(Outcome::verdict(report.to_string(), report_json(&report), report.valid))
}

/// Codes of all posets of one size, served from the cache directory when a
/// readable cache file exists, else computed (and then cached best-effort).
/// The cache never changes results: a file that fails to parse is ignored.
fn enumerate_codes(size: usize, cache: Option<&Path>) -> Vec<String> {
    let file = cache.map(|dir| dir.join(format!("posets_k{size}.txt")));
    if let Some(path) = &file {
        if let Ok(text) = fs::read_to_string(path) {
            if let Some(codes) = parse_cached_codes(&text, size) {
                return codes;
            }
        }
    }
    let codes: Vec<String> = NlPoset::enumerate(size)
        .iter()
        .map(|p| encode_poset(p).expect("sizes >= 2 encode").to_string())
        .collect();
    if let Some(path) = &file {
        if let Some(dir) = path.parent() {
            let _ = fs::create_dir_all(dir);
        }
        let _ = fs::write(path, codes.join("\n") + "\n");
    }
    codes
}

fn parse_cached_codes(text: &str, size: usize) -> Option<Vec<String>> {
    let mut codes = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let code = PosetCode::new(symbols::parse(line).ok()?).ok()?;
        if code.size() != size {
            return None;
        }
        codes.push(code.to_string());
    }
    (!codes.is_empty()).then_some(codes)
}

fn word_params(args: &WordParamsArgs) -> Result<WordCycleParams, Failure> {
    WordCycleParams::new(args.length, args.weight, args.alphabet, args.overlap)
        .map_err(Failure::domain)
}

fn parse_covers(text: &str) -> Result<Vec<(usize, usize)>, Failure> {
    let mut covers = Vec::new();
    for part in text.split([',', ' ']).filter(|p| !p.is_empty()) {
        let (a, b) = part
            .split_once('-')
            .ok_or_else(|| Failure::usage(format!("cover {part:?} is not of the form a-b")))?;
        let a = a.trim().parse().map_err(|_| Failure::usage(format!("bad label {a:?}")))?;
        let b = b.trim().parse().map_err(|_| Failure::usage(format!("bad label {b:?}")))?;
        covers.push((a, b));
    }
    Ok(covers)
}

fn render_poset(poset: &NlPoset) -> String {
    let covers = poset.covers();
    if covers.is_empty() {
        return format!("size {}; no covers", poset.size());
    }
    let pairs: Vec<String> = covers.iter().map(|(a, b)| format!("{a}-{b}")).collect();
    format!("size {}; covers {}", poset.size(), pairs.join(" "))
}

fn report_json(report: &CycleReport) -> Value {
    json!({
        "window": report.window,
        "stride": report.stride,
        "symbol_count": report.symbol_count,
        "window_count": report.window_count,
        "expected_count": report.expected_count,
        "coverage_checked": report.coverage_checked,
        "offset": report.offset,
        "length_ok": report.length_ok,
        "invalid_count": report.invalid_count,
        "invalid_samples": report
            .invalid_samples
            .iter()
            .map(|(pos, err)| json!({ "position": pos, "error": err }))
            .collect::<Vec<_>>(),
        "duplicate_count": report.duplicate_count,
        "duplicate_samples": report
            .duplicate_samples
            .iter()
            .map(|&(a, b)| json!([a, b]))
            .collect::<Vec<_>>(),
        "missing_count": report.missing_count,
        "valid": report.valid,
    })
}
