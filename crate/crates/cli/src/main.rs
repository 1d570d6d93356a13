use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use clasplab_core::clasp::{clasp_report, resolve, ClaspReport};
use clasplab_core::diagram::{DiagramError, FrontDiagram};
use clasplab_core::filling::{
    obstruction_verdict, random_script, ruling_parities, run_script, search_filling, FillingError, MoveScript,
    SearchOutcome, Verdict,
};
use clasplab_core::generate;
use clasplab_core::moves::parse_script;
use clasplab_core::ruling::{enumerate_rulings_with_budget, NormalRuling, RulingError};
use clasplab_core::text::{parse_sourced, serialize, SourcedDiagram};

mod render;

#[derive(Parser)]
#[command(name = "clasplab", version, about = "Normal rulings, clasps and filling obstructions of Legendrian fronts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a diagram against the event-word invariants.
    Validate(Run),
    /// List all normal rulings.
    Rulings(Run),
    /// Clasp reports, for one ruling or all of them.
    Clasps {
        #[command(flatten)]
        run: Run,
        /// Switch set as a comma-separated list of crossing ordinals.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        ruling: Option<Vec<usize>>,
    },
    /// Parity of every normal ruling.
    Parity(Run),
    /// The even-ruling obstruction verdict.
    Obstruct(Run),
    /// Execute a move script from the empty diagram.
    ApplyScript {
        /// Script file, or `-` for stdin.
        #[arg(long, group = "script_source")]
        script: Option<String>,
        /// Generate a random script of this length instead (uses --seed).
        #[arg(long, group = "script_source")]
        random: Option<usize>,
        #[command(flatten)]
        opts: Opts,
    },
    /// Bounded search for a filling script.
    Search {
        #[command(flatten)]
        run: Run,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Print a generated diagram.
    Generate(Run),
    /// Draw a diagram, resolved by a ruling when one exists.
    Render {
        #[command(flatten)]
        run: Run,
        #[arg(long, value_enum, default_value_t = Style::Svg)]
        style: Style,
        /// Switch set to resolve by; defaults to the first normal ruling.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        ruling: Option<Vec<usize>>,
    },
}

#[derive(Args)]
struct Run {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SourceChoice {
    /// Diagram file, or `-` for stdin.
    #[arg(long, short)]
    input: Option<String>,
    /// Built-in family.
    #[arg(long, value_enum)]
    generate: Option<Generator>,
}

#[derive(Args)]
struct Source {
    #[command(flatten)]
    choice: SourceChoice,
    /// Family parameter: n for torus4, script length for random.
    #[arg(long)]
    n: Option<usize>,
    /// Braid strand count.
    #[arg(long)]
    strands: Option<usize>,
    /// Braid word, comma-separated letters.
    #[arg(long, value_delimiter = ',')]
    word: Option<Vec<usize>>,
}

#[derive(Args)]
struct Opts {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Node budget for ruling enumeration and search.
    #[arg(long, env = "CLASPLAB_BUDGET")]
    budget: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Style {
    Svg,
    Ascii,
}

#[derive(Clone, Copy, ValueEnum)]
enum Generator {
    Unknot,
    Trefoil,
    Torus4,
    Braid,
    /// Diagram of a random filling script (length --n, seed --seed).
    Random,
}

/// A failure with its exit status and structured stderr payload.
struct Failure {
    code: u8,
    body: Value,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, body: json!({ "error": "usage", "message": message.into() }) }
}

fn domain(kind: &str, message: impl ToString, extra: Value) -> Failure {
    let mut body = json!({ "error": kind, "message": message.to_string() });
    if let (Value::Object(b), Value::Object(e)) = (&mut body, extra) {
        b.extend(e);
    }
    Failure { code: 1, body }
}

fn ruling_failure(e: RulingError) -> Failure {
    match e {
        RulingError::BudgetExceeded { budget } => domain("budget_exceeded", &e, json!({ "budget": budget })),
        other => domain("ruling_error", other, json!({})),
    }
}

fn filling_failure(e: FillingError) -> Failure {
    match e {
        FillingError::Ruling(r) => ruling_failure(r),
        FillingError::Script { index, ref mv, .. } => domain("script_error", &e, json!({ "index": index, "move": mv })),
        FillingError::TransportFailure { index, ref mv, .. } => {
            domain("transport_failure", &e, json!({ "index": index, "move": mv }))
        }
        FillingError::EvennessViolation { .. } => domain("evenness_violation", &e, json!({})),
        other => domain("filling_error", other, json!({})),
    }
}

fn read_path(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| domain("io_error", e, json!({ "path": path })))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| domain("io_error", e, json!({ "path": path })))
    }
}

fn sourced_from(d: FrontDiagram) -> SourcedDiagram {
    let lines = (1..=d.len()).collect();
    SourcedDiagram { diagram: d, lines }
}

fn load(source: &Source, seed: u64) -> Result<SourcedDiagram, Failure> {
    if let Some(path) = &source.choice.input {
        let text = read_path(path)?;
        return parse_sourced(&text).map_err(|e| domain("parse_error", &e, json!({ "line": e.line })));
    }
    let gen = source.choice.generate.expect("clap enforces one source");
    let d = match gen {
        Generator::Unknot => generate::unknot(),
        Generator::Trefoil => generate::trefoil(),
        Generator::Torus4 => generate::torus4(source.n.ok_or_else(|| usage("torus4 needs --n"))?),
        Generator::Braid => {
            let strands = source.strands.ok_or_else(|| usage("braid needs --strands"))?;
            let word = source.word.clone().ok_or_else(|| usage("braid needs --word"))?;
            generate::plat_closure(strands, &word).map_err(|e| match e {
                DiagramError::InvalidBraidLetter { letter, max } => {
                    domain("invalid_braid_letter", &e, json!({ "letter": letter, "max": max }))
                }
                other => domain("invalid_braid", other, json!({})),
            })?
        }
        Generator::Random => {
            let len = source.n.ok_or_else(|| usage("random needs --n"))?;
            if len == 0 {
                return Err(usage("random needs --n >= 1"));
            }
            run_script(&random_script(len, seed)).map_err(filling_failure)?.diagram
        }
    };
    Ok(sourced_from(d))
}

/// Loads and validates, mapping the first violation back to its source line.
fn load_valid(source: &Source, seed: u64) -> Result<SourcedDiagram, Failure> {
    let s = load(source, seed)?;
    let report = s.diagram.validate();
    if let Some(v) = report.first() {
        let line = s.line_of(v.event);
        return Err(domain(
            "invalid_diagram",
            v,
            json!({ "violation": { "event": v.event, "line": line, "rule": v.rule, "message": v.message } }),
        ));
    }
    Ok(s)
}

struct Output {
    json: Value,
    text: String,
}

fn out<T: Serialize>(value: &T, text: String) -> Output {
    Output { json: serde_json::to_value(value).expect("serializable"), text }
}

fn switch_set(v: &Option<Vec<usize>>) -> Option<NormalRuling> {
    v.as_ref().map(|s| NormalRuling::new(s.iter().copied()))
}

#[derive(Serialize)]
struct RulingReport {
    ruling: NormalRuling,
    report: ClaspReport,
}

fn run(cli: Cli) -> Result<(Output, Option<String>, Format), Failure> {
    let (output, opts) = match &cli.command {
        Command::Validate(r) => {
            let s = load_valid(&r.source, r.opts.seed)?;
            let components = s.diagram.component_count().expect("valid");
            let body = json!({ "ok": true, "events": s.diagram.len(), "crossings": s.diagram.crossing_count(), "components": components });
            let text = format!("ok: {} events, {} crossings, {} components\n", s.diagram.len(), s.diagram.crossing_count(), components);
            (Output { json: body, text }, &r.opts)
        }
        Command::Rulings(r) => {
            let d = load_valid(&r.source, r.opts.seed)?.diagram;
            let rulings = enumerate_rulings_with_budget(&d, r.opts.budget).map_err(ruling_failure)?;
            let text = rulings.iter().map(|x| format!("{x}\n")).collect();
            (out(&rulings, text), &r.opts)
        }
        Command::Clasps { run: r, ruling } => {
            let d = load_valid(&r.source, r.opts.seed)?.diagram;
            let clasp_err = |e| domain("clasp_error", e, json!({}));
            match switch_set(ruling) {
                Some(rs) => {
                    let rep = clasp_report(&d, &rs).map_err(clasp_err)?;
                    let text = format!("{rs}: {} clasps, {}\n", rep.total, rep.parity);
                    (out(&rep, text), &r.opts)
                }
                None => {
                    let rulings = enumerate_rulings_with_budget(&d, r.opts.budget).map_err(ruling_failure)?;
                    let mut all = Vec::new();
                    let mut text = String::new();
                    for rs in rulings {
                        let rep = clasp_report(&d, &rs).map_err(clasp_err)?;
                        text.push_str(&format!("{rs}: {} clasps, {}\n", rep.total, rep.parity));
                        all.push(RulingReport { ruling: rs, report: rep });
                    }
                    (out(&all, text), &r.opts)
                }
            }
        }
        Command::Parity(r) => {
            let d = load_valid(&r.source, r.opts.seed)?.diagram;
            let rows = ruling_parities(&d, r.opts.budget).map_err(filling_failure)?;
            let odd = rows.iter().filter(|x| !x.parity.is_even()).count();
            let even = rows.len() - odd;
            let mut text: String = rows.iter().map(|x| format!("{}: {} clasps, {}\n", x.ruling, x.clasps, x.parity)).collect();
            text.push_str(&format!("odd {odd}, even {even}\n"));
            (Output { json: json!({ "rulings": rows, "odd": odd, "even": even }), text }, &r.opts)
        }
        Command::Obstruct(r) => {
            let d = load_valid(&r.source, r.opts.seed)?.diagram;
            let v = obstruction_verdict(&d, r.opts.budget).map_err(filling_failure)?;
            let text = match (&v.verdict, &v.witness) {
                (Verdict::Obstructed, _) => format!("obstructed: all {} normal rulings are odd\n", v.evidence.len()),
                (Verdict::NotObstructed, Some(w)) => format!("not obstructed: {w} is even\n"),
                (Verdict::NotObstructed, None) => "not obstructed: no normal rulings\n".to_string(),
            };
            (out(&v, text), &r.opts)
        }
        Command::ApplyScript { script, random, opts } => {
            let s = match (script, random) {
                (Some(path), None) => {
                    let text = read_path(path)?;
                    let moves = parse_script(&text)
                        .map_err(|(line, e)| domain("parse_error", e, json!({ "line": line })))?;
                    MoveScript::new(moves)
                }
                (None, Some(len)) => random_script(*len, opts.seed),
                _ => return Err(usage("apply-script needs --script or --random")),
            };
            let cert = run_script(&s).map_err(filling_failure)?;
            let text = format!(
                "{}---\n{}ruling {}: {} clasps, {}\n",
                cert.script, serialize(&cert.diagram), cert.ruling, cert.clasps.total, cert.clasps.parity
            );
            (out(&cert, text), opts)
        }
        Command::Search { run: r, depth } => {
            let d = load_valid(&r.source, r.opts.seed)?.diagram;
            let outcome = search_filling(&d, *depth, r.opts.budget.unwrap_or(100_000)).map_err(filling_failure)?;
            let text = match &outcome {
                SearchOutcome::Found { certificate, .. } => format!("found:\n{}", certificate.script),
                SearchOutcome::Exhausted { stats } => format!(
                    "exhausted: {} nodes expanded, depth {}{}\n",
                    stats.expanded,
                    stats.depth_reached,
                    if stats.budget_hit { ", budget hit" } else { "" }
                ),
                SearchOutcome::Pruned { .. } => "pruned: every normal ruling is odd\n".to_string(),
            };
            (out(&outcome, text), &r.opts)
        }
        Command::Generate(r) => {
            if r.source.choice.generate.is_none() {
                return Err(usage("generate needs --generate"));
            }
            let d = load_valid(&r.source, r.opts.seed)?.diagram;
            let text = serialize(&d);
            (out(&d, text), &r.opts)
        }
        Command::Render { run: r, style, ruling } => {
            let d = load_valid(&r.source, r.opts.seed)?.diagram;
            let chosen = match switch_set(ruling) {
                Some(rs) => Some(rs),
                None => enumerate_rulings_with_budget(&d, r.opts.budget).map_err(ruling_failure)?.into_iter().next(),
            };
            let res = match chosen {
                Some(rs) => Some(resolve(&d, &rs).map_err(|e| domain("clasp_error", e, json!({})))?),
                None => None,
            };
            let text = match style {
                Style::Svg => render::svg(&d, res.as_ref()),
                Style::Ascii => render::ascii(&d, res.as_ref()),
            };
            // renderings are always emitted as-is
            return Ok((Output { json: Value::Null, text }, r.opts.out.clone(), Format::Text));
        }
    };
    Ok((output, opts.out.clone(), opts.format))
}

fn emit(path: Option<&str>, bytes: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| domain("io_error", e, json!({ "path": p }))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(bytes.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| domain("io_error", e, json!({})))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = run(cli).and_then(|(output, path, format)| {
        let bytes = match format {
            Format::Json => format!("{}\n", output.json),
            Format::Text => output.text,
        };
        emit(path.as_deref(), &bytes)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.body);
            ExitCode::from(f.code)
        }
    }
}
