//! `gforge`: checks graph conditions, paradoxical witnesses, orbit
//! equivalence data and semigroup boundary certificates, and prints a
//! canonical report.
//!
//! Exit codes: 0 every check passed, 1 some check failed (with a witness),
//! 2 some check was inconclusive within its bounds, 64 usage or input error.
//!
//! # Input grammar
//!
//! ```text
//! graph     := FILE | "corpus:" NAME | "random:" INDEX
//! path      := VERTEX | instance ("." instance)*
//! instance  := EDGE | EDGE "[" COPY "]"
//! word      := "1" | letter ("." letter)*
//! letter    := instance | instance "^-1"
//! cylinder  := "Z(" path ")" | "Z(" path SEP "{" instance ("," instance)* "}" ")"
//! SEP       := "-" | "\" | "∖"
//! set       := "0" | "∅" | cylinder ("+" cylinder)*
//!
//! family    := "N^" K | "F+" N | "Z_axb"
//! element   := "(" INT ("," INT)* ")"        in N^k
//!            | LETTERS                        in F+n, letters x y z w u v s t
//!            | "(" B "," A ")"                in Z_axb, the map t -> B + A t
//! ideal     := "P" | "0" | element "P"       and for Z_axb: R "+" M "Z"
//! open      := ideal (XSEP ideal)*           XSEP is "!", "\", "∖" or " - "
//! ```
//!
//! Random graphs (`random:INDEX`) are drawn from `--seed`.

mod commands;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use gforge_core::boundary::Cylinder;
use gforge_core::corpus::{self, random_graphs, RandomGraphConfig};
use gforge_core::graph::DEFAULT_TAIL_CAP;
use gforge_core::oe::{coe_to_oe, examples, LocallyConstant, OeData, OeFile, PrefixHomeo};
use gforge_core::semigroup::Family;
use gforge_core::{load_graph, Graph, Path as GraphPath};
use serde_json::{json, Value};

use commands::{Bounds, Direction, SgpArgs, UsageError};
use report::{digest, Report, Status, Verdict};

const USAGE_EXIT: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "gforge", version, about = "Partial actions on graph boundaries and semigroup boundaries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Boundary point complexity for point-level checks.
    #[arg(long, global = true, default_value_t = 6)]
    depth: usize,
    /// Word length bound for isotropy and element searches.
    #[arg(long, global = true, default_value_t = 6)]
    word_bound: usize,
    /// Largest modulus considered for ax+b ideals.
    #[arg(long, global = true, default_value_t = 12)]
    modulus_bound: usize,
    /// Seed for `random:INDEX` graphs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Include wall-clock time. Off by default so reports stay byte-identical.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Conditions (L), (K), (PI) and topological freeness of a graph.
    Check { graph: String },
    /// Paradoxical witnesses for a compact open set, with verification.
    Witness { graph: String, set: String },
    /// Validate and translate orbit equivalence data between two graphs.
    Oe {
        e: String,
        f: String,
        data: String,
        #[arg(long, value_enum, default_value_t = DirectionArg::Check)]
        direction: DirectionArg,
    },
    /// Semigroup boundary checks for N^k, F+n and Z_axb.
    Sgp {
        family: String,
        /// ideals, independence, g0, freeness, paradox, axb, hypothesis, omega or minimality.
        action: String,
        /// Basic open set `X - X1 - ...`.
        #[arg(long = "U")]
        u: Option<String>,
        /// Comma separated generators for `ideals`.
        #[arg(long)]
        gens: Option<String>,
        /// Semicolon separated ideals for `independence`.
        #[arg(long)]
        ideals: Option<String>,
        /// Group element for `g0`.
        #[arg(long)]
        g: Option<String>,
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        q: Option<String>,
        /// Presentation `x, y | xy = yx; ...` for `hypothesis`.
        #[arg(long)]
        presentation: Option<String>,
        /// Truncation stage for characters.
        #[arg(long)]
        stage: Option<usize>,
        /// Largest cover size searched.
        #[arg(long, default_value_t = 3)]
        cover_cap: usize,
        /// Vouch that the monoid is quasi-lattice ordered.
        #[arg(long)]
        quasi_lattice: bool,
        /// Vouch that the presentation is r-complete.
        #[arg(long)]
        r_complete: bool,
    },
    /// The built-in corpus.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DirectionArg {
    Coe2oe,
    Oe2coe,
    Check,
}

#[derive(Subcommand, Debug)]
enum CorpusAction {
    /// Run every corpus case and compare its exit code with the expected one.
    Run,
    /// Write the corpus graphs and orbit equivalence files to a directory.
    Export { dir: PathBuf },
}

/// A loaded input and the bytes it was read from.
struct Input<T> {
    value: T,
    raw: Vec<u8>,
}

fn tail_cap() -> Result<usize, UsageError> {
    match std::env::var("GFORGE_BOUND_OVERRIDE") {
        Err(_) => Ok(DEFAULT_TAIL_CAP),
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| UsageError(format!("GFORGE_BOUND_OVERRIDE must be a positive integer, got `{s}`"))),
    }
}

fn random_config() -> RandomGraphConfig {
    RandomGraphConfig { infinite_rate: 0.1, ..Default::default() }
}

fn graph_json(g: &Graph) -> Vec<u8> {
    serde_json::to_vec(&g.to_json()).expect("graphs serialize")
}

fn load_graph_arg(arg: &str, seed: u64) -> Result<Input<Graph>, UsageError> {
    if let Some(name) = arg.strip_prefix("corpus:") {
        let g = corpus::by_name(name).ok_or_else(|| UsageError(format!("no corpus graph named `{name}`")))?;
        return Ok(Input { raw: graph_json(&g), value: g });
    }
    if let Some(i) = arg.strip_prefix("random:") {
        let i: usize = i.parse().map_err(|_| UsageError(format!("bad random graph index `{i}`")))?;
        let g = random_graphs(seed, i + 1, &random_config()).remove(i);
        return Ok(Input { raw: graph_json(&g), value: g });
    }
    let raw = std::fs::read(arg).map_err(|e| UsageError(format!("cannot read `{arg}`: {e}")))?;
    let text = String::from_utf8(raw.clone()).map_err(|_| UsageError(format!("`{arg}` is not UTF-8")))?;
    Ok(Input { value: load_graph(&text)?, raw })
}

/// Identity homeomorphism of `g` with zero shifts on every vertex cylinder.
fn identity_shifts(g: &Graph) -> OeFile {
    let zero =
        || LocallyConstant { parts: g.vertices().map(|v| (Cylinder::plain(GraphPath::vertex(v)), 0)).collect() };
    OeFile {
        phi: PrefixHomeo::identity(g),
        cocycles: None,
        shifts: Some(OeData { k: zero(), l: zero(), k_prime: zero(), l_prime: zero() }),
    }
}

/// Orbit equivalence files shipped with the corpus, by name.
fn corpus_oe(name: &str) -> Option<(Graph, Graph, OeFile)> {
    if name == "identity-G1" {
        let g = corpus::g1();
        let file = identity_shifts(&g);
        return Some((g.clone(), g, file));
    }
    let ex = examples::by_name(name)?;
    let shifts = coe_to_oe(&ex.e, &ex.f, &ex.a, &ex.b).ok();
    let file = OeFile { phi: ex.phi, cocycles: Some((ex.a, ex.b)), shifts };
    Some((ex.e, ex.f, file))
}

fn corpus_oe_names() -> Vec<&'static str> {
    let mut names: Vec<&'static str> = examples::all().iter().map(|ex| ex.name).collect();
    names.push("identity-G1");
    names
}

fn load_oe_arg(arg: &str, e: &Graph, f: &Graph) -> Result<Input<OeFile>, UsageError> {
    let raw = if let Some(name) = arg.strip_prefix("corpus:") {
        let (ce, cf, file) = corpus_oe(name).ok_or_else(|| UsageError(format!("no corpus data named `{name}`")))?;
        serde_json::to_vec(&file.to_json(&ce, &cf)).expect("json")
    } else {
        std::fs::read(arg).map_err(|err| UsageError(format!("cannot read `{arg}`: {err}")))?
    };
    let text = std::str::from_utf8(&raw).map_err(|_| UsageError(format!("`{arg}` is not UTF-8")))?;
    Ok(Input { value: OeFile::parse(e, f, text)?, raw })
}

fn flags_json(cli: &Cli, b: Bounds) -> Value {
    let mut flags = b.to_json();
    flags["seed"] = json!(cli.seed);
    flags
}

fn execute(cli: &Cli) -> Result<Report, UsageError> {
    let bounds = Bounds {
        depth: cli.depth,
        word_bound: cli.word_bound,
        modulus_bound: cli.modulus_bound,
        tail_cap: tail_cap()?,
    };
    let (command, verdicts, parts): (&str, Vec<Verdict>, Vec<Vec<u8>>) = match &cli.command {
        Command::Check { graph } => {
            let g = load_graph_arg(graph, cli.seed)?;
            ("check", commands::check(&g.value, bounds)?, vec![g.raw])
        }
        Command::Witness { graph, set } => {
            let g = load_graph_arg(graph, cli.seed)?;
            ("witness", commands::witness(&g.value, set, bounds)?, vec![g.raw, set.clone().into_bytes()])
        }
        Command::Oe { e, f, data, direction } => {
            let e = load_graph_arg(e, cli.seed)?;
            let f = load_graph_arg(f, cli.seed)?;
            let d = load_oe_arg(data, &e.value, &f.value)?;
            let dir = match direction {
                DirectionArg::Coe2oe => Direction::Coe2Oe,
                DirectionArg::Oe2coe => Direction::Oe2Coe,
                DirectionArg::Check => Direction::Check,
            };
            let v = commands::oe(&e.value, &f.value, &d.value, dir, bounds)?;
            let tag = format!("{dir:?}").into_bytes();
            ("oe", v, vec![e.raw, f.raw, d.raw, tag])
        }
        Command::Sgp {
            family,
            action,
            u,
            gens,
            ideals,
            g,
            p,
            q,
            presentation,
            stage,
            cover_cap,
            quasi_lattice,
            r_complete,
        } => {
            let fam = Family::parse(family)?;
            let args = SgpArgs {
                u: u.clone(),
                gens: gens.clone(),
                ideals: ideals.clone(),
                g: g.clone(),
                p: p.clone(),
                q: q.clone(),
                presentation: presentation.clone(),
                stage: *stage,
                cap: *cover_cap,
                quasi_lattice: *quasi_lattice,
                r_complete: *r_complete,
            };
            let v = commands::sgp(fam, action, &args, bounds)?;
            let described = format!("{family}\n{action}\n{args:?}").into_bytes();
            ("sgp", v, vec![described])
        }
        Command::Corpus { action: CorpusAction::Run } => ("corpus run", corpus_run(cli)?, vec![b"corpus".to_vec()]),
        Command::Corpus { action: CorpusAction::Export { dir } } => {
            let written = corpus_export(dir)?;
            let v = Verdict::pass("export").with_detail(json!({ "files": written }));
            ("corpus export", vec![v], vec![dir.display().to_string().into_bytes()])
        }
    };
    let refs: Vec<&[u8]> = parts.iter().map(Vec::as_slice).collect();
    Ok(Report {
        command: command.into(),
        input_digest: digest(&refs),
        flags: flags_json(cli, bounds),
        verdicts,
        elapsed_ms: None,
    })
}

/// Corpus cases: arguments after the global flags, and the expected exit
/// code. `None` accepts any verdict but a usage error.
fn corpus_cases() -> Vec<(&'static str, Vec<&'static str>, Option<u8>)> {
    let mut cases: Vec<(&'static str, Vec<&'static str>, Option<u8>)> = vec![
        ("check-G1", vec!["check", "corpus:G1"], Some(1)),
        ("check-G2", vec!["check", "corpus:G2"], Some(0)),
        ("check-G3", vec!["check", "corpus:G3"], Some(1)),
        ("check-G4", vec!["check", "corpus:G4"], Some(1)),
        ("check-G5", vec!["check", "corpus:G5"], Some(0)),
        ("check-G6", vec!["check", "corpus:G6"], Some(1)),
        ("check-two-vertex", vec!["check", "corpus:two-vertex"], Some(0)),
        ("check-missing", vec!["check", "corpus:missing"], Some(USAGE_EXIT)),
        ("witness-G2", vec!["witness", "corpus:G2", "Z(v)"], Some(0)),
        ("witness-G1", vec!["witness", "corpus:G1", "Z(v)"], Some(1)),
        ("witness-malformed", vec!["witness", "corpus:G2", "Z(v"], Some(USAGE_EXIT)),
        ("oe-identity-G2", vec!["oe", "corpus:G2", "corpus:G2", "corpus:identity-G2", "--direction", "coe2oe"], Some(0)),
        ("oe-swap-G2", vec!["oe", "corpus:G2", "corpus:G2", "corpus:swap-G2", "--direction", "coe2oe"], Some(0)),
        (
            "oe-flip-two-vertex",
            vec!["oe", "corpus:two-vertex", "corpus:two-vertex", "corpus:flip-two-vertex", "--direction", "coe2oe"],
            Some(0),
        ),
        ("oe-identity-G1", vec!["oe", "corpus:G1", "corpus:G1", "corpus:identity-G1", "--direction", "oe2coe"], Some(1)),
        ("sgp-F2-paradox", vec!["sgp", "F+2", "paradox", "--U", "xP - xxP"], Some(0)),
        ("sgp-N1-paradox", vec!["sgp", "N^1", "paradox"], Some(1)),
        ("sgp-axb", vec!["sgp", "Z_axb", "axb", "--U", "0+2Z ! 0+6Z"], Some(0)),
        ("sgp-N2-independence", vec!["sgp", "N^2", "independence"], Some(0)),
        ("sgp-N2-g0", vec!["sgp", "N^2", "g0"], Some(0)),
        ("sgp-F2-independence", vec!["sgp", "F+2", "independence"], Some(0)),
        ("sgp-F2-g0", vec!["sgp", "F+2", "g0"], Some(0)),
        ("sgp-F2-ideals", vec!["sgp", "F+2", "ideals"], Some(0)),
        ("sgp-F2-hypothesis", vec!["sgp", "F+2", "hypothesis"], Some(0)),
        ("sgp-bad-family", vec!["sgp", "Q^2", "ideals"], Some(USAGE_EXIT)),
    ];
    for (i, name) in ["check-random-0", "check-random-1", "check-random-2", "check-random-3", "check-random-4"]
        .into_iter()
        .enumerate()
    {
        let arg: &'static str = ["random:0", "random:1", "random:2", "random:3", "random:4"][i];
        cases.push((name, vec!["check", arg], None));
    }
    cases
}

fn global_flags(cli: &Cli) -> Vec<String> {
    vec![
        format!("--depth={}", cli.depth),
        format!("--word-bound={}", cli.word_bound),
        format!("--modulus-bound={}", cli.modulus_bound),
        format!("--seed={}", cli.seed),
    ]
}

fn corpus_run(cli: &Cli) -> Result<Vec<Verdict>, UsageError> {
    let mut out = Vec::new();
    for (name, args, expected) in corpus_cases() {
        let argv: Vec<String> =
            std::iter::once("gforge".to_string()).chain(global_flags(cli)).chain(args.iter().map(|s| s.to_string())).collect();
        let inner = Cli::try_parse_from(&argv).map_err(|e| UsageError(format!("corpus case {name}: {e}")))?;
        let (code, detail) = match execute(&inner) {
            Ok(r) => {
                let canonical = serde_json::to_vec(&r.to_json()).expect("json");
                let mismatch = r.verdicts.iter().any(|v| v.check == "freeness_matches_L" && v.status == Status::Fail);
                let code = if mismatch { 255 } else { r.status().exit_code() as u8 };
                (code, json!({ "report": digest(&[&canonical]), "status": r.status().name() }))
            }
            Err(e) => (USAGE_EXIT, json!({ "usage_error": e.0 })),
        };
        let ok = match expected {
            Some(want) => code == want,
            None => code != USAGE_EXIT && code != 255,
        };
        let mut detail = detail;
        detail["args"] = json!(args);
        detail["exit"] = json!(code);
        let v = Verdict::from_bool(name, ok, || json!({ "expected": expected, "actual": code }));
        out.push(v.with_detail(detail));
    }
    Ok(out)
}

fn write_json(path: &Path, v: &Value) -> Result<(), UsageError> {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    std::fs::write(path, s).map_err(|e| UsageError(format!("cannot write `{}`: {e}", path.display())))
}

fn corpus_export(dir: &Path) -> Result<Vec<String>, UsageError> {
    let mkdir = |d: &Path| std::fs::create_dir_all(d).map_err(|e| UsageError(format!("cannot create `{}`: {e}", d.display())));
    let (gdir, odir) = (dir.join("graphs"), dir.join("oe"));
    mkdir(&gdir)?;
    mkdir(&odir)?;
    let mut written = Vec::new();
    for (name, g) in corpus::named() {
        let v = serde_json::to_value(g.to_json()).expect("json");
        write_json(&gdir.join(format!("{name}.json")), &v)?;
        written.push(format!("graphs/{name}.json"));
    }
    for name in corpus_oe_names() {
        let (e, f, file) = corpus_oe(name).expect("listed");
        write_json(&odir.join(format!("{name}.json")), &file.to_json(&e, &f))?;
        written.push(format!("oe/{name}.json"));
    }
    Ok(written)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE_EXIT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    match execute(&cli) {
        Ok(mut report) => {
            if cli.timing {
                report.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
            }
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("json")),
                Format::Text => print!("{}", report.to_text()),
            }
            ExitCode::from(report.status().exit_code() as u8)
        }
        Err(UsageError(msg)) => {
            eprintln!("gforge: {msg}");
            ExitCode::from(USAGE_EXIT)
        }
    }
}
