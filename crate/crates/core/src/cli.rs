//! Command-line front end. [`run`] returns the process exit code:
//! 0 on success, 1 for negative domain verdicts, 2 for bad input.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::catalog;
use crate::format::render_table;
use crate::games::{find_pure_nash, BimatrixGame};
use crate::invariance::{check_scheme_invariance, randomized_invariance_trial, Certificate, InvarianceReport, Verdict};
use crate::isomorphism::{find_isomorphisms, first_isomorphism, GameMapping, PlayerMap, StrongIsomorphism};
use crate::permutation::PermutationOrder;
use crate::qlinalg::StateVector;
use crate::schemes::{
    correlated_matrix_oracle, iqbal_operators, cyclic_operators, mw_payoff_matrix, mw_permutation_oracle,
    permutation_operators, refined_matrix_oracle, CorrelatedScheme, OperatorSet, OperatorSetSpec, RefinedScheme,
    SchemeConfig, SchemeKind,
};

const EXIT_OK: i32 = 0;
const EXIT_VERDICT: i32 = 1;
const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "qgame", version, about = "Quantum game schemes and strong isomorphism checks")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for profile and trial evaluation.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the pure Nash equilibria of a game.
    Nash { game: PathBuf },
    /// Search for strong isomorphisms between two games.
    Iso {
        g1: PathBuf,
        g2: PathBuf,
        /// Print every isomorphism instead of the first.
        #[arg(long)]
        all: bool,
        /// Exit with status 1 when the games are not isomorphic.
        #[arg(long)]
        strict: bool,
    },
    /// Compute the output game of a quantum scheme.
    Quantize(QuantizeArgs),
    /// Check whether a scheme maps isomorphic inputs to isomorphic outputs.
    Invariance(InvarianceArgs),
    /// Regenerate the worked examples into a report directory.
    Demo {
        #[arg(long, default_value = "report")]
        out: PathBuf,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SchemeName {
    Refined,
    Correlated,
    Mw,
    Perm,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default)]
enum ColumnOrder {
    /// Lexicographic one-line notation.
    #[default]
    Lex,
    /// Grouped by the position of the largest symbol (012, 102, 021, 120, 201, 210).
    #[value(alias = "largest-first")]
    Grouped,
}

impl From<ColumnOrder> for PermutationOrder {
    fn from(o: ColumnOrder) -> Self {
        match o {
            ColumnOrder::Lex => PermutationOrder::Lexicographic,
            ColumnOrder::Grouped => PermutationOrder::LargestFirst,
        }
    }
}

#[derive(Args, Debug)]
struct SchemeArgs {
    #[arg(long, value_enum)]
    scheme: SchemeName,
    /// Player 1 operator set for `mw`: identity-sigma | iqbal3 | cyclic:<n> | perm.
    #[arg(long)]
    ops1: Option<String>,
    /// Player 2 operator set for `mw`.
    #[arg(long)]
    ops2: Option<String>,
}

#[derive(Args, Debug)]
struct QuantizeArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    #[arg(long)]
    game: PathBuf,
    #[arg(long)]
    state: PathBuf,
    /// Closed-form evaluation only.
    #[arg(long, conflicts_with_all = ["trace", "both"])]
    oracle: bool,
    /// Density-operator evaluation only (default).
    #[arg(long, conflicts_with = "both")]
    trace: bool,
    /// Both paths, plus their largest entrywise discrepancy.
    #[arg(long)]
    both: bool,
    /// Ordering of permutation strategies.
    #[arg(long, value_enum, default_value = "lex")]
    column_order: ColumnOrder,
}

#[derive(Args, Debug)]
struct InvarianceArgs {
    #[arg(long, value_enum, required_unless_present = "replay")]
    scheme: Option<SchemeName>,
    #[arg(long)]
    ops1: Option<String>,
    #[arg(long)]
    ops2: Option<String>,
    #[arg(long, requires_all = ["g2", "state"])]
    g1: Option<PathBuf>,
    #[arg(long)]
    g2: Option<PathBuf>,
    #[arg(long)]
    state: Option<PathBuf>,
    /// Run seeded random relabelling trials instead of a fixed pair.
    #[arg(long, conflicts_with_all = ["g1", "replay"])]
    random: bool,
    #[arg(long, default_value = "2x2")]
    shape: String,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Replay a certificate written by a random run.
    #[arg(long, conflicts_with = "g1")]
    replay: Option<PathBuf>,
    /// Exit with status 1 when the verdict is VIOLATES.
    #[arg(long)]
    strict: bool,
}

#[derive(Debug)]
struct CliError(String);

impl<E: std::fmt::Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

type CliResult = Result<i32, CliError>;

/// Parses `args` (including the program name) and executes the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    if let Some(n) = cli.threads {
        // Ignored if a global pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let result = match &cli.command {
        Command::Nash { game } => cmd_nash(game, cli.format, out),
        Command::Iso { g1, g2, all, strict } => cmd_iso(g1, g2, *all, *strict, cli.format, out),
        Command::Quantize(args) => cmd_quantize(args, cli.format, out),
        Command::Invariance(args) => cmd_invariance(args, cli.format, out),
        Command::Demo { out: dir } => cmd_demo(dir, out),
    };
    match result {
        Ok(code) => code,
        Err(CliError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn load_json<T: DeserializeOwned>(path: &Path, what: &str) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError(format!("{what} {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError(format!("{what} {}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

fn cmd_nash(path: &Path, format: Option<Format>, out: &mut dyn Write) -> CliResult {
    let g: BimatrixGame = load_json(path, "game")?;
    let ne: Vec<(String, String)> = find_pure_nash(&g)
        .into_iter()
        .map(|p| (g.row_labels()[p.row].clone(), g.col_labels()[p.col].clone()))
        .collect();
    if format == Some(Format::Json) {
        writeln!(out, "{}", to_json(&ne))?;
    } else {
        for (r, c) in &ne {
            writeln!(out, "({r}, {c})")?;
        }
    }
    Ok(EXIT_OK)
}

fn describe_mapping(f: &GameMapping, g: &BimatrixGame, g2: &BimatrixGame) -> String {
    let (t1, t2) = match f.players {
        PlayerMap::Identity => (g2.row_labels(), g2.col_labels()),
        PlayerMap::Swap => (g2.col_labels(), g2.row_labels()),
    };
    let pairs = |src: &[String], dst: &[String], phi: &crate::permutation::Permutation| {
        src.iter()
            .enumerate()
            .map(|(i, s)| format!("{s}->{}", dst[phi.apply(i)]))
            .collect::<Vec<_>>()
            .join(", ")
    };
    format!(
        "{f}  [{}; {}]",
        pairs(g.row_labels(), t1, &f.phi1),
        pairs(g.col_labels(), t2, &f.phi2)
    )
}

fn cmd_iso(p1: &Path, p2: &Path, all: bool, strict: bool, format: Option<Format>, out: &mut dyn Write) -> CliResult {
    let g: BimatrixGame = load_json(p1, "game")?;
    let g2: BimatrixGame = load_json(p2, "game")?;
    let found: Vec<StrongIsomorphism> = if all {
        find_isomorphisms(&g, &g2)
    } else {
        first_isomorphism(&g, &g2).into_iter().collect()
    };
    if format == Some(Format::Json) {
        let mappings: Vec<&GameMapping> = found.iter().map(|f| f.mapping()).collect();
        writeln!(out, "{}", to_json(&mappings))?;
    } else if found.is_empty() {
        writeln!(out, "NOT ISOMORPHIC")?;
    } else {
        for f in &found {
            writeln!(out, "{}", describe_mapping(f.mapping(), &g, &g2))?;
        }
    }
    Ok(if strict && found.is_empty() { EXIT_VERDICT } else { EXIT_OK })
}

fn parse_kind(scheme: SchemeName, ops1: Option<&str>, ops2: Option<&str>) -> Result<SchemeKind, CliError> {
    match scheme {
        SchemeName::Mw => {
            let (Some(a), Some(b)) = (ops1, ops2) else {
                return Err(CliError("--scheme mw needs --ops1 and --ops2".into()));
            };
            Ok(SchemeKind::Mw {
                ops1: a.parse()?,
                ops2: b.parse()?,
            })
        }
        _ if ops1.is_some() || ops2.is_some() => Err(CliError("--ops1/--ops2 apply only to --scheme mw".into())),
        SchemeName::Refined => Ok(SchemeKind::Refined),
        SchemeName::Correlated => Ok(SchemeKind::Correlated),
        SchemeName::Perm => Ok(SchemeKind::Perm),
    }
}

fn check_state_fits(kind: &SchemeKind, g: &BimatrixGame, psi: &StateVector, game_path: &Path, state_path: &Path) -> Result<(), CliError> {
    if matches!(kind, SchemeKind::Refined | SchemeKind::Correlated) && g.shape() != (2, 2) {
        return Err(CliError(format!(
            "game {} is {}x{}, scheme {} needs a 2x2 game",
            game_path.display(),
            g.rows(),
            g.cols(),
            kind.name()
        )));
    }
    let want = kind.state_dims(g.shape());
    if psi.dims() != want {
        return Err(CliError(format!(
            "state {} has dims {:?}, scheme {} with game {} needs {:?}",
            state_path.display(),
            psi.dims(),
            kind.name(),
            game_path.display(),
            want
        )));
    }
    Ok(())
}

fn build_ops(spec: OperatorSetSpec, dim: usize, order: PermutationOrder) -> Result<OperatorSet, CliError> {
    let set = match spec {
        OperatorSetSpec::Perm => {
            if dim > crate::schemes::MAX_PERMUTATION_DIM {
                return Err(spec.build(dim).unwrap_err().into());
            }
            permutation_operators(dim, order)
        }
        OperatorSetSpec::Iqbal3 => iqbal_operators(),
        OperatorSetSpec::Cyclic(n) => cyclic_operators(n)?,
        OperatorSetSpec::IdentitySigma => OperatorSet::identity_sigma(),
    };
    if set.dim() != dim {
        return Err(CliError(format!(
            "operator set {spec} acts on dimension {}, but the game has {dim} strategies for that player",
            set.dim()
        )));
    }
    Ok(set)
}

#[derive(Serialize)]
struct QuantizeOutput {
    scheme: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<BimatrixGame>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<BimatrixGame>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_discrepancy: Option<f64>,
}

/// Output game of `kind` by the trace path and/or the closed form.
fn quantize_paths(
    kind: &SchemeKind,
    g: &BimatrixGame,
    psi: &StateVector,
    order: PermutationOrder,
    want_trace: bool,
    want_oracle: bool,
) -> Result<(Option<BimatrixGame>, Option<BimatrixGame>), CliError> {
    let (trace, oracle) = match kind {
        SchemeKind::Refined => (
            want_trace
                .then(|| RefinedScheme::new(g.clone(), psi.clone()).and_then(|s| s.payoff_matrix()))
                .transpose()?,
            want_oracle.then(|| refined_matrix_oracle(g, psi)).transpose()?,
        ),
        SchemeKind::Correlated => (
            want_trace
                .then(|| CorrelatedScheme::new(g.clone(), psi.clone()).and_then(|s| s.payoff_matrix()))
                .transpose()?,
            want_oracle.then(|| correlated_matrix_oracle(g, psi)).transpose()?,
        ),
        SchemeKind::Mw { .. } | SchemeKind::Perm => {
            let (s1, s2) = match kind {
                SchemeKind::Mw { ops1, ops2 } => (*ops1, *ops2),
                _ => (OperatorSetSpec::Perm, OperatorSetSpec::Perm),
            };
            let ops1 = build_ops(s1, g.rows(), order)?;
            let ops2 = build_ops(s2, g.cols(), order)?;
            (
                want_trace.then(|| mw_payoff_matrix(g, psi, &ops1, &ops2)).transpose()?,
                want_oracle.then(|| mw_permutation_oracle(g, psi, &ops1, &ops2)).transpose()?,
            )
        }
    };
    Ok((trace, oracle))
}

fn cmd_quantize(args: &QuantizeArgs, format: Option<Format>, out: &mut dyn Write) -> CliResult {
    let kind = parse_kind(args.scheme.scheme, args.scheme.ops1.as_deref(), args.scheme.ops2.as_deref())?;
    let g: BimatrixGame = load_json(&args.game, "game")?;
    let psi: StateVector = load_json(&args.state, "state")?;
    check_state_fits(&kind, &g, &psi, &args.game, &args.state)?;
    let want_oracle = args.oracle || args.both;
    let want_trace = !args.oracle || args.both;
    let (trace, oracle) = quantize_paths(&kind, &g, &psi, args.column_order.into(), want_trace, want_oracle)?;
    let max_discrepancy = match (&trace, &oracle) {
        (Some(t), Some(o)) => Some(t.max_payoff_diff(o)),
        _ => None,
    };
    let report = QuantizeOutput {
        scheme: kind.name(),
        trace,
        oracle,
        max_discrepancy,
    };
    if format != Some(Format::Table) {
        writeln!(out, "{}", to_json(&report))?;
    }
    if format != Some(Format::Json) {
        for (name, game) in [("trace", &report.trace), ("oracle", &report.oracle)] {
            if let Some(game) = game {
                writeln!(out, "{} output ({name} path):", report.scheme)?;
                write!(out, "{}", render_table(game))?;
            }
        }
        if let Some(d) = max_discrepancy {
            writeln!(out, "max |oracle - trace| = {d:.3e}")?;
        }
    }
    Ok(EXIT_OK)
}

fn parse_shape(s: &str) -> Result<(usize, usize), CliError> {
    let parsed = s
        .split_once(['x', 'X'])
        .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)));
    match parsed {
        Some((n, m)) if n > 0 && m > 0 => Ok((n, m)),
        _ => Err(CliError(format!("bad shape {s:?}, expected e.g. 2x3"))),
    }
}

fn verdict_line(r: &InvarianceReport) -> String {
    let yes = |b: bool| if b { "yes" } else { "no" };
    format!(
        "verdict: {} (inputs isomorphic: {}, outputs isomorphic: {}, output pure equilibria: {}/{})",
        serde_json::to_value(r.verdict).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
        yes(r.inputs_isomorphic),
        yes(r.outputs_isomorphic),
        r.output_equilibria[0],
        r.output_equilibria[1]
    )
}

fn cmd_invariance(args: &InvarianceArgs, format: Option<Format>, out: &mut dyn Write) -> CliResult {
    if args.random {
        let kind = parse_kind(
            args.scheme.expect("clap requires --scheme"),
            args.ops1.as_deref(),
            args.ops2.as_deref(),
        )?;
        let shape = parse_shape(&args.shape)?;
        if matches!(kind, SchemeKind::Refined | SchemeKind::Correlated) && shape != (2, 2) {
            return Err(CliError(format!("scheme {} needs --shape 2x2", kind.name())));
        }
        // Surface operator-set dimension errors before spawning trials.
        if let SchemeKind::Mw { ops1, ops2 } = kind {
            ops1.build(shape.0)?;
            ops2.build(shape.1)?;
        }
        let summary = randomized_invariance_trial(kind, shape, args.trials, args.seed)?;
        if format != Some(Format::Table) {
            writeln!(out, "{}", to_json(&summary))?;
        }
        if format != Some(Format::Json) {
            writeln!(
                out,
                "{}: {} trials, {} preserved, {} violations, {} undecided, induced mapping failed {}/{}",
                kind.name(),
                summary.trials,
                summary.preserved,
                summary.violations,
                summary.undecided,
                summary.constructive_failures,
                summary.constructive_checked
            )?;
        }
        let code = if args.strict && summary.violations > 0 { EXIT_VERDICT } else { EXIT_OK };
        return Ok(code);
    }

    let (scheme, g, g2) = if let Some(path) = &args.replay {
        let cert: Certificate = load_json(path, "certificate")?;
        (cert.scheme, cert.game, cert.game2)
    } else {
        let (Some(p1), Some(p2), Some(ps)) = (&args.g1, &args.g2, &args.state) else {
            return Err(CliError("invariance needs --g1, --g2 and --state, --random, or --replay".into()));
        };
        let kind = parse_kind(
            args.scheme.expect("clap requires --scheme"),
            args.ops1.as_deref(),
            args.ops2.as_deref(),
        )?;
        let g: BimatrixGame = load_json(p1, "game")?;
        let g2: BimatrixGame = load_json(p2, "game")?;
        let psi: StateVector = load_json(ps, "state")?;
        check_state_fits(&kind, &g, &psi, p1, ps)?;
        check_state_fits(&kind, &g2, &psi, p2, ps)?;
        (SchemeConfig::new(kind, psi), g, g2)
    };
    let report = check_scheme_invariance(&scheme, &g, &g2)?;
    if format != Some(Format::Table) {
        writeln!(out, "{}", to_json(&report))?;
    } else {
        writeln!(out, "{} output for game 1:", scheme.kind.name())?;
        write!(out, "{}", render_table(&report.outputs[0]))?;
        writeln!(out, "{} output for game 2:", scheme.kind.name())?;
        write!(out, "{}", render_table(&report.outputs[1]))?;
    }
    if format != Some(Format::Json) {
        writeln!(out, "{}", verdict_line(&report))?;
    }
    Ok(if args.strict && report.verdict == Verdict::Violates {
        EXIT_VERDICT
    } else {
        EXIT_OK
    })
}

fn write_file(dir: &Path, name: &str, contents: &str, written: &mut Vec<PathBuf>) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError(format!("cannot write {}: {e}", path.display())))?;
    written.push(path);
    Ok(())
}

fn equilibria_text(g: &BimatrixGame) -> String {
    let ne: Vec<String> = find_pure_nash(g)
        .into_iter()
        .map(|p| format!("({}, {})", g.row_labels()[p.row], g.col_labels()[p.col]))
        .collect();
    if ne.is_empty() {
        "none".into()
    } else {
        ne.join(", ")
    }
}

/// Writes `name.json` and `name.txt` for an output game and appends a summary block.
fn emit_game(
    dir: &Path,
    name: &str,
    title: &str,
    g: &BimatrixGame,
    summary: &mut String,
    written: &mut Vec<PathBuf>,
) -> Result<(), CliError> {
    write_file(dir, &format!("{name}.json"), &(to_json(g) + "\n"), written)?;
    let table = render_table(g);
    write_file(dir, &format!("{name}.txt"), &table, written)?;
    let _ = writeln!(summary, "{title}\n{table}pure Nash equilibria: {}\n", equilibria_text(g));
    Ok(())
}

fn emit_invariance(
    dir: &Path,
    name: &str,
    scheme: &SchemeConfig,
    g: &BimatrixGame,
    g2: &BimatrixGame,
    summary: &mut String,
    written: &mut Vec<PathBuf>,
) -> Result<InvarianceReport, CliError> {
    let report = check_scheme_invariance(scheme, g, g2)?;
    write_file(dir, &format!("{name}.json"), &(to_json(&report) + "\n"), written)?;
    let _ = writeln!(summary, "{}: {}", scheme.kind.name(), verdict_line(&report));
    if let Some(f) = report.output_isomorphisms.first() {
        let _ = writeln!(
            summary,
            "  first output isomorphism: {}",
            describe_mapping(f, &report.outputs[0], &report.outputs[1])
        );
    }
    let _ = writeln!(summary);
    Ok(report)
}

fn cmd_demo(dir: &Path, out: &mut dyn Write) -> CliResult {
    let mut written = Vec::new();

    let ex1 = dir.join("example1");
    fs::create_dir_all(&ex1).map_err(|e| CliError(format!("cannot create {}: {e}", ex1.display())))?;
    let (g1, g2, psi) = (catalog::chicken(), catalog::chicken_relabelled(), catalog::three_term_state());
    let mut summary = String::new();
    write_file(&ex1, "game1.json", &(to_json(&g1) + "\n"), &mut written)?;
    write_file(&ex1, "game2.json", &(to_json(&g2) + "\n"), &mut written)?;
    write_file(&ex1, "state.json", &(to_json(&psi) + "\n"), &mut written)?;
    let _ = writeln!(summary, "Chicken and its column-relabelled copy, state (|00>+|01>+|10>)/sqrt3\n");
    let _ = writeln!(summary, "input isomorphisms:");
    for f in find_isomorphisms(&g1, &g2) {
        let _ = writeln!(summary, "  {}", describe_mapping(f.mapping(), &g1, &g2));
    }
    let _ = writeln!(summary);
    let refined = SchemeConfig::new(SchemeKind::Refined, psi.clone());
    let correlated = SchemeConfig::new(SchemeKind::Correlated, psi.clone());
    emit_game(&ex1, "refined_q1", "refined scheme, game 1", &refined.quantize(&g1)?, &mut summary, &mut written)?;
    emit_game(&ex1, "refined_q2", "refined scheme, game 2", &refined.quantize(&g2)?, &mut summary, &mut written)?;
    emit_game(&ex1, "correlated_q1", "correlated scheme, game 1", &correlated.quantize(&g1)?, &mut summary, &mut written)?;
    emit_game(&ex1, "correlated_q2", "correlated scheme, game 2", &correlated.quantize(&g2)?, &mut summary, &mut written)?;
    emit_invariance(&ex1, "refined_invariance", &refined, &g1, &g2, &mut summary, &mut written)?;
    emit_invariance(&ex1, "correlated_invariance", &correlated, &g1, &g2, &mut summary, &mut written)?;
    write_file(&ex1, "summary.txt", &summary, &mut written)?;

    let ex2 = dir.join("example2");
    fs::create_dir_all(&ex2).map_err(|e| CliError(format!("cannot create {}: {e}", ex2.display())))?;
    let (h1, h2, psi2) = (catalog::two_by_three(), catalog::two_by_three_relabelled(), catalog::qubit_qutrit_state());
    let mut summary = String::new();
    write_file(&ex2, "game1.json", &(to_json(&h1) + "\n"), &mut written)?;
    write_file(&ex2, "game2.json", &(to_json(&h2) + "\n"), &mut written)?;
    write_file(&ex2, "state.json", &(to_json(&psi2) + "\n"), &mut written)?;
    let _ = writeln!(summary, "2x3 games differing in the order of the first two columns, state (1/2)|00> + (sqrt3/2)|12>\n");
    let schemes = [
        ("iqbal", SchemeKind::Mw { ops1: OperatorSetSpec::IdentitySigma, ops2: OperatorSetSpec::Iqbal3 }),
        ("cyclic", SchemeKind::Mw { ops1: OperatorSetSpec::IdentitySigma, ops2: OperatorSetSpec::Cyclic(3) }),
    ];
    for (name, kind) in schemes {
        let cfg = SchemeConfig::new(kind, psi2.clone());
        emit_game(&ex2, &format!("{name}_q1"), &format!("{}, game 1", kind.name()), &cfg.quantize(&h1)?, &mut summary, &mut written)?;
        emit_game(&ex2, &format!("{name}_q2"), &format!("{}, game 2", kind.name()), &cfg.quantize(&h2)?, &mut summary, &mut written)?;
        emit_invariance(&ex2, &format!("{name}_invariance"), &cfg, &h1, &h2, &mut summary, &mut written)?;
    }
    for (name, g) in [("perm_q1", &h1), ("perm_q2", &h2)] {
        let (trace, _) = quantize_paths(&SchemeKind::Perm, g, &psi2, PermutationOrder::LargestFirst, true, false)?;
        let trace = trace.expect("trace path requested");
        emit_game(&ex2, name, &format!("permutation scheme ({name}), grouped column order"), &trace, &mut summary, &mut written)?;
    }
    let perm = SchemeConfig::new(SchemeKind::Perm, psi2.clone());
    emit_invariance(&ex2, "perm_invariance", &perm, &h1, &h2, &mut summary, &mut written)?;
    write_file(&ex2, "summary.txt", &summary, &mut written)?;

    let ce = dir.join("counterexample");
    fs::create_dir_all(&ce).map_err(|e| CliError(format!("cannot create {}: {e}", ce.display())))?;
    let (k1, k2, bell) = (catalog::battle_game(), catalog::coordination_game(), catalog::bell_state());
    let mut summary = String::new();
    write_file(&ce, "game1.json", &(to_json(&k1) + "\n"), &mut written)?;
    write_file(&ce, "game2.json", &(to_json(&k2) + "\n"), &mut written)?;
    write_file(&ce, "state.json", &(to_json(&bell) + "\n"), &mut written)?;
    let _ = writeln!(summary, "Two non-isomorphic 2x2 games, state (|00>+|11>)/sqrt2\n");
    let mw = SchemeConfig::new(
        SchemeKind::Mw { ops1: OperatorSetSpec::IdentitySigma, ops2: OperatorSetSpec::IdentitySigma },
        bell,
    );
    let q1 = mw.quantize(&k1)?;
    let q2 = mw.quantize(&k2)?;
    emit_game(&ce, "mw_q1", "MW output, game 1", &q1, &mut summary, &mut written)?;
    emit_game(&ce, "mw_q2", "MW output, game 2", &q2, &mut summary, &mut written)?;
    let _ = writeln!(summary, "max entrywise difference between outputs: {:.3e}", q1.max_payoff_diff(&q2));
    let _ = writeln!(
        summary,
        "note: direct evaluation gives (2, 2) on the diagonal for both games; the outputs coincide, the inputs are not isomorphic\n"
    );
    emit_invariance(&ce, "mw_invariance", &mw, &k1, &k2, &mut summary, &mut written)?;
    write_file(&ce, "summary.txt", &summary, &mut written)?;

    for p in &written {
        writeln!(out, "wrote {}", p.display())?;
    }
    Ok(EXIT_OK)
}
