//! The `ckspace` command line. Exit codes: 0 success, 1 rejected by the
//! mathematics, 2 malformed arguments or input.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::api::{self, ApiError, ErrorKind, Op};
use crate::choquet::{self, GameState, LogEntry, Mode};

#[derive(Parser, Debug)]
#[command(
    name = "ckspace",
    version,
    about = "Compute with clopen sets of ω*, compact-open boxes, scheme injections and Choquet games"
)]
pub struct Cli {
    /// Print canonical JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Eventually periodic sets modulo finite sets.
    #[command(subcommand)]
    Pofin(PofinCmd),
    /// Progression maps.
    #[command(subcommand)]
    Map(MapCmd),
    /// Compact-open boxes.
    #[command(subcommand)]
    Box(BoxCmd),
    /// Scheme trees and their injections. FILE may be `-` for stdin.
    #[command(subcommand)]
    Scheme(SchemeCmd),
    /// Choquet games kept as JSON-lines move logs.
    #[command(subcommand)]
    Game(GameCmd),
    /// Counterexample reports.
    #[command(subcommand)]
    Fspace(FspaceCmd),
    /// Run the HTTP session service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Append each session's move log to DIR/<id>.jsonl.
        #[arg(long)]
        log_dir: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum PofinCmd {
    /// Canonical JSON of a set expression.
    Eval { expr: String },
    /// Canonical expression text.
    Canon { expr: String },
    /// Relations between two sets modulo finite.
    Rel { a: String, b: String },
}

#[derive(Subcommand, Debug)]
pub enum MapCmd {
    Apply {
        map: String,
        n: u64,
    },
    Image {
        map: String,
        set: String,
    },
    /// OUTER ∘ INNER.
    Compose {
        outer: String,
        inner: String,
    },
    Classify {
        map: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum BoxCmd {
    Normal {
        r#box: String,
    },
    /// Normalizes, then decides emptiness.
    Empty {
        r#box: String,
    },
    Member {
        map: String,
        r#box: String,
    },
    /// Normalizes OUTER, then intersects with EXTRA and certifies.
    Refine {
        outer: String,
        extra: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum SchemeCmd {
    /// FILE holds a tree or a certified chain.
    Validate {
        file: String,
    },
    Repair {
        file: String,
    },
    Build {
        file: String,
        /// Prefix length; defaults to the finalized values.
        #[arg(long)]
        len: Option<usize>,
    },
    Verify {
        file: String,
        /// Defaults to $CKSPACE_HORIZON, else 512.
        #[arg(long)]
        horizon: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum GameCmd {
    /// Start a log.
    New {
        #[arg(long)]
        log: PathBuf,
        #[arg(long, default_value = "plain")]
        mode: Mode,
    },
    /// Play E's move and NE's reply, appending both to the log.
    Move {
        #[arg(long)]
        log: PathBuf,
        /// Extra constraints; empty stalls.
        #[arg(long, default_value = "")]
        extra: String,
        /// E's point (strong mode).
        #[arg(long)]
        point: Option<String>,
    },
    /// Replay a log and print the final state and witness.
    Play {
        #[arg(long)]
        script: PathBuf,
    },
    /// φ(0..=k) of a logged game; k defaults to the completed rounds.
    Witness {
        #[arg(long)]
        log: PathBuf,
        #[arg(short, long)]
        k: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum FspaceCmd {
    /// Disjointness, the identity, and one witness per neighbourhood level.
    Demo {
        #[arg(long, default_value_t = 16)]
        disjoint_bound: usize,
        #[arg(long, default_value_t = 16)]
        member_bound: usize,
        #[arg(long, default_value_t = 32)]
        witness_bound: usize,
        #[arg(long, default_value_t = 8)]
        levels: usize,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl From<ApiError> for Failure {
    fn from(e: ApiError) -> Self {
        Failure {
            code: match e.kind {
                ErrorKind::Usage => 2,
                ErrorKind::Domain => 1,
            },
            message: e.message,
        }
    }
}

fn usage(message: impl ToString) -> Failure {
    Failure {
        code: 2,
        message: message.to_string(),
    }
}

fn domain(message: impl ToString) -> Failure {
    Failure {
        code: 1,
        message: message.to_string(),
    }
}

/// Parses `argv` (program name first), runs, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn emit(out: &mut dyn Write, as_json: bool, json: &Value, text: &str) -> Result<(), Failure> {
    let line = if as_json {
        serde_json::to_string(json).expect("json")
    } else {
        text.to_string()
    };
    writeln!(out, "{line}").map_err(domain)
}

fn op(value: Value) -> Result<Op, Failure> {
    serde_json::from_value(value).map_err(usage)
}

fn read_json(file: &str) -> Result<Value, Failure> {
    let text = if file == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(usage)?
    } else {
        std::fs::read_to_string(file).map_err(|e| usage(format!("{file}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| usage(format!("{file}: {e}")))
}

fn read_log(path: &Path) -> Result<Vec<LogEntry>, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    choquet::parse_log(&text).map_err(|(line, e)| usage(format!("{}:{line}: {e}", path.display())))
}

fn replay(path: &Path) -> Result<GameState, Failure> {
    GameState::replay(&read_log(path)?).map_err(domain)
}

fn append_log(path: &Path, entries: &[LogEntry]) -> Result<(), Failure> {
    let mut file = std::fs::OpenOptions::new()
        .append(true)
        .open(path)
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    for e in entries {
        writeln!(file, "{}", choquet::log_line(e)).map_err(domain)?;
    }
    Ok(())
}

/// The JSON form of a stateless subcommand, as `/op` would receive it.
pub fn to_op(command: &Command) -> Option<Result<Value, String>> {
    let read = |file: &str| read_json(file).map_err(|f| f.message);
    let v = match command {
        Command::Pofin(PofinCmd::Eval { expr }) => json!({"op": "pofin_eval", "set": expr}),
        Command::Pofin(PofinCmd::Canon { expr }) => json!({"op": "pofin_canon", "set": expr}),
        Command::Pofin(PofinCmd::Rel { a, b }) => json!({"op": "pofin_rel", "a": a, "b": b}),
        Command::Map(MapCmd::Apply { map, n }) => json!({"op": "map_apply", "map": map, "n": n}),
        Command::Map(MapCmd::Image { map, set }) => {
            json!({"op": "map_image", "map": map, "set": set})
        }
        Command::Map(MapCmd::Compose { outer, inner }) => {
            json!({"op": "map_compose", "outer": outer, "inner": inner})
        }
        Command::Map(MapCmd::Classify { map }) => json!({"op": "map_classify", "map": map}),
        Command::Box(BoxCmd::Normal { r#box }) => {
            json!({"op": "box_normal", "constraints": r#box})
        }
        Command::Box(BoxCmd::Empty { r#box }) => json!({"op": "box_empty", "constraints": r#box}),
        Command::Box(BoxCmd::Member { map, r#box }) => {
            json!({"op": "box_member", "map": map, "constraints": r#box})
        }
        Command::Box(BoxCmd::Refine { outer, extra }) => {
            json!({"op": "box_refine", "outer": outer, "extra": extra})
        }
        Command::Scheme(cmd) => {
            let (name, file) = match cmd {
                SchemeCmd::Validate { file } => ("scheme_validate", file),
                SchemeCmd::Repair { file } => ("scheme_repair", file),
                SchemeCmd::Build { file, .. } => ("scheme_build", file),
                SchemeCmd::Verify { file, .. } => ("scheme_verify", file),
            };
            let tree = match read(file) {
                Ok(t) => t,
                Err(e) => return Some(Err(e)),
            };
            let mut v = json!({"op": name, "tree": tree});
            match cmd {
                SchemeCmd::Build { len: Some(n), .. } => v["len"] = json!(n),
                SchemeCmd::Verify {
                    horizon: Some(h), ..
                } => v["horizon"] = json!(h),
                _ => {}
            }
            v
        }
        Command::Fspace(FspaceCmd::Demo {
            disjoint_bound,
            member_bound,
            witness_bound,
            levels,
        }) => json!({
            "op": "fspace_demo",
            "disjoint_bound": disjoint_bound,
            "member_bound": member_bound,
            "witness_bound": witness_bound,
            "levels": levels,
        }),
        Command::Game(_) | Command::Serve { .. } => return None,
    };
    Some(Ok(v))
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<(), Failure> {
    if let Some(v) = to_op(&cli.command) {
        let outcome = api::run(&op(v.map_err(usage)?)?)?;
        return emit(out, cli.json, &outcome.json, &outcome.text);
    }
    match &cli.command {
        Command::Game(cmd) => game(cmd, cli.json, out),
        Command::Serve { port, log_dir } => {
            let rt = tokio::runtime::Runtime::new().map_err(domain)?;
            rt.block_on(crate::service::serve(*port, log_dir.clone()))
                .map_err(domain)
        }
        _ => unreachable!("stateless commands handled above"),
    }
}

fn game(cmd: &GameCmd, as_json: bool, out: &mut dyn Write) -> Result<(), Failure> {
    match cmd {
        GameCmd::New { log, mode } => {
            let entry = LogEntry::New { mode: *mode };
            std::fs::write(log, choquet::log_line(&entry) + "\n")
                .map_err(|e| usage(format!("{}: {e}", log.display())))?;
            let g = GameState::new(*mode);
            emit(out, as_json, &g.state_json(), &g.to_string())
        }
        GameCmd::Move { log, extra, point } => {
            let mut g = replay(log)?;
            let extra = api::BoxInput::Text(extra.clone()).constraints()?;
            let point = point
                .as_deref()
                .map(str::parse)
                .transpose()
                .map_err(usage)?;
            let entries = api::play_round(&mut g, extra, point).map_err(domain)?;
            append_log(log, &entries)?;
            emit(out, as_json, &g.state_json(), &g.to_string())
        }
        GameCmd::Play { script } => {
            let mut g = replay(script)?;
            let prefix = g.witness_prefix(g.rounds()).map_err(domain)?;
            let v = json!({"state": g.state_json(), "witness": prefix});
            emit(out, as_json, &v, &g.to_string())
        }
        GameCmd::Witness { log, k } => {
            let mut g = replay(log)?;
            let k = k.unwrap_or(g.rounds());
            let prefix = g.witness_prefix(k).map_err(domain)?;
            emit(out, as_json, &json!(prefix), &format!("{prefix:?}"))
        }
    }
}
