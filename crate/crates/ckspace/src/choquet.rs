//! The (strong) Choquet game on basic open sets, with NE answering every
//! move by adopting E's certified box.
//!
//! NE's boxes form a certified chain, the chain becomes a scheme tree one
//! level per round, and the tree's injection is the running witness.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::compact_open::{self, BasicBox, BoxError, Emptiness, RefinementCert, SubbasicBox};
use crate::maps::{LazyInjection, ProgressionMap};
use crate::pofin::PeriodicSet;
use crate::schemes::{ChainLink, SchemeError, SchemeTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Plain,
    Strong,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plain" => Ok(Mode::Plain),
            "strong" => Ok(Mode::Strong),
            other => Err(format!("unknown mode '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Turn {
    E,
    NE,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ongoing,
    Abandoned,
}

/// Why an E move was rejected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum IllegalMove {
    #[error("the refined box is empty: {constraint}")]
    Empty { constraint: Box<SubbasicBox> },
    #[error("the point is not in the refined box: it fails {constraint}")]
    NotMember { constraint: Box<SubbasicBox> },
    #[error("strong mode needs a point")]
    MissingPoint,
    #[error("points are only played in strong mode")]
    UnexpectedPoint,
    #[error("{detail}")]
    Malformed { detail: String },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GameError {
    #[error("it is {expected:?}'s turn")]
    WrongTurn { expected: Turn },
    #[error("the game was abandoned")]
    Abandoned,
    #[error("illegal move: {0}")]
    Illegal(IllegalMove),
    #[error("only {rounds} rounds are complete, cannot give φ(0..={k})")]
    PrefixTooLong { k: usize, rounds: usize },
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

/// One entry of the move history.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "player")]
pub enum Played {
    E {
        extra: Vec<SubbasicBox>,
        #[serde(rename = "box")]
        bx: BasicBox,
        cert: RefinementCert,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        point: Option<ProgressionMap>,
    },
    NE {
        #[serde(rename = "box")]
        bx: BasicBox,
    },
}

/// A line of a move log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum LogEntry {
    New {
        mode: Mode,
    },
    E {
        #[serde(default)]
        extra: Vec<SubbasicBox>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        point: Option<ProgressionMap>,
    },
    NE,
    Abandon,
}

/// A legal shrink E may pick.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Suggestion {
    pub label: String,
    pub extra: Vec<SubbasicBox>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<ProgressionMap>,
}

#[derive(Debug, Clone)]
pub struct GameState {
    mode: Mode,
    history: Vec<Played>,
    chain: Vec<ChainLink>,
    witness: LazyInjection,
    turn: Turn,
    status: Status,
    pending: Option<(BasicBox, RefinementCert, Option<ProgressionMap>)>,
}

#[derive(Serialize)]
struct StateView<'a> {
    mode: Mode,
    turn: Turn,
    status: Status,
    rounds: usize,
    chain: &'a [ChainLink],
    history: &'a [Played],
    tree: &'a SchemeTree,
    witness: &'a [u64],
}

impl GameState {
    pub fn new(mode: Mode) -> Self {
        let root = SchemeTree::root(PeriodicSet::omega(), PeriodicSet::omega());
        let mut witness = LazyInjection::new(root);
        witness.finalized();
        GameState {
            mode,
            history: Vec::new(),
            chain: vec![ChainLink {
                bx: BasicBox::full(),
                cert: None,
            }],
            witness,
            turn: Turn::E,
            status: Status::Ongoing,
            pending: None,
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn turn(&self) -> Turn {
        self.turn
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn history(&self) -> &[Played] {
        &self.history
    }

    /// NE's boxes, starting from the full box.
    pub fn chain(&self) -> &[ChainLink] {
        &self.chain
    }

    pub fn current_box(&self) -> &BasicBox {
        &self.chain.last().expect("chain starts non-empty").bx
    }

    pub fn tree(&self) -> &SchemeTree {
        self.witness.tree()
    }

    pub fn witness(&self) -> &LazyInjection {
        &self.witness
    }

    /// Completed rounds, which is also the tree height.
    pub fn rounds(&self) -> usize {
        self.chain.len() - 1
    }

    fn ready(&self, turn: Turn) -> Result<(), GameError> {
        if self.status == Status::Abandoned {
            return Err(GameError::Abandoned);
        }
        if self.turn != turn {
            return Err(GameError::WrongTurn {
                expected: self.turn,
            });
        }
        Ok(())
    }

    /// E shrinks NE's last box by `extra`. Rejected moves leave the state
    /// as it was.
    pub fn move_e(
        &mut self,
        extra: Vec<SubbasicBox>,
        point: Option<ProgressionMap>,
    ) -> Result<(), GameError> {
        self.ready(Turn::E)?;
        let (bx, cert) = check_move(self.mode, self.current_box(), &extra, point.as_ref())
            .map_err(GameError::Illegal)?;
        self.history.push(Played::E {
            extra,
            bx: bx.clone(),
            cert: cert.clone(),
            point: point.clone(),
        });
        self.pending = Some((bx, cert, point));
        self.turn = Turn::NE;
        Ok(())
    }

    /// NE's reply: E's own box.
    pub fn move_ne(&mut self) -> Result<(), GameError> {
        self.ready(Turn::NE)?;
        let (bx, cert, _) = self.pending.clone().expect("E has moved");
        self.witness.append_level(&bx, &cert)?;
        self.witness.finalized();
        self.pending = None;
        self.history.push(Played::NE { bx: bx.clone() });
        self.chain.push(ChainLink {
            bx,
            cert: Some(cert),
        });
        self.turn = Turn::E;
        Ok(())
    }

    /// `φ(0..=k)`, all final.
    pub fn witness_prefix(&mut self, k: usize) -> Result<Vec<u64>, GameError> {
        if k > self.rounds() {
            return Err(GameError::PrefixTooLong {
                k,
                rounds: self.rounds(),
            });
        }
        Ok(self.witness.prefix(k + 1).to_vec())
    }

    pub fn abandon(&mut self) {
        self.status = Status::Abandoned;
    }

    /// Splits of each source set and shrinks of each target by one residue
    /// class, all legal from the current box. In strong mode each comes with
    /// a point of the shrunk box.
    pub fn suggestions(&self) -> Vec<Suggestion> {
        let current = self.current_box();
        let mut out = Vec::new();
        for (i, c) in current.constraints().iter().enumerate() {
            if let Some(r) = half_class(&c.a) {
                out.push((
                    format!("split source {i} ({}) by {r}", c.a),
                    SubbasicBox::new(c.a.intersection(&r), c.b.clone()),
                ));
            }
            if let Some(r) = half_class(&c.b) {
                out.push((
                    format!("shrink target {i} ({}) to {}", c.b, c.b.intersection(&r)),
                    SubbasicBox::new(c.a.clone(), c.b.intersection(&r)),
                ));
            }
        }
        out.into_iter()
            .filter_map(|(label, extra)| {
                let extra = vec![extra];
                let (bx, _) = compact_open::refine(current, &extra).ok()?;
                let point = match self.mode {
                    Mode::Plain => None,
                    Mode::Strong => Some(inhabitant(&bx)?),
                };
                Some(Suggestion {
                    label,
                    extra,
                    point,
                })
            })
            .collect()
    }

    /// Applies one log entry; `New` is only valid as the first line.
    pub fn apply(&mut self, entry: &LogEntry) -> Result<(), GameError> {
        match entry {
            LogEntry::New { .. } => Err(GameError::Illegal(IllegalMove::Malformed {
                detail: "a log has exactly one 'new' line, first".into(),
            })),
            LogEntry::E { extra, point } => self.move_e(extra.clone(), point.clone()),
            LogEntry::NE => self.move_ne(),
            LogEntry::Abandon => {
                self.abandon();
                Ok(())
            }
        }
    }

    /// Rebuilds a game from its log.
    pub fn replay(entries: &[LogEntry]) -> Result<GameState, ReplayError> {
        let mut game = match entries.first() {
            Some(LogEntry::New { mode }) => GameState::new(*mode),
            _ => {
                return Err(ReplayError {
                    line: 1,
                    error: GameError::Illegal(IllegalMove::Malformed {
                        detail: "log must start with a 'new' line".into(),
                    }),
                })
            }
        };
        for (i, entry) in entries.iter().enumerate().skip(1) {
            game.apply(entry)
                .map_err(|error| ReplayError { line: i + 1, error })?;
        }
        Ok(game)
    }

    /// Canonical state JSON. Only final witness values appear.
    pub fn state_json(&self) -> serde_json::Value {
        serde_json::to_value(self.view()).expect("state serializes")
    }

    pub fn state_string(&self) -> String {
        serde_json::to_string(&self.view()).expect("state serializes")
    }

    fn view(&self) -> StateView<'_> {
        let memo = self.witness.memo();
        StateView {
            mode: self.mode,
            turn: self.turn,
            status: self.status,
            rounds: self.rounds(),
            chain: &self.chain,
            history: &self.history,
            tree: self.witness.tree(),
            witness: &memo[..self.witness.finalized_len().min(memo.len())],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("log line {line}: {error}")]
pub struct ReplayError {
    pub line: usize,
    pub error: GameError,
}

/// Parses a JSON-lines move log, skipping blank lines.
pub fn parse_log(text: &str) -> Result<Vec<LogEntry>, (usize, serde_json::Error)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| (i + 1, e)))
        .collect()
}

pub fn log_line(entry: &LogEntry) -> String {
    serde_json::to_string(entry).expect("log entries serialize")
}

/// The certified refinement E's move produces, or why it is illegal.
pub fn check_move(
    mode: Mode,
    current: &BasicBox,
    extra: &[SubbasicBox],
    point: Option<&ProgressionMap>,
) -> Result<(BasicBox, RefinementCert), IllegalMove> {
    match (mode, point) {
        (Mode::Strong, None) => return Err(IllegalMove::MissingPoint),
        (Mode::Plain, Some(_)) => return Err(IllegalMove::UnexpectedPoint),
        _ => {}
    }
    let (bx, cert) = compact_open::refine(current, extra).map_err(|e| match e {
        BoxError::Empty { constraint } => IllegalMove::Empty { constraint },
        other => IllegalMove::Malformed {
            detail: other.to_string(),
        },
    })?;
    if let Some(f) = point {
        if let Some(c) = bx.constraints().iter().find(|c| !c.contains(f)) {
            return Err(IllegalMove::NotMember {
                constraint: Box::new(c.clone()),
            });
        }
    }
    Ok((bx, cert))
}

/// A member of a non-empty normal box.
pub fn inhabitant(bx: &BasicBox) -> Option<ProgressionMap> {
    match compact_open::is_empty(bx).ok()? {
        Emptiness::Inhabited { witness } => Some(witness),
        Emptiness::Empty { .. } => None,
    }
}

/// A residue class cutting an infinite set into two infinite halves.
fn half_class(set: &PeriodicSet) -> Option<PeriodicSet> {
    if set.is_finite() {
        return None;
    }
    let m = set.modulus();
    let r = set.residues()[0];
    PeriodicSet::residue_class(r, 2 * m).ok()
}

impl fmt::Display for GameState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:?} game, round {}, {:?} to move{}",
            self.mode,
            self.rounds(),
            self.turn,
            if self.status == Status::Abandoned {
                " (abandoned)"
            } else {
                ""
            }
        )?;
        writeln!(f, "box: {}", self.current_box())?;
        let memo = self.witness.memo();
        let done = &memo[..self.witness.finalized_len().min(memo.len())];
        write!(f, "witness: {done:?}")
    }
}
