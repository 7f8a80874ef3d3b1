//! Stateless operations as data, shared by the CLI and the HTTP service so
//! both run exactly the same code.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::choquet::{GameError, GameState, LogEntry};
use crate::compact_open::{self, normalize, BasicBox, BoxError, Emptiness, SubbasicBox};
use crate::maps::{MapError, ProgressionMap};
use crate::pofin::{PeriodicSet, PofinError};
use crate::schemes::{self, ChainLink, SchemeError, SchemeTree, DEFAULT_HORIZON};
use crate::witnesses::{self, WitnessError};

pub const HORIZON_ENV: &str = "CKSPACE_HORIZON";

/// `CKSPACE_HORIZON` if set to a number, else 512.
pub fn default_horizon() -> usize {
    std::env::var(HORIZON_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_HORIZON)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    /// Malformed input.
    Usage,
    /// Well-formed input the mathematics rejects.
    Domain,
}

#[derive(Debug, Clone, PartialEq, Serialize, thiserror::Error)]
#[error("{message}")]
pub struct ApiError {
    pub kind: ErrorKind,
    pub message: String,
}

impl ApiError {
    pub fn usage(message: impl Into<String>) -> Self {
        ApiError {
            kind: ErrorKind::Usage,
            message: message.into(),
        }
    }

    pub fn domain(message: impl ToString) -> Self {
        ApiError {
            kind: ErrorKind::Domain,
            message: message.to_string(),
        }
    }
}

impl From<PofinError> for ApiError {
    fn from(e: PofinError) -> Self {
        match e {
            PofinError::Syntax(_)
            | PofinError::ZeroModulus { .. }
            | PofinError::InvalidParts(_) => ApiError::usage(e.to_string()),
            PofinError::Exhausted => ApiError::domain(e),
        }
    }
}

impl From<MapError> for ApiError {
    fn from(e: MapError) -> Self {
        match e {
            MapError::Syntax(_) | MapError::Pofin(_) => ApiError::usage(e.to_string()),
            _ => ApiError::domain(e),
        }
    }
}

impl From<BoxError> for ApiError {
    fn from(e: BoxError) -> Self {
        match e {
            BoxError::Syntax(_) => ApiError::usage(e.to_string()),
            _ => ApiError::domain(e),
        }
    }
}

impl From<SchemeError> for ApiError {
    fn from(e: SchemeError) -> Self {
        match e {
            SchemeError::Malformed(_) => ApiError::usage(e.to_string()),
            _ => ApiError::domain(e),
        }
    }
}

impl From<WitnessError> for ApiError {
    fn from(e: WitnessError) -> Self {
        ApiError::domain(e)
    }
}

/// A box given as an expression or as a JSON list of constraints.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BoxInput {
    Text(String),
    List(Vec<SubbasicBox>),
}

impl BoxInput {
    pub fn constraints(&self) -> Result<Vec<SubbasicBox>, ApiError> {
        match self {
            BoxInput::Text(t) => Ok(compact_open::parse_constraints(t)?),
            BoxInput::List(l) => Ok(l.clone()),
        }
    }
}

/// A scheme tree, or a certified chain to turn into one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TreeInput {
    Tree(SchemeTree),
    Chain(Vec<ChainLink>),
}

impl TreeInput {
    pub fn tree(&self) -> Result<SchemeTree, ApiError> {
        match self {
            TreeInput::Tree(t) => Ok(t.clone()),
            TreeInput::Chain(c) => Ok(schemes::chain_to_tree(c)?),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Op {
    PofinEval {
        set: PeriodicSet,
    },
    PofinCanon {
        set: PeriodicSet,
    },
    PofinRel {
        a: PeriodicSet,
        b: PeriodicSet,
    },
    MapApply {
        map: ProgressionMap,
        n: u64,
    },
    MapImage {
        map: ProgressionMap,
        set: PeriodicSet,
    },
    MapCompose {
        outer: ProgressionMap,
        inner: ProgressionMap,
    },
    MapClassify {
        map: ProgressionMap,
    },
    BoxNormal {
        constraints: BoxInput,
    },
    BoxEmpty {
        constraints: BoxInput,
    },
    BoxMember {
        map: ProgressionMap,
        constraints: BoxInput,
    },
    BoxRefine {
        outer: BoxInput,
        extra: BoxInput,
    },
    SchemeValidate {
        tree: TreeInput,
    },
    SchemeRepair {
        tree: TreeInput,
    },
    SchemeBuild {
        tree: TreeInput,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        len: Option<usize>,
    },
    SchemeVerify {
        tree: TreeInput,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        horizon: Option<usize>,
    },
    FspaceDemo {
        #[serde(default = "sixteen")]
        disjoint_bound: usize,
        #[serde(default = "sixteen")]
        member_bound: usize,
        #[serde(default = "thirty_two")]
        witness_bound: usize,
        #[serde(default = "eight")]
        levels: usize,
    },
}

fn sixteen() -> usize {
    16
}

fn thirty_two() -> usize {
    32
}

fn eight() -> usize {
    8
}

/// An operation's result: canonical JSON plus a human rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub json: Value,
    pub text: String,
}

fn outcome<T: Serialize>(value: &T, text: impl Into<String>) -> Outcome {
    Outcome {
        json: serde_json::to_value(value).expect("results serialize"),
        text: text.into(),
    }
}

pub fn run(op: &Op) -> Result<Outcome, ApiError> {
    match op {
        Op::PofinEval { set } => Ok(outcome(set, set.to_string())),
        Op::PofinCanon { set } => Ok(Outcome {
            json: json!({ "canonical": set.to_string(), "set": set }),
            text: set.to_string(),
        }),
        Op::PofinRel { a, b } => {
            let rel = json!({
                "almost_subset": a.almost_subset(b),
                "almost_superset": b.almost_subset(a),
                "almost_equal": a.almost_equal(b),
                "almost_disjoint": a.almost_disjoint(b),
                "equal": a == b,
            });
            let text = format!(
                "⊆*: {}  ⊇*: {}  =*: {}  disjoint*: {}  equal: {}",
                rel["almost_subset"],
                rel["almost_superset"],
                rel["almost_equal"],
                rel["almost_disjoint"],
                rel["equal"]
            );
            Ok(Outcome { json: rel, text })
        }
        Op::MapApply { map, n } => {
            let v = map.apply(*n);
            Ok(outcome(&v, v.to_string()))
        }
        Op::MapImage { map, set } => {
            let img = map.image(set);
            Ok(outcome(&img, img.to_string()))
        }
        Op::MapCompose { outer, inner } => {
            let c = outer.compose(inner);
            Ok(outcome(&c, c.to_string()))
        }
        Op::MapClassify { map } => {
            let flags = map.classify();
            Ok(outcome(
                &flags,
                format!(
                    "injective: {}  finite-to-one: {}",
                    flags.injective, flags.finite_to_one
                ),
            ))
        }
        Op::BoxNormal { constraints } => {
            let n = normalize(&constraints.constraints()?);
            Ok(outcome(&n, n.to_string()))
        }
        Op::BoxEmpty { constraints } => {
            let n = normalize(&constraints.constraints()?);
            match compact_open::is_empty(&n)? {
                Emptiness::Empty { index } => Ok(Outcome {
                    json: json!({ "empty": true, "constraint": n.constraints()[index] }),
                    text: "empty".into(),
                }),
                Emptiness::Inhabited { witness } => Ok(Outcome {
                    text: format!("non-empty, contains {witness}"),
                    json: json!({ "empty": false, "witness": witness }),
                }),
            }
        }
        Op::BoxMember { map, constraints } => {
            let bx = BasicBox::from_constraints(constraints.constraints()?);
            let failing = bx.constraints().iter().find(|c| !c.contains(map));
            Ok(Outcome {
                json: match failing {
                    None => json!({ "member": true }),
                    Some(c) => json!({ "member": false, "fails": c }),
                },
                text: match failing {
                    None => "member".into(),
                    Some(c) => format!("not a member: fails {c}"),
                },
            })
        }
        Op::BoxRefine { outer, extra } => {
            let outer = normalize(&outer.constraints()?);
            let (bx, cert) = compact_open::refine(&outer, &extra.constraints()?)?;
            Ok(Outcome {
                text: format!(
                    "{bx}\ncertificate: {}",
                    serde_json::to_string(&cert).expect("json")
                ),
                json: json!({ "outer": outer, "box": bx, "cert": cert }),
            })
        }
        Op::SchemeValidate { tree } => {
            let report = schemes::validate(&tree.tree()?);
            Ok(Outcome {
                json: json!({ "valid": report.is_valid(), "violations": report }),
                text: report.to_string(),
            })
        }
        Op::SchemeRepair { tree } => {
            let fixed = schemes::repair(&tree.tree()?)?;
            Ok(outcome(
                &fixed,
                serde_json::to_string(&fixed).expect("json"),
            ))
        }
        Op::SchemeBuild { tree, len } => {
            let tree = tree.tree()?;
            let mut phi = schemes::build_injection(&tree)?;
            let finals = phi.finalized().to_vec();
            let prefix = phi.prefix(len.unwrap_or(finals.len())).to_vec();
            Ok(Outcome {
                text: format!("height {}: {prefix:?}", tree.height()),
                json: json!({ "height": tree.height(), "final": finals, "prefix": prefix }),
            })
        }
        Op::SchemeVerify { tree, horizon } => {
            let tree = tree.tree()?;
            let horizon = horizon.unwrap_or_else(default_horizon);
            let mut phi = schemes::build_injection(&tree)?;
            phi.prefix(horizon);
            let ok = schemes::verify_star(&tree, &phi, horizon)?;
            Ok(Outcome {
                json: json!({ "horizon": horizon, "holds": ok }),
                text: format!(
                    "{} at horizon {horizon}",
                    if ok { "holds" } else { "fails" }
                ),
            })
        }
        Op::FspaceDemo {
            disjoint_bound,
            member_bound,
            witness_bound,
            levels,
        } => {
            let report =
                witnesses::fspace_demo(*disjoint_bound, *member_bound, *witness_bound, *levels)?;
            let mut text = format!(
                "U_E ∩ U_O empty up to {}: {}\nid ∈ U_E / U_O up to {}: {} / {}\n",
                report.disjoint_bound,
                report.disjoint,
                report.member_bound,
                report.identity_even,
                report.identity_odd
            );
            for l in &report.levels {
                text.push_str(&format!(
                    "N={}: A_{} -> A_{}  nbhd {}  U_E {}  U_O {}\n",
                    l.level,
                    l.witness.source,
                    l.witness.target,
                    l.certificates.in_neighbourhood,
                    l.even_member,
                    l.odd_member
                ));
            }
            text.push_str(if report.ok() { "ok" } else { "FAILED" });
            Ok(outcome(&report, text))
        }
    }
}

/// E's move and NE's automatic reply, with the log lines they add.
pub fn play_round(
    game: &mut GameState,
    extra: Vec<SubbasicBox>,
    point: Option<ProgressionMap>,
) -> Result<Vec<LogEntry>, GameError> {
    game.move_e(extra.clone(), point.clone())?;
    game.move_ne()?;
    Ok(vec![LogEntry::E { extra, point }, LogEntry::NE])
}
