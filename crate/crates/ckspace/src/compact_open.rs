//! Basic open sets of the compact-open topology on self-maps of ω*.
//!
//! A [`SubbasicBox`] `[A → B]` denotes `{f : f(A*) ⊆ B*}`. A [`BasicBox`] is a
//! finite conjunction of them; in normal form the source sets are pairwise
//! disjoint, infinite, and cover almost all of ω.
//!
//! Box expressions: `[<set> -> <set>] & [<set> -> <set>] ...`, or `full`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::maps::{MapError, ProgressionMap};
use crate::pofin::{self, PeriodicSet};
use crate::syntax::{Cursor, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BoxError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("box is not in normal form: {0}")]
    NotNormal(String),
    #[error("box is empty: constraint {constraint} maps an infinite set into a finite one")]
    Empty { constraint: Box<SubbasicBox> },
    #[error("sets {first} and {second} overlap infinitely")]
    Overlap { first: usize, second: usize },
    #[error("set {index} is finite")]
    FinitePart { index: usize },
    #[error("seed is not almost contained in a single source set")]
    Straddling,
    #[error("precondition violated: {0}")]
    Precondition(String),
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubbasicBox {
    pub a: PeriodicSet,
    pub b: PeriodicSet,
}

impl SubbasicBox {
    pub fn new(a: PeriodicSet, b: PeriodicSet) -> Self {
        SubbasicBox { a, b }
    }

    pub fn contains(&self, f: &ProgressionMap) -> bool {
        f.almost_maps_into(&self.a, &self.b)
    }
}

impl fmt::Display for SubbasicBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} -> {}]", self.a, self.b)
    }
}

impl fmt::Debug for SubbasicBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct BasicBox {
    constraints: Vec<SubbasicBox>,
}

impl BasicBox {
    /// `[ω → ω]`, the whole function space.
    pub fn full() -> Self {
        BasicBox {
            constraints: vec![SubbasicBox::new(PeriodicSet::omega(), PeriodicSet::omega())],
        }
    }

    /// Wraps constraints as given, without normalizing.
    pub fn from_constraints(constraints: Vec<SubbasicBox>) -> Self {
        BasicBox { constraints }
    }

    pub fn constraints(&self) -> &[SubbasicBox] {
        &self.constraints
    }

    // no `is_empty`: it would read as emptiness of the box as a set of maps
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    /// Checks the normal-form invariants, naming the first violation.
    pub fn check_normal(&self) -> Result<(), BoxError> {
        for (i, c) in self.constraints.iter().enumerate() {
            if c.a.is_finite() {
                return Err(BoxError::NotNormal(format!("source set {i} is finite")));
            }
            for (j, d) in self.constraints.iter().enumerate().skip(i + 1) {
                if !c.a.almost_disjoint(&d.a) {
                    return Err(BoxError::NotNormal(format!(
                        "source sets {i} and {j} overlap"
                    )));
                }
            }
        }
        let covered = self
            .constraints
            .iter()
            .fold(PeriodicSet::empty(), |acc, c| acc.union(&c.a));
        if !covered.complement().is_finite() {
            return Err(BoxError::NotNormal("source sets do not cover ω".into()));
        }
        Ok(())
    }

    pub fn is_normal(&self) -> bool {
        self.check_normal().is_ok()
    }

    /// Normal form of `self ∩ other`.
    pub fn intersect(&self, other: &BasicBox) -> BasicBox {
        let mut all = self.constraints.clone();
        all.extend(other.constraints.iter().cloned());
        normalize(&all)
    }

    /// Index of the constraint whose source set almost contains `seed`.
    pub fn part_of(&self, seed: &PeriodicSet) -> Option<usize> {
        self.constraints
            .iter()
            .position(|c| seed.almost_subset(&c.a))
    }
}

impl fmt::Display for BasicBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.constraints.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(" & "))
    }
}

impl fmt::Debug for BasicBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BasicBox({self})")
    }
}

/// Accepts the JSON constraint list or a box expression; no normalization.
impl<'de> Deserialize<'de> for BasicBox {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            List(Vec<SubbasicBox>),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
            Raw::List(l) => Ok(BasicBox::from_constraints(l)),
        }
    }
}

impl std::str::FromStr for BasicBox {
    type Err = BoxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_constraints(s).map(BasicBox::from_constraints)
    }
}

/// Parses `[a -> b] & [a -> b] ...` (or `full`) into raw constraints.
pub fn parse_constraints(text: &str) -> Result<Vec<SubbasicBox>, BoxError> {
    let mut cur = Cursor::new(text);
    if cur.at_end() {
        return Ok(Vec::new());
    }
    if cur.eat_str("full") {
        cur.finish()?;
        return Ok(BasicBox::full().constraints);
    }
    let mut out = Vec::new();
    loop {
        cur.expect('[')?;
        let a = pofin::parse_expr(&mut cur).map_err(to_syntax)?;
        cur.expect_str("->")?;
        let b = pofin::parse_expr(&mut cur).map_err(to_syntax)?;
        cur.expect(']')?;
        out.push(SubbasicBox::new(a, b));
        if !cur.eat('&') {
            break;
        }
    }
    cur.finish()?;
    Ok(out)
}

fn to_syntax(e: pofin::PofinError) -> BoxError {
    match e {
        pofin::PofinError::Syntax(s) => BoxError::Syntax(s),
        pofin::PofinError::ZeroModulus { pos } => BoxError::Syntax(SyntaxError {
            pos,
            msg: "modulus 0".into(),
        }),
        other => BoxError::Precondition(other.to_string()),
    }
}

/// Where a constraint of a finer box sits inside the coarser one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    Inside(usize),
    Outside,
}

impl Serialize for Slot {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Slot::Inside(m) => serializer.serialize_u64(*m as u64),
            Slot::Outside => serializer.serialize_str("OUTSIDE"),
        }
    }
}

impl<'de> Deserialize<'de> for Slot {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Index(usize),
            Tag(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Index(m) => Ok(Slot::Inside(m)),
            Raw::Tag(t) if t == "OUTSIDE" => Ok(Slot::Outside),
            Raw::Tag(t) => Err(serde::de::Error::custom(format!("unknown slot {t}"))),
        }
    }
}

/// Certifies that a finer box lies inside a coarser one, constraint by
/// constraint: `A_l ⊆* C_m` and `B_l ⊆* D_m` whenever `l` sits in slot `m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RefinementCert {
    pub assignment: Vec<Slot>,
}

impl RefinementCert {
    pub fn identity(len: usize) -> Self {
        RefinementCert {
            assignment: (0..len).map(Slot::Inside).collect(),
        }
    }

    pub fn validate(&self, finer: &BasicBox, coarser: &BasicBox) -> bool {
        self.assignment.len() == finer.len()
            && self
                .assignment
                .iter()
                .zip(finer.constraints())
                .all(|(slot, c)| match slot {
                    Slot::Inside(m) => coarser.constraints().get(*m).is_some_and(|outer| {
                        c.a.almost_subset(&outer.a) && c.b.almost_subset(&outer.b)
                    }),
                    Slot::Outside => coarser
                        .constraints()
                        .iter()
                        .all(|outer| c.a.almost_disjoint(&outer.a)),
                })
    }
}

/// Rewrites a conjunction of constraints into normal form.
///
/// Constraints are folded in one at a time with
/// `[A,B] ∩ [A',B'] = [A∩A', B∩B'] ∩ [A∖A', B] ∩ [A'∖A, B']`; pieces with a
/// finite source are dropped, and `[rest → ω]` completes the cover.
pub fn normalize(constraints: &[SubbasicBox]) -> BasicBox {
    let mut pieces: Vec<SubbasicBox> = Vec::new();
    let mut covered = PeriodicSet::empty();
    for next in constraints {
        if next.a.is_finite() {
            continue;
        }
        let mut out = Vec::with_capacity(pieces.len() * 2 + 1);
        for p in pieces.drain(..) {
            // exactly disjoint: nothing to split
            if p.a.is_periodic() && next.a.is_periodic() && p.a.almost_disjoint(&next.a) {
                out.push(p);
                continue;
            }
            let inter = p.a.intersection(&next.a);
            if !inter.is_finite() {
                out.push(SubbasicBox::new(inter, p.b.intersection(&next.b)));
            }
            let rest = p.a.difference(&next.a);
            if !rest.is_finite() {
                out.push(SubbasicBox::new(rest, p.b));
            }
        }
        let fresh = next.a.difference(&covered);
        if !fresh.is_finite() {
            out.push(SubbasicBox::new(fresh, next.b.clone()));
        }
        covered = covered.union(&next.a);
        pieces = out;
    }
    let rest = pieces
        .iter()
        .fold(PeriodicSet::empty(), |acc, p| acc.union(&p.a))
        .complement();
    if !rest.is_finite() {
        pieces.push(SubbasicBox::new(rest, PeriodicSet::omega()));
    }
    BasicBox {
        constraints: pieces,
    }
}

/// Outcome of the emptiness decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Emptiness {
    /// Constraint `index` sends an infinite set into a finite one.
    Empty { index: usize },
    /// A member of the box.
    Inhabited { witness: ProgressionMap },
}

impl Emptiness {
    pub fn is_empty(&self) -> bool {
        matches!(self, Emptiness::Empty { .. })
    }
}

/// Decides emptiness of a normal-form box, returning a witness when it is
/// inhabited: the order embeddings of each source set into its target,
/// glued over the partition.
pub fn is_empty(bx: &BasicBox) -> Result<Emptiness, BoxError> {
    if let Some(index) = empty_constraint(bx)? {
        return Ok(Emptiness::Empty { index });
    }
    let parts = bx
        .constraints
        .iter()
        .map(|c| Ok((c.a.clone(), ProgressionMap::order_embedding(&c.a, &c.b)?)))
        .collect::<Result<Vec<_>, MapError>>()?;
    let witness = if parts.is_empty() {
        ProgressionMap::identity()
    } else {
        ProgressionMap::combine_piecewise(&parts)?
    };
    Ok(Emptiness::Inhabited { witness })
}

/// The emptiness decision alone: the first constraint sending an infinite
/// set into a finite one.
pub fn empty_constraint(bx: &BasicBox) -> Result<Option<usize>, BoxError> {
    bx.check_normal()?;
    Ok(bx
        .constraints
        .iter()
        .position(|c| !c.a.is_finite() && c.b.is_finite()))
}

/// `f ∈ ⋂[A_i, B_i]`, read on representatives as `f(A_i) ⊆* B_i`.
pub fn member(f: &ProgressionMap, bx: &BasicBox) -> bool {
    bx.constraints.iter().all(|c| c.contains(f))
}

/// Normal form of `outer ∩ extra` with a certificate against `outer`.
pub fn refine(
    outer: &BasicBox,
    extra: &[SubbasicBox],
) -> Result<(BasicBox, RefinementCert), BoxError> {
    outer.check_normal()?;
    let mut all = outer.constraints.clone();
    all.extend(extra.iter().cloned());
    let mut finer = normalize(&all);
    let mut assignment = Vec::with_capacity(finer.len());
    for c in &mut finer.constraints {
        match outer
            .constraints
            .iter()
            .position(|o| c.a.almost_subset(&o.a))
        {
            Some(m) => {
                c.b = c.b.intersection(&outer.constraints[m].b);
                assignment.push(Slot::Inside(m));
            }
            None if outer.constraints.iter().all(|o| c.a.almost_disjoint(&o.a)) => {
                assignment.push(Slot::Outside)
            }
            None => {
                return Err(BoxError::NotNormal(format!(
                    "refined source {} straddles the outer partition",
                    c.a
                )))
            }
        }
    }
    if let Some(c) = finer
        .constraints
        .iter()
        .find(|c| !c.a.is_finite() && c.b.is_finite())
    {
        return Err(BoxError::Empty {
            constraint: Box::new(c.clone()),
        });
    }
    Ok((finer, RefinementCert { assignment }))
}

/// `⋂[A_i, A_i]` over almost disjoint infinite sets, completed: the basic
/// neighbourhoods of the identity.
pub fn identity_nbhd(partition: &[PeriodicSet]) -> Result<BasicBox, BoxError> {
    for (i, a) in partition.iter().enumerate() {
        if a.is_finite() {
            return Err(BoxError::FinitePart { index: i });
        }
        for (j, b) in partition.iter().enumerate().skip(i + 1) {
            if !a.almost_disjoint(b) {
                return Err(BoxError::Overlap {
                    first: i,
                    second: j,
                });
            }
        }
    }
    let constraints: Vec<SubbasicBox> = partition
        .iter()
        .map(|a| SubbasicBox::new(a.clone(), a.clone()))
        .collect();
    Ok(normalize(&constraints))
}

/// Whether `[C,C] ∩ [A,B]` is empty: exactly when `C ∩ A` is infinite and
/// `C ∩ B` finite, for almost disjoint `A`, `B` with `B*` non-empty
/// whenever `A*` is.
pub fn fix_intersect_empty(
    c: &PeriodicSet,
    a: &PeriodicSet,
    b: &PeriodicSet,
) -> Result<bool, BoxError> {
    if !a.almost_disjoint(b) {
        return Err(BoxError::Precondition(
            "A and B must be almost disjoint".into(),
        ));
    }
    if !a.is_finite() && b.is_finite() {
        return Err(BoxError::Precondition(
            "B must be infinite when A is".into(),
        ));
    }
    Ok(!c.intersection(a).is_finite() && c.intersection(b).is_finite())
}

/// The set `{f(x) : f ∈ box}` for a point `x` in the part almost containing
/// `seed`: that constraint's target.
pub fn eval_image(bx: &BasicBox, seed: &PeriodicSet) -> Result<PeriodicSet, BoxError> {
    if seed.is_finite() {
        return Err(BoxError::Precondition("seed must be infinite".into()));
    }
    bx.part_of(seed)
        .map(|i| bx.constraints[i].b.clone())
        .ok_or(BoxError::Straddling)
}
