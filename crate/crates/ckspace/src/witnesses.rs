//! Explicit counterexample constructions.
//!
//! * A locally finite family `U_n = [A_n → B] ∩ [A∖A_n → A]` of disjoint
//!   non-empty open sets, and for any map a neighbourhood meeting at most one
//!   of them.
//! * The parity apparatus: parts `A_0, A_1, …`, the clopen sets
//!   `Fix(n,m) = ⋂_{k<max(n,m), k≠n,m} [A_k → A_k]`, and the unions
//!   `U_E`, `U_O` of `[A_n → A_m] ∩ Fix(n,m)` over even (odd) index pairs,
//!   always truncated at an explicit bound. The identity lies in the closure
//!   of `U_E` but not in `U_E`.
//! * The family `[A_n → f(A_n)]` whose intersection is a non-empty G_δ with
//!   empty interior.

use serde::{Deserialize, Serialize};

use crate::compact_open::{self, normalize, BasicBox, BoxError, SubbasicBox};
use crate::maps::{MapError, ProgressionMap};
use crate::pofin::PeriodicSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WitnessError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("index {index} out of range (bound {bound})")]
    OutOfRange { index: usize, bound: usize },
    #[error("bound {bound} exceeds the apparatus size {k}")]
    BoundTooLarge { bound: usize, k: usize },
    #[error("no pair in the index set survives the halving search")]
    SearchFailed,
    #[error(transparent)]
    Box(#[from] BoxError),
    #[error(transparent)]
    Map(#[from] MapError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn matches(self, n: usize) -> bool {
        n.is_multiple_of(2) == (self == Parity::Even)
    }
}

/// Parts `A_0, …, A_K`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityApparatus {
    parts: Vec<PeriodicSet>,
}

impl ParityApparatus {
    /// Checks the parts are infinite and pairwise almost disjoint.
    pub fn new(parts: Vec<PeriodicSet>) -> Result<Self, WitnessError> {
        for (i, a) in parts.iter().enumerate() {
            if a.is_finite() {
                return Err(WitnessError::Precondition(format!("part {i} is finite")));
            }
            for (j, b) in parts.iter().enumerate().skip(i + 1) {
                if !a.almost_disjoint(b) {
                    return Err(WitnessError::Precondition(format!(
                        "parts {i} and {j} overlap"
                    )));
                }
            }
        }
        Ok(ParityApparatus { parts })
    }

    /// No checks; for exercising the disjointness test on bad input.
    pub fn new_unchecked(parts: Vec<PeriodicSet>) -> Self {
        ParityApparatus { parts }
    }

    /// The residue classes mod `m`, `A_r = r%m`.
    pub fn residues(m: u64) -> Self {
        let parts = (0..m)
            .map(|r| PeriodicSet::residue_class(r, m).expect("m > 0"))
            .collect();
        ParityApparatus { parts }
    }

    pub fn parts(&self) -> &[PeriodicSet] {
        &self.parts
    }

    pub fn part(&self, n: usize) -> Result<&PeriodicSet, WitnessError> {
        self.parts.get(n).ok_or(WitnessError::OutOfRange {
            index: n,
            bound: self.k(),
        })
    }

    /// The largest index.
    pub fn k(&self) -> usize {
        self.parts.len().saturating_sub(1)
    }

    fn fix_constraints(&self, n: usize, m: usize) -> Result<Vec<SubbasicBox>, WitnessError> {
        self.part(n)?;
        self.part(m)?;
        if n == m {
            return Err(WitnessError::Precondition("Fix needs n ≠ m".into()));
        }
        Ok((0..n.max(m))
            .filter(|&k| k != n && k != m)
            .map(|k| SubbasicBox::new(self.parts[k].clone(), self.parts[k].clone()))
            .collect())
    }

    /// `[A_n → A_m] ∩ Fix(n,m)` as raw constraints.
    pub fn disjunct(&self, n: usize, m: usize) -> Result<Vec<SubbasicBox>, WitnessError> {
        let mut out = vec![SubbasicBox::new(
            self.part(n)?.clone(),
            self.part(m)?.clone(),
        )];
        out.extend(self.fix_constraints(n, m)?);
        Ok(out)
    }

    /// Ordered index pairs `n ≠ m ≤ bound` of one parity.
    pub fn pairs(&self, parity: Parity, bound: usize) -> Vec<(usize, usize)> {
        let idx: Vec<usize> = (0..=bound.min(self.k()))
            .filter(|&n| parity.matches(n))
            .collect();
        idx.iter()
            .flat_map(|&n| idx.iter().filter(move |&&m| m != n).map(move |&m| (n, m)))
            .collect()
    }
}

/// `Fix(n,m)`, normalized.
pub fn fix_box(app: &ParityApparatus, n: usize, m: usize) -> Result<BasicBox, WitnessError> {
    Ok(normalize(&app.fix_constraints(n, m)?))
}

/// The first disjunct of `U_E` (or `U_O`) truncated at `bound` containing `f`.
pub fn parity_disjunct(
    f: &ProgressionMap,
    app: &ParityApparatus,
    parity: Parity,
    bound: usize,
) -> Result<Option<(usize, usize)>, WitnessError> {
    if bound > app.k() {
        return Err(WitnessError::BoundTooLarge { bound, k: app.k() });
    }
    for (n, m) in app.pairs(parity, bound) {
        let conj = app.disjunct(n, m)?;
        if conj.iter().all(|c| c.contains(f)) {
            return Ok(Some((n, m)));
        }
    }
    Ok(None)
}

/// Membership in `U_E` (or `U_O`) truncated at `bound`.
pub fn parity_member(
    f: &ProgressionMap,
    app: &ParityApparatus,
    parity: Parity,
    bound: usize,
) -> Result<bool, WitnessError> {
    Ok(parity_disjunct(f, app, parity, bound)?.is_some())
}

/// An even and an odd disjunct with a common member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OffendingPair {
    pub even: (usize, usize),
    pub odd: (usize, usize),
}

/// Checks every even/odd pair of disjuncts with indices up to `bound`
/// (clamped to the apparatus) for an empty normalized intersection.
pub fn parity_disjoint_upto(
    app: &ParityApparatus,
    bound: usize,
) -> Result<Result<(), OffendingPair>, WitnessError> {
    let bound = bound.min(app.k());
    let evens = app.pairs(Parity::Even, bound);
    let odds = app.pairs(Parity::Odd, bound);
    for &(n, m) in &evens {
        let even = app.disjunct(n, m)?;
        for &(p, q) in &odds {
            let mut both = even.clone();
            both.extend(app.disjunct(p, q)?);
            if compact_open::empty_constraint(&normalize(&both))?.is_none() {
                return Ok(Err(OffendingPair {
                    even: (n, m),
                    odd: (p, q),
                }));
            }
        }
    }
    Ok(Ok(()))
}

/// A map of the shape "move one part, fix the rest" found by the halving
/// search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproachWitness {
    pub map: ProgressionMap,
    pub source: usize,
    pub target: usize,
}

/// Both membership certificates of an [`ApproachWitness`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificates {
    pub in_neighbourhood: bool,
    pub in_disjunct: bool,
}

impl Certificates {
    pub fn ok(&self) -> bool {
        self.in_neighbourhood && self.in_disjunct
    }
}

impl ApproachWitness {
    pub fn certify(
        &self,
        v_parts: &[PeriodicSet],
        app: &ParityApparatus,
    ) -> Result<Certificates, WitnessError> {
        let nbhd = compact_open::identity_nbhd(v_parts)?;
        let conj = app.disjunct(self.source, self.target)?;
        Ok(Certificates {
            in_neighbourhood: compact_open::member(&self.map, &nbhd),
            in_disjunct: conj.iter().all(|c| c.contains(&self.map)),
        })
    }
}

/// A member of `identity_nbhd(v_parts) ∩ [A_n → A_m] ∩ Fix(n,m)` for some
/// `n ≠ m ∈ indices`.
///
/// Working from the last part of `v_parts` back to the second, the index set
/// is cut into the indices whose `A_n` misses that part and the rest, and
/// the larger half is kept (ties keep the first). Survivors agree on which
/// of those parts they meet. The first part decides the direction between
/// the two smallest survivors: `[C → C] ∩ [A → B]` is empty exactly when
/// `C ∩ A` is infinite and `C ∩ B` finite. `2^N` indices always suffice.
pub fn approach_identity_witness(
    v_parts: &[PeriodicSet],
    app: &ParityApparatus,
    indices: &[usize],
) -> Result<ApproachWitness, WitnessError> {
    compact_open::identity_nbhd(v_parts)?;
    let mut live: Vec<usize> = indices.to_vec();
    live.sort_unstable();
    live.dedup();
    for &n in &live {
        app.part(n)?;
    }
    for c in v_parts.iter().skip(1).rev() {
        let (misses, meets): (Vec<usize>, Vec<usize>) = live
            .iter()
            .partition(|&&n| app.parts[n].intersection(c).is_finite());
        live = if misses.len() >= meets.len() {
            misses
        } else {
            meets
        };
    }
    if live.len() < 2 {
        return Err(WitnessError::SearchFailed);
    }
    let (mut source, mut target) = (live[0], live[1]);
    if let Some(c) = v_parts.first() {
        let blocked = |from: usize, to: usize| {
            !c.intersection(&app.parts[from]).is_finite()
                && c.intersection(&app.parts[to]).is_finite()
        };
        if blocked(source, target) {
            std::mem::swap(&mut source, &mut target);
        }
    }
    let map = move_part(v_parts, &app.parts[source], &app.parts[target])?;
    Ok(ApproachWitness {
        map,
        source,
        target,
    })
}

/// Sends `C ∩ from` onto `C ∩ to` for each `C` in `v_parts` that meets
/// `from` infinitely, the rest of `from` onto `to`, and fixes everything
/// off `from`.
fn move_part(
    v_parts: &[PeriodicSet],
    from: &PeriodicSet,
    to: &PeriodicSet,
) -> Result<ProgressionMap, WitnessError> {
    let mut parts = vec![(from.complement(), ProgressionMap::identity())];
    let mut claimed = PeriodicSet::empty();
    for c in v_parts {
        let src = c.intersection(from).difference(&claimed);
        if src.is_finite() {
            continue;
        }
        let dst = c.intersection(to);
        if dst.is_finite() {
            return Err(WitnessError::SearchFailed);
        }
        claimed = claimed.union(&src);
        parts.push((src.clone(), ProgressionMap::order_embedding(&src, &dst)?));
    }
    let rest = from.difference(&claimed);
    if !rest.is_finite() {
        parts.push((rest.clone(), ProgressionMap::order_embedding(&rest, to)?));
    }
    Ok(ProgressionMap::combine_piecewise(&parts)?)
}

/// Checks the family preconditions and returns `B = ω ∖ A`.
fn family_target(a: &PeriodicSet, pieces: &[PeriodicSet]) -> Result<PeriodicSet, WitnessError> {
    let b = a.complement();
    if b.is_finite() {
        return Err(WitnessError::Precondition("ω ∖ A must be infinite".into()));
    }
    for (i, p) in pieces.iter().enumerate() {
        if p.is_finite() {
            return Err(WitnessError::Precondition(format!("piece {i} is finite")));
        }
        if !p.almost_subset(a) {
            return Err(WitnessError::Precondition(format!(
                "piece {i} is not inside A"
            )));
        }
        for (j, q) in pieces.iter().enumerate().skip(i + 1) {
            if !p.almost_disjoint(q) {
                return Err(WitnessError::Precondition(format!(
                    "pieces {i} and {j} overlap"
                )));
            }
        }
    }
    Ok(b)
}

/// `U_n = [A_n → B] ∩ [A∖A_n → A]` for each piece, normalized.
pub fn locally_finite_family(
    a: &PeriodicSet,
    pieces: &[PeriodicSet],
) -> Result<Vec<BasicBox>, WitnessError> {
    let b = family_target(a, pieces)?;
    Ok(pieces
        .iter()
        .map(|p| {
            normalize(&[
                SubbasicBox::new(p.clone(), b.clone()),
                SubbasicBox::new(a.difference(p), a.clone()),
            ])
        })
        .collect())
}

/// A box around `f` meeting at most one `U_n`:
/// `[A → A]` if `f(A) ⊆* A`; otherwise `[A_n ∩ f⁻¹(B) → B]` for the first
/// piece meeting `f⁻¹(B)` infinitely; otherwise `[A ∩ f⁻¹(B) → B]`.
pub fn separating_nbhd(
    f: &ProgressionMap,
    a: &PeriodicSet,
    pieces: &[PeriodicSet],
) -> Result<BasicBox, WitnessError> {
    let b = family_target(a, pieces)?;
    let constraint = if f.image(a).almost_subset(a) {
        SubbasicBox::new(a.clone(), a.clone())
    } else {
        let back = f.preimage(&b);
        match pieces
            .iter()
            .map(|p| p.intersection(&back))
            .find(|x| !x.is_finite())
        {
            Some(x) => SubbasicBox::new(x, b),
            None => SubbasicBox::new(a.intersection(&back), b),
        }
    };
    Ok(normalize(&[constraint]))
}

/// `[A_n → f(A_n)]` for each piece.
pub fn gdelta_family(
    a: &PeriodicSet,
    b: &PeriodicSet,
    f: &ProgressionMap,
    pieces: &[PeriodicSet],
) -> Result<Vec<SubbasicBox>, WitnessError> {
    if !a.almost_disjoint(b) {
        return Err(WitnessError::Precondition(
            "A and B must be almost disjoint".into(),
        ));
    }
    pieces
        .iter()
        .enumerate()
        .map(|(i, p)| {
            if !p.almost_subset(a) {
                return Err(WitnessError::Precondition(format!(
                    "piece {i} is not inside A"
                )));
            }
            let image = f.image(p);
            if !image.almost_subset(b) {
                return Err(WitnessError::Precondition(format!(
                    "f sends piece {i} outside B"
                )));
            }
            Ok(SubbasicBox::new(p.clone(), image))
        })
        .collect()
}

/// `2^{n+1} % 2^{n+2}` for `n < count`: pairwise disjoint infinite subsets
/// of the evens.
pub fn dyadic_pieces(count: u32) -> Vec<PeriodicSet> {
    (0..count)
        .map(|n| PeriodicSet::residue_class(1 << (n + 1), 1 << (n + 2)).expect("positive modulus"))
        .collect()
}

/// One level of the demonstration: a neighbourhood of the identity and a
/// certified member of it inside `U_E`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DemoLevel {
    pub level: usize,
    pub v_parts: Vec<PeriodicSet>,
    pub witness: ApproachWitness,
    pub certificates: Certificates,
    pub even_member: bool,
    pub odd_member: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DemoReport {
    pub apparatus: ParityApparatus,
    pub disjoint_bound: usize,
    pub disjoint: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offending: Option<OffendingPair>,
    pub member_bound: usize,
    pub identity_even: bool,
    pub identity_odd: bool,
    pub witness_bound: usize,
    pub indices: Vec<usize>,
    pub levels: Vec<DemoLevel>,
}

impl DemoReport {
    pub fn ok(&self) -> bool {
        self.disjoint
            && !self.identity_even
            && !self.identity_odd
            && self
                .levels
                .iter()
                .all(|l| l.certificates.ok() && l.even_member && !l.odd_member)
    }
}

/// The level-`n` neighbourhood of the identity: `A_0, …, A_{n-2}` and the
/// remainder of ω (nothing at level 0).
pub fn demo_v_parts(app: &ParityApparatus, level: usize) -> Vec<PeriodicSet> {
    if level == 0 {
        return Vec::new();
    }
    let named: Vec<PeriodicSet> = app.parts[..level - 1].to_vec();
    let rest = named
        .iter()
        .fold(PeriodicSet::empty(), |acc, p| acc.union(p))
        .complement();
    let mut out = named;
    out.push(rest);
    out
}

/// Residues mod 64 as the apparatus: disjointness up to `disjoint_bound`,
/// the identity against both unions at `member_bound`, and a witness in
/// `U_E` (indices even, up to `witness_bound`) for each level `0..=levels`.
pub fn fspace_demo(
    disjoint_bound: usize,
    member_bound: usize,
    witness_bound: usize,
    levels: usize,
) -> Result<DemoReport, WitnessError> {
    let app = ParityApparatus::residues(64);
    let offending = parity_disjoint_upto(&app, disjoint_bound)?.err();
    let id = ProgressionMap::identity();
    let identity_even = parity_member(&id, &app, Parity::Even, member_bound)?;
    let identity_odd = parity_member(&id, &app, Parity::Odd, member_bound)?;
    let indices: Vec<usize> = (0..=witness_bound.min(app.k())).step_by(2).collect();
    let mut out = Vec::new();
    for level in 0..=levels {
        let v_parts = demo_v_parts(&app, level);
        let witness = approach_identity_witness(&v_parts, &app, &indices)?;
        let certificates = witness.certify(&v_parts, &app)?;
        out.push(DemoLevel {
            level,
            even_member: parity_member(&witness.map, &app, Parity::Even, witness_bound)?,
            odd_member: parity_member(&witness.map, &app, Parity::Odd, witness_bound)?,
            v_parts,
            witness,
            certificates,
        });
    }
    Ok(DemoReport {
        apparatus: app,
        disjoint_bound,
        disjoint: offending.is_none(),
        offending,
        member_bound,
        identity_even,
        identity_odd,
        witness_bound,
        indices,
        levels: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::parse_map;

    fn s(text: &str) -> PeriodicSet {
        text.parse().unwrap()
    }

    #[test]
    fn family_is_disjoint() {
        let pieces = dyadic_pieces(4);
        let fam = locally_finite_family(&s("0%2"), &pieces).unwrap();
        assert_eq!(fam.len(), 4);
        for (i, u) in fam.iter().enumerate() {
            assert!(!compact_open::is_empty(u).unwrap().is_empty());
            for v in &fam[i + 1..] {
                assert!(compact_open::is_empty(&u.intersect(v)).unwrap().is_empty());
            }
        }
        assert!(locally_finite_family(&s("0%2"), &[s("1%2")]).is_err());
        assert!(locally_finite_family(&s("omega"), &[]).is_err());
    }

    fn meets(bx: &BasicBox, fam: &[BasicBox]) -> Vec<usize> {
        fam.iter()
            .enumerate()
            .filter(|(_, u)| !compact_open::is_empty(&bx.intersect(u)).unwrap().is_empty())
            .map(|(i, _)| i)
            .collect()
    }

    #[test]
    fn separating_cases() {
        let a = s("0%2");
        let pieces = dyadic_pieces(4);
        let fam = locally_finite_family(&a, &pieces).unwrap();

        let id = ProgressionMap::identity();
        let sep = separating_nbhd(&id, &a, &pieces).unwrap();
        assert_eq!(sep, "[0%2 -> 0%2] & [1%2 -> omega]".parse().unwrap());
        assert!(meets(&sep, &fam).is_empty());

        let f = parse_map("piece(2%4; 2,4 -> 3,4) | id").unwrap();
        let sep = separating_nbhd(&f, &a, &pieces).unwrap();
        assert!(compact_open::member(&f, &sep));
        assert_eq!(sep.constraints()[0].a, s("2%4"));
        assert_eq!(meets(&sep, &fam), vec![0]);

        // moves 0%32 into the odds: no piece is hit, third case
        let g = parse_map("piece(0%32; 0,32 -> 1,2) | id").unwrap();
        let sep = separating_nbhd(&g, &a, &pieces).unwrap();
        assert!(compact_open::member(&g, &sep));
        assert!(meets(&sep, &fam).len() <= 1);
    }

    #[test]
    fn fix_boxes() {
        let app = ParityApparatus::residues(8);
        let f23 = fix_box(&app, 2, 3).unwrap();
        assert_eq!(
            f23,
            normalize(&[
                SubbasicBox::new(s("0%8"), s("0%8")),
                SubbasicBox::new(s("1%8"), s("1%8")),
            ])
        );
        assert_eq!(fix_box(&app, 0, 1).unwrap(), BasicBox::full());
        assert_eq!(fix_box(&app, 5, 2).unwrap(), fix_box(&app, 2, 5).unwrap());
        assert!(fix_box(&app, 2, 9).is_err());
    }

    #[test]
    fn parity_membership() {
        let app = ParityApparatus::residues(16);
        // A_2 onto A_4, identity elsewhere
        let f =
            ProgressionMap::order_embedding(app.part(2).unwrap(), app.part(4).unwrap()).unwrap();
        assert!(parity_member(&f, &app, Parity::Even, 15).unwrap());
        assert!(!parity_member(&f, &app, Parity::Odd, 15).unwrap());
        let id = ProgressionMap::identity();
        for bound in 0..=15 {
            assert!(!parity_member(&id, &app, Parity::Even, bound).unwrap());
            assert!(!parity_member(&id, &app, Parity::Odd, bound).unwrap());
        }
        assert!(matches!(
            parity_member(&id, &app, Parity::Even, 16),
            Err(WitnessError::BoundTooLarge { .. })
        ));
    }

    #[test]
    fn disjointness() {
        let app = ParityApparatus::residues(16);
        assert_eq!(parity_disjoint_upto(&app, 16).unwrap(), Ok(()));
        assert_eq!(parity_disjoint_upto(&app, 2).unwrap(), Ok(()));
        // A_1 = A_2 leaves the unions disjoint: every disjunct touching
        // index 1 or 2 is itself empty
        let mut parts = app.parts().to_vec();
        parts[2] = parts[1].clone();
        let bad = ParityApparatus::new_unchecked(parts.clone());
        assert_eq!(parity_disjoint_upto(&bad, 4).unwrap(), Ok(()));
        parts[2] = parts[0].clone();
        let bad = ParityApparatus::new_unchecked(parts.clone());
        assert!(parity_disjoint_upto(&bad, 4).unwrap().is_err());
        assert!(ParityApparatus::new(parts).is_err());
    }

    #[test]
    fn approach_examples() {
        let app = ParityApparatus::residues(8);
        let v = vec![s("0%8 + 1%8")];
        let w = approach_identity_witness(&v, &app, &[2, 3]).unwrap();
        assert_eq!((w.source, w.target), (2, 3));
        assert_eq!(
            w.map,
            ProgressionMap::order_embedding(&s("2%8"), &s("3%8")).unwrap()
        );
        assert!(w.certify(&v, &app).unwrap().ok());

        let w = approach_identity_witness(&[], &app, &[0, 1]).unwrap();
        assert_eq!(
            w.map,
            ProgressionMap::order_embedding(&s("0%8"), &s("1%8")).unwrap()
        );

        let v = vec![s("0%4"), s("~0%4")];
        let w = approach_identity_witness(&v, &app, &[0, 2, 4, 6]).unwrap();
        let c = w.certify(&v, &app).unwrap();
        assert!(c.ok());
        // 0%8 and 4%8 both sit in 0%4
        assert_eq!((w.source, w.target), (0, 4));

        assert_eq!(
            approach_identity_witness(&[], &app, &[3]),
            Err(WitnessError::SearchFailed)
        );
    }

    #[test]
    fn approach_direction_follows_the_criterion() {
        // C meets A_1 but not A_2, so A_1 cannot move into A_2
        let app = ParityApparatus::residues(8);
        let v = vec![s("1%8")];
        let w = approach_identity_witness(&v, &app, &[1, 2]).unwrap();
        assert_eq!((w.source, w.target), (2, 1));
        assert!(w.certify(&v, &app).unwrap().ok());
    }

    #[test]
    fn gdelta_examples() {
        let (a, b) = (s("0%2"), s("1%2"));
        let f = parse_map("piece(0%2; 0,2 -> 1,2) | piece(1%2; 1,2 -> 0,2)").unwrap();
        let fam = gdelta_family(&a, &b, &f, &dyadic_pieces(4)).unwrap();
        assert_eq!(fam.len(), 4);
        assert!(compact_open::member(&f, &normalize(&fam)));
        let id = ProgressionMap::identity();
        assert!(!fam[0].contains(&id));
        assert!(gdelta_family(&a, &b, &f, &[]).unwrap().is_empty());
        assert_eq!(normalize(&[]), BasicBox::full());
        assert!(gdelta_family(&a, &b, &id, &dyadic_pieces(1)).is_err());
    }

    #[test]
    fn small_demo() {
        let r = fspace_demo(4, 8, 16, 3).unwrap();
        assert!(r.ok(), "{r:?}");
        assert_eq!(r.levels.len(), 4);
    }
}
