use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::PofinError;
use crate::arith::{divisors, gcd, lcm};

/// An eventually periodic subset of ω, kept in canonical form.
///
/// The denotation is `{n : n mod modulus ∈ residues} ∪ added ∖ removed`.
/// Canonical form means the modulus is the minimal eventual period, every
/// element of `added` lies outside the periodic part and every element of
/// `removed` inside it. Two canonical values are equal exactly when they
/// denote the same subset of ω, so derived `Eq` is set equality.
///
/// Read modulo finite sets, a value stands for the clopen set `A*` of ω*.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PeriodicSet {
    modulus: u64,
    residues: Vec<u64>,
    added: Vec<u64>,
    removed: Vec<u64>,
}

impl PeriodicSet {
    pub fn empty() -> Self {
        PeriodicSet {
            modulus: 1,
            residues: Vec::new(),
            added: Vec::new(),
            removed: Vec::new(),
        }
    }

    pub fn omega() -> Self {
        PeriodicSet {
            modulus: 1,
            residues: vec![0],
            added: Vec::new(),
            removed: Vec::new(),
        }
    }

    /// The residue class `{n : n ≡ residue (mod modulus)}`.
    pub fn residue_class(residue: u64, modulus: u64) -> Result<Self, PofinError> {
        if modulus == 0 {
            return Err(PofinError::ZeroModulus { pos: 0 });
        }
        let r = residue % modulus;
        Ok(Self::from_predicate(modulus, 0, |n| n % modulus == r))
    }

    pub fn finite<I: IntoIterator<Item = u64>>(elements: I) -> Self {
        let mut added: Vec<u64> = elements.into_iter().collect();
        added.sort_unstable();
        added.dedup();
        PeriodicSet {
            modulus: 1,
            residues: Vec::new(),
            added,
            removed: Vec::new(),
        }
    }

    /// Builds the canonical set whose membership is `member`, given that
    /// `member(n) == member(n + modulus)` for every `n >= threshold`.
    ///
    /// Costs `threshold + modulus` calls of `member`.
    pub fn from_predicate<F: Fn(u64) -> bool>(modulus: u64, threshold: u64, member: F) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        let m = modulus as usize;
        let mut pattern = vec![false; m];
        for n in threshold..threshold + modulus {
            pattern[(n % modulus) as usize] = member(n);
        }
        let period = divisors(modulus)
            .into_iter()
            .find(|&p| {
                let p = p as usize;
                (p..m).all(|i| pattern[i] == pattern[i - p])
            })
            .unwrap_or(modulus);
        let residues: Vec<u64> = (0..period).filter(|&r| pattern[r as usize]).collect();
        let periodic = |n: u64| pattern[(n % period) as usize];
        let mut added = Vec::new();
        let mut removed = Vec::new();
        for n in 0..threshold {
            match (member(n), periodic(n)) {
                (true, false) => added.push(n),
                (false, true) => removed.push(n),
                _ => {}
            }
        }
        PeriodicSet {
            modulus: period,
            residues,
            added,
            removed,
        }
    }

    /// Re-canonicalizes arbitrary parts; used when reading external JSON.
    pub fn from_parts(
        modulus: u64,
        residues: &[u64],
        added: &[u64],
        removed: &[u64],
    ) -> Result<Self, PofinError> {
        if modulus == 0 {
            return Err(PofinError::ZeroModulus { pos: 0 });
        }
        if let Some(r) = residues.iter().find(|&&r| r >= modulus) {
            return Err(PofinError::InvalidParts(format!(
                "residue {r} is not below modulus {modulus}"
            )));
        }
        if let Some(n) = added.iter().find(|n| removed.contains(n)) {
            return Err(PofinError::InvalidParts(format!(
                "{n} is both added and removed"
            )));
        }
        let res: HashSet<u64> = residues.iter().copied().collect();
        let add: HashSet<u64> = added.iter().copied().collect();
        let del: HashSet<u64> = removed.iter().copied().collect();
        let threshold = added.iter().chain(removed).max().map_or(0, |m| m + 1);
        Ok(Self::from_predicate(modulus, threshold, |n| {
            !del.contains(&n) && (add.contains(&n) || res.contains(&(n % modulus)))
        }))
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn added(&self) -> &[u64] {
        &self.added
    }

    pub fn removed(&self) -> &[u64] {
        &self.removed
    }

    /// One past the largest exception; membership is periodic from here on.
    pub fn threshold(&self) -> u64 {
        let a = self.added.last().copied().unwrap_or(0);
        let r = self.removed.last().copied().unwrap_or(0);
        if self.added.is_empty() && self.removed.is_empty() {
            0
        } else {
            a.max(r) + 1
        }
    }

    fn in_periodic(&self, n: u64) -> bool {
        self.residues.binary_search(&(n % self.modulus)).is_ok()
    }

    pub fn contains(&self, n: u64) -> bool {
        if self.added.binary_search(&n).is_ok() {
            return true;
        }
        if self.removed.binary_search(&n).is_ok() {
            return false;
        }
        self.in_periodic(n)
    }

    pub fn is_finite(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty() && self.added.is_empty()
    }

    /// `A*` is empty in ω* exactly when `A` is finite.
    pub fn is_almost_empty(&self) -> bool {
        self.is_finite()
    }

    /// Elements of a finite set, or `None` for an infinite one.
    pub fn finite_elements(&self) -> Option<&[u64]> {
        self.is_finite().then_some(self.added.as_slice())
    }

    fn combine<F: Fn(bool, bool) -> bool>(&self, other: &Self, op: F) -> Self {
        let m = lcm(self.modulus, other.modulus);
        let t = self.threshold().max(other.threshold());
        Self::from_predicate(m, t, |n| op(self.contains(n), other.contains(n)))
    }

    pub fn union(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && !b)
    }

    pub fn symmetric_difference(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a != b)
    }

    pub fn complement(&self) -> Self {
        PeriodicSet {
            modulus: self.modulus,
            residues: (0..self.modulus)
                .filter(|r| self.residues.binary_search(r).is_err())
                .collect(),
            added: self.removed.clone(),
            removed: self.added.clone(),
        }
    }

    /// `self ⊆* other`: the difference is finite.
    ///
    /// Only the periodic parts matter, so this checks every residue of
    /// `self` modulo the common period against `other`'s residues.
    pub fn almost_subset(&self, other: &Self) -> bool {
        let m = lcm(self.modulus, other.modulus);
        (0..m).all(|n| !self.in_periodic(n) || other.in_periodic(n))
    }

    pub fn almost_equal(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.residues == other.residues
    }

    /// Two residue classes mod `m1`, `m2` meet iff they agree mod
    /// `gcd(m1, m2)`, so only residues mod the gcd are compared.
    pub fn almost_disjoint(&self, other: &Self) -> bool {
        let g = gcd(self.modulus, other.modulus);
        let mut seen = vec![false; g as usize];
        for &r in &self.residues {
            seen[(r % g) as usize] = true;
        }
        other.residues.iter().all(|&r| !seen[(r % g) as usize])
    }

    /// No exceptions: the set is exactly its periodic part.
    pub fn is_periodic(&self) -> bool {
        self.added.is_empty() && self.removed.is_empty()
    }

    /// The periodic part alone: the canonical representative of `A*`.
    pub fn periodic_part(&self) -> Self {
        PeriodicSet {
            modulus: self.modulus,
            residues: self.residues.clone(),
            added: Vec::new(),
            removed: Vec::new(),
        }
    }

    /// Number of elements strictly below `n`.
    pub fn rank(&self, n: u64) -> u64 {
        let full = (n / self.modulus) * self.residues.len() as u64;
        let part = self.residues.partition_point(|&r| r < n % self.modulus) as u64;
        let add = self.added.partition_point(|&x| x < n) as u64;
        let del = self.removed.partition_point(|&x| x < n) as u64;
        full + part + add - del
    }

    /// The `k`-th element (from 0) in increasing order.
    pub fn nth(&self, k: u64) -> Result<u64, PofinError> {
        if self.is_finite() {
            return self
                .added
                .get(k as usize)
                .copied()
                .ok_or(PofinError::Exhausted);
        }
        // rank(hi) > k for this bound: each full period adds at least one element.
        let periods = k + self.removed.len() as u64 + 1;
        let mut hi = self.threshold() + (periods + 1) * self.modulus;
        let mut lo = 0;
        // smallest n with rank(n + 1) > k
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.rank(mid + 1) > k {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Ok(lo)
    }

    /// Least element `>= from`.
    pub fn first_from(&self, from: u64) -> Option<u64> {
        let added = self.added[self.added.partition_point(|&x| x < from)..]
            .first()
            .copied();
        let mut periodic = None;
        if !self.residues.is_empty() {
            let m = self.modulus;
            let mut n = from;
            loop {
                let (q, r) = (n / m, n % m);
                let i = self.residues.partition_point(|&x| x < r);
                let x = match self.residues.get(i) {
                    Some(&res) => q * m + res,
                    None => (q + 1) * m + self.residues[0],
                };
                if self.removed.binary_search(&x).is_err() {
                    periodic = Some(x);
                    break;
                }
                n = x + 1;
            }
        }
        match (added, periodic) {
            (Some(a), Some(p)) => Some(a.min(p)),
            (a, p) => a.or(p),
        }
    }

    /// Least element not in `excluded`.
    pub fn min_excluding(&self, excluded: &HashSet<u64>) -> Result<u64, PofinError> {
        let mut n = self.first_from(0).ok_or(PofinError::Exhausted)?;
        while excluded.contains(&n) {
            n = self.first_from(n + 1).ok_or(PofinError::Exhausted)?;
        }
        Ok(n)
    }

    /// Elements below `bound`, increasing.
    pub fn iter_below(&self, bound: u64) -> impl Iterator<Item = u64> + '_ {
        (0..bound).filter(move |&n| self.contains(n))
    }

    /// `{n : start + step·n ∈ self}`, the pull-back along an affine map.
    pub fn pull_back_affine(&self, start: u64, step: u64) -> Self {
        if step == 0 {
            return if self.contains(start) {
                Self::omega()
            } else {
                Self::empty()
            };
        }
        let m = self.modulus;
        let t = self.threshold().saturating_sub(start).div_ceil(step);
        Self::from_predicate(m, t, |n| self.contains(start + step * n))
    }

    /// `{start + step·n : n ∈ self}`.
    pub fn push_forward_affine(&self, start: u64, step: u64) -> Self {
        if step == 0 {
            return if self.is_empty() {
                Self::empty()
            } else {
                Self::finite([start])
            };
        }
        let m = step * self.modulus;
        let t = start + step * self.threshold();
        Self::from_predicate(m, t, |x| {
            x >= start && (x - start).is_multiple_of(step) && self.contains((x - start) / step)
        })
    }
}

impl fmt::Display for PeriodicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(xs: &[u64]) -> String {
            let inner: Vec<String> = xs.iter().map(u64::to_string).collect();
            format!("{{{}}}", inner.join(","))
        }
        let mut terms: Vec<String> = if self.modulus == 1 && self.residues == [0] {
            vec!["omega".to_string()]
        } else {
            self.residues
                .iter()
                .map(|r| format!("{r}%{}", self.modulus))
                .collect()
        };
        if !self.added.is_empty() {
            terms.push(list(&self.added));
        }
        if terms.is_empty() {
            write!(f, "empty")?;
        } else {
            write!(f, "{}", terms.join(" + "))?;
        }
        if !self.removed.is_empty() {
            write!(f, " - {}", list(&self.removed))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PeriodicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PeriodicSet({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct SetJson {
    m: u64,
    r: Vec<u64>,
    add: Vec<u64>,
    del: Vec<u64>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SetInput {
    Json(SetJson),
    Expr(String),
}

impl Serialize for PeriodicSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SetJson {
            m: self.modulus,
            r: self.residues.clone(),
            add: self.added.clone(),
            del: self.removed.clone(),
        }
        .serialize(serializer)
    }
}

/// Accepts the canonical object form or a set expression string.
impl<'de> Deserialize<'de> for PeriodicSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match SetInput::deserialize(deserializer)? {
            SetInput::Json(j) => {
                PeriodicSet::from_parts(j.m, &j.r, &j.add, &j.del).map_err(serde::de::Error::custom)
            }
            SetInput::Expr(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl std::str::FromStr for PeriodicSet {
    type Err = PofinError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        super::parse_set(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(r: u64, m: u64) -> PeriodicSet {
        PeriodicSet::residue_class(r, m).unwrap()
    }

    #[test]
    fn canonical_period_is_minimal() {
        let s = PeriodicSet::from_predicate(12, 0, |n| n % 2 == 0);
        assert_eq!(s.modulus(), 2);
        assert_eq!(s.residues(), &[0]);
        assert_eq!(s, class(0, 2));
    }

    #[test]
    fn exceptions_are_recorded() {
        let s = class(0, 2)
            .union(&PeriodicSet::finite([1]))
            .difference(&PeriodicSet::finite([0]));
        assert_eq!(s.added(), &[1]);
        assert_eq!(s.removed(), &[0]);
        assert_eq!(s.threshold(), 2);
        assert!(!s.contains(0));
        assert!(s.contains(1));
        assert!(s.contains(2));
        assert!(!s.contains(3));
    }

    #[test]
    fn boolean_examples() {
        let evens = class(0, 2);
        assert_eq!(evens.intersection(&class(0, 4)), class(0, 4));
        assert_eq!(evens.difference(&class(0, 4)), class(2, 4));
        assert_eq!(evens.complement(), class(1, 2));
        assert_eq!(PeriodicSet::omega().complement(), PeriodicSet::empty());
    }

    #[test]
    fn almost_relations() {
        let evens = class(0, 2);
        let s = class(0, 4).union(&PeriodicSet::finite([3]));
        assert!(s.almost_subset(&evens));
        assert!(!evens.almost_subset(&class(0, 4)));
        assert!(PeriodicSet::finite([5, 7, 9]).almost_subset(&PeriodicSet::empty()));
        assert!(class(0, 2).almost_disjoint(&class(1, 4)));
        assert!(s.almost_equal(&class(0, 4)));
    }

    #[test]
    fn enumeration() {
        assert_eq!(class(0, 4).nth(2).unwrap(), 8);
        assert_eq!(class(0, 4).min_excluding(&HashSet::from([0])).unwrap(), 4);
        assert_eq!(class(1, 4).min_excluding(&HashSet::new()).unwrap(), 1);
        let f = PeriodicSet::finite([2, 9]);
        assert_eq!(f.nth(1).unwrap(), 9);
        assert!(matches!(f.nth(2), Err(PofinError::Exhausted)));
        assert!(matches!(
            f.min_excluding(&HashSet::from([2, 9])),
            Err(PofinError::Exhausted)
        ));
        let odd_minus = class(1, 2).difference(&PeriodicSet::finite([1, 3, 7]));
        let listed: Vec<u64> = (0..5).map(|k| odd_minus.nth(k).unwrap()).collect();
        assert_eq!(listed, vec![5, 9, 11, 13, 15]);
    }

    #[test]
    fn rank_counts_below() {
        let s = class(1, 3).union(&PeriodicSet::finite([0]));
        assert_eq!(s.rank(0), 0);
        assert_eq!(s.rank(1), 1);
        assert_eq!(s.rank(2), 2);
        assert_eq!(s.rank(8), 4);
    }

    #[test]
    fn affine_transport() {
        let odds = class(1, 2);
        assert_eq!(odds.push_forward_affine(0, 2), class(2, 4));
        assert_eq!(class(2, 4).pull_back_affine(0, 2), odds);
        assert_eq!(
            class(0, 2).push_forward_affine(7, 0),
            PeriodicSet::finite([7])
        );
    }

    #[test]
    fn json_form() {
        let s = class(0, 2)
            .union(&PeriodicSet::finite([1]))
            .difference(&PeriodicSet::finite([0]));
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"m":2,"r":[0],"add":[1],"del":[0]}"#);
        let back: PeriodicSet = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
        let from_expr: PeriodicSet = serde_json::from_str(r#""~(1%2)""#).unwrap();
        assert_eq!(from_expr, class(0, 2));
    }

    #[test]
    fn display_reparses() {
        for s in [
            PeriodicSet::empty(),
            PeriodicSet::omega(),
            PeriodicSet::finite([4, 1]),
            class(1, 6)
                .union(&class(4, 6))
                .union(&PeriodicSet::finite([0]))
                .difference(&PeriodicSet::finite([1])),
        ] {
            let text = s.to_string();
            assert_eq!(text.parse::<PeriodicSet>().unwrap(), s, "{text}");
        }
    }
}
