use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::MapError;
use crate::arith::{first_at_least, lcm};
use crate::pofin::PeriodicSet;

/// One affine piece: on `{start + step·k : k ∈ ω}` the map sends
/// `start + step·k` to `base + slope·k`. A zero slope is a constant piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Piece {
    #[serde(rename = "a")]
    pub start: u64,
    #[serde(rename = "d")]
    pub step: u64,
    #[serde(rename = "b")]
    pub base: u64,
    #[serde(rename = "e")]
    pub slope: u64,
}

impl Piece {
    pub fn domain(&self) -> PeriodicSet {
        PeriodicSet::omega().push_forward_affine(self.start, self.step)
    }

    pub fn range(&self) -> PeriodicSet {
        PeriodicSet::omega().push_forward_affine(self.base, self.slope)
    }
}

/// A total map ω → ω that is affine on residue classes past a threshold and
/// given by an explicit table below it.
///
/// Canonical form: every piece has the same step (the minimal eventual
/// period), the pieces start at `threshold, threshold+1, …`, and the
/// threshold is as small as possible. Canonical values are equal exactly
/// when the maps agree everywhere.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProgressionMap {
    threshold: u64,
    period: u64,
    pieces: Vec<Piece>,
    table: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapFlags {
    pub injective: bool,
    pub finite_to_one: bool,
}

impl ProgressionMap {
    /// Canonical map agreeing with `f`, given that `f` is affine on every
    /// residue class mod `modulus` from `threshold` on.
    pub fn from_fn<F: Fn(u64) -> u64>(
        modulus: u64,
        threshold: u64,
        f: F,
    ) -> Result<Self, MapError> {
        assert!(modulus > 0, "modulus must be positive");
        let m = modulus;
        let mut keys = Vec::with_capacity(m as usize);
        for r in 0..m {
            let n0 = first_at_least(threshold, r, m);
            let (v0, v1, v2) = (f(n0), f(n0 + m), f(n0 + 2 * m));
            if v1 < v0 {
                return Err(MapError::Decreasing { at: n0 });
            }
            let s = v1 - v0;
            if v2.checked_sub(v1) != Some(s) {
                return Err(MapError::NotAffine { at: n0 });
            }
            // slope per m steps, and m times the intercept of the line
            keys.push((s, v0 as i128 * m as i128 - s as i128 * n0 as i128));
        }
        let period = crate::arith::divisors(m)
            .into_iter()
            .find(|&p| (0..m).all(|r| keys[r as usize] == keys[(r % p) as usize]))
            .unwrap_or(m);

        let slopes: Vec<u64> = (0..period)
            .map(|s| {
                let n0 = first_at_least(threshold, s, period);
                f(n0 + period) - f(n0)
            })
            .collect();
        let mut t = threshold;
        while t > 0 {
            let n = t - 1;
            let next = f(n + period);
            let slope = slopes[(n % period) as usize];
            if next >= slope && next - slope == f(n) {
                t = n;
            } else {
                break;
            }
        }
        let pieces = (t..t + period)
            .map(|a| Piece {
                start: a,
                step: period,
                base: f(a),
                slope: slopes[(a % period) as usize],
            })
            .collect();
        Ok(ProgressionMap {
            threshold: t,
            period,
            pieces,
            table: (0..t).map(&f).collect(),
        })
    }

    pub fn identity() -> Self {
        Self::affine(0, 1)
    }

    /// `n ↦ base + slope·n`.
    pub fn affine(base: u64, slope: u64) -> Self {
        ProgressionMap {
            threshold: 0,
            period: 1,
            pieces: vec![Piece {
                start: 0,
                step: 1,
                base,
                slope,
            }],
            table: Vec::new(),
        }
    }

    pub fn shift(c: u64) -> Self {
        Self::affine(c, 1)
    }

    pub fn double() -> Self {
        Self::affine(0, 2)
    }

    pub fn constant(c: u64) -> Self {
        Self::affine(c, 0)
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// `(n, f(n))` for every `n` below the threshold.
    pub fn table(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.table.iter().enumerate().map(|(n, &v)| (n as u64, v))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn apply(&self, n: u64) -> u64 {
        if n < self.threshold {
            return self.table[n as usize];
        }
        let p = &self.pieces[((n - self.threshold) % self.period) as usize];
        p.base + p.slope * ((n - p.start) / p.step)
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &ProgressionMap) -> ProgressionMap {
        let m = inner.period * self.period;
        let t = inner.threshold + inner.period * (self.threshold + 1);
        Self::from_fn(m, t, |n| self.apply(inner.apply(n)))
            .expect("composition of progression maps is a progression map")
    }

    /// The exact image `f(a)`.
    pub fn image(&self, a: &PeriodicSet) -> PeriodicSet {
        let mut out =
            PeriodicSet::finite(self.table().filter(|&(n, _)| a.contains(n)).map(|(_, v)| v));
        for p in &self.pieces {
            let ks = a.pull_back_affine(p.start, p.step);
            out = out.union(&ks.push_forward_affine(p.base, p.slope));
        }
        out
    }

    /// `f(a) ⊆* b`, checked piece by piece over one joint period.
    pub fn almost_maps_into(&self, a: &PeriodicSet, b: &PeriodicSet) -> bool {
        let period = lcm(a.modulus(), b.modulus());
        self.pieces.iter().filter(|p| p.slope > 0).all(|p| {
            let k0 = a
                .threshold()
                .saturating_sub(p.start)
                .div_ceil(p.step)
                .max(b.threshold().saturating_sub(p.base).div_ceil(p.slope));
            (k0..k0 + period)
                .all(|k| !a.contains(p.start + p.step * k) || b.contains(p.base + p.slope * k))
        })
    }

    /// The exact preimage `f⁻¹(b)`.
    pub fn preimage(&self, b: &PeriodicSet) -> PeriodicSet {
        let m = self.period * b.modulus();
        let t = self.threshold + self.period * (b.threshold() + 1);
        PeriodicSet::from_predicate(m, t, |n| b.contains(self.apply(n)))
    }

    pub fn classify(&self) -> MapFlags {
        let finite_to_one = self.pieces.iter().all(|p| p.slope > 0);
        let injective = finite_to_one && {
            let ranges: Vec<PeriodicSet> = self.pieces.iter().map(Piece::range).collect();
            let ranges_disjoint = ranges
                .iter()
                .enumerate()
                .all(|(i, r)| ranges[i + 1..].iter().all(|s| r.intersection(s).is_empty()));
            let mut seen = HashSet::new();
            let table_ok = self
                .table
                .iter()
                .all(|v| seen.insert(*v) && ranges.iter().all(|r| !r.contains(*v)));
            ranges_disjoint && table_ok
        };
        MapFlags {
            injective,
            finite_to_one,
        }
    }

    /// The map agreeing with each part's map on that part's set. Naturals in
    /// several parts, or in none, go to the first part.
    pub fn combine_piecewise(
        parts: &[(PeriodicSet, ProgressionMap)],
    ) -> Result<ProgressionMap, MapError> {
        if parts.is_empty() {
            return Err(MapError::NoParts);
        }
        let m = parts
            .iter()
            .fold(1, |acc, (s, f)| lcm(lcm(acc, s.modulus()), f.period));
        let t = parts
            .iter()
            .map(|(s, f)| s.threshold().max(f.threshold))
            .max()
            .unwrap_or(0);
        Self::from_fn(m, t, |n| {
            let (_, f) = parts
                .iter()
                .find(|(s, _)| s.contains(n))
                .unwrap_or(&parts[0]);
            f.apply(n)
        })
    }

    /// The increasing bijection from `a` onto `b`, extended by the identity
    /// off `a`.
    pub fn order_embedding(a: &PeriodicSet, b: &PeriodicSet) -> Result<ProgressionMap, MapError> {
        if a.is_finite() || b.is_finite() {
            return Err(MapError::FiniteSet);
        }
        let ra = a.residues().len() as u64;
        let rb = b.residues().len() as u64;
        let l = lcm(ra, rb);
        let m = a.modulus() * (l / ra);
        let kb = b.rank(b.threshold());
        let t = a.threshold().max(a.nth(kb).map_err(MapError::Pofin)?);
        Self::from_fn(m, t, |n| {
            if a.contains(n) {
                b.nth(a.rank(n)).expect("b is infinite")
            } else {
                n
            }
        })
    }
}

impl fmt::Display for ProgressionMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "id");
        }
        let mut clauses = Vec::new();
        if !self.table.is_empty() {
            let entries: Vec<String> = self.table().map(|(n, v)| format!("{n}:{v}")).collect();
            clauses.push(format!("table{{{}}}", entries.join(",")));
        }
        for p in &self.pieces {
            clauses.push(format!(
                "piece({}%{}; {},{} -> {},{})",
                p.start % p.step,
                p.step,
                p.start,
                p.step,
                p.base,
                p.slope
            ));
        }
        write!(f, "{}", clauses.join(" | "))
    }
}

impl fmt::Debug for ProgressionMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProgressionMap({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct MapJson {
    pieces: Vec<Piece>,
    table: Vec<(u64, u64)>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MapInput {
    Json(MapJson),
    Expr(String),
}

impl Serialize for ProgressionMap {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        MapJson {
            pieces: self.pieces.clone(),
            table: self.table().collect(),
        }
        .serialize(serializer)
    }
}

/// Accepts the canonical object form (pieces need not share a step) or a
/// map expression string.
impl<'de> Deserialize<'de> for ProgressionMap {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match MapInput::deserialize(deserializer)? {
            MapInput::Json(j) => {
                let mut clauses = vec![super::Clause::Table(j.table)];
                for p in j.pieces {
                    if p.step == 0 {
                        return Err(serde::de::Error::custom("piece step must be positive"));
                    }
                    clauses.push(super::Clause::Piece {
                        domain: p.domain(),
                        rule: p,
                    });
                }
                super::build_map(&clauses).map_err(serde::de::Error::custom)
            }
            MapInput::Expr(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl std::str::FromStr for ProgressionMap {
    type Err = MapError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        super::parse_map(s)
    }
}
