//! Self-maps of ω whose Stone-Čech extensions act on ω*.
//!
//! Map expressions are `|`-separated clauses; earlier clauses win where
//! domains overlap, and together they must cover ω:
//!
//! ```text
//! map    := clause ('|' clause)*
//! clause := 'id' | 'double' | 'shift(' c ')' | 'const(' c ')'
//!         | 'piece(' set ';' a ',' d '->' b ',' e ')'   n ↦ b + e·(n−a)/d on set
//!         | 'table{' n ':' v, ... '}'
//! ```

mod lazy;
mod progression;

pub use lazy::LazyInjection;
pub use progression::{MapFlags, Piece, ProgressionMap};

use crate::arith::lcm;
use crate::pofin::{self, PeriodicSet, PofinError};
use crate::syntax::{Cursor, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Pofin(#[from] PofinError),
    #[error("map is not defined at {n}")]
    NotTotal { n: u64 },
    #[error("{n} lies in a piece domain but not on its progression")]
    OffProgression { n: u64 },
    #[error("piece step must be positive")]
    ZeroStep,
    #[error("map decreases along the residue class of {at}")]
    Decreasing { at: u64 },
    #[error("map is not affine along the residue class of {at}")]
    NotAffine { at: u64 },
    #[error("combine_piecewise needs at least one part")]
    NoParts,
    #[error("order embedding needs infinite sets")]
    FiniteSet,
    #[error("tree is {height} levels deep, {n} needs more")]
    NotDeepEnough { n: u64, height: usize },
}

#[derive(Debug, Clone)]
pub(crate) enum Clause {
    Piece { domain: PeriodicSet, rule: Piece },
    Table(Vec<(u64, u64)>),
}

/// First-wins assembly of clauses into a total map.
pub(crate) fn build_map(clauses: &[Clause]) -> Result<ProgressionMap, MapError> {
    let mut claimed = PeriodicSet::empty();
    let mut resolved: Vec<(PeriodicSet, Clause)> = Vec::new();
    for clause in clauses {
        let domain = match clause {
            Clause::Piece { domain, rule } => {
                if rule.step == 0 {
                    return Err(MapError::ZeroStep);
                }
                let own = domain.difference(&claimed);
                let stray = own.difference(&rule.domain());
                if let Ok(n) = stray.nth(0) {
                    return Err(MapError::OffProgression { n });
                }
                own
            }
            Clause::Table(entries) => {
                PeriodicSet::finite(entries.iter().map(|e| e.0)).difference(&claimed)
            }
        };
        claimed = claimed.union(&domain);
        resolved.push((domain, clause.clone()));
    }
    if let Ok(n) = claimed.complement().nth(0) {
        return Err(MapError::NotTotal { n });
    }
    let mut m = 1;
    let mut t = 0;
    for (domain, clause) in &resolved {
        m = lcm(m, domain.modulus());
        t = t.max(domain.threshold());
        match clause {
            Clause::Piece { rule, .. } => {
                m = lcm(m, rule.step);
                t = t.max(rule.start);
            }
            Clause::Table(entries) => {
                t = t.max(entries.iter().map(|e| e.0 + 1).max().unwrap_or(0));
            }
        }
    }
    ProgressionMap::from_fn(m, t, |n| {
        let (_, clause) = resolved
            .iter()
            .find(|(d, _)| d.contains(n))
            .expect("domains cover ω");
        match clause {
            Clause::Piece { rule, .. } => rule.base + rule.slope * ((n - rule.start) / rule.step),
            Clause::Table(entries) => entries.iter().find(|e| e.0 == n).expect("claimed").1,
        }
    })
}

pub fn parse_map(text: &str) -> Result<ProgressionMap, MapError> {
    let mut cur = Cursor::new(text);
    let mut clauses = vec![parse_clause(&mut cur)?];
    while cur.eat('|') {
        clauses.push(parse_clause(&mut cur)?);
    }
    cur.finish()?;
    build_map(&clauses)
}

fn whole(rule: Piece) -> Clause {
    Clause::Piece {
        domain: PeriodicSet::omega(),
        rule,
    }
}

fn parse_clause(cur: &mut Cursor<'_>) -> Result<Clause, MapError> {
    let pos = cur.pos();
    let name = cur
        .ident()
        .ok_or_else(|| cur.error("expected a map clause"))?;
    let affine = |base, slope| {
        whole(Piece {
            start: 0,
            step: 1,
            base,
            slope,
        })
    };
    match name {
        "id" => Ok(affine(0, 1)),
        "double" => Ok(affine(0, 2)),
        "shift" | "const" => {
            cur.expect('(')?;
            let c = cur.number()?;
            cur.expect(')')?;
            Ok(if name == "shift" {
                affine(c, 1)
            } else {
                affine(c, 0)
            })
        }
        "piece" => {
            cur.expect('(')?;
            let domain = pofin::parse_expr(cur)?;
            cur.expect(';')?;
            let start = cur.number()?;
            cur.expect(',')?;
            let step = cur.number()?;
            cur.expect_str("->")?;
            let base = cur.number()?;
            cur.expect(',')?;
            let slope = cur.number()?;
            cur.expect(')')?;
            Ok(Clause::Piece {
                domain,
                rule: Piece {
                    start,
                    step,
                    base,
                    slope,
                },
            })
        }
        "table" => {
            cur.expect('{')?;
            let mut entries = Vec::new();
            if !cur.eat('}') {
                loop {
                    let n = cur.number()?;
                    cur.expect(':')?;
                    let v = cur.number()?;
                    entries.push((n, v));
                    if cur.eat('}') {
                        break;
                    }
                    cur.expect(',')?;
                }
            }
            Ok(Clause::Table(entries))
        }
        other => Err(SyntaxError {
            pos,
            msg: format!("unknown map clause '{other}'"),
        }
        .into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_constructors() {
        assert_eq!(parse_map("id").unwrap(), ProgressionMap::identity());
        assert_eq!(parse_map("double").unwrap().apply(3), 6);
        assert_eq!(parse_map("shift(4)").unwrap().apply(1), 5);
        assert_eq!(parse_map("const(2)").unwrap().apply(100), 2);
    }

    #[test]
    fn pieces_and_tables() {
        let swap = parse_map("piece(0%2; 0,2 -> 1,2) | piece(1%2; 1,2 -> 0,2)").unwrap();
        assert_eq!(
            (0..6).map(|n| swap.apply(n)).collect::<Vec<_>>(),
            vec![1, 0, 3, 2, 5, 4]
        );
        let t = parse_map("table{0:5, 3:3} | double").unwrap();
        assert_eq!(t.apply(0), 5);
        assert_eq!(t.apply(1), 2);
        assert_eq!(t.apply(3), 3);
        assert_eq!(t.apply(4), 8);
        // a restricted piece: n ↦ (n - 2)/4 on 2%4
        let r = parse_map("piece(2%4; 2,4 -> 0,1) | id").unwrap();
        assert_eq!(r.apply(10), 2);
        assert_eq!(r.apply(11), 11);
    }

    #[test]
    fn partiality_errors() {
        assert!(matches!(
            parse_map("piece(0%2; 0,2 -> 0,1)"),
            Err(MapError::NotTotal { n: 1 })
        ));
        assert!(matches!(
            parse_map("piece(0%2; 1,2 -> 0,1) | id"),
            Err(MapError::OffProgression { n: 0 })
        ));
        assert!(matches!(parse_map("sideways"), Err(MapError::Syntax(_))));
        assert!(matches!(
            parse_map("piece(0%0; 0,1 -> 0,1)"),
            Err(MapError::Pofin(PofinError::ZeroModulus { .. }))
        ));
    }
}
