//! Eventually periodic subsets of ω, with every relation decided modulo
//! finite sets.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr  := term (('+' | '-') term)*      union / difference, left to right
//! term  := unary ('&' unary)*            intersection
//! unary := '~' unary | atom              complement
//! atom  := r '%' m | '{' n, ... '}' | 'omega' | 'empty' | '(' expr ')'
//! ```

mod set;

pub use set::PeriodicSet;

use crate::syntax::{Cursor, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PofinError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("modulus 0 at {pos}")]
    ZeroModulus { pos: usize },
    #[error("set exhausted: no further element")]
    Exhausted,
    #[error("invalid set parts: {0}")]
    InvalidParts(String),
}

/// Parses a set expression into canonical form.
pub fn parse_set(text: &str) -> Result<PeriodicSet, PofinError> {
    let mut cur = Cursor::new(text);
    let set = parse_expr(&mut cur)?;
    cur.finish()?;
    Ok(set)
}

pub(crate) fn parse_expr(cur: &mut Cursor<'_>) -> Result<PeriodicSet, PofinError> {
    let mut acc = parse_term(cur)?;
    loop {
        if cur.eat('+') {
            acc = acc.union(&parse_term(cur)?);
        } else if cur.peek() == Some('-') && !cur.peek_str("->") {
            cur.expect('-')?;
            acc = acc.difference(&parse_term(cur)?);
        } else {
            return Ok(acc);
        }
    }
}

fn parse_term(cur: &mut Cursor<'_>) -> Result<PeriodicSet, PofinError> {
    let mut acc = parse_unary(cur)?;
    while cur.eat('&') {
        acc = acc.intersection(&parse_unary(cur)?);
    }
    Ok(acc)
}

fn parse_unary(cur: &mut Cursor<'_>) -> Result<PeriodicSet, PofinError> {
    if cur.eat('~') {
        return Ok(parse_unary(cur)?.complement());
    }
    parse_atom(cur)
}

fn parse_atom(cur: &mut Cursor<'_>) -> Result<PeriodicSet, PofinError> {
    if cur.eat('(') {
        let inner = parse_expr(cur)?;
        cur.expect(')')?;
        return Ok(inner);
    }
    if cur.eat('{') {
        let mut elems = Vec::new();
        if !cur.eat('}') {
            loop {
                elems.push(cur.number()?);
                if cur.eat('}') {
                    break;
                }
                cur.expect(',')?;
            }
        }
        return Ok(PeriodicSet::finite(elems));
    }
    if cur.peek_digit() {
        let r = cur.number()?;
        cur.expect('%')?;
        let pos = cur.pos();
        let m = cur.number()?;
        if m == 0 {
            return Err(PofinError::ZeroModulus { pos });
        }
        return PeriodicSet::residue_class(r, m);
    }
    let pos = cur.pos();
    match cur.ident() {
        Some("omega") => Ok(PeriodicSet::omega()),
        Some("empty") => Ok(PeriodicSet::empty()),
        Some(other) => Err(SyntaxError {
            pos,
            msg: format!("unknown atom '{other}'"),
        }
        .into()),
        None => Err(cur.error("expected a set atom").into()),
    }
}
