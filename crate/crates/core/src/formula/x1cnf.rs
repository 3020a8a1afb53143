//! X-DIMACS: the DIMACS CNF layout with header `p x1cnf <n> <m>` and
//! exactly-one clause semantics. One clause per line, 1 to 3 literals,
//! terminated by `0`.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Formula, Literal};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: malformed header, expected `p x1cnf <vars> <clauses>`")]
    MalformedHeader { line: usize },
    #[error("line {line}: clause before the `p x1cnf` header")]
    MissingHeader { line: usize },
    #[error("missing `p x1cnf` header")]
    NoHeader,
    #[error("line {line}: second header")]
    DuplicateHeader { line: usize },
    #[error("line {line}: invalid token `{token}`")]
    InvalidToken { line: usize, token: String },
    #[error("line {line}: literal 0 inside the clause body")]
    ZeroInClause { line: usize },
    #[error("line {line}: clause is not terminated by 0")]
    MissingTerminator { line: usize },
    #[error("line {line}: variable {var} exceeds the declared {n_vars}")]
    VarOutOfRange { line: usize, var: u64, n_vars: u32 },
    #[error("line {line}: clause has {len} literals, expected 1 to 3")]
    ClauseSize { line: usize, len: usize },
    #[error("line {line}: duplicate literal {literal}")]
    DuplicateLiteral { line: usize, literal: i64 },
    #[error("header declares {expected} clauses, found {found}")]
    ClauseCount { expected: usize, found: usize },
}

impl ParseError {
    pub fn line(&self) -> Option<usize> {
        match self {
            ParseError::MalformedHeader { line }
            | ParseError::MissingHeader { line }
            | ParseError::DuplicateHeader { line }
            | ParseError::InvalidToken { line, .. }
            | ParseError::ZeroInClause { line }
            | ParseError::MissingTerminator { line }
            | ParseError::VarOutOfRange { line, .. }
            | ParseError::ClauseSize { line, .. }
            | ParseError::DuplicateLiteral { line, .. } => Some(*line),
            ParseError::NoHeader | ParseError::ClauseCount { .. } => None,
        }
    }
}

/// Parses X-DIMACS text. Clause ids are assigned `1..=m` in file order.
pub fn parse_x1cnf(text: &str) -> Result<Formula, ParseError> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses: Vec<Vec<Literal>> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(ParseError::DuplicateHeader { line });
            }
            header = Some(parse_header(trimmed, line)?);
            continue;
        }
        let Some((n_vars, _)) = header else {
            return Err(ParseError::MissingHeader { line });
        };
        clauses.push(parse_clause(trimmed, line, n_vars)?);
    }

    let (n_vars, m) = header.ok_or(ParseError::NoHeader)?;
    if clauses.len() != m {
        return Err(ParseError::ClauseCount {
            expected: m,
            found: clauses.len(),
        });
    }
    Ok(Formula::new(n_vars, clauses).expect("every clause was validated while parsing"))
}

fn parse_header(line_text: &str, line: usize) -> Result<(u32, usize), ParseError> {
    let fields: Vec<&str> = line_text.split_whitespace().collect();
    match fields.as_slice() {
        ["p", "x1cnf", n, m] => {
            let n = n
                .parse()
                .map_err(|_| ParseError::MalformedHeader { line })?;
            let m = m
                .parse()
                .map_err(|_| ParseError::MalformedHeader { line })?;
            Ok((n, m))
        }
        _ => Err(ParseError::MalformedHeader { line }),
    }
}

fn parse_clause(line_text: &str, line: usize, n_vars: u32) -> Result<Vec<Literal>, ParseError> {
    let mut values = Vec::new();
    for token in line_text.split_whitespace() {
        let v: i64 = token.parse().map_err(|_| ParseError::InvalidToken {
            line,
            token: token.to_owned(),
        })?;
        values.push(v);
    }
    match values.last() {
        Some(0) => {
            values.pop();
        }
        _ => return Err(ParseError::MissingTerminator { line }),
    }
    if values.contains(&0) {
        return Err(ParseError::ZeroInClause { line });
    }
    if values.is_empty() || values.len() > 3 {
        return Err(ParseError::ClauseSize {
            line,
            len: values.len(),
        });
    }
    let mut lits = Vec::with_capacity(values.len());
    for (i, &v) in values.iter().enumerate() {
        let var = v.unsigned_abs();
        if var > u64::from(n_vars) {
            return Err(ParseError::VarOutOfRange { line, var, n_vars });
        }
        if values[..i].contains(&v) {
            return Err(ParseError::DuplicateLiteral { line, literal: v });
        }
        lits.push(Literal::from_dimacs(v).expect("nonzero and in range"));
    }
    Ok(lits)
}

/// Canonical X-DIMACS text: header, then one clause per line, single spaces,
/// trailing newline. Comments are not preserved.
pub fn emit_x1cnf(f: &Formula) -> String {
    let mut out = String::new();
    writeln!(out, "p x1cnf {} {}", f.n_vars(), f.len()).unwrap();
    for clause in f.clauses() {
        for lit in &clause.literals {
            write!(out, "{} ", lit.to_dimacs()).unwrap();
        }
        out.push_str("0\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_worked_formula() {
        let f = parse_x1cnf("c worked example\np x1cnf 3 3\n1 -3 0\n1 -2 3 0\n2 -3 0\n").unwrap();
        assert_eq!(
            f,
            Formula::from_signed(3, &[&[1, -3], &[1, -2, 3], &[2, -3]])
        );
        assert_eq!(
            f.clauses().iter().map(|c| c.id).collect::<Vec<_>>(),
            vec![1, 2, 3]
        );
    }

    #[test]
    fn smallest_formula() {
        let f = parse_x1cnf("p x1cnf 1 1\n1 0\n").unwrap();
        assert_eq!(f.len(), 1);
        assert!(f.clauses()[0].is_conjunct());
    }

    #[test]
    fn rejects_duplicate_literal_with_line() {
        let err = parse_x1cnf("p x1cnf 2 1\n1 1 0\n").unwrap_err();
        assert_eq!(
            err,
            ParseError::DuplicateLiteral {
                line: 2,
                literal: 1
            }
        );
    }

    #[test]
    fn rejects_malformed_inputs() {
        assert_eq!(
            parse_x1cnf("p cnf 2 1\n1 0\n").unwrap_err(),
            ParseError::MalformedHeader { line: 1 }
        );
        assert_eq!(
            parse_x1cnf("p x1cnf 2 1\n1 0 2 0\n").unwrap_err(),
            ParseError::ZeroInClause { line: 2 }
        );
        assert_eq!(
            parse_x1cnf("p x1cnf 2 1\n3 0\n").unwrap_err(),
            ParseError::VarOutOfRange {
                line: 2,
                var: 3,
                n_vars: 2
            }
        );
        assert_eq!(
            parse_x1cnf("p x1cnf 4 1\n1 2 3 4 0\n").unwrap_err(),
            ParseError::ClauseSize { line: 2, len: 4 }
        );
        assert_eq!(
            parse_x1cnf("p x1cnf 2 1\n0\n").unwrap_err(),
            ParseError::ClauseSize { line: 2, len: 0 }
        );
        assert_eq!(
            parse_x1cnf("p x1cnf 2 1\n1 2\n").unwrap_err(),
            ParseError::MissingTerminator { line: 2 }
        );
        assert_eq!(
            parse_x1cnf("1 0\n").unwrap_err(),
            ParseError::MissingHeader { line: 1 }
        );
        assert_eq!(
            parse_x1cnf("c nothing\n").unwrap_err(),
            ParseError::NoHeader
        );
        assert_eq!(
            parse_x1cnf("p x1cnf 2 2\n1 0\n").unwrap_err(),
            ParseError::ClauseCount {
                expected: 2,
                found: 1
            }
        );
        assert_eq!(
            parse_x1cnf("p x1cnf 2 1\n1 x 0\n").unwrap_err(),
            ParseError::InvalidToken {
                line: 2,
                token: "x".into()
            }
        );
    }

    #[test]
    fn emission_is_canonical() {
        let f = parse_x1cnf("c hi\n\np  x1cnf 3 2\n  1   -3 0\n2 0\n").unwrap();
        assert_eq!(emit_x1cnf(&f), "p x1cnf 3 2\n1 -3 0\n2 0\n");
    }
}
