//! Matrix arguments: an inline bracket literal, `-` for standard input, or
//! a file path. File and stdin contents may be bracketed or plain rows of
//! whitespace- or comma-separated integers.

use std::io::Read;

use num_bigint::BigInt;
use sailkit_core::{Error, IntMatrix, Result};

pub fn read_matrix(arg: &str) -> Result<IntMatrix> {
    let text = if arg.trim_start().starts_with('[') {
        return parse_brackets(arg);
    } else if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Parse(format!("reading stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(arg).map_err(|e| {
            Error::Parse(format!("{arg}: {e} (inline matrices must be bracketed, e.g. [[2,1],[1,1]])"))
        })?
    };
    parse_text(&text)
}

pub fn parse_text(text: &str) -> Result<IntMatrix> {
    if text.trim_start().starts_with('[') {
        parse_brackets(text)
    } else {
        parse_rows(text)
    }
}

fn parse_int(tok: &str) -> Result<BigInt> {
    tok.parse::<BigInt>().map_err(|_| Error::Parse(format!("not an integer: {tok:?}")))
}

fn square(rows: Vec<Vec<BigInt>>) -> Result<IntMatrix> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::Parse("empty matrix".into()));
    }
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::Parse(format!("matrix is not square ({n} rows)")));
    }
    IntMatrix::from_rows(rows)
}

/// `[[a,b],[c,d]]`, whitespace allowed anywhere.
pub fn parse_brackets(text: &str) -> Result<IntMatrix> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = s
        .strip_prefix("[[")
        .and_then(|t| t.strip_suffix("]]"))
        .ok_or_else(|| Error::Parse(format!("expected [[..],..,[..]], got {s:?}")))?;
    let rows = inner
        .split("],[")
        .map(|row| row.split(',').map(parse_int).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    square(rows)
}

/// One row per non-empty line; entries separated by whitespace or commas.
pub fn parse_rows(text: &str) -> Result<IntMatrix> {
    let rows = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()).map(parse_int).collect())
        .collect::<Result<Vec<Vec<BigInt>>>>()?;
    square(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_agree() {
        let a = parse_brackets("[[2, 1], [1, 1]]").unwrap();
        assert_eq!(parse_rows("2 1\n1 1\n").unwrap(), a);
        assert_eq!(parse_text(" 2,1\n\n 1, 1").unwrap(), a);
        assert_eq!(parse_text("[[2,1],\n [1,1]]").unwrap(), a);
    }

    #[test]
    fn big_entries_survive() {
        let a = parse_brackets("[[123456789012345678901234567890,1],[0,1]]").unwrap();
        assert_eq!(a[(0, 0)].to_string(), "123456789012345678901234567890");
    }

    #[test]
    fn malformed_input_is_rejected() {
        assert!(matches!(parse_brackets("[[1,2],[3]]"), Err(Error::Parse(_))));
        assert!(matches!(parse_brackets("[1,2]"), Err(Error::Parse(_))));
        assert!(matches!(parse_rows("1 x\n2 3"), Err(Error::Parse(_))));
        assert!(matches!(parse_rows(""), Err(Error::Parse(_))));
    }
}
