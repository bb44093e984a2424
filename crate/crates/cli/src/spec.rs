//! Group spec grammar: `FAMILY "(" INT "," INT ")" ["/Z"]`, whitespace
//! allowed between tokens.

use std::fmt;

use charlab::gf::prime_power;
use charlab::matgrp::{ClassicalSpec, Family};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("invalid group: {0}")]
    Semantic(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupSpecAst {
    pub family: Family,
    pub n: usize,
    pub q: u64,
    pub quotient: bool,
}

impl GroupSpecAst {
    pub fn classical(self) -> ClassicalSpec {
        ClassicalSpec {
            family: self.family,
            n: self.n,
            q: self.q,
            quotient: self.quotient,
        }
    }
}

impl fmt::Display for GroupSpecAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.family.name(), self.n, self.q)?;
        if self.quotient {
            f.write_str("/Z")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for GroupSpecAst {
    type Err = SpecError;
    fn from_str(s: &str) -> Result<Self, SpecError> {
        parse_spec(s)
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, SpecError> {
        Err(SpecError::Parse {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.text[start..];
        let len = rest.find(|c| !pred(c)).unwrap_or(rest.len());
        self.pos += len;
        &self.text[start..start + len]
    }

    fn expect(&mut self, token: &str) -> Result<(), SpecError> {
        self.skip_ws();
        if self.text[self.pos..].starts_with(token) {
            self.pos += token.len();
            Ok(())
        } else {
            self.fail(format!("expected '{token}'"))
        }
    }

    fn int(&mut self) -> Result<u64, SpecError> {
        self.skip_ws();
        let at = self.pos;
        let digits = self.take_while(|c| c.is_ascii_digit());
        if digits.is_empty() {
            return self.fail("expected an integer");
        }
        digits.parse().map_err(|_| SpecError::Parse {
            offset: at,
            message: "integer out of range".into(),
        })
    }
}

pub fn parse_spec(text: &str) -> Result<GroupSpecAst, SpecError> {
    let mut c = Cursor { text, pos: 0 };
    c.skip_ws();
    let at = c.pos;
    let word = c.take_while(|ch| ch.is_ascii_alphabetic());
    let family = match Family::from_name(word) {
        Some(f) => f,
        None if word.is_empty() => return c.fail("expected a family name"),
        None => {
            return Err(SpecError::Parse {
                offset: at,
                message: format!("unknown family '{word}', expected GL, SL, GU, SU or Sp"),
            })
        }
    };
    c.expect("(")?;
    let n = c.int()?;
    c.expect(",")?;
    let q = c.int()?;
    c.expect(")")?;
    c.skip_ws();
    let quotient = if c.pos < text.len() {
        c.expect("/")?;
        c.expect("Z")?;
        true
    } else {
        false
    };
    c.skip_ws();
    if c.pos < text.len() {
        return c.fail("unexpected trailing input");
    }
    if n == 0 {
        return Err(SpecError::Semantic("dimension must be positive".into()));
    }
    if family == Family::Sp && n % 2 == 1 {
        return Err(SpecError::Semantic(format!(
            "symplectic dimension must be even, got {n}"
        )));
    }
    if prime_power(q).is_none() {
        return Err(SpecError::Semantic(format!("{q} is not a prime power")));
    }
    Ok(GroupSpecAst {
        family,
        n: n as usize,
        q,
        quotient,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let s = parse_spec("SU(3,3)").unwrap();
        assert_eq!((s.family, s.n, s.q, s.quotient), (Family::SU, 3, 3, false));
        let s = parse_spec("SL(2,7)/Z").unwrap();
        assert!(s.quotient);
        assert_eq!(s.to_string(), "SL(2,7)/Z");
        assert!(matches!(parse_spec("Sp(3,3)"), Err(SpecError::Semantic(_))));
    }

    #[test]
    fn whitespace_insensitive() {
        assert_eq!(parse_spec(" Sp ( 4 , 3 ) / Z ").unwrap().to_string(), "Sp(4,3)/Z");
    }

    #[test]
    fn offsets() {
        let off = |s: &str| match parse_spec(s) {
            Err(SpecError::Parse { offset, .. }) => offset,
            other => panic!("{other:?}"),
        };
        assert_eq!(off("XY(2,3)"), 0);
        assert_eq!(off("SL[2,3)"), 2);
        assert_eq!(off("SL(2;3)"), 4);
        assert_eq!(off("SL(2,)"), 5);
        assert_eq!(off("SL(2,3)/Q"), 8);
        assert_eq!(off("SL(2,3) x"), 8);
        assert_eq!(off(""), 0);
    }

    #[test]
    fn semantic() {
        assert!(matches!(parse_spec("SL(2,6)"), Err(SpecError::Semantic(_))));
        assert!(matches!(parse_spec("GL(0,2)"), Err(SpecError::Semantic(_))));
    }

    proptest::proptest! {
        #[test]
        fn canonical_roundtrip(
            fam in proptest::sample::select(vec!["GL", "SL", "GU", "SU", "Sp"]),
            n in 1usize..9,
            q in proptest::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9, 25, 27]),
            quotient: bool,
            pad in proptest::collection::vec(proptest::sample::select(vec!["", " ", "\t"]), 7),
        ) {
            let text = format!(
                "{}{fam}{}({}{n},{}{q}){}{}",
                pad[0], pad[1], pad[2], pad[3], pad[4],
                if quotient { format!("/{}Z{}", pad[5], pad[6]) } else { String::new() },
            );
            match parse_spec(&text) {
                Ok(s) => {
                    proptest::prop_assert_eq!(parse_spec(&s.to_string()).unwrap(), s);
                    proptest::prop_assert_eq!(s.quotient, quotient);
                }
                Err(SpecError::Semantic(_)) => proptest::prop_assert!(fam == "Sp" && n % 2 == 1),
                Err(e) => proptest::prop_assert!(false, "{e}"),
            }
        }
    }
}
