//! Recursive-descent parser for the set-expression text grammar.
//!
//! ```text
//! expr := "nat" | "empty" | "finite{" ints "}" | "ap(" r "," m ")"
//!       | "blocks(" b "," p ",on=[" residues "])"
//!       | "union(" e "," e ")" | "inter(" e "," e ")" | "diff(" e "," e ")"
//!       | "compl(" e ")" | "mcopy(" e "," m ["," rule] ")"
//! rule := "first" | "offset:" t | "seed:" u64
//! ```
//!
//! Whitespace is ignored everywhere; integers are decimal.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::set_algebra::{CopyRule, SetExpr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {offset}: {message}{}", expected_suffix(.expected))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<String>,
    pub message: String,
}

fn expected_suffix(expected: &[String]) -> String {
    if expected.is_empty() {
        String::new()
    } else {
        format!(" (expected {})", expected.join(" | "))
    }
}

pub fn parse_set_expr(text: &str) -> Result<SetExpr, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error(&["end of input"], "trailing characters"));
    }
    Ok(e)
}

impl FromStr for SetExpr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_set_expr(s)
    }
}

impl Serialize for SetExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SetExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_set_expr(&text).map_err(serde::de::Error::custom)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

const KEYWORDS: &[&str] = &[
    "nat", "empty", "finite", "ap", "blocks", "union", "inter", "diff", "compl", "mcopy",
];

impl Parser<'_> {
    fn error(&self, expected: &[&str], message: impl fmt::Display) -> ParseError {
        ParseError {
            offset: self.pos,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            let tok = (c as char).to_string();
            Err(self.error(&[tok.as_str()], "unexpected token"))
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Option<(usize, &str)> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_lowercase() {
            self.pos += 1;
        }
        if self.pos == start {
            None
        } else {
            Some((start, std::str::from_utf8(&self.src[start..self.pos]).unwrap()))
        }
    }

    fn int(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error(&["integer"], "expected a decimal integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse().map_err(|_| ParseError {
            offset: start,
            expected: vec!["integer".into()],
            message: format!("integer {text} out of range"),
        })
    }

    /// Comma-separated integers up to (not including) `close`.
    fn int_list(&mut self, close: u8) -> Result<Vec<u64>, ParseError> {
        let mut v = Vec::new();
        if self.peek() == Some(close) {
            return Ok(v);
        }
        loop {
            v.push(self.int()?);
            if !self.eat(b',') {
                return Ok(v);
            }
        }
    }

    fn expr(&mut self) -> Result<SetExpr, ParseError> {
        let (start, word) = match self.ident() {
            Some(x) => x,
            None => return Err(self.error(KEYWORDS, "expected a set expression")),
        };
        let word = word.to_string();
        let invalid = |e: crate::DensityError| ParseError {
            offset: start,
            expected: vec![],
            message: e.to_string(),
        };
        match word.as_str() {
            "nat" => Ok(SetExpr::Nat),
            "empty" => Ok(SetExpr::Empty),
            "finite" => {
                self.expect(b'{')?;
                let v = self.int_list(b'}')?;
                self.expect(b'}')?;
                SetExpr::finite(v).map_err(invalid)
            }
            "ap" => {
                self.expect(b'(')?;
                let r = self.int()?;
                self.expect(b',')?;
                let m = self.int()?;
                self.expect(b')')?;
                SetExpr::ap(r, m).map_err(invalid)
            }
            "blocks" => {
                self.expect(b'(')?;
                let b = self.int()?;
                self.expect(b',')?;
                let p = self.int()?;
                self.expect(b',')?;
                match self.ident() {
                    Some((_, "on")) => {}
                    _ => return Err(self.error(&["on="], "expected residue list")),
                }
                self.expect(b'=')?;
                self.expect(b'[')?;
                let on = self.int_list(b']')?;
                self.expect(b']')?;
                self.expect(b')')?;
                let p = u32::try_from(p).map_err(|_| ParseError {
                    offset: start,
                    expected: vec![],
                    message: "period too large".into(),
                })?;
                let on = on
                    .into_iter()
                    .map(|r| u32::try_from(r).unwrap_or(u32::MAX))
                    .collect::<Vec<_>>();
                SetExpr::blocks(b, p, on).map_err(invalid)
            }
            "union" | "inter" | "diff" => {
                self.expect(b'(')?;
                let a = self.expr()?;
                self.expect(b',')?;
                let b = self.expr()?;
                self.expect(b')')?;
                Ok(match word.as_str() {
                    "union" => SetExpr::union(a, b),
                    "inter" => SetExpr::inter(a, b),
                    _ => SetExpr::diff(a, b),
                })
            }
            "compl" => {
                self.expect(b'(')?;
                let a = self.expr()?;
                self.expect(b')')?;
                Ok(SetExpr::compl(a))
            }
            "mcopy" => {
                self.expect(b'(')?;
                let inner = self.expr()?;
                self.expect(b',')?;
                let m = self.int()?;
                let rule = if self.eat(b',') { self.rule()? } else { CopyRule::First };
                self.expect(b')')?;
                SetExpr::m_copy(inner, m, rule).map_err(invalid)
            }
            _ => Err(ParseError {
                offset: start,
                expected: KEYWORDS.iter().map(|s| s.to_string()).collect(),
                message: format!("unknown constructor '{word}'"),
            }),
        }
    }

    fn rule(&mut self) -> Result<CopyRule, ParseError> {
        const RULES: &[&str] = &["first", "offset:", "seed:"];
        match self.ident() {
            Some((_, "first")) => Ok(CopyRule::First),
            Some((_, "offset")) => {
                self.expect(b':')?;
                Ok(CopyRule::Offset(self.int()?))
            }
            Some((_, "seed")) => {
                self.expect(b':')?;
                Ok(CopyRule::Seeded(self.int()?))
            }
            _ => Err(self.error(RULES, "expected a copy rule")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set_algebra::count;

    #[test]
    fn parses_counterexample() {
        let e = parse_set_expr("blocks(2,2,on=[0])").unwrap();
        assert_eq!(e, SetExpr::blocks(2, 2, [0]).unwrap());
    }

    #[test]
    fn union_with_empty_denotes_ap() {
        let e = parse_set_expr("union(ap(0,4), compl(nat))").unwrap();
        let ap = SetExpr::ap(0, 4).unwrap();
        assert_eq!(e.simplify(), ap);
        for n in [1, 7, 100, 999] {
            assert_eq!(count(&e, n), count(&ap, n));
        }
    }

    #[test]
    fn residue_not_below_modulus_is_rejected() {
        let err = parse_set_expr("ap(5,3)").unwrap_err();
        assert_eq!(err.offset, 0);
    }

    #[test]
    fn whitespace_and_rules() {
        let e = parse_set_expr(" mcopy ( ap( 0 , 2 ) , 3 , seed : 17 ) ").unwrap();
        assert_eq!(
            e,
            SetExpr::m_copy(SetExpr::ap(0, 2).unwrap(), 3, CopyRule::Seeded(17)).unwrap()
        );
        assert_eq!(e.to_string(), "mcopy(ap(0,2),3,seed:17)");
        let f = parse_set_expr("mcopy(nat,2,first)").unwrap();
        assert_eq!(f.to_string(), "mcopy(nat,2)");
    }

    #[test]
    fn error_positions_and_expectations() {
        let err = parse_set_expr("union(nat nat)").unwrap_err();
        assert_eq!(err.offset, 10);
        assert_eq!(err.expected, vec![",".to_string()]);
        let err = parse_set_expr("ap(1,2) x").unwrap_err();
        assert_eq!(err.offset, 8);
        let err = parse_set_expr("foo(1)").unwrap_err();
        assert!(err.expected.contains(&"blocks".to_string()));
        assert!(parse_set_expr("mcopy(nat,3,offset:4)").is_err());
        assert!(parse_set_expr("finite{}").is_ok());
    }
}
