//! Set expressions, evaluated against a modulus.
//!
//! ```text
//! expr := "{" [int ("," int)*] "}"
//!       | "ap(" int "," int "," int ")"      start, step, count
//!       | "image(" poly ")" | "squares"
//!       | "res(" int "," int ")"             a mod q
//!       | "interval(" int ")"                {0, ..., len-1}
//!       | "complement(" expr ")"
//!       | "union(" expr "," expr ")"
//!       | "empty" | "full"
//! ```
//!
//! Integers may be negative and are reduced mod `N` at evaluation time.

use modmix_core::{IntValuedPoly, Modulus, ResidueSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("set expression error at column {column}: {message}")]
pub struct SetExprError {
    /// 1-based.
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetExpr {
    Literal(Vec<i128>),
    Progression { start: i128, step: i128, count: u64 },
    Image(IntValuedPoly),
    Residue { a: i128, q: u64 },
    Interval(u64),
    Complement(Box<SetExpr>),
    Union(Box<SetExpr>, Box<SetExpr>),
    Empty,
    Full,
}

impl SetExpr {
    pub fn parse(text: &str) -> Result<Self, SetExprError> {
        let mut p = Parser { src: text, pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != text.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn eval(&self, modulus: &Modulus) -> modmix_core::Result<ResidueSet> {
        Ok(match self {
            Self::Literal(xs) => ResidueSet::from_elements(modulus, xs.iter().copied()),
            Self::Progression { start, step, count } => {
                ResidueSet::progression(modulus, *start, *step, *count)
            }
            Self::Image(p) => ResidueSet::image(modulus, p),
            Self::Residue { a, q } => ResidueSet::residue_class(modulus, *a, *q)?,
            Self::Interval(len) => ResidueSet::interval(modulus, *len),
            Self::Complement(e) => e.eval(modulus)?.complement(),
            Self::Union(x, y) => x.eval(modulus)?.union(&y.eval(modulus)?)?,
            Self::Empty => ResidueSet::empty(modulus),
            Self::Full => ResidueSet::full(modulus),
        })
    }
}

/// Parses and evaluates in one step.
pub fn parse_set(text: &str, modulus: &Modulus) -> anyhow::Result<ResidueSet> {
    Ok(SetExpr::parse(text)?.eval(modulus)?)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> SetExprError {
        SetExprError {
            column: self.src[..self.pos].chars().count() + 1,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<(), SetExprError> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .find(|c: char| !c.is_ascii_alphabetic())
            .unwrap_or(rest.len());
        self.pos += len;
        rest[..len].to_string()
    }

    fn int(&mut self) -> Result<i128, SetExprError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let sign = usize::from(rest.starts_with('-'));
        let digits = rest[sign..]
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(rest.len() - sign);
        if digits == 0 {
            return Err(self.error("expected an integer"));
        }
        self.pos += sign + digits;
        rest[..sign + digits].parse().map_err(|_| SetExprError {
            column: self.src[..start].chars().count() + 1,
            message: "integer out of range".into(),
        })
    }

    fn nonneg(&mut self) -> Result<u64, SetExprError> {
        let at = self.pos;
        let v = self.int()?;
        u64::try_from(v).map_err(|_| SetExprError {
            column: self.src[..at].chars().count() + 1,
            message: "expected a non-negative integer".into(),
        })
    }

    fn expr(&mut self) -> Result<SetExpr, SetExprError> {
        if self.peek() == Some('{') {
            self.pos += 1;
            let mut xs = Vec::new();
            if self.peek() == Some('}') {
                self.pos += 1;
                return Ok(SetExpr::Literal(xs));
            }
            loop {
                xs.push(self.int()?);
                match self.peek() {
                    Some(',') => self.pos += 1,
                    Some('}') => {
                        self.pos += 1;
                        return Ok(SetExpr::Literal(xs));
                    }
                    _ => return Err(self.error("expected ',' or '}'")),
                }
            }
        }
        let at = self.pos;
        let name = self.ident();
        let e = match name.as_str() {
            "squares" => SetExpr::Image(IntValuedPoly::parse("n^2").expect("valid")),
            "empty" => SetExpr::Empty,
            "full" => SetExpr::Full,
            "ap" => {
                self.expect('(')?;
                let start = self.int()?;
                self.expect(',')?;
                let step = self.int()?;
                self.expect(',')?;
                let count = self.nonneg()?;
                self.expect(')')?;
                SetExpr::Progression { start, step, count }
            }
            "res" => {
                self.expect('(')?;
                let a = self.int()?;
                self.expect(',')?;
                let q = self.nonneg()?;
                if q == 0 {
                    return Err(self.error("residue class modulus must be positive"));
                }
                self.expect(')')?;
                SetExpr::Residue { a, q }
            }
            "interval" => {
                self.expect('(')?;
                let len = self.nonneg()?;
                self.expect(')')?;
                SetExpr::Interval(len)
            }
            "complement" => {
                self.expect('(')?;
                let inner = self.expr()?;
                self.expect(')')?;
                SetExpr::Complement(Box::new(inner))
            }
            "union" => {
                self.expect('(')?;
                let x = self.expr()?;
                self.expect(',')?;
                let y = self.expr()?;
                self.expect(')')?;
                SetExpr::Union(Box::new(x), Box::new(y))
            }
            "image" => {
                self.expect('(')?;
                let body_start = self.pos;
                let mut depth = 1usize;
                let mut end = None;
                for (i, c) in self.src[body_start..].char_indices() {
                    match c {
                        '(' => depth += 1,
                        ')' => {
                            depth -= 1;
                            if depth == 0 {
                                end = Some(body_start + i);
                                break;
                            }
                        }
                        _ => {}
                    }
                }
                let Some(end) = end else {
                    return Err(self.error("unbalanced parentheses in image(...)"));
                };
                let body = &self.src[body_start..end];
                let poly = IntValuedPoly::parse(body).map_err(|e| {
                    let offset = self.src[..body_start].chars().count();
                    match e {
                        modmix_core::Error::Parse { column, message } => SetExprError {
                            column: offset + column,
                            message,
                        },
                        other => SetExprError {
                            column: offset + 1,
                            message: other.to_string(),
                        },
                    }
                })?;
                self.pos = end + 1;
                SetExpr::Image(poly)
            }
            "" => {
                self.pos = at;
                return Err(self.error("expected a set expression"));
            }
            other => {
                self.pos = at;
                self.skip_ws();
                return Err(self.error(format!("unknown set constructor '{other}'")));
            }
        };
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(text: &str, n: u64) -> Vec<u64> {
        parse_set(text, &Modulus::new(n).unwrap()).unwrap().to_vec()
    }

    #[test]
    fn constructors() {
        assert_eq!(eval("{0,7}", 15), [0, 7]);
        assert_eq!(eval("{ -1, 16 }", 15), [1, 14]);
        assert_eq!(eval("{}", 5), Vec::<u64>::new());
        assert_eq!(eval("ap(1,3,4)", 10), [0, 1, 4, 7]);
        assert_eq!(eval("squares", 9), [0, 1, 4, 7]);
        assert_eq!(eval("image((n^2+n)/2)", 5), [0, 1, 3]);
        assert_eq!(eval("res(1,3)", 10), [1, 4, 7]);
        assert_eq!(eval("interval(3)", 10), [0, 1, 2]);
        assert_eq!(eval("complement({0})", 3), [1, 2]);
        assert_eq!(eval("union({0}, res(1,4))", 9), [0, 1, 5]);
        assert_eq!(eval("full", 3), [0, 1, 2]);
    }

    #[test]
    fn errors_carry_columns() {
        let e = SetExpr::parse("{0,x}").unwrap_err();
        assert_eq!(e.column, 4);
        let e = SetExpr::parse("ap(1,2)").unwrap_err();
        assert_eq!(e.column, 7);
        let e = SetExpr::parse("image(n^^2)").unwrap_err();
        assert!(e.column >= 7, "{e}");
        let e = SetExpr::parse("cubes").unwrap_err();
        assert_eq!(e.column, 1);
        assert!(SetExpr::parse("{0} junk").is_err());
    }
}
