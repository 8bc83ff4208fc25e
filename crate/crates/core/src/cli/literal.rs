//! Literals for points, balls and opens.
//!
//! ```text
//! point    := rational | rational ',' rational | natural
//! ball     := '(' center ';' rational ')' | center ';' rational
//! open     := 'basic:' ball | 'interval:' rational ',' rational
//!           | 'union:[' (open (',' open)*)? ']' | 'inter:(' open ',' open ')'
//! lacombe  := '[' (ball ('|' ball)*)? ']'
//! ```
//!
//! Error columns are 0-based byte offsets into the literal.

use crate::error::{Error, Result};
use crate::kernel::Nat;
use crate::metric::{ExactKind, ExactPoint};
use crate::reals::{parse_rational_at, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallLit {
    pub center: ExactPoint,
    pub radius: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OpenLit {
    Basic(BallLit),
    Interval(Rational, Rational),
    Union(Vec<OpenLit>),
    Inter(Box<OpenLit>, Box<OpenLit>),
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    kind: ExactKind,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, kind: ExactKind) -> Self {
        Cursor { text, pos: 0, kind }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected `{c}`")))
        }
    }

    fn unexpected(&self, what: &str) -> Error {
        match self.peek() {
            Some(c) => Error::parse(self.pos, format!("{what}, found `{c}`")),
            None => Error::parse(self.pos, format!("{what}, found end of input")),
        }
    }

    fn rational(&mut self) -> Result<Rational> {
        let len = self.rest().find(|c: char| !(c.is_ascii_digit() || c == '-' || c == '/')).unwrap_or(self.rest().len());
        if len == 0 {
            return Err(self.unexpected("expected a number"));
        }
        let q = parse_rational_at(&self.rest()[..len], self.pos)?;
        self.pos += len;
        Ok(q)
    }

    fn point(&mut self) -> Result<ExactPoint> {
        let start = self.pos;
        let p = match self.kind {
            ExactKind::UnitSquare => {
                let x = self.rational()?;
                self.expect(',')?;
                ExactPoint::Plane(x, self.rational()?)
            }
            ExactKind::Rationals | ExactKind::UnitInterval => ExactPoint::Line(self.rational()?),
            _ => {
                let q = self.rational()?;
                match (q.is_integer(), num_bigint::BigUint::try_from(q.to_integer())) {
                    (true, Ok(n)) => ExactPoint::Discrete(Nat::from(n)),
                    _ => return Err(Error::parse(start, "expected a natural number")),
                }
            }
        };
        if !self.kind.contains(&p) {
            return Err(Error::parse(start, format!("{p} is not a point of the space")));
        }
        Ok(p)
    }

    fn ball(&mut self) -> Result<BallLit> {
        let paren = self.eat('(');
        let center = self.point()?;
        self.expect(';')?;
        let at = self.pos;
        let radius = self.rational()?;
        if radius <= Rational::default() {
            return Err(Error::parse(at, "radius must be positive"));
        }
        if paren {
            self.expect(')')?;
        }
        Ok(BallLit { center, radius })
    }

    fn open(&mut self) -> Result<OpenLit> {
        if self.rest().starts_with("basic:") {
            self.pos += "basic:".len();
            Ok(OpenLit::Basic(self.ball()?))
        } else if self.rest().starts_with("interval:") {
            self.pos += "interval:".len();
            let at = self.pos;
            if !matches!(self.kind, ExactKind::Rationals | ExactKind::UnitInterval) {
                return Err(Error::parse(at, "intervals need a line space"));
            }
            let lo = self.rational()?;
            self.expect(',')?;
            let hi = self.rational()?;
            if lo >= hi {
                return Err(Error::parse(at, "empty interval"));
            }
            Ok(OpenLit::Interval(lo, hi))
        } else if self.rest().starts_with("union:") {
            self.pos += "union:".len();
            self.expect('[')?;
            let mut parts = Vec::new();
            if !self.eat(']') {
                loop {
                    parts.push(self.open()?);
                    if self.eat(']') {
                        break;
                    }
                    self.expect(',')?;
                }
            }
            Ok(OpenLit::Union(parts))
        } else if self.rest().starts_with("inter:") {
            self.pos += "inter:".len();
            self.expect('(')?;
            let a = self.open()?;
            self.expect(',')?;
            let b = self.open()?;
            self.expect(')')?;
            Ok(OpenLit::Inter(Box::new(a), Box::new(b)))
        } else {
            Err(self.unexpected("expected `basic:`, `interval:`, `union:` or `inter:`"))
        }
    }

    fn finish<T>(&self, v: T) -> Result<T> {
        if self.pos == self.text.len() {
            Ok(v)
        } else {
            Err(self.unexpected("trailing input"))
        }
    }
}

pub fn parse_point(text: &str, kind: ExactKind) -> Result<ExactPoint> {
    let mut c = Cursor::new(text, kind);
    let p = c.point()?;
    c.finish(p)
}

pub fn parse_ball(text: &str, kind: ExactKind) -> Result<BallLit> {
    let mut c = Cursor::new(text, kind);
    let b = c.ball()?;
    c.finish(b)
}

pub fn parse_open(text: &str, kind: ExactKind) -> Result<OpenLit> {
    let mut c = Cursor::new(text, kind);
    let o = c.open()?;
    c.finish(o)
}

pub fn parse_lacombe(text: &str, kind: ExactKind) -> Result<Vec<BallLit>> {
    let mut c = Cursor::new(text, kind);
    c.expect('[')?;
    let mut balls = Vec::new();
    if !c.eat(']') {
        loop {
            balls.push(c.ball()?);
            if c.eat(']') {
                break;
            }
            c.expect('|')?;
        }
    }
    c.finish(balls)
}
