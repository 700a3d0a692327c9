//! Expression language shared by the command-line front end: a lexer that
//! tracks byte offsets, a recursive-descent parser with the precedence
//! `power > juxtaposition/* > unary minus > +/−`, and generic evaluation
//! into any of the crate's algebras.
//!
//! Juxtaposition of generators denotes the noncommutative product in the
//! written order (`"yx"` means y·x); runs of letters are split greedily into
//! the longest generator names valid for the selected algebra, so `"hbarx"`
//! reads as ℏ·x where `hbar` is a generator.  Integer literals and rational
//! literals `a/b` are accepted; `/` has no other role.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::ore::{OreAlgebraSpec, OreElement};
use crate::poly::Poly;
use crate::qgha::{QghaElement, QghaSpec};
use crate::scalar::{Ring, Scalar};
use crate::star::StarPoly;
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Int(BigInt),
    Word(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    start: usize,
}

fn lex(input: &str) -> Result<Vec<Token>> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => {
                i += 1;
                Tok::Plus
            }
            '-' => {
                i += 1;
                Tok::Minus
            }
            '*' => {
                i += 1;
                Tok::Star
            }
            '/' => {
                i += 1;
                Tok::Slash
            }
            '^' => {
                i += 1;
                Tok::Caret
            }
            '(' => {
                i += 1;
                Tok::LParen
            }
            ')' => {
                i += 1;
                Tok::RParen
            }
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                Tok::Int(input[start..i].parse().expect("digit run"))
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i] as char).is_ascii_alphabetic() {
                    i += 1;
                }
                Tok::Word(input[start..i].to_string())
            }
            c => {
                return Err(Error::Parse {
                    offset: start,
                    msg: format!("unexpected character {c:?}"),
                })
            }
        };
        out.push(Token { tok, start });
    }
    Ok(out)
}

/// Abstract syntax tree over scalars and named generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Expr {
    Num { value: BigRational, offset: usize },
    Gen { name: String, offset: usize },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, usize),
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    input_len: usize,
    generators: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|t| t.start)
            .unwrap_or(self.input_len)
    }

    /// Offset of the most recently consumed token (used to point at the
    /// place after which input unexpectedly ended).
    fn last_start(&self) -> usize {
        if self.pos == 0 {
            0
        } else {
            self.tokens[self.pos - 1].start
        }
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = Expr::Add(Box::new(acc), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = Expr::Sub(Box::new(acc), Box::new(rhs));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        if let Some(Tok::Minus) = self.peek() {
            self.bump();
            let inner = self.term()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.product()
    }

    fn product(&mut self) -> Result<Expr> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let rhs = self.power()?;
                    acc = Expr::Mul(Box::new(acc), Box::new(rhs));
                }
                // Juxtaposition: a factor can start right after the previous
                // one without an explicit `*`.
                Some(Tok::Int(_)) | Some(Tok::Word(_)) | Some(Tok::LParen) => {
                    let rhs = self.power()?;
                    acc = Expr::Mul(Box::new(acc), Box::new(rhs));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let mut acc = self.primary()?;
        while let Some(Tok::Caret) = self.peek() {
            self.bump();
            let at = self.here();
            match self.bump().map(|t| t.tok) {
                Some(Tok::Int(e)) => {
                    let e = e.to_usize().ok_or_else(|| Error::Parse {
                        offset: at,
                        msg: "exponent does not fit in a machine word".into(),
                    })?;
                    acc = Expr::Pow(Box::new(acc), e);
                }
                _ => {
                    return Err(Error::Parse {
                        offset: at,
                        msg: "expected a nonnegative integer exponent after `^`".into(),
                    })
                }
            }
        }
        Ok(acc)
    }

    fn primary(&mut self) -> Result<Expr> {
        let at = self.here();
        match self.bump().map(|t| t.tok) {
            Some(Tok::Int(n)) => {
                // Rational literal a/b.
                if let Some(Tok::Slash) = self.peek() {
                    self.bump();
                    let den_at = self.here();
                    match self.bump().map(|t| t.tok) {
                        Some(Tok::Int(d)) => {
                            if d.is_zero() {
                                return Err(Error::Parse {
                                    offset: den_at,
                                    msg: "zero denominator in rational literal".into(),
                                });
                            }
                            return Ok(Expr::Num {
                                value: BigRational::new(n, d),
                                offset: at,
                            });
                        }
                        _ => {
                            return Err(Error::Parse {
                                offset: den_at,
                                msg: "expected an integer denominator after `/`".into(),
                            })
                        }
                    }
                }
                Ok(Expr::Num { value: BigRational::from_integer(n), offset: at })
            }
            Some(Tok::Word(w)) => self.split_generators(&w, at),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.bump();
                        Ok(inner)
                    }
                    Some(_) => Err(Error::Parse {
                        offset: self.here(),
                        msg: format!("expected `)` to close the group opened at offset {at}"),
                    }),
                    None => Err(Error::Parse {
                        // Input ended inside the group: point at the last
                        // token, after which the `)` is missing.
                        offset: self.last_start(),
                        msg: format!("missing `)` for the group opened at offset {at}"),
                    }),
                }
            }
            Some(other) => Err(Error::Parse {
                offset: at,
                msg: format!("expected a number, generator, or `(`, found {other:?}"),
            }),
            None => Err(Error::Parse {
                offset: self.input_len,
                msg: "unexpected end of input: expected a number, generator, or `(`".into(),
            }),
        }
    }

    /// Splits a letter run into generator names by greedy longest match,
    /// multiplying them in written order.
    fn split_generators(&self, word: &str, word_start: usize) -> Result<Expr> {
        let mut rest = word;
        let mut offset = word_start;
        let mut acc: Option<Expr> = None;
        while !rest.is_empty() {
            let hit = self
                .generators
                .iter()
                .filter(|g| rest.starts_with(**g))
                .max_by_key(|g| g.len());
            let Some(name) = hit else {
                return Err(Error::UnknownGenerator {
                    name: rest.to_string(),
                    offset,
                });
            };
            let node = Expr::Gen { name: name.to_string(), offset };
            acc = Some(match acc {
                None => node,
                Some(prev) => Expr::Mul(Box::new(prev), Box::new(node)),
            });
            offset += name.len();
            rest = &rest[name.len()..];
        }
        Ok(acc.expect("nonempty word"))
    }
}

/// Parses an expression over the given generator names.
pub fn parse_expression(input: &str, generators: &[&str]) -> Result<Expr> {
    let tokens = lex(input)?;
    let mut p = Parser { tokens, pos: 0, input_len: input.len(), generators };
    let e = p.expr()?;
    if let Some(t) = p.tokens.get(p.pos) {
        return Err(Error::Parse {
            offset: t.start,
            msg: format!("unexpected trailing {:?}", t.tok),
        });
    }
    Ok(e)
}

/// An evaluation target: supplies the generator set and the ring operations.
pub trait ExprAlgebra {
    type Elem: Clone;

    /// Generator names the parser accepts; juxtaposed letter runs are split
    /// into these by greedy longest match.
    fn generators(&self) -> Vec<&'static str>;

    fn from_rational(&self, v: &BigRational) -> Result<Self::Elem>;

    /// Called only with names returned by [`ExprAlgebra::generators`].
    fn generator(&self, name: &str) -> Self::Elem;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn neg(&self, a: &Self::Elem) -> Self::Elem;

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;

    fn one(&self) -> Self::Elem;
}

/// Evaluates a parsed tree in the target algebra.
pub fn eval_expr<A: ExprAlgebra>(e: &Expr, alg: &A) -> Result<A::Elem> {
    match e {
        Expr::Num { value, .. } => alg.from_rational(value),
        Expr::Gen { name, .. } => Ok(alg.generator(name)),
        Expr::Neg(a) => Ok(alg.neg(&eval_expr(a, alg)?)),
        Expr::Add(a, b) => Ok(alg.add(&eval_expr(a, alg)?, &eval_expr(b, alg)?)),
        Expr::Sub(a, b) => {
            let bv = eval_expr(b, alg)?;
            Ok(alg.add(&eval_expr(a, alg)?, &alg.neg(&bv)))
        }
        Expr::Mul(a, b) => alg.mul(&eval_expr(a, alg)?, &eval_expr(b, alg)?),
        Expr::Pow(a, e) => {
            let base = eval_expr(a, alg)?;
            let mut acc = alg.one();
            for _ in 0..*e {
                acc = alg.mul(&acc, &base)?;
            }
            Ok(acc)
        }
    }
}

/// Parses and evaluates in one step.
pub fn parse_in<A: ExprAlgebra>(input: &str, alg: &A) -> Result<A::Elem> {
    let names = alg.generators();
    let e = parse_expression(input, &names)?;
    eval_expr(&e, alg)
}

fn ring_rational(ring: Ring, v: &BigRational) -> Result<Scalar> {
    if let Ring::Fp(_) = ring {
        let den = ring.from_bigint(v.denom());
        if den.is_zero() {
            return Err(Error::BadArgument(format!(
                "denominator of {v} is divisible by the field characteristic"
            )));
        }
    }
    Ok(ring.from_rational(v))
}

/// Commutative polynomials in one named variable.
pub struct PolyContext {
    pub ring: Ring,
    pub var: &'static str,
}

impl ExprAlgebra for PolyContext {
    type Elem = Poly;

    fn generators(&self) -> Vec<&'static str> {
        vec![self.var]
    }

    fn from_rational(&self, v: &BigRational) -> Result<Poly> {
        Ok(Poly::constant(ring_rational(self.ring, v)?, self.ring))
    }

    fn generator(&self, _name: &str) -> Poly {
        Poly::x(self.ring)
    }

    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a.add(b)
    }

    fn neg(&self, a: &Poly) -> Poly {
        a.neg()
    }

    fn mul(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        Ok(a.mul(b))
    }

    fn one(&self) -> Poly {
        Poly::one(self.ring)
    }
}

/// Elements of an Ore extension on generators x and y.
pub struct OreContext {
    pub spec: OreAlgebraSpec,
}

impl ExprAlgebra for OreContext {
    type Elem = OreElement;

    fn generators(&self) -> Vec<&'static str> {
        vec!["x", "y"]
    }

    fn from_rational(&self, v: &BigRational) -> Result<OreElement> {
        Ok(OreElement::scalar(
            &self.spec,
            ring_rational(self.spec.ring(), v)?,
        ))
    }

    fn generator(&self, name: &str) -> OreElement {
        match name {
            "x" => OreElement::x(&self.spec),
            "y" => OreElement::y(&self.spec),
            other => unreachable!("generator {other} not offered"),
        }
    }

    fn add(&self, a: &OreElement, b: &OreElement) -> OreElement {
        a.add(b)
    }

    fn neg(&self, a: &OreElement) -> OreElement {
        a.neg()
    }

    fn mul(&self, a: &OreElement, b: &OreElement) -> Result<OreElement> {
        Ok(a.mul(b))
    }

    fn one(&self) -> OreElement {
        OreElement::one(&self.spec)
    }
}

/// Elements of a quantum generalized Heisenberg algebra on x, h, y.
pub struct QghaContext {
    pub spec: QghaSpec,
}

impl ExprAlgebra for QghaContext {
    type Elem = QghaElement;

    fn generators(&self) -> Vec<&'static str> {
        vec!["x", "h", "y"]
    }

    fn from_rational(&self, v: &BigRational) -> Result<QghaElement> {
        let c = ring_rational(self.spec.ring(), v)?;
        Ok(QghaElement::monomial(
            &self.spec,
            0,
            Poly::constant(c, self.spec.ring()),
            0,
        ))
    }

    fn generator(&self, name: &str) -> QghaElement {
        match name {
            "x" => QghaElement::x(&self.spec),
            "h" => QghaElement::h(&self.spec),
            "y" => QghaElement::y(&self.spec),
            other => unreachable!("generator {other} not offered"),
        }
    }

    fn add(&self, a: &QghaElement, b: &QghaElement) -> QghaElement {
        a.add(b)
    }

    fn neg(&self, a: &QghaElement) -> QghaElement {
        a.neg()
    }

    fn mul(&self, a: &QghaElement, b: &QghaElement) -> Result<QghaElement> {
        Ok(a.mul(b))
    }

    fn one(&self) -> QghaElement {
        QghaElement::one(&self.spec)
    }
}

/// Commutative polynomials in x, y, hbar (the star-product carrier space;
/// the product here is the plain commutative one, star products are applied
/// explicitly by the caller).
pub struct StarContext {
    pub ring: Ring,
}

impl ExprAlgebra for StarContext {
    type Elem = StarPoly;

    fn generators(&self) -> Vec<&'static str> {
        vec!["x", "y", "hbar"]
    }

    fn from_rational(&self, v: &BigRational) -> Result<StarPoly> {
        let c = ring_rational(self.ring, v)?;
        Ok(StarPoly::monomial(self.ring, c, 0, 0, 0))
    }

    fn generator(&self, name: &str) -> StarPoly {
        match name {
            "x" => StarPoly::x(self.ring),
            "y" => StarPoly::y(self.ring),
            "hbar" => StarPoly::hbar(self.ring),
            other => unreachable!("generator {other} not offered"),
        }
    }

    fn add(&self, a: &StarPoly, b: &StarPoly) -> StarPoly {
        a.add(b)
    }

    fn neg(&self, a: &StarPoly) -> StarPoly {
        a.neg()
    }

    fn mul(&self, a: &StarPoly, b: &StarPoly) -> Result<StarPoly> {
        Ok(a.mul(b))
    }

    fn one(&self) -> StarPoly {
        StarPoly::one(self.ring)
    }
}

/// Bare scalars (no generators): used for numeric flag values.
pub struct ScalarContext {
    pub ring: Ring,
}

impl ExprAlgebra for ScalarContext {
    type Elem = Scalar;

    fn generators(&self) -> Vec<&'static str> {
        vec![]
    }

    fn from_rational(&self, v: &BigRational) -> Result<Scalar> {
        ring_rational(self.ring, v)
    }

    fn generator(&self, _name: &str) -> Scalar {
        unreachable!("no generators offered")
    }

    fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.ring.add(a, b)
    }

    fn neg(&self, a: &Scalar) -> Scalar {
        self.ring.neg(a)
    }

    fn mul(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.ring.mul(a, b))
    }

    fn one(&self) -> Scalar {
        self.ring.one()
    }
}
