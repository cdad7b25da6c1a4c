//! Exact valued-field arithmetic.
//!
//! Two concrete instances are provided: the rationals with a p-adic
//! valuation, and rational functions over the rationals with the t-adic
//! valuation. Valuations take values in the rationals extended by the two
//! infinities, and `logabs(x) = -val(x)` so that geometric cross ratios come
//! out as logarithms of absolute values.

mod poly;

pub use poly::{Poly, RatFun};

use crate::error::{GeomError, Result};
use num::{BigInt, BigRational, One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// A field instance, fixed once per run. Scalars carry their instance with
/// them; mixing instances in one operation is a hard error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Field {
    /// Rationals with the p-adic valuation.
    Qp(u64),
    /// Rational functions in `t` with the t-adic valuation.
    Qt,
}

impl Field {
    pub fn qp(p: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(GeomError::NotPrime(p));
        }
        Ok(Field::Qp(p))
    }

    pub fn qt() -> Field {
        Field::Qt
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Qp(_) => Scalar::Rat(BigRational::zero()),
            Field::Qt => Scalar::Fun(RatFun::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            Field::Qp(_) => Scalar::Rat(BigRational::one()),
            Field::Qt => Scalar::Fun(RatFun::one()),
        }
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        match self {
            Field::Qp(_) => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            Field::Qt => Scalar::Fun(RatFun::from_int(&BigInt::from(n))),
        }
    }

    /// The uniformizer: p in the p-adic instance, t in the t-adic one.
    pub fn uniformizer(&self) -> Scalar {
        match self {
            Field::Qp(p) => Scalar::Rat(BigRational::from_integer(BigInt::from(*p))),
            Field::Qt => Scalar::Fun(RatFun::t()),
        }
    }

    fn expects(&self, s: &Scalar) -> bool {
        matches!(
            (self, s),
            (Field::Qp(_), Scalar::Rat(_)) | (Field::Qt, Scalar::Fun(_))
        )
    }

    /// The valuation of a scalar; `val(0) = +inf`.
    pub fn val(&self, s: &Scalar) -> Val {
        assert!(
            self.expects(s),
            "scalar does not belong to this field instance"
        );
        match (self, s) {
            (Field::Qp(p), Scalar::Rat(x)) => {
                if x.is_zero() {
                    Val::PlusInf
                } else {
                    let p = BigInt::from(*p);
                    let v = int_val(x.numer(), &p) - int_val(x.denom(), &p);
                    Val::from_i64(v)
                }
            }
            (Field::Qt, Scalar::Fun(x)) => match x.ord_t() {
                None => Val::PlusInf,
                Some(v) => Val::from_i64(v),
            },
            _ => unreachable!(),
        }
    }

    /// log|x| = -val(x); logabs(0) = -inf.
    pub fn logabs(&self, s: &Scalar) -> Val {
        -self.val(s)
    }

    pub fn parse(&self, text: &str) -> Result<Scalar> {
        parse::parse_scalar(self, text)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn int_val(x: &BigInt, p: &BigInt) -> i64 {
    assert!(!x.is_zero());
    let mut v = 0i64;
    let mut cur = x.abs();
    loop {
        let (q, r) = num::Integer::div_rem(&cur, p);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        cur = q;
    }
}

/// Exact field element of one of the two instances. The representation is
/// canonical (reduced fractions, normalized signs), so `==` is structural
/// equality of field elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Fun(RatFun),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(x) => x.is_zero(),
            Scalar::Fun(x) => x.is_zero(),
        }
    }

    pub fn zero_like(&self) -> Scalar {
        match self {
            Scalar::Rat(_) => Scalar::Rat(BigRational::zero()),
            Scalar::Fun(_) => Scalar::Fun(RatFun::zero()),
        }
    }

    pub fn one_like(&self) -> Scalar {
        match self {
            Scalar::Rat(_) => Scalar::Rat(BigRational::one()),
            Scalar::Fun(_) => Scalar::Fun(RatFun::one()),
        }
    }

    pub fn int_like(&self, n: i64) -> Scalar {
        match self {
            Scalar::Rat(_) => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            Scalar::Fun(_) => Scalar::Fun(RatFun::from_int(&BigInt::from(n))),
        }
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Fun(a), Scalar::Fun(b)) => Scalar::Fun(a.add(b)),
            _ => panic!("{}", GeomError::MixedFieldInstances),
        }
    }

    pub fn sub(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a - b),
            (Scalar::Fun(a), Scalar::Fun(b)) => Scalar::Fun(a.sub(b)),
            _ => panic!("{}", GeomError::MixedFieldInstances),
        }
    }

    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Fun(a), Scalar::Fun(b)) => Scalar::Fun(a.mul(b)),
            _ => panic!("{}", GeomError::MixedFieldInstances),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Fun(a) => Scalar::Fun(a.neg()),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        match self {
            Scalar::Rat(a) => {
                if a.is_zero() {
                    Err(GeomError::DivisionByZero)
                } else {
                    Ok(Scalar::Rat(a.recip()))
                }
            }
            Scalar::Fun(a) => a.inv().map(Scalar::Fun).ok_or(GeomError::DivisionByZero),
        }
    }

    pub fn div(&self, rhs: &Scalar) -> Result<Scalar> {
        Ok(self.mul(&rhs.inv()?))
    }

    pub fn pow(&self, n: i64) -> Result<Scalar> {
        if n == 0 {
            return Ok(self.one_like());
        }
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut acc = base.one_like();
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// A fixed total order used only for deterministic tie-breaking; zero
    /// sorts first, then the canonical textual form lexicographically.
    pub fn tie_break_key(&self) -> (bool, String) {
        (!self.is_zero(), self.to_string())
    }

    /// Whether the scalar is an integer (resp. an integer polynomial).
    pub fn is_integral(&self) -> bool {
        match self {
            Scalar::Rat(x) => x.denom().is_one(),
            Scalar::Fun(x) => x.den().is_one_scalar(),
        }
    }

    /// The numerator and denominator as integral scalars.
    pub fn num_den_parts(&self) -> (Scalar, Scalar) {
        match self {
            Scalar::Rat(x) => (
                Scalar::Rat(BigRational::from_integer(x.numer().clone())),
                Scalar::Rat(BigRational::from_integer(x.denom().clone())),
            ),
            Scalar::Fun(x) => (
                Scalar::Fun(RatFun::from_poly(x.num().clone())),
                Scalar::Fun(RatFun::from_poly(x.den().clone())),
            ),
        }
    }
}

/// Rescales a vector of scalars to a primitive integral representative
/// (integer entries with gcd 1, or integer-polynomial entries with trivial
/// common factor). Returns the scaled entries and the scale applied, so
/// callers can compensate weights by its valuation. A zero vector is
/// returned unchanged with scale 1.
pub fn primitive_vector(entries: &[Scalar]) -> (Vec<Scalar>, Scalar) {
    if entries.is_empty() || entries.iter().all(|e| e.is_zero()) {
        let one = entries
            .first()
            .map(|e| e.one_like())
            .unwrap_or(Scalar::Rat(BigRational::one()));
        return (entries.to_vec(), one);
    }
    match &entries[0] {
        Scalar::Rat(_) => {
            let mut den_lcm = BigInt::one();
            for e in entries {
                if let Scalar::Rat(x) = e {
                    den_lcm = num::Integer::lcm(&den_lcm, x.denom());
                } else {
                    panic!("{}", GeomError::MixedFieldInstances);
                }
            }
            let mut nums: Vec<BigInt> = Vec::with_capacity(entries.len());
            for e in entries {
                if let Scalar::Rat(x) = e {
                    nums.push((x * BigRational::from_integer(den_lcm.clone())).to_integer());
                }
            }
            let mut g = BigInt::zero();
            for n in &nums {
                g = num::Integer::gcd(&g, n);
            }
            if g.is_zero() {
                g = BigInt::one();
            }
            let scaled: Vec<Scalar> = nums
                .into_iter()
                .map(|n| Scalar::Rat(BigRational::from_integer(n / &g)))
                .collect();
            let scale = Scalar::Rat(BigRational::new(den_lcm, g));
            (scaled, scale)
        }
        Scalar::Fun(_) => {
            let mut den_lcm = Poly::one();
            for e in entries {
                if let Scalar::Fun(x) = e {
                    let g = den_lcm.gcd(x.den());
                    den_lcm = den_lcm.mul(&x.den().exact_div(&g));
                } else {
                    panic!("{}", GeomError::MixedFieldInstances);
                }
            }
            let mut nums: Vec<Poly> = Vec::with_capacity(entries.len());
            for e in entries {
                if let Scalar::Fun(x) = e {
                    let f = x.mul(&RatFun::from_poly(den_lcm.clone()));
                    debug_assert!(f.den().is_one_scalar());
                    nums.push(f.num().clone());
                }
            }
            let mut g = Poly::zero();
            for n in &nums {
                g = g.gcd(n);
            }
            let mut content = BigInt::zero();
            for n in &nums {
                content = num::Integer::gcd(&content, &n.content());
            }
            if g.is_zero() {
                g = Poly::one();
            }
            if content.is_zero() {
                content = BigInt::one();
            }
            let divisor = g.mul(&Poly::constant(content));
            let scaled: Vec<Scalar> = nums
                .into_iter()
                .map(|n| Scalar::Fun(RatFun::from_poly(n.exact_div(&divisor))))
                .collect();
            let scale = Scalar::Fun(
                RatFun::new(den_lcm, divisor).expect("nonzero divisor"),
            );
            (scaled, scale)
        }
    }
}

/// Exact field arithmetic with the four operations; division by zero is an
/// error, everything else is total within one instance.
pub fn field_arith(a: &Scalar, b: &Scalar, op: FieldOp) -> Result<Scalar> {
    match (a, b) {
        (Scalar::Rat(_), Scalar::Rat(_)) | (Scalar::Fun(_), Scalar::Fun(_)) => {}
        _ => return Err(GeomError::MixedFieldInstances),
    }
    match op {
        FieldOp::Add => Ok(a.add(b)),
        FieldOp::Sub => Ok(a.sub(b)),
        FieldOp::Mul => Ok(a.mul(b)),
        FieldOp::Div => a.div(b),
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(x) => {
                if x.denom().is_one() {
                    write!(f, "{}", x.numer())
                } else {
                    write!(f, "{}/{}", x.numer(), x.denom())
                }
            }
            Scalar::Fun(x) => write!(f, "{}", x),
        }
    }
}

/// Valuation value: an exact rational or one of the infinities. Arithmetic
/// follows the tropical conventions; +inf plus -inf is indeterminate and
/// panics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Val {
    MinusInf,
    Finite(BigRational),
    PlusInf,
}

impl Val {
    pub fn from_i64(v: i64) -> Val {
        Val::Finite(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(v: BigRational) -> Val {
        Val::Finite(v)
    }

    pub fn zero() -> Val {
        Val::Finite(BigRational::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Val::Finite(_))
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            Val::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn expect_finite(&self, what: &str) -> Result<BigRational> {
        match self {
            Val::Finite(v) => Ok(v.clone()),
            _ => Err(GeomError::PreconditionViolated(format!(
                "{} must be finite, got {}",
                what, self
            ))),
        }
    }

    pub fn add(&self, rhs: &Val) -> Val {
        match (self, rhs) {
            (Val::Finite(a), Val::Finite(b)) => Val::Finite(a + b),
            (Val::PlusInf, Val::MinusInf) | (Val::MinusInf, Val::PlusInf) => {
                panic!("indeterminate valuation sum (+inf) + (-inf)")
            }
            (Val::PlusInf, _) | (_, Val::PlusInf) => Val::PlusInf,
            (Val::MinusInf, _) | (_, Val::MinusInf) => Val::MinusInf,
        }
    }

    pub fn sub(&self, rhs: &Val) -> Val {
        self.add(&-rhs.clone())
    }
}

impl std::ops::Neg for Val {
    type Output = Val;
    fn neg(self) -> Val {
        match self {
            Val::MinusInf => Val::PlusInf,
            Val::PlusInf => Val::MinusInf,
            Val::Finite(v) => Val::Finite(-v),
        }
    }
}

impl PartialOrd for Val {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Val {
    fn cmp(&self, other: &Self) -> Ordering {
        use Val::*;
        match (self, other) {
            (MinusInf, MinusInf) | (PlusInf, PlusInf) => Ordering::Equal,
            (MinusInf, _) => Ordering::Less,
            (_, MinusInf) => Ordering::Greater,
            (PlusInf, _) => Ordering::Greater,
            (_, PlusInf) => Ordering::Less,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::MinusInf => write!(f, "-inf"),
            Val::PlusInf => write!(f, "inf"),
            Val::Finite(v) => {
                if v.denom().is_one() {
                    write!(f, "{}", v.numer())
                } else {
                    write!(f, "{}/{}", v.numer(), v.denom())
                }
            }
        }
    }
}

mod parse {
    use super::*;

    #[derive(Clone, Debug, PartialEq)]
    enum Tok {
        Int(BigInt),
        T,
        Plus,
        Minus,
        Star,
        Slash,
        Caret,
        LParen,
        RParen,
    }

    fn lex(text: &str) -> Result<Vec<Tok>> {
        let mut toks = Vec::new();
        let mut chars = text.chars().peekable();
        while let Some(&c) = chars.peek() {
            match c {
                ' ' | '\t' => {
                    chars.next();
                }
                '0'..='9' => {
                    let mut digits = String::new();
                    while let Some(&d) = chars.peek() {
                        if d.is_ascii_digit() {
                            digits.push(d);
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    toks.push(Tok::Int(digits.parse().unwrap()));
                }
                't' => {
                    chars.next();
                    toks.push(Tok::T);
                }
                '+' => {
                    chars.next();
                    toks.push(Tok::Plus);
                }
                '-' => {
                    chars.next();
                    toks.push(Tok::Minus);
                }
                '*' => {
                    chars.next();
                    toks.push(Tok::Star);
                }
                '/' => {
                    chars.next();
                    toks.push(Tok::Slash);
                }
                '^' => {
                    chars.next();
                    toks.push(Tok::Caret);
                }
                '(' => {
                    chars.next();
                    toks.push(Tok::LParen);
                }
                ')' => {
                    chars.next();
                    toks.push(Tok::RParen);
                }
                other => {
                    return Err(GeomError::Parse(format!(
                        "unexpected character '{}' in scalar",
                        other
                    )))
                }
            }
        }
        Ok(toks)
    }

    struct Parser<'a> {
        field: &'a Field,
        toks: Vec<Tok>,
        pos: usize,
    }

    impl<'a> Parser<'a> {
        fn peek(&self) -> Option<&Tok> {
            self.toks.get(self.pos)
        }

        fn next(&mut self) -> Option<Tok> {
            let t = self.toks.get(self.pos).cloned();
            if t.is_some() {
                self.pos += 1;
            }
            t
        }

        fn expr(&mut self) -> Result<Scalar> {
            let mut acc = self.term()?;
            while let Some(tok) = self.peek() {
                match tok {
                    Tok::Plus => {
                        self.pos += 1;
                        acc = acc.add(&self.term()?);
                    }
                    Tok::Minus => {
                        self.pos += 1;
                        acc = acc.sub(&self.term()?);
                    }
                    _ => break,
                }
            }
            Ok(acc)
        }

        fn term(&mut self) -> Result<Scalar> {
            let mut acc = self.factor()?;
            loop {
                match self.peek() {
                    Some(Tok::Star) => {
                        self.pos += 1;
                        acc = acc.mul(&self.factor()?);
                    }
                    Some(Tok::Slash) => {
                        self.pos += 1;
                        acc = acc.div(&self.factor()?)?;
                    }
                    // Implicit multiplication: "2t", "2(1+t)", "t(..)".
                    Some(Tok::Int(_)) | Some(Tok::T) | Some(Tok::LParen) => {
                        acc = acc.mul(&self.factor()?);
                    }
                    _ => break,
                }
            }
            Ok(acc)
        }

        fn factor(&mut self) -> Result<Scalar> {
            let base = self.atom()?;
            if let Some(Tok::Caret) = self.peek() {
                self.pos += 1;
                let neg = if let Some(Tok::Minus) = self.peek() {
                    self.pos += 1;
                    true
                } else {
                    false
                };
                match self.next() {
                    Some(Tok::Int(n)) => {
                        let e: i64 = n.try_into().map_err(|_| {
                            GeomError::Parse("exponent too large".to_string())
                        })?;
                        if e.unsigned_abs() > 4096 {
                            return Err(GeomError::Parse("exponent too large".into()));
                        }
                        return base.pow(if neg { -e } else { e });
                    }
                    _ => return Err(GeomError::Parse("expected integer exponent".into())),
                }
            }
            Ok(base)
        }

        fn atom(&mut self) -> Result<Scalar> {
            match self.next() {
                Some(Tok::Int(n)) => Ok(match self.field {
                    Field::Qp(_) => Scalar::Rat(BigRational::from_integer(n)),
                    Field::Qt => Scalar::Fun(RatFun::from_int(&n)),
                }),
                Some(Tok::T) => match self.field {
                    Field::Qt => Ok(Scalar::Fun(RatFun::t())),
                    Field::Qp(_) => Err(GeomError::Parse(
                        "'t' is not a scalar of the p-adic instance".into(),
                    )),
                },
                Some(Tok::Minus) => Ok(self.factor()?.neg()),
                Some(Tok::LParen) => {
                    let inner = self.expr()?;
                    match self.next() {
                        Some(Tok::RParen) => Ok(inner),
                        _ => Err(GeomError::Parse("missing closing parenthesis".into())),
                    }
                }
                other => Err(GeomError::Parse(format!(
                    "unexpected token {:?} in scalar",
                    other
                ))),
            }
        }
    }

    pub fn parse_scalar(field: &Field, text: &str) -> Result<Scalar> {
        let toks = lex(text)?;
        if toks.is_empty() {
            return Err(GeomError::Parse("empty scalar".into()));
        }
        let mut p = Parser {
            field,
            toks,
            pos: 0,
        };
        let s = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(GeomError::Parse(format!(
                "trailing input in scalar at token {}",
                p.pos
            )));
        }
        Ok(s)
    }
}
