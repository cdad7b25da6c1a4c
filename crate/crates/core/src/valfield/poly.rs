//! Dense integer-coefficient polynomials in one variable `t`, and reduced
//! fractions of them. These back the rational-function field instance.

use num::bigint::Sign;
use num::{BigInt, BigRational, Integer, One, Zero};
use std::fmt;

/// Polynomial over the integers, coefficients in ascending degree order.
/// The empty coefficient vector is the zero polynomial; otherwise the last
/// coefficient is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `t`.
    pub fn t() -> Self {
        Poly::new(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Order of vanishing at t = 0 (index of the first nonzero coefficient).
    pub fn ord_t(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero);
            let b = rhs.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero);
            out.push(a + b);
        }
        Poly::new(out)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Positive gcd of the coefficients; 0 for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        g
    }

    fn to_rational_coeffs(&self) -> Vec<BigRational> {
        self.coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect()
    }

    fn from_rational_coeffs(coeffs: &[BigRational]) -> (Poly, BigInt) {
        // Clears denominators; returns primitive integer polynomial with
        // positive leading coefficient. Second value is unused scale info.
        let mut den = BigInt::one();
        for c in coeffs {
            den = den.lcm(c.denom());
        }
        let ints: Vec<BigInt> = coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        let p = Poly::new(ints);
        let content = p.content();
        if content.is_zero() {
            return (Poly::zero(), BigInt::one());
        }
        let mut q = p.exact_div_int(&content);
        if q.leading().map_or(false, |l| l.sign() == Sign::Minus) {
            q = q.neg();
        }
        (q, content)
    }

    fn exact_div_int(&self, d: &BigInt) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| c / d).collect(),
        }
    }

    /// Primitive part with positive leading coefficient.
    fn primitive_abs(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let c = self.content();
        let mut p = self.exact_div_int(&c);
        if p.leading().map_or(false, |l| l.sign() == Sign::Minus) {
            p = p.neg();
        }
        p
    }

    /// Primitive gcd (positive leading coefficient). gcd(0, q) = primitive(q).
    /// Uses a primitive remainder sequence: renormalizing to primitive
    /// integer polynomials at each step keeps coefficient growth polynomial.
    pub fn gcd(&self, rhs: &Poly) -> Poly {
        if self.is_zero() {
            return rhs.primitive_abs();
        }
        if rhs.is_zero() {
            return self.primitive_abs();
        }
        let mut a = self.primitive_abs();
        let mut b = rhs.primitive_abs();
        while !b.is_zero() {
            let r = rational_rem(&a.to_rational_coeffs(), &b.to_rational_coeffs());
            let r = Poly::from_rational_coeffs(&r).0;
            a = b;
            b = r;
        }
        a
    }

    /// Exact division, panicking if `rhs` does not divide `self`.
    pub fn exact_div(&self, rhs: &Poly) -> Poly {
        assert!(!rhs.is_zero(), "polynomial division by zero");
        if self.is_zero() {
            return Poly::zero();
        }
        let (q, r) = rational_divmod(&self.to_rational_coeffs(), &rhs.to_rational_coeffs());
        assert!(
            r.iter().all(|c| c.is_zero()),
            "polynomial division was not exact"
        );
        let den = q
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        assert!(den.is_one(), "polynomial quotient was not integral");
        Poly::new(q.into_iter().map(|c| c.to_integer()).collect())
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }
}

fn rational_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let deg_b = b.iter().rposition(|c| !c.is_zero()).expect("divisor is zero");
    let lead_b = b[deg_b].clone();
    let mut rem: Vec<BigRational> = a.to_vec();
    let mut deg_r = rem.iter().rposition(|c| !c.is_zero());
    let mut quot = vec![BigRational::zero(); a.len().max(1)];
    while let Some(dr) = deg_r {
        if dr < deg_b {
            break;
        }
        let factor = &rem[dr] / &lead_b;
        let shift = dr - deg_b;
        quot[shift] = factor.clone();
        for (i, bc) in b.iter().enumerate().take(deg_b + 1) {
            let idx = i + shift;
            let delta = &factor * bc;
            rem[idx] = &rem[idx] - delta;
        }
        deg_r = rem.iter().rposition(|c| !c.is_zero());
    }
    (quot, rem)
}

fn rational_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    rational_divmod(a, b).1
}

/// Reduced fraction of integer polynomials. Canonical form: denominator is
/// nonzero with positive leading coefficient, the primitive parts of
/// numerator and denominator are coprime, and so are their contents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Option<RatFun> {
        if den.is_zero() {
            return None;
        }
        Some(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> RatFun {
        if num.is_zero() {
            return RatFun {
                num: Poly::zero(),
                den: Poly::one(),
            };
        }
        let g = num.gcd(&den);
        let mut num = num.exact_div(&g);
        let mut den = den.exact_div(&g);
        let c = num.content().gcd(&den.content());
        if !c.is_one() {
            num = num.exact_div_int(&c);
            den = den.exact_div_int(&c);
        }
        if den.leading().map_or(false, |l| l.sign() == Sign::Minus) {
            num = num.neg();
            den = den.neg();
        }
        RatFun { num, den }
    }

    pub fn zero() -> RatFun {
        RatFun {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> RatFun {
        RatFun {
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly) -> RatFun {
        RatFun {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn from_int(n: &BigInt) -> RatFun {
        RatFun::from_poly(Poly::constant(n.clone()))
    }

    pub fn t() -> RatFun {
        RatFun::from_poly(Poly::t())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, rhs: &RatFun) -> RatFun {
        let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        let den = self.den.mul(&rhs.den);
        RatFun::reduce(num, den)
    }

    pub fn neg(&self) -> RatFun {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, rhs: &RatFun) -> RatFun {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &RatFun) -> RatFun {
        RatFun::reduce(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }

    pub fn inv(&self) -> Option<RatFun> {
        if self.is_zero() {
            return None;
        }
        Some(RatFun::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, rhs: &RatFun) -> Option<RatFun> {
        rhs.inv().map(|r| self.mul(&r))
    }

    /// t-adic order: ord_t(num) - ord_t(den). None for the zero function.
    pub fn ord_t(&self) -> Option<i64> {
        let n = self.num.ord_t()?;
        let d = self.den.ord_t().expect("denominator is nonzero");
        Some(n as i64 - d as i64)
    }
}

fn fmt_monomial(f: &mut fmt::Formatter<'_>, c: &BigInt, deg: usize, leading: bool) -> fmt::Result {
    let (sign, abs) = if c.sign() == Sign::Minus {
        ("-", -c)
    } else {
        ("+", c.clone())
    };
    if leading {
        if sign == "-" {
            write!(f, "-")?;
        }
    } else {
        write!(f, "{}", sign)?;
    }
    if deg == 0 {
        write!(f, "{}", abs)
    } else {
        if !abs.is_one() {
            write!(f, "{}", abs)?;
        }
        if deg == 1 {
            write!(f, "t")
        } else {
            write!(f, "t^{}", deg)
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut leading = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            fmt_monomial(f, c, deg, leading)?;
            leading = false;
        }
        Ok(())
    }
}

impl Poly {
    fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// True when the textual form is a single token safe to use unquoted as
    /// a denominator: an integer, `t`, or `t^k`.
    fn is_atomic(&self) -> bool {
        match self.term_count() {
            0 => true,
            1 => {
                let deg = self.coeffs.len() - 1;
                let lead = self.leading().unwrap();
                deg == 0 || lead.is_one()
            }
            _ => false,
        }
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one_poly() {
            return write!(f, "{}", self.num);
        }
        if self.num.term_count() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        if self.den.is_atomic() {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

impl Poly {
    fn is_one_poly(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Whether this is the constant polynomial 1.
    pub fn is_one_scalar(&self) -> bool {
        self.is_one_poly()
    }
}
