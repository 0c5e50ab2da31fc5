use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::descriptor::FieldDescriptor;
use super::padic::{PAdic, Valuation};
use crate::error::{Error, Result};

/// Exact field arithmetic used by the generic matrix code.
///
/// Method names avoid the `std::ops` ones so that both can be in scope for
/// `BigRational`.
pub trait FieldElement: Clone + fmt::Debug + fmt::Display {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn int_like(&self, x: i64) -> Self;
    fn plus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negate(&self) -> Self;
    fn try_inv(&self) -> Result<Self>;
    /// Zero, or zero to the known precision.
    fn is_zero(&self) -> bool;

    fn minus(&self, rhs: &Self) -> Self {
        self.plus(&rhs.negate())
    }

    fn try_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.times(&rhs.try_inv()?))
    }

    fn is_one(&self) -> bool {
        self.minus(&self.one_like()).is_zero()
    }

    fn same_as(&self, rhs: &Self) -> bool {
        self.minus(rhs).is_zero()
    }

    fn square(&self) -> Self {
        self.times(self)
    }

    /// Three-valued zero test for membership predicates. Exact kinds never
    /// answer `Indeterminate`.
    fn zero_test(&self) -> ZeroTest {
        if self.is_zero() {
            ZeroTest::Zero
        } else {
            ZeroTest::Nonzero
        }
    }
}

/// Outcome of testing a possibly inexact value against zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroTest {
    Zero,
    Nonzero,
    Indeterminate,
}

impl FieldElement for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn int_like(&self, x: i64) -> Self {
        BigRational::from_integer(x.into())
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negate(&self) -> Self {
        -self
    }
    fn try_inv(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl FieldElement for PAdic {
    fn zero_like(&self) -> Self {
        PAdic::zero(self.p())
    }
    fn one_like(&self) -> Self {
        PAdic::one(self.p(), self.precision().max(1)).expect("precision already validated")
    }
    fn int_like(&self, x: i64) -> Self {
        PAdic::from_i64(x, self.p(), self.precision().max(1)).expect("precision already validated")
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.checked_add(rhs).expect("p-adic operands over one prime")
    }
    fn times(&self, rhs: &Self) -> Self {
        self.checked_mul(rhs).expect("p-adic operands over one prime")
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn try_inv(&self) -> Result<Self> {
        self.checked_inv()
    }
    fn is_zero(&self) -> bool {
        PAdic::is_zero(self)
    }
    /// A vanishing value counts as zero once it is known modulo `p`;
    /// `O(p^k)` with `k <= 0` carries no information and is indeterminate.
    fn zero_test(&self) -> ZeroTest {
        if !self.is_zero() {
            ZeroTest::Nonzero
        } else if self.absolute_precision().is_some_and(|k| k <= 0) {
            ZeroTest::Indeterminate
        } else {
            ZeroTest::Zero
        }
    }
}

/// An element `re + im·i` of `Q(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gaussian {
    pub re: BigRational,
    pub im: BigRational,
}

impl Gaussian {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Complex absolute value as a float.
    pub fn abs(&self) -> f64 {
        self.norm().to_f64().unwrap_or(f64::INFINITY).sqrt()
    }
}

impl From<BigRational> for Gaussian {
    fn from(re: BigRational) -> Self {
        Self::new(re, BigRational::zero())
    }
}

impl FieldElement for Gaussian {
    fn zero_like(&self) -> Self {
        Self::from_ints(0, 0)
    }
    fn one_like(&self) -> Self {
        Self::from_ints(1, 0)
    }
    fn int_like(&self, x: i64) -> Self {
        Self::from_ints(x, 0)
    }
    fn plus(&self, rhs: &Self) -> Self {
        Self::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
    fn times(&self, rhs: &Self) -> Self {
        Self::new(&self.re * &rhs.re - &self.im * &rhs.im, &self.re * &rhs.im + &self.im * &rhs.re)
    }
    fn negate(&self) -> Self {
        Self::new(-&self.re, -&self.im)
    }
    fn try_inv(&self) -> Result<Self> {
        let n = self.norm();
        if Zero::is_zero(&n) {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::new(&self.re / &n, -&self.im / &n))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }
}

impl fmt::Display for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im = |x: &BigRational| -> String {
            if One::is_one(x) {
                "i".into()
            } else if One::is_one(&-x) {
                "-i".into()
            } else {
                format!("{x}i")
            }
        };
        match (Zero::is_zero(&self.re), Zero::is_zero(&self.im)) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}", im(&self.im)),
            (false, false) => {
                let s = im(&self.im);
                if s.starts_with('-') {
                    write!(f, "{}{s}", self.re)
                } else {
                    write!(f, "{}+{s}", self.re)
                }
            }
        }
    }
}

impl FromStr for Gaussian {
    type Err = Error;

    /// Accepts `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i` with rational `a`, `b`.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(body) = s.strip_suffix('i') else {
            return Ok(Self::from(parse_rational(&s)?));
        };
        let split = body.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').map(|(k, _)| k).last();
        let coefficient = |t: &str| -> Result<BigRational> {
            match t {
                "" | "+" => Ok(BigRational::one()),
                "-" => Ok(-BigRational::one()),
                t => parse_rational(t),
            }
        };
        match split {
            Some(k) => Ok(Self::new(parse_rational(&body[..k])?, coefficient(&body[k..])?)),
            None => Ok(Self::new(BigRational::zero(), coefficient(body)?)),
        }
    }
}

/// Parses `a`, `a/b`, or a finite decimal such as `-1.25` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("malformed rational '{s}'"));
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let digits = format!("{}{frac}", int.trim_start_matches(['-', '+']));
        let num: BigInt = digits.parse().map_err(|_| bad())?;
        let den = BigInt::from(10).pow(frac.len() as u32);
        let q = BigRational::new(num, den);
        return Ok(if negative { -q } else { q });
    }
    let q: BigRational = s.parse().map_err(|_| bad())?;
    Ok(q)
}

/// A field element of one of the exact kinds.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ScalarRepr", into = "ScalarRepr")]
pub enum Scalar {
    Rational(BigRational),
    Gaussian(Gaussian),
    PAdic(PAdic),
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ScalarRepr {
    Rational(String),
    Gaussian(String),
    Padic(String),
}

impl TryFrom<ScalarRepr> for Scalar {
    type Error = Error;
    fn try_from(r: ScalarRepr) -> Result<Self> {
        Ok(match r {
            ScalarRepr::Rational(s) => Scalar::Rational(parse_rational(&s)?),
            ScalarRepr::Gaussian(s) => Scalar::Gaussian(s.parse()?),
            ScalarRepr::Padic(s) => Scalar::PAdic(s.parse()?),
        })
    }
}

impl From<Scalar> for ScalarRepr {
    fn from(s: Scalar) -> Self {
        match s {
            Scalar::Rational(q) => ScalarRepr::Rational(q.to_string()),
            Scalar::Gaussian(g) => ScalarRepr::Gaussian(g.to_string()),
            Scalar::PAdic(x) => ScalarRepr::Padic(x.to_string()),
        }
    }
}

impl Scalar {
    pub fn int(x: i64) -> Self {
        Scalar::Rational(BigRational::from_integer(x.into()))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::Rational(BigRational::new(n.into(), d.into()))
    }

    pub fn gaussian(re: i64, im: i64) -> Self {
        Scalar::Gaussian(Gaussian::from_ints(re, im))
    }

    /// Parses `text` as an element of `field`; p-adic fields embed the
    /// parsed rational at `precision` digits.
    pub fn parse_in(text: &str, field: &FieldDescriptor, precision: u32) -> Result<Self> {
        match field.completion() {
            FieldDescriptor::Reals => Ok(Scalar::Rational(parse_rational(text)?)),
            FieldDescriptor::Complexes => {
                let g: Gaussian = text.parse()?;
                Ok(if Zero::is_zero(&g.im) { Scalar::Rational(g.re) } else { Scalar::Gaussian(g) })
            }
            FieldDescriptor::PAdics(p) => {
                let q = parse_rational(text)?;
                if field.is_complete() {
                    Ok(Scalar::PAdic(PAdic::from_rational(&q, p, precision)?))
                } else {
                    Ok(Scalar::Rational(q))
                }
            }
            _ => Err(Error::Unsupported(format!("no scalar arithmetic over {field}"))),
        }
    }

    /// Checks that this scalar can live in `field`.
    pub fn check_kind(&self, field: &FieldDescriptor) -> Result<()> {
        let ok = match (self, field.completion()) {
            (Scalar::Rational(_), FieldDescriptor::Reals | FieldDescriptor::Complexes) => true,
            (Scalar::Rational(_), FieldDescriptor::PAdics(_)) => true,
            (Scalar::Gaussian(_), FieldDescriptor::Complexes) => true,
            (Scalar::PAdic(x), FieldDescriptor::PAdics(p)) => field.is_complete() && x.p() == p,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::KindMismatch(format!("{self} in {field}")))
        }
    }

    pub fn as_padic(&self) -> Option<&PAdic> {
        match self {
            Scalar::PAdic(x) => Some(x),
            _ => None,
        }
    }

    fn promote_pair(&self, rhs: &Self) -> (Self, Self) {
        use Scalar::*;
        match (self, rhs) {
            (Rational(a), Gaussian(_)) => (Gaussian(a.clone().into()), rhs.clone()),
            (Gaussian(_), Rational(b)) => (self.clone(), Gaussian(b.clone().into())),
            (Rational(a), PAdic(b)) => (PAdic(embed(a, b)), rhs.clone()),
            (PAdic(a), Rational(b)) => (self.clone(), PAdic(embed(b, a))),
            _ => (self.clone(), rhs.clone()),
        }
    }
}

fn embed(q: &BigRational, like: &PAdic) -> PAdic {
    PAdic::from_rational(q, like.p(), like.precision().max(1)).expect("prime and precision already validated")
}

macro_rules! binary {
    ($self:ident, $rhs:ident, $method:ident) => {{
        let (a, b) = $self.promote_pair($rhs);
        match (a, b) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a.$method(&b)),
            (Scalar::Gaussian(a), Scalar::Gaussian(b)) => Scalar::Gaussian(a.$method(&b)),
            (Scalar::PAdic(a), Scalar::PAdic(b)) => Scalar::PAdic(a.$method(&b)),
            (a, b) => panic!("cannot combine {a} and {b}"),
        }
    }};
}

impl FieldElement for Scalar {
    fn zero_like(&self) -> Self {
        match self {
            Scalar::Rational(q) => Scalar::Rational(q.zero_like()),
            Scalar::Gaussian(g) => Scalar::Gaussian(g.zero_like()),
            Scalar::PAdic(x) => Scalar::PAdic(x.zero_like()),
        }
    }
    fn one_like(&self) -> Self {
        match self {
            Scalar::Rational(q) => Scalar::Rational(q.one_like()),
            Scalar::Gaussian(g) => Scalar::Gaussian(g.one_like()),
            Scalar::PAdic(x) => Scalar::PAdic(x.one_like()),
        }
    }
    fn int_like(&self, v: i64) -> Self {
        match self {
            Scalar::Rational(q) => Scalar::Rational(q.int_like(v)),
            Scalar::Gaussian(g) => Scalar::Gaussian(g.int_like(v)),
            Scalar::PAdic(x) => Scalar::PAdic(x.int_like(v)),
        }
    }
    fn plus(&self, rhs: &Self) -> Self {
        binary!(self, rhs, plus)
    }
    fn times(&self, rhs: &Self) -> Self {
        binary!(self, rhs, times)
    }
    fn negate(&self) -> Self {
        match self {
            Scalar::Rational(q) => Scalar::Rational(q.negate()),
            Scalar::Gaussian(g) => Scalar::Gaussian(g.negate()),
            Scalar::PAdic(x) => Scalar::PAdic(x.negate()),
        }
    }
    fn try_inv(&self) -> Result<Self> {
        Ok(match self {
            Scalar::Rational(q) => Scalar::Rational(q.try_inv()?),
            Scalar::Gaussian(g) => Scalar::Gaussian(g.try_inv()?),
            Scalar::PAdic(x) => Scalar::PAdic(x.try_inv()?),
        })
    }
    fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => FieldElement::is_zero(q),
            Scalar::Gaussian(g) => g.is_zero(),
            Scalar::PAdic(x) => x.is_zero(),
        }
    }
    fn zero_test(&self) -> ZeroTest {
        match self {
            Scalar::PAdic(x) => x.zero_test(),
            other => {
                if other.is_zero() {
                    ZeroTest::Zero
                } else {
                    ZeroTest::Nonzero
                }
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{q}"),
            Scalar::Gaussian(g) => write!(f, "{g}"),
            Scalar::PAdic(x) => write!(f, "{x}"),
        }
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::Rational(q)
    }
}

impl From<Gaussian> for Scalar {
    fn from(g: Gaussian) -> Self {
        Scalar::Gaussian(g)
    }
}

impl From<PAdic> for Scalar {
    fn from(x: PAdic) -> Self {
        Scalar::PAdic(x)
    }
}

/// Valuation and normalized absolute value of a scalar in `field`.
///
/// `valuation` is `Some` for non-archimedean fields and for zero
/// (`+inf`); archimedean fields have no valuation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValuedAbs {
    pub valuation: Option<Valuation>,
    pub absolute: f64,
}

pub fn valuation_abs(a: &Scalar, field: &FieldDescriptor) -> Result<ValuedAbs> {
    a.check_kind(field)?;
    if FieldElement::is_zero(a) {
        return Ok(ValuedAbs { valuation: Some(Valuation::Infinite), absolute: 0.0 });
    }
    match field.completion() {
        FieldDescriptor::Reals | FieldDescriptor::Complexes => {
            let absolute = match a {
                Scalar::Rational(q) => q.abs().to_f64().unwrap_or(f64::INFINITY),
                Scalar::Gaussian(g) => g.abs(),
                Scalar::PAdic(_) => unreachable!("kind checked"),
            };
            Ok(ValuedAbs { valuation: None, absolute })
        }
        FieldDescriptor::PAdics(p) => {
            let x = match a {
                Scalar::PAdic(x) => x.clone(),
                Scalar::Rational(q) => PAdic::from_rational(q, p, 1)?,
                Scalar::Gaussian(_) => unreachable!("kind checked"),
            };
            Ok(ValuedAbs { valuation: Some(x.valuation()), absolute: x.abs() })
        }
        _ => Err(Error::Unsupported(format!("no scalar arithmetic over {field}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_text_round_trip() {
        for (text, re, im) in [("3", 3, 0), ("i", 0, 1), ("-i", 0, -1), ("2+3i", 2, 3), ("2-i", 2, -1), ("-5i", 0, -5)]
        {
            let g: Gaussian = text.parse().unwrap();
            assert_eq!(g, Gaussian::from_ints(re, im), "{text}");
            assert_eq!(g.to_string().parse::<Gaussian>().unwrap(), g);
        }
        let g: Gaussian = "1/2-3/4i".parse().unwrap();
        assert_eq!(g.im, BigRational::new((-3).into(), 4.into()));
    }

    #[test]
    fn decimals_parse_exactly() {
        assert_eq!(parse_rational("-1.25").unwrap(), BigRational::new((-5).into(), 4.into()));
        assert_eq!(parse_rational("3/6").unwrap(), BigRational::new(1.into(), 2.into()));
        assert!(parse_rational("1.").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn valuation_abs_examples() {
        let qp5 = FieldDescriptor::PAdics(5);
        let fifty = Scalar::parse_in("50", &qp5, 6).unwrap();
        let v = valuation_abs(&fifty, &qp5).unwrap();
        assert_eq!(v.valuation, Some(Valuation::Finite(2)));
        assert_eq!(v.absolute, 1.0 / 25.0);

        let zero = valuation_abs(&Scalar::int(0), &FieldDescriptor::Rationals).unwrap();
        assert_eq!(zero.valuation, Some(Valuation::Infinite));
        assert_eq!(zero.absolute, 0.0);

        let z = valuation_abs(&Scalar::gaussian(3, 4), &FieldDescriptor::GaussianRationals).unwrap();
        assert_eq!(z.absolute, 5.0);
        assert_eq!(z.valuation, None);

        assert!(valuation_abs(&Scalar::gaussian(3, 4), &FieldDescriptor::Rationals).is_err());
        let rational_in_q_at_5 = valuation_abs(&Scalar::ratio(3, 25), &FieldDescriptor::RationalsPAdic(5)).unwrap();
        assert_eq!(rational_in_q_at_5.valuation, Some(Valuation::Finite(-2)));
    }

    #[test]
    fn mixed_kinds_promote() {
        let a = Scalar::int(2).plus(&Scalar::gaussian(0, 1));
        assert_eq!(a, Scalar::gaussian(2, 1));
        let x = Scalar::PAdic(PAdic::from_i64(3, 5, 4).unwrap());
        let y = Scalar::ratio(1, 5).times(&x);
        assert_eq!(y.as_padic().unwrap().valuation(), Valuation::Finite(-1));
    }

    #[test]
    fn serde_is_tagged() {
        let s = Scalar::ratio(-3, 4);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"rational":"-3/4"}"#);
        let x = Scalar::PAdic(PAdic::from_rational(&BigRational::new(1.into(), 10.into()), 5, 3).unwrap());
        let back: Scalar = serde_json::from_str(&serde_json::to_string(&x).unwrap()).unwrap();
        assert_eq!(back, x);
    }
}
