//! Precision-tracked p-adic numbers.
//!
//! A nonzero value is stored as `p^v · u + O(p^(v+N))` with `u` a unit
//! residue modulo `p^N`; `N` is the relative precision. A value that
//! vanishes to the known precision is stored as `O(p^k)`, or as an exact
//! zero when it came from an exact input.
//!
//! Arithmetic follows the usual rules for `O(·)` terms:
//!
//! ```text
//! (p^e a + O(p^i)) + (p^f b + O(p^j)) = ... + O(p^min(i, j))
//! (p^e a + O(p^(e+N))) (p^f b + O(p^(f+M))) = p^(e+f) ab + O(p^(e+f+min(N, M)))
//! ```
//!
//! so no result ever claims more digits than its operands justify.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::arith;
use crate::error::{Error, Result};

/// Additive valuation; `Infinite` for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Self::Finite(v) => Some(v),
            Self::Infinite => None,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Self::Finite(a), Self::Finite(b)) => a.cmp(b),
            (Self::Finite(_), Self::Infinite) => Ordering::Less,
            (Self::Infinite, Self::Finite(_)) => Ordering::Greater,
            (Self::Infinite, Self::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(v) => write!(f, "{v}"),
            Self::Infinite => write!(f, "+inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// `O(p^bound)`; `None` is an exact zero.
    Zero {
        bound: Option<i64>,
    },
    Nonzero {
        valuation: i64,
        unit: u64,
        precision: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PAdic {
    p: u64,
    repr: Repr,
}

/// `p^precision`, refusing moduli whose products overflow `u128`.
fn modulus(p: u64, precision: u32) -> Result<u64> {
    arith::checked_pow(p, precision).ok_or(Error::PrecisionTooLarge { p, precision })
}

fn check_prime(p: u64) -> Result<()> {
    if arith::is_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidPrime(p))
    }
}

impl PAdic {
    /// An exact zero.
    pub fn zero(p: u64) -> Self {
        Self { p, repr: Repr::Zero { bound: None } }
    }

    /// A zero known only modulo `p^bound`.
    pub fn zero_mod(p: u64, bound: i64) -> Self {
        Self { p, repr: Repr::Zero { bound: Some(bound) } }
    }

    pub fn one(p: u64, precision: u32) -> Result<Self> {
        Self::from_parts(p, 0, 1, precision)
    }

    /// `p^valuation · unit` truncated to `precision` significant digits.
    /// A `unit` divisible by `p` is renormalized.
    pub fn from_parts(p: u64, valuation: i64, unit: u64, precision: u32) -> Result<Self> {
        check_prime(p)?;
        if precision == 0 {
            return Err(Error::InsufficientPrecision("precision must be at least 1".into()));
        }
        let m = modulus(p, precision)?;
        if unit == 0 {
            return Ok(Self::zero_mod(p, valuation + precision as i64));
        }
        let shift = arith::valuation_u64(unit, p);
        let unit = (unit / p.pow(shift)) % m;
        Ok(Self { p, repr: Repr::Nonzero { valuation: valuation + shift as i64, unit, precision } })
    }

    pub fn from_i64(x: i64, p: u64, precision: u32) -> Result<Self> {
        Self::from_rational(&BigRational::from_integer(BigInt::from(x)), p, precision)
    }

    /// Embeds a rational number into `Q_p`; zero maps to an exact zero.
    pub fn from_rational(q: &BigRational, p: u64, precision: u32) -> Result<Self> {
        check_prime(p)?;
        if precision == 0 {
            return Err(Error::InsufficientPrecision("precision must be at least 1".into()));
        }
        if q.is_zero() {
            return Ok(Self::zero(p));
        }
        let m = modulus(p, precision)?;
        let bp = BigInt::from(p);
        let strip = |mut x: BigInt| -> (BigInt, i64) {
            let mut v = 0;
            loop {
                let (quot, rem) = x.div_rem(&bp);
                if !rem.is_zero() {
                    return (x, v);
                }
                x = quot;
                v += 1;
            }
        };
        let (num, vn) = strip(q.numer().clone());
        let (den, vd) = strip(q.denom().clone());
        let bm = BigInt::from(m);
        let num_r = num.mod_floor(&bm).to_u64().expect("reduced below modulus") as u128;
        let den_r = den.mod_floor(&bm).to_u64().expect("reduced below modulus") as u128;
        let den_inv = arith::inv_mod(den_r, m as u128).expect("denominator is a p-adic unit");
        let unit = arith::mul_mod(num_r, den_inv, m as u128) as u64;
        Ok(Self { p, repr: Repr::Nonzero { valuation: vn - vd, unit, precision } })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn valuation(&self) -> Valuation {
        match self.repr {
            Repr::Zero { .. } => Valuation::Infinite,
            Repr::Nonzero { valuation, .. } => Valuation::Finite(valuation),
        }
    }

    /// Unit part; `None` for zero.
    pub fn unit(&self) -> Option<u64> {
        match self.repr {
            Repr::Zero { .. } => None,
            Repr::Nonzero { unit, .. } => Some(unit),
        }
    }

    /// Relative precision (significant digits); 0 for zero.
    pub fn precision(&self) -> u32 {
        match self.repr {
            Repr::Zero { .. } => 0,
            Repr::Nonzero { precision, .. } => precision,
        }
    }

    /// The exponent `k` of the error term `O(p^k)`; `None` when exact.
    pub fn absolute_precision(&self) -> Option<i64> {
        match self.repr {
            Repr::Zero { bound } => bound,
            Repr::Nonzero { valuation, precision, .. } => Some(valuation + precision as i64),
        }
    }

    /// Zero to the known precision.
    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { .. })
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { bound: None })
    }

    /// Normalized absolute value `p^(-v)`.
    pub fn abs(&self) -> f64 {
        match self.repr {
            Repr::Zero { .. } => 0.0,
            Repr::Nonzero { valuation, .. } => (self.p as f64).powi(-(valuation as i32)),
        }
    }

    fn same_prime(&self, other: &Self) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::PrimeMismatch(self.p, other.p))
        }
    }

    pub fn neg(&self) -> Self {
        match self.repr {
            Repr::Zero { .. } => self.clone(),
            Repr::Nonzero { valuation, unit, precision } => {
                let m = self.p.pow(precision);
                Self { p: self.p, repr: Repr::Nonzero { valuation, unit: m - unit, precision } }
            }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        let p = self.p;
        let (a, b) = match (&self.repr, &other.repr) {
            (Repr::Zero { bound: None }, _) => return Ok(other.clone()),
            (_, Repr::Zero { bound: None }) => return Ok(self.clone()),
            (Repr::Zero { bound: Some(x) }, Repr::Zero { bound: Some(y) }) => {
                return Ok(Self::zero_mod(p, *x.min(y)));
            }
            (Repr::Zero { bound: Some(bound) }, _) => return Ok(other.truncate_absolute(*bound)),
            (_, Repr::Zero { bound: Some(bound) }) => return Ok(self.truncate_absolute(*bound)),
            (a, b) => (a, b),
        };
        let (
            Repr::Nonzero { valuation: va, unit: ua, precision: na },
            Repr::Nonzero { valuation: vb, unit: ub, precision: nb },
        ) = (a, b)
        else {
            unreachable!()
        };
        let abs = (va + *na as i64).min(vb + *nb as i64);
        let low = *va.min(vb);
        if low >= abs {
            return Ok(Self::zero_mod(p, abs));
        }
        // digits p^low .. p^(abs-1) are known; abs - low is at most the
        // precision of the lower-valuation operand, so the modulus fits.
        let width = (abs - low) as u32;
        let m = p.pow(width) as u128;
        let shifted = |v: i64, u: u64| -> u128 {
            let s = (v - low) as u32;
            if s >= width {
                0
            } else {
                arith::mul_mod(u as u128 % m, p.pow(s) as u128, m)
            }
        };
        let sum = (shifted(*va, *ua) + shifted(*vb, *ub)) % m;
        if sum == 0 {
            return Ok(Self::zero_mod(p, abs));
        }
        let k = arith::valuation_u64(sum as u64, p);
        Ok(Self {
            p,
            repr: Repr::Nonzero {
                valuation: low + k as i64,
                unit: (sum / p.pow(k) as u128) as u64,
                precision: width - k,
            },
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        let p = self.p;
        Ok(match (&self.repr, &other.repr) {
            (Repr::Zero { bound: None }, _) | (_, Repr::Zero { bound: None }) => Self::zero(p),
            (Repr::Zero { bound: Some(x) }, Repr::Zero { bound: Some(y) }) => Self::zero_mod(p, x + y),
            (Repr::Zero { bound: Some(x) }, Repr::Nonzero { valuation, .. })
            | (Repr::Nonzero { valuation, .. }, Repr::Zero { bound: Some(x) }) => Self::zero_mod(p, x + valuation),
            (
                Repr::Nonzero { valuation: va, unit: ua, precision: na },
                Repr::Nonzero { valuation: vb, unit: ub, precision: nb },
            ) => {
                let precision = *na.min(nb);
                let m = p.pow(precision) as u128;
                Self {
                    p,
                    repr: Repr::Nonzero {
                        valuation: va + vb,
                        unit: arith::mul_mod(*ua as u128 % m, *ub as u128 % m, m) as u64,
                        precision,
                    },
                }
            }
        })
    }

    pub fn checked_inv(&self) -> Result<Self> {
        match self.repr {
            Repr::Zero { .. } => Err(Error::DivisionByZero),
            Repr::Nonzero { valuation, unit, precision } => {
                let m = self.p.pow(precision) as u128;
                let inv = arith::inv_mod(unit as u128, m).expect("unit residues are invertible");
                Ok(Self { p: self.p, repr: Repr::Nonzero { valuation: -valuation, unit: inv as u64, precision } })
            }
        }
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.checked_mul(&other.checked_inv()?)
    }

    pub fn pow(&self, mut e: u64) -> Result<Self> {
        let mut acc = Self::one(self.p, self.precision().max(1))?;
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&base)?;
            }
            base = base.checked_mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Forgets every digit at or above `p^bound`.
    pub fn truncate_absolute(&self, bound: i64) -> Self {
        match self.repr {
            Repr::Zero { bound: b } => Self::zero_mod(self.p, b.map_or(bound, |b| b.min(bound))),
            Repr::Nonzero { valuation, unit, precision } => {
                if valuation >= bound {
                    return Self::zero_mod(self.p, bound);
                }
                let keep = ((bound - valuation) as u32).min(precision);
                Self { p: self.p, repr: Repr::Nonzero { valuation, unit: unit % self.p.pow(keep), precision: keep } }
            }
        }
    }

    /// Equal up to the precision both sides carry.
    pub fn eq_to_precision(&self, other: &Self) -> bool {
        self.checked_sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }

    /// The integer representative in `[0, p^k)` of a value with
    /// nonnegative valuation, reduced modulo `p^k`.
    pub fn residue(&self, k: u32) -> Result<u64> {
        let m = modulus(self.p, k)?;
        match self.repr {
            Repr::Zero { bound } => {
                if bound.is_some_and(|b| b < k as i64) {
                    return Err(Error::InsufficientPrecision(format!("{self} is not known modulo {}^{k}", self.p)));
                }
                Ok(0)
            }
            Repr::Nonzero { valuation, unit, precision } => {
                if valuation < 0 {
                    return Err(Error::Unsupported(format!("{self} is not integral")));
                }
                if valuation + (precision as i64) < (k as i64) {
                    return Err(Error::InsufficientPrecision(format!("{self} is not known modulo {}^{k}", self.p)));
                }
                if valuation >= k as i64 {
                    return Ok(0);
                }
                let scale = self.p.pow(valuation as u32) as u128;
                Ok(((unit as u128 % m as u128) * scale % m as u128) as u64)
            }
        }
    }

    /// Converts to an exact rational `p^v · u` (or 0), dropping the error term.
    pub fn approximation(&self) -> BigRational {
        match self.repr {
            Repr::Zero { .. } => BigRational::zero(),
            Repr::Nonzero { valuation, unit, .. } => {
                let u = BigRational::from_integer(BigInt::from(unit));
                let pv = BigRational::from_integer(BigInt::from(self.p).pow(valuation.unsigned_abs() as u32));
                if valuation >= 0 {
                    u * pv
                } else {
                    u / pv
                }
            }
        }
    }
}

impl fmt::Display for PAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.p;
        match self.repr {
            Repr::Zero { bound: None } => write!(f, "0_{p}"),
            Repr::Zero { bound: Some(b) } => write!(f, "O({p}^{b})"),
            Repr::Nonzero { valuation, unit, precision } => {
                write!(f, "{unit}*{p}^{valuation}+O({p}^{})", valuation + precision as i64)
            }
        }
    }
}

impl FromStr for PAdic {
    type Err = Error;

    /// Parses the [`Display`](fmt::Display) form: `u*p^v+O(p^k)`, `O(p^k)`, or `0_p`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed p-adic number '{s}'"));
        let int = |t: &str| t.trim().parse::<i64>().map_err(|_| bad());
        let s = s.trim();
        if let Some(p) = s.strip_prefix("0_") {
            return Ok(Self::zero(int(p)? as u64));
        }
        let parse_big_o = |t: &str| -> Result<(u64, i64)> {
            let inner = t.strip_prefix("O(").and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
            let (p, k) = inner.split_once('^').ok_or_else(bad)?;
            Ok((int(p)? as u64, int(k)?))
        };
        match s.split_once("+O(") {
            None => {
                let (p, k) = parse_big_o(s)?;
                check_prime(p)?;
                Ok(Self::zero_mod(p, k))
            }
            Some((head, tail)) => {
                let (p, abs) = parse_big_o(&format!("O({tail}"))?;
                let (unit, power) = head.split_once('*').ok_or_else(bad)?;
                let (p2, v) = power.split_once('^').ok_or_else(bad)?;
                if int(p2)? as u64 != p {
                    return Err(bad());
                }
                let v = int(v)?;
                let unit = int(unit)?;
                if unit <= 0 || abs <= v {
                    return Err(bad());
                }
                let x = Self::from_parts(p, v, unit as u64, (abs - v) as u32)?;
                if x.valuation() != Valuation::Finite(v) {
                    return Err(bad());
                }
                Ok(x)
            }
        }
    }
}

/// The named arithmetic operations on p-adic numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PAdicOp {
    Add,
    Mul,
    Inv,
    Neg,
}

/// Applies `op` to `a` (and `b` for the binary operations).
pub fn padic_arith(op: PAdicOp, a: &PAdic, b: Option<&PAdic>) -> Result<PAdic> {
    let rhs = || b.ok_or_else(|| Error::Unsupported(format!("{op:?} needs two operands")));
    match op {
        PAdicOp::Add => a.checked_add(rhs()?),
        PAdicOp::Mul => a.checked_mul(rhs()?),
        PAdicOp::Inv => a.checked_inv(),
        PAdicOp::Neg => Ok(a.neg()),
    }
}

/// The Teichmüller representative of `a mod p`: the `(p-1)`-th root of
/// unity congruent to `a`, as the stable value of `a^(p^k) mod p^N`.
pub fn teichmuller(a: u64, p: u64, precision: u32) -> Result<PAdic> {
    check_prime(p)?;
    if a.is_multiple_of(p) {
        return Err(Error::ZeroResidue(a));
    }
    let m = modulus(p, precision)? as u128;
    let mut x = a as u128 % m;
    loop {
        let next = arith::pow_mod(x, p as u128, m);
        if next == x {
            break;
        }
        x = next;
    }
    PAdic::from_parts(p, 0, x as u64, precision)
}

impl From<&PAdic> for BigRational {
    fn from(x: &PAdic) -> Self {
        x.approximation()
    }
}
