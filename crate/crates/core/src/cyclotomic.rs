//! Roots of unity `μ_n(F)` over the field catalog.
//!
//! Orders come from closed gcd formulas; [`hensel_root_count`] recounts the
//! p-adic case by lifting solutions of `x^n = 1` level by level and is kept
//! independent of those formulas.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::fields::{teichmuller, FieldDescriptor, FieldElement, Gaussian, PAdic, Scalar};

/// Precision ceiling for the Hensel oracle.
pub const HENSEL_LEVEL_CAP: u32 = 48;

/// A root of unity, either exact or as the abstract label `ζ_order^k` for
/// a fixed primitive root `ζ_order` (used where the root is not exactly
/// representable, e.g. `e^(2πik/n)` in `C`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootElement {
    Exact(Scalar),
    Power { k: u64, order: u64 },
}

impl RootElement {
    pub fn is_one(&self) -> bool {
        match self {
            RootElement::Exact(s) => s.is_one(),
            RootElement::Power { k, order } => k % order == 0,
        }
    }

    /// `self^e`.
    pub fn pow(&self, e: u64) -> RootElement {
        match self {
            RootElement::Exact(s) => {
                let mut acc = s.one_like();
                for _ in 0..e {
                    acc = acc.times(s);
                }
                RootElement::Exact(acc)
            }
            RootElement::Power { k, order } => RootElement::Power { k: (k * (e % order)) % order, order: *order },
        }
    }

    pub fn mul(&self, other: &RootElement) -> Option<RootElement> {
        match (self, other) {
            (RootElement::Exact(a), RootElement::Exact(b)) => Some(RootElement::Exact(a.times(b))),
            (RootElement::Power { k: a, order: m }, RootElement::Power { k: b, order: n }) if m == n => {
                Some(RootElement::Power { k: (a + b) % m, order: *m })
            }
            _ => None,
        }
    }

    pub fn same_as(&self, other: &RootElement) -> bool {
        match (self, other) {
            (RootElement::Exact(a), RootElement::Exact(b)) => a.same_as(b),
            (RootElement::Power { k: a, order: m }, RootElement::Power { k: b, order: n }) => m == n && a % m == b % n,
            _ => false,
        }
    }
}

impl fmt::Display for RootElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootElement::Exact(s) => write!(f, "{s}"),
            RootElement::Power { k, order } => write!(f, "zeta_{order}^{k}"),
        }
    }
}

/// The group `μ_n(F)` with explicit elements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootsOfUnity {
    pub field: FieldDescriptor,
    pub n: u64,
    pub order: u64,
    pub witnesses: Vec<RootElement>,
}

impl RootsOfUnity {
    /// Rechecks `w^n = 1` for every witness and closure under products.
    pub fn verify(&self) -> bool {
        if self.witnesses.len() as u64 != self.order || !self.n.is_multiple_of(self.order) {
            return false;
        }
        let powers_ok = self.witnesses.iter().all(|w| w.pow(self.n).is_one());
        let closed = self.witnesses.iter().all(|a| {
            self.witnesses.iter().all(|b| a.mul(b).is_some_and(|c| self.witnesses.iter().any(|w| w.same_as(&c))))
        });
        powers_ok && closed
    }
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::Dimension("n must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// `|μ_n(F)|`.
///
/// In characteristic `p` the factor `p` is stripped from `n` first, since
/// `x^p - 1 = (x - 1)^p` there.
pub fn mu_order(field: &FieldDescriptor, n: u64) -> Result<u64> {
    check_n(n)?;
    let n = arith::strip_factor(n, field.characteristic());
    Ok(match field.root_exponent() {
        Some(w) => arith::gcd(n, w),
        None => n,
    })
}

/// Explicit elements of `μ_n(F)`; p-adic elements are Teichmüller lifts
/// carried to `precision` digits.
pub fn mu_witnesses(field: &FieldDescriptor, n: u64, precision: u32) -> Result<RootsOfUnity> {
    let order = mu_order(field, n)?;
    let labels = || (0..order).map(|k| RootElement::Power { k, order }).collect::<Vec<_>>();
    let signs = || -> Vec<RootElement> {
        [1, -1].into_iter().take(order as usize).map(|x| RootElement::Exact(Scalar::int(x))).collect()
    };
    let witnesses = match field {
        FieldDescriptor::Rationals | FieldDescriptor::RationalsPAdic(_) | FieldDescriptor::Reals => signs(),
        FieldDescriptor::GaussianRationals => {
            let step = 4 / order as usize;
            [Gaussian::from_ints(1, 0), Gaussian::i(), Gaussian::from_ints(-1, 0), Gaussian::from_ints(0, -1)]
                .into_iter()
                .step_by(step)
                .map(|g| RootElement::Exact(Scalar::Gaussian(g)))
                .collect()
        }
        FieldDescriptor::Complexes | FieldDescriptor::LaurentSeries(_) => labels(),
        FieldDescriptor::PAdics(p) => padic_roots(*p, order, precision)?,
        FieldDescriptor::AbstractSubfield { completion, .. } => match completion.completion() {
            FieldDescriptor::PAdics(p) => padic_roots(p, order, precision)?,
            FieldDescriptor::Reals => signs(),
            _ => labels(),
        },
    };
    Ok(RootsOfUnity { field: field.clone(), n, order, witnesses })
}

/// The order-`d` subgroup of `μ(Q_p)` as p-adic numbers.
fn padic_roots(p: u64, d: u64, precision: u32) -> Result<Vec<RootElement>> {
    if precision == 0 {
        return Err(Error::InsufficientPrecision("precision must be at least 1".into()));
    }
    let mut out: Vec<PAdic> = if p == 2 {
        if d == 2 && precision < 2 {
            return Err(Error::InsufficientPrecision("1 and -1 coincide modulo 2; need at least 2 digits".into()));
        }
        [1i64, -1].into_iter().take(d as usize).map(|x| PAdic::from_i64(x, 2, precision)).collect::<Result<_>>()?
    } else {
        let g = arith::primitive_root(p) as u128;
        let step = ((p - 1) / d) as u128;
        (0..d as u128)
            .map(|j| teichmuller(arith::pow_mod(g, step * j, p as u128) as u64, p, precision))
            .collect::<Result<_>>()?
    };
    out.sort_by_key(|x| x.unit());
    Ok(out.into_iter().map(|x| RootElement::Exact(Scalar::PAdic(x))).collect())
}

/// Counts the roots of `x^n = 1` in `Z_p` by lifting solutions modulo
/// `p^k` one level at a time.
///
/// With `e = v_p(n)`, a solution modulo `p^k` for `k > 2e` determines a
/// unique root modulo `p^(k-e)`, so the number of distinct classes modulo
/// `p^(k-e)` is the number of roots. The level is raised from
/// `max(start_precision, 2e+1)` until two consecutive levels agree.
pub fn hensel_root_count(p: u64, n: u64, start_precision: u32) -> Result<u64> {
    if !arith::is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    check_n(n)?;
    let e = arith::valuation_u64(n, p);
    let first = start_precision.max(2 * e + 1).max(1);

    let mut level = 1u32;
    let mut modulus = p as u128;
    let mut solutions: Vec<u128> = (1..p as u128).filter(|&x| arith::pow_mod(x, n as u128, modulus) == 1).collect();
    let classes = |sols: &[u128], level: u32| -> u64 {
        let m = (p as u128).pow(level - e);
        sols.iter().map(|x| x % m).collect::<BTreeSet<_>>().len() as u64
    };

    let mut previous: Option<u64> = None;
    loop {
        if level >= first {
            let count = classes(&solutions, level);
            if previous == Some(count) {
                return Ok(count);
            }
            previous = Some(count);
        }
        if level >= HENSEL_LEVEL_CAP {
            return Err(Error::OracleDidNotStabilize(level));
        }
        let next = modulus
            .checked_mul(p as u128)
            .filter(|m| *m <= u64::MAX as u128)
            .ok_or(Error::OracleDidNotStabilize(level))?;
        solutions = solutions
            .iter()
            .flat_map(|&x| (0..p as u128).map(move |t| x + t * modulus))
            .filter(|&y| arith::pow_mod(y, n as u128, next) == 1)
            .collect();
        modulus = next;
        level += 1;
    }
}

/// A possibly infinite group order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cardinality {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinality::Finite(k) => write!(f, "{k}"),
            Cardinality::Infinite => write!(f, "infinite"),
        }
    }
}

/// `|F^× / M_n|` with `M_n = {x^n : x ∈ F^×}` for a complete field.
///
/// For `Q_p` this is `n` (the value group) times the index of the `n`-th
/// powers among the units, the latter counted by enumerating units modulo
/// `p^(v_p(n)+3)` (`2^(v_2(n)+5)` for `p = 2`), which is deep enough for the
/// `n`-th powers to contain every unit congruent to 1 at that depth.
pub fn power_class_index(field: &FieldDescriptor, n: u64) -> Result<Cardinality> {
    check_n(n)?;
    if !field.is_complete() {
        return Err(Error::NotComplete(field.to_string()));
    }
    Ok(match field {
        FieldDescriptor::Reals => Cardinality::Finite(if n.is_multiple_of(2) { 2 } else { 1 }),
        FieldDescriptor::Complexes => Cardinality::Finite(1),
        FieldDescriptor::PAdics(p) => {
            let p = *p;
            let e = arith::valuation_u64(n, p);
            let depth = if p == 2 { e + 5 } else { e + 3 };
            let m = arith::checked_pow(p, depth).ok_or(Error::PrecisionTooLarge { p, precision: depth })? as u128;
            let units = (1..m).filter(|x| x % p as u128 != 0);
            let unit_count = m / p as u128 * (p as u128 - 1);
            let powers: BTreeSet<u128> = units.map(|x| arith::pow_mod(x, n as u128, m)).collect();
            Cardinality::Finite(n * (unit_count / powers.len() as u128) as u64)
        }
        FieldDescriptor::LaurentSeries(q) => {
            let ch = field.characteristic();
            if n.is_multiple_of(ch) {
                // the p-th powers of 1 + tF_q[[t]] have infinite index
                Cardinality::Infinite
            } else {
                Cardinality::Finite(n * arith::gcd(n, q - 1))
            }
        }
        _ => unreachable!("completeness checked"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use FieldDescriptor::*;

    fn units_of(set: &RootsOfUnity) -> Vec<u64> {
        set.witnesses
            .iter()
            .map(|w| match w {
                RootElement::Exact(Scalar::PAdic(x)) => x.unit().unwrap(),
                other => panic!("unexpected {other}"),
            })
            .collect()
    }

    #[test]
    fn mu_order_examples() {
        assert_eq!(mu_order(&GaussianRationals, 8).unwrap(), 4);
        assert_eq!(mu_order(&PAdics(7), 12).unwrap(), 6);
        assert_eq!(mu_order(&Complexes, 5).unwrap(), 5);
        assert_eq!(mu_order(&PAdics(2), 7).unwrap(), 1);
        assert_eq!(mu_order(&LaurentSeries(4), 8).unwrap(), 1);
        assert_eq!(mu_order(&LaurentSeries(9), 6).unwrap(), 2);
        assert!(mu_order(&Rationals, 0).is_err());
    }

    #[test]
    fn witnesses_examples() {
        let gi = mu_witnesses(&GaussianRationals, 4, 1).unwrap();
        let expected: Vec<Scalar> =
            vec![Scalar::gaussian(1, 0), Scalar::gaussian(0, 1), Scalar::gaussian(-1, 0), Scalar::gaussian(0, -1)];
        assert_eq!(gi.witnesses, expected.into_iter().map(RootElement::Exact).collect::<Vec<_>>());

        let q = mu_witnesses(&Rationals, 5, 1).unwrap();
        assert_eq!(q.witnesses, vec![RootElement::Exact(Scalar::int(1))]);

        let q5 = mu_witnesses(&PAdics(5), 4, 2).unwrap();
        assert_eq!(units_of(&q5), vec![1, 7, 18, 24]);
        assert!(q5.verify());

        let c = mu_witnesses(&Complexes, 6, 1).unwrap();
        assert_eq!(c.witnesses.len(), 6);
        assert!(c.verify());
    }

    #[test]
    fn two_adic_signs_need_two_digits() {
        assert!(matches!(mu_witnesses(&PAdics(2), 2, 1), Err(Error::InsufficientPrecision(_))));
        assert!(mu_witnesses(&PAdics(2), 2, 2).unwrap().verify());
    }

    #[test]
    fn witnesses_verify_across_catalog() {
        let fields = [
            Rationals,
            RationalsPAdic(7),
            GaussianRationals,
            Reals,
            Complexes,
            PAdics(2),
            PAdics(3),
            PAdics(7),
            PAdics(13),
            LaurentSeries(4),
            LaurentSeries(9),
        ];
        for f in &fields {
            for n in 1..=24 {
                let set = mu_witnesses(f, n, 8).unwrap();
                assert!(set.verify(), "{f} n={n}");
            }
        }
    }

    #[test]
    fn orders_divide_completion_orders() {
        let fields = [
            Rationals,
            RationalsPAdic(5),
            RationalsPAdic(13),
            GaussianRationals,
            FieldDescriptor::abstract_subfield(PAdics(13), crate::fields::SubfieldRoots::Exponent(4)).unwrap(),
            FieldDescriptor::abstract_subfield(Complexes, crate::fields::SubfieldRoots::Exponent(6)).unwrap(),
            LaurentSeries(8),
        ];
        for f in &fields {
            let c = f.completion();
            for n in 1..=48 {
                let k = mu_order(f, n).unwrap();
                let m = mu_order(&c, n).unwrap();
                assert_eq!(m % k, 0, "{f} n={n}");
                assert_eq!(n % m, 0);
            }
        }
    }

    fn brute_force_roots(p: u64, n: u64, k: u32) -> usize {
        let m = p.pow(k) as u128;
        (1..m).filter(|x| arith::pow_mod(*x, n as u128, m) == 1).count()
    }

    #[test]
    fn hensel_examples_match_brute_force() {
        assert_eq!(brute_force_roots(5, 4, 2), 4);
        assert_eq!(hensel_root_count(5, 4, 2).unwrap(), 4);
        assert_eq!(brute_force_roots(5, 3, 2), 1);
        assert_eq!(hensel_root_count(5, 3, 2).unwrap(), 1);
        assert_eq!(brute_force_roots(7, 3, 2), 3);
        assert_eq!(hensel_root_count(7, 3, 2).unwrap(), 3);
    }

    #[test]
    fn hensel_handles_wild_exponents() {
        // x^5 = 1 has five solutions mod 25 but only the root 1 in Z_5
        assert_eq!(brute_force_roots(5, 5, 2), 5);
        assert_eq!(hensel_root_count(5, 5, 1).unwrap(), 1);
        assert_eq!(hensel_root_count(2, 8, 1).unwrap(), 2);
        assert_eq!(hensel_root_count(3, 18, 1).unwrap(), 2);
    }

    #[test]
    fn hensel_oracle_agrees_with_formula() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            for n in 1..=24 {
                assert_eq!(hensel_root_count(p, n, 1).unwrap(), mu_order(&PAdics(p), n).unwrap(), "p={p} n={n}");
            }
        }
    }

    #[test]
    fn power_class_examples() {
        assert_eq!(power_class_index(&Reals, 2).unwrap(), Cardinality::Finite(2));
        assert_eq!(power_class_index(&Reals, 3).unwrap(), Cardinality::Finite(1));
        assert_eq!(power_class_index(&Complexes, 7).unwrap(), Cardinality::Finite(1));
        assert_eq!(power_class_index(&PAdics(5), 2).unwrap(), Cardinality::Finite(4));
        assert_eq!(power_class_index(&PAdics(2), 2).unwrap(), Cardinality::Finite(8));
        assert_eq!(power_class_index(&LaurentSeries(9), 2).unwrap(), Cardinality::Finite(4));
        assert_eq!(power_class_index(&LaurentSeries(9), 3).unwrap(), Cardinality::Infinite);
        assert!(matches!(power_class_index(&Rationals, 2), Err(Error::NotComplete(_))));
    }

    #[test]
    fn padic_power_class_index_matches_local_formula() {
        // [Q_p^× : Q_p^×n] = n · |μ_n(Q_p)| · p^(v_p(n)), an independent closed form
        for p in [2u64, 3, 5, 7, 11] {
            for n in 1..=12u64 {
                let e = arith::valuation_u64(n, p);
                let expected = n * mu_order(&PAdics(p), n).unwrap() * p.pow(e);
                assert_eq!(power_class_index(&PAdics(p), n).unwrap(), Cardinality::Finite(expected), "p={p} n={n}");
            }
        }
    }
}
