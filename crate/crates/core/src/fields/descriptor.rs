use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};

/// Roots-of-unity content of an abstract subfield.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SubfieldRoots {
    /// The subfield's roots of unity form a cyclic group of this order,
    /// so `|μ_n(F)| = gcd(n', w)`.
    Exponent(u64),
    /// The subfield contains every root of unity of its completion.
    Full,
}

/// A topological field from the supported catalog.
///
/// `Rationals` carries the real topology; `RationalsPAdic(p)` is the same
/// field with the p-adic topology. `LaurentSeries(q)` is `F_q((t))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum FieldDescriptor {
    Rationals,
    RationalsPAdic(u64),
    GaussianRationals,
    Reals,
    Complexes,
    PAdics(u64),
    LaurentSeries(u64),
    AbstractSubfield { completion: Box<FieldDescriptor>, roots: SubfieldRoots },
}

/// Characteristic of a field: 0 or a prime.
pub type Characteristic = u64;

impl FieldDescriptor {
    pub fn rationals_padic(p: u64) -> Result<Self> {
        check_prime(p)?;
        Ok(Self::RationalsPAdic(p))
    }

    pub fn padics(p: u64) -> Result<Self> {
        check_prime(p)?;
        Ok(Self::PAdics(p))
    }

    pub fn laurent_series(q: u64) -> Result<Self> {
        arith::prime_power(q).ok_or(Error::InvalidPrimePower(q))?;
        Ok(Self::LaurentSeries(q))
    }

    /// Builds an abstract dense subfield of a complete catalog field.
    ///
    /// The roots-of-unity data must be compatible with the completion: the
    /// declared cyclic order must divide the completion's root exponent, and
    /// a subfield of characteristic other than 2 always contains `-1`.
    pub fn abstract_subfield(completion: FieldDescriptor, roots: SubfieldRoots) -> Result<Self> {
        let field = Self::AbstractSubfield { completion: Box::new(completion), roots };
        field.validate()?;
        Ok(field)
    }

    /// Checks the parameter constraints that the variant constructors enforce.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::RationalsPAdic(p) | Self::PAdics(p) => check_prime(*p),
            Self::LaurentSeries(q) => arith::prime_power(*q).map(|_| ()).ok_or(Error::InvalidPrimePower(*q)),
            Self::AbstractSubfield { completion, roots } => {
                completion.validate()?;
                if !completion.is_complete() {
                    return Err(Error::InvalidSubfield(format!(
                        "completion {completion} is not a complete catalog field"
                    )));
                }
                if let SubfieldRoots::Exponent(w) = roots {
                    if *w == 0 {
                        return Err(Error::InvalidSubfield("root exponent must be positive".into()));
                    }
                    if let Some(big) = completion.root_exponent() {
                        if big % w != 0 {
                            return Err(Error::InvalidSubfield(format!(
                                "root exponent {w} does not divide {big}, the exponent of {completion}"
                            )));
                        }
                    }
                    if completion.characteristic() != 2 && w % 2 != 0 {
                        return Err(Error::InvalidSubfield(
                            "a field of characteristic other than 2 contains -1".into(),
                        ));
                    }
                    let ch = completion.characteristic();
                    if ch != 0 && w % ch == 0 {
                        return Err(Error::InvalidSubfield(format!(
                            "characteristic {ch} admits no nontrivial {ch}-power roots of unity"
                        )));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// The complete field this field is dense in.
    pub fn completion(&self) -> FieldDescriptor {
        match self {
            Self::Rationals | Self::Reals => Self::Reals,
            Self::GaussianRationals | Self::Complexes => Self::Complexes,
            Self::RationalsPAdic(p) | Self::PAdics(p) => Self::PAdics(*p),
            Self::LaurentSeries(q) => Self::LaurentSeries(*q),
            Self::AbstractSubfield { completion, .. } => completion.completion(),
        }
    }

    pub fn is_complete(&self) -> bool {
        matches!(self, Self::Reals | Self::Complexes | Self::PAdics(_) | Self::LaurentSeries(_))
    }

    pub fn characteristic(&self) -> Characteristic {
        match self {
            Self::LaurentSeries(q) => arith::prime_power(*q).map(|(p, _)| p).unwrap_or(0),
            Self::AbstractSubfield { completion, .. } => completion.characteristic(),
            _ => 0,
        }
    }

    pub fn is_archimedean(&self) -> bool {
        matches!(self.completion(), Self::Reals | Self::Complexes)
    }

    /// Topological subfield of the real numbers.
    pub fn is_real_subfield(&self) -> bool {
        self.completion() == Self::Reals
    }

    /// Residue characteristic of a p-adic completion.
    pub fn residue_prime(&self) -> Option<u64> {
        match self.completion() {
            Self::PAdics(p) => Some(p),
            _ => None,
        }
    }

    /// Order of the full (finite) group of roots of unity; `None` for the
    /// complex numbers and for subfields that contain all of them.
    pub fn root_exponent(&self) -> Option<u64> {
        match self {
            Self::Rationals | Self::RationalsPAdic(_) | Self::Reals => Some(2),
            Self::GaussianRationals => Some(4),
            Self::Complexes => None,
            Self::PAdics(2) => Some(2),
            Self::PAdics(p) => Some(p - 1),
            Self::LaurentSeries(q) => Some(q - 1),
            Self::AbstractSubfield { completion, roots } => match roots {
                SubfieldRoots::Exponent(w) => Some(*w),
                SubfieldRoots::Full => completion.root_exponent(),
            },
        }
    }

    /// The catalog forms accepted by [`FromStr`].
    pub fn catalog_forms() -> &'static [&'static str] {
        &["Q", "Q(i)", "Q@p=<prime>", "R", "C", "Qp=<prime>", "Fq((t))@q=<prime power>"]
    }
}

/// Maps a field to its declared completion; idempotent.
pub fn completion_of(field: &FieldDescriptor) -> FieldDescriptor {
    field.completion()
}

fn check_prime(p: u64) -> Result<()> {
    if arith::is_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidPrime(p))
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rationals => write!(f, "Q"),
            Self::RationalsPAdic(p) => write!(f, "Q@p={p}"),
            Self::GaussianRationals => write!(f, "Q(i)"),
            Self::Reals => write!(f, "R"),
            Self::Complexes => write!(f, "C"),
            Self::PAdics(p) => write!(f, "Qp={p}"),
            Self::LaurentSeries(q) => write!(f, "Fq((t))@q={q}"),
            Self::AbstractSubfield { completion, roots } => match roots {
                SubfieldRoots::Exponent(w) => write!(f, "Sub(w={w})@{completion}"),
                SubfieldRoots::Full => write!(f, "Sub(all)@{completion}"),
            },
        }
    }
}

impl FromStr for FieldDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let number = |digits: &str| -> Result<u64> {
            digits.parse::<u64>().map_err(|_| Error::Parse(format!("bad field parameter in '{s}'")))
        };
        let field = match s {
            "Q" => Self::Rationals,
            "Q(i)" => Self::GaussianRationals,
            "R" => Self::Reals,
            "C" => Self::Complexes,
            _ => {
                if let Some(p) = s.strip_prefix("Q@p=") {
                    Self::rationals_padic(number(p)?)?
                } else if let Some(p) = s.strip_prefix("Qp=") {
                    Self::padics(number(p)?)?
                } else if let Some(q) = s.strip_prefix("Fq((t))@q=") {
                    Self::laurent_series(number(q)?)?
                } else if let Some(rest) = s.strip_prefix("Sub(") {
                    let (roots, completion) =
                        rest.split_once(")@").ok_or_else(|| Error::Parse(format!("malformed subfield '{s}'")))?;
                    let roots = match roots {
                        "all" => SubfieldRoots::Full,
                        w => SubfieldRoots::Exponent(number(
                            w.strip_prefix("w=")
                                .ok_or_else(|| Error::Parse(format!("malformed subfield roots in '{s}'")))?,
                        )?),
                    };
                    Self::abstract_subfield(completion.parse()?, roots)?
                } else {
                    return Err(Error::Parse(format!(
                        "unknown field '{s}'; expected one of {}",
                        Self::catalog_forms().join(", ")
                    )));
                }
            }
        };
        Ok(field)
    }
}

impl TryFrom<String> for FieldDescriptor {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<FieldDescriptor> for String {
    fn from(f: FieldDescriptor) -> String {
        f.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalog() -> Vec<FieldDescriptor> {
        use FieldDescriptor::*;
        vec![
            Rationals,
            RationalsPAdic(5),
            GaussianRationals,
            Reals,
            Complexes,
            PAdics(7),
            PAdics(2),
            LaurentSeries(4),
            LaurentSeries(9),
            FieldDescriptor::abstract_subfield(PAdics(7), SubfieldRoots::Exponent(2)).unwrap(),
            FieldDescriptor::abstract_subfield(Complexes, SubfieldRoots::Full).unwrap(),
        ]
    }

    #[test]
    fn completion_examples() {
        use FieldDescriptor::*;
        assert_eq!(completion_of(&Rationals), Reals);
        assert_eq!(completion_of(&RationalsPAdic(5)), PAdics(5));
        assert_eq!(completion_of(&PAdics(7)), PAdics(7));
        assert_eq!(completion_of(&GaussianRationals), Complexes);
    }

    #[test]
    fn completion_is_idempotent_and_preserves_characteristic() {
        for f in catalog() {
            let c = completion_of(&f);
            assert!(c.is_complete(), "{f}");
            assert_eq!(completion_of(&c), c);
            assert_eq!(f.characteristic(), c.characteristic());
        }
    }

    #[test]
    fn text_forms_round_trip() {
        for f in catalog() {
            let text = f.to_string();
            assert_eq!(text.parse::<FieldDescriptor>().unwrap(), f, "{text}");
        }
        assert_eq!("Fq((t))@q=4".parse::<FieldDescriptor>().unwrap().characteristic(), 2);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!("Qp=6".parse::<FieldDescriptor>(), Err(Error::InvalidPrime(6)));
        assert_eq!("Fq((t))@q=6".parse::<FieldDescriptor>(), Err(Error::InvalidPrimePower(6)));
        assert!(matches!("Z".parse::<FieldDescriptor>(), Err(Error::Parse(_))));
        // 4 does not divide 6; an odd exponent would exclude -1.
        assert!(FieldDescriptor::abstract_subfield(FieldDescriptor::PAdics(7), SubfieldRoots::Exponent(4)).is_err());
        assert!(FieldDescriptor::abstract_subfield(FieldDescriptor::PAdics(7), SubfieldRoots::Exponent(3)).is_err());
        assert!(FieldDescriptor::abstract_subfield(FieldDescriptor::Rationals, SubfieldRoots::Full).is_err());
    }
}
