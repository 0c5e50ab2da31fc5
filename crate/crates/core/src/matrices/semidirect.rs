use std::fmt;

use crate::error::{Error, Result};
use crate::fields::FieldElement;

use super::matrix::Matrix;

/// Anything with a group law, so that commutators can be taken uniformly.
pub trait GroupElement: Sized {
    fn compose(&self, other: &Self) -> Result<Self>;
    fn inverse_element(&self) -> Result<Self>;
}

/// `g h g^{-1} h^{-1}`.
pub fn commutator<G: GroupElement>(g: &G, h: &G) -> Result<G> {
    g.compose(h)?.compose(&g.inverse_element()?)?.compose(&h.inverse_element()?)
}

impl<T: FieldElement> GroupElement for Matrix<T> {
    fn compose(&self, other: &Self) -> Result<Self> {
        self.mul(other)
    }

    fn inverse_element(&self) -> Result<Self> {
        self.inverse()
    }
}

/// An element `(b, a)` of `F ⋊ F^×` with `(b1,a1)(b2,a2) = (b1 + a1²·b2, a1·a2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SemidirectElement<T> {
    pub b: T,
    pub a: T,
}

impl<T: FieldElement> SemidirectElement<T> {
    pub fn new(b: T, a: T) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self { b, a })
    }

    pub fn identity_like(x: &T) -> Self {
        Self { b: x.zero_like(), a: x.one_like() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { b: self.b.plus(&self.a.square().times(&other.b)), a: self.a.times(&other.a) }
    }

    /// `(m,n)^{-1} = (-m/n², 1/n)`.
    pub fn inv(&self) -> Result<Self> {
        let a_inv = self.a.try_inv()?;
        Ok(Self { b: self.b.times(&a_inv.square()).negate(), a: a_inv })
    }

    pub fn pow(&self, e: u64) -> Self {
        (0..e).fold(Self::identity_like(&self.a), |acc, _| acc.mul(self))
    }

    pub fn is_identity(&self) -> bool {
        self.b.is_zero() && self.a.is_one()
    }

    pub fn same_as(&self, other: &Self) -> bool {
        self.b.same_as(&other.b) && self.a.same_as(&other.a)
    }

    /// The matrix `[[a, b/a], [0, 1/a]]`.
    pub fn to_matrix(&self) -> Result<Matrix<T>> {
        let a_inv = self.a.try_inv()?;
        Matrix::from_rows(vec![vec![self.a.clone(), self.b.times(&a_inv)], vec![self.a.zero_like(), a_inv]])
    }
}

impl<T: FieldElement> GroupElement for SemidirectElement<T> {
    fn compose(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(other))
    }

    fn inverse_element(&self) -> Result<Self> {
        self.inv()
    }
}

impl<T: fmt::Display> fmt::Display for SemidirectElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.b, self.a)
    }
}

/// Binary or unary operation on semidirect elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemidirectOp {
    Mul,
    Inv,
}

pub fn semidirect_op<T: FieldElement>(
    op: SemidirectOp,
    x: &SemidirectElement<T>,
    y: Option<&SemidirectElement<T>>,
) -> Result<SemidirectElement<T>> {
    match (op, y) {
        (SemidirectOp::Mul, Some(y)) => Ok(x.mul(y)),
        (SemidirectOp::Mul, None) => Err(Error::Dimension("mul needs two operands".into())),
        (SemidirectOp::Inv, _) => x.inv(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Scalar;

    fn el(b: Scalar, a: Scalar) -> SemidirectElement<Scalar> {
        SemidirectElement::new(b, a).unwrap()
    }

    #[test]
    fn law_examples() {
        let x = el(Scalar::int(1), Scalar::int(2));
        let y = el(Scalar::int(1), Scalar::int(1));
        let xy = x.mul(&y);
        assert!(xy.same_as(&el(Scalar::int(5), Scalar::int(2))));
        let via_matrices = x.to_matrix().unwrap().mul(&y.to_matrix().unwrap()).unwrap();
        assert!(via_matrices.equals(&xy.to_matrix().unwrap()).is_yes());

        let g = el(Scalar::int(3), Scalar::int(2));
        let gi = g.inv().unwrap();
        assert!(gi.same_as(&el(Scalar::ratio(-3, 4), Scalar::ratio(1, 2))));
        assert!(g.mul(&gi).is_identity());
        assert!(gi.mul(&g).is_identity());
        let e = SemidirectElement::identity_like(&Scalar::int(0));
        assert!(e.mul(&g).same_as(&g) && g.mul(&e).same_as(&g));
        assert!(SemidirectElement::new(Scalar::int(1), Scalar::int(0)).is_err());
    }

    #[test]
    fn commutator_with_translation() {
        let a = Scalar::ratio(5, 3);
        let g = el(Scalar::int(7), a.clone());
        let c = commutator(&g, &el(Scalar::int(1), Scalar::int(1))).unwrap();
        assert!(c.same_as(&el(a.square().minus(&Scalar::int(1)), Scalar::int(1))));
        assert!(commutator(&g, &g).unwrap().is_identity());
    }
}
