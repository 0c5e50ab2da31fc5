//! Exact matrix algebra over the scalar kinds, subgroup membership, the
//! `SUT = UI ⋊ A` factorization and the semidirect model of `SUT(2,F)`.

mod matrix;
mod semidirect;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use matrix::{parse_matrix, Matrix, Membership};
pub use semidirect::{commutator, semidirect_op, GroupElement, SemidirectElement, SemidirectOp};

use crate::cyclotomic::{mu_witnesses, RootElement};
use crate::error::{Error, Result};
use crate::fields::{FieldDescriptor, FieldElement, Scalar};

/// The matrix groups the crate knows about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum GroupKind {
    SL,
    PSL,
    SUT,
    SutModCenter,
    PGL,
    UI,
    Heisenberg,
}

impl GroupKind {
    pub const ALL: [GroupKind; 7] = [
        GroupKind::SL,
        GroupKind::PSL,
        GroupKind::SUT,
        GroupKind::SutModCenter,
        GroupKind::PGL,
        GroupKind::UI,
        GroupKind::Heisenberg,
    ];
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupKind::SL => "SL",
            GroupKind::PSL => "PSL",
            GroupKind::SUT => "SUT",
            GroupKind::SutModCenter => "SUT/Z",
            GroupKind::PGL => "PGL",
            GroupKind::UI => "UI",
            GroupKind::Heisenberg => "H",
        })
    }
}

impl FromStr for GroupKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GroupKind::ALL
            .into_iter()
            .find(|k| k.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown group `{s}` (expected SL, PSL, SUT, SUT/Z, PGL, UI or H)")))
    }
}

impl TryFrom<String> for GroupKind {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<GroupKind> for String {
    fn from(k: GroupKind) -> String {
        k.to_string()
    }
}

/// Membership of `g` in `kind`. Quotient groups are tested on the
/// representative: `PSL` as `SL`, `SUT/Z` as `SUT`, `PGL` as `GL`.
pub fn membership<T: FieldElement>(g: &Matrix<T>, kind: GroupKind) -> Membership {
    match kind {
        GroupKind::SL | GroupKind::PSL => g.det_is_one(),
        GroupKind::SUT | GroupKind::SutModCenter => g.is_upper_triangular().and(g.det_is_one()),
        GroupKind::PGL => match g.determinant() {
            Ok(d) => match d.zero_test() {
                crate::fields::ZeroTest::Nonzero => Membership::Yes,
                crate::fields::ZeroTest::Zero => Membership::No,
                crate::fields::ZeroTest::Indeterminate => Membership::Indeterminate,
            },
            Err(_) => Membership::Indeterminate,
        },
        GroupKind::UI => g.is_unitriangular(),
        GroupKind::Heisenberg => heisenberg_pattern(g),
    }
}

/// Turns a membership answer into an error for anything but `Yes`.
pub fn require_membership<T: FieldElement>(g: &Matrix<T>, kind: GroupKind) -> Result<()> {
    match membership(g, kind) {
        Membership::Yes => Ok(()),
        Membership::No => Err(Error::NotInGroup(kind.to_string())),
        Membership::Indeterminate => Err(Error::Indeterminate(kind.to_string())),
    }
}

/// `[[1, a, b], [0, I_n, c], [0, 0, 1]]` inside `UI(n+2)`.
fn heisenberg_pattern<T: FieldElement>(g: &Matrix<T>) -> Membership {
    let d = g.dim();
    if d < 3 {
        return Membership::No;
    }
    let inner = Matrix::from_fn(d - 2, |i, j| g.get(i + 1, j + 1).clone());
    g.is_unitriangular().and(inner.is_diagonal())
}

/// `g = b·a` with `b ∈ UI(n,F)` and `a = diag(g)`.
pub fn sut_factor<T: FieldElement>(g: &Matrix<T>) -> Result<(Matrix<T>, Matrix<T>)> {
    require_membership(g, GroupKind::SUT)?;
    let a = Matrix::diagonal(&g.diag());
    let inv_diag = g.diag().iter().map(|d| d.try_inv()).collect::<Result<Vec<_>>>()?;
    let b = Matrix::from_fn(g.dim(), |i, j| g.get(i, j).times(&inv_diag[j]));
    Ok((b, a))
}

/// `[[a, c], [0, 1/a]] ↦ (c·a, a)`.
pub fn sut2_to_semidirect<T: FieldElement>(g: &Matrix<T>) -> Result<SemidirectElement<T>> {
    if g.dim() != 2 {
        return Err(Error::NotInGroup("SUT(2)".into()));
    }
    require_membership(g, GroupKind::SUT)?;
    let a = g.get(0, 0).clone();
    SemidirectElement::new(g.get(0, 1).times(&a), a)
}

/// `p_{i,i+1}(B·E_{i,i+1}·B^{-1})` for diagonal `B` of determinant 1, with
/// `i` counted from 0. Fails if the entry disagrees with `B_ii / B_{i+1,i+1}`.
pub fn diag_conj_entry<T: FieldElement>(b: &Matrix<T>, i: usize) -> Result<T> {
    let n = b.dim();
    if i + 1 >= n {
        return Err(Error::Dimension(format!("index {i} out of range for {n}×{n}")));
    }
    if !b.is_diagonal().is_yes() {
        return Err(Error::NotInGroup("A (diagonal)".into()));
    }
    require_membership(b, GroupKind::SL)?;
    let e = Matrix::elementary(n, i, i + 1, b.get(0, 0).one_like());
    let conj = b.mul(&e)?.mul(&b.inverse()?)?;
    let entry = conj.get(i, i + 1).clone();
    let expected = b.get(i, i).try_div(b.get(i + 1, i + 1))?;
    if entry.minus(&expected).zero_test() != crate::fields::ZeroTest::Zero {
        return Err(Error::WitnessRejected(format!("conjugated entry {entry} differs from {expected}")));
    }
    Ok(entry)
}

/// A central element `λI` of `SL(n,F)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralElement {
    pub lambda: RootElement,
    pub n: usize,
}

impl CentralElement {
    /// The scalar matrix, when `λ` is exactly representable.
    pub fn to_matrix(&self) -> Option<Matrix<Scalar>> {
        match &self.lambda {
            RootElement::Exact(s) => Some(Matrix::diagonal(&vec![s.clone(); self.n])),
            RootElement::Power { .. } => None,
        }
    }
}

impl fmt::Display for CentralElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·I_{}", self.lambda, self.n)
    }
}

/// `Z(SL(n,F)) = {λI : λ ∈ μ_n(F)}`.
pub fn center_of_sl(field: &FieldDescriptor, n: usize, precision: u32) -> Result<Vec<CentralElement>> {
    let roots = mu_witnesses(field, n as u64, precision)?;
    Ok(roots.witnesses.into_iter().map(|lambda| CentralElement { lambda, n }).collect())
}

/// `g = x·h` for `g ∈ UI(n+2,F)`, with `x` the embedding of the inner
/// `n×n` block of `g` and `h ∈ H(n,F)`.
pub fn ui_heisenberg_factor<T: FieldElement>(g: &Matrix<T>) -> Result<(Matrix<T>, Matrix<T>)> {
    let d = g.dim();
    if d < 3 {
        return Err(Error::Dimension("UI(n+2) needs n ≥ 1".into()));
    }
    require_membership(g, GroupKind::UI)?;
    let (zero, one) = (g.get(0, 0).zero_like(), g.get(0, 0).one_like());
    let x = Matrix::from_fn(d, |i, j| {
        if (1..d - 1).contains(&i) && (1..d - 1).contains(&j) {
            g.get(i, j).clone()
        } else if i == j {
            one.clone()
        } else {
            zero.clone()
        }
    });
    let h = x.inverse()?.mul(g)?;
    if !membership(&h, GroupKind::Heisenberg).is_yes() {
        return Err(Error::WitnessRejected("x^{-1}·g is not in H(n,F)".into()));
    }
    Ok((x, h))
}
