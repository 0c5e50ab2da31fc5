//! Iwasawa decomposition `g = b·k` of `g ∈ SL(n,F)` with `b ∈ SUT(n,F)` and
//! `k` in the maximal compact subgroup: `SL(n,Z_p)` for `Q_p`, `SO(n)` for
//! `R`, `SU(n)` for `C`.

use std::fmt;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{FieldDescriptor, FieldElement, PAdic, Scalar, Valuation};
use crate::matrices::{membership, require_membership, GroupKind, Matrix, Membership};

/// Tolerance for the archimedean decomposition.
pub const ARCH_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CompactKind {
    SpecialOrthogonal,
    SpecialUnitary,
    IntegralSL,
}

impl fmt::Display for CompactKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CompactKind::SpecialOrthogonal => "SO(n)",
            CompactKind::SpecialUnitary => "SU(n)",
            CompactKind::IntegralSL => "SL(n,Z_p)",
        })
    }
}

/// `g = b·k`.
#[derive(Debug, Clone, PartialEq)]
pub struct IwasawaFactors<M> {
    pub b: M,
    pub k: M,
    pub k_kind: CompactKind,
}

/// Lower bound for the valuation of an entry; `Infinite` only for exact zero.
fn valuation_floor(x: &PAdic) -> Valuation {
    match x.valuation() {
        Valuation::Finite(v) => Valuation::Finite(v),
        Valuation::Infinite => x.absolute_precision().map_or(Valuation::Infinite, Valuation::Finite),
    }
}

/// Decomposition over `Q_p` by integral column reduction.
///
/// Rows are processed bottom-up. In row `r` the entry of least valuation
/// among columns `0..=r` (leftmost on ties) is moved to column `r` by a
/// signed swap, then the other entries of the row are cleared by adding
/// integral multiples of column `r`. Each column operation `E` applied to
/// `b` is undone on `k` by left multiplication with `E^{-1}`, so `b·k = g`
/// holds throughout.
pub fn iwasawa_nonarch(g: &Matrix<PAdic>) -> Result<IwasawaFactors<Matrix<PAdic>>> {
    require_membership(g, GroupKind::SL)?;
    let n = g.dim();
    let p = g.get(0, 0).p();
    let mut b = g.clone();
    let digits = g.entries().iter().map(PAdic::precision).max().unwrap_or(1).max(1);
    let one = PAdic::one(p, digits)?;
    let mut k = Matrix::from_fn(n, |i, j| if i == j { one.clone() } else { PAdic::zero(p) });

    for r in (0..n).rev() {
        let pivot = (0..=r)
            .filter(|&j| !b.get(r, j).is_zero())
            .min_by_key(|&j| (b.get(r, j).valuation(), j))
            .ok_or_else(|| Error::InsufficientPrecision(format!("row {r} vanishes to the working precision")))?;
        let v = b.get(r, pivot).valuation();
        if let Some(j) = (0..=r).find(|&j| b.get(r, j).is_zero() && valuation_floor(b.get(r, j)) < v) {
            return Err(Error::InsufficientPrecision(format!(
                "entry ({r},{j}) = {} may undercut the pivot valuation {v}",
                b.get(r, j)
            )));
        }

        if pivot != r {
            b.swap_cols(pivot, r);
            k.swap_rows(pivot, r);
            for i in 0..n {
                b.set(i, pivot, b.get(i, pivot).negate());
                k.set(pivot, i, k.get(pivot, i).negate());
            }
        }

        let pivot_inv = b.get(r, r).try_inv()?;
        for j in 0..r {
            if b.get(r, j).is_exact_zero() {
                continue;
            }
            let t = b.get(r, j).times(&pivot_inv).negate();
            for i in 0..n {
                if i == r {
                    continue;
                }
                b.set(i, j, b.get(i, j).plus(&t.times(b.get(i, r))));
            }
            b.set(r, j, PAdic::zero(p));
            for i in 0..n {
                k.set(r, i, k.get(r, i).minus(&t.times(k.get(j, i))));
            }
        }
    }

    Ok(IwasawaFactors { b, k, k_kind: CompactKind::IntegralSL })
}

/// Checks the invariants of a non-archimedean decomposition of `g`.
pub fn verify_nonarch(g: &Matrix<PAdic>, f: &IwasawaFactors<Matrix<PAdic>>) -> Membership {
    let round_trip = f.b.mul(&f.k).map_or(Membership::No, |bk| bk.equals(g));
    let integral = if f.k.entries().iter().all(|x| valuation_floor(x) >= Valuation::Finite(0)) {
        Membership::Yes
    } else {
        Membership::No
    };
    round_trip.and(integral).and(f.k.det_is_one()).and(membership(&f.b, GroupKind::SUT))
}

/// Dense complex matrix used by the archimedean routine.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("expected a non-empty square matrix".into()));
        }
        Ok(Self { n, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_real_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::from_rows(rows.into_iter().map(|r| r.into_iter().map(Complex64::from).collect()).collect())
    }

    /// Converts an exact rational or Gaussian matrix.
    pub fn from_exact(m: &Matrix<Scalar>) -> Result<Self> {
        let to_f64 = |q: &num_rational::BigRational| {
            q.to_f64().ok_or_else(|| Error::Unsupported(format!("{q} does not fit a float")))
        };
        let rows = m
            .rows()
            .map(|row| {
                row.iter()
                    .map(|x| match x {
                        Scalar::Rational(q) => Ok(Complex64::new(to_f64(q)?, 0.0)),
                        Scalar::Gaussian(z) => Ok(Complex64::new(to_f64(&z.re)?, to_f64(&z.im)?)),
                        Scalar::PAdic(_) => Err(Error::KindMismatch(format!("{x} in an archimedean field"))),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self { n, entries: vec![Complex64::new(0.0, 0.0); n * n] };
        for i in 0..n {
            m.entries[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.n + j]
    }

    fn row(&self, i: usize) -> &[Complex64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = (0..n).map(|l| self.get(i, l) * other.get(l, j)).sum();
            }
        }
        Self { n, entries: out }
    }

    pub fn conj_transpose(&self) -> Self {
        let n = self.n;
        let entries = (0..n * n).map(|k| self.get(k % n, k / n).conj()).collect();
        Self { n, entries }
    }

    /// Determinant by LU elimination with partial pivoting.
    pub fn determinant(&self) -> Complex64 {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for c in 0..n {
            let r = (c..n).max_by(|&x, &y| a[x * n + c].norm().total_cmp(&a[y * n + c].norm())).unwrap();
            if a[r * n + c].norm() == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if r != c {
                for j in 0..n {
                    a.swap(r * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = a[c * n + c];
            det *= piv;
            for i in c + 1..n {
                let f = a[i * n + c] / piv;
                for j in c..n {
                    let v = a[c * n + j];
                    a[i * n + j] -= f * v;
                }
            }
        }
        det
    }

    /// `max |a_ij - b_ij|`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.entries.iter().all(|z| z.im.abs() <= tol)
    }

    /// Largest modulus below the diagonal.
    pub fn lower_residual(&self) -> f64 {
        let n = self.n;
        (0..n).flat_map(|i| (0..i).map(move |j| (i, j))).map(|(i, j)| self.get(i, j).norm()).fold(0.0, f64::max)
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let real = self.is_real(0.0);
        for i in 0..self.n {
            if i > 0 {
                write!(f, ";")?;
            }
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ",")?;
                }
                let z = self.get(i, j);
                if real {
                    write!(f, "{}", z.re)?;
                } else {
                    write!(f, "{}", z)?;
                }
            }
        }
        Ok(())
    }
}

fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

/// Decomposition over `R` or `C` by row-wise Gram–Schmidt, bottom row first,
/// so that the triangular factor sits on the left.
pub fn iwasawa_arch(g: &ComplexMatrix) -> Result<IwasawaFactors<ComplexMatrix>> {
    let n = g.dim();
    let det = g.determinant();
    if (det - Complex64::new(1.0, 0.0)).norm() > ARCH_TOLERANCE.sqrt() {
        return Err(Error::NotInGroup(format!("SL (det = {det})")));
    }
    let scale = g.entries.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mut b = ComplexMatrix { n, entries: vec![Complex64::new(0.0, 0.0); n * n] };
    let mut k = ComplexMatrix { n, entries: vec![Complex64::new(0.0, 0.0); n * n] };
    for i in (0..n).rev() {
        let mut v = g.row(i).to_vec();
        for j in i + 1..n {
            let c = inner(&v, k.row(j));
            b.entries[i * n + j] = c;
            for (x, y) in v.iter_mut().zip(k.row(j)) {
                *x -= c * y;
            }
        }
        let norm = inner(&v, &v).re.sqrt();
        if norm <= ARCH_TOLERANCE * scale {
            return Err(Error::Singular);
        }
        b.entries[i * n + i] = Complex64::new(norm, 0.0);
        for (j, x) in v.into_iter().enumerate() {
            k.entries[i * n + j] = x / norm;
        }
    }
    let k_kind = if g.is_real(0.0) { CompactKind::SpecialOrthogonal } else { CompactKind::SpecialUnitary };
    Ok(IwasawaFactors { b, k, k_kind })
}

/// Residuals of an archimedean decomposition: `‖b·k − g‖_∞`,
/// `‖k·k* − I‖_∞`, `|det k − 1|` and the largest below-diagonal entry of `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArchResiduals {
    pub round_trip: f64,
    pub unitarity: f64,
    pub det_k: f64,
    pub triangularity: f64,
}

impl ArchResiduals {
    pub fn of(g: &ComplexMatrix, f: &IwasawaFactors<ComplexMatrix>) -> Self {
        Self {
            round_trip: f.b.mul(&f.k).max_abs_diff(g),
            unitarity: f.k.mul(&f.k.conj_transpose()).max_abs_diff(&ComplexMatrix::identity(g.dim())),
            det_k: (f.k.determinant() - Complex64::new(1.0, 0.0)).norm(),
            triangularity: f.b.lower_residual(),
        }
    }

    pub fn within(&self, tol: f64) -> bool {
        [self.round_trip, self.unitarity, self.det_k, self.triangularity].iter().all(|&r| r <= tol)
    }
}

/// Converts a parsed matrix over a complete p-adic field.
pub fn padic_matrix(m: &Matrix<Scalar>) -> Result<Matrix<PAdic>> {
    let entries = m
        .rows()
        .map(|row| {
            row.iter()
                .map(|x| x.as_padic().cloned().ok_or_else(|| Error::KindMismatch(format!("{x} is not p-adic"))))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(entries)
}

/// Which routine applies to `field`.
pub fn check_field(field: &FieldDescriptor) -> Result<()> {
    match field {
        FieldDescriptor::Reals | FieldDescriptor::Complexes | FieldDescriptor::PAdics(_) => Ok(()),
        other => Err(Error::Unsupported(format!("Iwasawa decomposition over {other}; use R, C or Qp=p"))),
    }
}

/// Decomposition of a matrix given in text form, with its residuals.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IwasawaReport {
    pub field: FieldDescriptor,
    pub b: String,
    pub k: String,
    pub k_kind: CompactKind,
    pub residuals: Residuals,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Residuals {
    /// Entries of `b·k − g`, each zero to its stated precision.
    PAdic(Vec<String>),
    Arch(ArchResiduals),
}

/// Parses `text` over `field` (`R`, `C` or `Q_p`) and decomposes it.
pub fn decompose_text(field: &FieldDescriptor, text: &str, precision: u32) -> Result<IwasawaReport> {
    check_field(field)?;
    let g = crate::matrices::parse_matrix(text, field, precision)?;
    if let FieldDescriptor::PAdics(_) = field {
        let g = padic_matrix(&g)?;
        let f = iwasawa_nonarch(&g)?;
        let diff = f.b.mul(&f.k)?.sub(&g)?;
        return Ok(IwasawaReport {
            field: field.clone(),
            b: f.b.to_string(),
            k: f.k.to_string(),
            k_kind: f.k_kind,
            residuals: Residuals::PAdic(diff.entries().iter().map(ToString::to_string).collect()),
            verified: verify_nonarch(&g, &f) == Membership::Yes,
        });
    }
    let g = ComplexMatrix::from_exact(&g)?;
    let f = iwasawa_arch(&g)?;
    let r = ArchResiduals::of(&g, &f);
    Ok(IwasawaReport {
        field: field.clone(),
        b: f.b.to_string(),
        k: f.k.to_string(),
        k_kind: f.k_kind,
        residuals: Residuals::Arch(r),
        verified: r.within(ARCH_TOLERANCE),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::parse_matrix;
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const P: u64 = 5;
    const N: u32 = 12;

    fn qp(text: &str) -> Matrix<PAdic> {
        padic_matrix(&parse_matrix(text, &FieldDescriptor::PAdics(P), N).unwrap()).unwrap()
    }

    fn pad(q: BigRational) -> PAdic {
        PAdic::from_rational(&q, P, N).unwrap()
    }

    #[test]
    fn nonarch_examples() {
        let id = qp("1,0;0,1");
        let f = iwasawa_nonarch(&id).unwrap();
        assert!(f.b.is_identity() && f.k.is_identity());

        let d = qp("5,0;0,1/5");
        let f = iwasawa_nonarch(&d).unwrap();
        assert!(f.b.equals(&d).is_yes() && f.k.is_identity());

        let w = qp("0,-1;1,0");
        let f = iwasawa_nonarch(&w).unwrap();
        assert!(f.b.is_identity(), "b = {}", f.b);
        assert!(f.k.equals(&w).is_yes());

        let g = qp("1/5,0;1,5");
        let f = iwasawa_nonarch(&g).unwrap();
        assert_eq!(verify_nonarch(&g, &f), Membership::Yes, "b = {}, k = {}", f.b, f.k);
    }

    #[test]
    fn nonarch_rejects_non_sl() {
        assert!(matches!(iwasawa_nonarch(&qp("2,0;0,1")), Err(Error::NotInGroup(_))));
    }

    /// Product of exact elementary and det-1 diagonal matrices over `Q`,
    /// embedded in `Q_5` only at the end.
    fn random_sl3_padic(rng: &mut ChaCha8Rng) -> Matrix<PAdic> {
        let rat = |rng: &mut ChaCha8Rng| {
            let num = rng.gen_range(-30i64..=30);
            let den = [1i64, 1, 5, 25, 2, 3][rng.gen_range(0..6)];
            BigRational::new(num.into(), den.into())
        };
        let one = BigRational::from_integer(1.into());
        let mut g = Matrix::identity(3, &one);
        for _ in 0..6 {
            let (i, j) = (rng.gen_range(0..3), rng.gen_range(0..3));
            let step = if i != j {
                Matrix::elementary(3, i, j, rat(rng))
            } else {
                let a = BigRational::from_integer([1i64, 5, 2, 10, 3][rng.gen_range(0..5)].into());
                let mut d = Matrix::identity(3, &one);
                let other = (i + 1) % 3;
                d.set(other, other, a.recip());
                d.set(i, i, a);
                d
            };
            g = g.mul(&step).unwrap();
        }
        assert!(g.determinant().unwrap() == one);
        g.map(|q| pad(q.clone()))
    }

    #[test]
    fn nonarch_random_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let g = random_sl3_padic(&mut rng);
            let f = iwasawa_nonarch(&g).unwrap();
            assert_eq!(verify_nonarch(&g, &f), Membership::Yes, "g = {g}, b = {}, k = {}", f.b, f.k);
        }
    }

    #[test]
    fn arch_examples() {
        let id = ComplexMatrix::identity(3);
        let f = iwasawa_arch(&id).unwrap();
        assert!(f.b.max_abs_diff(&id) < 1e-12 && f.k.max_abs_diff(&id) < 1e-12);

        let d = ComplexMatrix::from_real_rows(vec![vec![2.0, 0.0], vec![0.0, 0.5]]).unwrap();
        let f = iwasawa_arch(&d).unwrap();
        assert!(f.b.max_abs_diff(&d) < 1e-12);
        assert!(f.k.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
        assert_eq!(f.k_kind, CompactKind::SpecialOrthogonal);

        let t: f64 = 0.7;
        let rot = ComplexMatrix::from_real_rows(vec![vec![t.cos(), -t.sin()], vec![t.sin(), t.cos()]]).unwrap();
        let f = iwasawa_arch(&rot).unwrap();
        assert!(f.b.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
        assert!(f.k.max_abs_diff(&rot) < 1e-12);

        let c = ComplexMatrix::from_exact(&parse_matrix("1+i,2;0,1/2-1/2i", &FieldDescriptor::Complexes, 1).unwrap())
            .unwrap();
        let f = iwasawa_arch(&c).unwrap();
        assert_eq!(f.k_kind, CompactKind::SpecialUnitary);
        assert!(ArchResiduals::of(&c, &f).within(ARCH_TOLERANCE));
    }

    #[test]
    fn arch_random_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let mut rows: Vec<Vec<f64>> = (0..3).map(|_| (0..3).map(|_| rng.gen_range(-3.0..3.0)).collect()).collect();
            let det = ComplexMatrix::from_real_rows(rows.clone()).unwrap().determinant().re;
            if det.abs() < 1e-3 {
                continue;
            }
            if det < 0.0 {
                rows.swap(0, 1);
            }
            let s = det.abs().cbrt();
            let g = ComplexMatrix::from_real_rows(
                rows.into_iter().map(|r| r.into_iter().map(|x| x / s).collect()).collect(),
            )
            .unwrap();
            let f = iwasawa_arch(&g).unwrap();
            let res = ArchResiduals::of(&g, &f);
            assert!(res.within(ARCH_TOLERANCE), "{res:?}");
            assert!(f.b.is_real(0.0) && f.k.is_real(0.0));
        }
    }

    #[test]
    fn text_front_end() {
        let r = decompose_text(&FieldDescriptor::PAdics(5), "0,-1;1,0", 12).unwrap();
        assert!(r.verified);
        assert_eq!(r.k_kind, CompactKind::IntegralSL);
        let r = decompose_text(&FieldDescriptor::Reals, "2,1;1,1", 12).unwrap();
        assert!(r.verified);
        assert!(decompose_text(&FieldDescriptor::Rationals, "1,0;0,1", 12).is_err());
    }

    #[test]
    fn arch_rejects_singular_and_non_sl() {
        let g = ComplexMatrix::from_real_rows(vec![vec![2.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(iwasawa_arch(&g), Err(Error::NotInGroup(_))));
    }
}
