//! Single-qubit gates, the amplitude-compensating rotations and the block
//! matrix of a multiply-controlled gate.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::scalar::Real;

/// A 2x2 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gate2x2<T> {
    m: [[Complex<T>; 2]; 2],
}

/// Rotation angle in radians.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct RotationAngle<T>(pub T);

/// Fixed gates named in the notation block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StandardGate {
    I,
    X,
    Z,
    H,
}

impl FromStr for StandardGate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" => Ok(Self::I),
            "X" => Ok(Self::X),
            "Z" => Ok(Self::Z),
            "H" => Ok(Self::H),
            other => Err(Error::UnknownGate(other.to_string())),
        }
    }
}

impl fmt::Display for StandardGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::I => "I",
            Self::X => "X",
            Self::Z => "Z",
            Self::H => "H",
        };
        f.write_str(s)
    }
}

#[inline]
fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

impl<T: Real> Gate2x2<T> {
    /// Builds a gate from row-major entries without checking unitarity.
    pub const fn new_unchecked(m: [[Complex<T>; 2]; 2]) -> Self {
        Self { m }
    }

    /// Builds a gate from row-major entries, rejecting non-unitary input.
    pub fn new(m: [[Complex<T>; 2]; 2]) -> Result<Self> {
        let g = Self { m };
        let residual = g.unitarity_residual();
        if residual <= T::unitary_tol() {
            Ok(g)
        } else {
            Err(Error::NotUnitary {
                residual: residual.to_f64().unwrap_or(f64::NAN),
            })
        }
    }

    pub fn from_real(a: T, b: T, c: T, d: T) -> Self {
        Self {
            m: [[re(a), re(b)], [re(c), re(d)]],
        }
    }

    #[inline]
    pub fn entries(&self) -> &[[Complex<T>; 2]; 2] {
        &self.m
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.m[row][col]
    }

    pub fn identity() -> Self {
        Self::from_real(T::one(), T::zero(), T::zero(), T::one())
    }

    pub fn x() -> Self {
        Self::from_real(T::zero(), T::one(), T::one(), T::zero())
    }

    pub fn z() -> Self {
        Self::from_real(T::one(), T::zero(), T::zero(), -T::one())
    }

    pub fn h() -> Self {
        let s = T::FRAC_1_SQRT_2();
        Self::from_real(s, s, s, -s)
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &Self) -> Self {
        let a = &self.m;
        let b = &rhs.m;
        let mut m = [[re(T::zero()); 2]; 2];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, out) in row.iter_mut().enumerate() {
                *out = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        Self { m }
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.m;
        Self {
            m: [
                [m[0][0].conj(), m[1][0].conj()],
                [m[0][1].conj(), m[1][1].conj()],
            ],
        }
    }

    pub fn determinant(&self) -> Complex<T> {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Applies the gate to a column vector `(a, b)`.
    #[inline]
    pub fn apply(&self, a: Complex<T>, b: Complex<T>) -> (Complex<T>, Complex<T>) {
        (
            self.m[0][0] * a + self.m[0][1] * b,
            self.m[1][0] * a + self.m[1][1] * b,
        )
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut best = T::zero();
        for r in 0..2 {
            for c in 0..2 {
                best = best.max((self.m[r][c] - other.m[r][c]).norm());
            }
        }
        best
    }

    pub fn unitarity_residual(&self) -> T {
        self.adjoint().mul(self).max_abs_diff(&Self::identity())
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.unitarity_residual() <= tol
    }

    /// A unitary square root `v` with `v · v = self`.
    ///
    /// Uses `sqrt(U) = (U + s I) / sqrt(tr U + 2 s)` with `s = ±sqrt(det U)`,
    /// picking the sign that keeps the denominator away from zero.
    pub fn sqrt(&self) -> Self {
        let det_root = self.determinant().sqrt();
        let trace = self.m[0][0] + self.m[1][1];
        let two = re(T::two());
        let plus = (trace + two * det_root).sqrt();
        let minus = (trace - two * det_root).sqrt();
        let (s, denom) = if plus.norm() >= minus.norm() {
            (det_root, plus)
        } else {
            (-det_root, minus)
        };
        let m = &self.m;
        Self {
            m: [
                [(m[0][0] + s) / denom, m[0][1] / denom],
                [m[1][0] / denom, (m[1][1] + s) / denom],
            ],
        }
    }
}

/// One of the fixed gates I, X, Z, H.
pub fn standard_gate<T: Real>(name: StandardGate) -> Gate2x2<T> {
    match name {
        StandardGate::I => Gate2x2::identity(),
        StandardGate::X => Gate2x2::x(),
        StandardGate::Z => Gate2x2::z(),
        StandardGate::H => Gate2x2::h(),
    }
}

/// `[[cos θ/2, -sin θ/2], [sin θ/2, cos θ/2]]`.
///
/// This is the matrix the compensators are written in, so `ry(θ_i)` is `u_i`
/// directly. The two-control expansion uses `ry(θ/4)` and `ry(-θ/4)`.
pub fn ry<T: Real>(angle: RotationAngle<T>) -> Gate2x2<T> {
    let half = angle.0 / T::two();
    let (s, c) = half.sin_cos();
    Gate2x2::from_real(c, -s, s, c)
}

/// Angle `θ` with `cos θ/2 = y0 / yi`.
pub fn compensator_angle<T: Real>(y0: T, yi: T) -> Result<RotationAngle<T>> {
    check_compensator_args(y0, yi)?;
    Ok(RotationAngle(T::two() * (y0 / yi).min(T::one()).acos()))
}

fn check_compensator_args<T: Real>(y0: T, yi: T) -> Result<()> {
    let ok = y0.is_finite() && yi.is_finite() && y0 > T::zero() && yi > T::zero() && y0 <= yi;
    if ok {
        Ok(())
    } else {
        Err(Error::BadCompensator {
            y0: y0.to_f64().unwrap_or(f64::NAN),
            yi: yi.to_f64().unwrap_or(f64::NAN),
        })
    }
}

/// The rotation that scales a `|0⟩` amplitude of `yi` down to `y0`:
/// `[[y0/yi, -sqrt(1 - y0²/yi²)], [sqrt(1 - y0²/yi²), y0/yi]]`.
pub fn compensator<T: Real>(y0: T, yi: T) -> Result<Gate2x2<T>> {
    check_compensator_args(y0, yi)?;
    let c = y0 / yi;
    let s = (T::one() - c * c).max(T::zero()).sqrt();
    Ok(Gate2x2::from_real(c, -s, s, c))
}

/// Matrix of `Λ_n(u)`: identity except for the trailing 2x2 block, which is `u`.
pub fn lambda_matrix<T: Real>(n_controls: usize, u: &Gate2x2<T>) -> CMatrix<T> {
    let dim = 1usize << (n_controls + 1);
    let mut m = CMatrix::identity(dim);
    let base = dim - 2;
    for r in 0..2 {
        for c in 0..2 {
            m.set(base + r, base + c, u.get(r, c));
        }
    }
    m
}

/// Generic unitarity check on a 2x2 gate or a square matrix.
pub trait UnitaryCheck<T> {
    fn unitary_residual(&self) -> T;
}

impl<T: Real> UnitaryCheck<T> for Gate2x2<T> {
    fn unitary_residual(&self) -> T {
        self.unitarity_residual()
    }
}

impl<T: Real> UnitaryCheck<T> for CMatrix<T> {
    fn unitary_residual(&self) -> T {
        self.unitarity_residual()
    }
}

/// True iff `max |U†U - I| <= tol`.
pub fn is_unitary<T: Real, G: UnitaryCheck<T> + ?Sized>(g: &G, tol: T) -> bool {
    g.unitary_residual() <= tol
}
