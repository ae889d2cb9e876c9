//! Dense state vectors over `n` qubits.
//!
//! Qubit 1 is the most significant bit of the basis index, so basis states
//! are ordered `|00…0⟩, |00…1⟩, …, |11…1⟩`. All public operations are pure:
//! they copy the amplitude array and run the kernel on the copy.

use std::fmt;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::gates::Gate2x2;
use crate::scalar::Real;

pub type Amplitude<T> = Complex<T>;

/// 1-based qubit label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QubitIndex(usize);

impl QubitIndex {
    /// Panics on zero; qubit labels start at 1.
    pub const fn new(value: usize) -> Self {
        assert!(value >= 1, "qubit labels are 1-based");
        Self(value)
    }

    #[inline]
    pub const fn get(self) -> usize {
        self.0
    }

    /// Bit shift of this qubit inside an `n_qubits` basis index.
    #[inline]
    pub(crate) fn shift(self, n_qubits: usize) -> usize {
        n_qubits - self.0
    }

    pub(crate) fn check(self, n_qubits: usize) -> Result<()> {
        if self.0 >= 1 && self.0 <= n_qubits {
            Ok(())
        } else {
            Err(Error::QubitOutOfRange {
                index: self.0,
                n_qubits,
            })
        }
    }
}

impl fmt::Display for QubitIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Shorthand for `QubitIndex::new`.
pub const fn q(value: usize) -> QubitIndex {
    QubitIndex::new(value)
}

pub(crate) fn check_distinct(qubits: &[QubitIndex], n_qubits: usize) -> Result<()> {
    for (k, a) in qubits.iter().enumerate() {
        a.check(n_qubits)?;
        if qubits[..k].contains(a) {
            return Err(Error::DuplicateQubit(a.get()));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T> {
    n_qubits: usize,
    amps: Vec<Amplitude<T>>,
}

#[inline]
fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

impl<T: Real> StateVector<T> {
    /// The all-zero vector (not a physical state; used for empty branches).
    pub fn zero(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            amps: vec![czero(); 1usize << n_qubits],
        }
    }

    pub fn basis_state(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::QubitOutOfRange { index: 0, n_qubits });
        }
        if index >= 1usize << n_qubits {
            return Err(Error::BasisIndexOutOfRange { index, n_qubits });
        }
        let mut sv = Self::zero(n_qubits);
        sv.amps[index] = Complex::new(T::one(), T::zero());
        Ok(sv)
    }

    /// Wraps an amplitude array. Length must be a power of two (at least 2)
    /// and every entry finite; no normalization is imposed.
    pub fn from_amplitudes(amps: Vec<Amplitude<T>>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::BadLength(len));
        }
        if let Some(i) = amps.iter().position(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self {
            n_qubits: len.trailing_zeros() as usize,
            amps,
        })
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Amplitude<T>] {
        &self.amps
    }

    #[inline]
    pub fn amp(&self, index: usize) -> Amplitude<T> {
        self.amps[index]
    }

    pub fn into_amplitudes(self) -> Vec<Amplitude<T>> {
        self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - T::one()).abs() <= T::norm_tol()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if n <= T::zero() {
            return Err(Error::ZeroNorm);
        }
        Ok(self.scaled(T::one() / n.sqrt()))
    }

    pub fn scaled(&self, factor: T) -> Self {
        Self {
            n_qubits: self.n_qubits,
            amps: self.amps.iter().map(|a| a * factor).collect(),
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Amplitude<T>> {
        self.same_size(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .fold(czero(), |acc, (a, b)| acc + a.conj() * b))
    }

    /// `|⟨a|b⟩|²` for two normalized states.
    pub fn fidelity(&self, other: &Self) -> Result<T> {
        self.same_size(other)?;
        for s in [self, other] {
            if !s.is_normalized() {
                return Err(Error::NotNormalized(s.norm_sqr().to_f64().unwrap_or(f64::NAN)));
            }
        }
        let f = self.inner(other)?.norm_sqr();
        Ok(f.min(T::one()).max(T::zero()))
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        self.same_size(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .fold(T::zero(), |m, (a, b)| m.max((a - b).norm())))
    }

    fn same_size(&self, other: &Self) -> Result<()> {
        if self.n_qubits == other.n_qubits {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: self.n_qubits,
                right: other.n_qubits,
            })
        }
    }

    /// `self ⊗ other`, with `self`'s qubits first.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            amps.extend(other.amps.iter().map(|b| a * b));
        }
        Self {
            n_qubits: self.n_qubits + other.n_qubits,
            amps,
        }
    }

    pub fn apply_single(&self, g: &Gate2x2<T>, target: QubitIndex) -> Result<Self> {
        target.check(self.n_qubits)?;
        check_gate(g)?;
        let mut out = self.clone();
        out.single_in_place(g, target);
        Ok(out)
    }

    pub fn apply_cnot(&self, control: QubitIndex, target: QubitIndex) -> Result<Self> {
        check_distinct(&[control, target], self.n_qubits)?;
        let mut out = self.clone();
        out.cnot_in_place(control, target);
        Ok(out)
    }

    /// `Λ_k(u)`: `u` on `target` for basis components whose control bits are all 1.
    pub fn apply_multi_controlled(
        &self,
        controls: &[QubitIndex],
        u: &Gate2x2<T>,
        target: QubitIndex,
    ) -> Result<Self> {
        let mut all = controls.to_vec();
        all.push(target);
        check_distinct(&all, self.n_qubits)?;
        check_gate(u)?;
        let mut out = self.clone();
        out.controlled_in_place(controls, u, target);
        Ok(out)
    }

    /// Parallel X on each listed qubit.
    pub fn apply_x_layer(&self, targets: &[QubitIndex]) -> Result<Self> {
        check_distinct(targets, self.n_qubits)?;
        let mut out = self.clone();
        out.x_layer_in_place(targets);
        Ok(out)
    }

    /// Unnormalized projections onto `q = 0` and `q = 1`, both at full dimension.
    pub fn split_on_qubit(&self, q: QubitIndex) -> Result<(Self, Self)> {
        q.check(self.n_qubits)?;
        let bit = 1usize << q.shift(self.n_qubits);
        let mut zero = self.clone();
        let mut one = self.clone();
        for (i, (a0, a1)) in zero.amps.iter_mut().zip(one.amps.iter_mut()).enumerate() {
            if i & bit == 0 {
                *a1 = czero();
            } else {
                *a0 = czero();
            }
        }
        Ok((zero, one))
    }

    /// Probability that qubit `q` reads 1 (relative to the state's squared norm).
    pub fn prob_one(&self, q: QubitIndex) -> Result<T> {
        q.check(self.n_qubits)?;
        let total = self.norm_sqr();
        if total <= T::zero() {
            return Err(Error::ZeroNorm);
        }
        let bit = 1usize << q.shift(self.n_qubits);
        let one = self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .fold(T::zero(), |acc, (_, a)| acc + a.norm_sqr());
        Ok(one / total)
    }

    /// Projective measurement of `q`. Outcome 0 is chosen iff `rand01 < P(q=0)`.
    /// Returns the bit, the renormalized post-measurement state and the
    /// probability of the outcome that occurred.
    pub fn measure_qubit(&self, q: QubitIndex, rand01: T) -> Result<(u8, Self, T)> {
        let p1 = self.prob_one(q)?;
        let p0 = T::one() - p1;
        let (zero, one) = self.split_on_qubit(q)?;
        if rand01 < p0 {
            Ok((0, zero.normalized()?, p0))
        } else {
            Ok((1, one.normalized()?, p1))
        }
    }

    /// The state of the trailing `n - k` qubits given that the leading `k`
    /// qubits hold `prefix` (unnormalized; its squared norm is the joint probability).
    pub fn slice_leading(&self, k: usize, prefix: usize) -> Result<Self> {
        if k >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                index: k,
                n_qubits: self.n_qubits,
            });
        }
        if prefix >= 1usize << k {
            return Err(Error::BasisIndexOutOfRange { index: prefix, n_qubits: k });
        }
        let rest = self.n_qubits - k;
        let start = prefix << rest;
        Ok(Self {
            n_qubits: rest,
            amps: self.amps[start..start + (1usize << rest)].to_vec(),
        })
    }

    pub(crate) fn single_in_place(&mut self, g: &Gate2x2<T>, target: QubitIndex) {
        let bit = 1usize << target.shift(self.n_qubits);
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let j = i | bit;
                let (a, b) = g.apply(self.amps[i], self.amps[j]);
                self.amps[i] = a;
                self.amps[j] = b;
            }
        }
    }

    pub(crate) fn cnot_in_place(&mut self, control: QubitIndex, target: QubitIndex) {
        let cbit = 1usize << control.shift(self.n_qubits);
        let tbit = 1usize << target.shift(self.n_qubits);
        for i in 0..self.amps.len() {
            if i & cbit != 0 && i & tbit == 0 {
                self.amps.swap(i, i | tbit);
            }
        }
    }

    pub(crate) fn controlled_in_place(
        &mut self,
        controls: &[QubitIndex],
        u: &Gate2x2<T>,
        target: QubitIndex,
    ) {
        let cmask = controls
            .iter()
            .fold(0usize, |m, c| m | (1usize << c.shift(self.n_qubits)));
        let tbit = 1usize << target.shift(self.n_qubits);
        for i in 0..self.amps.len() {
            if i & cmask == cmask && i & tbit == 0 {
                let j = i | tbit;
                let (a, b) = u.apply(self.amps[i], self.amps[j]);
                self.amps[i] = a;
                self.amps[j] = b;
            }
        }
    }

    pub(crate) fn x_layer_in_place(&mut self, targets: &[QubitIndex]) {
        let mask = targets
            .iter()
            .fold(0usize, |m, t| m | (1usize << t.shift(self.n_qubits)));
        if mask == 0 {
            return;
        }
        for i in 0..self.amps.len() {
            let j = i ^ mask;
            if i < j {
                self.amps.swap(i, j);
            }
        }
    }
}

fn check_gate<T: Real>(g: &Gate2x2<T>) -> Result<()> {
    let residual = g.unitarity_residual();
    if residual <= T::unitary_tol() {
        Ok(())
    } else {
        Err(Error::NotUnitary {
            residual: residual.to_f64().unwrap_or(f64::NAN),
        })
    }
}

/// Basis-state label in lexicographic order, e.g. `|101⟩`.
pub fn ket_label(index: usize, n_qubits: usize) -> String {
    format!("|{:0width$b}⟩", index, width = n_qubits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{lambda_matrix, ry, RotationAngle};
    use crate::matrix::CMatrix;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    type Sv = StateVector<f64>;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    fn sv(re: &[f64]) -> Sv {
        Sv::from_amplitudes(re.iter().map(|&r| c(r)).collect()).unwrap()
    }

    fn random_state(n: usize, seed: &[f64]) -> Sv {
        let amps: Vec<_> = (0..1usize << n)
            .map(|i| Complex::new(seed[(2 * i) % seed.len()], seed[(2 * i + 1) % seed.len()]))
            .collect();
        Sv::from_amplitudes(amps).unwrap().normalized().unwrap()
    }

    #[test]
    fn basis_states() {
        assert_eq!(Sv::basis_state(1, 0).unwrap(), sv(&[1.0, 0.0]));
        assert_eq!(Sv::basis_state(2, 3).unwrap(), sv(&[0.0, 0.0, 0.0, 1.0]));
        let s = Sv::basis_state(3, 5).unwrap();
        assert_eq!(s.amp(5), c(1.0));
        assert!(s.is_normalized());
        assert!(matches!(Sv::basis_state(2, 4), Err(Error::BasisIndexOutOfRange { .. })));
    }

    #[test]
    fn from_amplitudes_validation() {
        assert!(matches!(Sv::from_amplitudes(vec![c(1.0); 3]), Err(Error::BadLength(3))));
        assert!(matches!(
            Sv::from_amplitudes(vec![c(1.0), c(f64::NAN)]),
            Err(Error::NonFinite(1))
        ));
    }

    #[test]
    fn tensor_ordering() {
        let zero = Sv::basis_state(1, 0).unwrap();
        let one = Sv::basis_state(1, 1).unwrap();
        assert_eq!(zero.tensor(&one), Sv::basis_state(2, 1).unwrap());
        let a = sv(&[0.6, 0.8]);
        assert_eq!(a.tensor(&zero), sv(&[0.6, 0.0, 0.8, 0.0]));
    }

    #[test]
    fn single_qubit_gates() {
        let plus = Sv::basis_state(1, 0)
            .unwrap()
            .apply_single(&Gate2x2::h(), q(1))
            .unwrap();
        assert!(plus.max_abs_diff(&sv(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2])).unwrap() < 1e-15);

        let s = Sv::basis_state(2, 1).unwrap().apply_single(&Gate2x2::x(), q(1)).unwrap();
        assert_eq!(s, Sv::basis_state(2, 3).unwrap());

        let s = sv(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0, 0.0])
            .apply_single(&Gate2x2::z(), q(2))
            .unwrap();
        assert_eq!(s, sv(&[FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0, 0.0]));
    }

    #[test]
    fn single_qubit_errors() {
        let s = Sv::basis_state(2, 0).unwrap();
        assert!(matches!(
            s.apply_single(&Gate2x2::x(), q(3)),
            Err(Error::QubitOutOfRange { index: 3, .. })
        ));
        let bad = Gate2x2::from_real(1.0, 0.0, 0.0, 2.0);
        assert!(matches!(s.apply_single(&bad, q(1)), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn cnot_cases() {
        let s = Sv::basis_state(2, 2).unwrap().apply_cnot(q(1), q(2)).unwrap();
        assert_eq!(s, Sv::basis_state(2, 3).unwrap());
        let s = Sv::basis_state(2, 0).unwrap().apply_cnot(q(1), q(2)).unwrap();
        assert_eq!(s, Sv::basis_state(2, 0).unwrap());
        let r = FRAC_1_SQRT_2;
        let bell = sv(&[r, 0.0, r, 0.0]).apply_cnot(q(1), q(2)).unwrap();
        assert_eq!(bell, sv(&[r, 0.0, 0.0, r]));
        assert!(matches!(
            Sv::basis_state(2, 0).unwrap().apply_cnot(q(1), q(1)),
            Err(Error::DuplicateQubit(1))
        ));
    }

    #[test]
    fn multi_controlled_cases() {
        let s = Sv::basis_state(2, 2).unwrap();
        assert_eq!(
            s.apply_multi_controlled(&[q(1)], &Gate2x2::x(), q(2)).unwrap(),
            Sv::basis_state(2, 3).unwrap()
        );

        let u = ry(RotationAngle(0.9));
        for input in 0..8 {
            let out = Sv::basis_state(3, input)
                .unwrap()
                .apply_multi_controlled(&[q(1), q(2)], &u, q(3))
                .unwrap();
            if input >= 6 {
                let (a, b) = u.apply(
                    if input == 6 { c(1.0) } else { c(0.0) },
                    if input == 7 { c(1.0) } else { c(0.0) },
                );
                assert_eq!(out.amp(6), a);
                assert_eq!(out.amp(7), b);
            } else {
                assert_eq!(out, Sv::basis_state(3, input).unwrap());
            }
        }

        let s = random_state(2, &[0.1, 0.5, -0.3, 0.7, 0.2]);
        assert_eq!(
            s.apply_multi_controlled(&[], &u, q(2)).unwrap(),
            s.apply_single(&u, q(2)).unwrap()
        );
        assert!(matches!(
            s.apply_multi_controlled(&[q(1), q(2)], &u, q(2)),
            Err(Error::DuplicateQubit(2))
        ));
    }

    #[test]
    fn split_and_measure() {
        let (a, b) = Sv::basis_state(1, 0).unwrap().split_on_qubit(q(1)).unwrap();
        assert_eq!(a, Sv::basis_state(1, 0).unwrap());
        assert_eq!(b, Sv::zero(1));

        let plus = sv(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
        let (a, b) = plus.split_on_qubit(q(1)).unwrap();
        assert!((a.norm_sqr() - 0.5).abs() < 1e-15);
        assert!((b.norm_sqr() - 0.5).abs() < 1e-15);

        let (bit, post, p) = Sv::basis_state(1, 1).unwrap().measure_qubit(q(1), 0.99).unwrap();
        assert_eq!((bit, p), (1, 1.0));
        assert_eq!(post, Sv::basis_state(1, 1).unwrap());
        let (bit, _, _) = Sv::basis_state(1, 1).unwrap().measure_qubit(q(1), 0.0).unwrap();
        assert_eq!(bit, 1);

        let (bit, post, p) = plus.measure_qubit(q(1), 0.3).unwrap();
        assert_eq!(bit, 0);
        assert!((p - 0.5).abs() < 1e-15);
        assert!(post.max_abs_diff(&Sv::basis_state(1, 0).unwrap()).unwrap() < 1e-15);

        assert!(matches!(Sv::zero(1).measure_qubit(q(1), 0.5), Err(Error::ZeroNorm)));
    }

    #[test]
    fn fidelity_cases() {
        let s = random_state(3, &[0.3, -0.2, 0.9, 0.1, 0.4, 0.6, -0.8]);
        assert!((s.fidelity(&s).unwrap() - 1.0).abs() < 1e-14);
        let phase = Complex::from_polar(1.0, 0.77);
        let rotated = Sv::from_amplitudes(s.amplitudes().iter().map(|a| a * phase).collect()).unwrap();
        assert!((s.fidelity(&rotated).unwrap() - 1.0).abs() < 1e-14);
        let zero = Sv::basis_state(1, 0).unwrap();
        let one = Sv::basis_state(1, 1).unwrap();
        assert_eq!(zero.fidelity(&one).unwrap(), 0.0);
        assert!(matches!(
            zero.fidelity(&Sv::basis_state(2, 0).unwrap()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn slice_leading_picks_suffix_block() {
        let s = random_state(3, &[0.3, -0.2, 0.9, 0.1, 0.4, 0.6, -0.8]);
        let tail = s.slice_leading(1, 1).unwrap();
        assert_eq!(tail.n_qubits(), 2);
        for i in 0..4 {
            assert_eq!(tail.amp(i), s.amp(4 + i));
        }
    }

    #[test]
    fn multi_controlled_matches_block_matrix_up_to_four_controls() {
        let u = ry(RotationAngle(1.3)).mul(&Gate2x2::new_unchecked([
            [Complex::new(1.0, 0.0), c(0.0)],
            [c(0.0), Complex::from_polar(1.0, 0.4)],
        ]));
        for n in 0..=4usize {
            let m: CMatrix<f64> = lambda_matrix(n, &u);
            let controls: Vec<_> = (1..=n).map(q).collect();
            for input in 0..1usize << (n + 1) {
                let basis = Sv::basis_state(n + 1, input).unwrap();
                let fast = basis.apply_multi_controlled(&controls, &u, q(n + 1)).unwrap();
                let slow = m.mul_vec(basis.amplitudes());
                for (a, b) in fast.amplitudes().iter().zip(&slow) {
                    assert!((a - b).norm() <= 1e-12);
                }
            }
        }
    }

    fn arb_state(n: usize) -> impl Strategy<Value = Sv> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1usize << n).prop_filter_map(
            "nonzero",
            |v| {
                let s = Sv::from_amplitudes(v.into_iter().map(|(r, i)| Complex::new(r, i)).collect())
                    .ok()?;
                s.normalized().ok()
            },
        )
    }

    proptest! {
        #[test]
        fn gates_preserve_norm_and_self_inverse(s in arb_state(4), a in 1usize..=4, b in 1usize..=4, theta in -6.0f64..6.0) {
            let before = s.norm_sqr();
            for g in [Gate2x2::x(), Gate2x2::z(), Gate2x2::h()] {
                let once = s.apply_single(&g, q(a)).unwrap();
                prop_assert!((once.norm_sqr() - before).abs() <= 1e-12);
                let twice = once.apply_single(&g, q(a)).unwrap();
                prop_assert!(twice.max_abs_diff(&s).unwrap() <= 1e-12);
            }
            let r = s.apply_single(&ry(RotationAngle(theta)), q(a)).unwrap();
            prop_assert!((r.norm_sqr() - before).abs() <= 1e-12);
            if a != b {
                let once = s.apply_cnot(q(a), q(b)).unwrap();
                prop_assert!((once.norm_sqr() - before).abs() <= 1e-12);
                prop_assert_eq!(once.apply_cnot(q(a), q(b)).unwrap(), s.clone());
                let mc = s.apply_multi_controlled(&[q(a)], &Gate2x2::x(), q(b)).unwrap();
                prop_assert_eq!(mc, once);
            }
        }

        #[test]
        fn split_branches_are_orthogonal_and_complete(s in arb_state(3), k in 1usize..=3) {
            let (a, b) = s.split_on_qubit(q(k)).unwrap();
            prop_assert!((a.norm_sqr() + b.norm_sqr() - s.norm_sqr()).abs() <= 1e-12);
            prop_assert!(a.inner(&b).unwrap().norm() <= 1e-15);
        }
    }
}
