//! Channel and message descriptions.

use num_complex::Complex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::statevector::{Amplitude, StateVector};

/// Amplitudes `y_i` of the shared state `Σ_i y_i |i⟩|i⟩` over `2n` qubits.
///
/// All `y_i` are strictly positive, their squares sum to 1 and `y[0]` is the
/// smallest of them: block 0 of the recovery unitary is the identity, so the
/// basis must be labelled with the weakest component first.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelSpec<T> {
    n: usize,
    y: Vec<T>,
}

impl<T: Real> ChannelSpec<T> {
    pub fn new(n: usize, y: Vec<T>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidChannel(msg));
        if n == 0 {
            return bad("n must be at least 1".into());
        }
        if n > 16 {
            return bad(format!("n = {n} is too large"));
        }
        if y.len() != 1usize << n {
            return bad(format!("expected {} amplitudes for n = {n}, got {}", 1usize << n, y.len()));
        }
        for (i, v) in y.iter().enumerate() {
            if !v.is_finite() || *v <= T::zero() {
                return bad(format!("y[{i}] = {v} must be a positive finite real"));
            }
        }
        let norm = y.iter().fold(T::zero(), |acc, v| acc + *v * *v);
        if (norm - T::one()).abs() > T::norm_tol() {
            return bad(format!("sum of y_i^2 is {norm}, expected 1"));
        }
        if let Some((i, v)) = y.iter().enumerate().find(|(_, v)| **v < y[0]) {
            return bad(format!(
                "y[0] = {} is not the smallest amplitude (y[{i}] = {v}); relabel the basis so the smallest comes first",
                y[0]
            ));
        }
        Ok(Self { n, y })
    }

    /// All amplitudes equal to `2^{-n/2}`.
    pub fn maximal(n: usize) -> Result<Self> {
        let v = T::one() / T::lit((1u64 << n) as f64).sqrt();
        Self::new(n, vec![v; 1usize << n])
    }

    /// Random valid channel: uniform draws in `[0.05, 1)`, normalized, with
    /// the smallest swapped into position 0.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        let mut y: Vec<f64> = (0..1usize << n).map(|_| rng.random_range(0.05..1.0)).collect();
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        y.iter_mut().for_each(|v| *v /= norm);
        let min_at = y
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        y.swap(0, min_at);
        Self::new(n, y.into_iter().map(T::lit).collect())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn y(&self) -> &[T] {
        &self.y
    }

    #[inline]
    pub fn y0(&self) -> T {
        self.y[0]
    }

    pub fn is_maximal(&self) -> bool {
        self.y.iter().all(|v| (*v - self.y[0]).abs() <= T::norm_tol())
    }
}

/// Amplitudes `x_i` of the `n`-qubit state to be teleported.
#[derive(Clone, Debug, PartialEq)]
pub struct MessageSpec<T> {
    n: usize,
    x: Vec<Amplitude<T>>,
}

impl<T: Real> MessageSpec<T> {
    pub fn new(n: usize, x: Vec<Amplitude<T>>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidMessage(msg));
        if n == 0 {
            return bad("n must be at least 1".into());
        }
        if x.len() != 1usize << n {
            return bad(format!("expected {} amplitudes for n = {n}, got {}", 1usize << n, x.len()));
        }
        if let Some(i) = x.iter().position(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return bad(format!("x[{i}] is not finite"));
        }
        let norm = x.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr());
        if (norm - T::one()).abs() > T::norm_tol() {
            return bad(format!("sum of |x_i|^2 is {norm}, expected 1"));
        }
        Ok(Self { n, x })
    }

    pub fn from_real(n: usize, x: &[T]) -> Result<Self> {
        Self::new(n, x.iter().map(|v| Complex::new(*v, T::zero())).collect())
    }

    /// Uniform on the unit sphere: complex standard-normal draws, normalized.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self>
    where
        StandardNormal: Distribution<T>,
    {
        loop {
            let x: Vec<Amplitude<T>> = (0..1usize << n)
                .map(|_| Complex::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
                .collect();
            let norm = x.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr()).sqrt();
            if norm > T::zero() {
                return Self::new(n, x.into_iter().map(|a| a / norm).collect());
            }
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn x(&self) -> &[Amplitude<T>] {
        &self.x
    }

    pub fn to_state(&self) -> StateVector<T> {
        StateVector::from_amplitudes(self.x.clone()).expect("validated message")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn channel_validation() {
        assert!(ChannelSpec::new(1, vec![0.6, 0.8]).is_ok());
        let err = ChannelSpec::new(1, vec![0.8, 0.6]).unwrap_err();
        assert!(err.to_string().contains("relabel"), "{err}");
        assert!(ChannelSpec::new(1, vec![0.0, 1.0]).is_err());
        assert!(ChannelSpec::new(1, vec![0.5, 0.5]).is_err());
        assert!(ChannelSpec::new(2, vec![0.6, 0.8]).is_err());
        assert!(ChannelSpec::<f64>::new(0, vec![1.0]).is_err());
    }

    #[test]
    fn maximal_channel() {
        let ch = ChannelSpec::<f64>::maximal(3).unwrap();
        assert!(ch.is_maximal());
        assert!((ch.y0() - 8f64.sqrt().recip()).abs() < 1e-15);
    }

    #[test]
    fn random_specs_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=4 {
            for _ in 0..20 {
                let ch = ChannelSpec::<f64>::random(n, &mut rng).unwrap();
                assert!(ch.y().iter().all(|v| *v >= ch.y0()));
                let msg = MessageSpec::<f64>::random(n, &mut rng).unwrap();
                assert!(msg.to_state().is_normalized());
            }
        }
    }

    #[test]
    fn message_validation() {
        assert!(MessageSpec::from_real(1, &[0.6, 0.8]).is_ok());
        assert!(MessageSpec::from_real(1, &[0.6, 0.6]).is_err());
        assert!(MessageSpec::from_real(2, &[0.6, 0.8]).is_err());
    }
}
