//! Transforms of real functions on `Z_n`: the DFT, the cosine transform `C`,
//! and the reversal operator `R`.
//!
//! The LP reductions never touch complex numbers: a real `f` has `f-hat >= 0`
//! exactly when `Rf = f` and `Cf >= 0`, which is how the "Fourier
//! nonnegative" constraint enters both the primal LPs and the certificate
//! verifier.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::TAU;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error("grid function needs at least one point")]
    Empty,
    #[error("non-finite value at index {0}")]
    NonFinite(usize),
}

/// A real-valued function on `Z_n`, stored as its value vector.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(values: Vec<f64>) -> Result<Self, SpectralError> {
        if values.is_empty() {
            return Err(SpectralError::Empty);
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(SpectralError::NonFinite(i));
        }
        Ok(GridFunction { values })
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> f64) -> Result<Self, SpectralError> {
        Self::new((0..n).map(f).collect())
    }

    /// The delta function at 0.
    pub fn delta(n: usize) -> Self {
        let mut values = vec![0.0; n];
        values[0] = 1.0;
        GridFunction { values }
    }

    pub fn constant(n: usize, v: f64) -> Result<Self, SpectralError> {
        Self::new(vec![v; n])
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, k: usize) -> f64 {
        self.values[k % self.values.len()]
    }
}

/// `f-hat(k) = sum_j f(j) e^(-2 pi i j k / n)`, computed by direct summation.
///
/// This O(n^2) version is the reference; [`dft_fast`] must agree with it.
pub fn dft(f: &GridFunction) -> Vec<Complex64> {
    let n = f.n();
    (0..n)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &v) in f.values().iter().enumerate() {
                let angle = -TAU * (j as f64) * (k as f64) / (n as f64);
                acc += v * Complex64::new(angle.cos(), angle.sin());
            }
            acc
        })
        .collect()
}

/// Same transform through a mixed-radix FFT (no padding — the circular
/// structure requires the exact length).
pub fn dft_fast(f: &GridFunction) -> Vec<Complex64> {
    let n = f.n();
    let mut buf: Vec<Complex64> = f
        .values()
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    buf
}

/// `(Cf)(k) = sum_j f(j) cos(2 pi j k / n)` — the real part of the DFT.
pub fn cosine_transform(f: &GridFunction) -> GridFunction {
    let n = f.n();
    let values = (0..n)
        .map(|k| {
            f.values()
                .iter()
                .enumerate()
                .map(|(j, &v)| v * (TAU * (j as f64) * (k as f64) / (n as f64)).cos())
                .sum()
        })
        .collect();
    GridFunction { values }
}

/// `(Rf)(k) = f(-k mod n)`; an involution, and `RC = CR`.
pub fn reversal(f: &GridFunction) -> GridFunction {
    let n = f.n();
    let values = (0..n).map(|k| f.values()[(n - k) % n]).collect();
    GridFunction { values }
}

/// Largest deviation of `f` from its reversal; 0 exactly when `f` is even.
pub fn evenness_defect(f: &GridFunction) -> f64 {
    let n = f.n();
    (0..n)
        .map(|k| (f.values()[k] - f.values()[(n - k) % n]).abs())
        .fold(0.0, f64::max)
}

/// Whether `f-hat >= 0` up to `tol`, via the real characterization:
/// `f` even (within `tol`) and `Cf >= -tol` entrywise.
pub fn is_fourier_nonneg(f: &GridFunction, tol: f64) -> bool {
    debug_assert!(tol >= 0.0);
    if evenness_defect(f) > tol {
        return false;
    }
    cosine_transform(f).values().iter().all(|&c| c >= -tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn gf(values: &[f64]) -> GridFunction {
        GridFunction::new(values.to_vec()).unwrap()
    }

    fn random_gf(rng: &mut StdRng, n: usize) -> GridFunction {
        GridFunction::from_fn(n, |_| rng.gen_range(-1.0..1.0)).unwrap()
    }

    fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn constructor_rejects_bad_values() {
        assert_eq!(GridFunction::new(vec![]).unwrap_err(), SpectralError::Empty);
        assert_eq!(
            GridFunction::new(vec![1.0, f64::NAN]).unwrap_err(),
            SpectralError::NonFinite(1)
        );
        assert_eq!(
            GridFunction::new(vec![f64::INFINITY]).unwrap_err(),
            SpectralError::NonFinite(0)
        );
    }

    #[test]
    fn dft_known_values() {
        let hat = dft(&GridFunction::delta(4));
        for k in 0..4 {
            assert!((hat[k] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
        let hat = dft(&GridFunction::constant(4, 1.0).unwrap());
        assert!((hat[0] - Complex64::new(4.0, 0.0)).norm() < 1e-12);
        for k in 1..4 {
            assert!(hat[k].norm() < 1e-12);
        }
        let hat = dft(&gf(&[0.0, 1.0, 0.0, 1.0]));
        let expect = [2.0, 0.0, -2.0, 0.0];
        for k in 0..4 {
            assert!((hat[k] - Complex64::new(expect[k], 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn dft_zero_bin_is_plain_sum() {
        let mut rng = StdRng::seed_from_u64(7);
        for n in [1usize, 2, 5, 12, 31] {
            let f = random_gf(&mut rng, n);
            let sum: f64 = f.values().iter().sum();
            let hat = dft(&f);
            assert!((hat[0].re - sum).abs() <= 1e-12 * (1.0 + sum.abs()));
            assert!(hat[0].im.abs() <= 1e-12);
        }
    }

    #[test]
    fn dft_is_linear() {
        let mut rng = StdRng::seed_from_u64(8);
        for _ in 0..20 {
            let n = rng.gen_range(2..40);
            let f = random_gf(&mut rng, n);
            let g = random_gf(&mut rng, n);
            let (a, b) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let combo =
                GridFunction::from_fn(n, |k| a * f.values()[k] + b * g.values()[k]).unwrap();
            let lhs = dft(&combo);
            let fh = dft(&f);
            let gh = dft(&g);
            let rhs: Vec<Complex64> = (0..n).map(|k| a * fh[k] + b * gh[k]).collect();
            assert!(max_abs_diff(&lhs, &rhs) < 1e-10 * (n as f64));
        }
    }

    #[test]
    fn fast_path_matches_reference() {
        let mut rng = StdRng::seed_from_u64(9);
        for n in 2..=64usize {
            for _ in 0..4 {
                let f = random_gf(&mut rng, n);
                let scale: f64 = f.values().iter().map(|v| v.abs()).sum::<f64>().max(1.0);
                assert!(
                    max_abs_diff(&dft(&f), &dft_fast(&f)) <= 1e-9 * scale,
                    "n = {n}"
                );
            }
        }
    }

    #[test]
    fn double_transform_recovers_input() {
        // f-hat-hat(k) = n f(-k), so conjugate/scale recovers f
        let mut rng = StdRng::seed_from_u64(10);
        for n in [2usize, 3, 8, 15] {
            let f = random_gf(&mut rng, n);
            let hat = dft(&f);
            let twice: Vec<Complex64> = (0..n)
                .map(|k| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (j, c) in hat.iter().enumerate() {
                        let angle = -TAU * (j as f64) * (k as f64) / (n as f64);
                        acc += c * Complex64::new(angle.cos(), angle.sin());
                    }
                    acc
                })
                .collect();
            for k in 0..n {
                let expect = n as f64 * f.values()[(n - k) % n];
                assert!((twice[k] - Complex64::new(expect, 0.0)).norm() < 1e-9 * (n as f64));
            }
        }
    }

    #[test]
    fn cosine_transform_known_values() {
        let n6 = cosine_transform(&gf(&[0.0, 1.0, 0.0, 0.0, 0.0, 1.0]));
        let expect = [2.0, 1.0, -1.0, -2.0, -1.0, 1.0];
        for k in 0..6 {
            assert!((n6.values()[k] - expect[k]).abs() < 1e-12, "k = {k}");
        }
        let ones = cosine_transform(&GridFunction::delta(5));
        assert!(ones.values().iter().all(|&v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn cosine_equals_real_dft_for_even_functions() {
        let mut rng = StdRng::seed_from_u64(11);
        for n in [4usize, 5, 6, 13] {
            let mut vals = vec![0.0; n];
            for k in 0..=n / 2 {
                let v = rng.gen_range(-1.0..1.0);
                vals[k] = v;
                vals[(n - k) % n] = v;
            }
            let f = gf(&vals);
            let hat = dft(&f);
            let cf = cosine_transform(&f);
            for k in 0..n {
                assert!((hat[k].re - cf.values()[k]).abs() < 1e-10);
                assert!(hat[k].im.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn reversal_behaviour() {
        assert_eq!(reversal(&gf(&[1.0, 2.0, 3.0, 4.0])).values(), &[1.0, 4.0, 3.0, 2.0]);
        let even = gf(&[5.0, 1.0, 2.0, 1.0]);
        assert_eq!(reversal(&even), even);
        let mut rng = StdRng::seed_from_u64(12);
        for n in [1usize, 2, 9, 16] {
            let f = random_gf(&mut rng, n);
            assert_eq!(reversal(&reversal(&f)), f);
        }
    }

    #[test]
    fn reversal_commutes_with_cosine() {
        let mut rng = StdRng::seed_from_u64(13);
        for n in [3usize, 8, 11] {
            let f = random_gf(&mut rng, n);
            let lhs = cosine_transform(&reversal(&f));
            let rhs = reversal(&cosine_transform(&f));
            for k in 0..n {
                assert!((lhs.values()[k] - rhs.values()[k]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn fourier_nonneg_examples() {
        assert!(is_fourier_nonneg(&GridFunction::delta(6), 0.0));
        assert!(!is_fourier_nonneg(&gf(&[0.0, 1.0, 0.0, 0.0]), 1e-9)); // odd part
        assert!(is_fourier_nonneg(&gf(&[2.0, 1.0, 0.0, 1.0]), 1e-9)); // Cf = (4,2,0,2)
        assert!(!is_fourier_nonneg(&GridFunction::constant(6, -1.0).unwrap(), 1e-9));
    }
}
