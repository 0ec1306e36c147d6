//! Matrix exponential by scaling and squaring.
//!
//! This is the third, fully independent route to unitary evolution (next to
//! the spectral propagator and the RK4 integrator), so it deliberately shares
//! no code with the eigensolver: the scaled matrix is expanded in a Taylor
//! series to machine precision and squared back.

use ndarray::Array2;
use num_complex::Complex;

use crate::scalar::{real, Scalar};

const MAX_TAYLOR_TERMS: usize = 40;

/// `exp(M)` for a square complex matrix.
pub fn expm<T: Scalar>(m: &Array2<Complex<T>>) -> Array2<Complex<T>> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "expm needs a square matrix");
    if n == 0 {
        return Array2::zeros((0, 0));
    }

    // scale so the max-absolute-row-sum norm is at most 1/4
    let norm = one_norm(m);
    let quarter = real::<T>(0.25);
    let mut squarings = 0u32;
    let mut scale = T::one();
    let mut scaled_norm = norm;
    while scaled_norm > quarter {
        scaled_norm /= real::<T>(2.0);
        scale /= real::<T>(2.0);
        squarings += 1;
    }
    let a = m.mapv(|z| z * scale);

    let mut result = Array2::from_diag_elem(n, Complex::new(T::one(), T::zero()));
    let mut term = a.clone();
    result += &term;
    for k in 2..=MAX_TAYLOR_TERMS {
        term = term.dot(&a).mapv(|z| z / real::<T>(k as f64));
        result += &term;
        if sup_norm(&term) < T::epsilon() {
            break;
        }
    }

    for _ in 0..squarings {
        result = result.dot(&result);
    }
    result
}

/// Unitary propagator `exp(-i G t)` for a real generator matrix.
pub fn propagator<T: Scalar>(generator: &Array2<T>, t: T) -> Array2<Complex<T>> {
    let m = generator.mapv(|x| Complex::new(T::zero(), -x * t));
    expm(&m)
}

fn one_norm<T: Scalar>(m: &Array2<Complex<T>>) -> T {
    let mut worst = T::zero();
    for col in m.columns() {
        let sum = col.iter().map(|z| z.norm()).fold(T::zero(), |s, x| s + x);
        worst = worst.max(sum);
    }
    worst
}

fn sup_norm<T: Scalar>(m: &Array2<Complex<T>>) -> T {
    m.iter().map(|z| z.norm()).fold(T::zero(), |s, x| s.max(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn exponential_of_zero_is_identity() {
        let z: Array2<Complex<f64>> = Array2::zeros((3, 3));
        let e = expm(&z);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((e[[i, j]].re - want).abs() < 1e-15);
                assert!(e[[i, j]].im.abs() < 1e-15);
            }
        }
    }

    #[test]
    fn diagonal_exponential() {
        let m = array![
            [Complex::new(1.0f64, 0.0), Complex::new(0.0, 0.0)],
            [Complex::new(0.0, 0.0), Complex::new(0.0, -2.0)]
        ];
        let e = expm(&m);
        assert!((e[[0, 0]].re - 1.0f64.exp()).abs() < 1e-13);
        assert!((e[[1, 1]] - Complex::from_polar(1.0, -2.0)).norm() < 1e-13);
    }

    #[test]
    fn propagator_is_unitary() {
        let a = array![[0.0, 2.0, 0.0], [2.0, 0.0, 1.0], [0.0, 1.0, 0.0]];
        let u = propagator(&a, 1.7f64);
        // U U^dagger = I
        let n = 3;
        for i in 0..n {
            for j in 0..n {
                let mut s = Complex::new(0.0, 0.0);
                for k in 0..n {
                    s += u[[i, k]] * u[[j, k]].conj();
                }
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((s.re - want).abs() < 1e-12 && s.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn matches_two_level_rotation() {
        // exp(-i sigma_x t) = cos t I - i sin t sigma_x
        let sx = array![[0.0, 1.0], [1.0, 0.0]];
        let t = 0.9f64;
        let u = propagator(&sx, t);
        assert!((u[[0, 0]] - Complex::new(t.cos(), 0.0)).norm() < 1e-14);
        assert!((u[[0, 1]] - Complex::new(0.0, -t.sin())).norm() < 1e-14);
    }
}
