//! Smallest eigenpairs of small Hermitian matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Off-diagonal Frobenius mass at which Jacobi sweeps stop (relative to the
/// matrix norm when that exceeds 1).
pub const JACOBI_TOLERANCE: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

/// Smallest eigenvalue and a unit eigenvector: closed form for `d <= 2`,
/// cyclic Jacobi otherwise.
pub fn smallest_eigenpair(m: &DMatrix<Complex64>) -> (f64, DVector<Complex64>) {
    match m.nrows() {
        1 => (m[(0, 0)].re, DVector::from_element(1, Complex64::new(1.0, 0.0))),
        2 => smallest_eigenpair_2x2(m),
        _ => {
            let (values, vectors) = jacobi_eigen(m);
            let i = (0..values.len()).min_by(|&a, &b| values[a].total_cmp(&values[b])).expect("nonempty");
            (values[i], vectors.column(i).into_owned())
        }
    }
}

/// `[[a, b], [conj b, c]]`: `lambda = (a+c)/2 - sqrt(((a-c)/2)^2 + |b|^2)`.
pub fn smallest_eigenpair_2x2(m: &DMatrix<Complex64>) -> (f64, DVector<Complex64>) {
    let (a, b, c) = (m[(0, 0)].re, m[(0, 1)], m[(1, 1)].re);
    let half = (a - c) / 2.0;
    let lambda = (a + c) / 2.0 - (half * half + b.norm_sqr()).sqrt();
    // either row of (M - lambda) gives a null vector; keep the better scaled one
    let u = [b, Complex64::new(lambda - a, 0.0)];
    let v = [Complex64::new(lambda - c, 0.0), b.conj()];
    let norm = |w: &[Complex64; 2]| (w[0].norm_sqr() + w[1].norm_sqr()).sqrt();
    let (w, n) = if norm(&u) >= norm(&v) { (u, norm(&u)) } else { (v, norm(&v)) };
    let vector = if n < 1e-300 {
        DVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)])
    } else {
        DVector::from_vec(vec![w[0] / n, w[1] / n])
    };
    (lambda, vector)
}

fn off_diagonal(m: &DMatrix<Complex64>) -> f64 {
    let d = m.nrows();
    let mut s = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                s += m[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi for a Hermitian matrix. Returns eigenvalues and the
/// unitary whose columns are the matching eigenvectors.
pub fn jacobi_eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let d = m.nrows();
    let mut a = m.clone();
    let mut v = DMatrix::<Complex64>::identity(d, d);
    let scale = m.norm().max(1.0);
    for _ in 0..MAX_SWEEPS {
        if off_diagonal(&a) <= JACOBI_TOLERANCE * scale {
            break;
        }
        for p in 0..d {
            for q in p + 1..d {
                let apq = a[(p, q)];
                if apq.norm() == 0.0 {
                    continue;
                }
                // phase rotation makes the pivot real, then a real rotation kills it
                let phase = apq / apq.norm();
                let h = apq.norm();
                let theta = 0.5 * (2.0 * h).atan2(a[(q, q)].re - a[(p, p)].re);
                let (c, s) = (theta.cos(), theta.sin());
                let mut g = DMatrix::<Complex64>::identity(d, d);
                g[(p, p)] = Complex64::new(c, 0.0);
                g[(p, q)] = Complex64::new(s, 0.0);
                g[(q, p)] = phase.conj() * -s;
                g[(q, q)] = phase.conj() * c;
                a = g.adjoint() * &a * &g;
                v *= &g;
            }
        }
    }
    let values = (0..d).map(|i| a[(i, i)].re).collect();
    (values, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(d: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
        let x = DMatrix::from_fn(d, d, |_, _| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        &x + x.adjoint()
    }

    #[test]
    fn jacobi_diagonalizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in 2..=4 {
            for _ in 0..200 {
                let m = random_hermitian(d, &mut rng);
                let (values, v) = jacobi_eigen(&m);
                assert!((&v * v.adjoint() - DMatrix::identity(d, d)).norm() < 1e-12);
                for (i, lambda) in values.iter().enumerate() {
                    let col = v.column(i);
                    assert!((&m * col - col * Complex64::new(*lambda, 0.0)).norm() < 1e-12);
                }
                let mut reference: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
                let mut ours = values.clone();
                reference.sort_by(f64::total_cmp);
                ours.sort_by(f64::total_cmp);
                for (a, b) in reference.iter().zip(&ours) {
                    assert!((a - b).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn closed_form_matches_jacobi() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..500 {
            let m = random_hermitian(2, &mut rng);
            let (lambda, w) = smallest_eigenpair_2x2(&m);
            let (values, _) = jacobi_eigen(&m);
            assert!((lambda - values.iter().copied().fold(f64::INFINITY, f64::min)).abs() < 1e-12);
            assert!((&m * &w - &w * Complex64::new(lambda, 0.0)).norm() < 1e-12);
            assert!((w.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn diagonal_and_zero_inputs() {
        let z = DMatrix::<Complex64>::zeros(2, 2);
        let (lambda, w) = smallest_eigenpair_2x2(&z);
        assert_eq!(lambda, 0.0);
        assert!((w.norm() - 1.0).abs() < 1e-15);
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![Complex64::new(3.0, 0.0), Complex64::new(1.0, 0.0)]));
        let (lambda, w) = smallest_eigenpair_2x2(&m);
        assert_eq!(lambda, 1.0);
        assert!((w[1].norm() - 1.0).abs() < 1e-15);
    }
}
