//! Small dense complex linear-algebra helpers shared by the other modules.

use nalgebra::{Complex, DMatrix};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn dagger(m: &CMatrix) -> CMatrix {
    m.adjoint()
}

/// `(m + m†) / 2`.
pub fn hermitize(m: &mut CMatrix) {
    let n = m.nrows();
    for a in 0..n {
        m[(a, a)].im = 0.0;
        for b in (a + 1)..n {
            let avg = (m[(a, b)] + m[(b, a)].conj()) * 0.5;
            m[(a, b)] = avg;
            m[(b, a)] = avg.conj();
        }
    }
}

/// Largest entrywise modulus of `m - m†`.
pub fn hermiticity_error(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for a in 0..n {
        for b in a..n {
            worst = worst.max((m[(a, b)] - m[(b, a)].conj()).norm());
        }
    }
    worst
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// Eigenvalues of a Hermitian matrix, ascending. Only the lower triangle is read
/// for dimensions above two.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let n = m.nrows();
    let mut vals = match n {
        0 => Vec::new(),
        1 => vec![m[(0, 0)].re],
        2 => {
            let a = m[(0, 0)].re;
            let d = m[(1, 1)].re;
            let b = m[(1, 0)];
            let mean = 0.5 * (a + d);
            let half_gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
            vec![mean - half_gap, mean + half_gap]
        }
        _ if m.iter().all(|z| z.im == 0.0) => real_symmetric_eigenvalues(m.map(|z| z.re)),
        _ => {
            let v: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
            if v.iter().all(|x| x.is_finite()) {
                v
            } else {
                // The complex tridiagonalisation can break down on rank-deficient
                // input; the real form [[A, -B], [B, A]] has every eigenvalue twice.
                let embedded = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
                    let z = m[(i % n, j % n)];
                    match (i < n, j < n) {
                        (true, false) => -z.im,
                        (false, true) => z.im,
                        _ => z.re,
                    }
                });
                real_symmetric_eigenvalues(embedded).into_iter().step_by(2).collect()
            }
        }
    };
    vals.sort_by(|x, y| x.total_cmp(y));
    vals
}

fn real_symmetric_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(|x, y| x.total_cmp(y));
    v
}

/// Shannon entropy in bits of a spectrum, `0 log 0 = 0`.
pub fn spectrum_entropy(eigenvalues: &[f64]) -> f64 {
    eigenvalues
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.log2())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_fast_path_matches_general_solver() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0.3, 0.0), c(0.1, -0.2), c(0.1, 0.2), c(0.7, 0.0)]);
        let fast = hermitian_eigenvalues(&m);
        let mut general: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
        general.sort_by(|a, b| a.total_cmp(b));
        for (x, y) in fast.iter().zip(&general) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn hermitize_removes_antihermitian_part() {
        let mut m = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.3), c(0.2, 0.1), c(0.4, 0.0), c(0.0, -1.0)]);
        hermitize(&mut m);
        assert!(hermiticity_error(&m) < 1e-15);
        assert!((m[(0, 1)] - c(0.3, 0.05)).norm() < 1e-15);
    }

    #[test]
    fn dyadic_entropy() {
        assert!((spectrum_entropy(&[0.5, 0.25, 0.25]) - 1.5).abs() < 1e-15);
        assert_eq!(spectrum_entropy(&[1.0, 0.0]), 0.0);
    }

    #[test]
    fn complex_and_real_paths_agree() {
        let n = 6;
        let m = CMatrix::from_fn(n, n, |a, b| {
            let (x, y) = (a.min(b) as f64, a.max(b) as f64);
            let im = if a < b { 0.1 * (x - y) } else if a > b { -0.1 * (y - x) } else { 0.0 };
            c(1.0 / (1.0 + x + y), im)
        });
        let eig = hermitian_eigenvalues(&m);
        let embed = DMatrix::from_fn(2 * n, 2 * n, |r, s| {
            let z = m[(r / 2, s / 2)];
            match (r % 2, s % 2) {
                (0, 0) | (1, 1) => z.re,
                (0, 1) => -z.im,
                _ => z.im,
            }
        });
        let doubled = real_symmetric_eigenvalues(embed);
        for (k, x) in eig.iter().enumerate() {
            assert!((x - doubled[2 * k]).abs() < 1e-12);
            assert!((x - doubled[2 * k + 1]).abs() < 1e-12);
        }
        let trace: f64 = (0..n).map(|k| m[(k, k)].re).sum();
        assert!((eig.iter().sum::<f64>() - trace).abs() < 1e-12);
    }

    #[test]
    fn rank_deficient_matrix_has_finite_spectrum() {
        let v: Vec<C64> = (0..64).map(|k| c((k as f64 * 0.37).sin(), (k as f64 * 0.11).cos() * 0.2)).collect();
        let m = CMatrix::from_fn(64, 64, |a, b| v[a] * v[b].conj());
        let eig = hermitian_eigenvalues(&m);
        assert!(eig.iter().all(|x| x.is_finite()));
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        assert!((eig[63] - norm).abs() < 1e-10 * norm);
    }
}
