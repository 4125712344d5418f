//! Dense complex linear algebra shared by the analytic modules: Hermitian
//! eigendecomposition, positive semidefinite checks and square roots,
//! operator norms, and the rank-one determinant update.
//!
//! Matrices here are small (node counts tensored by modest block sizes), so
//! everything routes through dense nalgebra kernels. All functions are pure
//! and safe to call from worker threads.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Condition-number ceiling past which inverses are refused.
pub const COND_LIMIT: f64 = 1e12;

/// Hermitian-deviation ceiling accepted by [`HermitianMatrix::new`] before
/// the input is considered a caller bug rather than rounding noise.
const HERM_DEV_TOL: f64 = 1e-8;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn ensure_finite(m: &CMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidInput("matrix contains non-finite entries".into()))
    }
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Square matrix with exact Hermitian symmetry: the strict lower triangle is
/// stored as the conjugate of the upper one and the diagonal is real, so
/// `entry(i, j) == entry(j, i).conj()` holds bit for bit.
#[derive(Clone, Debug)]
pub struct HermitianMatrix {
    mat: CMatrix,
}

impl HermitianMatrix {
    /// Symmetrizes a square matrix entrywise. The input must already be
    /// Hermitian up to rounding noise; larger deviations are rejected as
    /// caller bugs rather than silently averaged away.
    pub fn new(m: &CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::InvalidInput(format!(
                "expected a square matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        ensure_finite(m)?;
        let n = m.nrows();
        let scale = max_abs(m).max(1.0);
        let mut dev: f64 = 0.0;
        let mut h = CMatrix::zeros(n, n);
        for i in 0..n {
            dev = dev.max(m[(i, i)].im.abs());
            h[(i, i)] = cr(m[(i, i)].re);
            for j in (i + 1)..n {
                dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
                let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                h[(i, j)] = avg;
                h[(j, i)] = avg.conj();
            }
        }
        if dev > HERM_DEV_TOL * scale {
            return Err(Error::InvalidInput(format!(
                "matrix is not Hermitian (deviation {dev:.3e} at scale {scale:.3e})"
            )));
        }
        Ok(Self { mat: h })
    }

    /// Builds the matrix from a closure evaluated on the upper triangle; the
    /// lower triangle is filled with conjugates, the diagonal forced real.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        let mut h = CMatrix::zeros(n, n);
        for i in 0..n {
            h[(i, i)] = cr(f(i, i).re);
            for j in (i + 1)..n {
                let v = f(i, j);
                h[(i, j)] = v;
                h[(j, i)] = v.conj();
            }
        }
        ensure_finite(&h)?;
        Ok(Self { mat: h })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    /// Scale used by relative tolerances: max(1, |Re tr H|).
    pub fn trace_scale(&self) -> f64 {
        self.mat.trace().re.abs().max(1.0)
    }
}

/// Eigendecomposition of a Hermitian matrix. Eigenvalues are real and sorted
/// ascending; eigenvector columns are listed in the same order and form a
/// unitary matrix up to rounding.
#[derive(Clone, Debug)]
pub struct EigResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

/// Hermitian eigendecomposition with ascending eigenvalue order.
pub fn herm_eig(h: &HermitianMatrix) -> Result<EigResult> {
    let n = h.dim();
    if n == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    let eig = h.mat.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vecs = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &eig.eigenvectors.column(src));
    }
    if !eigenvalues.iter().all(|v| v.is_finite()) {
        return Err(Error::IllConditioned("eigensolver produced non-finite values".into()));
    }
    Ok(EigResult { eigenvalues, eigenvectors: vecs })
}

/// Positive semidefiniteness test. Returns the verdict together with the
/// smallest eigenvalue; the verdict is `min_eig >= -tol * trace_scale`.
pub fn psd_check(h: &HermitianMatrix, tol: f64) -> Result<(bool, f64)> {
    let eig = herm_eig(h)?;
    let min_eig = eig.eigenvalues[0];
    Ok((min_eig >= -tol * h.trace_scale(), min_eig))
}

/// Positive semidefinite square root. Eigenvalues in `[-tol * scale, 0)` are
/// clipped to zero; anything below that window is a hard failure carrying the
/// offending eigenvalue.
pub fn psd_sqrt(h: &HermitianMatrix, tol: f64) -> Result<HermitianMatrix> {
    let eig = herm_eig(h)?;
    let floor = -tol * h.trace_scale();
    let min_eig = eig.eigenvalues[0];
    if min_eig < floor {
        return Err(Error::NotPsd { min_eig });
    }
    let half = rescaled(&eig, |v| v.max(0.0).sqrt());
    HermitianMatrix::new(&half)
}

/// Inverse square root of a positive definite matrix. Fails with `NotPsd`
/// when an eigenvalue is not strictly positive and with `Singular` when the
/// spread of eigenvalues exceeds [`COND_LIMIT`].
pub fn psd_inv_sqrt(h: &HermitianMatrix, tol: f64) -> Result<HermitianMatrix> {
    let eig = herm_eig(h)?;
    let min_eig = eig.eigenvalues[0];
    let max_eig = *eig.eigenvalues.last().unwrap();
    if min_eig < tol * h.trace_scale() || min_eig <= 0.0 {
        return Err(Error::NotPsd { min_eig });
    }
    let cond = max_eig / min_eig;
    if cond > COND_LIMIT {
        return Err(Error::Singular { cond });
    }
    let inv_half = rescaled(&eig, |v| 1.0 / v.sqrt());
    HermitianMatrix::new(&inv_half)
}

fn rescaled(eig: &EigResult, f: impl Fn(f64) -> f64) -> CMatrix {
    let n = eig.eigenvalues.len();
    let mut scaled = eig.eigenvectors.clone();
    for j in 0..n {
        let s = cr(f(eig.eigenvalues[j]));
        for i in 0..n {
            scaled[(i, j)] *= s;
        }
    }
    &scaled * eig.eigenvectors.adjoint()
}

/// Spectral norm, computed as the square root of the top eigenvalue of
/// `A* A`. Returns NaN on non-finite input.
pub fn operator_norm(a: &CMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    if !a.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return f64::NAN;
    }
    let gram = a.adjoint() * a;
    let eig = gram.symmetric_eigen();
    eig.eigenvalues.iter().copied().fold(0.0, f64::max).max(0.0).sqrt()
}

/// Condition estimate of a general matrix via the extreme singular values of
/// `A* A`. Infinite when the matrix is numerically rank deficient.
pub fn condition_estimate(a: &CMatrix) -> f64 {
    if a.is_empty() {
        return 1.0;
    }
    let gram = a.adjoint() * a;
    let eig = gram.symmetric_eigen();
    let max = eig.eigenvalues.iter().copied().fold(f64::MIN, f64::max);
    let min = eig.eigenvalues.iter().copied().fold(f64::MAX, f64::min);
    if min <= 0.0 || !min.is_finite() || !max.is_finite() {
        f64::INFINITY
    } else {
        (max / min).sqrt()
    }
}

/// Determinant of `P + u v*` via the matrix determinant lemma:
/// `det(P) * (1 + v* P^{-1} u)`. Refuses near-singular `P`.
pub fn det_rank_one_update(p: &CMatrix, u: &CVector, v: &CVector) -> Result<C64> {
    if p.nrows() != p.ncols() {
        return Err(Error::InvalidInput("P must be square".into()));
    }
    if u.len() != p.nrows() || v.len() != p.nrows() {
        return Err(Error::InvalidInput("u and v must match the dimension of P".into()));
    }
    ensure_finite(p)?;
    let cond = condition_estimate(p);
    if !cond.is_finite() || cond > COND_LIMIT {
        return Err(Error::Singular { cond });
    }
    let lu = p.clone().full_piv_lu();
    let det = lu.determinant();
    let x = lu
        .solve(u)
        .ok_or(Error::Singular { cond: f64::INFINITY })?;
    Ok(det * (cr(1.0) + v.dotc(&x)))
}

/// Kronecker product helper (row-major block convention).
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Eigenvalues of a small general complex matrix: characteristic polynomial
/// by the Faddeev-LeVerrier recurrence, roots by Durand-Kerner iteration.
/// Intended for the dimensions used in this crate (n <= 24).
pub fn eigenvalues_small(a: &CMatrix) -> Result<Vec<C64>> {
    if a.nrows() != a.ncols() {
        return Err(Error::InvalidInput("matrix must be square".into()));
    }
    ensure_finite(a)?;
    let n = a.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    if n > 24 {
        return Err(Error::InvalidInput("eigenvalues_small supports n <= 24".into()));
    }

    // Monic characteristic polynomial coefficients, coeffs[k] on lambda^k.
    let mut coeffs = vec![C64::ZERO; n + 1];
    coeffs[n] = cr(1.0);
    let mut mk = CMatrix::identity(n, n);
    for k in 1..=n {
        let am = a * &mk;
        let ck = -am.trace() / cr(k as f64);
        coeffs[n - k] = ck;
        if k < n {
            mk = am + CMatrix::identity(n, n) * ck;
        }
    }

    // Cauchy bound on root modulus for the initial circle.
    let bound = 1.0 + coeffs[..n].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let seed = c64(0.4, 0.9);
    let mut roots: Vec<C64> = (0..n)
        .map(|j| seed.powu(j as u32 + 1) * cr(bound))
        .collect();

    let eval = |z: C64| {
        let mut acc = C64::ZERO;
        for k in (0..=n).rev() {
            acc = acc * z + coeffs[k];
        }
        acc
    };

    for _ in 0..600 {
        let mut max_step: f64 = 0.0;
        for j in 0..n {
            let mut den = cr(1.0);
            for k in 0..n {
                if k != j {
                    let d = roots[j] - roots[k];
                    den *= if d.norm() < 1e-300 { c64(1e-12, 1e-12) } else { d };
                }
            }
            let step = eval(roots[j]) / den;
            roots[j] -= step;
            max_step = max_step.max(step.norm() / (1.0 + roots[j].norm()));
        }
        if max_step < 1e-14 {
            break;
        }
    }
    Ok(roots)
}

/// Largest eigenvalue modulus of a small general matrix.
pub fn spectral_radius(a: &CMatrix) -> Result<f64> {
    Ok(eigenvalues_small(a)?
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
        CMatrix::from_fn(n, n, |_, _| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> HermitianMatrix {
        let a = random_matrix(rng, n);
        HermitianMatrix::new(&(&a + a.adjoint())).unwrap()
    }

    #[test]
    fn identity_eigen() {
        let h = HermitianMatrix::new(&CMatrix::identity(4, 4)).unwrap();
        let eig = herm_eig(&h).unwrap();
        for v in &eig.eigenvalues {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn known_two_by_two() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let m = CMatrix::from_row_slice(2, 2, &[cr(2.0), c64(0.0, 1.0), c64(0.0, -1.0), cr(2.0)]);
        let eig = herm_eig(&HermitianMatrix::new(&m).unwrap()).unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!((eig.eigenvalues[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn reconstruction_and_unitarity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = rng.random_range(1..=8);
            let h = random_hermitian(&mut rng, n);
            let eig = herm_eig(&h).unwrap();
            let scale = operator_norm(h.matrix()).max(1.0);
            let mut recon = CMatrix::zeros(n, n);
            for j in 0..n {
                let v = eig.eigenvectors.column(j).clone_owned();
                recon += &v * v.adjoint() * cr(eig.eigenvalues[j]);
            }
            assert!(operator_norm(&(recon - h.matrix())) <= 1e-11 * scale);
            let gram = eig.eigenvectors.adjoint() * &eig.eigenvectors;
            assert!(operator_norm(&(gram - CMatrix::identity(n, n))) <= 1e-12);
            for w in eig.eigenvalues.windows(2) {
                assert!(w[0] <= w[1]);
            }
        }
    }

    #[test]
    fn psd_check_indefinite() {
        let m = CMatrix::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(1.0), cr(0.0)]);
        let (ok, min_eig) = psd_check(&HermitianMatrix::new(&m).unwrap(), 1e-9).unwrap();
        assert!(!ok);
        assert!((min_eig + 1.0).abs() < 1e-12);
    }

    #[test]
    fn sqrt_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..25 {
            let n = rng.random_range(1..=7);
            let b = random_matrix(&mut rng, n);
            let h = HermitianMatrix::new(&(b.adjoint() * &b)).unwrap();
            let r = psd_sqrt(&h, 1e-9).unwrap();
            let err = operator_norm(&(r.matrix() * r.matrix() - h.matrix()));
            assert!(err <= 1e-10 * operator_norm(h.matrix()).max(1.0));
        }
    }

    #[test]
    fn sqrt_rejects_indefinite() {
        let m = CMatrix::from_row_slice(2, 2, &[cr(1.0), cr(0.0), cr(0.0), cr(-1.0)]);
        match psd_sqrt(&HermitianMatrix::new(&m).unwrap(), 1e-9) {
            Err(Error::NotPsd { min_eig }) => assert!((min_eig + 1.0).abs() < 1e-12),
            other => panic!("expected NotPsd, got {other:?}"),
        }
    }

    #[test]
    fn inv_sqrt_inverts() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let n = rng.random_range(1..=6);
            let b = random_matrix(&mut rng, n);
            let h = HermitianMatrix::new(&(b.adjoint() * &b + CMatrix::identity(n, n) * cr(0.5)))
                .unwrap();
            let r = psd_inv_sqrt(&h, 1e-13).unwrap();
            let prod = r.matrix() * h.matrix() * r.matrix();
            assert!(operator_norm(&(prod - CMatrix::identity(n, n))) < 1e-10);
        }
    }

    #[test]
    fn operator_norm_diagonal_and_unitary_invariance() {
        let d = CMatrix::from_diagonal(&CVector::from_vec(vec![c64(0.0, 3.0), cr(-2.0), cr(0.5)]));
        assert!((operator_norm(&d) - 3.0).abs() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..10 {
            let n = rng.random_range(2..=6);
            let a = random_matrix(&mut rng, n);
            let q = random_matrix(&mut rng, n).qr().q();
            let rotated = &q * &a * q.adjoint();
            assert!((operator_norm(&rotated) - operator_norm(&a)).abs() < 1e-10);
        }
    }

    #[test]
    fn det_rank_one_update_matches_direct() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut checked = 0;
        while checked < 1000 {
            let n = rng.random_range(2..=8);
            let p = random_matrix(&mut rng, n) + CMatrix::identity(n, n) * cr(2.0);
            let u = CVector::from_fn(n, |_, _| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
            let v = CVector::from_fn(n, |_, _| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
            let lemma = match det_rank_one_update(&p, &u, &v) {
                Ok(d) => d,
                Err(Error::Singular { .. }) => continue,
                Err(e) => panic!("unexpected error {e:?}"),
            };
            let direct = (&p + &u * v.adjoint()).full_piv_lu().determinant();
            let scale = direct.norm().max(1.0);
            assert!(
                (lemma - direct).norm() <= 1e-9 * scale,
                "lemma {lemma} direct {direct} n {n}"
            );
            checked += 1;
        }
    }

    #[test]
    fn det_rank_one_update_rejects_singular() {
        let p = CMatrix::zeros(3, 3);
        let u = CVector::zeros(3);
        let v = CVector::zeros(3);
        assert!(matches!(det_rank_one_update(&p, &u, &v), Err(Error::Singular { .. })));
    }

    #[test]
    fn hermitian_ctor_rejects_asymmetric() {
        let m = CMatrix::from_row_slice(2, 2, &[cr(1.0), cr(5.0), cr(-5.0), cr(1.0)]);
        assert!(HermitianMatrix::new(&m).is_err());
    }

    #[test]
    fn hermitian_ctor_rejects_non_finite() {
        let m = CMatrix::from_row_slice(1, 1, &[cr(f64::NAN)]);
        assert!(HermitianMatrix::new(&m).is_err());
    }

    #[test]
    fn small_eigenvalues_known_cases() {
        let d = CMatrix::from_diagonal(&CVector::from_vec(vec![cr(0.25), c64(0.0, 0.5), cr(-0.75)]));
        let mut mods: Vec<f64> = eigenvalues_small(&d).unwrap().iter().map(|z| z.norm()).collect();
        mods.sort_by(f64::total_cmp);
        assert!((mods[0] - 0.25).abs() < 1e-9);
        assert!((mods[1] - 0.5).abs() < 1e-9);
        assert!((mods[2] - 0.75).abs() < 1e-9);

        // Nilpotent Jordan block: spectral radius zero (within root accuracy
        // for a double root at the origin).
        let jordan = CMatrix::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(0.0), cr(0.0)]);
        assert!(spectral_radius(&jordan).unwrap() < 1e-6);
    }

    #[test]
    fn spectral_radius_similar_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let a = random_matrix(&mut rng, 4);
        let s = random_matrix(&mut rng, 4) + CMatrix::identity(4, 4) * cr(3.0);
        let sim = s.clone().full_piv_lu().solve(&(&a * &s)).unwrap();
        let r1 = spectral_radius(&a).unwrap();
        let r2 = spectral_radius(&sim).unwrap();
        assert!((r1 - r2).abs() < 1e-7, "{r1} vs {r2}");
    }
}
