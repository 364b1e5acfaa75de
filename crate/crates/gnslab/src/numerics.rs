//! Dense complex linear-algebra kernels everything else builds on.
//!
//! All operations are pure functions of their inputs and deterministic:
//! eigenvalues come back ascending, eigenvector phases are pinned by making
//! the largest-modulus entry real and positive, and Gram-Schmidt processes
//! vectors strictly in the order given. Downstream constructions (transport
//! unitaries, Berry-phase links) are functions of these outputs, so the
//! pinning is what makes whole-pipeline runs reproducible bit for bit.
//! Gauge-invariant quantities must not depend on it; the test suite checks
//! that they do not.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

pub type C64 = Complex64;
pub type CVector = DVector<C64>;
pub type CMatrix = DMatrix<C64>;

/// Central record of every tolerance the error contracts cite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NumericPolicy {
    /// Relative bound on ‖m − m*‖ for inputs declared Hermitian.
    pub hermiticity: f64,
    /// Relative singular-value cutoff deciding numerical rank.
    pub rank: f64,
    /// Bound on |⟨eᵢ,eⱼ⟩ − δᵢⱼ| for vectors declared orthonormal.
    pub orthonormality: f64,
    /// Bound on the second eigenvalue of a density block declared pure.
    pub purity: f64,
    /// Cutoff on |⟨Ψ,Ω⟩| below which rays count as orthogonal; keeps
    /// 1/⟨Ψ,Ω⟩ bounded by its reciprocal in chart formulas.
    pub orthogonality: f64,
}

pub const DEFAULT_POLICY: NumericPolicy = NumericPolicy {
    hermiticity: 1e-10,
    rank: 1e-10,
    orthonormality: 1e-12,
    purity: 1e-9,
    orthogonality: 1e-10,
};

pub const STRICT_POLICY: NumericPolicy = NumericPolicy {
    hermiticity: 1e-12,
    rank: 1e-12,
    orthonormality: 1e-13,
    purity: 1e-11,
    orthogonality: 1e-12,
};

impl Default for NumericPolicy {
    fn default() -> Self {
        DEFAULT_POLICY
    }
}

impl NumericPolicy {
    /// Look up a named profile ("default" or "strict").
    pub fn profile(name: &str) -> Option<NumericPolicy> {
        match name {
            "default" => Some(DEFAULT_POLICY),
            "strict" => Some(STRICT_POLICY),
            _ => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("matrix is not hermitian: defect {defect:.3e} exceeds {tol:.3e}")]
    NotHermitian { defect: f64, tol: f64 },
    #[error("non-finite entry in input")]
    NonFinite,
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("vector {index} is linearly dependent on its predecessors (residual {residual:.3e}, tol {tol:.3e})")]
    LinearlyDependent {
        index: usize,
        residual: f64,
        tol: f64,
    },
    #[error("matrix is rank deficient: smallest singular value {smallest:.3e} against largest {largest:.3e}")]
    RankDeficient { smallest: f64, largest: f64 },
    #[error("-1 lies in the spectrum (distance {gap:.3e})")]
    SpectrumAtMinusOne { gap: f64 },
    #[error("empty input where at least one vector is required")]
    EmptyInput,
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

fn all_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub(crate) fn vector_finite(v: &CVector) -> bool {
    v.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

fn check_square(m: &CMatrix) -> Result<usize, NumericsError> {
    if !all_finite(m) {
        return Err(NumericsError::NonFinite);
    }
    if m.nrows() != m.ncols() {
        return Err(NumericsError::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

/// Largest entry modulus; the cheap scale used for relative tolerances.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Hermiticity defect max |m_ij − conj(m_ji)|, as an absolute number.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut defect = 0.0f64;
    for i in 0..n {
        for j in i..n {
            defect = defect.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    defect
}

#[derive(Clone, Debug)]
pub struct EighResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Columns, in eigenvalue order, phases pinned.
    pub eigenvectors: CMatrix,
}

impl EighResult {
    pub fn eigenvector(&self, k: usize) -> CVector {
        CVector::from(self.eigenvectors.column(k))
    }

    /// V diag(f(λ)) V* for a scalar function of the eigenvalues.
    pub fn apply_scalar(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let v = &self.eigenvectors;
        let d = CMatrix::from_diagonal(&CVector::from_iterator(
            self.eigenvalues.len(),
            self.eigenvalues.iter().map(|&l| f(l)),
        ));
        v * d * v.adjoint()
    }
}

/// Pin the phase of each column: largest-modulus entry real positive.
/// Ties broken by the first index attaining the maximum.
fn pin_column_phases(m: &mut CMatrix) {
    let (rows, cols) = m.shape();
    for j in 0..cols {
        let mut best = 0usize;
        let mut best_mod = 0.0f64;
        for i in 0..rows {
            let a = m[(i, j)].norm();
            if a > best_mod {
                best_mod = a;
                best = i;
            }
        }
        if best_mod > 0.0 {
            let phase = m[(best, j)] / C64::from(best_mod);
            let correction = phase.conj();
            for i in 0..rows {
                m[(i, j)] *= correction;
            }
        }
    }
}

/// Hermitian eigendecomposition with deterministic ordering and phases.
pub fn eigh(m: &CMatrix) -> Result<EighResult, NumericsError> {
    eigh_with(&DEFAULT_POLICY, m)
}

pub fn eigh_with(policy: &NumericPolicy, m: &CMatrix) -> Result<EighResult, NumericsError> {
    let n = check_square(m)?;
    let scale = max_abs(m).max(1.0);
    let defect = hermiticity_defect(m);
    if defect > policy.hermiticity * scale {
        return Err(NumericsError::NotHermitian {
            defect,
            tol: policy.hermiticity * scale,
        });
    }
    // Symmetrize away representation roundoff before factorizing.
    let h = (m + m.adjoint()) * C64::from(0.5);
    let se = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].partial_cmp(&se.eigenvalues[b]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut eigenvectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &se.eigenvectors.column(src));
    }
    pin_column_phases(&mut eigenvectors);
    Ok(EighResult {
        eigenvalues,
        eigenvectors,
    })
}

/// Singular values, descending.
pub fn singular_values(m: &CMatrix) -> Result<Vec<f64>, NumericsError> {
    if !all_finite(m) {
        return Err(NumericsError::NonFinite);
    }
    let sv = m.clone().singular_values();
    let mut out: Vec<f64> = sv.iter().copied().collect();
    out.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(out)
}

/// Largest singular value.
pub fn operator_norm(m: &CMatrix) -> Result<f64, NumericsError> {
    Ok(singular_values(m)?.first().copied().unwrap_or(0.0))
}

/// Sum of singular values.
pub fn trace_norm(m: &CMatrix) -> Result<f64, NumericsError> {
    Ok(singular_values(m)?.iter().sum())
}

/// Gram-Schmidt in input order, never reordering, with a tracked
/// change-of-basis matrix: eᵢ = Σⱼ Λᵢⱼ vⱼ with Λ lower-triangular.
///
/// Internally the projection sweep runs twice per vector (the classical
/// "twice is enough" re-orthogonalization), with the combination
/// coefficients accumulated into the same row of Λ, so the round-trip
/// identity survives at full precision.
pub fn gram_schmidt(vs: &[CVector], tol: f64) -> Result<(Vec<CVector>, CMatrix), NumericsError> {
    if vs.is_empty() {
        return Err(NumericsError::EmptyInput);
    }
    let n = vs.len();
    for v in vs {
        if !vector_finite(v) {
            return Err(NumericsError::NonFinite);
        }
    }
    let mut es: Vec<CVector> = Vec::with_capacity(n);
    let mut lambda = CMatrix::zeros(n, n);
    for i in 0..n {
        let mut w = vs[i].clone();
        let mut row = CVector::zeros(n);
        row[i] = C64::new(1.0, 0.0);
        for _pass in 0..2 {
            for (j, e) in es.iter().enumerate() {
                let c = e.dotc(&w);
                w -= e * c;
                let lj = lambda.row(j).transpose();
                row -= lj * c;
            }
        }
        let r = w.norm();
        if r < tol {
            return Err(NumericsError::LinearlyDependent {
                index: i,
                residual: r,
                tol,
            });
        }
        let inv = C64::from(1.0 / r);
        w *= inv;
        row *= inv;
        lambda.row_mut(i).copy_from(&row.transpose());
        es.push(w);
    }
    Ok((es, lambda))
}

/// Orthonormal basis of span(vs), skipping linearly dependent inputs
/// (deterministically, in input order). Plumbing for projections and
/// basis completions; no change-of-basis matrix is tracked.
pub fn orthonormal_span(vs: &[CVector], tol: f64) -> Vec<CVector> {
    let mut es: Vec<CVector> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for _pass in 0..2 {
            for e in &es {
                let c = e.dotc(&w);
                w -= e * c;
            }
        }
        let r = w.norm();
        if r >= tol {
            es.push(w / C64::from(r));
        }
    }
    es
}

/// Extend an orthonormal family to a full orthonormal basis of ℂ^dim by
/// sweeping the standard basis in order.
pub fn complete_orthonormal(basis: &[CVector], dim: usize) -> Vec<CVector> {
    let mut full: Vec<CVector> = basis.to_vec();
    for k in 0..dim {
        if full.len() == dim {
            break;
        }
        let mut w = CVector::zeros(dim);
        w[k] = C64::new(1.0, 0.0);
        for _pass in 0..2 {
            for e in &full {
                let c = e.dotc(&w);
                w -= e * c;
            }
        }
        let r = w.norm();
        // 1/(2 sqrt(dim)) guarantees some standard vector always clears the
        // bar when the basis is incomplete.
        if r > 0.5 / (dim as f64).sqrt() {
            full.push(w / C64::from(r));
        }
    }
    debug_assert_eq!(full.len(), dim);
    full
}

/// Orthogonal projection Σ |e⟩⟨e| onto the span of an orthonormal family.
pub fn projection_onto(es: &[CVector], dim: usize) -> CMatrix {
    let mut p = CMatrix::zeros(dim, dim);
    for e in es {
        p += e * e.adjoint();
    }
    p
}

/// Unitary factor of the polar decomposition m = U·|m|.
pub fn polar_unitary(m: &CMatrix) -> Result<CMatrix, NumericsError> {
    polar_unitary_with(&DEFAULT_POLICY, m)
}

pub fn polar_unitary_with(policy: &NumericPolicy, m: &CMatrix) -> Result<CMatrix, NumericsError> {
    check_square(m)?;
    let svd = m.clone().svd(true, true);
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let largest = sv.first().copied().unwrap_or(0.0);
    let smallest = sv.last().copied().unwrap_or(0.0);
    if smallest <= policy.rank * largest.max(1.0) {
        return Err(NumericsError::RankDeficient { smallest, largest });
    }
    let u = svd.u.expect("svd requested u");
    let v_t = svd.v_t.expect("svd requested v_t");
    Ok(u * v_t)
}

/// Matrix exponential by scaling and squaring on a Taylor tail.
pub fn matrix_exp(m: &CMatrix) -> Result<CMatrix, NumericsError> {
    let n = check_square(m)?;
    // Induced infinity norm: max absolute row sum.
    let mut inf_norm = 0.0f64;
    for i in 0..n {
        let mut s = 0.0;
        for j in 0..n {
            s += m[(i, j)].norm();
        }
        inf_norm = inf_norm.max(s);
    }
    let mut squarings = 0u32;
    let mut scaled = inf_norm;
    while scaled > 0.5 {
        scaled *= 0.5;
        squarings += 1;
    }
    let a = m * C64::from(0.5f64.powi(squarings as i32));
    let mut sum = identity(n);
    let mut term = identity(n);
    for k in 1..=64u32 {
        term = (&term * &a) * C64::from(1.0 / k as f64);
        sum += &term;
        if term.norm() <= 1e-18 * sum.norm() {
            break;
        }
    }
    let mut result = sum;
    for _ in 0..squarings {
        result = &result * &result;
    }
    Ok(result)
}

/// i(I−U)(I+U)⁻¹: Hermitian whenever u is unitary with −1 off the spectrum.
/// The generic gateway from unitaries to Hermitian matrices; its inverse is
/// [`cayley_inverse_transform`].
pub fn cayley_transform(u: &CMatrix) -> Result<CMatrix, NumericsError> {
    let n = check_square(u)?;
    let id = identity(n);
    let ipu = &id + u;
    let gap = singular_values(&ipu)?.last().copied().unwrap_or(0.0);
    if gap < 1e-8 {
        return Err(NumericsError::SpectrumAtMinusOne { gap });
    }
    let imu = &id - u;
    let x = ipu
        .lu()
        .solve(&imu)
        .ok_or(NumericsError::SpectrumAtMinusOne { gap })?;
    Ok(x * C64::new(0.0, 1.0))
}

/// (iI−A)(iI+A)⁻¹: unitary for Hermitian a; inverse of [`cayley_transform`].
pub fn cayley_inverse_transform(a: &CMatrix) -> Result<CMatrix, NumericsError> {
    let n = check_square(a)?;
    let i_id = identity(n) * C64::new(0.0, 1.0);
    let denom = &i_id + a;
    let numer = &i_id - a;
    // iI + A is invertible for any A with real spectrum.
    let x = denom.lu().solve(&numer).ok_or(NumericsError::NonFinite)?;
    Ok(x)
}

/// Principal logarithm of a unitary, through the Cayley transform:
/// A = i(I−U)(I+U)⁻¹ is Hermitian with eigenvalues tan(λ/2), so
/// log U = V diag(2i·atan aₖ) V*. The output is anti-Hermitian with
/// ‖log U‖ ≤ π by construction, which is exactly the principal branch.
pub fn matrix_log_principal(u: &CMatrix) -> Result<CMatrix, NumericsError> {
    matrix_log_principal_with(&DEFAULT_POLICY, u)
}

pub fn matrix_log_principal_with(
    policy: &NumericPolicy,
    u: &CMatrix,
) -> Result<CMatrix, NumericsError> {
    let a = cayley_transform(u)?;
    // Fails with NotHermitian when the input was not unitary.
    let sym = (&a + a.adjoint()) * C64::from(0.5);
    let defect = hermiticity_defect(&a);
    if defect > 1e-8 * max_abs(&a).max(1.0) {
        return Err(NumericsError::NotHermitian {
            defect,
            tol: 1e-8 * max_abs(&a).max(1.0),
        });
    }
    let eig = eigh_with(policy, &sym)?;
    Ok(eig.apply_scalar(|l| C64::new(0.0, 2.0 * l.atan())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm(rows: usize, cols: usize, data: &[(f64, f64)]) -> CMatrix {
        CMatrix::from_row_iterator(rows, cols, data.iter().map(|&(re, im)| C64::new(re, im)))
    }

    #[test]
    fn eigh_diagonal_sorts_ascending() {
        let m = cm(2, 2, &[(3.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
        let r = eigh(&m).unwrap();
        assert!((r.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((r.eigenvalues[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn eigh_sigma_x() {
        let m = cm(2, 2, &[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 0.0)]);
        let r = eigh(&m).unwrap();
        assert!((r.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((r.eigenvalues[1] - 1.0).abs() < 1e-14);
        // Hand eigen-solve: (1, ∓1)/√2 up to phase; phases are pinned so the
        // largest-modulus entry is real positive.
        let s = 0.5f64.sqrt();
        let v0 = r.eigenvector(0);
        assert!((v0[0].re - s).abs() < 1e-12 || (v0[1].re - s).abs() < 1e-12);
        assert!((v0[0] + v0[1]).norm() < 1e-12);
        let v1 = r.eigenvector(1);
        assert!((v1[0] - v1[1]).norm() < 1e-12);
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        let m = cm(2, 2, &[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (0.0, 0.0)]);
        assert!(matches!(eigh(&m), Err(NumericsError::NotHermitian { .. })));
    }

    #[test]
    fn operator_norm_diag() {
        let m = cm(2, 2, &[(2.0, 0.0), (0.0, 0.0), (0.0, 0.0), (-3.0, 0.0)]);
        assert!((operator_norm(&m).unwrap() - 3.0).abs() < 1e-12);
        assert!((operator_norm(&identity(5)).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trace_norm_examples() {
        let m = cm(2, 2, &[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (-1.0, 0.0)]);
        assert!((trace_norm(&m).unwrap() - 2.0).abs() < 1e-12);
        // rank-1 |u⟩⟨v| with unit u, v has trace norm 1
        let u = CVector::from_vec(vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)]);
        let v = CVector::from_vec(vec![C64::new(0.0, 1.0), C64::new(0.0, 0.0)]);
        let m = &u * v.adjoint();
        assert!((trace_norm(&m).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gram_schmidt_hand_cases() {
        let vs = vec![
            CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]),
            CVector::from_vec(vec![C64::new(0.0, 0.0), C64::new(2.0, 0.0)]),
        ];
        let (es, lambda) = gram_schmidt(&vs, 1e-9).unwrap();
        assert!((es[0][0].re - 1.0).abs() < 1e-14);
        assert!((es[1][1].re - 1.0).abs() < 1e-14);
        assert!((lambda[(0, 0)].re - 1.0).abs() < 1e-14);
        assert!((lambda[(1, 1)].re - 0.5).abs() < 1e-14);
        assert!(lambda[(0, 1)].norm() < 1e-14);

        let vs = vec![
            CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]),
            CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)]),
        ];
        let (es, lambda) = gram_schmidt(&vs, 1e-9).unwrap();
        assert!((es[1][1].re - 1.0).abs() < 1e-12);
        assert!(es[1][0].norm() < 1e-12);
        assert!((lambda[(1, 0)].re + 1.0).abs() < 1e-12);
        assert!((lambda[(1, 1)].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gram_schmidt_detects_dependence() {
        let vs = vec![
            CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]),
            CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(1e-14, 0.0)]),
        ];
        match gram_schmidt(&vs, 1e-9) {
            Err(NumericsError::LinearlyDependent { index, .. }) => assert_eq!(index, 1),
            other => panic!("expected LinearlyDependent, got {other:?}"),
        }
    }

    #[test]
    fn polar_of_scaled_unitary() {
        // 2·U₀ has unitary polar factor U₀.
        let theta = 0.7f64;
        let u0 = cm(
            2,
            2,
            &[
                (theta.cos(), 0.0),
                (-theta.sin(), 0.0),
                (theta.sin(), 0.0),
                (theta.cos(), 0.0),
            ],
        );
        let u = polar_unitary(&(&u0 * C64::from(2.0))).unwrap();
        assert!((&u - &u0).norm() < 1e-10);
        let id = polar_unitary(&identity(3)).unwrap();
        assert!((&id - identity(3)).norm() < 1e-12);
    }

    #[test]
    fn polar_rejects_rank_deficient() {
        let m = cm(2, 2, &[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        assert!(matches!(
            polar_unitary(&m),
            Err(NumericsError::RankDeficient { .. })
        ));
    }

    #[test]
    fn exp_and_log_basics() {
        assert!((matrix_exp(&CMatrix::zeros(3, 3)).unwrap() - identity(3)).norm() < 1e-15);
        assert!(matrix_log_principal(&identity(3)).unwrap().norm() < 1e-12);
        // exp(iθσ_z) = diag(e^{iθ}, e^{−iθ}) at θ = 0.3
        let theta = 0.3f64;
        let g = cm(2, 2, &[(0.0, theta), (0.0, 0.0), (0.0, 0.0), (0.0, -theta)]);
        let e = matrix_exp(&g).unwrap();
        assert!((e[(0, 0)] - C64::new(theta.cos(), theta.sin())).norm() < 1e-14);
        assert!((e[(1, 1)] - C64::new(theta.cos(), -theta.sin())).norm() < 1e-14);
    }

    #[test]
    fn log_principal_branch_and_roundtrip() {
        // diag(i, -i) has Cayley transform σ_z; the log must have norm π/2.
        let u = cm(2, 2, &[(0.0, 1.0), (0.0, 0.0), (0.0, 0.0), (0.0, -1.0)]);
        let a = cayley_transform(&u).unwrap();
        assert!((a[(0, 0)].re - 1.0).abs() < 1e-12);
        assert!((a[(1, 1)].re + 1.0).abs() < 1e-12);
        let log = matrix_log_principal(&u).unwrap();
        assert!((operator_norm(&log).unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-10);
        let back = matrix_exp(&log).unwrap();
        assert!((&back - &u).norm() < 1e-12);
    }

    #[test]
    fn log_rejects_minus_one_in_spectrum() {
        let u = cm(2, 2, &[(-1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
        assert!(matches!(
            matrix_log_principal(&u),
            Err(NumericsError::SpectrumAtMinusOne { .. })
        ));
    }

    #[test]
    fn cayley_roundtrip() {
        let theta = 1.1f64;
        let u = cm(
            2,
            2,
            &[
                (theta.cos(), theta.sin()),
                (0.0, 0.0),
                (0.0, 0.0),
                ((2.0 * theta).cos(), (2.0 * theta).sin()),
            ],
        );
        let a = cayley_transform(&u).unwrap();
        assert!(hermiticity_defect(&a) < 1e-12);
        let back = cayley_inverse_transform(&a).unwrap();
        assert!((&back - &u).norm() < 1e-12);
    }
}
