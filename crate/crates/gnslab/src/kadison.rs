//! Constructive transitivity: norm-controlled interpolation A·xᵢ = yᵢ in
//! M_d, in three flavors (general, Hermitian, unitary), plus the rotation
//! and exponential-form unitaries and the inductive Stiefel-frame transport
//! they assemble into. Everything here is an explicit matrix built in a
//! finite number of steps with a stated norm bound; nothing appeals to a
//! selection principle.

use crate::algebra::{AlgebraElement, AlgebraError, CStarAlgebra, PureState};
use crate::numerics::{
    complete_orthonormal, gram_schmidt, matrix_exp, matrix_log_principal, operator_norm,
    orthonormal_span, projection_onto, CMatrix, CVector, NumericsError, C64, DEFAULT_POLICY,
};
use crate::projgeom::{positive_section, ProjGeomError, Ray};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum KadisonError {
    #[error("family is not orthonormal (defect {defect:.3e})")]
    NotOrthonormal { defect: f64 },
    #[error("{xs} source vectors but {ys} targets")]
    LengthMismatch { xs: usize, ys: usize },
    #[error("vector dimension {got} does not match the problem dimension {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("no Hermitian solution (least-squares residual {residual:.3e})")]
    NoSelfAdjointSolution { residual: f64 },
    #[error("no unitary solution (Gram mismatch {defect:.3e})")]
    NoUnitarySolution { defect: f64 },
    #[error("inner product is {gap:.3e} from the negative real axis")]
    BranchCut { gap: f64 },
    #[error("frames too far apart: reached ‖I−U‖ = {achieved:.3e}, target {target:.3e}")]
    TooFar { achieved: f64, target: f64 },
    #[error("states are antipodal (distance {distance})")]
    Antipodal { distance: f64 },
    #[error("pure states live in different sectors")]
    SectorMismatch,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    ProjGeom(#[from] ProjGeomError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    General,
    SelfAdjoint,
    Unitary,
}

/// Map x₁…x_n to y₁…y_n inside ℂ^hilbert_dim, optionally within the
/// Hermitian or unitary elements.
#[derive(Clone, Debug)]
pub struct InterpolationProblem {
    pub hilbert_dim: usize,
    pub xs: Vec<CVector>,
    pub ys: Vec<CVector>,
    pub flavor: Flavor,
}

impl InterpolationProblem {
    /// Validates counts, dimensions, and linear independence of the
    /// sources (Gram–Schmidt at the rank tolerance must succeed).
    pub fn new(
        hilbert_dim: usize,
        xs: Vec<CVector>,
        ys: Vec<CVector>,
        flavor: Flavor,
    ) -> Result<Self, KadisonError> {
        if xs.len() != ys.len() {
            return Err(KadisonError::LengthMismatch {
                xs: xs.len(),
                ys: ys.len(),
            });
        }
        for v in xs.iter().chain(ys.iter()) {
            if v.len() != hilbert_dim {
                return Err(KadisonError::DimensionMismatch {
                    got: v.len(),
                    expected: hilbert_dim,
                });
            }
        }
        gram_schmidt(&xs, DEFAULT_POLICY.rank)?;
        Ok(InterpolationProblem {
            hilbert_dim,
            xs,
            ys,
            flavor,
        })
    }
}

fn orthonormality_defect(vs: &[CVector]) -> f64 {
    let mut defect = 0.0f64;
    for (i, v) in vs.iter().enumerate() {
        for (j, w) in vs.iter().enumerate() {
            let g = v.dotc(w);
            let target = if i == j { 1.0 } else { 0.0 };
            defect = defect.max((g - C64::from(target)).norm());
        }
    }
    defect
}

/// The elementary interpolant T = Σᵢ zᵢ⟨xᵢ, ·⟩ over an orthonormal family:
/// T·xᵢ = zᵢ and ‖T‖ ≤ √(2n)·max‖zᵢ‖ (the operator norm is in fact at most
/// √(Σ‖zᵢ‖²); the √(2n) form is the bound the norm-control chain quotes).
pub fn bounded_interpolant(xs: &[CVector], zs: &[CVector]) -> Result<CMatrix, KadisonError> {
    if xs.len() != zs.len() {
        return Err(KadisonError::LengthMismatch {
            xs: xs.len(),
            ys: zs.len(),
        });
    }
    if xs.is_empty() {
        return Err(KadisonError::Numerics(NumericsError::EmptyInput));
    }
    let defect = orthonormality_defect(xs);
    if defect > 1e-10 {
        return Err(KadisonError::NotOrthonormal { defect });
    }
    let dim = xs[0].len();
    let mut t = CMatrix::zeros(dim, dim);
    for (x, z) in xs.iter().zip(zs) {
        t += z * x.adjoint();
    }
    Ok(t)
}

/// Interpolation data shared by the solver and the norm-chain checks:
/// the orthonormalized sources e = Λ·x, the Λ-normalized targets z = Λ·y,
/// the raw interpolant T (with T·xᵢ = yᵢ), and its compression T₀ = P·T·P
/// to the span of all sources and targets.
pub struct GeneralInterpolant {
    pub es: Vec<CVector>,
    pub zs: Vec<CVector>,
    pub t: CMatrix,
    pub compressed: CMatrix,
}

pub fn general_interpolant(
    xs: &[CVector],
    ys: &[CVector],
) -> Result<GeneralInterpolant, KadisonError> {
    let dim = xs[0].len();
    let (es, lambda) = gram_schmidt(xs, DEFAULT_POLICY.rank)?;
    let n = xs.len();
    let mut zs = Vec::with_capacity(n);
    for i in 0..n {
        let mut z = CVector::zeros(dim);
        for j in 0..n {
            z += &ys[j] * lambda[(i, j)];
        }
        zs.push(z);
    }
    let t = bounded_interpolant(&es, &zs)?;
    let all: Vec<CVector> = xs.iter().chain(ys.iter()).cloned().collect();
    let p = projection_onto(&orthonormal_span(&all, DEFAULT_POLICY.rank), dim);
    let compressed = &p * &t * &p;
    Ok(GeneralInterpolant {
        es,
        zs,
        t,
        compressed,
    })
}

/// Solve the interpolation problem. The general flavor returns the
/// compressed interpolant P·T·P itself, so ‖A‖ ≤ ‖T‖ ≤ √(2n)·max‖zᵢ‖ by
/// construction. The Hermitian flavor solves the constraint by least-norm
/// Hermitian least squares; the unitary flavor requires matching Gram
/// matrices and maps completed frames onto each other.
pub fn kadison_solve(p: &InterpolationProblem) -> Result<AlgebraElement, KadisonError> {
    let dim = p.hilbert_dim;
    let alg = CStarAlgebra::full_matrix(dim);
    let matrix = match p.flavor {
        Flavor::General => general_interpolant(&p.xs, &p.ys)?.compressed,
        Flavor::SelfAdjoint => solve_self_adjoint(dim, &p.xs, &p.ys)?,
        Flavor::Unitary => solve_unitary(dim, &p.xs, &p.ys)?,
    };
    Ok(AlgebraElement::new(alg, vec![matrix])?)
}

/// Minimum-norm least-squares solution of m·p = b through the normal
/// equations and the symmetric eigensolver. The general SVD is not usable
/// here: on rank-deficient stacks it returns factors with reconstruction
/// error around 1e-4, large enough to misclassify consistent systems.
fn least_squares(
    m: &nalgebra::DMatrix<f64>,
    b: &nalgebra::DVector<f64>,
) -> Option<nalgebra::DVector<f64>> {
    let gram = m.transpose() * m;
    let rhs = m.transpose() * b;
    let eig = nalgebra::SymmetricEigen::new(gram);
    let lmax = eig.eigenvalues.iter().fold(0.0f64, |a, &l| a.max(l));
    let cutoff = 1e-10 * lmax.max(1.0);
    let mut p = nalgebra::DVector::<f64>::zeros(m.ncols());
    for (i, &l) in eig.eigenvalues.iter().enumerate() {
        if l > cutoff {
            let v = eig.eigenvectors.column(i);
            p += v * (v.dot(&rhs) / l);
        }
    }
    p.iter().all(|x| x.is_finite()).then_some(p)
}

/// Least-norm Hermitian solution of A·xᵢ = yᵢ, parameterizing A by d² real
/// coordinates and solving the stacked real system with a pseudoinverse.
/// Infeasible exactly when the least-squares residual stays away from zero;
/// for full-column-rank X this agrees with the criterion "X*Y Hermitian".
fn solve_self_adjoint(dim: usize, xs: &[CVector], ys: &[CVector]) -> Result<CMatrix, KadisonError> {
    use nalgebra::{DMatrix, DVector};
    let n = xs.len();
    // parameters: for i ≤ j the real part of A_ij, for i < j also the
    // imaginary part; A_ji = conj(A_ij).
    let mut param_index = vec![vec![(0usize, 0usize); dim]; dim];
    let mut count = 0;
    for (i, row) in param_index.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate().skip(i) {
            let re = count;
            count += 1;
            let im = if i == j {
                usize::MAX
            } else {
                count += 1;
                count - 1
            };
            *cell = (re, im);
        }
    }
    let rows = 2 * n * dim;
    let mut m = DMatrix::<f64>::zeros(rows, count);
    let mut b = DVector::<f64>::zeros(rows);
    for (k, (x, y)) in xs.iter().zip(ys).enumerate() {
        for r in 0..dim {
            let row_re = 2 * (k * dim + r);
            let row_im = row_re + 1;
            b[row_re] = y[r].re;
            b[row_im] = y[r].im;
            for c in 0..dim {
                // entry A_rc touches the parameters of the (min,max) cell,
                // conjugated when r > c
                let (lo, hi) = if r <= c { (r, c) } else { (c, r) };
                let (re_idx, im_idx) = param_index[lo][hi];
                let sign = if r <= c { 1.0 } else { -1.0 };
                // A_rc·x_c = (p_re + i·sign·p_im)(x_re + i·x_im)
                m[(row_re, re_idx)] += x[c].re;
                m[(row_im, re_idx)] += x[c].im;
                if im_idx != usize::MAX {
                    m[(row_re, im_idx)] += -sign * x[c].im;
                    m[(row_im, im_idx)] += sign * x[c].re;
                }
            }
        }
    }
    let params = least_squares(&m, &b).ok_or(KadisonError::Numerics(NumericsError::NonFinite))?;
    let residual = (&m * &params - &b).norm();
    let scale = 1.0 + ys.iter().map(|y| y.norm()).fold(0.0, f64::max);
    if residual > 1e-8 * scale {
        return Err(KadisonError::NoSelfAdjointSolution { residual });
    }
    let mut a = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let (re_idx, im_idx) = param_index[i][j];
            let re = params[re_idx];
            let im = if im_idx == usize::MAX {
                0.0
            } else {
                params[im_idx]
            };
            a[(i, j)] = C64::new(re, im);
            a[(j, i)] = C64::new(re, -im);
        }
    }
    Ok(a)
}

/// Unitary solution: exists iff Gram(xs) = Gram(ys) (frame rigidity). The
/// Λ of the sources then orthonormalizes the targets too; completing both
/// frames and matching them entrywise gives U with U·xᵢ = yᵢ.
fn solve_unitary(dim: usize, xs: &[CVector], ys: &[CVector]) -> Result<CMatrix, KadisonError> {
    let n = xs.len();
    let mut defect = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let gx = xs[i].dotc(&xs[j]);
            let gy = ys[i].dotc(&ys[j]);
            defect = defect.max((gx - gy).norm());
        }
    }
    if defect > 1e-8 {
        return Err(KadisonError::NoUnitarySolution { defect });
    }
    let (es, lambda) = gram_schmidt(xs, DEFAULT_POLICY.rank)?;
    let mut fs_raw = Vec::with_capacity(n);
    for i in 0..n {
        let mut f = CVector::zeros(dim);
        for j in 0..n {
            f += &ys[j] * lambda[(i, j)];
        }
        fs_raw.push(f);
    }
    // equal Grams make fs_raw orthonormal up to the matched defect; a
    // final orthonormalization pass removes the leftover skew without
    // moving any vector more than O(defect)
    let (fs, _) = gram_schmidt(&fs_raw, DEFAULT_POLICY.rank)?;
    let e_full = complete_orthonormal(&es, dim);
    let f_full = complete_orthonormal(&fs, dim);
    let mut u = CMatrix::zeros(dim, dim);
    for (e, f) in e_full.iter().zip(&f_full) {
        u += f * e.adjoint();
    }
    Ok(u)
}

/// The two-plane rotation with U·x = y, identity on span{x,y}^⊥:
/// U = (I − P) + ⟨y,x⟩P − x⟨y,·⟩ + y⟨x,·⟩. Satisfies the exact norm
/// identity ‖I − U‖ = ‖x − y‖. Inputs are assumed unit.
pub fn rotation_unitary(x: &CVector, y: &CVector) -> CMatrix {
    debug_assert!((x.norm() - 1.0).abs() < 1e-8);
    debug_assert!((y.norm() - 1.0).abs() < 1e-8);
    let dim = x.len();
    let span = orthonormal_span(&[x.clone(), y.clone()], 1e-14);
    let p = projection_onto(&span, dim);
    let c = y.dotc(x);
    let id = CMatrix::identity(dim, dim);
    (&id - &p) + p * c - x * y.adjoint() + y * x.adjoint()
}

/// Distance of a complex number from the ray ℝ_{≤0} (the log branch cut).
fn branch_gap(c: C64) -> f64 {
    if c.re <= 0.0 {
        c.im.abs()
    } else {
        c.norm()
    }
}

/// The unitary x ↦ y in exponential form: first the phase correction
/// V = I + (e^{iα} − 1)|x⟩⟨x| with α = arg⟨x,y⟩, then the real rotation W
/// by θ = cos⁻¹|⟨x,y⟩| in the plane spanned by e^{iα}x and the residual of
/// y. Returns (G, U) with G Hermitian, ‖G‖ < π, U = exp(iG), U·x = y.
/// The composition keeps every eigenvalue of U away from −1, which is what
/// makes the principal logarithm well defined on the whole domain.
pub fn exp_form_unitary(x: &CVector, y: &CVector) -> Result<(CMatrix, CMatrix), KadisonError> {
    let dim = x.len();
    let c = x.dotc(y);
    let gap = branch_gap(c);
    if gap < 1e-8 {
        return Err(KadisonError::BranchCut { gap });
    }
    let alpha = c.im.atan2(c.re);
    let phase = C64::new(0.0, alpha).exp();
    let id = CMatrix::identity(dim, dim);
    let v = &id + (x * x.adjoint()) * (phase - C64::from(1.0));
    let x_rot = x * phase;
    let overlap = c.norm().min(1.0);
    let residual = y - &x_rot * C64::from(overlap);
    let res_norm = residual.norm();
    if res_norm <= 1e-12 {
        // phase-only case: y = e^{iα}x, generator α·|x⟩⟨x|
        let gen = (x * x.adjoint()) * C64::from(alpha);
        return Ok((gen, v));
    }
    let w = residual / C64::from(res_norm);
    let theta = overlap.acos();
    let rot_gen = (&w * x_rot.adjoint() - &x_rot * w.adjoint()) * C64::from(theta);
    let big_w = matrix_exp(&rot_gen)?;
    let u = big_w * v;
    let log = matrix_log_principal(&u)?;
    let gen = log * C64::new(0.0, -1.0);
    Ok((gen, u))
}

/// δ(ε, n) from the inductive proof: δ(ε, 1) = ε and
/// δ(ε, n+1) = min(δ(ε/3, n), ε/3), which collapses to ε/3^{n−1}.
pub fn stiefel_delta(eps: f64, n: usize) -> f64 {
    eps / 3f64.powi(n as i32 - 1)
}

/// Move one orthonormal n-frame onto another by a unitary close to the
/// identity: U·xᵢ = yᵢ, U identity on span{xs, ys}^⊥, ‖I − U‖ < ε,
/// provided maxᵢ‖xᵢ − yᵢ‖ ≤ δ(ε, n). Runs the inductive construction:
/// rotate x₁ → y₁, then transport the image of the next vector, which is
/// automatically orthogonal to the already-matched targets.
pub fn stiefel_transport(
    xs: &[CVector],
    ys: &[CVector],
    eps: f64,
) -> Result<CMatrix, KadisonError> {
    if xs.len() != ys.len() {
        return Err(KadisonError::LengthMismatch {
            xs: xs.len(),
            ys: ys.len(),
        });
    }
    if xs.is_empty() {
        return Err(KadisonError::Numerics(NumericsError::EmptyInput));
    }
    for family in [xs, ys] {
        let defect = orthonormality_defect(family);
        if defect > 1e-10 {
            return Err(KadisonError::NotOrthonormal { defect });
        }
    }
    let n = xs.len();
    let dim = xs[0].len();
    let delta = stiefel_delta(eps, n);
    let spread = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    let mut u = rotation_unitary(&xs[0], &ys[0]);
    for k in 1..n {
        let z = &u * &xs[k];
        let w = rotation_unitary(&z, &ys[k]);
        u = w * u;
    }
    let achieved = operator_norm(&(CMatrix::identity(dim, dim) - &u))?;
    if spread > delta {
        return Err(KadisonError::TooFar {
            achieved,
            target: eps,
        });
    }
    debug_assert!(achieved < eps);
    Ok(u)
}

/// The local transport unitary U with U·ω = ψ for pure states in one
/// sector at distance < 2: rotate Ω onto the positive-gauge representative
/// of ℂΨ. Since ⟨Ω, Φ⟩ > 0 in that gauge, the exponential form applies
/// with zero phase part and the whole map is continuous on the ball.
pub fn transport_unitary(omega: &PureState, psi: &PureState) -> Result<CMatrix, KadisonError> {
    if omega.algebra != psi.algebra {
        return Err(KadisonError::Algebra(AlgebraError::AlgebraMismatch));
    }
    if omega.block_index != psi.block_index {
        return Err(KadisonError::SectorMismatch);
    }
    let overlap_sq = omega.vector.dotc(&psi.vector).norm_sqr().min(1.0);
    let distance = 2.0 * (1.0 - overlap_sq).max(0.0).sqrt();
    if distance >= 2.0 - 1e-8 {
        return Err(KadisonError::Antipodal { distance });
    }
    let phi = positive_section(&omega.vector, &Ray::from_vector(&psi.vector)?)?;
    let (_, u) = exp_form_unitary(&omega.vector, &phi)?;
    Ok(u)
}
