//! The GNS construction at finite dimension, made concrete.
//!
//! For a state ω on 𝔄 = ⊕ₖ M_{nₖ}(ℂ) the whole construction is carried by
//! the Gram form G_{ij} = ω(bᵢ*bⱼ) over the canonical matrix-unit basis:
//! its kernel eigenvectors are a Frobenius-orthonormal basis of the Gelfand
//! ideal 𝔑_ω = {A : ω(A*A) = 0}, and the positive spectral part turns the
//! quotient 𝔄/𝔑_ω into explicit coordinates ℂ^d. With q = Λ₊^{1/2}V₊* and
//! its isometric section r = V₊Λ₊^{−1/2}, the representation is
//! π(A) = q·L_A·r, which is well defined precisely because 𝔑_ω is a left
//! ideal: left multiplication maps ker G into itself, so the compression
//! loses nothing. No symbolic quotients anywhere; every object is a matrix.

use crate::algebra::{evaluate, AlgebraElement, AlgebraError, CStarAlgebra, PureState, State};
use crate::numerics::{
    self, eigh_with, CMatrix, CVector, NumericPolicy, NumericsError, C64, DEFAULT_POLICY,
};
use crate::projgeom::{positive_section_with, ProjGeomError, Ray};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GnsError {
    #[error("map is not a *-homomorphism (residual {residual:.3e})")]
    NotMultiplicative { residual: f64 },
    #[error("map does not preserve blocks (basis element {index} leaks {leakage:.3e})")]
    NotBlockPreserving { index: usize, leakage: f64 },
    #[error("expected {expected} basis images, got {got}")]
    WrongImageCount { expected: usize, got: usize },
    #[error("states live in different sectors")]
    SectorMismatch,
    #[error("states are antipodal (distance {distance})")]
    Antipodal { distance: f64 },
    #[error("state is not pure at tolerance {tol:.3e}")]
    NotPure { tol: f64 },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    ProjGeom(#[from] ProjGeomError),
}

/// Everything the GNS construction produces, in explicit coordinates.
#[derive(Clone, Debug)]
pub struct GNSData {
    pub algebra: CStarAlgebra,
    pub state: State,
    /// Frobenius-orthonormal basis of the Gelfand ideal 𝔑_ω.
    pub ideal_basis: Vec<AlgebraElement>,
    /// d = dim H_ω.
    pub hilbert_dim: usize,
    /// d×D matrix of the quotient map on basis coefficients; surjective,
    /// with ⟨quotient(A), quotient(B)⟩ = ω(A*B).
    pub quotient: CMatrix,
    /// D×d isometric section of the quotient: quotient · section = I_d.
    pub quotient_section: CMatrix,
    /// π(bᵢ) for each canonical basis element, extended linearly.
    pub rep_basis: Vec<CMatrix>,
    /// Ω_ω = quotient(I), a unit vector with ⟨Ω, π(A)Ω⟩ = ω(A).
    pub cyclic: CVector,
}

/// The Gram form of ω over the canonical basis, by direct evaluation of
/// G_{ij} = ω(bᵢ*bⱼ).
fn gram_form(s: &State) -> Result<CMatrix, GnsError> {
    let alg = &s.algebra;
    let d_total = alg.total_dim();
    let basis: Vec<AlgebraElement> = (0..d_total).map(|i| alg.basis_element(i)).collect();
    let mut g = CMatrix::zeros(d_total, d_total);
    for (i, bi) in basis.iter().enumerate() {
        let bi_adj = bi.adjoint();
        for (j, bj) in basis.iter().enumerate() {
            g[(i, j)] = evaluate(s, &bi_adj.mul(bj)?)?;
        }
    }
    Ok(g)
}

struct GramSplit {
    kernel: Vec<CVector>,
    positive: Vec<(f64, CVector)>,
}

fn gram_split(policy: &NumericPolicy, s: &State) -> Result<GramSplit, GnsError> {
    let g = gram_form(s)?;
    let eig = eigh_with(policy, &g)?;
    let scale = eig.eigenvalues.last().copied().unwrap_or(0.0).max(1.0);
    let cutoff = policy.rank * scale;
    let mut kernel = Vec::new();
    let mut positive = Vec::new();
    for (idx, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda <= cutoff {
            kernel.push(eig.eigenvector(idx));
        } else {
            positive.push((lambda, eig.eigenvector(idx)));
        }
    }
    Ok(GramSplit { kernel, positive })
}

/// Basis of the Gelfand ideal 𝔑_ω = {A : ω(A*A) = 0}: the kernel of the
/// Gram form, reported as Frobenius-orthonormal elements. For block states
/// this is exactly {A : Aₖ·supp(ρₖ) = 0 for all k}, of dimension
/// Σₖ nₖ(nₖ − rank ρₖ).
pub fn gelfand_ideal(s: &State) -> Result<Vec<AlgebraElement>, GnsError> {
    gelfand_ideal_with(&DEFAULT_POLICY, s)
}

pub fn gelfand_ideal_with(
    policy: &NumericPolicy,
    s: &State,
) -> Result<Vec<AlgebraElement>, GnsError> {
    let split = gram_split(policy, s)?;
    split
        .kernel
        .iter()
        .map(|v| AlgebraElement::from_coefficients(&s.algebra, v).map_err(GnsError::from))
        .collect()
}

/// Left multiplication as a matrix on basis coefficients:
/// L_A = ⊕ₖ (Aₖ ⊗ Iₙₖ) in row-major matrix-unit coordinates.
fn left_multiplication(a: &AlgebraElement) -> CMatrix {
    let total = a.algebra.total_dim();
    let mut l = CMatrix::zeros(total, total);
    let mut offset = 0;
    for blk in &a.blocks {
        let n = blk.nrows();
        let kron = blk.kronecker(&CMatrix::identity(n, n));
        l.view_mut((offset, offset), (n * n, n * n))
            .copy_from(&kron);
        offset += n * n;
    }
    l
}

/// Run the GNS construction for ω.
pub fn gns_construct(s: &State) -> Result<GNSData, GnsError> {
    gns_construct_with(&DEFAULT_POLICY, s)
}

pub fn gns_construct_with(policy: &NumericPolicy, s: &State) -> Result<GNSData, GnsError> {
    let alg = s.algebra.clone();
    let d_total = alg.total_dim();
    let split = gram_split(policy, s)?;
    let dim = split.positive.len();

    let mut quotient = CMatrix::zeros(dim, d_total);
    let mut section = CMatrix::zeros(d_total, dim);
    for (row, (lambda, v)) in split.positive.iter().enumerate() {
        let root = lambda.sqrt();
        for col in 0..d_total {
            quotient[(row, col)] = v[col].conj() * C64::from(root);
            section[(col, row)] = v[col] / C64::from(root);
        }
    }

    let ideal_basis = split
        .kernel
        .iter()
        .map(|v| AlgebraElement::from_coefficients(&alg, v))
        .collect::<Result<Vec<_>, _>>()?;

    let rep_basis = (0..d_total)
        .map(|i| {
            let l = left_multiplication(&alg.basis_element(i));
            &quotient * l * &section
        })
        .collect();

    let cyclic = &quotient * alg.identity().coefficients();

    Ok(GNSData {
        algebra: alg,
        state: s.clone(),
        ideal_basis,
        hilbert_dim: dim,
        quotient,
        quotient_section: section,
        rep_basis,
        cyclic,
    })
}

impl GNSData {
    /// Image of A in the quotient coordinates ℂ^d.
    pub fn quotient_of(&self, a: &AlgebraElement) -> CVector {
        &self.quotient * a.coefficients()
    }

    /// π(A), extended linearly from the basis representatives.
    pub fn represent(&self, a: &AlgebraElement) -> CMatrix {
        let coeffs = a.coefficients();
        let mut out = CMatrix::zeros(self.hilbert_dim, self.hilbert_dim);
        for (i, r) in self.rep_basis.iter().enumerate() {
            let c = coeffs[i];
            if c.norm() > 0.0 {
                out += r * c;
            }
        }
        out
    }

    /// ξ_ω(A) = π(A)Ω, the surjection 𝔄 → H_ω with kernel 𝔑_ω. Equals
    /// quotient_of(A); both routes are exercised in the tests.
    pub fn xi(&self, a: &AlgebraElement) -> CVector {
        self.represent(a) * &self.cyclic
    }

    /// Dimension of the commutant {X : [π(bᵢ), X] = 0 ∀i}, via the kernel
    /// of the stacked commutator equations. 1 means irreducible.
    pub fn commutant_dimension(&self) -> Result<usize, GnsError> {
        self.commutant_dimension_with(&DEFAULT_POLICY)
    }

    pub fn commutant_dimension_with(&self, policy: &NumericPolicy) -> Result<usize, GnsError> {
        let d = self.hilbert_dim;
        if d == 0 {
            return Ok(0);
        }
        let total = self.rep_basis.len();
        let id = CMatrix::identity(d, d);
        let mut stack = CMatrix::zeros(total * d * d, d * d);
        for (i, r) in self.rep_basis.iter().enumerate() {
            // vec_rm(RX − XR) = (R ⊗ I − I ⊗ Rᵀ) vec_rm(X)
            let block = r.kronecker(&id) - id.kronecker(&r.transpose());
            stack
                .view_mut((i * d * d, 0), (d * d, d * d))
                .copy_from(&block);
        }
        let sv = numerics::singular_values(&stack)?;
        let scale = sv.first().copied().unwrap_or(0.0).max(1.0);
        let rank = sv.iter().filter(|&&x| x > policy.rank * scale).count();
        Ok(d * d - rank)
    }

    /// For a pure state: the unitary W: H_ω → ℂ^{n} intertwining π_ω with
    /// the identity representation of the supporting block, W·Ω_ω = Ω.
    /// Columns come from the cyclic images of the matrix units: the i-th
    /// basis coefficient contributes (bᵢ)ₖΩ.
    pub fn identity_rep_intertwiner(&self) -> Result<CMatrix, GnsError> {
        let pure = crate::algebra::is_pure(&self.state, DEFAULT_POLICY.purity).ok_or(
            GnsError::NotPure {
                tol: DEFAULT_POLICY.purity,
            },
        )?;
        let alg = &self.algebra;
        let n = alg.block_dims()[pure.block_index];
        let d_total = alg.total_dim();
        let mut m = CMatrix::zeros(n, d_total);
        for i in 0..d_total {
            let bi = alg.basis_element(i);
            let col = &bi.blocks[pure.block_index] * &pure.vector;
            m.set_column(i, &col);
        }
        Ok(m * &self.quotient_section)
    }
}

/// Residual of an element against the span of a Frobenius-orthonormal
/// family: ‖v − Π v‖ / max(‖v‖, 1) in coefficient coordinates.
pub fn span_residual(basis: &[AlgebraElement], element: &AlgebraElement) -> f64 {
    let v = element.coefficients();
    let mut w = v.clone();
    for b in basis {
        let bc = b.coefficients();
        let c = bc.dotc(&w);
        w -= bc * c;
    }
    w.norm() / v.norm().max(1.0)
}

/// A block-preserving automorphism in its inner form Ad(u), one unitary per
/// block. This is the only automorphism representation the bundle layer
/// needs at finite dimension; block-permuting maps are rejected upstream.
#[derive(Clone, Debug)]
pub struct InnerAutomorphism {
    pub algebra: CStarAlgebra,
    pub unitaries: Vec<CMatrix>,
}

impl InnerAutomorphism {
    pub fn new(algebra: CStarAlgebra, unitaries: Vec<CMatrix>) -> Result<Self, GnsError> {
        if unitaries.len() != algebra.num_blocks() {
            return Err(GnsError::WrongImageCount {
                expected: algebra.num_blocks(),
                got: unitaries.len(),
            });
        }
        for (k, (u, &n)) in unitaries.iter().zip(algebra.block_dims()).enumerate() {
            if u.nrows() != n || u.ncols() != n {
                return Err(GnsError::Algebra(AlgebraError::ShapeMismatch {
                    block: k,
                    expected: n,
                    rows: u.nrows(),
                    cols: u.ncols(),
                }));
            }
            let defect = (u.adjoint() * u - CMatrix::identity(n, n)).norm();
            if defect > 1e-10 {
                return Err(GnsError::Algebra(AlgebraError::NotUnitary { defect }));
            }
        }
        Ok(InnerAutomorphism { algebra, unitaries })
    }

    pub fn identity(algebra: &CStarAlgebra) -> Self {
        let unitaries = algebra
            .block_dims()
            .iter()
            .map(|&n| CMatrix::identity(n, n))
            .collect();
        InnerAutomorphism {
            algebra: algebra.clone(),
            unitaries,
        }
    }

    pub fn from_element(u: &AlgebraElement) -> Result<Self, GnsError> {
        InnerAutomorphism::new(u.algebra.clone(), u.blocks.clone())
    }

    /// α(A) = u A u*.
    pub fn apply(&self, a: &AlgebraElement) -> Result<AlgebraElement, GnsError> {
        if a.algebra != self.algebra {
            return Err(GnsError::Algebra(AlgebraError::AlgebraMismatch));
        }
        let blocks = self
            .unitaries
            .iter()
            .zip(&a.blocks)
            .map(|(u, ak)| u * ak * u.adjoint())
            .collect();
        Ok(AlgebraElement::new(self.algebra.clone(), blocks)?)
    }

    /// Push-forward α_*ω = ω ∘ α⁻¹; densities go to u ρ u*.
    pub fn pushforward(&self, s: &State) -> Result<State, GnsError> {
        if s.algebra != self.algebra {
            return Err(GnsError::Algebra(AlgebraError::AlgebraMismatch));
        }
        let densities = self
            .unitaries
            .iter()
            .zip(&s.densities)
            .map(|(u, rho)| u * rho * u.adjoint())
            .collect();
        Ok(State::new(self.algebra.clone(), densities)?)
    }

    /// Push-forward of a pure state: the vector picks up the block unitary.
    pub fn pushforward_pure(&self, ps: &PureState) -> Result<PureState, GnsError> {
        if ps.algebra != self.algebra {
            return Err(GnsError::Algebra(AlgebraError::AlgebraMismatch));
        }
        let v = &self.unitaries[ps.block_index] * &ps.vector;
        Ok(PureState::new(ps.algebra.clone(), ps.block_index, v)?)
    }

    /// Images of the canonical basis under α; the wire format general code
    /// hands to [`automorphism_to_unitaries`].
    pub fn basis_images(&self) -> Result<Vec<AlgebraElement>, GnsError> {
        (0..self.algebra.total_dim())
            .map(|i| self.apply(&self.algebra.basis_element(i)))
            .collect()
    }
}

/// Recover the inner form of a block-preserving *-automorphism given by its
/// images of the canonical basis. At finite dimension every block-preserving
/// automorphism of ⊕ₖ M_{nₖ} is Ad(u); the block unitary is rebuilt column
/// by column from α(e⁽ᵏ⁾ⱼ₁) applied to the range of α(e⁽ᵏ⁾₁₁), then pinned
/// to ⟨e₁, uₖe₁⟩ ≥ 0 where that entry is nonzero.
pub fn automorphism_to_unitaries(
    algebra: &CStarAlgebra,
    images: &[AlgebraElement],
) -> Result<InnerAutomorphism, GnsError> {
    let d_total = algebra.total_dim();
    if images.len() != d_total {
        return Err(GnsError::WrongImageCount {
            expected: d_total,
            got: images.len(),
        });
    }
    for img in images {
        if img.algebra != *algebra {
            return Err(GnsError::Algebra(AlgebraError::AlgebraMismatch));
        }
    }

    // Block preservation: the image of a block-k basis element must not leak
    // into other blocks.
    for (idx, img) in images.iter().enumerate() {
        let home = block_of_basis_index(algebra, idx);
        let leakage = img
            .blocks
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != home)
            .map(|(_, b)| b.norm())
            .fold(0.0, f64::max);
        if leakage > 1e-8 {
            return Err(GnsError::NotBlockPreserving {
                index: idx,
                leakage,
            });
        }
    }

    let apply = |a: &AlgebraElement| -> Result<AlgebraElement, GnsError> {
        let coeffs = a.coefficients();
        let mut out = algebra.zero();
        for (i, img) in images.iter().enumerate() {
            let c = coeffs[i];
            if c.norm() > 0.0 {
                out = out.add(&img.scale(c))?;
            }
        }
        Ok(out)
    };

    // *-homomorphism probe: multiplicativity on all basis pairs within each
    // block, adjoints on every basis element, and unitality.
    let mut residual = 0.0f64;
    let unit_err =
        crate::algebra::element_norm(&apply(&algebra.identity())?.sub(&algebra.identity())?);
    residual = residual.max(unit_err);
    for idx in 0..d_total {
        let b = algebra.basis_element(idx);
        let lhs = apply(&b.adjoint())?;
        let rhs = apply(&b)?.adjoint();
        residual = residual.max(crate::algebra::element_norm(&lhs.sub(&rhs)?));
    }
    let mut offset = 0;
    for &n in algebra.block_dims() {
        for i in offset..offset + n * n {
            for j in offset..offset + n * n {
                let bi = algebra.basis_element(i);
                let bj = algebra.basis_element(j);
                let lhs = apply(&bi.mul(&bj)?)?;
                let rhs = apply(&bi)?.mul(&apply(&bj)?)?;
                residual = residual.max(crate::algebra::element_norm(&lhs.sub(&rhs)?));
            }
        }
        offset += n * n;
    }
    if residual > 1e-8 {
        return Err(GnsError::NotMultiplicative { residual });
    }

    let mut unitaries = Vec::with_capacity(algebra.num_blocks());
    for (k, &n) in algebra.block_dims().iter().enumerate() {
        let e11 = algebra.basis_element(algebra.basis_index(k, 0, 0));
        let f = &apply(&e11)?.blocks[k];
        // f = |ue₁⟩⟨ue₁|: its top eigenvector is the first column of u.
        let eig = eigh_with(&DEFAULT_POLICY, &((f + f.adjoint()) * C64::from(0.5)))?;
        let w = eig.eigenvector(n - 1);
        let mut u = CMatrix::zeros(n, n);
        for j in 0..n {
            let ej1 = algebra.basis_element(algebra.basis_index(k, j, 0));
            let col = &apply(&ej1)?.blocks[k] * &w;
            u.set_column(j, &col);
        }
        // Pin the free global phase.
        let top = u[(0, 0)];
        if top.norm() > 1e-8 {
            u *= top.conj() / C64::from(top.norm());
        }
        let defect = (u.adjoint() * &u - CMatrix::identity(n, n)).norm();
        if defect > 1e-8 {
            return Err(GnsError::NotMultiplicative { residual: defect });
        }
        unitaries.push(u);
    }

    let alpha = InnerAutomorphism::new(algebra.clone(), unitaries)?;

    // Ad(u) must reproduce the given images.
    let mut ad_residual = 0.0f64;
    for (idx, img) in images.iter().enumerate() {
        let b = algebra.basis_element(idx);
        let diff = crate::algebra::element_norm(&alpha.apply(&b)?.sub(img)?);
        ad_residual = ad_residual.max(diff);
    }
    if ad_residual > 1e-8 {
        return Err(GnsError::NotMultiplicative {
            residual: ad_residual,
        });
    }
    Ok(alpha)
}

fn block_of_basis_index(algebra: &CStarAlgebra, index: usize) -> usize {
    let mut rest = index;
    for (k, &n) in algebra.block_dims().iter().enumerate() {
        if rest < n * n {
            return k;
        }
        rest -= n * n;
    }
    unreachable!("basis index validated")
}

/// The intertwiner of the functorial GNS diagram for pure states in one
/// sector: with u the block unitary of α and Ω, Ψ the representatives,
/// Φ is the positive-gauge representative of ℂ(uΩ) against Ψ, and
/// U = (conj⟨Ψ, uΩ⟩/|⟨Ψ, uΩ⟩|)·u, so that UΩ = Φ and
/// U·(AΩ) = α(A)·(UΩ): the unique unitary with U Ω_ω = Ω_ψ up to the
/// gauge fixed here.
pub fn intertwiner(
    alpha: &InnerAutomorphism,
    omega: &PureState,
    psi: &PureState,
) -> Result<(CVector, CMatrix), GnsError> {
    intertwiner_with(&DEFAULT_POLICY, alpha, omega, psi)
}

pub fn intertwiner_with(
    policy: &NumericPolicy,
    alpha: &InnerAutomorphism,
    omega: &PureState,
    psi: &PureState,
) -> Result<(CVector, CMatrix), GnsError> {
    if omega.algebra != psi.algebra || omega.algebra != alpha.algebra {
        return Err(GnsError::Algebra(AlgebraError::AlgebraMismatch));
    }
    if omega.block_index != psi.block_index {
        return Err(GnsError::SectorMismatch);
    }
    let u = &alpha.unitaries[omega.block_index];
    let u_omega = u * &omega.vector;
    let c = psi.vector.dotc(&u_omega);
    let overlap_sq = c.norm_sqr().min(1.0);
    let distance = 2.0 * (1.0 - overlap_sq).max(0.0).sqrt();
    if distance >= 2.0 - 1e-8 {
        return Err(GnsError::Antipodal { distance });
    }
    let phi = positive_section_with(policy, &psi.vector, &Ray::from_vector(&u_omega)?)?;
    let phase = c.conj() / C64::from(c.norm());
    Ok((phi, u * phase))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{element_norm, state_norm_distance};
    use crate::sampling;

    fn pure_e1(alg: &CStarAlgebra, block: usize) -> PureState {
        let n = alg.block_dims()[block];
        let mut v = CVector::zeros(n);
        v[0] = C64::new(1.0, 0.0);
        PureState::new(alg.clone(), block, v).unwrap()
    }

    #[test]
    fn ideal_dimensions() {
        // pure on M₃: dim 𝔑 = n(n−1) = 6
        let alg = CStarAlgebra::full_matrix(3);
        let s = pure_e1(&alg, 0).to_state();
        assert_eq!(gelfand_ideal(&s).unwrap().len(), 6);

        // faithful ρ = I/2 on M₂: dim 𝔑 = 0
        let alg = CStarAlgebra::full_matrix(2);
        let s = State::new(alg, vec![CMatrix::identity(2, 2) * C64::from(0.5)]).unwrap();
        assert_eq!(gelfand_ideal(&s).unwrap().len(), 0);

        // pure on block 1 of M₂⊕M₃: 2·1 + 9 = 11
        let alg = CStarAlgebra::new(vec![2, 3]).unwrap();
        let s = pure_e1(&alg, 0).to_state();
        assert_eq!(gelfand_ideal(&s).unwrap().len(), 2 + 9);
    }

    #[test]
    fn ideal_annihilates_state() {
        let alg = CStarAlgebra::full_matrix(3);
        let mut rng = sampling::rng(31);
        let v = sampling::random_unit_vector(&mut rng, 3);
        let s = PureState::new(alg, 0, v).unwrap().to_state();
        for b in gelfand_ideal(&s).unwrap() {
            let val = evaluate(&s, &b.adjoint().mul(&b).unwrap()).unwrap();
            assert!(val.norm() <= 1e-10, "ω(b*b) = {val}");
        }
    }

    #[test]
    fn gns_of_pure_state_on_m2() {
        let alg = CStarAlgebra::full_matrix(2);
        let ps = pure_e1(&alg, 0);
        let gns = gns_construct(&ps.to_state()).unwrap();
        assert_eq!(gns.hilbert_dim, 2);
        assert_eq!(gns.ideal_basis.len(), 2);
        assert!((gns.cyclic.norm() - 1.0).abs() < 1e-12);

        // ⟨Ω, π(A)Ω⟩ = ω(A) on random elements
        let mut rng = sampling::rng(7);
        for _ in 0..100 {
            let a = AlgebraElement::new(alg.clone(), vec![sampling::random_matrix(&mut rng, 2, 2)])
                .unwrap();
            let lhs = gns.cyclic.dotc(&(gns.represent(&a) * &gns.cyclic));
            let rhs = evaluate(&ps.to_state(), &a).unwrap();
            assert!((lhs - rhs).norm() < 1e-10);
        }

        // unitary equivalence with the identity representation
        let w = gns.identity_rep_intertwiner().unwrap();
        assert!((w.adjoint() * &w - CMatrix::identity(2, 2)).norm() < 1e-10);
        for i in 0..alg.total_dim() {
            let b = alg.basis_element(i);
            let lhs = &w * gns.represent(&b) * w.adjoint();
            let rhs = &b.blocks[0];
            assert!((lhs - rhs).norm() < 1e-9);
        }

        // irreducible
        assert_eq!(gns.commutant_dimension().unwrap(), 1);
    }

    #[test]
    fn gns_of_tracial_state_is_reducible() {
        let alg = CStarAlgebra::full_matrix(2);
        let s = State::new(alg, vec![CMatrix::identity(2, 2) * C64::from(0.5)]).unwrap();
        let gns = gns_construct(&s).unwrap();
        assert_eq!(gns.hilbert_dim, 4);
        let c = gns.commutant_dimension().unwrap();
        assert!(c > 1, "tracial GNS must be reducible, commutant dim {c}");
        // the commutant of left multiplication on M₂ is right multiplication
        assert_eq!(c, 4);
    }

    #[test]
    fn quotient_pairing_matches_state() {
        let alg = CStarAlgebra::new(vec![2, 2]).unwrap();
        let mut rng = sampling::rng(13);
        let rho0 = sampling::random_density(&mut rng, 2) * C64::from(0.7);
        let rho1 = sampling::random_density(&mut rng, 2) * C64::from(0.3);
        let s = State::new(alg.clone(), vec![rho0, rho1]).unwrap();
        let gns = gns_construct(&s).unwrap();
        for _ in 0..50 {
            let a = AlgebraElement::new(
                alg.clone(),
                vec![
                    sampling::random_matrix(&mut rng, 2, 2),
                    sampling::random_matrix(&mut rng, 2, 2),
                ],
            )
            .unwrap();
            let b = AlgebraElement::new(
                alg.clone(),
                vec![
                    sampling::random_matrix(&mut rng, 2, 2),
                    sampling::random_matrix(&mut rng, 2, 2),
                ],
            )
            .unwrap();
            let lhs = gns.quotient_of(&a).dotc(&gns.quotient_of(&b));
            let rhs = evaluate(&s, &a.adjoint().mul(&b).unwrap()).unwrap();
            assert!((lhs - rhs).norm() < 1e-10);
        }
    }

    #[test]
    fn xi_equals_quotient() {
        let alg = CStarAlgebra::full_matrix(3);
        let mut rng = sampling::rng(41);
        let v = sampling::random_unit_vector(&mut rng, 3);
        let s = PureState::new(alg.clone(), 0, v).unwrap().to_state();
        let gns = gns_construct(&s).unwrap();
        for _ in 0..20 {
            let a = AlgebraElement::new(alg.clone(), vec![sampling::random_matrix(&mut rng, 3, 3)])
                .unwrap();
            assert!((gns.xi(&a) - gns.quotient_of(&a)).norm() < 1e-10);
        }
    }

    #[test]
    fn automorphism_recovery() {
        let alg = CStarAlgebra::full_matrix(2);
        // identity map
        let id = InnerAutomorphism::identity(&alg);
        let rec = automorphism_to_unitaries(&alg, &id.basis_images().unwrap()).unwrap();
        assert!((&rec.unitaries[0] - CMatrix::identity(2, 2)).norm() < 1e-9);

        // Ad(σ_x)
        let sx = CMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
            ],
        );
        let ad = InnerAutomorphism::new(alg.clone(), vec![sx.clone()]).unwrap();
        let rec = automorphism_to_unitaries(&alg, &ad.basis_images().unwrap()).unwrap();
        // recovered up to phase; the Ad check is the real content
        for i in 0..4 {
            let b = alg.basis_element(i);
            let diff = element_norm(&rec.apply(&b).unwrap().sub(&ad.apply(&b).unwrap()).unwrap());
            assert!(diff < 1e-9);
        }

        // random inner automorphism on M₃
        let alg3 = CStarAlgebra::full_matrix(3);
        let mut rng = sampling::rng(3);
        let u = sampling::random_unitary(&mut rng, 3);
        let ad = InnerAutomorphism::new(alg3.clone(), vec![u]).unwrap();
        let rec = automorphism_to_unitaries(&alg3, &ad.basis_images().unwrap()).unwrap();
        for i in 0..9 {
            let b = alg3.basis_element(i);
            let diff = element_norm(&rec.apply(&b).unwrap().sub(&ad.apply(&b).unwrap()).unwrap());
            assert!(diff < 1e-8);
        }
    }

    #[test]
    fn block_swap_is_rejected() {
        let alg = CStarAlgebra::new(vec![2, 2]).unwrap();
        // swap the two M₂ summands: a *-automorphism, but not block-preserving
        let images: Vec<AlgebraElement> = (0..alg.total_dim())
            .map(|i| {
                let b = alg.basis_element(i);
                AlgebraElement::new(alg.clone(), vec![b.blocks[1].clone(), b.blocks[0].clone()])
                    .unwrap()
            })
            .collect();
        assert!(matches!(
            automorphism_to_unitaries(&alg, &images),
            Err(GnsError::NotBlockPreserving { .. })
        ));
    }

    #[test]
    fn intertwiner_identity_case() {
        let alg = CStarAlgebra::full_matrix(2);
        let omega = pure_e1(&alg, 0);
        let id = InnerAutomorphism::identity(&alg);
        let (phi, u) = intertwiner(&id, &omega, &omega).unwrap();
        assert!((&u - CMatrix::identity(2, 2)).norm() < 1e-12);
        assert!((phi - &omega.vector).norm() < 1e-12);
    }

    #[test]
    fn intertwiner_sigma_x_case() {
        let alg = CStarAlgebra::full_matrix(2);
        let sx = CMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
            ],
        );
        let alpha = InnerAutomorphism::new(alg.clone(), vec![sx.clone()]).unwrap();
        let omega = pure_e1(&alg, 0);
        let mut v = CVector::zeros(2);
        v[1] = C64::new(1.0, 0.0);
        let psi = PureState::new(alg.clone(), 0, v).unwrap();
        let (phi, u) = intertwiner(&alpha, &omega, &psi).unwrap();
        // α_*ω = ψ here, so Φ is Ψ itself and U = σ_x exactly (positive gauge)
        assert!((&phi - &psi.vector).norm() < 1e-12);
        assert!((&u - &sx).norm() < 1e-12);
        // diagram: U(AΩ) = α(A)(UΩ)
        let mut rng = sampling::rng(19);
        for _ in 0..50 {
            let a = AlgebraElement::new(alg.clone(), vec![sampling::random_matrix(&mut rng, 2, 2)])
                .unwrap();
            let lhs = &u * (&a.blocks[0] * &omega.vector);
            let rhs = &alpha.apply(&a).unwrap().blocks[0] * (&u * &omega.vector);
            assert!((lhs - rhs).norm() < 1e-9);
        }
    }

    #[test]
    fn intertwiner_rejects_antipodal() {
        let alg = CStarAlgebra::full_matrix(2);
        let omega = pure_e1(&alg, 0);
        let mut v = CVector::zeros(2);
        v[1] = C64::new(1.0, 0.0);
        let psi = PureState::new(alg.clone(), 0, v).unwrap();
        let id = InnerAutomorphism::identity(&alg);
        assert!(matches!(
            intertwiner(&id, &omega, &psi),
            Err(GnsError::Antipodal { .. })
        ));
    }

    #[test]
    fn naturality_of_the_ideal() {
        // α(𝔑_ω) = 𝔑_{α_*ω}
        let alg = CStarAlgebra::full_matrix(3);
        let mut rng = sampling::rng(57);
        let v = sampling::random_unit_vector(&mut rng, 3);
        let omega = PureState::new(alg.clone(), 0, v).unwrap().to_state();
        let u = sampling::random_unitary(&mut rng, 3);
        let alpha = InnerAutomorphism::new(alg.clone(), vec![u]).unwrap();
        let pushed = alpha.pushforward(&omega).unwrap();

        let ideal_omega = gelfand_ideal(&omega).unwrap();
        let ideal_pushed = gelfand_ideal(&pushed).unwrap();
        assert_eq!(ideal_omega.len(), ideal_pushed.len());
        for b in &ideal_omega {
            let image = alpha.apply(b).unwrap();
            let r = span_residual(&ideal_pushed, &image);
            assert!(r <= 1e-9, "naturality residual {r}");
        }
        let _ = state_norm_distance(&omega, &pushed);
    }
}
