//! Finite-dimensional C*-algebras 𝔄 = ⊕ₖ M_{nₖ}(ℂ), their elements, states,
//! the dual norm, vector states, derivations, and the Cayley transform.
//!
//! States are stored as block density parts, never as abstract functionals:
//! the dual norm is then computable exactly as Σₖ‖Δρₖ‖₁ and purity is
//! decidable. The superselection sector of a pure state is its block index;
//! for block algebras the sectors are exactly the blocks, so no
//! unitary-equivalence search is ever needed.

use crate::numerics::{
    self, eigh_with, CMatrix, CVector, NumericPolicy, NumericsError, C64, DEFAULT_POLICY,
};
use thiserror::Error;

/// Largest Σ nₖ² accepted; matrices beyond this are out of scope.
pub const MAX_TOTAL_DIM: usize = 4096;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("an algebra needs at least one block")]
    EmptyAlgebra,
    #[error("block dimensions must be positive")]
    ZeroBlockDim,
    #[error("total dimension {total} exceeds the configured limit {limit}")]
    TotalDimTooLarge { total: usize, limit: usize },
    #[error("block {block}: expected {expected}x{expected}, got {rows}x{cols}")]
    ShapeMismatch {
        block: usize,
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("operands belong to different algebras")]
    AlgebraMismatch,
    #[error("density block {block} is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPositive { block: usize, eigenvalue: f64 },
    #[error("densities have total trace {total}, expected 1")]
    TraceNotOne { total: f64 },
    #[error("vector has norm {norm}, expected 1")]
    NotUnitVector { norm: f64 },
    #[error("block index {index} out of range for {blocks} blocks")]
    BlockIndexOutOfRange { index: usize, blocks: usize },
    #[error("zero vector cannot define a state")]
    ZeroVector,
    #[error("perturbing element is not normalized: ω(B*B) = {value}")]
    NotNormalized { value: f64 },
    #[error("derivation generator in block {block} is not hermitian (defect {defect:.3e})")]
    GeneratorNotHermitian { block: usize, defect: f64 },
    #[error("element is not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },
    #[error("-1 lies in the spectrum: ‖I − u‖ = {norm} is not < 2 − 1e-8")]
    SpectrumAtMinusOne { norm: f64 },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// The shape ⊕ₖ M_{nₖ}(ℂ), carried around by value and compared by equality.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct CStarAlgebra {
    block_dims: Vec<usize>,
}

impl CStarAlgebra {
    pub fn new(block_dims: Vec<usize>) -> Result<Self, AlgebraError> {
        if block_dims.is_empty() {
            return Err(AlgebraError::EmptyAlgebra);
        }
        if block_dims.contains(&0) {
            return Err(AlgebraError::ZeroBlockDim);
        }
        let total: usize = block_dims.iter().map(|&n| n * n).sum();
        if total > MAX_TOTAL_DIM {
            return Err(AlgebraError::TotalDimTooLarge {
                total,
                limit: MAX_TOTAL_DIM,
            });
        }
        Ok(CStarAlgebra { block_dims })
    }

    /// The single-block algebra M_n(ℂ).
    pub fn full_matrix(n: usize) -> Self {
        CStarAlgebra::new(vec![n]).expect("single block within limits")
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn num_blocks(&self) -> usize {
        self.block_dims.len()
    }

    /// Σ nₖ², the linear dimension of the algebra itself.
    pub fn total_dim(&self) -> usize {
        self.block_dims.iter().map(|&n| n * n).sum()
    }

    /// Σ nₖ, the dimension of the identity representation space ⊕ₖ ℂ^{nₖ}.
    pub fn rep_dim(&self) -> usize {
        self.block_dims.iter().sum()
    }

    pub fn identity(&self) -> AlgebraElement {
        let blocks = self
            .block_dims
            .iter()
            .map(|&n| CMatrix::identity(n, n))
            .collect();
        AlgebraElement::new(self.clone(), blocks).expect("identity has valid shape")
    }

    pub fn zero(&self) -> AlgebraElement {
        let blocks = self
            .block_dims
            .iter()
            .map(|&n| CMatrix::zeros(n, n))
            .collect();
        AlgebraElement::new(self.clone(), blocks).expect("zero has valid shape")
    }

    /// Canonical linear basis: matrix units e⁽ᵏ⁾ᵢⱼ enumerated by block, then
    /// row-major within the block. Orthonormal for the Frobenius form, which
    /// identifies coefficient vectors with stacked entries.
    pub fn basis_index(&self, block: usize, i: usize, j: usize) -> usize {
        let offset: usize = self.block_dims[..block].iter().map(|&n| n * n).sum();
        offset + i * self.block_dims[block] + j
    }

    pub fn basis_element(&self, index: usize) -> AlgebraElement {
        let mut rest = index;
        for (k, &n) in self.block_dims.iter().enumerate() {
            if rest < n * n {
                let mut blocks: Vec<CMatrix> = self
                    .block_dims
                    .iter()
                    .map(|&m| CMatrix::zeros(m, m))
                    .collect();
                blocks[k][(rest / n, rest % n)] = C64::new(1.0, 0.0);
                return AlgebraElement::new(self.clone(), blocks).expect("unit shape");
            }
            rest -= n * n;
        }
        panic!(
            "basis index {index} out of range for total dim {}",
            self.total_dim()
        );
    }
}

/// An element A = (A₁, …, A_K), one nₖ×nₖ block per summand.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    pub algebra: CStarAlgebra,
    pub blocks: Vec<CMatrix>,
}

impl AlgebraElement {
    pub fn new(algebra: CStarAlgebra, blocks: Vec<CMatrix>) -> Result<Self, AlgebraError> {
        if blocks.len() != algebra.num_blocks() {
            return Err(AlgebraError::ShapeMismatch {
                block: blocks.len(),
                expected: algebra.num_blocks(),
                rows: 0,
                cols: 0,
            });
        }
        for (k, (b, &n)) in blocks.iter().zip(algebra.block_dims()).enumerate() {
            if b.nrows() != n || b.ncols() != n {
                return Err(AlgebraError::ShapeMismatch {
                    block: k,
                    expected: n,
                    rows: b.nrows(),
                    cols: b.ncols(),
                });
            }
            if !b.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                return Err(AlgebraError::Numerics(NumericsError::NonFinite));
            }
        }
        Ok(AlgebraElement { algebra, blocks })
    }

    /// Embed an nₖ×nₖ matrix as block k, zero elsewhere.
    pub fn from_block(
        algebra: &CStarAlgebra,
        block: usize,
        m: CMatrix,
    ) -> Result<Self, AlgebraError> {
        if block >= algebra.num_blocks() {
            return Err(AlgebraError::BlockIndexOutOfRange {
                index: block,
                blocks: algebra.num_blocks(),
            });
        }
        let mut blocks: Vec<CMatrix> = algebra
            .block_dims()
            .iter()
            .map(|&n| CMatrix::zeros(n, n))
            .collect();
        blocks[block] = m;
        AlgebraElement::new(algebra.clone(), blocks)
    }

    /// Embed a unitary in block k and put the identity in every other block,
    /// so the element is unitary in 𝔄.
    pub fn unitary_in_block(
        algebra: &CStarAlgebra,
        block: usize,
        u: CMatrix,
    ) -> Result<Self, AlgebraError> {
        let mut e = algebra.identity();
        if block >= algebra.num_blocks() {
            return Err(AlgebraError::BlockIndexOutOfRange {
                index: block,
                blocks: algebra.num_blocks(),
            });
        }
        e.blocks[block] = u;
        AlgebraElement::new(e.algebra, e.blocks)
    }

    pub fn adjoint(&self) -> AlgebraElement {
        AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().map(|b| b.adjoint()).collect(),
        }
    }

    pub fn mul(&self, other: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        if self.algebra != other.algebra {
            return Err(AlgebraError::AlgebraMismatch);
        }
        Ok(AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        if self.algebra != other.algebra {
            return Err(AlgebraError::AlgebraMismatch);
        }
        Ok(AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.add(&other.scale(C64::from(-1.0)))
    }

    pub fn scale(&self, c: C64) -> AlgebraElement {
        AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().map(|b| b * c).collect(),
        }
    }

    /// Stacked-entry coordinates in the canonical matrix-unit basis.
    pub fn coefficients(&self) -> CVector {
        let mut out = CVector::zeros(self.algebra.total_dim());
        let mut at = 0;
        for b in &self.blocks {
            let n = b.nrows();
            for i in 0..n {
                for j in 0..n {
                    out[at] = b[(i, j)];
                    at += 1;
                }
            }
        }
        out
    }

    pub fn from_coefficients(
        algebra: &CStarAlgebra,
        coeffs: &CVector,
    ) -> Result<AlgebraElement, AlgebraError> {
        let mut blocks = Vec::with_capacity(algebra.num_blocks());
        let mut at = 0;
        for &n in algebra.block_dims() {
            let mut b = CMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    b[(i, j)] = coeffs[at];
                    at += 1;
                }
            }
            blocks.push(b);
        }
        AlgebraElement::new(algebra.clone(), blocks)
    }

    /// Dense block-diagonal assembly; the oracle view of the element.
    pub fn assemble(&self) -> CMatrix {
        let d = self.algebra.rep_dim();
        let mut m = CMatrix::zeros(d, d);
        let mut at = 0;
        for b in &self.blocks {
            let n = b.nrows();
            m.view_mut((at, at), (n, n)).copy_from(b);
            at += n;
        }
        m
    }

    pub fn is_hermitian(&self, policy: &NumericPolicy) -> bool {
        self.blocks.iter().all(|b| {
            numerics::hermiticity_defect(b) <= policy.hermiticity * numerics::max_abs(b).max(1.0)
        })
    }

    /// Unitarity defect maxₖ ‖uₖ*uₖ − I‖_F.
    pub fn unitarity_defect(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| (b.adjoint() * b - CMatrix::identity(b.nrows(), b.ncols())).norm())
            .fold(0.0, f64::max)
    }
}

/// C*-norm: the largest block operator norm.
pub fn element_norm(a: &AlgebraElement) -> f64 {
    a.blocks
        .iter()
        .map(|b| numerics::operator_norm(b).expect("validated finite"))
        .fold(0.0, f64::max)
}

/// A state as block density parts: ω(A) = Σₖ tr(ρₖ Aₖ).
#[derive(Clone, Debug)]
pub struct State {
    pub algebra: CStarAlgebra,
    pub densities: Vec<CMatrix>,
}

impl State {
    pub fn new(algebra: CStarAlgebra, densities: Vec<CMatrix>) -> Result<Self, AlgebraError> {
        State::new_with(&DEFAULT_POLICY, algebra, densities)
    }

    pub fn new_with(
        policy: &NumericPolicy,
        algebra: CStarAlgebra,
        densities: Vec<CMatrix>,
    ) -> Result<Self, AlgebraError> {
        if densities.len() != algebra.num_blocks() {
            return Err(AlgebraError::ShapeMismatch {
                block: densities.len(),
                expected: algebra.num_blocks(),
                rows: 0,
                cols: 0,
            });
        }
        let mut trace = 0.0;
        for (k, (rho, &n)) in densities.iter().zip(algebra.block_dims()).enumerate() {
            if rho.nrows() != n || rho.ncols() != n {
                return Err(AlgebraError::ShapeMismatch {
                    block: k,
                    expected: n,
                    rows: rho.nrows(),
                    cols: rho.ncols(),
                });
            }
            let eig = eigh_with(policy, rho)?;
            if let Some(&min) = eig.eigenvalues.first() {
                if min < -1e-10 {
                    return Err(AlgebraError::NotPositive {
                        block: k,
                        eigenvalue: min,
                    });
                }
            }
            trace += rho.trace().re;
        }
        if (trace - 1.0).abs() > 1e-10 {
            return Err(AlgebraError::TraceNotOne { total: trace });
        }
        Ok(State { algebra, densities })
    }

    pub fn block_trace(&self, k: usize) -> f64 {
        self.densities[k].trace().re
    }
}

/// A pure state: one block, rank-one density |v⟩⟨v| with ‖v‖ = 1.
#[derive(Clone, Debug)]
pub struct PureState {
    pub algebra: CStarAlgebra,
    pub block_index: usize,
    pub vector: CVector,
}

impl PureState {
    pub fn new(
        algebra: CStarAlgebra,
        block_index: usize,
        vector: CVector,
    ) -> Result<Self, AlgebraError> {
        PureState::new_with(&DEFAULT_POLICY, algebra, block_index, vector)
    }

    pub fn new_with(
        policy: &NumericPolicy,
        algebra: CStarAlgebra,
        block_index: usize,
        vector: CVector,
    ) -> Result<Self, AlgebraError> {
        if block_index >= algebra.num_blocks() {
            return Err(AlgebraError::BlockIndexOutOfRange {
                index: block_index,
                blocks: algebra.num_blocks(),
            });
        }
        if vector.len() != algebra.block_dims()[block_index] {
            return Err(AlgebraError::ShapeMismatch {
                block: block_index,
                expected: algebra.block_dims()[block_index],
                rows: vector.len(),
                cols: 1,
            });
        }
        if !numerics::vector_finite(&vector) {
            return Err(AlgebraError::Numerics(NumericsError::NonFinite));
        }
        let norm = vector.norm();
        if (norm - 1.0).abs() > policy.orthonormality.max(1e-12) {
            return Err(AlgebraError::NotUnitVector { norm });
        }
        Ok(PureState {
            algebra,
            block_index,
            vector,
        })
    }

    pub fn to_state(&self) -> State {
        let mut densities: Vec<CMatrix> = self
            .algebra
            .block_dims()
            .iter()
            .map(|&n| CMatrix::zeros(n, n))
            .collect();
        densities[self.block_index] = &self.vector * self.vector.adjoint();
        State {
            algebra: self.algebra.clone(),
            densities,
        }
    }
}

/// ω(A) = Σₖ tr(ρₖ Aₖ).
pub fn evaluate(s: &State, a: &AlgebraElement) -> Result<C64, AlgebraError> {
    if s.algebra != a.algebra {
        return Err(AlgebraError::AlgebraMismatch);
    }
    let mut total = C64::new(0.0, 0.0);
    for (rho, blk) in s.densities.iter().zip(&a.blocks) {
        total += (rho * blk).trace();
    }
    Ok(total)
}

/// The canonical metric ‖ψ − ω‖ on states: Σₖ ‖ρₖ − σₖ‖₁, which is the dual
/// norm against the unit ball of the algebra.
pub fn state_norm_distance(s1: &State, s2: &State) -> Result<f64, AlgebraError> {
    if s1.algebra != s2.algebra {
        return Err(AlgebraError::AlgebraMismatch);
    }
    let mut total = 0.0;
    for (a, b) in s1.densities.iter().zip(&s2.densities) {
        total += numerics::trace_norm(&(a - b))?;
    }
    Ok(total)
}

/// Purity test: exactly one block carries trace > tol and its density has
/// rank one (second eigenvalue < tol). Returns the supporting unit vector.
pub fn is_pure(s: &State, tol: f64) -> Option<PureState> {
    let mut support_block: Option<usize> = None;
    for k in 0..s.algebra.num_blocks() {
        if s.block_trace(k) > tol {
            if support_block.is_some() {
                return None;
            }
            support_block = Some(k);
        }
    }
    let k = support_block?;
    let eig = eigh_with(&DEFAULT_POLICY, &s.densities[k]).ok()?;
    let n = eig.eigenvalues.len();
    if n >= 2 && eig.eigenvalues[n - 2] >= tol {
        return None;
    }
    let v = eig.eigenvector(n - 1);
    PureState::new(s.algebra.clone(), k, v).ok()
}

/// The state of a unit vector v ∈ ⊕ₖ ℂ^{nₖ}: densities |vₖ⟩⟨vₖ| from the
/// block components. Cross-block combinations αΨ⊕βΩ produce the mixture
/// |α|²ψ + |β|²ω: superpositions across sectors are not coherent.
pub fn vector_state(alg: &CStarAlgebra, v: &CVector) -> Result<State, AlgebraError> {
    if v.len() != alg.rep_dim() {
        return Err(AlgebraError::ShapeMismatch {
            block: 0,
            expected: alg.rep_dim(),
            rows: v.len(),
            cols: 1,
        });
    }
    let norm = v.norm();
    if norm <= 1e-12 {
        return Err(AlgebraError::ZeroVector);
    }
    let v = v / C64::from(norm);
    let mut densities = Vec::with_capacity(alg.num_blocks());
    let mut at = 0;
    for &n in alg.block_dims() {
        let vk = v.rows(at, n).clone_owned();
        densities.push(&vk * vk.adjoint());
        at += n;
    }
    State::new(alg.clone(), densities)
}

/// B·ω : A ↦ ω(B*AB) for ω(B*B) = 1; densities become BₖρₖBₖ*.
pub fn quasi_local_perturbation(s: &State, b: &AlgebraElement) -> Result<State, AlgebraError> {
    let norm = evaluate(s, &b.adjoint().mul(b)?)?;
    if (norm.re - 1.0).abs() > 1e-8 || norm.im.abs() > 1e-8 {
        return Err(AlgebraError::NotNormalized { value: norm.re });
    }
    let densities = s
        .densities
        .iter()
        .zip(&b.blocks)
        .map(|(rho, bk)| bk * rho * bk.adjoint())
        .collect();
    State::new(s.algebra.clone(), densities)
}

/// A bounded symmetric derivation δ(A) = i[h, A], given by Hermitian block
/// generators.
#[derive(Clone, Debug)]
pub struct Derivation {
    pub algebra: CStarAlgebra,
    pub generators: Vec<CMatrix>,
}

impl Derivation {
    pub fn new(algebra: CStarAlgebra, generators: Vec<CMatrix>) -> Result<Self, AlgebraError> {
        if generators.len() != algebra.num_blocks() {
            return Err(AlgebraError::ShapeMismatch {
                block: generators.len(),
                expected: algebra.num_blocks(),
                rows: 0,
                cols: 0,
            });
        }
        for (k, (h, &n)) in generators.iter().zip(algebra.block_dims()).enumerate() {
            if h.nrows() != n || h.ncols() != n {
                return Err(AlgebraError::ShapeMismatch {
                    block: k,
                    expected: n,
                    rows: h.nrows(),
                    cols: h.ncols(),
                });
            }
            let defect = numerics::hermiticity_defect(h);
            if defect > 1e-10 * numerics::max_abs(h).max(1.0) {
                return Err(AlgebraError::GeneratorNotHermitian { block: k, defect });
            }
        }
        Ok(Derivation {
            algebra,
            generators,
        })
    }

    /// δ(A) = i[h, A], blockwise.
    pub fn apply(&self, a: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        if a.algebra != self.algebra {
            return Err(AlgebraError::AlgebraMismatch);
        }
        let i = C64::new(0.0, 1.0);
        let blocks = self
            .generators
            .iter()
            .zip(&a.blocks)
            .map(|(h, ak)| (h * ak - ak * h) * i)
            .collect();
        AlgebraElement::new(self.algebra.clone(), blocks)
    }
}

/// α_t = exp(tδ) as the unitary u = (e^{i t hₖ})ₖ; the automorphism is
/// A ↦ u A u*.
pub fn exp_derivation(d: &Derivation, t: f64) -> AlgebraElement {
    let blocks: Vec<CMatrix> = d
        .generators
        .iter()
        .map(|h| numerics::matrix_exp(&(h * C64::new(0.0, t))).expect("generator validated finite"))
        .collect();
    AlgebraElement::new(d.algebra.clone(), blocks).expect("exp keeps shapes")
}

/// φ(U) = i(I − U)(I + U)⁻¹, blockwise; Hermitian on the domain
/// ‖I − U‖ < 2 (equivalently −1 off the spectrum).
pub fn cayley(u: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
    let defect = u.unitarity_defect();
    if defect > 1e-8 {
        return Err(AlgebraError::NotUnitary { defect });
    }
    let gap_norm = element_norm(&u.algebra.identity().sub(u)?);
    if gap_norm >= 2.0 - 1e-8 {
        return Err(AlgebraError::SpectrumAtMinusOne { norm: gap_norm });
    }
    let mut blocks = Vec::with_capacity(u.blocks.len());
    for b in &u.blocks {
        let a = numerics::cayley_transform(b)?;
        // Symmetrize away solver roundoff; the result is Hermitian on the domain.
        blocks.push((&a + a.adjoint()) * C64::from(0.5));
    }
    AlgebraElement::new(u.algebra.clone(), blocks)
}

/// φ⁻¹(A) = (iI − A)(iI + A)⁻¹, blockwise; unitary for Hermitian input.
pub fn cayley_inverse(a: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
    if !a.is_hermitian(&DEFAULT_POLICY) {
        let defect = a
            .blocks
            .iter()
            .map(numerics::hermiticity_defect)
            .fold(0.0, f64::max);
        return Err(AlgebraError::Numerics(NumericsError::NotHermitian {
            defect,
            tol: 1e-10,
        }));
    }
    let mut blocks = Vec::with_capacity(a.blocks.len());
    for b in &a.blocks {
        blocks.push(numerics::cayley_inverse_transform(b)?);
    }
    AlgebraElement::new(a.algebra.clone(), blocks)
}
