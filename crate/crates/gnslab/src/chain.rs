//! Non-interacting spin chains on finite truncations Λ ⊂ ℤ^d: single-site
//! fields H_{r_v} = r_v·σ, product ground states, local expectations by
//! factor-wise contraction, exact local norm distances via the overlap
//! product, the positivity of −iω(A*δ(A)), spectral gaps of the truncated
//! Hamiltonian, and the sector-separation witness.
//!
//! The design rule: everything that factorizes is computed factorized (any
//! truncation size), and dense 2^{|Λ|} tensor builds appear only where the
//! quantity itself is global (the spectral gap) or as test oracles.

use std::collections::BTreeSet;

use crate::bundles::{ground_vector, spin_hamiltonian};
use crate::numerics::{self, CMatrix, CVector, NumericsError, C64};
use thiserror::Error;

/// Truncations above this size would need a dense 2^{|Λ|} build.
pub const MAX_DENSE_SITES: usize = 12;

#[derive(Debug, Error)]
pub enum ChainError {
    #[error("configurations have different site sets")]
    SiteMismatch,
    #[error("{sites} sites but {field} field vectors")]
    LengthMismatch { sites: usize, field: usize },
    #[error("field at site {site} has norm {norm}")]
    NotUnitField { site: usize, norm: f64 },
    #[error("sites have inconsistent coordinate dimensions")]
    MixedDimensions,
    #[error("duplicate site at position {index}")]
    DuplicateSite { index: usize },
    #[error("support index {index} outside the truncation")]
    SupportOutsideLattice { index: usize },
    #[error("support indices must be strictly increasing (position {index})")]
    UnsortedSupport { index: usize },
    #[error("tensor factor {index} is {rows}×{cols}, expected 2×2")]
    FactorShape {
        index: usize,
        rows: usize,
        cols: usize,
    },
    #[error("truncation of {size} sites exceeds the dense limit {max}")]
    TooLarge { size: usize, max: usize },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// A finite ordered truncation Λ ⊂ ℤ^d together with a unit field vector
/// per site.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldConfig {
    pub sites: Vec<Vec<i64>>,
    pub field: Vec<[f64; 3]>,
}

impl FieldConfig {
    pub fn new(sites: Vec<Vec<i64>>, field: Vec<[f64; 3]>) -> Result<Self, ChainError> {
        if sites.len() != field.len() {
            return Err(ChainError::LengthMismatch {
                sites: sites.len(),
                field: field.len(),
            });
        }
        if let Some(first) = sites.first() {
            let d = first.len();
            if sites.iter().any(|s| s.len() != d) {
                return Err(ChainError::MixedDimensions);
            }
        }
        let mut seen = BTreeSet::new();
        for (i, s) in sites.iter().enumerate() {
            if !seen.insert(s.clone()) {
                return Err(ChainError::DuplicateSite { index: i });
            }
        }
        for (i, r) in field.iter().enumerate() {
            let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
            if (norm - 1.0).abs() > 1e-12 {
                return Err(ChainError::NotUnitField { site: i, norm });
            }
        }
        Ok(FieldConfig { sites, field })
    }

    /// The diagonal configuration Δ(r): the same field vector on a 1-d
    /// prefix {0, …, len−1}.
    pub fn constant(len: usize, r: [f64; 3]) -> Result<Self, ChainError> {
        let sites = (0..len as i64).map(|k| vec![k]).collect();
        FieldConfig::new(sites, vec![r; len])
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }
}

/// ‖Φ_r − Φ_{r′}‖ = max_v ‖r_v − r′_v‖ over a common site set.
pub fn interaction_distance(c1: &FieldConfig, c2: &FieldConfig) -> Result<f64, ChainError> {
    if c1.sites != c2.sites {
        return Err(ChainError::SiteMismatch);
    }
    Ok(c1
        .field
        .iter()
        .zip(&c2.field)
        .map(|(a, b)| {
            ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
        })
        .fold(0.0, f64::max))
}

/// Ω_{r,Λ} = ⊗_v Ψ_{r_v}, stored site by site. Each factor is the phase-
/// pinned lowest eigenvector of H_{r_v}, so equal configurations produce
/// bit-identical states.
#[derive(Clone, Debug)]
pub struct ProductGroundState {
    pub config: FieldConfig,
    pub vectors: Vec<CVector>,
}

impl ProductGroundState {
    pub fn new(config: FieldConfig) -> Result<Self, ChainError> {
        let vectors = config
            .field
            .iter()
            .map(|&r| ground_vector(r))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ProductGroundState { config, vectors })
    }

    /// ⟨Ω, Ω′⟩ = ∏_v ⟨Ψ_v, Ψ′_v⟩.
    pub fn overlap(&self, other: &ProductGroundState) -> Result<C64, ChainError> {
        if self.config.sites != other.config.sites {
            return Err(ChainError::SiteMismatch);
        }
        Ok(self
            .vectors
            .iter()
            .zip(&other.vectors)
            .map(|(a, b)| a.dotc(b))
            .product())
    }
}

/// A ⊗-factorized local operator: 2×2 factors on a strictly increasing
/// list of site indices into Λ, identity elsewhere.
#[derive(Clone, Debug)]
pub struct LocalOperator {
    pub support: Vec<usize>,
    pub factors: Vec<CMatrix>,
}

impl LocalOperator {
    pub fn new(support: Vec<usize>, factors: Vec<CMatrix>) -> Result<Self, ChainError> {
        if support.len() != factors.len() {
            return Err(ChainError::LengthMismatch {
                sites: support.len(),
                field: factors.len(),
            });
        }
        for i in 1..support.len() {
            if support[i] <= support[i - 1] {
                return Err(ChainError::UnsortedSupport { index: i });
            }
        }
        for (i, f) in factors.iter().enumerate() {
            if f.nrows() != 2 || f.ncols() != 2 {
                return Err(ChainError::FactorShape {
                    index: i,
                    rows: f.nrows(),
                    cols: f.ncols(),
                });
            }
        }
        Ok(LocalOperator { support, factors })
    }

    /// The empty product: the identity of the quasi-local algebra.
    pub fn identity() -> Self {
        LocalOperator {
            support: Vec::new(),
            factors: Vec::new(),
        }
    }

    /// Single-site operator at position `site` of the truncation.
    pub fn at_site(site: usize, m: CMatrix) -> Result<Self, ChainError> {
        LocalOperator::new(vec![site], vec![m])
    }

    /// ‖A‖ = ∏ ‖A_v‖ for simple tensors.
    pub fn norm(&self) -> Result<f64, ChainError> {
        let mut n = 1.0;
        for f in &self.factors {
            n *= numerics::operator_norm(f)?;
        }
        Ok(n)
    }

    fn check_support(&self, lattice_len: usize) -> Result<(), ChainError> {
        for &s in &self.support {
            if s >= lattice_len {
                return Err(ChainError::SupportOutsideLattice { index: s });
            }
        }
        Ok(())
    }
}

/// ω_{r,Λ}(A) = ∏_{v ∈ supp A} ⟨Ψ_v, A_v Ψ_v⟩; off-support sites
/// contribute their normalization 1.
pub fn expectation(state: &ProductGroundState, a: &LocalOperator) -> Result<C64, ChainError> {
    a.check_support(state.config.len())?;
    let mut value = C64::new(1.0, 0.0);
    for (&site, factor) in a.support.iter().zip(&a.factors) {
        let psi = &state.vectors[site];
        value *= psi.dotc(&(factor * psi));
    }
    Ok(value)
}

/// Exact norm distance together with the site-wise upper bound.
#[derive(Clone, Copy, Debug)]
pub struct LocalDistance {
    /// ‖ω − ω′‖ = 2√(1 − |⟨Ω,Ω′⟩|²), the pure-state trace-norm identity.
    pub exact: f64,
    /// 2·Σ_v min-gauge ‖Ψ_v − Ψ′_v‖ = 2·Σ_v √(2 − 2|⟨Ψ_v,Ψ′_v⟩|).
    pub bound: f64,
}

/// The distance of two product ground states over the same truncation, by
/// the overlap product (factorized, any size), plus the telescoping bound
/// it is dominated by. The min-gauge site distance keeps the bound
/// phase-convention-free; it lower-bounds any gauged ‖Ψ_v − Ψ′_v‖, so
/// exact ≤ bound is the strongest form of the inequality.
pub fn local_state_distance(
    s1: &ProductGroundState,
    s2: &ProductGroundState,
) -> Result<LocalDistance, ChainError> {
    let overlap = s1.overlap(s2)?.norm().min(1.0);
    let exact = 2.0 * (1.0 - overlap * overlap).max(0.0).sqrt();
    let bound = 2.0
        * s1.vectors
            .iter()
            .zip(&s2.vectors)
            .map(|(a, b)| {
                let p = a.dotc(b).norm().min(1.0);
                (2.0 - 2.0 * p).max(0.0).sqrt()
            })
            .sum::<f64>();
    debug_assert!(exact <= bound + 1e-12);
    Ok(LocalDistance { exact, bound })
}

/// −iω(A*δ(A)) for the ground state, evaluated in its manifestly
/// nonnegative form Σ_{v∈Λ} ⟨AΩ, (H_{r_v} + 1)AΩ⟩: per supported site,
/// ⟨A_vΨ_v, (H_v + 1)A_vΨ_v⟩ · ∏_{u∈supp, u≠v} ‖A_uΨ_u‖²; sites outside
/// the support contribute nothing because (H_v + 1)Ψ_v = 0.
pub fn ground_state_inequality(
    state: &ProductGroundState,
    a: &LocalOperator,
) -> Result<f64, ChainError> {
    let len = state.config.len();
    if len > MAX_DENSE_SITES {
        return Err(ChainError::TooLarge {
            size: len,
            max: MAX_DENSE_SITES,
        });
    }
    a.check_support(len)?;
    let images: Vec<CVector> = a
        .support
        .iter()
        .zip(&a.factors)
        .map(|(&site, factor)| factor * &state.vectors[site])
        .collect();
    let mut total = 0.0;
    for (k, (&site, img)) in a.support.iter().zip(&images).enumerate() {
        let h = spin_hamiltonian(state.config.field[site]);
        let term = img.dotc(&(&h * img + img)).re;
        let weight: f64 = images
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, w)| w.norm_squared())
            .product();
        total += weight * term;
    }
    Ok(total)
}

/// Dense H_{r,Λ} = Σ_v H_{r_v} on ⊗_{v∈Λ} ℂ², site order = config order.
pub fn dense_hamiltonian(config: &FieldConfig) -> Result<CMatrix, ChainError> {
    let m = config.len();
    if m > MAX_DENSE_SITES {
        return Err(ChainError::TooLarge {
            size: m,
            max: MAX_DENSE_SITES,
        });
    }
    let dim = 1usize << m;
    let mut h = CMatrix::zeros(dim, dim);
    for v in 0..m {
        let mut term = CMatrix::identity(1, 1);
        for u in 0..m {
            let factor = if u == v {
                spin_hamiltonian(config.field[u])
            } else {
                CMatrix::identity(2, 2)
            };
            term = term.kronecker(&factor);
        }
        h += term;
    }
    Ok(h)
}

/// (ground energy, gap, ground multiplicity) of the truncated Hamiltonian,
/// by a dense eigenvalue solve. For unit fields this is (−|Λ|, 2, 1):
/// each site contributes ±1 and the minimum is attained only by the
/// all-ground product.
pub fn spectral_gap(config: &FieldConfig) -> Result<(f64, f64, usize), ChainError> {
    let h = dense_hamiltonian(config)?;
    let mut eigenvalues: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    eigenvalues.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    let ground = eigenvalues[0];
    let multiplicity = eigenvalues.iter().filter(|&&e| e - ground < 1e-8).count();
    let gap = if multiplicity < eigenvalues.len() {
        eigenvalues[multiplicity] - ground
    } else {
        0.0
    };
    Ok((ground, gap, multiplicity))
}

/// The separation witness between the diagonal configurations Δ(r) and
/// Δ(s): for each truncation prefix of size ℓ ≤ m, the single-site
/// operator H_r placed at the first site outside the prefix distinguishes
/// the two states by exactly |1 − r·s|, independent of ℓ. Any candidate
/// bound |ω₁(A) − ω₂(A)| < ε‖A‖ with ε < |1 − r·s| therefore fails at
/// every truncation.
#[derive(Clone, Debug)]
pub struct SectorWitness {
    /// |ω_{Δr}(H_r at site ℓ) − ω_{Δs}(H_r at site ℓ)| for ℓ = 0…m.
    pub prefix_values: Vec<f64>,
    /// |1 − r·s|, the common predicted value.
    pub predicted: f64,
}

impl SectorWitness {
    pub fn max_deviation(&self) -> f64 {
        self.prefix_values
            .iter()
            .map(|v| (v - self.predicted).abs())
            .fold(0.0, f64::max)
    }
}

pub fn sector_witness(r: [f64; 3], s: [f64; 3], m: usize) -> Result<SectorWitness, ChainError> {
    let len = m + 1;
    let state_r = ProductGroundState::new(FieldConfig::constant(len, r)?)?;
    let state_s = ProductGroundState::new(FieldConfig::constant(len, s)?)?;
    let predicted = (1.0 - (r[0] * s[0] + r[1] * s[1] + r[2] * s[2])).abs();
    let mut prefix_values = Vec::with_capacity(len);
    for site in 0..len {
        let probe = LocalOperator::at_site(site, spin_hamiltonian(r))?;
        let a = expectation(&state_r, &probe)?;
        let b = expectation(&state_s, &probe)?;
        prefix_values.push((a - b).norm());
    }
    Ok(SectorWitness {
        prefix_values,
        predicted,
    })
}
