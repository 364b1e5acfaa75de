//! Projective Hilbert space ℙH: the ray product, the three equivalent
//! metrics (chordal, Fubini-Study, gap), affine charts and their inverses,
//! positive-overlap sections, and the bridge between rays and pure states.
//!
//! A [`Ray`] stores an arbitrary unit representative. There is deliberately
//! no canonical form: every operation is written phase-invariantly (and
//! tested for it), because canonicalizing representatives creates artificial
//! discontinuities exactly where the section formulas are designed to avoid
//! them.

use crate::algebra::{AlgebraError, CStarAlgebra, PureState};
use crate::numerics::{self, CMatrix, CVector, NumericPolicy, NumericsError, C64, DEFAULT_POLICY};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProjGeomError {
    #[error("vector has norm {norm}, expected a unit vector")]
    NotUnitVector { norm: f64 },
    #[error("rays are orthogonal (ray product {product:.3e} at or below cutoff {cutoff:.3e})")]
    OrthogonalRay { product: f64, cutoff: f64 },
    #[error("pure states live in different sectors (blocks {0} and {1})")]
    DifferentSectors(usize, usize),
    #[error("ray dimension {got} does not match block dimension {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("vectors have different dimensions {0} and {1}")]
    DimensionsDiffer(usize, usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// A point of ℙH: a one-dimensional subspace, held as a unit representative.
#[derive(Clone, Debug)]
pub struct Ray {
    representative: CVector,
}

impl Ray {
    pub fn new(representative: CVector) -> Result<Self, ProjGeomError> {
        Ray::new_with(&DEFAULT_POLICY, representative)
    }

    pub fn new_with(
        policy: &NumericPolicy,
        representative: CVector,
    ) -> Result<Self, ProjGeomError> {
        if !numerics::vector_finite(&representative) {
            return Err(ProjGeomError::Numerics(NumericsError::NonFinite));
        }
        let norm = representative.norm();
        if (norm - 1.0).abs() > policy.orthonormality.max(1e-12) {
            return Err(ProjGeomError::NotUnitVector { norm });
        }
        Ok(Ray { representative })
    }

    /// Normalize on the way in; rejects only the zero vector.
    pub fn from_vector(v: &CVector) -> Result<Self, ProjGeomError> {
        let norm = v.norm();
        if norm <= 1e-12 {
            return Err(ProjGeomError::NotUnitVector { norm });
        }
        Ok(Ray {
            representative: v / C64::from(norm),
        })
    }

    pub fn representative(&self) -> &CVector {
        &self.representative
    }

    pub fn dim(&self) -> usize {
        self.representative.len()
    }

    /// Rank-one projection onto the ray.
    pub fn projection(&self) -> CMatrix {
        &self.representative * self.representative.adjoint()
    }
}

/// |⟨ℂΨ, ℂΩ⟩| = |⟨Ψ, Ω⟩| for unit representatives: symmetric, in [0, 1],
/// equal to 1 exactly on equal rays.
pub fn ray_product(k: &Ray, l: &Ray) -> Result<f64, ProjGeomError> {
    if k.dim() != l.dim() {
        return Err(ProjGeomError::DimensionsDiffer(k.dim(), l.dim()));
    }
    Ok(k.representative
        .dotc(&l.representative)
        .norm()
        .clamp(0.0, 1.0))
}

/// Chordal distance: min over phases of ‖Ψ − λΩ‖ = √(2 − 2|⟨Ψ,Ω⟩|).
pub fn d_chordal(k: &Ray, l: &Ray) -> Result<f64, ProjGeomError> {
    let p = ray_product(k, l)?;
    Ok((2.0 - 2.0 * p).max(0.0).sqrt())
}

/// Fubini-Study geodesic distance arccos |⟨ℂΨ, ℂΩ⟩|.
pub fn d_fubini_study(k: &Ray, l: &Ray) -> Result<f64, ProjGeomError> {
    Ok(ray_product(k, l)?.acos())
}

/// Gap distance ‖P(𝓀) − P(𝓁)‖ = √(1 − |⟨𝓀,𝓁⟩|²), in closed form.
pub fn d_gap(k: &Ray, l: &Ray) -> Result<f64, ProjGeomError> {
    let p = ray_product(k, l)?;
    Ok(((1.0 - p) * (1.0 + p)).max(0.0).sqrt())
}

/// The gap distance again, through the projections: operator_norm(P − Q).
/// Independent of the closed form; they agree to 1e−10.
pub fn gap_via_projection(k: &Ray, l: &Ray) -> Result<f64, ProjGeomError> {
    if k.dim() != l.dim() {
        return Err(ProjGeomError::DimensionsDiffer(k.dim(), l.dim()));
    }
    Ok(numerics::operator_norm(&(k.projection() - l.projection()))?)
}

/// A point of the affine chart at Ψ: the tangent Φ ∈ C_Ψ = (ℂΨ)^⊥.
#[derive(Clone, Debug)]
pub struct ChartPoint {
    pub base: CVector,
    pub tangent: CVector,
}

/// τ_Ψ(ℂΩ) = Ω/⟨Ψ,Ω⟩ − Ψ, defined off the orthogonal hyperplane.
pub fn chart_forward(psi: &CVector, l: &Ray) -> Result<ChartPoint, ProjGeomError> {
    chart_forward_with(&DEFAULT_POLICY, psi, l)
}

pub fn chart_forward_with(
    policy: &NumericPolicy,
    psi: &CVector,
    l: &Ray,
) -> Result<ChartPoint, ProjGeomError> {
    let norm = psi.norm();
    if (norm - 1.0).abs() > policy.orthonormality.max(1e-12) {
        return Err(ProjGeomError::NotUnitVector { norm });
    }
    let c = psi.dotc(l.representative());
    if c.norm() <= policy.orthogonality {
        return Err(ProjGeomError::OrthogonalRay {
            product: c.norm(),
            cutoff: policy.orthogonality,
        });
    }
    let mut tangent = l.representative() / c - psi;
    // ⟨Ψ, tangent⟩ = 0 analytically; remove the roundoff component so the
    // invariant holds at machine precision even for large tangents.
    let resid = psi.dotc(&tangent);
    tangent -= psi * resid;
    Ok(ChartPoint {
        base: psi.clone(),
        tangent,
    })
}

/// τ_Ψ⁻¹(Φ) = ℂ(Φ + Ψ).
pub fn chart_backward(p: &ChartPoint) -> Result<Ray, ProjGeomError> {
    Ray::from_vector(&(&p.base + &p.tangent))
}

/// The unique representative Φ ∈ 𝓁 with ‖Φ‖ = 1 and ⟨Φ, Ψ⟩ > 0: multiply
/// the stored representative by conj(⟨Ψ,Ω⟩)/|⟨Ψ,Ω⟩|. This is the gauge
/// every phase convention downstream routes through.
pub fn positive_section(psi: &CVector, l: &Ray) -> Result<CVector, ProjGeomError> {
    positive_section_with(&DEFAULT_POLICY, psi, l)
}

pub fn positive_section_with(
    policy: &NumericPolicy,
    psi: &CVector,
    l: &Ray,
) -> Result<CVector, ProjGeomError> {
    let c = psi.dotc(l.representative());
    if c.norm() <= policy.orthogonality {
        return Err(ProjGeomError::OrthogonalRay {
            product: c.norm(),
            cutoff: policy.orthogonality,
        });
    }
    Ok(l.representative() * (c.conj() / C64::from(c.norm())))
}

/// Rays of ℂ^{nₖ} are exactly the pure states of block k.
pub fn ray_to_pure(alg: &CStarAlgebra, block: usize, l: &Ray) -> Result<PureState, ProjGeomError> {
    let expected = *alg
        .block_dims()
        .get(block)
        .ok_or(ProjGeomError::DimensionMismatch {
            got: l.dim(),
            expected: 0,
        })?;
    if l.dim() != expected {
        return Err(ProjGeomError::DimensionMismatch {
            got: l.dim(),
            expected,
        });
    }
    Ok(PureState::new(
        alg.clone(),
        block,
        l.representative().clone(),
    )?)
}

pub fn pure_to_ray(ps: &PureState) -> Result<Ray, ProjGeomError> {
    Ray::new(ps.vector.clone())
}

/// Fubini-Study distance between same-sector pure states, through the ray
/// bridge.
pub fn fs_geodesic_distance(ps1: &PureState, ps2: &PureState) -> Result<f64, ProjGeomError> {
    if ps1.block_index != ps2.block_index || ps1.algebra != ps2.algebra {
        return Err(ProjGeomError::DifferentSectors(
            ps1.block_index,
            ps2.block_index,
        ));
    }
    d_fubini_study(&pure_to_ray(ps1)?, &pure_to_ray(ps2)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::state_norm_distance;
    use crate::sampling;

    fn e(dim: usize, k: usize) -> CVector {
        let mut v = CVector::zeros(dim);
        v[k] = C64::new(1.0, 0.0);
        v
    }

    fn plus(dim: usize) -> CVector {
        let mut v = CVector::zeros(dim);
        v[0] = C64::from(0.5f64.sqrt());
        v[1] = C64::from(0.5f64.sqrt());
        v
    }

    #[test]
    fn ray_product_examples() {
        let r1 = Ray::new(e(2, 0)).unwrap();
        let r2 = Ray::new(e(2, 1)).unwrap();
        assert!(ray_product(&r1, &r2).unwrap() < 1e-14);
        let r3 = Ray::new(e(2, 0) * C64::new(0.0, 1.0)).unwrap();
        assert!((ray_product(&r1, &r3).unwrap() - 1.0).abs() < 1e-14);
        let r4 = Ray::new(plus(2)).unwrap();
        assert!((ray_product(&r1, &r4).unwrap() - 0.5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn metric_values_on_special_pairs() {
        let r1 = Ray::new(e(2, 0)).unwrap();
        let r2 = Ray::new(e(2, 1)).unwrap();
        assert!((d_chordal(&r1, &r2).unwrap() - 2.0f64.sqrt()).abs() < 1e-14);
        assert!((d_fubini_study(&r1, &r2).unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-14);
        assert!((d_gap(&r1, &r2).unwrap() - 1.0).abs() < 1e-14);
        assert!((gap_via_projection(&r1, &r2).unwrap() - 1.0).abs() < 1e-12);
        assert!(d_chordal(&r1, &r1).unwrap() < 1e-14);

        let r4 = Ray::new(plus(2)).unwrap();
        let expected_chd = (2.0 - 2.0f64.sqrt()).sqrt();
        assert!((d_chordal(&r1, &r4).unwrap() - expected_chd).abs() < 1e-12);
        assert!((d_gap(&r1, &r4).unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn chart_round_trips() {
        let psi = e(3, 0);
        // tangent 0 ↔ the base ray
        let p = chart_forward(&psi, &Ray::new(psi.clone()).unwrap()).unwrap();
        assert!(p.tangent.norm() < 1e-12);
        let back = chart_backward(&p).unwrap();
        assert!((ray_product(&back, &Ray::new(psi.clone()).unwrap()).unwrap() - 1.0).abs() < 1e-12);

        let mut rng = sampling::rng(17);
        for _ in 0..50 {
            let l = Ray::new(sampling::random_unit_vector(&mut rng, 3)).unwrap();
            if ray_product(&Ray::new(psi.clone()).unwrap(), &l).unwrap() < 1e-3 {
                continue;
            }
            let p = chart_forward(&psi, &l).unwrap();
            assert!(psi.dotc(&p.tangent).norm() < 1e-10);
            let back = chart_backward(&p).unwrap();
            assert!((ray_product(&back, &l).unwrap() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn chart_rejects_orthogonal() {
        let psi = e(2, 0);
        let l = Ray::new(e(2, 1)).unwrap();
        assert!(matches!(
            chart_forward(&psi, &l),
            Err(ProjGeomError::OrthogonalRay { .. })
        ));
    }

    #[test]
    fn positive_section_gauges() {
        let psi = e(2, 0);
        // l = ℂΨ and l = ℂ(−Ψ) both give back Ψ
        let s = positive_section(&psi, &Ray::new(psi.clone()).unwrap()).unwrap();
        assert!((&s - &psi).norm() < 1e-14);
        let s = positive_section(&psi, &Ray::new(psi.clone() * C64::from(-1.0)).unwrap()).unwrap();
        assert!((&s - &psi).norm() < 1e-14);
        // generic ray: overlap comes out real positive
        let mut v = CVector::zeros(2);
        v[0] = C64::new(0.0, 1.0);
        v[1] = C64::new(1.0, 0.0);
        let l = Ray::from_vector(&v).unwrap();
        let s = positive_section(&psi, &l).unwrap();
        let overlap = s.dotc(&psi);
        assert!(overlap.im.abs() < 1e-14 && overlap.re > 0.0);
        assert!((s.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ray_state_bridge() {
        let alg = CStarAlgebra::full_matrix(2);
        let l = Ray::new(e(2, 0)).unwrap();
        let ps = ray_to_pure(&alg, 0, &l).unwrap();
        let rho = &ps.to_state().densities[0];
        assert!((rho[(0, 0)].re - 1.0).abs() < 1e-14);
        assert!(rho[(1, 1)].norm() < 1e-14);

        // d_gap = ½‖ψ − ω‖ on random pairs
        let mut rng = sampling::rng(23);
        for _ in 0..50 {
            let l1 = Ray::new(sampling::random_unit_vector(&mut rng, 2)).unwrap();
            let l2 = Ray::new(sampling::random_unit_vector(&mut rng, 2)).unwrap();
            let lhs = d_gap(&l1, &l2).unwrap();
            let s1 = ray_to_pure(&alg, 0, &l1).unwrap().to_state();
            let s2 = ray_to_pure(&alg, 0, &l2).unwrap().to_state();
            let rhs = 0.5 * state_norm_distance(&s1, &s2).unwrap();
            assert!((lhs - rhs).abs() < 1e-10, "bridge violated: {lhs} vs {rhs}");
        }

        // orthogonal rays → state distance 2
        let s1 = ray_to_pure(&alg, 0, &Ray::new(e(2, 0)).unwrap())
            .unwrap()
            .to_state();
        let s2 = ray_to_pure(&alg, 0, &Ray::new(e(2, 1)).unwrap())
            .unwrap()
            .to_state();
        assert!((state_norm_distance(&s1, &s2).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn fs_distance_through_states() {
        let alg = CStarAlgebra::full_matrix(2);
        let p1 = ray_to_pure(&alg, 0, &Ray::new(e(2, 0)).unwrap()).unwrap();
        let p2 = ray_to_pure(&alg, 0, &Ray::new(e(2, 1)).unwrap()).unwrap();
        assert!(
            (fs_geodesic_distance(&p1, &p2).unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-12
        );
        assert!(fs_geodesic_distance(&p1, &p1).unwrap() < 1e-12);
        let alg2 = CStarAlgebra::new(vec![2, 2]).unwrap();
        let q1 = PureState::new(alg2.clone(), 0, e(2, 0)).unwrap();
        let q2 = PureState::new(alg2, 1, e(2, 0)).unwrap();
        assert!(matches!(
            fs_geodesic_distance(&q1, &q2),
            Err(ProjGeomError::DifferentSectors(0, 1))
        ));
    }
}
