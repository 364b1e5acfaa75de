//! Structural theorems about the GNS construction: the irreducibility
//! dichotomy, the kernel decomposition ker ω = 𝔑 + 𝔑*, the equivalence of
//! the three characterizations of ideal-preserving inner automorphisms,
//! and naturality of the ideal across block algebras.

use gnslab::algebra::{state_norm_distance, CStarAlgebra, PureState, State};
use gnslab::gns::{gelfand_ideal, gns_construct, span_residual, InnerAutomorphism};
use gnslab::numerics::{complete_orthonormal, singular_values, CMatrix, C64};
use gnslab::sampling;
use rand::Rng;

#[test]
fn irreducibility_dichotomy() {
    let mut rng = sampling::rng(1401);
    for n in 2..=4usize {
        let alg = CStarAlgebra::full_matrix(n);
        let pure = PureState::new(alg.clone(), 0, sampling::random_unit_vector(&mut rng, n))
            .unwrap()
            .to_state();
        let gns = gns_construct(&pure).unwrap();
        assert_eq!(gns.hilbert_dim, n);
        assert_eq!(gns.commutant_dimension().unwrap(), 1);

        // full-rank density: the GNS space is all of M_n, the commutant
        // the opposite algebra
        let mixed = State::new(alg, vec![sampling::random_density(&mut rng, n)]).unwrap();
        let gns = gns_construct(&mixed).unwrap();
        assert_eq!(gns.hilbert_dim, n * n);
        assert_eq!(gns.commutant_dimension().unwrap(), n * n);
    }
}

/// rank of the column span of the coefficient vectors
fn span_dim(alg: &CStarAlgebra, elements: &[gnslab::algebra::AlgebraElement]) -> usize {
    let d = alg.total_dim();
    let mut m = CMatrix::zeros(d, elements.len());
    for (j, e) in elements.iter().enumerate() {
        m.set_column(j, &e.coefficients());
    }
    let sv = singular_values(&m).unwrap();
    let scale = sv.first().copied().unwrap_or(0.0).max(1.0);
    sv.iter().filter(|&&x| x > 1e-10 * scale).count()
}

#[test]
fn ideal_plus_adjoint_spans_the_kernel_of_the_state() {
    let mut rng = sampling::rng(1402);
    // dim ker ω = total_dim − 1 for any state; for pure ω it must be
    // exhausted by 𝔑 + 𝔑*
    for alg in [
        CStarAlgebra::full_matrix(2),
        CStarAlgebra::full_matrix(4),
        CStarAlgebra::new(vec![2, 3]).unwrap(),
    ] {
        let block = alg.num_blocks() - 1;
        let n = alg.block_dims()[block];
        let s = PureState::new(
            alg.clone(),
            block,
            sampling::random_unit_vector(&mut rng, n),
        )
        .unwrap()
        .to_state();
        let ideal = gelfand_ideal(&s).unwrap();
        let mut family = ideal.clone();
        family.extend(ideal.iter().map(|b| b.adjoint()));
        assert_eq!(span_dim(&alg, &family), alg.total_dim() - 1);
    }
}

#[test]
fn ideal_invariance_characterizes_ray_stabilizers() {
    let mut rng = sampling::rng(1403);
    let alg = CStarAlgebra::full_matrix(3);
    let psi = sampling::random_unit_vector(&mut rng, 3);
    let state = PureState::new(alg.clone(), 0, psi.clone())
        .unwrap()
        .to_state();
    let ideal = gelfand_ideal(&state).unwrap();

    for _ in 0..20 {
        // generic unitary: moves the ray, moves the state, moves the ideal
        let u = sampling::random_unitary(&mut rng, 3);
        let alpha = InnerAutomorphism::new(alg.clone(), vec![u.clone()]).unwrap();
        let moved: f64 = ideal
            .iter()
            .map(|b| span_residual(&ideal, &alpha.apply(b).unwrap()))
            .fold(0.0, f64::max);
        let overlap = psi.dotc(&(&u * &psi)).norm();
        let pushed = alpha.pushforward(&state).unwrap();
        let dist = state_norm_distance(&pushed, &state).unwrap();
        assert!(
            moved > 1e-3,
            "random unitary unexpectedly preserves the ideal"
        );
        assert!(
            overlap < 1.0 - 1e-3,
            "random unitary unexpectedly fixes the ray"
        );
        assert!(dist > 1e-3, "random unitary unexpectedly fixes the state");

        // ray stabilizer: diagonal in any basis containing Ψ
        let frame = complete_orthonormal(std::slice::from_ref(&psi), 3);
        let mut v = CMatrix::zeros(3, 3);
        for e in &frame {
            let theta = rng.random_range(0.0..std::f64::consts::TAU);
            v += e * e.adjoint() * C64::new(theta.cos(), theta.sin());
        }
        let alpha = InnerAutomorphism::new(alg.clone(), vec![v.clone()]).unwrap();
        let kept: f64 = ideal
            .iter()
            .map(|b| span_residual(&ideal, &alpha.apply(b).unwrap()))
            .fold(0.0, f64::max);
        let overlap = psi.dotc(&(&v * &psi)).norm();
        let pushed = alpha.pushforward(&state).unwrap();
        let dist = state_norm_distance(&pushed, &state).unwrap();
        assert!(
            kept <= 1e-9,
            "stabilizer must preserve the ideal, residual {kept:.3e}"
        );
        assert!((overlap - 1.0).abs() <= 1e-10);
        assert!(dist <= 1e-10);
    }
}

#[test]
fn naturality_across_a_block_algebra() {
    let mut rng = sampling::rng(1404);
    let alg = CStarAlgebra::new(vec![2, 3]).unwrap();
    for _ in 0..10 {
        let omega =
            PureState::new(alg.clone(), 1, sampling::random_unit_vector(&mut rng, 3)).unwrap();
        let alpha = InnerAutomorphism::new(
            alg.clone(),
            vec![
                sampling::random_unitary(&mut rng, 2),
                sampling::random_unitary(&mut rng, 3),
            ],
        )
        .unwrap();
        let pushed = alpha.pushforward(&omega.to_state()).unwrap();
        let source = gelfand_ideal(&omega.to_state()).unwrap();
        let target = gelfand_ideal(&pushed).unwrap();
        assert_eq!(source.len(), 10);
        assert_eq!(target.len(), 10);
        for b in &source {
            let residual = span_residual(&target, &alpha.apply(b).unwrap());
            assert!(residual <= 1e-9, "naturality residual {residual:.3e}");
        }
    }
}
