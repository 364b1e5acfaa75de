//! Exhaustive and randomized checks of the exact rational layer: the
//! group axioms of Q(n), monotonicity under divisibility of supernatural
//! numbers, agreement with the union form for finite type prefixes, and
//! the colimit identity over a dense divisor table.

use gnslab::ktheory::{
    colimit_matrix_check, q_contains, q_isomorphic, sn_from_type, Exponent, SupernaturalNumber,
    UHFType,
};
use gnslab::sampling;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

fn member(rng: &mut impl Rng, primes: &[(u64, u32)]) -> BigRational {
    // a random element of Q(n): arbitrary numerator, denominator within
    // the admissible exponents
    let numer = rng.random_range(-999i64..1000);
    let mut denom = BigInt::from(1);
    for &(p, cap) in primes {
        let e = rng.random_range(0..=cap);
        denom *= BigInt::from(p).pow(e);
    }
    BigRational::new(BigInt::from(numer), denom)
}

#[test]
fn q_of_n_is_a_group() {
    let mut rng = sampling::rng(1801);
    let n = SupernaturalNumber::from_pairs(&[
        (2, Exponent::Infinity),
        (5, Exponent::Finite(2)),
        (7, Exponent::Finite(1)),
    ])
    .unwrap();
    let caps = [(2u64, 12u32), (5, 2), (7, 1)];
    assert!(q_contains(&n, &BigRational::from(BigInt::from(1))));
    for _ in 0..1000 {
        let a = member(&mut rng, &caps);
        let b = member(&mut rng, &caps);
        assert!(q_contains(&n, &a));
        assert!(q_contains(&n, &(&a - &b)), "not closed under subtraction");
    }
}

#[test]
fn divisibility_gives_monotone_groups() {
    let mut rng = sampling::rng(1802);
    let n = SupernaturalNumber::from_pairs(&[(2, Exponent::Finite(3)), (3, Exponent::Finite(1))])
        .unwrap();
    let m = SupernaturalNumber::from_pairs(&[
        (2, Exponent::Finite(5)),
        (3, Exponent::Finite(1)),
        (11, Exponent::Finite(2)),
    ])
    .unwrap();
    let caps = [(2u64, 3u32), (3, 1)];
    for _ in 0..500 {
        let q = member(&mut rng, &caps);
        assert!(q_contains(&n, &q));
        assert!(q_contains(&m, &q), "Q(n) not inside Q(m) despite n | m");
    }
    // not isomorphic as ordered groups is not claimed; only inclusion.
    // the infinity-set criterion still distinguishes both from 2^inf:
    let twoinf = SupernaturalNumber::from_pairs(&[(2, Exponent::Infinity)]).unwrap();
    assert!(!q_isomorphic(&n, &twoinf));
    assert!(q_isomorphic(&n, &m));
}

#[test]
fn union_form_is_exhaustively_exact() {
    // Q(delta) of the finite chain (2, 12, 120, 2520) must agree with the
    // union of n_j^{-1} Z for every denominator up to 10^4
    let chain = [2u64, 12, 120, 2520];
    let t = UHFType {
        type_sequence: chain.to_vec(),
        infinity_primes: vec![],
    };
    let sn = sn_from_type(&t).unwrap();
    for den in 1u64..=10_000 {
        let claimed = q_contains(&sn, &BigRational::new(BigInt::from(1), BigInt::from(den)));
        let union_form = chain.iter().any(|&nj| nj % den == 0);
        assert_eq!(claimed, union_form, "denominator {den}");
    }
}

#[test]
fn colimit_identity_on_a_divisor_table() {
    for n_i in 1u64..=60 {
        let mut n_j = n_i;
        while n_j <= 240 {
            assert!(colimit_matrix_check(n_i, n_j).unwrap());
            n_j += n_i;
        }
    }
    assert!(colimit_matrix_check(7, 12).is_err());
}
