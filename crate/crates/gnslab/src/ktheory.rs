//! Exact arithmetic of supernatural numbers, the rational groups Q(δ) they
//! generate, and the symbolic homotopy/K-theory tables for UHF algebras.
//! No floating point anywhere in this module: memberships are decided by
//! integer factorization, the colimit identities over arbitrary-precision
//! rationals, and the group tables by case analysis.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum KTheoryError {
    #[error("{value} is not prime")]
    NotPrime { value: u64 },
    #[error("type sequence entry {index} does not divide its successor")]
    BrokenDivisibilityChain { index: usize },
    #[error("type sequence must be strictly increasing positive naturals (entry {index})")]
    InvalidTypeSequence { index: usize },
    #[error("{n_i} does not divide {n_j}")]
    NotDivisible { n_i: u64, n_j: u64 },
    #[error("K_{k} is outside the table; only K_0 and K_1 are defined")]
    KOutOfRange { k: u32 },
}

/// Exponent of a prime in a supernatural number.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exponent {
    Finite(u32),
    Infinity,
}

impl Exponent {
    fn admits(self, k: u32) -> bool {
        match self {
            Exponent::Finite(e) => k <= e,
            Exponent::Infinity => true,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(e) => write!(f, "{e}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn factorize(mut n: u64) -> BTreeMap<u64, u32> {
    let mut out = BTreeMap::new();
    let mut p = 2u64;
    while p * p <= n {
        while n.is_multiple_of(p) {
            *out.entry(p).or_insert(0) += 1;
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        *out.entry(n).or_insert(0) += 1;
    }
    out
}

/// A formal prime factorization ∏ p^{e_p} with e_p ∈ ℕ ∪ {∞}; primes with
/// exponent zero are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupernaturalNumber {
    exponents: BTreeMap<u64, Exponent>,
}

impl SupernaturalNumber {
    /// The supernatural number 1 (empty factorization).
    pub fn one() -> Self {
        SupernaturalNumber {
            exponents: BTreeMap::new(),
        }
    }

    pub fn from_pairs(pairs: &[(u64, Exponent)]) -> Result<Self, KTheoryError> {
        let mut exponents = BTreeMap::new();
        for &(p, e) in pairs {
            if !is_prime(p) {
                return Err(KTheoryError::NotPrime { value: p });
            }
            if e != Exponent::Finite(0) {
                exponents.insert(p, e);
            }
        }
        Ok(SupernaturalNumber { exponents })
    }

    pub fn exponent(&self, prime: u64) -> Exponent {
        self.exponents
            .get(&prime)
            .copied()
            .unwrap_or(Exponent::Finite(0))
    }

    pub fn exponents(&self) -> &BTreeMap<u64, Exponent> {
        &self.exponents
    }

    pub fn infinite_primes(&self) -> BTreeSet<u64> {
        self.exponents
            .iter()
            .filter(|(_, e)| matches!(e, Exponent::Infinity))
            .map(|(&p, _)| p)
            .collect()
    }
}

impl fmt::Display for SupernaturalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .exponents
            .iter()
            .map(|(p, e)| format!("{p}^{e}"))
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// The defining data of a UHF algebra: a divisibility chain n₀ | n₁ | …
/// plus explicit markers for the primes whose exponents are claimed to be
/// unbounded in the full (infinite) sequence. A finite prefix can never
/// prove unboundedness, so the ∞ claims must be spelled out.
#[derive(Clone, Debug)]
pub struct UHFType {
    pub type_sequence: Vec<u64>,
    pub infinity_primes: Vec<u64>,
}

/// Glimm's supernatural number of the type: per prime, the sup of the
/// exponents along the sequence, overridden to ∞ where marked.
pub fn sn_from_type(t: &UHFType) -> Result<SupernaturalNumber, KTheoryError> {
    if t.type_sequence.is_empty() || t.type_sequence[0] < 1 {
        return Err(KTheoryError::InvalidTypeSequence { index: 0 });
    }
    for i in 1..t.type_sequence.len() {
        if t.type_sequence[i] <= t.type_sequence[i - 1] {
            return Err(KTheoryError::InvalidTypeSequence { index: i });
        }
        if !t.type_sequence[i].is_multiple_of(t.type_sequence[i - 1]) {
            return Err(KTheoryError::BrokenDivisibilityChain { index: i - 1 });
        }
    }
    let mut exponents: BTreeMap<u64, u32> = BTreeMap::new();
    for &n in &t.type_sequence {
        for (p, e) in factorize(n) {
            let entry = exponents.entry(p).or_insert(0);
            *entry = (*entry).max(e);
        }
    }
    let mut pairs: Vec<(u64, Exponent)> = exponents
        .into_iter()
        .map(|(p, e)| (p, Exponent::Finite(e)))
        .collect();
    for &p in &t.infinity_primes {
        if !is_prime(p) {
            return Err(KTheoryError::NotPrime { value: p });
        }
        match pairs.iter_mut().find(|(q, _)| *q == p) {
            Some(pair) => pair.1 = Exponent::Infinity,
            None => pairs.push((p, Exponent::Infinity)),
        }
    }
    SupernaturalNumber::from_pairs(&pairs)
}

/// Membership in Q(n) = { p/q ∈ ℚ : q divides n }: after reduction, every
/// prime power of the denominator must be admitted by n's exponents.
pub fn q_contains(n: &SupernaturalNumber, q: &BigRational) -> bool {
    let mut denom = q.denom().abs();
    if denom.is_one() {
        return true;
    }
    for (&p, &e) in &n.exponents {
        let big_p = BigInt::from(p);
        let mut k = 0u32;
        while (&denom % &big_p).is_zero() {
            denom /= &big_p;
            k += 1;
        }
        if !e.admits(k) {
            return false;
        }
        if denom.is_one() {
            return true;
        }
    }
    denom.is_one()
}

/// Q(n) ≅ Q(m) iff n and m agree up to finite multipliers, i.e. their sets
/// of ∞-primes coincide (finite exponents are absorbed by n·n′ = m·m′).
pub fn q_isomorphic(n: &SupernaturalNumber, m: &SupernaturalNumber) -> bool {
    n.infinite_primes() == m.infinite_primes()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum GroupAtom {
    Integers,
    QDelta,
}

/// A finite product over {ℤ, Q(δ)} in normalized form: factors sorted,
/// the empty product standing for the trivial group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupExpr {
    factors: Vec<GroupAtom>,
}

impl GroupExpr {
    pub fn trivial() -> Self {
        GroupExpr {
            factors: Vec::new(),
        }
    }

    pub fn integers() -> Self {
        GroupExpr {
            factors: vec![GroupAtom::Integers],
        }
    }

    pub fn q_delta() -> Self {
        GroupExpr {
            factors: vec![GroupAtom::QDelta],
        }
    }

    pub fn product(parts: &[GroupExpr]) -> Self {
        let mut factors: Vec<GroupAtom> = parts.iter().flat_map(|p| p.factors.clone()).collect();
        factors.sort();
        GroupExpr { factors }
    }

    pub fn factors(&self) -> &[GroupAtom] {
        &self.factors
    }
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<&str> = self
            .factors
            .iter()
            .map(|a| match a {
                GroupAtom::Integers => "Z",
                GroupAtom::QDelta => "Q(delta)",
            })
            .collect();
        write!(f, "{}", parts.join(" x "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnitaryFamily {
    /// The unitary group U(𝔄) of the UHF algebra.
    Full,
    /// The ω-stabilized family U_ω.
    Omega,
}

/// The homotopy-group table. Both families are connected; odd groups are
/// Q(δ), with an extra ℤ factor for π₁ of the stabilized family; even
/// groups vanish.
pub fn homotopy_group(k: u32, which: UnitaryFamily, _delta: &SupernaturalNumber) -> GroupExpr {
    match (which, k % 2, k) {
        (_, 0, _) => GroupExpr::trivial(),
        (UnitaryFamily::Omega, _, 1) => {
            GroupExpr::product(&[GroupExpr::integers(), GroupExpr::q_delta()])
        }
        _ => GroupExpr::q_delta(),
    }
}

/// K₀ = Q(δ) (the dimension-range group), K₁ = 0.
pub fn k_theory(k: u32, _delta: &SupernaturalNumber) -> Result<GroupExpr, KTheoryError> {
    match k {
        0 => Ok(GroupExpr::q_delta()),
        1 => Ok(GroupExpr::trivial()),
        other => Err(KTheoryError::KOutOfRange { k: other }),
    }
}

fn rational(num: i64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

type Mat2 = [[BigRational; 2]; 2];

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [
        [BigRational::zero(), BigRational::zero()],
        [BigRational::zero(), BigRational::zero()],
    ];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
        }
    }
    out
}

/// The exact 2×2 rational identity behind the colimit computation of the
/// stabilized π₁: with n_ij = n_j/n_i,
/// (1 0; 1+1/n_j 1/n_j)·(1 0; n_ij−1 n_ij) = (1 0; 1+1/n_i 1/n_i).
pub fn colimit_matrix_check(n_i: u64, n_j: u64) -> Result<bool, KTheoryError> {
    if n_i == 0 || n_j == 0 || !n_j.is_multiple_of(n_i) {
        return Err(KTheoryError::NotDivisible { n_i, n_j });
    }
    let n_ij = n_j / n_i;
    let one = BigRational::one;
    let zero = BigRational::zero;
    let g_j: Mat2 = [
        [one(), zero()],
        [one() + rational(1, n_j), rational(1, n_j)],
    ];
    let bonding: Mat2 = [
        [one(), zero()],
        [rational(n_ij as i64 - 1, 1), rational(n_ij as i64, 1)],
    ];
    let g_i: Mat2 = [
        [one(), zero()],
        [one() + rational(1, n_i), rational(1, n_i)],
    ];
    Ok(mat_mul(&g_j, &bonding) == g_i)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_inf() -> SupernaturalNumber {
        SupernaturalNumber::from_pairs(&[(2, Exponent::Infinity)]).unwrap()
    }

    #[test]
    fn sn_from_type_examples() {
        // (2,4,8) with the 2 → ∞ marker
        let t = UHFType {
            type_sequence: vec![2, 4, 8],
            infinity_primes: vec![2],
        };
        assert_eq!(sn_from_type(&t).unwrap(), two_inf());

        // finite prefix (6, 12, 36) → 2²·3²
        let t = UHFType {
            type_sequence: vec![6, 12, 36],
            infinity_primes: vec![],
        };
        let sn = sn_from_type(&t).unwrap();
        assert_eq!(sn.exponent(2), Exponent::Finite(2));
        assert_eq!(sn.exponent(3), Exponent::Finite(2));
        assert_eq!(sn.exponent(5), Exponent::Finite(0));
        assert_eq!(sn.to_string(), "2^2*3^2");

        // (1) → supernatural 1
        let t = UHFType {
            type_sequence: vec![1],
            infinity_primes: vec![],
        };
        assert_eq!(sn_from_type(&t).unwrap(), SupernaturalNumber::one());

        // broken chain
        let t = UHFType {
            type_sequence: vec![2, 3],
            infinity_primes: vec![],
        };
        assert!(matches!(
            sn_from_type(&t),
            Err(KTheoryError::BrokenDivisibilityChain { .. })
        ));
    }

    #[test]
    fn membership_examples() {
        let n = two_inf();
        assert!(q_contains(&n, &rational(3, 8)));
        assert!(!q_contains(&n, &rational(1, 3)));
        assert!(q_contains(&n, &rational(7, 1)));
        assert!(q_contains(&n, &rational(-5, 64)));

        let m =
            SupernaturalNumber::from_pairs(&[(2, Exponent::Infinity), (3, Exponent::Finite(1))])
                .unwrap();
        assert!(q_contains(&m, &rational(5, 6)));
        assert!(!q_contains(&m, &rational(1, 9)));
    }

    #[test]
    fn membership_matches_union_form() {
        // Q(2^∞) = ⋃ 2^{-j}ℤ: membership iff the denominator divides some 2^j
        let n = two_inf();
        for den in 1u64..200 {
            let member = q_contains(&n, &rational(1, den));
            let union_form = den.is_power_of_two();
            assert_eq!(member, union_form, "denominator {den}");
        }
    }

    #[test]
    fn q_group_closure() {
        // closed under subtraction, contains 1
        let n =
            SupernaturalNumber::from_pairs(&[(2, Exponent::Infinity), (5, Exponent::Finite(2))])
                .unwrap();
        assert!(q_contains(&n, &BigRational::one()));
        let members = [
            rational(3, 8),
            rational(-1, 50),
            rational(7, 2),
            rational(11, 400),
            rational(1, 1),
        ];
        for a in &members {
            for b in &members {
                assert!(q_contains(&n, &(a - b)));
            }
        }
    }

    #[test]
    fn isomorphism_criterion() {
        let a = two_inf();
        let b =
            SupernaturalNumber::from_pairs(&[(2, Exponent::Infinity), (3, Exponent::Finite(2))])
                .unwrap();
        let c = SupernaturalNumber::from_pairs(&[(3, Exponent::Infinity)]).unwrap();
        assert!(q_isomorphic(&a, &b));
        assert!(!q_isomorphic(&a, &c));
        assert!(q_isomorphic(&a, &a));
    }

    #[test]
    fn homotopy_tables() {
        let d = two_inf();
        assert_eq!(homotopy_group(0, UnitaryFamily::Full, &d).to_string(), "0");
        assert_eq!(
            homotopy_group(1, UnitaryFamily::Full, &d).to_string(),
            "Q(delta)"
        );
        assert_eq!(homotopy_group(2, UnitaryFamily::Full, &d).to_string(), "0");
        assert_eq!(
            homotopy_group(3, UnitaryFamily::Full, &d).to_string(),
            "Q(delta)"
        );
        assert_eq!(homotopy_group(0, UnitaryFamily::Omega, &d).to_string(), "0");
        assert_eq!(
            homotopy_group(1, UnitaryFamily::Omega, &d).to_string(),
            "Z x Q(delta)"
        );
        assert_eq!(homotopy_group(2, UnitaryFamily::Omega, &d).to_string(), "0");
        assert_eq!(
            homotopy_group(5, UnitaryFamily::Omega, &d).to_string(),
            "Q(delta)"
        );
    }

    #[test]
    fn k_theory_table() {
        let d = two_inf();
        assert_eq!(k_theory(0, &d).unwrap(), GroupExpr::q_delta());
        assert_eq!(k_theory(1, &d).unwrap(), GroupExpr::trivial());
        assert_eq!(k_theory(0, &d).unwrap().to_string(), "Q(delta)");
        assert_eq!(k_theory(1, &d).unwrap().to_string(), "0");
        assert!(matches!(
            k_theory(2, &d),
            Err(KTheoryError::KOutOfRange { k: 2 })
        ));
    }

    #[test]
    fn colimit_identities() {
        assert!(colimit_matrix_check(2, 8).unwrap());
        assert!(colimit_matrix_check(3, 12).unwrap());
        assert!(colimit_matrix_check(5, 5).unwrap());
        assert!(matches!(
            colimit_matrix_check(3, 8),
            Err(KTheoryError::NotDivisible { .. })
        ));
        for i in 0..=10u32 {
            for j in i..=10u32 {
                assert!(colimit_matrix_check(1 << i, 1 << j).unwrap());
            }
        }
    }
}
