//! Exact Eisenstein-number arithmetic: the character-sum formula for the
//! total covering mass of a ramification scheme, plus a brute-force oracle.
//!
//! The character sum counts ALL coverings with the given cycle types,
//! disconnected ones included, each weighted by 1/|Aut|. It equals 1/|Aut|
//! of an exceptional covering only when no disconnected covering shares the
//! scheme; connectivity is resolved by the enumeration module.

use std::fmt;
use std::ops::{Add, AddAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::character::CharacterTable;
use crate::error::{Error, Result};
use crate::partition::{class_size, factorial, RamificationScheme};
use crate::perm::Permutation;

/// Budget for the brute-force oracle: full iteration over S_n.
pub const BRUTEFORCE_MAX_DEGREE: usize = 7;

/// An exact nonnegative rational mass. For any scheme, mass * n! is a
/// nonnegative integer (it counts monodromy triples).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Mass {
    value: BigRational,
}

impl Mass {
    pub fn zero() -> Self {
        Mass {
            value: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        Mass {
            value: BigRational::one(),
        }
    }

    /// The reciprocal 1/k, the contribution of one covering class with
    /// automorphism order k.
    pub fn one_over(k: u64) -> Self {
        assert!(k > 0);
        Mass {
            value: BigRational::new(BigInt::one(), BigInt::from(k)),
        }
    }

    pub fn from_ratio(numer: BigInt, denom: BigInt) -> Self {
        let value = BigRational::new(numer, denom);
        assert!(!value.is_negative(), "mass must be nonnegative");
        Mass { value }
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

impl Add for Mass {
    type Output = Mass;

    fn add(self, rhs: Mass) -> Mass {
        Mass {
            value: self.value + rhs.value,
        }
    }
}

impl AddAssign<&Mass> for Mass {
    fn add_assign(&mut self, rhs: &Mass) {
        self.value += &rhs.value;
    }
}

impl fmt::Display for Mass {
    /// Lowest terms, `"p"` for integers and `"p/q"` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.value.denom().is_one() {
            write!(f, "{}", self.value.numer())
        } else {
            write!(f, "{}/{}", self.value.numer(), self.value.denom())
        }
    }
}

impl fmt::Debug for Mass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Total mass of a scheme by the character-sum formula:
/// |C0| |C1| |Cinf| / (n!)^2 * sum over irreducibles of
/// chi(c0) chi(c1) chi(cinf) / chi(1). Exact rational arithmetic; terms with
/// a zero character value are skipped.
///
/// Panics if `table` is not the character table of the scheme's degree.
pub fn frobenius_mass(scheme: &RamificationScheme, table: &CharacterTable) -> Mass {
    assert_eq!(
        table.degree(),
        scheme.degree(),
        "character table degree must match the scheme"
    );
    let cols: Vec<usize> = scheme
        .lambdas()
        .iter()
        .map(|lam| table.index_of(lam).expect("class label missing from table"))
        .collect();
    // [1,...,1] is the last label in reverse-lexicographic order.
    let identity_col = table.num_classes() - 1;
    let mut sum = BigRational::zero();
    for row in 0..table.num_classes() {
        let x0 = table.value(row, cols[0]);
        let x1 = table.value(row, cols[1]);
        let x2 = table.value(row, cols[2]);
        if x0 == 0 || x1 == 0 || x2 == 0 {
            continue;
        }
        let prod = i128::from(x0) * i128::from(x1) * i128::from(x2);
        let dim = table.value(row, identity_col);
        sum += BigRational::new(BigInt::from(prod), BigInt::from(dim));
    }
    let mut numer = BigInt::one();
    for lam in scheme.lambdas() {
        numer *= BigInt::from(class_size(lam));
    }
    let order = BigInt::from(factorial(scheme.degree()));
    let prefactor = BigRational::new(numer, &order * &order);
    let value = prefactor * sum;
    assert!(
        !value.is_negative(),
        "mass must be nonnegative for {scheme}"
    );
    Mass { value }
}

/// Independent oracle for the character-sum formula, by exhaustive counting.
///
/// Fixes g0 as the canonical representative of lambda0, scans all of S_n for
/// partners g1 of type lambda1 whose product has type lambda_inf, and scales:
/// the total number of solution pairs over all g0 is count * |C_lambda0|, so
/// the mass (sum of 1/|Aut| over all triple orbits) is
/// count * |C_lambda0| / n!.
pub fn bruteforce_mass(scheme: &RamificationScheme) -> Result<Mass> {
    let n = scheme.degree() as usize;
    if n > BRUTEFORCE_MAX_DEGREE {
        return Err(Error::OracleBudget {
            degree: n,
            max: BRUTEFORCE_MAX_DEGREE,
        });
    }
    let g0 = Permutation::canonical_of_type(scheme.lambda0());
    let mut count: u64 = 0;
    let mut images: Vec<u8> = (0..n as u8).collect();
    scan(&mut images, n, &mut |g1| {
        if g1.cycle_type() == *scheme.lambda1()
            && g0.compose(g1).cycle_type() == *scheme.lambda_inf()
        {
            count += 1;
        }
    });
    let numer = BigInt::from(count) * BigInt::from(class_size(scheme.lambda0()));
    Ok(Mass::from_ratio(
        numer,
        BigInt::from(factorial(scheme.degree())),
    ))
}

/// Heap's algorithm over image arrays; visits every element of S_n once.
fn scan(images: &mut Vec<u8>, k: usize, visit: &mut impl FnMut(&Permutation)) {
    if k <= 1 {
        visit(&Permutation::from_images(images.clone()));
        return;
    }
    for i in 0..k {
        scan(images, k - 1, visit);
        if k % 2 == 0 {
            images.swap(i, k - 1);
        } else {
            images.swap(0, k - 1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::partitions_of;
    use num_traits::ToPrimitive;

    fn scheme(s: &str) -> RamificationScheme {
        s.parse().unwrap()
    }

    #[test]
    fn trivial_scheme_has_mass_one() {
        let s = scheme("1|1|1");
        let t = CharacterTable::compute(1);
        assert_eq!(frobenius_mass(&s, &t), Mass::one());
        assert_eq!(bruteforce_mass(&s).unwrap(), Mass::one());
    }

    #[test]
    fn degree_two_halves() {
        // Hand evaluation: class sizes 1*1*1, character sum over S_2 is
        // 1 + 1 = 2, mass = 2 / (2!)^2 = 1/2. The single orbit has |Aut| = 2.
        let s = scheme("2|2|1,1");
        let t = CharacterTable::compute(2);
        assert_eq!(frobenius_mass(&s, &t), Mass::one_over(2));
        assert_eq!(bruteforce_mass(&s).unwrap(), Mass::one_over(2));
    }

    #[test]
    fn parity_obstructed_scheme_has_mass_zero() {
        let s = scheme("2,1|1,1,1|1,1,1");
        let t = CharacterTable::compute(3);
        assert!(frobenius_mass(&s, &t).is_zero());
        assert!(bruteforce_mass(&s).unwrap().is_zero());
    }

    #[test]
    fn torus_scheme_has_mass_one() {
        let s = scheme("1,5|3,3|3,3");
        let t = CharacterTable::compute(6);
        assert_eq!(frobenius_mass(&s, &t), Mass::one());
    }

    #[test]
    fn oracle_budget_is_enforced() {
        let s = scheme("8|8|4,4");
        assert!(matches!(
            bruteforce_mass(&s),
            Err(Error::OracleBudget { degree: 8, .. })
        ));
    }

    #[test]
    fn formula_matches_oracle_through_degree_five() {
        // The full degree <= 6 cross-check lives in the acceptance suite.
        for n in 1..=5u32 {
            let table = CharacterTable::compute(n);
            let parts = partitions_of(n);
            for l0 in &parts {
                for l1 in &parts {
                    for linf in &parts {
                        let s = RamificationScheme::new(l0.clone(), l1.clone(), linf.clone())
                            .unwrap();
                        assert_eq!(
                            frobenius_mass(&s, &table),
                            bruteforce_mass(&s).unwrap(),
                            "scheme {s}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn mass_is_symmetric_in_the_three_slots() {
        for n in 1..=6u32 {
            let table = CharacterTable::compute(n);
            let parts = partitions_of(n);
            for l0 in &parts {
                for l1 in &parts {
                    for linf in &parts {
                        let m0 = frobenius_mass(
                            &RamificationScheme::new(l0.clone(), l1.clone(), linf.clone())
                                .unwrap(),
                            &table,
                        );
                        let m1 = frobenius_mass(
                            &RamificationScheme::new(l1.clone(), linf.clone(), l0.clone())
                                .unwrap(),
                            &table,
                        );
                        assert_eq!(m0, m1);
                    }
                }
            }
        }
    }

    #[test]
    fn mass_times_group_order_is_integral() {
        // Full sweep through degree 8, strided at degrees 9 and 10.
        for n in 1..=10u32 {
            let table = CharacterTable::compute(n);
            let order = BigInt::from(factorial(n));
            let parts = partitions_of(n);
            let stride = match n {
                9 => 3,
                10 => 5,
                _ => 1,
            };
            for l0 in parts.iter().step_by(stride) {
                for l1 in parts.iter().step_by(stride) {
                    for linf in parts.iter().step_by(stride) {
                        let s = RamificationScheme::new(l0.clone(), l1.clone(), linf.clone())
                            .unwrap();
                        let scaled = frobenius_mass(&s, &table).value() * &order;
                        assert!(
                            scaled.is_integer(),
                            "mass * n! must count triples, scheme {s}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn zero_iff_sign_parity_fails_small() {
        for n in 1..=5u32 {
            let table = CharacterTable::compute(n);
            let parts = partitions_of(n);
            for l0 in &parts {
                for l1 in &parts {
                    for linf in &parts {
                        if l0.sign() * l1.sign() * linf.sign() == -1 {
                            let s = RamificationScheme::new(
                                l0.clone(),
                                l1.clone(),
                                linf.clone(),
                            )
                            .unwrap();
                            assert!(frobenius_mass(&s, &table).is_zero(), "scheme {s}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn display_is_lowest_terms() {
        assert_eq!(Mass::one().to_string(), "1");
        assert_eq!(Mass::one_over(2).to_string(), "1/2");
        let m = Mass::from_ratio(BigInt::from(4), BigInt::from(8));
        assert_eq!(m.to_string(), "1/2");
        assert_eq!(Mass::zero().to_string(), "0");
    }

    #[test]
    fn masses_accumulate() {
        let mut m = Mass::zero();
        m += &Mass::one_over(2);
        m += &Mass::one_over(3);
        assert_eq!(m.value().to_f64().unwrap(), 5.0 / 6.0);
        assert_eq!(m.to_string(), "5/6");
    }
}
