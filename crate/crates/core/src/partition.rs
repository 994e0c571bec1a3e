//! Integer partitions as cycle types, conjugacy-class sizes, and
//! ramification schemes with their Riemann-Hurwitz genus.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// A partition of a positive integer into weakly decreasing positive parts.
///
/// Partitions double as conjugacy-class labels of the symmetric group: the
/// parts are the cycle lengths, fixed points included as parts of size 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Builds a partition from its parts. Input order is irrelevant; parts
    /// are normalized to weakly decreasing.
    ///
    /// Panics if `parts` is empty or contains a zero.
    pub fn new(mut parts: Vec<u32>) -> Self {
        assert!(!parts.is_empty(), "partition must have at least one part");
        assert!(parts.iter().all(|&p| p > 0), "partition parts must be >= 1");
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// The integer being partitioned (the degree of the class).
    pub fn n(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    /// Multiplicity of each distinct part, as (part, multiplicity) pairs in
    /// decreasing part order.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// The conjugate (transposed Young diagram) partition.
    pub fn conjugate(&self) -> Partition {
        let cols = self.parts[0] as usize;
        let mut parts = vec![0u32; cols];
        for &p in &self.parts {
            for slot in parts.iter_mut().take(p as usize) {
                *slot += 1;
            }
        }
        Partition { parts }
    }

    /// Sign of any permutation with this cycle type: (-1)^(n - #parts).
    pub fn sign(&self) -> i64 {
        if (self.n() as usize - self.num_parts()) % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses the text form `"6,1,1"`. Parts may appear in any order.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = Vec::new();
        for tok in s.split(',') {
            let tok = tok.trim();
            let p: u32 = tok
                .parse()
                .map_err(|_| Error::Parse(format!("bad partition part {tok:?} in {s:?}")))?;
            if p == 0 {
                return Err(Error::Parse(format!("partition part must be >= 1 in {s:?}")));
            }
            parts.push(p);
        }
        if parts.is_empty() {
            return Err(Error::Parse("empty partition".into()));
        }
        Ok(Partition::new(parts))
    }
}

/// All partitions of `n` in reverse-lexicographic order, `[n]` first and
/// `[1,...,1]` last. Deterministic.
///
/// Panics if `n == 0`.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    assert!(n >= 1, "partitions_of requires n >= 1");
    let mut out = Vec::new();
    let mut current = Vec::new();
    descend(n, n, &mut current, &mut out);
    out
}

fn descend(remaining: u32, max_part: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition {
            parts: current.clone(),
        });
        return;
    }
    let top = remaining.min(max_part);
    for part in (1..=top).rev() {
        current.push(part);
        descend(remaining - part, part, current, out);
        current.pop();
    }
}

pub(crate) fn factorial(n: u32) -> BigUint {
    let mut f = BigUint::one();
    for k in 2..=u64::from(n) {
        f *= k;
    }
    f
}

/// Order of the centralizer in S_n of any permutation with cycle type
/// `lambda`: the product of i^(m_i) * m_i! over distinct parts i with
/// multiplicity m_i.
pub fn centralizer_order(lambda: &Partition) -> BigUint {
    let mut z = BigUint::one();
    for (part, mult) in lambda.multiplicities() {
        z *= BigUint::from(part).pow(mult);
        z *= factorial(mult);
    }
    z
}

/// Size of the conjugacy class of S_n labelled by `lambda`:
/// n! / (product of i^(m_i) * m_i!). Exact.
pub fn class_size(lambda: &Partition) -> BigUint {
    factorial(lambda.n()) / centralizer_order(lambda)
}

/// An ordered triple of same-degree partitions: the cycle types of the
/// monodromy permutations over 0, 1 and infinity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RamificationScheme {
    lambda0: Partition,
    lambda1: Partition,
    lambda_inf: Partition,
}

impl RamificationScheme {
    pub fn new(lambda0: Partition, lambda1: Partition, lambda_inf: Partition) -> Result<Self> {
        let n = lambda0.n();
        for lam in [&lambda1, &lambda_inf] {
            if lam.n() != n {
                return Err(Error::DegreeMismatch {
                    left: n as usize,
                    right: lam.n() as usize,
                });
            }
        }
        Ok(RamificationScheme {
            lambda0,
            lambda1,
            lambda_inf,
        })
    }

    pub fn degree(&self) -> u32 {
        self.lambda0.n()
    }

    pub fn lambda0(&self) -> &Partition {
        &self.lambda0
    }

    pub fn lambda1(&self) -> &Partition {
        &self.lambda1
    }

    pub fn lambda_inf(&self) -> &Partition {
        &self.lambda_inf
    }

    pub fn lambdas(&self) -> [&Partition; 3] {
        [&self.lambda0, &self.lambda1, &self.lambda_inf]
    }

    /// Riemann-Hurwitz genus for a covering branched over three points:
    /// g = (n - c0 - c1 - c_inf + 2) / 2 with c_i the number of parts of
    /// lambda_i. Returns `None` when the scheme is impossible, either by the
    /// parity obstruction (odd numerator, equivalently the permutation-sign
    /// product is -1) or because g would be negative.
    pub fn genus(&self) -> Option<u32> {
        let n = i64::from(self.degree());
        let c: i64 = self
            .lambdas()
            .iter()
            .map(|lam| lam.num_parts() as i64)
            .sum();
        let num = n - c + 2;
        if num % 2 != 0 || num < 0 {
            None
        } else {
            Some((num / 2) as u32)
        }
    }
}

impl fmt::Display for RamificationScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}|{}", self.lambda0, self.lambda1, self.lambda_inf)
    }
}

impl fmt::Debug for RamificationScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for RamificationScheme {
    type Err = Error;

    /// Parses the text form `"6,2|6,1,1|4,2,2"` (pipe-separated partitions).
    fn from_str(s: &str) -> Result<Self> {
        let lams: Vec<&str> = s.split('|').collect();
        if lams.len() != 3 {
            return Err(Error::Parse(format!(
                "scheme must have three pipe-separated partitions, got {s:?}"
            )));
        }
        RamificationScheme::new(lams[0].parse()?, lams[1].parse()?, lams[2].parse()?)
    }
}

/// All ordered triples of partitions of `n` whose Riemann-Hurwitz genus is
/// exactly `genus`, in reverse-lexicographic order on each slot with
/// `lambda0` outermost. `[a][b][c]` and `[b][a][c]` are distinct schemes.
pub fn schemes_of_genus(n: u32, genus: u32) -> Vec<RamificationScheme> {
    let partitions = partitions_of(n);
    let mut out = Vec::new();
    for l0 in &partitions {
        for l1 in &partitions {
            for linf in &partitions {
                let scheme = RamificationScheme {
                    lambda0: l0.clone(),
                    lambda1: l1.clone(),
                    lambda_inf: linf.clone(),
                };
                if scheme.genus() == Some(genus) {
                    out.push(scheme);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn partitions_of_one() {
        assert_eq!(partitions_of(1), vec![p(&[1])]);
    }

    #[test]
    fn partitions_of_four_in_revlex_order() {
        let expected = vec![p(&[4]), p(&[3, 1]), p(&[2, 2]), p(&[2, 1, 1]), p(&[1, 1, 1, 1])];
        assert_eq!(partitions_of(4), expected);
    }

    #[test]
    fn partitions_of_six_contains_census_cycle_types() {
        let all = partitions_of(6);
        assert!(all.contains(&p(&[3, 3])));
        assert!(all.contains(&p(&[5, 1])));
    }

    #[test]
    #[should_panic]
    fn partitions_of_zero_rejected() {
        partitions_of(0);
    }

    #[test]
    fn class_size_identity_is_one() {
        assert_eq!(class_size(&p(&[1, 1, 1, 1])), BigUint::from(1u32));
    }

    #[test]
    fn class_size_transpositions_in_s3() {
        // Oracle: the three transpositions of S_3, counted by enumeration in
        // the brute-force suite; frozen here.
        assert_eq!(class_size(&p(&[2, 1])), BigUint::from(3u32));
    }

    #[test]
    fn class_size_full_cycles() {
        // (n-1)! full cycles in S_n.
        for n in 1..=6u32 {
            assert_eq!(class_size(&Partition::new(vec![n])), factorial(n - 1));
        }
    }

    #[test]
    fn class_sizes_sum_to_group_order() {
        for n in 1..=9u32 {
            let total: BigUint = partitions_of(n).iter().map(class_size).sum();
            assert_eq!(total, factorial(n), "degree {n}");
        }
    }

    #[test]
    fn genus_of_elliptic_example() {
        let s: RamificationScheme = "6,2|6,1,1|4,2,2".parse().unwrap();
        assert_eq!(s.genus(), Some(1));
    }

    #[test]
    fn genus_of_rational_example() {
        let s: RamificationScheme = "3,1|2,2|3,1".parse().unwrap();
        assert_eq!(s.genus(), Some(0));
    }

    #[test]
    fn genus_of_trivial_covering() {
        let s: RamificationScheme = "1|1|1".parse().unwrap();
        assert_eq!(s.genus(), Some(0));
    }

    #[test]
    fn genus_parity_obstruction() {
        let s: RamificationScheme = "2,1|1,1,1|1,1,1".parse().unwrap();
        assert_eq!(s.genus(), None);
    }

    #[test]
    fn genus_negative_is_impossible() {
        let s: RamificationScheme = "1,1|1,1|1,1".parse().unwrap();
        assert_eq!(s.genus(), None);
    }

    #[test]
    fn genus_matches_sign_parity() {
        // Integer genus (or a negative even numerator) iff the sign product
        // is +1; None with odd numerator iff the sign product is -1.
        for n in 1..=10u32 {
            let partitions = partitions_of(n);
            for l0 in &partitions {
                for l1 in &partitions {
                    for linf in &partitions {
                        let s = RamificationScheme::new(l0.clone(), l1.clone(), linf.clone())
                            .unwrap();
                        let sign_ok = l0.sign() * l1.sign() * linf.sign() == 1;
                        let c: i64 = s.lambdas().iter().map(|l| l.num_parts() as i64).sum();
                        let parity_ok = (i64::from(n) - c + 2) % 2 == 0;
                        assert_eq!(sign_ok, parity_ok, "scheme {s}");
                        if s.genus().is_some() {
                            assert!(sign_ok);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn schemes_of_genus_trivial_degree() {
        let schemes = schemes_of_genus(1, 0);
        assert_eq!(schemes.len(), 1);
        assert_eq!(schemes[0].to_string(), "1|1|1");
    }

    #[test]
    fn schemes_of_genus_six_contains_known_exceptional_schemes() {
        let schemes = schemes_of_genus(6, 1);
        let e64: RamificationScheme = "1,5|3,3|3,3".parse().unwrap();
        let e61: RamificationScheme = "6|3,3|2,2,2".parse().unwrap();
        assert!(schemes.contains(&e64));
        assert!(schemes.contains(&e61));
    }

    #[test]
    fn genus_one_schemes_have_n_parts_total() {
        for n in 1..=7u32 {
            for s in schemes_of_genus(n, 1) {
                let c: usize = s.lambdas().iter().map(|l| l.num_parts()).sum();
                assert_eq!(c, n as usize);
            }
        }
    }

    #[test]
    fn partition_text_roundtrip_normalizes() {
        let a: Partition = "1,5".parse().unwrap();
        assert_eq!(a, p(&[5, 1]));
        assert_eq!(a.to_string(), "5,1");
    }

    #[test]
    fn conjugate_partition() {
        assert_eq!(p(&[3, 1]).conjugate(), p(&[2, 1, 1]));
        assert_eq!(p(&[2, 2]).conjugate(), p(&[2, 2]));
        for lam in partitions_of(7) {
            assert_eq!(lam.conjugate().conjugate(), lam);
        }
    }

    #[test]
    fn scheme_rejects_mixed_degrees() {
        assert!("2,1|1,1|1,1,1".parse::<RamificationScheme>().is_err());
    }
}
