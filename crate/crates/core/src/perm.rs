//! Exact permutation arithmetic on {1..n}.
//!
//! Composition is left-to-right throughout the crate: `p.compose(&q)` applies
//! `p` first, then `q`. This is the convention under which a monodromy triple
//! (g0, g1, g_inf) multiplies to the identity in slot order. Points are
//! 1-based in all text I/O and accessors; storage is 0-based.

use std::fmt;

use crate::error::{Error, Result};
use crate::partition::Partition;

/// A bijection of {1..n}, stored as the 0-based image array.
///
/// Values are immutable after construction and safe to share across threads.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    /// The identity on `n` points.
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1 && n <= 255, "degree must be in 1..=255");
        Permutation {
            images: (0..n as u8).collect(),
        }
    }

    /// Builds a permutation from its 0-based image array.
    ///
    /// Panics unless `images` is a bijection of `0..images.len()`.
    pub fn from_images(images: Vec<u8>) -> Self {
        let n = images.len();
        assert!(n >= 1 && n <= 255, "degree must be in 1..=255");
        let mut seen = vec![false; n];
        for &v in &images {
            assert!((v as usize) < n && !seen[v as usize], "images must be a bijection of 0..n");
            seen[v as usize] = true;
        }
        Permutation { images }
    }

    /// Builds a permutation of `1..=degree` from disjoint cycles with 1-based
    /// labels. Fixed points may be omitted.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        if degree < 1 || degree > 255 {
            return Err(Error::Parse(format!("degree {degree} out of range 1..=255")));
        }
        let mut images: Vec<u8> = (0..degree as u8).collect();
        let mut seen = vec![false; degree];
        for cycle in cycles {
            for (i, &point) in cycle.iter().enumerate() {
                if point < 1 || point > degree {
                    return Err(Error::Parse(format!(
                        "point {point} out of range 1..={degree}"
                    )));
                }
                if seen[point - 1] {
                    return Err(Error::Parse(format!("point {point} appears twice")));
                }
                seen[point - 1] = true;
                let next = cycle[(i + 1) % cycle.len()];
                images[point - 1] = (next - 1) as u8;
            }
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of a 1-based point, 1-based.
    pub fn image_of(&self, point: usize) -> usize {
        self.images[point - 1] as usize + 1
    }

    pub(crate) fn images(&self) -> &[u8] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    /// Left-to-right product: apply `self` first, then `other`.
    ///
    /// Panics on degree mismatch.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(
            self.degree(),
            other.degree(),
            "compose requires equal degrees"
        );
        let images = self
            .images
            .iter()
            .map(|&v| other.images[v as usize])
            .collect();
        Permutation { images }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u8; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v as usize] = i as u8;
        }
        Permutation { images }
    }

    /// Conjugate of `self` by `c` under the left-to-right convention:
    /// c^-1 * self * c. Preserves cycle type.
    ///
    /// Panics on degree mismatch.
    pub fn conjugate(&self, c: &Permutation) -> Permutation {
        assert_eq!(self.degree(), c.degree(), "conjugate requires equal degrees");
        let mut images = vec![0u8; self.degree()];
        for (i, &pi) in self.images.iter().enumerate() {
            images[c.images[i] as usize] = c.images[pi as usize];
        }
        Permutation { images }
    }

    /// Cycle decomposition with 1-based labels, fixed points included.
    /// Cycles are ordered by smallest element and start at it.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.images[x] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Multiset of cycle lengths as a weakly decreasing partition of the
    /// degree, fixed points counted as parts of size 1.
    pub fn cycle_type(&self) -> Partition {
        let lengths: Vec<u32> = self.cycles().iter().map(|c| c.len() as u32).collect();
        Partition::new(lengths)
    }

    /// Deterministic representative of the conjugacy class `lambda`: cycles
    /// in weakly decreasing length order filled with consecutive integers
    /// starting at 1, e.g. [3,2] -> (1,2,3)(4,5).
    pub fn canonical_of_type(lambda: &Partition) -> Permutation {
        let n = lambda.n() as usize;
        let mut images = vec![0u8; n];
        let mut next = 0u8;
        for &part in lambda.parts() {
            let first = next;
            for _ in 0..part - 1 {
                images[next as usize] = next + 1;
                next += 1;
            }
            images[next as usize] = first;
            next += 1;
        }
        Permutation { images }
    }

    /// A generating set for the centralizer of `self` in the symmetric
    /// group: one rotation per cycle and one swap per adjacent pair of
    /// same-length cycles. The generated group has order
    /// prod_i i^(m_i) * m_i! with m_i the multiplicity of part i.
    pub fn centralizer_generators(&self) -> Vec<Permutation> {
        let n = self.degree();
        let mut cycles = self.cycles();
        // Group same-length cycles together; order is deterministic.
        cycles.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        let mut gens = Vec::new();
        for cycle in &cycles {
            if cycle.len() < 2 {
                continue;
            }
            let mut images: Vec<u8> = (0..n as u8).collect();
            for (i, &point) in cycle.iter().enumerate() {
                images[point - 1] = (cycle[(i + 1) % cycle.len()] - 1) as u8;
            }
            gens.push(Permutation { images });
        }
        for pair in cycles.windows(2) {
            if pair[0].len() != pair[1].len() {
                continue;
            }
            let mut images: Vec<u8> = (0..n as u8).collect();
            for (&a, &b) in pair[0].iter().zip(pair[1].iter()) {
                images[a - 1] = (b - 1) as u8;
                images[b - 1] = (a - 1) as u8;
            }
            gens.push(Permutation { images });
        }
        gens
    }

    /// Parses cycle notation, e.g. `"(4,2,1)(3,5,6)"`. The degree is carried
    /// separately because fixed points may be omitted; `""` and `"()"` both
    /// denote the identity.
    pub fn parse(s: &str, degree: usize) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let Some(inner) = rest.strip_prefix('(') else {
                return Err(Error::Parse(format!("expected '(' in {s:?}")));
            };
            let Some(end) = inner.find(')') else {
                return Err(Error::Parse(format!("unbalanced parentheses in {s:?}")));
            };
            let body = &inner[..end];
            if !body.is_empty() {
                let cycle = body
                    .split(',')
                    .map(|tok| {
                        tok.parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad point {tok:?} in {s:?}")))
                    })
                    .collect::<Result<Vec<usize>>>()?;
                cycles.push(cycle);
            }
            rest = &inner[end + 1..];
        }
        Permutation::from_cycles(degree, &cycles)
    }

    /// Deterministic cycle notation: cycles sorted by smallest element, each
    /// starting at its smallest element, fixed points omitted. The identity
    /// prints as `"()"`.
    pub fn to_cycle_string(&self) -> String {
        let mut out = String::new();
        for cycle in self.cycles() {
            if cycle.len() < 2 {
                continue;
            }
            out.push('(');
            for (i, point) in cycle.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&point.to_string());
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} /{}", self.to_cycle_string(), self.degree())
    }
}

/// True iff the group generated by `gens` acts transitively on {1..n},
/// decided by orbit closure from point 1. No group enumeration.
pub fn is_transitive(gens: &[Permutation], n: usize) -> bool {
    assert!(gens.iter().all(|g| g.degree() == n));
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g.images[x] as usize;
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count == n
}
