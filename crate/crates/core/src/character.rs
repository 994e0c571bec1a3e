//! Exact irreducible characters of the symmetric group.
//!
//! Values are computed by the Murnaghan-Nakayama rule: remove a border strip
//! of length equal to the largest remaining part of the class label in every
//! legal way, weight by (-1)^(strip height - 1), and recurse. Border strips
//! are enumerated on the beta-set (first-column hook) encoding of the
//! partition, where removing a strip of length r replaces a beta number b by
//! b - r and the sign is read off from the number of beta numbers jumped
//! over. Tables are cached on disk as plain text, one file per degree, and
//! re-verified against both orthogonality relations on load.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::partition::{class_size, factorial, partitions_of, Partition};

const FORMAT_VERSION: u32 = 1;

type Memo = HashMap<(Vec<u32>, Vec<u32>), i64>;

/// Character value chi_lambda(mu) for partitions of the same degree.
///
/// Panics on degree mismatch or (for astronomically large inputs) on i64
/// overflow; all arithmetic is checked.
pub fn mn_character(lambda: &Partition, mu: &Partition) -> i64 {
    assert_eq!(
        lambda.n(),
        mu.n(),
        "mn_character requires partitions of the same degree"
    );
    let mut memo = Memo::new();
    mn_recurse(lambda.parts(), mu.parts(), &mut memo)
}

fn mn_recurse(lambda: &[u32], mu: &[u32], memo: &mut Memo) -> i64 {
    if lambda.is_empty() {
        debug_assert!(mu.is_empty());
        return 1;
    }
    let key = (lambda.to_vec(), mu.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let strip = mu[0];
    let beta = beta_set(lambda);
    let mut total: i64 = 0;
    for (i, &b) in beta.iter().enumerate() {
        if b < strip || beta.contains(&(b - strip)) {
            continue;
        }
        // Beta numbers strictly between b - strip and b give the strip
        // height minus one.
        let jumped = beta
            .iter()
            .filter(|&&x| x > b - strip && x < b)
            .count();
        let mut next = beta.clone();
        next[i] = b - strip;
        let reduced = partition_from_beta(&mut next);
        let sub = mn_recurse(&reduced, &mu[1..], memo);
        let term = if jumped % 2 == 0 { sub } else { -sub };
        total = total.checked_add(term).expect("character value overflow");
    }
    memo.insert(key, total);
    total
}

/// Beta set of a partition with k parts: lambda_i + (k - 1 - i), strictly
/// decreasing.
fn beta_set(lambda: &[u32]) -> Vec<u32> {
    let k = lambda.len() as u32;
    lambda
        .iter()
        .enumerate()
        .map(|(i, &p)| p + (k - 1 - i as u32))
        .collect()
}

fn partition_from_beta(beta: &mut [u32]) -> Vec<u32> {
    beta.sort_unstable_by(|a, b| b.cmp(a));
    let k = beta.len() as u32;
    beta.iter()
        .enumerate()
        .map(|(i, &b)| b - (k - 1 - i as u32))
        .take_while(|&p| p > 0)
        .collect()
}

/// Dimension of the irreducible representation labelled by `lambda`, by the
/// hook length formula: n! / prod(hooks). Equals mn_character(lambda, [1^n]).
pub fn dimension(lambda: &Partition) -> BigUint {
    let parts = lambda.parts();
    let conj = lambda.conjugate();
    let cols = conj.parts();
    let mut hooks = BigUint::one();
    for (i, &row) in parts.iter().enumerate() {
        for j in 0..row as usize {
            let hook = row - j as u32 + cols[j] - i as u32 - 1;
            hooks *= BigUint::from(hook);
        }
    }
    factorial(lambda.n()) / hooks
}

/// The full character table of S_n: rows are irreducible representations and
/// columns are conjugacy classes, both labelled by partitions of n in
/// reverse-lexicographic order. Immutable once built; shared read-only by
/// enumeration workers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTable {
    degree: u32,
    labels: Vec<Partition>,
    values: Vec<i64>,
    index: HashMap<Vec<u32>, usize>,
}

impl CharacterTable {
    /// Computes the table from scratch.
    pub fn compute(n: u32) -> Self {
        assert!(n >= 1, "character table requires degree >= 1");
        let labels = partitions_of(n);
        let k = labels.len();
        let mut values = vec![0i64; k * k];
        let mut memo = Memo::new();
        for (r, lambda) in labels.iter().enumerate() {
            for (c, mu) in labels.iter().enumerate() {
                values[r * k + c] = mn_recurse(lambda.parts(), mu.parts(), &mut memo);
            }
        }
        Self::assemble(n, labels, values)
    }

    fn assemble(degree: u32, labels: Vec<Partition>, values: Vec<i64>) -> Self {
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, lam)| (lam.parts().to_vec(), i))
            .collect();
        CharacterTable {
            degree,
            labels,
            values,
            index,
        }
    }

    /// Loads the table for degree `n` from `cache_dir` if a valid cached copy
    /// exists, otherwise computes it (and writes the cache when a directory
    /// is given). A corrupt or stale cache file is recomputed and overwritten
    /// with a warning; loaded tables are re-verified against both
    /// orthogonality relations before use.
    pub fn load_or_compute(n: u32, cache_dir: Option<&Path>) -> Self {
        if let Some(dir) = cache_dir {
            let path = Self::cache_path(dir, n);
            if path.exists() {
                match fs::read_to_string(&path)
                    .map_err(|e| Error::io(&path, e))
                    .and_then(|text| Self::from_text(&text))
                {
                    Ok(table) if table.degree == n => match table.verify() {
                        Ok(()) => return table,
                        Err(reason) => {
                            log::warn!(
                                "cached character table {} failed verification ({reason}); recomputing",
                                path.display()
                            );
                        }
                    },
                    Ok(table) => {
                        log::warn!(
                            "cached character table {} has degree {} (wanted {n}); recomputing",
                            path.display(),
                            table.degree
                        );
                    }
                    Err(err) => {
                        log::warn!(
                            "cached character table {} is unreadable ({err}); recomputing",
                            path.display()
                        );
                    }
                }
            }
            let table = Self::compute(n);
            if let Err(err) = table.save(dir) {
                log::warn!("could not write character table cache: {err}");
            }
            table
        } else {
            Self::compute(n)
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Row/column labels: all partitions of the degree in
    /// reverse-lexicographic order.
    pub fn labels(&self) -> &[Partition] {
        &self.labels
    }

    pub fn num_classes(&self) -> usize {
        self.labels.len()
    }

    pub fn index_of(&self, lambda: &Partition) -> Option<usize> {
        self.index.get(lambda.parts()).copied()
    }

    /// chi at (row, column) position.
    pub fn value(&self, row: usize, col: usize) -> i64 {
        self.values[row * self.labels.len() + col]
    }

    /// chi_lambda(mu) by label.
    pub fn value_of(&self, lambda: &Partition, mu: &Partition) -> i64 {
        let r = self.index_of(lambda).expect("unknown irrep label");
        let c = self.index_of(mu).expect("unknown class label");
        self.value(r, c)
    }

    /// Checks both orthogonality relations exactly:
    /// sum_mu |C_mu| chi_l(mu) chi_l'(mu) = n! delta, and
    /// sum_l chi_l(mu) chi_l(nu) = delta * n! / |C_mu|.
    pub fn verify(&self) -> std::result::Result<(), String> {
        let k = self.labels.len();
        if k != partitions_of(self.degree).len() {
            return Err(format!("expected {} classes", partitions_of(self.degree).len()));
        }
        let sizes: Vec<i128> = self
            .labels
            .iter()
            .map(|lam| {
                class_size(lam)
                    .to_i128()
                    .expect("class size exceeds i128")
            })
            .collect();
        let group_order: i128 = factorial(self.degree)
            .to_i128()
            .expect("group order exceeds i128");
        for r1 in 0..k {
            for r2 in r1..k {
                let mut sum: i128 = 0;
                for c in 0..k {
                    sum = sum
                        .checked_add(
                            sizes[c]
                                .checked_mul(i128::from(self.value(r1, c)))
                                .and_then(|t| t.checked_mul(i128::from(self.value(r2, c))))
                                .ok_or("orthogonality sum overflow")
                                .map_err(String::from)?,
                        )
                        .ok_or("orthogonality sum overflow")?;
                }
                let expected = if r1 == r2 { group_order } else { 0 };
                if sum != expected {
                    return Err(format!(
                        "row orthogonality fails for {} and {}",
                        self.labels[r1], self.labels[r2]
                    ));
                }
            }
        }
        for c1 in 0..k {
            for c2 in c1..k {
                let mut sum: i128 = 0;
                for r in 0..k {
                    sum += i128::from(self.value(r, c1)) * i128::from(self.value(r, c2));
                }
                let expected = if c1 == c2 { group_order / sizes[c1] } else { 0 };
                if sum != expected {
                    return Err(format!(
                        "column orthogonality fails for {} and {}",
                        self.labels[c1], self.labels[c2]
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn cache_path(dir: &Path, n: u32) -> PathBuf {
        dir.join(format!("chartab-d{n:02}.txt"))
    }

    /// Writes the table into `dir`, creating it if needed. Returns the path.
    pub fn save(&self, dir: &Path) -> Result<PathBuf> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let path = Self::cache_path(dir, self.degree);
        let tmp = path.with_extension("txt.tmp");
        fs::write(&tmp, self.to_text()).map_err(|e| Error::io(&tmp, e))?;
        fs::rename(&tmp, &path).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }

    /// Human-readable, diff-able text form. Rows are irreps, columns classes,
    /// labels in reverse-lexicographic order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let labels = self
            .labels
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join("|");
        writeln!(out, "belyi-chartab format-version {FORMAT_VERSION}").unwrap();
        writeln!(out, "degree {}", self.degree).unwrap();
        writeln!(out, "irreps {labels}").unwrap();
        writeln!(out, "classes {labels}").unwrap();
        writeln!(out, "matrix").unwrap();
        let k = self.labels.len();
        for r in 0..k {
            for c in 0..k {
                if c > 0 {
                    out.push(' ');
                }
                write!(out, "{}", self.value(r, c)).unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("character table: {msg}"));
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| bad("empty file"))?;
        let version: u32 = header
            .strip_prefix("belyi-chartab format-version ")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| bad("missing format-version header"))?;
        if version != FORMAT_VERSION {
            return Err(bad(&format!("unsupported format-version {version}")));
        }
        let degree: u32 = lines
            .next()
            .and_then(|l| l.strip_prefix("degree "))
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| bad("missing degree line"))?;
        let irreps = lines
            .next()
            .and_then(|l| l.strip_prefix("irreps "))
            .ok_or_else(|| bad("missing irreps line"))?;
        let classes = lines
            .next()
            .and_then(|l| l.strip_prefix("classes "))
            .ok_or_else(|| bad("missing classes line"))?;
        if irreps != classes {
            return Err(bad("irrep and class labels differ"));
        }
        let labels = irreps
            .split('|')
            .map(|s| s.parse::<Partition>())
            .collect::<Result<Vec<_>>>()?;
        if labels.iter().any(|l| l.n() != degree) {
            return Err(bad("label degree mismatch"));
        }
        if lines.next() != Some("matrix") {
            return Err(bad("missing matrix line"));
        }
        let k = labels.len();
        let mut values = Vec::with_capacity(k * k);
        for line in lines.by_ref().take(k) {
            for tok in line.split_whitespace() {
                values.push(
                    tok.parse::<i64>()
                        .map_err(|_| bad(&format!("bad matrix entry {tok:?}")))?,
                );
            }
        }
        if values.len() != k * k {
            return Err(bad("matrix has wrong shape"));
        }
        Ok(Self::assemble(degree, labels, values))
    }
}
