use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Canonical subset of qudit positions selecting one side of a bipartition.
///
/// Holds `1 <= |subset| <= m/2`; at `|subset| == m/2` the subset must contain
/// position 0, so each bipartition has exactly one representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PartitionSpec {
    m: usize,
    subset: Vec<usize>,
}

impl PartitionSpec {
    pub fn new(m: usize, subset: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut subset: Vec<usize> = subset.into_iter().collect();
        subset.sort_unstable();
        if subset.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::domain(format!("duplicate position in {subset:?}")));
        }
        if let Some(&bad) = subset.iter().find(|&&p| p >= m) {
            return Err(Error::domain(format!(
                "position {bad} out of range for m = {m}"
            )));
        }
        let k = subset.len();
        if k == 0 || 2 * k > m {
            return Err(Error::domain(format!(
                "subset size {k} outside 1..={} for m = {m}",
                m / 2
            )));
        }
        if 2 * k == m && subset[0] != 0 {
            return Err(Error::domain(format!(
                "half-size subset {subset:?} is not canonical (must contain position 0)"
            )));
        }
        Ok(Self { m, subset })
    }

    /// Canonical representative of the bipartition `{subset, complement}`.
    pub fn canonical(m: usize, subset: &[usize]) -> Result<Self> {
        let complement = complement(m, subset);
        let pick = match subset.len().cmp(&complement.len()) {
            std::cmp::Ordering::Less => subset.to_vec(),
            std::cmp::Ordering::Greater => complement,
            std::cmp::Ordering::Equal if subset.contains(&0) => subset.to_vec(),
            std::cmp::Ordering::Equal => complement,
        };
        Self::new(m, pick)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn complement(&self) -> Vec<usize> {
        complement(self.m, &self.subset)
    }
}

impl std::fmt::Display for PartitionSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{{}}}", self.subset.iter().join(","))
    }
}

fn complement(m: usize, subset: &[usize]) -> Vec<usize> {
    (0..m).filter(|p| !subset.contains(p)).collect()
}

/// Every bipartition of `m` qudits once, by increasing subset size and then
/// lexicographically.
pub fn enumerate_bipartitions(m: usize) -> Result<Vec<PartitionSpec>> {
    if m < 2 {
        return Err(Error::domain(format!("no bipartition of m = {m} qudits")));
    }
    let mut out = Vec::new();
    for size in 1..=m / 2 {
        for subset in (0..m).combinations(size) {
            if 2 * size == m && subset[0] != 0 {
                continue;
            }
            out.push(PartitionSpec { m, subset });
        }
    }
    Ok(out)
}
