use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A partition of `{0..n-1}` into nonempty disjoint clusters.
///
/// Always held in canonical form: clusters are sorted by their smallest
/// member, members ascending, so two partitions are equal iff they group the
/// same elements. `labels[i]` is the canonical cluster id of element `i`,
/// which makes `labels` a restricted growth string.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    labels: Vec<usize>,
    clusters: Vec<Vec<usize>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct PartitionJson {
    clusters: Vec<Vec<usize>>,
}

impl Partition {
    /// From arbitrary labels; label values only need to agree within a cluster.
    pub fn from_labels<L: Copy + Eq + std::hash::Hash>(labels: &[L]) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidPartition("no elements".into()));
        }
        let mut remap = std::collections::HashMap::new();
        let canon: Vec<usize> = labels
            .iter()
            .map(|l| {
                let next = remap.len();
                *remap.entry(*l).or_insert(next)
            })
            .collect();
        Ok(Self::from_rgs(canon))
    }

    /// From a restricted growth string; trusted input.
    pub(crate) fn from_rgs(labels: Vec<usize>) -> Self {
        let k = labels.iter().max().map_or(0, |m| m + 1);
        let mut clusters = vec![Vec::new(); k];
        for (i, &c) in labels.iter().enumerate() {
            clusters[c].push(i);
        }
        Self { labels, clusters }
    }

    /// From explicit clusters; checks disjointness, coverage of `0..n-1` and
    /// nonemptiness.
    pub fn from_clusters(clusters: Vec<Vec<usize>>) -> Result<Self> {
        let n: usize = clusters.iter().map(Vec::len).sum();
        if n == 0 {
            return Err(Error::InvalidPartition("no elements".into()));
        }
        let mut labels = vec![usize::MAX; n];
        for (c, members) in clusters.iter().enumerate() {
            if members.is_empty() {
                return Err(Error::InvalidPartition(format!("cluster {c} is empty")));
            }
            for &i in members {
                if i >= n {
                    return Err(Error::InvalidPartition(format!(
                        "element {i} out of range for {n} elements"
                    )));
                }
                if labels[i] != usize::MAX {
                    return Err(Error::InvalidPartition(format!(
                        "element {i} appears more than once"
                    )));
                }
                labels[i] = c;
            }
        }
        Self::from_labels(&labels)
    }

    pub fn singletons(n: usize) -> Self {
        Self::from_rgs((0..n).collect())
    }

    pub fn whole(n: usize) -> Self {
        Self::from_rgs(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn k(&self) -> usize {
        self.clusters.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    pub fn cluster(&self, c: usize) -> &[usize] {
        &self.clusters[c]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.clusters.iter().map(Vec::len).collect()
    }

    pub fn same_cluster(&self, i: usize, j: usize) -> bool {
        self.labels[i] == self.labels[j]
    }

    /// Restriction to the first `m` elements.
    pub fn prefix(&self, m: usize) -> Self {
        Self::from_labels(&self.labels[..m]).expect("prefix of a valid partition")
    }

    /// Whether every cluster of `self` lies inside some cluster of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.len() == coarser.len()
            && self
                .clusters
                .iter()
                .all(|c| c.iter().all(|&i| coarser.label(i) == coarser.label(c[0])))
    }

    pub(crate) fn check_covers(&self, n: usize) -> Result<()> {
        if self.len() != n {
            return Err(Error::CoverageMismatch {
                partition: self.len(),
                dataset: n,
            });
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&PartitionJson {
            clusters: self.clusters.clone(),
        })
        .expect("partition serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let p: PartitionJson = serde_json::from_str(s)?;
        Self::from_clusters(p.clusters)
    }
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PartitionJson {
            clusters: self.clusters.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let p = PartitionJson::deserialize(d)?;
        Self::from_clusters(p.clusters).map_err(serde::de::Error::custom)
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (c, members) in self.clusters.iter().enumerate() {
            if c > 0 {
                write!(f, " ")?;
            }
            write!(f, "{{")?;
            for (j, m) in members.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{m}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}
