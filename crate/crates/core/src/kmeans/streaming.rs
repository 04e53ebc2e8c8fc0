//! One-pass clustering with memory linear in `k`, plus the second-pass
//! diagnostics that certify ball separation of what the first pass found.

use serde::Serialize;

use crate::data::{dist, sq_dist, Dataset};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SequentialState {
    pub centers: Vec<Vec<f64>>,
    pub counts: Vec<usize>,
    pub seen: usize,
}

/// Sequential k-means. The first `k` points become centers with count 1.
/// Each later point joins as a `(k+1)`-th candidate with count 1; the closest
/// pair `(a, b)`, `a < b`, among all candidates is merged into slot `a` as a
/// count-weighted mean, and if `b` was a stored center its slot takes the
/// newcomer. Ties pick the lexicographically lowest pair.
pub fn sequential_kmeans<I>(stream: I, k: usize) -> Result<SequentialState>
where
    I: IntoIterator,
    I::Item: AsRef<[f64]>,
{
    if k == 0 {
        return Err(Error::param("k", "must be at least 1"));
    }
    let mut centers: Vec<Vec<f64>> = Vec::with_capacity(k + 1);
    let mut counts: Vec<usize> = Vec::with_capacity(k + 1);
    let mut seen = 0;
    let mut dim = None;
    for p in stream {
        let p = p.as_ref();
        match dim {
            None => dim = Some(p.len()),
            Some(m) if m != p.len() => {
                return Err(Error::DimensionMismatch {
                    index: seen,
                    expected: m,
                    found: p.len(),
                })
            }
            _ => {}
        }
        if let Some(coord) = p.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index: seen, coord });
        }
        seen += 1;
        centers.push(p.to_vec());
        counts.push(1);
        if centers.len() <= k {
            continue;
        }
        let (mut a, mut b, mut best) = (0, 1, f64::INFINITY);
        for i in 0..=k {
            for j in i + 1..=k {
                let d = sq_dist(&centers[i], &centers[j]);
                if d < best {
                    (a, b, best) = (i, j, d);
                }
            }
        }
        let (na, nb) = (counts[a] as f64, counts[b] as f64);
        let merged: Vec<f64> = centers[a]
            .iter()
            .zip(&centers[b])
            .map(|(x, y)| (x * na + y * nb) / (na + nb))
            .collect();
        centers[a] = merged;
        counts[a] += counts[b];
        let newcomer = centers.pop().expect("k+1 candidates");
        let newcount = counts.pop().expect("k+1 candidates");
        if b < k {
            centers[b] = newcomer;
            counts[b] = newcount;
        }
    }
    if seen < k {
        return Err(Error::StreamTooShort { got: seen, need: k });
    }
    Ok(SequentialState {
        centers,
        counts,
        seen,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SecondPassVerdict {
    /// Distance from each center to its furthest assigned point.
    pub radii: Vec<f64>,
    /// Index of that furthest point, `None` when nothing was assigned.
    pub furthest: Vec<Option<usize>>,
    pub assigned: Vec<usize>,
    pub max_radius: f64,
    /// Infinite when there is a single center.
    pub min_center_distance: f64,
    pub perfect_ball: bool,
}

/// Replays the data against fixed centers and decides whether the centers and
/// their furthest assigned points form perfectly ball-separated clusters:
/// `min center distance >= 4 * max radius`.
pub fn second_pass_diagnose(ds: &Dataset, centers: &[Vec<f64>]) -> Result<SecondPassVerdict> {
    if centers.is_empty() {
        return Err(Error::param("centers", "need at least one center"));
    }
    for (index, c) in centers.iter().enumerate() {
        if c.len() != ds.dim() {
            return Err(Error::DimensionMismatch {
                index,
                expected: ds.dim(),
                found: c.len(),
            });
        }
    }
    let k = centers.len();
    let mut radii = vec![0.0; k];
    let mut furthest = vec![None; k];
    let mut assigned = vec![0; k];
    for (i, p) in ds.points().enumerate() {
        let (mut j, mut bd) = (0, f64::INFINITY);
        for (c, center) in centers.iter().enumerate() {
            let d = sq_dist(p, center);
            if d < bd {
                (j, bd) = (c, d);
            }
        }
        assigned[j] += 1;
        let d = bd.sqrt();
        if furthest[j].is_none() || d > radii[j] {
            radii[j] = d;
            furthest[j] = Some(i);
        }
    }
    let max_radius = radii.iter().copied().fold(0.0, f64::max);
    let mut min_center_distance = f64::INFINITY;
    for a in 0..k {
        for b in a + 1..k {
            min_center_distance = min_center_distance.min(dist(&centers[a], &centers[b]));
        }
    }
    Ok(SecondPassVerdict {
        perfect_ball: min_center_distance >= 4.0 * max_radius,
        radii,
        furthest,
        assigned,
        max_radius,
        min_center_distance,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeNode {
    pub children: Option<(usize, usize)>,
    pub parent: Option<usize>,
    pub count: usize,
    /// Count-weighted mean of the children, i.e. the mean of the subtree.
    pub center: Vec<f64>,
    /// Single-linkage merge distance; 0 for leaves.
    pub height: f64,
    /// Distance from the root, which has depth 0.
    pub depth: usize,
    /// Largest distance from `center` to a point of the subtree.
    pub radius: f64,
}

/// Single-linkage dendrogram. Nodes `0..n` are the points, then one node per
/// merge; the last node is the root.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MergeTree {
    pub nodes: Vec<TreeNode>,
    pub leaves: usize,
}

impl MergeTree {
    pub fn build(ds: &Dataset) -> Self {
        let n = ds.len();
        // Prim's MST on the dense graph
        let mut in_tree = vec![false; n];
        let mut best = vec![f64::INFINITY; n];
        let mut link = vec![0usize; n];
        let mut edges = Vec::with_capacity(n - 1);
        in_tree[0] = true;
        for j in 1..n {
            best[j] = dist(ds.point(0), ds.point(j));
        }
        for _ in 1..n {
            let mut v = usize::MAX;
            for j in 0..n {
                if !in_tree[j] && (v == usize::MAX || best[j] < best[v]) {
                    v = j;
                }
            }
            in_tree[v] = true;
            edges.push((best[v], link[v].min(v), link[v].max(v)));
            for j in 0..n {
                if !in_tree[j] {
                    let d = dist(ds.point(v), ds.point(j));
                    if d < best[j] {
                        best[j] = d;
                        link[j] = v;
                    }
                }
            }
        }
        edges.sort_by(|x, y| x.0.total_cmp(&y.0).then((x.1, x.2).cmp(&(y.1, y.2))));

        let mut nodes: Vec<TreeNode> = ds
            .points()
            .map(|p| TreeNode {
                children: None,
                parent: None,
                count: 1,
                center: p.to_vec(),
                height: 0.0,
                depth: 0,
                radius: 0.0,
            })
            .collect();
        // union-find over points; `top[root]` is the current tree node
        let mut uf: Vec<usize> = (0..n).collect();
        let mut top: Vec<usize> = (0..n).collect();
        fn find(uf: &mut [usize], mut x: usize) -> usize {
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }
        for (h, u, v) in edges {
            let (ru, rv) = (find(&mut uf, u), find(&mut uf, v));
            let (l, r) = (top[ru], top[rv]);
            let (nl, nr) = (nodes[l].count as f64, nodes[r].count as f64);
            let center = nodes[l]
                .center
                .iter()
                .zip(&nodes[r].center)
                .map(|(a, b)| (a * nl + b * nr) / (nl + nr))
                .collect();
            let id = nodes.len();
            nodes.push(TreeNode {
                children: Some((l, r)),
                parent: None,
                count: nodes[l].count + nodes[r].count,
                center,
                height: h,
                depth: 0,
                radius: 0.0,
            });
            nodes[l].parent = Some(id);
            nodes[r].parent = Some(id);
            uf[rv] = ru;
            top[ru] = id;
        }
        // depths, top-down: parents always have larger ids
        for id in (0..nodes.len()).rev() {
            if let Some(p) = nodes[id].parent {
                nodes[id].depth = nodes[p].depth + 1;
            }
        }
        // second pass: each point pushes its distance up the ancestor chain
        for (i, p) in ds.points().enumerate() {
            let mut cur = nodes[i].parent;
            while let Some(id) = cur {
                let d = dist(p, &nodes[id].center);
                if d > nodes[id].radius {
                    nodes[id].radius = d;
                }
                cur = nodes[id].parent;
            }
        }
        Self { nodes, leaves: n }
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    /// All cuts of the subtree at `node` into exactly `j` subtrees.
    fn cuts(&self, node: usize, j: usize) -> Vec<Vec<usize>> {
        if j == 1 {
            return vec![vec![node]];
        }
        let Some((l, r)) = self.nodes[node].children else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for jl in 1..j {
            let left = self.cuts(l, jl);
            if left.is_empty() {
                continue;
            }
            let right = self.cuts(r, j - jl);
            for a in &left {
                for b in &right {
                    let mut c = a.clone();
                    c.extend_from_slice(b);
                    out.push(c);
                }
            }
        }
        out
    }

    /// Every way to cut the tree into exactly `k` subtrees.
    pub fn k_cuts(&self, k: usize) -> Vec<Vec<usize>> {
        self.cuts(self.root(), k)
    }

    /// Leaves under `node`.
    pub fn members(&self, node: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![node];
        while let Some(id) = stack.pop() {
            match self.nodes[id].children {
                None => out.push(id),
                Some((l, r)) => {
                    stack.push(l);
                    stack.push(r);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Pairwise `distance(t_A, t_B) >= 4 * max(r_A, r_B)` over the cut.
    pub fn cut_is_nice(&self, cut: &[usize]) -> bool {
        for (a, &x) in cut.iter().enumerate() {
            for &y in &cut[a + 1..] {
                let (nx, ny) = (&self.nodes[x], &self.nodes[y]);
                if dist(&nx.center, &ny.center) < 4.0 * nx.radius.max(ny.radius) {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CandidatesReport {
    /// Node ids at depth `< k`, root first.
    pub candidates: Vec<usize>,
    pub centers: Vec<Vec<f64>>,
    pub cuts_checked: usize,
    /// First `k`-node cut satisfying the nice-ball condition.
    pub nice_cut: Option<Vec<usize>>,
    pub nice_ball: bool,
    pub tree: MergeTree,
}

/// Candidate centers from the single-linkage tree and a nice-ball verdict
/// over every cut of the tree into `k` subtrees.
pub fn candidates_tree(ds: &Dataset, k: usize) -> Result<CandidatesReport> {
    if k == 0 || k > ds.len() {
        return Err(Error::InvalidK { k, n: ds.len() });
    }
    let tree = MergeTree::build(ds);
    let mut candidates: Vec<usize> = (0..tree.nodes.len())
        .rev()
        .filter(|&id| tree.nodes[id].depth < k)
        .collect();
    candidates.sort_by_key(|&id| (tree.nodes[id].depth, std::cmp::Reverse(id)));
    let centers = candidates.iter().map(|&id| tree.nodes[id].center.clone()).collect();
    let cuts = tree.k_cuts(k);
    let nice_cut = cuts.iter().find(|c| tree.cut_is_nice(c)).cloned();
    Ok(CandidatesReport {
        candidates,
        centers,
        cuts_checked: cuts.len(),
        nice_ball: nice_cut.is_some(),
        nice_cut,
        tree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_distinct_points_pass_through() {
        let pts = [[0.0, 0.0], [5.0, 1.0], [2.0, 9.0]];
        let s = sequential_kmeans(pts.iter(), 3).unwrap();
        assert_eq!(s.centers, vec![vec![0.0, 0.0], vec![5.0, 1.0], vec![2.0, 9.0]]);
        assert_eq!(s.counts, vec![1, 1, 1]);
    }

    #[test]
    fn copies_of_one_point() {
        let pts = vec![[3.0]; 10];
        let s = sequential_kmeans(&pts, 2).unwrap();
        // every step merges slots 0 and 1, then slot 1 takes the newcomer
        assert_eq!(s.counts, vec![9, 1]);
        assert_eq!(s.centers, vec![vec![3.0], vec![3.0]]);
    }

    #[test]
    fn stream_too_short() {
        let pts = [[1.0]];
        assert!(matches!(
            sequential_kmeans(pts.iter(), 2),
            Err(Error::StreamTooShort { got: 1, need: 2 })
        ));
    }

    #[test]
    fn merge_keeps_weighted_mean() {
        // 0 and 1 merge; 10 stays; then 2 merges into the {0,1} center
        let pts = [[0.0], [10.0], [1.0], [2.0]];
        let s = sequential_kmeans(pts.iter(), 2).unwrap();
        assert_eq!(s.counts, vec![3, 1]);
        assert!((s.centers[0][0] - 1.0).abs() < 1e-12);
        assert_eq!(s.centers[1], vec![10.0]);
    }

    #[test]
    fn second_pass_boundary() {
        let ds = Dataset::from_line(&[-1.0, 1.0, 3.0, 5.0]).unwrap();
        let v = second_pass_diagnose(&ds, &[vec![0.0], vec![4.0]]).unwrap();
        assert_eq!(v.max_radius, 1.0);
        assert_eq!(v.min_center_distance, 4.0);
        assert!(v.perfect_ball);
        let ds = Dataset::from_line(&[-1.0, 1.0, 2.9, 4.9]).unwrap();
        let v = second_pass_diagnose(&ds, &[vec![0.0], vec![3.9]]).unwrap();
        assert!(!v.perfect_ball);
        let one = second_pass_diagnose(&ds, &[vec![1.0]]).unwrap();
        assert!(one.perfect_ball);
    }

    #[test]
    fn tree_of_two_balls() {
        let ds = Dataset::from_line(&[0.0, 0.5, 1.0, 10.0, 10.5, 11.0]).unwrap();
        let rep = candidates_tree(&ds, 2).unwrap();
        let root = rep.tree.root();
        assert_eq!(rep.candidates[0], root);
        assert_eq!(rep.tree.nodes[root].count, 6);
        assert!(rep.nice_ball);
        let cut = rep.nice_cut.unwrap();
        let mut centers: Vec<f64> = cut.iter().map(|&c| rep.tree.nodes[c].center[0]).collect();
        centers.sort_by(f64::total_cmp);
        assert_eq!(centers, vec![0.5, 10.5]);
        let (l, r) = rep.tree.nodes[root].children.unwrap();
        assert_eq!(rep.tree.members(l).len() + rep.tree.members(r).len(), 6);
    }

    #[test]
    fn uniform_line_is_not_nice() {
        let xs: Vec<f64> = (0..12).map(f64::from).collect();
        let rep = candidates_tree(&Dataset::from_line(&xs).unwrap(), 2).unwrap();
        assert!(!rep.nice_ball);
        assert!(rep.cuts_checked >= 1);
    }

    #[test]
    fn two_points() {
        let ds = Dataset::from_line(&[0.0, 1.0]).unwrap();
        let rep = candidates_tree(&ds, 2).unwrap();
        assert!(rep.nice_ball);
        assert_eq!(rep.nice_cut.unwrap().len(), 2);
        assert!(rep.centers.contains(&vec![0.0]) && rep.centers.contains(&vec![1.0]));
    }

    #[test]
    fn node_radius_matches_brute_force() {
        let ds = Dataset::new(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.2],
            vec![0.3, 2.0],
            vec![7.0, 7.0],
            vec![6.0, 8.0],
        ])
        .unwrap();
        let tree = MergeTree::build(&ds);
        for (id, node) in tree.nodes.iter().enumerate() {
            let members = tree.members(id);
            assert_eq!(members.len(), node.count);
            let mu = ds.mean_of(&members);
            assert!(node.center.iter().zip(&mu).all(|(a, b)| (a - b).abs() < 1e-12));
            let r = members.iter().map(|&i| dist(ds.point(i), &mu)).fold(0.0, f64::max);
            assert!((node.radius - r).abs() < 1e-12);
        }
    }
}
