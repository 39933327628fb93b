use std::collections::BTreeSet;
use std::fmt::Write;

use serde::Serialize;

use crate::spacemap::distance::DistanceMatrix;

/// Node index: leaves are `0..n`, merge `i` creates node `n + i`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    /// Average linkage distance at which the two subtrees joined.
    pub height: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Dendrogram {
    pub leaves: Vec<String>,
    pub merges: Vec<Merge>,
}

/// Average-linkage (UPGMA) agglomerative clustering.
pub fn hierarchical_cluster(dm: &DistanceMatrix) -> Dendrogram {
    let n = dm.len();
    let leaves: Vec<String> = dm.codes().to_vec();
    // (node id, size, smallest leaf label) for active clusters
    let mut active: Vec<(usize, usize, String)> =
        leaves.iter().enumerate().map(|(i, c)| (i, 1, c.clone())).collect();
    let mut dist: Vec<Vec<f64>> = dm.rows().to_vec();
    let mut merges = Vec::with_capacity(n.saturating_sub(1));

    while active.len() > 1 {
        let mut best = (f64::INFINITY, 0, 1);
        for a in 0..active.len() {
            for b in a + 1..active.len() {
                let d = dist[a][b];
                if d < best.0 {
                    best = (d, a, b);
                }
            }
        }
        let (h, a, b) = best;
        let (na, nb) = (active[a].1, active[b].1);
        let (left, right) = if active[a].2 <= active[b].2 { (a, b) } else { (b, a) };
        merges.push(Merge {
            left: active[left].0,
            right: active[right].0,
            height: h,
        });
        let label = active[left].2.clone();

        let merged_row: Vec<f64> = (0..active.len())
            .map(|k| (na as f64 * dist[a][k] + nb as f64 * dist[b][k]) / (na + nb) as f64)
            .collect();
        // replace a with the merged cluster, drop b
        active[a] = (n + merges.len() - 1, na + nb, label);
        for k in 0..active.len() {
            dist[a][k] = merged_row[k];
            dist[k][a] = merged_row[k];
        }
        dist[a][a] = 0.0;
        active.remove(b);
        dist.remove(b);
        for row in &mut dist {
            row.remove(b);
        }
    }
    Dendrogram { leaves, merges }
}

impl Dendrogram {
    pub fn root(&self) -> usize {
        if self.merges.is_empty() {
            0
        } else {
            self.leaves.len() + self.merges.len() - 1
        }
    }

    pub fn height(&self, node: usize) -> f64 {
        if node < self.leaves.len() {
            0.0
        } else {
            self.merges[node - self.leaves.len()].height
        }
    }

    pub fn leaves_of(&self, node: usize) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut stack = vec![node];
        while let Some(v) = stack.pop() {
            if v < self.leaves.len() {
                out.insert(self.leaves[v].clone());
            } else {
                let m = self.merges[v - self.leaves.len()];
                stack.push(m.left);
                stack.push(m.right);
            }
        }
        out
    }

    /// Leaf sets of every internal node, in merge order.
    pub fn clusters(&self) -> Vec<BTreeSet<String>> {
        (0..self.merges.len())
            .map(|i| self.leaves_of(self.leaves.len() + i))
            .collect()
    }

    /// Leaf set of the first merge whose subtree contains all of `codes`.
    pub fn smallest_cluster_containing(&self, codes: &[&str]) -> Option<BTreeSet<String>> {
        if codes.len() == 1 && self.leaves.iter().any(|l| l == codes[0]) {
            return Some(BTreeSet::from([codes[0].to_string()]));
        }
        self.clusters()
            .into_iter()
            .find(|c| codes.iter().all(|x| c.contains(*x)))
    }

    /// Heights never decrease from a child to its parent.
    pub fn is_monotone(&self) -> bool {
        self.merges
            .iter()
            .all(|m| self.height(m.left) <= m.height && self.height(m.right) <= m.height)
    }

    fn write_newick(&self, node: usize, lengths: bool, parent: f64, out: &mut String) {
        if node < self.leaves.len() {
            out.push_str(&self.leaves[node]);
        } else {
            let m = self.merges[node - self.leaves.len()];
            out.push('(');
            self.write_newick(m.left, lengths, m.height, out);
            out.push(',');
            self.write_newick(m.right, lengths, m.height, out);
            out.push(')');
        }
        if lengths && node != self.root() {
            write!(out, ":{:.6}", (parent - self.height(node)) / 2.0).unwrap();
        }
    }

    /// Newick with branch lengths in bits (ultrametric half-heights).
    pub fn to_newick(&self) -> String {
        let mut s = String::new();
        self.write_newick(self.root(), true, 0.0, &mut s);
        s.push_str(";\n");
        s
    }

    pub fn to_newick_topology(&self) -> String {
        let mut s = String::new();
        self.write_newick(self.root(), false, 0.0, &mut s);
        s.push(';');
        s
    }

    pub fn to_dot(&self) -> String {
        let n = self.leaves.len();
        let mut s = String::from("digraph dendrogram {\n  node [shape=plaintext];\n");
        for (i, l) in self.leaves.iter().enumerate() {
            writeln!(s, "  n{i} [label=\"{l}\"];").unwrap();
        }
        for (i, m) in self.merges.iter().enumerate() {
            let id = n + i;
            writeln!(s, "  n{id} [shape=point, label=\"\", height=0.05, xlabel=\"{:.3}\"];", m.height)
                .unwrap();
            writeln!(s, "  n{id} -> n{};", m.left).unwrap();
            writeln!(s, "  n{id} -> n{};", m.right).unwrap();
        }
        s.push_str("}\n");
        s
    }
}
