//! Inclusion order among mixed-state SLOCC classes, read off the saturated cells of an
//! overlap table: an edge `j → i` means the orbit of `ψ_j` approximates `ψ_i` arbitrarily well.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::catalog::StateId;
use crate::overlap::TableSummary;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HierarchyGraph {
    pub nodes: Vec<StateId>,
    /// `(j, i)` node indices.
    pub edges: Vec<(usize, usize)>,
    pub reduced: bool,
}

impl HierarchyGraph {
    /// One edge per saturated off-diagonal cell, in row-major order.
    pub fn from_table(table: &TableSummary) -> Self {
        let sat = table.saturation_pattern();
        let mut edges = Vec::new();
        for (j, row) in sat.iter().enumerate() {
            for (i, &s) in row.iter().enumerate() {
                if s && i != j {
                    edges.push((j, i));
                }
            }
        }
        Self { nodes: table.ids.clone(), edges, reduced: false }
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for &(j, i) in &self.edges {
            adj[j].push(i);
        }
        adj
    }

    /// Nodes reachable from `from` along one or more edges.
    pub fn reachable(&self, from: usize) -> BTreeSet<usize> {
        let adj = self.adjacency();
        let mut seen = BTreeSet::new();
        let mut stack = adj[from].clone();
        while let Some(v) = stack.pop() {
            if seen.insert(v) {
                stack.extend(&adj[v]);
            }
        }
        seen
    }

    pub fn has_edge(&self, from: &StateId, to: &StateId) -> bool {
        let pos = |id: &StateId| self.nodes.iter().position(|x| x == id);
        match (pos(from), pos(to)) {
            (Some(j), Some(i)) => self.edges.contains(&(j, i)),
            _ => false,
        }
    }

    /// Drop every edge `j → i` that is implied by a longer path. Mutually reachable nodes
    /// (which a consistent table never produces) keep their direct edges.
    pub fn transitive_reduction(&self) -> Self {
        let reach: Vec<BTreeSet<usize>> = (0..self.nodes.len()).map(|v| self.reachable(v)).collect();
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|&(j, i)| {
                !self.edges.iter().any(|&(a, k)| {
                    a == j && k != i && reach[k].contains(&i) && !reach[i].contains(&k)
                })
            })
            .collect();
        Self { nodes: self.nodes.clone(), edges, reduced: true }
    }

    /// Graphviz rendering; ψ₆ and ψ₇ are annotated as the GHZ-like and W-like classes.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph slocc_hierarchy {\n");
        if self.reduced {
            out.push_str("  // transitive reduction\n");
        }
        for id in &self.nodes {
            match id {
                StateId::Psi(6) => out.push_str("  // GHZ-like class\n"),
                StateId::Psi(7) => out.push_str("  // W-like class\n"),
                _ => {}
            }
            let _ = writeln!(out, "  \"{id}\";");
        }
        for &(j, i) in &self.edges {
            let _ = writeln!(out, "  \"{}\" -> \"{}\";", self.nodes[j], self.nodes[i]);
        }
        out.push_str("}\n");
        out
    }
}
