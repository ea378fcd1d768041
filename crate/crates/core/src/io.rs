// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Edge-list and partition text formats.
//!
//! Both formats are line oriented with two whitespace-separated tokens per
//! line. Blank lines and lines starting with `#` are skipped. Vertex labels
//! are arbitrary tokens, mapped to dense ids in order of first appearance in
//! the edge list.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

/// Original vertex labels, indexed by dense vertex id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VertexLabels {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl VertexLabels {
    /// Labels `0..n` rendered as decimal strings.
    pub fn numeric(n: usize) -> Self {
        let mut labels = VertexLabels::default();
        for v in 0..n {
            labels.intern(&v.to_string());
        }
        labels
    }

    fn intern(&mut self, label: &str) -> usize {
        if let Some(&id) = self.index.get(label) {
            return id;
        }
        let id = self.labels.len();
        self.labels.push(label.to_owned());
        self.index.insert(label.to_owned(), id);
        id
    }

    pub fn id(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn label(&self, id: usize) -> &str {
        &self.labels[id]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

fn records(text: &str) -> impl Iterator<Item = Result<(usize, &str, &str)>> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line_no = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            return None;
        }
        let mut tokens = trimmed.split_whitespace();
        Some(match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(a), Some(b), None) => Ok((line_no, a, b)),
            _ => Err(Error::Parse {
                line: line_no,
                message: format!("expected two tokens, found {:?}", trimmed),
            }),
        })
    })
}

/// Parses an edge list into a simple unit-weight graph.
pub fn load_edge_list(text: &str) -> Result<(Graph, VertexLabels)> {
    let mut labels = VertexLabels::default();
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for record in records(text) {
        let (line, a, b) = record?;
        let (u, v) = (labels.intern(a), labels.intern(b));
        if u == v {
            return Err(Error::Validation(format!("line {line}: self-loop at {a}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::Validation(format!(
                "line {line}: duplicate edge {a} {b}"
            )));
        }
        edges.push((u, v));
    }
    let graph = Graph::from_simple_edges(labels.len(), &edges)?;
    Ok((graph, labels))
}

/// Parses `vertex community` lines into a partition of the labelled graph.
pub fn load_partition(text: &str, labels: &VertexLabels) -> Result<Partition> {
    let mut assigned: Vec<Option<String>> = vec![None; labels.len()];
    for record in records(text) {
        let (line, vertex, community) = record?;
        let v = labels.id(vertex).ok_or_else(|| {
            Error::Validation(format!("line {line}: unknown vertex {vertex}"))
        })?;
        if assigned[v].is_some() {
            return Err(Error::Validation(format!(
                "line {line}: vertex {vertex} assigned twice"
            )));
        }
        assigned[v] = Some(community.to_owned());
    }
    let mut communities = Vec::with_capacity(assigned.len());
    for (v, c) in assigned.into_iter().enumerate() {
        match c {
            Some(c) => communities.push(c),
            None => {
                return Err(Error::Validation(format!(
                    "vertex {} has no community",
                    labels.label(v)
                )))
            }
        }
    }
    Ok(Partition::from_assignment(communities))
}

/// Parses a partition file without a reference graph. The vertex order is
/// the order of appearance in the file.
pub fn load_labeled_partition(text: &str) -> Result<(VertexLabels, Partition)> {
    let mut labels = VertexLabels::default();
    let mut communities = Vec::new();
    for record in records(text) {
        let (line, vertex, community) = record?;
        if labels.id(vertex).is_some() {
            return Err(Error::Validation(format!(
                "line {line}: vertex {vertex} assigned twice"
            )));
        }
        labels.intern(vertex);
        communities.push(community.to_owned());
    }
    Ok((labels, Partition::from_assignment(communities)))
}

/// Writes `label community` lines in vertex id order.
pub fn write_partition<W: Write>(out: &mut W, partition: &Partition, labels: &VertexLabels) -> Result<()> {
    for v in 0..partition.len() {
        writeln!(out, "{} {}", labels.label(v), partition.community_of(v))?;
    }
    Ok(())
}

/// Writes a simple graph as an edge list. Weights are not representable and
/// must all be 1.
pub fn write_edge_list<W: Write>(out: &mut W, graph: &Graph, labels: &VertexLabels) -> Result<()> {
    if !graph.is_simple() {
        return Err(Error::Validation("only simple graphs can be written as edge lists".into()));
    }
    for &(u, v, _) in graph.edges() {
        writeln!(out, "{} {}", labels.label(u), labels.label(v))?;
    }
    Ok(())
}

pub fn read_edge_list_file(path: impl AsRef<Path>) -> Result<(Graph, VertexLabels)> {
    load_edge_list(&std::fs::read_to_string(path)?)
}

pub fn read_partition_file(path: impl AsRef<Path>, labels: &VertexLabels) -> Result<Partition> {
    load_partition(&std::fs::read_to_string(path)?, labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle() {
        let (g, labels) = load_edge_list("0 1\n1 2\n0 2\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.total_weight(), 3.0);
        assert!(g.degrees().iter().all(|&d| d == 2.0));
        assert_eq!(labels.label(2), "2");
    }

    #[test]
    fn labels_by_first_appearance() {
        let (g, labels) = load_edge_list("# header\n\nb a\nc a\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(labels.id("b"), Some(0));
        assert_eq!(labels.id("a"), Some(1));
        assert_eq!(labels.id("c"), Some(2));
    }

    #[test]
    fn malformed_line_reports_number() {
        match load_edge_list("0 1\n1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(load_edge_list("0 1 2\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn rejects_self_loop_and_duplicate() {
        assert!(matches!(load_edge_list("0 0\n"), Err(Error::Validation(_))));
        assert!(matches!(load_edge_list("0 1\n1 0\n"), Err(Error::Validation(_))));
    }

    #[test]
    fn partition_single_cluster() {
        let (_, labels) = load_edge_list("0 1\n1 2\n").unwrap();
        let p = load_partition("0 a\n1 a\n2 a\n", &labels).unwrap();
        assert_eq!(p.num_communities(), 1);
    }

    #[test]
    fn partition_errors() {
        let (_, labels) = load_edge_list("0 1\n1 2\n").unwrap();
        assert!(matches!(load_partition("0 a\n1 a\n", &labels), Err(Error::Validation(_))));
        assert!(matches!(
            load_partition("0 a\n1 a\n2 a\n7 b\n", &labels),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            load_partition("0 a\n1 a\n2 a\n2 b\n", &labels),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn write_then_read_partition() {
        let (g, labels) = load_edge_list("x y\ny z\n").unwrap();
        let p = Partition::from_assignment([0, 0, 1]);
        let mut buf = Vec::new();
        write_partition(&mut buf, &p, &labels).unwrap();
        let back = load_partition(std::str::from_utf8(&buf).unwrap(), &labels).unwrap();
        assert_eq!(back, p);
        let mut edges = Vec::new();
        write_edge_list(&mut edges, &g, &labels).unwrap();
        assert_eq!(std::str::from_utf8(&edges).unwrap(), "x y\ny z\n");
    }
}
