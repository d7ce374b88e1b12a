use std::fmt::Write;

use super::Lattice;

/// Which view labels the nodes in exported diagrams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelView {
    /// `{1}{2,3}`
    Antichain,
    /// Truth-table bits over non-empty collections ordered by (size, mask).
    Bitstring,
    /// `φ1∨(φ2∧φ3)`
    Statement,
}

impl LabelView {
    pub fn label(self, lattice: &Lattice, i: usize) -> String {
        let f = lattice.node(i);
        match self {
            LabelView::Antichain => f.to_antichain().to_string(),
            LabelView::Bitstring => f.bitstring(),
            LabelView::Statement => f.to_statement().to_string(),
        }
    }
}

/// Renders the Hasse diagram as a DOT digraph with edges from each node to
/// its upper covers, laid out bottom to top.
pub fn export_dot(lattice: &Lattice, view: LabelView) -> String {
    let mut out = String::new();
    writeln!(out, "digraph pid_lattice_n{} {{", lattice.n()).unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [shape=box, fontname=\"Helvetica\"];").unwrap();
    for i in 0..lattice.len() {
        let label = view.label(lattice, i).replace('"', "\\\"");
        writeln!(out, "  n{i} [label=\"{label}\"];").unwrap();
    }
    for (lo, hi) in lattice.cover_edges() {
        writeln!(out, "  n{lo} -> n{hi};").unwrap();
    }
    out.push_str("}\n");
    out
}
