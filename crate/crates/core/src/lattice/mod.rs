//! The lattice of information atoms and its three isomorphic views.
//!
//! Nodes are identified by the truth table of their [`ParthoodDistribution`].
//! Order convention: `x ≤ y` iff `ones(x) ⊇ ones(y)`, so the node shared by
//! all sources (`{1}{2}...{n}`) is the bottom and the full synergy node
//! (`{1,...,n}`) is the top. Redundancy at a node sums the atoms at or below it.

mod antichain;
mod dot;
mod parthood;
mod statement;

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

pub use antichain::Antichain;
pub use dot::{export_dot, LabelView};
pub use parthood::ParthoodDistribution;
pub use statement::LogicStatement;

use crate::collection::{Collection, MAX_SOURCES};
use crate::error::{PidError, Result};

/// Default enumeration cap. n = 6 has 7 828 352 nodes.
pub const DEFAULT_MAX_N: usize = 5;

/// Every parthood distribution for `n` sources, ascending by truth-table mask.
pub fn enumerate_nodes(n: usize) -> Result<Vec<ParthoodDistribution>> {
    enumerate_nodes_capped(n, DEFAULT_MAX_N)
}

/// As [`enumerate_nodes`] with an explicit cap (at most [`MAX_SOURCES`]).
pub fn enumerate_nodes_capped(n: usize, max_n: usize) -> Result<Vec<ParthoodDistribution>> {
    let max = max_n.min(MAX_SOURCES);
    if n == 0 || n > max {
        return Err(PidError::Capacity { n, max });
    }
    let mut order: Vec<u32> = (0..1u32 << n).collect();
    order.sort_by_key(|c| (c.count_ones(), *c));
    let mut out = Vec::new();
    extend(n, &order, 0, 0, &mut out);
    out.sort_unstable();
    Ok(out)
}

// Assigns collections in rank order. A collection is forced to 1 when one of
// its immediate subsets is 1; otherwise both values keep the table monotone.
fn extend(n: usize, order: &[u32], pos: usize, table: u64, out: &mut Vec<ParthoodDistribution>) {
    if pos == order.len() {
        out.push(ParthoodDistribution::new_unchecked(n, table));
        return;
    }
    let c = order[pos];
    let full = (1u32 << n) - 1;
    if c == 0 {
        return extend(n, order, pos + 1, table, out);
    }
    let forced = c == full || (0..n).any(|i| c >> i & 1 == 1 && table >> (c & !(1 << i)) & 1 == 1);
    if forced {
        extend(n, order, pos + 1, table | 1u64 << c, out);
    } else {
        extend(n, order, pos + 1, table, out);
        extend(n, order, pos + 1, table | 1u64 << c, out);
    }
}

/// Lower covers of `node`, computed by scanning the valuations that do not
/// satisfy the node's statement from the most to the fewest true variables.
///
/// A falsifying valuation with `k` true variables yields a child when no
/// falsifying valuation with `k + 1` true variables extends it; the child's
/// truth table is the node's plus that one valuation. Output is ascending by
/// truth-table mask.
pub fn children(node: &ParthoodDistribution) -> Vec<ParthoodDistribution> {
    let n = node.n();
    let falsifying: Vec<Collection> = Collection::all(n).filter(|v| !node.value(*v)).collect();
    let mut k = falsifying.iter().map(|v| v.len()).max().unwrap_or(0);
    let mut out = Vec::new();
    while k != 0 {
        for v in falsifying.iter().filter(|v| v.len() == k) {
            let extended = falsifying
                .iter()
                .any(|w| w.len() == k + 1 && v.is_subset_of(*w));
            if !extended {
                out.push(ParthoodDistribution::new_unchecked(
                    n,
                    node.table() | 1u64 << v.mask(),
                ));
            }
        }
        k -= 1;
    }
    out.sort_unstable();
    out
}

/// Upper covers of `node`, found by scanning the full node set for minimal
/// strict upper bounds. Ascending by truth-table mask.
pub fn parents(node: &ParthoodDistribution) -> Result<Vec<ParthoodDistribution>> {
    let nodes = enumerate_nodes_capped(node.n(), MAX_SOURCES)?;
    Ok(parents_among(node, &nodes))
}

fn parents_among(
    node: &ParthoodDistribution,
    nodes: &[ParthoodDistribution],
) -> Vec<ParthoodDistribution> {
    let above: Vec<&ParthoodDistribution> = nodes
        .iter()
        .filter(|g| *g != node && node.is_below(g))
        .collect();
    above
        .iter()
        .filter(|g| !above.iter().any(|h| h != *g && h.is_below(g)))
        .map(|g| **g)
        .collect()
}

/// Greatest lower bound: the union of truth-table ones (disjunction).
pub fn meet(x: &ParthoodDistribution, y: &ParthoodDistribution) -> Result<ParthoodDistribution> {
    same_n(x, y)?;
    let s = x.to_statement().disjoin(&y.to_statement());
    Ok(
        ParthoodDistribution::from_antichain(&s.to_antichain(), x.n())
            .expect("disjunction of lattice nodes is a lattice node"),
    )
}

/// Least upper bound: the intersection of truth-table ones (conjunction).
pub fn join(x: &ParthoodDistribution, y: &ParthoodDistribution) -> Result<ParthoodDistribution> {
    same_n(x, y)?;
    let s = x.to_statement().conjoin(&y.to_statement());
    Ok(
        ParthoodDistribution::from_antichain(&s.to_antichain(), x.n())
            .expect("conjunction of lattice nodes is a lattice node"),
    )
}

fn same_n(x: &ParthoodDistribution, y: &ParthoodDistribution) -> Result<()> {
    if x.n() != y.n() {
        return Err(PidError::Usage(format!(
            "nodes over {} and {} sources",
            x.n(),
            y.n()
        )));
    }
    Ok(())
}

/// All nodes for `n` sources together with the cover relation.
#[derive(Debug, Clone)]
pub struct Lattice {
    n: usize,
    nodes: Vec<ParthoodDistribution>,
    index: HashMap<u64, usize>,
    children: Vec<Vec<usize>>,
    parents: Vec<Vec<usize>>,
}

impl Lattice {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_cap(n, DEFAULT_MAX_N)
    }

    pub fn with_cap(n: usize, max_n: usize) -> Result<Self> {
        let nodes = enumerate_nodes_capped(n, max_n)?;
        let index: HashMap<u64, usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, f)| (f.table(), i))
            .collect();
        let children: Vec<Vec<usize>> = nodes
            .iter()
            .map(|f| children(f).iter().map(|c| index[&c.table()]).collect())
            .collect();
        let mut parents = vec![Vec::new(); nodes.len()];
        for (p, kids) in children.iter().enumerate() {
            for &c in kids {
                parents[c].push(p);
            }
        }
        Ok(Lattice {
            n,
            nodes,
            index,
            children,
            parents,
        })
    }

    /// Process-wide cached lattice for `n ≤ 5`.
    pub fn shared(n: usize) -> Result<Arc<Lattice>> {
        static CACHE: [OnceLock<Arc<Lattice>>; DEFAULT_MAX_N] =
            [const { OnceLock::new() }; DEFAULT_MAX_N];
        if n == 0 || n > DEFAULT_MAX_N {
            return Err(PidError::Capacity {
                n,
                max: DEFAULT_MAX_N,
            });
        }
        if let Some(l) = CACHE[n - 1].get() {
            return Ok(l.clone());
        }
        let built = Arc::new(Lattice::new(n)?);
        Ok(CACHE[n - 1].get_or_init(|| built).clone())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[ParthoodDistribution] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &ParthoodDistribution {
        &self.nodes[i]
    }

    pub fn index_of(&self, f: &ParthoodDistribution) -> Option<usize> {
        if f.n() != self.n {
            return None;
        }
        self.index.get(&f.table()).copied()
    }

    pub fn index_of_antichain(&self, alpha: &Antichain) -> Result<usize> {
        let f = ParthoodDistribution::from_antichain(alpha, self.n)?;
        self.index_of(&f)
            .ok_or_else(|| PidError::Internal(format!("{alpha} missing from lattice")))
    }

    pub fn bottom(&self) -> usize {
        self.index[&ParthoodDistribution::bottom(self.n).unwrap().table()]
    }

    pub fn top(&self) -> usize {
        self.index[&ParthoodDistribution::top(self.n).unwrap().table()]
    }

    pub fn children_of(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    pub fn parents_of(&self, i: usize) -> &[usize] {
        &self.parents[i]
    }

    /// Cover edges `(lower, upper)`, sorted.
    pub fn cover_edges(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<(usize, usize)> = self
            .children
            .iter()
            .enumerate()
            .flat_map(|(p, kids)| kids.iter().map(move |&c| (c, p)))
            .collect();
        edges.sort_unstable();
        edges
    }

    /// Node indices in a linear extension of the order (bottom first):
    /// descending number of ones, ties by mask.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.nodes.len()).collect();
        order.sort_by_key(|&i| {
            (
                std::cmp::Reverse(self.nodes[i].ones_count()),
                self.nodes[i].table(),
            )
        });
        order
    }
}
