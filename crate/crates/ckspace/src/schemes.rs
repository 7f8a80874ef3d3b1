//! Finite-splitting trees of clopen payloads and the injection they induce.
//!
//! Each node `t` carries `C_t` (covering side: every level partitions ω,
//! children partition their parent) and `D_t` (weak side: children shrink,
//! every `D_t` infinite). Levels count from 0; the tree's height is the
//! deepest level.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::compact_open::{BasicBox, RefinementCert, Slot};
use crate::maps::LazyInjection;
use crate::pofin::PeriodicSet;

pub const DEFAULT_HORIZON: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchemeError {
    #[error("malformed tree: {0}")]
    Malformed(String),
    #[error("tree violates the scheme conditions: {0}")]
    Invalid(Report),
    #[error("repair impossible at node {node}: {reason}")]
    RepairImpossible { node: usize, reason: String },
    #[error("tree has no levels below the root")]
    NoLevels,
    #[error("horizon {horizon} exceeds the computed prefix of length {len}")]
    HorizonExceedsPrefix { horizon: usize, len: usize },
    #[error("chain link {index} has no certificate")]
    MissingCertificate { index: usize },
    #[error("chain link {index}: invalid certificate ({reason})")]
    InvalidCertificate { index: usize, reason: String },
    #[error("chain link {index}: box is empty")]
    EmptyBox { index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Node {
    pub parent: Option<usize>,
    pub level: usize,
    pub c: PeriodicSet,
    pub d: PeriodicSet,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TreeJson {
    nodes: Vec<Node>,
}

/// Nodes in breadth-first (level) order with parent links.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "TreeJson", into = "TreeJson")]
pub struct SchemeTree {
    nodes: Vec<Node>,
    levels: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
}

impl PartialEq for SchemeTree {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes
    }
}

impl Eq for SchemeTree {}

impl TryFrom<TreeJson> for SchemeTree {
    type Error = SchemeError;

    fn try_from(raw: TreeJson) -> Result<Self, Self::Error> {
        SchemeTree::from_nodes(raw.nodes)
    }
}

impl From<SchemeTree> for TreeJson {
    fn from(tree: SchemeTree) -> Self {
        TreeJson { nodes: tree.nodes }
    }
}

impl SchemeTree {
    /// A one-node tree.
    pub fn root(c: PeriodicSet, d: PeriodicSet) -> Self {
        SchemeTree {
            nodes: vec![Node {
                parent: None,
                level: 0,
                c,
                d,
            }],
            levels: vec![vec![0]],
            children: vec![Vec::new()],
        }
    }

    /// Checks the shape only: non-empty, levels non-decreasing, parents
    /// earlier and exactly one level up, no level skipped.
    pub fn from_nodes(nodes: Vec<Node>) -> Result<Self, SchemeError> {
        if nodes.is_empty() {
            return Err(SchemeError::Malformed("no nodes".into()));
        }
        let mut levels: Vec<Vec<usize>> = Vec::new();
        let mut children = vec![Vec::new(); nodes.len()];
        for (i, node) in nodes.iter().enumerate() {
            match node.parent {
                None if node.level == 0 => {}
                None => {
                    return Err(SchemeError::Malformed(format!(
                        "node {i} at level {} has no parent",
                        node.level
                    )))
                }
                Some(p) if p < i && nodes[p].level + 1 == node.level => children[p].push(i),
                Some(p) => {
                    return Err(SchemeError::Malformed(format!(
                        "node {i} has bad parent {p}"
                    )))
                }
            }
            if node.level == levels.len() {
                levels.push(Vec::new());
            } else if node.level + 1 != levels.len() {
                return Err(SchemeError::Malformed(format!(
                    "node {i} breaks level order"
                )));
            }
            levels[node.level].push(i);
        }
        Ok(SchemeTree {
            nodes,
            levels,
            children,
        })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &Node {
        &self.nodes[i]
    }

    pub fn height(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, level: usize) -> &[usize] {
        &self.levels[level]
    }

    pub fn children(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    /// The node at `level` whose `C` contains `n`, found by descending from
    /// level 0. Exact trees always have one.
    pub fn locate(&self, n: u64, level: usize) -> Option<usize> {
        let mut here = *self.levels[0]
            .iter()
            .find(|&&i| self.nodes[i].c.contains(n))?;
        for _ in 0..level.min(self.height()) {
            here = *self.children[here]
                .iter()
                .find(|&&i| self.nodes[i].c.contains(n))?;
        }
        Some(here)
    }

    /// The deepest level's node standing for the unconstrained remainder,
    /// where OUTSIDE slots attach.
    fn completion_node(&self) -> Option<usize> {
        self.levels[self.height()]
            .iter()
            .rev()
            .copied()
            .find(|&i| self.nodes[i].d == PeriodicSet::omega())
    }

    /// Adds a level below the deepest one from a box certified against the
    /// box the deepest level came from, then repairs it. Leaves the tree
    /// untouched on error.
    pub fn append_level(
        &mut self,
        bx: &BasicBox,
        cert: &RefinementCert,
    ) -> Result<(), SchemeError> {
        let index = self.height();
        let invalid = |reason: String| SchemeError::InvalidCertificate { index, reason };
        bx.check_normal().map_err(|e| invalid(e.to_string()))?;
        if bx.constraints().iter().any(|c| c.b.is_finite()) {
            return Err(SchemeError::EmptyBox { index });
        }
        if cert.assignment.len() != bx.len() {
            return Err(invalid(format!(
                "{} slots for {} constraints",
                cert.assignment.len(),
                bx.len()
            )));
        }
        let deepest = &self.levels[self.height()];
        let mut fresh = Vec::with_capacity(bx.len());
        for (l, (slot, c)) in cert.assignment.iter().zip(bx.constraints()).enumerate() {
            let parent = match *slot {
                Slot::Inside(m) => *deepest
                    .get(m)
                    .ok_or_else(|| invalid(format!("slot {m} out of range")))?,
                Slot::Outside => self
                    .completion_node()
                    .ok_or_else(|| invalid("no completion node for OUTSIDE".into()))?,
            };
            let p = &self.nodes[parent];
            if !c.a.almost_subset(&p.c) || !c.b.almost_subset(&p.d) {
                return Err(invalid(format!("constraint {l} is not inside its slot")));
            }
            fresh.push(Node {
                parent: Some(parent),
                level: index + 1,
                c: c.a.clone(),
                d: c.b.clone(),
            });
        }
        let mut grown = self.clone();
        let first = grown.nodes.len();
        grown.levels.push((first..first + fresh.len()).collect());
        for (k, node) in fresh.into_iter().enumerate() {
            grown.children[node.parent.expect("set above")].push(first + k);
            grown.children.push(Vec::new());
            grown.nodes.push(node);
        }
        grown.repair_level(index + 1)?;
        *self = grown;
        Ok(())
    }

    /// Makes level `level` exact against its (already exact) parents.
    fn repair_level(&mut self, level: usize) -> Result<(), SchemeError> {
        let groups: Vec<(PeriodicSet, Option<PeriodicSet>, Vec<usize>)> = if level == 0 {
            vec![(PeriodicSet::omega(), None, self.levels[0].clone())]
        } else {
            self.levels[level - 1]
                .iter()
                .map(|&p| {
                    let node = &self.nodes[p];
                    (
                        node.c.clone(),
                        Some(node.d.clone()),
                        self.children[p].clone(),
                    )
                })
                .collect()
        };
        let owner = |kids: &[usize], nodes: &[Node]| -> usize {
            kids.first().copied().unwrap_or(nodes.len())
        };
        for (pc, pd, kids) in groups {
            let mut claimed = PeriodicSet::empty();
            let mut new_c = Vec::with_capacity(kids.len());
            for &s in &kids {
                let c = self.nodes[s].c.intersection(&pc).difference(&claimed);
                claimed = claimed.union(&c);
                new_c.push(c);
            }
            let uncovered = pc.difference(&claimed);
            if !uncovered.is_empty() {
                match new_c.first_mut() {
                    Some(c) => *c = c.union(&uncovered),
                    None => {
                        return Err(SchemeError::RepairImpossible {
                            node: owner(&kids, &self.nodes),
                            reason: format!("{uncovered} has no child to cover it"),
                        })
                    }
                }
            }
            for (&s, c) in kids.iter().zip(new_c) {
                let node = &mut self.nodes[s];
                if !c.almost_equal(&node.c) {
                    return Err(SchemeError::RepairImpossible {
                        node: s,
                        reason: format!("C would change from {} to {c}", node.c),
                    });
                }
                node.c = c;
                if let Some(pd) = &pd {
                    let d = node.d.intersection(pd);
                    if !d.almost_equal(&node.d) {
                        return Err(SchemeError::RepairImpossible {
                            node: s,
                            reason: format!("D = {} is not almost inside its parent", node.d),
                        });
                    }
                    node.d = d;
                }
                if node.d.is_finite() {
                    return Err(SchemeError::RepairImpossible {
                        node: s,
                        reason: "D is finite".into(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// One scheme violation, with the nodes witnessing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// Two nodes of one level share `sample`.
    Overlap {
        first: usize,
        second: usize,
        sample: u64,
    },
    /// `sample` lies in no node of `level`.
    LevelNotCovering {
        level: usize,
        sample: u64,
    },
    /// The children of `node` miss `sample ∈ C_node`.
    ChildrenNotCovering {
        node: usize,
        sample: u64,
    },
    /// `sample ∈ C_child ∖ C_parent`.
    CNotNested {
        parent: usize,
        child: usize,
        sample: u64,
    },
    /// `sample ∈ D_child ∖ D_parent`.
    DNotNested {
        parent: usize,
        child: usize,
        sample: u64,
    },
    FiniteD {
        node: usize,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| format!("{v:?}")).collect();
        write!(f, "{}", parts.join("; "))
    }
}

fn first(set: &PeriodicSet) -> Option<u64> {
    set.first_from(0)
}

/// Every violated condition, checked exactly.
pub fn validate(tree: &SchemeTree) -> Report {
    let mut out = Vec::new();
    let nodes = tree.nodes();
    for level in 0..=tree.height() {
        let ids = tree.level(level);
        for (k, &i) in ids.iter().enumerate() {
            for &j in &ids[k + 1..] {
                if let Some(sample) = first(&nodes[i].c.intersection(&nodes[j].c)) {
                    out.push(Violation::Overlap {
                        first: i,
                        second: j,
                        sample,
                    });
                }
            }
        }
        let union = ids
            .iter()
            .fold(PeriodicSet::empty(), |acc, &i| acc.union(&nodes[i].c));
        if let Some(sample) = first(&union.complement()) {
            out.push(Violation::LevelNotCovering { level, sample });
        }
    }
    for (i, node) in nodes.iter().enumerate() {
        if node.d.is_finite() {
            out.push(Violation::FiniteD { node: i });
        }
        if let Some(p) = node.parent {
            let parent = &nodes[p];
            if let Some(sample) = first(&node.c.difference(&parent.c)) {
                out.push(Violation::CNotNested {
                    parent: p,
                    child: i,
                    sample,
                });
            }
            if let Some(sample) = first(&node.d.difference(&parent.d)) {
                out.push(Violation::DNotNested {
                    parent: p,
                    child: i,
                    sample,
                });
            }
        }
        if node.level < tree.height() {
            let covered = tree
                .children(i)
                .iter()
                .fold(PeriodicSet::empty(), |acc, &s| acc.union(&nodes[s].c));
            if let Some(sample) = first(&node.c.difference(&covered)) {
                out.push(Violation::ChildrenNotCovering { node: i, sample });
            }
        }
    }
    Report { violations: out }
}

/// Exact representatives for a tree that satisfies the conditions up to
/// finite sets. Children are cut down to their parent, later siblings lose
/// what earlier ones claimed, and leftovers go to the first child.
pub fn repair(tree: &SchemeTree) -> Result<SchemeTree, SchemeError> {
    let mut out = tree.clone();
    for level in 0..=out.height() {
        out.repair_level(level)?;
    }
    Ok(out)
}

/// The injection `φ(n) = min(D_{t_n} ∖ φ[n])` of an exact tree of height
/// at least 1.
pub fn build_injection(tree: &SchemeTree) -> Result<LazyInjection, SchemeError> {
    if tree.height() == 0 {
        return Err(SchemeError::NoLevels);
    }
    let report = validate(tree);
    if !report.is_valid() {
        return Err(SchemeError::Invalid(report));
    }
    Ok(LazyInjection::new(tree.clone()))
}

/// Checks `φ(C_t ∩ [m, n]) ⊆ D_t` for every node `t` at level `m` and every
/// `m ≤ n < horizon`, on the already computed prefix of `phi`.
pub fn verify_star(
    tree: &SchemeTree,
    phi: &LazyInjection,
    horizon: usize,
) -> Result<bool, SchemeError> {
    let memo = phi.memo();
    if horizon > memo.len() {
        return Err(SchemeError::HorizonExceedsPrefix {
            horizon,
            len: memo.len(),
        });
    }
    Ok(tree
        .nodes()
        .iter()
        .all(|t| (t.level..horizon).all(|n| !t.c.contains(n as u64) || t.d.contains(memo[n]))))
}

/// One step of a refinement chain.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChainLink {
    #[serde(rename = "box")]
    pub bx: BasicBox,
    #[serde(default)]
    pub cert: Option<RefinementCert>,
}

/// The scheme tree of a certified chain of boxes, the first certified
/// against the full box `[ω → ω]`, which becomes the root.
pub fn chain_to_tree(chain: &[ChainLink]) -> Result<SchemeTree, SchemeError> {
    let mut tree = SchemeTree::root(PeriodicSet::omega(), PeriodicSet::omega());
    for (index, link) in chain.iter().enumerate() {
        let cert = link
            .cert
            .as_ref()
            .ok_or(SchemeError::MissingCertificate { index })?;
        tree.append_level(&link.bx, cert)?;
    }
    Ok(tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compact_open::{refine, SubbasicBox};

    fn s(text: &str) -> PeriodicSet {
        text.parse().unwrap()
    }

    fn node(parent: Option<usize>, level: usize, c: &str, d: &str) -> Node {
        Node {
            parent,
            level,
            c: s(c),
            d: s(d),
        }
    }

    fn example() -> SchemeTree {
        SchemeTree::from_nodes(vec![
            node(None, 0, "omega", "omega"),
            node(Some(0), 1, "0%2", "0%4"),
            node(Some(0), 1, "1%2", "1%4"),
        ])
        .unwrap()
    }

    #[test]
    fn validate_examples() {
        let one = SchemeTree::from_nodes(vec![
            node(None, 0, "0%2", "0%4"),
            node(None, 0, "1%2", "1%4"),
        ])
        .unwrap();
        assert!(validate(&one).is_valid());
        assert!(validate(&example()).is_valid());

        let gap = SchemeTree::from_nodes(vec![
            node(None, 0, "omega", "omega"),
            node(Some(0), 1, "0%4", "omega"),
            node(Some(0), 1, "1%2", "omega"),
        ])
        .unwrap();
        let r = validate(&gap);
        assert!(r
            .violations
            .contains(&Violation::ChildrenNotCovering { node: 0, sample: 2 }));
        assert!(r.violations.contains(&Violation::LevelNotCovering {
            level: 1,
            sample: 2
        }));

        let fin = SchemeTree::from_nodes(vec![node(None, 0, "omega", "{1,2}")]).unwrap();
        assert_eq!(
            validate(&fin).violations,
            vec![Violation::FiniteD { node: 0 }]
        );
    }

    #[test]
    fn malformed_shapes() {
        assert!(SchemeTree::from_nodes(vec![]).is_err());
        assert!(SchemeTree::from_nodes(vec![node(Some(0), 1, "omega", "omega")]).is_err());
        assert!(SchemeTree::from_nodes(vec![
            node(None, 0, "omega", "omega"),
            node(Some(0), 2, "omega", "omega"),
        ])
        .is_err());
    }

    #[test]
    fn repair_examples() {
        let overlap = SchemeTree::from_nodes(vec![
            node(None, 0, "omega", "omega"),
            node(Some(0), 1, "0%2 + {1,3}", "omega"),
            node(Some(0), 1, "1%2", "omega"),
        ])
        .unwrap();
        let fixed = repair(&overlap).unwrap();
        assert_eq!(fixed.node(2).c, s("1%2 - {1,3}"));
        assert!(validate(&fixed).is_valid());

        let stray = SchemeTree::from_nodes(vec![
            node(None, 0, "omega", "0%2"),
            node(Some(0), 1, "omega", "0%4 + {7}"),
        ])
        .unwrap();
        assert_eq!(repair(&stray).unwrap().node(1).d, s("0%4"));

        assert_eq!(repair(&example()).unwrap(), example());

        let hole = SchemeTree::from_nodes(vec![
            node(None, 0, "omega", "omega"),
            node(Some(0), 1, "0%2 - {0,2}", "omega"),
            node(Some(0), 1, "1%2", "omega"),
        ])
        .unwrap();
        assert_eq!(repair(&hole).unwrap().node(1).c, s("0%2"));

        let bad = SchemeTree::from_nodes(vec![
            node(None, 0, "omega", "0%2"),
            node(Some(0), 1, "omega", "1%2"),
        ])
        .unwrap();
        assert!(matches!(
            repair(&bad),
            Err(SchemeError::RepairImpossible { node: 1, .. })
        ));
    }

    #[test]
    fn injection_examples() {
        let mut phi = build_injection(&example()).unwrap();
        assert_eq!(phi.prefix(6), &[0, 1, 4, 5, 8, 9]);

        let same = SchemeTree::from_nodes(vec![
            node(None, 0, "omega", "omega"),
            node(Some(0), 1, "0%2", "0%2"),
            node(Some(0), 1, "1%2", "1%2"),
        ])
        .unwrap();
        assert_eq!(build_injection(&same).unwrap().prefix(4), &[0, 1, 2, 3]);

        let odd = SchemeTree::from_nodes(vec![
            node(None, 0, "omega", "1%2"),
            node(Some(0), 1, "omega", "1%2"),
        ])
        .unwrap();
        assert_eq!(build_injection(&odd).unwrap().prefix(3), &[1, 3, 5]);

        let root = SchemeTree::root(PeriodicSet::omega(), PeriodicSet::omega());
        assert_eq!(build_injection(&root).unwrap_err(), SchemeError::NoLevels);
    }

    #[test]
    fn star_examples() {
        let tree = example();
        let mut phi = build_injection(&tree).unwrap();
        phi.prefix(DEFAULT_HORIZON);
        assert!(verify_star(&tree, &phi, DEFAULT_HORIZON).unwrap());
        assert!(verify_star(&tree, &phi, 0).unwrap());
        assert!(verify_star(&tree, &phi, DEFAULT_HORIZON + 1).is_err());

        let corrupted = LazyInjection::from_memo(tree.clone(), {
            let mut m = phi.memo().to_vec();
            m.swap(2, 3);
            m
        });
        assert!(!verify_star(&tree, &corrupted, DEFAULT_HORIZON).unwrap());
    }

    #[test]
    fn chains_to_trees() {
        let full = BasicBox::full();
        let bx: BasicBox = "[0%2 -> 1%2] & [1%2 -> omega]".parse().unwrap();
        let (b1, c1) = refine(&full, bx.constraints()).unwrap();
        let tree = chain_to_tree(&[ChainLink {
            bx: b1.clone(),
            cert: Some(c1.clone()),
        }])
        .unwrap();
        assert_eq!(tree.height(), 1);
        assert!(validate(&tree).is_valid());
        let mut phi = build_injection(&tree).unwrap();
        phi.prefix(DEFAULT_HORIZON);
        assert!(verify_star(&tree, &phi, DEFAULT_HORIZON).unwrap());
        assert_eq!(phi.prefix(4), &[0, 1, 3, 2]);

        let (b2, c2) = refine(&b1, &[]).unwrap();
        let link = |b: &BasicBox, c: &RefinementCert| ChainLink {
            bx: b.clone(),
            cert: Some(c.clone()),
        };
        let twice = chain_to_tree(&[link(&b1, &c1), link(&b2, &c2)]).unwrap();
        assert_eq!(twice.height(), 2);
        assert!(twice
            .nodes()
            .iter()
            .all(|n| twice.children(0).len() == 2 || n.level != 0));
        assert!(twice.level(1).iter().all(|&i| twice.children(i).len() == 1));
        let mut psi = build_injection(&twice).unwrap();
        assert_eq!(psi.prefix(8), phi.prefix(8));

        let (b2, c2) = refine(&b1, &[SubbasicBox::new(s("0%2"), s("1%4"))]).unwrap();
        let (b3, c3) = refine(&b2, &[SubbasicBox::new(s("0%4"), s("1%8"))]).unwrap();
        let chain = [link(&b1, &c1), link(&b2, &c2), link(&b3, &c3)];
        let deep = chain_to_tree(&chain).unwrap();
        assert_eq!(deep.height(), 3);
        let mut phi = build_injection(&deep).unwrap();
        phi.prefix(DEFAULT_HORIZON);
        assert!(verify_star(&deep, &phi, DEFAULT_HORIZON).unwrap());
        for n in (3..DEFAULT_HORIZON as u64).step_by(4) {
            if n % 4 == 0 {
                assert_eq!(phi.memo()[n as usize] % 8, 1);
            }
        }

        assert_eq!(
            chain_to_tree(&[ChainLink {
                bx: b1.clone(),
                cert: None
            }]),
            Err(SchemeError::MissingCertificate { index: 0 })
        );
        let wrong = RefinementCert {
            assignment: vec![Slot::Inside(5), Slot::Inside(0)],
        };
        assert!(matches!(
            chain_to_tree(&[ChainLink {
                bx: b1,
                cert: Some(wrong)
            }]),
            Err(SchemeError::InvalidCertificate { index: 0, .. })
        ));
    }

    #[test]
    fn tree_json_round_trip() {
        let tree = example();
        let j = serde_json::to_string(&tree).unwrap();
        assert!(j.starts_with(r#"{"nodes":[{"parent":null,"level":0,"c":"#));
        let back: SchemeTree = serde_json::from_str(&j).unwrap();
        assert_eq!(back, tree);
        assert!(serde_json::from_str::<SchemeTree>(r#"{"nodes":[]}"#).is_err());
    }
}
