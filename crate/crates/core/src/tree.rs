//! The three-level competence taxonomy and its queries.
//!
//! Competences are identified by hierarchical ids of the form `C<i>`,
//! `C<i>.<j>` or `C<i>.<j>.<k>` (1-based indices). Level-1 nodes are the
//! roots, level-3 nodes are the leaves that receive raw assessment scores,
//! and every internal node must have at least one child. The canonical
//! taxonomy has 3 roots, 12 level-2 nodes and 48 leaves, but any positive
//! fan-out is accepted.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised while building or querying a [`CompetenceTree`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("invalid competence id {0:?}: expected C<i>[.<j>[.<k>]] with 1-based indices")]
    InvalidId(String),
    #[error("id {0:?} is deeper than three levels")]
    DepthViolation(String),
    #[error("duplicate competence id {0:?}")]
    DuplicateId(String),
    #[error("node {id:?} references parent {parent:?} which is not in the tree")]
    MissingParent { id: String, parent: String },
    #[error("node {id:?} at level {level} must have a parent at level {} (got {parent:?})", level - 1)]
    ParentLevelMismatch {
        id: String,
        level: u8,
        parent: Option<String>,
    },
    #[error("internal node {0:?} has no children")]
    OrphanInternal(String),
    #[error("unknown competence id {0:?}")]
    UnknownId(String),
}

impl TreeError {
    /// Stable rule name used in diagnostics.
    pub fn rule_name(&self) -> &'static str {
        match self {
            TreeError::InvalidId(_) => "InvalidId",
            TreeError::DepthViolation(_) => "DepthViolation",
            TreeError::DuplicateId(_) => "DuplicateId",
            TreeError::MissingParent { .. } => "MissingParent",
            TreeError::ParentLevelMismatch { .. } => "ParentLevelMismatch",
            TreeError::OrphanInternal(_) => "OrphanInternal",
            TreeError::UnknownId(_) => "UnknownId",
        }
    }
}

/// Hierarchical competence identifier, e.g. `C1`, `C2.3` or `C1.4.2`.
///
/// Ordering is by numeric index path, so `C1.2` sorts before `C1.10`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct CompetenceId {
    path: Vec<u32>,
}

impl CompetenceId {
    /// Parses an id, rejecting anything deeper than three levels.
    pub fn parse(text: &str) -> Result<Self, TreeError> {
        let body = text
            .strip_prefix('C')
            .ok_or_else(|| TreeError::InvalidId(text.to_string()))?;
        let mut path = Vec::new();
        for part in body.split('.') {
            if part.is_empty()
                || !part.bytes().all(|b| b.is_ascii_digit())
                || part.starts_with('0')
            {
                return Err(TreeError::InvalidId(text.to_string()));
            }
            let idx: u32 = part
                .parse()
                .map_err(|_| TreeError::InvalidId(text.to_string()))?;
            path.push(idx);
        }
        if path.len() > 3 {
            return Err(TreeError::DepthViolation(text.to_string()));
        }
        Ok(CompetenceId { path })
    }

    /// Hierarchy level: 1 for roots through 3 for leaves.
    pub fn level(&self) -> u8 {
        self.path.len() as u8
    }

    /// The id one level up, derived from the index path.
    pub fn prefix_parent(&self) -> Option<CompetenceId> {
        if self.path.len() <= 1 {
            None
        } else {
            Some(CompetenceId {
                path: self.path[..self.path.len() - 1].to_vec(),
            })
        }
    }
}

impl fmt::Display for CompetenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C")?;
        for (i, idx) in self.path.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{idx}")?;
        }
        Ok(())
    }
}

impl FromStr for CompetenceId {
    type Err = TreeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CompetenceId::parse(s)
    }
}

impl TryFrom<String> for CompetenceId {
    type Error = TreeError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        CompetenceId::parse(&s)
    }
}

impl From<CompetenceId> for String {
    fn from(id: CompetenceId) -> String {
        id.to_string()
    }
}

/// One node of the competence taxonomy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompetenceNode {
    pub id: CompetenceId,
    pub name: String,
    pub parent: Option<CompetenceId>,
}

impl CompetenceNode {
    pub fn new(
        id: &str,
        name: impl Into<String>,
        parent: Option<&str>,
    ) -> Result<Self, TreeError> {
        Ok(CompetenceNode {
            id: CompetenceId::parse(id)?,
            name: name.into(),
            parent: parent.map(CompetenceId::parse).transpose()?,
        })
    }

    pub fn level(&self) -> u8 {
        self.id.level()
    }
}

/// Validated three-level competence taxonomy with indexed lookups.
#[derive(Debug, Clone)]
pub struct CompetenceTree {
    nodes: Vec<CompetenceNode>,
    index: HashMap<CompetenceId, usize>,
    children: Vec<Vec<usize>>,
    roots: Vec<usize>,
}

/// Read-only view of one node: level, parent, ordered children and the
/// leaf descendants below it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeView<'a> {
    pub id: &'a CompetenceId,
    pub name: &'a str,
    pub level: u8,
    pub parent: Option<&'a CompetenceId>,
    pub children: Vec<&'a CompetenceId>,
    pub leaf_descendants: Vec<&'a CompetenceId>,
}

impl CompetenceTree {
    /// Builds and validates a tree from a node list. Order-insensitive:
    /// children and roots always come out sorted by id.
    pub fn build(node_list: Vec<CompetenceNode>) -> Result<Self, TreeError> {
        let mut nodes = node_list;
        nodes.sort_by(|a, b| a.id.cmp(&b.id));

        let mut index = HashMap::with_capacity(nodes.len());
        for (i, node) in nodes.iter().enumerate() {
            if index.insert(node.id.clone(), i).is_some() {
                return Err(TreeError::DuplicateId(node.id.to_string()));
            }
        }

        let mut children = vec![Vec::new(); nodes.len()];
        let mut roots = Vec::new();
        for (i, node) in nodes.iter().enumerate() {
            let level = node.level();
            match (&node.parent, level) {
                (None, 1) => roots.push(i),
                (None, _) | (Some(_), 1) => {
                    return Err(TreeError::ParentLevelMismatch {
                        id: node.id.to_string(),
                        level,
                        parent: node.parent.as_ref().map(|p| p.to_string()),
                    })
                }
                (Some(parent), _) => {
                    let pi = *index.get(parent).ok_or_else(|| TreeError::MissingParent {
                        id: node.id.to_string(),
                        parent: parent.to_string(),
                    })?;
                    if nodes[pi].level() != level - 1 {
                        return Err(TreeError::ParentLevelMismatch {
                            id: node.id.to_string(),
                            level,
                            parent: Some(parent.to_string()),
                        });
                    }
                    children[pi].push(i);
                }
            }
        }

        // nodes are sorted by id, so child index lists are already ordered
        for (i, node) in nodes.iter().enumerate() {
            if node.level() < 3 && children[i].is_empty() {
                return Err(TreeError::OrphanInternal(node.id.to_string()));
            }
        }
        if roots.is_empty() {
            return Err(TreeError::OrphanInternal("<no roots>".to_string()));
        }

        Ok(CompetenceTree {
            nodes,
            index,
            children,
            roots,
        })
    }

    fn idx(&self, id: &CompetenceId) -> Result<usize, TreeError> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| TreeError::UnknownId(id.to_string()))
    }

    pub fn contains(&self, id: &CompetenceId) -> bool {
        self.index.contains_key(id)
    }

    pub fn node(&self, id: &CompetenceId) -> Result<&CompetenceNode, TreeError> {
        Ok(&self.nodes[self.idx(id)?])
    }

    /// Full node view: level, parent, ordered children, leaf descendants.
    pub fn query(&self, id: &CompetenceId) -> Result<NodeView<'_>, TreeError> {
        let i = self.idx(id)?;
        let node = &self.nodes[i];
        let children: Vec<_> = self.children[i].iter().map(|&c| &self.nodes[c].id).collect();
        let mut leaves = Vec::new();
        self.collect_leaves(i, &mut leaves);
        Ok(NodeView {
            id: &node.id,
            name: &node.name,
            level: node.level(),
            parent: node.parent.as_ref(),
            children,
            leaf_descendants: leaves,
        })
    }

    fn collect_leaves<'a>(&'a self, i: usize, out: &mut Vec<&'a CompetenceId>) {
        if self.children[i].is_empty() {
            out.push(&self.nodes[i].id);
        } else {
            for &c in &self.children[i] {
                self.collect_leaves(c, out);
            }
        }
    }

    /// Ordered children of a node.
    pub fn children(&self, id: &CompetenceId) -> Result<Vec<&CompetenceId>, TreeError> {
        let i = self.idx(id)?;
        Ok(self.children[i].iter().map(|&c| &self.nodes[c].id).collect())
    }

    /// All ids at the given level, in id order.
    pub fn level_ids(&self, level: u8) -> Vec<&CompetenceId> {
        self.nodes
            .iter()
            .filter(|n| n.level() == level)
            .map(|n| &n.id)
            .collect()
    }

    /// Number of nodes at the given level.
    pub fn level_len(&self, level: u8) -> usize {
        self.nodes.iter().filter(|n| n.level() == level).count()
    }

    /// Root ids in id order.
    pub fn roots(&self) -> Vec<&CompetenceId> {
        self.roots.iter().map(|&i| &self.nodes[i].id).collect()
    }

    pub fn nodes(&self) -> &[CompetenceNode] {
        &self.nodes
    }
}

/// Maps a lexical importance term to its 1-5 score.
///
/// Matching is case-insensitive after trimming and collapsing internal
/// whitespace.
pub fn importance_to_score(term: &str) -> Result<u8, UnknownTerm> {
    let normalized = term
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_ascii_lowercase();
    match normalized.as_str() {
        "very important" => Ok(5),
        "important" => Ok(4),
        "moderately important" => Ok(3),
        "of little importance" => Ok(2),
        "unimportant" => Ok(1),
        _ => Err(UnknownTerm(term.to_string())),
    }
}

/// The five recognised importance terms, highest first.
pub const IMPORTANCE_TERMS: [&str; 5] = [
    "Very Important",
    "Important",
    "Moderately Important",
    "Of Little Importance",
    "Unimportant",
];

/// Error for an importance term outside the fixed vocabulary.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown importance term {0:?}")]
pub struct UnknownTerm(pub String);

impl UnknownTerm {
    pub fn rule_name(&self) -> &'static str {
        "UnknownTerm"
    }
}

/// Builds the canonical 3/12/48 taxonomy used by the test fixtures: three
/// roots, four children per internal node, names defaulting to the id text.
pub fn canonical_tree() -> CompetenceTree {
    let mut nodes = Vec::new();
    for i in 1..=3u32 {
        nodes.push(CompetenceNode::new(&format!("C{i}"), format!("C{i}"), None).unwrap());
        for j in 1..=4u32 {
            nodes.push(
                CompetenceNode::new(
                    &format!("C{i}.{j}"),
                    format!("C{i}.{j}"),
                    Some(&format!("C{i}")),
                )
                .unwrap(),
            );
            for k in 1..=4u32 {
                nodes.push(
                    CompetenceNode::new(
                        &format!("C{i}.{j}.{k}"),
                        format!("C{i}.{j}.{k}"),
                        Some(&format!("C{i}.{j}")),
                    )
                    .unwrap(),
                );
            }
        }
    }
    CompetenceTree::build(nodes).expect("canonical tree is valid")
}
