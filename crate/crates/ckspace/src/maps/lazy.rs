use std::collections::HashSet;

use super::MapError;
use crate::compact_open::{BasicBox, RefinementCert};
use crate::schemes::{SchemeError, SchemeTree};

/// The injection `φ(n) = min(D_{t_n} ∖ φ[n])` of an exact scheme tree,
/// computed on demand.
///
/// `t_n` is the level-`n` node containing `n`, or the deepest-level one when
/// `n` is past the height. Values `φ(0..=height)` are final; later ones are
/// provisional and recomputed after the tree deepens.
#[derive(Debug, Clone)]
pub struct LazyInjection {
    tree: SchemeTree,
    memo: Vec<u64>,
    used: HashSet<u64>,
}

impl LazyInjection {
    /// Wraps an exact tree of any height, including a bare root.
    pub(crate) fn new(tree: SchemeTree) -> Self {
        LazyInjection {
            tree,
            memo: Vec::new(),
            used: HashSet::new(),
        }
    }

    /// A hand-made memo, for checking the verifier against bad data.
    pub fn from_memo(tree: SchemeTree, memo: Vec<u64>) -> Self {
        let used = memo.iter().copied().collect();
        LazyInjection { tree, memo, used }
    }

    pub fn tree(&self) -> &SchemeTree {
        &self.tree
    }

    pub fn height(&self) -> usize {
        self.tree.height()
    }

    /// Everything computed so far, provisional values included.
    pub fn memo(&self) -> &[u64] {
        &self.memo
    }

    pub fn finalized_len(&self) -> usize {
        self.height() + 1
    }

    /// `φ(0..=height)`.
    pub fn finalized(&mut self) -> &[u64] {
        self.prefix(self.finalized_len())
    }

    /// `φ(n)`, provided level `n` is built.
    pub fn apply(&mut self, n: u64) -> Result<u64, MapError> {
        if n > self.height() as u64 {
            return Err(MapError::NotDeepEnough {
                n,
                height: self.height(),
            });
        }
        Ok(self.prefix(n as usize + 1)[n as usize])
    }

    /// `φ(0..len)`, computing as needed.
    pub fn prefix(&mut self, len: usize) -> &[u64] {
        while self.memo.len() < len {
            let n = self.memo.len() as u64;
            let level = (n as usize).min(self.tree.height());
            let t = self
                .tree
                .locate(n, level)
                .expect("exact tree covers every natural");
            let v = self
                .tree
                .node(t)
                .d
                .min_excluding(&self.used)
                .expect("scheme targets are infinite");
            self.used.insert(v);
            self.memo.push(v);
        }
        &self.memo[..len]
    }

    /// Deepens the tree by one level and drops provisional values.
    pub fn append_level(
        &mut self,
        bx: &BasicBox,
        cert: &RefinementCert,
    ) -> Result<(), SchemeError> {
        let keep = self.finalized_len();
        self.tree.append_level(bx, cert)?;
        if self.memo.len() > keep {
            for v in self.memo.drain(keep..) {
                self.used.remove(&v);
            }
        }
        Ok(())
    }
}
