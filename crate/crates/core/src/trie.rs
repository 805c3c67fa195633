//! Permutation tries: one trie per erasure pattern, with the pattern's
//! unerased positions ordered first so a query's known symbols always form a
//! prefix. Retrieval walks `n` levels regardless of `m` or `l`.
//!
//! Only permutations of the form "unerased positions ascending, then erased
//! positions ascending" are ever selected, so one trie per pattern (`2^n`)
//! suffices instead of one per permutation (`n!`).

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::memory::AssociativeMemory;
use crate::word::{ceil_log2, PartialWord, RetrievalResult, Status, Symbol, Word, WordSet};

/// Largest `n` accepted by an eager build.
pub const DEFAULT_EAGER_CAP: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TrieMode {
    /// Build all `2^n` pattern tries up front.
    Eager,
    /// Build a pattern's trie on the first query that needs it.
    #[default]
    Lazy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PathPolicy {
    /// Pick each child with probability proportional to its leaf count; the
    /// returned word is uniform over the consistent words.
    #[default]
    LeafWeighted,
    /// Always follow the smallest symbol.
    FirstChild,
}

#[derive(Debug, Clone)]
struct Node {
    // sorted by symbol
    children: Vec<(Symbol, u32)>,
    leaf_count: u32,
}

impl Node {
    fn new() -> Self {
        Node {
            children: Vec::new(),
            leaf_count: 0,
        }
    }

    fn child(&self, s: Symbol) -> Option<u32> {
        self.children
            .binary_search_by_key(&s, |&(sym, _)| sym)
            .ok()
            .map(|i| self.children[i].1)
    }
}

/// A trie over the words of a set after reordering their positions by `perm`.
#[derive(Debug, Clone)]
pub struct PermutationTrie {
    perm: Vec<usize>,
    nodes: Vec<Node>,
}

impl PermutationTrie {
    pub fn build(set: &WordSet, perm: Vec<usize>) -> Self {
        let mut nodes = vec![Node::new()];
        for w in set.iter() {
            let mut cur = 0usize;
            nodes[0].leaf_count += 1;
            for &p in &perm {
                let s = w[p];
                let next = match nodes[cur]
                    .children
                    .binary_search_by_key(&s, |&(sym, _)| sym)
                {
                    Ok(i) => nodes[cur].children[i].1 as usize,
                    Err(i) => {
                        let id = nodes.len();
                        nodes.push(Node::new());
                        nodes[cur].children.insert(i, (s, id as u32));
                        id
                    }
                };
                nodes[next].leaf_count += 1;
                cur = next;
            }
        }
        PermutationTrie { perm, nodes }
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// Stored words below the root.
    pub fn leaf_count(&self) -> u32 {
        self.nodes[0].leaf_count
    }

    /// Nodes other than the root; each carries one symbol.
    pub fn node_count(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Checks the structural invariants: every leaf at depth `n`, children's
    /// leaf counts sum to their parent's.
    pub fn check_invariants(&self) -> bool {
        let n = self.perm.len();
        let mut stack = vec![(0usize, 0usize)];
        while let Some((id, depth)) = stack.pop() {
            let node = &self.nodes[id];
            if node.children.is_empty() {
                if depth != n || node.leaf_count != 1 {
                    return false;
                }
                continue;
            }
            let sum: u32 = node
                .children
                .iter()
                .map(|&(_, c)| self.nodes[c as usize].leaf_count)
                .sum();
            if sum != node.leaf_count || depth >= n {
                return false;
            }
            stack.extend(node.children.iter().map(|&(_, c)| (c as usize, depth + 1)));
        }
        true
    }

    /// Follows `q`'s unerased symbols (which `perm` places first), then
    /// completes the path by `policy`. `op_count` counts visited nodes,
    /// the root included.
    pub fn retrieve<R: Rng + ?Sized>(
        &self,
        q: &PartialWord,
        policy: PathPolicy,
        rng: &mut R,
    ) -> RetrievalResult {
        let n = self.perm.len();
        let known = n - q.erased_count();
        let mut ops = 1u64;
        let mut cur = 0usize;
        let mut path = Vec::with_capacity(n);
        for &p in &self.perm[..known] {
            let s = q
                .get(p)
                .expect("permutation lists unerased positions first");
            match self.nodes[cur].child(s) {
                Some(c) => {
                    cur = c as usize;
                    path.push(s);
                    ops += 1;
                }
                None => return RetrievalResult::no_match(Some(0), ops),
            }
        }
        let count = self.nodes[cur].leaf_count;
        let mut rank = match policy {
            // Drawn as usize so the stream matches the brute-force tie draw.
            PathPolicy::LeafWeighted if count > 1 => rng.gen_range(0..count as usize) as u32,
            _ => 0,
        };
        while path.len() < n {
            let node = &self.nodes[cur];
            let mut chosen = node.children[0];
            if policy == PathPolicy::LeafWeighted {
                for &(s, c) in &node.children {
                    let below = self.nodes[c as usize].leaf_count;
                    if rank < below {
                        chosen = (s, c);
                        break;
                    }
                    rank -= below;
                }
            }
            path.push(chosen.0);
            cur = chosen.1 as usize;
            ops += 1;
        }
        let mut word = vec![0; n];
        for (&p, &s) in self.perm.iter().zip(&path) {
            word[p] = s;
        }
        RetrievalResult {
            word: Some(Word(word)),
            status: if count == 1 {
                Status::Unique
            } else {
                Status::Ambiguous
            },
            candidate_count: Some(count as u64),
            op_count: ops,
        }
    }
}

/// Unerased positions of `q` in increasing order, then erased positions in
/// increasing order.
pub fn permutation_for(q: &PartialWord) -> Vec<usize> {
    let (mut known, erased): (Vec<usize>, Vec<usize>) =
        (0..q.len()).partition(|&i| !q.is_erased(i));
    known.extend(erased);
    known
}

fn permutation_for_mask(n: usize, mask: u64) -> Vec<usize> {
    let (mut known, erased): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| mask >> i & 1 == 0);
    known.extend(erased);
    known
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrieStats {
    pub trie_count: usize,
    pub node_count: usize,
    pub estimated_bits: f64,
}

/// The trie-based maximum-likelihood memory.
#[derive(Debug)]
pub struct TrieMemory {
    set: WordSet,
    mode: TrieMode,
    path_policy: PathPolicy,
    // erasure mask -> trie; lazy mode publishes each pattern once
    tries: RwLock<HashMap<u64, Arc<PermutationTrie>>>,
}

impl TrieMemory {
    pub fn build(set: WordSet, mode: TrieMode) -> Result<Self> {
        Self::build_with_cap(set, mode, DEFAULT_EAGER_CAP)
    }

    pub fn build_with_cap(set: WordSet, mode: TrieMode, eager_cap: usize) -> Result<Self> {
        let n = set.n();
        if n > 64 {
            return Err(Error::resource("trie memory supports n <= 64"));
        }
        let mut tries = HashMap::new();
        if mode == TrieMode::Eager {
            if n > eager_cap {
                return Err(Error::resource(format!(
                    "eager trie build needs 2^{n} tries; cap is n <= {eager_cap}"
                )));
            }
            for mask in 0u64..1 << n {
                tries.insert(
                    mask,
                    Arc::new(PermutationTrie::build(&set, permutation_for_mask(n, mask))),
                );
            }
        }
        Ok(TrieMemory {
            set,
            mode,
            path_policy: PathPolicy::default(),
            tries: RwLock::new(tries),
        })
    }

    pub fn with_path_policy(mut self, policy: PathPolicy) -> Self {
        self.path_policy = policy;
        self
    }

    pub fn mode(&self) -> TrieMode {
        self.mode
    }

    pub fn word_set(&self) -> &WordSet {
        &self.set
    }

    /// The trie serving erasure pattern `mask`, building it if needed.
    pub fn trie_for_mask(&self, mask: u64) -> Arc<PermutationTrie> {
        if let Some(t) = self.tries.read().expect("trie map poisoned").get(&mask) {
            return Arc::clone(t);
        }
        let built = Arc::new(PermutationTrie::build(
            &self.set,
            permutation_for_mask(self.set.n(), mask),
        ));
        let mut map = self.tries.write().expect("trie map poisoned");
        Arc::clone(map.entry(mask).or_insert(built))
    }

    pub fn retrieve<R: Rng + ?Sized>(
        &self,
        q: &PartialWord,
        policy: PathPolicy,
        rng: &mut R,
    ) -> RetrievalResult {
        assert_eq!(q.len(), self.set.n(), "query length must equal word length");
        self.trie_for_mask(q.erasure_mask())
            .retrieve(q, policy, rng)
    }

    pub fn stats(&self) -> TrieStats {
        let map = self.tries.read().expect("trie map poisoned");
        let node_count: usize = map.values().map(|t| t.node_count()).sum();
        let sym_bits = self.set.alphabet().bits_per_symbol() as f64;
        let ptr_bits = ceil_log2(node_count as u64 + map.len() as u64) as f64;
        let count_bits = ceil_log2(self.set.m() as u64 + 1) as f64;
        TrieStats {
            trie_count: map.len(),
            node_count,
            estimated_bits: node_count as f64 * (sym_bits + ptr_bits + count_bits),
        }
    }
}

impl AssociativeMemory for TrieMemory {
    fn label(&self) -> String {
        "trie".into()
    }

    fn recall(&self, query: &PartialWord, rng: &mut dyn RngCore) -> RetrievalResult {
        self.retrieve(query, self.path_policy, rng)
    }

    /// Symbol, child pointer and leaf count per built node.
    fn memory_bits(&self) -> f64 {
        self.stats().estimated_bits
    }

    /// One node touch per (word, position) per built trie.
    fn store_ops(&self) -> u64 {
        let tries = self.tries.read().expect("trie map poisoned").len() as u64;
        tries * (self.set.m() * self.set.n()) as u64
    }
}
