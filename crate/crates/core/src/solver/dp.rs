//! Dynamic program over a path decomposition of the underlying undirected
//! graph.
//!
//! The decomposition is replayed as a sequence of single-vertex forget and
//! introduce steps. Every arc between two vertices is decided when the later
//! of the two is introduced, so each arc is considered exactly once. A state
//! describes the current bag: per slot whether the vertex is used, already
//! has its tree in-arc, already has a child, and which partial-tree component
//! it belongs to. Two global flags record that the (unique) root has been
//! forgotten and that a finished component has left the bag.

use std::collections::{BTreeSet, HashMap};

use crate::decomposition::PathDecomposition;
use crate::digraph::Digraph;
use crate::error::SolveError;
use crate::solver::Mode;
use crate::tree::OutTree;

/// Widest decomposition the state encoding supports.
pub const MAX_DP_WIDTH: usize = 63;

const USED: u8 = 1;
const PARENTED: u8 = 2;
const HAS_CHILD: u8 = 4;
const NO_COMP: u8 = u8::MAX;

const ROOT_DONE: u8 = 1;
const CLOSED: u8 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DpConfig {
    pub mode: Mode,
    /// Leaf counts saturate here.
    pub leaf_cap: usize,
    pub width_budget: usize,
    /// Total number of table entries kept across all steps.
    pub table_budget: usize,
}

impl DpConfig {
    pub fn new(mode: Mode, leaf_cap: usize) -> Self {
        DpConfig {
            mode,
            leaf_cap,
            width_budget: 16,
            table_budget: 10_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpResult {
    /// `min(optimum, leaf_cap)`, 0 when no tree of the requested kind exists.
    pub value: usize,
    pub witness: Option<OutTree>,
    pub states: usize,
}

#[derive(Clone, Copy, Debug)]
enum Op {
    Introduce(usize),
    Forget(usize),
}

#[derive(Clone, Copy)]
struct Entry {
    prev: u32,
    leaves: u32,
    used: bool,
    /// Bit `2i`: arc from slot `i` into the introduced vertex.
    /// Bit `2i + 1`: arc from the introduced vertex to slot `i`.
    arcs: u128,
}

struct Table {
    keys: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, u32>,
    entries: Vec<Entry>,
}

impl Table {
    fn new() -> Self {
        Table {
            keys: Vec::new(),
            index: HashMap::new(),
            entries: Vec::new(),
        }
    }

    fn offer(&mut self, key: Vec<u8>, entry: Entry) {
        if let Some(&i) = self.index.get(&key) {
            let slot = &mut self.entries[i as usize];
            if entry.leaves > slot.leaves {
                *slot = entry;
            }
            return;
        }
        self.index.insert(key.clone(), self.entries.len() as u32);
        self.keys.push(key);
        self.entries.push(entry);
    }
}

fn operations(pd: &PathDecomposition) -> Vec<Op> {
    let mut ops = Vec::new();
    let empty = BTreeSet::new();
    let mut prev = &empty;
    for bag in &pd.bags {
        ops.extend(prev.difference(bag).map(|&v| Op::Forget(v)));
        ops.extend(bag.difference(prev).map(|&v| Op::Introduce(v)));
        prev = bag;
    }
    ops.extend(prev.iter().map(|&v| Op::Forget(v)));
    ops
}

/// Relabels components by first appearance among used slots.
fn normalize(key: &mut [u8]) {
    let mut map = [NO_COMP; 256];
    let mut next = 0u8;
    for slot in key[1..].chunks_exact_mut(2) {
        if slot[0] & USED == 0 {
            slot[1] = NO_COMP;
            continue;
        }
        let c = slot[1] as usize;
        if map[c] == NO_COMP {
            map[c] = next;
            next += 1;
        }
        slot[1] = map[c];
    }
}

/// Exact optimum over spanning out-trees (`Mode::Spanning`) or all out-trees
/// (`Mode::Subtree`), saturated at `cfg.leaf_cap`, together with a tree
/// attaining it.
pub fn dp_pathwidth(d: &Digraph, pd: &PathDecomposition, cfg: &DpConfig) -> Result<DpResult, SolveError> {
    let n = d.n();
    let violations = pd.violations(&d.underlying_undirected());
    if !violations.is_empty() {
        let list: Vec<String> = violations.iter().map(ToString::to_string).collect();
        return Err(SolveError::InvalidDecomposition(list.join("; ")));
    }
    let width = pd.width().max(0) as usize;
    let limit = cfg.width_budget.min(MAX_DP_WIDTH);
    if width > limit {
        return Err(SolveError::OverBudget(format!(
            "decomposition width {width} exceeds budget {limit}"
        )));
    }
    if n == 0 {
        return Ok(DpResult { value: 0, witness: None, states: 0 });
    }
    let cap = cfg.leaf_cap.max(1) as u32;
    let spanning = cfg.mode == Mode::Spanning;

    let ops = operations(pd);
    let mut bag: Vec<usize> = Vec::new();
    // Bag contents before each step, for decoding arcs afterwards.
    let mut bags_before: Vec<Vec<usize>> = Vec::with_capacity(ops.len());
    let mut layers: Vec<Vec<Entry>> = Vec::with_capacity(ops.len());
    let mut current = Table::new();
    current.offer(vec![0], Entry { prev: 0, leaves: 0, used: false, arcs: 0 });
    let mut total = 1usize;

    for &op in &ops {
        bags_before.push(bag.clone());
        let mut next = Table::new();
        match op {
            Op::Introduce(v) => {
                let links: Vec<(bool, bool)> =
                    bag.iter().map(|&u| (d.has_arc(u, v), d.has_arc(v, u))).collect();
                for (idx, key) in current.keys.iter().enumerate() {
                    let leaves = current.entries[idx].leaves;
                    let base = Entry { prev: idx as u32, leaves, used: false, arcs: 0 };
                    if !spanning {
                        let mut k = key.clone();
                        k.extend([0, NO_COMP]);
                        next.offer(k, base);
                    }
                    if key[0] & CLOSED == 0 {
                        let mut e = Introduce { key, links: &links, base, out: &mut next };
                        e.run(0, 0, false, 0);
                    }
                }
                bag.push(v);
            }
            Op::Forget(v) => {
                let s = bag.iter().position(|&u| u == v).expect("forgotten vertex is in the bag");
                for (idx, key) in current.keys.iter().enumerate() {
                    let leaves = current.entries[idx].leaves;
                    if let Some((k, leaves)) = forget(key, s, leaves, cap) {
                        next.offer(k, Entry { prev: idx as u32, leaves, used: false, arcs: 0 });
                    }
                }
                bag.remove(s);
            }
        }
        total += next.entries.len();
        if total > cfg.table_budget {
            return Err(SolveError::OverBudget(format!(
                "table budget {} exceeded",
                cfg.table_budget
            )));
        }
        layers.push(std::mem::take(&mut current.entries));
        current = next;
    }

    let mut best: Option<(u32, usize)> = None;
    for (idx, key) in current.keys.iter().enumerate() {
        let leaves = current.entries[idx].leaves;
        if key[0] & CLOSED != 0 && best.is_none_or(|(b, _)| leaves > b) {
            best = Some((leaves, idx));
        }
    }
    let Some((value, idx)) = best else {
        return Ok(DpResult { value: 0, witness: None, states: total });
    };

    // Walk the back-pointers.
    let mut used = Vec::new();
    let mut arcs = Vec::new();
    let mut at = idx;
    for (step, &op) in ops.iter().enumerate().rev() {
        let e = match layers.get(step + 1) {
            Some(layer) => layer[at],
            None => current.entries[at],
        };
        if let Op::Introduce(v) = op {
            if e.used {
                used.push(v);
                for (i, &u) in bags_before[step].iter().enumerate() {
                    if e.arcs >> (2 * i) & 1 == 1 {
                        arcs.push((u, v));
                    }
                    if e.arcs >> (2 * i + 1) & 1 == 1 {
                        arcs.push((v, u));
                    }
                }
            }
        }
        at = e.prev as usize;
    }
    let children: BTreeSet<usize> = arcs.iter().map(|&(_, c)| c).collect();
    let root = used
        .iter()
        .copied()
        .find(|v| !children.contains(v))
        .expect("accepted states contain a root");
    let witness = OutTree::from_arcs(root, n, arcs);
    debug_assert!(witness.leaf_count() as u32 >= value);
    Ok(DpResult {
        value: value as usize,
        witness: Some(witness),
        states: total,
    })
}

fn forget(key: &[u8], s: usize, leaves: u32, cap: u32) -> Option<(Vec<u8>, u32)> {
    let status = key[1 + 2 * s];
    let comp = key[2 + 2 * s];
    let mut k = Vec::with_capacity(key.len() - 2);
    k.extend_from_slice(&key[..1 + 2 * s]);
    k.extend_from_slice(&key[3 + 2 * s..]);
    if status & USED == 0 {
        return Some((k, leaves));
    }
    let mut leaves = leaves;
    if status & PARENTED == 0 {
        if k[0] & ROOT_DONE != 0 {
            return None;
        }
        k[0] |= ROOT_DONE;
    }
    if status & HAS_CHILD == 0 {
        leaves = (leaves + 1).min(cap);
    }
    let slots = k[1..].chunks_exact(2);
    if !slots.clone().any(|sl| sl[0] & USED != 0 && sl[1] == comp) {
        if slots.clone().any(|sl| sl[0] & USED != 0) {
            return None;
        }
        k[0] |= CLOSED;
    }
    normalize(&mut k);
    Some((k, leaves))
}

/// Enumerates the arc choices for a newly introduced used vertex.
struct Introduce<'a> {
    key: &'a [u8],
    links: &'a [(bool, bool)],
    base: Entry,
    out: &'a mut Table,
}

impl Introduce<'_> {
    fn run(&mut self, i: usize, merged: u64, parented: bool, arcs: u128) {
        if i == self.links.len() {
            self.emit(merged, parented, arcs);
            return;
        }
        self.run(i + 1, merged, parented, arcs);
        let status = self.key[1 + 2 * i];
        if status & USED == 0 {
            return;
        }
        let comp = self.key[2 + 2 * i];
        if merged >> comp & 1 == 1 {
            return;
        }
        let (into, from) = self.links[i];
        if into && !parented {
            self.run(i + 1, merged | 1 << comp, true, arcs | 1 << (2 * i));
        }
        if from && status & PARENTED == 0 {
            self.run(i + 1, merged | 1 << comp, parented, arcs | 1 << (2 * i + 1));
        }
    }

    fn emit(&mut self, merged: u64, parented: bool, arcs: u128) {
        let slots = self.links.len();
        // Fresh label above every existing one.
        let fresh = slots as u8;
        let mut k = self.key.to_vec();
        let mut status = USED;
        if parented {
            status |= PARENTED;
        }
        for i in 0..slots {
            let st = &mut k[1 + 2 * i];
            if arcs >> (2 * i) & 1 == 1 {
                *st |= HAS_CHILD;
            }
            if arcs >> (2 * i + 1) & 1 == 1 {
                *st |= PARENTED;
                status |= HAS_CHILD;
            }
            let c = k[2 + 2 * i];
            if c != NO_COMP && merged >> c & 1 == 1 {
                k[2 + 2 * i] = fresh;
            }
        }
        k.extend([status, fresh]);
        normalize(&mut k);
        self.out.offer(
            k,
            Entry {
                used: true,
                arcs,
                ..self.base
            },
        );
    }
}
