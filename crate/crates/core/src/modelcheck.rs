//! The satisfaction relation over finite Kripke structures.
//!
//! `top` holds everywhere and `bot` nowhere; a proposition holds where the
//! valuation says so; `f + g` holds where exactly one operand holds;
//! `<i>f` holds where some relation-i successor satisfies `f`; `[i]f`
//! holds where every relation-i successor does. Box is evaluated natively
//! rather than through box-lowering; the equivalence of the two routes is
//! enforced by tests.
//!
//! Evaluation labels every world per subformula, bottom-up, memoized by
//! node identity, so shared subterms are computed once per world. The
//! translated formulas repeat their psi-subterms fourfold per conjunction
//! level; without sharing, evaluation would be exponential in the
//! bracketing depth.

use std::collections::{BTreeSet, HashMap};

use crate::error::Result;
use crate::formula::{Formula, FormulaKind};
use crate::kripke::KripkeStructure;

/// One bit per world.
#[derive(Clone, PartialEq, Eq)]
struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    fn zeros(len: usize) -> Self {
        Bits {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    fn ones(len: usize) -> Self {
        let mut bits = Bits::zeros(len);
        for w in 0..len {
            bits.set(w);
        }
        bits
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn xor(&self, other: &Bits) -> Bits {
        Bits {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a ^ b)
                .collect(),
            len: self.len,
        }
    }

    fn iter_set(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }
}

/// The result of evaluating a formula on a structure: per-subformula
/// truth sets, queryable for any shared subterm of the root.
pub struct Labeling<'m> {
    structure: &'m KripkeStructure,
    root: Formula,
    sets: HashMap<usize, Bits>,
}

impl<'m> Labeling<'m> {
    pub fn root(&self) -> &Formula {
        &self.root
    }

    /// Truth value of the root formula at a world.
    pub fn holds_at(&self, world: &str) -> Result<bool> {
        self.subformula_holds_at(&self.root.clone(), world)
            .map(|v| v.expect("root is always labeled"))
    }

    /// Truth value of `f` at a world, provided `f` is a node of the
    /// labeled formula (same shared subterm, not merely equal text).
    pub fn subformula_holds_at(&self, f: &Formula, world: &str) -> Result<Option<bool>> {
        let idx = self.structure.world_index(world)?;
        Ok(self.sets.get(&f.id()).map(|bits| bits.get(idx)))
    }

    /// Worlds where the root formula holds.
    pub fn worlds(&self) -> BTreeSet<String> {
        self.sets[&self.root.id()]
            .iter_set()
            .map(|i| self.structure.world_name(i).to_string())
            .collect()
    }
}

/// Evaluate `f` at every world of `m`.
pub fn label<'m>(m: &'m KripkeStructure, f: &Formula) -> Result<Labeling<'m>> {
    let n = m.world_count();

    let mut prop_bits: HashMap<&str, Bits> = HashMap::new();
    for idx in 0..n {
        for prop in m.valuation_by_index(idx) {
            prop_bits
                .entry(prop.as_str())
                .or_insert_with(|| Bits::zeros(n))
                .set(idx);
        }
    }

    // successor lists, built lazily for relations that are not equivalences
    let mut adjacency: Vec<Option<Vec<Vec<usize>>>> = vec![None; m.arity()];

    let mut sets: HashMap<usize, Bits> = HashMap::new();
    let mut stack: Vec<(Formula, bool)> = vec![(f.clone(), false)];
    while let Some((node, expanded)) = stack.pop() {
        if sets.contains_key(&node.id()) {
            continue;
        }
        if !expanded {
            stack.push((node.clone(), true));
            match node.kind() {
                FormulaKind::Xor(a, b) => {
                    stack.push((a.clone(), false));
                    stack.push((b.clone(), false));
                }
                FormulaKind::Dia(_, a) | FormulaKind::Box(_, a) => {
                    stack.push((a.clone(), false));
                }
                _ => {}
            }
            continue;
        }
        let bits = match node.kind() {
            FormulaKind::Top => Bits::ones(n),
            FormulaKind::Bot => Bits::zeros(n),
            FormulaKind::Prop(p) => prop_bits
                .get(p.as_str())
                .cloned()
                .unwrap_or_else(|| Bits::zeros(n)),
            FormulaKind::Xor(a, b) => sets[&a.id()].xor(&sets[&b.id()]),
            FormulaKind::Dia(i, a) => {
                modal(m, &mut adjacency, *i, &sets[&a.id()], Mode::Some)?
            }
            FormulaKind::Box(i, a) => {
                modal(m, &mut adjacency, *i, &sets[&a.id()], Mode::Every)?
            }
        };
        sets.insert(node.id(), bits);
    }

    Ok(Labeling {
        structure: m,
        root: f.clone(),
        sets,
    })
}

#[derive(Clone, Copy, PartialEq)]
enum Mode {
    Some,
    Every,
}

fn modal(
    m: &KripkeStructure,
    adjacency: &mut [Option<Vec<Vec<usize>>>],
    index: u32,
    body: &Bits,
    mode: Mode,
) -> Result<Bits> {
    let rel0 = m.check_index(index)?;
    let n = m.world_count();
    let mut out = Bits::zeros(n);

    // equivalence relations evaluate per class: a diamond holds on the
    // whole class iff some member satisfies the body, a box iff all do
    if let Some(partition) = &m.analysis()[rel0].partition {
        for class in &partition.classes {
            let hit = match mode {
                Mode::Some => class.iter().any(|&w| body.get(w)),
                Mode::Every => class.iter().all(|&w| body.get(w)),
            };
            if hit {
                for &w in class {
                    out.set(w);
                }
            }
        }
        return Ok(out);
    }

    let succs = adjacency[rel0].get_or_insert_with(|| {
        let mut lists: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(u, v) in m.relation(rel0) {
            lists[u].push(v);
        }
        lists
    });
    for w in 0..n {
        let hit = match mode {
            Mode::Some => succs[w].iter().any(|&v| body.get(v)),
            // vacuously true without successors
            Mode::Every => succs[w].iter().all(|&v| body.get(v)),
        };
        if hit {
            out.set(w);
        }
    }
    Ok(out)
}

/// Does `f` hold at `world` of `m`?
pub fn check(m: &KripkeStructure, world: &str, f: &Formula) -> Result<bool> {
    label(m, f)?.holds_at(world)
}

/// All worlds of `m` where `f` holds.
pub fn label_worlds(m: &KripkeStructure, f: &Formula) -> Result<BTreeSet<String>> {
    Ok(label(m, f)?.worlds())
}
