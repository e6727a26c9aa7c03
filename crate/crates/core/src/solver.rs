//! Bounded brute-force satisfiability over frame classes, plus seeded
//! random structure generation and mutation for property tests.
//!
//! The search enumerates structures in a fixed total order and returns
//! the first satisfying (structure, world) pair, so results are
//! reproducible: world counts ascend; S5 relations iterate set partitions
//! in restricted-growth order (never raw edge sets, which collapses the
//! space from 2^(n^2) to the Bell number); T and S4 iterate reflexive
//! edge supersets (S4 filtered to transitive ones) and K all edge sets,
//! each in ascending bitmask order; relation tuples nest with relation 1
//! outermost; valuations ascend as bitmasks (world-major, propositions
//! sorted); worlds are tried in declared order.
//!
//! A `None` answer means no model within the budget, never
//! unsatisfiability.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::formula::{metrics, Formula};
use crate::kripke::{FrameClass, KripkeBuilder, KripkeStructure};
use crate::modelcheck::label;

/// Budget for [`bounded_modal_sat`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_worlds: usize,
    pub max_props: usize,
    pub frame: FrameClass,
    pub arity: usize,
}

impl SearchBudget {
    /// Default desk-scale budget: 4 worlds, 3 propositions, arity 2.
    pub fn new(frame: FrameClass) -> Self {
        SearchBudget {
            max_worlds: 4,
            max_props: 3,
            frame,
            arity: 2,
        }
    }
}

/// Upper bound on the number of structures the search will enumerate
/// before refusing to start.
const ENUMERATION_GUARD: u128 = 100_000_000;

fn bell_numbers(up_to: usize) -> Vec<u128> {
    // Bell triangle
    let mut bells = vec![1u128];
    let mut row = vec![1u128];
    for _ in 1..=up_to {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let last = *next.last().unwrap();
            next.push(last + x);
        }
        bells.push(next[0]);
        row = next;
    }
    bells
}

fn relation_candidate_count(n: usize, frame: FrameClass) -> u128 {
    match frame {
        FrameClass::S5 => bell_numbers(n)[n],
        FrameClass::K => 1u128 << (n * n),
        // supersets of the diagonal; the S4 transitivity filter only shrinks this
        FrameClass::T | FrameClass::S4 => 1u128 << (n * n - n),
    }
}

/// All set partitions of `0..n` as restricted growth strings, in
/// lexicographic order.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    loop {
        out.push(rgs.clone());
        let mut i = n;
        loop {
            if i <= 1 {
                return out;
            }
            i -= 1;
            let max_before = *rgs[..i].iter().max().unwrap();
            if rgs[i] <= max_before {
                rgs[i] += 1;
                rgs[i + 1..].iter_mut().for_each(|x| *x = 0);
                break;
            }
        }
    }
}

fn partition_edges(rgs: &[usize]) -> Vec<(usize, usize)> {
    let n = rgs.len();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if rgs[u] == rgs[v] {
                edges.push((u, v));
            }
        }
    }
    edges
}

fn mask_edges(mask: u64, n: usize) -> Vec<(usize, usize)> {
    (0..n * n)
        .filter(|bit| mask >> bit & 1 == 1)
        .map(|bit| (bit / n, bit % n))
        .collect()
}

fn is_transitive(edges: &[(usize, usize)], n: usize) -> bool {
    let mut has = vec![false; n * n];
    for &(u, v) in edges {
        has[u * n + v] = true;
    }
    for &(u, v) in edges {
        for w in 0..n {
            if has[v * n + w] && !has[u * n + w] {
                return false;
            }
        }
    }
    true
}

/// Candidate relations for one modality at world count `n`.
fn relation_candidates(n: usize, frame: FrameClass) -> Vec<Vec<(usize, usize)>> {
    match frame {
        FrameClass::S5 => partitions(n).iter().map(|p| partition_edges(p)).collect(),
        FrameClass::K => (0..1u64 << (n * n)).map(|m| mask_edges(m, n)).collect(),
        FrameClass::T | FrameClass::S4 => {
            // enumerate off-diagonal masks, diagonal always present
            let off_diag: Vec<usize> = (0..n * n).filter(|bit| bit / n != bit % n).collect();
            let mut out = Vec::new();
            for mask in 0..1u64 << off_diag.len() {
                let mut edges: Vec<(usize, usize)> = (0..n).map(|w| (w, w)).collect();
                for (j, &bit) in off_diag.iter().enumerate() {
                    if mask >> j & 1 == 1 {
                        edges.push((bit / n, bit % n));
                    }
                }
                if frame == FrameClass::S4 && !is_transitive(&edges, n) {
                    continue;
                }
                edges.sort_unstable();
                out.push(edges);
            }
            out
        }
    }
}

fn build_structure(
    n: usize,
    arity: usize,
    relations: &[&Vec<(usize, usize)>],
    valuation_mask: u64,
    props: &[&str],
) -> KripkeStructure {
    let mut b = KripkeBuilder::new(arity);
    for w in 0..n {
        let labels: BTreeSet<String> = props
            .iter()
            .enumerate()
            .filter(|(j, _)| valuation_mask >> (w * props.len() + j) & 1 == 1)
            .map(|(_, p)| p.to_string())
            .collect();
        b.add_world(&format!("w{}", w + 1), labels).unwrap();
    }
    for (rel0, edges) in relations.iter().enumerate() {
        for &(u, v) in edges.iter() {
            b.add_edge(rel0 as u32 + 1, &format!("w{}", u + 1), &format!("w{}", v + 1))
                .unwrap();
        }
    }
    b.finish()
}

/// Exhaustively search for a structure of the budget's frame class
/// satisfying `f` at some world. Returns the first hit in the documented
/// order, or `None` if no model exists within the budget.
pub fn bounded_modal_sat(
    f: &Formula,
    budget: &SearchBudget,
) -> Result<Option<(KripkeStructure, String)>> {
    let m = metrics(f);
    if m.props.len() > budget.max_props {
        return Err(Error::BudgetExceeded(format!(
            "{} propositions exceed the budget of {}",
            m.props.len(),
            budget.max_props
        )));
    }
    if m.max_index as usize > budget.arity {
        return Err(Error::ModalityOutOfRange {
            index: m.max_index,
            arity: budget.arity,
        });
    }

    let props: Vec<&str> = m.props.iter().map(|p| p.as_str()).collect();
    let mut projected: u128 = 0;
    for n in 1..=budget.max_worlds {
        let per_relation = relation_candidate_count(n, budget.frame);
        let combos = per_relation
            .checked_pow(budget.arity as u32)
            .unwrap_or(u128::MAX);
        let valuations = 1u128 << (n * props.len()).min(120);
        projected = projected.saturating_add(combos.saturating_mul(valuations));
    }
    if projected > ENUMERATION_GUARD {
        return Err(Error::BudgetExceeded(format!(
            "projected enumeration of {projected} structures exceeds {ENUMERATION_GUARD}"
        )));
    }

    for n in 1..=budget.max_worlds {
        let candidates = relation_candidates(n, budget.frame);
        let mut combo: Vec<usize> = vec![0; budget.arity];
        loop {
            let relations: Vec<&Vec<(usize, usize)>> =
                combo.iter().map(|&i| &candidates[i]).collect();
            for valuation_mask in 0..1u64 << (n * props.len()) {
                let structure = build_structure(n, budget.arity, &relations, valuation_mask, &props);
                let labeling = label(&structure, f)?;
                for w in 0..n {
                    let name = format!("w{}", w + 1);
                    if labeling.holds_at(&name)? {
                        return Ok(Some((structure, name)));
                    }
                }
            }
            if !advance(&mut combo, candidates.len()) {
                break;
            }
        }
    }
    Ok(None)
}

// odometer step over `base` symbols, last position fastest; false on wrap
fn advance(combo: &mut [usize], base: usize) -> bool {
    for slot in combo.iter_mut().rev() {
        *slot += 1;
        if *slot < base {
            return true;
        }
        *slot = 0;
    }
    false
}

/// Deterministically sample a structure of the given frame class with
/// `n_worlds` worlds, arity 2, and uniform labels over `props`.
///
/// S5 relations are sampled as set partitions (a uniform restricted
/// growth process), so small partitions stay reachable; K, T, and S4
/// sample each edge with probability 1/2 and close as required.
pub fn random_model(
    seed: u64,
    n_worlds: usize,
    props: &[String],
    frame: FrameClass,
) -> KripkeStructure {
    assert!(n_worlds >= 1, "need at least one world");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let arity = 2;
    let names: Vec<String> = (1..=n_worlds).map(|i| format!("w{i}")).collect();

    let mut relations: Vec<Vec<(usize, usize)>> = Vec::with_capacity(arity);
    for _ in 0..arity {
        let edges = if frame == FrameClass::S5 {
            let mut rgs = vec![0usize; n_worlds];
            let mut classes = 1;
            for slot in rgs.iter_mut().skip(1) {
                let pick = rng.random_range(0..=classes);
                *slot = pick;
                if pick == classes {
                    classes += 1;
                }
            }
            partition_edges(&rgs)
        } else {
            let mut edges = Vec::new();
            for u in 0..n_worlds {
                for v in 0..n_worlds {
                    if rng.random_bool(0.5) {
                        edges.push((u, v));
                    }
                }
            }
            edges
        };
        relations.push(edges);
    }

    let mut b = KripkeBuilder::new(arity);
    for name in &names {
        let labels: BTreeSet<String> = props
            .iter()
            .filter(|_| rng.random_bool(0.5))
            .cloned()
            .collect();
        b.add_world(name, labels).unwrap();
    }
    for (rel0, edges) in relations.iter().enumerate() {
        for &(u, v) in edges {
            b.add_edge(rel0 as u32 + 1, &names[u], &names[v]).unwrap();
        }
    }
    b.finish().close(frame)
}

/// Apply one random mutation to an S5 structure and re-close: flip one
/// proposition at one world, merge two relation-1 classes, or split one
/// world out of a relation-1 class. Returns the input unchanged when no
/// mutation is applicable (single bare world, empty valuation).
pub fn mutate_model(m: &KripkeStructure, seed: u64) -> Result<KripkeStructure> {
    if !m.is_frame(FrameClass::S5) {
        return Err(Error::InvalidInput(
            "mutate_model requires an S5 structure".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let props: Vec<String> = m.props().into_iter().collect();
    let classes: Vec<BTreeSet<String>> = {
        let mut seen: BTreeSet<String> = BTreeSet::new();
        let mut out = Vec::new();
        for w in m.worlds() {
            if seen.contains(w) {
                continue;
            }
            let class = m.eq_class(1, w)?;
            seen.extend(class.iter().cloned());
            out.push(class);
        }
        out
    };

    #[derive(Clone, Copy, PartialEq)]
    enum Kind {
        Flip,
        Merge,
        Split,
    }
    let mut applicable = Vec::new();
    if !props.is_empty() {
        applicable.push(Kind::Flip);
    }
    if classes.len() >= 2 {
        applicable.push(Kind::Merge);
    }
    if classes.iter().any(|c| c.len() >= 2) {
        applicable.push(Kind::Split);
    }
    if applicable.is_empty() {
        return Ok(m.clone());
    }
    let kind = applicable[rng.random_range(0..applicable.len())];

    let mut b = KripkeBuilder::new(m.arity());
    let flip_target = if kind == Kind::Flip {
        let world = m.worlds()[rng.random_range(0..m.world_count())].clone();
        let prop = props[rng.random_range(0..props.len())].clone();
        Some((world, prop))
    } else {
        None
    };
    for world in m.worlds() {
        let mut labels = m.props_at(world)?.clone();
        if let Some((w, p)) = &flip_target {
            if w == world {
                if !labels.remove(p) {
                    labels.insert(p.clone());
                }
            }
        }
        b.add_world(world, labels)?;
    }

    let splitting = if kind == Kind::Split {
        let big: Vec<&BTreeSet<String>> = classes.iter().filter(|c| c.len() >= 2).collect();
        let class = big[rng.random_range(0..big.len())];
        let members: Vec<&String> = class.iter().collect();
        Some(members[rng.random_range(0..members.len())].clone())
    } else {
        None
    };
    for index in 1..=m.arity() as u32 {
        for (u, v) in m.relation_pairs(index)? {
            if index == 1 {
                if let Some(out) = &splitting {
                    if (u == out) != (v == out) {
                        continue;
                    }
                }
            }
            b.add_edge(index, u, v)?;
        }
    }
    if kind == Kind::Merge {
        let a = rng.random_range(0..classes.len());
        let mut c = rng.random_range(0..classes.len() - 1);
        if c >= a {
            c += 1;
        }
        let from = classes[a].iter().next().unwrap();
        let to = classes[c].iter().next().unwrap();
        b.add_edge(1, from, to)?;
    }

    Ok(b.finish().close(FrameClass::S5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::FrameClass;

    #[test]
    fn partition_counts_match_bell_numbers() {
        for (n, bell) in [(1, 1), (2, 2), (3, 5), (4, 15), (5, 52)] {
            assert_eq!(partitions(n).len(), bell, "bell({n})");
        }
        assert_eq!(bell_numbers(5), vec![1, 1, 2, 5, 15, 52]);
    }

    #[test]
    fn top_is_satisfied_by_the_first_singleton() {
        let budget = SearchBudget::new(FrameClass::S5);
        let (m, w) = bounded_modal_sat(&Formula::top(), &budget).unwrap().unwrap();
        assert_eq!(m.world_count(), 1);
        assert_eq!(w, "w1");
        assert!(m.is_frame(FrameClass::S5));
    }

    #[test]
    fn bot_has_no_model() {
        let budget = SearchBudget {
            max_worlds: 3,
            ..SearchBudget::new(FrameClass::S5)
        };
        assert!(bounded_modal_sat(&Formula::bot(), &budget).unwrap().is_none());
    }

    #[test]
    fn negated_diamond_forces_a_false_proposition() {
        // not <1>p on a single reflexive world forces p false there
        let f = Formula::dia(1, Formula::prop("p")).neg();
        let budget = SearchBudget {
            max_worlds: 1,
            ..SearchBudget::new(FrameClass::S5)
        };
        let (m, w) = bounded_modal_sat(&f, &budget).unwrap().unwrap();
        assert!(m.props_at(&w).unwrap().is_empty());
    }

    #[test]
    fn search_is_deterministic() {
        let f = Formula::xor(
            Formula::dia(2, Formula::prop("p")),
            Formula::box_(1, Formula::prop("q")),
        );
        let budget = SearchBudget {
            max_worlds: 2,
            ..SearchBudget::new(FrameClass::S5)
        };
        let a = bounded_modal_sat(&f, &budget).unwrap().unwrap();
        let b = bounded_modal_sat(&f, &budget).unwrap().unwrap();
        assert_eq!(a.0, b.0);
        assert_eq!(a.1, b.1);
    }

    #[test]
    fn guard_refuses_oversized_enumerations() {
        let budget = SearchBudget {
            max_worlds: 4,
            max_props: 3,
            frame: FrameClass::K,
            arity: 2,
        };
        let f = Formula::prop("p");
        assert!(matches!(
            bounded_modal_sat(&f, &budget),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn budget_rejects_excess_propositions() {
        let f = Formula::xor(
            Formula::xor(Formula::prop("a"), Formula::prop("b")),
            Formula::xor(Formula::prop("c"), Formula::prop("d")),
        );
        let budget = SearchBudget::new(FrameClass::S5);
        assert!(matches!(
            bounded_modal_sat(&f, &budget),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn random_models_are_seed_deterministic_and_well_framed() {
        let props = vec!["p".to_string(), "q".to_string()];
        for frame in [FrameClass::K, FrameClass::T, FrameClass::S4, FrameClass::S5] {
            let a = random_model(7, 4, &props, frame);
            let b = random_model(7, 4, &props, frame);
            assert_eq!(a, b);
            assert!(a.is_frame(frame), "{frame} sample satisfies its class");
            assert_ne!(a, random_model(8, 4, &props, frame));
        }
    }

    #[test]
    fn random_s5_partitions_cover_the_space() {
        // 1000 seeds over 4 worlds must hit all 15 partitions of relation 1
        let props: Vec<String> = vec![];
        let mut seen: BTreeSet<Vec<Vec<String>>> = BTreeSet::new();
        for seed in 0..1000 {
            let m = random_model(seed, 4, &props, FrameClass::S5);
            let mut canon: BTreeSet<Vec<String>> = BTreeSet::new();
            for w in m.worlds() {
                canon.insert(m.eq_class(1, w).unwrap().into_iter().collect());
            }
            seen.insert(canon.into_iter().collect());
        }
        assert_eq!(seen.len(), 15);
    }

    fn two_class_structure() -> KripkeStructure {
        let mut b = KripkeBuilder::new(2);
        for w in ["a", "b", "c", "d"] {
            b.add_world(w, ["p".to_string()].into()).unwrap();
        }
        b.add_edge(1, "a", "b").unwrap();
        b.add_edge(1, "c", "d").unwrap();
        b.finish().close(FrameClass::S5)
    }

    fn class_count(m: &KripkeStructure) -> usize {
        let mut reps: BTreeSet<Vec<String>> = BTreeSet::new();
        for w in m.worlds() {
            reps.insert(m.eq_class(1, w).unwrap().into_iter().collect());
        }
        reps.len()
    }

    #[test]
    fn mutations_preserve_s5() {
        let m = two_class_structure();
        for seed in 0..20 {
            let mutated = mutate_model(&m, seed).unwrap();
            assert!(mutated.is_frame(FrameClass::S5), "seed {seed}");
        }
    }

    #[test]
    fn merge_and_split_change_the_partition() {
        let m = two_class_structure();
        let merged_seed = (0..100)
            .find(|&s| class_count(&mutate_model(&m, s).unwrap()) == 1)
            .expect("some seed merges");
        let merged = mutate_model(&m, merged_seed).unwrap();
        assert_eq!(class_count(&merged), 1);

        // splitting the merged 4-clique brings the shape back to 2 classes
        let split_seed = (0..100)
            .find(|&s| class_count(&mutate_model(&merged, s).unwrap()) == 2)
            .expect("some seed splits");
        assert_eq!(class_count(&mutate_model(&merged, split_seed).unwrap()), 2);
    }

    #[test]
    fn mutate_rejects_non_s5() {
        let mut b = KripkeBuilder::new(2);
        b.add_world("u", BTreeSet::new()).unwrap();
        b.add_world("v", BTreeSet::new()).unwrap();
        b.add_edge(1, "u", "v").unwrap();
        assert!(matches!(
            mutate_model(&b.finish(), 0),
            Err(Error::InvalidInput(_))
        ));
    }
}
