//! Deliberately naive reference implementations and test-corpus
//! generators.
//!
//! Nothing here is called by the production pipeline; these are the
//! independent second routes that the differential tests and the
//! acceptance suite compare against. The evaluator lowers boxes first and
//! recurses without memoization, scanning raw relation pairs; the
//! satisfiability oracle enumerates set partitions with a separate
//! recursive enumerator rather than the search module's restricted-growth
//! iterator.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::cnf::{Clause, Cnf, Literal};
use crate::error::Result;
use crate::formula::{lower_boxes, metrics, Formula, FormulaKind};
use crate::kripke::{KripkeBuilder, KripkeStructure};

/// Recursive satisfaction with boxes lowered away first: no memoization,
/// no partition shortcuts, successor lookup by scanning the pair set.
pub fn naive_check(m: &KripkeStructure, world: &str, f: &Formula) -> Result<bool> {
    let lowered = lower_boxes(f);
    let w = m.world_index(world)?;
    naive_at(m, w, &lowered)
}

fn naive_at(m: &KripkeStructure, w: usize, f: &Formula) -> Result<bool> {
    match f.kind() {
        FormulaKind::Top => Ok(true),
        FormulaKind::Bot => Ok(false),
        FormulaKind::Prop(p) => Ok(m.valuation_by_index(w).contains(p)),
        FormulaKind::Xor(a, b) => Ok(naive_at(m, w, a)? != naive_at(m, w, b)?),
        FormulaKind::Dia(i, body) => {
            let rel0 = m.check_index(*i)?;
            for &(u, v) in m.relation(rel0) {
                if u == w && naive_at(m, v, body)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        FormulaKind::Box(_, _) => unreachable!("boxes were lowered"),
    }
}

/// Every set partition of `0..n`, each as a list of classes. Generated by
/// recursive insertion (element k joins an existing class or starts a new
/// one), independent of the restricted-growth iteration used elsewhere.
pub fn all_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn insert(n: usize, next: usize, current: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if next == n {
            out.push(current.clone());
            return;
        }
        for i in 0..current.len() {
            current[i].push(next);
            insert(n, next + 1, current, out);
            current[i].pop();
        }
        current.push(vec![next]);
        insert(n, next + 1, current, out);
        current.pop();
    }
    let mut out = Vec::new();
    insert(n, 0, &mut Vec::new(), &mut out);
    out
}

/// Is `f` satisfiable in some S5 structure with at most `max_worlds`
/// worlds and the given arity? Exhaustive over partition tuples and
/// valuations, evaluated with [`naive_check`].
pub fn naive_s5_sat(f: &Formula, max_worlds: usize, arity: usize) -> Result<bool> {
    let props: Vec<String> = metrics(f).props.into_iter().collect();
    for n in 1..=max_worlds {
        let partitions = all_partitions(n);
        let mut combo = vec![0usize; arity];
        loop {
            for valuation_mask in 0..1u64 << (n * props.len()) {
                let mut b = KripkeBuilder::new(arity);
                for w in 0..n {
                    let labels = props
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| valuation_mask >> (w * props.len() + j) & 1 == 1)
                        .map(|(_, p)| p.clone())
                        .collect();
                    b.add_world(&format!("n{}", w + 1), labels).unwrap();
                }
                for (rel0, &pi) in combo.iter().enumerate() {
                    for class in &partitions[pi] {
                        for &u in class {
                            for &v in class {
                                b.add_edge(
                                    rel0 as u32 + 1,
                                    &format!("n{}", u + 1),
                                    &format!("n{}", v + 1),
                                )
                                .unwrap();
                            }
                        }
                    }
                }
                let m = b.finish();
                for w in 1..=n {
                    if naive_check(&m, &format!("n{w}"), f)? {
                        return Ok(true);
                    }
                }
            }
            let mut advanced = false;
            for slot in combo.iter_mut().rev() {
                *slot += 1;
                if *slot < partitions.len() {
                    advanced = true;
                    break;
                }
                *slot = 0;
            }
            if !advanced {
                break;
            }
        }
    }
    Ok(false)
}

/// Seed-deterministic random formula of roughly `size` nodes.
pub fn random_formula(rng: &mut ChaCha8Rng, size: usize, props: &[&str], arity: u32) -> Formula {
    let atom = |rng: &mut ChaCha8Rng| match rng.random_range(0..props.len() + 2) {
        0 => Formula::top(),
        1 => Formula::bot(),
        i => Formula::prop(props[i - 2]),
    };
    if size <= 1 {
        return atom(rng);
    }
    match rng.random_range(0..4u32) {
        0 if size >= 3 => {
            let left = rng.random_range(1..size - 1);
            Formula::xor(
                random_formula(rng, left, props, arity),
                random_formula(rng, size - 1 - left, props, arity),
            )
        }
        1 => Formula::dia(
            rng.random_range(1..=arity),
            random_formula(rng, size - 1, props, arity),
        ),
        2 => Formula::box_(
            rng.random_range(1..=arity),
            random_formula(rng, size - 1, props, arity),
        ),
        _ => atom(rng),
    }
}

/// Every formula of the grammar with tree size at most `max_size`, over
/// the given propositions and modality indices `1..=arity`.
pub fn enumerate_formulas(max_size: usize, props: &[&str], arity: u32) -> Vec<Formula> {
    let mut by_size: Vec<Vec<Formula>> = vec![Vec::new(); max_size + 1];
    if max_size >= 1 {
        by_size[1].push(Formula::top());
        by_size[1].push(Formula::bot());
        for p in props {
            by_size[1].push(Formula::prop(*p));
        }
    }
    for size in 2..=max_size {
        let mut formulas = Vec::new();
        for i in 1..=arity {
            for f in &by_size[size - 1] {
                formulas.push(Formula::dia(i, f.clone()));
                formulas.push(Formula::box_(i, f.clone()));
            }
        }
        for left in 1..=size.saturating_sub(2) {
            let right = size - 1 - left;
            for a in &by_size[left] {
                for b in &by_size[right] {
                    formulas.push(Formula::xor(a.clone(), b.clone()));
                }
            }
        }
        by_size[size] = formulas;
    }
    by_size.into_iter().flatten().collect()
}

/// The fixed small-instance corpus: 3CNF formulas over `x1, x2, x3` with
/// one to three clauses. The clause pool is the 8 polarity patterns over
/// the three distinct variables plus the 6 triplicated single literals;
/// formulas are all ordered clause tuples. Literal multiplicities are 1
/// or 3 throughout, matching what the padding and DIMACS normalizers
/// produce: a doubly-repeated literal has no odd-parity gadget partner,
/// so such clauses are outside the constructive pipeline by design.
pub fn small_cnf_corpus() -> Vec<Cnf> {
    let vars: Vec<String> = vec!["x1".into(), "x2".into(), "x3".into()];
    let mut pool: Vec<Clause> = Vec::new();
    for mask in 0..8u8 {
        let lit = |j: usize| {
            let var = &vars[j];
            if mask >> j & 1 == 1 {
                Literal::neg(var)
            } else {
                Literal::pos(var)
            }
        };
        pool.push(Clause::new(lit(0), lit(1), lit(2)));
    }
    for var in &vars {
        pool.push(Clause::triple(Literal::pos(var)));
        pool.push(Clause::triple(Literal::neg(var)));
    }

    let mut out = Vec::new();
    for a in 0..pool.len() {
        out.push(Cnf::new(vars.clone(), vec![pool[a].clone()]).unwrap());
    }
    for a in 0..pool.len() {
        for b in 0..pool.len() {
            out.push(Cnf::new(vars.clone(), vec![pool[a].clone(), pool[b].clone()]).unwrap());
        }
    }
    for a in 0..pool.len() {
        for b in 0..pool.len() {
            for c in 0..pool.len() {
                out.push(
                    Cnf::new(
                        vars.clone(),
                        vec![pool[a].clone(), pool[b].clone(), pool[c].clone()],
                    )
                    .unwrap(),
                );
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::FrameClass;
    use crate::modelcheck::check;
    use rand::SeedableRng;

    #[test]
    fn partition_enumeration_counts() {
        for (n, bell) in [(1, 1), (2, 2), (3, 5), (4, 15)] {
            assert_eq!(all_partitions(n).len(), bell);
        }
    }

    #[test]
    fn naive_agrees_with_production_on_a_spot_check() {
        let m = crate::solver::random_model(3, 3, &["p".to_string()], FrameClass::T);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let f = random_formula(&mut rng, 8, &["p"], 2);
            for w in m.worlds() {
                assert_eq!(
                    naive_check(&m, w, &f).unwrap(),
                    check(&m, w, &f).unwrap(),
                    "{f} at {w}"
                );
            }
        }
    }

    #[test]
    fn formula_enumeration_is_complete_for_small_sizes() {
        // 1 proposition, arity 2: 3 atoms; 4 unary wrappers per smaller
        // formula; xors over size splits
        let fs = enumerate_formulas(3, &["p"], 2);
        assert_eq!(fs.len(), 3 + 12 + (48 + 9));
    }

    #[test]
    fn corpus_is_fixed_and_large_enough() {
        let corpus = small_cnf_corpus();
        assert_eq!(corpus.len(), 14 + 14 * 14 + 14 * 14 * 14);
        assert!(corpus.len() >= 500);
        assert_eq!(corpus, small_cnf_corpus());
    }
}
