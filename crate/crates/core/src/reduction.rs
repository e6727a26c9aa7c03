//! Translation from bracketed 3CNF to affine 2-multi-modal formulas.
//!
//! A positive literal `a` becomes `[1]a + [2][1]a`; a negative literal
//! uses `a + top` in place of `a`. A clause becomes `<1>` of the
//! xor-join of its three literal translations, slot order preserved. A
//! conjunction `g & h` becomes
//!
//! ```text
//! <1>(psi_g + psi_h) + <1>psi_g + <1>psi_h   where   psi_x = phi_x + [2]phi_x
//! ```
//!
//! No algebraic simplification is applied anywhere: repeated literals stay
//! repeated (their parity is what the witness gadget relies on) and the
//! output is the literal inductive translation, so size accounting and
//! the witness construction match it exactly.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cnf::{pad, Clause, Cnf, ConjTree, Literal, TreePath};
use crate::error::Result;
use crate::formula::{metrics, Formula, FormulaKind};

/// Size and shape measurements of a reduction run.
#[derive(Debug, Clone, Serialize)]
pub struct ReductionStats {
    pub clauses: usize,
    pub formula_size: u64,
    pub modal_depth: u32,
}

/// Everything the translation produces: the formula, the (padded,
/// bracketed) conjunction tree it came from, and a map from tree nodes to
/// their translations. The map is keyed by tree position, not formula
/// equality: identical clauses in different leaves get distinct entries.
#[derive(Debug, Clone)]
pub struct ReductionOutput {
    pub formula: Formula,
    pub tree: ConjTree,
    pub padding_vars: Vec<String>,
    pub subformula_map: BTreeMap<TreePath, Formula>,
    pub stats: ReductionStats,
}

/// Translate one literal.
pub fn translate_literal(lit: &Literal) -> Formula {
    let atom = if lit.positive {
        Formula::prop(&lit.variable)
    } else {
        Formula::prop(&lit.variable).neg()
    };
    let once = Formula::box_(1, atom);
    Formula::xor(once.clone(), Formula::box_(2, once))
}

/// Translate one clause: `<1>` of the xor of the three slot translations,
/// left-associated, repetitions kept.
pub fn translate_clause(clause: &Clause) -> Formula {
    // repeated slots reuse one shared translation; the tree still
    // carries them with multiplicity
    let mut cache: Vec<(&Literal, Formula)> = Vec::new();
    let mut parts = Vec::with_capacity(3);
    for lit in &clause.literals {
        let phi = match cache.iter().find(|(l, _)| *l == lit) {
            Some((_, phi)) => phi.clone(),
            None => {
                let phi = translate_literal(lit);
                cache.push((lit, phi.clone()));
                phi
            }
        };
        parts.push(phi);
    }
    let body = parts
        .into_iter()
        .reduce(Formula::xor)
        .expect("clause has three slots");
    Formula::dia(1, body)
}

fn psi(phi: &Formula) -> Formula {
    Formula::xor(phi.clone(), Formula::box_(2, phi.clone()))
}

/// Translate a conjunction tree, recording each node's translation.
pub fn translate_conj(tree: &ConjTree) -> (Formula, BTreeMap<TreePath, Formula>) {
    let mut map = BTreeMap::new();
    let formula = translate_at(tree, TreePath::root(), &mut map);
    (formula, map)
}

fn translate_at(
    tree: &ConjTree,
    path: TreePath,
    map: &mut BTreeMap<TreePath, Formula>,
) -> Formula {
    let formula = match tree {
        ConjTree::Leaf(clause) => translate_clause(clause),
        ConjTree::And(g, h) => {
            let phi_g = translate_at(g, path.left(), map);
            let phi_h = translate_at(h, path.right(), map);
            let psi_g = psi(&phi_g);
            let psi_h = psi(&phi_h);
            Formula::xor(
                Formula::xor(
                    Formula::dia(1, Formula::xor(psi_g.clone(), psi_h.clone())),
                    Formula::dia(1, psi_g),
                ),
                Formula::dia(1, psi_h),
            )
        }
    };
    map.insert(path, formula.clone());
    formula
}

/// Decompose a conjunction-node translation back into its psi parts.
/// Returns the shared `psi_g` and `psi_h` subterms.
pub(crate) fn psi_parts(phi: &Formula) -> Option<(&Formula, &Formula)> {
    let FormulaKind::Xor(left, dia_psi_h) = phi.kind() else {
        return None;
    };
    let FormulaKind::Xor(_, dia_psi_g) = left.kind() else {
        return None;
    };
    match (dia_psi_g.kind(), dia_psi_h.kind()) {
        (FormulaKind::Dia(1, psi_g), FormulaKind::Dia(1, psi_h)) => Some((psi_g, psi_h)),
        _ => None,
    }
}

/// Full reduction pipeline: pad, bracket, translate.
pub fn reduce(f: &Cnf) -> Result<ReductionOutput> {
    let padded = pad(f)?;
    Ok(assemble(padded.tree, padded.padding_vars, f.clauses.len()))
}

/// Translation without the padding stage, for experimentation. The
/// independence guarantee is lost, so witness construction does not
/// support the result.
pub fn reduce_unpadded(f: &Cnf) -> Result<ReductionOutput> {
    let leaves = f.clauses.iter().cloned().map(ConjTree::Leaf).collect();
    let tree = crate::cnf::bracket_balanced(leaves)?;
    Ok(assemble(tree, Vec::new(), f.clauses.len()))
}

fn assemble(tree: ConjTree, padding_vars: Vec<String>, clauses: usize) -> ReductionOutput {
    #[cfg(debug_assertions)]
    if !padding_vars.is_empty() {
        debug_assert_independent(&tree);
    }
    let (formula, subformula_map) = translate_conj(&tree);
    let m = metrics(&formula);
    ReductionOutput {
        formula,
        tree,
        padding_vars,
        subformula_map,
        stats: ReductionStats {
            clauses,
            formula_size: m.size,
            modal_depth: m.modal_depth,
        },
    }
}

#[cfg(debug_assertions)]
fn debug_assert_independent(tree: &ConjTree) {
    if let ConjTree::And(g, h) = tree {
        debug_assert!(
            crate::cnf::independence(g, h).strong(),
            "padded tree has a dependent conjunction node"
        );
        debug_assert_independent(g);
        debug_assert_independent(h);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::parse_dimacs;
    use crate::formula::print_formula;

    #[test]
    fn literal_translation_shapes() {
        let phi = translate_literal(&Literal::pos("a"));
        assert_eq!(print_formula(&phi), "[1] a + [2][1] a");
        assert_eq!(metrics(&phi).size, 6);

        let phi = translate_literal(&Literal::neg("a"));
        assert_eq!(print_formula(&phi), "[1](a + top) + [2][1](a + top)");
        assert_eq!(metrics(&phi).size, 10);
    }

    #[test]
    fn clause_translation_shape() {
        let c = Clause::new(Literal::pos("x"), Literal::pos("y"), Literal::pos("z"));
        let phi = translate_clause(&c);
        let expect = Formula::dia(
            1,
            Formula::xor(
                Formula::xor(
                    translate_literal(&Literal::pos("x")),
                    translate_literal(&Literal::pos("y")),
                ),
                translate_literal(&Literal::pos("z")),
            ),
        );
        assert_eq!(phi, expect);
        assert_eq!(metrics(&phi).modal_depth, 3);
    }

    #[test]
    fn repeated_literals_stay_repeated() {
        let c = Clause::triple(Literal::pos("b"));
        let phi = translate_clause(&c);
        // three xor-joined copies under the diamond, not simplified
        let phi_b = translate_literal(&Literal::pos("b"));
        match phi.kind() {
            FormulaKind::Dia(1, body) => {
                assert_eq!(
                    body,
                    &Formula::xor(Formula::xor(phi_b.clone(), phi_b.clone()), phi_b)
                );
            }
            other => panic!("expected <1>, got {other:?}"),
        }
        assert_eq!(metrics(&phi).size, 1 + 2 + 3 * 6);
    }

    #[test]
    fn conjunction_size_recurrence() {
        // counting the template: psi_x duplicates phi_x and adds a box and
        // a xor; the three diamond parts plus two joining xors add 6 nodes.
        // size(phi_{g&h}) = 4 size(phi_g) + 4 size(phi_h) + 14
        let f = parse_dimacs("p cnf 3 2\n1 2 3 0\n-1 -2 -3 0").unwrap();
        let g = ConjTree::Leaf(f.clauses[0].clone());
        let h = ConjTree::Leaf(f.clauses[1].clone());
        let (phi_g, _) = translate_conj(&g);
        let (phi_h, _) = translate_conj(&h);
        let (phi_gh, _) = translate_conj(&ConjTree::and(g, h));
        assert_eq!(
            metrics(&phi_gh).size,
            4 * metrics(&phi_g).size + 4 * metrics(&phi_h).size + 14
        );
    }

    #[test]
    fn conjunction_template_and_psi_extraction() {
        let f = parse_dimacs("p cnf 3 2\n1 2 3 0\n1 -2 3 0").unwrap();
        let g = ConjTree::Leaf(f.clauses[0].clone());
        let h = ConjTree::Leaf(f.clauses[1].clone());
        let (phi_g, _) = translate_conj(&g);
        let (phi_h, _) = translate_conj(&h);
        let (phi_gh, _) = translate_conj(&ConjTree::and(g, h));
        let (psi_g, psi_h) = psi_parts(&phi_gh).expect("template shape");
        assert_eq!(psi_g, &psi(&phi_g));
        assert_eq!(psi_h, &psi(&phi_h));
    }

    #[test]
    fn reduce_single_clause() {
        let f = parse_dimacs("p cnf 3 1\n1 2 3 0").unwrap();
        let out = reduce(&f).unwrap();
        assert_eq!(out.padding_vars, ["_pad1"]);
        assert_eq!(out.tree.depth(), 1);
        // the whole formula is the pair translation
        assert_eq!(&out.formula, &out.subformula_map[&TreePath::root()]);
        let m = metrics(&out.formula);
        assert_eq!(m.max_index, 2);
        assert_eq!(out.stats.clauses, 1);
        assert_eq!(out.stats.formula_size, m.size);
    }

    #[test]
    fn reduce_uses_only_modalities_one_and_two() {
        let f = parse_dimacs("p cnf 3 2\n1 -2 3 0\n-1 2 -3 0").unwrap();
        let out = reduce(&f).unwrap();
        assert_eq!(out.tree.depth(), 2);
        assert_eq!(metrics(&out.formula).max_index, 2);
    }

    #[test]
    fn modal_depth_bound() {
        for text in [
            "p cnf 3 1\n1 2 3 0",
            "p cnf 3 2\n1 2 3 0\n-1 -2 -3 0",
            "p cnf 4 3\n1 2 3 0\n2 3 4 0\n-1 -2 -4 0",
        ] {
            let f = parse_dimacs(text).unwrap();
            let out = reduce(&f).unwrap();
            assert!(out.stats.modal_depth <= 2 * out.tree.depth() + 3);
        }
    }

    #[test]
    fn subformula_map_keys_every_node() {
        let f = parse_dimacs("p cnf 4 3\n1 2 3 0\n2 3 4 0\n-1 -2 -4 0").unwrap();
        let out = reduce(&f).unwrap();
        // 3 pairs: 6 leaves + 3 pair nodes + 2 upper nodes
        assert_eq!(out.subformula_map.len(), 11);
        for (path, phi) in &out.subformula_map {
            let node = out.tree.subtree(path).expect("path addresses a node");
            if let ConjTree::And(_, _) = node {
                assert!(psi_parts(phi).is_some(), "node {path} has template shape");
            }
        }
    }

    #[test]
    fn unpadded_reduction_skips_padding() {
        let f = parse_dimacs("p cnf 3 2\n1 2 3 0\n-1 -2 -3 0").unwrap();
        let out = reduce_unpadded(&f).unwrap();
        assert!(out.padding_vars.is_empty());
        assert_eq!(out.tree.clauses().len(), 2);
        assert_eq!(out.tree.depth(), 1);
    }
}
