//! Constructive satisfiability: given a satisfiable 3CNF, build a
//! polynomial-size S5 structure satisfying its modal translation, verify
//! it with the model checker, and extract assignments back out of models.
//!
//! The construction follows the translation's inductive shape. A clause
//! gets the two-world gadget: the start world `w` carries the satisfying
//! assignment, its relation-2 partner `v` carries a flipped assignment
//! chosen so that an odd number of slot translations hold at `w`. A
//! conjunction `g & h` recursively builds models for both conjuncts plus
//! two falsified copies (one keeps `g` and falsifies `h`, one the
//! reverse), merges the main cores with two fresh worlds into one
//! relation-1 class, and wires each fresh world to a relay inside the
//! opposite falsified copy with the node's only new relation-2 edges.
//!
//! Every constructed model is machine-verified before it is returned; the
//! builder is never trusted.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::cnf::{
    brute_force_sat, eval_clause, eval_cnf, eval_tree, Assignment, Clause, Cnf, ConjTree,
    TreePath, DEFAULT_VAR_LIMIT,
};
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::kripke::{FrameClass, KripkeBuilder, KripkeStructure, NiceModel};
use crate::modelcheck::{check, label};
use crate::reduction::{psi_parts, reduce, translate_clause, ReductionOutput};

/// A machine-verified satisfiability certificate: an S5 structure, a
/// start world, and the formula it satisfies there.
#[derive(Debug, Clone)]
pub struct WitnessCertificate {
    pub model: KripkeStructure,
    pub start_world: String,
    pub formula: Formula,
    pub verified: bool,
    pub core: BTreeSet<String>,
}

/// Checked facts about one conjunction node of a witness, recorded on the
/// node's assembled model: the psi formulas must hold exactly at their own
/// fresh world and fail at the other.
#[derive(Debug, Clone)]
pub struct AndNodeFacts {
    pub path: TreePath,
    pub w_g: String,
    pub w_h: String,
    pub v_g: String,
    pub v_h: String,
    pub psi_g_at_w_g: bool,
    pub psi_h_at_w_g: bool,
    pub psi_g_at_w_h: bool,
    pub psi_h_at_w_h: bool,
}

/// Everything a witness run produces.
#[derive(Debug, Clone)]
pub struct WitnessBuild {
    pub certificate: WitnessCertificate,
    pub nice: NiceModel,
    pub reduction: ReductionOutput,
    pub and_facts: Vec<AndNodeFacts>,
}

/// Pick the partner assignment for the clause gadget.
///
/// Returns an assignment agreeing with `a` outside the clause's variables
/// such that the number of slots satisfied by `a` and falsified by the
/// result is odd; that parity is exactly what makes the translated clause
/// hold at the gadget's start world. Among the candidates (at most 8),
/// the one satisfying the most slots wins, which reproduces the
/// "satisfy all but the chosen literal" choice whenever it is available.
///
/// For a clause whose satisfied slots are a doubly-repeated literal no odd
/// candidate exists and the construction fails; triplication is safe
/// (odd multiplicity), which is why the DIMACS normalizer never
/// duplicates a literal just once.
pub fn gadget_assignment(clause: &Clause, a: &Assignment) -> Result<Assignment> {
    if !eval_clause(clause, a)? {
        return Err(Error::InvalidInput(
            "gadget assignment requires a satisfied clause".into(),
        ));
    }
    let vars = clause.variables();
    let n = vars.len();
    let mut best: Option<(usize, Assignment)> = None;
    for mask in 0..(1u32 << n) {
        let mut candidate = a.clone();
        for (j, var) in vars.iter().enumerate() {
            candidate = candidate.with(var, mask >> (n - 1 - j) & 1 == 1)?;
        }
        let flipped = clause
            .literals
            .iter()
            .filter(|l| {
                a.satisfies_literal(l).expect("declared")
                    && !candidate.satisfies_literal(l).expect("declared")
            })
            .count();
        if flipped % 2 == 0 {
            continue;
        }
        let satisfied = clause
            .literals
            .iter()
            .filter(|l| candidate.satisfies_literal(l).expect("declared"))
            .count();
        if best.as_ref().is_none_or(|(s, _)| satisfied > *s) {
            best = Some((satisfied, candidate));
        }
    }
    best.map(|(_, a)| a).ok_or_else(|| {
        Error::Construction(format!(
            "no odd flip-parity partner assignment exists for clause {clause}"
        ))
    })
}

/// Build the two-world clause gadget and verify it satisfies the clause
/// translation at its start world.
pub fn build_base(clause: &Clause, a: &Assignment) -> Result<NiceModel> {
    build_base_at("", clause, a)
}

fn build_base_at(prefix: &str, clause: &Clause, a: &Assignment) -> Result<NiceModel> {
    let partner = gadget_assignment(clause, a)?;
    let w = format!("{prefix}w");
    let v = format!("{prefix}v");
    let mut b = KripkeBuilder::new(2);
    b.add_world(&w, a.true_set.clone())?;
    b.add_world(&v, partner.true_set.clone())?;
    b.add_edge(1, &w, &w)?;
    b.add_edge(1, &v, &v)?;
    b.add_edge(2, &w, &v)?;
    let structure = b.finish().close(FrameClass::S5);

    let phi = translate_clause(clause);
    if !check(&structure, &w, &phi)? {
        return Err(Error::Verification {
            world: w,
            node: format!("clause gadget {clause}"),
            detail: "translated clause does not hold at the gadget start world".into(),
            model: Box::new(structure),
        });
    }
    Ok(NiceModel {
        structure,
        core: [w].into(),
        core_assignment: a.clone(),
    })
}

/// Flip one clause of `falsify` to false without touching `keep`.
///
/// The selected clause must use no variable of `keep` and must not be
/// tautological; padding clauses of the sibling subtree are preferred
/// (they are triplicated positive singletons and always qualify). Every
/// slot of the selected clause is set false, so the result keeps `keep`
/// true and makes `falsify` false.
pub fn falsifying_assignment(
    a: &Assignment,
    keep: &ConjTree,
    falsify: &ConjTree,
) -> Result<Assignment> {
    if !eval_tree(keep, a)? {
        return Err(Error::InvalidInput(
            "falsifying_assignment requires an assignment satisfying `keep`".into(),
        ));
    }
    let keep_vars: BTreeSet<&str> = keep.variables().into_iter().collect();
    let clauses = falsify.clauses();
    let eligible = |c: &&Clause| {
        !c.tautological() && c.variables().iter().all(|v| !keep_vars.contains(v))
    };
    let padding_shaped =
        |c: &&Clause| c.variables().len() == 1 && c.literals.iter().all(|l| l.positive);
    let target = clauses
        .iter()
        .find(|c| padding_shaped(c) && eligible(c))
        .or_else(|| clauses.iter().find(|c| eligible(c)))
        .ok_or_else(|| {
            Error::Construction(
                "no eligible clause to falsify; inputs must come from the padding stage".into(),
            )
        })?;

    let mut out = a.clone();
    for lit in &target.literals {
        out = out.with(&lit.variable, !lit.positive)?;
    }
    if !eval_tree(keep, &out)? {
        return Err(Error::Construction(
            "falsifying flip damaged the kept subformula".into(),
        ));
    }
    if eval_tree(falsify, &out)? {
        return Err(Error::Construction(
            "falsifying flip did not falsify the target subformula".into(),
        ));
    }
    Ok(out)
}

/// Build a nice model for a conjunction tree under a satisfying
/// assignment. `subformula_map` must be the translation map of `tree`
/// (from [`reduce`] or `translate_conj`).
pub fn build_nice(
    tree: &ConjTree,
    a: &Assignment,
    subformula_map: &BTreeMap<TreePath, Formula>,
) -> Result<NiceModel> {
    let mut facts = Vec::new();
    construct(tree, TreePath::root(), "", a, subformula_map, &mut facts)
}

fn construct(
    tree: &ConjTree,
    tree_path: TreePath,
    prefix: &str,
    a: &Assignment,
    rmap: &BTreeMap<TreePath, Formula>,
    facts: &mut Vec<AndNodeFacts>,
) -> Result<NiceModel> {
    if !eval_tree(tree, a)? {
        return Err(Error::Construction(format!(
            "assignment does not satisfy the subtree at {tree_path}"
        )));
    }
    let (g, h) = match tree {
        ConjTree::Leaf(clause) => return build_base_at(prefix, clause, a),
        ConjTree::And(g, h) => (g, h),
    };

    let main_g = construct(g, tree_path.left(), &format!("{prefix}l"), a, rmap, facts)?;
    let main_h = construct(h, tree_path.right(), &format!("{prefix}r"), a, rmap, facts)?;

    // copies: one keeps h and falsifies g, the other the reverse
    let a_copy_h = falsifying_assignment(a, h, g)?;
    let a_copy_g = falsifying_assignment(a, g, h)?;
    let copy_h = construct(
        h,
        tree_path.right(),
        &format!("{prefix}R"),
        &a_copy_h,
        rmap,
        facts,
    )?;
    let copy_g = construct(
        g,
        tree_path.left(),
        &format!("{prefix}L"),
        &a_copy_g,
        rmap,
        facts,
    )?;

    let w_g = format!("{prefix}wl");
    let w_h = format!("{prefix}wr");
    // relays: fresh worlds merged into the copies' cores, carrying the
    // copies' assignments and no other relation-2 edges, so after closure
    // the relation-2 class of each fresh world is exactly the pair
    let v_h = format!("{prefix}vr");
    let v_g = format!("{prefix}vl");

    let mut b = KripkeBuilder::new(2);
    for part in [&main_g, &main_h, &copy_h, &copy_g] {
        b.absorb(&part.structure)?;
    }
    b.add_world(&w_g, a.true_set.clone())?;
    b.add_world(&w_h, a.true_set.clone())?;
    b.add_world(&v_h, a_copy_h.true_set.clone())?;
    b.add_world(&v_g, a_copy_g.true_set.clone())?;

    // one relation-1 class over both main cores and the fresh pair;
    // closure completes the clique
    for core in [&main_g.core, &main_h.core] {
        for world in core.iter() {
            b.add_edge(1, &w_g, world)?;
        }
    }
    b.add_edge(1, &w_g, &w_h)?;
    for world in &copy_h.core {
        b.add_edge(1, &v_h, world)?;
    }
    for world in &copy_g.core {
        b.add_edge(1, &v_g, world)?;
    }
    b.add_edge(2, &w_g, &v_h)?;
    b.add_edge(2, &w_h, &v_g)?;

    let structure = b.finish().close(FrameClass::S5);

    let mut core: BTreeSet<String> = main_g.core.union(&main_h.core).cloned().collect();
    core.insert(w_g.clone());
    core.insert(w_h.clone());
    let nice = NiceModel {
        structure,
        core,
        core_assignment: a.clone(),
    };
    nice.validate()?;

    let phi = rmap.get(&tree_path).ok_or_else(|| {
        Error::Construction(format!("subformula map is missing node {tree_path}"))
    })?;
    let verify_err = |world: &str, detail: &str, m: &KripkeStructure| Error::Verification {
        world: world.to_string(),
        node: tree_path.to_string(),
        detail: detail.to_string(),
        model: Box::new(m.clone()),
    };

    let labeling = label(&nice.structure, phi)?;
    for world in &nice.core {
        if !labeling.holds_at(world)? {
            return Err(verify_err(
                world,
                "a core world fails the node translation",
                &nice.structure,
            ));
        }
    }

    let (psi_g, psi_h) = psi_parts(phi)
        .ok_or_else(|| Error::Construction(format!("node {tree_path} is not a conjunction translation")))?;
    let at = |f: &Formula, world: &str| -> Result<bool> {
        labeling
            .subformula_holds_at(f, world)?
            .ok_or_else(|| Error::Construction("psi is not a subterm of the node formula".into()))
    };
    let node_facts = AndNodeFacts {
        path: tree_path.clone(),
        w_g: w_g.clone(),
        w_h: w_h.clone(),
        v_g: v_g.clone(),
        v_h: v_h.clone(),
        psi_g_at_w_g: at(psi_g, &w_g)?,
        psi_h_at_w_g: at(psi_h, &w_g)?,
        psi_g_at_w_h: at(psi_g, &w_h)?,
        psi_h_at_w_h: at(psi_h, &w_h)?,
    };
    if !(node_facts.psi_g_at_w_g
        && !node_facts.psi_h_at_w_g
        && !node_facts.psi_g_at_w_h
        && node_facts.psi_h_at_w_h)
    {
        return Err(verify_err(
            &w_g,
            "psi pattern at the fresh worlds is not (true, false, false, true)",
            &nice.structure,
        ));
    }

    // relay checks: each relay satisfies its own conjunct and refutes the
    // sibling's, which is what the relation-2 edges encode
    let phi_g = &rmap[&tree_path.left()];
    let phi_h = &rmap[&tree_path.right()];
    for (relay, holds, fails) in [(&v_h, phi_h, phi_g), (&v_g, phi_g, phi_h)] {
        if !at(holds, relay)? || at(fails, relay)? {
            return Err(verify_err(
                relay,
                "relay world does not satisfy exactly its own conjunct",
                &nice.structure,
            ));
        }
    }

    facts.push(node_facts);
    Ok(nice)
}

/// Read an assignment off a world's labels.
pub fn extract_assignment(
    m: &KripkeStructure,
    world: &str,
    vars: &BTreeSet<String>,
) -> Result<Assignment> {
    let labels = m.props_at(world)?;
    Assignment::new(labels.intersection(vars).cloned().collect(), vars.clone())
}

/// Run the full pipeline: reduce, extend the assignment with all padding
/// variables true, build the nice model, and verify the certificate.
///
/// Without a supplied assignment the input is solved by brute force,
/// which requires it to fit [`DEFAULT_VAR_LIMIT`].
pub fn build_witness_with(f: &Cnf, assignment: Option<&Assignment>) -> Result<WitnessBuild> {
    let origin_vars: BTreeSet<String> = f.variables.iter().cloned().collect();
    let base = match assignment {
        Some(a) => {
            for var in &origin_vars {
                if !a.universe.contains(var) {
                    return Err(Error::UndeclaredVariable(var.clone()));
                }
            }
            let restricted = a.restrict(&origin_vars);
            if !eval_cnf(f, &restricted)? {
                return Err(Error::InvalidInput(
                    "supplied assignment does not satisfy the formula".into(),
                ));
            }
            restricted
        }
        None => brute_force_sat(f, DEFAULT_VAR_LIMIT)?.ok_or(Error::Unsatisfiable)?,
    };

    let reduction = reduce(f)?;
    let mut universe = base.universe.clone();
    let mut true_set = base.true_set.clone();
    for pad_var in &reduction.padding_vars {
        universe.insert(pad_var.clone());
        true_set.insert(pad_var.clone());
    }
    let extended = Assignment::new(true_set, universe)?;

    let mut and_facts = Vec::new();
    let nice = construct(
        &reduction.tree,
        TreePath::root(),
        "",
        &extended,
        &reduction.subformula_map,
        &mut and_facts,
    )?;

    let start_world = nice
        .core
        .iter()
        .next()
        .expect("validated cores are nonempty")
        .clone();
    let verified = check(&nice.structure, &start_world, &reduction.formula)?;
    if !verified {
        return Err(Error::Verification {
            world: start_world,
            node: "(root)".into(),
            detail: "certificate formula fails at the start world".into(),
            model: Box::new(nice.structure),
        });
    }
    let certificate = WitnessCertificate {
        model: nice.structure.clone(),
        start_world,
        formula: reduction.formula.clone(),
        verified,
        core: nice.core.clone(),
    };
    Ok(WitnessBuild {
        certificate,
        nice,
        reduction,
        and_facts,
    })
}

/// [`build_witness_with`] without a caller-supplied assignment.
pub fn build_witness(f: &Cnf) -> Result<WitnessCertificate> {
    build_witness_with(f, None).map(|b| b.certificate)
}

/// Serializable certificate summary.
#[derive(Debug, Clone, Serialize)]
pub struct CertificateJson {
    pub start_world: String,
    pub formula_file: Option<String>,
    pub verified: bool,
    pub core: Vec<String>,
    pub stats: CertificateStats,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateStats {
    pub worlds: usize,
    pub clauses: usize,
    pub formula_size: u64,
    pub modal_depth: u32,
}

impl CertificateJson {
    pub fn from_build(build: &WitnessBuild, formula_file: Option<String>) -> Self {
        CertificateJson {
            start_world: build.certificate.start_world.clone(),
            formula_file,
            verified: build.certificate.verified,
            core: build.certificate.core.iter().cloned().collect(),
            stats: CertificateStats {
                worlds: build.certificate.model.world_count(),
                clauses: build.reduction.stats.clauses,
                formula_size: build.reduction.stats.formula_size,
                modal_depth: build.reduction.stats.modal_depth,
            },
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("certificate serializes");
        text.push('\n');
        text
    }
}
