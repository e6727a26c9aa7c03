//! Syntax of affine multi-modal formulas.
//!
//! Formulas are built from `top`, `bot`, propositions, binary exclusive-or,
//! and the indexed modalities `<i>` (diamond) and `[i]` (box). Box is kept
//! as a first-class node for readability; [`lower_boxes`] rewrites it into
//! the diamond-only fragment via `[i]p == (<i>(p + top)) + top`.

mod parser;

pub use parser::parse_formula;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

/// One node of a formula tree.
#[derive(Debug, PartialEq, Eq, Hash)]
pub enum FormulaKind {
    Top,
    Bot,
    Prop(String),
    Xor(Formula, Formula),
    Dia(u32, Formula),
    Box(u32, Formula),
}

/// An immutable affine multi-modal formula.
///
/// Internally reference-counted, so clones are cheap and repeated subterms
/// can be shared. Equality is structural; sharing is invisible except to
/// the model checker's memo table, which keys on node identity.
#[derive(Clone, Eq, Hash)]
pub struct Formula(Arc<FormulaKind>);

impl Formula {
    pub fn top() -> Self {
        Formula(Arc::new(FormulaKind::Top))
    }

    pub fn bot() -> Self {
        Formula(Arc::new(FormulaKind::Bot))
    }

    pub fn prop(name: impl Into<String>) -> Self {
        Formula(Arc::new(FormulaKind::Prop(name.into())))
    }

    pub fn xor(left: Formula, right: Formula) -> Self {
        Formula(Arc::new(FormulaKind::Xor(left, right)))
    }

    pub fn dia(index: u32, body: Formula) -> Self {
        assert!(index >= 1, "modality indices start at 1");
        Formula(Arc::new(FormulaKind::Dia(index, body)))
    }

    pub fn box_(index: u32, body: Formula) -> Self {
        assert!(index >= 1, "modality indices start at 1");
        Formula(Arc::new(FormulaKind::Box(index, body)))
    }

    /// Negation in the affine fragment: `f + top`.
    pub fn neg(self) -> Self {
        Formula::xor(self, Formula::top())
    }

    /// Left-associative exclusive-or of one or more formulas.
    pub fn xor_all(parts: impl IntoIterator<Item = Formula>) -> Option<Self> {
        parts.into_iter().reduce(Formula::xor)
    }

    pub fn kind(&self) -> &FormulaKind {
        &self.0
    }

    /// Stable node identity, used for memoization over shared subterms.
    pub(crate) fn id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Structural measurements of a formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaMetrics {
    /// Node count of the tree (shared subterms counted with multiplicity).
    pub size: u64,
    /// Maximum nesting of Dia/Box nodes.
    pub modal_depth: u32,
    /// Free propositions.
    pub props: BTreeSet<String>,
    /// Largest modality index, 0 if the formula is modality-free.
    pub max_index: u32,
}

/// Compute size, modal depth, propositions and the largest modality index.
///
/// Shared subterms are visited once but sized with multiplicity, so `size`
/// always reports the tree size.
pub fn metrics(f: &Formula) -> FormulaMetrics {
    fn go(
        f: &Formula,
        memo: &mut HashMap<usize, (u64, u32, u32)>,
        props: &mut BTreeSet<String>,
    ) -> (u64, u32, u32) {
        if let Some(&cached) = memo.get(&f.id()) {
            return cached;
        }
        let out = match f.kind() {
            FormulaKind::Top | FormulaKind::Bot => (1, 0, 0),
            FormulaKind::Prop(p) => {
                props.insert(p.clone());
                (1, 0, 0)
            }
            FormulaKind::Xor(a, b) => {
                let (sa, da, ia) = go(a, memo, props);
                let (sb, db, ib) = go(b, memo, props);
                (1 + sa + sb, da.max(db), ia.max(ib))
            }
            FormulaKind::Dia(i, a) | FormulaKind::Box(i, a) => {
                let (sa, da, ia) = go(a, memo, props);
                (1 + sa, 1 + da, ia.max(*i))
            }
        };
        memo.insert(f.id(), out);
        out
    }

    let mut props = BTreeSet::new();
    let (size, modal_depth, max_index) = go(f, &mut HashMap::new(), &mut props);
    FormulaMetrics {
        size,
        modal_depth,
        props,
        max_index,
    }
}

/// Rewrite every box into the diamond-only fragment:
/// `[i]f` becomes `(<i>(f + top)) + top`.
///
/// Semantics are preserved at every (structure, world) pair.
pub fn lower_boxes(f: &Formula) -> Formula {
    fn go(f: &Formula, memo: &mut HashMap<usize, Formula>) -> Formula {
        if let Some(cached) = memo.get(&f.id()) {
            return cached.clone();
        }
        let out = match f.kind() {
            FormulaKind::Top | FormulaKind::Bot | FormulaKind::Prop(_) => f.clone(),
            FormulaKind::Xor(a, b) => Formula::xor(go(a, memo), go(b, memo)),
            FormulaKind::Dia(i, a) => Formula::dia(*i, go(a, memo)),
            FormulaKind::Box(i, a) => Formula::dia(*i, go(a, memo).neg()).neg(),
        };
        memo.insert(f.id(), out.clone());
        out
    }
    go(f, &mut HashMap::new())
}

/// Count box nodes (tree count, with multiplicity).
pub fn box_count(f: &Formula) -> u64 {
    fn go(f: &Formula, memo: &mut HashMap<usize, u64>) -> u64 {
        if let Some(&c) = memo.get(&f.id()) {
            return c;
        }
        let out = match f.kind() {
            FormulaKind::Top | FormulaKind::Bot | FormulaKind::Prop(_) => 0,
            FormulaKind::Xor(a, b) => go(a, memo) + go(b, memo),
            FormulaKind::Dia(_, a) => go(a, memo),
            FormulaKind::Box(_, a) => 1 + go(a, memo),
        };
        memo.insert(f.id(), out);
        out
    }
    go(f, &mut HashMap::new())
}

/// Canonical text form with minimal parentheses; [`parse_formula`] inverts it.
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_xor(f, &mut out);
    out
}

// xor chains print flat and left-associative: `a + b + c`.
fn write_xor(f: &Formula, out: &mut String) {
    if let FormulaKind::Xor(a, b) = f.kind() {
        write_xor(a, out);
        out.push_str(" + ");
        write_unary(b, out);
    } else {
        write_unary(f, out);
    }
}

// unary position: modal prefixes bind tighter than `+`, so a xor body
// needs parentheses.
fn write_unary(f: &Formula, out: &mut String) {
    match f.kind() {
        FormulaKind::Top => out.push_str("top"),
        FormulaKind::Bot => out.push_str("bot"),
        FormulaKind::Prop(p) => out.push_str(p),
        FormulaKind::Xor(_, _) => {
            out.push('(');
            write_xor(f, out);
            out.push(')');
        }
        FormulaKind::Dia(i, body) => {
            out.push('<');
            out.push_str(&i.to_string());
            out.push('>');
            write_modal_body(body, out);
        }
        FormulaKind::Box(i, body) => {
            out.push('[');
            out.push_str(&i.to_string());
            out.push(']');
            write_modal_body(body, out);
        }
    }
}

fn write_modal_body(body: &Formula, out: &mut String) {
    match body.kind() {
        // `[2][1] a` — consecutive modalities concatenate directly
        FormulaKind::Dia(_, _) | FormulaKind::Box(_, _) => write_unary(body, out),
        // `<1>(p + top)` — no space before the parenthesis
        FormulaKind::Xor(_, _) => write_unary(body, out),
        // `[1] a` — atoms are separated by a space
        _ => {
            out.push(' ');
            write_unary(body, out);
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // independent tree-walking counter: the oracle for `metrics` examples
    fn naive_size(f: &Formula) -> u64 {
        match f.kind() {
            FormulaKind::Top | FormulaKind::Bot | FormulaKind::Prop(_) => 1,
            FormulaKind::Xor(a, b) => 1 + naive_size(a) + naive_size(b),
            FormulaKind::Dia(_, a) | FormulaKind::Box(_, a) => 1 + naive_size(a),
        }
    }

    fn phi_a_shape() -> Formula {
        // [1] a + [2][1] a
        Formula::xor(
            Formula::box_(1, Formula::prop("a")),
            Formula::box_(2, Formula::box_(1, Formula::prop("a"))),
        )
    }

    #[test]
    fn print_basics() {
        assert_eq!(
            print_formula(&Formula::xor(Formula::top(), Formula::bot())),
            "top + bot"
        );
        assert_eq!(
            print_formula(&Formula::box_(2, Formula::box_(1, Formula::prop("a")))),
            "[2][1] a"
        );
        let abc = Formula::xor(
            Formula::xor(Formula::prop("a"), Formula::prop("b")),
            Formula::prop("c"),
        );
        assert_eq!(print_formula(&abc), "a + b + c");
        assert_eq!(print_formula(&phi_a_shape()), "[1] a + [2][1] a");
        assert_eq!(
            print_formula(&Formula::dia(
                1,
                Formula::xor(Formula::prop("p"), Formula::top())
            )),
            "<1>(p + top)"
        );
    }

    #[test]
    fn right_nested_xor_keeps_parens() {
        let f = Formula::xor(
            Formula::prop("a"),
            Formula::xor(Formula::prop("b"), Formula::prop("c")),
        );
        assert_eq!(print_formula(&f), "a + (b + c)");
        assert_eq!(parse_formula(&print_formula(&f)).unwrap(), f);
    }

    #[test]
    fn metrics_examples() {
        let m = metrics(&Formula::top());
        assert_eq!((m.size, m.modal_depth, m.max_index), (1, 0, 0));
        assert!(m.props.is_empty());

        // oracle count for [1]a + [2][1]a: xor, box, a, box, box, a
        let f = phi_a_shape();
        assert_eq!(naive_size(&f), 6);
        let m = metrics(&f);
        assert_eq!(m.size, 6);
        assert_eq!(m.modal_depth, 2);
        assert_eq!(m.props.iter().collect::<Vec<_>>(), ["a"]);
        assert_eq!(m.max_index, 2);

        let f = Formula::dia(
            1,
            Formula::xor(
                Formula::prop("a"),
                Formula::xor(Formula::prop("b"), Formula::prop("c")),
            ),
        );
        assert_eq!(naive_size(&f), 6);
        let m = metrics(&f);
        assert_eq!(m.size, 6);
        assert_eq!(m.modal_depth, 1);
        assert_eq!(m.props.len(), 3);
        assert_eq!(m.max_index, 1);
    }

    #[test]
    fn metrics_counts_shared_subterms_with_multiplicity() {
        let shared = Formula::prop("p");
        let f = Formula::xor(shared.clone(), shared);
        assert_eq!(metrics(&f).size, 3);
    }

    #[test]
    fn lower_boxes_shape() {
        let f = Formula::box_(1, Formula::prop("p"));
        let expect = Formula::xor(
            Formula::dia(1, Formula::xor(Formula::prop("p"), Formula::top())),
            Formula::top(),
        );
        assert_eq!(lower_boxes(&f), expect);
        assert_eq!(lower_boxes(&Formula::top()), Formula::top());

        let two = Formula::box_(2, Formula::box_(1, Formula::prop("p")));
        assert_eq!(box_count(&lower_boxes(&two)), 0);
        assert_eq!(box_count(&two), 2);
    }

    #[test]
    fn lower_boxes_size_bound() {
        let f = Formula::xor(
            Formula::box_(2, Formula::box_(1, Formula::prop("p"))),
            Formula::dia(1, Formula::box_(1, Formula::bot())),
        );
        let lowered = lower_boxes(&f);
        assert!(metrics(&lowered).size <= 3 * metrics(&f).size + 2 * box_count(&f));
    }
}
