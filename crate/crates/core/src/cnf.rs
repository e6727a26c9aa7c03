//! 3CNF formulas: data model, DIMACS ingestion, clause padding, balanced
//! bracketing, subformula independence, and a brute-force satisfiability
//! oracle for desk-scale validation.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A variable or its negation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    pub variable: String,
    pub positive: bool,
}

impl Literal {
    pub fn pos(variable: impl Into<String>) -> Self {
        Literal {
            variable: variable.into(),
            positive: true,
        }
    }

    pub fn neg(variable: impl Into<String>) -> Self {
        Literal {
            variable: variable.into(),
            positive: false,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            write!(f, "-")?;
        }
        write!(f, "{}", self.variable)
    }
}

/// A clause with exactly three literal slots. Slots are ordered and may
/// repeat; repetitions are semantically redundant but their multiplicity
/// matters to the modal translation, so they are never deduplicated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub literals: [Literal; 3],
}

impl Clause {
    pub fn new(l1: Literal, l2: Literal, l3: Literal) -> Self {
        Clause {
            literals: [l1, l2, l3],
        }
    }

    /// Same literal in all three slots.
    pub fn triple(lit: Literal) -> Self {
        Clause {
            literals: [lit.clone(), lit.clone(), lit],
        }
    }

    /// Distinct variables mentioned, in slot order.
    pub fn variables(&self) -> Vec<&str> {
        let mut seen = Vec::new();
        for lit in &self.literals {
            if !seen.contains(&lit.variable.as_str()) {
                seen.push(lit.variable.as_str());
            }
        }
        seen
    }

    /// True if some variable occurs with both polarities.
    pub fn tautological(&self) -> bool {
        self.literals.iter().any(|a| {
            self.literals
                .iter()
                .any(|b| a.variable == b.variable && a.positive != b.positive)
        })
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} | {} | {})",
            self.literals[0], self.literals[1], self.literals[2]
        )
    }
}

/// A 3CNF formula over a declared, ordered variable universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf {
    pub variables: Vec<String>,
    pub clauses: Vec<Clause>,
}

impl Cnf {
    /// Build a CNF, checking that every clause variable is declared and
    /// declarations are unique.
    pub fn new(variables: Vec<String>, clauses: Vec<Clause>) -> Result<Self> {
        let universe: BTreeSet<&str> = variables.iter().map(|v| v.as_str()).collect();
        if universe.len() != variables.len() {
            return Err(Error::InvalidInput("duplicate variable declaration".into()));
        }
        for clause in &clauses {
            for lit in &clause.literals {
                if !universe.contains(lit.variable.as_str()) {
                    return Err(Error::UndeclaredVariable(lit.variable.clone()));
                }
            }
        }
        Ok(Cnf { variables, clauses })
    }
}

/// A total truth assignment: the variables of `true_set` are true, every
/// other member of `universe` is false.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub true_set: BTreeSet<String>,
    pub universe: BTreeSet<String>,
}

impl Assignment {
    pub fn new(true_set: BTreeSet<String>, universe: BTreeSet<String>) -> Result<Self> {
        if !true_set.is_subset(&universe) {
            return Err(Error::InvalidInput(
                "assignment sets a variable outside its universe".into(),
            ));
        }
        Ok(Assignment { true_set, universe })
    }

    pub fn value(&self, variable: &str) -> Result<bool> {
        if !self.universe.contains(variable) {
            return Err(Error::UndeclaredVariable(variable.to_string()));
        }
        Ok(self.true_set.contains(variable))
    }

    pub fn satisfies_literal(&self, lit: &Literal) -> Result<bool> {
        Ok(self.value(&lit.variable)? == lit.positive)
    }

    /// Copy with `variable` set to `value`; the variable must be declared.
    pub fn with(&self, variable: &str, value: bool) -> Result<Self> {
        if !self.universe.contains(variable) {
            return Err(Error::UndeclaredVariable(variable.to_string()));
        }
        let mut true_set = self.true_set.clone();
        if value {
            true_set.insert(variable.to_string());
        } else {
            true_set.remove(variable);
        }
        Ok(Assignment {
            true_set,
            universe: self.universe.clone(),
        })
    }

    /// Restrict to a smaller universe.
    pub fn restrict(&self, vars: &BTreeSet<String>) -> Assignment {
        Assignment {
            true_set: self.true_set.intersection(vars).cloned().collect(),
            universe: vars.clone(),
        }
    }
}

/// Binary conjunction tree over clauses. Leaf order preserves source
/// clause order left to right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConjTree {
    Leaf(Clause),
    And(Box<ConjTree>, Box<ConjTree>),
}

impl ConjTree {
    pub fn and(left: ConjTree, right: ConjTree) -> Self {
        ConjTree::And(Box::new(left), Box::new(right))
    }

    /// Clauses in leaf order.
    pub fn clauses(&self) -> Vec<&Clause> {
        let mut out = Vec::new();
        self.collect_clauses(&mut out);
        out
    }

    fn collect_clauses<'a>(&'a self, out: &mut Vec<&'a Clause>) {
        match self {
            ConjTree::Leaf(c) => out.push(c),
            ConjTree::And(g, h) => {
                g.collect_clauses(out);
                h.collect_clauses(out);
            }
        }
    }

    /// Distinct variables, in first-occurrence order.
    pub fn variables(&self) -> Vec<&str> {
        let mut seen = Vec::new();
        for clause in self.clauses() {
            for var in clause.variables() {
                if !seen.contains(&var) {
                    seen.push(var);
                }
            }
        }
        seen
    }

    pub fn depth(&self) -> u32 {
        match self {
            ConjTree::Leaf(_) => 0,
            ConjTree::And(g, h) => 1 + g.depth().max(h.depth()),
        }
    }

    /// Subtree at `path`, if it exists.
    pub fn subtree(&self, path: &TreePath) -> Option<&ConjTree> {
        let mut node = self;
        for step in path.0.chars() {
            match (step, node) {
                ('l', ConjTree::And(g, _)) => node = g,
                ('r', ConjTree::And(_, h)) => node = h,
                _ => return None,
            }
        }
        Some(node)
    }
}

/// Address of a node inside a [`ConjTree`]: the sequence of left/right
/// steps from the root, e.g. `""` (root), `"l"`, `"lr"`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TreePath(pub(crate) String);

impl TreePath {
    pub fn root() -> Self {
        TreePath(String::new())
    }

    pub fn left(&self) -> Self {
        TreePath(format!("{}l", self.0))
    }

    pub fn right(&self) -> Self {
        TreePath(format!("{}r", self.0))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for TreePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "(root)")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Result of the equisatisfiable padding transformation: every original
/// clause is conjoined with a fresh triplicated padding clause, and the
/// clause pairs are bracketed into a balanced binary tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaddedCnf {
    pub tree: ConjTree,
    pub padding_vars: Vec<String>,
    pub origin: Cnf,
}

impl PaddedCnf {
    /// Universe of the padded formula: origin variables plus padding.
    pub fn universe(&self) -> BTreeSet<String> {
        self.origin
            .variables
            .iter()
            .chain(self.padding_vars.iter())
            .cloned()
            .collect()
    }
}

/// Evaluate a clause: true iff some slot's literal is satisfied.
pub fn eval_clause(clause: &Clause, a: &Assignment) -> Result<bool> {
    for lit in &clause.literals {
        if a.satisfies_literal(lit)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Evaluate a CNF under an assignment.
pub fn eval_cnf(f: &Cnf, a: &Assignment) -> Result<bool> {
    for clause in &f.clauses {
        if !eval_clause(clause, a)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Evaluate a conjunction tree under an assignment.
pub fn eval_tree(t: &ConjTree, a: &Assignment) -> Result<bool> {
    match t {
        ConjTree::Leaf(c) => eval_clause(c, a),
        ConjTree::And(g, h) => Ok(eval_tree(g, a)? && eval_tree(h, a)?),
    }
}

/// Parse DIMACS CNF text.
///
/// Variables `1..=n` become `x1..xn`. Clauses are normalized to exactly
/// three slots:
/// * 3 literals — kept verbatim;
/// * 1 literal `(x)` — triplicated to `(x|x|x)`;
/// * 2 literals `(x|y)` — extended to `(x|y|z)` with a fresh variable `z`
///   forced false by an immediately following clause `(-z|-z|-z)`.
///
/// Triplication keeps literal multiplicities odd, which the witness
/// gadget requires; duplicating a single literal once would not.
pub fn parse_dimacs(text: &str) -> Result<Cnf> {
    let mut tokens = text
        .lines()
        .filter(|line| !line.trim_start().starts_with('c'))
        .flat_map(|line| line.split_whitespace())
        .peekable();

    match (tokens.next(), tokens.next()) {
        (Some("p"), Some("cnf")) => {}
        _ => return Err(Error::Dimacs("expected `p cnf <vars> <clauses>` header".into())),
    }
    let nvars: usize = tokens
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Dimacs("malformed variable count in header".into()))?;
    let _nclauses: usize = tokens
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Dimacs("malformed clause count in header".into()))?;

    let mut variables: Vec<String> = (1..=nvars).map(|i| format!("x{i}")).collect();
    let mut clauses = Vec::new();
    let mut fresh = 0usize;

    let mut current: Vec<Literal> = Vec::new();
    for token in tokens {
        let value: i64 = token
            .parse()
            .map_err(|_| Error::Dimacs(format!("bad literal token `{token}`")))?;
        if value == 0 {
            match current.len() {
                0 => return Err(Error::Dimacs("clause with no literals".into())),
                1 => clauses.push(Clause::triple(current[0].clone())),
                2 => {
                    fresh += 1;
                    let z = format!("z{fresh}");
                    variables.push(z.clone());
                    clauses.push(Clause::new(
                        current[0].clone(),
                        current[1].clone(),
                        Literal::pos(z.clone()),
                    ));
                    clauses.push(Clause::triple(Literal::neg(z)));
                }
                3 => {
                    clauses.push(Clause::new(
                        current[0].clone(),
                        current[1].clone(),
                        current[2].clone(),
                    ));
                }
                n => {
                    return Err(Error::Dimacs(format!(
                        "clause with {n} literals; at most 3 are supported"
                    )))
                }
            }
            current.clear();
        } else {
            let var = value.unsigned_abs() as usize;
            if var == 0 || var > nvars {
                return Err(Error::Dimacs(format!(
                    "variable index {var} out of range 1..={nvars}"
                )));
            }
            current.push(Literal {
                variable: format!("x{var}"),
                positive: value > 0,
            });
        }
    }
    if !current.is_empty() {
        return Err(Error::Dimacs("unterminated clause (missing trailing 0)".into()));
    }

    Cnf::new(variables, clauses)
}

/// Bracket a list of trees into a balanced binary conjunction, splitting
/// ceil(n/2) / floor(n/2) and preserving order. Depth is ceil(log2 n).
pub fn bracket_balanced(mut leaves: Vec<ConjTree>) -> Result<ConjTree> {
    if leaves.is_empty() {
        return Err(Error::EmptyCnf);
    }
    fn build(slice: &mut [Option<ConjTree>]) -> ConjTree {
        match slice.len() {
            1 => slice[0].take().expect("slot taken twice"),
            n => {
                let mid = n.div_ceil(2);
                let (left, right) = slice.split_at_mut(mid);
                ConjTree::and(build(left), build(right))
            }
        }
    }
    let mut slots: Vec<Option<ConjTree>> = leaves.drain(..).map(Some).collect();
    Ok(build(&mut slots))
}

/// Conjoin every clause `C_i` with a fresh triplicated padding clause
/// `(_pad<i> | _pad<i> | _pad<i>)` and bracket the pairs into a balanced
/// tree. The result is satisfiable iff the input is (set all padding
/// variables true), and every conjunction node of the tree is strongly
/// independent.
pub fn pad(f: &Cnf) -> Result<PaddedCnf> {
    if f.clauses.is_empty() {
        return Err(Error::EmptyCnf);
    }
    if f.variables.iter().any(|v| v.starts_with("_pad")) {
        return Err(Error::InvalidInput(
            "variable names starting with `_pad` are reserved for padding".into(),
        ));
    }
    let mut padding_vars = Vec::with_capacity(f.clauses.len());
    let mut pairs = Vec::with_capacity(f.clauses.len());
    for (i, clause) in f.clauses.iter().enumerate() {
        let b = format!("_pad{}", i + 1);
        padding_vars.push(b.clone());
        pairs.push(ConjTree::and(
            ConjTree::Leaf(clause.clone()),
            ConjTree::Leaf(Clause::triple(Literal::pos(b))),
        ));
    }
    Ok(PaddedCnf {
        tree: bracket_balanced(pairs)?,
        padding_vars,
        origin: f.clone(),
    })
}

/// Independence of two subformulas in both directions.
///
/// `g` is independent from `h` when some clause of `g` uses only
/// variables absent from `h`; strong independence is both flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Independence {
    pub g_indep_h: bool,
    pub h_indep_g: bool,
}

impl Independence {
    pub fn strong(&self) -> bool {
        self.g_indep_h && self.h_indep_g
    }
}

pub fn independence(g: &ConjTree, h: &ConjTree) -> Independence {
    fn one_way(g: &ConjTree, h: &ConjTree) -> bool {
        let h_vars: BTreeSet<&str> = h.variables().into_iter().collect();
        g.clauses()
            .iter()
            .any(|c| c.variables().iter().all(|v| !h_vars.contains(v)))
    }
    Independence {
        g_indep_h: one_way(g, h),
        h_indep_g: one_way(h, g),
    }
}

/// Default variable budget for [`brute_force_sat`].
pub const DEFAULT_VAR_LIMIT: usize = 24;

fn brute_force(
    vars: &[&str],
    universe: &BTreeSet<String>,
    var_limit: usize,
    mut satisfied: impl FnMut(&Assignment) -> Result<bool>,
) -> Result<Option<Assignment>> {
    if vars.len() > var_limit {
        return Err(Error::BudgetExceeded(format!(
            "{} variables exceed the brute-force limit of {var_limit}",
            vars.len()
        )));
    }
    // Counter order makes the first hit lexicographically least over the
    // (v1, ..., vn) truth sequence with false < true.
    let n = vars.len();
    for mask in 0..(1u64 << n) {
        let true_set: BTreeSet<String> = (0..n)
            .filter(|j| mask >> (n - 1 - j) & 1 == 1)
            .map(|j| vars[j].to_string())
            .collect();
        let a = Assignment {
            true_set,
            universe: universe.clone(),
        };
        if satisfied(&a)? {
            return Ok(Some(a));
        }
    }
    Ok(None)
}

/// Exhaustively search for a satisfying assignment of a CNF, returning the
/// lexicographically first one by declared variable order, or `None`.
pub fn brute_force_sat(f: &Cnf, var_limit: usize) -> Result<Option<Assignment>> {
    let vars: Vec<&str> = f.variables.iter().map(|v| v.as_str()).collect();
    let universe: BTreeSet<String> = f.variables.iter().cloned().collect();
    brute_force(&vars, &universe, var_limit, |a| eval_cnf(f, a))
}

/// Exhaustive satisfiability for a conjunction tree; variable order is
/// first occurrence in leaf order.
pub fn brute_force_sat_tree(t: &ConjTree, var_limit: usize) -> Result<Option<Assignment>> {
    let vars = t.variables();
    let universe: BTreeSet<String> = vars.iter().map(|v| v.to_string()).collect();
    brute_force(&vars, &universe, var_limit, |a| eval_tree(t, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assignment(true_vars: &[&str], universe: &[&str]) -> Assignment {
        Assignment::new(
            true_vars.iter().map(|v| v.to_string()).collect(),
            universe.iter().map(|v| v.to_string()).collect(),
        )
        .unwrap()
    }

    /// The worked example formula:
    /// (a|b|c) & (-d|f|e) & (-e|f|g)
    fn example_cnf() -> Cnf {
        Cnf::new(
            ["a", "b", "c", "d", "e", "f", "g"]
                .iter()
                .map(|v| v.to_string())
                .collect(),
            vec![
                Clause::new(Literal::pos("a"), Literal::pos("b"), Literal::pos("c")),
                Clause::new(Literal::neg("d"), Literal::pos("f"), Literal::pos("e")),
                Clause::new(Literal::neg("e"), Literal::pos("f"), Literal::pos("g")),
            ],
        )
        .unwrap()
    }

    #[test]
    fn dimacs_three_literals_verbatim() {
        let f = parse_dimacs("p cnf 3 1\n1 2 3 0\n").unwrap();
        assert_eq!(f.variables, ["x1", "x2", "x3"]);
        assert_eq!(
            f.clauses,
            vec![Clause::new(
                Literal::pos("x1"),
                Literal::pos("x2"),
                Literal::pos("x3")
            )]
        );
    }

    #[test]
    fn dimacs_unit_clause_triplicated() {
        let f = parse_dimacs("p cnf 1 1\n1 0\n").unwrap();
        assert_eq!(f.clauses, vec![Clause::triple(Literal::pos("x1"))]);
        // oracle: (x1) and (x1|x1|x1) agree on both assignments
        for x1 in [false, true] {
            let a = assignment(if x1 { &["x1"] } else { &[] }, &["x1"]);
            assert_eq!(eval_cnf(&f, &a).unwrap(), x1);
        }
    }

    #[test]
    fn dimacs_two_literal_clause_gets_forced_false_var() {
        let f = parse_dimacs("p cnf 2 1\n1 2 0\n").unwrap();
        assert_eq!(f.variables, ["x1", "x2", "z1"]);
        assert_eq!(
            f.clauses,
            vec![
                Clause::new(Literal::pos("x1"), Literal::pos("x2"), Literal::pos("z1")),
                Clause::triple(Literal::neg("z1")),
            ]
        );
        // oracle: equisatisfiable with (x1|x2) over all 8 assignments
        for mask in 0..8u8 {
            let mut true_vars = Vec::new();
            for (j, v) in ["x1", "x2", "z1"].iter().enumerate() {
                if mask >> j & 1 == 1 {
                    true_vars.push(*v);
                }
            }
            let a = assignment(&true_vars, &["x1", "x2", "z1"]);
            let original = a.value("x1").unwrap() || a.value("x2").unwrap();
            if eval_cnf(&f, &a).unwrap() {
                assert!(original);
            }
        }
        assert!(brute_force_sat(&f, 8).unwrap().is_some());
    }

    #[test]
    fn dimacs_errors() {
        assert!(matches!(parse_dimacs("p sat 1 1\n1 0"), Err(Error::Dimacs(_))));
        assert!(matches!(
            parse_dimacs("p cnf 4 1\n1 2 3 4 0"),
            Err(Error::Dimacs(_))
        ));
        assert!(matches!(parse_dimacs("p cnf 1 1\n2 0"), Err(Error::Dimacs(_))));
        assert!(matches!(parse_dimacs("p cnf 1 1\n1"), Err(Error::Dimacs(_))));
    }

    #[test]
    fn eval_examples() {
        let c = Clause::new(Literal::pos("x"), Literal::pos("y"), Literal::pos("z"));
        let a = assignment(&["x"], &["x", "y", "z"]);
        assert!(eval_clause(&c, &a).unwrap());

        let b = Clause::triple(Literal::pos("b"));
        let empty = assignment(&[], &["b"]);
        assert!(!eval_clause(&b, &empty).unwrap());

        let f = example_cnf();
        let a = assignment(&["a", "f"], &["a", "b", "c", "d", "e", "f", "g"]);
        assert!(eval_cnf(&f, &a).unwrap());
    }

    #[test]
    fn eval_rejects_undeclared_variable() {
        let c = Clause::triple(Literal::pos("q"));
        let a = assignment(&[], &["x"]);
        assert!(matches!(
            eval_clause(&c, &a),
            Err(Error::UndeclaredVariable(_))
        ));
    }

    #[test]
    fn pad_single_clause() {
        let f = parse_dimacs("p cnf 3 1\n1 2 3 0").unwrap();
        let padded = pad(&f).unwrap();
        assert_eq!(padded.padding_vars, ["_pad1"]);
        match &padded.tree {
            ConjTree::And(g, h) => {
                assert_eq!(**g, ConjTree::Leaf(f.clauses[0].clone()));
                assert_eq!(
                    **h,
                    ConjTree::Leaf(Clause::triple(Literal::pos("_pad1")))
                );
            }
            other => panic!("expected a pair, got {other:?}"),
        }
    }

    #[test]
    fn pad_two_clauses_balanced() {
        let f = parse_dimacs("p cnf 3 2\n1 2 3 0\n-1 -2 -3 0").unwrap();
        let padded = pad(&f).unwrap();
        assert_eq!(padded.tree.depth(), 2);
        let clauses = padded.tree.clauses();
        assert_eq!(clauses.len(), 4);
        assert_eq!(clauses[1], &Clause::triple(Literal::pos("_pad1")));
        assert_eq!(clauses[3], &Clause::triple(Literal::pos("_pad2")));
    }

    #[test]
    fn pad_preserves_unsatisfiability() {
        // (x|x|x) & (-x|-x|-x) is unsatisfiable; padding must keep it so
        let f = parse_dimacs("p cnf 1 2\n1 0\n-1 0").unwrap();
        let padded = pad(&f).unwrap();
        assert!(brute_force_sat(&f, 8).unwrap().is_none());
        assert!(brute_force_sat_tree(&padded.tree, 8).unwrap().is_none());
    }

    #[test]
    fn pad_rejects_reserved_names() {
        let f = Cnf::new(
            vec!["_pad1".into()],
            vec![Clause::triple(Literal::pos("_pad1"))],
        )
        .unwrap();
        assert!(pad(&f).is_err());
    }

    #[test]
    fn bracket_shapes() {
        let leaf = |i: usize| ConjTree::Leaf(Clause::triple(Literal::pos(format!("v{i}"))));
        let t = bracket_balanced((0..4).map(leaf).collect()).unwrap();
        assert_eq!(t.depth(), 2);

        let t = bracket_balanced(vec![leaf(0)]).unwrap();
        assert_eq!(t.depth(), 0);

        let t = bracket_balanced((0..5).map(leaf).collect()).unwrap();
        assert_eq!(t.depth(), 3);
        match &t {
            ConjTree::And(g, _) => assert_eq!(g.clauses().len(), 3),
            _ => unreachable!(),
        }
        assert!(bracket_balanced(vec![]).is_err());
    }

    #[test]
    fn bracket_depth_is_logarithmic() {
        for n in 1..=1024usize {
            let leaves = (0..n)
                .map(|i| ConjTree::Leaf(Clause::triple(Literal::pos(format!("v{i}")))))
                .collect();
            let t = bracket_balanced(leaves).unwrap();
            assert_eq!(t.clauses().len(), n);
            assert!(t.depth() <= (n as f64).log2().ceil() as u32);
        }
    }

    #[test]
    fn independence_example() {
        let f = example_cnf();
        let g = ConjTree::Leaf(f.clauses[0].clone());
        let h = ConjTree::and(
            ConjTree::Leaf(f.clauses[1].clone()),
            ConjTree::Leaf(f.clauses[2].clone()),
        );
        assert!(independence(&g, &h).strong());

        let shared = independence(&g, &g);
        assert!(!shared.g_indep_h);
        assert!(!shared.h_indep_g);
    }

    #[test]
    fn padded_trees_are_strongly_independent_everywhere() {
        let f = example_cnf();
        let padded = pad(&f).unwrap();
        fn walk(t: &ConjTree) {
            if let ConjTree::And(g, h) = t {
                assert!(independence(g, h).strong(), "node {g:?} / {h:?}");
                walk(g);
                walk(h);
            }
        }
        walk(&padded.tree);
    }

    #[test]
    fn padding_keeps_origin_evaluation() {
        // with all padding vars true, the padded tree evaluates exactly
        // like the origin on every assignment of the origin's variables
        let f = parse_dimacs("p cnf 2 2\n1 2 -1 0\n-2 -2 1 0").unwrap();
        let padded = pad(&f).unwrap();
        let mut universe: BTreeSet<String> = f.variables.iter().cloned().collect();
        universe.extend(padded.padding_vars.iter().cloned());
        for mask in 0..4u8 {
            let mut true_set: BTreeSet<String> =
                padded.padding_vars.iter().cloned().collect();
            if mask & 1 == 1 {
                true_set.insert("x1".into());
            }
            if mask & 2 == 2 {
                true_set.insert("x2".into());
            }
            let ext = Assignment::new(true_set, universe.clone()).unwrap();
            let orig = ext.restrict(&f.variables.iter().cloned().collect());
            assert_eq!(
                eval_tree(&padded.tree, &ext).unwrap(),
                eval_cnf(&f, &orig).unwrap()
            );
        }
    }

    #[test]
    fn brute_force_examples() {
        let forced = parse_dimacs("p cnf 1 1\n1 0").unwrap();
        let a = brute_force_sat(&forced, 8).unwrap().unwrap();
        assert!(a.true_set.contains("x1"));

        let contradiction = parse_dimacs("p cnf 1 2\n1 0\n-1 0").unwrap();
        assert!(brute_force_sat(&contradiction, 8).unwrap().is_none());

        // the 7-variable worked example: first satisfying assignment in
        // counter order is {c} (a, b false; c true satisfies clause 1,
        // d and e false satisfy the rest)
        let f = example_cnf();
        let a = brute_force_sat(&f, 8).unwrap().unwrap();
        assert_eq!(a.true_set.iter().collect::<Vec<_>>(), ["c"]);
        assert!(eval_cnf(&f, &a).unwrap());
    }

    #[test]
    fn brute_force_budget() {
        let vars: Vec<String> = (1..=30).map(|i| format!("x{i}")).collect();
        let f = Cnf::new(vars, vec![Clause::triple(Literal::pos("x1"))]).unwrap();
        assert!(matches!(
            brute_force_sat(&f, DEFAULT_VAR_LIMIT),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn tree_paths_address_subtrees() {
        let f = example_cnf();
        let padded = pad(&f).unwrap();
        let root = TreePath::root();
        assert_eq!(padded.tree.subtree(&root), Some(&padded.tree));
        // three clause pairs bracket as ((P1 & P2) & P3); C1 sits at lll
        let path = root.left().left().left();
        match padded.tree.subtree(&path) {
            Some(ConjTree::Leaf(c)) => assert_eq!(c, &f.clauses[0]),
            other => panic!("expected first clause leaf, got {other:?}"),
        }
        assert!(padded.tree.subtree(&path.left()).is_none());
    }
}
