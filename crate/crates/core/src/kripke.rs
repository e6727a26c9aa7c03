//! Kripke structures with indexed relations, frame properties and
//! closures, equivalence classes, disjoint unions, substructures, and a
//! JSON wire format.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::cnf::Assignment;
use crate::error::{Error, Result};

/// Frame classes ordered by containment: every S5 frame is an S4 frame,
/// every S4 frame is a T frame, and K imposes no constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FrameClass {
    K,
    T,
    S4,
    S5,
}

impl FrameClass {
    pub fn requires_reflexive(self) -> bool {
        self != FrameClass::K
    }

    pub fn requires_transitive(self) -> bool {
        matches!(self, FrameClass::S4 | FrameClass::S5)
    }

    pub fn requires_symmetric(self) -> bool {
        self == FrameClass::S5
    }
}

impl fmt::Display for FrameClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FrameClass::K => "k",
            FrameClass::T => "t",
            FrameClass::S4 => "s4",
            FrameClass::S5 => "s5",
        };
        f.write_str(s)
    }
}

impl FromStr for FrameClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "k" => Ok(FrameClass::K),
            "t" => Ok(FrameClass::T),
            "s4" => Ok(FrameClass::S4),
            "s5" => Ok(FrameClass::S5),
            other => Err(Error::InvalidInput(format!(
                "unknown frame class `{other}` (expected k, t, s4, or s5)"
            ))),
        }
    }
}

/// First-order frame properties of a single relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameProperties {
    pub reflexive: bool,
    pub transitive: bool,
    pub symmetric: bool,
}

impl FrameProperties {
    pub fn equivalence(&self) -> bool {
        self.reflexive && self.transitive && self.symmetric
    }

    pub fn satisfies(&self, class: FrameClass) -> bool {
        (!class.requires_reflexive() || self.reflexive)
            && (!class.requires_transitive() || self.transitive)
            && (!class.requires_symmetric() || self.symmetric)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Partition {
    pub(crate) class_of: Vec<usize>,
    pub(crate) classes: Vec<Vec<usize>>,
}

#[derive(Debug, Clone)]
pub(crate) struct RelationAnalysis {
    pub(crate) properties: FrameProperties,
    /// Present exactly when the relation is an equivalence.
    pub(crate) partition: Option<Partition>,
}

/// A finite Kripke structure: ordered worlds, one binary relation per
/// modality index, and a valuation assigning each world a set of true
/// propositions. Immutable after construction.
#[derive(Debug, Clone)]
pub struct KripkeStructure {
    arity: usize,
    worlds: Vec<String>,
    index: HashMap<String, usize>,
    relations: Vec<BTreeSet<(usize, usize)>>,
    valuation: Vec<BTreeSet<String>>,
    closed_as: Option<FrameClass>,
    analysis: OnceLock<Vec<RelationAnalysis>>,
}

impl PartialEq for KripkeStructure {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity
            && self.worlds == other.worlds
            && self.relations == other.relations
            && self.valuation == other.valuation
    }
}

impl Eq for KripkeStructure {}

impl KripkeStructure {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn has_world(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn closed_as(&self) -> Option<FrameClass> {
        self.closed_as
    }

    pub(crate) fn world_index(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownWorld(name.to_string()))
    }

    pub(crate) fn world_name(&self, idx: usize) -> &str {
        &self.worlds[idx]
    }

    pub(crate) fn valuation_by_index(&self, idx: usize) -> &BTreeSet<String> {
        &self.valuation[idx]
    }

    pub(crate) fn relation(&self, rel0: usize) -> &BTreeSet<(usize, usize)> {
        &self.relations[rel0]
    }

    /// Check a 1-based modality index against the arity.
    pub(crate) fn check_index(&self, index: u32) -> Result<usize> {
        if index == 0 || index as usize > self.arity {
            Err(Error::ModalityOutOfRange {
                index,
                arity: self.arity,
            })
        } else {
            Ok(index as usize - 1)
        }
    }

    /// True propositions at a world.
    pub fn props_at(&self, world: &str) -> Result<&BTreeSet<String>> {
        Ok(&self.valuation[self.world_index(world)?])
    }

    /// Every proposition mentioned anywhere in the valuation.
    pub fn props(&self) -> BTreeSet<String> {
        self.valuation.iter().flatten().cloned().collect()
    }

    /// Pairs of relation `index` (1-based) as world names.
    pub fn relation_pairs(&self, index: u32) -> Result<Vec<(&str, &str)>> {
        let rel0 = self.check_index(index)?;
        Ok(self.relations[rel0]
            .iter()
            .map(|&(u, v)| (self.world_name(u), self.world_name(v)))
            .collect())
    }

    pub(crate) fn analysis(&self) -> &Vec<RelationAnalysis> {
        self.analysis.get_or_init(|| {
            self.relations
                .iter()
                .map(|rel| analyze_relation(rel, self.worlds.len()))
                .collect()
        })
    }

    /// Per-relation frame properties, computed from their first-order
    /// definitions.
    pub fn frame_properties(&self) -> Vec<FrameProperties> {
        self.analysis().iter().map(|a| a.properties).collect()
    }

    /// True when every relation satisfies the frame class.
    pub fn is_frame(&self, class: FrameClass) -> bool {
        self.frame_properties().iter().all(|p| p.satisfies(class))
    }

    /// The equivalence class of `world` under relation `index`.
    /// Fails, naming the missing property, if the relation is not an
    /// equivalence.
    pub fn eq_class(&self, index: u32, world: &str) -> Result<BTreeSet<String>> {
        let rel0 = self.check_index(index)?;
        let w = self.world_index(world)?;
        let analysis = &self.analysis()[rel0];
        let Some(partition) = &analysis.partition else {
            let p = analysis.properties;
            let missing = if !p.reflexive {
                "reflexivity"
            } else if !p.symmetric {
                "symmetry"
            } else {
                "transitivity"
            };
            return Err(Error::NotEquivalence {
                relation: index,
                missing: missing.to_string(),
            });
        };
        Ok(partition.classes[partition.class_of[w]]
            .iter()
            .map(|&i| self.worlds[i].clone())
            .collect())
    }

    /// Minimal superset of every relation satisfying the frame class:
    /// reflexive closure for T, reflexive-transitive for S4, and the
    /// finest equivalence containing the input for S5. Idempotent.
    pub fn close(&self, class: FrameClass) -> KripkeStructure {
        let n = self.worlds.len();
        let relations = self
            .relations
            .iter()
            .map(|rel| close_relation(rel, n, class))
            .collect();
        KripkeStructure {
            arity: self.arity,
            worlds: self.worlds.clone(),
            index: self.index.clone(),
            relations,
            valuation: self.valuation.clone(),
            closed_as: Some(class),
            analysis: OnceLock::new(),
        }
    }

    /// Restriction to a subset of worlds: relations and valuation are cut
    /// down to the kept worlds.
    pub fn substructure(&self, keep: &BTreeSet<String>) -> Result<KripkeStructure> {
        let mut kept: Vec<usize> = Vec::with_capacity(keep.len());
        for name in keep {
            kept.push(self.world_index(name)?);
        }
        kept.sort_unstable();
        let mut remap: HashMap<usize, usize> = HashMap::new();
        let mut builder = KripkeBuilder::new(self.arity);
        for (new_idx, &old_idx) in kept.iter().enumerate() {
            remap.insert(old_idx, new_idx);
            builder
                .add_world(&self.worlds[old_idx], self.valuation[old_idx].clone())
                .expect("kept worlds are unique");
        }
        for (rel0, rel) in self.relations.iter().enumerate() {
            for &(u, v) in rel {
                if let (Some(&nu), Some(&nv)) = (remap.get(&u), remap.get(&v)) {
                    builder.add_edge_by_index(rel0, nu, nv);
                }
            }
        }
        let mut out = builder.finish();
        out.closed_as = self.closed_as;
        Ok(out)
    }
}

fn analyze_relation(rel: &BTreeSet<(usize, usize)>, n: usize) -> RelationAnalysis {
    let reflexive = (0..n).all(|w| rel.contains(&(w, w)));
    let symmetric = rel.iter().all(|&(u, v)| rel.contains(&(v, u)));
    let mut succs: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v) in rel {
        succs[u].push(v);
    }
    let transitive = rel
        .iter()
        .all(|&(u, v)| succs[v].iter().all(|&w| rel.contains(&(u, w))));

    let properties = FrameProperties {
        reflexive,
        transitive,
        symmetric,
    };
    let partition = properties.equivalence().then(|| {
        // orbits of an equivalence relation, in least-member order
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for start in 0..n {
            if class_of[start] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut members = vec![start];
            class_of[start] = id;
            for &v in &succs[start] {
                if class_of[v] == usize::MAX {
                    class_of[v] = id;
                    members.push(v);
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        Partition { class_of, classes }
    });
    RelationAnalysis {
        properties,
        partition,
    }
}

fn close_relation(
    rel: &BTreeSet<(usize, usize)>,
    n: usize,
    class: FrameClass,
) -> BTreeSet<(usize, usize)> {
    match class {
        FrameClass::K => rel.clone(),
        FrameClass::T => {
            let mut out = rel.clone();
            out.extend((0..n).map(|w| (w, w)));
            out
        }
        FrameClass::S4 => {
            // reflexive-transitive closure by forward reachability
            let mut succs: Vec<Vec<usize>> = vec![Vec::new(); n];
            for &(u, v) in rel {
                succs[u].push(v);
            }
            let mut out = BTreeSet::new();
            let mut seen = vec![false; n];
            for start in 0..n {
                seen.iter_mut().for_each(|s| *s = false);
                let mut stack = vec![start];
                seen[start] = true;
                while let Some(u) = stack.pop() {
                    for &v in &succs[u] {
                        if !seen[v] {
                            seen[v] = true;
                            stack.push(v);
                        }
                    }
                }
                out.extend((0..n).filter(|&v| seen[v]).map(|v| (start, v)));
                out.insert((start, start));
            }
            out
        }
        FrameClass::S5 => {
            // finest equivalence containing the input: union-find
            let mut parent: Vec<usize> = (0..n).collect();
            fn find(parent: &mut Vec<usize>, x: usize) -> usize {
                if parent[x] != x {
                    let root = find(parent, parent[x]);
                    parent[x] = root;
                }
                parent[x]
            }
            for &(u, v) in rel {
                let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                if ru != rv {
                    parent[ru] = rv;
                }
            }
            let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for w in 0..n {
                let root = find(&mut parent, w);
                classes.entry(root).or_default().push(w);
            }
            let mut out = BTreeSet::new();
            for members in classes.values() {
                for &u in members {
                    for &v in members {
                        out.insert((u, v));
                    }
                }
            }
            out
        }
    }
}

/// Incremental constructor for [`KripkeStructure`].
#[derive(Debug)]
pub struct KripkeBuilder {
    arity: usize,
    worlds: Vec<String>,
    index: HashMap<String, usize>,
    relations: Vec<BTreeSet<(usize, usize)>>,
    valuation: Vec<BTreeSet<String>>,
}

impl KripkeBuilder {
    pub fn new(arity: usize) -> Self {
        assert!(arity >= 1, "arity must be at least 1");
        KripkeBuilder {
            arity,
            worlds: Vec::new(),
            index: HashMap::new(),
            relations: vec![BTreeSet::new(); arity],
            valuation: Vec::new(),
        }
    }

    pub fn add_world(&mut self, name: &str, props: BTreeSet<String>) -> Result<()> {
        if self.index.contains_key(name) {
            return Err(Error::DuplicateWorld(name.to_string()));
        }
        self.index.insert(name.to_string(), self.worlds.len());
        self.worlds.push(name.to_string());
        self.valuation.push(props);
        Ok(())
    }

    /// Add an ordered pair to relation `index` (1-based).
    pub fn add_edge(&mut self, index: u32, from: &str, to: &str) -> Result<()> {
        if index == 0 || index as usize > self.arity {
            return Err(Error::ModalityOutOfRange {
                index,
                arity: self.arity,
            });
        }
        let u = *self
            .index
            .get(from)
            .ok_or_else(|| Error::UnknownWorld(from.to_string()))?;
        let v = *self
            .index
            .get(to)
            .ok_or_else(|| Error::UnknownWorld(to.to_string()))?;
        self.relations[index as usize - 1].insert((u, v));
        Ok(())
    }

    fn add_edge_by_index(&mut self, rel0: usize, u: usize, v: usize) {
        self.relations[rel0].insert((u, v));
    }

    /// Copy every world, edge, and label of `m` into this builder.
    /// World names must not collide with existing ones.
    pub fn absorb(&mut self, m: &KripkeStructure) -> Result<()> {
        if m.arity != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: m.arity,
            });
        }
        let offset = self.worlds.len();
        for (idx, name) in m.worlds.iter().enumerate() {
            self.add_world(name, m.valuation[idx].clone())?;
        }
        for (rel0, rel) in m.relations.iter().enumerate() {
            for &(u, v) in rel {
                self.add_edge_by_index(rel0, offset + u, offset + v);
            }
        }
        Ok(())
    }

    pub fn finish(self) -> KripkeStructure {
        KripkeStructure {
            arity: self.arity,
            worlds: self.worlds,
            index: self.index,
            relations: self.relations,
            valuation: self.valuation,
            closed_as: None,
            analysis: OnceLock::new(),
        }
    }
}

/// Disjoint union of structures of equal arity. Worlds are renamed with
/// deterministic `u<i>.` prefixes; the returned maps send each input
/// structure's world names to their new names.
pub fn disjoint_union(
    structures: &[KripkeStructure],
) -> Result<(KripkeStructure, Vec<BTreeMap<String, String>>)> {
    let Some(first) = structures.first() else {
        return Err(Error::InvalidInput(
            "disjoint union of zero structures".into(),
        ));
    };
    let mut builder = KripkeBuilder::new(first.arity());
    let mut renamings = Vec::with_capacity(structures.len());
    for (i, m) in structures.iter().enumerate() {
        if m.arity() != first.arity() {
            return Err(Error::ArityMismatch {
                expected: first.arity(),
                got: m.arity(),
            });
        }
        let offset = builder.worlds.len();
        let mut renaming = BTreeMap::new();
        for (idx, name) in m.worlds.iter().enumerate() {
            let new_name = format!("u{i}.{name}");
            renaming.insert(name.clone(), new_name.clone());
            builder.add_world(&new_name, m.valuation[idx].clone())?;
        }
        for (rel0, rel) in m.relations.iter().enumerate() {
            for &(u, v) in rel {
                builder.add_edge_by_index(rel0, offset + u, offset + v);
            }
        }
        renamings.push(renaming);
    }
    Ok((builder.finish(), renamings))
}

/// A structure with a designated core: one relation-1 equivalence class
/// whose worlds all carry exactly the core assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct NiceModel {
    pub structure: KripkeStructure,
    pub core: BTreeSet<String>,
    pub core_assignment: Assignment,
}

impl NiceModel {
    /// Check every structural invariant: arity 2, both relations are
    /// equivalences, the core is exactly one relation-1 class, and every
    /// core world's labels agree with the core assignment on its universe.
    pub fn validate(&self) -> Result<()> {
        if self.structure.arity() != 2 {
            return Err(Error::InvalidInput(format!(
                "nice model must have arity 2, got {}",
                self.structure.arity()
            )));
        }
        for (i, props) in self.structure.frame_properties().iter().enumerate() {
            if !props.equivalence() {
                return Err(Error::NotEquivalence {
                    relation: i as u32 + 1,
                    missing: "equivalence (nice model requires S5)".to_string(),
                });
            }
        }
        let Some(first) = self.core.iter().next() else {
            return Err(Error::InvalidInput("nice model core is empty".into()));
        };
        let class = self.structure.eq_class(1, first)?;
        if class != self.core {
            return Err(Error::InvalidInput(format!(
                "core is not a relation-1 class: class of `{first}` has {} worlds, core has {}",
                class.len(),
                self.core.len()
            )));
        }
        for world in &self.core {
            let labels = self.structure.props_at(world)?;
            let visible: BTreeSet<String> = labels
                .intersection(&self.core_assignment.universe)
                .cloned()
                .collect();
            if visible != self.core_assignment.true_set {
                return Err(Error::InvalidInput(format!(
                    "core world `{world}` labels disagree with the core assignment"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct ModelJson {
    arity: usize,
    worlds: Vec<String>,
    relations: BTreeMap<String, Vec<(String, String)>>,
    valuation: BTreeMap<String, Vec<String>>,
    closed_as: Option<String>,
}

/// Serialize a structure to the model JSON format.
pub fn to_json(m: &KripkeStructure) -> String {
    let relations = (1..=m.arity() as u32)
        .map(|i| {
            let pairs = m
                .relation_pairs(i)
                .expect("index in range")
                .into_iter()
                .map(|(u, v)| (u.to_string(), v.to_string()))
                .collect();
            (i.to_string(), pairs)
        })
        .collect();
    let valuation = m
        .worlds()
        .iter()
        .map(|w| {
            let props = m.props_at(w).expect("world exists");
            (w.clone(), props.iter().cloned().collect())
        })
        .collect();
    let doc = ModelJson {
        arity: m.arity(),
        worlds: m.worlds().to_vec(),
        relations,
        valuation,
        closed_as: m.closed_as().map(|c| c.to_string()),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("model serializes");
    text.push('\n');
    text
}

/// Parse the model JSON format. When `closed_as` is present the loaded
/// relations are closed under that frame class.
pub fn from_json(text: &str) -> Result<KripkeStructure> {
    let doc: ModelJson = serde_json::from_str(text)?;
    if doc.arity == 0 {
        return Err(Error::InvalidInput("arity must be at least 1".into()));
    }
    let mut builder = KripkeBuilder::new(doc.arity);
    for world in &doc.worlds {
        builder.add_world(world, BTreeSet::new())?;
    }
    for (world, props) in &doc.valuation {
        let idx = *builder
            .index
            .get(world)
            .ok_or_else(|| Error::UnknownWorld(world.clone()))?;
        builder.valuation[idx] = props.iter().cloned().collect();
    }
    for (key, pairs) in &doc.relations {
        let index: u32 = key
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad relation key `{key}`")))?;
        for (u, v) in pairs {
            builder.add_edge(index, u, v)?;
        }
    }
    let structure = builder.finish();
    match doc.closed_as {
        Some(class) => Ok(structure.close(class.parse()?)),
        None => Ok(structure),
    }
}
