//! Serialized forms of lattices, sub-hierarchies, reports and sessions.
//!
//! Every document lists names rather than indices, in canonical order, so
//! serializing the same structure twice yields identical bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::context::{AttributeSet, FormalContext, ObjectSet};
use crate::error::{Error, Result};
use crate::lattice::{ConceptId, ConceptLattice, ReducedLabeling};
use crate::navigation::{Delta, Direction, HistoryEntry, Move, NavigationSession};
use crate::subhierarchy::{ConceptPoset, PosetKind};
use crate::variability::{ConfigurationClass, VariabilityReport};

fn attr_names(ctx: &FormalContext, set: &AttributeSet) -> Vec<String> {
    ctx.attribute_names(set).map(String::from).collect()
}

fn obj_names(ctx: &FormalContext, set: &ObjectSet) -> Vec<String> {
    ctx.object_names(set).map(String::from).collect()
}

fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents always serialize");
    s.push('\n');
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConceptEntry {
    pub id: usize,
    pub extent: Vec<String>,
    pub intent: Vec<String>,
    pub introduced_attributes: Vec<String>,
    pub introduced_objects: Vec<String>,
}

impl ConceptEntry {
    pub fn new(l: &ConceptLattice, labels: &ReducedLabeling, id: ConceptId) -> Self {
        let ctx = l.context();
        let c = &l.concepts()[id.0];
        ConceptEntry {
            id: id.0,
            extent: obj_names(ctx, &c.extent),
            intent: attr_names(ctx, &c.intent),
            introduced_attributes: attr_names(ctx, labels.introduced_attributes(id)),
            introduced_objects: obj_names(ctx, labels.introduced_objects(id)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeDocument {
    pub concepts: Vec<ConceptEntry>,
    pub covers: Vec<[usize; 2]>,
    pub top: usize,
    pub bottom: usize,
}

impl LatticeDocument {
    pub fn new(l: &ConceptLattice) -> Self {
        let labels = l.reduced_labels();
        LatticeDocument {
            concepts: l
                .concepts()
                .iter()
                .map(|c| ConceptEntry::new(l, &labels, c.id))
                .collect(),
            covers: l.covers().into_iter().map(|(a, b)| [a.0, b.0]).collect(),
            top: l.top().0,
            bottom: l.bottom().0,
        }
    }

    pub fn to_json(&self) -> String {
        to_pretty(self)
    }

    pub fn from_json(source: &str) -> Result<Self> {
        Ok(serde_json::from_str(source)?)
    }

    /// Recovers the context: objects from the top extent, attributes from the
    /// bottom intent, and the incidence as the union of all extent × intent
    /// rectangles.
    pub fn to_context(&self) -> Result<FormalContext> {
        let concept = |id: usize| {
            self.concepts
                .iter()
                .find(|c| c.id == id)
                .ok_or_else(|| Error::MalformedDocument(format!("missing concept {id}")))
        };
        let objects = concept(self.top)?.extent.clone();
        let attributes = concept(self.bottom)?.intent.clone();
        let obj_idx: BTreeMap<&str, usize> = objects.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let attr_idx: BTreeMap<&str, usize> = attributes.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let mut rows = vec![Vec::new(); objects.len()];
        for c in &self.concepts {
            for o in &c.extent {
                let &oi = obj_idx
                    .get(o.as_str())
                    .ok_or_else(|| Error::MalformedDocument(format!("object `{o}` missing from top extent")))?;
                for a in &c.intent {
                    let &ai = attr_idx.get(a.as_str()).ok_or_else(|| {
                        Error::MalformedDocument(format!("attribute `{a}` missing from bottom intent"))
                    })?;
                    rows[oi].push(ai);
                }
            }
        }
        for r in &mut rows {
            r.sort_unstable();
            r.dedup();
        }
        FormalContext::from_rows(objects, attributes, rows)
    }

    /// Rebuilds the lattice and checks the document is exactly its export.
    pub fn to_lattice(&self) -> Result<ConceptLattice> {
        let l = ConceptLattice::build(&self.to_context()?)?;
        if LatticeDocument::new(&l) != *self {
            return Err(Error::MalformedDocument(
                "document is not the canonical lattice of its own context".into(),
            ));
        }
        Ok(l)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetDocument {
    pub kind: PosetKind,
    pub min_extent: Option<usize>,
    pub concepts: Vec<ConceptEntry>,
    pub covers: Vec<[usize; 2]>,
    pub top: Option<usize>,
    pub bottom: Option<usize>,
}

impl PosetDocument {
    pub fn new(l: &ConceptLattice, poset: &ConceptPoset) -> Self {
        let labels = l.reduced_labels();
        let maximal = poset.maximal();
        let minimal: Vec<ConceptId> = poset
            .concepts
            .iter()
            .copied()
            .filter(|c| !poset.order_edges.iter().any(|(_, u)| u == c))
            .collect();
        PosetDocument {
            kind: poset.kind,
            min_extent: poset.min_extent,
            concepts: poset
                .concepts
                .iter()
                .map(|&c| ConceptEntry::new(l, &labels, c))
                .collect(),
            covers: poset.order_edges.iter().map(|(a, b)| [a.0, b.0]).collect(),
            top: (maximal.len() == 1).then(|| maximal[0].0),
            bottom: (minimal.len() == 1).then(|| minimal[0].0),
        }
    }

    pub fn to_json(&self) -> String {
        to_pretty(self)
    }
}

/// Concept detail with its cover neighbours.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConceptDetail {
    #[serde(flatten)]
    pub concept: ConceptEntry,
    pub upper_covers: Vec<usize>,
    pub lower_covers: Vec<usize>,
    pub is_object_concept: bool,
}

impl ConceptDetail {
    pub fn new(l: &ConceptLattice, id: ConceptId) -> Result<Self> {
        let n = l.neighbourhood(id)?;
        Ok(ConceptDetail {
            concept: ConceptEntry::new(l, &l.reduced_labels(), id),
            upper_covers: n.upper.iter().map(|c| c.0).collect(),
            lower_covers: n.lower.iter().map(|c| c.0).collect(),
            is_object_concept: l.is_object_concept(id),
        })
    }
}

/// Record-shaped DOT nodes: name, then intent, then extent.
pub struct DotOptions {
    /// Show full intents and extents instead of the reduced labels.
    pub full_labels: bool,
}

fn dot_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        if matches!(ch, '\\' | '"' | '{' | '}' | '|' | '<' | '>') {
            out.push('\\');
        }
        out.push(ch);
    }
    out
}

fn dot_field(items: &[String]) -> String {
    items.iter().map(|s| format!("{}\\l", dot_escape(s))).collect()
}

fn dot_graph(name: &str, entries: &[ConceptEntry], covers: &[[usize; 2]], options: &DotOptions) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {name} {{").unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [shape=record, fontname=\"Helvetica\"];").unwrap();
    for c in entries {
        let (intent, extent) = if options.full_labels {
            (&c.intent, &c.extent)
        } else {
            (&c.introduced_attributes, &c.introduced_objects)
        };
        writeln!(
            out,
            "  c{} [label=\"{{C_{}|{}|{}}}\"];",
            c.id,
            c.id,
            dot_field(intent),
            dot_field(extent)
        )
        .unwrap();
    }
    for [lower, upper] in covers {
        writeln!(out, "  c{lower} -> c{upper};").unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn lattice_dot(l: &ConceptLattice, options: &DotOptions) -> String {
    let doc = LatticeDocument::new(l);
    dot_graph("lattice", &doc.concepts, &doc.covers, options)
}

pub fn poset_dot(l: &ConceptLattice, poset: &ConceptPoset, options: &DotOptions) -> String {
    let doc = PosetDocument::new(l, poset);
    dot_graph(
        &poset.kind.to_string().to_lowercase(),
        &doc.concepts,
        &doc.covers,
        options,
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImplicationEntry {
    pub premise: String,
    pub conclusion: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub vacuous: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricsDocument {
    pub attribute_extent_size: BTreeMap<String, usize>,
    pub object_intent_size: BTreeMap<String, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub core: Vec<String>,
    pub dead: Vec<String>,
    pub implications: Vec<ImplicationEntry>,
    pub equivalences: Vec<Vec<String>>,
    pub mutex: Vec<[String; 2]>,
    pub specializations: Vec<[String; 2]>,
    pub metrics: MetricsDocument,
}

impl ReportDocument {
    pub fn new(ctx: &FormalContext, r: &VariabilityReport) -> Self {
        let a = |i: usize| ctx.attributes()[i].clone();
        let o = |i: usize| ctx.objects()[i].clone();
        ReportDocument {
            core: attr_names(ctx, &r.core),
            dead: attr_names(ctx, &r.dead),
            implications: r
                .implications
                .iter()
                .map(|i| ImplicationEntry {
                    premise: a(i.premise),
                    conclusion: a(i.conclusion),
                    vacuous: i.vacuous,
                })
                .collect(),
            equivalences: r
                .equivalence_groups
                .iter()
                .map(|g| g.iter().map(|&i| a(i)).collect())
                .collect(),
            mutex: r.mutex_pairs.iter().map(|m| [a(m.first), a(m.second)]).collect(),
            specializations: r.specializations.iter().map(|&(x, y)| [o(x), o(y)]).collect(),
            metrics: MetricsDocument {
                attribute_extent_size: r
                    .metrics
                    .attribute_extent_size
                    .iter()
                    .enumerate()
                    .map(|(i, &n)| (a(i), n))
                    .collect(),
                object_intent_size: r
                    .metrics
                    .object_intent_size
                    .iter()
                    .enumerate()
                    .map(|(i, &n)| (o(i), n))
                    .collect(),
            },
        }
    }

    pub fn to_json(&self) -> String {
        to_pretty(self)
    }

    /// Plain-text rendering for terminals.
    pub fn to_text(&self) -> String {
        fn list(items: &[String]) -> String {
            if items.is_empty() {
                "(none)".into()
            } else {
                items.join(", ")
            }
        }
        let mut out = String::new();
        writeln!(out, "core attributes: {}", list(&self.core)).unwrap();
        writeln!(out, "dead attributes: {}", list(&self.dead)).unwrap();
        writeln!(out, "equivalent attributes:").unwrap();
        let groups: Vec<_> = self.equivalences.iter().filter(|g| g.len() > 1).collect();
        if groups.is_empty() {
            writeln!(out, "  (none)").unwrap();
        }
        for g in groups {
            writeln!(out, "  {}", g.join(" <-> ")).unwrap();
        }
        writeln!(out, "implications:").unwrap();
        if self.implications.is_empty() {
            writeln!(out, "  (none)").unwrap();
        }
        for i in &self.implications {
            let mark = if i.vacuous { "  [vacuous]" } else { "" };
            writeln!(out, "  {} -> {}{mark}", i.premise, i.conclusion).unwrap();
        }
        writeln!(out, "mutually exclusive:").unwrap();
        if self.mutex.is_empty() {
            writeln!(out, "  (none)").unwrap();
        }
        for [x, y] in &self.mutex {
            writeln!(out, "  {x} -x- {y}").unwrap();
        }
        writeln!(out, "specializations:").unwrap();
        if self.specializations.is_empty() {
            writeln!(out, "  (none)").unwrap();
        }
        for [x, y] in &self.specializations {
            writeln!(out, "  {x} specializes {y}").unwrap();
        }
        out
    }
}

pub fn poset_text(doc: &PosetDocument) -> String {
    let mut out = String::new();
    match doc.min_extent {
        Some(n) => writeln!(
            out,
            "{} poset (min extent {n}): {} concepts",
            doc.kind,
            doc.concepts.len()
        )
        .unwrap(),
        None => writeln!(out, "{} poset: {} concepts", doc.kind, doc.concepts.len()).unwrap(),
    }
    for c in &doc.concepts {
        writeln!(
            out,
            "  C_{}: attributes [{}] objects [{}] (extent size {})",
            c.id,
            c.introduced_attributes.join(", "),
            c.introduced_objects.join(", "),
            c.extent.len()
        )
        .unwrap();
    }
    for [l, u] in &doc.covers {
        writeln!(out, "  C_{l} < C_{u}").unwrap();
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationDocument {
    pub class: String,
    pub attributes: Vec<String>,
    pub concept: Option<usize>,
    pub closure: Option<Vec<String>>,
    pub objects: Vec<String>,
}

impl ClassificationDocument {
    pub fn new(ctx: &FormalContext, attrs: &AttributeSet, class: &ConfigurationClass) -> Self {
        let (concept, closure, objects) = match class {
            ConfigurationClass::Valid { concept, objects } => (Some(concept.0), None, obj_names(ctx, objects)),
            ConfigurationClass::MaximalPartial { concept } => (Some(concept.0), None, Vec::new()),
            ConfigurationClass::Partial { closure, concept } => {
                (Some(concept.0), Some(attr_names(ctx, closure)), Vec::new())
            }
            ConfigurationClass::Invalid => (None, None, Vec::new()),
        };
        ClassificationDocument {
            class: class.label().to_string(),
            attributes: attr_names(ctx, attrs),
            concept,
            closure,
            objects,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaDocument {
    pub attributes_removed: Vec<String>,
    pub attributes_added: Vec<String>,
    pub objects_gained: Vec<String>,
    pub objects_lost: Vec<String>,
}

impl DeltaDocument {
    pub fn new(ctx: &FormalContext, d: &Delta) -> Self {
        DeltaDocument {
            attributes_removed: attr_names(ctx, &d.attributes_removed),
            attributes_added: attr_names(ctx, &d.attributes_added),
            objects_gained: obj_names(ctx, &d.objects_gained),
            objects_lost: obj_names(ctx, &d.objects_lost),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveDocument {
    pub direction: Direction,
    pub target: usize,
    #[serde(flatten)]
    pub delta: DeltaDocument,
    pub target_is_valid_configuration: bool,
}

impl MoveDocument {
    pub fn new(ctx: &FormalContext, m: &Move) -> Self {
        MoveDocument {
            direction: m.direction,
            target: m.target.0,
            delta: DeltaDocument::new(ctx, &m.delta),
            target_is_valid_configuration: m.target_is_valid_configuration,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionDocument {
    pub session_id: String,
    pub current: usize,
    pub history: Vec<HistoryEntry>,
}

impl SessionDocument {
    pub fn new(id: &str, s: &NavigationSession) -> Self {
        SessionDocument {
            session_id: id.to_string(),
            current: s.current().0,
            history: s.history().to_vec(),
        }
    }
}
