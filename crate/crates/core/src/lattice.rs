//! Concept enumeration and the concept lattice.
//!
//! Concepts are enumerated with Close-by-One over the canonical attribute
//! order, then numbered by a content-only rule so equal contexts always
//! produce equal ids:
//!
//! * smaller extents get smaller ids;
//! * among extents of equal size, the lexicographically larger extent
//!   (comparing sorted object indices) gets the smaller id.
//!
//! The bottom concept is therefore always id 0 and the top concept the last id.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::context::{AttributeSet, FormalContext, ObjectSet};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_CONCEPTS: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConceptId(pub usize);

impl fmt::Display for ConceptId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C_{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalConcept {
    pub id: ConceptId,
    pub extent: ObjectSet,
    pub intent: AttributeSet,
}

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    /// Enumeration stops with `CapacityExceeded` beyond this many concepts.
    pub max_concepts: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            max_concepts: DEFAULT_MAX_CONCEPTS,
        }
    }
}

/// Lists every formal concept of `ctx`, numbered canonically.
pub fn enumerate_concepts(ctx: &FormalContext, options: &BuildOptions) -> Result<Vec<FormalConcept>> {
    let mut found = close_by_one(ctx, options.max_concepts)?;
    found.sort_by(|(a, _), (b, _)| a.len().cmp(&b.len()).then_with(|| b.cmp_lex(a)));
    Ok(found
        .into_iter()
        .enumerate()
        .map(|(i, (extent, intent))| FormalConcept {
            id: ConceptId(i),
            extent: ObjectSet(extent),
            intent: AttributeSet(intent),
        })
        .collect())
}

fn close_by_one(ctx: &FormalContext, max: usize) -> Result<Vec<(BitSet, BitSet)>> {
    let n_attrs = ctx.attribute_count();
    let mut out = Vec::new();
    let push = |out: &mut Vec<(BitSet, BitSet)>, extent: &BitSet, intent: &BitSet| {
        if out.len() >= max {
            return Err(Error::CapacityExceeded(format!("more than {max} concepts")));
        }
        out.push((extent.clone(), intent.clone()));
        Ok(())
    };

    let top_extent = BitSet::full(ctx.object_count());
    let top_intent = ctx.common_attributes(&top_extent);
    push(&mut out, &top_extent, &top_intent)?;

    // Each frame generates the children of one concept, resuming at `next`.
    let mut stack = vec![(top_extent, top_intent, 0usize)];
    while let Some((extent, intent, next)) = stack.last_mut() {
        let Some(j) = (*next..n_attrs).find(|&j| !intent.contains(j)) else {
            stack.pop();
            continue;
        };
        *next = j + 1;

        let child_extent = extent.intersection(ctx.column(j));
        let child_intent = ctx.common_attributes(&child_extent);
        // Canonicity: the closure must not add any attribute before `j`.
        if intent.agrees_below(&child_intent, j) {
            push(&mut out, &child_extent, &child_intent)?;
            stack.push((child_extent, child_intent, j + 1));
        }
    }
    Ok(out)
}

/// Every concept of a context with its cover relation and introducers.
#[derive(Clone, Debug)]
pub struct ConceptLattice {
    context: FormalContext,
    concepts: Vec<FormalConcept>,
    upper: Vec<Vec<ConceptId>>,
    lower: Vec<Vec<ConceptId>>,
    by_extent: HashMap<BitSet, ConceptId>,
    attribute_introducer: Vec<ConceptId>,
    object_introducer: Vec<ConceptId>,
}

/// Direct super- and sub-concepts of a concept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Neighbourhood {
    pub upper: Vec<ConceptId>,
    pub lower: Vec<ConceptId>,
}

/// Attributes and objects shown only at the concept that introduces them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedLabeling {
    pub attributes: Vec<AttributeSet>,
    pub objects: Vec<ObjectSet>,
}

impl ReducedLabeling {
    pub fn introduced_attributes(&self, c: ConceptId) -> &AttributeSet {
        &self.attributes[c.0]
    }

    pub fn introduced_objects(&self, c: ConceptId) -> &ObjectSet {
        &self.objects[c.0]
    }

    /// A concept introduces something if either label is non-empty.
    pub fn is_introducer(&self, c: ConceptId) -> bool {
        !self.attributes[c.0].is_empty() || !self.objects[c.0].is_empty()
    }
}

impl ConceptLattice {
    pub fn build(ctx: &FormalContext) -> Result<Self> {
        Self::build_with(ctx, &BuildOptions::default())
    }

    pub fn build_with(ctx: &FormalContext, options: &BuildOptions) -> Result<Self> {
        let concepts = enumerate_concepts(ctx, options)?;
        let by_extent: HashMap<BitSet, ConceptId> = concepts.iter().map(|c| (c.extent.0.clone(), c.id)).collect();
        let upper = upper_covers(ctx, &concepts, &by_extent);

        let mut lower = vec![Vec::new(); concepts.len()];
        for (c, ups) in upper.iter().enumerate() {
            for u in ups {
                lower[u.0].push(ConceptId(c));
            }
        }
        for l in &mut lower {
            l.sort();
        }

        let attribute_introducer = (0..ctx.attribute_count()).map(|a| by_extent[ctx.column(a)]).collect();
        let object_introducer = (0..ctx.object_count())
            .map(|o| by_extent[&ctx.common_objects(ctx.row(o))])
            .collect();

        Ok(ConceptLattice {
            context: ctx.clone(),
            concepts,
            upper,
            lower,
            by_extent,
            attribute_introducer,
            object_introducer,
        })
    }

    pub fn context(&self) -> &FormalContext {
        &self.context
    }

    pub fn concepts(&self) -> &[FormalConcept] {
        &self.concepts
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn top(&self) -> ConceptId {
        ConceptId(self.concepts.len() - 1)
    }

    pub fn bottom(&self) -> ConceptId {
        ConceptId(0)
    }

    pub fn concept(&self, id: ConceptId) -> Result<&FormalConcept> {
        self.concepts.get(id.0).ok_or(Error::UnknownConcept(id.0))
    }

    pub fn check(&self, id: ConceptId) -> Result<ConceptId> {
        self.concept(id).map(|c| c.id)
    }

    /// The concept whose extent is exactly `extent`, if that set is closed.
    pub fn find_by_extent(&self, extent: &ObjectSet) -> Option<ConceptId> {
        self.by_extent.get(&extent.0).copied()
    }

    /// The concept whose intent is exactly `intent`, if that set is closed.
    pub fn find_by_intent(&self, intent: &AttributeSet) -> Option<ConceptId> {
        if intent.0.universe() != self.context.attribute_count() {
            return None;
        }
        let id = self.by_extent[&self.context.common_objects(&intent.0)];
        (self.concepts[id.0].intent == *intent).then_some(id)
    }

    /// The concept generated by an attribute set: (β(attrs), α(β(attrs))).
    pub fn closure_of(&self, attrs: &AttributeSet) -> Result<ConceptId> {
        let extent = self.context.beta(attrs)?;
        Ok(self.by_extent[&extent.0])
    }

    /// Cover edges as (lower, upper) pairs, sorted.
    pub fn covers(&self) -> Vec<(ConceptId, ConceptId)> {
        self.upper
            .iter()
            .enumerate()
            .flat_map(|(c, ups)| ups.iter().map(move |&u| (ConceptId(c), u)))
            .collect()
    }

    pub fn upper_covers(&self, c: ConceptId) -> Result<&[ConceptId]> {
        self.check(c)?;
        Ok(&self.upper[c.0])
    }

    pub fn lower_covers(&self, c: ConceptId) -> Result<&[ConceptId]> {
        self.check(c)?;
        Ok(&self.lower[c.0])
    }

    pub fn neighbourhood(&self, c: ConceptId) -> Result<Neighbourhood> {
        self.check(c)?;
        Ok(Neighbourhood {
            upper: self.upper[c.0].clone(),
            lower: self.lower[c.0].clone(),
        })
    }

    pub fn is_cover(&self, lower: ConceptId, upper: ConceptId) -> bool {
        self.upper.get(lower.0).is_some_and(|u| u.binary_search(&upper).is_ok())
    }

    /// `c1 ≤ c2`: the extent of `c1` is contained in the extent of `c2`.
    pub fn leq(&self, c1: ConceptId, c2: ConceptId) -> Result<bool> {
        let a = self.concept(c1)?;
        let b = self.concept(c2)?;
        Ok(a.extent.0.is_subset(&b.extent.0))
    }

    /// Least upper bound: its intent is the intersection of the given intents.
    pub fn join(&self, cs: &[ConceptId]) -> Result<ConceptId> {
        let (first, rest) = cs
            .split_first()
            .ok_or_else(|| Error::InvalidSet("join of an empty concept set".into()))?;
        let mut intent = self.concept(*first)?.intent.0.clone();
        for &c in rest {
            intent.intersect_with(&self.concept(c)?.intent.0);
        }
        Ok(self.by_extent[&self.context.common_objects(&intent)])
    }

    /// Greatest lower bound: its extent is the intersection of the given extents.
    pub fn meet(&self, cs: &[ConceptId]) -> Result<ConceptId> {
        let (first, rest) = cs
            .split_first()
            .ok_or_else(|| Error::InvalidSet("meet of an empty concept set".into()))?;
        let mut extent = self.concept(*first)?.extent.0.clone();
        for &c in rest {
            extent.intersect_with(&self.concept(c)?.extent.0);
        }
        Ok(self.by_extent[&extent])
    }

    /// True iff every pair of the given concepts is comparable.
    pub fn is_chain(&self, cs: &[ConceptId]) -> Result<bool> {
        for &c in cs {
            self.check(c)?;
        }
        // Comparable sets are totally ordered by extent size.
        let mut sorted: Vec<&BitSet> = cs.iter().map(|c| &self.concepts[c.0].extent.0).collect();
        sorted.sort_by_key(|e| e.len());
        Ok(sorted.windows(2).all(|w| w[0].is_subset(w[1])))
    }

    /// Highest concept whose intent contains the attribute.
    pub fn attribute_concept(&self, attribute: &str) -> Result<ConceptId> {
        Ok(self.attribute_introducer[self.context.attribute_index(attribute)?])
    }

    /// Lowest concept whose extent contains the object.
    pub fn object_concept(&self, object: &str) -> Result<ConceptId> {
        Ok(self.object_introducer[self.context.object_index(object)?])
    }

    /// Introducer by canonical attribute index.
    pub fn attribute_introducer(&self, attribute: usize) -> ConceptId {
        self.attribute_introducer[attribute]
    }

    /// Introducer by canonical object index.
    pub fn object_introducer(&self, object: usize) -> ConceptId {
        self.object_introducer[object]
    }

    pub fn reduced_labels(&self) -> ReducedLabeling {
        let n_attrs = self.context.attribute_count();
        let n_objs = self.context.object_count();
        let mut attributes = vec![AttributeSet(BitSet::empty(n_attrs)); self.len()];
        let mut objects = vec![ObjectSet(BitSet::empty(n_objs)); self.len()];
        for (a, c) in self.attribute_introducer.iter().enumerate() {
            attributes[c.0].0.insert(a);
        }
        for (o, c) in self.object_introducer.iter().enumerate() {
            objects[c.0].0.insert(o);
        }
        ReducedLabeling { attributes, objects }
    }

    /// True iff the concept's intent is the full configuration of some object.
    pub fn is_object_concept(&self, c: ConceptId) -> bool {
        self.object_introducer.contains(&c)
    }
}

/// Upper covers of every concept.
///
/// For a concept (E, I), each object g outside E generates the candidate
/// ((E ∪ {g})'', ...). A candidate is a cover exactly when every object it adds
/// to E generates that same candidate, so counting generators identifies
/// covers without comparing concept pairs.
fn upper_covers(
    ctx: &FormalContext,
    concepts: &[FormalConcept],
    by_extent: &HashMap<BitSet, ConceptId>,
) -> Vec<Vec<ConceptId>> {
    let n_objs = ctx.object_count();
    let mut counts = vec![0usize; concepts.len()];
    let mut touched = Vec::new();
    let mut upper = Vec::with_capacity(concepts.len());

    for concept in concepts {
        let extent = &concept.extent.0;
        let extent_len = extent.len();
        let mut ups = Vec::new();
        for g in (0..n_objs).filter(|&g| !extent.contains(g)) {
            let generated_intent = concept.intent.0.intersection(ctx.row(g));
            let candidate = ctx.common_objects(&generated_intent);
            let id = by_extent[&candidate];
            if counts[id.0] == 0 {
                touched.push(id);
            }
            counts[id.0] += 1;
            if counts[id.0] == candidate.len() - extent_len {
                ups.push(id);
            }
        }
        for id in touched.drain(..) {
            counts[id.0] = 0;
        }
        ups.sort();
        upper.push(ups);
    }
    upper
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::ContextFormat;

    const K_DM: &str = include_str!("../fixtures/k_dm.csv");

    fn k_dm() -> ConceptLattice {
        ConceptLattice::build(&FormalContext::parse(K_DM, ContextFormat::Csv).unwrap()).unwrap()
    }

    fn by_extent(l: &ConceptLattice, names: &[&str]) -> ConceptId {
        let set = l.context().objects_named(names).unwrap();
        l.find_by_extent(&set)
            .unwrap_or_else(|| panic!("no concept with extent {names:?}"))
    }

    fn contranominal(n: usize) -> FormalContext {
        let names = |p: &str| (0..n).map(|i| format!("{p}{i:02}")).collect::<Vec<_>>();
        let rows = (0..n).map(|i| (0..n).filter(|&j| j != i).collect()).collect();
        FormalContext::from_rows(names("o"), names("a"), rows).unwrap()
    }

    #[test]
    fn k_dm_has_ten_concepts() {
        let l = k_dm();
        assert_eq!(l.len(), 10);
        let c = by_extent(&l, &["Erwin-DM", "ER-Studio", "Magic-Draw"]);
        let intent: Vec<_> = l.context().attribute_names(&l.concept(c).unwrap().intent).collect();
        assert_eq!(intent, ["DM:Conceptual", "DM:Logical", "DM:Physical", "OS:Windows"]);
        assert!(l.concept(l.bottom()).unwrap().extent.is_empty());
        assert_eq!(l.concept(l.top()).unwrap().extent.len(), 5);
    }

    #[test]
    fn canonical_numbering_on_fixture() {
        let l = k_dm();
        let expected: [&[&str]; 10] = [
            &[],
            &["Magic-Draw"],
            &["ER-Studio"],
            &["Magic-Draw", "MySQL-Workbench"],
            &["Astah", "Magic-Draw"],
            &["Erwin-DM", "ER-Studio", "Magic-Draw"],
            &["Astah", "Magic-Draw", "MySQL-Workbench"],
            &["Erwin-DM", "ER-Studio", "Magic-Draw", "MySQL-Workbench"],
            &["Astah", "Erwin-DM", "ER-Studio", "Magic-Draw"],
            &["Astah", "Erwin-DM", "ER-Studio", "Magic-Draw", "MySQL-Workbench"],
        ];
        for (i, names) in expected.iter().enumerate() {
            assert_eq!(by_extent(&l, names), ConceptId(i), "{names:?}");
        }
    }

    #[test]
    fn contranominal_three() {
        let l = ConceptLattice::build(&contranominal(3)).unwrap();
        assert_eq!(l.len(), 8);
    }

    #[test]
    fn single_object_two_concepts() {
        let ctx = FormalContext::parse(",a1,a2\no,x,\n", ContextFormat::Csv).unwrap();
        let l = ConceptLattice::build(&ctx).unwrap();
        assert_eq!(l.len(), 2);
        let top = l.concept(l.top()).unwrap();
        assert_eq!(top.extent.len(), 1);
        assert_eq!(top.intent.iter().collect::<Vec<_>>(), vec![0]);
        let bottom = l.concept(l.bottom()).unwrap();
        assert!(bottom.extent.is_empty());
        assert_eq!(bottom.intent.len(), 2);
        assert_eq!(l.covers(), vec![(ConceptId(0), ConceptId(1))]);
    }

    #[test]
    fn bottom_with_nonempty_extent() {
        let ctx = FormalContext::parse(",a,b\no,x,x\np,x,\n", ContextFormat::Csv).unwrap();
        let l = ConceptLattice::build(&ctx).unwrap();
        assert_eq!(l.len(), 2);
        assert_eq!(l.concept(l.bottom()).unwrap().extent.len(), 1);
    }

    #[test]
    fn ceiling_enforced() {
        let opts = BuildOptions { max_concepts: 7 };
        assert!(matches!(
            ConceptLattice::build_with(&contranominal(3), &opts),
            Err(Error::CapacityExceeded(_))
        ));
        assert!(ConceptLattice::build_with(&contranominal(3), &BuildOptions { max_concepts: 8 }).is_ok());
    }

    #[test]
    fn cover_and_order_examples() {
        let l = k_dm();
        let dm3 = by_extent(&l, &["Magic-Draw", "MySQL-Workbench"]);
        let dm4 = by_extent(&l, &["Astah", "Magic-Draw"]);
        let dm6 = by_extent(&l, &["Astah", "Magic-Draw", "MySQL-Workbench"]);
        assert!(l.is_cover(dm3, dm6));
        assert!(l.leq(dm3, dm6).unwrap());
        assert!(!l.leq(dm3, dm4).unwrap());
        assert!(!l.leq(dm4, dm3).unwrap());
        assert!(l.leq(dm4, dm4).unwrap());
        assert!(matches!(l.leq(dm4, ConceptId(10)), Err(Error::UnknownConcept(10))));
    }

    #[test]
    fn join_and_meet_examples() {
        let l = k_dm();
        let dm0 = l.bottom();
        let dm1 = by_extent(&l, &["Magic-Draw"]);
        let dm2 = by_extent(&l, &["ER-Studio"]);
        let dm3 = by_extent(&l, &["Magic-Draw", "MySQL-Workbench"]);
        let dm4 = by_extent(&l, &["Astah", "Magic-Draw"]);
        let dm5 = by_extent(&l, &["Erwin-DM", "ER-Studio", "Magic-Draw"]);
        let dm6 = by_extent(&l, &["Astah", "Magic-Draw", "MySQL-Workbench"]);
        assert_eq!(l.join(&[dm1, dm2]).unwrap(), dm5);
        assert_eq!(l.join(&[dm3, dm4]).unwrap(), dm6);
        assert_eq!(l.join(&[dm3, l.top()]).unwrap(), l.top());
        assert_eq!(l.meet(&[dm4, dm5]).unwrap(), dm1);
        assert_eq!(l.meet(&[dm6, dm2]).unwrap(), dm0);
        assert_eq!(l.meet(&[dm6, l.bottom()]).unwrap(), l.bottom());
        assert!(matches!(l.join(&[]), Err(Error::InvalidSet(_))));
        assert!(matches!(l.meet(&[dm1, ConceptId(42)]), Err(Error::UnknownConcept(42))));
    }

    #[test]
    fn introducer_examples() {
        let l = k_dm();
        let dm7 = by_extent(&l, &["Erwin-DM", "ER-Studio", "Magic-Draw", "MySQL-Workbench"]);
        assert_eq!(l.attribute_concept("DM:Physical").unwrap(), dm7);
        let dm5 = by_extent(&l, &["Erwin-DM", "ER-Studio", "Magic-Draw"]);
        assert_eq!(l.attribute_concept("DM:Logical").unwrap(), dm5);
        assert_eq!(l.attribute_concept("OS:Windows").unwrap(), l.top());
        assert_eq!(
            l.object_concept("Astah").unwrap(),
            by_extent(&l, &["Astah", "Magic-Draw"])
        );
        assert_eq!(l.object_concept("Erwin-DM").unwrap(), dm5);
        assert_eq!(l.object_concept("ER-Studio").unwrap(), by_extent(&l, &["ER-Studio"]));
        assert!(matches!(
            l.attribute_concept("DM:Graph"),
            Err(Error::UnknownAttribute(_))
        ));
        assert!(matches!(l.object_concept("Visio"), Err(Error::UnknownObject(_))));
    }

    #[test]
    fn reduced_label_examples() {
        let l = k_dm();
        let labels = l.reduced_labels();
        let dm6 = by_extent(&l, &["Astah", "Magic-Draw", "MySQL-Workbench"]);
        let names: Vec<_> = l.context().attribute_names(labels.introduced_attributes(dm6)).collect();
        assert_eq!(names, ["OS:Linux", "OS:Mac"]);
        assert!(labels.introduced_attributes(l.bottom()).is_empty());
        assert!(labels.introduced_objects(l.bottom()).is_empty());
        assert_eq!(labels.attributes.iter().map(AttributeSet::len).sum::<usize>(), 7);
        assert_eq!(labels.objects.iter().map(ObjectSet::len).sum::<usize>(), 5);
    }

    #[test]
    fn neighbourhood_examples() {
        let l = k_dm();
        let dm4 = by_extent(&l, &["Astah", "Magic-Draw"]);
        let dm6 = by_extent(&l, &["Astah", "Magic-Draw", "MySQL-Workbench"]);
        let dm8 = by_extent(&l, &["Astah", "Erwin-DM", "ER-Studio", "Magic-Draw"]);
        let n = l.neighbourhood(dm4).unwrap();
        assert_eq!(n.upper, vec![dm6, dm8]);
        assert!(!n.upper.contains(&l.top()));
        assert!(l.neighbourhood(l.top()).unwrap().upper.is_empty());
        assert!(l.neighbourhood(ConceptId(99)).is_err());
    }

    #[test]
    fn chain_examples() {
        let l = k_dm();
        let ids = |xs: &[usize]| xs.iter().map(|&i| ConceptId(i)).collect::<Vec<_>>();
        assert!(l.is_chain(&ids(&[9, 6, 3, 1, 0])).unwrap());
        assert!(!l.is_chain(&ids(&[9, 6, 3, 1, 0, 4])).unwrap());
        assert!(l.is_chain(&ids(&[4])).unwrap());
        assert!(l.is_chain(&[]).unwrap());
        assert!(l.is_chain(&ids(&[20])).is_err());
    }

    #[test]
    fn find_by_intent_roundtrip() {
        let l = k_dm();
        for c in l.concepts() {
            assert_eq!(l.find_by_intent(&c.intent), Some(c.id));
        }
        let wm = l.context().attributes_named(&["OS:Windows", "OS:Mac"]).unwrap();
        assert_eq!(l.find_by_intent(&wm), None);
    }
}
