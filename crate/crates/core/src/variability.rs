//! Variability facts read off a concept lattice: core and dead attributes,
//! binary implications, equivalences, mutual exclusions, object
//! specializations and configuration classification.
//!
//! Attribute and object sets are canonical indices of the lattice's context;
//! since the context sorts names, index order is name order.

use crate::bitset::BitSet;
use crate::context::{AttributeSet, FormalContext, ObjectSet};
use crate::error::{Error, Result};
use crate::lattice::{BuildOptions, ConceptId, ConceptLattice};

/// `premise → conclusion`: every object owning the premise owns the conclusion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Implication {
    pub premise: usize,
    pub conclusion: usize,
    /// The premise is owned by no object, so the implication holds trivially.
    pub vacuous: bool,
}

/// Two attributes no object owns together. `first < second`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MutexPair {
    pub first: usize,
    pub second: usize,
    /// At least one side is a dead attribute.
    pub vacuous: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConfigurationClass {
    /// Exactly the configuration of the listed objects.
    Valid { concept: ConceptId, objects: ObjectSet },
    /// A concept intent that is no object's full configuration.
    MaximalPartial { concept: ConceptId },
    /// Extendable to a valid configuration; `closure` is the smallest maximal
    /// partial configuration containing it.
    Partial { closure: AttributeSet, concept: ConceptId },
    /// No object owns all these attributes.
    Invalid,
}

impl ConfigurationClass {
    pub fn label(&self) -> &'static str {
        match self {
            ConfigurationClass::Valid { .. } => "VALID",
            ConfigurationClass::MaximalPartial { .. } => "MAXIMAL_PARTIAL",
            ConfigurationClass::Partial { .. } => "PARTIAL",
            ConfigurationClass::Invalid => "INVALID",
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ReportOptions {
    /// List implications inside equivalence groups, vacuous implications
    /// and mutexes involving dead attributes.
    pub exhaustive: bool,
}

/// Raw genericity indicators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metrics {
    /// Per attribute: extent size of its attribute-concept.
    pub attribute_extent_size: Vec<usize>,
    /// Per object: intent size of its object-concept.
    pub object_intent_size: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariabilityReport {
    pub core: AttributeSet,
    pub dead: AttributeSet,
    pub implications: Vec<Implication>,
    pub equivalence_groups: Vec<Vec<usize>>,
    pub mutex_pairs: Vec<MutexPair>,
    pub specializations: Vec<(usize, usize)>,
    pub metrics: Metrics,
}

/// Attributes introduced at the top concept.
pub fn core_attributes(l: &ConceptLattice) -> AttributeSet {
    l.reduced_labels().attributes.swap_remove(l.top().0)
}

/// Attributes introduced at the bottom concept, when its extent is empty.
pub fn dead_attributes(l: &ConceptLattice) -> AttributeSet {
    let bottom = l.concept(l.bottom()).expect("bottom exists");
    if bottom.extent.is_empty() {
        l.reduced_labels().attributes.swap_remove(l.bottom().0)
    } else {
        AttributeSet(BitSet::empty(l.context().attribute_count()))
    }
}

fn is_dead(l: &ConceptLattice, a: usize) -> bool {
    l.context().column(a).is_empty()
}

/// Every `a1 → a2` with `a1 ≠ a2` whose attribute-concepts are ordered.
pub fn binary_implications(l: &ConceptLattice) -> Vec<Implication> {
    let n = l.context().attribute_count();
    let mut out = Vec::new();
    for premise in 0..n {
        let from = l.attribute_introducer(premise);
        let vacuous = is_dead(l, premise);
        for conclusion in (0..n).filter(|&c| c != premise) {
            if l.leq(from, l.attribute_introducer(conclusion)).expect("valid id") {
                out.push(Implication {
                    premise,
                    conclusion,
                    vacuous,
                });
            }
        }
    }
    out
}

/// Attributes grouped by shared attribute-concept, singletons included.
pub fn equivalence_groups(l: &ConceptLattice) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = l
        .reduced_labels()
        .attributes
        .iter()
        .filter(|a| !a.is_empty())
        .map(|a| a.iter().collect())
        .collect();
    groups.sort();
    groups
}

/// Attribute pairs whose attribute-concepts meet at an empty-extent concept.
pub fn mutex_pairs(l: &ConceptLattice) -> Vec<MutexPair> {
    let n = l.context().attribute_count();
    let mut out = Vec::new();
    for first in 0..n {
        for second in first + 1..n {
            let meet = l
                .meet(&[l.attribute_introducer(first), l.attribute_introducer(second)])
                .expect("valid ids");
            if l.concept(meet).expect("valid id").extent.is_empty() {
                out.push(MutexPair {
                    first,
                    second,
                    vacuous: is_dead(l, first) || is_dead(l, second),
                });
            }
        }
    }
    out
}

/// Ordered object pairs `(specific, generic)` where the generic object's
/// configuration is strictly included in the specific one's.
pub fn specializations(l: &ConceptLattice) -> Vec<(usize, usize)> {
    let n = l.context().object_count();
    let mut out = Vec::new();
    for o1 in 0..n {
        let c1 = l.object_introducer(o1);
        for o2 in (0..n).filter(|&o| o != o1) {
            let c2 = l.object_introducer(o2);
            if c1 != c2 && l.leq(c1, c2).expect("valid id") {
                out.push((o1, o2));
            }
        }
    }
    out
}

/// Attributes common to both objects' configurations.
pub fn similarity(l: &ConceptLattice, o1: &str, o2: &str) -> Result<AttributeSet> {
    let c = l.join(&[l.object_concept(o1)?, l.object_concept(o2)?])?;
    Ok(l.concept(c)?.intent.clone())
}

pub fn classify_configuration(
    ctx: &FormalContext,
    l: &ConceptLattice,
    attrs: &AttributeSet,
) -> Result<ConfigurationClass> {
    if ctx != l.context() {
        return Err(Error::InvalidSet("lattice was built from a different context".into()));
    }
    let extent = ctx.beta(attrs)?;
    let exact: Vec<usize> = (0..ctx.object_count())
        .filter(|&o| ctx.row(o) == attrs.as_bits())
        .collect();
    if let Some(&first) = exact.first() {
        return Ok(ConfigurationClass::Valid {
            concept: l.object_introducer(first),
            objects: ctx.object_set(exact)?,
        });
    }
    if extent.is_empty() {
        return Ok(ConfigurationClass::Invalid);
    }
    let concept = l.find_by_extent(&extent).expect("β of any set is an extent");
    let closure = &l.concept(concept)?.intent;
    if closure == attrs {
        Ok(ConfigurationClass::MaximalPartial { concept })
    } else {
        Ok(ConfigurationClass::Partial {
            closure: closure.clone(),
            concept,
        })
    }
}

pub fn metrics(l: &ConceptLattice) -> Metrics {
    let ctx = l.context();
    Metrics {
        attribute_extent_size: (0..ctx.attribute_count())
            .map(|a| l.concept(l.attribute_introducer(a)).expect("valid id").extent.len())
            .collect(),
        object_intent_size: (0..ctx.object_count())
            .map(|o| l.concept(l.object_introducer(o)).expect("valid id").intent.len())
            .collect(),
    }
}

pub fn build_report(ctx: &FormalContext, build: &BuildOptions, options: &ReportOptions) -> Result<VariabilityReport> {
    let l = ConceptLattice::build_with(ctx, build)?;
    Ok(report_for(&l, options))
}

pub fn report_for(l: &ConceptLattice, options: &ReportOptions) -> VariabilityReport {
    let mut implications = binary_implications(l);
    let mut mutex = mutex_pairs(l);
    if !options.exhaustive {
        implications
            .retain(|i| !i.vacuous && l.attribute_introducer(i.premise) != l.attribute_introducer(i.conclusion));
        mutex.retain(|m| !m.vacuous);
    }
    VariabilityReport {
        core: core_attributes(l),
        dead: dead_attributes(l),
        implications,
        equivalence_groups: equivalence_groups(l),
        mutex_pairs: mutex,
        specializations: specializations(l),
        metrics: metrics(l),
    }
}
