//! Sub-hierarchies of a concept lattice: the AOC-, AC- and OC-posets, and
//! iceberg prunings by extent size.
//!
//! All of them are obtained by filtering an already built lattice and
//! recomputing the transitive reduction on the retained concepts.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{ConceptId, ConceptLattice};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PosetKind {
    Aoc,
    Ac,
    Oc,
    Iceberg,
}

impl fmt::Display for PosetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PosetKind::Aoc => "AOC",
            PosetKind::Ac => "AC",
            PosetKind::Oc => "OC",
            PosetKind::Iceberg => "ICEBERG",
        })
    }
}

impl FromStr for PosetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "aoc" => Ok(PosetKind::Aoc),
            "ac" => Ok(PosetKind::Ac),
            "oc" => Ok(PosetKind::Oc),
            "iceberg" => Ok(PosetKind::Iceberg),
            other => Err(Error::InvalidConfig(format!("unknown sub-hierarchy kind `{other}`"))),
        }
    }
}

/// A subset of a lattice's concepts with the induced order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConceptPoset {
    pub kind: PosetKind,
    /// Set only for iceberg posets.
    pub min_extent: Option<usize>,
    /// Retained concept ids, ascending.
    pub concepts: Vec<ConceptId>,
    /// Transitive reduction of the induced order, as sorted (lower, upper) pairs.
    pub order_edges: Vec<(ConceptId, ConceptId)>,
}

impl ConceptPoset {
    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn contains(&self, c: ConceptId) -> bool {
        self.concepts.binary_search(&c).is_ok()
    }

    /// Concepts with no retained strict super-concept.
    pub fn maximal(&self) -> Vec<ConceptId> {
        self.concepts
            .iter()
            .copied()
            .filter(|c| !self.order_edges.iter().any(|(l, _)| l == c))
            .collect()
    }
}

pub fn aoc_poset(l: &ConceptLattice) -> ConceptPoset {
    let labels = l.reduced_labels();
    let keep: Vec<bool> = l.concepts().iter().map(|c| labels.is_introducer(c.id)).collect();
    restrict(l, PosetKind::Aoc, None, &keep)
}

pub fn ac_poset(l: &ConceptLattice) -> ConceptPoset {
    let labels = l.reduced_labels();
    let keep: Vec<bool> = labels.attributes.iter().map(|a| !a.is_empty()).collect();
    restrict(l, PosetKind::Ac, None, &keep)
}

pub fn oc_poset(l: &ConceptLattice) -> ConceptPoset {
    let labels = l.reduced_labels();
    let keep: Vec<bool> = labels.objects.iter().map(|o| !o.is_empty()).collect();
    restrict(l, PosetKind::Oc, None, &keep)
}

/// Concepts whose extent has at least `min_extent` objects.
pub fn iceberg(l: &ConceptLattice, min_extent: usize) -> Result<ConceptPoset> {
    if min_extent < 1 {
        return Err(Error::InvalidThreshold(min_extent));
    }
    let keep: Vec<bool> = l.concepts().iter().map(|c| c.extent.len() >= min_extent).collect();
    Ok(restrict(l, PosetKind::Iceberg, Some(min_extent), &keep))
}

pub fn subhierarchy(l: &ConceptLattice, kind: PosetKind, min_extent: Option<usize>) -> Result<ConceptPoset> {
    match kind {
        PosetKind::Aoc => Ok(aoc_poset(l)),
        PosetKind::Ac => Ok(ac_poset(l)),
        PosetKind::Oc => Ok(oc_poset(l)),
        PosetKind::Iceberg => iceberg(l, min_extent.unwrap_or(1)),
    }
}

/// Restricts the lattice order to the kept concepts and reduces it.
///
/// From each kept concept, an upward walk along lattice covers stops at the
/// first kept concept on every path; the minimal ones among those stops are
/// the upper covers inside the poset.
fn restrict(l: &ConceptLattice, kind: PosetKind, min_extent: Option<usize>, keep: &[bool]) -> ConceptPoset {
    let concepts: Vec<ConceptId> = (0..l.len()).filter(|&i| keep[i]).map(ConceptId).collect();
    let mut order_edges = Vec::new();
    let mut seen = vec![usize::MAX; l.len()];
    let mut queue = VecDeque::new();

    for &c in &concepts {
        let mut reached = Vec::new();
        queue.clear();
        queue.push_back(c);
        seen[c.0] = c.0;
        while let Some(x) = queue.pop_front() {
            for &u in l.upper_covers(x).expect("valid id") {
                if seen[u.0] == c.0 {
                    continue;
                }
                seen[u.0] = c.0;
                if keep[u.0] {
                    reached.push(u);
                } else {
                    queue.push_back(u);
                }
            }
        }
        let minimal: Vec<ConceptId> = reached
            .iter()
            .copied()
            .filter(|&u| !reached.iter().any(|&v| v != u && l.leq(v, u).expect("valid id")))
            .collect();
        order_edges.extend(minimal.into_iter().map(|u| (c, u)));
    }
    order_edges.sort();

    ConceptPoset {
        kind,
        min_extent,
        concepts,
        order_edges,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::{ContextFormat, FormalContext};

    const K_DM: &str = include_str!("../fixtures/k_dm.csv");

    fn lattice(src: &str) -> ConceptLattice {
        ConceptLattice::build(&FormalContext::parse(src, ContextFormat::Csv).unwrap()).unwrap()
    }

    fn ext(l: &ConceptLattice, names: &[&str]) -> ConceptId {
        l.find_by_extent(&l.context().objects_named(names).unwrap()).unwrap()
    }

    #[test]
    fn k_dm_sizes() {
        let l = lattice(K_DM);
        assert_eq!(aoc_poset(&l).len(), 9);
        assert!(!aoc_poset(&l).contains(l.bottom()));
        assert_eq!(ac_poset(&l).len(), 6);
        assert_eq!(oc_poset(&l).len(), 5);
    }

    #[test]
    fn ac_keeps_logical_below_conceptual() {
        let l = lattice(K_DM);
        let ac = ac_poset(&l);
        let logical = l.attribute_concept("DM:Logical").unwrap();
        let conceptual = l.attribute_concept("DM:Conceptual").unwrap();
        assert!(ac.contains(logical) && ac.contains(conceptual));
        assert!(ac.order_edges.contains(&(logical, conceptual)));
    }

    #[test]
    fn oc_keeps_er_studio_below_erwin() {
        let l = lattice(K_DM);
        let oc = oc_poset(&l);
        let ers = l.object_concept("ER-Studio").unwrap();
        let erwin = l.object_concept("Erwin-DM").unwrap();
        assert!(oc.order_edges.contains(&(ers, erwin)));
    }

    #[test]
    fn single_full_column_ac() {
        let l = lattice(",a\no,x\np,x\n");
        assert_eq!(ac_poset(&l).len(), 1);
    }

    #[test]
    fn identical_rows_share_object_concept() {
        let l = lattice(",a,b\no,x,\np,x,\nq,,x\n");
        let oc = oc_poset(&l);
        assert_eq!(oc.len(), 2);
        let labels = l.reduced_labels();
        let shared = l.object_concept("o").unwrap();
        assert_eq!(labels.introduced_objects(shared).len(), 2);
    }

    #[test]
    fn every_concept_introduces_gives_whole_lattice() {
        // o1 ⊂ o2 rows: chain top ({a}), ({a,b}); bottom introduces o2 and b.
        let l = lattice(",a,b\no1,x,\no2,x,x\n");
        let aoc = aoc_poset(&l);
        assert_eq!(aoc.len(), l.len());
        assert_eq!(aoc.order_edges, l.covers());
    }

    #[test]
    fn contranominal_aoc() {
        let l = lattice(",a,b,c\no1,,x,x\no2,x,,x\no3,x,x,\n");
        assert_eq!(l.len(), 8);
        assert_eq!(aoc_poset(&l).len(), 6);
    }

    #[test]
    fn iceberg_examples() {
        let l = lattice(K_DM);
        let ice = iceberg(&l, 3).unwrap();
        let mut expected = vec![
            l.attribute_concept("OS:Windows").unwrap(),
            l.attribute_concept("DM:Conceptual").unwrap(),
            l.attribute_concept("DM:Physical").unwrap(),
            l.attribute_concept("OS:Mac").unwrap(),
            l.attribute_concept("DM:Logical").unwrap(),
        ];
        expected.sort();
        assert_eq!(ice.concepts, expected);
        assert_eq!(ice.min_extent, Some(3));
        assert_eq!(iceberg(&l, 1).unwrap().len(), l.len() - 1);
        assert!(iceberg(&l, 6).unwrap().is_empty());
        assert!(matches!(iceberg(&l, 0), Err(Error::InvalidThreshold(0))));
    }

    #[test]
    fn iceberg_edges_skip_pruned_concepts() {
        let l = lattice(K_DM);
        let ice = iceberg(&l, 3).unwrap();
        let dm5 = ext(&l, &["Erwin-DM", "ER-Studio", "Magic-Draw"]);
        let dm8 = ext(&l, &["Astah", "Erwin-DM", "ER-Studio", "Magic-Draw"]);
        assert!(ice.order_edges.contains(&(dm5, dm8)));
        assert!(ice
            .order_edges
            .iter()
            .all(|(a, b)| ice.contains(*a) && ice.contains(*b)));
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("aoc".parse::<PosetKind>().unwrap(), PosetKind::Aoc);
        assert_eq!("ICEBERG".parse::<PosetKind>().unwrap(), PosetKind::Iceberg);
        assert!("lattice".parse::<PosetKind>().is_err());
    }
}
