//! Browsing a concept lattice one minimal decision at a time.
//!
//! A session stands on one concept. Moving up to an upper cover drops the
//! smallest set of attributes that lets new objects in; moving down to a
//! lower cover adds the smallest set of attributes that narrows the objects.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::context::{AttributeSet, ObjectSet};
use crate::error::{Error, Result};
use crate::lattice::{ConceptId, ConceptLattice};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Up,
    Down,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Via {
    Move,
    Jump,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub concept: ConceptId,
    pub via: Via,
}

/// Difference between two concepts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Delta {
    pub attributes_removed: AttributeSet,
    pub attributes_added: AttributeSet,
    pub objects_gained: ObjectSet,
    pub objects_lost: ObjectSet,
}

impl Delta {
    pub fn between(l: &ConceptLattice, from: ConceptId, to: ConceptId) -> Result<Self> {
        let a = l.concept(from)?;
        let b = l.concept(to)?;
        Ok(Delta {
            attributes_removed: a.intent.difference(&b.intent),
            attributes_added: b.intent.difference(&a.intent),
            objects_gained: b.extent.difference(&a.extent),
            objects_lost: a.extent.difference(&b.extent),
        })
    }
}

/// One minimal step to a cover neighbour.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Move {
    pub direction: Direction,
    pub target: ConceptId,
    pub delta: Delta,
    /// The target's intent is some object's full configuration.
    pub target_is_valid_configuration: bool,
}

#[derive(Clone, Debug)]
pub struct NavigationSession {
    lattice: Arc<ConceptLattice>,
    current: ConceptId,
    history: Vec<HistoryEntry>,
}

impl NavigationSession {
    /// Starts at `at`, or at the top concept.
    pub fn start(lattice: Arc<ConceptLattice>, at: Option<ConceptId>) -> Result<Self> {
        let current = match at {
            Some(c) => lattice.check(c)?,
            None => lattice.top(),
        };
        Ok(NavigationSession {
            lattice,
            current,
            history: vec![HistoryEntry {
                concept: current,
                via: Via::Jump,
            }],
        })
    }

    pub fn lattice(&self) -> &ConceptLattice {
        &self.lattice
    }

    pub fn current(&self) -> ConceptId {
        self.current
    }

    pub fn history(&self) -> &[HistoryEntry] {
        &self.history
    }

    /// Up moves first, then down moves; each group by target id.
    pub fn available_moves(&self) -> Vec<Move> {
        let l = &*self.lattice;
        let ups = l.upper_covers(self.current).expect("current is valid");
        let downs = l.lower_covers(self.current).expect("current is valid");
        ups.iter()
            .map(|&t| (Direction::Up, t))
            .chain(downs.iter().map(|&t| (Direction::Down, t)))
            .map(|(direction, target)| Move {
                direction,
                target,
                delta: Delta::between(l, self.current, target).expect("valid ids"),
                target_is_valid_configuration: l.is_object_concept(target),
            })
            .collect()
    }

    /// Steps to a cover neighbour of the current concept.
    pub fn apply_move(&mut self, target: ConceptId) -> Result<Move> {
        self.lattice.check(target)?;
        let mv = self
            .available_moves()
            .into_iter()
            .find(|m| m.target == target)
            .ok_or(Error::NotAdjacent {
                current: self.current.0,
                target: target.0,
            })?;
        self.current = target;
        self.history.push(HistoryEntry {
            concept: target,
            via: Via::Move,
        });
        Ok(mv)
    }

    /// Repositions anywhere; recorded as a jump in the history.
    pub fn jump(&mut self, target: ConceptId) -> Result<Delta> {
        let delta = Delta::between(&self.lattice, self.current, target)?;
        self.current = target;
        self.history.push(HistoryEntry {
            concept: target,
            via: Via::Jump,
        });
        Ok(delta)
    }

    /// Objects whose configurations refine the current partial
    /// configuration, with their object-concepts.
    pub fn reachable_configurations(&self) -> Vec<(usize, ConceptId)> {
        let l = &*self.lattice;
        l.concept(self.current)
            .expect("current is valid")
            .extent
            .iter()
            .map(|o| (o, l.object_introducer(o)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::{ContextFormat, FormalContext};

    const K_DM: &str = include_str!("../fixtures/k_dm.csv");

    fn lattice() -> Arc<ConceptLattice> {
        Arc::new(ConceptLattice::build(&FormalContext::parse(K_DM, ContextFormat::Csv).unwrap()).unwrap())
    }

    fn ext(l: &ConceptLattice, names: &[&str]) -> ConceptId {
        l.find_by_extent(&l.context().objects_named(names).unwrap()).unwrap()
    }

    fn attrs(l: &ConceptLattice, s: &AttributeSet) -> Vec<String> {
        l.context().attribute_names(s).map(String::from).collect()
    }

    fn objs(l: &ConceptLattice, s: &ObjectSet) -> Vec<String> {
        l.context().object_names(s).map(String::from).collect()
    }

    #[test]
    fn starts_at_top() {
        let l = lattice();
        let s = NavigationSession::start(l.clone(), None).unwrap();
        assert_eq!(s.current(), l.top());
        assert_eq!(attrs(&l, &l.concept(s.current()).unwrap().intent), ["OS:Windows"]);
        let dm4 = ext(&l, &["Astah", "Magic-Draw"]);
        assert_eq!(NavigationSession::start(l.clone(), Some(dm4)).unwrap().current(), dm4);
        assert!(matches!(
            NavigationSession::start(l, Some(ConceptId(999))),
            Err(Error::UnknownConcept(999))
        ));
    }

    #[test]
    fn up_moves_from_astah() {
        let l = lattice();
        let dm4 = l.object_concept("Astah").unwrap();
        let dm6 = ext(&l, &["Astah", "Magic-Draw", "MySQL-Workbench"]);
        let dm8 = ext(&l, &["Astah", "Erwin-DM", "ER-Studio", "Magic-Draw"]);
        let s = NavigationSession::start(l.clone(), Some(dm4)).unwrap();
        let ups: Vec<_> = s
            .available_moves()
            .into_iter()
            .filter(|m| m.direction == Direction::Up)
            .collect();
        assert_eq!(ups.len(), 2);
        assert_eq!(ups[0].target, dm6);
        assert_eq!(attrs(&l, &ups[0].delta.attributes_removed), ["DM:Conceptual"]);
        assert_eq!(objs(&l, &ups[0].delta.objects_gained), ["MySQL-Workbench"]);
        assert!(ups[0].delta.attributes_added.is_empty());
        assert_eq!(ups[1].target, dm8);
        assert_eq!(attrs(&l, &ups[1].delta.attributes_removed), ["OS:Linux", "OS:Mac"]);
        assert_eq!(objs(&l, &ups[1].delta.objects_gained), ["ER-Studio", "Erwin-DM"]);
        assert!(!ups[0].target_is_valid_configuration);
    }

    #[test]
    fn no_up_moves_at_top() {
        let s = NavigationSession::start(lattice(), None).unwrap();
        let moves = s.available_moves();
        assert!(moves.iter().all(|m| m.direction == Direction::Down));
        assert_eq!(moves.len(), 3);
    }

    #[test]
    fn move_rules() {
        let l = lattice();
        let dm4 = l.object_concept("Astah").unwrap();
        let dm6 = ext(&l, &["Astah", "Magic-Draw", "MySQL-Workbench"]);
        let mut s = NavigationSession::start(l.clone(), Some(dm4)).unwrap();
        assert!(matches!(s.apply_move(l.top()), Err(Error::NotAdjacent { .. })));
        s.apply_move(dm6).unwrap();
        assert_eq!(s.current(), dm6);
        assert_eq!(
            s.history().last(),
            Some(&HistoryEntry {
                concept: dm6,
                via: Via::Move
            })
        );

        let mut t = NavigationSession::start(l.clone(), None).unwrap();
        assert!(matches!(t.apply_move(l.top()), Err(Error::NotAdjacent { .. })));
        assert!(matches!(t.apply_move(ConceptId(50)), Err(Error::UnknownConcept(50))));
    }

    #[test]
    fn jump_deltas() {
        let l = lattice();
        let dm4 = l.object_concept("Astah").unwrap();
        let mut s = NavigationSession::start(l.clone(), Some(dm4)).unwrap();
        let d = s.jump(l.top()).unwrap();
        assert_eq!(
            attrs(&l, &d.attributes_removed),
            ["DM:Conceptual", "OS:Linux", "OS:Mac"]
        );
        assert_eq!(s.history().len(), 2);
        assert_eq!(s.history()[1].via, Via::Jump);

        let d = s.jump(l.top()).unwrap();
        assert!(d.attributes_removed.is_empty() && d.objects_lost.is_empty());
        assert_eq!(s.history().len(), 3);
        assert!(matches!(s.jump(ConceptId(77)), Err(Error::UnknownConcept(77))));
        assert_eq!(s.current(), l.top());
    }

    #[test]
    fn reachable() {
        let l = lattice();
        let dm6 = ext(&l, &["Astah", "Magic-Draw", "MySQL-Workbench"]);
        let s = NavigationSession::start(l.clone(), Some(dm6)).unwrap();
        let names: Vec<_> = s
            .reachable_configurations()
            .iter()
            .map(|(o, _)| l.context().objects()[*o].clone())
            .collect();
        assert_eq!(names, ["Astah", "Magic-Draw", "MySQL-Workbench"]);
        assert_eq!(
            NavigationSession::start(l.clone(), None)
                .unwrap()
                .reachable_configurations()
                .len(),
            5
        );
        assert!(NavigationSession::start(l.clone(), Some(l.bottom()))
            .unwrap()
            .reachable_configurations()
            .is_empty());
    }
}
