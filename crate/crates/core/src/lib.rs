//! Concept lattices and variability extraction for binary object/attribute
//! tables.
//!
//! A [`FormalContext`] is parsed from CSV or JSON, turned into a canonical
//! [`ConceptLattice`], and queried for the facts a product-line engineer
//! cares about: core and dead attributes, implications, mutual exclusions,
//! configuration classes, and minimal navigation moves.
//!
//! ```
//! use galex::{ConceptLattice, ContextFormat, FormalContext};
//!
//! let ctx = FormalContext::parse(",a,b\no1,x,\no2,x,x\n", ContextFormat::Csv)?;
//! let lattice = ConceptLattice::build(&ctx)?;
//! assert_eq!(lattice.len(), 2);
//! let core = galex::variability::core_attributes(&lattice);
//! assert_eq!(ctx.attribute_names(&core).collect::<Vec<_>>(), ["a"]);
//! # Ok::<(), galex::Error>(())
//! ```

pub mod bitset;
pub mod context;
pub mod error;
pub mod export;
pub mod lattice;
pub mod navigation;
pub mod service;
pub mod subhierarchy;
pub mod variability;

pub use context::{AttributeSet, ContextFormat, FormalContext, ObjectSet};
pub use error::{Error, Result};
pub use lattice::{BuildOptions, ConceptId, ConceptLattice, FormalConcept};
pub use navigation::NavigationSession;
pub use subhierarchy::{ConceptPoset, PosetKind};
pub use variability::{ConfigurationClass, ReportOptions, VariabilityReport};
