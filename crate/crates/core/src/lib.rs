//! Reaction systems over finite objects of concrete universes: sets, labeled
//! graphs, hypergraphs, posets and diagram categories over sets.
//!
//! A [`Background`] compiles its universe's structure into closure rules over
//! a sorted element list; a [`Subobject`] is a rule-closed element set. All
//! reaction semantics are expressed with the empty subobject, intersection,
//! union and inclusion.

pub mod background;
pub mod cover;
pub mod diagram;
pub mod document;
pub mod element;
pub mod laws;
pub mod morphism;
pub mod process;
pub mod reaction;
pub mod subobject;
pub mod universes;

pub use background::{Background, Layout, Structure, DEFAULT_ENUM_CAP};
pub use cover::{
    brute_force_cover, build_ch2, build_cover_background, build_cover_system,
    build_twin_sustain_system, CoverError, CoverInstance, CoverSystem, CoverVerdict,
};
pub use diagram::{
    check_diagram_morphism, instantiate_diagram_universe, registry_scheme, ComponentMaps,
    DiagramCarrier, DiagramError, Scheme, SchemeArrow, SchemeComponent,
};
pub use document::{parse_document, Document, DocumentError, DocumentKind};
pub use element::{ElementId, RawSubobject};
pub use morphism::{
    check_background_mono, induced_system, is_rs_morphism, is_strong, map_reaction,
    BackgroundMorphism, MorphismError, StrongMode, StrongVerdict,
};
pub use process::{
    build_transition_graph, check_context_independent, detect_cycle, run_process, CycleInfo,
    CycleScan, ProcessError, ProcessTrace, TransitionGraph,
};
pub use reaction::{result_of_set, Reaction, ReactionError, ReactionSystem};
pub use subobject::{BackgroundTag, Subobject, SubobjectError};
pub use universes::{
    Carrier, Edge, GraphCarrier, Hyperedge, HypergraphCarrier, Kind, PosetAxiom, PosetCarrier,
    SetCarrier, UniverseError,
};
