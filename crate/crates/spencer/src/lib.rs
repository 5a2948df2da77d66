//! Exact symbolic machinery for Lie pseudogroups: jets, Spencer operators,
//! formal adjoints and divergence certificates, curvature splittings and
//! nonlinear jet composition.

pub mod par;
pub mod symbolic_core;
pub mod diffop;
pub mod lie_structure;
pub mod jet_theory;
pub mod equations_engine;
pub mod curvature;
pub mod nonlinear_jets;
