//! Exact computation of HH*(ℂ[x]⋊G, f) for Fermat polynomials
//! f = x_1^n + … + x_N^n and finite G ⊆ S_N ⋉ (μ_n)^N.

pub mod cli;
pub mod clifford_oracle;
pub mod cuptable;
pub mod cyclotomic;
pub mod fixedlocus;
pub mod gaction;
pub mod grading_pairing;
pub mod group;
pub mod invariants;
pub mod linalg;
pub mod polyring;
pub mod verify;
