//! Exact disc-potential series for toric Calabi-Yau 3-orbifolds and their
//! crepant resolutions, and verification that the two agree after the
//! change of variables read off from the charge vectors.

pub mod bundled;
pub mod cli;
pub mod exactnum;
pub mod lattice;
pub mod potential;
pub mod series;
