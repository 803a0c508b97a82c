//! Exact cohomology of CDGAs generated in degree one, with the symplectic
//! and cosymplectic structure questions built on top of it.

pub mod cdga;
pub mod cohomology;
pub mod exterior;
pub mod lefschetz;
pub mod linalg;
pub mod massey;
pub mod rational;
pub mod registry;
pub mod report;
pub mod spec_file;
pub mod structures;
pub mod tables;
pub mod topology;
