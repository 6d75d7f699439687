//! Guillotine subdivisions for the Euclidean travelling salesman problem
//! with disk-like neighborhoods.

pub mod geom;
pub mod instance;
pub mod span;
pub mod guillotine;
pub mod grid;
pub mod solvers;
