pub mod syntax;
pub mod semantics;
pub mod translate;
pub mod proof;
pub mod ode;
pub mod gen;
pub mod selftest;
