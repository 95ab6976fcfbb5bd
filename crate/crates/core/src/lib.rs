pub mod specfun;
pub mod geometry;
pub mod assembly;
pub mod eigensolve;
pub mod potential1d;
pub mod asymptotics;
pub mod experiments;
