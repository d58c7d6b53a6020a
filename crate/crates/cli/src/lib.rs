//! File formats, a thread-pool executor, a shared cohomology cache and the
//! `flasque` command-line front end.

pub mod app;
pub mod cache;
pub mod format;
pub mod parallel;
pub mod render;

pub use app::run;
