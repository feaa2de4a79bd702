pub mod bench;
pub mod conditioning;
pub mod error;
pub mod grid;
pub mod linop;
pub mod osk;
pub mod qae;
pub mod qlsp;
pub mod statevector;

pub use error::{Error, Result};
