pub mod emd;
pub mod gw;
pub use emd::*;
pub use gw::*;
