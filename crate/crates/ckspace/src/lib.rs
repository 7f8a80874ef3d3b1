pub mod api;
mod arith;
pub mod choquet;
pub mod cli;
pub mod compact_open;
pub mod maps;
pub mod pofin;
pub mod schemes;
pub mod service;
mod syntax;
pub mod witnesses;

pub use compact_open::{BasicBox, RefinementCert, Slot, SubbasicBox};
pub use maps::{parse_map, LazyInjection, ProgressionMap};
pub use pofin::{parse_set, PeriodicSet, PofinError};
pub use schemes::SchemeTree;
pub use syntax::SyntaxError;
