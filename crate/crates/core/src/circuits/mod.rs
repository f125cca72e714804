//! Brickwork circuit ensembles.
//!
//! A circuit on `n` qubits has `d` layers; layer `ℓ` places one brick on each
//! adjacent pair starting at qubit `ℓ mod 2`. Each brick is an index into a
//! [`GateCatalog`]. The catalogs are one concrete choice of Clifford-containing
//! gate set, not a canonical one.

pub mod catalog;
pub mod ensemble;
pub mod format;

pub use catalog::{CatalogId, GateCatalog};
pub use ensemble::{
    bricks_in_layer, default_depth, enumerate_ensemble, key_bits, layer_pairs, total_bricks, Brick, CircuitDescription,
    EnsembleParams,
};
pub use format::{deserialize, encoded_len, serialize};
