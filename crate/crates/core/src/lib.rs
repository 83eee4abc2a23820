//! Capacities of sequences of coloring channels.
//!
//! A coloring channel passes the letters of a fixed subset of `[q]` and
//! deletes all others. This crate models systems of such channels, computes
//! their exact capacity where a closed form is known (single channels,
//! uniform sunflowers, two intersecting sets, paths, and anything that
//! reduces to those), returns bounds otherwise (cycles, general systems),
//! and provides a brute-force enumeration oracle for checking the formulas
//! at small block lengths.
//!
//! ```
//! use colorcap::{capacity, ChannelSystem};
//!
//! let path = ChannelSystem::from_lists(4, &[vec![1, 2], vec![2, 3], vec![3, 4]]).unwrap();
//! let value = capacity(&path).capacity.exact().unwrap();
//! assert!((value - 0.79248).abs() < 5e-6);
//! ```

pub mod bounds;
pub mod channel;
pub mod error;
pub mod exact;
pub mod oracle;
pub mod special;
pub mod system;

pub use bounds::{bounds_cycle, bounds_general, subgraph_monotonic_check};
pub use channel::{apply_channel, apply_system, confusable, Alphabet, ColoringChannel, OutputTuple, Word};
pub use error::{Error, Result};
pub use exact::{
    capacity, capacity_path, capacity_single, capacity_sunflower, capacity_two_sets, Capacity,
    CapacityResult, Method, Reduction, Witness,
};
pub use oracle::{
    count_outputs, empirical_rate_sweep, reconstruct_view, verify_pairs_equality, EnumerationConfig,
    EnumerationReport,
};
pub use special::{chebyshev_u, chebyshev_w, entropy};
pub use system::{
    classify, clique_number, edge_clique_cover, pairs_graph, remove_dominated, separable_split,
    ChannelSystem, PairsGraph, SystemClass,
};
