//! Braess's paradox in non-atomic bottleneck routing games.
//!
//! Traffic of rate `r` travels from a source `s` to a sink `t`. Each player's
//! cost is the largest edge latency on its path, and the social cost of a flow
//! is the largest latency on any used path. This crate computes optimal and
//! worst-case equilibrium flows exactly, classifies instances by how much edge
//! removal can help, builds the hardness gadgets of the best-subnetwork
//! problem, and runs the sparse-flow approximation scheme on networks with few
//! paths.
//!
//! All flows and costs are exact rationals ([`Q`]).
//!
//! ```
//! use braess::{equilibrium, fixtures, rational::{q, qi}};
//!
//! let theta = fixtures::theta(qi(1));
//! let (opt, _) = equilibrium::optimal_bottleneck_cost(&theta).unwrap();
//! let worst = equilibrium::worst_nash_flow(&theta).unwrap();
//! assert_eq!(opt, q(1, 2));
//! assert_eq!(worst.cost, qi(1));
//! assert_eq!(equilibrium::price_of_anarchy(&theta).unwrap(), qi(2));
//! ```

pub mod constructions;
pub mod equilibrium;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod latency;
pub mod lp;
pub mod model;
pub mod random;
pub mod rational;
pub mod search;
pub mod topology;

pub use error::{Error, Result};
pub use latency::{LatencyFunction, LatencyKind, Shape};
pub use model::{CostReport, Flow, InstanceBuilder, Path, RoutingInstance};
pub use rational::Q;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/equilibria.md")]
    mod equilibria {}
    #[doc = include_str!("../../../book/src/paradox-free.md")]
    mod paradox_free {}
    #[doc = include_str!("../../../book/src/gadgets.md")]
    mod gadgets {}
    #[doc = include_str!("../../../book/src/approximation.md")]
    mod approximation {}
    #[doc = include_str!("../../../book/src/formats.md")]
    mod formats {}
}
