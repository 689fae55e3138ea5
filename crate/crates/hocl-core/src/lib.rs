//! Coupled two-timescale dynamics: Kuramoto phase synchronization on the fast
//! timescale, synchronization-gated Hebbian structural plasticity on the slow
//! timescale, and Poincaré-ball sparse geometry tying the two together.
//!
//! The crate is organized around the pieces of the coupled system:
//!
//! * [`geometry`] — Poincaré ball model: geodesic distance, exponential map,
//!   Riemannian gradient rescaling, projection into the ball.
//! * [`oscillator`] — Kuramoto phase dynamics (mean-field, order-gated kernel,
//!   and sparse-local variants), order parameters, synchronization attention.
//! * [`plasticity`] — gated Hebbian weight updates with decay and the
//!   ultimate-boundedness bound on ‖W‖_F.
//! * [`graph`] — sparse neighborhoods from hyperbolic distances.
//! * [`stability`] — composite Lyapunov function, timescale-separation and
//!   Lipschitz bounds, two-timescale learning-rate schedules.
//! * [`model`] — the full forward pass and the training loop on a synthetic
//!   regression task.
//! * [`scenarios`] — seeded reference simulations emitting CSV traces.
//!
//! All randomness flows through [`rng::DeterministicRng`] (ChaCha8 with a
//! fixed-order Box–Muller transform), so a `(scenario, seed)` pair produces
//! byte-identical traces on every platform and at every thread count. Hot
//! per-unit loops are data-parallel via rayon when the `parallel` feature
//! (default) is enabled; disabling it leaves a dependency-free sequential
//! build with identical numerical output.

pub mod cluster;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod graph;
pub mod model;
pub mod oscillator;
pub mod plasticity;
pub mod rng;
pub mod scenarios;
pub mod stability;
pub mod trace;

pub use error::{Error, Result};
