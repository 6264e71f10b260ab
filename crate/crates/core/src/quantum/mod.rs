//! Exact propagation of lattice amplitudes.

mod closed_form;
mod direct;
mod observables;
mod spectrum;
mod state;
mod wei_norman;

pub use closed_form::{propagate_closed_form, propagator_hn, propagator_ic};
pub(crate) use direct::check_times;
pub use direct::{propagate_direct, DirectOptions, DEFAULT_LEAK_THRESHOLD};
pub use observables::{observables, QuantumObservables, CIRCULAR_MEAN_FLOOR};
pub use spectrum::spectrum_truncated;
pub use state::{gaussian_state, kappa_grid, site_state, LatticeState, SiteWindow};
pub use wei_norman::{propagate_wei_norman, WeiNormanCoefficients, ALIASING_TOLERANCE};
