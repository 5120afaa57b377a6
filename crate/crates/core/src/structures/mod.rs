//! Darboux symplectic models, Hamiltonian fields, the Schouten bracket and
//! the canonical contact model `N × R[n]`.

mod contact;
mod darboux;

pub use contact::{contact_model, ContactModel, THETA};
pub use darboux::{momentum_name, DarbouxSymplectic, MultivectorAlgebra, MOMENTUM_PREFIX};
