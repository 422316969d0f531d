//! Exact kernel for Burchnall-Chaundy ideals.
//!
//! Given an ordinary differential operator `L` in normal form and a
//! `C[L]`-module basis `{1, G1, …, G_{t−1}}` of its centralizer, the kernel
//! computes the relations `R_{i,j} = μᵢμⱼ − (μ-linear expansion of GᵢGⱼ)`,
//! which form a Gröbner basis of the ideal of algebraic relations among
//! `L, G1, …, G_{t−1}` (the defining ideal of the spectral curve).
//!
//! Module map:
//!
//! * [`diffield`]: differential coefficient fields (constants, `Q(eˣ)`,
//!   Weierstrass `℘`);
//! * [`odo`]: the operator ring `K[∂]` and Goodearl bases;
//! * [`specpoly`]: polynomials in `λ, μ1, …` with the weighted order;
//! * [`bccore`]: evaluation `λ ↦ L, μᵢ ↦ Gᵢ`, module coordinates, the
//!   Burchnall-Chaundy basis and membership;
//! * [`dres`]: differential resultants, used as an independent check.

pub mod bccore;
pub mod catalog;
pub mod diffield;
pub mod dres;
mod modgcd;
pub mod odo;
pub mod poly;
pub mod ratfunc;
pub mod specpoly;

pub use bccore::{bc_ideal, bc_membership, phi_l, reduce_as_module, BcBasis, BcError, ModuleCoordinates};
pub use diffield::{DiffField, FieldElement, FieldError, FieldKind};
pub use odo::{DiffOperator, GoodearlBasis, OdoError, Order};
pub use specpoly::{CoeffRing, Monomial, SpectralPolynomial, WeightedOrder};
