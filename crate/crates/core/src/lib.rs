//! Exact symbolic computation in Ore-extension algebras.
//!
//! The crate provides, over exact scalars (arbitrary-precision rationals or a
//! prime field `F_p`):
//!
//! * [`partition`] — integer partitions, Young-lattice cover relations and the
//!   partition bookkeeping used everywhere else;
//! * [`scalar`] / [`poly`] / [`matrix`] — the scalar rings, univariate
//!   polynomials and dense matrices all higher layers are built on;
//! * [`ore`] — arithmetic in the two-generator algebras `F<x,y>/(yx - q·xy - h(x))`
//!   (polynomial algebra, quantum plane, quantum Weyl algebra and the family
//!   with `[y,x] = h(x)`), together with their distinguished endomorphisms and
//!   derivations;
//! * [`star`] — the associative star-product deformation of the commutative
//!   plane with `y⋆x - x⋆y = h(x)·hbar` and its semiclassical bracket;
//! * [`universal`] — the universal normal-ordering polynomials `U_{n,d}`, the
//!   partition-indexed coefficient tables computed by four independent routes,
//!   classical-number specializations, modular vanishing checks and the formal
//!   ODE solver;
//! * [`models`] — concrete operator models used as independent oracles: the
//!   Weyl-algebra action on Young's lattice, an intermediate-series action of
//!   the Witt algebra and the Laurent-basis raising/lowering model;
//! * [`qgha`] — quantum generalized Heisenberg algebras `H_q(f,g)`: PBW normal
//!   ordering, weight-cycle machinery and the constructive classification of
//!   finite-dimensional simple modules over prime fields;
//! * [`expr`] — the expression language shared by the command-line tools.
//!
//! All arithmetic is exact; no floating point is used anywhere.
//!
//! # Example
//!
//! Normal-order `y^2 x^2` in the Weyl algebra (`y` acts as `d/dx`):
//!
//! ```
//! use normord_core::ore::{OreAlgebraSpec, OreElement};
//! use normord_core::scalar::Ring;
//!
//! let spec = OreAlgebraSpec::weyl(Ring::Rat);
//! let x = OreElement::x(&spec);
//! let y = OreElement::y(&spec);
//! let p = y.pow(2).mul(&x.pow(2));
//! assert_eq!(p.to_string(), "x^2*y^2 + 4*x*y + 2");
//! ```

pub mod expr;
pub mod matrix;
pub mod models;
pub mod ore;
pub mod partition;
pub mod poly;
pub mod qgha;
pub mod scalar;
pub mod star;
pub mod universal;

use thiserror::Error;

/// Crate-wide error type for operations with caller-triggerable failure modes.
///
/// Programmer errors (mixing elements of different rings, violating a stated
/// precondition such as a non-prime modulus) panic instead.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An expression failed to parse; `offset` is a byte offset into the input.
    #[error("syntax error at offset {offset}: {msg}")]
    Parse { offset: usize, msg: String },
    /// A generator name is not valid in the selected algebra.
    #[error("unknown generator `{name}` at offset {offset}")]
    UnknownGenerator { name: String, offset: usize },
    /// A requested map does not exist for the given algebra parameters.
    #[error("{0}")]
    BadMap(String),
    /// A derivation or exponential was requested outside its domain.
    #[error("{0}")]
    BadDerivation(String),
    /// Exponential of a derivation did not terminate within the iteration cap.
    #[error("derivation is not locally nilpotent on the element within {cap} iterations")]
    NotNilpotent { cap: usize },
    /// Positive characteristic where factorials must be inverted.
    #[error("operation requires characteristic 0 scalars")]
    NeedsCharZero,
    /// Zero input where a nonzero one is required.
    #[error("{0}")]
    ZeroInput(String),
    /// Out-of-range or inconsistent numeric arguments.
    #[error("{0}")]
    BadArgument(String),
    /// A search or enumeration exceeded its configured budget.
    #[error("{0}")]
    BudgetExceeded(String),
    /// A probabilistic decision procedure exhausted its samples.
    #[error("{0}")]
    Inconclusive(String),
}

/// Convenience result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
