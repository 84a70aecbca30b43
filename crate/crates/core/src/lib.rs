//! Mertens products in arithmetic progressions over F_q[t].
//!
//! The crate computes the restricted Euler products
//! `P(n; Q, A0) = prod (1 - |P|^{-1})` over monic irreducibles `P` of degree
//! at most `n` with `P = A0 mod Q`, the Dirichlet L-polynomials and their
//! reciprocal zeros, and the constant `C(Q, A0)` in
//! `P(n; Q, A0) ~ C(Q, A0) (n log q)^{-1/Phi(Q)}` by three independent routes.
//!
//! Modules build on each other bottom-up: [`fqfield`] (coefficients),
//! [`polyring`] (F_q[t], irreducibles), [`chargroup`] (units and characters
//! mod Q), [`lfunc`] (L-polynomials, zeros, prime character sums) and
//! [`mertens`] (products, constants, verification).

pub mod arith;
pub mod chargroup;
pub mod error;
pub mod fqfield;
pub mod lfunc;
pub mod mertens;
pub mod par;
pub mod polyring;

pub use error::{Error, Result};
pub use fqfield::{Field, FieldElem, FieldSpec};
pub use par::Exec;
pub use polyring::{MonicPoly, Poly, PolyRing};
