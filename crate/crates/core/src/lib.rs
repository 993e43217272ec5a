//! Exact-arithmetic engine for refined SU(2)/SU(3) Vafa-Witten generating
//! functions on surfaces with b_1 = 0 and p_g > 0.
//!
//! The crate is organized around the pipeline:
//!
//! * [`exactnum`] — rationals and cyclotomic fields Q(zeta_n); every series
//!   coefficient in the engine is exact.
//! * [`qseries`] — truncated two-variable Laurent series: rational powers of a
//!   nome x, coefficients Laurent polynomials in y^{1/2} over Q(zeta_n).
//! * [`modforms`] — eta products, A2/A2^dual lattice theta functions, the
//!   Jacobi-form combination phi_{-2,1}^{1/2} Delta^{1/2}, the theta quotients
//!   Z and W and the quadratic-root pairs Z± and W±.
//! * [`surfdata`] — numerical surface data (chi, K^2, b_2^±, intersection
//!   table, Seiberg-Witten values, divisibility flags) with presets.
//! * [`vwgen`] — the conjectural generating functions: ranks 1, 2, 3,
//!   instanton and monopole branches, K3 closed forms, blow-up relations.
//! * [`latcheck`] — Legendre symbols, Gauss sums, Dedekind sums and
//!   brute-force unimodular-lattice character sums.
//! * [`ball`] / [`numeval`] — rigorous complex ball arithmetic and numeric
//!   verification of the modular transformation laws.
//! * [`hilbloc`] — equivariant localization on triples of Hilbert schemes of
//!   points on toric surfaces; solves the eleven universal series and
//!   assembles the Seiberg-Witten-weighted residue formula for low-order
//!   cross-checks of the rank-3 instanton conjecture.

pub mod ball;
pub mod exactnum;


pub mod latcheck;
pub mod modforms;
pub mod numeval;

pub mod qseries;
pub mod surfdata;
pub mod vwgen;


