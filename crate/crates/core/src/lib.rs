//! Frame-sequence analysis for Weyl-Heisenberg systems `{E_mb T_na g}` and
//! their wavelet analogue, for windows built from polynomial and
//! square-root-of-quadratic pieces.
//!
//! The crate is organised bottom-up:
//!
//! * [`window`] holds the exact piecewise window model.
//! * [`periodization`] samples the periodized power functions `G`, `G~`,
//!   the correlation functions `H_k`, their zero sets and essential extrema.
//! * [`conditions`] turns those samples into verdicts for each frame criterion.
//! * [`oracle`] recomputes the same quantities by brute force (Gabor
//!   coefficients by quadrature, Gram matrices, Rayleigh ratios) so analytic
//!   verdicts can be cross-checked.
//! * [`catalog`] contains the named example windows.

pub mod catalog;
pub mod conditions;
pub mod oracle;
pub mod periodization;
pub mod poly;
pub mod window;

pub use conditions::{ConditionId, ConditionReport, RieszVerdict, TargetSpace, Verdict};
pub use periodization::{PeriodizedSamples, ZeroSet};
pub use window::{Lattice, Piece, PieceKind, PiecewiseWindow, Side};
