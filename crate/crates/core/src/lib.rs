//! Causal and symmetric fractional B-splines of real order α > −1, reproduction
//! of fractional monomials from their integer shifts, and the discrete identities
//! (`b ⊛ p = δ`, determinant, convolution and derivative relations) behind them.

pub mod cli;
pub mod grid;
pub mod report;
pub mod reproduction;
pub mod sequences;
pub mod special;
pub mod splines;

/// One-sided (causal) or centered (symmetric) construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Causal,
    Symmetric,
}
