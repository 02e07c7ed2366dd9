//! Exact construction of truth-invariant open non-uniform cylindrical
//! algebraic decompositions (open NuCADs).
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is pure
//! computation over exact integers and rationals; file formats, the CLI,
//! verification oracles and the multi-threaded builder live in the `nucad`
//! companion crate.
//!
//! Module map:
//!
//! * [`polynomial`] sparse multivariate integer polynomials, resultants,
//!   discriminants, gcds, squarefree bases, univariate factorization and the
//!   open McCallum projection.
//! * [`realroots`] real root isolation and exact comparison of real algebraic
//!   numbers, plus simplest-rational sample selection.
//! * [`formula`] Tarski formulas: parser, evaluation, factor extraction and
//!   the merge-set choice.
//! * [`onecell`] open cylindrical cells around a sample point and the merge
//!   engine that refines them.
//! * [`nucad`] labels, `split`, the tree builder, point location and stats.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod formula;
pub mod label;
pub mod nucad;
pub mod onecell;
pub mod polynomial;
pub mod realroots;

pub use formula::{Atom, FactorSet, Formula, Node, QPolicy, Relation};
pub use label::{Branch, Label, LabelPart, Side};
pub use nucad::{
    build, locate, perturb_sample, split, stats, BuildError, Builder, Location, NuCadTree,
    SplitError, SplitPolicy, TreeError, TreeNode, TreeStats,
};
pub use onecell::{Bound, CellError, LevelBounds, Membership, MergeOutcome, OpenCell};
pub use polynomial::{Poly, Rational, UPoly};
pub use realroots::RealRoot;
