//! Polyhedral flat chains with coefficients in complete normed abelian groups.
//!
//! The crate is `no_std` (it needs `alloc`). All combinatorial decisions
//! (degeneracy, containment, clipping, orientation, transversality) are made in
//! exact rational arithmetic; only magnitudes (norms, volumes, lengths) are
//! floating point, and sums of magnitudes are correctly rounded.
//!
//! Module map:
//!
//! * [`coeffgroup`]: the six builtin coefficient groups, norms, path length.
//! * [`polychain`]: simplices, chains, boundary, mass, push-forward, restriction.
//! * [`zerochain`]: 0-chains, the augmentation `chi`, cones, dyadic measures.
//! * [`slicing`]: transversality, slices, fiber profiles, grid deformation.
//! * [`flatnorm`]: certified lower/upper flat-norm brackets and exact oracles.
//! * [`sizefunc`]: weighted-area functionals and flat size.
//! * [`experiments`]: ball growth, non-rectifiable witnesses, slice statistics.
//! * [`sampling`]: seeded random instances used by the experiments.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod coeffgroup;
mod error;
pub mod linalg;
pub mod numeric;
pub mod polychain;
pub mod zerochain;
mod polytope;
pub mod slicing;
pub mod flatnorm;
pub mod sizefunc;
pub mod sampling;
pub mod experiments;

pub use coeffgroup::{Alpha, Group, GroupElement, GroupKind, PathSamples};
pub use error::{Error, ErrorKind, Result};
pub use numeric::{Point, Rational};
pub use polychain::{AffineMap, Cell, Chain, HalfSpace, RegionSet, Simplex};
pub use slicing::{CoordinateProjection, GridSpec, OrientedAffinePlane};
pub use zerochain::{GMeasure, ZeroChain};
