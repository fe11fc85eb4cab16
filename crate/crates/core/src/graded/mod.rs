//! Graded vector spaces, coefficient rings, Koszul signs and multilinear maps.

pub mod family;
pub mod multimap;
pub mod perm;
pub mod ring;
pub mod space;
pub mod vector;

pub use family::{Corolla, Degrees, MapFamily};
pub use multimap::{canonicalize_block, check_symmetry, evaluate, tensor_apply, Flavor, MultiMap, TensorFactor, TensorTerm};
pub use perm::{binomial, block_assignments, koszul_parity, koszul_sign, set_partitions, splits, unshuffles, Permutation};
pub use ring::{format_scalar, int, inv_factorial, parse_scalar, ratio, LinForm, Ring, Scalar, TPoly, Trunc};
pub use space::{suspension_shift, BasisElement, GradedSpace, Sector, SectorTag};
pub use vector::{Element, Vector};
