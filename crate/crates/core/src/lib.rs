//! A nonrecursive bijection between rooted labeled forests on `n` vertices and
//! parking functions of length `n`.
//!
//! The map sends a forest `F` to a parking function `P` so that the inversion
//! count of `F` equals the total jump of `P`, leaders become lucky cars and
//! trees become critical cars. The per-vertex correspondence is exposed as
//! [`Theta`].
//!
//! ```
//! use parkforest::{phi, phi_inv, Forest};
//!
//! let forest = Forest::new(vec![0, 0]).unwrap();
//! let (pf, _theta) = phi(&forest);
//! assert_eq!(pf.as_slice(), &[2, 1]);
//! assert_eq!(phi_inv(&pf), forest);
//! ```
//!
//! Modules:
//!
//! * [`model`]: forests, canonically ordered trees, super-root handling.
//! * [`forest_stats`]: inversions, leaders, tree count, `tinv`.
//! * [`parking`]: the parking algorithm, recognition, jump/lucky/critic, sampling.
//! * [`bijection`]: `phi`, `phi_inv` and their intermediate overlays.
//! * [`enumerate`]: exhaustive enumerators and the verification driver.
//! * [`genfunc`]: sparse generating polynomials and closed-form products.
//! * [`format`]: text and structured input parsing.

#![forbid(unsafe_code)]

pub mod bijection;
pub mod enumerate;
pub mod error;
pub mod forest_stats;
pub mod format;
pub mod genfunc;
pub mod model;
pub mod parking;

pub use bijection::{phi, phi_inv, OverlayTriple, Theta};
pub use error::{BijectionError, EnumerateError, GenFuncError, ModelError, ParkingError};
pub use forest_stats::ForestStatReport;
pub use model::{Forest, OrderedForest, OrderedTree, Rooted, Vertex};
pub use parking::{ParkingFunction, ParkingStatReport, PreferenceSequence};

/// `(n+1)^(n-1)`, the number of forests on `n` vertices and of parking functions of
/// length `n`. Equals 1 for `n = 0`.
pub fn cayley_count(n: usize) -> u64 {
    if n == 0 {
        1
    } else {
        (n as u64 + 1).pow(n as u32 - 1)
    }
}

/// Binomial coefficient `C(n+1, 2)`.
pub fn triangular(n: usize) -> u64 {
    let n = n as u64;
    n * (n + 1) / 2
}
