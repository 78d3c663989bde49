//! Exact-arithmetic laboratory for the average size of 2-Selmer groups of
//! even hyperelliptic curves over function fields.
//!
//! The library implements the computable objects of the underlying counting
//! pipeline at desk scale:
//!
//! * [`algebra`]: finite fields `F_{p^r}`, univariate polynomials,
//!   discriminants, squarefree structure, factorization, and order-2 jets.
//! * [`quadspace`]: the split quadratic space of dimension `2n+2` with the
//!   anti-identity Gram matrix, adjoints, similitudes, and exhaustive
//!   enumeration of `G(F_q) = GSO/F_q^×`.
//! * [`vinberg`]: the invariant map, Kostant sections, regularity,
//!   stabilizer counts, Jacobian 2-torsion counts, and the full fiber
//!   census of `V(F_q)`.
//! * [`funcfield`]: places of `F_q(t)`, minimal integral models, heights,
//!   transversality, and rational 2-torsion detection.
//! * [`density`]: the local and global density measurements (jet densities,
//!   regular locus, minimality, semistable and squarefree-discriminant
//!   censuses), all exact or seeded Monte Carlo.
//! * [`zeta`]: the zeta function of `P^1`, Euler products with tail bounds,
//!   and the headline constants of the averages.
//! * [`bundles`]: splitting-type calculus on `P^1`, the filtration matrix
//!   of a canonical parabolic reduction, contribution sweeps, and the
//!   reduction of Borel-shaped regular sections to the first Kostant
//!   section.
//!
//! Everything is exact integer or rational arithmetic except where a
//! density is estimated by a seeded, reproducible Monte Carlo run.

pub mod algebra;
pub mod bundles;
pub mod density;
pub mod error;
pub mod funcfield;
pub mod quadspace;
pub mod report;
pub mod rng;
pub mod selfcheck;
pub mod vinberg;
pub mod zeta;

pub use error::Error;

/// Library version string embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Resource caps shared by the census and enumeration engines.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Caps {
    /// Largest `|V(F_q)|` a fiber census will enumerate.
    pub census: u128,
    /// Largest `|G(F_q)|` the group enumerator will materialize.
    pub group_enum: u128,
    /// Largest jet space an exhaustive density will sweep.
    pub jet_space: u128,
    /// Largest coefficient search space for the 2-torsion scan.
    pub torsion_scan: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            census: 100_000_000,
            group_enum: 100_000_000,
            jet_space: 100_000_000,
            torsion_scan: 100_000_000,
        }
    }
}
