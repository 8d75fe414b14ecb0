//! Exact symmetric-function machinery: partitions, monomial-basis
//! polynomials, Jack polynomials, Schur characters, and orthogonal spherical
//! functions.

mod jack;
mod partition;
mod schur;
mod spherical;
mod sympoly;

pub use jack::{jack_in_monomials, zonal_in_monomials};
pub use partition::{partitions_in_box, partitions_of, Partition};
pub use schur::{complete_homogeneous_from_power_sums, jacobi_trudi, schur_character, schur_from_power_sums};
pub use spherical::{f_mu, f_mu_mc, spherical_phi, spherical_phi_rational};
pub use sympoly::{count_rearrangements, for_each_distinct_permutation, SymPolyM};
