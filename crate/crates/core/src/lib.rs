//! McKay quivers of finite monomial subgroups of SL3, 3-preprojective cuts on
//! them, and skew-group quivers under the action of a `C3` or `S3`
//! complement.

pub mod cli;
pub mod cuts;
pub mod lattice;
pub mod mckay_quiver;
pub mod monomial_group;
pub mod skew;
