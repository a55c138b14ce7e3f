//! Balls in Cayley networks of ℤⁿ, the discrete Heisenberg group and regular
//! trees, with their canonical test functions.

mod ball;
mod functions;
mod group;

pub use ball::{build_ball, build_ball_capped, lattice_box, BallNetwork, DEFAULT_HOST_CAP};
pub use functions::{
    abelian_quotient, busemann, busemann_value, ground_state_eigenvalue, homomorphism_cocycle,
    lambda_min, mu_star, tree_ground_state, tree_yang_type_constant, yang_constant,
    AbelianQuotient,
};
pub use group::{heisenberg_inv, heisenberg_mul, Element, Family, GroupSpec, GroupSpecFile};
