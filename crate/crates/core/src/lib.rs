//! Exact symbolic calculator for the diagram complexes attached to spaces
//! of pure braids in `R^n`: Kontsevich-style diagrams with their
//! contraction differential and superposition product, the dual blow-up
//! differential, bar and cobar complexes, uni-trivalent trees modulo
//! AS/IHX, free graded Lie algebra bookkeeping, the recursion taking
//! iterated brackets to dual diagram cycles, and cocycle lifting by exact
//! rational linear algebra.
//!
//! Everything is computed over exact rationals; results are deterministic
//! for fixed inputs and resource caps.

pub mod bar;
pub mod cdga;
pub mod cobar;
pub mod context;
pub mod diagram;
pub mod error;
pub mod json;
pub mod lie;
pub mod lift;
pub mod linalg;
pub mod lincomb;
pub mod rat;
pub mod selftest;
pub mod theta;
pub mod tree;

pub use bar::{
    bar_differential, bar_homological_differential, bar_internal_differential, coshuffle,
    deconcatenation, shuffle_product, BarCombo, CobarCombo, Word,
};
pub use cdga::{
    differential, indecomposable_projection, product, project_to_d, reduced_differential,
};
pub use cobar::{as_length_one, cobar_differential, dual_differential, pair, pair_duals};
pub use context::{Context, Quotient};
pub use diagram::{enumerate_diagrams, Canon, Diagram, DiagramCombo, DualCombo, Flags};
pub use error::{Error, Result};
pub use lie::{
    free_lie_dimension, left_normalize, milnor_dims, pbw_expand, pbw_of_bracket,
    yang_baxter_elements, BracketExpr, Convention, LieCombo,
};
pub use lift::{
    bar_basis, diagrams_by_degree, lift_cocycle, pair_homotopy, primitive_homology_dims,
    verify_bar_cocycle,
};
pub use rat::Q;
pub use theta::{is_exact, theta, theta_sign, theta_sum, theta_tilde, Caps};
pub use tree::{
    ihx_system, ihx_system_preferring, tree_canonicalize, tree_from_diagram, tree_normal_form, tree_of_bracket,
    tree_pair, IhxSystem, LabeledTree, TreeCanon, TreeCombo,
};
