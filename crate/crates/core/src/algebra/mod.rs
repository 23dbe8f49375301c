//! Finite monoids, right acts, subacts, and homomorphisms.

mod act;
mod hom;
mod iso;
mod monoid;

pub(crate) use act::default_labels as default_act_labels;
#[cfg(test)]
pub(crate) use act::first_hom_violation;
pub(crate) use act::{checked_product, MixedRadix};
pub use act::{generated_subact, product_act, Act, ActHom, Subact, DEFAULT_PRODUCT_CAP};
pub use hom::{enumerate_homs, find_hom, generating_set, least_hom, HomSearch};
pub(crate) use iso::canonical_flat_table;
pub use iso::{
    canonical_act_table, canonical_act_table_fixing, canonical_monoid_table, is_isomorphic, CANONICAL_FORM_MAX,
};
pub(crate) use monoid::default_labels as default_monoid_labels;
pub use monoid::Monoid;
