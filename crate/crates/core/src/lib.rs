//! Graph edit distance similarity search.
//!
//! The crate provides a labeled graph model, exact edit-cost models, a family
//! of GED lower bounds (label-set, branch-match, LP relaxation), an exact
//! branch-and-bound GED solver over an integer-program formulation, threshold
//! feasibility verification, and a filter-and-verify similarity search
//! pipeline, plus dataset ingestion (GXL subset and a native JSON format) and
//! a CLI.

pub mod assignment;
pub mod bb;
pub mod bounds;
pub mod costs;
pub mod graph;
pub mod ilp;
pub mod io;
pub mod oracle;
pub mod search;
pub mod selftest;
pub mod simplex;
pub mod testutil;
