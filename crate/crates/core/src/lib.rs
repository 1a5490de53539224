//! Word-metric neighborhoods in the free group of countable rank, and
//! continuous open quotient maps from it onto countable metrizable groups.
//!
//! Modules build on each other in order: [`words`] (reduced words),
//! [`scale`] (the index chain and the scale function `φ`),
//! [`neighborhoods`] (membership certificates), [`target_groups`] (oracle
//! groups), [`quotient`] (the surjection `f̄`), [`pw`] (piecewise-word
//! groups over a sample space), and [`harness`] (bounded verification
//! suites producing a [`report::Report`]).

pub mod error;
pub mod finite;
pub mod harness;
pub mod neighborhoods;
pub mod pw;
pub mod quotient;
pub mod report;
pub mod scale;
pub mod target_groups;
pub mod words;

pub use error::{Error, Result};
pub use neighborhoods::{
    cert_conjugate, cert_invert, cert_square, cert_verify, hausdorff_support, sym_member_bounded, vphi_member,
    Membership, SearchBounds, SubbasicSpec, SymCertificate,
};
pub use quotient::{QuotientMap, RefinedBasis, Verdict};
pub use scale::{IndexChain, PhiContext};
pub use target_groups::{AnyGroup, GroupId, GroupOracle};
pub use words::{Letter, ReducedWord};
