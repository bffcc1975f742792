//! Construction and desk-scale certification of anti-M-Weierstrass function
//! sequences: sequences of continuous functions on a compact interval whose
//! series converges absolutely and uniformly while the series of sup norms
//! diverges, so they satisfy the conclusion of the Weierstrass M-test without
//! satisfying its hypothesis.
//!
//! The crate is organized around a certificate discipline: convergence and
//! divergence claims are only affirmed when they follow structurally from how
//! a sequence was built (disjoint supports, membership of its scalar part in
//! `c0` or outside `l1`, exact norm rules). Finite numerics are attached as
//! sanity records and can warn, never certify.
//!
//! Main entry points:
//!
//! - [`realfn`]: closed-form continuous functions on an interval with
//!   verified sup-norm enclosures.
//! - [`scalarseq`]: scalar sequences with membership certificates over
//!   `c0`, `l1` and the union of the `lp` spaces.
//! - [`construct`]: the classic counterexample bumps and the transplant
//!   operator that turns one function into a disjointly supported sequence.
//! - [`series`]: AMW certification (absolute + uniform convergence,
//!   divergence of the norm series) and exact tail suprema.
//! - [`spaces`]: families of certified sequences spanned by scalar or
//!   function bases, with independence and norm-identity checks.
//! - [`algebra`]: coordinatewise polynomial algebras of sequences and their
//!   divergence certification through evaluation witnesses.
//! - [`cli`]: a batch front-end producing deterministic JSON reports and CSV
//!   series data.
//!
//! Every value is immutable after construction and all operations are pure,
//! so everything here can be shared and evaluated across threads.

pub mod algebra;
pub mod cli;
pub mod construct;
mod error;
pub mod poly;
pub mod realfn;
pub mod rng;
pub mod scalarseq;
pub mod series;
pub mod spaces;

pub use construct::{classic_example, default_partition, transplant_sequence, FnSeq, Partition};
pub use error::{Error, Result};
pub use realfn::{Interval, NormEnclosure, RealFn};
pub use scalarseq::{Membership, MembershipCert, ScalarSeq};
pub use series::{certify_amw, AmwCertificate};
