//! Element model and the right LCM semigroup contract shared by every family.
//!
//! A family exposes its elements as [`SemigroupElement`] values carrying a
//! [`FamilyTag`] and a canonical [`Payload`]. All operations go through the
//! object-safe [`RightLcmSemigroup`] trait so downstream analysis can work on
//! `&dyn RightLcmSemigroup` without knowing the concrete family.

mod element;
mod error;
mod outcome;
pub mod sample;
mod semigroup;

pub use element::{FamilyKind, FamilyTag, Machine, Payload, SemigroupElement};
pub use error::{Result, SemigroupError};
pub use outcome::{Divisibility, Factorization, LcmOutcome, ScaleValue};
pub use semigroup::{default_depth, Certificate, ClosedForms, Level, RightLcmSemigroup};
