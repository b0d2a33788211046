//! Modular FOM composition.
//!
//! - [`model`]: module, class-tree and table types; [`default_mim`] and
//!   [`classify_module`].
//! - [`io`]: the `.fmod` document format.
//! - [`merge`]: the merge engine producing a [`CurrentFom`].
//! - [`federation`]: an in-process federation runtime with MOM introspection.
//! - [`scenario`]: line-oriented scripts driving the runtime.

pub mod classify;
pub mod cli;
pub mod federation;
pub mod io;
pub mod merge;
pub mod mim;
pub mod model;
pub mod rule;
pub mod scenario;

pub use classify::{classify_module, Classification, ModuleKind};
pub use io::{parse_module, serialize_module, ModuleDocument, ParseDiagnostic, ParseErrors};
pub use mim::default_mim;
pub use model::ObjectModule;
pub use rule::RuleId;

pub use federation::{FederationExecution, Rti};
pub use merge::{diff_foms, merge_modules, CurrentFom, Handle, MergeReport, Rejection};
