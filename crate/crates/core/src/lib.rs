//! Algorithms for one-relator groups with torsion `<X; R^n>`, `n >= 2`:
//! free-group words, Whitehead minimization, ends and free-factor
//! classification, Dehn's algorithm, finite quotients into symmetric groups,
//! bounded probes, and graphs of groups with Tietze certificates.
//!
//! Results that rest on bounded searches are returned as [`Verdict`]s.

pub mod classify;
pub mod dehn;
pub mod error;
pub mod gog;
pub mod presentation;
pub mod probes;
pub mod quotients;
pub mod verdict;
pub mod whitehead;
pub mod words;

pub use classify::{
    classify_ends, decompose_free_factors, is_fuchsian_2gen, torsion_order, Ends, EndsClassification,
    FreeFactorization, TorsionCertificate,
};
pub use dehn::{DehnReduction, DehnStep, RelatorTable};
pub use error::{Error, Result};
pub use gog::{Edge, EdgeKind, GraphOfGroups, ValidationReport, Vertex, VertexTag};
pub use presentation::{AbelianInvariants, FinitePresentation, OneRelatorPresentation, Presentation};
pub use quotients::{certify_nontrivial, FiniteQuotientHom, OrderWitness, Perm};
pub use verdict::{Exhausted, Status, Verdict};
pub use whitehead::{MinimalForm, Minimizer, WhiteheadAut};
pub use words::{CyclicWord, Letter, Word};
