//! Exact computer algebra for modular Lie superalgebras of contact vector
//! fields: divided powers, special vector fields, contact structures and
//! Cartan–Tanaka–Shchepochkina prolongation over GF(p).

pub mod ag2lab;
pub mod checks;
pub mod contact;
pub mod dpsuper;
pub mod error;
pub mod gfp;
pub mod liestruct;
pub mod linalg;
pub mod prolong;
pub mod sc;
pub mod vecfields;

pub use contact::{ContactStructure, FormConvention, Forms, OneForm, TwoForm};
pub use dpsuper::{DPElement, Monomial, Signature};
pub use error::{Error, Result};
pub use gfp::{Fp, PrimeField};
pub use vecfields::{field_basis, FieldSpace, SliceBasis, VectorField};
