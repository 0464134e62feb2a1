//! Enumerate, characterize, mutate and verify n-cotorsion pairs in the
//! n-cluster category of type `A_m` through its polygon model.
//!
//! Objects are n-diagonals of an `(n(m+1)+2)`-gon. A set `S` of them is the
//! first half of an n-cotorsion pair exactly when `S = nc(nc(S))`, where
//! `nc(S)` collects the n-diagonals crossing nothing in `S`.
//!
//! ```
//! use ncotor_core::{Polygon, PolygonSpec};
//!
//! let poly = Polygon::new(PolygonSpec::new(2, 3).unwrap());
//! let x = poly.parse_set("{(1,4),(1,6),(3,6)}").unwrap();
//! assert!(!poly.is_closed(&x));
//! assert_eq!(poly.format_set(&poly.closure(&x)), "{(1,4),(1,6),(2,5),(3,6)}");
//! ```

pub mod cells;
pub mod closure;
pub mod diagset;
pub mod document;
pub mod error;
pub mod mutation;
pub mod oracle;
pub mod polygon;
pub mod quiver;
pub mod render;

pub use cells::{Cell, CellDecomposition};
pub use closure::{ClosedSets, ClusterTilting, Configuration};
pub use diagset::DiagSet;
pub use document::{ConfigDocument, DocumentError};
pub use error::{Error, Result};
pub use mutation::{mutate, rho_pi, rotate_in_cell, Direction, MutationRecord, MutationStep};
pub use polygon::{Diagonal, Polygon, PolygonSpec};
pub use quiver::{shift_n, ArQuiver, QuiverVertex, SubfactorImage};
