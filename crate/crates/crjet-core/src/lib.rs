//! Exact symbolic toolkit for CR geometry at desk scale.
//!
//! Everything here computes over the Gaussian rationals (complex numbers
//! with rational real and imaginary parts), with no floating point and no
//! approximation anywhere: truncation orders are tracked explicitly and
//! every operation states what order its output is reliable to.
//!
//! Layering, bottom to top:
//!
//! * [`gauss`] — the coefficient field ℚ(i) and its canonical text form;
//! * [`linalg`] — dense exact matrices: rank, solve, kernel, inverse,
//!   lexicographically-first minor selection;
//! * [`series`] — sparse truncated multivariate power series;
//! * [`germ`] — map germs (tuples of series with a base point): compose,
//!   compositional inverse, implicit solve, recenter, conjugate;
//! * [`geometry`] — CR manifolds given by real polynomial defining
//!   equations: validation, Levi form, nondegeneracy order, minimality,
//!   admissibility of map germs;
//! * [`segre`] — complexifications, Segre graphs and their jets, chains,
//!   Segre-set rank certificates;
//! * [`reflection`] — the jet-reflection operator, chain propagation,
//!   value reconstruction from a finite jet, and determinacy checks;
//! * [`examples`] — the worked fixtures (Heisenberg hypersurface, the
//!   paired quadrics, the hyperquadric with its complex line, …) used by
//!   the test suites and usable as API entry points.

pub mod error;
pub mod gauss;
pub mod linalg;
pub mod series;
pub mod germ;
pub mod geometry;
pub mod segre;
pub mod reflection;
pub mod examples;

pub use error::{Error, Result};
pub use gauss::GaussRat;
pub use series::{Multidegree, TruncatedSeries};
pub use germ::MapGerm;
pub use geometry::ManifoldSpec;
pub use reflection::{JetAt, ReflectionContext};
