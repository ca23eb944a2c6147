//! Worked manifolds and map germs shared by the test-suite, the
//! command-line fixtures, and the documentation.
//!
//! Everything here is exact: base points are rational, coefficients
//! Gaussian-rational, and each map either is polynomial or is provided
//! as a truncation of a closed form together with that closed form
//! (`moebius_value`). The manifolds cover the diagnostic spectrum:
//!
//! * `heisenberg` — Levi-nondegenerate hypersurface, minimal with
//!   two-link chains;
//! * `levi_flat` — everywhere Levi-degenerate, no minimality
//!   certificate exists;
//! * `quadric_pair_source`/`quadric_pair_target` — codimension-two
//!   quadrics with identical CR dimensions whose Levi forms differ in
//!   surjectivity, linked by a polynomial projection;
//! * `hyperquadric` — a signature-split real quadric through a
//!   non-origin base point; it contains an affine complex line, along
//!   which a degenerate self-map collapses the complex tangent space;
//! * `codim2_quadric` — nondegenerate but non-minimal: both defining
//!   forms are multiples of the same Hermitian form, so Segre-set
//!   ranks stall below the ambient dimension.

use crate::gauss::{self, GaussRat};
use crate::germ::MapGerm;
use crate::geometry::ManifoldSpec;
use crate::series::{Multidegree, TruncatedSeries};
use num_traits::Zero;

/// Polynomial from (exponents, coefficient) pairs; the declared order
/// is the maximal total degree (never below 1).
fn poly(nvars: usize, terms: &[(&[u32], GaussRat)]) -> TruncatedSeries {
    let order = terms
        .iter()
        .map(|(e, _)| e.iter().sum::<u32>())
        .max()
        .unwrap_or(0)
        .max(1);
    let mut s = TruncatedSeries::zero(nvars, order);
    for (e, c) in terms {
        assert_eq!(e.len(), nvars);
        s.add_term(Multidegree(e.to_vec()), c.clone());
    }
    s
}

/// `Im w = |z|^2` in C^2, written `(-i/2) w + (i/2) ~w - z ~z = 0`,
/// based at the origin.
pub fn heisenberg() -> ManifoldSpec {
    let rho = poly(
        4,
        &[
            (&[0, 1, 0, 0], gauss::ratio_c(0, 1, -1, 2)),
            (&[0, 0, 0, 1], gauss::ratio_c(0, 1, 1, 2)),
            (&[1, 0, 1, 0], gauss::from_int(-1)),
        ],
    );
    ManifoldSpec::new(2, vec![gauss::zero(); 2], vec![rho])
}

/// `Im w = 0` in C^2: the flat hypersurface `C x R`, based at the
/// origin. Levi-degenerate and nowhere minimal.
pub fn levi_flat() -> ManifoldSpec {
    let rho = poly(
        4,
        &[
            (&[0, 1, 0, 0], gauss::ratio_c(0, 1, -1, 2)),
            (&[0, 0, 0, 1], gauss::ratio_c(0, 1, 1, 2)),
        ],
    );
    ManifoldSpec::new(2, vec![gauss::zero(); 2], vec![rho])
}

/// Codimension-two quadric in C^4 with a *surjective* Levi form:
/// `Re z3 = -(|z1|^2 + |z2|^2)`, `Re z4 = -(4|z1|^2 + |z2|^2)`.
pub fn quadric_pair_source() -> ManifoldSpec {
    let rho1 = poly(
        8,
        &[
            (&[0, 0, 1, 0, 0, 0, 0, 0], gauss::ratio(1, 2)),
            (&[0, 0, 0, 0, 0, 0, 1, 0], gauss::ratio(1, 2)),
            (&[1, 0, 0, 0, 1, 0, 0, 0], gauss::one()),
            (&[0, 1, 0, 0, 0, 1, 0, 0], gauss::one()),
        ],
    );
    let rho2 = poly(
        8,
        &[
            (&[0, 0, 0, 1, 0, 0, 0, 0], gauss::ratio(1, 2)),
            (&[0, 0, 0, 0, 0, 0, 0, 1], gauss::ratio(1, 2)),
            (&[1, 0, 0, 0, 1, 0, 0, 0], gauss::from_int(4)),
            (&[0, 1, 0, 0, 0, 1, 0, 0], gauss::one()),
        ],
    );
    ManifoldSpec::new(4, vec![gauss::zero(); 4], vec![rho1, rho2])
}

/// Same ambient data but the second form is identically zero on the
/// complex tangent space (`Re z4 = 0`): the Levi form is nondegenerate
/// yet *not* surjective.
pub fn quadric_pair_target() -> ManifoldSpec {
    let rho1 = poly(
        8,
        &[
            (&[0, 0, 1, 0, 0, 0, 0, 0], gauss::ratio(1, 2)),
            (&[0, 0, 0, 0, 0, 0, 1, 0], gauss::ratio(1, 2)),
            (&[1, 0, 0, 0, 1, 0, 0, 0], gauss::one()),
            (&[0, 1, 0, 0, 0, 1, 0, 0], gauss::one()),
        ],
    );
    let rho2 = poly(
        8,
        &[
            (&[0, 0, 0, 1, 0, 0, 0, 0], gauss::ratio(1, 2)),
            (&[0, 0, 0, 0, 0, 0, 0, 1], gauss::ratio(1, 2)),
        ],
    );
    ManifoldSpec::new(4, vec![gauss::zero(); 4], vec![rho1, rho2])
}

/// Admissible polynomial map `quadric_pair_source -> quadric_pair_target`:
/// keep `(z1, z2, z3)`, send `z4` to zero.
pub fn quadric_pair_projection(order: u32) -> MapGerm {
    let comps = vec![
        TruncatedSeries::variable(4, order, 0),
        TruncatedSeries::variable(4, order, 1),
        TruncatedSeries::variable(4, order, 2),
        TruncatedSeries::zero(4, order),
    ];
    MapGerm::new(vec![gauss::zero(); 4], comps)
}

/// `|z1|^2 + |z2|^2 - |z3|^2 = 1` in C^3, based at `(1, 0, 0)`.
pub fn hyperquadric() -> ManifoldSpec {
    let rho = poly(
        6,
        &[
            (&[1, 0, 0, 1, 0, 0], gauss::one()),
            (&[0, 1, 0, 0, 1, 0], gauss::one()),
            (&[0, 0, 1, 0, 0, 1], gauss::from_int(-1)),
            (&[0, 0, 0, 0, 0, 0], gauss::from_int(-1)),
        ],
    );
    ManifoldSpec::new(
        3,
        vec![gauss::one(), gauss::zero(), gauss::zero()],
        vec![rho],
    )
}

/// An affine complex line inside [`hyperquadric`]: `t -> (1, t, t)`,
/// returned as (point, direction).
pub fn hyperquadric_line() -> (Vec<GaussRat>, Vec<GaussRat>) {
    (
        vec![gauss::one(), gauss::zero(), gauss::zero()],
        vec![gauss::zero(), gauss::one(), gauss::one()],
    )
}

/// Self-map of [`hyperquadric`] collapsing onto its complex line:
/// `(z1, z2, z3) -> (1, z2, z2)`. Maps the manifold into itself but
/// squashes the complex tangent space, so it is not admissible.
pub fn hyperquadric_collapse(order: u32) -> MapGerm {
    let base = vec![gauss::one(), gauss::zero(), gauss::zero()];
    let comps = vec![
        TruncatedSeries::constant(3, order, gauss::one()),
        TruncatedSeries::variable(3, order, 1),
        TruncatedSeries::variable(3, order, 1),
    ];
    MapGerm::new(base, comps)
}

/// Codimension-two quadric in C^3 whose two forms are proportional on
/// the complex tangent space: `Re z2 = -|z1|^2`, `Re z3 = -2|z1|^2`.
/// Levi-nondegenerate but not surjective and not minimal (the manifold
/// sits inside `Re(z3 - 2 z2) = 0`).
pub fn codim2_quadric() -> ManifoldSpec {
    let rho1 = poly(
        6,
        &[
            (&[0, 1, 0, 0, 0, 0], gauss::ratio(1, 2)),
            (&[0, 0, 0, 0, 1, 0], gauss::ratio(1, 2)),
            (&[1, 0, 0, 1, 0, 0], gauss::one()),
        ],
    );
    let rho2 = poly(
        6,
        &[
            (&[0, 0, 1, 0, 0, 0], gauss::ratio(1, 2)),
            (&[0, 0, 0, 0, 0, 1], gauss::ratio(1, 2)),
            (&[1, 0, 0, 1, 0, 0], gauss::from_int(2)),
        ],
    );
    ManifoldSpec::new(3, vec![gauss::zero(); 3], vec![rho1, rho2])
}

// ---------------------------------------------------------------------
// Automorphisms of the Heisenberg hypersurface, all based at the
// origin of C^2 (except where noted, the base maps to itself).

/// The identity of C^2 at the origin.
pub fn identity_auto(order: u32) -> MapGerm {
    MapGerm::identity(vec![gauss::zero(); 2], order)
}

/// Anisotropic dilation `(z, w) -> (2z, 4w)`.
pub fn dilation_auto(order: u32) -> MapGerm {
    MapGerm::new(
        vec![gauss::zero(); 2],
        vec![
            TruncatedSeries::variable(2, order, 0).scale(&gauss::from_int(2)),
            TruncatedSeries::variable(2, order, 1).scale(&gauss::from_int(4)),
        ],
    )
}

/// Rotation `(z, w) -> (iz, w)`.
pub fn rotation_auto(order: u32) -> MapGerm {
    MapGerm::new(
        vec![gauss::zero(); 2],
        vec![
            TruncatedSeries::variable(2, order, 0).scale(&gauss::i_unit()),
            TruncatedSeries::variable(2, order, 1),
        ],
    )
}

/// Heisenberg translation by the manifold point `(1, 1+i)`:
/// `(z, w) -> (z + 1, w + (1+i) + 2iz)`. Moves the origin off itself,
/// exercising maps whose value differs from their base.
pub fn translation_auto(order: u32) -> MapGerm {
    let two_i = &gauss::from_int(2) * &gauss::i_unit();
    MapGerm::new(
        vec![gauss::zero(); 2],
        vec![
            TruncatedSeries::variable(2, order, 0).add(&TruncatedSeries::constant(
                2,
                order,
                gauss::one(),
            )),
            TruncatedSeries::variable(2, order, 1)
                .add(&TruncatedSeries::variable(2, order, 0).scale(&two_i))
                .add(&TruncatedSeries::constant(
                    2,
                    order,
                    &gauss::one() + &gauss::i_unit(),
                )),
        ],
    )
}

/// Truncation of the parabolic automorphism
/// `(z, w) -> (z/(1-w), w/(1-w))`: geometric series in `w` cut at the
/// requested order. Use [`moebius_value`] for the closed form.
pub fn moebius_auto(order: u32) -> MapGerm {
    let mut f1 = TruncatedSeries::zero(2, order);
    let mut f2 = TruncatedSeries::zero(2, order);
    for k in 0..order {
        f1.add_term(Multidegree(vec![1, k]), gauss::one());
    }
    for k in 1..=order {
        f2.add_term(Multidegree(vec![0, k]), gauss::one());
    }
    MapGerm::new(vec![gauss::zero(); 2], vec![f1, f2])
}

/// Closed form of [`moebius_auto`]; `None` on the pole `w = 1`.
pub fn moebius_value(z: &GaussRat, w: &GaussRat) -> Option<(GaussRat, GaussRat)> {
    let denom = &gauss::one() - w;
    if denom.is_zero() {
        return None;
    }
    Some((z / &denom, w / &denom))
}
