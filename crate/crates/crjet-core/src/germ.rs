//! Map germs: tuples of truncated series anchored at a base point.
//!
//! A `MapGerm` is the order-`order` Taylor data at `base` of a
//! holomorphic map germ `C^nvars -> C^ncomps`. Component series are in
//! the *displacement* variables around `base` and include their constant
//! term, so `value()` (the image of the base point) is just the vector
//! of constant terms.
//!
//! The three nontrivial engines are:
//!
//! * [`MapGerm::compose`] — germ composition, requiring the inner value
//!   to equal the outer base exactly;
//! * [`MapGerm::comp_inverse`] — compositional inverse of a square germ
//!   with invertible linear part, by triangular degree-by-degree solve;
//! * [`MapGerm::implicit_solve`] — the formal implicit function theorem:
//!   given `F(u, v)` with `F(0,0) = 0` and `dF/dv(0)` invertible,
//!   produce `h(u)` with `F(u, h(u)) = 0` to the stored order.
//!
//! All three verify their defining identity after the fact and panic on
//! violation (an exact algorithm that fails its own contract is a bug,
//! not an input condition).

use crate::error::{Error, Result};
use crate::gauss::{self, GaussRat};
use crate::linalg::Matrix;
use crate::series::{Multidegree, TruncatedSeries};
use num_traits::Zero;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub struct MapGerm {
    base: Vec<GaussRat>,
    comps: Vec<TruncatedSeries>,
    order: u32,
}

impl MapGerm {
    /// Build from a base point and component series (orders are aligned
    /// down to the minimum).
    pub fn new(base: Vec<GaussRat>, comps: Vec<TruncatedSeries>) -> Self {
        let nvars = base.len();
        for (i, c) in comps.iter().enumerate() {
            assert_eq!(
                c.nvars(),
                nvars,
                "component {i} has arity {} but the base has dimension {nvars}",
                c.nvars()
            );
        }
        let order = comps.iter().map(TruncatedSeries::order).min().unwrap_or(0);
        let comps = comps.iter().map(|c| c.truncated(order)).collect();
        MapGerm { base, comps, order }
    }

    pub fn identity(base: Vec<GaussRat>, order: u32) -> Self {
        let n = base.len();
        let comps = (0..n)
            .map(|i| {
                let mut s = TruncatedSeries::constant(n, order, base[i].clone());
                if order >= 1 {
                    s = s.add(&TruncatedSeries::variable(n, order, i));
                }
                s
            })
            .collect();
        MapGerm {
            base,
            comps,
            order,
        }
    }

    pub fn nvars(&self) -> usize {
        self.base.len()
    }

    pub fn ncomps(&self) -> usize {
        self.comps.len()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn base(&self) -> &[GaussRat] {
        &self.base
    }

    /// Image of the base point: the constant terms.
    pub fn value(&self) -> Vec<GaussRat> {
        self.comps.iter().map(TruncatedSeries::constant_term).collect()
    }

    pub fn component(&self, i: usize) -> &TruncatedSeries {
        &self.comps[i]
    }

    pub fn components(&self) -> &[TruncatedSeries] {
        &self.comps
    }

    /// Components with the constant term removed (pure displacements).
    pub fn displacement_components(&self) -> Vec<TruncatedSeries> {
        self.comps
            .iter()
            .map(|c| c.sub(&TruncatedSeries::constant(self.nvars(), c.order(), c.constant_term())))
            .collect()
    }

    /// Jacobian at the base point (ncomps x nvars).
    pub fn jacobian(&self) -> Matrix {
        let rows = self
            .comps
            .iter()
            .map(|c| (0..self.nvars()).map(|j| c.linear_coeff(j)).collect())
            .collect();
        Matrix::from_rows(rows)
    }

    pub fn truncated(&self, order: u32) -> MapGerm {
        let order = order.min(self.order);
        MapGerm {
            base: self.base.clone(),
            comps: self.comps.iter().map(|c| c.truncated(order)).collect(),
            order,
        }
    }

    /// Declare a higher order (polynomial-complete content only; see
    /// [`TruncatedSeries::raised`]).
    pub fn raised(&self, order: u32) -> MapGerm {
        MapGerm {
            base: self.base.clone(),
            comps: self.comps.iter().map(|c| c.raised(order)).collect(),
            order,
        }
    }

    /// Concatenate the components of two germs over the same source.
    pub fn stack(&self, other: &MapGerm) -> MapGerm {
        assert_eq!(self.base, other.base, "stack: base points differ");
        let mut comps = self.comps.clone();
        comps.extend(other.comps.iter().cloned());
        MapGerm::new(self.base.clone(), comps)
    }

    /// The conjugated germ w -> conj(f(conj w)): conjugate base and
    /// coefficients, variables untouched.
    pub fn conjugate(&self) -> MapGerm {
        MapGerm {
            base: self.base.iter().map(gauss::conj).collect(),
            comps: self.comps.iter().map(TruncatedSeries::conj_coeffs).collect(),
            order: self.order,
        }
    }

    /// Exact polynomial evaluation of the stored jet at an absolute
    /// point (meaningful as the germ's value only for polynomial
    /// content).
    pub fn eval_poly(&self, point: &[GaussRat]) -> Vec<GaussRat> {
        assert_eq!(point.len(), self.nvars(), "eval_poly: dimension mismatch");
        let disp: Vec<GaussRat> = point
            .iter()
            .zip(&self.base)
            .map(|(p, b)| p - b)
            .collect();
        self.comps.iter().map(|c| c.eval(&disp)).collect()
    }

    /// Taylor-shift to a new base point with honest order bookkeeping:
    /// the result's order is what the shift preserves of *series*
    /// content (see [`TruncatedSeries::recenter`]).
    pub fn recenter(&self, new_base: Vec<GaussRat>) -> MapGerm {
        let (comps, retained) = self.recenter_parts(&new_base);
        let comps = comps.iter().map(|c| c.truncated(retained)).collect();
        MapGerm {
            base: new_base,
            comps,
            order: retained,
        }
    }

    /// Taylor-shift for polynomial-complete content: the declared order
    /// is kept (the shift of a polynomial is exact at every order).
    pub fn recenter_exact(&self, new_base: Vec<GaussRat>) -> MapGerm {
        let (comps, _) = self.recenter_parts(&new_base);
        MapGerm {
            base: new_base,
            comps,
            order: self.order,
        }
    }

    fn recenter_parts(&self, new_base: &[GaussRat]) -> (Vec<TruncatedSeries>, u32) {
        assert_eq!(
            new_base.len(),
            self.nvars(),
            "recenter: base dimension mismatch"
        );
        let shift: Vec<GaussRat> = new_base
            .iter()
            .zip(&self.base)
            .map(|(n, b)| n - b)
            .collect();
        let mut retained = self.order;
        let comps = self
            .comps
            .iter()
            .map(|c| {
                let (s, r) = c.recenter(&shift);
                retained = retained.min(r);
                s
            })
            .collect();
        (comps, retained)
    }

    /// Germ composition `outer ∘ inner`. The inner germ's value must
    /// equal the outer base exactly; the output is based at
    /// `inner.base` with order `min(outer.order, inner.order)`.
    pub fn compose(outer: &MapGerm, inner: &MapGerm) -> Result<MapGerm> {
        if inner.ncomps() != outer.nvars() {
            return Err(Error::ComponentMismatch {
                expected: outer.nvars(),
                got: inner.ncomps(),
            });
        }
        let inner_value = inner.value();
        if inner_value != outer.base {
            return Err(Error::BaseMismatch {
                expected: gauss::fmt_point(&outer.base),
                got: gauss::fmt_point(&inner_value),
            });
        }
        let args = inner.displacement_components();
        let comps = outer
            .comps
            .iter()
            .map(|c| c.substitute(&args))
            .collect();
        Ok(MapGerm::new(inner.base.clone(), comps))
    }

    /// Formal implicit function theorem. `f` reads as `F(u, v)` with
    /// `u` the first `p` variables and `v` the remaining `q = ncomps`;
    /// all constant terms must vanish and `dF/dv(0)` must be
    /// invertible. Returns `h` with `h(0) = 0` and `F(u, h(u)) = 0`
    /// exactly through order `f.order()`, based at `f.base[..p]`.
    pub fn implicit_solve(f: &MapGerm, p: usize) -> Result<MapGerm> {
        let q = f.ncomps();
        if f.nvars() != p + q {
            return Err(Error::VariableMismatch {
                expected: p + q,
                got: f.nvars(),
            });
        }
        for (j, c) in f.comps.iter().enumerate() {
            let c0 = c.constant_term();
            if !c0.is_zero() {
                return Err(Error::NonzeroConstantTerm {
                    component: j,
                    value: gauss::fmt_gauss(&c0),
                });
            }
        }
        let b = Matrix::from_rows(
            f.comps
                .iter()
                .map(|c| (0..q).map(|k| c.linear_coeff(p + k)).collect())
                .collect(),
        );
        let b_inv = b.inverse().ok_or(Error::SingularLinearPart)?;
        let order = f.order;
        let mut h: Vec<TruncatedSeries> = vec![TruncatedSeries::zero(p, order); q];
        for m in 1..=order {
            // The degree-m residual only depends on the m-jets: truncate
            // everything to m so early iterations stay cheap.
            let mut args: Vec<TruncatedSeries> = (0..p)
                .map(|i| TruncatedSeries::variable(p, m, i))
                .collect();
            args.extend(h.iter().map(|c| c.truncated(m)));
            // residual of the current partial solution, grouped by
            // degree-m monomial across components
            let mut rows: BTreeMap<Multidegree, Vec<GaussRat>> = BTreeMap::new();
            for (j, c) in f.comps.iter().enumerate() {
                for (md, coeff) in c.truncated(m).substitute(&args).homogeneous_part(m) {
                    rows.entry(md).or_insert_with(|| vec![gauss::zero(); q])[j] = coeff;
                }
            }
            for (md, r) in rows {
                let neg: Vec<GaussRat> = r.iter().map(|c| -c.clone()).collect();
                let delta = b_inv.mul_vec(&neg);
                for (k, d) in delta.into_iter().enumerate() {
                    h[k].add_term(md.clone(), d);
                }
            }
        }
        let solution = MapGerm {
            base: f.base[..p].to_vec(),
            comps: h,
            order,
        };
        // contract check: residual vanishes identically to the order
        let mut args: Vec<TruncatedSeries> = (0..p)
            .map(|i| {
                if order >= 1 {
                    TruncatedSeries::variable(p, order, i)
                } else {
                    TruncatedSeries::zero(p, order)
                }
            })
            .collect();
        args.extend(solution.comps.iter().cloned());
        for (j, c) in f.comps.iter().enumerate() {
            let resid = c.substitute(&args);
            assert!(
                resid.is_zero(),
                "implicit_solve: residual of component {j} is nonzero: {}",
                resid.to_text(&crate::series::default_names(p))
            );
        }
        Ok(solution)
    }

    /// Compositional inverse of a square germ with invertible linear
    /// part: returns `h` based at `self.value()` with `h(value) = base`
    /// and `self ∘ h = h ∘ self = id` to the stored order.
    pub fn comp_inverse(&self) -> Result<MapGerm> {
        let n = self.nvars();
        assert_eq!(
            self.ncomps(),
            n,
            "comp_inverse: germ must be square (got {} components in {} variables)",
            self.ncomps(),
            n
        );
        // F(u, v) := g(v)_displacement - u, solved for v(u)
        let value = self.value();
        let mut fbase = value.clone();
        fbase.extend(self.base.iter().cloned());
        let comps: Vec<TruncatedSeries> = self
            .displacement_components()
            .iter()
            .enumerate()
            .map(|(j, c)| {
                let lifted = c.embed(2 * n, &(n..2 * n).collect::<Vec<_>>());
                let u_j = if self.order >= 1 {
                    TruncatedSeries::variable(2 * n, self.order, j)
                } else {
                    TruncatedSeries::zero(2 * n, self.order)
                };
                lifted.sub(&u_j)
            })
            .collect();
        let f = MapGerm {
            base: fbase,
            comps,
            order: self.order,
        };
        let h_disp = MapGerm::implicit_solve(&f, n)?;
        let comps = h_disp
            .comps
            .iter()
            .enumerate()
            .map(|(j, c)| c.add(&TruncatedSeries::constant(n, self.order, self.base[j].clone())))
            .collect();
        Ok(MapGerm {
            base: value,
            comps,
            order: self.order,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::{from_int, one, zero, GaussRat};
    use crate::series::{default_names, Multidegree};

    fn var(n: usize, o: u32, i: usize) -> TruncatedSeries {
        TruncatedSeries::variable(n, o, i)
    }

    /// Germ at the origin from displacement components.
    fn origin_germ(n: usize, comps: Vec<TruncatedSeries>) -> MapGerm {
        MapGerm::new(vec![zero(); n], comps)
    }

    #[test]
    fn linear_compose_is_matrix_product() {
        // outer (2z, 3w), inner (w, z) -> (2w, 3z)
        let order = 3;
        let outer = origin_germ(
            2,
            vec![
                var(2, order, 0).scale(&from_int(2)),
                var(2, order, 1).scale(&from_int(3)),
            ],
        );
        let inner = origin_germ(2, vec![var(2, order, 1), var(2, order, 0)]);
        let c = MapGerm::compose(&outer, &inner).unwrap();
        assert_eq!(c.component(0), &var(2, order, 1).scale(&from_int(2)));
        assert_eq!(c.component(1), &var(2, order, 0).scale(&from_int(3)));
    }

    #[test]
    fn compose_demands_exact_base_match() {
        let outer = MapGerm::identity(vec![one()], 2);
        let inner = MapGerm::identity(vec![zero()], 2); // value 0 != base 1
        let err = MapGerm::compose(&outer, &inner).unwrap_err();
        assert!(matches!(err, Error::BaseMismatch { .. }), "{err}");
    }

    #[test]
    fn comp_inverse_oracle() {
        // g(t) = t + t^2 has inverse t - t^2 + 2t^3 - 5t^4 + ...
        let g = origin_germ(1, vec![var(1, 4, 0).add(&var(1, 4, 0).mul(&var(1, 4, 0)))]);
        let h = g.comp_inverse().unwrap();
        let c: Vec<GaussRat> = (1..=4)
            .map(|k| h.component(0).coeff(&Multidegree(vec![k])))
            .collect();
        assert_eq!(c, vec![one(), from_int(-1), from_int(2), from_int(-5)]);
        // two-sided identity
        let gh = MapGerm::compose(&g, &h).unwrap();
        let hg = MapGerm::compose(&h, &g).unwrap();
        assert_eq!(gh, MapGerm::identity(vec![zero()], 4));
        assert_eq!(hg, MapGerm::identity(vec![zero()], 4));
    }

    #[test]
    fn implicit_solve_oracle() {
        // F(u, v) = v + u v - u^2  =>  v(u) = u^2 - u^3 + u^4 - ...
        let o = 4;
        let u = var(2, o, 0);
        let v = var(2, o, 1);
        let f = origin_germ(2, vec![v.add(&u.mul(&v)).sub(&u.mul(&u))]);
        let h = MapGerm::implicit_solve(&f, 1).unwrap();
        let c: Vec<GaussRat> = (1..=4)
            .map(|k| h.component(0).coeff(&Multidegree(vec![k])))
            .collect();
        assert_eq!(c, vec![zero(), one(), from_int(-1), one()]);
    }

    #[test]
    fn implicit_solve_rejects_singular_and_constant() {
        let o = 3;
        let u = var(2, o, 0);
        // no linear v term: dF/dv = 0
        let f = origin_germ(2, vec![u.mul(&u)]);
        assert!(matches!(
            MapGerm::implicit_solve(&f, 1),
            Err(Error::SingularLinearPart)
        ));
        let g = origin_germ(2, vec![TruncatedSeries::constant(2, o, one())]);
        assert!(matches!(
            MapGerm::implicit_solve(&g, 1),
            Err(Error::NonzeroConstantTerm { .. })
        ));
    }

    #[test]
    fn recenter_linear_map() {
        // f(z) = 3z at 0, recentred at 5: value 15, same linear part
        let f = origin_germ(1, vec![var(1, 6, 0).scale(&from_int(3))]);
        let g = f.recenter_exact(vec![from_int(5)]);
        assert_eq!(g.value(), vec![from_int(15)]);
        assert_eq!(g.component(0).linear_coeff(0), from_int(3));
        assert_eq!(g.order(), 6);
        // honest series recentering drops by the linear degree
        let h = f.recenter(vec![from_int(5)]);
        assert_eq!(h.order(), 5);
        assert_eq!(h.value(), vec![from_int(15)]);
    }

    #[test]
    fn conjugate_is_an_involution() {
        let f = MapGerm::new(
            vec![crate::gauss::ratio_c(1, 2, -1, 3)],
            vec![var(1, 3, 0).scale(&crate::gauss::i_unit())],
        );
        assert_eq!(f.conjugate().conjugate(), f);
        assert_eq!(f.conjugate().base()[0], crate::gauss::ratio_c(1, 2, 1, 3));
    }

    #[test]
    fn eval_poly_uses_displacement() {
        let f = MapGerm::new(
            vec![from_int(1)],
            vec![TruncatedSeries::constant(1, 2, from_int(10))
                .add(&var(1, 2, 0))
                .add(&var(1, 2, 0).mul(&var(1, 2, 0)))],
        );
        // f(x) = 10 + (x-1) + (x-1)^2 at x = 3: 10 + 2 + 4 = 16
        assert_eq!(f.eval_poly(&[from_int(3)]), vec![from_int(16)]);
    }

    #[test]
    fn serialization_of_components_is_canonical() {
        let f = origin_germ(2, vec![var(2, 2, 0).mul(&var(2, 2, 1))]);
        let names = default_names(2);
        assert_eq!(f.component(0).to_text(&names), "1 * z1*z2");
    }
}
