//! CR manifolds given by real polynomial defining equations, and the
//! pointwise diagnostics attached to them.
//!
//! A manifold is `M = {z : rho_1(z, conj z) = … = rho_d(z, conj z) = 0}`
//! near a rational base point. Each `rho_j` is stored as a polynomial in
//! `2n` variables `(z_1…z_n, chi_1…chi_n)`, where `chi` is the
//! *conjugate placeholder*: reading `chi = conj z` gives the real
//! defining function; reading `(z, chi)` as independent gives the
//! complexification. Reality of `rho_j` is exactly the coefficient
//! symmetry `coeff(z^a chi^b) = conj(coeff(z^b chi^a))`, which
//! [`ManifoldSpec::validate`] checks term by term.
//!
//! Diagnostics computed here:
//!
//! * Levi form data at the base point (exact Hermitian matrices on the
//!   complex tangent space) and the nondegenerate/surjective tests;
//! * the nondegeneracy order: the least `k` such that the map
//!   `w -> (k-jet at x of the Segre variety Q_w)`, restricted to
//!   `w ∈ Q_x`, is an immersion at `x` — computed from exact Segre
//!   graph jets, reported `None` (status: unknown) past `k_max`;
//! * a minimality certificate: the least chain length `s` at which the
//!   sampled Segre-set parametrization attains full rank `n`;
//! * admissibility of a map germ (`f(M) ⊂ M'` to a stated order plus
//!   equality of complex-tangent images).

use crate::error::{Error, Result};
use crate::gauss::{self, GaussRat};
use crate::germ::MapGerm;
use crate::linalg::{same_span, Matrix};
use crate::segre;
use crate::series::{multidegrees_up_to, Multidegree, TruncatedSeries};
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq)]
pub struct ManifoldSpec {
    n: usize,
    d: usize,
    base: Vec<GaussRat>,
    rho: Vec<TruncatedSeries>,
}

/// Structural facts established by [`ManifoldSpec::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validation {
    pub cr_dim: usize,
    pub cr_codim: usize,
    pub is_generic: bool,
    /// Rank of the holomorphic differentials at the base point.
    pub holo_rank: usize,
}

impl ManifoldSpec {
    /// `rho` are polynomials in `2n` variables (`z`-block then
    /// `chi`-block), expanded at the origin, complete to their declared
    /// order.
    pub fn new(n: usize, base: Vec<GaussRat>, rho: Vec<TruncatedSeries>) -> Self {
        assert!(n >= 1, "ambient dimension must be positive");
        let d = rho.len();
        assert!(d >= 1, "at least one defining equation is required");
        assert!(d <= n, "codimension {d} exceeds ambient dimension {n}");
        assert_eq!(base.len(), n, "base point dimension mismatch");
        for (j, r) in rho.iter().enumerate() {
            assert_eq!(
                r.nvars(),
                2 * n,
                "rho{} must live in 2n = {} variables",
                j + 1,
                2 * n
            );
            assert!(
                r.order() >= r.max_degree(),
                "rho{} declares order {} below its degree {}",
                j + 1,
                r.order(),
                r.max_degree()
            );
        }
        ManifoldSpec { n, d, base, rho }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn cr_dim(&self) -> usize {
        self.n - self.d
    }

    pub fn base(&self) -> &[GaussRat] {
        &self.base
    }

    pub fn rho(&self) -> &[TruncatedSeries] {
        &self.rho
    }

    /// Total degree of the defining system.
    pub fn degree(&self) -> u32 {
        self.rho.iter().map(TruncatedSeries::max_degree).max().unwrap_or(0)
    }

    /// Largest total degree in the conjugate block across all defining
    /// polynomials (decides whether exact affine solves apply).
    pub fn chi_degree(&self) -> u32 {
        self.rho
            .iter()
            .flat_map(|r| r.terms())
            .map(|(md, _)| md.0[self.n..].iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn conj_base(&self) -> Vec<GaussRat> {
        self.base.iter().map(gauss::conj).collect()
    }

    /// Exact membership of a complexified pair: all `rho_j(z, chi) = 0`.
    pub fn membership(&self, z: &[GaussRat], chi: &[GaussRat]) -> bool {
        self.membership_err(z, chi).is_ok()
    }

    pub fn membership_err(&self, z: &[GaussRat], chi: &[GaussRat]) -> Result<()> {
        assert_eq!(z.len(), self.n);
        assert_eq!(chi.len(), self.n);
        let mut point = z.to_vec();
        point.extend(chi.iter().cloned());
        for (j, r) in self.rho.iter().enumerate() {
            let v = r.eval(&point);
            if !v.is_zero() {
                return Err(Error::NotOnComplexification {
                    index: j + 1,
                    value: gauss::fmt_gauss(&v),
                });
            }
        }
        Ok(())
    }

    /// Defining polynomials recentred (exactly) at a complexified pair.
    pub fn rho_at(&self, z: &[GaussRat], chi: &[GaussRat]) -> Vec<TruncatedSeries> {
        let mut shift = z.to_vec();
        shift.extend(chi.iter().cloned());
        self.rho
            .iter()
            .map(|r| r.recenter(&shift).0) // polynomial content: shift is exact
            .collect()
    }

    /// The matrix of holomorphic differentials `[d rho_j / d z_i]` at a
    /// complexified pair.
    pub fn holo_jacobian_at(&self, z: &[GaussRat], chi: &[GaussRat]) -> Matrix {
        let shifted = self.rho_at(z, chi);
        Matrix::from_rows(
            shifted
                .iter()
                .map(|r| (0..self.n).map(|i| r.linear_coeff(i)).collect())
                .collect(),
        )
    }

    fn fmt_monomial(&self, md: &Multidegree) -> String {
        let names: Vec<String> = (1..=self.n)
            .map(|i| format!("z{i}"))
            .chain((1..=self.n).map(|i| format!("~z{i}")))
            .collect();
        let one = TruncatedSeries::from_terms(
            2 * self.n,
            md.total(),
            [(md.clone(), gauss::one())],
        );
        one.to_text(&names)
            .trim_start_matches("1 * ")
            .to_string()
    }

    /// Reality symmetry, base membership, genericity. The first two are
    /// errors; rank deficiency is reported in the result, not fatal.
    pub fn validate(&self) -> Result<Validation> {
        for (j, r) in self.rho.iter().enumerate() {
            for (md, c) in r.terms() {
                let (za, xb) = md.split_at(self.n);
                let mut swapped = xb.0.clone();
                swapped.extend(za.0.iter().copied());
                let partner = r.coeff(&Multidegree(swapped));
                if partner != gauss::conj(c) {
                    return Err(Error::RealityViolation {
                        index: j + 1,
                        monomial: self.fmt_monomial(md),
                        found: gauss::fmt_gauss(c),
                        partner: gauss::fmt_gauss(&partner),
                    });
                }
            }
        }
        let conj_base = self.conj_base();
        if let Err(Error::NotOnComplexification { index, value }) =
            self.membership_err(&self.base, &conj_base)
        {
            return Err(Error::BaseNotOnManifold { index, value });
        }
        let rank = self.holo_jacobian_at(&self.base, &conj_base).rank();
        Ok(Validation {
            cr_dim: self.n - self.d,
            cr_codim: self.d,
            is_generic: rank == self.d,
            holo_rank: rank,
        })
    }

    /// The conjugated manifold `{conj z : z ∈ M}`: defining polynomials
    /// with the `z`/`chi` blocks swapped (on a real defining system this
    /// changes each `rho_j` by at most the reality symmetry), base point
    /// conjugated.
    pub fn conjugate_spec(&self) -> ManifoldSpec {
        let n = self.n;
        let var_map: Vec<usize> = (0..2 * n)
            .map(|i| if i < n { n + i } else { i - n })
            .collect();
        let rho = self.rho.iter().map(|r| r.embed(2 * n, &var_map)).collect();
        ManifoldSpec::new(n, self.conj_base(), rho)
    }
}

// ---------------------------------------------------------------------
// Levi form.

/// Exact Levi data at the base point: a basis of the complex tangent
/// space and the `d` contracted Hermitian forms on it.
#[derive(Clone, Debug, PartialEq)]
pub struct LeviData {
    pub tangent_basis: Vec<Vec<GaussRat>>,
    pub forms: Vec<Matrix>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LeviVerdict {
    pub nondegenerate: bool,
    pub surjective: bool,
}

/// The vector-valued Levi form at the base point, contracted to the
/// complex tangent space: `forms[j][k][l] = v_k^T H_j conj(v_l)` with
/// `H_j` the mixed Hessian `[d^2 rho_j / d z_a d chi_b]` at the base.
pub fn levi_form(spec: &ManifoldSpec) -> Result<LeviData> {
    let v = spec.validate()?;
    if !v.is_generic {
        return Err(Error::NotGeneric {
            rank: v.holo_rank,
            codim: spec.d(),
        });
    }
    let n = spec.n();
    let conj_base = spec.conj_base();
    let shifted = spec.rho_at(spec.base(), &conj_base);
    let a = Matrix::from_rows(
        shifted
            .iter()
            .map(|r| (0..n).map(|i| r.linear_coeff(i)).collect())
            .collect(),
    );
    let basis = a.kernel_basis();
    let vt = Matrix::from_rows(basis.clone()); // q x n
    let forms = shifted
        .iter()
        .map(|r| {
            let mut h = Matrix::zeros(n, n);
            for za in 0..n {
                for xb in 0..n {
                    let mut md = vec![0u32; 2 * n];
                    md[za] = 1;
                    md[n + xb] += 1;
                    h[[za, xb]] = r.coeff(&Multidegree(md));
                }
            }
            vt.mul(&h).mul(&vt.conjugate().transpose())
        })
        .collect();
    Ok(LeviData {
        tangent_basis: basis,
        forms,
    })
}

/// Nondegeneracy (trivial joint kernel) and surjectivity (the values
/// `(forms_1[k,l], …, forms_d[k,l])` span `C^d`) of the Levi form.
pub fn levi_tests(data: &LeviData) -> LeviVerdict {
    let q = data.tangent_basis.len();
    let d = data.forms.len();
    let nondegenerate = if q == 0 {
        true // vacuous on a totally real manifold
    } else {
        let mut stacked = data.forms[0].clone();
        for f in &data.forms[1..] {
            stacked = stacked.stack_vertical(f);
        }
        stacked.rank() == q
    };
    let surjective = if q == 0 {
        d == 0
    } else {
        let rows: Vec<Vec<GaussRat>> = (0..q)
            .flat_map(|k| {
                let forms = &data.forms;
                (0..q).map(move |l| forms.iter().map(|f| f[[k, l]].clone()).collect())
            })
            .collect();
        Matrix::from_rows(rows).rank() == d
    };
    LeviVerdict {
        nondegenerate,
        surjective,
    }
}

// ---------------------------------------------------------------------
// Nondegeneracy order.

/// Least `k <= k_max` such that the manifold is `k`-nondegenerate at
/// its base point: the stacked Taylor coefficients (through degree `k`)
/// of the Segre graph, as functions of the conjugate parameter
/// restricted to the conjugate Segre slice through the base, have
/// Jacobian rank `n - d`. `Ok(None)` means unknown beyond `k_max`, not
/// degenerate.
pub fn nondegeneracy_order(spec: &ManifoldSpec, k_max: u32) -> Result<Option<u32>> {
    let n = spec.n();
    let d = spec.d();
    let q = n - d;
    if q == 0 {
        return Ok(Some(1)); // vacuously an immersion of a point
    }
    let cx = segre::complexify(spec)?;
    let conj_base = spec.conj_base();
    let graph = cx.graph_at(spec.base(), &conj_base, k_max + 1)?;

    // Linearization of the conjugate Segre slice V = {chi :
    // rho_c(base, chi) = 0} through conj(base), parametrized by the
    // conjugated manifold's graph with its parameter block frozen.
    let ccx = segre::complexify(&spec.conjugate_spec())?;
    let cgraph = ccx.graph_at(&conj_base, spec.base(), 1)?;
    let mut jgamma = Matrix::zeros(n, q);
    for (k, &i) in cgraph.free.iter().enumerate() {
        jgamma[[i, k]] = gauss::one();
    }
    for (m, &i) in cgraph.solved.iter().enumerate() {
        for k in 0..q {
            jgamma[[i, k]] = cgraph.phi.component(m).linear_coeff(k);
        }
    }

    // Rows of the jet Jacobian, grouped by |beta|; the chain rule at
    // the exact level: grad_chi(c_beta) * J_gamma.
    let betas = multidegrees_up_to(q, k_max);
    let mut rows_by_deg: Vec<Vec<Vec<GaussRat>>> = vec![Vec::new(); k_max as usize + 1];
    for beta in &betas {
        for j in 0..d {
            let c = graph.phi.component(j).block_coefficient(q, beta);
            let grad: Vec<GaussRat> = (0..n).map(|a| c.linear_coeff(a)).collect();
            let row: Vec<GaussRat> = (0..q)
                .map(|k| {
                    let mut acc = gauss::zero();
                    for a in 0..n {
                        acc = &acc + &(&grad[a] * &jgamma[[a, k]]);
                    }
                    acc
                })
                .collect();
            rows_by_deg[beta.total() as usize].push(row);
        }
    }
    let mut rows: Vec<Vec<GaussRat>> = rows_by_deg[0].clone();
    for k in 1..=k_max {
        rows.extend(rows_by_deg[k as usize].iter().cloned());
        if Matrix::from_rows(rows.clone()).rank() == q {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------
// Minimality.

/// Least chain length `s <= s_max` whose sampled Segre-set
/// parametrization attains rank `n` (a minimality certificate).
/// `Ok(None)` means no certificate found, never "not minimal".
pub fn minimality_order(
    spec: &ManifoldSpec,
    s_max: u32,
    retries: u32,
    seed: u64,
) -> Result<Option<u32>> {
    let cx = segre::complexify(spec)?;
    for s in 1..=s_max {
        for attempt in 0..retries.max(1) {
            let child = gauss::derive_seed(seed, &[0x6d69, s as u64, attempt as u64]);
            match segre::segre_set_rank(&cx, spec.base(), s as usize, child, 2) {
                Ok(rank) if rank == spec.n() => return Ok(Some(s)),
                _ => {}
            }
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------
// Admissibility.

/// Is `f` an admissible germ `(M, x) -> M'`? Checks, to the stated
/// order: (a) the complexified residual `rho'_j(f(z), conj-f(chi))`
/// vanishes along the Segre graph of `M` at the base pair, and (b) the
/// image of the complex tangent space under `df` *equals* the target's
/// complex tangent space at `f(x)`. Preconditions (errors): `f` based
/// at `M`'s base point, `f(x)` on `M'`, and `f.order() >= order`.
pub fn check_admissible(
    f: &MapGerm,
    m: &ManifoldSpec,
    mp: &ManifoldSpec,
    order: u32,
) -> Result<bool> {
    if f.nvars() != m.n() {
        return Err(Error::VariableMismatch {
            expected: m.n(),
            got: f.nvars(),
        });
    }
    if f.ncomps() != mp.n() {
        return Err(Error::ComponentMismatch {
            expected: mp.n(),
            got: f.ncomps(),
        });
    }
    if f.base() != m.base() {
        return Err(Error::BaseMismatch {
            expected: gauss::fmt_point(m.base()),
            got: gauss::fmt_point(f.base()),
        });
    }
    if f.order() < order {
        return Err(Error::InsufficientOrder {
            needed: order,
            got: f.order(),
        });
    }
    let fv = f.value();
    let fv_conj: Vec<GaussRat> = fv.iter().map(gauss::conj).collect();
    if let Err(e) = mp.membership_err(&fv, &fv_conj) {
        return Err(Error::NotAdmissible {
            reason: format!("f(x) is not on the target manifold: {e}"),
        });
    }

    // (a) residual along the source graph
    let cx = segre::complexify(m)?;
    let conj_base = m.conj_base();
    let graph = cx.graph_at(m.base(), &conj_base, order)?;
    let f_t = f.truncated(order);
    let f1 = MapGerm::compose(&f_t, &graph.embedding())?;
    let f2 = MapGerm::compose(&f_t.conjugate(), &graph.chi_embedding())?;
    let stacked = f1.stack(&f2);
    let mut target_center = fv.clone();
    target_center.extend(fv_conj.iter().cloned());
    for r in mp.rho() {
        let (shifted, _) = r.raised(r.order().max(order)).recenter(&target_center);
        let rho_germ = MapGerm::new(target_center.clone(), vec![shifted]);
        let resid = MapGerm::compose(&rho_germ, &stacked)?;
        if !resid.component(0).is_zero() {
            return Ok(false);
        }
    }

    // (b) equality of complex-tangent images
    let tc = m.holo_jacobian_at(m.base(), &conj_base).kernel_basis();
    let tcp = mp.holo_jacobian_at(&fv, &fv_conj).kernel_basis();
    let df = f.jacobian();
    let images: Vec<Vec<GaussRat>> = tc.iter().map(|v| df.mul_vec(v)).collect();
    Ok(same_span(&images, &tcp))
}

/// Does the manifold contain the affine complex line
/// `t -> point + t*dir`? Exact: substitutes the complexified line into
/// every defining polynomial and demands the zero polynomial in the
/// two line parameters.
pub fn contains_affine_line(spec: &ManifoldSpec, point: &[GaussRat], dir: &[GaussRat]) -> bool {
    let n = spec.n();
    assert_eq!(point.len(), n);
    assert_eq!(dir.len(), n);
    let order = spec.degree().max(1);
    let mut comps = Vec::with_capacity(2 * n);
    for a in 0..n {
        comps.push(
            TruncatedSeries::constant(2, order, point[a].clone())
                .add(&TruncatedSeries::variable(2, order, 0).scale(&dir[a])),
        );
    }
    for a in 0..n {
        comps.push(
            TruncatedSeries::constant(2, order, gauss::conj(&point[a]))
                .add(&TruncatedSeries::variable(2, order, 1).scale(&gauss::conj(&dir[a]))),
        );
    }
    let line = MapGerm::new(vec![gauss::zero(); 2], comps);
    let mut center = point.to_vec();
    center.extend(point.iter().map(gauss::conj));
    for r in spec.rho() {
        let (shifted, _) = r.raised(r.order().max(order)).recenter(&center);
        let rho_germ = MapGerm::new(center.clone(), vec![shifted]);
        match MapGerm::compose(&rho_germ, &line) {
            Ok(resid) => {
                if !resid.component(0).is_zero() {
                    return false;
                }
            }
            Err(_) => return false,
        }
    }
    true
}

// ---------------------------------------------------------------------
// Assembled analysis.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Analysis {
    pub cr_dim: usize,
    pub cr_codim: usize,
    pub is_generic: bool,
    pub levi_nondegenerate: Option<bool>,
    pub levi_surjective: Option<bool>,
    pub nondeg_order: Option<u32>,
    pub k_max: u32,
    pub minimal_s: Option<u32>,
    pub s_max: u32,
    pub determinacy_order: Option<u32>,
}

/// Run the full diagnostic battery. On a non-generic spec only the
/// dimension fields are populated. Cross-checks the Levi verdict
/// against the nondegeneracy order (they must agree on `k = 1`).
pub fn analyze(
    spec: &ManifoldSpec,
    k_max: u32,
    s_max: u32,
    retries: u32,
    seed: u64,
) -> Result<Analysis> {
    let v = spec.validate()?;
    if !v.is_generic {
        return Ok(Analysis {
            cr_dim: v.cr_dim,
            cr_codim: v.cr_codim,
            is_generic: false,
            levi_nondegenerate: None,
            levi_surjective: None,
            nondeg_order: None,
            k_max,
            minimal_s: None,
            s_max,
            determinacy_order: None,
        });
    }
    let verdict = levi_tests(&levi_form(spec)?);
    let nondeg = nondegeneracy_order(spec, k_max)?;
    assert_eq!(
        verdict.nondegenerate,
        nondeg == Some(1),
        "Levi nondegeneracy and 1-nondegeneracy must agree"
    );
    let minimal = minimality_order(spec, s_max, retries, seed)?;
    // The determinacy bound 2 r (1 + d) is only a theorem for manifolds
    // that are both finitely nondegenerate and minimal; without a
    // minimality certificate no order is reported.
    let determinacy = match (nondeg, minimal) {
        (Some(r), Some(_)) => Some(2 * r * (1 + spec.d() as u32)),
        _ => None,
    };
    Ok(Analysis {
        cr_dim: v.cr_dim,
        cr_codim: v.cr_codim,
        is_generic: true,
        levi_nondegenerate: Some(verdict.nondegenerate),
        levi_surjective: Some(verdict.surjective),
        nondeg_order: nondeg,
        k_max,
        minimal_s: minimal,
        s_max,
        determinacy_order: determinacy,
    })
}
