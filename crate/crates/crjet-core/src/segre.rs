//! Segre varieties as exact graphs, jets of Segre maps, and Segre-set
//! chains.
//!
//! For a generic `M` the Segre variety attached to a conjugate
//! parameter `chi0` is `{z : rho_c(z, chi0) = 0}`. Near a point
//! `(z0, chi0)` of the complexification we represent it as a graph:
//! `d` of the `z`-coordinates are solved (by the exact formal implicit
//! function theorem) in terms of the remaining `q = n - d` free
//! coordinates *and* the conjugate block, giving a single germ that
//! simultaneously graphs every nearby Segre variety. Conventions fixed
//! here and relied on everywhere downstream:
//!
//! * graph variables are ordered `(du_1..du_q, dchi_1..dchi_n)` —
//!   free-coordinate displacements first, conjugate displacements last;
//! * `free`/`solved` are ascending index sets partitioning `0..n`; the
//!   default split takes the lexicographically first invertible minor
//!   of the holomorphic Jacobian, and [`Complexification::graph_at_with_split`]
//!   accepts any other invertible choice (the reflection pipeline must
//!   dictate the split on the target side);
//! * solved components are stored as absolute coordinates (constant
//!   terms included), so graphs compose directly with other germs.
//!
//! Chains alternate sides: an odd-numbered link places the new point in
//! the conjugate slot (`rho_c(p_{i-1}, p_i) = 0`), an even-numbered
//! link in the holomorphic slot (`rho_c(p_i, p_{i-1}) = 0`). Sampling a
//! link is an exact affine solve with random rational free coordinates,
//! which is why the defining polynomials must have degree at most one
//! in the block being solved for; anything else is reported as an
//! unsupported target, never approximated. The rank of the composed
//! order-1 chain germ over all `q·s` link parameters is the Segre-set
//! rank used for minimality certificates.

use crate::error::{Error, Result};
use crate::gauss::{self, GaussRat};
use crate::geometry::ManifoldSpec;
use crate::germ::MapGerm;
use crate::linalg::Matrix;
use crate::series::{multidegrees_up_to, Multidegree, TruncatedSeries};

/// A validated-generic manifold viewed through its complexification.
#[derive(Clone, Debug)]
pub struct Complexification {
    spec: ManifoldSpec,
}

pub fn complexify(spec: &ManifoldSpec) -> Result<Complexification> {
    Complexification::new(spec.clone())
}

impl Complexification {
    pub fn new(spec: ManifoldSpec) -> Result<Self> {
        let v = spec.validate()?;
        if !v.is_generic {
            return Err(Error::NotGeneric {
                rank: v.holo_rank,
                codim: spec.d(),
            });
        }
        Ok(Complexification { spec })
    }

    pub fn spec(&self) -> &ManifoldSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.spec.n()
    }

    pub fn d(&self) -> usize {
        self.spec.d()
    }

    pub fn q(&self) -> usize {
        self.spec.cr_dim()
    }

    /// The complexification of the conjugated manifold (blocks
    /// swapped). Validity transfers: reality symmetry and genericity of
    /// the swapped system follow from those of the original, so no
    /// revalidation is needed.
    pub fn conjugated(&self) -> Complexification {
        Complexification {
            spec: self.spec.conjugate_spec(),
        }
    }

    pub fn membership(&self, z: &[GaussRat], chi: &[GaussRat]) -> bool {
        self.spec.membership(z, chi)
    }

    pub fn membership_err(&self, z: &[GaussRat], chi: &[GaussRat]) -> Result<()> {
        self.spec.membership_err(z, chi)
    }

    /// Segre graph at a complexified pair, solved coordinates chosen as
    /// the lexicographically first invertible minor.
    pub fn graph_at(&self, z0: &[GaussRat], chi0: &[GaussRat], order: u32) -> Result<SegreGraph> {
        let a = self.spec.holo_jacobian_at(z0, chi0);
        let solved = a.lex_first_cols(self.d()).ok_or(Error::NoInvertibleMinor {
            rows: self.d(),
            cols: self.n(),
        })?;
        self.graph_at_with_split(z0, chi0, &solved, order)
    }

    /// Segre graph with a caller-dictated solved set (ascending indices
    /// into `0..n`, `d` of them, minor must be invertible).
    pub fn graph_at_with_split(
        &self,
        z0: &[GaussRat],
        chi0: &[GaussRat],
        solved: &[usize],
        order: u32,
    ) -> Result<SegreGraph> {
        let n = self.n();
        let d = self.d();
        let q = n - d;
        assert!(order >= 1, "a Segre graph needs order at least 1");
        assert_eq!(solved.len(), d, "solved set must have {d} indices");
        assert!(
            solved.windows(2).all(|w| w[0] < w[1]) && solved.iter().all(|&i| i < n),
            "solved set must be ascending indices into 0..{n}"
        );
        self.spec.membership_err(z0, chi0)?;
        let a = self.spec.holo_jacobian_at(z0, chi0);
        if a.select_cols(solved).rank() < d {
            return Err(Error::NoInvertibleMinor { rows: d, cols: d });
        }
        let free: Vec<usize> = (0..n).filter(|i| !solved.contains(i)).collect();

        // Reorder the recentred defining polynomials from (dz, dchi) to
        // (du, dchi, dv) and solve for dv.
        let mut var_map = vec![0usize; 2 * n];
        for (k, &i) in free.iter().enumerate() {
            var_map[i] = k;
        }
        for (m, &i) in solved.iter().enumerate() {
            var_map[i] = q + n + m;
        }
        for i in 0..n {
            var_map[n + i] = q + i;
        }
        let comps: Vec<TruncatedSeries> = self
            .spec
            .rho_at(z0, chi0)
            .iter()
            .map(|r| {
                let r = if r.order() >= order {
                    r.truncated(order)
                } else {
                    r.raised(order) // polynomial content: exact at any order
                };
                r.embed(2 * n, &var_map)
            })
            .collect();
        let mut f_base: Vec<GaussRat> = free.iter().map(|&i| z0[i].clone()).collect();
        f_base.extend(chi0.iter().cloned());
        f_base.extend(solved.iter().map(|&i| z0[i].clone()));
        let f = MapGerm::new(f_base, comps);
        let h = MapGerm::implicit_solve(&f, q + n)?;
        let phi_comps: Vec<TruncatedSeries> = h
            .components()
            .iter()
            .zip(solved.iter())
            .map(|(c, &i)| c.add(&TruncatedSeries::constant(q + n, order, z0[i].clone())))
            .collect();
        let phi = MapGerm::new(h.base().to_vec(), phi_comps);
        Ok(SegreGraph {
            center_z: z0.to_vec(),
            center_chi: chi0.to_vec(),
            free,
            solved: solved.to_vec(),
            phi,
        })
    }
}

/// Graph of the Segre family near a complexified pair: the `solved`
/// `z`-coordinates as exact germs `phi` of `(du, dchi)`.
#[derive(Clone, Debug)]
pub struct SegreGraph {
    pub center_z: Vec<GaussRat>,
    pub center_chi: Vec<GaussRat>,
    pub free: Vec<usize>,
    pub solved: Vec<usize>,
    /// `(q + n)` variables -> `d` absolute solved coordinates, based at
    /// `(z0[free], chi0)`.
    pub phi: MapGerm,
}

impl SegreGraph {
    pub fn n(&self) -> usize {
        self.center_z.len()
    }

    pub fn q(&self) -> usize {
        self.free.len()
    }

    pub fn order(&self) -> u32 {
        self.phi.order()
    }

    /// The full ambient point `z(du, dchi)`: free coordinates are
    /// affine, solved ones come from `phi`.
    pub fn embedding(&self) -> MapGerm {
        let n = self.n();
        let q = self.q();
        let order = self.order();
        let arity = q + n;
        let mut comps = vec![TruncatedSeries::zero(arity, order); n];
        for (k, &i) in self.free.iter().enumerate() {
            comps[i] = TruncatedSeries::constant(arity, order, self.center_z[i].clone())
                .add(&TruncatedSeries::variable(arity, order, k));
        }
        for (m, &i) in self.solved.iter().enumerate() {
            comps[i] = self.phi.component(m).clone();
        }
        MapGerm::new(self.phi.base().to_vec(), comps)
    }

    /// The conjugate-block coordinate `chi(du, dchi) = chi0 + dchi` as
    /// a germ over the same variables, for stacking with
    /// [`SegreGraph::embedding`].
    pub fn chi_embedding(&self) -> MapGerm {
        let n = self.n();
        let q = self.q();
        let order = self.order();
        let comps = (0..n)
            .map(|i| {
                TruncatedSeries::constant(q + n, order, self.center_chi[i].clone())
                    .add(&TruncatedSeries::variable(q + n, order, q + i))
            })
            .collect();
        MapGerm::new(self.phi.base().to_vec(), comps)
    }
}

// ---------------------------------------------------------------------
// Jets of Segre maps.

/// The map `chi -> (coefficients through degree r of the Segre graph
/// at parameter chi)`: the exact jet parametrization of the Segre
/// family. Components are ordered by `betas` (ascending graded-lex over
/// the `q` free coordinates), then by defining-equation index within
/// each `beta`.
#[derive(Clone, Debug)]
pub struct JetOfSegreMap {
    pub r: u32,
    pub betas: Vec<Multidegree>,
    /// `n` variables (ambient conjugate parameter, based at
    /// `center_chi`) -> `d * betas.len()` jet coordinates.
    pub map: MapGerm,
}

pub fn jet_of_segre(graph: &SegreGraph, r: u32) -> Result<JetOfSegreMap> {
    let order = graph.order();
    if order < r + 1 {
        return Err(Error::InsufficientOrder {
            needed: r + 1,
            got: order,
        });
    }
    let q = graph.q();
    let d = graph.solved.len();
    let betas = multidegrees_up_to(q, r);
    let mut comps = Vec::with_capacity(d * betas.len());
    for beta in &betas {
        for j in 0..d {
            comps.push(graph.phi.component(j).block_coefficient(q, beta));
        }
    }
    Ok(JetOfSegreMap {
        r,
        betas,
        map: MapGerm::new(graph.center_chi.clone(), comps),
    })
}

/// A left inverse of a jet-of-Segre map: `rows` picks the
/// lexicographically first set of `n` jet coordinates with invertible
/// Jacobian, `germ` is the compositional inverse of that selection, so
/// `germ ∘ (selected rows of jq) = id` to the working order.
#[derive(Clone, Debug)]
pub struct JetLeftInverse {
    pub rows: Vec<usize>,
    pub germ: MapGerm,
}

pub fn left_inverse_jetq(jq: &JetOfSegreMap) -> Result<JetLeftInverse> {
    let n = jq.map.nvars();
    let jac = jq.map.jacobian();
    let rows = jac.lex_first_rows(n).ok_or(Error::RankCondition {
        stage: "jet-of-Segre left inverse",
        got: jac.rank(),
        needed: n,
    })?;
    let sel = MapGerm::new(
        jq.map.base().to_vec(),
        rows.iter().map(|&i| jq.map.component(i).clone()).collect(),
    );
    let germ = sel.comp_inverse()?;
    Ok(JetLeftInverse { rows, germ })
}

// ---------------------------------------------------------------------
// Chains.

/// A Segre chain `p_0, p_1, …`: odd links satisfy
/// `rho_c(p_{i-1}, p_i) = 0`, even links `rho_c(p_i, p_{i-1}) = 0`.
/// Even-index points are holomorphic-side points, odd-index points are
/// conjugate parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainPoint {
    pub points: Vec<Vec<GaussRat>>,
}

impl ChainPoint {
    pub fn steps(&self) -> usize {
        self.points.len() - 1
    }

    pub fn last(&self) -> &[GaussRat] {
        self.points.last().expect("a chain has at least its origin")
    }

    /// Exact membership of every link.
    pub fn verify(&self, cx: &Complexification) -> Result<()> {
        for i in 1..self.points.len() {
            let (z, chi) = if i % 2 == 1 {
                (&self.points[i - 1], &self.points[i])
            } else {
                (&self.points[i], &self.points[i - 1])
            };
            cx.membership_err(z, chi)?;
        }
        Ok(())
    }
}

fn fmt_monomial(n: usize, names: &[String], md: &Multidegree) -> String {
    let one = TruncatedSeries::from_terms(n, md.total(), [(md.clone(), gauss::one())]);
    one.to_text(names).trim_start_matches("1 * ").to_string()
}

/// The affine system cutting out the next chain point: assign `prev`
/// to one block of each defining polynomial and demand the remainder
/// be affine in the other block. Returns `(A, b)` with solutions
/// `A w = b`.
fn reduced_system(
    spec: &ManifoldSpec,
    prev: &[GaussRat],
    prev_is_z: bool,
) -> Result<(Matrix, Vec<GaussRat>)> {
    let n = spec.n();
    assert_eq!(prev.len(), n);
    let assignments: Vec<(usize, GaussRat)> = (0..n)
        .map(|a| (if prev_is_z { a } else { n + a }, prev[a].clone()))
        .collect();
    let keep: Vec<usize> = if prev_is_z {
        (n..2 * n).collect()
    } else {
        (0..n).collect()
    };
    let names: Vec<String> = if prev_is_z {
        (1..=n).map(|i| format!("~z{i}")).collect()
    } else {
        (1..=n).map(|i| format!("z{i}")).collect()
    };
    let mut rows = Vec::with_capacity(spec.d());
    let mut b = Vec::with_capacity(spec.d());
    for (j, r) in spec.rho().iter().enumerate() {
        let reduced = r.eval_vars(&assignments).restrict_vars(&keep);
        for (md, _) in reduced.terms() {
            if md.total() > 1 {
                return Err(Error::UnsupportedTarget {
                    index: j + 1,
                    degree: md.total(),
                    monomial: fmt_monomial(n, &names, md),
                });
            }
        }
        rows.push((0..n).map(|a| reduced.linear_coeff(a)).collect());
        b.push(-reduced.constant_term());
    }
    Ok((Matrix::from_rows(rows), b))
}

fn next_point(
    cx: &Complexification,
    prev: &[GaussRat],
    prev_is_z: bool,
    rng: &mut rand_chacha::ChaCha8Rng,
    bound: i64,
) -> Result<Vec<GaussRat>> {
    let (a, b) = reduced_system(cx.spec(), prev, prev_is_z)?;
    a.solve_with_free(&b, |_| Some(gauss::sample_gauss(rng, bound)))
        .ok_or(Error::LinearSystem {
            what: "chain link",
            status: "inconsistent",
        })
}

/// Sample an `s`-link chain from `x` (a real point of the manifold)
/// with seeded random free coordinates; every link is verified exactly
/// before returning. Retries rescale the sampling bound.
pub fn chain_sample(
    cx: &Complexification,
    x: &[GaussRat],
    s: usize,
    seed: u64,
    retries: u32,
) -> Result<ChainPoint> {
    let conj_x: Vec<GaussRat> = x.iter().map(gauss::conj).collect();
    cx.membership_err(x, &conj_x)?;
    let attempts = retries.max(1);
    let mut last = String::from("no attempt made");
    for attempt in 0..attempts {
        let mut rng = gauss::rng_for(seed, &[0x6368_6169_6e00, attempt as u64]);
        let bound = 2 + attempt as i64;
        let mut pts = vec![x.to_vec()];
        let mut failed = None;
        for link in 1..=s {
            match next_point(cx, pts.last().unwrap(), link % 2 == 1, &mut rng, bound) {
                Ok(w) => pts.push(w),
                Err(e @ Error::UnsupportedTarget { .. }) => return Err(e),
                Err(e) => {
                    failed = Some(e);
                    break;
                }
            }
        }
        match failed {
            None => {
                let chain = ChainPoint { points: pts };
                chain.verify(cx)?;
                return Ok(chain);
            }
            Some(e) => last = e.to_string(),
        }
    }
    Err(Error::RetriesExhausted {
        attempts,
        stage: "chain sampling",
        seed,
        last,
    })
}

/// Sample a chain of even length `steps` from `x` (a real point of the
/// manifold) that *ends at* `target`: the middle links are sampled, the
/// final conjugate parameter is solved from the stacked affine
/// conditions of the last two links. The target is any point admissible
/// as a terminal holomorphic-side point — it need not be real, which is
/// what lets chains reach the full Segre sets rather than only `M`.
pub fn chain_to_target(
    cx: &Complexification,
    x: &[GaussRat],
    steps: usize,
    target: &[GaussRat],
    seed: u64,
    retries: u32,
) -> Result<ChainPoint> {
    assert!(steps % 2 == 0, "a point-to-point chain has even length");
    let conj_x: Vec<GaussRat> = x.iter().map(gauss::conj).collect();
    cx.membership_err(x, &conj_x)?;
    if steps == 0 {
        if x == target {
            return Ok(ChainPoint {
                points: vec![x.to_vec()],
            });
        }
        return Err(Error::LinearSystem {
            what: "zero-length chain to a distinct target",
            status: "inconsistent",
        });
    }
    let attempts = retries.max(1);
    let mut last = String::from("no attempt made");
    for attempt in 0..attempts {
        let mut rng = gauss::rng_for(seed, &[0x7461_7267_6574, attempt as u64]);
        let bound = 2 + attempt as i64;
        let mut pts = vec![x.to_vec()];
        let mut failed = None;
        for link in 1..=steps - 2 {
            match next_point(cx, pts.last().unwrap(), link % 2 == 1, &mut rng, bound) {
                Ok(w) => pts.push(w),
                Err(e @ Error::UnsupportedTarget { .. }) => return Err(e),
                Err(e) => {
                    failed = Some(e);
                    break;
                }
            }
        }
        if failed.is_none() {
            // p_{steps-1} must lie on both conjugate slices: through
            // p_{steps-2} and through the target.
            let solve = (|| -> Result<Vec<GaussRat>> {
                let (a1, b1) = reduced_system(cx.spec(), pts.last().unwrap(), true)?;
                let (a2, b2) = reduced_system(cx.spec(), target, true)?;
                let a = a1.stack_vertical(&a2);
                let mut b = b1;
                b.extend(b2);
                a.solve_with_free(&b, |_| Some(gauss::sample_gauss(&mut rng, bound)))
                    .ok_or(Error::LinearSystem {
                        what: "chain closing link",
                        status: "inconsistent",
                    })
            })();
            match solve {
                Ok(w) => {
                    pts.push(w);
                    pts.push(target.to_vec());
                    let chain = ChainPoint { points: pts };
                    chain.verify(cx)?;
                    return Ok(chain);
                }
                Err(e @ Error::UnsupportedTarget { .. }) => return Err(e),
                Err(e) => failed = Some(e),
            }
        }
        last = failed.expect("attempt failed").to_string();
    }
    Err(Error::RetriesExhausted {
        attempts,
        stage: "chain closing",
        seed,
        last,
    })
}

/// Rank at the sampled chain of the composed Segre-set parametrization:
/// each link contributes `q` fresh parameters through the order-1 graph
/// of its Segre variety (conjugated complexification for odd links),
/// composed into a single germ over all `q·s` parameters.
pub fn rank_of_chain(cx: &Complexification, chain: &ChainPoint) -> Result<usize> {
    let q = cx.q();
    let n = cx.n();
    let s = chain.steps();
    let nparams = q * s;
    if nparams == 0 {
        return Ok(0);
    }
    let ccx = cx.conjugated();
    let mut current = MapGerm::new(
        vec![gauss::zero(); nparams],
        chain.points[0]
            .iter()
            .map(|c| TruncatedSeries::constant(nparams, 1, c.clone()))
            .collect(),
    );
    for i in 1..=s {
        let graph = if i % 2 == 1 {
            ccx.graph_at(&chain.points[i], &chain.points[i - 1], 1)?
        } else {
            cx.graph_at(&chain.points[i], &chain.points[i - 1], 1)?
        };
        let mut inner_comps = Vec::with_capacity(q + n);
        for (k, &fi) in graph.free.iter().enumerate() {
            inner_comps.push(
                TruncatedSeries::constant(nparams, 1, chain.points[i][fi].clone()).add(
                    &TruncatedSeries::variable(nparams, 1, q * (i - 1) + k),
                ),
            );
        }
        inner_comps.extend(current.components().iter().cloned());
        let inner = MapGerm::new(vec![gauss::zero(); nparams], inner_comps);
        current = MapGerm::compose(&graph.embedding(), &inner)?;
    }
    Ok(current.jacobian().rank())
}

/// Sample a chain of length `s` from `x` and return the Segre-set rank
/// along it. Rank `n` certifies minimality with `s` links.
pub fn segre_set_rank(
    cx: &Complexification,
    x: &[GaussRat],
    s: usize,
    seed: u64,
    retries: u32,
) -> Result<usize> {
    let chain = chain_sample(cx, x, s, seed, retries)?;
    rank_of_chain(cx, &chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::{from_int, i_unit, ratio, ratio_c};

    /// Im w = |z|^2 in C^2: rho = (-i/2) w + (i/2) ~w - z ~z.
    fn heisenberg() -> ManifoldSpec {
        let mut rho = TruncatedSeries::zero(4, 2);
        rho.add_term(Multidegree(vec![0, 1, 0, 0]), ratio_c(0, 1, -1, 2));
        rho.add_term(Multidegree(vec![0, 0, 0, 1]), ratio_c(0, 1, 1, 2));
        rho.add_term(Multidegree(vec![1, 0, 1, 0]), from_int(-1));
        ManifoldSpec::new(2, vec![gauss::zero(); 2], vec![rho])
    }

    #[test]
    fn heisenberg_graph_is_the_classical_one() {
        let cx = complexify(&heisenberg()).unwrap();
        let g = cx
            .graph_at(&[gauss::zero(), gauss::zero()], &[gauss::zero(), gauss::zero()], 3)
            .unwrap();
        assert_eq!(g.free, vec![0]);
        assert_eq!(g.solved, vec![1]);
        // w = ~w + 2i z ~z over variables (du, dchi1, dchi2)
        let mut expect = TruncatedSeries::zero(3, 3);
        expect.add_term(Multidegree(vec![0, 0, 1]), gauss::one());
        expect.add_term(Multidegree(vec![1, 1, 0]), &from_int(2) * &i_unit());
        assert_eq!(g.phi.component(0), &expect);
    }

    #[test]
    fn graph_points_lie_on_the_complexification() {
        let cx = complexify(&heisenberg()).unwrap();
        // z = 1, w = 3 + i: Im w = 1 = |z|^2. The default split at this
        // center solves z1 (a non-polynomial graph), so dictate the
        // polynomial one: solve w.
        let z0 = vec![gauss::one(), &from_int(3) + &i_unit()];
        let chi0: Vec<GaussRat> = z0.iter().map(gauss::conj).collect();
        let g = cx.graph_at_with_split(&z0, &chi0, &[1], 3).unwrap();
        let emb = g.embedding();
        // exact sample displacements, passed to eval_poly as absolutes
        let disp = [ratio(1, 3), ratio(-2, 5), ratio(1, 7)];
        let point: Vec<GaussRat> = emb
            .base()
            .iter()
            .zip(disp.iter())
            .map(|(b, d)| b + d)
            .collect();
        let z = emb.eval_poly(&point);
        let chi: Vec<GaussRat> = chi0
            .iter()
            .zip(disp[1..].iter())
            .map(|(c, d)| c + d)
            .collect();
        cx.membership_err(&z, &chi).unwrap();
    }

    #[test]
    fn dictated_split_rejects_singular_minor() {
        // |z1|^2 + |z2|^2 - |z3|^2 = 1 at (1, 0, 0)
        let mut rho = TruncatedSeries::zero(6, 2);
        rho.add_term(Multidegree(vec![1, 0, 0, 1, 0, 0]), gauss::one());
        rho.add_term(Multidegree(vec![0, 1, 0, 0, 1, 0]), gauss::one());
        rho.add_term(Multidegree(vec![0, 0, 1, 0, 0, 1]), from_int(-1));
        rho.add_term(Multidegree::zero(6), from_int(-1));
        let spec = ManifoldSpec::new(
            3,
            vec![gauss::one(), gauss::zero(), gauss::zero()],
            vec![rho],
        );
        let cx = complexify(&spec).unwrap();
        let base = spec.base().to_vec();
        let conj_base = spec.conj_base();
        let g = cx.graph_at(&base, &conj_base, 2).unwrap();
        assert_eq!(g.solved, vec![0]);
        let err = cx
            .graph_at_with_split(&base, &conj_base, &[1], 2)
            .unwrap_err();
        assert!(matches!(err, Error::NoInvertibleMinor { .. }));
    }

    #[test]
    fn jet_left_inverse_recovers_the_parameter() {
        let cx = complexify(&heisenberg()).unwrap();
        let origin = vec![gauss::zero(), gauss::zero()];
        let g = cx.graph_at(&origin, &origin, 4).unwrap();
        let jq = jet_of_segre(&g, 1).unwrap();
        assert_eq!(jq.betas.len(), 2);
        assert_eq!(jq.map.ncomps(), 2);
        let li = left_inverse_jetq(&jq).unwrap();
        assert_eq!(li.rows, vec![0, 1]);
        let sel = MapGerm::new(
            jq.map.base().to_vec(),
            li.rows.iter().map(|&i| jq.map.component(i).clone()).collect(),
        );
        let round = MapGerm::compose(&li.germ, &sel).unwrap();
        let id = MapGerm::identity(origin.clone(), round.order());
        assert_eq!(round, id);
    }

    #[test]
    fn chains_verify_and_are_seed_deterministic() {
        let cx = complexify(&heisenberg()).unwrap();
        let x = vec![gauss::zero(), gauss::zero()];
        let c1 = chain_sample(&cx, &x, 3, 7, 4).unwrap();
        let c2 = chain_sample(&cx, &x, 3, 7, 4).unwrap();
        assert_eq!(c1, c2);
        assert_eq!(c1.steps(), 3);
        c1.verify(&cx).unwrap();
    }

    #[test]
    fn heisenberg_segre_set_ranks() {
        let cx = complexify(&heisenberg()).unwrap();
        let x = vec![gauss::zero(), gauss::zero()];
        assert_eq!(segre_set_rank(&cx, &x, 1, 11, 4).unwrap(), 1);
        assert_eq!(segre_set_rank(&cx, &x, 2, 11, 4).unwrap(), 2);
    }

    #[test]
    fn chain_reaches_a_prescribed_target() {
        let cx = complexify(&heisenberg()).unwrap();
        let x = vec![gauss::zero(), gauss::zero()];
        let target = vec![gauss::one(), &from_int(3) + &i_unit()];
        let chain = chain_to_target(&cx, &x, 2, &target, 5, 4).unwrap();
        assert_eq!(chain.steps(), 2);
        assert_eq!(chain.last(), &target[..]);
        chain.verify(&cx).unwrap();
        let longer = chain_to_target(&cx, &x, 4, &target, 5, 4).unwrap();
        assert_eq!(longer.steps(), 4);
        assert_eq!(longer.last(), &target[..]);
    }
}
