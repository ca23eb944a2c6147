//! The jet reflection operator, its chain iteration, and germ
//! reconstruction from a finite jet.
//!
//! One reflection step turns the order-`l + r` Taylor data of a map
//! germ at a point `z` into the order-`l` Taylor data of the conjugate
//! map at a partner point `chi`, for any pair `(z, chi)` on the source
//! complexification. The mechanism: the map carries the Segre variety
//! attached to `chi` into a Segre variety of the target; writing the
//! image variety as a graph over `q' = n' - d'` of the target
//! coordinates and extracting its coefficients through degree `r`
//! expresses the jet of the target graph — composed with the unknown
//! conjugate map — as explicit series in the conjugate displacement.
//! Because the target is `r`-nondegenerate, a left inverse of its
//! jet-of-Segre map peels the conjugate map back off. Conventions
//! fixed here:
//!
//! * a jet travels as a [`JetAt`]: a truncated germ based at the point
//!   it lives at, plus a flag marking whether it is the map or its
//!   conjugate; the germ order *is* the jet order, nothing higher is
//!   ever stored or read;
//! * one step consumes exactly `r` orders (`l + r` in, `l` out); the
//!   chain iterator asserts this ledger at every step;
//! * the conjugate step is the same algorithm run on the conjugated
//!   manifolds, so the flag alternates exactly as chain-link parity
//!   does ([`crate::segre::ChainPoint`]);
//! * the image center (the conjugate map's value) is *recovered*, not
//!   assumed: the reflected graph coefficients are matched against the
//!   target's defining polynomials and the resulting affine-linear
//!   system must pin the center uniquely — targets of degree above one
//!   in the conjugate block are reported as unsupported, never
//!   approximated.

use crate::error::{Error, Result};
use crate::gauss::{self, GaussRat};
use crate::geometry::{self, ManifoldSpec};
use crate::germ::MapGerm;
use crate::linalg::Matrix;
use crate::segre::{
    chain_sample, chain_to_target, complexify, jet_of_segre, left_inverse_jetq, ChainPoint,
    Complexification,
};
use crate::series::{multidegrees_up_to, Multidegree, TruncatedSeries};

/// Everything a reflection pipeline needs, validated once: both
/// manifolds with their plain and conjugated complexifications, and
/// the target's nondegeneracy order `r`.
#[derive(Clone, Debug)]
pub struct ReflectionContext {
    m: ManifoldSpec,
    mp: ManifoldSpec,
    cx: Complexification,
    cxp: Complexification,
    ccx: Complexification,
    ccxp: Complexification,
    r: u32,
}

impl ReflectionContext {
    /// `k_max` bounds the nondegeneracy search on the target; an
    /// undetermined order is an error because every jet budget below
    /// (`l + r` per step, `k = 2r(1+d)` overall) depends on `r`.
    pub fn new(m: ManifoldSpec, mp: ManifoldSpec, k_max: u32) -> Result<Self> {
        let r = geometry::nondegeneracy_order(&mp, k_max)?
            .ok_or(Error::NondegeneracyUnknown { k_max })?;
        let cx = complexify(&m)?;
        let cxp = complexify(&mp)?;
        let ccx = cx.conjugated();
        let ccxp = cxp.conjugated();
        Ok(ReflectionContext {
            m,
            mp,
            cx,
            cxp,
            ccx,
            ccxp,
            r,
        })
    }

    pub fn source(&self) -> &ManifoldSpec {
        &self.m
    }

    pub fn target(&self) -> &ManifoldSpec {
        &self.mp
    }

    pub fn source_cx(&self) -> &Complexification {
        &self.cx
    }

    /// Nondegeneracy order of the target manifold.
    pub fn r(&self) -> u32 {
        self.r
    }

    /// CR codimension of the source manifold.
    pub fn d(&self) -> usize {
        self.m.d()
    }

    /// Half-chain length `s = d + 1`.
    pub fn s(&self) -> usize {
        self.m.d() + 1
    }

    /// Orders one half chain consumes: `m = s * r`.
    pub fn half_order(&self) -> u32 {
        self.s() as u32 * self.r
    }

    /// The determining jet order `k = 2m = 2r(1 + d)`.
    pub fn determinacy_order(&self) -> u32 {
        2 * self.half_order()
    }
}

/// Taylor data of order `order` at `point` of the map (`conjugated ==
/// false`) or of its conjugate. Invariant: the germ is based at
/// `point` and truncated to exactly `order` — a jet never claims more
/// than the pipeline has certified.
#[derive(Clone, Debug, PartialEq)]
pub struct JetAt {
    pub point: Vec<GaussRat>,
    pub order: u32,
    pub germ: MapGerm,
    pub conjugated: bool,
}

impl JetAt {
    /// Wrap a germ as the jet of its own order at its own base.
    pub fn of(germ: MapGerm, conjugated: bool) -> JetAt {
        JetAt {
            point: germ.base().to_vec(),
            order: germ.order(),
            germ,
            conjugated,
        }
    }

    pub fn value(&self) -> Vec<GaussRat> {
        self.germ.value()
    }

    pub fn truncated(&self, order: u32) -> JetAt {
        assert!(order <= self.order, "a jet only truncates downward");
        JetAt {
            point: self.point.clone(),
            order,
            germ: self.germ.truncated(order),
            conjugated: self.conjugated,
        }
    }
}

/// One reflection step: from the order-`l + r` jet at `pair.0` to the
/// order-`l` jet of the conjugate map at `pair.1`. The pair must lie
/// on the source complexification — the conjugated one when `fj` is
/// already a conjugate jet, since reflecting the conjugate map is the
/// same algorithm run on the conjugated manifolds.
pub fn reflect_jet(
    ctx: &ReflectionContext,
    fj: &JetAt,
    pair: (&[GaussRat], &[GaussRat]),
    l: u32,
) -> Result<JetAt> {
    let (cx_s, cx_t) = if fj.conjugated {
        (&ctx.ccx, &ctx.ccxp)
    } else {
        (&ctx.cx, &ctx.cxp)
    };
    let (z0, chi0) = pair;
    if fj.point != z0 {
        return Err(Error::BaseMismatch {
            expected: gauss::fmt_point(z0),
            got: gauss::fmt_point(&fj.point),
        });
    }
    let r = ctx.r;
    let work = l + r;
    if fj.order < work {
        return Err(Error::InsufficientOrder {
            needed: work,
            got: fj.order,
        });
    }
    cx_s.membership_err(z0, chi0)?;
    let n = cx_s.n();
    let np = cx_t.n();
    let dp = cx_t.d();
    let qp = np - dp;

    // The source Segre family as a graph and the map along it:
    // F*(du, dchi) = f(Gamma(du, dchi)), exact through order l + r.
    let f = fj.germ.truncated(work);
    let graph = cx_s.graph_at(z0, chi0, work)?;
    let q = graph.q();
    let fstar = MapGerm::compose(&f, &graph.embedding())?;
    let zp0 = f.value();

    // Split the image coordinates: the du-Jacobian of F* spans the
    // tangent of the image Segre variety, which must project
    // isomorphically onto q' coordinates (rows F'), leaving d' graphed
    // coordinates (rows S').
    let j = Matrix::from_rows(
        (0..np)
            .map(|i| (0..q).map(|k| fstar.component(i).linear_coeff(k)).collect())
            .collect(),
    );
    let jrank = j.rank();
    if jrank != qp {
        return Err(Error::RankCondition {
            stage: "reflection splitting",
            got: jrank,
            needed: qp,
        });
    }
    let fprime = j.lex_first_rows(qp).expect("rank was checked above");
    let sprime: Vec<usize> = (0..np).filter(|i| !fprime.contains(i)).collect();
    let f1 = j
        .select_rows(&fprime)
        .lex_first_cols(qp)
        .expect("the selected rows have full rank");
    let f2: Vec<usize> = (0..q).filter(|k| !f1.contains(k)).collect();

    // Parametric compositional inverse: v(u, dchi) with
    // F*_{F'}(v @ F1, 0 @ F2, dchi) = z'0_{F'} + u, solved over the
    // implicit variables (u_1..u_q', dchi_1..dchi_n | v_1..v_q').
    let p = qp + n;
    let mut var_map = vec![0usize; q + n];
    for (k, &c) in f1.iter().enumerate() {
        var_map[c] = p + k;
    }
    for i in 0..n {
        var_map[q + i] = qp + i;
    }
    // F2 slots keep map entry 0; they are zeroed out before embedding,
    // so the entry is never read.
    let sys_comps: Vec<TruncatedSeries> = fprime
        .iter()
        .enumerate()
        .map(|(row, &i)| {
            fstar
                .component(i)
                .zero_out(&f2)
                .embed(p + qp, &var_map)
                .sub(&TruncatedSeries::constant(p + qp, work, zp0[i].clone()))
                .sub(&TruncatedSeries::variable(p + qp, work, row))
        })
        .collect();
    let mut sys_base = vec![gauss::zero(); qp];
    sys_base.extend(chi0.iter().cloned());
    sys_base.extend(std::iter::repeat(gauss::zero()).take(qp));
    let h = MapGerm::implicit_solve(&MapGerm::new(sys_base, sys_comps), p)?;

    // Graphed image coordinates along the family:
    // Psi(u, dchi) = F*_{S'}(H(u, dchi) @ F1, 0 @ F2, dchi).
    let mut inner_comps: Vec<TruncatedSeries> = Vec::with_capacity(q + n);
    for c in 0..q {
        let abs = TruncatedSeries::constant(p, work, z0[graph.free[c]].clone());
        match f1.iter().position(|&x| x == c) {
            Some(k) => inner_comps.push(abs.add(h.component(k))),
            None => inner_comps.push(abs),
        }
    }
    for i in 0..n {
        inner_comps.push(
            TruncatedSeries::constant(p, work, chi0[i].clone())
                .add(&TruncatedSeries::variable(p, work, qp + i)),
        );
    }
    let inner = MapGerm::new(h.base().to_vec(), inner_comps);
    let fstar_s = MapGerm::new(
        fstar.base().to_vec(),
        sprime
            .iter()
            .map(|&i| fstar.component(i).clone())
            .collect(),
    );
    let psi = MapGerm::compose(&fstar_s, &inner)?;

    // u-coefficients of Psi: G_beta(dchi) is the beta-th graph
    // coefficient of the target Segre family at the still-unknown
    // image center, composed with the conjugate map — the identity
    // this pipeline inverts. Ordering matches jet_of_segre exactly:
    // betas ascending graded-lex, equation index within each beta.
    let betas = multidegrees_up_to(qp, r);
    let mut g_comps = Vec::with_capacity(dp * betas.len());
    for beta in &betas {
        for m in 0..dp {
            g_comps.push(psi.component(m).block_coefficient(qp, beta));
        }
    }
    let g_all = MapGerm::new(chi0.to_vec(), g_comps);
    let g0 = g_all.value();

    // Candidate degree-r jet of the image graph at dchi = 0, then the
    // affine-linear recovery of the image center.
    let p_comps: Vec<TruncatedSeries> = (0..dp)
        .map(|m| {
            TruncatedSeries::from_terms(
                qp,
                r,
                betas
                    .iter()
                    .enumerate()
                    .map(|(bi, beta)| (beta.clone(), g0[bi * dp + m].clone())),
            )
        })
        .collect();
    let chi_p0 = recover_center(cx_t.spec(), &fprime, &sprime, &zp0, &p_comps, r)?;

    // The true target graph at the recovered center, on the dictated
    // split (the lex-first split at that center may differ — the
    // candidate jet is a graph over F', so the target must be too),
    // and its jet-of-Segre map. The graph order only reads manifold
    // data, so raising it to r + 1 for the l = 0 case costs nothing
    // from the jet budget.
    let target_order = work.max(r + 1);
    let tgraph = cx_t.graph_at_with_split(&zp0, &chi_p0, &sprime, target_order)?;
    let jq = jet_of_segre(&tgraph, r)?;
    assert_eq!(
        jq.map.value(),
        g0,
        "reflection consistency: target jet-of-Segre value disagrees with the reflected graph coefficients"
    );

    // Peel the conjugate map off through the left inverse.
    let li = left_inverse_jetq(&jq)?;
    let g_sel = MapGerm::new(
        chi0.to_vec(),
        li.rows
            .iter()
            .map(|&i| g_all.component(i).clone())
            .collect(),
    );
    let fbar = MapGerm::compose(&li.germ, &g_sel)?;
    Ok(JetAt {
        point: chi0.to_vec(),
        order: l,
        germ: fbar.truncated(l),
        conjugated: !fj.conjugated,
    })
}

/// Solve for the unique conjugate center whose Segre jet matches the
/// candidate graph coefficients: over every defining polynomial and
/// every multidegree of the F'-displacement up to degree `r`, the
/// matching condition is affine-linear in chi' for supported targets
/// (degree at most one in the conjugate block).
fn recover_center(
    spec: &ManifoldSpec,
    fprime: &[usize],
    sprime: &[usize],
    zp0: &[GaussRat],
    p_comps: &[TruncatedSeries],
    r: u32,
) -> Result<Vec<GaussRat>> {
    let np = spec.n();
    let dp = spec.d();
    let qp = fprime.len();

    // The candidate image point as a germ of the F'-displacement:
    // affine in the F' slots, the candidate jet in the S' slots.
    let mut z_comps = vec![TruncatedSeries::zero(qp, r); np];
    for (k, &i) in fprime.iter().enumerate() {
        let mut c = TruncatedSeries::constant(qp, r, zp0[i].clone());
        if r >= 1 {
            c = c.add(&TruncatedSeries::variable(qp, r, k));
        }
        z_comps[i] = c;
    }
    for (m, &i) in sprime.iter().enumerate() {
        z_comps[i] = p_comps[m].clone();
    }
    let z_germ = MapGerm::new(fprime.iter().map(|&i| zp0[i].clone()).collect(), z_comps);

    // Split each rho' into its chi'-free part b and the coefficient
    // a_i of each chi'_i, rejecting higher conjugate degrees.
    let names: Vec<String> = (1..=np)
        .map(|i| format!("z{i}"))
        .chain((1..=np).map(|i| format!("~z{i}")))
        .collect();
    let mut parts: Vec<TruncatedSeries> = Vec::with_capacity(dp * (1 + np));
    for (j, rho) in spec.rho().iter().enumerate() {
        let order = rho.order().max(r);
        let mut b = TruncatedSeries::zero(np, order);
        let mut a = vec![TruncatedSeries::zero(np, order); np];
        for (md, c) in rho.terms() {
            let (alpha, mu) = md.split_at(np);
            match mu.total() {
                0 => b.add_term(alpha, c.clone()),
                1 => {
                    let i = (0..np).find(|&i| mu.0[i] == 1).expect("degree-1 block");
                    a[i].add_term(alpha, c.clone());
                }
                degree => {
                    return Err(Error::UnsupportedTarget {
                        index: j + 1,
                        degree,
                        monomial: fmt_monomial(2 * np, &names, md),
                    })
                }
            }
        }
        parts.push(b);
        parts.extend(a);
    }

    // Push every part along the candidate graph and stack the linear
    // conditions on chi'.
    let parts_germ =
        MapGerm::new(vec![gauss::zero(); np], parts).recenter_exact(zp0.to_vec());
    let pushed = MapGerm::compose(&parts_germ, &z_germ)?;
    let gammas = multidegrees_up_to(qp, r);
    let mut rows = Vec::with_capacity(dp * gammas.len());
    let mut rhs = Vec::with_capacity(dp * gammas.len());
    for j in 0..dp {
        let b = pushed.component(j * (1 + np));
        for gamma in &gammas {
            rows.push(
                (0..np)
                    .map(|i| pushed.component(j * (1 + np) + 1 + i).coeff(gamma))
                    .collect::<Vec<_>>(),
            );
            rhs.push(-b.coeff(gamma));
        }
    }
    Matrix::from_rows(rows)
        .solve_unique(&rhs)
        .ok_or(Error::LinearSystem {
            what: "image center recovery",
            status: "not uniquely solvable",
        })
}

fn fmt_monomial(nvars: usize, names: &[String], md: &Multidegree) -> String {
    let one = TruncatedSeries::from_terms(nvars, md.total(), [(md.clone(), gauss::one())]);
    one.to_text(names).trim_start_matches("1 * ").to_string()
}

/// Iterate reflection along a chain: the jet alternates between the
/// map and its conjugate, consumes `r` orders per link, and lands at
/// the chain's terminal point with order `l`.
pub fn reflect_chain(
    ctx: &ReflectionContext,
    fj: &JetAt,
    chain: &ChainPoint,
    l: u32,
) -> Result<JetAt> {
    let steps = chain.steps() as u32;
    let needed = l + steps * ctx.r;
    if fj.order < needed {
        return Err(Error::InsufficientOrder {
            needed,
            got: fj.order,
        });
    }
    assert!(
        !fj.conjugated,
        "a chain starts at a holomorphic-side point with the map's own jet"
    );
    assert_eq!(
        fj.point, chain.points[0],
        "the jet must sit at the chain origin"
    );
    let mut cur = fj.truncated(needed);
    for i in 1..=chain.steps() {
        let next = reflect_jet(
            ctx,
            &cur,
            (&chain.points[i - 1], &chain.points[i]),
            cur.order - ctx.r,
        )
        .map_err(|e| Error::ChainStep {
            step: i,
            source: Box::new(e),
        })?;
        assert_eq!(next.order, cur.order - ctx.r, "order ledger violated");
        cur = next;
    }
    assert_eq!(cur.order, l, "order ledger must land at the requested l");
    Ok(cur)
}

/// Everything one reconstruction produced: the exact value and the
/// chain that transported it.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub value: Vec<GaussRat>,
    pub chain: ChainPoint,
}

/// Reconstruct the map's exact value at `target` from its order-`k`
/// jet at the jet's own point, transporting it along a sampled chain
/// of length `2s` that ends at `target`. The input is truncated to
/// exactly `k` up front, so the output provably depends on nothing
/// above the determining order. Chains whose sampled points violate a
/// rank condition are resampled with a derived seed.
pub fn reconstruct_at(
    ctx: &ReflectionContext,
    kjet: &JetAt,
    target: &[GaussRat],
    seed: u64,
    retries: u32,
) -> Result<Reconstruction> {
    let k = ctx.determinacy_order();
    if kjet.order < k {
        return Err(Error::InsufficientOrder {
            needed: k,
            got: kjet.order,
        });
    }
    assert!(
        !kjet.conjugated,
        "reconstruction starts from the map's own jet"
    );
    let kj = kjet.truncated(k);
    let x = kj.point.clone();
    if x.as_slice() == target {
        return Ok(Reconstruction {
            value: kj.value(),
            chain: ChainPoint { points: vec![x] },
        });
    }
    let steps = 2 * ctx.s();
    let attempts = retries.max(1);
    let mut last = String::from("no attempt made");
    for attempt in 0..attempts {
        let chain_seed = gauss::derive_seed(seed, &[0x7265_666c_6563_74, attempt as u64]);
        let chain = match chain_to_target(&ctx.cx, &x, steps, target, chain_seed, attempts) {
            Ok(c) => c,
            Err(e @ Error::UnsupportedTarget { .. }) => return Err(e),
            Err(e) => {
                last = e.to_string();
                continue;
            }
        };
        match reflect_chain(ctx, &kj, &chain, 0) {
            Ok(out) => {
                return Ok(Reconstruction {
                    value: out.value(),
                    chain,
                })
            }
            Err(e) if step_worth_resampling(&e) => last = e.to_string(),
            Err(e) => return Err(e),
        }
    }
    Err(Error::RetriesExhausted {
        attempts,
        stage: "reconstruction transport",
        seed,
        last,
    })
}

/// Rank-type failures depend on the sampled chain and are cured by
/// resampling; anything else (orders, unsupported targets) is not.
fn step_worth_resampling(e: &Error) -> bool {
    match e {
        Error::ChainStep { source, .. } => step_worth_resampling(source),
        Error::RankCondition { .. }
        | Error::NoInvertibleMinor { .. }
        | Error::SingularLinearPart
        | Error::LinearSystem { .. } => true,
        _ => false,
    }
}

/// One sampled comparison point in a determinacy report.
#[derive(Clone, Debug)]
pub struct DeterminacySample {
    pub point: Vec<GaussRat>,
    pub f_value: Vec<GaussRat>,
    pub g_value: Vec<GaussRat>,
    pub equal: bool,
}

/// Outcome of comparing two admissible germs through their
/// determining jets.
#[derive(Clone, Debug)]
pub struct DeterminacyReport {
    pub k: u32,
    pub jets_equal: bool,
    pub samples: Vec<DeterminacySample>,
    pub samples_equal: bool,
}

/// Compare two admissible germs: their order-`k` jets coefficientwise
/// and their transported values at `sample_count` sampled reachable
/// points. Both jets ride the *same* chain per sample, so any
/// disagreement isolates the jet data. Germs are read as
/// polynomial-exact maps (the map-file contract) and raised to order
/// `k` when declared lower; admissibility is checked on the order-`k`
/// truncation, which is the object the comparison is about.
pub fn verify_determinacy(
    ctx: &ReflectionContext,
    f: &MapGerm,
    g: &MapGerm,
    sample_count: u32,
    seed: u64,
) -> Result<DeterminacyReport> {
    let k = ctx.determinacy_order();
    if f.base() != g.base() {
        return Err(Error::BaseMismatch {
            expected: gauss::fmt_point(f.base()),
            got: gauss::fmt_point(g.base()),
        });
    }
    let to_k = |h: &MapGerm| {
        if h.order() >= k {
            h.truncated(k)
        } else {
            h.raised(k)
        }
    };
    let fk = to_k(f);
    let gk = to_k(g);
    for (name, h) in [("first", &fk), ("second", &gk)] {
        if !geometry::check_admissible(h, &ctx.m, &ctx.mp, k)? {
            return Err(Error::NotAdmissible {
                reason: format!("the {name} germ fails the admissibility test at order {k}"),
            });
        }
    }
    let jets_equal = fk == gk;
    let fj = JetAt::of(fk, false);
    let gj = JetAt::of(gk, false);

    let steps = 2 * ctx.s();
    let mut samples = Vec::with_capacity(sample_count as usize);
    for idx in 0..sample_count {
        let mut found = None;
        let mut last = String::from("no attempt made");
        for attempt in 0..8u64 {
            let child = gauss::derive_seed(seed, &[0x6465_7465_726d, idx as u64, attempt]);
            let chain = match chain_sample(&ctx.cx, f.base(), steps, child, 8) {
                Ok(c) => c,
                Err(e @ Error::UnsupportedTarget { .. }) => return Err(e),
                Err(e) => {
                    last = e.to_string();
                    continue;
                }
            };
            let both = reflect_chain(ctx, &fj, &chain, 0)
                .and_then(|a| reflect_chain(ctx, &gj, &chain, 0).map(|b| (a, b)));
            match both {
                Ok((a, b)) => {
                    found = Some((chain, a, b));
                    break;
                }
                Err(e) if step_worth_resampling(&e) => last = e.to_string(),
                Err(e) => return Err(e),
            }
        }
        let (chain, fa, ga) = found.ok_or(Error::RetriesExhausted {
            attempts: 8,
            stage: "determinacy sampling",
            seed,
            last,
        })?;
        let f_value = fa.value();
        let g_value = ga.value();
        samples.push(DeterminacySample {
            point: chain.last().to_vec(),
            equal: f_value == g_value,
            f_value,
            g_value,
        });
    }
    let samples_equal = samples.iter().all(|s| s.equal);
    Ok(DeterminacyReport {
        k,
        jets_equal,
        samples,
        samples_equal,
    })
}
