//! The five analysis commands, each mapping parsed inputs to a JSON
//! `result` object plus an exit code.
//!
//! Invariants
//! - all randomness flows from the `--seed` flag (default 0) through
//!   derived per-workload seeds; reports are replayable
//! - exit 0 means success, 1 a negative verdict (inadmissible map,
//!   mismatched reconstruction), 2 an input defect, 3 a rank or retry
//!   failure inside the pipeline
//! - polynomial map files are exact to every order, so jets of any
//!   order are always available from them (they are raised, never
//!   refused)

use crjet_core::error::Error as CoreError;
use crjet_core::gauss::{self, GaussRat};
use crjet_core::geometry::{self, check_admissible, ManifoldSpec};
use crjet_core::germ::MapGerm;
use crjet_core::linalg::Matrix;
use crjet_core::reflection::{reconstruct_at, reflect_chain, verify_determinacy, JetAt, ReflectionContext};
use crjet_core::segre::{self, chain_sample};
use serde_json::{json, Map, Value};

use crate::input::{parse_point, ManifoldFile, MapFile};
use crate::report::{chain_json, matrix_json, opt_u32_json, point_json, Fail};

/// Nondegeneracy search ceiling for the reflection commands (analyze
/// takes its own `--kmax`).
pub const DEFAULT_KMAX: u32 = 10;
/// Resampling budget for every chain-driven workload.
pub const DEFAULT_RETRIES: u32 = 8;

type CmdResult = Result<(Value, i32), Fail>;

// ---------------------------------------------------------------------
// analyze

pub fn analyze(mf: &ManifoldFile, k_max: u32, s_max: Option<u32>, seed: u64) -> CmdResult {
    let spec = &mf.spec;
    let s_max = s_max.unwrap_or(spec.d() as u32 + 1);
    let a = geometry::analyze(spec, k_max, s_max, DEFAULT_RETRIES, seed).map_err(Fail::core)?;
    let mut obj = Map::new();
    obj.insert("cr_dim".into(), json!(a.cr_dim));
    obj.insert("cr_codim".into(), json!(a.cr_codim));
    obj.insert("levi_nondegenerate".into(), json!(a.levi_nondegenerate));
    obj.insert("levi_surjective".into(), json!(a.levi_surjective));
    obj.insert("nondeg_order".into(), opt_u32_json(a.nondeg_order));
    if a.nondeg_order.is_none() {
        obj.insert(
            "nondeg_status".into(),
            json!(format!("unknown_ge_{}", a.k_max + 1)),
        );
    }
    obj.insert("minimal_s".into(), opt_u32_json(a.minimal_s));
    if a.minimal_s.is_none() {
        obj.insert(
            "minimality_status".into(),
            json!(format!("no_certificate_leq_{}", a.s_max)),
        );
    }
    obj.insert("determinacy_order".into(), opt_u32_json(a.determinacy_order));
    Ok((Value::Object(obj), 0))
}

// ---------------------------------------------------------------------
// segre

/// Linearization of the conjugate Segre slice `{chi : rho_c(z0, chi) =
/// 0}` through `chi0`, parametrized by the conjugated manifold's graph
/// with its parameter block frozen — the same contraction the
/// nondegeneracy test uses, exposed here per center.
fn conjugate_slice_linearization(
    spec: &ManifoldSpec,
    z0: &[GaussRat],
    chi0: &[GaussRat],
) -> Result<Matrix, CoreError> {
    let n = spec.n();
    let q = n - spec.d();
    let ccx = segre::complexify(&spec.conjugate_spec())?;
    let cgraph = ccx.graph_at(chi0, z0, 1)?;
    let mut jg = Matrix::zeros(n, q);
    for (k, &i) in cgraph.free.iter().enumerate() {
        jg[[i, k]] = gauss::one();
    }
    for (m, &i) in cgraph.solved.iter().enumerate() {
        for k in 0..q {
            jg[[i, k]] = cgraph.phi.component(m).linear_coeff(k);
        }
    }
    Ok(jg)
}

fn parse_center(
    mf: &ManifoldFile,
    center: Option<&str>,
) -> Result<(Vec<GaussRat>, Vec<GaussRat>), Fail> {
    let spec = &mf.spec;
    let (z0, chi0) = match center {
        None => (spec.base().to_vec(), spec.conj_base()),
        Some(text) => {
            let parts: Vec<&str> = text.split(';').collect();
            let fail_parse = |e| Fail::parse("<--center>", e);
            match parts.as_slice() {
                [z] => {
                    let z0 = parse_point(z).map_err(fail_parse)?;
                    let chi0 = z0.iter().map(gauss::conj).collect();
                    (z0, chi0)
                }
                [z, chi] => (
                    parse_point(z).map_err(fail_parse)?,
                    parse_point(chi).map_err(fail_parse)?,
                ),
                _ => {
                    return Err(Fail::input(
                        "--center takes `(z1, …)` or `(z1, …);(chi1, …)`",
                    ))
                }
            }
        }
    };
    for (what, p) in [("z", &z0), ("chi", &chi0)] {
        if p.len() != spec.n() {
            return Err(Fail::input(format!(
                "center {what}-part has {} components but the manifold lives in dimension {}",
                p.len(),
                spec.n()
            )));
        }
    }
    Ok((z0, chi0))
}

pub fn segre(mf: &ManifoldFile, order: u32, center: Option<&str>) -> CmdResult {
    if order == 0 {
        return Err(Fail::input("--order must be at least 1"));
    }
    let spec = &mf.spec;
    let n = spec.n();
    let (z0, chi0) = parse_center(mf, center)?;
    let cx = segre::complexify(spec).map_err(Fail::core)?;
    let graph = cx.graph_at(&z0, &chi0, order + 1).map_err(Fail::core)?;
    let jgamma = conjugate_slice_linearization(spec, &z0, &chi0).map_err(Fail::core)?;

    let free_names: Vec<&str> = graph.free.iter().map(|&i| mf.names[i].as_str()).collect();
    let solved_names: Vec<&str> = graph.solved.iter().map(|&i| mf.names[i].as_str()).collect();
    // The graph's parameters are the free z-displacements; its second
    // block is the chi-displacement at the center.
    let mut graph_var_names: Vec<String> =
        free_names.iter().map(|v| format!("d{v}")).collect();
    graph_var_names.extend(mf.names.iter().map(|v| format!("d~{v}")));
    let graph_components: Vec<Value> = solved_names
        .iter()
        .zip(graph.phi.components())
        .map(|(var, comp)| {
            json!({
                "solves": format!("d{var}"),
                "series": comp.to_text(&graph_var_names),
            })
        })
        .collect();

    let mut jets = Vec::new();
    for k in 1..=order {
        let jq = segre::jet_of_segre(&graph, k).map_err(Fail::core)?;
        let jac = jq.map.jacobian();
        jets.push(json!({
            "k": k,
            "components": jq.map.components().len(),
            "rank_full": jac.rank(),
            "rank_restricted": jac.mul(&jgamma).rank(),
        }));
    }

    let result = json!({
        "center": { "z": point_json(&z0), "chi": point_json(&chi0) },
        "free": free_names,
        "solved": solved_names,
        "graph": graph_components,
        "cr_dim": n - spec.d(),
        "jets": jets,
    });
    Ok((result, 0))
}

// ---------------------------------------------------------------------
// reflect

fn check_map_shape(m: &ManifoldFile, mp: &ManifoldFile, map: &MapFile) -> Result<(), Fail> {
    if map.germ.nvars() != m.spec.n() {
        return Err(Fail::input(format!(
            "map file declares {} variables but the source manifold lives in dimension {}",
            map.germ.nvars(),
            m.spec.n()
        )));
    }
    if map.germ.components().len() != mp.spec.n() {
        return Err(Fail::input(format!(
            "map file has {} components but the target manifold lives in dimension {}",
            map.germ.components().len(),
            mp.spec.n()
        )));
    }
    Ok(())
}

/// Polynomial map files are exact, so any jet order is available.
fn germ_at_order(germ: &MapGerm, order: u32) -> MapGerm {
    if germ.order() >= order {
        germ.truncated(order)
    } else {
        germ.raised(order)
    }
}

fn build_context(m: &ManifoldFile, mp: &ManifoldFile) -> Result<ReflectionContext, Fail> {
    ReflectionContext::new(m.spec.clone(), mp.spec.clone(), DEFAULT_KMAX).map_err(Fail::core)
}

fn jet_json(jet: &JetAt, source_names: &[String], target_dim: usize) -> Value {
    let prefix = if jet.conjugated { "d~" } else { "d" };
    let names: Vec<String> = source_names.iter().map(|v| format!("{prefix}{v}")).collect();
    let components: Vec<String> = jet
        .germ
        .components()
        .iter()
        .map(|c| c.to_text(&names))
        .collect();
    debug_assert_eq!(components.len(), target_dim);
    json!({
        "point": point_json(&jet.point),
        "order": jet.order,
        "conjugated": jet.conjugated,
        "value": point_json(&jet.value()),
        "components": components,
        "jacobian": matrix_json(&jet.germ.jacobian()),
    })
}

pub fn reflect(
    m: &ManifoldFile,
    mp: &ManifoldFile,
    map: &MapFile,
    steps: u32,
    order: u32,
    seed: u64,
) -> CmdResult {
    if steps == 0 {
        return Err(Fail::input("--steps must be at least 1"));
    }
    check_map_shape(m, mp, map)?;
    let ctx = build_context(m, mp)?;
    let needed = order + steps * ctx.r();
    let start = germ_at_order(&map.germ, needed);
    let x = start.base().to_vec();
    let chain = chain_sample(
        ctx.source_cx(),
        &x,
        steps as usize,
        seed,
        DEFAULT_RETRIES,
    )
    .map_err(Fail::core)?;
    let jet = reflect_chain(&ctx, &JetAt::of(start, false), &chain, order).map_err(Fail::core)?;
    let result = json!({
        "r": ctx.r(),
        "needed_order": needed,
        "chain": chain_json(&chain),
        "jet": jet_json(&jet, &m.names, mp.spec.n()),
    });
    Ok((result, 0))
}

// ---------------------------------------------------------------------
// reconstruct

/// Order at which exact admissibility of the file polynomial is
/// certified: past the degree of the ambient residual polynomial, so a
/// truncated (non-exact) file always fails within the margin. Capped to
/// keep pathological input degrees from exploding the check.
fn certificate_order(map_degree: u32, target_degree: u32, r: u32) -> u32 {
    (map_degree * target_degree + 1).max(r + 2).min(32)
}

pub fn reconstruct(
    m: &ManifoldFile,
    mp: &ManifoldFile,
    map: &MapFile,
    at: &str,
    seed: u64,
) -> CmdResult {
    check_map_shape(m, mp, map)?;
    let target = parse_point(at).map_err(|e| Fail::parse("<--at>", e))?;
    if target.len() != m.spec.n() {
        return Err(Fail::input(format!(
            "--at point has {} components but the source manifold lives in dimension {}",
            target.len(),
            m.spec.n()
        )));
    }
    let ctx = build_context(m, mp)?;
    let k = ctx.determinacy_order();
    let kjet = JetAt::of(germ_at_order(&map.germ, k), false);
    let rec = reconstruct_at(
        &ctx,
        &kjet,
        &target,
        gauss::derive_seed(seed, &[0x7265_636f, 1]),
        DEFAULT_RETRIES,
    )
    .map_err(Fail::core)?;
    let rec2 = reconstruct_at(
        &ctx,
        &kjet,
        &target,
        gauss::derive_seed(seed, &[0x7265_636f, 2]),
        DEFAULT_RETRIES,
    )
    .map_err(Fail::core)?;

    // `true_value` only when the file polynomial itself is exactly
    // admissible (certified past the residual's degree), in which case
    // evaluating it at the target is the map's honest value.
    let true_value = if map.germ.base() == m.spec.base() {
        let deg_rho = mp
            .spec
            .rho()
            .iter()
            .map(|r| r.max_degree())
            .max()
            .unwrap_or(1)
            .max(1);
        let cert = certificate_order(map.germ.order().max(1), deg_rho, ctx.r());
        match check_admissible(&germ_at_order(&map.germ, cert), &m.spec, &mp.spec, cert) {
            Ok(true) => Some(map.germ.eval_poly(&target)),
            Ok(false) => None,
            Err(CoreError::BaseNotOnManifold { .. }) => None,
            Err(e) => return Err(Fail::core(e)),
        }
    } else {
        None
    };

    let agree =
        rec.value == rec2.value && true_value.as_ref().map_or(true, |tv| *tv == rec.value);
    let result = json!({
        "at": point_json(&target),
        "determinacy_order": k,
        "value": point_json(&rec.value),
        "true_value": true_value.as_ref().map(|tv| point_json(tv)),
        "verdict": if agree { "equal" } else { "mismatch" },
        "chain": chain_json(&rec.chain),
        "second_chain": chain_json(&rec2.chain),
    });
    Ok((result, if agree { 0 } else { 1 }))
}

// ---------------------------------------------------------------------
// verify

fn admissibility(
    germ: &MapGerm,
    m: &ManifoldSpec,
    mp: &ManifoldSpec,
    order: u32,
) -> Result<(bool, Option<String>), Fail> {
    match check_admissible(&germ_at_order(germ, order), m, mp, order) {
        Ok(true) => Ok((true, None)),
        Ok(false) => Ok((
            false,
            Some(format!(
                "target defining polynomials do not vanish on the image to order {order}"
            )),
        )),
        Err(e @ CoreError::BaseNotOnManifold { .. }) => Ok((false, Some(e.to_string()))),
        Err(e) => Err(Fail::core(e)),
    }
}

pub fn verify(
    m: &ManifoldFile,
    mp: &ManifoldFile,
    map: &MapFile,
    map2: Option<&MapFile>,
    samples: u32,
    seed: u64,
) -> CmdResult {
    check_map_shape(m, mp, map)?;
    let ctx = build_context(m, mp)?;
    let k = ctx.determinacy_order();
    let (admissible, reason) = admissibility(&map.germ, &m.spec, &mp.spec, k)?;
    let mut obj = Map::new();
    obj.insert("determinacy_order".into(), json!(k));
    obj.insert("admissible".into(), json!(admissible));
    if let Some(r) = reason {
        obj.insert("admissible_reason".into(), json!(r));
    }
    let mut accepted = admissible;
    if let Some(g) = map2 {
        check_map_shape(m, mp, g)?;
        let (adm2, reason2) = admissibility(&g.germ, &m.spec, &mp.spec, k)?;
        obj.insert("map2_admissible".into(), json!(adm2));
        if let Some(r) = reason2 {
            obj.insert("map2_reason".into(), json!(r));
        }
        accepted = accepted && adm2;
        if accepted {
            let rep =
                verify_determinacy(&ctx, &map.germ, &g.germ, samples, seed).map_err(Fail::core)?;
            let samples_json: Vec<Value> = rep
                .samples
                .iter()
                .map(|s| {
                    json!({
                        "point": point_json(&s.point),
                        "f_value": point_json(&s.f_value),
                        "g_value": point_json(&s.g_value),
                        "equal": s.equal,
                    })
                })
                .collect();
            obj.insert(
                "determinacy".into(),
                json!({
                    "k": rep.k,
                    "jets_equal": rep.jets_equal,
                    "samples_equal": rep.samples_equal,
                    "samples": samples_json,
                }),
            );
            accepted = rep.jets_equal && rep.samples_equal;
        }
    }
    obj.insert(
        "verdict".into(),
        json!(if accepted { "accepted" } else { "rejected" }),
    );
    Ok((Value::Object(obj), if accepted { 0 } else { 1 }))
}
