//! Acceptance gate: one test per shipped guarantee, each printing an
//! `ACCEPTANCE <n> ...: PASS` line on success. Oracle values are closed
//! forms computed independently inside the test, never read back from
//! the code under test.

mod common;

use std::io::Write as _;
use std::time::Instant;

use common::*;
use crjet_core::examples;
use crjet_core::gauss::{self, GaussRat};
use crjet_core::geometry::{self, ManifoldSpec};
use crjet_core::germ::MapGerm;
use crjet_core::linalg::Matrix;
use crjet_core::reflection::{self, JetAt, ReflectionContext};
use crjet_core::segre::{self, ChainPoint};
use crjet_core::series::{Multidegree, TruncatedSeries};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const SUITE: u64 = 0xacce_97;

/// Announce a passed criterion on the real stdout, past libtest capture.
fn pass(n: u32, what: &str) {
    let mut out = std::io::stdout().lock();
    writeln!(out, "ACCEPTANCE {n} {what}: PASS").unwrap();
}

fn fixtures() -> Vec<(&'static str, ManifoldSpec)> {
    vec![
        ("heisenberg", examples::heisenberg()),
        ("levi_flat", examples::levi_flat()),
        ("quadric_pair_source", examples::quadric_pair_source()),
        ("quadric_pair_target", examples::quadric_pair_target()),
        ("hyperquadric", examples::hyperquadric()),
        ("codim2_quadric", examples::codim2_quadric()),
    ]
}

/// Five Heisenberg-sphere automorphism germs, handed to the binary only
/// as their order-4 truncations, reconstructed at ten rational points
/// and compared against closed forms evaluated right here.
#[test]
fn criterion_1_heisenberg_reconstruction_matches_closed_forms() {
    let started = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let heis = write_file(dir.path(), "heis.cr", HEIS_CR);
    type Closed = fn(&GaussRat, &GaussRat) -> Option<Vec<GaussRat>>;
    let maps: [(&str, &str, Closed); 5] = [
        ("identity.map", IDENTITY4_MAP, |z, w| {
            Some(vec![z.clone(), w.clone()])
        }),
        ("dilation.map", DILATION4_MAP, |z, w| {
            Some(vec![z * gauss::from_int(2), w * gauss::from_int(4)])
        }),
        ("rotation.map", ROTATION4_MAP, |z, w| {
            Some(vec![z * gauss::i_unit(), w.clone()])
        }),
        ("translation.map", TRANSLATION4_MAP, |z, w| {
            Some(vec![
                z + gauss::from_int(1),
                w + gauss::ratio_c(1, 1, 1, 1) + z * gauss::ratio_c(0, 1, 2, 1),
            ])
        }),
        ("moebius.map", FMOB4_MAP, |z, w| {
            examples::moebius_value(z, w).map(|(a, b)| vec![a, b])
        }),
    ];
    let points = [
        "(1/3, 1/5)",
        "(1/2, -1/3)",
        "(-2/5, 3/7)",
        "(1/2+1/2*i, -1/3)",
        "(3, -2)",
        "(1/7, 2/9)",
        "(-1, 1/2+1/3*i)",
        "(2/3*i, -1/5)",
        "(5/6, 1/2-1/2*i)",
        "(-3/4, -4/5)",
    ];
    for (name, text, closed) in maps {
        let map = write_file(dir.path(), name, text);
        for (pi, at) in points.iter().enumerate() {
            let target = crjet_cli::input::parse_point(at).unwrap();
            let want = closed(&target[0], &target[1]).expect("point outside the map's domain");
            let seed = pi.to_string();
            let report = run_report(
                &[
                    "reconstruct", &heis, &heis, "--map", &map, "--at", at, "--seed", &seed,
                ],
                0,
            );
            let r = &report["result"];
            assert_eq!(
                r["value"],
                Value::String(gauss::fmt_point(&want)),
                "{name} at {at}"
            );
            assert_eq!(r["verdict"], "equal", "{name} at {at}");
            assert_eq!(r["determinacy_order"], 4);
        }
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs() < 60,
        "reconstruction batch took {elapsed:?}, budget is 60s"
    );
    pass(1, "heisenberg reconstruction from order-4 jets");
}

/// One reflection step of the Moebius germ across the chain pair
/// (0, conj (1,0)): the transported jet's value and Jacobian have
/// closed forms.
#[test]
fn criterion_2_one_step_reflection_oracle() {
    let ctx = ReflectionContext::new(examples::heisenberg(), examples::heisenberg(), 6).unwrap();
    let origin = vec![gauss::zero(); 2];
    let e1 = vec![gauss::from_int(1), gauss::zero()];
    let fj = JetAt::of(examples::moebius_auto(2), false);
    let out = reflection::reflect_jet(&ctx, &fj, (&origin, &e1), 1).unwrap();
    assert!(out.conjugated, "one step lands on the conjugate side");
    assert_eq!(out.point, e1);
    assert_eq!(out.order, 1);
    assert_eq!(out.value(), e1);
    let want = Matrix::from_rows(vec![
        vec![gauss::from_int(1), gauss::from_int(1)],
        vec![gauss::zero(), gauss::from_int(1)],
    ]);
    assert_eq!(out.germ.jacobian(), want);
    pass(2, "one-step reflection oracle");
}

/// Levi-form nondegeneracy at the base is equivalent to
/// 1-nondegeneracy, across the whole fixture suite.
#[test]
fn criterion_3_levi_nondegeneracy_equivalence() {
    for (name, spec) in fixtures() {
        let verdict = geometry::levi_tests(&geometry::levi_form(&spec).unwrap());
        let k1 = geometry::nondegeneracy_order(&spec, 1).unwrap();
        assert_eq!(
            verdict.nondegenerate,
            k1 == Some(1),
            "{name}: levi verdict {:?} vs nondegeneracy order {k1:?}",
            verdict.nondegenerate
        );
    }
    pass(3, "levi nondegeneracy equivalence");
}

/// The codimension-two quadric pair: both have CR dimension 2, the
/// source Levi form is surjective, the target one is nondegenerate but
/// not surjective, and the linear projection between them is accepted.
#[test]
fn criterion_4_quadric_pair_analysis_and_projection() {
    let dir = tempfile::tempdir().unwrap();
    let src = write_file(dir.path(), "src.cr", QUADRIC_SOURCE_CR);
    let tgt = write_file(dir.path(), "tgt.cr", QUADRIC_TARGET_CR);
    let map = write_file(dir.path(), "proj.map", PROJECTION_MAP);

    let m = run_report(&["analyze", &src], 0);
    assert_eq!(m["result"]["cr_dim"], 2);
    assert_eq!(m["result"]["cr_codim"], 2);
    assert_eq!(m["result"]["levi_surjective"], true);

    let mp = run_report(&["analyze", &tgt], 0);
    assert_eq!(mp["result"]["cr_dim"], 2);
    assert_eq!(mp["result"]["cr_codim"], 2);
    assert_eq!(mp["result"]["levi_nondegenerate"], true);
    assert_eq!(mp["result"]["levi_surjective"], false);

    let v = run_report(&["verify", &src, &tgt, "--map", &map], 0);
    assert_eq!(v["result"]["admissible"], true);
    assert_eq!(v["result"]["verdict"], "accepted");
    pass(4, "quadric pair analysis and projection");
}

/// The hyperquadric contains the complex line (1, t, t) — shown
/// symbolically by substituting the line into the recentred defining
/// polynomial — while the collapse map onto that line is rejected.
#[test]
fn criterion_5_hyperquadric_line_membership_and_collapse_rejection() {
    let m = examples::hyperquadric();
    let (p, v) = examples::hyperquadric_line();
    let conj_p: Vec<GaussRat> = p.iter().map(gauss::conj).collect();
    let rho_local = m.rho_at(&p, &conj_p);
    let order = rho_local.iter().map(TruncatedSeries::order).max().unwrap();
    // Two formal parameters: t along the line, s along its conjugate.
    let mut args = Vec::with_capacity(2 * m.n());
    for dir in &v {
        args.push(TruncatedSeries::variable(2, order, 0).scale(dir));
    }
    for dir in &v {
        args.push(TruncatedSeries::variable(2, order, 1).scale(&gauss::conj(dir)));
    }
    for (j, rho) in rho_local.iter().enumerate() {
        assert!(
            rho.substitute(&args).is_zero(),
            "rho_{j} does not vanish identically on the line"
        );
    }

    let dir = tempfile::tempdir().unwrap();
    let hq = write_file(dir.path(), "hq.cr", HYPERQUADRIC_CR);
    let collapse = write_file(dir.path(), "collapse.map", COLLAPSE_MAP);
    let report = run_report(&["verify", &hq, &hq, "--map", &collapse], 1);
    assert_eq!(report["result"]["admissible"], false);
    assert_eq!(report["result"]["verdict"], "rejected");
    pass(5, "hyperquadric line membership and collapse rejection");
}

/// The order-4 jet determines the reconstruction: bumping order-5 and
/// order-6 coefficients of the Moebius germ changes neither the values
/// nor the sampled chains, in the library and through the binary.
#[test]
fn criterion_6_jet_sufficiency_at_the_determining_order() {
    let started = Instant::now();
    let heis = examples::heisenberg();
    let ctx = ReflectionContext::new(heis.clone(), heis, 10).unwrap();
    assert_eq!(ctx.determinacy_order(), 4);

    let base_jet = JetAt::of(examples::moebius_auto(4), false);
    let mut comps = examples::moebius_auto(6).components().to_vec();
    comps[0].add_term(Multidegree(vec![2, 3]), gauss::ratio(5, 7));
    comps[1].add_term(Multidegree(vec![0, 6]), gauss::ratio_c(0, 1, -2, 3));
    let perturbed = JetAt::of(MapGerm::new(vec![gauss::zero(); 2], comps), false);

    let targets = ["(1/3, 1/5)", "(1/2, -1/3)", "(-2/5, 3/7)"];
    for (ti, at) in targets.iter().enumerate() {
        let target = crjet_cli::input::parse_point(at).unwrap();
        let seed = gauss::derive_seed(SUITE, &[6, ti as u64]);
        let a = reflection::reconstruct_at(&ctx, &base_jet, &target, seed, 8).unwrap();
        let b = reflection::reconstruct_at(&ctx, &perturbed, &target, seed, 8).unwrap();
        assert_eq!(a.value, b.value, "value drifted at {at}");
        assert_eq!(a.chain.points, b.chain.points, "chain drifted at {at}");
    }

    // Same experiment end to end: two map files differing only above
    // order 4 produce byte-identical result objects.
    let dir = tempfile::tempdir().unwrap();
    let heis_path = write_file(dir.path(), "heis.cr", HEIS_CR);
    let fmob = write_file(dir.path(), "fmob6.map", FMOB6_MAP);
    let bumped = write_file(
        dir.path(),
        "bumped.map",
        "vars z w\n\
         f1: z + z*w + z*w^2 + z*w^3 + z*w^4 + z*w^5 + 5/7*z^2*w^3\n\
         f2: w + w^2 + w^3 + w^4 + w^5 + w^6 - 2/3*i*w^6\n",
    );
    let args = |map: &str| {
        vec![
            "reconstruct".to_string(),
            heis_path.clone(),
            heis_path.clone(),
            "--map".into(),
            map.to_string(),
            "--at".into(),
            "(1/3, 1/5)".into(),
            "--seed".into(),
            "11".into(),
        ]
    };
    let ra = run_report(&args(&fmob).iter().map(String::as_str).collect::<Vec<_>>(), 0);
    let rb = run_report(&args(&bumped).iter().map(String::as_str).collect::<Vec<_>>(), 0);
    assert_eq!(ra["result"], rb["result"]);

    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs() < 30,
        "jet sufficiency took {elapsed:?}, budget is 30s"
    );
    pass(6, "jet sufficiency at the determining order");
}

fn md_with_total(rng: &mut ChaCha8Rng, nvars: usize, total: u32) -> Multidegree {
    let mut exps = vec![0u32; nvars];
    for _ in 0..total {
        exps[rng.gen_range(0..nvars)] += 1;
    }
    Multidegree(exps)
}

fn identity_germ(nvars: usize, order: u32) -> MapGerm {
    MapGerm::new(
        vec![gauss::zero(); nvars],
        (0..nvars)
            .map(|j| TruncatedSeries::variable(nvars, order, j))
            .collect(),
    )
}

/// One hundred randomized instances split between compositional
/// inversion and implicit solving, all checked by exact recomposition.
#[test]
fn criterion_7_series_engine_inversion_identities() {
    let started = Instant::now();
    const ORDER: u32 = 8;

    for case in 0..50u64 {
        let mut rng = gauss::rng_for(SUITE, &[7, 1, case]);
        let n = 1 + (case as usize) % 3;
        let rows = loop {
            let cand: Vec<Vec<GaussRat>> = (0..n)
                .map(|_| (0..n).map(|_| gauss::sample_gauss(&mut rng, 3)).collect())
                .collect();
            if Matrix::from_rows(cand.clone()).rank() == n {
                break cand;
            }
        };
        let comps: Vec<TruncatedSeries> = rows
            .iter()
            .map(|row| {
                let mut s = TruncatedSeries::zero(n, ORDER);
                for (j, c) in row.iter().enumerate() {
                    s.add_term(Multidegree::unit(n, j), c.clone());
                }
                for _ in 0..rng.gen_range(0..=4) {
                    let total = rng.gen_range(2..=4);
                    s.add_term(md_with_total(&mut rng, n, total), gauss::sample_gauss(&mut rng, 4));
                }
                s
            })
            .collect();
        let f = MapGerm::new(vec![gauss::zero(); n], comps);
        let finv = f.comp_inverse().unwrap_or_else(|e| panic!("case {case}: {e}"));
        let id = identity_germ(n, ORDER);
        assert_eq!(
            MapGerm::compose(&f, &finv).unwrap(),
            id,
            "case {case}: f o f^-1 != id"
        );
        assert_eq!(
            MapGerm::compose(&finv, &f).unwrap(),
            id,
            "case {case}: f^-1 o f != id"
        );
    }

    const SHAPES: [(usize, usize); 3] = [(1, 1), (2, 1), (1, 2)];
    for case in 0..50u64 {
        let mut rng = gauss::rng_for(SUITE, &[7, 2, case]);
        let (p, q) = SHAPES[(case as usize) % 3];
        let nv = p + q;
        let comps: Vec<TruncatedSeries> = (0..q)
            .map(|j| {
                let mut s = TruncatedSeries::variable(nv, ORDER, p + j);
                for k in 0..p {
                    s.add_term(Multidegree::unit(nv, k), gauss::sample_gauss(&mut rng, 3));
                }
                for _ in 0..rng.gen_range(0..=4) {
                    let total = rng.gen_range(2..=4);
                    s.add_term(md_with_total(&mut rng, nv, total), gauss::sample_gauss(&mut rng, 4));
                }
                s
            })
            .collect();
        let f = MapGerm::new(vec![gauss::zero(); nv], comps);
        let h = MapGerm::implicit_solve(&f, p).unwrap_or_else(|e| panic!("case {case}: {e}"));
        let graph = identity_germ(p, ORDER).stack(&h);
        let residual = MapGerm::compose(&f, &graph).unwrap();
        for (j, comp) in residual.components().iter().enumerate() {
            assert!(comp.is_zero(), "case {case}: residual {j} is nonzero");
        }
    }

    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs() < 30,
        "series identities took {elapsed:?}, budget is 30s"
    );
    pass(7, "series engine inversion identities");
}

/// The links of a chain as (holomorphic point, conjugate parameter)
/// pairs on the complexification.
fn link_pairs(chain: &ChainPoint) -> Vec<(&[GaussRat], &[GaussRat])> {
    (1..chain.points.len())
        .map(|i| {
            if i % 2 == 1 {
                (chain.points[i - 1].as_slice(), chain.points[i].as_slice())
            } else {
                (chain.points[i].as_slice(), chain.points[i - 1].as_slice())
            }
        })
        .collect()
}

/// Segre geometry: membership symmetry on fifty sampled pairs per
/// fixture, identically vanishing graph residuals to order 6, and the
/// Heisenberg Segre-set ranks with their minimality certificate.
#[test]
fn criterion_8_segre_symmetry_residuals_and_minimality() {
    const ORDER: u32 = 6;
    for (fi, (name, spec)) in fixtures().into_iter().enumerate() {
        let cx = segre::complexify(&spec).unwrap();

        let mut pairs = 0usize;
        let mut chain_idx = 0u64;
        while pairs < 50 {
            let seed = gauss::derive_seed(SUITE, &[8, fi as u64, chain_idx]);
            let chain = segre::chain_sample(&cx, spec.base(), 3, seed, 8)
                .unwrap_or_else(|e| panic!("{name} chain {chain_idx}: {e}"));
            for (z, chi) in link_pairs(&chain) {
                assert!(cx.membership(z, chi), "{name}: pair off the complexification");
                let wz: Vec<GaussRat> = chi.iter().map(gauss::conj).collect();
                let wchi: Vec<GaussRat> = z.iter().map(gauss::conj).collect();
                assert!(
                    cx.membership(&wz, &wchi),
                    "{name} chain {chain_idx}: z in Q_w but w not in Q_z"
                );
                pairs += 1;
            }
            chain_idx += 1;
        }

        let graph = cx.graph_at(spec.base(), &spec.conj_base(), ORDER).unwrap();
        let stacked = graph.embedding().stack(&graph.chi_embedding());
        let center: Vec<GaussRat> = spec
            .base()
            .iter()
            .cloned()
            .chain(spec.conj_base())
            .collect();
        let outer = MapGerm::new(
            vec![gauss::zero(); 2 * spec.n()],
            spec.rho()
                .iter()
                .map(|r| r.raised(ORDER.max(r.order())))
                .collect(),
        )
        .recenter_exact(center);
        let residual = MapGerm::compose(&outer, &stacked).unwrap();
        for (j, comp) in residual.components().iter().enumerate() {
            assert!(comp.is_zero(), "{name}: rho_{j} residual is nonzero");
        }
    }

    let heis = examples::heisenberg();
    let cx = segre::complexify(&heis).unwrap();
    let seed = gauss::derive_seed(SUITE, &[8, 100]);
    assert_eq!(segre::segre_set_rank(&cx, heis.base(), 1, seed, 8).unwrap(), 1);
    assert_eq!(segre::segre_set_rank(&cx, heis.base(), 2, seed, 8).unwrap(), 2);
    assert_eq!(geometry::minimality_order(&heis, 2, 8, seed).unwrap(), Some(2));
    pass(8, "segre symmetry, residuals, and minimality");
}

/// Reflecting any automorphism jet out along a Segre chain and straight
/// back reproduces the jet, shortened by one reflection order per step.
#[test]
fn criterion_9_double_reflection_involution() {
    let heis = examples::heisenberg();
    let ctx = ReflectionContext::new(heis.clone(), heis, 6).unwrap();
    let origin = vec![gauss::zero(); 2];
    let e1 = vec![gauss::from_int(1), gauss::zero()];
    let chain = ChainPoint {
        points: vec![origin.clone(), e1, origin.clone()],
    };
    chain.verify(ctx.source_cx()).unwrap();

    let autos: [(&str, MapGerm); 5] = [
        ("identity", examples::identity_auto(4)),
        ("dilation", examples::dilation_auto(4)),
        ("rotation", examples::rotation_auto(4)),
        ("translation", examples::translation_auto(4)),
        ("moebius", examples::moebius_auto(4)),
    ];
    for (name, auto) in autos {
        let fj = JetAt::of(auto.clone(), false);
        let out = reflection::reflect_chain(&ctx, &fj, &chain, 2)
            .unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(!out.conjugated, "{name}: parity lost");
        assert_eq!(out.point, origin, "{name}: wrong endpoint");
        assert_eq!(out.order, 2, "{name}: wrong order");
        assert_eq!(out.germ, auto.truncated(2), "{name}: jet not reproduced");
    }
    pass(9, "double-reflection involution");
}
