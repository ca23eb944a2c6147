//! Invariants of Segre varieties, graphs, jets, and chains, exercised
//! across the whole fixture suite with seeded sampling.

use crjet_core::gauss::{self, GaussRat};
use crjet_core::geometry::{self, ManifoldSpec};
use crjet_core::germ::MapGerm;
use crjet_core::segre;
use crjet_core::series::TruncatedSeries;
use crjet_core::examples;

const SUITE: u64 = 0x5e6_4e7;

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

/// The links of a chain as (holomorphic point, conjugate parameter)
/// pairs on the complexification.
fn link_pairs(chain: &segre::ChainPoint) -> Vec<(&[GaussRat], &[GaussRat])> {
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

/// z lies on the Segre variety of w exactly when w lies on the Segre
/// variety of z: membership survives swapping the roles and conjugating
/// both points. At least fifty sampled pairs per fixture.
#[test]
fn segre_membership_is_symmetric() {
    for (fi, (name, spec)) in fixtures().into_iter().enumerate() {
        let cx = segre::complexify(&spec).unwrap();
        let mut pairs = 0usize;
        let mut chain_idx = 0u64;
        while pairs < 50 {
            let seed = gauss::derive_seed(SUITE, &[1, fi as u64, chain_idx]);
            let chain = segre::chain_sample(&cx, spec.base(), 3, seed, 8)
                .unwrap_or_else(|e| panic!("{name} chain {chain_idx}: sampling failed: {e}"));
            chain.verify(&cx).unwrap();
            for (z, chi) in link_pairs(&chain) {
                assert!(
                    cx.membership(z, chi),
                    "{name} chain {chain_idx}: sampled pair not on the complexification"
                );
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
    }
}

/// Substituting a Segre graph back into the defining equations yields
/// the zero series to the full truncation order, at the base pair and
/// at sampled off-base centers.
#[test]
fn segre_graphs_satisfy_the_defining_equations() {
    const ORDER: u32 = 6;
    for (fi, (name, spec)) in fixtures().into_iter().enumerate() {
        let cx = segre::complexify(&spec).unwrap();
        let mut centers: Vec<(Vec<GaussRat>, Vec<GaussRat>)> =
            vec![(spec.base().to_vec(), spec.conj_base())];
        let seed = gauss::derive_seed(SUITE, &[2, fi as u64]);
        let chain = segre::chain_sample(&cx, spec.base(), 3, seed, 8).unwrap();
        for (z, chi) in link_pairs(&chain) {
            centers.push((z.to_vec(), chi.to_vec()));
        }
        for (ci, (z0, chi0)) in centers.iter().enumerate() {
            let graph = cx
                .graph_at(z0, chi0, ORDER)
                .unwrap_or_else(|e| panic!("{name} center {ci}: no graph: {e}"));
            let stacked = graph.embedding().stack(&graph.chi_embedding());
            let center: Vec<GaussRat> = z0.iter().chain(chi0.iter()).cloned().collect();
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
                assert!(
                    comp.is_zero(),
                    "{name} center {ci}: rho_{j} does not vanish on its Segre graph"
                );
            }
        }
    }
}

/// For an admissible map f: (M, x) -> M', substituting the source Segre
/// graph into rho' composed with (f, conj-f) gives the zero series: f
/// maps Segre varieties into Segre varieties.
#[test]
fn admissible_maps_send_segre_varieties_into_segre_varieties() {
    const ORDER: u32 = 6;
    let heis = examples::heisenberg();
    let cases: Vec<(&str, ManifoldSpec, ManifoldSpec, MapGerm)> = vec![
        ("identity", heis.clone(), heis.clone(), examples::identity_auto(ORDER)),
        ("dilation", heis.clone(), heis.clone(), examples::dilation_auto(ORDER)),
        ("rotation", heis.clone(), heis.clone(), examples::rotation_auto(ORDER)),
        ("translation", heis.clone(), heis.clone(), examples::translation_auto(ORDER)),
        ("moebius", heis.clone(), heis.clone(), examples::moebius_auto(ORDER)),
        (
            "projection",
            examples::quadric_pair_source(),
            examples::quadric_pair_target(),
            examples::quadric_pair_projection(ORDER),
        ),
    ];
    for (name, m, mp, f) in cases {
        assert!(
            geometry::check_admissible(&f, &m, &mp, ORDER).unwrap(),
            "{name}: fixture map unexpectedly inadmissible"
        );
        let cx = segre::complexify(&m).unwrap();
        let graph = cx.graph_at(m.base(), &m.conj_base(), ORDER).unwrap();
        let stacked = graph.embedding().stack(&graph.chi_embedding());
        let n = m.n();
        let np = mp.n();
        let fbar = f.conjugate();
        let mut mid_comps: Vec<TruncatedSeries> = Vec::with_capacity(2 * np);
        let fwd: Vec<usize> = (0..n).collect();
        let bwd: Vec<usize> = (n..2 * n).collect();
        for c in f.components() {
            mid_comps.push(c.embed(2 * n, &fwd));
        }
        for c in fbar.components() {
            mid_comps.push(c.embed(2 * n, &bwd));
        }
        let mut mid_base = f.base().to_vec();
        mid_base.extend(fbar.base().to_vec());
        let mid = MapGerm::new(mid_base, mid_comps);
        let pushed = MapGerm::compose(&mid, &stacked).unwrap();
        let outer = MapGerm::new(
            vec![gauss::zero(); 2 * np],
            mp.rho()
                .iter()
                .map(|r| r.raised(ORDER.max(r.order())))
                .collect(),
        )
        .recenter_exact(pushed.value());
        let residual = MapGerm::compose(&outer, &pushed).unwrap();
        for (j, comp) in residual.components().iter().enumerate() {
            assert!(
                comp.is_zero(),
                "{name}: rho'_{j}(f, conj-f) does not vanish along the source Segre graph"
            );
        }
    }
}

/// Segre-set ranks grow monotonically with the chain length and never
/// exceed the ambient dimension.
#[test]
fn segre_set_ranks_are_monotone_in_chain_length() {
    for (fi, (name, spec)) in fixtures().into_iter().enumerate() {
        let cx = segre::complexify(&spec).unwrap();
        let mut prev = 0usize;
        for s in 1..=spec.d() + 2 {
            let seed = gauss::derive_seed(SUITE, &[3, fi as u64, s as u64]);
            let rank = segre::segre_set_rank(&cx, spec.base(), s, seed, 4)
                .unwrap_or_else(|e| panic!("{name} s = {s}: rank computation failed: {e}"));
            assert!(
                rank >= prev,
                "{name}: Segre-set rank dropped from {prev} to {rank} at s = {s}"
            );
            assert!(rank <= spec.n(), "{name}: rank exceeds ambient dimension");
            prev = rank;
        }
    }
}

/// By-hand Segre-set ranks for the Heisenberg hypersurface: the first
/// Segre set is the one-dimensional variety Q_0, the second already
/// fills an open piece of C^2, which is the s = 2 minimality
/// certificate.
#[test]
fn heisenberg_segre_ranks_match_the_by_hand_values() {
    let spec = examples::heisenberg();
    let cx = segre::complexify(&spec).unwrap();
    let r1 = segre::segre_set_rank(&cx, spec.base(), 1, 0x915, 4).unwrap();
    let r2 = segre::segre_set_rank(&cx, spec.base(), 2, 0x915, 4).unwrap();
    assert_eq!((r1, r2), (1, 2), "Heisenberg Segre-set ranks are off");
    assert_eq!(
        geometry::minimality_order(&spec, 2, 4, 0x915).unwrap(),
        Some(2),
        "certificate length should be exactly 2"
    );
}

/// Every fixture with a finite nondegeneracy order r admits an exact
/// left inverse of its jet-of-Segre map, and that inverse composes with
/// the selected rows to the identity.
#[test]
fn jet_of_segre_maps_admit_exact_left_inverses() {
    for (name, spec) in fixtures() {
        let r = match geometry::nondegeneracy_order(&spec, 4).unwrap() {
            Some(r) => r,
            None => continue,
        };
        let cx = segre::complexify(&spec).unwrap();
        let graph = cx.graph_at(spec.base(), &spec.conj_base(), r + 2).unwrap();
        let jq = segre::jet_of_segre(&graph, r).unwrap();
        let li = segre::left_inverse_jetq(&jq)
            .unwrap_or_else(|e| panic!("{name}: no left inverse: {e}"));
        assert_eq!(li.rows.len(), spec.n(), "{name}: wrong selection size");
        let sel = MapGerm::new(
            jq.map.base().to_vec(),
            li.rows.iter().map(|&i| jq.map.component(i).clone()).collect(),
        );
        let roundtrip = MapGerm::compose(&li.germ, &sel).unwrap();
        assert_eq!(
            roundtrip,
            MapGerm::identity(jq.map.base().to_vec(), roundtrip.order()),
            "{name}: left inverse does not undo the selected jet rows"
        );
    }
}

/// Chains with an even number of links close up on arbitrary reachable
/// targets; the final point is hit exactly and every link is verified.
#[test]
fn chains_close_on_requested_targets() {
    let spec = examples::heisenberg();
    let cx = segre::complexify(&spec).unwrap();
    for case in 0..10u64 {
        let mut rng = gauss::rng_for(SUITE, &[4, case]);
        let target = vec![
            gauss::sample_gauss(&mut rng, 3),
            gauss::sample_gauss(&mut rng, 3),
        ];
        let seed = gauss::derive_seed(SUITE, &[5, case]);
        let chain = match segre::chain_to_target(&cx, spec.base(), 4, &target, seed, 8) {
            Ok(c) => c,
            Err(e) => panic!("case {case}: closing failed for a generic target: {e}"),
        };
        assert_eq!(chain.steps(), 4, "case {case}: wrong chain length");
        assert_eq!(chain.last(), target.as_slice(), "case {case}: target missed");
        chain.verify(&cx).unwrap();
    }
}
