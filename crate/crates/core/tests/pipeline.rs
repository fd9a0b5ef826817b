use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rank3_core::expected::expected;
use rank3_core::geometry::{Family, PointSets};
use rank3_core::group::GroupAction;
use rank3_core::linalg::Matrix;
use rank3_core::make_prime_field;
use rank3_core::module::Rank3Module;
use rank3_core::pipeline::{analyze, geometry_stage, group_stage, space_spec, Options};
use rank3_core::report::{verify, Report};

#[test]
fn reports_are_deterministic() {
    let a = analyze(Family::OPlus, 3, 3, &Options::default()).unwrap();
    let b = analyze(Family::OPlus, 3, 3, &Options::default()).unwrap();
    assert_eq!(a.stable_json(), b.stable_json());
}

#[test]
fn structure_does_not_depend_on_seed() {
    let base = analyze(Family::Unitary, 4, 3, &Options::default()).unwrap();
    for seed in [1, 17] {
        let r = analyze(Family::Unitary, 4, 3, &Options { seed, ..Options::default() }).unwrap();
        assert!(r.verdict.matched);
        assert_eq!(r.factors, base.factors);
        assert_eq!(r.socle_series, base.socle_series);
        let dims = |r: &Report| {
            let mut d: Vec<usize> = r.lattice.nodes.iter().map(|n| n.dim).collect();
            d.sort();
            d
        };
        assert_eq!(dims(&r), dims(&base));
        assert!(r.shape().isomorphic(&base.shape()));
    }
}

#[test]
fn json_round_trip_and_idempotent_verify() {
    let r = analyze(Family::OMinus, 3, 3, &Options::default()).unwrap();
    let back = Report::from_json(&r.to_json()).unwrap();
    assert_eq!(back, r);
    let exp = expected(Family::OMinus, 3, 3).unwrap();
    assert_eq!(verify(&back, &exp), r.verdict);
    assert!(r.to_text().contains("verdict: PASS"));
}

#[test]
fn skip_order_keeps_structure() {
    let r = analyze(Family::OPlus, 3, 7, &Options { skip_order: true, ..Options::default() }).unwrap();
    assert_eq!(r.group.certificate, "bounds");
    assert_eq!(r.group.order, "40320");
    assert!(r.verdict.matched);
}

#[test]
fn wrong_label_dimension_is_reported() {
    let mut r = analyze(Family::OPlus, 3, 7, &Options::default()).unwrap();
    r.factors.retain(|f| f.dim != 19);
    let v = verify(&r, &expected(Family::OPlus, 3, 7).unwrap());
    assert!(!v.matched);
    assert!(v.diffs.iter().any(|d| d.starts_with("factors")));
}

struct Instance {
    ps: Arc<PointSets>,
    group: GroupAction,
    roots: [i64; 2],
}

fn instance(i: usize) -> &'static Instance {
    static CACHE: OnceLock<Vec<Instance>> = OnceLock::new();
    &CACHE.get_or_init(|| {
        [(Family::OPlus, 3), (Family::OMinus, 3), (Family::Unitary, 4)]
            .into_iter()
            .map(|(f, s)| {
                let geo = geometry_stage(space_spec(f, s).unwrap(), 3000).unwrap();
                let gs = group_stage(&geo, 0, false).unwrap();
                Instance { ps: geo.ps.clone(), group: gs.group, roots: [geo.roots.c, geo.roots.d] }
            })
            .collect()
    })[i]
}

fn module(i: usize, ell: u32) -> (Rank3Module, [i64; 2]) {
    let inst = instance(i);
    let f = make_prime_field(ell as i64).unwrap();
    let m = Rank3Module::new(f, inst.ps.clone(), &inst.group.point_perms(), &inst.group.singular_perms()).unwrap();
    (m, inst.roots)
}

const PRIMES: [u32; 8] = [3, 5, 7, 11, 13, 17, 19, 23];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn inner_product_and_t_are_invariant(i in 0usize..3, pi in 0usize..8, seed in any::<u64>()) {
        let ell = PRIMES[pi];
        let (m, _) = module(i, ell);
        let f = m.field().clone();
        let n = m.p.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = Matrix::from_vec(1, n, (0..n).map(|_| rng.gen_range(0..ell) as u8).collect());
        let y = Matrix::from_vec(1, n, (0..n).map(|_| rng.gen_range(0..ell) as u8).collect());
        for g in &m.p.gens {
            let (gx, gy) = (g.apply(&f, &x), g.apply(&f, &y));
            prop_assert_eq!(m.p.inner(gx.row(0), gy.row(0)), m.p.inner(x.row(0), y.row(0)));
            prop_assert_eq!(m.apply_t(&gx), g.apply(&f, &m.apply_t(&x)));
        }
    }

    #[test]
    fn t_acts_on_graph_submodule_by_minus_d(i in 0usize..3, pi in 0usize..8) {
        let ell = PRIMES[pi];
        let (m, [c, d]) = module(i, ell);
        let f = m.field().clone();
        for (root, other) in [(c, d), (d, c)] {
            let u = m.graph_submodule(root);
            let tu = m.apply_t(u.basis());
            let scale = f.reduce_int(-(other as i128));
            let mut want = u.basis().clone();
            for r in 0..want.rows() {
                for x in want.row_mut(r) {
                    *x = f.mul(*x, scale);
                }
            }
            prop_assert_eq!(tu, want);
        }
    }
}
