use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use sympsurf::chart::{Cutoff, CutoffProfile, LocalGraphSurface, Perturbation};
use sympsurf::divisor::{
    multiple_curve_invariants, seifert_h2, IntersectionLattice, IsotropyDatum, MultipleCurveQuery,
    SeifertInput,
};
use sympsurf::plane::{
    classify_z_graph, convert_graph, convert_w_graph, normalize_slope, oracle_classify, Exact,
    GraphOverZ, PlaneBasis,
};

fn rational() -> impl Strategy<Value = Exact> {
    (-30i64..=30, 1i64..=9).prop_map(|(p, q)| BigRational::new(BigInt::from(p), BigInt::from(q)))
}

fn exact_graph() -> impl Strategy<Value = GraphOverZ<Exact>> {
    (rational(), rational(), rational(), rational())
        .prop_map(|(a, b, c, d)| GraphOverZ::new(Complex::new(a, b), Complex::new(c, d)))
}

fn small_matrix(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    proptest::collection::vec(-4i64..=4, n * n).prop_map(move |v| {
        let mut q = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..=i {
                q[i][j] = v[i * n + j];
                q[j][i] = v[i * n + j];
            }
        }
        q
    })
}

fn lattice(q: Vec<Vec<i64>>) -> IntersectionLattice {
    let n = q.len();
    IntersectionLattice::new((0..n).map(|i| format!("e{i}")).collect(), q, vec![0; n], vec![]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn exact_classification_matches_oracle(g in exact_graph()) {
        let o = oracle_classify(&PlaneBasis::horizontal(), &g.basis()).unwrap();
        prop_assert_eq!(classify_z_graph(&g).flags(), o.flags());
    }

    #[test]
    fn conversion_round_trips_exactly(g in exact_graph()) {
        prop_assume!(!g.holomorphic_excess().is_zero());
        let back = convert_w_graph(&convert_graph(&g).unwrap()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn normalize_slope_is_special_unitary(re in -5.0f64..5.0, im in -5.0f64..5.0) {
        let m = normalize_slope(Complex64::new(re, im));
        prop_assert!(m.is_special_unitary(1e-12));
    }

    #[test]
    fn cutoff_values_stay_in_unit_interval(t in -1.0f64..4.0) {
        for p in [CutoffProfile::RISE, CutoffProfile::FALL] {
            let v = p.value(t);
            prop_assert!((0.0..=1.0).contains(&v));
            prop_assert!(p.derivative(t).abs() <= sympsurf::chart::cutoff::MAX_SLOPE + 1e-12);
        }
    }

    #[test]
    fn surface_unchanged_beyond_support(t in 0.0f64..1.0, theta in 0.0f64..std::f64::consts::TAU) {
        let base = LocalGraphSurface::linear(Complex64::new(1.0, 0.5), Complex64::new(0.3, 0.0), 1.0);
        let mut s = base.clone();
        s.perturbations.push(Perturbation::AntiholomorphicCutoff {
            cutoff: Cutoff::radial(CutoffProfile::RISE, 0.1),
        });
        let inner = s.support_radius() * (1.0 + 1e-12);
        prop_assume!(inner < 1.0);
        let z = Complex64::from_polar(inner + t * (1.0 - inner), theta);
        prop_assert_eq!(s.eval(z), base.eval(z));
    }

    #[test]
    fn pairing_is_bilinear_and_symmetric(
        q in small_matrix(4),
        x in proptest::collection::vec(-5i64..=5, 4),
        y in proptest::collection::vec(-5i64..=5, 4),
        z in proptest::collection::vec(-5i64..=5, 4),
    ) {
        let lat = lattice(q);
        let xy: Vec<i64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        prop_assert_eq!(lat.pair(&xy, &z).unwrap(), lat.pair(&x, &z).unwrap() + lat.pair(&y, &z).unwrap());
        prop_assert_eq!(lat.pair(&x, &y).unwrap(), lat.pair(&y, &x).unwrap());
    }

    #[test]
    fn signature_invariant_under_unimodular_change(
        q in small_matrix(4),
        ops in proptest::collection::vec((0usize..4, 0usize..4, -2i64..=2), 1..6),
    ) {
        // P = product of elementary matrices e_i += k e_j
        let n = 4;
        let mut p: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        for (i, j, k) in ops {
            if i != j {
                let src = p[j].clone();
                for (dst, s) in p[i].iter_mut().zip(src) {
                    *dst += k * s;
                }
            }
        }
        let mut q2 = vec![vec![0i64; n]; n];
        for a in 0..n {
            for b in 0..n {
                q2[a][b] = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| p[a][i] * q[i][j] * p[b][j]).sum();
            }
        }
        prop_assert_eq!(lattice(q.clone()).signature(), lattice(q2).signature());
    }

    #[test]
    fn multiple_curves_agree_with_adjunction(k in 1i64..40, g in 0i64..30) {
        // a lattice with one class C, C^2 = k and K·C = 2g - 2 - k
        let lat = IntersectionLattice::new(vec!["C".into()], vec![vec![k]], vec![2 * g - 2 - k], vec![]).unwrap();
        for n in 1..=50i64 {
            let (sq, genus) = multiple_curve_invariants(&MultipleCurveQuery { k, g, n }).unwrap();
            prop_assert_eq!(sq, lat.pair(&[n], &[n]).unwrap());
            prop_assert_eq!(genus as u64, lat.adjunction_genus(&[n]).unwrap());
        }
    }

    #[test]
    fn blow_up_keeps_genera(s in -3i64..6, m in 0u64..=1) {
        // a sphere with C^2 = s and K·C = -2 - s
        let lat = IntersectionLattice::new(vec!["C".into()], vec![vec![s]], vec![-2 - s], vec![Some(0)]).unwrap();
        let b = lat.blow_up(&[(0, m)]).unwrap();
        prop_assert_eq!(b.adjunction_genus(&b.basis(0)).unwrap(), 0);
        prop_assert_eq!(b.adjunction_genus(&b.basis(1)).unwrap(), 0);
        let (s0, s1) = (lat.signature(), b.signature());
        prop_assert_eq!((s1.b_plus, s1.b_minus, s1.b_zero), (s0.b_plus, s0.b_minus + 1, s0.b_zero));
    }

    #[test]
    fn seifert_rank_and_order(
        b2x in 1u64..6,
        data in proptest::collection::vec((1u64..30, 0u64..4), 0..5),
    ) {
        let input = SeifertInput {
            b2x,
            data: data.iter().map(|&(m, g)| IsotropyDatum { m, g }).collect(),
            adjacency: None,
        };
        let g = seifert_h2(&input).unwrap();
        prop_assert_eq!(g.rank, b2x - 1);
        let order: num_bigint::BigUint = data.iter().map(|&(m, g)| num_bigint::BigUint::from(m).pow(2 * g as u32)).product();
        prop_assert_eq!(g.torsion_order(), order);
    }
}
