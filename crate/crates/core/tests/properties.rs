//! Property tests over seeded random instances. Proptest picks the seed, the
//! rank and the field; the instance itself comes from the library sampler.

use ortho_hecke::dual_module::{module_structure, quotient_structure, Ambient};
use ortho_hecke::hecke::{hecke_orthogonal, w2_parity};
use ortho_hecke::quad_space::QuadraticSpace;
use ortho_hecke::sample;
use ortho_hecke::strata::{
    lagrangian_from_skew, orth_iota, orth_project, plain_iota, plain_project, skew_from_lagrangian, stratum_data,
    submodule_from_flag,
};
use ortho_hecke::tangent::tangent_dim;
use ortho_hecke::verify::random_hecke;
use ortho_hecke::FieldSpec;
use proptest::prelude::*;

fn field_strategy() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        Just(FieldSpec::rationals()),
        Just(FieldSpec::prime(3).unwrap()),
        Just(FieldSpec::prime(5).unwrap()),
        Just(FieldSpec::prime(7).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn matrix_rank_nullity(seed in any::<u64>(), rows in 1usize..6, cols in 1usize..6, field in field_strategy()) {
        let mut rng = sample::rng(seed, 0);
        let m = sample::matrix(&mut rng, field, rows, cols);
        prop_assert_eq!(m.rank() + m.kernel_basis().cols(), cols);
        let span = m.column_span();
        prop_assert_eq!(span.column_span(), span.clone());
        prop_assert!(span.same_span(&m).unwrap());
    }

    #[test]
    fn submodule_and_quotient_share_torsion(seed in any::<u64>(), r in 1usize..6, field in field_strategy(), flag in any::<bool>()) {
        let mut rng = sample::rng(seed, 1);
        let amb = Ambient::new(r, field);
        let l = if flag {
            let n = rand::Rng::gen_range(&mut rng, 0..=2 * r);
            sample::flag_submodule(&mut rng, amb, n).1
        } else {
            sample::spanned_submodule(&mut rng, amb)
        };
        let sub = module_structure(&l);
        let quot = quotient_structure(&l);
        prop_assert_eq!(sub.torsion_degree, quot.torsion_degree);
        prop_assert_eq!(sub.f * 2 + sub.g, l.dim());
    }

    #[test]
    fn flag_data_round_trip(seed in any::<u64>(), r in 1usize..6, field in field_strategy()) {
        let mut rng = sample::rng(seed, 2);
        let amb = Ambient::new(r, field);
        let n = rand::Rng::gen_range(&mut rng, 0..=2 * r);
        let (d, l) = sample::flag_submodule(&mut rng, amb, n);
        let rep = stratum_data(&l, None);
        prop_assert_eq!(rep.i, d.f.cols());
        prop_assert_eq!(rep.torsion_degree as i64, n as i64 - 2 * rep.i as i64);
        prop_assert_eq!(&submodule_from_flag(amb, &rep.flag).unwrap(), &l);
        let back = plain_project(amb, &plain_iota(&rep.flag).unwrap()).unwrap();
        prop_assert_eq!(&back, &l);
        let t = tangent_dim(&l);
        prop_assert_eq!(t.dim_hom0, t.expected_dim);
    }

    #[test]
    fn skew_data_round_trip(seed in any::<u64>(), r in 1usize..7, field in field_strategy()) {
        let mut rng = sample::rng(seed, 3);
        let ef = QuadraticSpace::hyperbolic(r, field).extend();
        let i = rand::Rng::gen_range(&mut rng, 0..=r / 2);
        let (s, l) = sample::lagrangian(&mut rng, &ef, i);
        prop_assert!(ef.is_lagrangian(&l));
        let back = skew_from_lagrangian(&ef, &l).unwrap();
        prop_assert_eq!(&back.f, &s.f);
        prop_assert_eq!(&back.omega, &s.omega);
        prop_assert_eq!(&lagrangian_from_skew(&ef, &back).unwrap(), &l);
        prop_assert_eq!(&orth_project(&ef, &orth_iota(&ef, &s).unwrap()).unwrap(), &l);
        prop_assert_eq!(ef.component_index(&l).unwrap() as usize, i % 2);
    }

    #[test]
    fn hecke_invariants(seed in any::<u64>(), max_r in 1usize..6) {
        let inst = &random_hecke(1, seed, 0, max_r, 3)[0];
        let i = inst.lagrangian.projection().cols() as u8;
        let rep = hecke_orthogonal(&inst.bundle, &inst.lagrangian).unwrap();
        prop_assert_eq!(rep.output_type.iter().sum::<i64>(), 0);
        prop_assert!(!rep.gram_det_at_x.is_zero());
        prop_assert_eq!(w2_parity(&rep.output_type), (w2_parity(inst.bundle.degrees()) + i) % 2);
        prop_assert_eq!(&rep.two_step_type, &rep.output_type);
        prop_assert!(rep.reciprocity_ok);
    }
}
