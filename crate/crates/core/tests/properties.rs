mod common;

use apolarity::apolar::{catalecticant_rank, graded_dim, hilbert};
use apolarity::bounds::{
    ah_generic_rank, border_bound_additive, border_bound_monomial, cactus_lower_a, gnp_vanishing, replay,
    wild_certificate, BorderBound, Strategy, WildVerdict,
};
use apolarity::families::{build, FamilyName, FamilySpec};
use apolarity::hessian::{hess_det, mixed_hessian, multiplication_map_rank};
use apolarity::parse::{parse_form, render};
use apolarity::powersum::binary_waring_rank;
use apolarity::{Form, LinearForm, Monomial, Partition, Poly, Vars};
use num_integer::binomial;
use proptest::prelude::*;
use rand::Rng;

use common::{binary_rank_oracle, dense_hilbert, q, random_form, rng};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hilbert_matches_dense_derivatives(seed in any::<u64>()) {
        let f = random_form(&mut rng(seed), 4, 1, 5);
        let h = hilbert(&f).unwrap();
        let oracle = dense_hilbert(&f);
        prop_assert_eq!(h.values(), oracle.as_slice());
        prop_assert!(h.is_symmetric());
        for k in 0..=f.degree() {
            prop_assert_eq!(catalecticant_rank(&f, k).unwrap(), h.get(k));
        }
    }

    #[test]
    fn multiplication_rank_is_hessian_rank(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_form(&mut r, 3, 2, 5);
        let d = f.degree();
        let l: Vec<i64> = (0..f.nvars()).map(|_| r.random_range(-3..=3)).collect();
        prop_assume!(l.iter().any(|&c| c != 0));
        let lf = LinearForm::from_ints(&l);
        let k = r.random_range(0..d);
        let l_deg = r.random_range(k + 1..=d);
        let mult = multiplication_map_rank(&f, &lf, k, l_deg).unwrap();
        let hess = mixed_hessian(&f, d - l_deg, k).unwrap().rank_at(lf.coeffs());
        prop_assert_eq!(mult, hess);
    }

    #[test]
    fn square_mixed_hessians_are_symmetric(seed in any::<u64>()) {
        let f = random_form(&mut rng(seed), 3, 2, 6);
        let k = f.degree() / 2;
        prop_assert!(mixed_hessian(&f, k, k).unwrap().is_symmetric());
    }

    #[test]
    fn binary_rank_matches_oracle(coeffs in prop::collection::vec(-3i64..=3, 2..=8)) {
        prop_assume!(coeffs.iter().any(|&c| c != 0));
        let d = coeffs.len() as u32 - 1;
        let p = Poly::from_terms(2, coeffs.iter().enumerate().map(|(i, &c)| (Monomial::new(vec![i as u32, d - i as u32]), q(c))));
        let f = Form::new(Vars::parse("x,y").unwrap(), p).unwrap();
        prop_assert_eq!(binary_waring_rank(&f).unwrap(), binary_rank_oracle(&coeffs));
    }

    #[test]
    fn additive_bound_is_exact_on_parts(seed in any::<u64>()) {
        let f = random_form(&mut rng(seed), 3, 1, 5);
        let names = f.vars().names().to_vec();
        let parts: Vec<(Poly, BorderBound)> = f
            .poly()
            .terms()
            .map(|(m, c)| (Poly::monomial(m.clone(), c.clone()), border_bound_monomial(m).unwrap()))
            .collect();
        let expected: usize = parts.iter().map(|(_, b)| b.value).sum();
        let total = border_bound_additive(&f, parts).unwrap();
        prop_assert_eq!(total.value, expected);
        if total.details.len() > 1 {
            let sum = total.details.iter().map(|b| b.value).sum::<usize>();
            prop_assert_eq!(sum, total.value);
            let vars = f.vars();
            let expanded = total
                .details
                .iter()
                .map(|b| parse_form(b.part.as_ref().unwrap(), vars).unwrap().into_poly())
                .fold(Poly::zero(f.nvars()), |acc, p| &acc + &p);
            prop_assert_eq!(render(&expanded, &names), f.render());
        }
    }

    #[test]
    fn separable_length_agrees_with_determinant(seed in any::<u64>()) {
        // Bidegree (1, e) forms in x0..x2 and u, v: hess vanishes once the
        // separable length exceeds 2.
        let mut r = rng(seed);
        let e = r.random_range(2..=4u32);
        let vars = Vars::parse("x0,x1,x2,u,v").unwrap();
        let mut terms = Vec::new();
        for i in 0..3 {
            for j in 0..=e {
                if r.random_bool(0.5) {
                    terms.push((Monomial::new(vec![(i == 0) as u32, (i == 1) as u32, (i == 2) as u32, e - j, j]), q(r.random_range(1..=3))));
                }
            }
        }
        let p = Poly::from_terms(5, terms);
        prop_assume!(!p.is_zero());
        let f = Form::new(vars.clone(), p).unwrap();
        let part = Partition::parse(&vars, "X=x0,x1,x2;U=u,v").unwrap();
        if let Some(cert) = gnp_vanishing(&f, &part, 1).unwrap() {
            prop_assert!(cert.slice_rank > 2);
            prop_assert!(hess_det(&f, 1, 12).unwrap().is_none());
        }
    }
}

#[test]
fn generic_rank_table() {
    // ceil(binom(n+d, d) / (n+1)), with the four exceptional cases one higher.
    let exceptions = [(2, 4), (3, 4), (4, 3), (4, 4)];
    let mut checked = 0;
    for n in 1..=5u32 {
        for d in 3..=6u32 {
            let dim = binomial(n + d, d);
            let mut want = dim.div_ceil(n + 1) as usize;
            if exceptions.contains(&(n, d)) {
                want += 1;
            }
            assert_eq!(ah_generic_rank(n, d).unwrap(), want, "({n},{d})");
            checked += 1;
        }
    }
    assert!(checked >= 20);
    for n in 1..=4 {
        assert_eq!(ah_generic_rank(n, 2).unwrap(), n as usize + 1);
    }
    assert_eq!(ah_generic_rank(2, 4).unwrap(), 6);
    assert_eq!(ah_generic_rank(4, 4).unwrap(), 15);
    assert_eq!(ah_generic_rank(4, 3).unwrap(), 8);
    assert_eq!(ah_generic_rank(3, 4).unwrap(), 10);
}

#[test]
fn certificates_replay() {
    for (name, params) in [
        (FamilyName::Ikeda, vec![]),
        (FamilyName::BbCubic, vec![]),
        (FamilyName::Perazzo, vec![]),
        (FamilyName::Exceptional, vec![("n", 3)]),
    ] {
        let mut spec = FamilySpec::new(name);
        for (k, v) in params {
            spec = spec.with_param(k, v);
        }
        let fam = build(&spec).unwrap();
        let f = fam.form().unwrap();
        let strategy = fam.strategy(Default::default());
        let cert = wild_certificate(f, &strategy).unwrap();
        assert_eq!(cert.verdict, WildVerdict::Wild, "{name}");
        let lower = cert.cactus_lower.as_ref().unwrap();
        assert!(lower.checks.iter().all(|c| c.is_certified_pass()));
        assert!(replay(f, &cert, &strategy).unwrap(), "{name}");
    }
}

#[test]
fn cactus_values_are_binomials() {
    let f = build(&FamilySpec::new(FamilyName::MonomialSpread).with_param("n", 1).with_param("k", 2)).unwrap();
    let f = f.form().unwrap();
    let n = f.nvars();
    for k in 1..=f.degree() / 2 {
        let a = cactus_lower_a(f, k, &Strategy::default()).unwrap();
        assert_eq!(a.value, graded_dim(n, k));
        assert_eq!(a.value, binomial(n - 1 + k as usize, k as usize));
    }
}

#[test]
fn power_family_quadratic_has_vanishing_hessian() {
    let fam = build(&FamilySpec::new(FamilyName::PowerFamily).with_param("d", 2)).unwrap();
    let f = fam.form().unwrap();
    assert_eq!(hilbert(f).unwrap().values(), &[1, 5, 5, 1]);
    assert!(hess_det(f, 1, 12).unwrap().is_none());
}

#[test]
fn exceptional_families_verify_their_conditions() {
    for seed in 0..4 {
        let fam = build(&FamilySpec::new(FamilyName::Exceptional).with_seed(seed)).unwrap();
        let f = fam.form().unwrap();
        let h = hilbert(f).unwrap();
        assert_eq!(h.get(2), graded_dim(5, 2));
        assert!(apolarity::apolar::is_unimodal(&h));
    }
    let n4 = build(&FamilySpec::new(FamilyName::Exceptional).with_param("n", 4)).unwrap();
    assert_eq!(n4.form().unwrap().degree(), 9);
    assert_eq!(n4.power_parts.len(), 10);
}

#[test]
fn random_binary_forms_have_generic_rank() {
    let mut r = rng(31);
    for d in 1..=9u32 {
        for _ in 0..5 {
            let p = Poly::from_terms(2, (0..=d).map(|i| (Monomial::new(vec![i, d - i]), q(r.random_range(-1000..=1000)))));
            let f = Form::new(Vars::parse("x,y").unwrap(), p).unwrap();
            assert_eq!(binary_waring_rank(&f).unwrap(), d as usize / 2 + 1, "degree {d}: {}", f.render());
        }
    }
}
