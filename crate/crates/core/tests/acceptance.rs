//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits nonzero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use apolarity::apolar::{graded_dim, hilbert, is_k_concise, is_unimodal};
use apolarity::bounds::{
    border_bound_bihom, cactus_lower_a, cactus_lower_c, gnp_vanishing, wild_certificate, CactusRoute, Provenance,
    WildVerdict,
};
use apolarity::families::{build, FamilyName, FamilySpec};
use apolarity::hessian::{generic_rank, mixed_hessian, multiplication_map_rank, Certainty, RankPolicy};
use apolarity::powersum::{corollary_easy_check, factorization_check, verify_decomposition, PowerSumDecomposition};
use apolarity::powersum::binary_waring_rank;
use apolarity::{Form, LinearForm, Monomial, Poly, Vars};
use num_integer::binomial;
use num_rational::BigRational;
use rand::Rng;

use common::{binary_rank_oracle, dense_hilbert, eval, partial, q, random_form, rng};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ikeda_pipeline() -> Outcome {
    let b = build(&FamilySpec::new(FamilyName::Ikeda)).map_err(|e| e.to_string())?;
    let f = b.form().unwrap();
    let h = hilbert(f).unwrap();
    ensure(h.values() == [1, 4, 10, 10, 4, 1], || format!("hilbert {:?}", h.values()))?;

    let policy = RankPolicy::default();
    let h2 = generic_rank(&mixed_hessian(f, 2, 2).unwrap(), &policy);
    ensure(h2.certainty == Certainty::CertifiedSymbolic && h2.generic_rank < 10, || {
        format!("hess^2: rank {} {:?}", h2.generic_rank, h2.certainty)
    })?;
    let h1 = generic_rank(&mixed_hessian(f, 1, 1).unwrap(), &policy);
    ensure(h1.is_full() && h1.certainty.is_certified(), || format!("hess^1 rank {}", h1.generic_rank))?;

    let strategy = b.strategy(policy);
    let cert = wild_certificate(f, &strategy).unwrap();
    let border = &cert.border_upper;
    let mut parts: Vec<usize> = border.details.iter().map(|x| x.value).collect();
    parts.sort_unstable();
    ensure(
        border.value == 10 && border.provenance == Provenance::SummandAdditivity && parts == [3, 7],
        || format!("border {} from {:?}", border.value, parts),
    )?;
    let c = cactus_lower_c(f, 2, 2, 2, &strategy).unwrap();
    ensure(c.valid && c.value == 10, || format!("cactus C: {:?}", c.checks))?;
    ensure(cert.verdict == WildVerdict::Wild, || "verdict not wild".into())?;
    Ok(format!("hilbert {:?}, hess^2 rank {}/10, border 10 = 7+3, cr > 10, wild", h.values(), h2.generic_rank))
}

fn bb_cubic() -> Outcome {
    let b = build(&FamilySpec::new(FamilyName::BbCubic)).map_err(|e| e.to_string())?;
    let f = b.form().unwrap();
    let h = hilbert(f).unwrap();
    let oracle = dense_hilbert(f);
    ensure(h.values() == [1, 5, 5, 1] && oracle == h.values(), || format!("{:?} vs {oracle:?}", h.values()))?;
    let hess = generic_rank(&mixed_hessian(f, 1, 1).unwrap(), &RankPolicy::default());
    ensure(hess.certified_degenerate(), || format!("hess rank {} {:?}", hess.generic_rank, hess.certainty))?;
    let strategy = b.strategy(RankPolicy::default());
    let a = cactus_lower_a(f, 1, &strategy).unwrap();
    ensure(a.valid && a.value == 5, || format!("cactus A: {:?}", a.checks))?;
    let bihom = border_bound_bihom(f, b.partition.as_ref().unwrap()).unwrap();
    ensure(bihom.value == 5, || format!("bihom bound {}", bihom.value))?;
    let cert = wild_certificate(f, &strategy).unwrap();
    ensure(cert.verdict == WildVerdict::Wild && cert.border_upper.value == 5, || "not wild".into())?;
    Ok("hilbert [1,5,5,1] (oracle agrees), hess = 0 certified, cr > 5 >= border bound 5, wild".into())
}

fn exceptional_septic() -> Outcome {
    let b = build(&FamilySpec::new(FamilyName::Exceptional).with_param("n", 3)).map_err(|e| e.to_string())?;
    let f = b.form().unwrap();
    ensure(f.degree() == 7 && b.power_parts.len() == 6, || "wrong shape".into())?;
    let h = hilbert(f).unwrap();
    ensure(is_k_concise(f, 2).unwrap() && is_unimodal(&h), || format!("hilbert {:?}", h.values()))?;
    let strategy = b.strategy(RankPolicy::default());
    let cert = wild_certificate(f, &strategy).unwrap();
    let c = cert.cactus_lower.as_ref().ok_or("no cactus bound")?;
    let hess2 = c.checks.iter().find(|x| x.name.starts_with("Hess^(2,2)")).ok_or("no hess^2 check")?;
    ensure(hess2.is_certified_pass(), || format!("{hess2:?}"))?;
    ensure(cert.border_upper.value == 15, || format!("border {}", cert.border_upper.value))?;
    ensure(c.valid && c.value == 15 && c.k == 2, || format!("cactus {:?}", c))?;
    ensure(cert.verdict == WildVerdict::Wild, || "not wild".into())?;
    Ok(format!("seed {}, hilbert {:?}, hess^2 = 0 {:?}, border 15, cr > 15, wild", b.seed_used, h.values(), hess2.certainty))
}

fn monomial_spread() -> Outcome {
    let (n, k) = (2u32, 4u32);
    let b = build(&FamilySpec::new(FamilyName::MonomialSpread).with_param("n", n as i64).with_param("k", k as i64))
        .map_err(|e| e.to_string())?;
    let f = b.form().unwrap();
    ensure(f.degree() == 18 && f.nvars() == 5, || "wrong shape".into())?;
    let expected: usize = (0..=k).map(|i| (k - i + 1) as usize * binomial((n + i) as usize, i as usize)).sum();
    let h = hilbert(f).unwrap();
    ensure(expected == 70 && h.get(k) == 70 && graded_dim(5, k) == 70, || format!("a_4 = {}", h.get(k)))?;
    let p = b.partition.as_ref().unwrap();
    let g = gnp_vanishing(f, p, k).unwrap().ok_or("no separable-length certificate")?;
    ensure(g.slice_rank == 15 && g.threshold == 5, || format!("{g:?}"))?;
    let bihom = border_bound_bihom(f, p).unwrap();
    ensure(bihom.value == 80, || format!("bihom {}", bihom.value))?;
    let cert = wild_certificate(f, &b.strategy(RankPolicy::default())).unwrap();
    let c = cert.cactus_lower.as_ref().ok_or("no cactus bound")?;
    ensure(c.valid && c.value == 70 && c.route == CactusRoute::DegenerateMixedHessian, || format!("{c:?}"))?;
    ensure(cert.notes.iter().any(|s| s.contains("140")), || "missing note on the printed value".into())?;
    Ok(format!("a_4 = 70, separable length 15 > 5, border 80, cr > 70, verdict {:?}", cert.verdict))
}

fn hessian_criterion() -> Outcome {
    let mut r = rng(11);
    let mut pairs = 0;
    for case in 0..200 {
        let f = random_form(&mut r, 4, 1, 6);
        let n = f.nvars();
        let d = f.degree();
        let l_form: Vec<i64> = (0..n).map(|_| r.random_range(-4..=4)).collect();
        let l_form = LinearForm::from_ints(&l_form);
        let point: Vec<BigRational> = l_form.coeffs().to_vec();
        for k in 0..=d {
            for l in (k + 1)..=d {
                let mult = multiplication_map_rank(&f, &l_form, k, l).unwrap();
                let hess = mixed_hessian(&f, d - l, k).unwrap().rank_at(&point);
                ensure(mult == hess, || format!("case {case}: {} (k,l)=({k},{l}): {mult} vs {hess}", f.render()))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("200 forms, {pairs} (k,l) pairs agree"))
}

fn random_decomposition(r: &mut rand_chacha::ChaCha8Rng) -> PowerSumDecomposition {
    loop {
        let n = r.random_range(1..=4usize);
        let d = r.random_range(1..=6u32);
        let s = r.random_range(1..=8usize);
        let terms: Vec<(BigRational, LinearForm)> = (0..s)
            .map(|_| {
                let c: Vec<i64> = (0..n).map(|_| r.random_range(-3..=3)).collect();
                (q(r.random_range(1..=3)), LinearForm::from_ints(&c))
            })
            .collect();
        if let Ok(dec) = PowerSumDecomposition::from_terms(&Vars::indexed("x", n), d, terms) {
            return dec;
        }
    }
}

fn factorization_suite() -> Outcome {
    let mut r = rng(23);
    let (mut identities, mut corollary) = (0, 0);
    for case in 0..100 {
        let dec = random_decomposition(&mut r);
        ensure(verify_decomposition(&dec), || format!("case {case} does not expand"))?;
        let f = dec.target();
        let d = f.degree();
        let point: Vec<BigRational> = (0..f.nvars()).map(|_| q(r.random_range(-5..=5))).collect();
        for k in 0..=d {
            for l in k..=(d - k) {
                let check = factorization_check(&dec, k, l).unwrap();
                ensure(check.holds, || format!("case {case} ({k},{l}) factorization fails"))?;
                // Independent entry check: ∂^γ Σ c l^d = d!/(l-k)! Σ c l^γ l^(l-k).
                let h = &check.hessian;
                for (i, a) in h.row_basis.monomials.iter().enumerate() {
                    for (j, bm) in h.col_basis.monomials.iter().enumerate() {
                        let gamma = a.mul(bm);
                        let lhs = eval(&partial(f.poly(), gamma.exps()), &point);
                        let rhs = power_sum_partial(&dec, &gamma, &point);
                        let entry = eval(h.entry(i, j), &point);
                        ensure(lhs == rhs && lhs == entry, || format!("case {case} entry ({i},{j})"))?;
                    }
                }
                identities += 1;
            }
        }
        for k in 0..=(d / 2) {
            let a_k = hilbert(f).unwrap().get(k);
            if a_k == dec.len() {
                let ok = corollary_easy_check(&dec, k, &RankPolicy::default()).unwrap();
                ensure(ok, || format!("case {case}: s = a_{k} but hess^{k} looks singular"))?;
                corollary += 1;
            }
        }
    }
    Ok(format!("100 decompositions, {identities} identities exact, {corollary} instances of s = a_k with hess^k != 0"))
}

fn power_sum_partial(dec: &PowerSumDecomposition, gamma: &Monomial, point: &[BigRational]) -> BigRational {
    let d = dec.degree();
    let g = gamma.degree();
    let mut falling = BigRational::from_integer(1.into());
    for i in 0..g {
        falling *= q((d - i) as i64);
    }
    let mut acc = BigRational::from_integer(0.into());
    for (c, l) in dec.scalars().iter().zip(dec.forms()) {
        let mut t = c * &falling;
        for (i, &e) in gamma.exps().iter().enumerate() {
            for _ in 0..e {
                t *= &l.coeffs()[i];
            }
        }
        let lx: BigRational = l.coeffs().iter().zip(point).map(|(a, b)| a * b).sum();
        for _ in 0..(d - g) {
            t *= &lx;
        }
        acc += t;
    }
    acc
}

fn binary_form(coeffs: &[i64]) -> Form {
    let d = coeffs.len() as u32 - 1;
    let p = Poly::from_terms(2, coeffs.iter().enumerate().map(|(i, &c)| (Monomial::new(vec![i as u32, d - i as u32]), q(c))));
    Form::new(Vars::parse("x,y").unwrap(), p).unwrap()
}

fn binary_suite() -> Outcome {
    let mut r = rng(5);
    let mut seen = BTreeSet::new();
    let mut attempts = 0;
    while seen.len() < 600 && attempts < 100_000 {
        attempts += 1;
        let d = r.random_range(1..=6usize);
        let c: Vec<i64> = (0..=d).map(|_| r.random_range(-2..=2)).collect();
        if c.iter().all(|&x| x == 0) || !seen.insert(c.clone()) {
            continue;
        }
        let f = binary_form(&c);
        let got = binary_waring_rank(&f).unwrap();
        let want = binary_rank_oracle(&c);
        ensure(got == want, || format!("{}: {got} vs oracle {want}", f.render()))?;
    }
    ensure(seen.len() >= 500, || format!("only {} distinct forms", seen.len()))?;
    for d in 1..=8u32 {
        let x_d = Form::new(Vars::parse("x,y").unwrap(), Poly::monomial(Monomial::new(vec![d, 0]), q(1))).unwrap();
        ensure(binary_waring_rank(&x_d).unwrap() == 1, || format!("rank x^{d}"))?;
        let xy = Form::new(Vars::parse("x,y").unwrap(), Poly::monomial(Monomial::new(vec![1, d - 1]), q(1))).unwrap();
        let want = if d == 1 { 1 } else { d as usize };
        ensure(binary_waring_rank(&xy).unwrap() == want, || format!("rank x*y^{}", d - 1))?;
    }
    Ok(format!("{} distinct forms agree with the annihilator oracle; spot ranks hold for d <= 8", seen.len()))
}

fn gorenstein_symmetry() -> Outcome {
    let mut r = rng(31);
    for case in 0..500 {
        let f = random_form(&mut r, 4, 1, 6);
        let h = hilbert(&f).unwrap();
        ensure(h.is_symmetric(), || format!("case {case}: {} has {:?}", f.render(), h.values()))?;
    }
    Ok("500 random forms have symmetric Hilbert functions".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 8] = [
        ("1 ikeda pipeline", ikeda_pipeline, Duration::from_secs(10)),
        ("2 vanishing-hessian cubic", bb_cubic, Duration::from_secs(5)),
        ("3 exceptional septic", exceptional_septic, Duration::from_secs(60)),
        ("4 monomial-spread n=2 k=4", monomial_spread, Duration::from_secs(300)),
        ("5 hessian criterion", hessian_criterion, Duration::from_secs(300)),
        ("6 factorization", factorization_suite, Duration::from_secs(300)),
        ("7 binary waring rank", binary_suite, Duration::from_secs(600)),
        ("8 gorenstein symmetry", gorenstein_symmetry, Duration::from_secs(120)),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > limit => Err(format!("{msg}; took {elapsed:.1?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS criterion {name} ({elapsed:.2?}): {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name} ({elapsed:.2?}): {msg}");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
