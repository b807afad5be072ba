//! One PASS/FAIL line per acceptance criterion.

use std::io::Write;
use std::process::ExitCode;

use rand::Rng;
use solvshear::corpus::{self, CorpusRng};
use solvshear::datasets::{self, PHI_CAL, PHI_COCAL, SIGMA_STD, STAR_PHI_COCAL};
use solvshear::exterior::{hodge, type_split, KForm, Metric};
use solvshear::geom_g2::{aa_closedness_check, check_cal_h3r3, AlmostAbelian, G2Structure};
use solvshear::lie::{ce_differential, center, derivations, derived_length, direct_sum, jacobi_check, quotient, semidirect, LieAlgebra};
use solvshear::linalg::Matrix;
use solvshear::notation::{parse_algebra, parse_form, print_algebra};
use solvshear::par::Execution;
use solvshear::reproduce;
use solvshear::shear::{abelianize_chain, invert, shear, validate, ShearData};
use solvshear::{Assignment, Instantiate, Scalar};

/// Numeric tolerance for the metric and Hodge comparisons.
const G2_TOL: f64 = 1e-12;
const SEED: u64 = 0x5eed_2024;
const RANDOM_SHEARS: usize = 24;
const SOLVABLE_ALGEBRAS: usize = 12;
const RANDOM_ALGEBRAS: usize = 100;
const MIN_CLOSEDNESS_NEGATIVES: usize = 10;
const MIN_H3R3_NEGATIVES: usize = 5;
const MIN_RANDOM_J: usize = 5;

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict { ok, detail: detail.into() }
}

fn basis_forms(n: usize, k: usize) -> Vec<KForm> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::new(), &mut out);
    out.iter().map(|idx| KForm::basis(n, idx)).collect()
}

/// Built-in example data followed by random twists and almost Abelian shears.
fn corpus_data(rng: &mut CorpusRng) -> Vec<ShearData> {
    let mut out: Vec<ShearData> =
        datasets::EXAMPLES.iter().filter_map(|e| reproduce::example_data(e).expect("examples build")).collect();
    for k in 0..RANDOM_SHEARS {
        out.push(corpus::random_shear_data(rng, 4 + k % 3));
    }
    out
}

fn criterion_1() -> Verdict {
    let res = reproduce::run_all(Execution::Parallel);
    let failed: Vec<&str> = res.iter().filter(|o| !o.passed()).map(|o| o.id).collect();
    let passed = res.len() - failed.len();
    verdict(failed.is_empty() && res.len() == 12, format!("{passed}/{} examples; failing {failed:?}", res.len()))
}

fn criterion_2(data: &[ShearData]) -> Verdict {
    let mut bad = 0;
    for d in data {
        let ok = validate(d).passed() && shear(d).map(|r| r.path_mismatch().is_none()).unwrap_or(false);
        bad += usize::from(!ok);
    }
    verdict(bad == 0 && data.len() >= 20, format!("{} instances, {bad} mismatches", data.len()))
}

fn criterion_3(data: &[ShearData]) -> Verdict {
    let mut forms = 0;
    let mut bad = 0;
    for d in data {
        let r = shear(d).expect("valid corpus");
        let n = d.base().dim();
        for k in 1..=4.min(n) {
            for alpha in basis_forms(n, k) {
                forms += 1;
                let formula = r.transfer_d_formula(&alpha).expect("same dimension");
                bad += usize::from(formula != ce_differential(&r.shear, &alpha));
            }
        }
    }
    verdict(bad == 0, format!("{forms} basis forms over {} instances, {bad} mismatches", data.len()))
}

fn criterion_4(data: &[ShearData]) -> Verdict {
    let mut bad = 0;
    for d in data {
        let r = shear(d).expect("valid corpus");
        let back = invert(&r).and_then(|inv| shear(&inv));
        bad += usize::from(!back.is_ok_and(|b| b.shear == *d.base()));
    }
    verdict(bad == 0, format!("{} round trips, {bad} failures", data.len()))
}

fn criterion_5(rng: &mut CorpusRng) -> Verdict {
    let mut bad = 0;
    let mut lengths = [0usize; 4];
    let mut algs: Vec<LieAlgebra> = (0..SOLVABLE_ALGEBRAS).map(|k| corpus::random_solvable(rng, 4 + k % 4)).collect();
    let demo = datasets::example("abelianize.demo").unwrap().base_algebra().unwrap();
    algs.push(demo);
    for g in &algs {
        let len = derived_length(g).unwrap().unwrap();
        lengths[len.min(3)] += 1;
        let ok = match abelianize_chain(g) {
            Ok(chain) => {
                chain.len() + 1 == len
                    && chain.iter().all(|s| s.derived_length_after + 1 == s.derived_length_before && s.split_matches)
                    && chain.last().is_some_and(|s| s.result.shear.is_abelian())
            }
            Err(_) => false,
        };
        bad += usize::from(!ok);
    }
    let ok = bad == 0 && lengths[2] + lengths[3] == algs.len() && algs.len() >= 10;
    verdict(ok, format!("{} algebras (length 2: {}, length 3: {}), {bad} failures", algs.len(), lengths[2], lengths[3]))
}

fn criterion_6() -> Verdict {
    let coc = parse_form(PHI_COCAL, 7).unwrap();
    let star = parse_form(STAR_PHI_COCAL, 7).unwrap();
    let mut worst: f64 = 0.0;
    for phi in [coc.clone(), parse_form(PHI_CAL, 7).unwrap()] {
        let s = G2Structure::new(&phi, None, G2_TOL).unwrap();
        let m = s.metric().matrix();
        for i in 0..7 {
            for j in 0..7 {
                worst = worst.max((m[(i, j)] - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
    }
    let s = G2Structure::new(&coc, None, G2_TOL).unwrap();
    let star_dev = s.star_numeric().max_abs_diff(&star.to_f64().unwrap());
    let sigma = parse_form(SIGMA_STD, 6).unwrap();
    let j = Matrix::from_fn(6, 6, |i, k| sigma.coeff(&[i, k]));
    let metric = Metric::identity(6);
    let mut hodge_dev: f64 = 0.0;
    let mut tested = 0;
    for beta in basis_forms(6, 2) {
        let w = type_split(&beta, &j, &sigma).unwrap().primitive11;
        if w.is_zero() {
            continue;
        }
        tested += 1;
        let lhs = hodge(&metric, &w.to_f64().unwrap()).unwrap();
        let rhs = w.wedge(&sigma).scale(&Scalar::int(-1)).to_f64().unwrap();
        hodge_dev = hodge_dev.max(lhs.max_abs_diff(&rhs));
    }
    let ok = worst <= G2_TOL && star_dev <= G2_TOL && hodge_dev <= G2_TOL && tested >= 8;
    verdict(ok, format!("metric dev {worst:.1e}, *phi dev {star_dev:.1e}, primitive (1,1) dev {hodge_dev:.1e} on {tested} forms"))
}

fn criterion_7(rng: &mut CorpusRng) -> Verdict {
    let star = parse_form(STAR_PHI_COCAL, 7).unwrap();
    let phi = parse_form(PHI_CAL, 7).unwrap();
    let (mut pairs, mut disagree, mut negatives, mut positives) = (0, 0, 0, 0);
    let mut tally = |rep: &solvshear::geom_g2::ClosednessReport, negatives: &mut usize| {
        pairs += 1;
        disagree += usize::from(!rep.agrees());
        *negatives += usize::from(!rep.closed_on_shear);
        positives += usize::from(rep.closed_on_shear);
    };
    for ex in datasets::EXAMPLES.iter().filter(|e| matches!(e.kind, datasets::Kind::Cocal(_) | datasets::Kind::Cal(_))) {
        let g = ex.base_algebra().unwrap();
        let aa = AlmostAbelian::new(&g, 6).unwrap();
        let s = solvshear::geom_g2::aa_build_data(&aa, &ex.subspace().unwrap(), &ex.omega0().unwrap(), &ex.nu().unwrap()).unwrap();
        let psi = if matches!(ex.kind, datasets::Kind::Cocal(_)) { &star } else { &phi };
        tally(&aa_closedness_check(&s, psi).unwrap(), &mut negatives);
    }
    let mut attempts = 0;
    while negatives < 2 * MIN_CLOSEDNESS_NEGATIVES && attempts < 400 {
        attempts += 1;
        let cocal = rng.gen_bool(0.5);
        let mut v = || Scalar::int(rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 });
        let (text, assign) = if cocal {
            ("(a1.17,a2.27,a3.37,-a1.47,-a2.57,-a3.67,0)", Assignment::new().with("a1", v()).with("a2", v()).with("a3", v()))
        } else {
            ("(a.17,a.27,b.37,b.47,(-a-b).57,(-a-b).67,0)", Assignment::new().with("a", v()).with("b", v()))
        };
        let g = parse_algebra(text).unwrap().instantiate(&assign);
        let Some(s) = corpus::random_aa_shear(rng, &g) else { continue };
        tally(&aa_closedness_check(&s, if cocal { &star } else { &phi }).unwrap(), &mut negatives);
    }
    drop(tally);
    let ok = disagree == 0 && negatives >= MIN_CLOSEDNESS_NEGATIVES && positives >= 8;
    verdict(ok, format!("{pairs} pairs ({positives} closed, {negatives} not closed), {disagree} disagreements"))
}

/// The 6-dimensional ideal `u = span(e1..e6)` of a 7-dimensional almost Abelian-type algebra.
fn ideal_u(h: &LieAlgebra) -> LieAlgebra {
    let entries = h
        .nonzero_brackets()
        .filter(|((i, j), _)| *i < 6 && *j < 6)
        .map(|(&k, v)| (k, v[..6].to_vec()))
        .collect::<Vec<_>>();
    LieAlgebra::from_brackets(6, entries).unwrap()
}

fn criterion_8(rng: &mut CorpusRng) -> Verdict {
    let phi = parse_form(PHI_CAL, 7).unwrap();
    let mut hosts = Vec::new();
    for (id, vals) in [("cal.b", [("a", 1), ("b", 1)]), ("cal.b", [("a", 2), ("b", -5)]), ("cal.c", [("a", 2), ("b", 3)]), ("cal.c", [("a", -1), ("b", 4)])]
    {
        let ex = datasets::example(id).unwrap();
        let a = vals.iter().fold(Assignment::new(), |acc, (n, v)| acc.with(n, Scalar::int(*v)));
        hosts.push(ex.expected_algebra().unwrap().instantiate(&a));
    }
    let mut reports = 0;
    let mut disagree = 0;
    let mut base_ok = 0;
    for h in &hosts {
        let r = check_cal_h3r3(h, &phi).unwrap();
        reports += 1;
        disagree += usize::from(!r.agrees());
        base_ok += usize::from(r.calibrated && r.conditions_hold);
    }
    let mut negatives = 0;
    let mut attempts = 0;
    while negatives < 2 * MIN_H3R3_NEGATIVES && attempts < 100 {
        attempts += 1;
        let h = &hosts[attempts % hosts.len()];
        let u = ideal_u(h);
        let f = h.ad_basis(6).select(&(0..6).collect::<Vec<_>>(), &(0..6).collect::<Vec<_>>());
        let d = corpus::random_combination(rng, &derivations(&u).unwrap(), 1);
        let Ok(p) = semidirect(&u, &f.add(&d)) else { continue };
        let Ok(r) = check_cal_h3r3(&p, &phi) else { continue };
        reports += 1;
        disagree += usize::from(!r.agrees());
        negatives += usize::from(!r.calibrated);
    }
    let ok = disagree == 0 && base_ok == hosts.len() && negatives >= MIN_H3R3_NEGATIVES;
    verdict(ok, format!("{reports} reports ({base_ok} paper outputs calibrated, {negatives} perturbed negatives), {disagree} disagreements"))
}

fn d_squared_vanishes(g: &LieAlgebra) -> bool {
    let n = g.dim();
    (1..=2.min(n)).all(|k| basis_forms(n, k).iter().all(|a| ce_differential(g, &ce_differential(g, a)).is_zero()))
}

fn criterion_9(rng: &mut CorpusRng, data: &[ShearData]) -> Verdict {
    let mut jacobi_bad = 0;
    let mut d2_bad = 0;
    let mut trip_bad = 0;
    let mut built = 0;
    let algs: Vec<LieAlgebra> = (0..RANDOM_ALGEBRAS).map(|k| corpus::random_algebra(rng, 3 + k % 5)).collect();
    for g in &algs {
        jacobi_bad += usize::from(!jacobi_check(g).passed);
        d2_bad += usize::from(!d_squared_vanishes(g));
        trip_bad += usize::from(parse_algebra(&print_algebra(g)).ok().as_ref() != Some(g));
    }
    let mut constructed = Vec::new();
    for d in data {
        let r = shear(d).unwrap();
        constructed.push(r.extension.clone());
        constructed.push(r.shear.clone());
    }
    for pair in algs.chunks(2).take(20) {
        constructed.push(direct_sum(&pair[0], &pair[1]));
        let z = center(&pair[0]).unwrap();
        constructed.push(quotient(&pair[0], &z, None).unwrap().algebra);
    }
    for g in &constructed {
        built += 1;
        jacobi_bad += usize::from(!jacobi_check(g).passed);
        if g.dim() <= 8 {
            d2_bad += usize::from(!d_squared_vanishes(g));
        }
    }
    let ok = jacobi_bad == 0 && d2_bad == 0 && trip_bad == 0;
    verdict(
        ok,
        format!("{} random + {built} constructed algebras; Jacobi {jacobi_bad}, d^2 {d2_bad}, round trip {trip_bad} failures", algs.len()),
    )
}

fn criterion_10(rng: &mut CorpusRng) -> Verdict {
    let sk = reproduce::example_data(datasets::example("ask.sk").unwrap()).unwrap().unwrap();
    let r = shear(&sk).unwrap();
    let sigma = parse_form(SIGMA_STD, 6).unwrap();
    let j0 = Matrix::from_fn(6, 6, |i, k| sigma.coeff(&[i, k]));
    let t = r.transfer_acs(&j0).unwrap();
    let sk_ok = t.residual_is_zero() && t.integrable_on_g() && t.integrable_on_h();
    let mut hosts = vec![sk];
    for _ in 0..3 {
        hosts.push(corpus::random_shear_data(rng, 6));
    }
    let mut random_j = 0;
    let mut non_integrable = 0;
    let mut bad = 0;
    for k in 0..3 * MIN_RANDOM_J {
        let d = &hosts[k % hosts.len()];
        let r = shear(d).unwrap();
        let j = corpus::random_complex_structure(rng, 6);
        let t = r.transfer_acs(&j).unwrap();
        random_j += 1;
        bad += usize::from(!t.residual_is_zero());
        non_integrable += usize::from(!t.integrable_on_g());
    }
    let ok = sk_ok && bad == 0 && non_integrable >= MIN_RANDOM_J;
    verdict(ok, format!("semi-Kähler example {}, {random_j} random J ({non_integrable} non-integrable), {bad} nonzero residuals", if sk_ok { "ok" } else { "failed" }))
}

fn main() -> ExitCode {
    let mut rng = corpus::rng(SEED);
    let data = corpus_data(&mut rng);
    let results = [
        ("paper examples reproduce", criterion_1()),
        ("path equivalence", criterion_2(&data)),
        ("differential transfer", criterion_3(&data)),
        ("inversion round trip", criterion_4(&data)),
        ("abelianization chains", criterion_5(&mut rng)),
        ("G2 metric and Hodge", criterion_6()),
        ("closedness criterion vs direct check", criterion_7(&mut rng)),
        ("h3+R3 calibrated criterion", criterion_8(&mut rng)),
        ("structural hygiene", criterion_9(&mut rng, &data)),
        ("Nijenhuis transfer", criterion_10(&mut rng)),
    ];
    let mut out = std::io::stdout().lock();
    let mut all = true;
    for (k, (name, v)) in results.iter().enumerate() {
        all &= v.ok;
        let _ = writeln!(out, "{} criterion {:>2}: {name}: {}", if v.ok { "PASS" } else { "FAIL" }, k + 1, v.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
