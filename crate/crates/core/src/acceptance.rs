//! End-to-end acceptance checks.
//!
//! Each check compares the library against an independent oracle: closed-form
//! 2×2 signatures, hand-expanded polynomials, Kronecker products of integer
//! matrices, or cofactor expansion.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::intmat::IntMatrix;
use crate::lab::{run_suite, trial_rng, Suite, SuiteParams};
use crate::laurent::{LaurentMatrix, LaurentPoly};
use crate::numeric::det_and_margin;
use crate::presentation::{alexander_polynomial, presentation_matrix};
use crate::seifert::{block_sum, metabolic_enlargement, mirror, random_link, BoundaryLinkData, Convention};
use crate::substitution::{discriminant_margins, substitute, UnitaryTuple};
use crate::twisted::{
    rho_hat, scan_path, torus_grid, CirclePath, ComponentLoop, Jump, ScanOptions, INERTIA_TOL,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub number: usize,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CriterionResult {
    fn new(number: usize, name: &str, passed: bool, detail: String) -> Self {
        CriterionResult {
            number,
            name: name.to_owned(),
            passed,
            detail,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{} criterion {:>2}: {} ({})",
            if self.passed { "PASS" } else { "FAIL" },
            self.number,
            self.name,
            self.detail
        )
    }
}

pub fn trefoil() -> BoundaryLinkData {
    knot("trefoil", vec![vec![-1, 1], vec![0, -1]])
}

pub fn figure_eight() -> BoundaryLinkData {
    knot("figure-eight", vec![vec![1, 1], vec![0, -1]])
}

pub fn split_trefoils() -> BoundaryLinkData {
    let rows = (0..4)
        .map(|r| {
            (0..4)
                .map(|c| match (r, c) {
                    (0, 0) | (1, 1) | (2, 2) | (3, 3) => -1,
                    (0, 1) | (2, 3) => 1,
                    _ => 0,
                })
                .collect()
        })
        .collect();
    BoundaryLinkData::classical(
        Some("split-2-trefoils"),
        vec![2, 2],
        IntMatrix::from_rows(rows).expect("rectangular"),
    )
    .expect("valid split link")
}

fn knot(name: &str, rows: Vec<Vec<i64>>) -> BoundaryLinkData {
    let g = rows.len();
    BoundaryLinkData::classical(Some(name), vec![g], IntMatrix::from_rows(rows).expect("rectangular"))
        .expect("valid knot")
}

/// Trefoil signature at `e^{iθ}` from the closed form: `H` has trace
/// `−4(1 − cos θ)` and determinant `2(1 − cos θ)(1 − 2cos θ)`.
fn trefoil_signature_oracle(theta: f64) -> i64 {
    if theta.cos() < 0.5 {
        -2
    } else {
        0
    }
}

fn circle_loop(m: usize, component: usize, base_angle: f64) -> ComponentLoop {
    let mut angles = vec![base_angle; m];
    angles[component] = 0.0;
    ComponentLoop::new(UnitaryTuple::from_angles(&angles).expect("unit circle"), component)
        .expect("component in range")
}

fn scan(l: &BoundaryLinkData, path: &ComponentLoop) -> Result<crate::twisted::JumpReport> {
    scan_path(l, path, &ScanOptions::default())
}

fn check(failures: &mut Vec<String>, ok: bool, msg: impl FnOnce() -> String) {
    if !ok {
        failures.push(msg());
    }
}

fn verdict(number: usize, name: &str, failures: Vec<String>, summary: String) -> CriterionResult {
    if failures.is_empty() {
        CriterionResult::new(number, name, true, summary)
    } else {
        let shown: Vec<_> = failures.iter().take(3).cloned().collect();
        CriterionResult::new(
            number,
            name,
            false,
            format!("{} problem(s): {}", failures.len(), shown.join("; ")),
        )
    }
}

/// Jumps gathered by criteria 1–4, for criterion 8.
#[derive(Default)]
pub struct JumpLog {
    /// `(description, jump, is the knot case m = k = 1)`.
    pub jumps: Vec<(String, Jump, bool)>,
}

pub fn criterion_1(log: &mut JumpLog) -> Result<CriterionResult> {
    let t = trefoil();
    let mut f = Vec::new();
    let poly = alexander_polynomial(&t, 1, Convention::Classical)?;
    let hand = LaurentPoly::from_terms(1, [(vec![2], 1), (vec![1], -1), (vec![0], 1)]);
    check(&mut f, poly == hand, || format!("Alexander polynomial {poly}"));

    let r = scan(&t, &circle_loop(1, 0, 0.0))?;
    check(&mut f, r.jumps.len() == 2, || format!("{} jumps", r.jumps.len()));
    for (j, want) in r.jumps.iter().zip([1.0 / 6.0, 5.0 / 6.0]) {
        check(&mut f, (j.s - want).abs() < 1e-6, || format!("jump at {} (want {want})", j.s));
    }
    for s in &r.samples {
        let oracle = trefoil_signature_oracle(2.0 * PI * s.s);
        if !s.ambiguous && s.nullity == 0 {
            check(&mut f, s.signature == oracle, || {
                format!("s={} signature {} (oracle {oracle})", s.s, s.signature)
            });
        }
    }
    for z in [PI / 3.0, -PI / 3.0] {
        let m = discriminant_margins(&t, &UnitaryTuple::from_angles(&[z])?, Convention::Classical)?;
        check(&mut f, m[0].margin < 1e-8, || format!("margin {} at root", m[0].margin));
    }
    let minus = rho_hat(&t, &UnitaryTuple::from_angles(&[PI])?, INERTIA_TOL)?;
    check(&mut f, (minus.signature, minus.nullity) == (-2, 0), || {
        format!("ω=−1 gives ({}, {})", minus.signature, minus.nullity)
    });
    for j in &r.jumps {
        log.jumps.push(("trefoil loop".into(), j.clone(), true));
    }
    let summary = format!(
        "jumps at s = {}",
        r.jumps.iter().map(|j| format!("{:.9}", j.s)).collect::<Vec<_>>().join(", ")
    );
    Ok(verdict(1, "trefoil Levine-Tristram profile", f, summary))
}

pub fn criterion_2(log: &mut JumpLog) -> Result<CriterionResult> {
    let e = figure_eight();
    let mut f = Vec::new();
    let min = (0..1000)
        .map(|j| {
            let a = UnitaryTuple::from_angles(&[2.0 * PI * j as f64 / 1000.0])?;
            Ok(discriminant_margins(&e, &a, Convention::Classical)?[0].margin)
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    check(&mut f, min > 0.01, || format!("min margin {min}"));
    let r = scan(&e, &circle_loop(1, 0, 0.0))?;
    check(&mut f, r.jumps.is_empty(), || format!("{} jumps", r.jumps.len()));
    check(&mut f, r.samples.iter().all(|s| s.signature == 0), || "non-zero signature".into());
    for j in &r.jumps {
        log.jumps.push(("figure-eight loop".into(), j.clone(), true));
    }
    Ok(verdict(2, "figure-eight has empty circle discriminant", f, format!("min margin {min:.4}")))
}

pub fn criterion_3(log: &mut JumpLog) -> Result<CriterionResult> {
    let s = split_trefoils();
    let mut f = Vec::new();
    let poly = alexander_polynomial(&s, 1, Convention::Classical)?;
    let f1 = LaurentPoly::from_terms(2, [(vec![2, 0], 1), (vec![1, 0], -1), (vec![0, 0], 1)]);
    let f2 = LaurentPoly::from_terms(2, [(vec![0, 2], 1), (vec![0, 1], -1), (vec![0, 0], 1)]);
    let hand = (&f1 * &f2).normalize();
    check(&mut f, poly == hand, || format!("discriminant polynomial {poly}"));

    let i = rho_hat(&s, &UnitaryTuple::from_angles(&[PI, PI])?, INERTIA_TOL)?;
    check(&mut f, i.signature == -4 && i.nullity == 0, || format!("rho_hat(−1,−1) = {}", i.signature));

    let grid = torus_grid(&s, 8, Convention::Classical, INERTIA_TOL)?;
    check(&mut f, grid.points.len() == 64, || format!("{} gridpoints", grid.points.len()));
    for p in &grid.points {
        let want = trefoil_signature_oracle(p.angles[0]) + trefoil_signature_oracle(p.angles[1]);
        check(&mut f, p.signature == want, || {
            format!("grid {:?}: {} (oracle {want})", p.indices, p.signature)
        });
    }
    for comp in 0..2 {
        let r = scan(&s, &circle_loop(2, comp, PI))?;
        check(&mut f, r.jumps.len() == 2, || format!("component {comp} loop: {} jumps", r.jumps.len()));
        for j in r.jumps {
            log.jumps.push((format!("split trefoils, loop {comp}"), j, false));
        }
    }
    Ok(verdict(3, "split trefoils: product polynomial and additivity", f, "64/64 gridpoints".into()))
}

pub fn criterion_4(log: &mut JumpLog) -> Result<CriterionResult> {
    let p = SuiteParams::for_suite(Suite::MetabolicVanishing);
    let r = run_suite(Suite::MetabolicVanishing, 200, 7, &p)?;
    let mut f = Vec::new();
    check(&mut f, r.passed, || format!("{} failures, first {:?}", r.failures.len(), r.failures.first()));
    check(&mut f, r.checked > 0, || "no regular points".into());

    let opts = ScanOptions {
        samples: 256,
        ..ScanOptions::default()
    };
    for trial in 0..10u64 {
        let mut rng = trial_rng(4, trial);
        let m = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=3);
        let mut l = BoundaryLinkData::empty(m, 1)?;
        for _ in 0..rng.gen_range(1..=2 * m) {
            l = metabolic_enlargement(&l, rng.gen_range(0..m), rng.gen())?;
        }
        let path = CirclePath::random(m, k, &mut rng);
        let scan = scan_path(&l, &path, &opts)?;
        check(&mut f, scan.jumps.is_empty(), || format!("metabolic scan {trial}: {} jumps", scan.jumps.len()));
        for j in scan.jumps {
            log.jumps.push((format!("metabolic scan {trial}"), j, false));
        }
    }
    Ok(verdict(
        4,
        "metabolic vanishing",
        f,
        format!("{} regular points checked, {} skipped", r.checked, r.skipped),
    ))
}

pub fn criterion_5() -> Result<CriterionResult> {
    let r = run_suite(
        Suite::CongruenceInvariance,
        100,
        3,
        &SuiteParams::for_suite(Suite::CongruenceInvariance),
    )?;
    let f = if r.passed {
        Vec::new()
    } else {
        vec![format!("{} failures, first {:?}", r.failures.len(), r.failures.first())]
    };
    Ok(verdict(
        5,
        "congruence invariance",
        f,
        format!("{} checks, {} points skipped", r.checked, r.skipped),
    ))
}

pub fn criterion_6() -> Result<CriterionResult> {
    let mut f = Vec::new();
    let mut checked = 0;
    for trial in 0..50u64 {
        let mut rng = trial_rng(6, trial);
        let m = rng.gen_range(1..=3);
        let n = if trial % 2 == 0 { 1 } else { 3 };
        let k = rng.gen_range(1..=3);
        let l = random_link(m, n, 3, rng.gen())?;
        for level in 1..=n {
            let a = &l.level(level)?.matrix;
            let dual = &l.level(n + 1 - level)?.matrix;
            let sign = if level % 2 == 0 { 1 } else { -1 };
            let want = a.add(&dual.transpose().scaled(-sign))?;
            let p = presentation_matrix(&l, level, Convention::Paper)?;
            let got = substitute(&p, &UnitaryTuple::trivial(m, k)?)?;
            let g = want.rows();
            let exact = (0..g * k).all(|r| {
                (0..g * k).all(|c| {
                    let w = if r % k == c % k { want.get(r / k, c / k) as f64 } else { 0.0 };
                    got[(r, c)].re == w && got[(r, c)].im == 0.0
                })
            });
            check(&mut f, exact, || format!("trial {trial}, level {level}"));
            checked += 1;
        }
    }
    Ok(verdict(6, "augmentation identity", f, format!("{checked} levels exact")))
}

pub fn criterion_7() -> Result<CriterionResult> {
    let mut f = Vec::new();
    let mut worst: f64 = 0.0;
    for trial in 0..20u64 {
        let mut rng = trial_rng(7, trial);
        let m = rng.gen_range(1..=3);
        let l = random_link(m, 1, 3, rng.gen())?;
        let p = presentation_matrix(&l, 1, Convention::Classical)?;
        let poly = p.matrix().det_bareiss()?;
        for _ in 0..100 {
            let angles: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
            let a = UnitaryTuple::from_angles(&angles)?;
            let (num, _) = det_and_margin(&substitute(&p, &a)?);
            let sym = poly.eval(&a.scalars().expect("k = 1"))?;
            let scale = num.norm().max(sym.norm());
            let rel = if scale == 0.0 { 0.0 } else { (num.norm() - sym.norm()).abs() / scale };
            worst = worst.max(rel);
            check(&mut f, rel <= 1e-9, || format!("trial {trial}: relative gap {rel:e}"));
        }
    }
    Ok(verdict(7, "k=1 symbolic/numeric consistency", f, format!("worst relative gap {worst:.2e}")))
}

pub fn criterion_8(log: &JumpLog) -> Result<CriterionResult> {
    let mut f = Vec::new();
    for (what, j, knot_case) in &log.jumps {
        check(&mut f, j.margin_h < 1e-6, || format!("{what}: margin_H {} at s={}", j.margin_h, j.s));
        if *knot_case {
            check(&mut f, j.margin_p() < 1e-6, || format!("{what}: margin_P {} at s={}", j.margin_p(), j.s));
        }
    }
    let worst = log.jumps.iter().map(|(_, j, _)| j.margin_h).fold(0.0, f64::max);
    Ok(verdict(
        8,
        "jump-locus containment",
        f,
        format!("{} jumps, worst margin_H {worst:.2e}", log.jumps.len()),
    ))
}

pub fn criterion_9() -> Result<CriterionResult> {
    let mut f = Vec::new();
    let (mut accepted, mut drawn) = (0, 0u64);
    while accepted < 100 && drawn < 1000 {
        let mut rng = trial_rng(9, drawn);
        drawn += 1;
        let m = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=3);
        let l1 = random_link(m, 1, 3, rng.gen())?;
        let l2 = random_link(m, 1, 3, rng.gen())?;
        let a = UnitaryTuple::haar(m, k, &mut rng);
        let i1 = rho_hat(&l1, &a, INERTIA_TOL)?;
        let i2 = rho_hat(&l2, &a, INERTIA_TOL)?;
        let im = rho_hat(&mirror(&l1), &a, INERTIA_TOL)?;
        let is = rho_hat(&block_sum(&l1, &l2)?, &a, INERTIA_TOL)?;
        if ![i1, i2, im, is].iter().all(|i| i.is_regular()) {
            continue;
        }
        accepted += 1;
        check(&mut f, im.signature == -i1.signature, || {
            format!("pair {}: mirror {} vs {} (m={m}, k={k})", drawn - 1, im.signature, i1.signature)
        });
        check(&mut f, is.signature == i1.signature + i2.signature, || {
            format!("pair {}: sum {} vs {} + {}", drawn - 1, is.signature, i1.signature, i2.signature)
        });
    }
    check(&mut f, accepted == 100, || format!("only {accepted} regular pairs"));
    Ok(verdict(9, "mirror antisymmetry and additivity", f, format!("{accepted} regular pairs")))
}

/// Determinant by expansion along the first row.
pub fn cofactor_det(m: &LaurentMatrix) -> LaurentPoly {
    let n = m.rows();
    let vars = m.vars();
    if n == 0 {
        return LaurentPoly::one(vars);
    }
    let mut total = LaurentPoly::zero(vars);
    for c in 0..n {
        let minor = LaurentMatrix::from_fn(n - 1, n - 1, vars, |r, s| {
            m.get(r + 1, if s < c { s } else { s + 1 }).clone()
        });
        let term = m.get(0, c) * &cofactor_det(&minor);
        total = if c % 2 == 0 { &total + &term } else { &total - &term };
    }
    total
}

pub fn random_laurent<R: Rng>(vars: usize, rng: &mut R) -> LaurentPoly {
    let terms = rng.gen_range(0..=3);
    LaurentPoly::from_terms(
        vars,
        (0..terms).map(|_| {
            let deg = (0..vars).map(|_| rng.gen_range(-2..=2)).collect();
            (deg, rng.gen_range(-3..=3))
        }),
    )
}

pub fn criterion_10() -> Result<CriterionResult> {
    let mut f = Vec::new();
    for trial in 0..200u64 {
        let mut rng = trial_rng(10, trial);
        let size = rng.gen_range(0..=4);
        let vars = rng.gen_range(1..=3);
        let m = LaurentMatrix::from_fn(size, size, vars, |_, _| random_laurent(vars, &mut rng));
        let fast = m.det_bareiss()?;
        let slow = cofactor_det(&m);
        check(&mut f, fast == slow, || format!("trial {trial}: {fast} vs {slow}"));
    }
    Ok(verdict(10, "Bareiss determinant matches cofactor expansion", f, "200/200 exact".into()))
}

/// Runs all criteria in order.
pub fn run_all() -> Result<Vec<CriterionResult>> {
    let mut log = JumpLog::default();
    let mut out = vec![
        criterion_1(&mut log)?,
        criterion_2(&mut log)?,
        criterion_3(&mut log)?,
        criterion_4(&mut log)?,
        criterion_5()?,
        criterion_6()?,
        criterion_7()?,
    ];
    out.push(criterion_8(&log)?);
    out.push(criterion_9()?);
    out.push(criterion_10()?);
    Ok(out)
}
