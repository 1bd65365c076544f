//! Randomized property suites and the jump-locus comparison.
//!
//! Each trial draws from its own ChaCha stream, selected by the trial index,
//! so reports do not depend on how trials are scheduled.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::document::LinkDocument;
use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::laurent::LaurentPoly;
use crate::numeric::{det_and_margin, ComplexDoc};
use crate::presentation::{alexander_polynomial, presentation_matrix};
use crate::seifert::{
    block_sum, congruence_transform, metabolic_enlargement, mirror, random_basis_change,
    random_link, BoundaryLinkData, Convention,
};
use crate::substitution::{substitute, UnitaryTuple};
use crate::twisted::{
    evaluate_point, rho_hat, scan_path, CirclePath, InertiaResult, ScanOptions, INERTIA_TOL,
};

pub const MAX_COMPONENTS: usize = 3;
pub const MAX_K: usize = 3;
pub const MAX_BLOCK: usize = 5;
pub const MAX_TRIALS: usize = 1000;
pub const MAX_POINTS: usize = 200;
/// Agreement threshold for both margins at a jump.
pub const LOCUS_TOL: f64 = 1e-6;
/// Relative tolerance for comparing discriminant determinants.
pub const DET_REL_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    MetabolicVanishing,
    CongruenceInvariance,
    Additivity,
    Mirror,
    LocalConstancy,
    AlexanderConsistency,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::MetabolicVanishing,
        Suite::CongruenceInvariance,
        Suite::Additivity,
        Suite::Mirror,
        Suite::LocalConstancy,
        Suite::AlexanderConsistency,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::MetabolicVanishing => "metabolic-vanishing",
            Suite::CongruenceInvariance => "congruence-invariance",
            Suite::Additivity => "additivity",
            Suite::Mirror => "mirror",
            Suite::LocalConstancy => "local-constancy",
            Suite::AlexanderConsistency => "alexander-consistency",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.as_str() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_owned()))
    }
}

/// Sampling parameters shared by all suites.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteParams {
    /// Components are drawn from `1..=m_max`.
    pub m_max: usize,
    /// Representation dimensions are drawn from `1..=k_max`.
    pub k_max: usize,
    pub max_block: usize,
    /// Representation points per trial.
    pub points: usize,
    /// Also attempts a non-unimodular congruence in every trial, which must be rejected.
    pub inject_non_unimodular: bool,
    pub convention: Convention,
    pub inertia_tol: f64,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            m_max: 3,
            k_max: 3,
            max_block: 3,
            points: 10,
            inject_non_unimodular: false,
            convention: Convention::Classical,
            inertia_tol: INERTIA_TOL,
        }
    }
}

impl SuiteParams {
    /// Defaults with the point count used by `suite`.
    pub fn for_suite(suite: Suite) -> Self {
        let points = match suite {
            Suite::MetabolicVanishing => 50,
            Suite::Mirror | Suite::Additivity => 1,
            _ => 10,
        };
        SuiteParams {
            points,
            ..Self::default()
        }
    }

    fn check(&self, trials: usize) -> Result<()> {
        let bounded = |name: &str, v: usize, hi: usize| {
            if (1..=hi).contains(&v) {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must lie in 1..={hi}, got {v}")))
            }
        };
        bounded("trials", trials, MAX_TRIALS)?;
        bounded("m", self.m_max, MAX_COMPONENTS)?;
        bounded("k", self.k_max, MAX_K)?;
        bounded("max_block", self.max_block, MAX_BLOCK)?;
        bounded("points", self.points, MAX_POINTS)?;
        if self.inertia_tol.is_nan() || self.inertia_tol <= 0.0 {
            return Err(Error::InvalidParameter("inertia tolerance must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub trial: usize,
    pub payload: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub suite: Suite,
    pub trials: usize,
    pub seed: u64,
    pub params: SuiteParams,
    pub passed: bool,
    /// Individual property checks carried out.
    pub checked: usize,
    /// Points skipped for ambiguous or degenerate inertia.
    pub skipped: usize,
    /// Invalid moves refused by their precondition.
    pub rejected_moves: usize,
    pub failures: Vec<Failure>,
}

#[derive(Default)]
struct Tally {
    checked: usize,
    skipped: usize,
    rejected: usize,
    failures: Vec<Value>,
}

impl Tally {
    fn record(&mut self, ok: bool, payload: impl FnOnce() -> Value) {
        self.checked += 1;
        if !ok {
            self.failures.push(payload());
        }
    }
}

/// RNG for one trial: stream `trial` of the ChaCha generator keyed by `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn link_json(l: &BoundaryLinkData) -> Value {
    serde_json::to_value(LinkDocument::from(l)).expect("link documents serialize")
}

fn rep_json(a: &UnitaryTuple) -> Value {
    serde_json::to_value(a.to_document()).expect("representation documents serialize")
}

fn regular(i: &InertiaResult) -> Option<i64> {
    i.is_regular().then_some(i.signature)
}

fn draw_link<R: Rng>(p: &SuiteParams, m: usize, rng: &mut R) -> Result<BoundaryLinkData> {
    random_link(m, 1, p.max_block, rng.gen())
}

fn run_trial(suite: Suite, p: &SuiteParams, seed: u64, trial: usize) -> Result<Tally> {
    let mut rng = trial_rng(seed, trial as u64);
    let m = rng.gen_range(1..=p.m_max);
    let k = rng.gen_range(1..=p.k_max);
    let tol = p.inertia_tol;
    let mut t = Tally::default();
    match suite {
        Suite::MetabolicVanishing => {
            let mut l = BoundaryLinkData::empty(m, 1)?;
            let moves = rng.gen_range(1..=p.max_block.div_ceil(2).max(1) * m);
            for _ in 0..moves {
                l = metabolic_enlargement(&l, rng.gen_range(0..m), rng.gen())?;
            }
            let (q, _) = random_basis_change(&l.level(1)?.blocks, &mut rng);
            let l = congruence_transform(&l, &q)?;
            for _ in 0..p.points {
                let a = UnitaryTuple::haar(m, k, &mut rng);
                let i = rho_hat(&l, &a, tol)?;
                match regular(&i) {
                    None => t.skipped += 1,
                    Some(sig) => t.record(sig == 0, || {
                        json!({"link": link_json(&l), "rep": rep_json(&a), "inertia": i})
                    }),
                }
            }
        }
        Suite::CongruenceInvariance => {
            let l = draw_link(p, m, &mut rng)?;
            let blocks = l.level(1)?.blocks.clone();
            let (q, _) = random_basis_change(&blocks, &mut rng);
            let l2 = congruence_transform(&l, &q)?;
            if p.inject_non_unimodular && blocks.total() > 0 {
                let mut bad = IntMatrix::identity(blocks.total());
                bad.set(0, 0, 2);
                match congruence_transform(&l, &bad) {
                    Err(Error::NotUnimodular(_)) => t.rejected += 1,
                    other => t.record(false, || {
                        json!({"link": link_json(&l), "move": bad.to_rows(),
                               "error": "non-unimodular move accepted",
                               "result": format!("{:?}", other.map(|x| LinkDocument::from(&x)))})
                    }),
                }
            }
            for _ in 0..p.points {
                let a = UnitaryTuple::haar(m, k, &mut rng);
                let e1 = evaluate_point(&l, &a, p.convention, tol)?;
                let e2 = evaluate_point(&l2, &a, p.convention, tol)?;
                let payload = || {
                    json!({"link": link_json(&l), "move": q.to_rows(), "rep": rep_json(&a),
                           "before": e1, "after": e2})
                };
                let dets_agree = e1.margins_p.iter().zip(&e2.margins_p).all(|(x, y)| {
                    let scale = x.det_value.norm().max(y.det_value.norm());
                    (x.det_value - y.det_value).norm() <= DET_REL_TOL * scale.max(1e-300)
                        || (x.margin < DET_REL_TOL && y.margin < DET_REL_TOL)
                });
                t.record(dets_agree, payload);
                match (regular(&e1.inertia), regular(&e2.inertia)) {
                    (Some(s1), Some(s2)) => t.record(s1 == s2, payload),
                    _ => t.skipped += 1,
                }
            }
        }
        Suite::Additivity => {
            let l1 = draw_link(p, m, &mut rng)?;
            let l2 = draw_link(p, m, &mut rng)?;
            let sum = block_sum(&l1, &l2)?;
            for _ in 0..p.points {
                let a = UnitaryTuple::haar(m, k, &mut rng);
                let (i1, i2, is) = (rho_hat(&l1, &a, tol)?, rho_hat(&l2, &a, tol)?, rho_hat(&sum, &a, tol)?);
                match (regular(&i1), regular(&i2), regular(&is)) {
                    (Some(s1), Some(s2), Some(s)) => t.record(s == s1 + s2, || {
                        json!({"link1": link_json(&l1), "link2": link_json(&l2), "rep": rep_json(&a),
                               "inertia1": i1, "inertia2": i2, "inertia_sum": is})
                    }),
                    _ => t.skipped += 1,
                }
            }
        }
        Suite::Mirror => {
            let l = draw_link(p, m, &mut rng)?;
            let lm = mirror(&l);
            for _ in 0..p.points {
                let a = UnitaryTuple::haar(m, k, &mut rng);
                let (i, im) = (rho_hat(&l, &a, tol)?, rho_hat(&lm, &a, tol)?);
                match (regular(&i), regular(&im)) {
                    (Some(s), Some(sm)) => t.record(sm == -s, || {
                        json!({"link": link_json(&l), "rep": rep_json(&a),
                               "inertia": i, "inertia_mirror": im})
                    }),
                    _ => t.skipped += 1,
                }
            }
        }
        Suite::LocalConstancy => {
            let l = draw_link(p, m, &mut rng)?;
            for _ in 0..p.points {
                let a = UnitaryTuple::haar(m, k, &mut rng);
                let e = evaluate_point(&l, &a, p.convention, tol)?;
                let Some(sig) = regular(&e.inertia).filter(|_| e.margin_h > 1e-2) else {
                    t.skipped += 1;
                    continue;
                };
                let b = a.perturbed(1e-4, &mut rng);
                let ib = rho_hat(&l, &b, tol)?;
                match regular(&ib) {
                    Some(sb) => t.record(sb == sig, || {
                        json!({"link": link_json(&l), "rep": rep_json(&a), "perturbed": rep_json(&b),
                               "inertia": e.inertia, "inertia_perturbed": ib})
                    }),
                    None => t.skipped += 1,
                }
            }
        }
        Suite::AlexanderConsistency => alexander_trial(p, m, &mut rng, &mut t)?,
    }
    Ok(t)
}

fn alexander_trial<R: Rng>(p: &SuiteParams, m: usize, rng: &mut R, t: &mut Tally) -> Result<()> {
    let conv = p.convention;
    let l = draw_link(p, m, rng)?;
    let d = alexander_polynomial(&l, 1, conv)?;
    let show = |x: &LaurentPoly| x.to_string();

    let (q, _) = random_basis_change(&l.level(1)?.blocks, rng);
    let lq = congruence_transform(&l, &q)?;
    let dq = alexander_polynomial(&lq, 1, conv)?;
    t.record(dq == d, || {
        json!({"check": "congruence", "link": link_json(&l), "move": q.to_rows(),
               "before": show(&d), "after": show(&dq)})
    });

    let comp = rng.gen_range(0..m);
    let le = metabolic_enlargement(&l, comp, rng.gen())?;
    let de = alexander_polynomial(&le, 1, conv)?;
    t.record(de == d, || {
        json!({"check": "enlargement", "link": link_json(&l), "component": comp,
               "before": show(&d), "after": show(&de)})
    });

    let l2 = draw_link(p, m, rng)?;
    let d2 = alexander_polynomial(&l2, 1, conv)?;
    let ds = alexander_polynomial(&block_sum(&l, &l2)?, 1, conv)?;
    let prod = (&d * &d2).normalize();
    t.record(ds == prod, || {
        json!({"check": "block-sum", "link1": link_json(&l), "link2": link_json(&l2),
               "sum": show(&ds), "product": show(&prod)})
    });

    let pres = presentation_matrix(&l, 1, conv)?;
    let raw = pres.matrix().det_bareiss()?;
    for _ in 0..p.points {
        let angles: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
        let a = UnitaryTuple::from_angles(&angles)?;
        let (num, _) = det_and_margin(&substitute(&pres, &a)?);
        let sym = raw.eval(&a.scalars().expect("k = 1"))?;
        let scale = num.norm().max(sym.norm());
        let ok = (num.norm() - sym.norm()).abs() <= DET_REL_TOL * scale.max(1.0);
        t.record(ok, || {
            json!({"check": "k1-eval", "link": link_json(&l), "angles": angles,
                   "numeric": ComplexDoc::from(num), "symbolic": ComplexDoc::from(sym)})
        });
    }

    if m == 1 {
        let sym = d.inverted().normalize();
        t.record(sym == d, || {
            json!({"check": "symmetry", "link": link_json(&l), "poly": show(&d), "inverted": show(&sym)})
        });
    }
    Ok(())
}

/// Runs `trials` independent trials of `suite`.
pub fn run_suite(suite: Suite, trials: usize, seed: u64, params: &SuiteParams) -> Result<PropertyReport> {
    params.check(trials)?;
    let tallies = (0..trials)
        .into_par_iter()
        .map(|trial| run_trial(suite, params, seed, trial))
        .collect::<Result<Vec<_>>>()?;
    let mut report = PropertyReport {
        suite,
        trials,
        seed,
        params: params.clone(),
        passed: true,
        checked: 0,
        skipped: 0,
        rejected_moves: 0,
        failures: Vec::new(),
    };
    for (trial, t) in tallies.into_iter().enumerate() {
        report.checked += t.checked;
        report.skipped += t.skipped;
        report.rejected_moves += t.rejected;
        report
            .failures
            .extend(t.failures.into_iter().map(|payload| Failure { trial, payload }));
    }
    report.passed = report.failures.is_empty();
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub scan: usize,
    pub s: f64,
    pub before: i64,
    pub after: i64,
    pub margin_h: f64,
    pub margins_p: Vec<(usize, f64)>,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocusReport {
    pub link: Option<String>,
    pub k: usize,
    pub scans: usize,
    pub seed: u64,
    pub convention: Convention,
    pub crossings: Vec<Crossing>,
    pub agreements: usize,
    pub disagreements: usize,
}

/// Scans random circles in `U(k)^m` and records, at each refined jump, the
/// margins of `det H` and of every `det P̄`.
pub fn compare_loci(
    l: &BoundaryLinkData,
    scans: usize,
    seed: u64,
    convention: Convention,
    k: usize,
    samples: usize,
) -> Result<LocusReport> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be ≥ 1".into()));
    }
    let opts = ScanOptions {
        samples,
        convention,
        ..ScanOptions::default()
    };
    let per_scan = (0..scans)
        .into_par_iter()
        .map(|scan| {
            let mut rng = trial_rng(seed, scan as u64);
            let path = CirclePath::random(l.m(), k, &mut rng);
            let report = scan_path(l, &path, &opts)?;
            Ok(report
                .jumps
                .into_iter()
                .map(|j| {
                    let agree = j.margin_h < LOCUS_TOL && j.margin_p() < LOCUS_TOL;
                    Crossing {
                        scan,
                        s: j.s,
                        before: j.before,
                        after: j.after,
                        margin_h: j.margin_h,
                        margins_p: j.margins_p.iter().map(|m| (m.level, m.margin)).collect(),
                        agree,
                    }
                })
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let crossings: Vec<Crossing> = per_scan.into_iter().flatten().collect();
    let agreements = crossings.iter().filter(|c| c.agree).count();
    Ok(LocusReport {
        link: l.name().map(str::to_owned),
        k,
        scans,
        seed,
        convention,
        disagreements: crossings.len() - agreements,
        agreements,
        crossings,
    })
}
