//! Hermitian twisted form `H(α)`, its inertia, and jump-locus scanning.
//!
//! With `A = A_q` split into blocks `A_ij` by component, `H(α)` has diagonal
//! blocks `A_ii ⊗ (I − U_i†) + A_iiᵀ ⊗ (I − U_i)` and off-diagonal blocks
//! `½(A_ij + A_jiᵀ) ⊗ (I − U_i†)(I − U_j)`. For a knot at `k = 1` this is the
//! Levine–Tristram form `(1 − ω̄)A + (1 − ω)Aᵀ`.

use std::f64::consts::PI;

use nalgebra::SymmetricEigen;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{c, det_and_margin, haar_unitary, CMatrix, C64};
use crate::seifert::{BoundaryLinkData, Convention};
use crate::substitution::{discriminant_margins, DiscriminantMargin, UnitaryTuple};

pub const INERTIA_TOL: f64 = 1e-8;
pub const REFINE_TOL: f64 = 1e-12;
const MAX_BISECTIONS: usize = 200;

/// A Hermitian matrix; construction averages the input with its adjoint.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(CMatrix);

impl HermitianMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "Hermitian matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let adj = m.adjoint();
        Ok(HermitianMatrix((m + adj) * c(0.5, 0.0)))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    /// Hadamard margin `|det H| / Π‖row‖`.
    pub fn margin(&self) -> f64 {
        det_and_margin(&self.0).1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InertiaResult {
    pub signature: i64,
    pub nullity: usize,
    pub tol_used: f64,
    pub ambiguous: bool,
}

impl InertiaResult {
    /// Non-ambiguous with trivial kernel.
    pub fn is_regular(&self) -> bool {
        !self.ambiguous && self.nullity == 0
    }
}

/// Builds `H(α)` from level `q`. The form does not depend on the presentation
/// convention.
pub fn twisted_form(l: &BoundaryLinkData, alpha: &UnitaryTuple) -> Result<HermitianMatrix> {
    let q = l.q();
    if q.is_multiple_of(2) {
        return Err(Error::Unsupported(format!(
            "twisted form for n = {} (q = {q} even): the middle pairing is skew and needs an \
             i-twisted convention that is not implemented",
            l.n()
        )));
    }
    if alpha.m() != l.m() {
        return Err(Error::DimensionMismatch(format!(
            "link has {} components, representation has {}",
            l.m(),
            alpha.m()
        )));
    }
    let level = l.level(q)?;
    let a = &level.matrix;
    let blocks = &level.blocks;
    let labels = blocks.labels();
    let k = alpha.k();
    let g = a.rows();
    let id = CMatrix::identity(k, k);
    let left: Vec<CMatrix> = alpha.unitaries().iter().map(|u| &id - u.adjoint()).collect();
    let right: Vec<CMatrix> = alpha.unitaries().iter().map(|u| &id - u).collect();
    let coupling: Vec<Vec<CMatrix>> = (0..l.m())
        .map(|i| (0..l.m()).map(|j| &left[i] * &right[j]).collect())
        .collect();

    let mut h = CMatrix::zeros(g * k, g * k);
    for x in 0..g {
        let i = labels[x];
        for y in 0..g {
            let j = labels[y];
            let axy = a.get(x, y) as f64;
            let ayx = a.get(y, x) as f64;
            for s in 0..k {
                for t in 0..k {
                    let z = if i == j {
                        left[i][(s, t)] * axy + right[i][(s, t)] * ayx
                    } else {
                        coupling[i][j][(s, t)] * (0.5 * (axy + ayx))
                    };
                    h[(x * k + s, y * k + t)] = z;
                }
            }
        }
    }
    HermitianMatrix::new(h)
}

/// Eigenvalue counts with threshold `τ = tol_rel·‖H‖₂` (`tol_rel` when `H = 0`).
pub fn inertia(h: &HermitianMatrix, tol_rel: f64) -> Result<InertiaResult> {
    if tol_rel.is_nan() || tol_rel <= 0.0 {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol_rel}")));
    }
    let m = h.matrix();
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    if m.nrows() == 0 {
        return Ok(InertiaResult {
            signature: 0,
            nullity: 0,
            tol_used: tol_rel,
            ambiguous: false,
        });
    }
    let eig = SymmetricEigen::new(m.clone()).eigenvalues;
    let norm = eig.iter().map(|l| l.abs()).fold(0.0, f64::max);
    let tau = if norm == 0.0 { tol_rel } else { tol_rel * norm };
    let (mut pos, mut neg, mut zero, mut ambiguous) = (0i64, 0i64, 0usize, false);
    for &l in eig.iter() {
        if l > tau {
            pos += 1;
        } else if l < -tau {
            neg += 1;
        } else {
            zero += 1;
        }
        if l.abs() > tau / 16.0 && l.abs() < 16.0 * tau {
            ambiguous = true;
        }
    }
    Ok(InertiaResult {
        signature: pos - neg,
        nullity: zero,
        tol_used: tau,
        ambiguous,
    })
}

/// Signature counting every eigenvalue by its floating-point sign. Used only
/// to localize a crossing inside a bracket whose ends are regular.
fn raw_signature(h: &HermitianMatrix) -> i64 {
    if h.dim() == 0 {
        return 0;
    }
    SymmetricEigen::new(h.matrix().clone())
        .eigenvalues
        .iter()
        .map(|&l| if l > 0.0 { 1 } else if l < 0.0 { -1 } else { 0 })
        .sum()
}

/// `inertia(twisted_form(L, α))`.
pub fn rho_hat(l: &BoundaryLinkData, alpha: &UnitaryTuple, tol_rel: f64) -> Result<InertiaResult> {
    inertia(&twisted_form(l, alpha)?, tol_rel)
}

/// Everything known about one representation point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointEvaluation {
    pub inertia: InertiaResult,
    pub margin_h: f64,
    pub margins_p: Vec<DiscriminantMargin>,
}

impl PointEvaluation {
    /// Smallest discriminant margin over the levels (1 when there are none).
    pub fn margin_p(&self) -> f64 {
        self.margins_p.iter().map(|m| m.margin).fold(1.0, f64::min)
    }
}

pub fn evaluate_point(
    l: &BoundaryLinkData,
    alpha: &UnitaryTuple,
    convention: Convention,
    tol_rel: f64,
) -> Result<PointEvaluation> {
    let h = twisted_form(l, alpha)?;
    Ok(PointEvaluation {
        inertia: inertia(&h, tol_rel)?,
        margin_h: h.margin(),
        margins_p: discriminant_margins(l, alpha, convention)?,
    })
}

/// A curve `s ↦ α(s)` on `[0, 1]`.
pub trait RepPath: Sync {
    fn at(&self, s: f64) -> Result<UnitaryTuple>;
}

impl<F> RepPath for F
where
    F: Fn(f64) -> Result<UnitaryTuple> + Sync,
{
    fn at(&self, s: f64) -> Result<UnitaryTuple> {
        self(s)
    }
}

/// Loop `U_r(s) = e^{2πis}·B_r` in one component, the others held at `B`.
#[derive(Clone, Debug)]
pub struct ComponentLoop {
    pub base: UnitaryTuple,
    pub component: usize,
}

impl ComponentLoop {
    pub fn new(base: UnitaryTuple, component: usize) -> Result<Self> {
        if component >= base.m() {
            return Err(Error::ComponentIndex {
                index: component,
                m: base.m(),
            });
        }
        Ok(ComponentLoop { base, component })
    }
}

impl RepPath for ComponentLoop {
    fn at(&self, s: f64) -> Result<UnitaryTuple> {
        let phase = C64::from_polar(1.0, 2.0 * PI * s);
        let us = self
            .base
            .unitaries()
            .iter()
            .enumerate()
            .map(|(r, u)| if r == self.component { u * phase } else { u.clone() })
            .collect();
        UnitaryTuple::new(self.base.k(), us)
    }
}

/// Closed circle `U_r(s) = W_r diag(e^{i(φ_{r,a} + 2πs·w_{r,a})}) W_r†` with
/// integer windings.
#[derive(Clone, Debug)]
pub struct CirclePath {
    k: usize,
    frames: Vec<CMatrix>,
    phases: Vec<Vec<f64>>,
    windings: Vec<Vec<i32>>,
}

impl CirclePath {
    /// Haar frames, uniform phases and windings in `[−2, 2]`.
    pub fn random<R: Rng>(m: usize, k: usize, rng: &mut R) -> Self {
        let frames = (0..m).map(|_| haar_unitary(k, rng)).collect();
        let phases = (0..m)
            .map(|_| (0..k).map(|_| rng.gen_range(0.0..2.0 * PI)).collect())
            .collect();
        let windings = (0..m)
            .map(|_| (0..k).map(|_| rng.gen_range(-2..=2)).collect())
            .collect();
        CirclePath {
            k,
            frames,
            phases,
            windings,
        }
    }
}

impl RepPath for CirclePath {
    fn at(&self, s: f64) -> Result<UnitaryTuple> {
        let us = self
            .frames
            .iter()
            .zip(&self.phases)
            .zip(&self.windings)
            .map(|((w, ph), wi)| {
                let d = CMatrix::from_fn(self.k, self.k, |a, b| {
                    if a == b {
                        C64::from_polar(1.0, ph[a] + 2.0 * PI * s * f64::from(wi[a]))
                    } else {
                        c(0.0, 0.0)
                    }
                });
                w * d * w.adjoint()
            })
            .collect();
        UnitaryTuple::new(self.k, us)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanOptions {
    pub samples: usize,
    pub refine_tol: f64,
    pub inertia_tol: f64,
    pub convention: Convention,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            samples: 1024,
            refine_tol: REFINE_TOL,
            inertia_tol: INERTIA_TOL,
            convention: Convention::Classical,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanSample {
    pub s: f64,
    pub signature: i64,
    pub nullity: usize,
    pub ambiguous: bool,
    pub margin_h: f64,
    pub margin_p: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Jump {
    pub s: f64,
    pub before: i64,
    pub after: i64,
    pub margin_h: f64,
    pub margins_p: Vec<DiscriminantMargin>,
}

impl Jump {
    pub fn margin_p(&self) -> f64 {
        self.margins_p.iter().map(|m| m.margin).fold(1.0, f64::min)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JumpReport {
    pub samples: Vec<ScanSample>,
    pub jumps: Vec<Jump>,
}

impl JumpReport {
    pub fn ambiguous_samples(&self) -> usize {
        self.samples.iter().filter(|s| s.ambiguous).count()
    }
}

/// Samples `rho_hat` at `s_j = j/(N−1)` and bisects every signature change
/// between consecutive regular samples down to `refine_tol`. Bisection keeps
/// the end whose raw eigenvalue signs still give the earlier signature.
pub fn scan_path<P: RepPath + ?Sized>(
    l: &BoundaryLinkData,
    path: &P,
    opts: &ScanOptions,
) -> Result<JumpReport> {
    if opts.samples < 2 {
        return Err(Error::InvalidParameter(format!(
            "scan needs at least 2 samples, got {}",
            opts.samples
        )));
    }
    if opts.refine_tol.is_nan() || opts.refine_tol <= 0.0 {
        return Err(Error::InvalidParameter("refine tolerance must be positive".into()));
    }
    let eval = |s: f64| -> Result<PointEvaluation> {
        evaluate_point(l, &path.at(s)?, opts.convention, opts.inertia_tol)
    };
    let raw = |s: f64| -> Result<i64> { Ok(raw_signature(&twisted_form(l, &path.at(s)?)?)) };
    let n = opts.samples;
    let points: Vec<(f64, PointEvaluation)> = (0..n)
        .into_par_iter()
        .map(|j| {
            let s = j as f64 / (n - 1) as f64;
            eval(s).map(|e| (s, e))
        })
        .collect::<Result<_>>()?;

    let regular: Vec<&(f64, PointEvaluation)> =
        points.iter().filter(|(_, e)| e.inertia.is_regular()).collect();
    let brackets: Vec<(f64, f64, i64, i64)> = regular
        .windows(2)
        .filter(|w| w[0].1.inertia.signature != w[1].1.inertia.signature)
        .map(|w| (w[0].0, w[1].0, w[0].1.inertia.signature, w[1].1.inertia.signature))
        .collect();

    let jumps = brackets
        .into_par_iter()
        .map(|(mut lo, mut hi, before, after)| {
            let mut iters = 0;
            while hi - lo > opts.refine_tol && iters < MAX_BISECTIONS {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if raw(mid)? == before {
                    lo = mid;
                } else {
                    hi = mid;
                }
                iters += 1;
            }
            let s = 0.5 * (lo + hi);
            let e = eval(s)?;
            Ok(Jump {
                s,
                before,
                after,
                margin_h: e.margin_h,
                margins_p: e.margins_p,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let samples = points
        .into_iter()
        .map(|(s, e)| ScanSample {
            s,
            signature: e.inertia.signature,
            nullity: e.inertia.nullity,
            ambiguous: e.inertia.ambiguous,
            margin_h: e.margin_h,
            margin_p: e.margin_p(),
        })
        .collect();
    Ok(JumpReport { samples, jumps })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub indices: Vec<usize>,
    pub angles: Vec<f64>,
    pub signature: i64,
    pub nullity: usize,
    pub ambiguous: bool,
    pub margin_h: f64,
    pub margin_p: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridDataset {
    pub resolution: usize,
    pub m: usize,
    pub points: Vec<GridPoint>,
}

/// Evaluates the `k = 1` form at the angles `2πj/R` of the `m`-torus, row-major.
pub fn torus_grid(
    l: &BoundaryLinkData,
    resolution: usize,
    convention: Convention,
    tol_rel: f64,
) -> Result<GridDataset> {
    if resolution < 2 {
        return Err(Error::InvalidParameter(format!(
            "grid resolution must be at least 2, got {resolution}"
        )));
    }
    let m = l.m();
    if m > 3 {
        return Err(Error::InvalidParameter(format!(
            "torus grids are limited to m ≤ 3, got m = {m}"
        )));
    }
    let total = resolution.pow(m as u32);
    let points = (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut indices = vec![0; m];
            let mut rest = flat;
            for slot in indices.iter_mut().rev() {
                *slot = rest % resolution;
                rest /= resolution;
            }
            let angles: Vec<f64> = indices
                .iter()
                .map(|&j| 2.0 * PI * j as f64 / resolution as f64)
                .collect();
            let e = evaluate_point(l, &UnitaryTuple::from_angles(&angles)?, convention, tol_rel)?;
            Ok(GridPoint {
                indices,
                angles,
                signature: e.inertia.signature,
                nullity: e.inertia.nullity,
                ambiguous: e.inertia.ambiguous,
                margin_h: e.margin_h,
                margin_p: e.margin_p(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GridDataset {
        resolution,
        m,
        points,
    })
}
