//! Points of the representation variety `U(k)^m` and the discriminant test.
//!
//! Substituting `α(t_r) = U_r` into a presentation matrix turns every entry
//! `a·t_r + b` into the `k × k` block `a·U_r + b·I`. The representation point
//! lies on the discriminant exactly when one of the resulting determinants
//! vanishes. Blocks are laid out with the Seifert-basis index outer and the
//! representation index inner: row `r·k + s` belongs to basis vector `r`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{
    c, cayley_step, complex_serde, det_and_margin, haar_unitary, polar_unitary, random_hermitian,
    unitarity_defect, CMatrix, ComplexDoc, C64,
};
use crate::presentation::{presentation_matrix, PresentationLevel};
use crate::seifert::{BoundaryLinkData, Convention};

/// Maximum `|U†U − I|` entry accepted without repair.
pub const UNITARITY_TOL: f64 = 1e-10;
/// Inputs off by at most this much are projected onto `U(k)`; worse ones are rejected.
pub const PROJECTION_LIMIT: f64 = 1e-6;
/// Default margin threshold for discriminant membership.
pub const DISCRIMINANT_TOL: f64 = 1e-8;

/// A representation `α = (U_1, …, U_m)` of the free group in `U(k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryTuple {
    k: usize,
    us: Vec<CMatrix>,
}

impl UnitaryTuple {
    /// Validates unitarity, repairing inputs within [`PROJECTION_LIMIT`].
    pub fn new(k: usize, us: Vec<CMatrix>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("representation dimension k must be ≥ 1".into()));
        }
        if us.is_empty() {
            return Err(Error::NoComponents);
        }
        let mut out = Vec::with_capacity(us.len());
        for u in us {
            if u.nrows() != k || u.ncols() != k {
                return Err(Error::DimensionMismatch(format!(
                    "expected {k}x{k} unitary, got {}x{}",
                    u.nrows(),
                    u.ncols()
                )));
            }
            if u.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::NonFinite);
            }
            let defect = unitarity_defect(&u);
            if defect <= UNITARITY_TOL {
                out.push(u);
            } else if defect <= PROJECTION_LIMIT {
                let p = polar_unitary(&u).ok_or(Error::NotUnitary(defect))?;
                out.push(p);
            } else {
                return Err(Error::NotUnitary(defect));
            }
        }
        Ok(UnitaryTuple { k, us: out })
    }

    /// `k = 1` point `(e^{iθ_1}, …, e^{iθ_m})`.
    pub fn from_angles(angles: &[f64]) -> Result<Self> {
        Self::new(
            1,
            angles
                .iter()
                .map(|&t| CMatrix::from_element(1, 1, C64::from_polar(1.0, t)))
                .collect(),
        )
    }

    /// Scalar point `U_r = e^{iθ_r} I_k`.
    pub fn scalar(k: usize, angles: &[f64]) -> Result<Self> {
        Self::new(
            k,
            angles
                .iter()
                .map(|&t| CMatrix::identity(k, k) * C64::from_polar(1.0, t))
                .collect(),
        )
    }

    pub fn trivial(m: usize, k: usize) -> Result<Self> {
        Self::scalar(k, &vec![0.0; m])
    }

    /// Independent Haar-random unitaries.
    pub fn haar<R: Rng>(m: usize, k: usize, rng: &mut R) -> Self {
        UnitaryTuple {
            k,
            us: (0..m).map(|_| haar_unitary(k, rng)).collect(),
        }
    }

    /// Moves every `U_r` by a Cayley step of size `eps` in a random direction.
    pub fn perturbed<R: Rng>(&self, eps: f64, rng: &mut R) -> Self {
        UnitaryTuple {
            k: self.k,
            us: self
                .us
                .iter()
                .map(|u| u * cayley_step(&random_hermitian(self.k, rng), eps))
                .collect(),
        }
    }

    /// Entrywise complex conjugate `ᾱ`.
    pub fn conjugate(&self) -> Self {
        UnitaryTuple {
            k: self.k,
            us: self.us.iter().map(|u| u.map(|z| z.conj())).collect(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.us.len()
    }

    pub fn unitaries(&self) -> &[CMatrix] {
        &self.us
    }

    pub fn unitary(&self, r: usize) -> &CMatrix {
        &self.us[r]
    }

    /// `k = 1` coordinates `(z_1, …, z_m)`.
    pub fn scalars(&self) -> Option<Vec<C64>> {
        (self.k == 1).then(|| self.us.iter().map(|u| u[(0, 0)]).collect())
    }

    pub fn to_document(&self) -> RepDocument {
        RepDocument {
            k: self.k,
            unitaries: Some(
                self.us
                    .iter()
                    .map(|u| {
                        (0..self.k)
                            .map(|r| (0..self.k).map(|s| ComplexDoc::from(u[(r, s)])).collect())
                            .collect()
                    })
                    .collect(),
            ),
            angles: None,
        }
    }
}

/// Wire form of a representation point. Either `unitaries` (one `k × k`
/// matrix of `{"re", "im"}` entries per component) or, for `k = 1`,
/// `angles` with `U_r = e^{iθ_r}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepDocument {
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unitaries: Option<Vec<Vec<Vec<ComplexDoc>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angles: Option<Vec<f64>>,
}

impl TryFrom<&RepDocument> for UnitaryTuple {
    type Error = Error;

    fn try_from(doc: &RepDocument) -> Result<Self> {
        match (&doc.unitaries, &doc.angles) {
            (Some(us), None) => {
                let mats = us
                    .iter()
                    .map(|rows| {
                        if rows.len() != doc.k || rows.iter().any(|r| r.len() != doc.k) {
                            return Err(Error::DimensionMismatch(format!(
                                "unitary is not {k}x{k}",
                                k = doc.k
                            )));
                        }
                        Ok(CMatrix::from_fn(doc.k, doc.k, |r, s| rows[r][s].into()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                UnitaryTuple::new(doc.k, mats)
            }
            (None, Some(angles)) if doc.k == 1 => UnitaryTuple::from_angles(angles),
            (None, Some(_)) => Err(Error::Malformed("`angles` shorthand requires k = 1".into())),
            _ => Err(Error::Malformed(
                "representation needs exactly one of `unitaries` or `angles`".into(),
            )),
        }
    }
}

/// Substitutes `α` into `P`: entry `a·t_r + b` becomes `a·U_r + b·I_k`.
pub fn substitute(p: &PresentationLevel, alpha: &UnitaryTuple) -> Result<CMatrix> {
    if alpha.m() != p.m() {
        return Err(Error::DimensionMismatch(format!(
            "presentation has {} variables, representation has {} components",
            p.m(),
            alpha.m()
        )));
    }
    let k = alpha.k();
    let g = p.side();
    let labels = p.blocks.labels();
    let mut out = CMatrix::zeros(g * k, g * k);
    for r in 0..g {
        let u = alpha.unitary(labels[r]);
        for col in 0..g {
            let a = p.var_coeff.get(r, col) as f64;
            let b = p.constant.get(r, col) as f64;
            if a == 0.0 && b == 0.0 {
                continue;
            }
            for s in 0..k {
                for t in 0..k {
                    let mut z = u[(s, t)] * a;
                    if s == t {
                        z += c(b, 0.0);
                    }
                    out[(r * k + s, col * k + t)] = z;
                }
            }
        }
    }
    Ok(out)
}

/// Determinant of `P̄` at one level with its Hadamard-normalized size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscriminantMargin {
    pub level: usize,
    #[serde(with = "complex_serde")]
    pub det_value: C64,
    pub margin: f64,
}

/// One margin per discriminant level (`q`, and `q − 1` when it exists).
pub fn discriminant_margins(
    l: &BoundaryLinkData,
    alpha: &UnitaryTuple,
    convention: Convention,
) -> Result<Vec<DiscriminantMargin>> {
    l.discriminant_levels()
        .into_iter()
        .map(|level| {
            let p = presentation_matrix(l, level, convention)?;
            let (det_value, margin) = det_and_margin(&substitute(&p, alpha)?);
            Ok(DiscriminantMargin {
                level,
                det_value,
                margin,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscriminantCheck {
    pub member: bool,
    pub margins: Vec<DiscriminantMargin>,
}

/// `α ∈ D_L` iff some level's margin falls below `tol`.
pub fn in_discriminant(
    l: &BoundaryLinkData,
    alpha: &UnitaryTuple,
    tol: f64,
    convention: Convention,
) -> Result<DiscriminantCheck> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let margins = discriminant_margins(l, alpha, convention)?;
    Ok(DiscriminantCheck {
        member: margins.iter().any(|m| m.margin < tol),
        margins,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intmat::IntMatrix;
    use std::f64::consts::PI;

    fn knot(rows: Vec<Vec<i64>>) -> BoundaryLinkData {
        let g = rows.len();
        BoundaryLinkData::classical(None, vec![g], IntMatrix::from_rows(rows).unwrap()).unwrap()
    }

    fn trefoil() -> BoundaryLinkData {
        knot(vec![vec![-1, 1], vec![0, -1]])
    }

    fn figure_eight() -> BoundaryLinkData {
        knot(vec![vec![1, 1], vec![0, -1]])
    }

    #[test]
    fn trefoil_at_minus_one() {
        let p = presentation_matrix(&trefoil(), 1, Convention::Classical).unwrap();
        let alpha = UnitaryTuple::from_angles(&[PI]).unwrap();
        let m = substitute(&p, &alpha).unwrap();
        let expect = [[2.0, -1.0], [-1.0, 2.0]];
        for r in 0..2 {
            for s in 0..2 {
                assert!((m[(r, s)] - c(expect[r][s], 0.0)).norm() < 1e-15);
            }
        }
        let (d, _) = det_and_margin(&m);
        assert!((d - c(3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn trivial_rep_is_augmentation_tensor_identity() {
        let p = presentation_matrix(&trefoil(), 1, Convention::Paper).unwrap();
        let alpha = UnitaryTuple::trivial(1, 3).unwrap();
        let m = substitute(&p, &alpha).unwrap();
        let aug = p.augmentation();
        for r in 0..6 {
            for s in 0..6 {
                let want = if r % 3 == s % 3 { aug.get(r / 3, s / 3) as f64 } else { 0.0 };
                assert_eq!(m[(r, s)], c(want, 0.0));
            }
        }
    }

    #[test]
    fn trefoil_k2_identity_has_det_one() {
        let p = presentation_matrix(&trefoil(), 1, Convention::Classical).unwrap();
        let alpha = UnitaryTuple::trivial(1, 2).unwrap();
        let (d, _) = det_and_margin(&substitute(&p, &alpha).unwrap());
        assert!((d - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn membership_examples() {
        let t = trefoil();
        let omega = UnitaryTuple::from_angles(&[PI / 3.0]).unwrap();
        let chk = in_discriminant(&t, &omega, DISCRIMINANT_TOL, Convention::Classical).unwrap();
        assert!(chk.member);
        assert!(chk.margins[0].margin <= 1e-9);

        let minus_one = UnitaryTuple::from_angles(&[PI]).unwrap();
        let chk = in_discriminant(&t, &minus_one, DISCRIMINANT_TOL, Convention::Classical).unwrap();
        assert!(!chk.member);
        assert!(chk.margins[0].margin > 0.5);

        let one = UnitaryTuple::from_angles(&[0.0]).unwrap();
        let chk = in_discriminant(&t, &one, DISCRIMINANT_TOL, Convention::Classical).unwrap();
        assert!(!chk.member);
        assert!((chk.margins[0].margin - 1.0).abs() < 1e-12);

        let empty = BoundaryLinkData::empty(2, 1).unwrap();
        let alpha = UnitaryTuple::from_angles(&[1.0, 2.0]).unwrap();
        let chk = in_discriminant(&empty, &alpha, DISCRIMINANT_TOL, Convention::Classical).unwrap();
        assert!(!chk.member);
    }

    #[test]
    fn figure_eight_stays_off_the_circle() {
        let f = figure_eight();
        let min = (0..1000)
            .map(|j| {
                let a = UnitaryTuple::from_angles(&[2.0 * PI * j as f64 / 1000.0]).unwrap();
                discriminant_margins(&f, &a, Convention::Classical).unwrap()[0].margin
            })
            .fold(f64::INFINITY, f64::min);
        assert!(min > 0.01, "min margin {min}");
    }

    #[test]
    fn unitarity_is_enforced() {
        let bad = CMatrix::from_element(1, 1, c(1.1, 0.0));
        assert!(matches!(UnitaryTuple::new(1, vec![bad]), Err(Error::NotUnitary(_))));
        let near = CMatrix::from_element(1, 1, c(1.0 + 1e-8, 0.0));
        let u = UnitaryTuple::new(1, vec![near]).unwrap();
        assert!(unitarity_defect(u.unitary(0)) < 1e-14);
    }

    #[test]
    fn rep_document_forms() {
        let doc: RepDocument = serde_json::from_str(r#"{"k":1,"angles":[3.0]}"#).unwrap();
        let a = UnitaryTuple::try_from(&doc).unwrap();
        assert_eq!(a.m(), 1);
        let doc2 = a.to_document();
        let b = UnitaryTuple::try_from(&doc2).unwrap();
        assert_eq!(a, b);
        let bad: RepDocument = serde_json::from_str(r#"{"k":2,"angles":[3.0]}"#).unwrap();
        assert!(UnitaryTuple::try_from(&bad).is_err());
    }

    #[test]
    fn dimension_mismatch() {
        let p = presentation_matrix(&trefoil(), 1, Convention::Classical).unwrap();
        let alpha = UnitaryTuple::from_angles(&[1.0, 2.0]).unwrap();
        assert!(matches!(substitute(&p, &alpha), Err(Error::DimensionMismatch(_))));
    }
}
