//! Small complex linear-algebra helpers shared by the numeric modules.

use nalgebra::{Complex, DMatrix};
use rand::Rng;
use rand_distr::StandardNormal;

fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// Determinant by partially pivoted LU and its Hadamard-normalized magnitude
/// `|det| / Π‖row‖₂` (zero when any row vanishes; one for the empty matrix).
pub fn det_and_margin(m: &CMatrix) -> (C64, f64) {
    if m.nrows() == 0 {
        return (c(1.0, 0.0), 1.0);
    }
    let det = m.clone().lu().determinant();
    let mut log_rows = 0.0;
    for r in 0..m.nrows() {
        let norm = m.row(r).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return (det, 0.0);
        }
        log_rows += norm.ln();
    }
    let abs = det.norm();
    let margin = if abs == 0.0 {
        0.0
    } else {
        (abs.ln() - log_rows).exp().min(1.0)
    };
    (det, margin)
}

/// `max |(U†U − I)_{ij}|`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let k = u.nrows();
    let g = u.adjoint() * u - CMatrix::identity(k, k);
    g.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Nearest unitary matrix (polar factor `W V†` of the SVD `U = W Σ V†`).
pub fn polar_unitary(u: &CMatrix) -> Option<CMatrix> {
    let svd = u.clone().svd(true, true);
    Some(svd.u? * svd.v_t?)
}

/// Haar-random unitary: Gram-Schmidt on a complex Gaussian matrix. The
/// implied `R` factor has a positive diagonal, which makes `Q` Haar distributed.
pub fn haar_unitary<R: Rng>(k: usize, rng: &mut R) -> CMatrix {
    let z = CMatrix::from_fn(k, k, |_, _| c(standard_normal(rng), standard_normal(rng)));
    let mut q = z;
    for j in 0..k {
        for i in 0..j {
            let proj = q.column(i).dotc(&q.column(j));
            let qi = q.column(i).clone_owned();
            let mut col = q.column_mut(j);
            col -= qi * proj;
        }
        let norm = q.column(j).norm();
        let mut col = q.column_mut(j);
        col /= c(norm, 0.0);
    }
    q
}

/// Cayley transform `(I + iεX/2)(I − iεX/2)^{-1}` of a Hermitian `X`; unitary
/// and within `O(ε)` of the identity.
pub fn cayley_step(x: &CMatrix, eps: f64) -> CMatrix {
    let k = x.nrows();
    let half = x * c(0.0, eps / 2.0);
    let id = CMatrix::identity(k, k);
    let inv = (&id - &half)
        .try_inverse()
        .expect("I − iεX/2 is invertible for Hermitian X");
    (&id + &half) * inv
}

/// Random Hermitian matrix with unit Frobenius norm.
pub fn random_hermitian<R: Rng>(k: usize, rng: &mut R) -> CMatrix {
    let z = CMatrix::from_fn(k, k, |_, _| c(standard_normal(rng), standard_normal(rng)));
    let h = (&z + z.adjoint()) * c(0.5, 0.0);
    let norm = h.norm();
    h / c(norm, 0.0)
}

/// JSON form `{"re": .., "im": ..}` of a complex number.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ComplexDoc {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for ComplexDoc {
    fn from(z: C64) -> Self {
        ComplexDoc { re: z.re, im: z.im }
    }
}

impl From<ComplexDoc> for C64 {
    fn from(z: ComplexDoc) -> Self {
        c(z.re, z.im)
    }
}

/// `#[serde(with = "complex_serde")]` adapter for [`C64`] fields.
pub mod complex_serde {
    use super::{ComplexDoc, C64};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
        ComplexDoc::from(*z).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        ComplexDoc::deserialize(d).map(C64::from)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn margin_is_scale_free() {
        let m = CMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(-1.0, 0.0), c(-1.0, 0.0), c(2.0, 0.0)]);
        let (d, mg) = det_and_margin(&m);
        assert!((d - c(3.0, 0.0)).norm() < 1e-12);
        assert!((mg - 0.6).abs() < 1e-12);
        let mut scaled = m.clone();
        scaled.row_mut(0).scale_mut(1e6);
        let (_, mg2) = det_and_margin(&scaled);
        assert!((mg - mg2).abs() < 1e-12);
    }

    #[test]
    fn zero_row_has_zero_margin() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]);
        assert_eq!(det_and_margin(&m).1, 0.0);
    }

    #[test]
    fn haar_and_cayley_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for k in 1..5 {
            let u = haar_unitary(k, &mut rng);
            assert!(unitarity_defect(&u) < 1e-12);
            let x = random_hermitian(k, &mut rng);
            let v = cayley_step(&x, 1e-4);
            assert!(unitarity_defect(&v) < 1e-12);
            assert!((v - CMatrix::identity(k, k)).norm() < 2e-4);
        }
    }

    #[test]
    fn polar_projection_repairs_small_defects() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u = haar_unitary(3, &mut rng);
        let noisy = &u + CMatrix::from_element(3, 3, c(1e-8, -1e-8));
        assert!(unitarity_defect(&noisy) > 1e-10);
        let p = polar_unitary(&noisy).unwrap();
        assert!(unitarity_defect(&p) < 1e-13);
        assert!((p - u).norm() < 1e-7);
    }
}
