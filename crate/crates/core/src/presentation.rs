//! Presentation matrices `T_i A_i − s·A^T_{n+1−i}` over the group ring and
//! their Alexander-type determinants.

use serde::Serialize;

use crate::error::Result;
use crate::intmat::IntMatrix;
use crate::laurent::{LaurentMatrix, LaurentPoly};
use crate::seifert::{BlockStructure, BoundaryLinkData, Convention};

/// Presentation matrix at one level.
///
/// Every entry has the form `a·t_j + b` where `j` is the component of the
/// entry's row; `var_coeff` holds the `a`'s and `constant` the `b`'s.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresentationLevel {
    pub level: usize,
    pub convention: Convention,
    pub blocks: BlockStructure,
    pub var_coeff: IntMatrix,
    pub constant: IntMatrix,
}

impl PresentationLevel {
    pub fn side(&self) -> usize {
        self.var_coeff.rows()
    }

    pub fn m(&self) -> usize {
        self.blocks.m()
    }

    /// Symbolic matrix in `t_1..t_m`.
    pub fn matrix(&self) -> LaurentMatrix {
        let m = self.m();
        let labels = self.blocks.labels();
        LaurentMatrix::from_fn(self.side(), self.side(), m, |r, c| {
            let lin = LaurentPoly::var(m, labels[r]).scaled(&self.var_coeff.get(r, c).into());
            &lin + &LaurentPoly::constant(m, self.constant.get(r, c))
        })
    }

    /// Integer matrix obtained at `t_j = 1` for all `j`.
    pub fn augmentation(&self) -> IntMatrix {
        IntMatrix::from_fn(self.side(), self.side(), |r, c| {
            self.var_coeff.get(r, c) + self.constant.get(r, c)
        })
    }
}

/// Builds `T_i A_i − A^T_{n+1−i}` (classical) or `T_i A_i − (−1)^i A^T_{n+1−i}` (paper).
pub fn presentation_matrix(
    l: &BoundaryLinkData,
    level: usize,
    convention: Convention,
) -> Result<PresentationLevel> {
    let a = l.level(level)?;
    let dual = l.level(l.n() + 1 - level)?;
    let sign: i64 = match convention {
        Convention::Classical => -1,
        Convention::Paper if level.is_multiple_of(2) => -1,
        Convention::Paper => 1,
    };
    Ok(PresentationLevel {
        level,
        convention,
        blocks: a.blocks.clone(),
        var_coeff: a.matrix.clone(),
        constant: dual.matrix.transpose().scaled(sign),
    })
}

/// Normalized determinant of the level-`i` presentation matrix.
pub fn alexander_polynomial(
    l: &BoundaryLinkData,
    level: usize,
    convention: Convention,
) -> Result<LaurentPoly> {
    let p = presentation_matrix(l, level, convention)?;
    Ok(p.matrix().det_bareiss()?.normalize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seifert::{block_sum, metabolic_enlargement};

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

    fn poly(vars: usize, terms: &[(&[i32], i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(vars, terms.iter().map(|(d, c)| (d.to_vec(), *c)))
    }

    #[test]
    fn trefoil_classical_matrix() {
        let p = presentation_matrix(&trefoil(), 1, Convention::Classical).unwrap();
        let m = p.matrix();
        let t = LaurentPoly::var(1, 0);
        let one = LaurentPoly::one(1);
        assert_eq!(m.get(0, 0), &(&one - &t));
        assert_eq!(m.get(0, 1), &t);
        assert_eq!(m.get(1, 0), &LaurentPoly::constant(1, -1));
        assert_eq!(m.get(1, 1), &(&one - &t));
    }

    #[test]
    fn paper_augmentation_is_a_plus_a_transpose_at_odd_level() {
        let p = presentation_matrix(&trefoil(), 1, Convention::Paper).unwrap();
        assert_eq!(p.augmentation().to_rows(), vec![vec![-2, 1], vec![1, -2]]);
    }

    #[test]
    fn alexander_examples() {
        let d = alexander_polynomial(&trefoil(), 1, Convention::Classical).unwrap();
        assert_eq!(d.to_string(), "t^2 - t + 1");
        let d = alexander_polynomial(&figure_eight(), 1, Convention::Classical).unwrap();
        assert_eq!(d.to_string(), "t^2 - 3*t + 1");
        let d = alexander_polynomial(&trefoil(), 1, Convention::Paper).unwrap();
        assert_eq!(d.to_string(), "t^2 + t + 1");
    }

    #[test]
    fn split_trefoils_factor() {
        let t = trefoil();
        let mut rows = vec![vec![0i64; 4]; 4];
        for (r, row) in [[-1, 1], [0, -1]].iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                rows[r][c] = *v;
                rows[r + 2][c + 2] = *v;
            }
        }
        let s = BoundaryLinkData::classical(None, vec![2, 2], IntMatrix::from_rows(rows).unwrap())
            .unwrap();
        let p = presentation_matrix(&s, 1, Convention::Classical).unwrap();
        assert_eq!(p.matrix().get(0, 1), &LaurentPoly::var(2, 0));
        assert_eq!(p.matrix().get(2, 3), &LaurentPoly::var(2, 1));
        let d = alexander_polynomial(&s, 1, Convention::Classical).unwrap();
        let f1 = poly(2, &[(&[2, 0], 1), (&[1, 0], -1), (&[0, 0], 1)]);
        let f2 = poly(2, &[(&[0, 2], 1), (&[0, 1], -1), (&[0, 0], 1)]);
        assert_eq!(d, (&f1 * &f2).normalize());

        let tt = block_sum(&t, &t).unwrap();
        let d1 = alexander_polynomial(&t, 1, Convention::Classical).unwrap();
        assert_eq!(alexander_polynomial(&tt, 1, Convention::Classical).unwrap(), (&d1 * &d1).normalize());
    }

    #[test]
    fn enlargement_keeps_trefoil_polynomial() {
        let t = trefoil();
        for seed in 0..10 {
            let big = metabolic_enlargement(&t, 0, seed).unwrap();
            for conv in [Convention::Classical, Convention::Paper] {
                assert_eq!(
                    alexander_polynomial(&big, 1, conv).unwrap(),
                    alexander_polynomial(&t, 1, conv).unwrap()
                );
            }
        }
    }

    #[test]
    fn missing_level_is_an_error() {
        assert!(presentation_matrix(&trefoil(), 2, Convention::Classical).is_err());
    }
}
