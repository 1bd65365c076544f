//! Block Seifert data for boundary links and the concordance-preserving
//! moves used throughout the crate.
//!
//! A boundary link with `m` components carries, for every level `1 ≤ i ≤ n`,
//! an integer Seifert matrix `A_i` split into `m × m` blocks by the components
//! of the Seifert surface. Only `n = 1` is exercised by the geometric moves
//! ([`metabolic_enlargement`]); the data model itself accepts any odd `n`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;

/// Partition of a Seifert basis into per-component blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockStructure {
    sizes: Vec<usize>,
}

impl BlockStructure {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::NoComponents);
        }
        Ok(BlockStructure { sizes })
    }

    pub fn m(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn offset(&self, block: usize) -> usize {
        self.sizes[..block].iter().sum()
    }

    pub fn range(&self, block: usize) -> std::ops::Range<usize> {
        let start = self.offset(block);
        start..start + self.sizes[block]
    }

    /// Component owning basis vector `index`.
    pub fn block_of(&self, index: usize) -> usize {
        let mut acc = 0;
        for (j, g) in self.sizes.iter().enumerate() {
            acc += g;
            if index < acc {
                return j;
            }
        }
        panic!("basis index {index} out of range for block sizes {:?}", self.sizes);
    }

    /// Component label of every basis vector, in order.
    pub fn labels(&self) -> Vec<usize> {
        self.sizes
            .iter()
            .enumerate()
            .flat_map(|(j, &g)| std::iter::repeat_n(j, g))
            .collect()
    }
}

/// Sign convention used to build presentation matrices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `T_i A_i − A_{n+1−i}^T`; the knot case gives `det(tA − A^T)`.
    #[default]
    Classical,
    /// `T_i A_i − (−1)^i A_{n+1−i}^T`, taken literally.
    Paper,
}

impl Convention {
    pub fn as_str(self) -> &'static str {
        match self {
            Convention::Classical => "classical",
            Convention::Paper => "paper",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(Convention::Classical),
            "paper" => Ok(Convention::Paper),
            other => Err(Error::InvalidParameter(format!("unknown convention `{other}`"))),
        }
    }
}

/// One Seifert matrix with its block partition.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Level {
    pub matrix: IntMatrix,
    pub blocks: BlockStructure,
}

/// Validated Seifert data of a boundary link: one block matrix per level.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoundaryLinkData {
    n: usize,
    levels: BTreeMap<usize, Level>,
    name: Option<String>,
}

/// Sign `ε` in the cross-block linking relation `A_i(x, y) = ε · A_{n+1−i}(y, x)`
/// for basis curves `x`, `y` lying on different surface components.
pub fn cross_block_sign(n: usize, level: usize) -> i64 {
    if ((level + 1) * (n + 2 - level)).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl BoundaryLinkData {
    /// Builds link data, enforcing the hard invariants.
    pub fn new(name: Option<String>, n: usize, levels: BTreeMap<usize, Level>) -> Result<Self> {
        if n == 0 || n.is_multiple_of(2) {
            return Err(Error::EvenDimension(n));
        }
        let mut m = None;
        for (&i, level) in &levels {
            if i == 0 || i > n {
                return Err(Error::UnexpectedLevel { level: i, n });
            }
            let a = &level.matrix;
            if !a.is_square() {
                return Err(Error::NonSquare {
                    level: i,
                    rows: a.rows(),
                    cols: a.cols(),
                });
            }
            if level.blocks.total() != a.rows() {
                return Err(Error::BlockMismatch {
                    level: i,
                    sum: level.blocks.total(),
                    side: a.rows(),
                });
            }
            match m {
                None => m = Some(level.blocks.m()),
                Some(m0) if m0 != level.blocks.m() => {
                    return Err(Error::ComponentMismatch(m0, level.blocks.m()))
                }
                Some(_) => {}
            }
        }
        for i in 1..=n {
            if !levels.contains_key(&i) {
                return Err(Error::MissingLevel(i));
            }
        }
        for i in 1..=n {
            let j = n + 1 - i;
            if levels[&i].blocks != levels[&j].blocks {
                return Err(Error::DualSizeMismatch(i, j));
            }
        }
        Ok(BoundaryLinkData { n, levels, name })
    }

    /// Classical (`n = 1`) link data from a single block Seifert matrix.
    pub fn classical(name: Option<&str>, sizes: Vec<usize>, matrix: IntMatrix) -> Result<Self> {
        let blocks = BlockStructure::new(sizes)?;
        let mut levels = BTreeMap::new();
        levels.insert(1, Level { matrix, blocks });
        Self::new(name.map(str::to_string), 1, levels)
    }

    /// Data with every block of size zero.
    pub fn empty(m: usize, n: usize) -> Result<Self> {
        let blocks = BlockStructure::new(vec![0; m])?;
        let levels = (1..=n)
            .map(|i| {
                (
                    i,
                    Level {
                        matrix: IntMatrix::zeros(0, 0),
                        blocks: blocks.clone(),
                    },
                )
            })
            .collect();
        Self::new(Some("empty".into()), n, levels)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.n.div_ceil(2)
    }

    pub fn m(&self) -> usize {
        self.levels[&1].blocks.m()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn level(&self, i: usize) -> Result<&Level> {
        self.levels.get(&i).ok_or(Error::MissingLevel(i))
    }

    pub fn levels(&self) -> impl Iterator<Item = (usize, &Level)> {
        self.levels.iter().map(|(i, l)| (*i, l))
    }

    /// Levels entering the discriminant equations: `q`, and `q − 1` when it exists.
    pub fn discriminant_levels(&self) -> Vec<usize> {
        let q = self.q();
        if q >= 2 {
            vec![q - 1, q]
        } else {
            vec![q]
        }
    }

    /// Soft checks: violations are reported, not rejected.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let q = self.q();
        let level = &self.levels[&q];
        let a = &level.matrix;
        // intersection form A_q + (−1)^q A_q^T
        let sign = if q.is_multiple_of(2) { 1 } else { -1 };
        let form = IntMatrix::from_fn(a.rows(), a.cols(), |r, c| a.get(r, c) + sign * a.get(c, r));
        match form.det() {
            Ok(d) if d == 1.into() || d == (-1).into() => {}
            Ok(d) => out.push(format!(
                "|det(A_{q} + (-1)^{q} A_{q}^T)| = {} is not 1; data is not a genuine Seifert matrix",
                d.magnitude()
            )),
            Err(e) => out.push(e.to_string()),
        }
        for (i, lvl) in &self.levels {
            let dual = &self.levels[&(self.n + 1 - i)].matrix;
            let eps = cross_block_sign(self.n, *i);
            let labels = lvl.blocks.labels();
            let mut bad = None;
            'outer: for r in 0..labels.len() {
                for c in 0..labels.len() {
                    if labels[r] != labels[c] && lvl.matrix.get(r, c) != eps * dual.get(c, r) {
                        bad = Some((r, c));
                        break 'outer;
                    }
                }
            }
            if let Some((r, c)) = bad {
                out.push(format!(
                    "level {i}: cross-component entry ({r}, {c}) breaks the linking symmetry between disjoint surface components"
                ));
            }
        }
        out
    }
}

/// Joins two links level by level, block-diagonally inside every `(i, j)` block.
pub fn block_sum(l1: &BoundaryLinkData, l2: &BoundaryLinkData) -> Result<BoundaryLinkData> {
    if l1.m() != l2.m() {
        return Err(Error::ComponentMismatch(l1.m(), l2.m()));
    }
    if l1.n != l2.n {
        return Err(Error::LinkDimensionMismatch(l1.n, l2.n));
    }
    let mut levels = BTreeMap::new();
    for (&i, a) in &l1.levels {
        let b = &l2.levels[&i];
        let sizes: Vec<usize> = a
            .blocks
            .sizes()
            .iter()
            .zip(b.blocks.sizes())
            .map(|(x, y)| x + y)
            .collect();
        let blocks = BlockStructure::new(sizes)?;
        // new position of each old basis vector
        let place = |src: &BlockStructure, r: usize, first: bool| {
            let j = src.block_of(r);
            let within = r - src.offset(j);
            let shift = if first { 0 } else { a.blocks.sizes()[j] };
            blocks.offset(j) + shift + within
        };
        let mut matrix = IntMatrix::zeros(blocks.total(), blocks.total());
        for r in 0..a.matrix.rows() {
            for c in 0..a.matrix.cols() {
                matrix.set(place(&a.blocks, r, true), place(&a.blocks, c, true), a.matrix.get(r, c));
            }
        }
        for r in 0..b.matrix.rows() {
            for c in 0..b.matrix.cols() {
                matrix.set(place(&b.blocks, r, false), place(&b.blocks, c, false), b.matrix.get(r, c));
            }
        }
        levels.insert(i, Level { matrix, blocks });
    }
    let name = match (l1.name(), l2.name()) {
        (Some(a), Some(b)) => Some(format!("{a} + {b}")),
        _ => None,
    };
    BoundaryLinkData::new(name, l1.n, levels)
}

/// Replaces every `A_i` by `−A_i^T`.
pub fn mirror(l: &BoundaryLinkData) -> BoundaryLinkData {
    let levels = l
        .levels
        .iter()
        .map(|(&i, lvl)| {
            (
                i,
                Level {
                    matrix: lvl.matrix.transpose().neg(),
                    blocks: lvl.blocks.clone(),
                },
            )
        })
        .collect();
    BoundaryLinkData {
        n: l.n,
        levels,
        name: l.name().map(|s| format!("mirror({s})")),
    }
}

/// Checks that `q` is unimodular and block-diagonal for `blocks`.
pub fn check_basis_change(q: &IntMatrix, blocks: &BlockStructure) -> Result<()> {
    if !q.is_square() || q.rows() != blocks.total() {
        return Err(Error::DimensionMismatch(format!(
            "basis change is {}x{}, blocks need side {}",
            q.rows(),
            q.cols(),
            blocks.total()
        )));
    }
    let labels = blocks.labels();
    for r in 0..q.rows() {
        for c in 0..q.cols() {
            if labels[r] != labels[c] && q.get(r, c) != 0 {
                return Err(Error::MixesBlocks { row: r, col: c });
            }
        }
    }
    let d = q.det()?;
    if d != 1.into() && d != (-1).into() {
        return Err(Error::NotUnimodular(d.to_string()));
    }
    Ok(())
}

/// Basis change `A_i ↦ Q A_i Q^T` at every level.
pub fn congruence_transform(l: &BoundaryLinkData, q: &IntMatrix) -> Result<BoundaryLinkData> {
    let mut levels = BTreeMap::new();
    for (&i, lvl) in &l.levels {
        check_basis_change(q, &lvl.blocks)?;
        let matrix = q.mul(&lvl.matrix)?.mul(&q.transpose())?;
        levels.insert(
            i,
            Level {
                matrix,
                blocks: lvl.blocks.clone(),
            },
        );
    }
    BoundaryLinkData::new(l.name.clone(), l.n, levels)
}

/// Appends a hyperbolic pair `(e, f)` to the block of `component`.
///
/// The new matrix is
///
/// ```text
///     [ A   ξ   0 ]
///     [ η   0   1 ]
///     [ 0   0   0 ]
/// ```
///
/// where `ξ` is a seeded random column and `η` copies `ξ` on the entries
/// belonging to other components (keeping the cross-block linking symmetry).
/// `f` spans an isotropic line paired only with `e`, so the Alexander
/// polynomial changes by a unit and every twisted signature is unchanged.
pub fn metabolic_enlargement(
    l: &BoundaryLinkData,
    component: usize,
    seed: u64,
) -> Result<BoundaryLinkData> {
    if l.n != 1 {
        return Err(Error::Unsupported(format!(
            "metabolic enlargement is implemented for n = 1 only (got n = {})",
            l.n
        )));
    }
    let m = l.m();
    if component >= m {
        return Err(Error::ComponentIndex {
            index: component,
            m,
        });
    }
    let old = &l.levels[&1];
    let mut sizes = old.blocks.sizes().to_vec();
    sizes[component] += 2;
    let blocks = BlockStructure::new(sizes)?;
    let g_old = old.blocks.total();
    let insert_at = old.blocks.offset(component) + old.blocks.sizes()[component];
    let relabel = |r: usize| if r < insert_at { r } else { r + 2 };
    let (e, f) = (insert_at, insert_at + 1);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut matrix = IntMatrix::zeros(g_old + 2, g_old + 2);
    for r in 0..g_old {
        for c in 0..g_old {
            matrix.set(relabel(r), relabel(c), old.matrix.get(r, c));
        }
    }
    for r in 0..g_old {
        let xi: i64 = rng.gen_range(-3..=3);
        matrix.set(relabel(r), e, xi);
        if old.blocks.block_of(r) != component {
            matrix.set(e, relabel(r), xi);
        }
    }
    matrix.set(e, f, 1);
    let mut levels = BTreeMap::new();
    levels.insert(1, Level { matrix, blocks });
    BoundaryLinkData::new(l.name.clone(), 1, levels)
}

/// Seeded random Seifert data with entries in `[−3, 3]` and block sizes in
/// `0..=max_block`. Cross-component blocks satisfy the linking symmetry.
pub fn random_link(m: usize, n: usize, max_block: usize, seed: u64) -> Result<BoundaryLinkData> {
    if m == 0 {
        return Err(Error::NoComponents);
    }
    if max_block == 0 {
        return Err(Error::InvalidParameter("max_block must be at least 1".into()));
    }
    if n == 0 || n.is_multiple_of(2) {
        return Err(Error::EvenDimension(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut levels = BTreeMap::new();
    for i in 1..=n.div_ceil(2) {
        let j = n + 1 - i;
        let sizes: Vec<usize> = (0..m).map(|_| rng.gen_range(0..=max_block)).collect();
        let blocks = BlockStructure::new(sizes)?;
        let labels = blocks.labels();
        let g = blocks.total();
        let eps = cross_block_sign(n, i);
        let mut a = IntMatrix::from_fn(g, g, |_, _| rng.gen_range(-3..=3));
        if i == j {
            for r in 0..g {
                for c in r + 1..g {
                    if labels[r] != labels[c] {
                        a.set(c, r, eps * a.get(r, c));
                    }
                }
            }
            levels.insert(i, Level { matrix: a, blocks });
        } else {
            let mut b = IntMatrix::from_fn(g, g, |_, _| rng.gen_range(-3..=3));
            for r in 0..g {
                for c in 0..g {
                    if labels[r] != labels[c] {
                        b.set(c, r, eps * a.get(r, c));
                    }
                }
            }
            levels.insert(
                i,
                Level {
                    matrix: a,
                    blocks: blocks.clone(),
                },
            );
            levels.insert(j, Level { matrix: b, blocks });
        }
    }
    BoundaryLinkData::new(Some(format!("random(m={m},n={n},seed={seed})")), n, levels)
}

/// Random block-diagonal unimodular matrix together with its exact inverse.
pub fn random_basis_change<R: Rng>(blocks: &BlockStructure, rng: &mut R) -> (IntMatrix, IntMatrix) {
    let g = blocks.total();
    let mut q = IntMatrix::identity(g);
    let mut q_inv = IntMatrix::identity(g);
    for j in 0..blocks.m() {
        let range = blocks.range(j);
        let len = range.len();
        if len == 0 {
            continue;
        }
        for _ in 0..2 * len + 1 {
            let a = range.start + rng.gen_range(0..len);
            let b = range.start + rng.gen_range(0..len);
            match rng.gen_range(0..3) {
                // row_a += c * row_b on Q; col_b -= c * col_a on Q^{-1}
                0 if a != b => {
                    let c: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
                    for k in 0..g {
                        q.set(a, k, q.get(a, k) + c * q.get(b, k));
                        q_inv.set(k, b, q_inv.get(k, b) - c * q_inv.get(k, a));
                    }
                }
                1 if a != b => {
                    for k in 0..g {
                        let (x, y) = (q.get(a, k), q.get(b, k));
                        q.set(a, k, y);
                        q.set(b, k, x);
                        let (x, y) = (q_inv.get(k, a), q_inv.get(k, b));
                        q_inv.set(k, a, y);
                        q_inv.set(k, b, x);
                    }
                }
                _ => {
                    for k in 0..g {
                        q.set(a, k, -q.get(a, k));
                        q_inv.set(k, a, -q_inv.get(k, a));
                    }
                }
            }
        }
    }
    (q, q_inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil() -> BoundaryLinkData {
        let a = IntMatrix::from_rows(vec![vec![-1, 1], vec![0, -1]]).unwrap();
        BoundaryLinkData::classical(Some("trefoil"), vec![2], a).unwrap()
    }

    fn split_trefoils() -> BoundaryLinkData {
        let a = IntMatrix::from_rows(vec![
            vec![-1, 1, 0, 0],
            vec![0, -1, 0, 0],
            vec![0, 0, -1, 1],
            vec![0, 0, 0, -1],
        ])
        .unwrap();
        BoundaryLinkData::classical(Some("split"), vec![2, 2], a).unwrap()
    }

    #[test]
    fn trefoil_is_valid_and_unimodular() {
        let t = trefoil();
        assert_eq!(t.m(), 1);
        assert_eq!(t.q(), 1);
        assert!(t.warnings().is_empty());
        assert!(split_trefoils().warnings().is_empty());
    }

    #[test]
    fn shape_errors() {
        let a = IntMatrix::from_rows(vec![vec![1, 2, 3], vec![4, 5, 6]]).unwrap();
        assert!(matches!(
            BoundaryLinkData::classical(None, vec![2], a),
            Err(Error::NonSquare { .. })
        ));
        let a = IntMatrix::identity(3);
        assert!(matches!(
            BoundaryLinkData::classical(None, vec![2], a),
            Err(Error::BlockMismatch { .. })
        ));
        assert!(matches!(BoundaryLinkData::empty(1, 2), Err(Error::EvenDimension(2))));
    }

    #[test]
    fn non_unimodular_is_a_warning() {
        let a = IntMatrix::from_rows(vec![vec![2]]).unwrap();
        let l = BoundaryLinkData::classical(None, vec![1], a).unwrap();
        assert_eq!(l.warnings().len(), 1);
    }

    #[test]
    fn block_sum_examples() {
        let t = trefoil();
        let e = BoundaryLinkData::empty(1, 1).unwrap();
        assert_eq!(block_sum(&t, &e).unwrap().level(1).unwrap(), t.level(1).unwrap());
        assert_eq!(block_sum(&e, &t).unwrap().level(1).unwrap(), t.level(1).unwrap());

        let tt = block_sum(&t, &t).unwrap();
        let lvl = tt.level(1).unwrap();
        assert_eq!(lvl.blocks.sizes(), &[4]);
        assert_eq!(
            lvl.matrix.to_rows(),
            vec![
                vec![-1, 1, 0, 0],
                vec![0, -1, 0, 0],
                vec![0, 0, -1, 1],
                vec![0, 0, 0, -1]
            ]
        );

        let s = split_trefoils();
        let ss = block_sum(&s, &s).unwrap();
        assert_eq!(ss.level(1).unwrap().blocks.sizes(), &[4, 4]);
        // block (0,0) of the sum is diag(A_T, A_T)
        let m = &ss.level(1).unwrap().matrix;
        assert_eq!(m.get(0, 1), 1);
        assert_eq!(m.get(2, 3), 1);
        assert_eq!(m.get(4, 5), 1);
        assert_eq!(m.get(1, 2), 0);
    }

    #[test]
    fn block_sum_rejects_mismatch() {
        let t = trefoil();
        assert!(matches!(
            block_sum(&t, &split_trefoils()),
            Err(Error::ComponentMismatch(1, 2))
        ));
        let e3 = BoundaryLinkData::empty(1, 3).unwrap();
        assert!(matches!(block_sum(&t, &e3), Err(Error::LinkDimensionMismatch(1, 3))));
    }

    #[test]
    fn mirror_examples() {
        let t = trefoil();
        let mt = mirror(&t);
        assert_eq!(mt.level(1).unwrap().matrix.to_rows(), vec![vec![1, 0], vec![-1, 1]]);
        assert_eq!(mirror(&mt).level(1).unwrap(), t.level(1).unwrap());
    }

    #[test]
    fn congruence_examples() {
        let t = trefoil();
        let id = IntMatrix::identity(2);
        assert_eq!(congruence_transform(&t, &id).unwrap().level(1).unwrap(), t.level(1).unwrap());

        let q = IntMatrix::from_rows(vec![vec![1, 1], vec![0, 1]]).unwrap();
        let t2 = congruence_transform(&t, &q).unwrap();
        // QA = -I, so QAQ^T = -Q^T
        assert_eq!(t2.level(1).unwrap().matrix.to_rows(), vec![vec![-1, 0], vec![-1, -1]]);

        let q2 = IntMatrix::from_rows(vec![vec![2, 0], vec![0, 1]]).unwrap();
        assert!(matches!(congruence_transform(&t, &q2), Err(Error::NotUnimodular(_))));

        let mix = IntMatrix::from_rows(vec![
            vec![1, 0, 1, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
        ])
        .unwrap();
        assert!(matches!(
            congruence_transform(&split_trefoils(), &mix),
            Err(Error::MixesBlocks { row: 0, col: 2 })
        ));
    }

    #[test]
    fn metabolic_of_empty_is_minimal_form() {
        let e = BoundaryLinkData::empty(1, 1).unwrap();
        let h = metabolic_enlargement(&e, 0, 99).unwrap();
        assert_eq!(h.level(1).unwrap().blocks.sizes(), &[2]);
        assert_eq!(h.level(1).unwrap().matrix.to_rows(), vec![vec![0, 1], vec![0, 0]]);
        assert!(matches!(
            metabolic_enlargement(&e, 1, 0),
            Err(Error::ComponentIndex { index: 1, m: 1 })
        ));
    }

    #[test]
    fn metabolic_keeps_linking_symmetry() {
        for seed in 0..20 {
            let l = random_link(3, 1, 2, seed).unwrap();
            let l = metabolic_enlargement(&l, (seed % 3) as usize, seed).unwrap();
            let cross: Vec<_> = l.warnings().into_iter().filter(|w| w.contains("cross")).collect();
            assert!(cross.is_empty(), "{cross:?}");
        }
    }

    #[test]
    fn random_link_is_deterministic() {
        assert_eq!(random_link(2, 1, 3, 42).unwrap(), random_link(2, 1, 3, 42).unwrap());
        for seed in 0..1000 {
            let l = random_link(1 + (seed % 3) as usize, 1, 3, seed).unwrap();
            for (_, lvl) in l.levels() {
                assert_eq!(lvl.blocks.total(), lvl.matrix.rows());
            }
        }
        let l = random_link(2, 3, 2, 5).unwrap();
        assert_eq!(l.levels().count(), 3);
        assert!(l.warnings().iter().all(|w| !w.contains("cross")));
    }

    #[test]
    fn basis_change_inverse_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let blocks = BlockStructure::new(vec![3, 0, 2]).unwrap();
            let (q, qi) = random_basis_change(&blocks, &mut rng);
            assert_eq!(q.mul(&qi).unwrap(), IntMatrix::identity(5));
            check_basis_change(&q, &blocks).unwrap();
        }
    }
}
