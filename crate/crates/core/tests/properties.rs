use blinksig::acceptance::cofactor_det;
use blinksig::document::{parse_link, LinkDocument};
use blinksig::lab::trial_rng;
use blinksig::numeric::{c, CMatrix};
use blinksig::presentation::{alexander_polynomial, presentation_matrix};
use blinksig::seifert::{
    block_sum, congruence_transform, mirror, random_basis_change, random_link, BoundaryLinkData,
    Convention,
};
use blinksig::substitution::{substitute, UnitaryTuple};
use blinksig::twisted::{inertia, rho_hat, twisted_form, HermitianMatrix, INERTIA_TOL};
use blinksig::{LaurentMatrix, LaurentPoly};
use proptest::prelude::*;

fn poly(vars: usize) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((prop::collection::vec(-2i32..=2, vars), -3i64..=3), 0..4)
        .prop_map(move |terms| LaurentPoly::from_terms(vars, terms))
}

fn sized(vars: usize, n: usize) -> impl Strategy<Value = LaurentMatrix> {
    prop::collection::vec(poly(vars), n * n)
        .prop_map(move |v| LaurentMatrix::from_fn(n, n, vars, |r, c| v[r * n + c].clone()))
}

fn square(vars: usize, max: usize) -> impl Strategy<Value = LaurentMatrix> {
    (0..=max).prop_flat_map(move |n| sized(vars, n))
}

fn matmul(a: &LaurentMatrix, b: &LaurentMatrix) -> LaurentMatrix {
    let n = a.rows();
    LaurentMatrix::from_fn(n, n, a.vars(), |r, c| {
        (0..n).fold(LaurentPoly::zero(a.vars()), |acc, j| &acc + &(a.get(r, j) * b.get(j, c)))
    })
}

fn link(max_m: usize) -> impl Strategy<Value = BoundaryLinkData> {
    (1..=max_m, any::<u64>()).prop_map(|(m, seed)| random_link(m, 1, 3, seed).unwrap())
}

/// Inertia by symmetric Gaussian elimination with diagonal pivoting; `None`
/// when no usable pivot remains.
fn ldl_signature(h: &CMatrix) -> Option<i64> {
    let mut a = h.clone();
    let n = a.nrows();
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    let mut sig = 0;
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        let (pos, &p) = active
            .iter()
            .enumerate()
            .max_by(|x, y| a[(*x.1, *x.1)].re.abs().total_cmp(&a[(*y.1, *y.1)].re.abs()))?;
        let d = a[(p, p)].re;
        if d.abs() < 1e-6 * scale {
            return None;
        }
        sig += if d > 0.0 { 1 } else { -1 };
        active.remove(pos);
        for &i in &active {
            let f = a[(i, p)] / c(d, 0.0);
            for &j in &active {
                let v = a[(p, j)];
                a[(i, j)] -= f * v;
            }
        }
    }
    Some(sig)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn det_is_multiplicative((a, b) in (1usize..=2, 0usize..=3).prop_flat_map(|(v, n)| (sized(v, n), sized(v, n)))) {
        let lhs = matmul(&a, &b).det_bareiss().unwrap();
        let rhs = &a.det_bareiss().unwrap() * &b.det_bareiss().unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn det_alternates_under_row_swaps(m in square(2, 4)) {
        prop_assume!(m.rows() >= 2);
        let n = m.rows();
        let swapped = LaurentMatrix::from_fn(n, n, 2, |r, c| {
            let r = match r { 0 => 1, 1 => 0, r => r };
            m.get(r, c).clone()
        });
        prop_assert_eq!(swapped.det_bareiss().unwrap(), -m.det_bareiss().unwrap());
        prop_assert_eq!(m.det_bareiss().unwrap(), cofactor_det(&m));
    }

    #[test]
    fn normalize_is_canonical(p in poly(2), shift in prop::collection::vec(-3i32..=3, 2), neg in any::<bool>()) {
        let n = p.normalize();
        prop_assert_eq!(&n.normalize(), &n);
        let mut q = p.shifted(&shift);
        if neg { q = -q; }
        prop_assert_eq!(q.normalize(), n);
    }

    #[test]
    fn poly_json_round_trip(p in poly(3)) {
        let text = serde_json::to_string(&p).unwrap();
        prop_assert_eq!(serde_json::from_str::<LaurentPoly>(&text).unwrap(), p);
    }

    #[test]
    fn congruence_is_reversible(l in link(3), seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 0);
        let (q, qi) = random_basis_change(&l.level(1).unwrap().blocks, &mut rng);
        let there = congruence_transform(&l, &q).unwrap();
        prop_assert_eq!(congruence_transform(&there, &qi).unwrap(), l.clone());
        for conv in [Convention::Classical, Convention::Paper] {
            prop_assert_eq!(alexander_polynomial(&there, 1, conv).unwrap(), alexander_polynomial(&l, 1, conv).unwrap());
        }
    }

    #[test]
    fn mirror_is_an_involution(l in link(3)) {
        let back = mirror(&mirror(&l));
        prop_assert!(back.levels().eq(l.levels()));
    }

    #[test]
    fn empty_data_is_a_block_sum_identity(l in link(3)) {
        let e = BoundaryLinkData::empty(l.m(), 1).unwrap();
        let right = block_sum(&l, &e).unwrap();
        let left = block_sum(&e, &l).unwrap();
        prop_assert_eq!(right.level(1).unwrap(), l.level(1).unwrap());
        prop_assert_eq!(left.level(1).unwrap(), l.level(1).unwrap());
    }

    #[test]
    fn generated_links_validate(m in 1usize..=3, n in prop::sample::select(vec![1usize, 3, 5]), seed in any::<u64>()) {
        let l = random_link(m, n, 3, seed).unwrap();
        prop_assert!(l.warnings().iter().all(|w| !w.contains("cross")));
        let text = serde_json::to_string(&LinkDocument::from(&l)).unwrap();
        prop_assert_eq!(parse_link(&text).unwrap().0, l);
    }

    #[test]
    fn inertia_invariants(l in link(3), k in 1usize..=3, seed in any::<u64>()) {
        let a = UnitaryTuple::haar(l.m(), k, &mut trial_rng(seed, 1));
        let h = twisted_form(&l, &a).unwrap();
        prop_assert_eq!(h.matrix().adjoint(), h.matrix().clone());
        let i = inertia(&h, INERTIA_TOL).unwrap();
        let dim = h.dim();
        prop_assert!(i.signature.unsigned_abs() as usize + i.nullity <= dim);
        prop_assert_eq!((dim - i.nullity) % 2, (i.signature.rem_euclid(2)) as usize);
        if i.is_regular() {
            if let Some(sig) = ldl_signature(h.matrix()) {
                prop_assert_eq!(sig, i.signature);
            }
        }
    }

    #[test]
    fn conjugation_symmetry(l in link(3), k in 1usize..=3, seed in any::<u64>()) {
        let a = UnitaryTuple::haar(l.m(), k, &mut trial_rng(seed, 2));
        let (i, j) = (rho_hat(&l, &a, INERTIA_TOL).unwrap(), rho_hat(&l, &a.conjugate(), INERTIA_TOL).unwrap());
        if i.is_regular() && j.is_regular() {
            prop_assert_eq!(i.signature, j.signature);
        }
    }

    #[test]
    fn mirror_pairs_with_inverse_representation(l in link(3), k in 1usize..=3, seed in any::<u64>()) {
        let a = UnitaryTuple::haar(l.m(), k, &mut trial_rng(seed, 3));
        let inv = UnitaryTuple::new(k, a.unitaries().iter().map(|u| u.adjoint()).collect()).unwrap();
        let i = rho_hat(&mirror(&l), &a, INERTIA_TOL).unwrap();
        let j = rho_hat(&l, &inv, INERTIA_TOL).unwrap();
        if i.is_regular() && j.is_regular() {
            prop_assert_eq!(i.signature, -j.signature);
        }
        if k == 1 || l.m() == 1 {
            let o = rho_hat(&l, &a, INERTIA_TOL).unwrap();
            if i.is_regular() && o.is_regular() {
                prop_assert_eq!(i.signature, -o.signature);
            }
        }
    }

    #[test]
    fn sum_with_mirror_cancels_at_k1(l in link(3), seed in any::<u64>()) {
        let a = UnitaryTuple::haar(l.m(), 1, &mut trial_rng(seed, 4));
        let i = rho_hat(&block_sum(&l, &mirror(&l)).unwrap(), &a, INERTIA_TOL).unwrap();
        if i.is_regular() {
            prop_assert_eq!(i.signature, 0);
        }
    }

    #[test]
    fn trivial_rep_gives_augmentation(l in link(3), k in 1usize..=3) {
        for conv in [Convention::Classical, Convention::Paper] {
            let p = presentation_matrix(&l, 1, conv).unwrap();
            let aug = p.augmentation();
            let s = substitute(&p, &UnitaryTuple::trivial(l.m(), k).unwrap()).unwrap();
            let g = aug.rows();
            for r in 0..g * k {
                for col in 0..g * k {
                    let want = if r % k == col % k { aug.get(r / k, col / k) as f64 } else { 0.0 };
                    prop_assert_eq!(s[(r, col)], c(want, 0.0));
                }
            }
        }
    }

    #[test]
    fn hermitian_construction_symmetrizes(v in prop::collection::vec(-5.0f64..5.0, 18)) {
        let m = CMatrix::from_fn(3, 3, |r, s| c(v[2 * (3 * r + s)], v[2 * (3 * r + s) + 1]));
        let h = HermitianMatrix::new(m).unwrap();
        prop_assert_eq!(h.matrix().adjoint(), h.matrix().clone());
    }
}
