use proptest::prelude::*;
use smonkit::exactla::{Fp, Matrix, Subspace};

fn field() -> impl Strategy<Value = Fp> {
    prop::sample::select(vec![2u64, 3, 5, 7]).prop_map(|p| Fp::new(p).unwrap())
}

fn matrix_in(fp: Fp, rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(0..fp.p(), rows * cols).prop_map(move |d| Matrix::from_data(fp, rows, cols, d))
}

fn matrix() -> impl Strategy<Value = Matrix> {
    (field(), 0..6usize, 0..6usize).prop_flat_map(|(fp, r, c)| matrix_in(fp, r, c))
}

fn rows_of(m: &Matrix) -> Vec<Vec<u32>> {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

/// Size of the row span by enumerating all combinations.
fn span_size(fp: Fp, rows: &[Vec<u32>], n: usize) -> usize {
    let p = fp.p() as usize;
    let mut seen = std::collections::HashSet::new();
    let total = p.pow(rows.len() as u32);
    for code in 0..total {
        let mut v = vec![0u32; n];
        let mut c = code;
        for r in rows {
            let s = (c % p) as u32;
            c /= p;
            for (x, y) in v.iter_mut().zip(r) {
                *x = fp.add(*x, fp.mul(s, *y));
            }
        }
        seen.insert(v);
    }
    seen.len()
}

fn log(p: usize, mut x: usize) -> usize {
    let mut k = 0;
    while x > 1 {
        x /= p;
        k += 1;
    }
    k
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn grassmann_identity((fp, n) in (field(), 0..6usize), seed in any::<u64>(), ku in 0..5usize, kw in 0..5usize) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut draw = |k: usize| -> Vec<Vec<u32>> {
            (0..k).map(|_| (0..n).map(|_| rng.gen_range(0..fp.p())).collect()).collect()
        };
        let u = Subspace::from_vectors(fp, n, &draw(ku));
        let w = Subspace::from_vectors(fp, n, &draw(kw));
        let sum = u.plus(&w).unwrap();
        let meet = u.intersect(&w).unwrap();
        prop_assert_eq!(sum.dim() + meet.dim(), u.dim() + w.dim());
        prop_assert!(meet.is_subspace_of(&u) && meet.is_subspace_of(&w));
        prop_assert!(u.is_subspace_of(&sum) && w.is_subspace_of(&sum));
    }

    #[test]
    fn rank_duality(m in matrix()) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
        prop_assert_eq!(m.rank() + m.kernel().dim(), m.cols());
    }

    #[test]
    fn rank_matches_span_enumeration(m in (prop::sample::select(vec![2u64, 3]), 0..5usize, 0..5usize)
        .prop_flat_map(|(p, r, c)| matrix_in(Fp::new(p).unwrap(), r, c)))
    {
        let size = span_size(m.field(), &rows_of(&m), m.cols());
        prop_assert_eq!(m.rank(), log(m.field().p() as usize, size));
    }

    #[test]
    fn subspace_canonicity(m in matrix(), seed in any::<u64>()) {
        use rand::{seq::SliceRandom, Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let fp = m.field();
        let rows = rows_of(&m);
        let mut other = rows.clone();
        other.shuffle(&mut rng);
        // add random combinations of the originals
        for _ in 0..rng.gen_range(0..3) {
            let mut v = vec![0u32; m.cols()];
            for r in &rows {
                let s = rng.gen_range(0..fp.p());
                for (x, y) in v.iter_mut().zip(r) {
                    *x = fp.add(*x, fp.mul(s, *y));
                }
            }
            other.push(v);
        }
        let a = Subspace::from_vectors(fp, m.cols(), &rows);
        let b = Subspace::from_vectors(fp, m.cols(), &other);
        prop_assert_eq!(a.basis(), b.basis());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn kron_rank_multiplicative((a, b) in field().prop_flat_map(|fp| {
        ((0..5usize, 0..5usize).prop_flat_map(move |(r, c)| matrix_in(fp, r, c)),
         (0..5usize, 0..5usize).prop_flat_map(move |(r, c)| matrix_in(fp, r, c)))
    })) {
        let k = a.kron(&b).unwrap();
        prop_assert_eq!(k.shape(), (a.rows() * b.rows(), a.cols() * b.cols()));
        prop_assert_eq!(k.rank(), a.rank() * b.rank());
    }
}
