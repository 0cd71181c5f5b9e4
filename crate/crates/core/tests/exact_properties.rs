use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use sympencil::exact::{rank, solve_affine, ExactMatrix, GaussianRational, SparseLu, SymPair};

fn gr(re: i64, im: i64) -> GaussianRational {
    GaussianRational::complex(re, im)
}

/// Determinant by cofactor expansion along the first row.
fn det(m: &[Vec<GaussianRational>]) -> GaussianRational {
    let n = m.len();
    if n == 0 {
        return GaussianRational::from_int(1);
    }
    let mut acc = GaussianRational::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<GaussianRational>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][j] * &det(&minor);
        if j % 2 == 0 {
            acc += &term;
        } else {
            acc -= &term;
        }
    }
    acc
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// Largest order of a nonvanishing minor.
fn rank_by_minors(m: &ExactMatrix) -> usize {
    let top = m.rows().min(m.cols());
    (1..=top)
        .rev()
        .find(|&k| {
            subsets(m.rows(), k).iter().any(|rs| {
                subsets(m.cols(), k).iter().any(|cs| {
                    let sub: Vec<Vec<GaussianRational>> =
                        rs.iter().map(|&r| cs.iter().map(|&c| m[(r, c)].clone()).collect()).collect();
                    !det(&sub).is_zero()
                })
            })
        })
        .unwrap_or(0)
}

fn small_matrix() -> impl Strategy<Value = ExactMatrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        prop::collection::vec((-2i64..=2, prop_oneof![3 => Just(0i64), 1 => -2i64..=2]), r * c).prop_map(
            move |v| ExactMatrix::from_vec(r, c, v.into_iter().map(|(a, b)| gr(a, b)).collect()).unwrap(),
        )
    })
}

fn big_rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn part() -> impl Strategy<Value = (i64, i64)> {
    prop_oneof![
        (-20i64..=20, 1i64..=12),
        (any::<i64>(), 1i64..=i64::MAX),
        (prop_oneof![Just(i64::MIN), Just(i64::MAX), Just(i64::MIN + 1)], 1i64..=3),
    ]
}

proptest! {
    #[test]
    fn rank_matches_minor_expansion(m in small_matrix()) {
        prop_assert_eq!(rank(&m), rank_by_minors(&m));
    }

    #[test]
    fn rank_is_transpose_invariant(m in small_matrix()) {
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
    }

    #[test]
    fn sparse_and_fraction_free_solves_agree(m in small_matrix(), x in prop::collection::vec(-3i64..=3, 4), nudge in -1i64..=1) {
        let x: Vec<GaussianRational> = x[..m.cols()].iter().map(|&v| GaussianRational::ratio(v, 2)).collect();
        let mut b = m.checked_mul(&ExactMatrix::column(x)).unwrap().into_entries();
        b[0] += &GaussianRational::from_int(nudge);
        let dense = solve_affine(&m, &b).unwrap();
        let sparse = SparseLu::factor(&m).solve(&b).unwrap();
        prop_assert_eq!(dense.is_some(), sparse.is_some());
        for sol in [dense, sparse].into_iter().flatten() {
            prop_assert_eq!(m.checked_mul(&ExactMatrix::column(sol)).unwrap().into_entries(), b.clone());
        }
    }

    /// The scalar's inline fast path against plain big rationals.
    #[test]
    fn scalar_arithmetic_matches_big_rationals(a in part(), b in part(), c in part(), d in part()) {
        let x = GaussianRational::new(big_rat(a.0, a.1), big_rat(b.0, b.1));
        let y = GaussianRational::new(big_rat(c.0, c.1), big_rat(d.0, d.1));
        let (xr, xi, yr, yi) = (x.re(), x.im(), y.re(), y.im());
        let sum = &x + &y;
        prop_assert_eq!(sum.re(), &xr + &yr);
        prop_assert_eq!(sum.im(), &xi + &yi);
        let diff = &x - &y;
        prop_assert_eq!(diff.re(), &xr - &yr);
        prop_assert_eq!(diff.im(), &xi - &yi);
        let prod = &x * &y;
        prop_assert_eq!(prod.re(), &xr * &yr - &xi * &yi);
        prop_assert_eq!(prod.im(), &xr * &yi + &xi * &yr);
        if !y.is_zero() {
            prop_assert_eq!(&(&x / &y) * &y, x.clone());
        }
        prop_assert_eq!(x.to_string().parse::<GaussianRational>().unwrap(), x);
    }

    #[test]
    fn vectorization_is_linear(
        u in prop::collection::vec((-5i64..=5, -5i64..=5), 12),
        v in prop::collection::vec((-5i64..=5, -5i64..=5), 12),
        s in (-3i64..=3, -3i64..=3),
    ) {
        let to = |w: &[(i64, i64)]| SymPair::from_vector(3, &w.iter().map(|&(a, b)| gr(a, b)).collect::<Vec<_>>()).unwrap();
        let (p, q) = (to(&u), to(&v));
        let s = gr(s.0, s.1);
        let lhs = p.scale(&s).checked_add(&q).unwrap().vectorize();
        let rhs: Vec<GaussianRational> =
            p.vectorize().iter().zip(q.vectorize()).map(|(a, b)| &(&s * a) + &b).collect();
        prop_assert_eq!(lhs, rhs);
    }
}
