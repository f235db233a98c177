//! Generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use proptest::test_runner::TestCaseError;
use twistcalc_core::layers::{self, LayerDecomposition, ToricLayer};
use twistcalc_core::linalg;
use twistcalc_core::mcg::{self, Sl2, Slope, TwistFactor, TwistWord};
use twistcalc_core::seifert;
use twistcalc_core::{DeltaParams, IntMatrix, SeifertData};

pub fn to_i128_rows(m: &IntMatrix) -> Vec<Vec<i128>> {
    m.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|x| i128::try_from(x).expect("small entries")).collect())
        .collect()
}

/// Laplace expansion along the first row.
pub fn cofactor_det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    match n {
        0 => 1,
        1 => m[0][0],
        _ => (0..n)
            .filter(|&j| m[0][j] != 0)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * cofactor_det(&minor)
            })
            .sum(),
    }
}

/// Determinant by Gaussian elimination over `Ratio<i128>`.
pub fn rational_det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    let mut a: Vec<Vec<Ratio<i128>>> = m.iter().map(|r| r.iter().map(|&x| Ratio::from_integer(x)).collect()).collect();
    let mut det = Ratio::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return 0;
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= a[k][k];
        let pivot = a[k].clone();
        for row in a.iter_mut().skip(k + 1) {
            let f = row[k] / pivot[k];
            for (x, p) in row.iter_mut().zip(&pivot).skip(k) {
                *x -= f * p;
            }
        }
    }
    assert!(det.is_integer());
    det.to_integer()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors `d_k / d_{k−1}` from gcds of `k×k` minors; zero once
/// every minor of some size vanishes.
pub fn determinantal_invariants(m: &[Vec<i128>]) -> Vec<i128> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut prev = 1i128;
    for k in 1..=rows.min(cols) {
        let mut g = 0i128;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i128>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j]).collect()).collect();
                g = g.gcd(&rational_det(&minor));
            }
        }
        if g == 0 {
            out.resize(rows.min(cols), 0);
            return out;
        }
        out.push(g / prev);
        prev = g;
    }
    out
}

/// Characteristic polynomial coefficients `[c_0 = 1, c_1, …, c_n]` of
/// `det(xI − M) = Σ c_k x^{n−k}` by Faddeev–LeVerrier.
pub fn char_poly(m: &[Vec<i128>]) -> Vec<BigInt> {
    let n = m.len();
    let big: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mul = |a: &Vec<Vec<BigInt>>, b: &Vec<Vec<BigInt>>| -> Vec<Vec<BigInt>> {
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum()).collect())
            .collect()
    };
    let mut coeffs = vec![BigInt::one()];
    let mut mk = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        // M_k = A·M_{k−1} + c_{k−1} I
        let mut next = mul(&big, &mk);
        let c_prev = coeffs[k - 1].clone();
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &c_prev;
        }
        mk = next;
        let am = mul(&big, &mk);
        let trace: BigInt = (0..n).map(|i| am[i][i].clone()).sum();
        let (q, r) = (-trace).div_rem(&BigInt::from(k));
        assert!(r.is_zero());
        coeffs.push(q);
    }
    coeffs
}

fn sign_changes(c: &[BigInt]) -> usize {
    let signs: Vec<bool> = c.iter().filter(|x| !x.is_zero()).map(|x| x.is_positive()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Inertia of a symmetric matrix from Descartes' rule on its (real-rooted)
/// characteristic polynomial.
pub fn charpoly_inertia(m: &[Vec<i128>]) -> (usize, usize, usize) {
    let c = char_poly(m);
    let n = m.len();
    let zero = c.iter().rev().take_while(|x| x.is_zero()).count();
    let pos = sign_changes(&c);
    // p(−x): coefficient of x^{n−k} picks up (−1)^{n−k}
    let flipped: Vec<BigInt> = c
        .iter()
        .enumerate()
        .map(|(k, x)| if (n - k) % 2 == 1 { -x } else { x.clone() })
        .collect();
    let neg = sign_changes(&flipped);
    (pos, zero, neg)
}

/// Leading principal minors `D_1, …, D_n`.
pub fn leading_minors(m: &[Vec<i128>]) -> Vec<i128> {
    (1..=m.len())
        .map(|k| {
            let sub: Vec<Vec<i128>> = m[..k].iter().map(|r| r[..k].to_vec()).collect();
            cofactor_det(&sub)
        })
        .collect()
}

pub fn floor_div(n: i64, q: i64) -> i64 {
    let (d, r) = (n / q, n % q);
    if r != 0 && ((r < 0) != (q < 0)) {
        d - 1
    } else {
        d
    }
}

/// `δ_t` written out from its definition with plain `i64`.
pub fn oracle_delta(d: &SeifertData, t: i64, xi0: i64, xi: &[i64], s: i64) -> i64 {
    let sign = if s.rem_euclid(2) == 1 { 1 } else { -1 };
    let mut v = sign * t + xi0 + d.a * s;
    for (&(r, q), &x) in d.fibers.iter().zip(xi) {
        v += floor_div(x + r * s, q);
    }
    v
}

/// Random genus ≤ 3 data with `a > 2g`, at most three fibers, `q ≤ 7` and
/// `0 < r < q`.
pub fn random_seifert(rng: &mut ChaCha8Rng) -> SeifertData {
    let g = rng.gen_range(0..=3i64);
    let a = rng.gen_range(2 * g + 1..=2 * g + 4);
    let k = rng.gen_range(0..=3usize);
    let fibers = (0..k)
        .map(|_| loop {
            let q = rng.gen_range(2..=7i64);
            let r = rng.gen_range(1..q);
            if r.gcd(&q) == 1 {
                break (r, q);
            }
        })
        .collect();
    SeifertData::new(g, a, fibers).expect("generated data is valid")
}

pub fn small_matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(-bound..=bound, r * c).prop_map(move |v| {
            IntMatrix::new(r, c, v.into_iter().map(BigInt::from).collect()).unwrap()
        })
    })
}

pub fn symmetric_matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim).prop_flat_map(move |n| {
        proptest::collection::vec(-bound..=bound, n * n).prop_map(move |v| {
            let mut rows = vec![vec![0i64; n]; n];
            for i in 0..n {
                for j in i..n {
                    rows[i][j] = v[i * n + j];
                    rows[j][i] = v[i * n + j];
                }
            }
            IntMatrix::from_rows(&rows).unwrap()
        })
    })
}

pub fn generator_word(max_len: usize) -> impl Strategy<Value = TwistWord> {
    proptest::collection::vec((any::<bool>(), -3i64..=3), 0..=max_len).prop_map(|v| {
        TwistWord::new(v.into_iter().map(|(is_a, e)| {
            TwistFactor::new(if is_a { Slope::zero() } else { Slope::infinity() }, e)
        }))
    })
}

pub fn sl2() -> impl Strategy<Value = Sl2> {
    generator_word(8).prop_map(|w| mcg::eval_word(&w))
}

pub fn slope() -> impl Strategy<Value = Slope> {
    (-30i64..=30, -30i64..=30)
        .prop_filter("nonzero", |(x, y)| *x != 0 || *y != 0)
        .prop_map(|(x, y)| Slope::reduced(x, y).unwrap())
}

/// A consistent decomposition: random slopes and gluing words, each next
/// left slope forced to the image of the previous right slope.
pub fn decomposition() -> impl Strategy<Value = LayerDecomposition> {
    (slope(), proptest::collection::vec((slope(), generator_word(4)), 1..=5)).prop_map(|(first, rest)| {
        let mut layers = Vec::new();
        let mut gluings = Vec::new();
        let mut left = first;
        for (k, (right, g)) in rest.iter().enumerate() {
            layers.push(ToricLayer::new(format!("L{k}"), left.clone(), right.clone()));
            left = mcg::act_on_slope(&mcg::eval_word(g), right);
            gluings.push(g.clone());
        }
        gluings.pop();
        LayerDecomposition::new(layers, gluings).unwrap()
    })
}

pub fn seifert_and_params() -> impl Strategy<Value = (SeifertData, DeltaParams)> {
    let fiber = (2i64..=7, -20i64..=20).prop_filter("coprime, r ≠ 0", |(q, r)| *r != 0 && r.gcd(q) == 1);
    (0i64..=3, -8i64..=8, proptest::collection::vec(fiber, 0..=3))
        .prop_flat_map(|(g, a, fibers)| {
            let fibers: Vec<(i64, i64)> = fibers.into_iter().map(|(q, r)| (r, q)).collect();
            let xi: Vec<BoxedStrategy<i64>> = fibers.iter().map(|&(_, q)| (0..q).boxed()).collect();
            (Just(g), Just(a), Just(fibers), -g..=g, -60i64..=60, xi)
        })
        .prop_map(|(g, a, fibers, t, xi0, xi)| {
            (SeifertData::new(g, a, fibers).unwrap(), DeltaParams::new(t, xi0, xi))
        })
}

pub fn check_snf(m: &IntMatrix) -> Result<(), TestCaseError> {
    let r = linalg::smith_normal_form(m);
    let umv = r.u.mul(m).unwrap().mul(&r.v).unwrap();
    prop_assert_eq!(&umv, &r.d);
    prop_assert!(r.d.is_diagonal());
    let diag = r.invariant_factors();
    prop_assert!(diag.iter().all(|x| !x.is_negative()));
    for w in diag.windows(2) {
        let divides = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
        prop_assert!(divides, "{} does not divide {}", w[0], w[1]);
    }
    prop_assert_eq!(linalg::det_exact(&r.u).unwrap().abs(), BigInt::one());
    prop_assert_eq!(linalg::det_exact(&r.v).unwrap().abs(), BigInt::one());
    Ok(())
}

pub fn check_slide_inertia(m: &IntMatrix, i: usize, j: usize, c: i64) -> Result<(), TestCaseError> {
    let n = m.rows();
    let (i, j) = (i % n, j % n);
    if i == j {
        prop_assert!(linalg::congruence_slide(m, i, j, &BigInt::from(c)).is_err());
        return Ok(());
    }
    let s = linalg::congruence_slide(m, i, j, &BigInt::from(c)).unwrap();
    prop_assert!(s.is_symmetric());
    prop_assert_eq!(linalg::inertia(&s).unwrap(), linalg::inertia(m).unwrap());
    prop_assert_eq!(linalg::det_exact(&s).unwrap(), linalg::det_exact(m).unwrap());
    Ok(())
}

pub fn check_twist_conjugation(m: &Sl2, c: &Slope) -> Result<(), TestCaseError> {
    let moved = mcg::act_on_slope(m, c);
    let lhs = mcg::twist_matrix(&moved);
    let rhs = m.mul(&mcg::twist_matrix(c)).mul(&m.inverse());
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

pub fn check_h_telescoping(d: &SeifertData, p: &DeltaParams, s: i64) -> Result<(), TestCaseError> {
    let step = seifert::h_t(d, p, s + 1) - seifert::h_t(d, p, s);
    prop_assert_eq!(step, seifert::delta_t(d, p, s));
    prop_assert_eq!(seifert::h_t(d, p, 0), 0);
    Ok(())
}

pub fn check_normalize(d: &LayerDecomposition) -> Result<(), TestCaseError> {
    let n = layers::normalize(d);
    prop_assert_eq!(&layers::normalize(&n), &n);
    prop_assert_eq!(layers::outer_slopes(&n), layers::outer_slopes(d));
    prop_assert!(n.gluings().iter().all(mcg::is_identity_word));
    Ok(())
}
