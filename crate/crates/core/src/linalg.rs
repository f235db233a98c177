//! Exact integer and rational linear algebra.
//!
//! Everything here works over arbitrary-precision integers (`BigInt`), with
//! rationals only where the inertia reduction needs division. Matrices are
//! immutable values: every operation returns a fresh matrix.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense integer matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from nested rows; all rows must have equal length.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let entries = rows
            .iter()
            .flat_map(|row| row.iter().cloned().map(Into::into))
            .collect();
        IntMatrix::new(r, c, entries)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn diagonal<T: Into<BigInt> + Clone>(diag: &[T]) -> Self {
        let n = diag.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            m.entries[i * n + i] = d.clone().into();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        self.entries
            .chunks(self.cols.max(1))
            .take(self.rows)
            .map(<[BigInt]>::to_vec)
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        IntMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Principal submatrix on the given indices, in the given order.
    pub fn principal_submatrix(&self, idx: &[usize]) -> Result<IntMatrix> {
        if !self.is_square() {
            return Err(Error::Dimension("principal submatrix of non-square matrix".into()));
        }
        if let Some(&bad) = idx.iter().find(|&&i| i >= self.rows) {
            return Err(Error::Dimension(format!("index {bad} out of range")));
        }
        let entries = idx
            .iter()
            .flat_map(|&i| idx.iter().map(move |&j| self.get(i, j).clone()))
            .collect();
        IntMatrix::new(idx.len(), idx.len(), entries)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    fn to_grid(&self) -> Vec<Vec<BigInt>> {
        self.to_rows()
    }

    fn from_grid(grid: Vec<Vec<BigInt>>, rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: grid.into_iter().flatten().collect(),
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{:?}", self.to_rows())
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self
            .to_rows()
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in &cells {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "[{}]", line.join(" "))?;
        }
        Ok(())
    }
}

// Matrices travel as JSON arrays of arrays of decimal strings.
impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for row in self.to_rows() {
            let strs: Vec<String> = row.iter().map(ToString::to_string).collect();
            seq.serialize_element(&strs)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<Vec<crate::json::BigIntText>> = Vec::deserialize(deserializer)?;
        let rows: Vec<Vec<BigInt>> = raw
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.0).collect())
            .collect();
        IntMatrix::from_rows(&rows).map_err(de::Error::custom)
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det_exact(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "determinant of a {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.to_grid();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    Ok(sign * &a[n - 1][n - 1])
}

/// Smith normal form `U·M·V = D` with unimodular `U`, `V`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Diagonal of `D`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }
}

/// Smith normal form by repeated Euclidean row/column reduction.
///
/// Pivot policy: the entry of smallest nonzero absolute value in the
/// unreduced block, ties broken by lowest (row, col). Diagonal entries come
/// out nonnegative with each dividing the next.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.to_grid();
    let mut u = IntMatrix::identity(rows).to_grid();
    let mut v = IntMatrix::identity(cols).to_grid();

    'outer: for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = pick_pivot(&d, t) else {
                break 'outer;
            };
            if pi != t {
                d.swap(t, pi);
                u.swap(t, pi);
            }
            if pj != t {
                swap_cols(&mut d, t, pj);
                swap_cols(&mut v, t, pj);
            }

            let mut clean = true;
            for i in t + 1..rows {
                if d[i][t].is_zero() {
                    continue;
                }
                let q = &d[i][t] / &d[t][t];
                add_row_multiple(&mut d, i, t, &-&q);
                add_row_multiple(&mut u, i, t, &-&q);
                clean &= d[i][t].is_zero();
            }
            for j in t + 1..cols {
                if d[t][j].is_zero() {
                    continue;
                }
                let q = &d[t][j] / &d[t][t];
                add_col_multiple(&mut d, j, t, &-&q);
                add_col_multiple(&mut v, j, t, &-&q);
                clean &= d[t][j].is_zero();
            }
            if !clean {
                continue;
            }

            // divisibility: fold an offending row into the pivot row and redo
            let pivot = d[t][t].clone();
            let offending = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !d[i][j].is_multiple_of(&pivot)));
            match offending {
                Some(i) => {
                    add_row_multiple(&mut d, t, i, &BigInt::one());
                    add_row_multiple(&mut u, t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
    }

    SnfResult {
        d: IntMatrix::from_grid(d, rows, cols),
        u: IntMatrix::from_grid(u, rows, rows),
        v: IntMatrix::from_grid(v, cols, cols),
    }
}

fn pick_pivot(d: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for (i, row) in d.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if x.is_zero() {
                continue;
            }
            let a = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| a < *b) {
                best = Some((i, j, a));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

fn swap_cols(g: &mut [Vec<BigInt>], a: usize, b: usize) {
    for row in g.iter_mut() {
        row.swap(a, b);
    }
}

/// row[dst] += c * row[src]
fn add_row_multiple(g: &mut [Vec<BigInt>], dst: usize, src: usize, c: &BigInt) {
    if c.is_zero() {
        return;
    }
    let src_row = g[src].clone();
    for (x, s) in g[dst].iter_mut().zip(src_row.iter()) {
        *x += c * s;
    }
}

/// col[dst] += c * col[src]
fn add_col_multiple(g: &mut [Vec<BigInt>], dst: usize, src: usize, c: &BigInt) {
    if c.is_zero() {
        return;
    }
    for row in g.iter_mut() {
        let s = row[src].clone();
        row[dst] += c * s;
    }
}

/// Positive, null and negative indices of a symmetric form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Inertia {
    pub n_plus: usize,
    pub n_zero: usize,
    pub n_minus: usize,
}

impl Inertia {
    pub fn new(n_plus: usize, n_zero: usize, n_minus: usize) -> Self {
        Inertia {
            n_plus,
            n_zero,
            n_minus,
        }
    }

    pub fn dimension(&self) -> usize {
        self.n_plus + self.n_zero + self.n_minus
    }

    pub fn signature(&self) -> i64 {
        self.n_plus as i64 - self.n_minus as i64
    }
}

impl fmt::Display for Inertia {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.n_plus, self.n_zero, self.n_minus)
    }
}

/// Sylvester inertia by symmetric Gaussian reduction over the rationals.
///
/// A nonzero diagonal entry is split off as a 1x1 block. When every remaining
/// diagonal entry vanishes but some off-diagonal entry does not, that pair is
/// split off as a hyperbolic 2x2 block contributing one positive and one
/// negative direction.
pub fn inertia(m: &IntMatrix) -> Result<Inertia> {
    if !m.is_symmetric() {
        return Err(Error::Contract("inertia requires a symmetric matrix".into()));
    }
    let mut a: Vec<Vec<BigRational>> = m
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect();
    let mut live: Vec<usize> = (0..m.rows).collect();
    let mut out = Inertia::new(0, 0, 0);

    while !live.is_empty() {
        if let Some(pos) = live.iter().position(|&k| !a[k][k].is_zero()) {
            let k = live.remove(pos);
            let p = a[k][k].clone();
            if p.is_positive() {
                out.n_plus += 1;
            } else {
                out.n_minus += 1;
            }
            for &i in &live {
                if a[i][k].is_zero() {
                    continue;
                }
                let f = &a[i][k] / &p;
                for &j in &live {
                    let delta = &f * &a[k][j];
                    a[i][j] -= delta;
                }
            }
            continue;
        }

        let pair = live.iter().enumerate().find_map(|(x, &k)| {
            live[x + 1..]
                .iter()
                .find(|&&l| !a[k][l].is_zero())
                .map(|&l| (k, l))
        });
        let Some((k, l)) = pair else {
            out.n_zero += live.len();
            break;
        };
        live.retain(|&i| i != k && i != l);
        out.n_plus += 1;
        out.n_minus += 1;
        // Schur complement against [[0, b], [b, 0]] whose inverse is [[0, 1/b], [1/b, 0]]
        let b = a[k][l].clone();
        for &i in &live {
            for &j in &live {
                let delta = (&a[i][k] * &a[l][j] + &a[i][l] * &a[k][j]) / &b;
                a[i][j] -= delta;
            }
        }
    }
    Ok(out)
}

/// Finitely generated abelian group `Z^free_rank ⊕ Z/t1 ⊕ … ⊕ Z/tk`, `t1 | t2 | …`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    /// Canonicalizes a list of cyclic orders (0 meaning a free summand) via SNF.
    pub fn from_cyclic_orders<T: Into<BigInt> + Clone>(orders: &[T]) -> Self {
        let snf = smith_normal_form(&IntMatrix::diagonal(orders));
        Self::from_invariant_factors(orders.len(), &snf.invariant_factors())
    }

    fn from_invariant_factors(n: usize, diag: &[BigInt]) -> Self {
        let rank = diag.iter().filter(|d| !d.is_zero()).count();
        AbelianGroup {
            free_rank: n - rank,
            torsion: diag.iter().filter(|d| **d > BigInt::one()).cloned().collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Serialize for AbelianGroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            free_rank: String,
            torsion: Vec<String>,
        }
        Repr {
            free_rank: self.free_rank.to_string(),
            torsion: self.torsion.iter().map(ToString::to_string).collect(),
        }
        .serialize(serializer)
    }
}

/// Cokernel `Z^n / M Z^n` of a square matrix, read off its Smith normal form.
pub fn cokernel_invariants(m: &IntMatrix) -> Result<AbelianGroup> {
    if !m.is_square() {
        return Err(Error::Dimension("cokernel of a non-square matrix".into()));
    }
    let snf = smith_normal_form(m);
    Ok(AbelianGroup::from_invariant_factors(
        m.rows,
        &snf.invariant_factors(),
    ))
}

/// Basis change `Eᵀ·M·E` with `E = I + c·e_i e_jᵀ`.
///
/// The new `j`-th basis vector is `e_j + c·e_i`: handle `j` slid over handle `i`.
pub fn congruence_slide(m: &IntMatrix, i: usize, j: usize, c: &BigInt) -> Result<IntMatrix> {
    if !m.is_symmetric() {
        return Err(Error::Contract("congruence slide needs a symmetric matrix".into()));
    }
    if i == j {
        return Err(Error::Contract("cannot slide a handle over itself".into()));
    }
    let n = m.rows;
    if i >= n || j >= n {
        return Err(Error::Dimension(format!("slide ({i}, {j}) out of range for {n}x{n}")));
    }
    let mut g = m.to_grid();
    // column j += c * column i, then row j += c * row i
    add_col_multiple(&mut g, j, i, c);
    add_row_multiple(&mut g, j, i, c);
    Ok(IntMatrix::from_grid(g, n, n))
}
