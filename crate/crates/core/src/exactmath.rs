//! Exact integer and rational linear algebra.
//!
//! Integers are `num_bigint::BigInt` and rationals are `num_rational::BigRational`.
//! The module provides Smith normal form, integral solving of square systems and a
//! column-echelon lattice used to pick canonical coset representatives of `Z^n / A Z^k`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn is_integral(r: &Rat) -> bool {
    r.denom().is_one()
}

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Int>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(IMatrix { rows, cols, data })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IMatrix {
            rows,
            cols,
            data: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.data[i * n + i] = Int::one();
        }
        m
    }

    pub fn scalar(n: usize, k: &Int) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.data[i * n + i] = k.clone();
        }
        m
    }

    /// Builds from small rows. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        IMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().map(|&x| Int::from(x)).collect(),
        }
    }

    pub fn from_int_rows(rows: Vec<Vec<Int>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        Ok(IMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Int>], rows: usize) -> Result<Self> {
        let mut m = Self::zero(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::Dimension(format!(
                    "column of length {} in a matrix with {rows} rows",
                    col.len()
                )));
            }
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
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

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Int> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IMatrix) -> Result<IMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[Int]) -> Result<Vec<Int>> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!(
                "{}x{} matrix applied to a vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// Determinant by Bareiss fraction-free elimination.
    pub fn det(&self) -> Result<Int> {
        if !self.is_square() {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Int::one());
        }
        let mut m = self.to_rows();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(Int::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        Ok(sign * &m[n - 1][n - 1])
    }

    pub fn rank(&self) -> usize {
        self.to_rat().rank()
    }

    pub fn to_rat(&self) -> RMatrix {
        RMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| Rat::from_integer(x.clone())).collect(),
        }
    }

    /// Inverse over the integers, if the matrix is unimodular.
    pub fn inverse_unimodular(&self) -> Option<IMatrix> {
        let inv = self.to_rat().inverse().ok()?;
        inv.to_integer()
    }

    // elementary operations used by `snf`
    fn row_add(&mut self, i: usize, j: usize, c: &Int) {
        for col in 0..self.cols {
            let v = self.get(j, col) * c;
            self.data[i * self.cols + col] += v;
        }
    }

    fn col_add(&mut self, i: usize, j: usize, c: &Int) {
        for row in 0..self.rows {
            let v = self.get(row, j) * c;
            self.data[row * self.cols + i] += v;
        }
    }

    fn row_swap(&mut self, i: usize, j: usize) {
        if i != j {
            for col in 0..self.cols {
                self.data.swap(i * self.cols + col, j * self.cols + col);
            }
        }
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        if i != j {
            for row in 0..self.rows {
                self.data.swap(row * self.cols + i, row * self.cols + j);
            }
        }
    }

    fn row_neg(&mut self, i: usize) {
        for col in 0..self.cols {
            let idx = i * self.cols + col;
            self.data[idx] = -&self.data[idx];
        }
    }

    fn col_neg(&mut self, j: usize) {
        for row in 0..self.rows {
            let idx = row * self.cols + j;
            self.data[idx] = -&self.data[idx];
        }
    }
}

impl fmt::Display for IMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Dense rational matrix, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![Rat::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = Rat::one();
        }
        RMatrix {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn mul(&self, other: &RMatrix) -> Result<RMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension("rational matrix product".into()));
        }
        let mut data = vec![Rat::zero(); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(RMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    pub fn mul_vec(&self, x: &[Rat]) -> Result<Vec<Rat>> {
        if x.len() != self.cols {
            return Err(Error::Dimension("rational matrix times vector".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j) * &x[j])
                    .fold(Rat::zero(), |a, b| a + b)
            })
            .collect())
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<RMatrix> {
        if self.rows != self.cols {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a: Vec<Vec<Rat>> = (0..n)
            .map(|i| self.data[i * n..(i + 1) * n].to_vec())
            .collect();
        let mut inv: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                    .collect()
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero()).ok_or(Error::Singular)?;
            a.swap(p, c);
            inv.swap(p, c);
            let piv = a[c][c].clone();
            for j in 0..n {
                a[c][j] = &a[c][j] / &piv;
                inv[c][j] = &inv[c][j] / &piv;
            }
            for r in 0..n {
                if r != c && !a[r][c].is_zero() {
                    let f = a[r][c].clone();
                    for j in 0..n {
                        let da = &f * &a[c][j];
                        let di = &f * &inv[c][j];
                        a[r][j] -= da;
                        inv[r][j] -= di;
                    }
                }
            }
        }
        Ok(RMatrix {
            rows: n,
            cols: n,
            data: inv.into_iter().flatten().collect(),
        })
    }

    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<Rat>> = (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| !a[r][c].is_zero()) else {
                continue;
            };
            a.swap(p, rank);
            for r in rank + 1..self.rows {
                if !a[r][c].is_zero() {
                    let f = &a[r][c] / &a[rank][c];
                    for j in c..self.cols {
                        let d = &f * &a[rank][j];
                        a[r][j] -= d;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn to_integer(&self) -> Option<IMatrix> {
        if !self.data.iter().all(is_integral) {
            return None;
        }
        Some(IMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|r| r.numer().clone()).collect(),
        })
    }
}

impl fmt::Display for RMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// `a = u * d * v` with `u`, `v` unimodular and `d` diagonal with
/// `d[i] | d[i+1]`. `u_inv` and `v_inv` are the inverses.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IMatrix,
    pub d: IMatrix,
    pub v: IMatrix,
    pub u_inv: IMatrix,
    pub v_inv: IMatrix,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<Int> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }
}

/// Smith normal form. The pivot is always the entry of smallest nonzero absolute
/// value in the remaining block, ties broken by row then column.
pub fn snf(a: &IMatrix) -> Snf {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IMatrix::identity(m);
    let mut u_inv = IMatrix::identity(m);
    let mut v = IMatrix::identity(n);
    let mut v_inv = IMatrix::identity(n);

    // Invariant: a = u * d * v.
    macro_rules! row_add {
        ($i:expr, $j:expr, $c:expr) => {{
            let c: Int = $c;
            d.row_add($i, $j, &c);
            u.col_add($j, $i, &(-&c));
            u_inv.row_add($i, $j, &c);
        }};
    }
    macro_rules! col_add {
        ($i:expr, $j:expr, $c:expr) => {{
            let c: Int = $c;
            d.col_add($i, $j, &c);
            v.row_add($j, $i, &(-&c));
            v_inv.col_add($i, $j, &c);
        }};
    }

    for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = d.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            d.row_swap(t, pi);
            u.col_swap(t, pi);
            u_inv.row_swap(t, pi);
            d.col_swap(t, pj);
            v.row_swap(t, pj);
            v_inv.col_swap(t, pj);

            let mut dirty = false;
            for i in t + 1..m {
                if !d.get(i, t).is_zero() {
                    let q = d.get(i, t).div_floor(d.get(t, t));
                    row_add!(i, t, -q);
                    dirty |= !d.get(i, t).is_zero();
                }
            }
            for j in t + 1..n {
                if !d.get(t, j).is_zero() {
                    let q = d.get(t, j).div_floor(d.get(t, t));
                    col_add!(j, t, -q);
                    dirty |= !d.get(t, j).is_zero();
                }
            }
            if dirty {
                continue;
            }
            let p = d.get(t, t).clone();
            let bad = (t + 1..m)
                .find(|&i| (t + 1..n).any(|j| !d.get(i, j).is_multiple_of(&p)));
            match bad {
                Some(i) => row_add!(t, i, Int::one()),
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.row_neg(t);
            u.col_neg(t);
            u_inv.row_neg(t);
        }
    }
    Snf {
        u,
        d,
        v,
        u_inv,
        v_inv,
    }
}

/// Solves `a x = b` for square nonsingular `a`; returns `x` only when the unique
/// rational solution is integral.
pub fn solve_integral(a: &IMatrix, b: &[Int]) -> Result<Option<Vec<Int>>> {
    if !a.is_square() || b.len() != a.rows {
        return Err(Error::Dimension("solve_integral needs a square system".into()));
    }
    let inv = a.to_rat().inverse()?;
    let rb: Vec<Rat> = b.iter().map(|x| Rat::from_integer(x.clone())).collect();
    let x = inv.mul_vec(&rb)?;
    if x.iter().all(is_integral) {
        Ok(Some(x.into_iter().map(|r| r.numer().clone()).collect()))
    } else {
        Ok(None)
    }
}

/// The lattice spanned by the columns of an `n x k` integer matrix of rank `k`,
/// kept in column-echelon form `h = a * q`.
///
/// Column `j` of `h` vanishes above its pivot row `p_j`, pivots increase and are
/// positive. Residues are the vectors whose pivot coordinates lie in
/// `[0, h[p_j][j])`; coordinates outside pivot rows are free.
#[derive(Clone, Debug)]
pub struct Lattice {
    a: IMatrix,
    h: IMatrix,
    q: IMatrix,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn new(a: &IMatrix) -> Result<Self> {
        let (n, k) = (a.rows, a.cols);
        let mut h = a.clone();
        let mut q = IMatrix::identity(k);
        let mut pivots = Vec::with_capacity(k);
        let mut j = 0;
        for i in 0..n {
            if j == k {
                break;
            }
            loop {
                let best = (j..k)
                    .filter(|&c| !h.get(i, c).is_zero())
                    .min_by(|&x, &y| h.get(i, x).abs().cmp(&h.get(i, y).abs()).then(x.cmp(&y)));
                let Some(c) = best else { break };
                h.col_swap(j, c);
                q.col_swap(j, c);
                let mut done = true;
                for c2 in j + 1..k {
                    if !h.get(i, c2).is_zero() {
                        let t = -h.get(i, c2).div_floor(h.get(i, j));
                        h.col_add(c2, j, &t);
                        q.col_add(c2, j, &t);
                        done &= h.get(i, c2).is_zero();
                    }
                }
                if done {
                    break;
                }
            }
            if h.get(i, j).is_zero() {
                continue;
            }
            if h.get(i, j).is_negative() {
                h.col_neg(j);
                q.col_neg(j);
            }
            pivots.push(i);
            j += 1;
        }
        if j < k {
            return Err(Error::Dimension(format!(
                "columns are linearly dependent (rank {j} < {k})"
            )));
        }
        Ok(Lattice {
            a: a.clone(),
            h,
            q,
            pivots,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.a.rows
    }

    pub fn rank(&self) -> usize {
        self.a.cols
    }

    pub fn generators(&self) -> &IMatrix {
        &self.a
    }

    pub fn echelon(&self) -> &IMatrix {
        &self.h
    }

    /// `[Z^n : L]`, or `None` when infinite.
    pub fn index(&self) -> Option<Int> {
        if self.rank() < self.ambient_dim() {
            return None;
        }
        Some(
            self.pivots
                .iter()
                .enumerate()
                .map(|(j, &p)| self.h.get(p, j).clone())
                .product(),
        )
    }

    /// Splits `g = r + a*h` with `r` the canonical residue.
    pub fn decompose(&self, g: &[Int]) -> (Vec<Int>, Vec<Int>) {
        let mut r = g.to_vec();
        let mut coef = vec![Int::zero(); self.rank()];
        for (j, &p) in self.pivots.iter().enumerate() {
            let t = r[p].div_floor(self.h.get(p, j));
            if !t.is_zero() {
                for (i, ri) in r.iter_mut().enumerate().skip(p) {
                    *ri -= &t * self.h.get(i, j);
                }
            }
            coef[j] = t;
        }
        let h = self.q.mul_vec(&coef).expect("shape checked at construction");
        (r, h)
    }

    pub fn is_residue(&self, r: &[Int]) -> bool {
        self.pivots
            .iter()
            .enumerate()
            .all(|(j, &p)| !r[p].is_negative() && &r[p] < self.h.get(p, j))
    }

    pub fn contains(&self, g: &[Int]) -> bool {
        self.decompose(g).0.iter().all(Zero::is_zero)
    }

    /// Canonical residues, zero first. Finite index: pivot box in lexicographic
    /// order. Infinite index: shells of growing max-norm over the free coordinates.
    pub fn residues(&self) -> Residues {
        let n = self.ambient_dim();
        let free: Vec<usize> = (0..n).filter(|i| !self.pivots.contains(i)).collect();
        let bounds: Vec<Int> = self
            .pivots
            .iter()
            .enumerate()
            .map(|(j, &p)| self.h.get(p, j).clone())
            .collect();
        let shell_vecs = vec![vec![0; free.len()]];
        Residues {
            n,
            pivots: self.pivots.clone(),
            bounds,
            free,
            shell: 0,
            shell_vecs,
            shell_pos: 0,
            box_pos: None,
            done: false,
        }
    }
}

/// Lazy iterator over canonical residues of a [`Lattice`].
#[derive(Clone, Debug)]
pub struct Residues {
    n: usize,
    pivots: Vec<usize>,
    bounds: Vec<Int>,
    free: Vec<usize>,
    shell: i64,
    shell_vecs: Vec<Vec<i64>>,
    shell_pos: usize,
    box_pos: Option<Vec<Int>>,
    done: bool,
}

fn shell_vectors(dim: usize, s: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![-s; dim];
    loop {
        if cur.iter().any(|x| x.abs() == s) {
            out.push(cur.clone());
        }
        let mut i = dim;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < s {
                cur[i] += 1;
                for c in cur.iter_mut().skip(i + 1) {
                    *c = -s;
                }
                break;
            }
        }
    }
}

impl Iterator for Residues {
    type Item = Vec<Int>;

    fn next(&mut self) -> Option<Vec<Int>> {
        if self.done {
            return None;
        }
        let box_pos = match self.box_pos.take() {
            None => vec![Int::zero(); self.bounds.len()],
            Some(mut b) => {
                let mut i = b.len();
                let mut carried = true;
                while i > 0 {
                    i -= 1;
                    b[i] += 1;
                    if b[i] < self.bounds[i] {
                        carried = false;
                        break;
                    }
                    b[i] = Int::zero();
                }
                if carried {
                    self.shell_pos += 1;
                    if self.shell_pos >= self.shell_vecs.len() {
                        if self.free.is_empty() {
                            self.done = true;
                            return None;
                        }
                        self.shell += 1;
                        self.shell_vecs = shell_vectors(self.free.len(), self.shell);
                        self.shell_pos = 0;
                    }
                }
                b
            }
        };
        let mut r = vec![Int::zero(); self.n];
        for (j, &p) in self.pivots.iter().enumerate() {
            r[p] = box_pos[j].clone();
        }
        for (t, &f) in self.free.iter().enumerate() {
            r[f] = Int::from(self.shell_vecs[self.shell_pos][t]);
        }
        self.box_pos = Some(box_pos);
        Some(r)
    }
}

/// Canonical residues of `Z^n / a Z^k`.
pub fn transversal_enum(a: &IMatrix) -> Result<Residues> {
    Ok(Lattice::new(a)?.residues())
}

pub fn to_u64(x: &Int) -> Option<u64> {
    x.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Int> {
        xs.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn snf_of_diag_2_3() {
        let a = IMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        let s = snf(&a);
        assert_eq!(s.diagonal(), v(&[1, 6]));
        let back = s.u.mul(&s.d).unwrap().mul(&s.v).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn snf_of_2468() {
        let a = IMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        let s = snf(&a);
        assert_eq!(s.diagonal(), v(&[2, 4]));
        assert_eq!(s.u.mul(&s.d).unwrap().mul(&s.v).unwrap(), a);
        assert_eq!(s.u.mul(&s.u_inv).unwrap(), IMatrix::identity(2));
        assert_eq!(s.v_inv.mul(&s.v).unwrap(), IMatrix::identity(2));
    }

    #[test]
    fn snf_rectangular_and_singular() {
        let a = IMatrix::from_rows(&[vec![4, 6, 2], vec![2, 2, 0]]);
        let s = snf(&a);
        assert_eq!(s.u.mul(&s.d).unwrap().mul(&s.v).unwrap(), a);
        assert_eq!(s.diagonal(), v(&[2, 2]));
        let z = IMatrix::from_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(snf(&z).diagonal(), v(&[1, 0]));
    }

    #[test]
    fn bareiss_det() {
        let a = IMatrix::from_rows(&[vec![0, 2, 1], vec![3, -1, 4], vec![5, 9, 2]]);
        assert_eq!(a.det().unwrap(), int(60));
        let b = IMatrix::from_rows(&[vec![3, -4], vec![4, 3]]);
        assert_eq!(b.det().unwrap(), int(25));
    }

    #[test]
    fn diag_transversal_is_componentwise() {
        let a = IMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        let reps: Vec<_> = transversal_enum(&a).unwrap().collect();
        assert_eq!(reps.len(), 6);
        assert_eq!(reps[0], v(&[0, 0]));
        for i in 0..2 {
            for j in 0..3 {
                assert!(reps.contains(&v(&[i, j])));
            }
        }
        let l = Lattice::new(&a).unwrap();
        assert_eq!(l.decompose(&v(&[5, 4])), (v(&[1, 1]), v(&[2, 1])));
    }

    #[test]
    fn solve_integral_cases() {
        let a = IMatrix::from_rows(&[vec![3, -4], vec![4, 3]]);
        assert_eq!(solve_integral(&a, &v(&[3, 4])).unwrap(), Some(v(&[1, 0])));
        assert_eq!(solve_integral(&a, &v(&[1, 0])).unwrap(), None);
        let s = IMatrix::from_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(solve_integral(&s, &v(&[1, 0])), Err(Error::Singular));
    }

    #[test]
    fn infinite_index_lattice() {
        let a = IMatrix::from_rows(&[vec![2], vec![2]]);
        let l = Lattice::new(&a).unwrap();
        assert_eq!(l.index(), None);
        let (r, h) = l.decompose(&v(&[5, 1]));
        assert_eq!(r, v(&[1, -3]));
        assert_eq!(h, v(&[2]));
        let first: Vec<_> = l.residues().take(6).collect();
        assert_eq!(first[0], v(&[0, 0]));
        assert_eq!(first[1], v(&[1, 0]));
        assert!(first.iter().all(|x| l.is_residue(x)));
    }

    #[test]
    fn shells_cover_each_vector_once() {
        let a = IMatrix::from_rows(&[vec![3], vec![0], vec![0]]);
        let l = Lattice::new(&a).unwrap();
        let reps: Vec<_> = l.residues().take(3 * 25).collect();
        let mut sorted = reps.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), reps.len());
        assert!(reps.iter().all(|r| r[1].abs() <= int(2) && r[2].abs() <= int(2)));
    }

    #[test]
    fn rational_inverse() {
        let a = IMatrix::from_rows(&[vec![5, 0], vec![0, 5]]).to_rat();
        let inv = a.inverse().unwrap();
        assert_eq!(inv.get(0, 0), &rat(1, 5));
        assert_eq!(a.mul(&inv).unwrap(), RMatrix::identity(2));
    }
}
