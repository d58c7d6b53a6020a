//! Exact integer normal forms.
//!
//! One elimination engine backs everything: a sparse row-echelon pass
//! (row operations only) followed by a dense Smith pass on the pivot rows.
//! Row operations are recorded as a log instead of an explicit unimodular
//! matrix, so a tall boundary matrix with tens of thousands of rows can be
//! reduced without ever storing an `N x N` transform. Column operations only
//! occur in the dense pass and are logged the same way.
//!
//! All arithmetic is `i128` with overflow checks; results either are exact
//! or the call fails with [`Error::Overflow`].

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, SparseMatrix};

type Row = Vec<(u32, i128)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    Swap(u32, u32),
    /// `target += factor * source`
    Add { target: u32, source: u32, factor: i128 },
    Negate(u32),
}

#[inline]
fn add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or(Error::Overflow)
}

#[inline]
fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

/// A recorded sequence of elementary row operations `U = E_m ... E_1`.
#[derive(Clone, Debug, Default)]
pub struct RowTransform {
    dim: usize,
    ops: Vec<Op>,
}

impl RowTransform {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// `v <- U v`.
    pub fn apply(&self, v: &mut [i128]) -> Result<()> {
        debug_assert_eq!(v.len(), self.dim);
        for op in &self.ops {
            match *op {
                Op::Swap(a, b) => v.swap(a as usize, b as usize),
                Op::Add {
                    target,
                    source,
                    factor,
                } => {
                    let s = v[source as usize];
                    if s != 0 {
                        v[target as usize] = add(v[target as usize], mul(factor, s)?)?;
                    }
                }
                Op::Negate(a) => v[a as usize] = -v[a as usize],
            }
        }
        Ok(())
    }

    /// `v <- U^{-1} v`.
    pub fn apply_inverse(&self, v: &mut [i128]) -> Result<()> {
        debug_assert_eq!(v.len(), self.dim);
        for op in self.ops.iter().rev() {
            match *op {
                Op::Swap(a, b) => v.swap(a as usize, b as usize),
                Op::Add {
                    target,
                    source,
                    factor,
                } => {
                    let s = v[source as usize];
                    if s != 0 {
                        v[target as usize] = add(v[target as usize], mul(-factor, s)?)?;
                    }
                }
                Op::Negate(a) => v[a as usize] = -v[a as usize],
            }
        }
        Ok(())
    }

    /// Selected rows of `U`, as dense vectors.
    fn rows_of(&self, which: &[usize]) -> Result<Vec<Vec<i128>>> {
        // Row i of U is e_i^T U; materialize U column by column instead.
        let mut out = vec![vec![0i128; self.dim]; which.len()];
        let mut e = vec![0i128; self.dim];
        for j in 0..self.dim {
            e.iter_mut().for_each(|x| *x = 0);
            e[j] = 1;
            self.apply(&mut e)?;
            for (k, &i) in which.iter().enumerate() {
                out[k][j] = e[i];
            }
        }
        Ok(out)
    }

    /// Selected columns of `U^{-1}`.
    fn inverse_columns_of(&self, which: &[usize]) -> Result<Vec<Vec<i128>>> {
        which
            .iter()
            .map(|&j| {
                let mut e = vec![0i128; self.dim];
                e[j] = 1;
                self.apply_inverse(&mut e)?;
                Ok(e)
            })
            .collect()
    }
}

/// A recorded sequence of elementary column operations `V = F_1 ... F_m`.
#[derive(Clone, Debug, Default)]
pub struct ColumnTransform {
    dim: usize,
    ops: Vec<Op>,
}

impl ColumnTransform {
    /// The matrix `V`.
    pub fn matrix(&self) -> Result<Vec<Vec<i128>>> {
        let n = self.dim;
        let mut m = vec![vec![0i128; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        for op in &self.ops {
            for row in m.iter_mut() {
                apply_col_op(row, *op)?;
            }
        }
        Ok(m)
    }

    /// The matrix `V^{-1}`.
    pub fn inverse_matrix(&self) -> Result<Vec<Vec<i128>>> {
        let n = self.dim;
        let mut m = vec![vec![0i128; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        // V^{-1} = F_m^{-1} ... F_1^{-1}; left-multiplying by the inverse of
        // "col_t += f col_s" is "row_s -= f row_t".
        for op in &self.ops {
            match *op {
                Op::Swap(a, b) => m.swap(a as usize, b as usize),
                Op::Add {
                    target,
                    source,
                    factor,
                } => {
                    let t = m[target as usize].clone();
                    let s = &mut m[source as usize];
                    for (x, y) in s.iter_mut().zip(t) {
                        if y != 0 {
                            *x = add(*x, mul(-factor, y)?)?;
                        }
                    }
                }
                Op::Negate(a) => m[a as usize].iter_mut().for_each(|x| *x = -*x),
            }
        }
        Ok(m)
    }
}

fn apply_col_op(row: &mut [i128], op: Op) -> Result<()> {
    match op {
        Op::Swap(a, b) => row.swap(a as usize, b as usize),
        Op::Add {
            target,
            source,
            factor,
        } => {
            let s = row[source as usize];
            if s != 0 {
                row[target as usize] = add(row[target as usize], mul(factor, s)?)?;
            }
        }
        Op::Negate(a) => row[a as usize] = -row[a as usize],
    }
    Ok(())
}

/// Smith decomposition `U A V = D` with `U`, `V` kept as operation logs.
///
/// The non-zero entries of `D` sit at `(diag_rows[t], t)` for
/// `t < rank`, with `diag[0] | diag[1] | ...` and all of them positive.
#[derive(Clone, Debug)]
pub struct Smith {
    nrows: usize,
    ncols: usize,
    diag: Vec<i128>,
    diag_rows: Vec<usize>,
    zero_rows: Vec<usize>,
    left: RowTransform,
    right: ColumnTransform,
}

impl Smith {
    pub fn of_dense(m: &IntMatrix) -> Result<Smith> {
        let rows = (0..m.rows())
            .map(|i| {
                m.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(|(j, &v)| (j as u32, v as i128))
                    .collect()
            })
            .collect();
        Self::compute(rows, m.cols())
    }

    pub fn of_sparse(m: &SparseMatrix) -> Result<Smith> {
        let rows = (0..m.nrows())
            .map(|i| m.row(i).iter().map(|&(c, v)| (c, v as i128)).collect())
            .collect();
        Self::compute(rows, m.ncols())
    }

    fn compute(mut rows: Vec<Row>, ncols: usize) -> Result<Smith> {
        let nrows = rows.len();
        let mut left = RowTransform {
            dim: nrows,
            ops: Vec::new(),
        };
        let pivots = echelon(&mut rows, ncols, Some(&mut left.ops))?;
        let mut is_pivot = vec![false; nrows];
        for &(r, _) in &pivots {
            is_pivot[r] = true;
        }
        let zero_rows: Vec<usize> = (0..nrows).filter(|&i| !is_pivot[i]).collect();
        let prow: Vec<usize> = pivots.iter().map(|p| p.0).collect();

        let mut dense: Vec<Vec<i128>> = prow
            .iter()
            .map(|&r| {
                let mut d = vec![0i128; ncols];
                for &(c, v) in &rows[r] {
                    d[c as usize] = v;
                }
                d
            })
            .collect();
        drop(rows);
        let mut right = ColumnTransform {
            dim: ncols,
            ops: Vec::new(),
        };
        dense_smith(&mut dense, &prow, &mut left.ops, &mut right.ops)?;
        let diag = (0..prow.len()).map(|t| dense[t][t]).collect();
        Ok(Smith {
            nrows,
            ncols,
            diag,
            diag_rows: prow,
            zero_rows,
            left,
            right,
        })
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    pub fn diagonal(&self) -> &[i128] {
        &self.diag
    }

    /// Row index of the `t`-th diagonal entry inside `U A V`.
    pub fn diag_row(&self, t: usize) -> usize {
        self.diag_rows[t]
    }

    /// Rows of `U A V` that are identically zero.
    pub fn zero_rows(&self) -> &[usize] {
        &self.zero_rows
    }

    pub fn left(&self) -> &RowTransform {
        &self.left
    }

    pub fn right(&self) -> &ColumnTransform {
        &self.right
    }

    /// Elementary divisors different from one, in divisibility order.
    pub fn nontrivial_divisors(&self) -> Vec<i128> {
        self.diag.iter().copied().filter(|&d| d != 1).collect()
    }

    /// True iff every elementary divisor is one and the rank equals the
    /// number of columns, i.e. the matrix is a split injection.
    pub fn is_split_injection(&self) -> bool {
        self.rank() == self.ncols && self.diag.iter().all(|&d| d == 1)
    }
}

/// Row echelon form by row operations only. Returns `(row, column)` of each
/// pivot in increasing column order; pivots are positive and every other
/// row ends up empty.
fn echelon(rows: &mut [Row], ncols: usize, mut log: Option<&mut Vec<Op>>) -> Result<Vec<(usize, usize)>> {
    let mut active: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i].is_empty()).collect();
    let mut pivots = Vec::new();
    let mut cands: Vec<usize> = Vec::new();
    for col in 0..ncols {
        if active.is_empty() {
            break;
        }
        loop {
            cands.clear();
            cands.extend(
                active
                    .iter()
                    .copied()
                    .filter(|&i| rows[i][0].0 as usize == col),
            );
            if cands.is_empty() {
                break;
            }
            if cands.len() == 1 {
                let p = cands[0];
                if rows[p][0].1 < 0 {
                    rows[p].iter_mut().for_each(|e| e.1 = -e.1);
                    if let Some(l) = log.as_deref_mut() {
                        l.push(Op::Negate(p as u32));
                    }
                }
                pivots.push((p, col));
                active.retain(|&i| i != p);
                break;
            }
            let p = *cands
                .iter()
                .min_by_key(|&&i| (rows[i][0].1.unsigned_abs(), rows[i].len(), i))
                .unwrap();
            let pv = rows[p][0].1;
            let pivot_row = core::mem::take(&mut rows[p]);
            for &c in &cands {
                if c == p {
                    continue;
                }
                let q = rows[c][0].1 / pv;
                if q != 0 {
                    axpy(&mut rows[c], -q, &pivot_row)?;
                    if let Some(l) = log.as_deref_mut() {
                        l.push(Op::Add {
                            target: c as u32,
                            source: p as u32,
                            factor: -q,
                        });
                    }
                }
            }
            rows[p] = pivot_row;
            active.retain(|&i| !rows[i].is_empty());
        }
    }
    debug_assert!(active.iter().all(|&i| rows[i].is_empty()));
    Ok(pivots)
}

/// `target += factor * source` on sorted sparse rows.
fn axpy(target: &mut Row, factor: i128, source: &Row) -> Result<()> {
    let mut out = Vec::with_capacity(target.len() + source.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < source.len() {
        let tc = target.get(i).map(|e| e.0).unwrap_or(u32::MAX);
        let sc = source.get(j).map(|e| e.0).unwrap_or(u32::MAX);
        if tc < sc {
            out.push(target[i]);
            i += 1;
        } else if sc < tc {
            out.push((sc, mul(factor, source[j].1)?));
            j += 1;
        } else {
            let v = add(target[i].1, mul(factor, source[j].1)?)?;
            if v != 0 {
                out.push((tc, v));
            }
            i += 1;
            j += 1;
        }
    }
    *target = out;
    Ok(())
}

fn dense_smith(d: &mut [Vec<i128>], prow: &[usize], rlog: &mut Vec<Op>, clog: &mut Vec<Op>) -> Result<()> {
    let r = d.len();
    if r == 0 {
        return Ok(());
    }
    let m = d[0].len();
    for t in 0..r {
        loop {
            // smallest non-zero entry of the trailing block
            let mut best: Option<(u128, usize, usize)> = None;
            for (i, row) in d.iter().enumerate().skip(t) {
                for (j, &v) in row.iter().enumerate().skip(t) {
                    if v != 0 {
                        let a = v.unsigned_abs();
                        if best.is_none_or(|b| a < b.0) {
                            best = Some((a, i, j));
                        }
                    }
                }
            }
            let Some((_, bi, bj)) = best else {
                // the echelon pass guarantees full row rank
                return Err(Error::Construction("rank deficiency in Smith pass".into()));
            };
            if bi != t {
                d.swap(t, bi);
                rlog.push(Op::Swap(prow[t] as u32, prow[bi] as u32));
            }
            if bj != t {
                for row in d.iter_mut() {
                    row.swap(t, bj);
                }
                clog.push(Op::Swap(t as u32, bj as u32));
            }
            let pv = d[t][t];
            let mut clean = true;
            for i in t + 1..r {
                let q = d[i][t] / pv;
                if q != 0 {
                    let (top, bottom) = d.split_at_mut(i);
                    for (x, &y) in bottom[0].iter_mut().zip(top[t].iter()) {
                        if y != 0 {
                            *x = add(*x, mul(-q, y)?)?;
                        }
                    }
                    rlog.push(Op::Add {
                        target: prow[i] as u32,
                        source: prow[t] as u32,
                        factor: -q,
                    });
                }
                if d[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..m {
                let q = d[t][j] / pv;
                if q != 0 {
                    let op = Op::Add {
                        target: j as u32,
                        source: t as u32,
                        factor: -q,
                    };
                    for row in d.iter_mut() {
                        apply_col_op(row, op)?;
                    }
                    clog.push(op);
                }
                if d[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..r).find(|&i| d[i][t + 1..].iter().any(|&v| v % pv != 0));
            if let Some(i) = bad {
                let (top, bottom) = d.split_at_mut(i);
                for (x, &y) in top[t].iter_mut().zip(bottom[0].iter()) {
                    *x = add(*x, y)?;
                }
                rlog.push(Op::Add {
                    target: prow[t] as u32,
                    source: prow[i] as u32,
                    factor: 1,
                });
                continue;
            }
            break;
        }
        if d[t][t] < 0 {
            d[t].iter_mut().for_each(|x| *x = -*x);
            rlog.push(Op::Negate(prow[t] as u32));
        }
    }
    Ok(())
}

fn to_i64(v: i128) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Overflow)
}

fn rows_to_matrix(rows: &[Vec<i128>], cols: usize) -> Result<IntMatrix> {
    let data = rows
        .iter()
        .flat_map(|r| r.iter().copied())
        .map(to_i64)
        .collect::<Result<Vec<_>>>()?;
    IntMatrix::from_row_major(rows.len(), cols, data)
}

/// Elementary divisors of `m` (all of them, including ones), in
/// divisibility order.
pub fn elementary_divisors(m: &IntMatrix) -> Result<Vec<i64>> {
    Smith::of_dense(m)?.diag.iter().map(|&d| to_i64(d)).collect()
}

pub fn rank(m: &IntMatrix) -> Result<usize> {
    Ok(Smith::of_dense(m)?.rank())
}

/// Canonical Hermite basis of the row span of `m`: echelon rows with
/// positive pivots, entries above each pivot reduced into `[0, pivot)`,
/// ordered by pivot column. Two matrices span the same lattice iff their
/// Hermite bases are equal.
pub fn hermite_rows(m: &IntMatrix) -> Result<IntMatrix> {
    let mut rows: Vec<Row> = (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0)
                .map(|(j, &v)| (j as u32, v as i128))
                .collect()
        })
        .collect();
    let pivots = echelon(&mut rows, m.cols(), None)?;
    let mut basis: Vec<Row> = pivots.iter().map(|&(r, _)| core::mem::take(&mut rows[r])).collect();
    for k in 0..basis.len() {
        let col = pivots[k].1 as u32;
        let pv = basis[k][0].1;
        let (above, rest) = basis.split_at_mut(k);
        let pivot_row = &rest[0];
        for row in above.iter_mut() {
            if let Ok(pos) = row.binary_search_by_key(&col, |e| e.0) {
                let q = row[pos].1.div_euclid(pv);
                if q != 0 {
                    axpy(row, -q, pivot_row)?;
                }
            }
        }
    }
    let mut out = IntMatrix::zeros(basis.len(), m.cols());
    for (i, row) in basis.iter().enumerate() {
        for &(c, v) in row {
            out[(i, c as usize)] = to_i64(v)?;
        }
    }
    Ok(out)
}

/// Canonical basis of the integer kernel `{x : m x = 0}`, returned as the
/// columns of a matrix. The basis is pure (it extends to a basis of
/// `Z^cols`) and is put in Hermite shape.
pub fn kernel_basis(m: &IntMatrix) -> Result<IntMatrix> {
    let s = Smith::of_dense(m)?;
    let v = s.right.matrix()?;
    let n = m.cols();
    let cols: Vec<usize> = (s.rank()..n).collect();
    // rows of the candidate basis = columns r.. of V
    let kt: Vec<Vec<i128>> = cols.iter().map(|&j| (0..n).map(|i| v[i][j]).collect()).collect();
    let kt = rows_to_matrix(&kt, n)?;
    Ok(hermite_rows(&kt)?.transpose())
}

/// Left inverse over the integers of a split injection `k` (all elementary
/// divisors one, full column rank).
pub fn left_inverse(k: &IntMatrix) -> Result<IntMatrix> {
    let s = Smith::of_dense(k)?;
    if let Some(&d) = s.diag.iter().find(|&&d| d != 1) {
        return Err(Error::Torsion {
            context: "matrix has no integral left inverse".into(),
            divisor: to_i64(d)?,
        });
    }
    if s.rank() != k.cols() {
        return Err(Error::Torsion {
            context: "matrix is not injective".into(),
            divisor: 0,
        });
    }
    let pu = s.left.rows_of(&s.diag_rows)?;
    let v = s.right.matrix()?;
    // V * (Pi U)
    let n = k.cols();
    let mut out = vec![vec![0i128; k.rows()]; n];
    for i in 0..n {
        for (t, urow) in pu.iter().enumerate() {
            let a = v[i][t];
            if a == 0 {
                continue;
            }
            for (o, &b) in out[i].iter_mut().zip(urow) {
                if b != 0 {
                    *o = add(*o, mul(a, b)?)?;
                }
            }
        }
    }
    rows_to_matrix(&out, k.rows())
}

pub fn is_unimodular(m: &IntMatrix) -> Result<bool> {
    if !m.is_square() {
        return Ok(false);
    }
    let s = Smith::of_dense(m)?;
    Ok(s.is_split_injection())
}

/// Inverse of a unimodular matrix; `None` if `m` is not unimodular.
pub fn unimodular_inverse(m: &IntMatrix) -> Result<Option<IntMatrix>> {
    if !is_unimodular(m)? {
        return Ok(None);
    }
    left_inverse(m).map(Some)
}

/// Torsion-free cokernel of a split injection `f: Z^s -> Z^t`.
///
/// Returns `(projection, section)` with `projection` of shape `(t-s) x t`,
/// `projection * f = 0`, `projection * section = I`, and the columns of
/// `section` completing the image of `f` to a basis of `Z^t`.
pub fn split_cokernel(f: &IntMatrix) -> Result<(IntMatrix, IntMatrix)> {
    let s = Smith::of_dense(f)?;
    if let Some(&d) = s.diag.iter().find(|&&d| d != 1) {
        return Err(Error::Torsion {
            context: "cokernel has torsion".into(),
            divisor: to_i64(d)?,
        });
    }
    if s.rank() != f.cols() {
        return Err(Error::Torsion {
            context: "map has a non-zero kernel".into(),
            divisor: 0,
        });
    }
    let t = f.rows();
    let proj = s.left.rows_of(&s.zero_rows)?;
    let sec = s.left.inverse_columns_of(&s.zero_rows)?;
    let proj = rows_to_matrix(&proj, t)?;
    let sec = rows_to_matrix(&sec, t)?.transpose();
    Ok((proj, sec))
}

/// Exact solution `x` of `basis * x = y` where `basis` is a split injection;
/// `None` when `y` is not in the span.
pub fn solve_in_span(basis: &IntMatrix, y: &[i64]) -> Result<Option<Vec<i64>>> {
    let li = left_inverse(basis)?;
    let x = li.mul_vec(y)?;
    if basis.mul_vec(&x)? == y {
        Ok(Some(x))
    } else {
        Ok(None)
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i64
}

pub fn lcm(a: i64, b: i64) -> i64 {
    if a == 0 || b == 0 {
        0
    } else {
        (a / gcd(a, b) * b).abs()
    }
}

/// Extended gcd: `(g, x, y)` with `a x + b y = g >= 0`.
pub fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), cols).unwrap()
    }

    #[test]
    fn smith_known_example() {
        let a = m(&[&[-6, 111, -36, 6], &[5, -672, 210, 74], &[0, -255, 81, 24], &[-7, 255, -81, -10]]);
        assert_eq!(elementary_divisors(&a).unwrap(), vec![1, 3, 21]);
    }

    #[test]
    fn smith_reconstructs() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = Smith::of_dense(&a).unwrap();
        assert_eq!(s.diagonal(), &[2, 6, 12]);
        // U A V must be the diagonal matrix placed on diag_rows
        let v = s.right().matrix().unwrap();
        for j in 0..3 {
            let mut col: Vec<i128> = (0..3)
                .map(|i| (0..3).map(|k| a[(i, k)] as i128 * v[k][j]).sum())
                .collect();
            s.left().apply(&mut col).unwrap();
            for i in 0..3 {
                let expect = if j < s.rank() && i == s.diag_row(j) { s.diagonal()[j] } else { 0 };
                assert_eq!(col[i], expect);
            }
        }
    }

    #[test]
    fn kernel_of_augmentation() {
        let a = m(&[&[1, 1, 1, 1]]);
        let k = kernel_basis(&a).unwrap();
        assert_eq!(k.cols(), 3);
        assert!(a.try_mul(&k).unwrap().is_zero());
        assert!(elementary_divisors(&k).unwrap().iter().all(|&d| d == 1));
    }

    #[test]
    fn hermite_is_canonical() {
        let a = m(&[&[2, 0], &[0, 2]]);
        let b = m(&[&[2, 2], &[0, 2], &[4, 6]]);
        assert_eq!(hermite_rows(&a).unwrap(), hermite_rows(&b).unwrap());
        let c = m(&[&[1, 1], &[0, 2]]);
        assert_ne!(hermite_rows(&a).unwrap(), hermite_rows(&c).unwrap());
    }

    #[test]
    fn split_cokernel_projection() {
        let f = m(&[&[1], &[0]]);
        let (p, s) = split_cokernel(&f).unwrap();
        assert!(p.try_mul(&f).unwrap().is_zero());
        assert!(p.try_mul(&s).unwrap().is_identity());
        let g = m(&[&[2], &[0]]);
        assert!(matches!(split_cokernel(&g), Err(Error::Torsion { divisor: 2, .. })));
    }

    #[test]
    fn inverse_of_unimodular() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = unimodular_inverse(&a).unwrap().unwrap();
        assert!(a.try_mul(&inv).unwrap().is_identity());
        assert!(unimodular_inverse(&m(&[&[2, 0], &[0, 1]])).unwrap().is_none());
    }

    #[test]
    fn ext_gcd() {
        let (g, x, y) = extended_gcd(240, 46);
        assert_eq!(g, 2);
        assert_eq!(240 * x + 46 * y, 2);
    }
}
