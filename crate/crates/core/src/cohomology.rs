//! Group cohomology `H^n(G, M)` for `n` in `0..=3` via the normalized
//! inhomogeneous bar complex.
//!
//! `C^n` is the set of functions `(G \ {1})^n -> M`. A cochain is stored as a
//! flat vector: the tuple `(g_1, ..., g_n)` is a mixed-radix number in base
//! `|G| - 1` with `g_1` most significant, and entry `tuple * rank + a` is the
//! `a`-th coordinate of its value. The coboundary is
//!
//! ```text
//! (df)(g_1..g_{n+1}) = g_1 f(g_2..g_{n+1})
//!                    + sum_i (-1)^i f(.., g_i g_{i+1}, ..)
//!                    + (-1)^{n+1} f(g_1..g_n)
//! ```
//!
//! where a term whose tuple contains the identity is zero.
//!
//! For `n >= 1` the group `H^n` is finite, so it equals the torsion of
//! `C^n / im d^{n-1}`. Only `d^{n-1}` is ever materialized; `d^n` is applied
//! on the fly to check cocycles.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use serde::Serialize;

use crate::error::{construction, invalid, Error, Result};
use crate::exec::Context;
use crate::group::{all_subgroups_bounded, FiniteGroup, Subgroup};
use crate::lattice::{restrict, GammaLattice};
use crate::matrix::{IntMatrix, SparseMatrix};
use crate::normal_form::{gcd, kernel_basis, lcm, solve_in_span, Smith};

/// Highest supported degree.
pub const MAX_DEGREE: usize = 3;

/// Indexing of normalized bar cochains over one group.
#[derive(Clone, Debug)]
struct Bar {
    group: FiniteGroup,
    nonid: Vec<usize>,
    pos: Vec<usize>,
}

impl Bar {
    fn new(group: &FiniteGroup) -> Bar {
        let nonid: Vec<usize> = group.elements().filter(|&g| g != group.identity()).collect();
        let mut pos = vec![usize::MAX; group.order()];
        for (k, &g) in nonid.iter().enumerate() {
            pos[g] = k;
        }
        Bar {
            group: group.clone(),
            nonid,
            pos,
        }
    }

    fn base(&self) -> usize {
        self.nonid.len()
    }

    fn tuples(&self, n: usize) -> Option<usize> {
        self.base().checked_pow(n as u32)
    }

    /// Tuple digits (positions in `nonid`), most significant first.
    fn decode(&self, mut idx: usize, n: usize, out: &mut [usize]) {
        let m = self.base();
        for k in (0..n).rev() {
            out[k] = idx % m;
            idx /= m;
        }
    }

    fn encode(&self, digits: &[usize]) -> usize {
        digits.iter().fold(0, |acc, &d| acc * self.base() + d)
    }
}

/// `dim C^n`, or `None` on overflow.
pub fn cochain_dim(group: &FiniteGroup, rank: usize, n: usize) -> Option<usize> {
    (group.order() - 1).checked_pow(n as u32)?.checked_mul(rank)
}

/// Upper bound on the number of non-zero entries of `d^n`.
pub fn coboundary_nnz_bound(m: &GammaLattice, n: usize) -> Option<usize> {
    let g = m.group();
    let base = g.order() - 1;
    let act: usize = g
        .elements()
        .filter(|&x| x != g.identity())
        .map(|x| m.action(x).as_slice().iter().filter(|&&v| v != 0).count())
        .sum();
    let first = base.checked_pow(n as u32)?.checked_mul(act)?;
    let rest = cochain_dim(g, m.rank(), n + 1)?.checked_mul(n + 1)?;
    first.checked_add(rest)
}

fn check_budget(ctx: &Context<'_>, m: &GammaLattice, n: usize) -> Result<()> {
    let est = coboundary_nnz_bound(m, n).unwrap_or(usize::MAX);
    if est > ctx.budget {
        let dim = cochain_dim(m.group(), m.rank(), n + 1).unwrap_or(usize::MAX);
        return Err(Error::ResourceLimit {
            what: format!("coboundary d^{}", n),
            detail: format!("dim C^{} = {}, estimated {} non-zero entries", n + 1, dim, est),
            bound: ctx.budget,
        });
    }
    Ok(())
}

/// Sparse rows of each action matrix.
fn sparse_actions(m: &GammaLattice) -> Vec<Vec<Vec<(u32, i64)>>> {
    m.actions()
        .iter()
        .map(|a| {
            (0..a.rows())
                .map(|i| {
                    a.row(i)
                        .iter()
                        .enumerate()
                        .filter(|(_, &v)| v != 0)
                        .map(|(j, &v)| (j as u32, v))
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Visits every term of `d^n`: calls `emit(row, column, coefficient)` for
/// each `(n+1)`-tuple and coordinate.
fn for_each_term<F>(m: &GammaLattice, bar: &Bar, n: usize, mut emit: F) -> Result<()>
where
    F: FnMut(usize, usize, i64) -> Result<()>,
{
    let r = m.rank();
    let g = &bar.group;
    let rows_out = bar.tuples(n + 1).ok_or(Error::Overflow)?;
    let pow_n = bar.tuples(n).ok_or(Error::Overflow)?;
    let acts = sparse_actions(m);
    let mut digits = vec![0usize; n + 1];
    let mut merged = vec![0usize; n];
    for t in 0..rows_out {
        bar.decode(t, n + 1, &mut digits);
        let g1 = bar.nonid[digits[0]];
        let tail = t % pow_n;
        let head = t / bar.base().max(1);
        let mut inner: Vec<(usize, i64)> = Vec::with_capacity(n);
        for i in 1..=n {
            let prod = g.mul(bar.nonid[digits[i - 1]], bar.nonid[digits[i]]);
            if prod == g.identity() {
                continue;
            }
            merged[..i - 1].copy_from_slice(&digits[..i - 1]);
            merged[i - 1] = bar.pos[prod];
            merged[i..].copy_from_slice(&digits[i + 1..]);
            let sign = if i % 2 == 0 { 1 } else { -1 };
            inner.push((bar.encode(&merged), sign));
        }
        let last_sign = if (n + 1).is_multiple_of(2) { 1 } else { -1 };
        for a in 0..r {
            let row = t * r + a;
            for &(b, v) in &acts[g1][a] {
                emit(row, tail * r + b as usize, v)?;
            }
            for &(idx, s) in &inner {
                emit(row, idx * r + a, s)?;
            }
            emit(row, head * r + a, last_sign)?;
        }
    }
    Ok(())
}

/// The coboundary `d^n: C^n -> C^{n+1}` as a sparse matrix.
pub fn coboundary_matrix(ctx: &Context<'_>, m: &GammaLattice, n: usize) -> Result<SparseMatrix> {
    check_budget(ctx, m, n)?;
    let bar = Bar::new(m.group());
    let rows = cochain_dim(m.group(), m.rank(), n + 1).ok_or(Error::Overflow)?;
    let cols = cochain_dim(m.group(), m.rank(), n).ok_or(Error::Overflow)?;
    let mut out = SparseMatrix::new(rows, cols);
    let mut current = usize::MAX;
    let mut entries: Vec<(u32, i64)> = Vec::new();
    for_each_term(m, &bar, n, |row, col, v| {
        if row != current {
            if current != usize::MAX {
                out.set_row(current, core::mem::take(&mut entries))?;
            }
            current = row;
        }
        entries.push((col as u32, v));
        Ok(())
    })?;
    if current != usize::MAX {
        out.set_row(current, entries)?;
    }
    Ok(out)
}

/// `d^n f` without materializing the matrix.
pub fn apply_coboundary(ctx: &Context<'_>, m: &GammaLattice, n: usize, f: &[i64]) -> Result<Vec<i64>> {
    check_budget(ctx, m, n)?;
    let cols = cochain_dim(m.group(), m.rank(), n).ok_or(Error::Overflow)?;
    if f.len() != cols {
        return Err(invalid(format!("cochain has length {}, expected {}", f.len(), cols)));
    }
    let rows = cochain_dim(m.group(), m.rank(), n + 1).ok_or(Error::Overflow)?;
    let mut acc = vec![0i128; rows];
    let bar = Bar::new(m.group());
    for_each_term(m, &bar, n, |row, col, v| {
        let x = f[col];
        if x != 0 {
            acc[row] = acc[row]
                .checked_add(v as i128 * x as i128)
                .ok_or(Error::Overflow)?;
        }
        Ok(())
    })?;
    acc.into_iter()
        .map(|x| i64::try_from(x).map_err(|_| Error::Overflow))
        .collect()
}

/// The two coboundaries around `C^n`.
#[derive(Clone, Debug)]
pub struct CochainComplexSlice {
    pub lattice: GammaLattice,
    pub degree: usize,
    /// `d^{n-1}`; `None` in degree 0.
    pub boundary_in: Option<SparseMatrix>,
    pub boundary_out: SparseMatrix,
}

impl CochainComplexSlice {
    pub fn new(ctx: &Context<'_>, m: &GammaLattice, n: usize) -> Result<Self> {
        let boundary_in = if n == 0 {
            None
        } else {
            Some(coboundary_matrix(ctx, m, n - 1)?)
        };
        Ok(CochainComplexSlice {
            lattice: m.clone(),
            degree: n,
            boundary_in,
            boundary_out: coboundary_matrix(ctx, m, n)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.boundary_out.ncols()
    }

    /// `d^n d^{n-1} = 0`.
    pub fn is_complex(&self) -> Result<bool> {
        match &self.boundary_in {
            None => Ok(true),
            Some(d) => Ok(self.boundary_out.mul(d)?.is_zero()),
        }
    }
}

#[derive(Clone, Debug)]
enum Solver {
    /// Degree 0: columns form a basis of the invariants.
    Invariants(IntMatrix),
    /// Degree >= 1: Smith form of `d^{n-1}`; `torsion[k]` is the diagonal
    /// position of the `k`-th invariant factor.
    Smith { smith: Smith, torsion: Vec<usize> },
}

/// `H^n(G, M)` with explicit cocycle generators.
#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    lattice: GammaLattice,
    degree: usize,
    invariant_factors: Vec<i64>,
    generators: Vec<Vec<i64>>,
    solver: Solver,
}

/// Serializable summary of a cohomology group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologySummary {
    pub degree: usize,
    pub invariant_factors: Vec<i64>,
    pub rank_free_part: usize,
}

impl CohomologyGroup {
    pub fn lattice(&self) -> &GammaLattice {
        &self.lattice
    }

    pub fn group(&self) -> &FiniteGroup {
        self.lattice.group()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Torsion orders `d_1 | d_2 | ...`, with `0` for each free summand.
    pub fn invariant_factors(&self) -> &[i64] {
        &self.invariant_factors
    }

    pub fn torsion_factors(&self) -> Vec<i64> {
        self.invariant_factors.iter().copied().filter(|&d| d != 0).collect()
    }

    pub fn rank_free_part(&self) -> usize {
        self.invariant_factors.iter().filter(|&&d| d == 0).count()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    pub fn cochain_dim(&self) -> usize {
        cochain_dim(self.group(), self.lattice.rank(), self.degree).unwrap_or(0)
    }

    pub fn summary(&self) -> CohomologySummary {
        CohomologySummary {
            degree: self.degree,
            invariant_factors: self.invariant_factors.clone(),
            rank_free_part: self.rank_free_part(),
        }
    }

    /// Coordinates of a cocycle, reduced modulo the invariant factors. The
    /// input is assumed to be a cocycle.
    fn coordinates_unchecked(&self, c: &[i64]) -> Result<Vec<i64>> {
        match &self.solver {
            Solver::Invariants(basis) => {
                if basis.cols() == 0 {
                    return Ok(Vec::new());
                }
                solve_in_span(basis, c)?.ok_or_else(|| invalid("vector is not invariant"))
            }
            Solver::Smith { smith, torsion } => {
                let mut v: Vec<i128> = c.iter().map(|&x| x as i128).collect();
                smith.left().apply(&mut v)?;
                if smith.zero_rows().iter().any(|&i| v[i] != 0) {
                    return Err(construction("cocycle lies outside the saturation of the coboundaries"));
                }
                torsion
                    .iter()
                    .zip(&self.invariant_factors)
                    .map(|(&t, &d)| {
                        let x = v[smith.diag_row(t)].rem_euclid(d as i128);
                        Ok(x as i64)
                    })
                    .collect()
            }
        }
    }

    fn check_cocycle(&self, ctx: &Context<'_>, c: &[i64]) -> Result<()> {
        let dim = self.cochain_dim();
        if c.len() != dim {
            return Err(invalid(format!("cochain has length {}, expected {}", c.len(), dim)));
        }
        let d = apply_coboundary(ctx, &self.lattice, self.degree, c)?;
        if let Some(i) = d.iter().position(|&x| x != 0) {
            return Err(invalid(format!(
                "not a cocycle: entry {} of its degree-{} coboundary is {}",
                i,
                self.degree + 1,
                d[i]
            )));
        }
        Ok(())
    }

    /// The class with the given coordinates, represented by the matching
    /// combination of generators.
    pub fn class_from_coordinates(self: &Arc<Self>, coords: &[i64]) -> Result<CohomologyClass> {
        if coords.len() != self.invariant_factors.len() {
            return Err(invalid("wrong number of coordinates"));
        }
        let coords: Vec<i64> = coords
            .iter()
            .zip(&self.invariant_factors)
            .map(|(&c, &d)| if d == 0 { c } else { c.rem_euclid(d) })
            .collect();
        let mut rep = vec![0i128; self.cochain_dim()];
        for (gen, &c) in self.generators.iter().zip(&coords) {
            if c == 0 {
                continue;
            }
            for (r, &x) in rep.iter_mut().zip(gen) {
                *r = r.checked_add(c as i128 * x as i128).ok_or(Error::Overflow)?;
            }
        }
        let representative = rep
            .into_iter()
            .map(|x| i64::try_from(x).map_err(|_| Error::Overflow))
            .collect::<Result<_>>()?;
        Ok(CohomologyClass {
            parent: self.clone(),
            coordinates: coords,
            representative,
        })
    }

    pub fn zero(self: &Arc<Self>) -> CohomologyClass {
        CohomologyClass {
            parent: self.clone(),
            coordinates: vec![0; self.invariant_factors.len()],
            representative: vec![0; self.cochain_dim()],
        }
    }

    /// The `k`-th generator as a class.
    pub fn generator(self: &Arc<Self>, k: usize) -> Result<CohomologyClass> {
        let mut coords = vec![0; self.invariant_factors.len()];
        *coords.get_mut(k).ok_or_else(|| invalid("generator index out of range"))? = 1;
        self.class_from_coordinates(&coords)
    }

    /// The class of a cocycle. Fails with invalid input when `cocycle` is
    /// not a cocycle.
    pub fn class_of(self: &Arc<Self>, ctx: &Context<'_>, cocycle: &[i64]) -> Result<CohomologyClass> {
        self.check_cocycle(ctx, cocycle)?;
        let coordinates = self.coordinates_unchecked(cocycle)?;
        Ok(CohomologyClass {
            parent: self.clone(),
            coordinates,
            representative: cocycle.to_vec(),
        })
    }
}

/// An element of a [`CohomologyGroup`].
#[derive(Clone, Debug)]
pub struct CohomologyClass {
    parent: Arc<CohomologyGroup>,
    coordinates: Vec<i64>,
    representative: Vec<i64>,
}

impl PartialEq for CohomologyClass {
    fn eq(&self, other: &Self) -> bool {
        self.parent.lattice == other.parent.lattice
            && self.parent.degree == other.parent.degree
            && self.coordinates == other.coordinates
    }
}

impl CohomologyClass {
    pub fn parent(&self) -> &Arc<CohomologyGroup> {
        &self.parent
    }

    pub fn coordinates(&self) -> &[i64] {
        &self.coordinates
    }

    pub fn representative(&self) -> &[i64] {
        &self.representative
    }

    pub fn degree(&self) -> usize {
        self.parent.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coordinates.iter().all(|&c| c == 0)
    }

    /// Exact order; `0` when the class has infinite order.
    pub fn order(&self) -> i64 {
        let mut o = 1;
        for (&c, &d) in self.coordinates.iter().zip(&self.parent.invariant_factors) {
            if c == 0 {
                continue;
            }
            if d == 0 {
                return 0;
            }
            o = lcm(o, d / gcd(c, d));
        }
        o
    }

    pub fn add(&self, other: &CohomologyClass) -> Result<CohomologyClass> {
        if self.parent.lattice != other.parent.lattice || self.parent.degree != other.parent.degree {
            return Err(invalid("classes live in different cohomology groups"));
        }
        let coords: Vec<i64> = self
            .coordinates
            .iter()
            .zip(&other.coordinates)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow))
            .collect::<Result<_>>()?;
        let mut out = self.parent.class_from_coordinates(&coords)?;
        out.representative = self
            .representative
            .iter()
            .zip(&other.representative)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow))
            .collect::<Result<_>>()?;
        Ok(out)
    }

    pub fn scale(&self, k: i64) -> Result<CohomologyClass> {
        let coords: Vec<i64> = self
            .coordinates
            .iter()
            .map(|a| a.checked_mul(k).ok_or(Error::Overflow))
            .collect::<Result<_>>()?;
        let mut out = self.parent.class_from_coordinates(&coords)?;
        out.representative = self
            .representative
            .iter()
            .map(|a| a.checked_mul(k).ok_or(Error::Overflow))
            .collect::<Result<_>>()?;
        Ok(out)
    }
}

fn compute(ctx: &Context<'_>, m: &GammaLattice, n: usize) -> Result<CohomologyGroup> {
    if n > MAX_DEGREE {
        return Err(invalid(format!("degree {} is not supported (maximum {})", n, MAX_DEGREE)));
    }
    if n == 0 {
        let d0 = coboundary_matrix(ctx, m, 0)?.to_dense();
        let basis = kernel_basis(&d0)?;
        let k = basis.cols();
        let generators = (0..k).map(|j| basis.column(j)).collect();
        return Ok(CohomologyGroup {
            lattice: m.clone(),
            degree: 0,
            invariant_factors: vec![0; k],
            generators,
            solver: Solver::Invariants(basis),
        });
    }
    let a = coboundary_matrix(ctx, m, n - 1)?;
    let smith = Smith::of_sparse(&a)?;
    let dim = a.nrows();
    let mut torsion = Vec::new();
    let mut factors = Vec::new();
    let mut generators = Vec::new();
    for (t, &d) in smith.diagonal().iter().enumerate() {
        if d == 1 {
            continue;
        }
        let mut v = vec![0i128; dim];
        v[smith.diag_row(t)] = 1;
        smith.left().apply_inverse(&mut v)?;
        let g = v
            .into_iter()
            .map(|x| i64::try_from(x).map_err(|_| Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        torsion.push(t);
        factors.push(i64::try_from(d).map_err(|_| Error::Overflow)?);
        generators.push(g);
    }
    let h = CohomologyGroup {
        lattice: m.clone(),
        degree: n,
        invariant_factors: factors,
        generators,
        solver: Solver::Smith { smith, torsion },
    };
    // The generators are cocycles by construction; confirm when d^n fits
    // in the budget.
    if coboundary_nnz_bound(m, n).is_some_and(|e| e <= ctx.budget) {
        for g in &h.generators {
            h.check_cocycle(ctx, g).map_err(|_| construction("cohomology generator is not a cocycle"))?;
        }
    }
    Ok(h)
}

/// `H^n(G, M)` for the group of `m`, looked up in and stored into the
/// context's cache.
pub fn cohomology(ctx: &Context<'_>, m: &GammaLattice, n: usize) -> Result<Arc<CohomologyGroup>> {
    let key = m.cache_key(n);
    if let Some(h) = ctx.cache.get(&key) {
        return Ok(h);
    }
    let h = Arc::new(compute(ctx, m, n)?);
    ctx.cache.insert(key, h.clone());
    Ok(h)
}

/// `H^n(H, M|_H)` for a subgroup.
pub fn cohomology_of_subgroup(ctx: &Context<'_>, m: &GammaLattice, h: &Subgroup, n: usize) -> Result<Arc<CohomologyGroup>> {
    cohomology(ctx, &restrict(m, h)?, n)
}

pub fn class_of(ctx: &Context<'_>, m: &GammaLattice, n: usize, cocycle: &[i64]) -> Result<CohomologyClass> {
    cohomology(ctx, m, n)?.class_of(ctx, cocycle)
}

pub fn is_coboundary(ctx: &Context<'_>, m: &GammaLattice, n: usize, cocycle: &[i64]) -> Result<bool> {
    Ok(class_of(ctx, m, n, cocycle)?.is_zero())
}

pub fn order_of(cls: &CohomologyClass) -> i64 {
    cls.order()
}

/// Enumeration limit for [`element_of_order`] and [`restriction_is_injective`].
const ENUMERATION_LIMIT: usize = 1 << 20;

fn torsion_size(factors: &[i64]) -> Result<usize> {
    let mut n: usize = 1;
    for &d in factors.iter().filter(|&&d| d != 0) {
        n = n.saturating_mul(d as usize);
    }
    if n > ENUMERATION_LIMIT {
        return Err(Error::ResourceLimit {
            what: "class enumeration".into(),
            detail: format!("torsion subgroup of order {}", n),
            bound: ENUMERATION_LIMIT,
        });
    }
    Ok(n)
}

/// `k`-th torsion coordinate vector in mixed radix, first coordinate fastest.
fn mixed_radix(factors: &[i64], mut k: usize) -> Vec<i64> {
    factors
        .iter()
        .map(|&d| {
            if d == 0 {
                0
            } else {
                let c = (k % d as usize) as i64;
                k /= d as usize;
                c
            }
        })
        .collect()
}

/// First class of order exactly `m` in the canonical enumeration of the
/// torsion subgroup (coordinates in mixed radix, first coordinate fastest).
/// With `m = 0` the first free generator is returned.
pub fn element_of_order(h: &Arc<CohomologyGroup>, m: i64) -> Result<CohomologyClass> {
    let f = &h.invariant_factors;
    if m == 0 {
        let k = f
            .iter()
            .position(|&d| d == 0)
            .ok_or_else(|| Error::NotFound("no element of infinite order".into()))?;
        return h.generator(k);
    }
    for k in 0..torsion_size(f)? {
        let c = h.class_from_coordinates(&mixed_radix(f, k))?;
        if c.order() == m {
            return Ok(c);
        }
    }
    Err(Error::NotFound(format!("no element of order {} in a group with invariant factors {:?}", m, f)))
}

/// Restriction of a class to a subgroup of its group. The result lives in
/// `H^n(H, M|_H)` over [`Subgroup::to_group`].
pub fn restriction(ctx: &Context<'_>, cls: &CohomologyClass, h: &Subgroup) -> Result<CohomologyClass> {
    let parent = &cls.parent;
    let g = parent.group();
    if h.parent() != g {
        return Err(invalid("subgroup of a different group"));
    }
    let n = parent.degree;
    let local = restrict(&parent.lattice, h)?;
    let target = cohomology(ctx, &local, n)?;
    let r = local.rank();
    let gbar = Bar::new(g);
    let hbar = Bar::new(local.group());
    let tuples = hbar.tuples(n).ok_or(Error::Overflow)?;
    let mut rep = vec![0i64; tuples * r];
    let mut hd = vec![0usize; n];
    let mut gd = vec![0usize; n];
    for t in 0..tuples {
        hbar.decode(t, n, &mut hd);
        for k in 0..n {
            gd[k] = gbar.pos[h.elements()[hbar.nonid[hd[k]]]];
        }
        let src = gbar.encode(&gd) * r;
        rep[t * r..(t + 1) * r].copy_from_slice(&cls.representative[src..src + r]);
    }
    let coordinates = target.coordinates_unchecked(&rep)?;
    Ok(CohomologyClass {
        parent: target,
        coordinates,
        representative: rep,
    })
}

/// True iff restriction `H^n(G, M) -> H^n(H, M|_H)` is injective. Decided by
/// enumerating the (finite) source group.
pub fn restriction_is_injective(ctx: &Context<'_>, hgrp: &Arc<CohomologyGroup>, h: &Subgroup) -> Result<bool> {
    if hgrp.rank_free_part() > 0 {
        return Err(invalid("injectivity test needs a finite cohomology group"));
    }
    let images = (0..hgrp.invariant_factors.len())
        .map(|k| restriction(ctx, &hgrp.generator(k)?, h))
        .collect::<Result<Vec<_>>>()?;
    let f = &hgrp.invariant_factors;
    for k in 1..torsion_size(f)? {
        let coords = mixed_radix(f, k);
        let mut acc: Option<CohomologyClass> = None;
        for (img, &c) in images.iter().zip(&coords) {
            if c == 0 {
                continue;
            }
            let term = img.scale(c)?;
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term)?,
            });
        }
        if acc.is_none_or(|a| a.is_zero()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Subgroups on which a class vanishes, and the indices they realize.
#[derive(Clone, Debug)]
pub struct SplittingIndex {
    pub gcd_index: usize,
    pub min_vanishing_index: usize,
    pub vanishing_subgroups: Vec<Subgroup>,
}

/// Sweeps every subgroup and records those on which `cls` restricts to zero.
pub fn splitting_index(ctx: &Context<'_>, cls: &CohomologyClass) -> Result<SplittingIndex> {
    if cls.degree() == 0 {
        return Err(invalid("splitting index needs a class of positive degree"));
    }
    let g = cls.parent.group();
    let subs = all_subgroups_bounded(g, ctx.subgroup_bound)?;
    let vanish = ctx.map(&subs, |s| restriction(ctx, cls, s).map(|r| r.is_zero()));
    let mut vanishing = Vec::new();
    for (s, v) in subs.into_iter().zip(vanish) {
        if v? {
            vanishing.push(s);
        }
    }
    let indices: Vec<usize> = vanishing.iter().map(|s| g.order() / s.order()).collect();
    let gcd_index = indices.iter().fold(0i64, |a, &b| gcd(a, b as i64)) as usize;
    let min_vanishing_index = indices.iter().copied().min().unwrap_or(0);
    Ok(SplittingIndex {
        gcd_index,
        min_vanishing_index,
        vanishing_subgroups: vanishing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{permutation_lattice, regular_lattice, trivial_lattice};

    fn ctx() -> Context<'static> {
        Context::default()
    }

    fn h(m: &GammaLattice, n: usize) -> Vec<i64> {
        cohomology(&ctx(), m, n).unwrap().invariant_factors().to_vec()
    }

    #[test]
    fn trivial_module_low_degrees() {
        for orders in [vec![2], vec![3], vec![4], vec![2, 2], vec![3, 3]] {
            let g = FiniteGroup::abelian(&orders).unwrap();
            let z = trivial_lattice(&g, 1);
            assert_eq!(h(&z, 0), vec![0]);
            assert!(h(&z, 1).is_empty());
        }
        let c6 = FiniteGroup::abelian(&[6]).unwrap();
        assert_eq!(h(&trivial_lattice(&c6, 1), 2), vec![6]);
        let k = FiniteGroup::abelian(&[2, 2]).unwrap();
        assert_eq!(h(&trivial_lattice(&k, 1), 2), vec![2, 2]);
        assert_eq!(h(&trivial_lattice(&k, 1), 3), vec![2]);
    }

    #[test]
    fn complexes_square_to_zero() {
        let g = FiniteGroup::abelian(&[2, 2]).unwrap();
        let p = permutation_lattice(&g, &Subgroup::generated_by(&g, &[1]).unwrap()).unwrap();
        for n in 0..3 {
            assert!(CochainComplexSlice::new(&ctx(), &p, n).unwrap().is_complex().unwrap());
        }
    }

    #[test]
    fn regular_lattice_is_acyclic() {
        let g = FiniteGroup::abelian(&[2, 2]).unwrap();
        let r = regular_lattice(&g);
        assert_eq!(h(&r, 0), vec![0]);
        assert!(h(&r, 1).is_empty());
        assert!(h(&r, 2).is_empty());
    }

    #[test]
    fn classes_and_orders() {
        let g = FiniteGroup::abelian(&[4]).unwrap();
        let z = trivial_lattice(&g, 1);
        let hg = cohomology(&ctx(), &z, 2).unwrap();
        let gen = hg.generator(0).unwrap();
        assert_eq!(gen.order(), 4);
        assert_eq!(gen.scale(2).unwrap().order(), 2);
        assert!(gen.scale(4).unwrap().is_zero());
        let back = hg.class_of(&ctx(), gen.representative()).unwrap();
        assert_eq!(back.coordinates(), gen.coordinates());
        assert_eq!(hg.zero().order(), 1);
        assert_eq!(element_of_order(&hg, 2).unwrap().coordinates(), &[2]);
        assert!(matches!(element_of_order(&hg, 3), Err(Error::NotFound(_))));
    }

    #[test]
    fn coboundaries_vanish() {
        let g = FiniteGroup::abelian(&[3]).unwrap();
        let z = trivial_lattice(&g, 1);
        let f: Vec<i64> = (0..cochain_dim(&g, 1, 1).unwrap()).map(|i| i as i64 * 3 - 1).collect();
        let df = apply_coboundary(&ctx(), &z, 1, &f).unwrap();
        assert!(is_coboundary(&ctx(), &z, 2, &df).unwrap());
        let bad = vec![1; cochain_dim(&g, 1, 2).unwrap()];
        let err = class_of(&ctx(), &z, 2, &bad);
        assert!(matches!(err, Err(Error::InvalidInput(ref s)) if s.contains("not a cocycle")));
    }

    #[test]
    fn restriction_to_trivial_and_full() {
        let g = FiniteGroup::abelian(&[2, 2]).unwrap();
        let z = trivial_lattice(&g, 1);
        let hg = cohomology(&ctx(), &z, 2).unwrap();
        let c = hg.generator(1).unwrap();
        assert!(restriction(&ctx(), &c, &Subgroup::trivial(&g)).unwrap().is_zero());
        let full = restriction(&ctx(), &c, &Subgroup::full(&g)).unwrap();
        assert_eq!(full.coordinates(), c.coordinates());
        assert!(!restriction_is_injective(&ctx(), &hg, &Subgroup::trivial(&g)).unwrap());
        assert!(restriction_is_injective(&ctx(), &hg, &Subgroup::full(&g)).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let g = FiniteGroup::abelian(&[3, 3]).unwrap();
        let z = trivial_lattice(&g, 1);
        let small = Context::default().with_budget(100);
        assert!(matches!(cohomology(&small, &z, 3), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn splitting_index_of_zero() {
        let g = FiniteGroup::abelian(&[2, 2]).unwrap();
        let z = trivial_lattice(&g, 1);
        let hg = cohomology(&ctx(), &z, 2).unwrap();
        let s = splitting_index(&ctx(), &hg.zero()).unwrap();
        assert_eq!((s.gcd_index, s.min_vanishing_index), (1, 1));
        let s = splitting_index(&ctx(), &hg.generator(0).unwrap()).unwrap();
        assert!(s.min_vanishing_index >= 2);
    }
}
