//! Flasque, coflasque and permutation classification, and coflasque covers.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::Serialize;

use crate::cohomology::cohomology;
use crate::error::{construction, invalid, Result};
use crate::exec::Context;
use crate::group::{all_subgroups_bounded, RightCosets, Subgroup};
use crate::lattice::{direct_sum, dual, kernel, permutation_lattice, restrict, GammaLattice, LatticeMap};
use crate::matrix::IntMatrix;
use crate::normal_form::{elementary_divisors, is_unimodular};

/// A subgroup on which `H^1` is non-zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub subgroup: Vec<usize>,
    pub order: usize,
    pub invariant_factors: Vec<i64>,
}

/// Outcome of a subgroup sweep.
///
/// Subgroups are visited in decreasing canonical order and the sweep stops
/// at the first failure; `checked_subgroups` counts the subgroups visited
/// up to and including it. On failure `witnesses` holds that first failure
/// followed by the smallest failing subgroup, when they differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub checked_subgroups: usize,
    pub total_subgroups: usize,
    pub witnesses: Vec<Witness>,
}

fn h1_witness(ctx: &Context<'_>, m: &GammaLattice, s: &Subgroup) -> Result<Option<Witness>> {
    let h = cohomology(ctx, &restrict(m, s)?, 1)?;
    if h.is_trivial() {
        return Ok(None);
    }
    Ok(Some(Witness {
        subgroup: s.elements().to_vec(),
        order: s.order(),
        invariant_factors: h.invariant_factors().to_vec(),
    }))
}

/// `H^1(L, M|_L) = 0` for every subgroup `L`.
pub fn is_coflasque(ctx: &Context<'_>, m: &GammaLattice) -> Result<Verdict> {
    let mut subs = all_subgroups_bounded(m.group(), ctx.subgroup_bound)?;
    subs.reverse();
    let total = subs.len();
    let results: Vec<Option<Witness>> = if ctx.executor.parallelism() > 1 {
        ctx.map(&subs, |s| h1_witness(ctx, m, s)).into_iter().collect::<Result<_>>()?
    } else {
        let mut out = Vec::with_capacity(total);
        for s in &subs {
            let w = h1_witness(ctx, m, s)?;
            let failed = w.is_some();
            out.push(w);
            if failed {
                break;
            }
        }
        out
    };
    let first = match results.iter().position(Option::is_some) {
        None => {
            return Ok(Verdict {
                holds: true,
                checked_subgroups: total,
                total_subgroups: total,
                witnesses: Vec::new(),
            })
        }
        Some(k) => k,
    };
    let mut witnesses = vec![results[first].clone().unwrap()];
    // Smallest failing subgroup: scan the untested tail from the bottom.
    let mut smallest = None;
    for k in (first + 1..total).rev() {
        let w = match results.get(k) {
            Some(w) => w.clone(),
            None => h1_witness(ctx, m, &subs[k])?,
        };
        if w.is_some() {
            smallest = w;
            break;
        }
    }
    witnesses.extend(smallest);
    Ok(Verdict {
        holds: false,
        checked_subgroups: first + 1,
        total_subgroups: total,
        witnesses,
    })
}

/// Coflasqueness of the dual lattice.
pub fn is_flasque(ctx: &Context<'_>, m: &GammaLattice) -> Result<Verdict> {
    is_coflasque(ctx, &dual(m))
}

/// True iff the columns of `basis` are permuted by the action.
pub fn certify_permutation(m: &GammaLattice, basis: &IntMatrix) -> Result<bool> {
    if basis.rows() != m.rank() || !is_unimodular(basis)? {
        return Err(invalid("certificate basis must be a unimodular matrix of size rank"));
    }
    let conj = m.change_basis(basis)?;
    Ok(conj.actions().iter().all(IntMatrix::is_permutation))
}

/// Result of the bounded search for a permutation basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PermutationSearch {
    /// Columns form a basis permuted by the group.
    Certified(IntMatrix),
    /// Not permutation: the lattice fails the flasque or coflasque test.
    Refuted(String),
    /// Nothing found within the effort bound; no conclusion.
    Unknown,
}

/// Default number of search nodes for [`search_permutation_basis`].
pub const DEFAULT_SEARCH_EFFORT: usize = 20_000;

/// Candidate orbits: orbits of short vectors that contain no pair `v, -v`.
fn candidate_orbits(m: &GammaLattice) -> Vec<Vec<Vec<i64>>> {
    let r = m.rank();
    let mut seeds: Vec<Vec<i64>> = Vec::new();
    if r <= 6 {
        let total = 3usize.pow(r as u32);
        for k in 1..total {
            let mut x = k;
            let v: Vec<i64> = (0..r)
                .map(|_| {
                    let d = (x % 3) as i64 - 1;
                    x /= 3;
                    d
                })
                .collect();
            seeds.push(v);
        }
    } else {
        for i in 0..r {
            for s in [1, -1] {
                let mut v = vec![0; r];
                v[i] = s;
                seeds.push(v);
            }
        }
    }
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut orbits = Vec::new();
    for v in seeds {
        if seen.contains(&v) {
            continue;
        }
        let mut orbit: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut ok = true;
        for a in m.actions() {
            match a.mul_vec(&v) {
                Ok(w) => {
                    orbit.insert(w);
                }
                Err(_) => ok = false,
            }
        }
        for w in &orbit {
            seen.insert(w.clone());
            let neg: Vec<i64> = w.iter().map(|x| -x).collect();
            seen.insert(neg.clone());
            if orbit.contains(&neg) {
                ok = false;
            }
        }
        if ok && orbit.len() <= r {
            orbits.push(orbit.into_iter().collect());
        }
    }
    orbits.sort_by_key(|o: &Vec<Vec<i64>>| o.len());
    orbits
}

fn columns_matrix(cols: &[Vec<i64>], rows: usize) -> Result<IntMatrix> {
    IntMatrix::from_columns(cols, rows)
}

fn is_pure(cols: &[Vec<i64>], rows: usize) -> Result<bool> {
    if cols.is_empty() {
        return Ok(true);
    }
    let d = elementary_divisors(&columns_matrix(cols, rows)?)?;
    Ok(d.len() == cols.len() && d.iter().all(|&x| x == 1))
}

struct Dfs<'a> {
    orbits: &'a [Vec<Vec<i64>>],
    rank: usize,
    budget: usize,
}

impl Dfs<'_> {
    fn go(&mut self, start: usize, chosen: &mut Vec<Vec<i64>>) -> Result<Option<Vec<Vec<i64>>>> {
        if chosen.len() == self.rank {
            return Ok(Some(chosen.clone()));
        }
        for k in start..self.orbits.len() {
            if self.budget == 0 {
                return Ok(None);
            }
            self.budget -= 1;
            let orbit = &self.orbits[k];
            if chosen.len() + orbit.len() > self.rank {
                continue;
            }
            let before = chosen.len();
            chosen.extend(orbit.iter().cloned());
            if is_pure(chosen, self.rank)? {
                if let Some(found) = self.go(k + 1, chosen)? {
                    return Ok(Some(found));
                }
            }
            chosen.truncate(before);
        }
        Ok(None)
    }
}

/// Looks for a permutation basis. Lattices failing the flasque or
/// coflasque test are refuted; otherwise a bounded depth-first search over
/// orbits of short vectors is run. `Unknown` is not a proof of anything.
pub fn search_permutation_basis(ctx: &Context<'_>, m: &GammaLattice, effort: usize) -> Result<PermutationSearch> {
    let r = m.rank();
    if r == 0 || m.actions().iter().all(IntMatrix::is_permutation) {
        return Ok(PermutationSearch::Certified(IntMatrix::identity(r)));
    }
    let co = is_coflasque(ctx, m)?;
    if !co.holds {
        return Ok(PermutationSearch::Refuted(format!(
            "not coflasque: H^1 = {:?} on a subgroup of order {}",
            co.witnesses[0].invariant_factors, co.witnesses[0].order
        )));
    }
    let fl = is_flasque(ctx, m)?;
    if !fl.holds {
        return Ok(PermutationSearch::Refuted(format!(
            "not flasque: H^1 of the dual = {:?} on a subgroup of order {}",
            fl.witnesses[0].invariant_factors, fl.witnesses[0].order
        )));
    }
    let orbits = candidate_orbits(m);
    let mut dfs = Dfs {
        orbits: &orbits,
        rank: r,
        budget: effort,
    };
    match dfs.go(0, &mut Vec::new())? {
        Some(cols) => {
            let b = columns_matrix(&cols, r)?;
            if certify_permutation(m, &b)? {
                Ok(PermutationSearch::Certified(b))
            } else {
                Err(construction("search produced a basis that is not permuted"))
            }
        }
        None => Ok(PermutationSearch::Unknown),
    }
}

/// `0 -> Q -> P -> M -> 0` with `P` permutation and `Q` coflasque.
#[derive(Clone, Debug)]
pub struct CoflasqueCover {
    pub p: GammaLattice,
    pub q: GammaLattice,
    pub surjection: LatticeMap,
    pub inclusion: LatticeMap,
    /// One entry per summand `Z[G/L]` of `P`: the subgroup and the invariant
    /// vector it maps onto.
    pub summands: Vec<(Subgroup, Vec<i64>)>,
    pub q_verdict: Verdict,
}

/// For every subgroup `L` and every basis vector `v` of `M^L`, the map
/// `Z[G/L] -> M`, `e_{L r} -> r^{-1} v`; `P` is the sum of their sources and
/// `Q` the kernel of the total map.
pub fn coflasque_cover(ctx: &Context<'_>, m: &GammaLattice) -> Result<CoflasqueCover> {
    let g = m.group();
    let r = m.rank();
    let subs = all_subgroups_bounded(g, ctx.subgroup_bound)?;
    let mut parts = Vec::new();
    let mut blocks: Vec<Vec<i64>> = Vec::new();
    let mut summands = Vec::new();
    for s in &subs {
        let inv = cohomology(ctx, &restrict(m, s)?, 0)?;
        if inv.generators().is_empty() {
            continue;
        }
        let perm = permutation_lattice(g, s)?;
        let cosets = RightCosets::new(g, s)?;
        for v in inv.generators() {
            for &rep in cosets.reps() {
                blocks.push(m.action(g.inv(rep)).mul_vec(v)?);
            }
            parts.push(perm.clone());
            summands.push((s.clone(), v.clone()));
        }
    }
    if r == 0 {
        parts.push(permutation_lattice(g, &Subgroup::full(g))?);
        blocks.push(Vec::new());
        summands.push((Subgroup::full(g), Vec::new()));
    }
    let sum = direct_sum(&parts)?;
    let total = IntMatrix::from_columns(&blocks, r)?;
    let surjection = LatticeMap::new(sum.lattice.clone(), m.clone(), total)
        .map_err(|e| construction(format!("cover map is not equivariant: {}", e)))?;
    let d = elementary_divisors(surjection.matrix())?;
    if d.len() != r || d.iter().any(|&x| x != 1) {
        return Err(construction("cover map is not surjective over Z"));
    }
    let (q, inclusion) = kernel(&surjection)?;
    let q_verdict = is_coflasque(ctx, &q)?;
    if !q_verdict.holds {
        return Err(construction("kernel of the cover is not coflasque"));
    }
    Ok(CoflasqueCover {
        p: sum.lattice,
        q,
        surjection,
        inclusion,
        summands,
        q_verdict,
    })
}

/// Permutation verdict for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum PermutationVerdict {
    Certified { basis: Vec<Vec<i64>> },
    Refuted { reason: String },
    Unknown,
}

impl From<PermutationSearch> for PermutationVerdict {
    fn from(s: PermutationSearch) -> Self {
        match s {
            PermutationSearch::Certified(b) => PermutationVerdict::Certified { basis: b.to_rows() },
            PermutationSearch::Refuted(reason) => PermutationVerdict::Refuted { reason },
            PermutationSearch::Unknown => PermutationVerdict::Unknown,
        }
    }
}

/// Full classification of one lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub label: String,
    pub group_order: usize,
    pub rank: usize,
    pub flasque: Verdict,
    pub coflasque: Verdict,
    pub permutation: PermutationVerdict,
}

pub fn classify(ctx: &Context<'_>, m: &GammaLattice, effort: usize) -> Result<Classification> {
    let flasque = is_flasque(ctx, m)?;
    let coflasque = is_coflasque(ctx, m)?;
    let permutation = if !flasque.holds || !coflasque.holds {
        let which = if coflasque.holds { "not flasque" } else { "not coflasque" };
        PermutationVerdict::Refuted { reason: which.into() }
    } else {
        search_permutation_basis(ctx, m, effort)?.into()
    };
    Ok(Classification {
        label: m.label().into(),
        group_order: m.group().order(),
        rank: m.rank(),
        flasque,
        coflasque,
        permutation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::lattice::{esempio_phi, regular_lattice, trivial_lattice};

    fn ctx() -> Context<'static> {
        Context::default()
    }

    #[test]
    fn trivial_and_permutation_lattices() {
        let g = FiniteGroup::abelian(&[2, 2]).unwrap();
        let z = trivial_lattice(&g, 1);
        assert!(is_coflasque(&ctx(), &z).unwrap().holds);
        assert!(is_flasque(&ctx(), &z).unwrap().holds);
        let p = permutation_lattice(&g, &Subgroup::generated_by(&g, &[1]).unwrap()).unwrap();
        let v = is_coflasque(&ctx(), &p).unwrap();
        assert!(v.holds);
        assert_eq!(v.checked_subgroups, 5);
        assert!(certify_permutation(&p, &IntMatrix::identity(2)).unwrap());
    }

    #[test]
    fn esempio_kernel_is_not_flasque_but_dual_is() {
        let g = FiniteGroup::abelian(&[2, 2]).unwrap();
        let (k, _) = kernel(&esempio_phi(&g).unwrap()).unwrap();
        let f = dual(&k);
        assert!(is_flasque(&ctx(), &f).unwrap().holds);
        let co = is_coflasque(&ctx(), &f).unwrap();
        assert!(!co.holds);
        assert_eq!(co.witnesses[0].order, 4);
        assert_eq!(co.witnesses[0].invariant_factors, vec![2]);
        assert!(matches!(search_permutation_basis(&ctx(), &f, 100).unwrap(), PermutationSearch::Refuted(_)));
    }

    #[test]
    fn sign_flip_breaks_certificate() {
        let g = FiniteGroup::abelian(&[2]).unwrap();
        let r = regular_lattice(&g);
        let b = IntMatrix::from_rows(&[vec![1, 0], vec![0, -1]], 2).unwrap();
        assert!(!certify_permutation(&r, &b).unwrap());
        let bad = IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]], 2).unwrap();
        assert!(certify_permutation(&r, &bad).is_err());
    }

    #[test]
    fn search_finds_hidden_permutation_basis() {
        let g = FiniteGroup::abelian(&[3]).unwrap();
        let r = regular_lattice(&g);
        let b = IntMatrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]], 3).unwrap();
        let hidden = r.change_basis(&b).unwrap();
        assert!(!hidden.actions().iter().all(IntMatrix::is_permutation));
        match search_permutation_basis(&ctx(), &hidden, DEFAULT_SEARCH_EFFORT).unwrap() {
            PermutationSearch::Certified(c) => assert!(certify_permutation(&hidden, &c).unwrap()),
            other => panic!("expected a certificate, got {:?}", other),
        }
    }

    #[test]
    fn cover_of_trivial_and_augmentation_dual() {
        let g = FiniteGroup::abelian(&[2, 2]).unwrap();
        let c = coflasque_cover(&ctx(), &trivial_lattice(&g, 1)).unwrap();
        assert!(c.inclusion.then(&c.surjection).unwrap().is_zero());
        assert_eq!(c.p.rank(), c.q.rank() + 1);
        let (k, _) = kernel(&esempio_phi(&g).unwrap()).unwrap();
        let c = coflasque_cover(&ctx(), &k).unwrap();
        assert!(c.q_verdict.holds);
    }
}
