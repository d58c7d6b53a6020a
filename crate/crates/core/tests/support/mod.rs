//! Randomized instances, an independent cohomology oracle and the property
//! checks shared by the core property tests and the acceptance target.

#![allow(dead_code)]

use flasque_core::classify::{certify_permutation, is_coflasque, is_flasque, search_permutation_basis, PermutationSearch};
use flasque_core::cohomology::{cohomology, restriction, CochainComplexSlice};
use flasque_core::group::all_subgroups;
use flasque_core::lattice::{
    augmentation, coinduce, direct_sum, dual, kernel, permutation_lattice, restrict, trivial_lattice,
};
use flasque_core::symbols::UnitLattice;
use flasque_core::{Context, FiniteGroup, GammaLattice, IntMatrix, Subgroup};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

pub const CASES: u32 = 100;
pub const MAX_ORDER: usize = 16;
pub const MAX_RANK: usize = 8;

// ---------------------------------------------------------------------------
// Groups

fn from_perms(gens: &[Vec<usize>], label: &str) -> FiniteGroup {
    let n = gens[0].len();
    let id: Vec<usize> = (0..n).collect();
    let compose = |a: &[usize], b: &[usize]| -> Vec<usize> { (0..n).map(|i| a[b[i]]).collect() };
    let mut els = vec![id];
    let mut k = 0;
    while k < els.len() {
        for g in gens {
            let x = compose(&els[k], g);
            if !els.contains(&x) {
                els.push(x);
            }
        }
        k += 1;
    }
    els.sort();
    let table: Vec<Vec<usize>> = els
        .iter()
        .map(|a| els.iter().map(|b| els.binary_search(&compose(a, b)).unwrap()).collect())
        .collect();
    FiniteGroup::from_table(&table, None, label).unwrap()
}

pub fn dihedral(n: usize) -> FiniteGroup {
    let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
    from_perms(&[rot, refl], &format!("D{}", n))
}

pub fn quaternion() -> FiniteGroup {
    // Units 1, i, j, k as 0..4 and a sign bit; element = 4 * sign + unit.
    const UNIT: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    let table: Vec<Vec<usize>> = (0..8)
        .map(|a| {
            (0..8)
                .map(|b| {
                    let (s, u) = UNIT[a % 4][b % 4];
                    4 * ((s + a / 4 + b / 4) % 2) + u
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table(&table, None, "Q8").unwrap()
}

pub fn alternating4() -> FiniteGroup {
    from_perms(&[vec![1, 2, 0, 3], vec![1, 0, 3, 2]], "A4")
}

/// Every group in the catalog, smallest first.
pub fn catalog() -> Vec<FiniteGroup> {
    let abelian: &[&[usize]] = &[
        &[],
        &[2],
        &[3],
        &[4],
        &[2, 2],
        &[5],
        &[6],
        &[7],
        &[8],
        &[2, 4],
        &[2, 2, 2],
        &[9],
        &[3, 3],
        &[10],
        &[12],
        &[2, 6],
        &[16],
        &[4, 4],
        &[2, 2, 4],
        &[2, 2, 2, 2],
    ];
    let mut out: Vec<FiniteGroup> = abelian.iter().map(|o| FiniteGroup::abelian(o).unwrap()).collect();
    out.extend([3, 4, 5, 6, 7, 8].iter().map(|&n| dihedral(n)));
    out.push(quaternion());
    out.push(alternating4());
    out.sort_by_key(FiniteGroup::order);
    out
}

// ---------------------------------------------------------------------------
// Lattices

/// Recipe for a random lattice: a group, up to four pieces and a basis
/// scramble. Built pieces that would exceed the rank cap are dropped.
#[derive(Clone, Debug)]
pub struct Recipe {
    pub group: usize,
    pub pieces: Vec<(u8, usize)>,
    pub scramble: Vec<(usize, usize, bool)>,
}

pub fn recipe(max_order: usize) -> impl Strategy<Value = Recipe> {
    let n = catalog().iter().filter(|g| g.order() <= max_order).count();
    (
        0..n,
        prop::collection::vec((0u8..4, any::<usize>()), 1..4),
        prop::collection::vec((any::<usize>(), any::<usize>(), any::<bool>()), 0..6),
    )
        .prop_map(|(group, pieces, scramble)| Recipe { group, pieces, scramble })
}

fn pick_subgroup(g: &FiniteGroup, seed: usize, max_index: usize) -> Option<Subgroup> {
    let subs: Vec<Subgroup> = all_subgroups(g)
        .unwrap()
        .into_iter()
        .filter(|h| g.order() / h.order() <= max_index)
        .collect();
    if subs.is_empty() {
        None
    } else {
        Some(subs[seed % subs.len()].clone())
    }
}

/// One piece over `g` of rank at most `room`.
pub fn piece(g: &FiniteGroup, kind: u8, seed: usize, room: usize) -> Option<GammaLattice> {
    match kind {
        0 => Some(trivial_lattice(g, 1)),
        1 => permutation_lattice(g, &pick_subgroup(g, seed, room)?).ok(),
        k => {
            let h = pick_subgroup(g, seed, room + 1)?;
            if h.is_full() {
                return None;
            }
            let eps = augmentation(g, &h).ok()?;
            let i = kernel(&eps).ok()?.0;
            Some(if k == 2 { i } else { dual(&i) })
        }
    }
}

pub fn scramble_matrix(rank: usize, ops: &[(usize, usize, bool)]) -> IntMatrix {
    let mut b = IntMatrix::identity(rank);
    if rank < 2 {
        return b;
    }
    for &(i, j, neg) in ops {
        let (i, j) = (i % rank, j % rank);
        if i == j {
            continue;
        }
        // Column operation: col_i += c * col_j.
        let c = if neg { -1 } else { 1 };
        for r in 0..rank {
            b[(r, i)] += c * b[(r, j)];
        }
    }
    b
}

pub fn build_over(g: &FiniteGroup, r: &Recipe, max_rank: usize) -> GammaLattice {
    let mut parts = Vec::new();
    let mut used = 0;
    for &(kind, seed) in &r.pieces {
        if let Some(p) = piece(g, kind, seed, max_rank - used) {
            if used + p.rank() <= max_rank && p.rank() > 0 {
                used += p.rank();
                parts.push(p);
            }
        }
    }
    if parts.is_empty() {
        parts.push(trivial_lattice(g, 1));
    }
    let m = direct_sum(&parts).unwrap().lattice;
    let b = scramble_matrix(m.rank(), &r.scramble);
    m.change_basis(&b).unwrap().with_label("random")
}

pub fn build(r: &Recipe, max_order: usize, max_rank: usize) -> GammaLattice {
    let groups: Vec<FiniteGroup> = catalog().into_iter().filter(|g| g.order() <= max_order).collect();
    build_over(&groups[r.group % groups.len()], r, max_rank)
}

// ---------------------------------------------------------------------------
// Independent oracle: dense unnormalized bar complex and a naive Smith form.

fn rho(m: &GammaLattice, g: usize) -> Vec<Vec<i128>> {
    m.action(g).to_rows().into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect()
}

/// Dense `d^k: C^k -> C^{k+1}` on all functions `G^k -> M`.
/// Tuples are indexed with the last coordinate fastest.
pub fn dense_coboundary(m: &GammaLattice, k: usize) -> Vec<Vec<i128>> {
    let g = m.group();
    let n = g.order();
    let r = m.rank();
    let cols = n.pow(k as u32) * r;
    let rows = n.pow(k as u32 + 1) * r;
    let mut d = vec![vec![0i128; cols]; rows];
    let index = |t: &[usize]| t.iter().fold(0, |acc, &x| acc * n + x);
    for t in 0..n.pow(k as u32 + 1) {
        let mut tuple = vec![0; k + 1];
        let mut x = t;
        for slot in tuple.iter_mut().rev() {
            *slot = x % n;
            x /= n;
        }
        let act = rho(m, tuple[0]);
        let head = index(&tuple[1..]);
        for a in 0..r {
            let row = t * r + a;
            for b in 0..r {
                d[row][head * r + b] += act[a][b];
            }
            for i in 0..k {
                let mut merged = tuple[..i].to_vec();
                merged.push(g.mul(tuple[i], tuple[i + 1]));
                merged.extend_from_slice(&tuple[i + 2..]);
                let sign = if i % 2 == 0 { -1 } else { 1 };
                d[row][index(&merged) * r + a] += sign;
            }
            let sign = if k.is_multiple_of(2) { -1 } else { 1 };
            d[row][index(&tuple[..k]) * r + a] += sign;
        }
    }
    d
}

/// Non-zero diagonal of a Smith form, each dividing the next.
pub fn naive_smith(mut a: Vec<Vec<i128>>) -> Vec<i128> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            let q = a[i][t] / a[t][t];
            if q != 0 {
                for j in t..cols {
                    a[i][j] -= q * a[t][j];
                }
            }
            clean &= a[i][t] == 0;
        }
        for j in t + 1..cols {
            let q = a[t][j] / a[t][t];
            if q != 0 {
                for i in t..rows {
                    a[i][j] -= q * a[i][t];
                }
            }
            clean &= a[t][j] == 0;
        }
        if !clean {
            continue;
        }
        let p = a[t][t];
        if let Some(i) = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0)) {
            for j in t..cols {
                let v = a[i][j];
                a[t][j] += v;
            }
            continue;
        }
        diag.push(p.abs());
        t += 1;
    }
    diag
}

/// `(torsion, free rank)` of `H^n(G, M)` for `n >= 1`.
pub fn oracle_cohomology(m: &GammaLattice, n: usize) -> (Vec<i64>, usize) {
    let inb = naive_smith(dense_coboundary(m, n - 1));
    let out = naive_smith(dense_coboundary(m, n));
    let dim = m.group().order().pow(n as u32) * m.rank();
    let torsion = inb.iter().filter(|&&d| d > 1).map(|&d| d as i64).collect();
    (torsion, dim - inb.len() - out.len())
}

// ---------------------------------------------------------------------------
// Properties

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn run<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    runner(cases).run(&strategy, test).map_err(|e| e.to_string())
}

fn fail<E: core::fmt::Display>(e: E) -> TestCaseError {
    TestCaseError::fail(e.to_string())
}

pub fn coboundary_squares_to_zero(cases: u32) -> Result<(), String> {
    let ctx = Context::default();
    run(cases, (recipe(MAX_ORDER), 1usize..3), |(r, n)| {
        let m = build(&r, MAX_ORDER, MAX_RANK);
        let n = if m.group().order() > 8 { 1 } else { n };
        let slice = CochainComplexSlice::new(&ctx, &m, n).map_err(fail)?;
        prop_assert!(slice.is_complex().map_err(fail)?, "d^{} d^{} != 0 over {}", n, n - 1, m.group().label());
        Ok(())
    })
}

pub fn shapiro(cases: u32) -> Result<(), String> {
    let ctx = Context::default();
    run(cases, (recipe(MAX_ORDER), any::<usize>(), 1usize..3), |(r, hseed, n)| {
        let groups: Vec<FiniteGroup> = catalog().into_iter().filter(|g| g.order() <= MAX_ORDER).collect();
        let g = &groups[r.group % groups.len()];
        let h = pick_subgroup(g, hseed, MAX_RANK).unwrap();
        let index = g.order() / h.order();
        let local = h.to_group();
        let m = build_over(&local, &r, (MAX_RANK / index).max(1));
        let co = coinduce(&h, &m, g).map_err(fail)?;
        let top = cohomology(&ctx, &co, n).map_err(fail)?;
        let bottom = cohomology(&ctx, &m, n).map_err(fail)?;
        prop_assert_eq!(top.invariant_factors(), bottom.invariant_factors());
        Ok(())
    })
}

pub fn dual_involution(cases: u32) -> Result<(), String> {
    run(cases, recipe(MAX_ORDER), |r| {
        let m = build(&r, MAX_ORDER, MAX_RANK);
        prop_assert_eq!(dual(&dual(&m)), m);
        Ok(())
    })
}

pub fn restriction_functorial(cases: u32) -> Result<(), String> {
    let ctx = Context::default();
    run(
        cases,
        (recipe(MAX_ORDER), any::<usize>(), any::<usize>(), prop::collection::vec(-3i64..4, 16), 1usize..3),
        |(r, s1, s2, coords, n)| {
            let m = build(&r, MAX_ORDER, MAX_RANK);
            let n = if m.group().order() > 8 { 1 } else { n };
            let g = m.group().clone();
            let h = pick_subgroup(&g, s1, usize::MAX).unwrap();
            let subs: Vec<Subgroup> = all_subgroups(&g).unwrap().into_iter().filter(|k| k.is_subgroup_of(&h)).collect();
            let hp = subs[s2 % subs.len()].clone();
            let hg = cohomology(&ctx, &m, n).map_err(fail)?;
            let k = hg.invariant_factors().len();
            prop_assume!(k <= coords.len());
            let c = hg.class_from_coordinates(&coords[..k]).map_err(fail)?;
            let direct = restriction(&ctx, &c, &hp).map_err(fail)?;
            let mid = restriction(&ctx, &c, &h).map_err(fail)?;
            let hp_local = h.localize(&hp, mid.parent().group()).map_err(fail)?;
            let two_step = restriction(&ctx, &mid, &hp_local).map_err(fail)?;
            prop_assert_eq!(direct.coordinates(), two_step.coordinates());
            prop_assert_eq!(direct.parent().invariant_factors(), two_step.parent().invariant_factors());
            Ok(())
        },
    )
}

pub fn cyclic_h2_of_z() -> Result<(), String> {
    let ctx = Context::default();
    for n in 2..=6 {
        let g = FiniteGroup::abelian(&[n]).unwrap();
        let z = trivial_lattice(&g, 1);
        let h = cohomology(&ctx, &z, 2).map_err(|e| e.to_string())?;
        let oracle = oracle_cohomology(&z, 2);
        if oracle != (vec![n as i64], 0) {
            return Err(format!("oracle gives {:?} for Z/{}", oracle, n));
        }
        if h.torsion_factors() != oracle.0 || h.rank_free_part() != oracle.1 {
            return Err(format!("H^2(Z/{}, Z) = {:?}, oracle {:?}", n, h.invariant_factors(), oracle));
        }
    }
    Ok(())
}

pub fn matches_oracle(cases: u32) -> Result<(), String> {
    let ctx = Context::default();
    run(cases, (recipe(6), 1usize..3), |(r, n)| {
        let m = build(&r, 6, if n == 1 { 4 } else { 3 });
        let h = cohomology(&ctx, &m, n).map_err(fail)?;
        let oracle = oracle_cohomology(&m, n);
        prop_assert_eq!((h.torsion_factors(), h.rank_free_part()), oracle);
        Ok(())
    })
}

/// Direct sums of permutation lattices in a scrambled basis.
pub fn permutation_certificates(cases: u32) -> Result<(), String> {
    let ctx = Context::default();
    run(cases, (recipe(MAX_ORDER), 0u8..2), |(mut r, search)| {
        for p in &mut r.pieces {
            p.0 = p.0.min(1);
        }
        let groups: Vec<FiniteGroup> = catalog().into_iter().filter(|g| g.order() <= MAX_ORDER).collect();
        let g = &groups[r.group % groups.len()];
        let unscrambled = Recipe { scramble: Vec::new(), ..r.clone() };
        let plain = build_over(g, &unscrambled, MAX_RANK);
        let b = scramble_matrix(plain.rank(), &r.scramble);
        let m = plain.change_basis(&b).map_err(fail)?;
        let basis = if search == 0 {
            // The scramble undoes itself: columns of b^{-1} in new coordinates.
            flasque_core::normal_form::unimodular_inverse(&b).map_err(fail)?.unwrap()
        } else {
            match search_permutation_basis(&ctx, &m, 2_000).map_err(fail)? {
                PermutationSearch::Certified(basis) => basis,
                _ => return Ok(()),
            }
        };
        prop_assert!(certify_permutation(&m, &basis).map_err(fail)?);
        prop_assert!(is_flasque(&ctx, &m).map_err(fail)?.holds);
        prop_assert!(is_coflasque(&ctx, &m).map_err(fail)?.holds);
        Ok(())
    })
}

pub fn direct_sum_coflasque(cases: u32) -> Result<(), String> {
    let ctx = Context::default();
    run(cases, (recipe(MAX_ORDER), recipe(MAX_ORDER)), |(a, mut b)| {
        b.group = a.group;
        let x = build(&a, MAX_ORDER, MAX_RANK / 2);
        let y = build(&b, MAX_ORDER, MAX_RANK / 2);
        let s = direct_sum(&[x.clone(), y.clone()]).map_err(fail)?.lattice;
        let both = is_coflasque(&ctx, &x).map_err(fail)?.holds && is_coflasque(&ctx, &y).map_err(fail)?.holds;
        prop_assert_eq!(is_coflasque(&ctx, &s).map_err(fail)?.holds, both);
        Ok(())
    })
}

pub fn wedge_relations(cases: u32) -> Result<(), String> {
    let vec4 = || prop::collection::vec(-6i64..7, 4);
    run(cases, (prop::sample::select(vec![2i64, 3, 5, 7]), vec4(), vec4(), vec4()), |(p, u, v, w)| {
        let base = UnitLattice::base(&["a", "b", "c", "d"], p).map_err(fail)?;
        let s = |x: &[i64], y: &[i64]| base.symbol(x, y).unwrap();
        prop_assert!(s(&u, &u).is_zero());
        prop_assert!(s(&u, &v).add(&s(&v, &u)).map_err(fail)?.is_zero());
        let uw: Vec<i64> = u.iter().zip(&w).map(|(a, b)| a + b).collect();
        prop_assert_eq!(s(&uw, &v), s(&u, &v).add(&s(&w, &v)).map_err(fail)?);
        let pu: Vec<i64> = u.iter().map(|a| p * a).collect();
        prop_assert!(s(&pu, &v).is_zero());
        if !base.is_p_divisible(&u).map_err(fail)? {
            let ext = base.adjoin_radical(&u, "r").map_err(fail)?;
            let t = base.induced_map(&ext).map_err(fail)?;
            prop_assert!(s(&u, &v).push_forward(&t).map_err(fail)?.is_zero());
        }
        Ok(())
    })
}

fn e<T>(r: flasque_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// `H^1(D4, Z) = 0`, `H^2(D4, Z) = (Z/2)^2`, and `H^1` of the sign
/// lattices against the oracle.
pub fn dihedral4_table() -> Result<(), String> {
    let ctx = Context::default();
    let g = dihedral(4);
    let z = trivial_lattice(&g, 1);
    let h1 = e(cohomology(&ctx, &z, 1))?;
    let h2 = e(cohomology(&ctx, &z, 2))?;
    if !h1.is_trivial() || h2.invariant_factors() != [2, 2] {
        return Err(format!("H^1 = {:?}, H^2 = {:?}", h1.invariant_factors(), h2.invariant_factors()));
    }
    for h in e(all_subgroups(&g))?.into_iter().filter(|h| h.order() == 4) {
        let sign = e(kernel(&e(augmentation(&g, &h))?))?.0;
        let ours = e(cohomology(&ctx, &sign, 1))?;
        let oracle = oracle_cohomology(&sign, 1);
        if (ours.torsion_factors(), ours.rank_free_part()) != oracle || oracle.0 != [2] {
            return Err(format!("H^1(D4, sign) = {:?}, oracle {:?}", ours.invariant_factors(), oracle));
        }
        let res = e(restrict(&sign, &h))?;
        if !res.is_trivial_action() {
            return Err("sign lattice is not trivial on its kernel".into());
        }
    }
    Ok(())
}
