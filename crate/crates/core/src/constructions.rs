//! Builders for the explicit lattices and classes, each with a report of
//! the checks it ran.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use serde::Serialize;

use crate::classify::{is_coflasque, is_flasque, Verdict};
use crate::cohomology::{
    cohomology, element_of_order, restriction, restriction_is_injective, splitting_index, CohomologyClass, CohomologyGroup,
};
use crate::error::{construction, invalid, Error, Result};
use crate::exec::Context;
use crate::group::{all_subgroups_bounded, maximal_subgroups_bounded, FiniteGroup, Subgroup};
use crate::lattice::{
    augmentation, coinduce, cokernel_torsion_free, direct_sum, dual, esempio_phi, kernel, permutation_lattice, regular_lattice,
    transport, trivial_lattice, GammaLattice, LatticeMap,
};
use crate::matrix::IntMatrix;
use crate::normal_form::{hermite_rows, is_prime};
use crate::symbols::{minus_one_is_harmless_p2, verify_annullamento, verify_annullamento_p2_with_i, SymbolReport};

/// A report parameter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Param {
    Int(i64),
    Text(String),
}

/// One verified property.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Machine-checkable outcome of a builder. Maps are ordered, so the
/// serialized form is canonical.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub construction: String,
    pub parameters: BTreeMap<String, Param>,
    pub ranks: BTreeMap<String, usize>,
    pub invariant_factors: BTreeMap<String, Vec<i64>>,
    pub verdicts: BTreeMap<String, Verdict>,
    /// Named lists of subgroups, each given by its sorted elements.
    pub witnesses: BTreeMap<String, Vec<Vec<usize>>>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symbols: Option<SymbolReport>,
    /// Wall-clock seconds per phase; filled in by callers that can measure.
    pub timings: Option<BTreeMap<String, f64>>,
}

impl Report {
    pub fn new(construction: &str) -> Report {
        Report {
            construction: construction.to_string(),
            parameters: BTreeMap::new(),
            ranks: BTreeMap::new(),
            invariant_factors: BTreeMap::new(),
            verdicts: BTreeMap::new(),
            witnesses: BTreeMap::new(),
            checks: Vec::new(),
            symbols: None,
            timings: None,
        }
    }

    pub fn param(&mut self, k: &str, v: Param) {
        self.parameters.insert(k.into(), v);
    }

    pub fn rank(&mut self, k: &str, r: usize) {
        self.ranks.insert(k.into(), r);
    }

    pub fn factors(&mut self, k: &str, f: &[i64]) {
        self.invariant_factors.insert(k.into(), f.to_vec());
    }

    pub fn verdict(&mut self, k: &str, v: Verdict) {
        self.verdicts.insert(k.into(), v);
    }

    pub fn subgroups(&mut self, k: &str, s: &[Subgroup]) {
        self.witnesses.insert(k.into(), s.iter().map(|x| x.elements().to_vec()).collect());
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_checks(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    /// `Err(LemmaViolation)` naming the failed checks, if any.
    pub fn ensure_passed(&self) -> Result<()> {
        let failed: Vec<&str> = self.failed_checks().iter().map(|c| c.name.as_str()).collect();
        if failed.is_empty() {
            Ok(())
        } else {
            Err(Error::LemmaViolation(format!("{}: failed checks {}", self.construction, failed.join(", "))))
        }
    }
}

fn require_prime(p: usize) -> Result<()> {
    if is_prime(p as u64) {
        Ok(())
    } else {
        Err(invalid(format!("{} is not prime", p)))
    }
}

/// Hermite basis of the column span.
fn span(m: &IntMatrix) -> Result<IntMatrix> {
    hermite_rows(&m.transpose())
}

fn full_sweep(v: &Verdict) -> String {
    format!("{} of {} subgroups", v.checked_subgroups, v.total_subgroups)
}

/// The lattice `F~` over `L = (Z/p)^2`.
#[derive(Clone, Debug)]
pub struct Esempio {
    pub group: FiniteGroup,
    pub phi: LatticeMap,
    /// `ker(phi)`.
    pub f_tilde_0: GammaLattice,
    /// `dual(ker(phi))`.
    pub f_tilde: GammaLattice,
    pub h1: Arc<CohomologyGroup>,
    pub report: Report,
}

/// `0 -> F~0 -> Z[L]^2 -> Z[L] -> Z -> 0` with `F~ = dual(F~0)`.
pub fn build_esempio(ctx: &Context<'_>, p: usize) -> Result<Esempio> {
    require_prime(p)?;
    let g = FiniteGroup::abelian(&[p, p])?;
    let mut report = Report::new("esempio");
    report.param("p", Param::Int(p as i64));
    report.param("group", Param::Text(format!("(Z/{})^2", p)));

    let phi = esempio_phi(&g)?;
    let eps = augmentation(&g, &Subgroup::trivial(&g))?;
    let (_, ideal) = kernel(&eps)?;
    let exact = span(phi.matrix())? == span(ideal.matrix())?;
    report.check("image_phi_equals_kernel_eps", exact, "equal Hermite bases");

    let (f0, _) = kernel(&phi)?;
    let f0 = f0.with_label("F~0");
    let f = dual(&f0).with_label("F~");
    let n = g.order();
    report.rank("Z[L]^2", 2 * n);
    report.rank("F~", f.rank());
    report.check(
        "rank",
        f.rank() == 2 * n - (n - 1),
        format!("rank {} = 2|L| - (|L| - 1)", f.rank()),
    );

    let fl = is_flasque(ctx, &f)?;
    report.check("F~_flasque", fl.holds, full_sweep(&fl));
    report.verdict("F~_flasque", fl);
    let co = is_coflasque(ctx, &f)?;
    report.verdict("F~_coflasque", co);

    let h1 = cohomology(ctx, &f, 1)?;
    report.factors("H1(L,F~)", h1.invariant_factors());
    report.check("H1_is_Z/p", h1.invariant_factors() == [p as i64], format!("{:?}", h1.invariant_factors()));
    let h3 = cohomology(ctx, &trivial_lattice(&g, 1), 3)?;
    report.factors("H3(L,Z)", h3.invariant_factors());
    report.check("H3_is_Z/p", h3.invariant_factors() == [p as i64], format!("{:?}", h3.invariant_factors()));

    if !h1.is_trivial() {
        let z = h1.generator(0)?;
        let subs = all_subgroups_bounded(&g, ctx.subgroup_bound)?;
        let rest = ctx.map(&subs, |s| restriction(ctx, &z, s).map(|r| r.is_zero()));
        let mut vanish = Vec::new();
        for (s, r) in subs.iter().zip(rest) {
            if r? {
                vanish.push(s.clone());
            }
        }
        report.subgroups("H1_generator_vanishes_on", &vanish);
    }

    Ok(Esempio {
        group: g,
        phi,
        f_tilde_0: f0,
        f_tilde: f,
        h1,
        report,
    })
}

/// First two independent elements of a rank-two elementary abelian
/// subgroup, in enumeration order.
fn plane_basis(s: &Subgroup) -> Result<(usize, usize)> {
    let g = s.parent();
    let a = *s
        .elements()
        .iter()
        .find(|&&x| x != g.identity())
        .ok_or_else(|| construction("trivial subgroup"))?;
    let line = g.closure(&[a]);
    let b = *s
        .elements()
        .iter()
        .find(|x| line.binary_search(x).is_err())
        .ok_or_else(|| construction("subgroup is cyclic"))?;
    Ok((a, b))
}

/// `F^ = sum_i CoInd_{L_i}^G(F~)` over the maximal subgroups of
/// `G = (Z/p)^3`, and the class `z = (z_i)`.
#[derive(Clone, Debug)]
pub struct FlasqueWithZ {
    pub group: FiniteGroup,
    pub maximal: Vec<Subgroup>,
    pub summands: Vec<GammaLattice>,
    pub f_hat: GammaLattice,
    pub z: CohomologyClass,
    pub report: Report,
}

pub fn build_flasque_with_z(ctx: &Context<'_>, p: usize) -> Result<FlasqueWithZ> {
    require_prime(p)?;
    let esempio = build_esempio(ctx, p)?;
    let std = &esempio.group;
    let g = FiniteGroup::abelian(&[p, p, p])?;
    let mut report = Report::new("flasque-z");
    report.param("p", Param::Int(p as i64));
    report.param("group", Param::Text(format!("(Z/{})^3", p)));
    report.rank("F~", esempio.f_tilde.rank());

    let maximal = maximal_subgroups_bounded(&g, ctx.subgroup_bound)?;
    report.subgroups("maximal_subgroups", &maximal);
    let non_cyclic = maximal.iter().all(|s| !s.is_cyclic());
    report.check(
        "maximal_subgroups_non_cyclic",
        non_cyclic,
        format!("{} maximal subgroups", maximal.len()),
    );
    if !non_cyclic {
        return Err(construction("a maximal subgroup is cyclic"));
    }

    let summands = maximal
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let (a, b) = plane_basis(s)?;
            let local = s.to_group();
            let iso: Vec<usize> = std
                .elements()
                .map(|e| {
                    let (x, y) = (e % p, e / p);
                    let parent = g.mul(g.power(a, x), g.power(b, y));
                    s.local_index(parent).expect("element of the subgroup")
                })
                .collect();
            let fi = transport(&esempio.f_tilde, &local, &iso)?;
            Ok(coinduce(s, &fi, &g)?.with_label(&format!("CoInd(F~_{})", i)))
        })
        .collect::<Result<Vec<_>>>()?;
    let sum = direct_sum(&summands)?;
    let f_hat = sum.lattice.clone().with_label("F^");
    report.rank("CoInd(F~_i)", summands.first().map_or(0, |s| s.rank()));
    report.rank("F^", f_hat.rank());

    // z_i of order p in each H^1(G, F^_i), assembled blockwise.
    let h1s: Vec<Arc<CohomologyGroup>> = ctx
        .map(&summands, |s| cohomology(ctx, s, 1))
        .into_iter()
        .collect::<Result<_>>()?;
    let zs = h1s
        .iter()
        .map(|h| element_of_order(h, p as i64).map_err(|_| construction("no element of order p in a summand")))
        .collect::<Result<Vec<_>>>()?;
    for (i, h) in h1s.iter().enumerate() {
        report.factors(&format!("H1(G,F^_{})", i), h.invariant_factors());
    }
    let total_rank = f_hat.rank();
    let tuples = g.order() - 1;
    let mut rep = vec![0i64; tuples * total_rank];
    for ((zi, off), s) in zs.iter().zip(&sum.offsets).zip(&summands) {
        let r = s.rank();
        for t in 0..tuples {
            rep[t * total_rank + off..t * total_rank + off + r].copy_from_slice(&zi.representative()[t * r..(t + 1) * r]);
        }
    }
    let h1 = cohomology(ctx, &f_hat, 1)?;
    report.factors("H1(G,F^)", h1.invariant_factors());
    let z = h1.class_of(ctx, &rep)?;

    let fl = is_flasque(ctx, &f_hat)?;
    report.check("F^_flasque", fl.holds, full_sweep(&fl));
    report.verdict("F^_flasque", fl);
    report.check("order_z", z.order() == p as i64, format!("order {}", z.order()));

    let res = ctx.map(&maximal, |s| restriction(ctx, &z, s).map(|r| !r.is_zero()));
    let res = res.into_iter().collect::<Result<Vec<bool>>>()?;
    let nonzero = res.iter().filter(|&&b| b).count();
    report.check(
        "restriction_z_nonzero_on_maximal",
        nonzero == maximal.len(),
        format!("{} of {}", nonzero, maximal.len()),
    );

    let inj = ctx.map(&(0..summands.len()).collect::<Vec<_>>(), |&i| {
        let injective = restriction_is_injective(ctx, &h1s[i], &maximal[i])?;
        let component = !restriction(ctx, &zs[i], &maximal[i])?.is_zero();
        Ok::<_, Error>(injective && component)
    });
    let inj = inj.into_iter().collect::<Result<Vec<bool>>>()?;
    let ok = inj.iter().filter(|&&b| b).count();
    report.check(
        "restriction_injective_on_summands",
        ok == summands.len(),
        format!("{} of {}", ok, summands.len()),
    );

    Ok(FlasqueWithZ {
        group: g,
        maximal,
        summands,
        f_hat,
        z,
        report,
    })
}

/// Splitting-index check for the class `z` of [`build_flasque_with_z`].
pub fn verify_splitting_exceeds_p(ctx: &Context<'_>, built: &FlasqueWithZ) -> Result<Report> {
    let p = built.group.exponent();
    let g = &built.group;
    let mut report = Report::new("split-index");
    report.param("p", Param::Int(p as i64));
    let s = splitting_index(ctx, &built.z)?;
    report.param("gcd_index", Param::Int(s.gcd_index as i64));
    report.param("min_vanishing_index", Param::Int(s.min_vanishing_index as i64));
    report.subgroups("vanishing_subgroups", &s.vanishing_subgroups);
    report.check(
        "min_vanishing_index_at_least_p_squared",
        s.min_vanishing_index >= p * p,
        format!("min index {}", s.min_vanishing_index),
    );
    let index_p = s.vanishing_subgroups.iter().filter(|v| g.order() / v.order() == p).count();
    report.check("no_index_p_subgroup_vanishes", index_p == 0, format!("{} vanish", index_p));
    let zero = splitting_index(ctx, &built.z.parent().zero())?;
    report.check(
        "zero_class_control",
        zero.min_vanishing_index == 1 && zero.gcd_index == 1,
        format!("min index {}", zero.min_vanishing_index),
    );
    let consistent = s
        .vanishing_subgroups
        .iter()
        .map(|v| restriction(ctx, &built.z, v).map(|r| r.is_zero()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|b| b);
    report.check("vanishing_recomputed_zero", consistent, "");
    Ok(report)
}

/// `N = coker((D, psi): Z -> sum_L Z[G/L] + Q)` over the maximal subgroups.
#[derive(Clone, Debug)]
pub struct LemmaEsatta {
    pub map: LatticeMap,
    pub n: GammaLattice,
    pub report: Report,
}

pub fn build_lemma_esatta(ctx: &Context<'_>, q: &GammaLattice, psi: &LatticeMap) -> Result<LemmaEsatta> {
    let g = q.group();
    if Subgroup::full(g).is_cyclic() {
        return Err(invalid("the group must not be cyclic"));
    }
    if !g.is_abelian() {
        return Err(invalid("the group must be abelian"));
    }
    if psi.source().rank() != 1 || !psi.source().is_trivial_action() || psi.target() != q {
        return Err(invalid("psi must be a map from the trivial lattice Z to Q"));
    }
    let q_verdict = is_coflasque(ctx, q)?;
    if !q_verdict.holds {
        return Err(invalid("Q is not coflasque"));
    }
    let fam = maximal_subgroups_bounded(g, ctx.subgroup_bound)?;
    let mut parts: Vec<GammaLattice> = fam.iter().map(|s| permutation_lattice(g, s)).collect::<Result<_>>()?;
    parts.push(q.clone());
    let sum = direct_sum(&parts)?;
    let mut col = Vec::with_capacity(sum.lattice.rank());
    for s in &fam {
        col.extend(core::iter::repeat_n(1i64, g.order() / s.order()));
    }
    col.extend(psi.matrix().column(0));
    let f = LatticeMap::new(trivial_lattice(g, 1), sum.lattice.clone(), IntMatrix::from_columns(&[col], sum.lattice.rank())?)?;
    let (n, _) = cokernel_torsion_free(&f)?;
    let n = n.with_label("N");

    let mut report = Report::new("esatta");
    report.param("group_order", Param::Int(g.order() as i64));
    report.subgroups("family", &fam);
    report.rank("Q", q.rank());
    report.rank("sum", sum.lattice.rank());
    report.rank("N", n.rank());
    report.verdict("Q_coflasque", q_verdict);
    let v = is_coflasque(ctx, &n)?;
    report.check("N_coflasque", v.holds, full_sweep(&v));
    report.verdict("N_coflasque", v);
    Ok(LemmaEsatta { map: f, n, report })
}

/// The two presets over `(Z/2)^2`: `Q = Z[G]` with the norm map, or `Q = Z`
/// with multiplication by two.
pub fn lemma_esatta_preset(ctx: &Context<'_>, preset: &str) -> Result<LemmaEsatta> {
    let g = FiniteGroup::abelian(&[2, 2])?;
    let z = trivial_lattice(&g, 1);
    let (q, col) = match preset {
        "norm" => (regular_lattice(&g), vec![1i64; g.order()]),
        "p-mult" => (z.clone(), vec![2]),
        other => return Err(invalid(format!("unknown preset {:?} (expected norm or p-mult)", other))),
    };
    let psi = LatticeMap::new(z, q.clone(), IntMatrix::from_columns(&[col], q.rank())?)?;
    let mut out = build_lemma_esatta(ctx, &q, &psi)?;
    out.report.param("preset", Param::Text(preset.into()));
    let expected = if preset == "norm" { 9 } else { 6 };
    out.report
        .check("rank_N", out.n.rank() == expected, format!("rank {} (expected {})", out.n.rank(), expected));
    Ok(out)
}

/// `F^0 = coker((D, p): Z -> sum_i Z[G/L_i] + Z)` over `G = (Z/p)^2`, and
/// its dual `F^`.
#[derive(Clone, Debug)]
pub struct PropPiatto {
    pub f_hat_0: GammaLattice,
    pub f_hat: GammaLattice,
    pub report: Report,
}

pub fn build_prop_piatto(ctx: &Context<'_>, p: usize) -> Result<PropPiatto> {
    require_prime(p)?;
    if p > 5 {
        return Err(invalid("p must be at most 5"));
    }
    let g = FiniteGroup::abelian(&[p, p])?;
    let z = trivial_lattice(&g, 1);
    let psi = LatticeMap::new(z.clone(), z.clone(), IntMatrix::from_rows(&[vec![p as i64]], 1)?)?;
    let esatta = build_lemma_esatta(ctx, &z, &psi)?;
    let f0 = esatta.n.with_label("F^0");
    let f = dual(&f0).with_label("F^");

    let mut report = Report::new("piatto");
    report.param("p", Param::Int(p as i64));
    report.rank("F^0", f0.rank());
    report.check("rank", f0.rank() == p * (p + 1), format!("rank {} = p(p+1)", f0.rank()));
    let co = is_coflasque(ctx, &f0)?;
    report.check("F^0_coflasque", co.holds, full_sweep(&co));
    report.verdict("F^0_coflasque", co);
    let fl = is_flasque(ctx, &f)?;
    report.check("F^_flasque", fl.holds, full_sweep(&fl));
    report.verdict("F^_flasque", fl);
    let h1 = cohomology(ctx, &f, 1)?;
    report.factors("H1(G,F^)", h1.invariant_factors());
    Ok(PropPiatto {
        f_hat_0: f0,
        f_hat: f,
        report,
    })
}

/// Wedge-model check that `{b, t}` dies over every degree-`p`
/// subextension. `with_i` selects the `p = 2` variant with a fourth root of
/// unity.
pub fn annullamento_report(p: i64, with_i: bool) -> Result<Report> {
    let sym = if with_i {
        if p != 2 {
            return Err(invalid("the variant with i is only defined for p = 2"));
        }
        verify_annullamento_p2_with_i()?
    } else {
        verify_annullamento(p)?
    };
    let mut report = Report::new("annullamento");
    report.param("p", Param::Int(p));
    report.param("with_i", Param::Text(if with_i { "yes" } else { "no" }.into()));
    for pt in &sym.points {
        report.check(
            &format!("point_{}_{}", pt.point[0], pt.point[1]),
            pt.symbol_zero,
            pt.verdict.clone(),
        );
    }
    report.check("base_class_nonzero", sym.base_class_nonzero, sym.base_verdict.clone());
    if with_i {
        report.check("minus_one_symbol_zero", minus_one_is_harmless_p2()?, "-1 = 2 e_z");
    }
    report.symbols = Some(sym);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Context<'static> {
        Context::default()
    }

    #[test]
    fn esempio_p2() {
        let e = build_esempio(&ctx(), 2).unwrap();
        assert!(e.report.passed(), "{:?}", e.report.failed_checks());
        assert_eq!(e.f_tilde.rank(), 5);
        assert_eq!(e.h1.invariant_factors(), &[2]);
    }

    #[test]
    fn esatta_presets() {
        for (preset, rank) in [("norm", 9), ("p-mult", 6)] {
            let e = lemma_esatta_preset(&ctx(), preset).unwrap();
            assert_eq!(e.n.rank(), rank);
            assert!(e.report.passed());
        }
        assert!(lemma_esatta_preset(&ctx(), "other").is_err());
    }

    #[test]
    fn esatta_rejects_cyclic() {
        let g = FiniteGroup::abelian(&[4]).unwrap();
        let z = trivial_lattice(&g, 1);
        let psi = LatticeMap::new(z.clone(), z.clone(), IntMatrix::identity(1)).unwrap();
        assert!(matches!(build_lemma_esatta(&ctx(), &z, &psi), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn piatto_p2() {
        let r = build_prop_piatto(&ctx(), 2).unwrap();
        assert_eq!(r.f_hat_0.rank(), 6);
        assert!(r.report.passed());
        assert!(r.report.verdicts["F^0_coflasque"].witnesses.is_empty());
    }

    #[test]
    fn annullamento_reports() {
        assert!(annullamento_report(3, false).unwrap().passed());
        assert!(annullamento_report(2, true).unwrap().passed());
        assert!(annullamento_report(2, false).is_err());
        assert!(annullamento_report(3, true).is_err());
    }

    #[test]
    fn non_prime_is_rejected() {
        assert!(matches!(build_esempio(&ctx(), 4), Err(Error::InvalidInput(_))));
    }
}
