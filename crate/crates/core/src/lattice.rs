//! Γ-lattices: free Z-modules of finite rank with a unimodular action of a
//! finite group, together with equivariant maps and the standard
//! constructors (permutation lattices, duals, sums, restriction,
//! coinduction, kernels and split cokernels).

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{construction, invalid, Error, Result};
use crate::exec::CacheKey;
use crate::group::{FiniteGroup, RightCosets, Subgroup};
use crate::matrix::IntMatrix;
use crate::normal_form::{is_unimodular, kernel_basis, left_inverse, split_cokernel, unimodular_inverse};

/// A Γ-lattice. Matrices act on column vectors and
/// `action(g) * action(h) = action(g*h)`.
#[derive(Clone, Debug)]
pub struct GammaLattice {
    group: FiniteGroup,
    rank: usize,
    actions: Arc<Vec<IntMatrix>>,
    label: String,
}

impl PartialEq for GammaLattice {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.rank == other.rank && self.actions == other.actions
    }
}

impl Eq for GammaLattice {}

impl GammaLattice {
    /// Lattice given by the action of the group generators
    /// (`group.generators()`, in order). The action is extended to every
    /// element and validated.
    pub fn from_generators(group: &FiniteGroup, rank: usize, generator_actions: Vec<IntMatrix>, label: &str) -> Result<GammaLattice> {
        let gens = group.generators();
        if generator_actions.len() != gens.len() {
            return Err(invalid(format!(
                "{} generator matrices given, group has {} generators",
                generator_actions.len(),
                gens.len()
            )));
        }
        for (k, m) in generator_actions.iter().enumerate() {
            if m.rows() != rank || m.cols() != rank {
                return Err(invalid(format!(
                    "generator {} matrix is {}x{}, expected {}x{}",
                    k,
                    m.rows(),
                    m.cols(),
                    rank,
                    rank
                )));
            }
            if !is_unimodular(m)? {
                return Err(invalid(format!("generator {} matrix is not invertible over Z", k)));
            }
        }
        let n = group.order();
        let mut actions: Vec<Option<IntMatrix>> = vec![None; n];
        actions[group.identity()] = Some(IntMatrix::identity(rank));
        let mut queue = VecDeque::from([group.identity()]);
        while let Some(x) = queue.pop_front() {
            for (k, &s) in gens.iter().enumerate() {
                let y = group.mul(x, s);
                if actions[y].is_none() {
                    let m = actions[x].as_ref().unwrap().try_mul(&generator_actions[k])?;
                    actions[y] = Some(m);
                    queue.push_back(y);
                }
            }
        }
        let actions: Vec<IntMatrix> = actions
            .into_iter()
            .map(|a| a.ok_or_else(|| invalid("generators do not reach every element")))
            .collect::<Result<_>>()?;
        Self::from_element_actions(group, actions, label)
    }

    /// Lattice from the action matrix of every element.
    ///
    /// Checks `action(identity) = I`, unimodularity, and
    /// `action(g) action(s) = action(g s)` for every element `g` and every
    /// generator `s`; by induction on word length this is equivalent to the
    /// homomorphism property on all pairs.
    pub fn from_element_actions(group: &FiniteGroup, actions: Vec<IntMatrix>, label: &str) -> Result<GammaLattice> {
        if actions.len() != group.order() {
            return Err(invalid("one action matrix per group element is required"));
        }
        let rank = actions.get(group.identity()).map_or(0, |m| m.rows());
        if actions.iter().any(|m| m.rows() != rank || m.cols() != rank) {
            return Err(invalid("action matrices have inconsistent shapes"));
        }
        if !actions[group.identity()].is_identity() {
            return Err(invalid("identity does not act trivially"));
        }
        for &s in group.generators() {
            if !is_unimodular(&actions[s])? {
                return Err(invalid(format!("action of generator {} is not invertible over Z", s)));
            }
        }
        for g in group.elements() {
            for &s in group.generators() {
                let lhs = actions[g].try_mul(&actions[s])?;
                if lhs != actions[group.mul(g, s)] {
                    return Err(invalid(format!(
                        "not a representation: action({})*action({}) != action({})",
                        g,
                        s,
                        group.mul(g, s)
                    )));
                }
            }
        }
        Ok(GammaLattice {
            group: group.clone(),
            rank,
            actions: Arc::new(actions),
            label: label.to_string(),
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn action(&self, g: usize) -> &IntMatrix {
        &self.actions[g]
    }

    pub fn actions(&self) -> &[IntMatrix] {
        &self.actions
    }

    pub fn generator_actions(&self) -> Vec<IntMatrix> {
        self.group.generators().iter().map(|&s| self.actions[s].clone()).collect()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = label.to_string();
        self
    }

    pub(crate) fn cache_key(&self, degree: usize) -> CacheKey {
        CacheKey {
            table: self.group.table().to_vec(),
            generators: self.group.generators().to_vec(),
            actions: self.generator_actions(),
            degree,
        }
    }

    /// The same lattice written in a new basis: the columns of `basis`.
    /// The new action is `basis^{-1} action(g) basis`.
    pub fn change_basis(&self, basis: &IntMatrix) -> Result<GammaLattice> {
        let inv = unimodular_inverse(basis)?.ok_or_else(|| invalid("basis is not unimodular"))?;
        if basis.rows() != self.rank {
            return Err(invalid("basis size does not match the rank"));
        }
        let actions = self
            .actions
            .iter()
            .map(|a| inv.try_mul(a)?.try_mul(basis))
            .collect::<Result<Vec<_>>>()?;
        Ok(GammaLattice {
            group: self.group.clone(),
            rank: self.rank,
            actions: Arc::new(actions),
            label: self.label.clone(),
        })
    }

    /// True iff every element acts as the identity.
    pub fn is_trivial_action(&self) -> bool {
        self.actions.iter().all(IntMatrix::is_identity)
    }
}

/// The rank-`rank` lattice with trivial action.
pub fn trivial_lattice(group: &FiniteGroup, rank: usize) -> GammaLattice {
    GammaLattice {
        group: group.clone(),
        rank,
        actions: Arc::new(vec![IntMatrix::identity(rank); group.order()]),
        label: if rank == 1 { "Z".into() } else { format!("Z^{}", rank) },
    }
}

/// The permutation lattice `Z[G/H]` on right cosets. Basis vector `e_j`
/// stands for the coset `H r_j` and `g e_j = e_i` where `H r_i = H r_j g^{-1}`.
pub fn permutation_lattice(group: &FiniteGroup, h: &Subgroup) -> Result<GammaLattice> {
    let cosets = RightCosets::new(group, h)?;
    let k = cosets.len();
    let actions = group
        .elements()
        .map(|g| {
            let gi = group.inv(g);
            let mut m = IntMatrix::zeros(k, k);
            for (j, &r) in cosets.reps().iter().enumerate() {
                m[(cosets.coset_of(group.mul(r, gi)), j)] = 1;
            }
            m
        })
        .collect();
    Ok(GammaLattice {
        group: group.clone(),
        rank: k,
        actions: Arc::new(actions),
        label: format!("Z[G/H], |H|={}", h.order()),
    })
}

/// The regular lattice `Z[G]`.
pub fn regular_lattice(group: &FiniteGroup) -> GammaLattice {
    permutation_lattice(group, &Subgroup::trivial(group))
        .expect("trivial subgroup of its own group")
        .with_label("Z[G]")
}

/// Dual lattice: `action(g) = action(g^{-1})^T`.
pub fn dual(m: &GammaLattice) -> GammaLattice {
    let g = &m.group;
    let actions = g.elements().map(|x| m.actions[g.inv(x)].transpose()).collect();
    GammaLattice {
        group: g.clone(),
        rank: m.rank,
        actions: Arc::new(actions),
        label: format!("dual({})", m.label),
    }
}

/// A direct sum with its structure maps.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub lattice: GammaLattice,
    pub injections: Vec<LatticeMap>,
    pub projections: Vec<LatticeMap>,
    pub offsets: Vec<usize>,
}

/// Block-diagonal direct sum of lattices over the same group.
pub fn direct_sum(parts: &[GammaLattice]) -> Result<DirectSum> {
    let first = parts.first().ok_or_else(|| invalid("direct sum of an empty list"))?;
    let group = first.group.clone();
    if parts.iter().any(|p| p.group != group) {
        return Err(invalid("direct sum of lattices over different groups"));
    }
    let rank: usize = parts.iter().map(|p| p.rank).sum();
    let actions = group
        .elements()
        .map(|g| {
            let blocks: Vec<&IntMatrix> = parts.iter().map(|p| &p.actions[g]).collect();
            IntMatrix::block_diagonal(&blocks)
        })
        .collect();
    let labels: Vec<&str> = parts.iter().map(|p| p.label.as_str()).collect();
    let lattice = GammaLattice {
        group,
        rank,
        actions: Arc::new(actions),
        label: labels.join(" + "),
    };
    let mut offsets = Vec::with_capacity(parts.len());
    let mut injections = Vec::with_capacity(parts.len());
    let mut projections = Vec::with_capacity(parts.len());
    let mut off = 0;
    for p in parts {
        offsets.push(off);
        let mut inj = IntMatrix::zeros(rank, p.rank);
        let mut proj = IntMatrix::zeros(p.rank, rank);
        for i in 0..p.rank {
            inj[(off + i, i)] = 1;
            proj[(i, off + i)] = 1;
        }
        injections.push(LatticeMap::new_unchecked(p.clone(), lattice.clone(), inj));
        projections.push(LatticeMap::new_unchecked(lattice.clone(), p.clone(), proj));
        off += p.rank;
    }
    Ok(DirectSum {
        lattice,
        injections,
        projections,
        offsets,
    })
}

/// Restriction to a subgroup. The result lives over [`Subgroup::to_group`].
pub fn restrict(m: &GammaLattice, h: &Subgroup) -> Result<GammaLattice> {
    if h.parent() != &m.group {
        return Err(invalid("subgroup of a different group"));
    }
    let local = h.to_group();
    let actions = h.elements().iter().map(|&g| m.actions[g].clone()).collect();
    Ok(GammaLattice {
        group: local,
        rank: m.rank,
        actions: Arc::new(actions),
        label: format!("res({})", m.label),
    })
}

/// Coinduction `CoInd_H^G(M)` of a lattice over `H.to_group()`.
///
/// Elements are functions `f: G -> M` with `f(h x) = h f(x)`, stored by
/// their values on the right-coset representatives (block `i` holds
/// `f(r_i)`), and `(g f)(x) = f(x g)`.
pub fn coinduce(h: &Subgroup, m: &GammaLattice, group: &FiniteGroup) -> Result<GammaLattice> {
    if h.parent() != group {
        return Err(invalid("subgroup of a different group"));
    }
    if m.group != h.to_group() {
        return Err(invalid("lattice is not defined over the given subgroup"));
    }
    let cosets = RightCosets::new(group, h)?;
    let k = cosets.len();
    let r = m.rank;
    let actions = group
        .elements()
        .map(|g| {
            let mut a = IntMatrix::zeros(k * r, k * r);
            for (i, &ri) in cosets.reps().iter().enumerate() {
                let (hh, j) = cosets.decompose(group, group.mul(ri, g));
                let local = h.local_index(hh).expect("coset decomposition lands in H");
                a.set_block(i * r, j * r, &m.actions[local]);
            }
            a
        })
        .collect();
    Ok(GammaLattice {
        group: group.clone(),
        rank: k * r,
        actions: Arc::new(actions),
        label: format!("CoInd({})", m.label),
    })
}

/// Equivariant integer matrix between two lattices over the same group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeMap {
    source: GammaLattice,
    target: GammaLattice,
    matrix: IntMatrix,
}

impl LatticeMap {
    /// Validates shape and equivariance (on generators, which suffices).
    pub fn new(source: GammaLattice, target: GammaLattice, matrix: IntMatrix) -> Result<LatticeMap> {
        if source.group != target.group {
            return Err(invalid("map between lattices over different groups"));
        }
        if matrix.rows() != target.rank || matrix.cols() != source.rank {
            return Err(invalid(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.rank,
                source.rank
            )));
        }
        for &s in source.group.generators() {
            let lhs = target.actions[s].try_mul(&matrix)?;
            let rhs = matrix.try_mul(&source.actions[s])?;
            if lhs != rhs {
                return Err(invalid(format!("map is not equivariant for generator {}", s)));
            }
        }
        Ok(LatticeMap { source, target, matrix })
    }

    pub(crate) fn new_unchecked(source: GammaLattice, target: GammaLattice, matrix: IntMatrix) -> LatticeMap {
        LatticeMap { source, target, matrix }
    }

    pub fn source(&self) -> &GammaLattice {
        &self.source
    }

    pub fn target(&self) -> &GammaLattice {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &LatticeMap) -> Result<LatticeMap> {
        if self.target != other.source {
            return Err(invalid("maps are not composable"));
        }
        Ok(LatticeMap {
            source: self.source.clone(),
            target: other.target.clone(),
            matrix: other.matrix.try_mul(&self.matrix)?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }
}

/// Kernel of an equivariant map, with its inclusion.
///
/// The basis is the canonical Hermite-reduced basis of the integer kernel;
/// it is automatically pure.
pub fn kernel(f: &LatticeMap) -> Result<(GammaLattice, LatticeMap)> {
    let k = kernel_basis(&f.matrix)?;
    let src = &f.source;
    let g = &src.group;
    let kr = k.cols();
    let lattice = if kr == 0 {
        trivial_lattice(g, 0)
    } else {
        let li = left_inverse(&k)?;
        let gens = g
            .generators()
            .iter()
            .map(|&s| {
                let moved = src.actions[s].try_mul(&k)?;
                let a = li.try_mul(&moved)?;
                if k.try_mul(&a)? != moved {
                    return Err(construction("kernel is not stable under the action"));
                }
                Ok(a)
            })
            .collect::<Result<Vec<_>>>()?;
        GammaLattice::from_generators(g, kr, gens, "")?
    };
    let lattice = lattice.with_label(&format!("ker({} -> {})", src.label, f.target.label));
    let inclusion = LatticeMap::new(lattice.clone(), src.clone(), k)?;
    Ok((lattice, inclusion))
}

/// Cokernel of a split injection, with the projection onto it.
///
/// Fails with [`Error::Torsion`] when the map has a kernel or an elementary
/// divisor other than one.
pub fn cokernel_torsion_free(f: &LatticeMap) -> Result<(GammaLattice, LatticeMap)> {
    let (proj, sec) = split_cokernel(&f.matrix)?;
    let tgt = &f.target;
    let g = &tgt.group;
    let cr = proj.rows();
    let lattice = if cr == 0 {
        trivial_lattice(g, 0)
    } else {
        let gens = g
            .generators()
            .iter()
            .map(|&s| {
                let pa = proj.try_mul(&tgt.actions[s])?;
                let b = pa.try_mul(&sec)?;
                if b.try_mul(&proj)? != pa {
                    return Err(construction("image is not stable under the action"));
                }
                Ok(b)
            })
            .collect::<Result<Vec<_>>>()?;
        GammaLattice::from_generators(g, cr, gens, "")?
    };
    let lattice = lattice.with_label(&format!("coker({} -> {})", f.source.label, tgt.label));
    let projection = LatticeMap::new(tgt.clone(), lattice.clone(), proj)?;
    Ok((lattice, projection))
}

/// Augmentation `Z[G/H] -> Z` sending every coset to one.
pub fn augmentation(group: &FiniteGroup, h: &Subgroup) -> Result<LatticeMap> {
    let p = permutation_lattice(group, h)?;
    let m = IntMatrix::from_row_major(1, p.rank, vec![1; p.rank])?;
    LatticeMap::new(p, trivial_lattice(group, 1), m)
}

/// The map `Z[L]^2 -> Z[L]`, `(x, y) -> x (l1 - 1) + y (l2 - 1)`, with `l1`, `l2`
/// the first two generators of the group.
///
/// In the basis of [`regular_lattice`], `e_x` corresponds to the group
/// algebra element `x^{-1}`, so right multiplication by `l - 1` sends `e_x` to
/// `e_{l^{-1} x} - e_x`.
pub fn esempio_phi(group: &FiniteGroup) -> Result<LatticeMap> {
    let gens = group.generators();
    if gens.len() < 2 {
        return Err(invalid("need a group with at least two generators"));
    }
    let reg = regular_lattice(group);
    let cosets = RightCosets::new(group, &Subgroup::trivial(group))?;
    let n = reg.rank;
    let mut m = IntMatrix::zeros(n, 2 * n);
    for (block, &l) in gens[..2].iter().enumerate() {
        let li = group.inv(l);
        for (j, &x) in cosets.reps().iter().enumerate() {
            let col = block * n + j;
            m[(cosets.coset_of(group.mul(li, x)), col)] += 1;
            m[(j, col)] -= 1;
        }
    }
    let src = direct_sum(&[reg.clone(), reg.clone()])?.lattice;
    LatticeMap::new(src, reg, m)
}

/// Transport a lattice along a group isomorphism: `iso[x]` is the image in
/// `target` of element `x` of `m.group()`.
pub fn transport(m: &GammaLattice, target: &FiniteGroup, iso: &[usize]) -> Result<GammaLattice> {
    let src = &m.group;
    if iso.len() != src.order() || target.order() != src.order() {
        return Err(invalid("isomorphism has the wrong size"));
    }
    let mut actions = vec![IntMatrix::zeros(0, 0); target.order()];
    let mut hit = vec![false; target.order()];
    for x in src.elements() {
        let y = iso[x];
        if y >= target.order() || hit[y] {
            return Err(invalid("map is not a bijection"));
        }
        hit[y] = true;
        actions[y] = m.actions[x].clone();
    }
    for a in src.elements() {
        for b in src.elements() {
            if iso[src.mul(a, b)] != target.mul(iso[a], iso[b]) {
                return Err(Error::InvalidInput(format!("map is not a homomorphism at ({}, {})", a, b)));
            }
        }
    }
    GammaLattice::from_element_actions(target, actions, &m.label)
}
