//! Finite groups given by multiplication tables, their subgroups and cosets.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::normal_form::gcd;

/// Default cap on the group order for subgroup enumeration.
pub const DEFAULT_SUBGROUP_BOUND: usize = 64;

#[derive(Debug, PartialEq, Eq)]
struct GroupData {
    order: usize,
    mul: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    generators: Vec<usize>,
    label: String,
}

/// A finite group with elements `0..order`.
///
/// Cloning is cheap; the table is shared.
#[derive(Clone, Debug)]
pub struct FiniteGroup(Arc<GroupData>);

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.order == other.0.order && self.0.mul == other.0.mul)
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Direct product of cyclic groups of the given orders. Element `i` is the
    /// mixed-radix vector whose first coordinate varies fastest; the
    /// generators are the unit vectors.
    pub fn abelian(orders: &[usize]) -> Result<FiniteGroup> {
        if let Some(&o) = orders.iter().find(|&&o| o < 2) {
            return Err(invalid(format!("cyclic factor of order {} (need >= 2)", o)));
        }
        let order: usize = orders
            .iter()
            .try_fold(1usize, |acc, &o| acc.checked_mul(o))
            .ok_or_else(|| invalid("group order overflows"))?;
        let digits = |mut x: usize| {
            let mut d = Vec::with_capacity(orders.len());
            for &o in orders {
                d.push(x % o);
                x /= o;
            }
            d
        };
        let encode = |d: &[usize]| {
            let mut x = 0;
            for (k, &o) in orders.iter().enumerate().rev() {
                x = x * o + d[k];
            }
            x
        };
        let mut mul = vec![0; order * order];
        for a in 0..order {
            let da = digits(a);
            for b in 0..order {
                let db = digits(b);
                let s: Vec<usize> = (0..orders.len()).map(|k| (da[k] + db[k]) % orders[k]).collect();
                mul[a * order + b] = encode(&s);
            }
        }
        let inverse = (0..order)
            .map(|a| {
                let d: Vec<usize> = digits(a).iter().zip(orders).map(|(&x, &o)| (o - x) % o).collect();
                encode(&d)
            })
            .collect();
        let mut generators = Vec::new();
        let mut stride = 1;
        for &o in orders {
            generators.push(stride);
            stride *= o;
        }
        let label = if orders.is_empty() {
            "1".to_string()
        } else {
            orders.iter().map(|o| format!("Z/{}", o)).collect::<Vec<_>>().join(" x ")
        };
        Ok(FiniteGroup(Arc::new(GroupData {
            order,
            mul,
            identity: 0,
            inverse,
            generators,
            label,
        })))
    }

    /// Group from a full multiplication table `table[a][b] = a*b`.
    ///
    /// Validates closure, associativity, identity and inverses. When
    /// `generators` is `None`, a generating set is chosen greedily (smallest
    /// element outside the current closure).
    pub fn from_table(table: &[Vec<usize>], generators: Option<Vec<usize>>, label: &str) -> Result<FiniteGroup> {
        let n = table.len();
        if n == 0 {
            return Err(invalid("empty multiplication table"));
        }
        let mut mul = Vec::with_capacity(n * n);
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(invalid(format!("table row {} has length {}, expected {}", a, row.len(), n)));
            }
            for (b, &c) in row.iter().enumerate() {
                if c >= n {
                    return Err(invalid(format!("product {}*{} = {} is out of range", a, b, c)));
                }
                mul.push(c);
            }
        }
        let m = |a: usize, b: usize| mul[a * n + b];
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| m(e, g) == g && m(g, e) == g))
            .ok_or_else(|| invalid("table has no two-sided identity"))?;
        let mut inverse = vec![0; n];
        for g in 0..n {
            inverse[g] = (0..n)
                .find(|&h| m(h, g) == identity && m(g, h) == identity)
                .ok_or_else(|| invalid(format!("element {} has no inverse", g)))?;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = m(a, b);
                for c in 0..n {
                    if m(ab, c) != m(a, m(b, c)) {
                        return Err(invalid(format!("associativity fails at ({}, {}, {})", a, b, c)));
                    }
                }
            }
        }
        let data = GroupData {
            order: n,
            mul,
            identity,
            inverse,
            generators: Vec::new(),
            label: label.to_string(),
        };
        let mut g = FiniteGroup(Arc::new(data));
        let gens = match generators {
            Some(gens) => {
                if gens.iter().any(|&x| x >= n) {
                    return Err(invalid("generator index out of range"));
                }
                if g.closure(&gens).len() != n {
                    return Err(invalid("generators do not generate the group"));
                }
                gens
            }
            None => g.greedy_generators(),
        };
        Arc::get_mut(&mut g.0).expect("fresh group").generators = gens;
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.0.order
    }

    pub fn identity(&self) -> usize {
        self.0.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.0.mul[a * self.0.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.0.inverse[a]
    }

    pub fn generators(&self) -> &[usize] {
        &self.0.generators
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    /// Row-major multiplication table.
    pub fn table(&self) -> &[usize] {
        &self.0.mul
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.0.mul.chunks(self.0.order).map(<[usize]>::to_vec).collect()
    }

    pub fn elements(&self) -> core::ops::Range<usize> {
        0..self.0.order
    }

    pub fn power(&self, g: usize, k: usize) -> usize {
        let mut x = self.identity();
        for _ in 0..k {
            x = self.mul(x, g);
        }
        x
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity() {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (a + 1..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Sorted closure of a set of elements under multiplication.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        let mut queue = VecDeque::new();
        seen[self.identity()] = true;
        queue.push_back(self.identity());
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order()).filter(|&i| seen[i]).collect()
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut current = self.closure(&gens);
        while current.len() < self.order() {
            let next = (0..self.order()).find(|x| current.binary_search(x).is_err()).unwrap();
            gens.push(next);
            current = self.closure(&gens);
        }
        gens
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> usize {
        self.elements().fold(1, |acc, g| {
            let o = self.element_order(g) as i64;
            (acc as i64 / gcd(acc as i64, o) * o) as usize
        })
    }
}

/// A subgroup, stored as the sorted list of its elements in the parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    parent: FiniteGroup,
    elements: Vec<usize>,
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subgroup {
    /// Canonical order: by size, then lexicographically by element list.
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        (self.elements.len(), &self.elements).cmp(&(other.elements.len(), &other.elements))
    }
}

impl Subgroup {
    /// Subgroup generated by the given elements.
    pub fn generated_by(parent: &FiniteGroup, gens: &[usize]) -> Result<Subgroup> {
        if let Some(&g) = gens.iter().find(|&&g| g >= parent.order()) {
            return Err(invalid(format!("element {} out of range for group of order {}", g, parent.order())));
        }
        Ok(Subgroup {
            parent: parent.clone(),
            elements: parent.closure(gens),
        })
    }

    /// Validates an explicit element list.
    pub fn from_elements(parent: &FiniteGroup, elements: &[usize]) -> Result<Subgroup> {
        let mut els = elements.to_vec();
        els.sort_unstable();
        els.dedup();
        if els.iter().any(|&g| g >= parent.order()) {
            return Err(invalid("subgroup element out of range"));
        }
        if els.binary_search(&parent.identity()).is_err() {
            return Err(invalid("subset does not contain the identity"));
        }
        for &a in &els {
            if els.binary_search(&parent.inv(a)).is_err() {
                return Err(invalid(format!("subset is not closed under inverse at {}", a)));
            }
            for &b in &els {
                if els.binary_search(&parent.mul(a, b)).is_err() {
                    return Err(invalid(format!("subset is not closed under product at ({}, {})", a, b)));
                }
            }
        }
        Ok(Subgroup {
            parent: parent.clone(),
            elements: els,
        })
    }

    pub fn trivial(parent: &FiniteGroup) -> Subgroup {
        Subgroup {
            parent: parent.clone(),
            elements: vec![parent.identity()],
        }
    }

    pub fn full(parent: &FiniteGroup) -> Subgroup {
        Subgroup {
            parent: parent.clone(),
            elements: parent.elements().collect(),
        }
    }

    pub fn parent(&self) -> &FiniteGroup {
        &self.parent
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_full(&self) -> bool {
        self.elements.len() == self.parent.order()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.parent == other.parent && self.elements.iter().all(|&g| other.contains(g))
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        Subgroup {
            parent: self.parent.clone(),
            elements: self.elements.iter().copied().filter(|&g| other.contains(g)).collect(),
        }
    }

    /// True iff some element's powers exhaust the subgroup.
    pub fn is_cyclic(&self) -> bool {
        self.elements
            .iter()
            .any(|&g| self.parent.element_order(g) == self.elements.len())
    }

    pub fn is_normal(&self) -> bool {
        let g = &self.parent;
        g.elements()
            .all(|x| self.elements.iter().all(|&h| self.contains(g.mul(g.mul(x, h), g.inv(x)))))
    }

    /// The subgroup as a group in its own right. Local element `k` is the
    /// `k`-th smallest element of the subgroup, so the embedding is
    /// [`Subgroup::elements`].
    pub fn to_group(&self) -> FiniteGroup {
        let n = self.elements.len();
        let local = |g: usize| self.elements.binary_search(&g).expect("closed subgroup");
        let mut mul = Vec::with_capacity(n * n);
        for &a in &self.elements {
            for &b in &self.elements {
                mul.push(local(self.parent.mul(a, b)));
            }
        }
        let inverse = self.elements.iter().map(|&a| local(self.parent.inv(a))).collect();
        let identity = local(self.parent.identity());
        let label = format!("{} < {}", elements_label(&self.elements), self.parent.label());
        let mut g = FiniteGroup(Arc::new(GroupData {
            order: n,
            mul,
            identity,
            inverse,
            generators: Vec::new(),
            label,
        }));
        let gens = g.greedy_generators();
        Arc::get_mut(&mut g.0).expect("fresh group").generators = gens;
        g
    }

    /// Index of a parent element inside [`Subgroup::to_group`].
    pub fn local_index(&self, g: usize) -> Option<usize> {
        self.elements.binary_search(&g).ok()
    }

    /// Re-express a subgroup `h <= self` (given in the parent) as a subgroup
    /// of [`Subgroup::to_group`].
    pub fn localize(&self, h: &Subgroup, local: &FiniteGroup) -> Result<Subgroup> {
        if !h.is_subgroup_of(self) {
            return Err(invalid("subgroup is not contained in the ambient subgroup"));
        }
        Ok(Subgroup {
            parent: local.clone(),
            elements: h.elements.iter().map(|&g| self.local_index(g).unwrap()).collect(),
        })
    }

    /// Push a subgroup of [`Subgroup::to_group`] back into the parent.
    pub fn lift(&self, h: &Subgroup) -> Subgroup {
        let mut elements: Vec<usize> = h.elements.iter().map(|&k| self.elements[k]).collect();
        elements.sort_unstable();
        Subgroup {
            parent: self.parent.clone(),
            elements,
        }
    }
}

fn elements_label(els: &[usize]) -> String {
    let inner: Vec<String> = els.iter().map(|e| e.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

/// Every subgroup of `g`, duplicate-free, in canonical order (size, then
/// element list). Fails when the order exceeds `bound`.
pub fn all_subgroups_bounded(g: &FiniteGroup, bound: usize) -> Result<Vec<Subgroup>> {
    if g.order() > bound {
        return Err(Error::ResourceLimit {
            what: "subgroup enumeration".into(),
            detail: format!("group order {}", g.order()),
            bound,
        });
    }
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut queue = VecDeque::new();
    let trivial = vec![g.identity()];
    seen.insert(trivial.clone());
    queue.push_back(trivial);
    while let Some(s) = queue.pop_front() {
        for x in g.elements() {
            if s.binary_search(&x).is_ok() {
                continue;
            }
            let mut gens = s.clone();
            gens.push(x);
            let t = g.closure(&gens);
            if !seen.contains(&t) {
                seen.insert(t.clone());
                queue.push_back(t);
            }
        }
    }
    let mut out: Vec<Subgroup> = seen
        .into_iter()
        .map(|elements| Subgroup {
            parent: g.clone(),
            elements,
        })
        .collect();
    out.sort();
    Ok(out)
}

pub fn all_subgroups(g: &FiniteGroup) -> Result<Vec<Subgroup>> {
    all_subgroups_bounded(g, DEFAULT_SUBGROUP_BOUND)
}

/// Proper subgroups not contained in a larger proper subgroup.
pub fn maximal_subgroups_bounded(g: &FiniteGroup, bound: usize) -> Result<Vec<Subgroup>> {
    let all = all_subgroups_bounded(g, bound)?;
    let proper: Vec<&Subgroup> = all.iter().filter(|s| !s.is_full()).collect();
    Ok(proper
        .iter()
        .filter(|s| !proper.iter().any(|t| t.order() > s.order() && s.is_subgroup_of(t)))
        .map(|s| (*s).clone())
        .collect())
}

pub fn maximal_subgroups(g: &FiniteGroup) -> Result<Vec<Subgroup>> {
    maximal_subgroups_bounded(g, DEFAULT_SUBGROUP_BOUND)
}

pub fn index(g: &FiniteGroup, h: &Subgroup) -> Result<usize> {
    if h.parent() != g {
        return Err(invalid("subgroup belongs to a different group"));
    }
    Ok(g.order() / h.order())
}

/// Right cosets `H g` of a subgroup, with deterministic representatives.
#[derive(Clone, Debug)]
pub struct RightCosets {
    reps: Vec<usize>,
    coset_of: Vec<usize>,
}

impl RightCosets {
    /// Representatives: the identity for `H` itself, the smallest element
    /// index for every other coset, listed in increasing order after the
    /// identity.
    pub fn new(g: &FiniteGroup, h: &Subgroup) -> Result<RightCosets> {
        if h.parent() != g {
            return Err(invalid("subgroup belongs to a different group"));
        }
        let n = g.order();
        let mut coset_of = vec![usize::MAX; n];
        let mut reps = vec![g.identity()];
        for &x in h.elements() {
            coset_of[x] = 0;
        }
        for x in 0..n {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let k = reps.len();
            reps.push(x);
            for &y in h.elements() {
                coset_of[g.mul(y, x)] = k;
            }
        }
        Ok(RightCosets { reps, coset_of })
    }

    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn coset_of(&self, x: usize) -> usize {
        self.coset_of[x]
    }

    /// Writes `x = h * rep_j`, returning `(h, j)`.
    pub fn decompose(&self, g: &FiniteGroup, x: usize) -> (usize, usize) {
        let j = self.coset_of[x];
        (g.mul(x, g.inv(self.reps[j])), j)
    }
}

pub fn right_coset_reps(g: &FiniteGroup, h: &Subgroup) -> Result<Vec<usize>> {
    Ok(RightCosets::new(g, h)?.reps)
}
