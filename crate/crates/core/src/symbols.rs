//! A mod-p wedge model for symbols of units.
//!
//! A [`UnitLattice`] is a finitely presented free abelian group standing for
//! a group of units modulo roots of unity. The class of `{u, v}` is modeled
//! by `u ^ v` in the second exterior power of the lattice tensored with
//! `Z/p`. The model is bilinear, alternating and kills `p`-th powers. When
//! `{x, -1}` is divisible by `p` (odd `p`, or `p = 2` with a fourth root of
//! unity) these relations hold in `K_2 / p`, so a zero wedge certifies that
//! the symbol vanishes mod `p`. A non-zero wedge certifies nothing.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::matrix::IntMatrix;
use crate::normal_form::{elementary_divisors, is_prime, split_cokernel};

/// Label attached to every non-zero wedge answer.
pub const NONZERO_LABEL: &str = "formally nonzero (no K2 conclusion)";

/// Free abelian group on named generators modulo relations `p w = v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitLattice {
    p: i64,
    names: Vec<String>,
    /// Relation vectors over all current generators.
    relations: Vec<Vec<i64>>,
    /// Coordinates in a basis of the (free) quotient.
    projection: IntMatrix,
}

impl UnitLattice {
    /// Free lattice on distinct names.
    pub fn base(names: &[&str], p: i64) -> Result<UnitLattice> {
        if p < 2 || !is_prime(p as u64) {
            return Err(invalid(format!("{} is not prime", p)));
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(invalid(format!("duplicate generator name {:?}", a)));
            }
        }
        Ok(UnitLattice {
            p,
            names: names.iter().map(|s| s.to_string()).collect(),
            relations: Vec::new(),
            projection: IntMatrix::identity(names.len()),
        })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn relations(&self) -> &[Vec<i64>] {
        &self.relations
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    /// Rank of the presented group.
    pub fn rank(&self) -> usize {
        self.projection.rows()
    }

    pub fn projection(&self) -> &IntMatrix {
        &self.projection
    }

    /// Unit vector of a named generator.
    pub fn unit(&self, name: &str) -> Result<Vec<i64>> {
        let k = self
            .names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| invalid(format!("unknown generator {:?}", name)))?;
        let mut v = vec![0; self.names.len()];
        v[k] = 1;
        Ok(v)
    }

    fn coords(&self, u: &[i64]) -> Result<Vec<i64>> {
        if u.len() != self.names.len() {
            return Err(invalid(format!(
                "vector has {} entries, lattice has {} generators",
                u.len(),
                self.names.len()
            )));
        }
        self.projection.mul_vec(u)
    }

    fn coords_mod_p(&self, u: &[i64]) -> Result<Vec<i64>> {
        Ok(self.coords(u)?.into_iter().map(|x| x.rem_euclid(self.p)).collect())
    }

    /// True iff the class of `u` is `p` times another class.
    pub fn is_p_divisible(&self, u: &[i64]) -> Result<bool> {
        Ok(self.coords_mod_p(u)?.iter().all(|&x| x == 0))
    }

    /// Adjoins `w` with `p w = v`. Refuses when `v` is already divisible by
    /// `p`, which would create torsion.
    pub fn adjoin_radical(&self, v: &[i64], name: &str) -> Result<UnitLattice> {
        if self.names.iter().any(|n| n == name) {
            return Err(invalid(format!("generator name {:?} is already used", name)));
        }
        if self.is_p_divisible(v)? {
            return Err(Error::Torsion {
                context: "adjunction would create p-torsion in the unit group model".into(),
                divisor: self.p,
            });
        }
        let mut relations: Vec<Vec<i64>> = self
            .relations
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.push(0);
                r
            })
            .collect();
        let mut rel: Vec<i64> = v.iter().map(|x| -x).collect();
        rel.push(self.p);
        relations.push(rel);
        let mut names = self.names.clone();
        names.push(name.to_string());
        let rmat = IntMatrix::from_columns(&relations, names.len())?;
        let d = elementary_divisors(&rmat)?;
        if d.len() != relations.len() || d.iter().any(|&x| x != 1) {
            return Err(Error::Torsion {
                context: "presented unit group is not torsion-free".into(),
                divisor: d.iter().copied().find(|&x| x != 1).unwrap_or(0),
            });
        }
        let (projection, _) = split_cokernel(&rmat)?;
        Ok(UnitLattice {
            p: self.p,
            names,
            relations,
            projection,
        })
    }

    /// Matrix of the canonical map from this lattice's quotient basis into
    /// that of `ext`, when `ext` was obtained by adjunctions.
    pub fn induced_map(&self, ext: &UnitLattice) -> Result<IntMatrix> {
        if ext.names.len() < self.names.len() || ext.names[..self.names.len()] != self.names[..] {
            return Err(invalid("not an extension of this lattice"));
        }
        let rmat = if self.relations.is_empty() {
            IntMatrix::zeros(self.names.len(), 0)
        } else {
            IntMatrix::from_columns(&self.relations, self.names.len())?
        };
        let (_, section) = if self.relations.is_empty() {
            (IntMatrix::identity(self.names.len()), IntMatrix::identity(self.names.len()))
        } else {
            split_cokernel(&rmat)?
        };
        let mut pad = IntMatrix::zeros(ext.names.len(), self.names.len());
        for i in 0..self.names.len() {
            pad[(i, i)] = 1;
        }
        ext.projection.try_mul(&pad)?.try_mul(&section)
    }

    /// The wedge `u ^ v` mod `p`.
    pub fn symbol(&self, u: &[i64], v: &[i64]) -> Result<WedgeClass> {
        let x = self.coords_mod_p(u)?;
        let y = self.coords_mod_p(v)?;
        Ok(WedgeClass::from_vectors(&x, &y, self.p))
    }
}

/// Antisymmetric matrix over `Z/p` with zero diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WedgeClass {
    pub p: i64,
    pub matrix: Vec<Vec<i64>>,
}

impl WedgeClass {
    fn from_vectors(x: &[i64], y: &[i64], p: i64) -> WedgeClass {
        let n = x.len();
        let mut m = vec![vec![0; n]; n];
        for k in 0..n {
            for l in 0..n {
                m[k][l] = (x[k] * y[l] - x[l] * y[k]).rem_euclid(p);
            }
        }
        WedgeClass { p, matrix: m }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(|&x| x == 0)
    }

    pub fn add(&self, other: &WedgeClass) -> Result<WedgeClass> {
        if self.p != other.p || self.matrix.len() != other.matrix.len() {
            return Err(invalid("wedge classes of different shapes"));
        }
        let matrix = self
            .matrix
            .iter()
            .zip(&other.matrix)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x + y).rem_euclid(self.p)).collect())
            .collect();
        Ok(WedgeClass { p: self.p, matrix })
    }

    pub fn scale(&self, k: i64) -> WedgeClass {
        let matrix = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|x| (x * k.rem_euclid(self.p)).rem_euclid(self.p)).collect())
            .collect();
        WedgeClass { p: self.p, matrix }
    }

    /// Image under `Lambda^2` of a linear map given by `t`.
    pub fn push_forward(&self, t: &IntMatrix) -> Result<WedgeClass> {
        let n = self.matrix.len();
        if t.cols() != n {
            return Err(invalid("map does not match the wedge dimension"));
        }
        let mut out = WedgeClass {
            p: self.p,
            matrix: vec![vec![0; t.rows()]; t.rows()],
        };
        for k in 0..n {
            for l in (k + 1)..n {
                let c = self.matrix[k][l];
                if c == 0 {
                    continue;
                }
                let w = WedgeClass::from_vectors(&t.column(k), &t.column(l), self.p).scale(c);
                out = out.add(&w)?;
            }
        }
        Ok(out)
    }

    pub fn label(&self) -> &'static str {
        if self.is_zero() {
            "zero"
        } else {
            NONZERO_LABEL
        }
    }
}

/// Verdict at one point `[i:j]` of the projective line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointVerdict {
    pub point: [i64; 2],
    /// `v` in the relation `p w = v`, over the base generators.
    pub relation: Vec<i64>,
    pub symbol_zero: bool,
    pub verdict: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymbolReport {
    pub p: i64,
    pub generators: Vec<String>,
    pub points: Vec<PointVerdict>,
    pub base_class_nonzero: bool,
    pub base_verdict: String,
}

/// Points of `P^1(F_p)`: `[1:0]` then `[i:1]` for `i = 0..p-1`.
pub fn projective_line(p: i64) -> Vec<[i64; 2]> {
    let mut pts = vec![[1, 0]];
    pts.extend((0..p).map(|i| [i, 1]));
    pts
}

fn annullamento(base: UnitLattice) -> Result<SymbolReport> {
    let p = base.p;
    let eb = base.unit("b")?;
    let et = base.unit("t")?;
    let class = base.symbol(&eb, &et)?;
    let mut points = Vec::new();
    for pt in projective_line(p) {
        let v: Vec<i64> = eb.iter().zip(&et).map(|(b, t)| pt[0] * b + pt[1] * t).collect();
        let ext = base.adjoin_radical(&v, "w")?;
        let pad = |x: &[i64]| {
            let mut x = x.to_vec();
            x.push(0);
            x
        };
        let s = ext.symbol(&pad(&eb), &pad(&et))?;
        points.push(PointVerdict {
            point: pt,
            relation: v,
            symbol_zero: s.is_zero(),
            verdict: s.label().into(),
        });
    }
    Ok(SymbolReport {
        p,
        generators: base.names.clone(),
        points,
        base_class_nonzero: !class.is_zero(),
        base_verdict: class.label().into(),
    })
}

/// For odd `p`: `{b, t}` vanishes after adjoining any `(i b + j t)^{1/p}`,
/// while it is non-zero in the model before.
pub fn verify_annullamento(p: i64) -> Result<SymbolReport> {
    if p == 2 {
        return Err(invalid(
            "p = 2 needs a fourth root of unity; use the variant with i",
        ));
    }
    annullamento(UnitLattice::base(&["b", "t"], p)?)
}

/// `p = 2` with a fourth root of unity `z`: the unit `-1` is `2 e_z`.
pub fn verify_annullamento_p2_with_i() -> Result<SymbolReport> {
    annullamento(UnitLattice::base(&["b", "t", "z"], 2)?)
}

/// `{b, -1}` vanishes in the model for `p = 2` with `-1 = 2 e_z`.
pub fn minus_one_is_harmless_p2() -> Result<bool> {
    let l = UnitLattice::base(&["b", "t", "z"], 2)?;
    let minus_one: Vec<i64> = l.unit("z")?.iter().map(|x| 2 * x).collect();
    Ok(l.symbol(&l.unit("b")?, &minus_one)?.is_zero())
}
