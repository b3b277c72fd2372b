//! Free finite algebras over a presented ring, given by structure constants.

use std::sync::Arc;

use crate::cert::Certificate;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ring::{evaluate, Evaluator, PresentedRing, RingHom};
use crate::scalar::Scalar;

/// Coordinates with respect to the basis of a [`StructureAlgebra`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    pub coords: Vec<Poly>,
}

impl AlgebraElement {
    pub fn new(coords: Vec<Poly>) -> Self {
        AlgebraElement { coords }
    }

    /// `λ_i`, zero-based.
    pub fn coord(&self, i: usize) -> &Poly {
        &self.coords[i]
    }
}

/// `b_i b_j = Σ_k c_{ijk} b_k` over `base`.
///
/// The unit is `b_1` unless a different unit element is supplied; coefficient algebras
/// with several local factors have no basis vector equal to 1 in a stratified basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureAlgebra {
    base: Arc<PresentedRing>,
    labels: Vec<String>,
    consts: Vec<Vec<Vec<Poly>>>,
    unit: Vec<Poly>,
    table: Vec<Vec<Vec<(usize, Poly)>>>,
}

impl StructureAlgebra {
    /// Basis starting with `b_1 = 1`; validated on construction.
    pub fn new(base: Arc<PresentedRing>, labels: Vec<String>, consts: Vec<Vec<Vec<Poly>>>) -> Result<Self> {
        let r = labels.len();
        let mut unit = vec![Poly::zero(); r];
        if r > 0 {
            unit[0] = base.one();
        }
        let sa = StructureAlgebra::unchecked(base, labels, consts, unit);
        sa.validate()?;
        Ok(sa)
    }

    /// Arbitrary unit element; validated on construction.
    pub fn with_unit(
        base: Arc<PresentedRing>,
        labels: Vec<String>,
        consts: Vec<Vec<Vec<Poly>>>,
        unit: Vec<Poly>,
    ) -> Result<Self> {
        let sa = StructureAlgebra::unchecked(base, labels, consts, unit);
        sa.validate()?;
        Ok(sa)
    }

    pub fn unchecked(base: Arc<PresentedRing>, labels: Vec<String>, consts: Vec<Vec<Vec<Poly>>>, unit: Vec<Poly>) -> Self {
        let consts: Vec<Vec<Vec<Poly>>> = consts
            .into_iter()
            .map(|row| row.into_iter().map(|v| v.into_iter().map(|c| base.normalize(&c)).collect()).collect())
            .collect();
        let unit = unit.into_iter().map(|c| base.normalize(&c)).collect();
        let table = consts
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| {
                        v.iter()
                            .enumerate()
                            .filter(|(_, c)| !c.is_zero())
                            .map(|(k, c)| (k, c.clone()))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        StructureAlgebra {
            base,
            labels,
            consts,
            unit,
            table,
        }
    }

    pub fn base(&self) -> &Arc<PresentedRing> {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Poly {
        &self.consts[i][j][k]
    }

    pub fn constants(&self) -> &Vec<Vec<Vec<Poly>>> {
        &self.consts
    }

    pub fn unit_coords(&self) -> &[Poly] {
        &self.unit
    }

    /// Whether the first basis vector is the unit.
    pub fn unit_is_first(&self) -> bool {
        let r = self.rank();
        r > 0 && self.unit == self.basis_element(0).coords
    }

    /// Checks commutativity, the unit law and associativity, in that order.
    pub fn validate(&self) -> Result<Certificate> {
        let r = self.rank();
        if self.consts.len() != r
            || self.consts.iter().any(|row| row.len() != r || row.iter().any(|v| v.len() != r))
            || self.unit.len() != r
        {
            return Err(Error::InvalidAlgebra {
                axiom: "shape".into(),
                indices: vec![r],
            });
        }
        let b = &self.base;
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    if !b.equal(&self.consts[i][j][k], &self.consts[j][i][k]) {
                        return Err(Error::InvalidAlgebra {
                            axiom: "commutativity".into(),
                            indices: vec![i + 1, j + 1, k + 1],
                        });
                    }
                }
            }
        }
        let one = AlgebraElement::new(self.unit.clone());
        for j in 0..r {
            let bj = self.basis_element(j);
            if self.mul(&one, &bj) != bj {
                return Err(Error::InvalidAlgebra {
                    axiom: "unit".into(),
                    indices: vec![j + 1],
                });
            }
        }
        for i in 0..r {
            for j in 0..r {
                for m in 0..r {
                    let (bi, bj, bm) = (self.basis_element(i), self.basis_element(j), self.basis_element(m));
                    let left = self.mul(&self.mul(&bi, &bj), &bm);
                    let right = self.mul(&bi, &self.mul(&bj, &bm));
                    if left != right {
                        return Err(Error::InvalidAlgebra {
                            axiom: "associativity".into(),
                            indices: vec![i + 1, j + 1, m + 1],
                        });
                    }
                }
            }
        }
        Ok(Certificate::pass(
            "structure_algebra",
            format!("rank {r}: commutativity, unit and associativity hold"),
        ))
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement::new(vec![Poly::zero(); self.rank()])
    }

    pub fn one(&self) -> AlgebraElement {
        AlgebraElement::new(self.unit.clone())
    }

    pub fn basis_element(&self, i: usize) -> AlgebraElement {
        let mut coords = vec![Poly::zero(); self.rank()];
        coords[i] = self.base.one();
        AlgebraElement::new(coords)
    }

    pub fn from_base(&self, a: &Poly) -> AlgebraElement {
        AlgebraElement::new(self.unit.iter().map(|u| self.base.normalize(&u.mul(a))).collect())
    }

    pub fn normalize(&self, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::new(x.coords.iter().map(|c| self.base.normalize(c)).collect())
    }

    pub fn is_zero(&self, x: &AlgebraElement) -> bool {
        x.coords.iter().all(|c| self.base.is_zero(c))
    }

    pub fn equal(&self, x: &AlgebraElement, y: &AlgebraElement) -> bool {
        x.coords.iter().zip(&y.coords).all(|(a, b)| self.base.equal(a, b))
    }

    pub fn add(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::new(x.coords.iter().zip(&y.coords).map(|(a, b)| a.add(b)).collect())
    }

    pub fn sub(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::new(x.coords.iter().zip(&y.coords).map(|(a, b)| a.sub(b)).collect())
    }

    pub fn scale_by(&self, a: &Poly, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::new(x.coords.iter().map(|c| self.base.normalize(&c.mul(a))).collect())
    }

    pub fn mul(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let r = self.rank();
        let mut acc = vec![Poly::zero(); r];
        for (i, xi) in x.coords.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.coords.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let prod = xi.mul(yj);
                for (k, c) in &self.table[i][j] {
                    acc[*k] = acc[*k].add(&prod.mul(c));
                }
            }
        }
        AlgebraElement::new(acc.into_iter().map(|c| self.base.normalize(&c)).collect())
    }

    /// `R ⊗_A B` for an A-algebra `R`, where `to_r` gives the images of A's variables in `R`.
    pub fn base_change(&self, r: Arc<PresentedRing>, to_r: &RingHom) -> StructureAlgebra {
        let map = |c: &Poly| to_r.apply(&r, c);
        let consts = self
            .consts
            .iter()
            .map(|row| row.iter().map(|v| v.iter().map(map).collect()).collect())
            .collect();
        let unit = self.unit.iter().map(map).collect();
        StructureAlgebra::unchecked(r, self.labels.clone(), consts, unit)
    }

    /// Base change along the inclusion of A's variables as the leading variables of `r`.
    pub fn base_change_prefix(&self, r: Arc<PresentedRing>) -> Result<StructureAlgebra> {
        let n = self.base.nvars();
        if r.nvars() < n || r.vars()[..n] != self.base.vars()[..] || r.field() != self.base.field() {
            return Err(Error::CarrierMismatch(format!(
                "ring on {:?} does not extend the base on {:?}",
                r.vars(),
                self.base.vars()
            )));
        }
        let hom = RingHom::new((0..n).map(|i| r.var(i)).collect());
        Ok(self.base_change(r, &hom))
    }

    /// Presentation over k: base variables, then `b_2 … b_r`, with the multiplication table as relations.
    pub fn flatten(&self) -> Result<PresentedRing> {
        if !self.unit_is_first() {
            return Err(Error::InvalidAlgebra {
                axiom: "first basis vector is the unit".into(),
                indices: vec![1],
            });
        }
        let n = self.base.nvars();
        let r = self.rank();
        let field = self.base.field();
        let bvar = |i: usize| -> Poly {
            if i == 0 {
                Poly::one(field)
            } else {
                Poly::var((n + i - 1) as u32, field)
            }
        };
        let mut rels = Vec::new();
        for i in 1..r {
            for j in i..r {
                let mut rel = bvar(i).mul(&bvar(j));
                for k in 0..r {
                    rel = rel.sub(&self.consts[i][j][k].mul(&bvar(k)));
                }
                rels.push(rel);
            }
        }
        self.base.extend(&self.labels[1..], &rels)
    }

    /// Coordinates of an element of the flattened presentation.
    pub fn from_flat(&self, p: &Poly) -> AlgebraElement {
        let n = self.base.nvars();
        let mut images: Vec<AlgebraElement> = (0..n).map(|i| self.from_base(&self.base.var(i))).collect();
        images.extend((1..self.rank()).map(|i| self.basis_element(i)));
        evaluate(self, p, &images)
    }

    /// `Σ λ_i(x)·b_i` in the flattened presentation.
    pub fn to_flat(&self, x: &AlgebraElement) -> Poly {
        let n = self.base.nvars();
        let field = self.base.field();
        let mut out = Poly::zero();
        for (i, c) in x.coords.iter().enumerate() {
            if i == 0 {
                out = out.add(c);
            } else {
                out = out.add(&c.mul(&Poly::var((n + i - 1) as u32, field)));
            }
        }
        out
    }

    pub fn render(&self, x: &AlgebraElement) -> String {
        let mut parts = Vec::new();
        for (i, c) in x.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let coef = self.base.render(c);
            let coef = if c.len() > 1 { format!("({coef})") } else { coef };
            parts.push(format!("{coef}*{}", self.labels[i]));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl Evaluator for StructureAlgebra {
    type Elem = AlgebraElement;
    fn zero(&self) -> AlgebraElement {
        StructureAlgebra::zero(self)
    }
    fn constant(&self, c: &Scalar) -> AlgebraElement {
        self.from_base(&Poly::constant(c.clone()))
    }
    fn add(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        StructureAlgebra::add(self, a, b)
    }
    fn mul(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        StructureAlgebra::mul(self, a, b)
    }
    fn scale(&self, c: &Scalar, a: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::new(a.coords.iter().map(|x| x.scale(c)).collect())
    }
}

/// Constants of `A[y]/(y^r - c)`-style monogenic algebras are common; this builds any
/// algebra from a rule `b_i b_j ↦ coordinates`.
pub fn constants_from(r: usize, rule: impl Fn(usize, usize) -> Vec<Poly>) -> Vec<Vec<Vec<Poly>>> {
    (0..r).map(|i| (0..r).map(|j| rule(i, j)).collect()).collect()
}
