//! Presented commutative k-algebras `k[vars]/I`, homomorphisms between them, and tensor products.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::parse::parse_poly;
use crate::poly::{buchberger_with_budget, unit_cofactor, GbBudget, GroebnerBasis, Monomial, MonomialOrder, Poly};
use crate::scalar::{Scalar, ScalarField};

/// Something polynomials can be evaluated into.
pub trait Evaluator {
    type Elem: Clone;
    fn zero(&self) -> Self::Elem;
    fn constant(&self, c: &Scalar) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, c: &Scalar, a: &Self::Elem) -> Self::Elem {
        self.mul(&self.constant(c), a)
    }
}

/// Substitute `images[v]` for each variable `v` of `p` and expand in `target`.
pub fn evaluate<E: Evaluator>(target: &E, p: &Poly, images: &[E::Elem]) -> E::Elem {
    let mut powers: HashMap<(u32, u32), E::Elem> = HashMap::new();
    let mut acc = target.zero();
    for (m, c) in p.terms() {
        let mut value: Option<E::Elem> = None;
        for &(v, e) in m.pairs() {
            let pw = power(target, &mut powers, images, v, e);
            value = Some(match value {
                None => pw,
                Some(x) => target.mul(&x, &pw),
            });
        }
        let term = match value {
            None => target.constant(c),
            Some(x) => target.scale(c, &x),
        };
        acc = target.add(&acc, &term);
    }
    acc
}

fn power<E: Evaluator>(
    target: &E,
    cache: &mut HashMap<(u32, u32), E::Elem>,
    images: &[E::Elem],
    v: u32,
    e: u32,
) -> E::Elem {
    if let Some(x) = cache.get(&(v, e)) {
        return x.clone();
    }
    let base = images
        .get(v as usize)
        .unwrap_or_else(|| panic!("no image for variable {v}"))
        .clone();
    let value = if e == 1 {
        base
    } else {
        let half = power(target, cache, images, v, e / 2);
        let sq = target.mul(&half, &half);
        if e % 2 == 1 {
            target.mul(&sq, &base)
        } else {
            sq
        }
    };
    cache.insert((v, e), value.clone());
    value
}

/// `k[variables]/relations` with the relations kept as a reduced Gröbner basis.
///
/// The first `base_vars` variables belong to the base ring the algebra is presented over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedRing {
    field: ScalarField,
    vars: Vec<String>,
    gb: GroebnerBasis,
    base_vars: usize,
}

impl PresentedRing {
    pub fn new(field: ScalarField, vars: Vec<String>, relations: &[Poly]) -> Result<Self> {
        PresentedRing::with_order(field, vars, relations, MonomialOrder::DegRevLex)
    }

    pub fn with_order(field: ScalarField, vars: Vec<String>, relations: &[Poly], order: MonomialOrder) -> Result<Self> {
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::VariableClash(format!("variable {v} declared twice")));
            }
        }
        for r in relations {
            if let Some(m) = r.max_var() {
                if m as usize >= vars.len() {
                    return Err(Error::Input(format!("relation uses undeclared variable index {m}")));
                }
            }
            if let Some(f) = r.field() {
                if f != field {
                    return Err(Error::FieldMismatch(f, field));
                }
            }
        }
        let gb = buchberger_with_budget(relations, order, GbBudget::default())?;
        Ok(PresentedRing {
            field,
            vars,
            gb,
            base_vars: 0,
        })
    }

    /// The ground field as a ring with no variables.
    pub fn ground(field: ScalarField) -> Self {
        PresentedRing {
            field,
            vars: Vec::new(),
            gb: GroebnerBasis::zero_ideal(MonomialOrder::DegRevLex),
            base_vars: 0,
        }
    }

    pub fn polynomial(field: ScalarField, vars: Vec<String>) -> Result<Self> {
        PresentedRing::new(field, vars, &[])
    }

    pub fn with_base_vars(mut self, n: usize) -> Self {
        self.base_vars = n;
        self
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn base_vars(&self) -> usize {
        self.base_vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn gb(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn relations(&self) -> &[Poly] {
        self.gb.gens()
    }

    pub fn order(&self) -> MonomialOrder {
        self.gb.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.gb.is_unit_ideal()
    }

    pub fn normalize(&self, p: &Poly) -> Poly {
        self.gb.normal_form(p)
    }

    pub fn is_zero(&self, p: &Poly) -> bool {
        self.normalize(p).is_zero()
    }

    pub fn equal(&self, a: &Poly, b: &Poly) -> bool {
        self.is_zero(&a.sub(b))
    }

    pub fn var(&self, i: usize) -> Poly {
        self.normalize(&Poly::var(i as u32, self.field))
    }

    pub fn one(&self) -> Poly {
        self.normalize(&Poly::one(self.field))
    }

    pub fn scalar(&self, c: &Scalar) -> Poly {
        self.normalize(&Poly::constant(c.clone()))
    }

    pub fn parse(&self, src: &str, context: &str) -> Result<Poly> {
        Ok(self.normalize(&parse_poly(src, &self.vars, self.field, context)?))
    }

    pub fn render(&self, p: &Poly) -> String {
        p.render(&self.vars, self.order())
    }

    /// Append variables and relations (relations indexed in the enlarged variable list).
    pub fn extend(&self, new_vars: &[String], new_relations: &[Poly]) -> Result<PresentedRing> {
        let mut vars = self.vars.clone();
        vars.extend(new_vars.iter().cloned());
        let mut rels: Vec<Poly> = self.gb.gens().to_vec();
        rels.extend(new_relations.iter().cloned());
        Ok(PresentedRing::with_order(self.field, vars, &rels, self.order())?.with_base_vars(self.nvars()))
    }

    /// The quotient by additional relations, keeping variables and base tag.
    pub fn quotient(&self, extra: &[Poly]) -> Result<PresentedRing> {
        let mut rels: Vec<Poly> = self.gb.gens().to_vec();
        rels.extend(extra.iter().cloned());
        Ok(PresentedRing::with_order(self.field, self.vars.clone(), &rels, self.order())?.with_base_vars(self.base_vars))
    }

    /// `z` with `a·z ≡ 1`, found through cofactor-tracked Gröbner computation.
    pub fn unit_inverse(&self, a: &Poly) -> Result<Poly> {
        let a = self.normalize(a);
        if a.is_zero() {
            return Err(Error::NotAUnit(self.render(&a)));
        }
        if a.is_constant() {
            return Ok(Poly::constant(a.constant_value().expect("nonzero").inv()?));
        }
        match unit_cofactor(&a, &self.gb, GbBudget::default())? {
            Some(z) => {
                debug_assert!(self.is_zero(&a.mul(&z).sub(&Poly::one(self.field))));
                Ok(z)
            }
            None => Err(Error::NotAUnit(self.render(&a))),
        }
    }

    pub fn is_unit(&self, a: &Poly) -> Result<bool> {
        match self.unit_inverse(a) {
            Ok(_) => Ok(true),
            Err(Error::NotAUnit(_)) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// Standard monomials when the quotient is finite-dimensional over k.
    pub fn staircase(&self) -> Result<Vec<Monomial>> {
        if self.is_trivial() {
            return Ok(Vec::new());
        }
        let lms = self.gb.leading_monomials();
        let mut bounds = Vec::with_capacity(self.nvars());
        for v in 0..self.nvars() as u32 {
            let pure = lms
                .iter()
                .filter(|m| m.pairs().len() == 1 && m.pairs()[0].0 == v)
                .map(|m| m.pairs()[0].1)
                .min();
            match pure {
                Some(e) => bounds.push(e),
                None => {
                    return Err(Error::NotFiniteDimensional(format!(
                        "no relation bounds the powers of {}",
                        self.vars[v as usize]
                    )))
                }
            }
        }
        let mut out = Vec::new();
        let mut exps = vec![0u32; bounds.len()];
        loop {
            let m = Monomial::from_pairs(exps.iter().enumerate().map(|(v, &e)| (v as u32, e)));
            if !lms.iter().any(|l| l.divides(&m)) {
                out.push(m);
            }
            let mut i = 0;
            loop {
                if i == exps.len() {
                    out.sort_by(|a, b| self.order().cmp(a, b));
                    return Ok(out);
                }
                exps[i] += 1;
                if exps[i] < bounds[i] {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
        }
    }
}

impl Evaluator for PresentedRing {
    type Elem = Poly;
    fn zero(&self) -> Poly {
        Poly::zero()
    }
    fn constant(&self, c: &Scalar) -> Poly {
        self.scalar(c)
    }
    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a.add(b)
    }
    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.normalize(&a.mul(b))
    }
    fn scale(&self, c: &Scalar, a: &Poly) -> Poly {
        a.scale(c)
    }
}

/// A k-algebra homomorphism given by the images of the source variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingHom {
    pub images: Vec<Poly>,
}

impl RingHom {
    pub fn new(images: Vec<Poly>) -> Self {
        RingHom { images }
    }

    pub fn identity(ring: &PresentedRing) -> Self {
        RingHom {
            images: (0..ring.nvars()).map(|i| ring.var(i)).collect(),
        }
    }

    pub fn apply(&self, target: &PresentedRing, p: &Poly) -> Poly {
        target.normalize(&evaluate(target, p, &self.images))
    }

    /// Every relation of `source` maps to zero in `target`.
    pub fn check(&self, source: &PresentedRing, target: &PresentedRing) -> Result<()> {
        if self.images.len() != source.nvars() {
            return Err(Error::NotAHomomorphism(format!(
                "{} images for {} variables",
                self.images.len(),
                source.nvars()
            )));
        }
        for r in source.relations() {
            if !self.apply(target, r).is_zero() {
                return Err(Error::NotAHomomorphism(format!(
                    "relation {} does not map to zero",
                    source.render(r)
                )));
            }
        }
        Ok(())
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &RingHom, target: &PresentedRing) -> RingHom {
        RingHom {
            images: self.images.iter().map(|p| other.apply(target, p)).collect(),
        }
    }

    pub fn equal_on(&self, other: &RingHom, target: &PresentedRing) -> bool {
        self.images.len() == other.images.len()
            && self.images.iter().zip(&other.images).all(|(a, b)| target.equal(a, b))
    }
}

/// `S ⊗_R T` where `R` is presented by the first `base` variables of both.
///
/// Non-base variables are renamed with suffixes `(1)` and `(2)` when names clash.
pub fn tensor_presented(
    s: &PresentedRing,
    t: &PresentedRing,
    base: usize,
    allow_renaming: bool,
) -> Result<(PresentedRing, RingHom, RingHom)> {
    if s.field() != t.field() {
        return Err(Error::FieldMismatch(s.field(), t.field()));
    }
    if s.nvars() < base || t.nvars() < base || s.vars[..base] != t.vars[..base] {
        return Err(Error::CarrierMismatch("tensor factors do not share the base variables".into()));
    }
    let s_extra = &s.vars[base..];
    let t_extra = &t.vars[base..];
    let clash = s_extra.iter().any(|v| t_extra.contains(v));
    if clash && !allow_renaming {
        return Err(Error::VariableClash("tensor factors share variable names".into()));
    }
    let rename = |v: &String, i: usize| if clash { format!("{v}({i})") } else { v.clone() };
    let mut vars: Vec<String> = s.vars[..base].to_vec();
    vars.extend(s_extra.iter().map(|v| rename(v, 1)));
    vars.extend(t_extra.iter().map(|v| rename(v, 2)));
    let offset_t = s.nvars() - base;
    let map_t = |v: u32| if (v as usize) < base { v } else { v + offset_t as u32 };
    let mut rels: Vec<Poly> = s.relations().to_vec();
    rels.extend(t.relations().iter().map(|r| r.map_vars(map_t)));
    let ring = PresentedRing::with_order(s.field(), vars, &rels, s.order())?.with_base_vars(base);
    let phi_s = RingHom::new((0..s.nvars()).map(|i| ring.var(i)).collect());
    let phi_t = RingHom::new((0..t.nvars()).map(|i| ring.var(map_t(i as u32) as usize)).collect());
    Ok((ring, phi_s, phi_t))
}

pub type RingRef = Arc<PresentedRing>;

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn unit_inverse_examples() {
        let q = ScalarField::Rationals;
        let x = Poly::var(0, q);
        let a = PresentedRing::new(q, names(&["x"]), &[x.mul(&x).sub(&Poly::constant(q.from_i64(2)))]).unwrap();
        let z = a.unit_inverse(&x).unwrap();
        assert_eq!(a.render(&z), "1/2*x");
        let free = PresentedRing::polynomial(q, names(&["x"])).unwrap();
        assert!(matches!(free.unit_inverse(&x), Err(Error::NotAUnit(_))));
        assert_eq!(free.unit_inverse(&Poly::one(q)).unwrap(), Poly::one(q));
        let laurent = PresentedRing::new(q, names(&["x", "y"]), &[free.parse("x", "t").unwrap().mul(&Poly::var(1, q)).sub(&Poly::one(q))]).unwrap();
        let z = laurent.unit_inverse(&x).unwrap();
        assert_eq!(laurent.render(&z), "y");
    }

    #[test]
    fn tensor_products() {
        let f2 = ScalarField::prime(2).unwrap();
        let a_t = PresentedRing::polynomial(f2, names(&["t"])).unwrap();
        let (p, _, phi_t) = tensor_presented(&a_t, &a_t, 0, true).unwrap();
        assert_eq!(p.vars(), &names(&["t(1)", "t(2)"])[..]);
        assert_eq!(p.render(&phi_t.images[0]), "t(2)");
        assert!(tensor_presented(&a_t, &a_t, 0, false).is_err());

        let x = Poly::var(0, f2);
        let sx = PresentedRing::new(f2, names(&["x"]), &[x.mul(&x)]).unwrap();
        let ty = PresentedRing::new(f2, names(&["y"]), &[x.mul(&x)]).unwrap();
        let (p, _, _) = tensor_presented(&sx, &ty, 0, true).unwrap();
        assert_eq!(p.vars(), &names(&["x", "y"])[..]);
        assert_eq!(p.staircase().unwrap().len(), 4);

        let unit = PresentedRing::ground(f2);
        let (p, _, _) = tensor_presented(&sx, &unit, 0, true).unwrap();
        assert_eq!(p, sx);
    }

    #[test]
    fn staircase_requires_finite_dimension() {
        let q = ScalarField::Rationals;
        let r = PresentedRing::polynomial(q, names(&["x"])).unwrap();
        assert!(matches!(r.staircase(), Err(Error::NotFiniteDimensional(_))));
    }
}
