use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use super::monomial::{Monomial, MonomialOrder};
use crate::scalar::{Scalar, ScalarField};

/// A polynomial over k with no stored zero coefficients.
///
/// Terms are kept in a map sorted by degree-reverse-lexicographic order; other orders
/// are applied by the routines that need leading terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::term(Monomial::one(), c)
    }

    pub fn one(field: ScalarField) -> Self {
        Poly::constant(field.one())
    }

    pub fn var(v: u32, field: ScalarField) -> Self {
        Poly::term(Monomial::var(v), field.one())
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn field(&self) -> Option<ScalarField> {
        self.terms.values().next().map(|c| c.field())
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&Scalar> {
        self.terms.get(m)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The constant coefficient (zero polynomial gives `None`).
    pub fn constant_value(&self) -> Option<&Scalar> {
        self.terms.get(&Monomial::one())
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = &*existing + &c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Remove and return the coefficient of `m`.
    pub fn take_term(&mut self, m: &Monomial) -> Option<Scalar> {
        self.terms.remove(m)
    }

    pub fn leading(&self, order: MonomialOrder) -> Option<(&Monomial, &Scalar)> {
        match order {
            MonomialOrder::DegRevLex => self.terms.iter().next_back(),
            _ => self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0)),
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<u32> {
        self.terms
            .keys()
            .flat_map(|m| m.pairs().iter().map(|&(v, _)| v))
            .collect()
    }

    pub fn max_var(&self) -> Option<u32> {
        self.terms.keys().filter_map(Monomial::max_var).max()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(n, a)| (n.mul(m), a * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut acc: HashMap<Monomial, Scalar> = HashMap::with_capacity(self.len() * other.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let c = c1 * c2;
                match acc.get_mut(&m) {
                    Some(e) => *e = &*e + &c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Poly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn pow(&self, e: u32, field: ScalarField) -> Poly {
        let mut acc = Poly::one(field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self, order: MonomialOrder) -> Poly {
        match self.leading(order) {
            None => Poly::zero(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Relabel variables through an injective map.
    pub fn map_vars(&self, f: impl Fn(u32) -> u32) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.map_vars(&f), c.clone())))
    }

    /// Canonical text: terms in decreasing `order`, `coef*var^k` factors.
    pub fn render(&self, names: &[String], order: MonomialOrder) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<(&Monomial, &Scalar)> = self.terms.iter().collect();
        terms.sort_by(|a, b| order.cmp(b.0, a.0));
        let mut out = String::new();
        for (idx, (m, c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative();
            let abs = if negative { -c } else { c.clone() };
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for &(v, e) in m.pairs() {
                let name = names
                    .get(v as usize)
                    .cloned()
                    .unwrap_or_else(|| format!("_v{v}"));
                if e == 1 {
                    factors.push(name);
                } else {
                    factors.push(format!("{name}^{e}"));
                }
            }
            let _ = write!(out, "{}", factors.join("*"));
        }
        out
    }
}
