use std::collections::BTreeSet;

use super::monomial::{Monomial, MonomialOrder};
use super::polynomial::Poly;
use crate::error::{Error, Result};

/// Guard against degenerate blowup.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GbBudget {
    pub max_pairs: usize,
}

impl Default for GbBudget {
    fn default() -> Self {
        GbBudget { max_pairs: 200_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    gens: Vec<Poly>,
    order: MonomialOrder,
    reduced: bool,
}

impl GroebnerBasis {
    pub fn zero_ideal(order: MonomialOrder) -> Self {
        GroebnerBasis {
            gens: Vec::new(),
            order,
            reduced: true,
        }
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].is_constant() && !self.gens[0].is_zero()
    }

    pub fn normal_form(&self, p: &Poly) -> Poly {
        normal_form(p, self)
    }

    pub fn contains(&self, p: &Poly) -> bool {
        self.normal_form(p).is_zero()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.gens
            .iter()
            .map(|g| g.leading(self.order).expect("nonzero generator").0.clone())
            .collect()
    }
}

#[derive(Clone, Debug)]
struct Elem {
    poly: Poly,
    lm: Monomial,
    cof: Option<Poly>,
}

impl Elem {
    fn new(poly: Poly, cof: Option<Poly>, order: MonomialOrder) -> Option<Elem> {
        let (lm, lc) = poly.leading(order).map(|(m, c)| (m.clone(), c.clone()))?;
        let inv = lc.inv().expect("nonzero");
        Some(Elem {
            poly: poly.scale(&inv),
            lm,
            cof: cof.map(|c| c.scale(&inv)),
        })
    }
}

// Full reduction; reducer = first basis element whose leading monomial divides.
fn reduce(p: &Poly, cof: Option<Poly>, basis: &[Elem], order: MonomialOrder) -> (Poly, Option<Poly>) {
    let mut cur = p.clone();
    let mut cof = cof;
    let mut rem = Poly::zero();
    while let Some((m, c)) = cur.leading(order).map(|(m, c)| (m.clone(), c.clone())) {
        match basis.iter().find(|g| g.lm.divides(&m)) {
            Some(g) => {
                let q = g.lm.quotient_of(&m).expect("divides");
                cur = cur.sub(&g.poly.mul_term(&q, &c));
                if let (Some(cf), Some(gc)) = (cof.as_mut(), g.cof.as_ref()) {
                    *cf = cf.sub(&gc.mul_term(&q, &c));
                }
            }
            None => {
                cur.take_term(&m);
                rem.add_term(m, c);
            }
        }
    }
    (rem, cof)
}

pub fn normal_form(p: &Poly, gb: &GroebnerBasis) -> Poly {
    if gb.gens.is_empty() || p.is_zero() {
        return p.clone();
    }
    let order = gb.order;
    let mut cur = p.clone();
    let mut rem = Poly::zero();
    let lms = gb.leading_monomials();
    while let Some((m, c)) = cur.leading(order).map(|(m, c)| (m.clone(), c.clone())) {
        match lms.iter().position(|lm| lm.divides(&m)) {
            Some(i) => {
                let q = lms[i].quotient_of(&m).expect("divides");
                cur = cur.sub(&gb.gens[i].mul_term(&q, &c));
            }
            None => {
                cur.take_term(&m);
                rem.add_term(m, c);
            }
        }
    }
    rem
}

fn spoly(a: &Elem, b: &Elem) -> (Poly, Option<Poly>) {
    let l = a.lm.lcm(&b.lm);
    let qa = a.lm.quotient_of(&l).expect("lcm");
    let qb = b.lm.quotient_of(&l).expect("lcm");
    let one = a.poly.field().expect("nonzero").one();
    let s = a.poly.mul_term(&qa, &one).sub(&b.poly.mul_term(&qb, &one));
    let cof = match (&a.cof, &b.cof) {
        (Some(ca), Some(cb)) => Some(ca.mul_term(&qa, &one).sub(&cb.mul_term(&qb, &one))),
        _ => None,
    };
    (s, cof)
}

enum Outcome {
    Basis(Vec<Elem>),
    Unit(Elem),
}

fn run(
    input: Vec<(Poly, Option<Poly>)>,
    order: MonomialOrder,
    budget: GbBudget,
    tidy_cof: &dyn Fn(&Poly) -> Poly,
) -> Result<Outcome> {
    let mut g: Vec<Elem> = Vec::new();
    for (p, c) in input {
        if let Some(e) = Elem::new(p, c, order) {
            if e.lm.is_one() {
                return Ok(Outcome::Unit(e));
            }
            g.push(e);
        }
    }
    let mut queue: BTreeSet<(u32, usize, usize)> = BTreeSet::new();
    for j in 0..g.len() {
        for i in 0..j {
            queue.insert((g[i].lm.lcm(&g[j].lm).degree(), i, j));
        }
    }
    let in_queue = |q: &BTreeSet<(u32, usize, usize)>, g: &[Elem], a: usize, b: usize| {
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        q.contains(&(g[i].lm.lcm(&g[j].lm).degree(), i, j))
    };
    let mut processed = 0usize;
    while let Some((deg, i, j)) = queue.pop_first() {
        processed += 1;
        if processed > budget.max_pairs {
            return Err(Error::ResourceLimit(format!(
                "Buchberger exceeded {} S-pairs",
                budget.max_pairs
            )));
        }
        if g[i].lm.coprime(&g[j].lm) {
            continue;
        }
        let l = g[i].lm.lcm(&g[j].lm);
        debug_assert_eq!(l.degree(), deg);
        let chain = (0..g.len()).any(|k| {
            k != i
                && k != j
                && g[k].lm.divides(&l)
                && !in_queue(&queue, &g, i, k)
                && !in_queue(&queue, &g, j, k)
        });
        if chain {
            continue;
        }
        let (s, cof) = spoly(&g[i], &g[j]);
        let (r, cof) = reduce(&s, cof, &g, order);
        if let Some(e) = Elem::new(r, cof.map(|c| tidy_cof(&c)), order) {
            if e.lm.is_one() {
                return Ok(Outcome::Unit(e));
            }
            let n = g.len();
            g.push(e);
            for k in 0..n {
                queue.insert((g[k].lm.lcm(&g[n].lm).degree(), k, n));
            }
        }
    }
    Ok(Outcome::Basis(g))
}

fn interreduce(g: Vec<Elem>, order: MonomialOrder) -> Vec<Poly> {
    let mut sorted = g;
    sorted.sort_by(|a, b| order.cmp(&a.lm, &b.lm));
    let mut kept: Vec<Elem> = Vec::new();
    for e in sorted {
        if !kept.iter().any(|k| k.lm.divides(&e.lm)) {
            kept.push(e);
        }
    }
    let mut out: Vec<Poly> = Vec::with_capacity(kept.len());
    for idx in 0..kept.len() {
        let others: Vec<Elem> = kept
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != idx)
            .map(|(_, e)| e.clone())
            .collect();
        let (r, _) = reduce(&kept[idx].poly, None, &others, order);
        out.push(r.monic(order));
    }
    out
}

pub fn buchberger(gens: &[Poly], order: MonomialOrder) -> Result<GroebnerBasis> {
    buchberger_with_budget(gens, order, GbBudget::default())
}

/// Reduced Gröbner basis of the ideal generated by `gens`, sorted by increasing leading monomial.
pub fn buchberger_with_budget(gens: &[Poly], order: MonomialOrder, budget: GbBudget) -> Result<GroebnerBasis> {
    let input = gens.iter().map(|p| (p.clone(), None)).collect();
    let gens = match run(input, order, budget, &|c| c.clone())? {
        Outcome::Unit(e) => vec![e.poly],
        Outcome::Basis(g) => interreduce(g, order),
    };
    Ok(GroebnerBasis {
        gens,
        order,
        reduced: true,
    })
}

/// Decide whether `a` is a unit modulo the ideal of `gb`.
///
/// Runs Buchberger on `gb ∪ {a}` while tracking the cofactor of `a`; the cofactors of
/// the other generators are dropped since they vanish modulo the ideal. Returns `z` with
/// `a·z ≡ 1`, reduced modulo `gb`.
pub fn unit_cofactor(a: &Poly, gb: &GroebnerBasis, budget: GbBudget) -> Result<Option<Poly>> {
    let order = gb.order;
    let a = normal_form(a, gb);
    let Some(field) = a.field() else {
        return Ok(None);
    };
    let mut input: Vec<(Poly, Option<Poly>)> = gb.gens.iter().map(|p| (p.clone(), Some(Poly::zero()))).collect();
    input.push((a, Some(Poly::one(field))));
    let tidy = |c: &Poly| normal_form(c, gb);
    match run(input, order, budget, &tidy)? {
        Outcome::Unit(e) => Ok(Some(normal_form(&e.cof.expect("tracked"), gb))),
        Outcome::Basis(_) => Ok(None),
    }
}

/// Equality of ideals given by Gröbner bases for the same order.
pub fn ideal_equal(g1: &GroebnerBasis, g2: &GroebnerBasis) -> bool {
    let canon = |g: &GroebnerBasis| -> Vec<Poly> {
        if g.reduced {
            g.gens.clone()
        } else {
            buchberger(&g.gens, g.order).map(|b| b.gens).unwrap_or_default()
        }
    };
    let (a, b) = (canon(g1), canon(g2));
    a.len() == b.len() && a.iter().all(|p| b.contains(p))
}
