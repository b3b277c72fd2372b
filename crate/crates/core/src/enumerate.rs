//! Brute-force Hom sets over finite fields, used as the oracle for the adjunction bijection.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::AlgebraElement;
use crate::dstructure::DStructure;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ring::{PresentedRing, RingHom};
use crate::weil::{BHom, PresentedBAlgebra, WeilDescent};
use crate::weil_d::{verify_d_hom, DDescent, Tower};

pub const DEFAULT_BUDGET: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[derive(Default)]
pub enum Strategy {
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}


#[derive(Clone, Copy, Debug)]
pub struct Enumerator {
    pub budget: u64,
    pub strategy: Strategy,
}

impl Default for Enumerator {
    fn default() -> Self {
        Enumerator {
            budget: DEFAULT_BUDGET,
            strategy: Strategy::default(),
        }
    }
}

fn budget_error(base: u64, exp: usize, budget: u64) -> Error {
    Error::CombinatorialBudgetExceeded {
        candidates: format!("{base}^{exp}"),
        budget,
    }
}

fn checked_pow(base: u64, exp: usize, budget: u64) -> Result<u64> {
    let mut n: u64 = 1;
    for _ in 0..exp {
        n = n.checked_mul(base).filter(|&n| n <= budget).ok_or_else(|| budget_error(base, exp, budget))?;
    }
    Ok(n)
}

/// Every element of a ring finite over a finite field, as normal forms in staircase order.
pub fn elements(ring: &PresentedRing, budget: u64) -> Result<Vec<Poly>> {
    let scalars = ring
        .field()
        .elements()
        .ok_or_else(|| Error::NotFiniteDimensional(format!("{} is not a finite field", ring.field())))?;
    let stairs = ring.staircase()?;
    let total = checked_pow(scalars.len() as u64, stairs.len(), budget)?;
    let q = scalars.len() as u64;
    Ok((0..total)
        .map(|mut n| {
            let mut p = Poly::zero();
            for m in &stairs {
                let c = &scalars[(n % q) as usize];
                n /= q;
                if !c.is_zero() {
                    p.add_term(m.clone(), c.clone());
                }
            }
            p
        })
        .collect())
}

impl Enumerator {
    /// Indices `0..total` filtered by `keep`, in increasing order under either strategy.
    fn run<T: Send>(&self, total: u64, keep: impl Fn(u64) -> Option<T> + Sync + Send) -> Vec<T> {
        match self.strategy {
            Strategy::Sequential => (0..total).filter_map(keep).collect(),
            #[cfg(feature = "parallel")]
            Strategy::Parallel => {
                use rayon::prelude::*;
                (0..total).into_par_iter().filter_map(keep).collect()
            }
        }
    }

    /// Ring maps `source → target` extending `fixed` on the leading variables, that kill every
    /// relation and pass `gate`.
    pub fn homs(
        &self,
        source: &PresentedRing,
        target: &PresentedRing,
        fixed: &[Poly],
        gate: impl Fn(&RingHom) -> bool + Sync,
    ) -> Result<Vec<RingHom>> {
        let elems = elements(target, self.budget)?;
        let free = source.nvars() - fixed.len();
        let total = checked_pow(elems.len() as u64, free, self.budget)?;
        let q = elems.len() as u64;
        Ok(self.run(total, |mut n| {
            let mut images = fixed.to_vec();
            for _ in 0..free {
                images.push(elems[(n % q) as usize].clone());
                n /= q;
            }
            let phi = RingHom::new(images);
            (phi.check(source, target).is_ok() && gate(&phi)).then_some(phi)
        }))
    }

    /// B-algebra maps `C → R ⊗_A B` passing `gate`.
    pub fn b_homs(
        &self,
        c: &PresentedBAlgebra,
        r: Arc<PresentedRing>,
        gate: impl Fn(&BHom) -> bool + Sync,
    ) -> Result<Vec<BHom>> {
        let rb = c.tensor_b(r.clone())?;
        let elems = elements(&r, self.budget)?;
        let rank = c.ext().rank();
        let slots = c.ngens() * rank;
        let total = checked_pow(elems.len() as u64, slots, self.budget)?;
        let q = elems.len() as u64;
        Ok(self.run(total, |mut n| {
            let images: Vec<AlgebraElement> = (0..c.ngens())
                .map(|_| {
                    AlgebraElement::new(
                        (0..rank)
                            .map(|_| {
                                let p = elems[(n % q) as usize].clone();
                                n /= q;
                                p
                            })
                            .collect(),
                    )
                })
                .collect();
            let psi = BHom { images };
            (c.check_hom(&rb, &psi.images).is_ok() && gate(&psi)).then_some(psi)
        }))
    }
}

/// A-algebra maps `W(C) → R` (base variables fixed).
pub fn enumerate_a_homs(
    en: &Enumerator,
    w: &WeilDescent,
    r: &PresentedRing,
    gate: impl Fn(&RingHom) -> bool + Sync,
) -> Result<Vec<RingHom>> {
    let n_a = w.c().ext().base().nvars();
    let fixed: Vec<Poly> = (0..n_a).map(|v| r.var(v)).collect();
    en.homs(w.ring(), r, &fixed, gate)
}

#[derive(Clone, Debug, Serialize)]
pub struct AdjointReport {
    /// `|Hom_A(W(C), R)|` and `|Hom_B(C, R ⊗ B)|`.
    pub algebra_homs: (usize, usize),
    /// `|Hom_{(A,e)}(W^D(C,g), (R,u))|` and `|Hom_{(B,f)}((C,g), F^D(R,u))|`.
    pub d_homs: (usize, usize),
    /// `τ^D` maps every enumerated D-hom on the left into the enumerated set on the right.
    pub forward_into: bool,
    /// `(τ^D)⁻¹` maps every enumerated D-hom on the right into the set on the left.
    pub inverse_into: bool,
    pub round_trips: bool,
    /// Same for the classical `τ` on all algebra homs.
    pub classical_bijection: bool,
}

impl AdjointReport {
    pub fn bijection(&self) -> bool {
        self.d_homs.0 == self.d_homs.1 && self.forward_into && self.inverse_into && self.round_trips && self.classical_bijection
    }
}

fn same_bhom(a: &BHom, b: &BHom, r: &PresentedRing) -> bool {
    a.images.len() == b.images.len()
        && a.images.iter().zip(&b.images).all(|(x, y)| x.coords.iter().zip(&y.coords).all(|(p, q)| r.equal(p, q)))
}

/// Enumerate both Hom sets and audit `τ^D` element by element.
pub fn adjoint_check(en: &Enumerator, tower: &Tower, res: &DDescent, u: &DStructure) -> Result<AdjointReport> {
    let w = &res.classical;
    let r = u.carrier();
    let left_all = enumerate_a_homs(en, w, r, |_| true)?;
    let right_all = en.b_homs(w.c(), r.clone(), |_| true)?;
    let left = enumerate_a_homs(en, w, r, |phi| DStructure::is_d_hom(phi, &res.structure, u))?;
    let right = en.b_homs(w.c(), r.clone(), |psi| {
        verify_d_hom(w, psi, &tower.g, u, &res.matrix).unwrap_or(false)
    })?;

    let mut forward_into = true;
    let mut inverse_into = true;
    let mut round_trips = true;
    for phi in &left {
        let psi = res.tau_d_forward(tower, phi, u)?;
        forward_into &= right.iter().any(|x| same_bhom(x, &psi, r));
        round_trips &= res.tau_d_inverse(tower, &psi, u)?.equal_on(phi, r);
    }
    for psi in &right {
        let phi = res.tau_d_inverse(tower, psi, u)?;
        inverse_into &= left.iter().any(|x| x.equal_on(&phi, r));
        round_trips &= same_bhom(&res.tau_d_forward(tower, &phi, u)?, psi, r);
    }
    let mut classical_bijection = left_all.len() == right_all.len();
    for phi in &left_all {
        let psi = w.tau_forward(phi, r.clone())?;
        classical_bijection &= right_all.iter().any(|x| same_bhom(x, &psi, r));
        classical_bijection &= w.tau_inverse(&psi, r.clone())?.equal_on(phi, r);
    }
    Ok(AdjointReport {
        algebra_homs: (left_all.len(), right_all.len()),
        d_homs: (left.len(), right.len()),
        forward_into,
        inverse_into,
        round_trips,
        classical_bijection,
    })
}
