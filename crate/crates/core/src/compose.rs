//! Composites `Θ(e1, e2) = D1(e2) ∘ e1`, the swap `Γ`, and their behaviour under descent.

use std::sync::Arc;

use serde::Serialize;

use crate::cert::Certificate;
use crate::dalgebra::{DAlgebra, FactorData};
use crate::descent_matrix::endo_matrix;
use crate::dstructure::{tensor_d_structure, DStructure};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ring::RingHom;
use crate::scalar::Scalar;
use crate::weil_d::{descend_d_structure, Tower};

/// `X ⊗_k Y` with basis `ξ_a ⊗ υ_b`, returned with the pair `(a, b)` of each basis vector.
///
/// Basis vectors are grouped by the factor pair and ordered by total level, so the result is
/// stratified whenever both inputs are.
pub fn product_algebra(x: &DAlgebra, y: &DAlgebra) -> Result<(DAlgebra, Vec<(usize, usize)>)> {
    let field = x.field();
    if y.field() != field {
        return Err(Error::FieldMismatch(field, y.field()));
    }
    let (sx, sy) = match (x.stratum(), y.stratum()) {
        (Some(a), Some(b)) => (a.to_vec(), b.to_vec()),
        _ => return Err(Error::Input("product coefficient algebras need stratified bases".into())),
    };
    let mut pairs: Vec<(usize, usize)> = (0..x.dim()).flat_map(|a| (0..y.dim()).map(move |b| (a, b))).collect();
    let key = |&(a, b): &(usize, usize)| (sx[a].0, sy[b].0, sx[a].1 + sy[b].1, a, b);
    pairs.sort_by_key(key);
    let n = pairs.len();
    let index = |a: usize, b: usize| pairs.iter().position(|&p| p == (a, b)).expect("pair");
    let mut consts = vec![vec![vec![field.zero(); n]; n]; n];
    for (u, &(a, b)) in pairs.iter().enumerate() {
        for (v, &(a2, b2)) in pairs.iter().enumerate() {
            for s in 0..x.dim() {
                let cx = x.a(a, a2, s);
                if cx.is_zero() {
                    continue;
                }
                for t in 0..y.dim() {
                    let cy = y.a(b, b2, t);
                    if !cy.is_zero() {
                        consts[u][v][index(s, t)] = cx * cy;
                    }
                }
            }
        }
    }
    let tensor_vec = |va: &[Scalar], vb: &[Scalar]| -> Vec<Scalar> { pairs.iter().map(|&(a, b)| &va[a] * &vb[b]).collect() };
    let unit = tensor_vec(x.unit(), y.unit());
    let mut factors = Vec::new();
    for fx in x.factors() {
        for fy in y.factors() {
            let idempotent = tensor_vec(&fx.idempotent, &fy.idempotent);
            let mut max_ideal: Vec<Vec<Scalar>> = fx.max_ideal().iter().flat_map(|m| fy.powers[0].iter().map(|u| tensor_vec(m, u)).collect::<Vec<_>>()).collect();
            max_ideal.extend(fx.powers[0].iter().flat_map(|u| fy.max_ideal().iter().map(|m| tensor_vec(u, m)).collect::<Vec<_>>()));
            factors.push(FactorData { idempotent, max_ideal });
        }
    }
    let labels = pairs
        .iter()
        .map(|&(a, b)| format!("{}⊗{}", x.labels()[a], y.labels()[b]))
        .collect();
    let d = DAlgebra::new(field, labels, consts, unit, factors)?;
    Ok((d, pairs))
}

/// A structure over `X ⊗_k Y`, with the two factors kept.
#[derive(Clone, Debug, PartialEq)]
pub struct ComposedStructure {
    pub first: Arc<DAlgebra>,
    pub second: Arc<DAlgebra>,
    pub pairs: Vec<(usize, usize)>,
    pub structure: DStructure,
}

impl ComposedStructure {
    /// Coordinate `(a, b)` of the structure, i.e. the operator on `ξ_a ⊗ υ_b`.
    pub fn pair_op(&self, a: usize, b: usize, p: &Poly) -> Poly {
        let k = self.pairs.iter().position(|&q| q == (a, b)).expect("pair");
        self.structure.coordinate_op(k, p)
    }
}

fn same_carrier(s1: &DStructure, s2: &DStructure) -> Result<()> {
    if s1.carrier() != s2.carrier() {
        return Err(Error::CarrierMismatch(format!(
            "structures live on {:?} and {:?}",
            s1.carrier().vars(),
            s2.carrier().vars()
        )));
    }
    Ok(())
}

/// `Θ(e1, e2) = D1(e2) ∘ e1`, over `D2 ⊗ D1` with coordinate `(q, p) = (e2)_q ∘ (e1)_p`.
pub fn compose_structures(e1: &DStructure, e2: &DStructure) -> Result<ComposedStructure> {
    same_carrier(e1, e2)?;
    let (product, pairs) = product_algebra(e2.d(), e1.d())?;
    let product = Arc::new(product);
    let base = match (e1.base(), e2.base()) {
        (None, None) => None,
        (Some(b1), Some(b2)) => Some(Arc::new(compose_structures(b1, b2)?.structure)),
        _ => return Err(Error::CarrierMismatch("only one structure has a base".into())),
    };
    if let Some(b) = &base {
        if **b.d() != *product {
            return Err(Error::CarrierMismatch("base composite uses a different product".into()));
        }
    }
    let coords = (0..e1.carrier().nvars())
        .map(|v| {
            let first = e1.image(v);
            let second: Vec<_> = first.coords.iter().map(|c| e2.apply(c)).collect();
            pairs.iter().map(|&(q, p)| second[p].coords[q].clone()).collect()
        })
        .collect();
    let structure = DStructure::from_coordinates(e1.carrier().clone(), product, coords, base)?;
    Ok(ComposedStructure {
        first: e2.d().clone(),
        second: e1.d().clone(),
        pairs,
        structure,
    })
}

/// `Γ`: reindex a structure over `X ⊗ Y` as one over `Y ⊗ X`.
pub fn gamma_swap(c: &ComposedStructure) -> Result<ComposedStructure> {
    let (product, pairs) = product_algebra(&c.second, &c.first)?;
    let product = Arc::new(product);
    let base = match c.structure.base() {
        Some(b) => {
            let inner = ComposedStructure {
                first: c.first.clone(),
                second: c.second.clone(),
                pairs: c.pairs.clone(),
                structure: (**b).clone(),
            };
            Some(Arc::new(gamma_swap(&inner)?.structure))
        }
        None => None,
    };
    let coords = c
        .structure
        .images()
        .iter()
        .map(|x| {
            pairs
                .iter()
                .map(|&(b, a)| {
                    let k = c.pairs.iter().position(|&q| q == (a, b)).expect("pair");
                    x.coords[k].clone()
                })
                .collect()
        })
        .collect();
    let structure = DStructure::from_coordinates(c.structure.carrier().clone(), product, coords, base)?;
    Ok(ComposedStructure {
        first: c.second.clone(),
        second: c.first.clone(),
        pairs,
        structure,
    })
}

/// `Γ ∘ D1(e2) ∘ e1 = D2(e1) ∘ e2` on generators.
pub fn commutes(e1: &DStructure, e2: &DStructure) -> Result<bool> {
    let left = gamma_swap(&compose_structures(e1, e2)?)?;
    let right = compose_structures(e2, e1)?;
    Ok(left.structure.same_images(&right.structure))
}

/// Operator form: `(e1)_p ∘ (e2)_q = (e2)_q ∘ (e1)_p` on generators, for all `p, q`.
pub fn operators_commute(e1: &DStructure, e2: &DStructure) -> bool {
    let ring = e1.carrier();
    (0..ring.nvars()).all(|v| {
        let x = ring.var(v);
        (0..e1.d().dim()).all(|p| {
            (0..e2.d().dim()).all(|q| {
                let a = e2.coordinate_op(q, &e1.coordinate_op(p, &x));
                let b = e1.coordinate_op(p, &e2.coordinate_op(q, &x));
                ring.equal(&a, &b)
            })
        })
    })
}

/// Compose two towers over the same `C` level by level.
pub fn compose_towers(t1: &Tower, t2: &Tower) -> Result<(Tower, ComposedStructure)> {
    let g = compose_structures(&t1.g, &t2.g)?;
    let f = g.structure.base().expect("tower").clone();
    let e = f.base().expect("tower").clone();
    let tower = Tower::new(e, f, t1.c.clone(), Arc::new(g.structure.clone()))?;
    Ok((tower, g))
}

fn swap_tower(t: &Tower, c: &ComposedStructure) -> Result<Tower> {
    let g = gamma_swap(c)?.structure;
    let f = g.base().expect("tower").clone();
    let e = f.base().expect("tower").clone();
    Tower::new(e, f, t.c.clone(), Arc::new(g))
}

#[derive(Clone, Debug, Serialize)]
pub struct ComposeReport {
    /// `Θ_B(g1, g2)^W = Θ_A(g1^W, g2^W)`.
    pub composite_matches: bool,
    /// `(Γ ∘ Θ_B(g1, g2))^W = Γ ∘ Θ_A(g1^W, g2^W)`.
    pub gamma_matches: bool,
    /// Difference case: `(g2 ∘ g1)^W = g2^W ∘ g1^W` as maps.
    pub monoid_law: Option<bool>,
    /// Difference case: `id^W = id`.
    pub identity_preserved: Option<bool>,
    pub commutes_before: bool,
    pub commutes_after: Option<bool>,
    /// Invertible matrices for every associated endomorphism `σ_j τ_i` of the composite at B.
    pub composite_endomorphisms_invertible: bool,
    pub certificates: Vec<Certificate>,
}

impl ComposeReport {
    pub fn passed(&self) -> bool {
        self.composite_matches
            && self.gamma_matches
            && self.monoid_law.unwrap_or(true)
            && self.identity_preserved.unwrap_or(true)
            && self.commutes_after.unwrap_or(true)
            && self.composite_endomorphisms_invertible
    }
}

pub fn compose_descent_check(t1: &Tower, t2: &Tower) -> Result<ComposeReport> {
    if t1.c != t2.c {
        return Err(Error::CarrierMismatch("towers over different C".into()));
    }
    let w1 = descend_d_structure(t1)?;
    let w2 = descend_d_structure(t2)?;
    let (t12, theta_b) = compose_towers(t1, t2)?;
    let w12 = descend_d_structure(&t12)?;
    let theta_a = compose_structures(&w1.structure, &w2.structure)?;
    let composite_matches = theta_a.structure.same_images(&w12.structure);

    let swapped = swap_tower(&t12, &theta_b)?;
    let w_swapped = descend_d_structure(&swapped)?;
    let gamma_matches = gamma_swap(&theta_a)?.structure.same_images(&w_swapped.structure);

    let mut composite_endomorphisms_invertible = true;
    let a = t1.ext.base();
    for k in 0..t12.f.d().factors().len() {
        let m = endo_matrix(&t12.ext, &t12.f.associated_endomorphism(k))?;
        composite_endomorphisms_invertible &= m.is_invertible(a)?;
    }

    let difference = t1.g.d().dim() == 1 && t2.g.d().dim() == 1;
    let (monoid_law, identity_preserved) = if difference {
        let w = w1.structure.carrier();
        let s1 = w1.structure.associated_endomorphism(0);
        let s2 = w2.structure.associated_endomorphism(0);
        let composite = w12.structure.associated_endomorphism(0);
        let monoid = composite.equal_on(&s1.then(&s2, w), w);
        let id_tower = identity_tower(t1)?;
        let id_w = descend_d_structure(&id_tower)?;
        let identity = id_w.structure.associated_endomorphism(0).equal_on(&RingHom::identity(w), w);
        (Some(monoid), Some(identity))
    } else {
        (None, None)
    };

    let commutes_before = commutes(&t1.g, &t2.g)?;
    let commutes_after = if commutes_before {
        Some(commutes(&w1.structure, &w2.structure)?)
    } else {
        None
    };
    let mut certificates = vec![
        Certificate::check("composite_descends", composite_matches, "Θ_B(g1,g2)^W = Θ_A(g1^W,g2^W) on generators"),
        Certificate::check("gamma_descends", gamma_matches, "(Γ∘Θ_B(g1,g2))^W = Γ∘Θ_A(g1^W,g2^W) on generators"),
        Certificate::check(
            "composite_invertible_matrices",
            composite_endomorphisms_invertible,
            "associated endomorphisms of Θ_B(f1,f2) have invertible matrix",
        ),
    ];
    if let (Some(m), Some(i)) = (monoid_law, identity_preserved) {
        certificates.push(Certificate::check("monoid_law", m, "(g2∘g1)^W = g2^W∘g1^W"));
        certificates.push(Certificate::check("identity_preserved", i, "id^W = id"));
    }
    if let Some(c) = commutes_after {
        certificates.push(Certificate::check("commutation_preserved", c, "g1^W commutes with g2^W"));
    }
    Ok(ComposeReport {
        composite_matches,
        gamma_matches,
        monoid_law,
        identity_preserved,
        commutes_before,
        commutes_after,
        composite_endomorphisms_invertible,
        certificates,
    })
}

/// The tower with the same `e`, `f` and `g = id` over `C`, for `D = k`.
fn identity_tower(t: &Tower) -> Result<Tower> {
    let d = t.g.d().clone();
    let f = Arc::new(DStructure::identity(t.ext.flat().clone(), d.clone(), Some(Arc::new(DStructure::identity(t.ext.base().clone(), d.clone(), None)?)))?);
    let e = f.base().expect("tower").clone();
    let g = Arc::new(DStructure::identity(t.c.ring().clone(), d, Some(f.clone()))?);
    Tower::new(e, f, t.c.clone(), g)
}

#[derive(Clone, Debug, Serialize)]
pub struct TensorComposeReport {
    /// `D1(f2 ⊗ g2) ∘ (f1 ⊗ g1) = (D1(f2) ∘ f1) ⊗ (D1(g2) ∘ g1)`.
    pub composite_of_tensors: bool,
    /// Associated endomorphisms of `f1 ⊗ g1` are `σ_i ⊗ τ_i`.
    pub associated_endomorphisms: bool,
}

/// `f1, g1` over `(R, e1)` and `f2, g2` over `(R, e2)`, with `f` on S and `g` on T.
pub fn tensor_compose_check(f1: &DStructure, f2: &DStructure, g1: &DStructure, g2: &DStructure) -> Result<TensorComposeReport> {
    let t1 = tensor_d_structure(f1, g1)?;
    let t2 = tensor_d_structure(f2, g2)?;
    let left = compose_structures(&t1.structure, &t2.structure)?;
    let fs = compose_structures(f1, f2)?;
    let gs = compose_structures(g1, g2)?;
    let right = tensor_d_structure(&fs.structure, &gs.structure)?;
    let composite_of_tensors = left.structure.same_images(&right.structure);
    let associated_endomorphisms = associated_endomorphisms_of_tensor(f1, g1)?;
    Ok(TensorComposeReport {
        composite_of_tensors,
        associated_endomorphisms,
    })
}

/// The associated endomorphisms of `f ⊗ g` are `σ_i ⊗ τ_i`, checked on generators.
pub fn associated_endomorphisms_of_tensor(f: &DStructure, g: &DStructure) -> Result<bool> {
    let t = tensor_d_structure(f, g)?;
    let ring = t.structure.carrier();
    for i in 0..f.d().factors().len() {
        let sigma = f.associated_endomorphism(i);
        let tau = g.associated_endomorphism(i);
        let both = t.structure.associated_endomorphism(i);
        for v in 0..f.carrier().nvars() {
            let lhs = both.apply(ring, &t.phi_s.images[v]);
            let rhs = t.phi_s.apply(ring, &sigma.images[v]);
            if !ring.equal(&lhs, &rhs) {
                return Ok(false);
            }
        }
        for v in 0..g.carrier().nvars() {
            let lhs = both.apply(ring, &t.phi_t.images[v]);
            let rhs = t.phi_t.apply(ring, &tau.images[v]);
            if !ring.equal(&lhs, &rhs) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::PresentedRing;
    use crate::scalar::ScalarField;
    use crate::weil_d::tests::{square_zero_ext, tower};

    fn on(ring: &Arc<PresentedRing>, d: DAlgebra, imgs: &[&[&str]]) -> DStructure {
        let coords = imgs.iter().map(|r| r.iter().map(|s| ring.parse(s, "img").unwrap()).collect()).collect();
        DStructure::from_coordinates(ring.clone(), Arc::new(d), coords, None).unwrap()
    }

    #[test]
    fn product_of_locals_is_stratified() {
        let q = ScalarField::Rationals;
        let (d, pairs) = product_algebra(&DAlgebra::dual_numbers(q), &DAlgebra::split(q, 2)).unwrap();
        assert_eq!(d.dim(), 4);
        assert!(d.is_stratified());
        assert_eq!(d.factors().len(), 2);
        assert_eq!(pairs.len(), 4);
        let (d3, _) = product_algebra(&DAlgebra::dual_numbers(q), &DAlgebra::dual_numbers(q)).unwrap();
        // m^2 is spanned by eps⊗eps and m^3 = 0.
        assert_eq!(d3.factors()[0].nilpotency(), 2);
    }

    #[test]
    fn difference_composites_are_compositions() {
        let q = ScalarField::Rationals;
        let r = Arc::new(PresentedRing::polynomial(q, vec!["x".into()]).unwrap());
        let s1 = on(&r, DAlgebra::trivial(q), &[&["x^2"]]);
        let s2 = on(&r, DAlgebra::trivial(q), &[&["x + 1"]]);
        let c = compose_structures(&s1, &s2).unwrap();
        // s1 first, then s2: x ↦ (x + 1)^2.
        assert_eq!(r.render(&c.structure.coordinate_op(0, &r.var(0))), "x^2 + 2*x + 1");
        assert_eq!(gamma_swap(&c).unwrap().structure, c.structure);
        assert!(!commutes(&s1, &s2).unwrap());
        assert!(commutes(&s1, &s1).unwrap());
    }

    #[test]
    fn endomorphism_then_derivation() {
        let q = ScalarField::Rationals;
        let r = Arc::new(PresentedRing::polynomial(q, vec!["x".into()]).unwrap());
        let sigma = on(&r, DAlgebra::trivial(q), &[&["x + 1"]]);
        let delta = on(&r, DAlgebra::dual_numbers(q), &[&["x", "1"]]);
        let c = compose_structures(&sigma, &delta).unwrap();
        let x = r.var(0);
        assert_eq!(r.render(&c.pair_op(0, 0, &x)), "x + 1");
        assert_eq!(r.render(&c.pair_op(1, 0, &x)), "1");
        let swapped = gamma_swap(&c).unwrap();
        assert_eq!(gamma_swap(&swapped).unwrap(), c);
        assert!(commutes(&sigma, &delta).unwrap());
        assert!(operators_commute(&sigma, &delta));

        let sq = on(&r, DAlgebra::trivial(q), &[&["x^2"]]);
        assert!(!commutes(&sq, &delta).unwrap());
        assert!(!operators_commute(&sq, &delta));

        let id = DStructure::identity(r.clone(), Arc::new(DAlgebra::dual_numbers(q)), None).unwrap();
        let c = compose_structures(&delta, &id).unwrap();
        assert_eq!(c.pair_op(0, 1, &x), delta.coordinate_op(1, &x));
        assert!(c.pair_op(1, 1, &x).is_zero());
    }

    #[test]
    fn difference_descent_of_composite() {
        let f2 = ScalarField::prime(2).unwrap();
        let ext = square_zero_ext(f2, "eps");
        let t1 = tower(ext.clone(), DAlgebra::trivial(f2), &[&["eps"]], &["t"], &[], &[&["t^2"]]).unwrap();
        let t2 = tower(ext, DAlgebra::trivial(f2), &[&["eps"]], &["t"], &[], &[&["t + eps"]]).unwrap();
        let rep = compose_descent_check(&t1, &t2).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.monoid_law, Some(true));
    }

    #[test]
    fn commuting_pair_descends() {
        let q = ScalarField::Rationals;
        let ext = square_zero_ext(q, "eps");
        let t1 = tower(ext.clone(), DAlgebra::trivial(q), &[&["eps"]], &["t"], &[], &[&["t + 1"]]).unwrap();
        let t2 = tower(ext, DAlgebra::dual_numbers(q), &[&["eps", "0"]], &["t"], &[], &[&["t", "1"]]).unwrap();
        let rep = compose_descent_check(&t1, &t2).unwrap();
        assert!(rep.commutes_before);
        assert_eq!(rep.commutes_after, Some(true));
        assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn tensor_and_composition() {
        let q = ScalarField::Rationals;
        let s = Arc::new(PresentedRing::polynomial(q, vec!["s".into()]).unwrap());
        let t = Arc::new(PresentedRing::polynomial(q, vec!["t".into()]).unwrap());
        let f1 = on(&s, DAlgebra::trivial(q), &[&["s^2"]]);
        let g1 = on(&t, DAlgebra::trivial(q), &[&["t + 1"]]);
        let f2 = on(&s, DAlgebra::dual_numbers(q), &[&["s", "s"]]);
        let g2 = on(&t, DAlgebra::dual_numbers(q), &[&["t", "1"]]);
        let rep = tensor_compose_check(&f1, &f2, &g1, &g2).unwrap();
        assert!(rep.composite_of_tensors && rep.associated_endomorphisms);
        assert!(associated_endomorphisms_of_tensor(&f2, &g2).unwrap());
    }
}
