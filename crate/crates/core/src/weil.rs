//! Classical Weil restriction `W(C)` of a finitely presented B-algebra and the bijection `τ(C, R)`.

use std::sync::Arc;

use crate::algebra::{AlgebraElement, StructureAlgebra};
use crate::descent_matrix::FreeExtension;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ring::{evaluate, PresentedRing, RingHom};

/// `C = B[x_1, …, x_s]/(γ)`, stored flattened over k as `[a…, b_2…b_r, x…]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PresentedBAlgebra {
    ext: Arc<FreeExtension>,
    ring: Arc<PresentedRing>,
    relations: Vec<Poly>,
}

impl PresentedBAlgebra {
    pub fn new(ext: Arc<FreeExtension>, generators: &[String], relations: Vec<Poly>) -> Result<Self> {
        for g in generators {
            if ext.flat().var_index(g).is_some() {
                return Err(Error::VariableClash(format!("generator {g} is already a variable of B")));
            }
        }
        let ring = Arc::new(ext.flat().extend(generators, &relations)?);
        Ok(PresentedBAlgebra { ext, ring, relations })
    }

    pub fn ext(&self) -> &Arc<FreeExtension> {
        &self.ext
    }

    pub fn ring(&self) -> &Arc<PresentedRing> {
        &self.ring
    }

    pub fn relations(&self) -> &[Poly] {
        &self.relations
    }

    pub fn ngens(&self) -> usize {
        self.ring.nvars() - self.ext.flat().nvars()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.ring.vars()[self.ext.flat().nvars()..]
    }

    /// Index of generator `s` in the flattened ring.
    pub fn generator(&self, s: usize) -> usize {
        self.ext.flat().nvars() + s
    }

    /// `R ⊗_A B` for an A-algebra `R` whose leading variables are those of A.
    pub fn tensor_b(&self, r: Arc<PresentedRing>) -> Result<StructureAlgebra> {
        self.ext.algebra().base_change_prefix(r)
    }

    /// Image of `p` under the B-algebra map `C → R ⊗_A B` sending generator `s` to `x_images[s]`.
    pub fn evaluate_into(&self, rb: &StructureAlgebra, x_images: &[AlgebraElement], p: &Poly) -> AlgebraElement {
        let r = rb.base();
        let n_a = self.ext.base().nvars();
        let mut images: Vec<AlgebraElement> = (0..n_a).map(|v| rb.from_base(&r.var(v))).collect();
        images.extend((1..self.ext.rank()).map(|i| rb.basis_element(i)));
        images.extend(x_images.iter().cloned());
        rb.normalize(&evaluate(rb, p, &images))
    }

    /// Check that generator images kill every relation.
    pub fn check_hom(&self, rb: &StructureAlgebra, x_images: &[AlgebraElement]) -> Result<()> {
        if x_images.len() != self.ngens() {
            return Err(Error::NotAHomomorphism(format!(
                "{} images for {} generators",
                x_images.len(),
                self.ngens()
            )));
        }
        for rel in &self.relations {
            if !rb.is_zero(&self.evaluate_into(rb, x_images, rel)) {
                return Err(Error::NotAHomomorphism(format!(
                    "relation {} does not map to zero",
                    self.ring.render(rel)
                )));
            }
        }
        Ok(())
    }
}

/// A B-algebra homomorphism `C → R ⊗_A B`, by generator images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BHom {
    pub images: Vec<AlgebraElement>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeilDescent {
    c: PresentedBAlgebra,
    free: Arc<PresentedRing>,
    ring: Arc<PresentedRing>,
    ideal: Vec<Poly>,
}

pub fn weil_descend(c: &PresentedBAlgebra) -> Result<WeilDescent> {
    let ext = c.ext();
    let r = ext.rank();
    let names: Vec<String> = c
        .generator_names()
        .iter()
        .flat_map(|g| (1..=r).map(move |i| format!("{g}({i})")))
        .collect();
    let free = Arc::new(ext.base().extend(&names, &[])?);
    let bw = c.tensor_b(free.clone())?;
    let x_images: Vec<AlgebraElement> = (0..c.ngens()).map(|s| generic_image(&free, ext.base().nvars(), r, s)).collect();
    let mut ideal = Vec::new();
    for rel in c.relations() {
        for coord in c.evaluate_into(&bw, &x_images, rel).coords {
            if !coord.is_zero() && !ideal.contains(&coord) {
                ideal.push(coord);
            }
        }
    }
    let ring = Arc::new(free.quotient(&ideal)?.with_base_vars(ext.base().nvars()));
    Ok(WeilDescent {
        c: c.clone(),
        free,
        ring,
        ideal,
    })
}

/// `Σ_i x_s(i) ⊗ b_i`.
fn generic_image(w: &PresentedRing, n_a: usize, r: usize, s: usize) -> AlgebraElement {
    AlgebraElement::new((0..r).map(|i| w.var(n_a + s * r + i)).collect())
}

impl WeilDescent {
    pub fn c(&self) -> &PresentedBAlgebra {
        &self.c
    }

    /// `W(B[T])`, the polynomial ring over A on the `x_s(i)`.
    pub fn free(&self) -> &Arc<PresentedRing> {
        &self.free
    }

    /// `W(C) = W(B[T]) / I_C`.
    pub fn ring(&self) -> &Arc<PresentedRing> {
        &self.ring
    }

    /// Generators `λ_i(W_{B[T]}(γ))` of `I_C`.
    pub fn ideal(&self) -> &[Poly] {
        &self.ideal
    }

    pub fn rank(&self) -> usize {
        self.c.ext().rank()
    }

    /// Index of `x_s(i)` in `W(C)` (zero-based `s`, `i`).
    pub fn var(&self, s: usize, i: usize) -> usize {
        self.c.ext().base().nvars() + s * self.rank() + i
    }

    /// `W(C) ⊗_A B`.
    pub fn tensor(&self) -> StructureAlgebra {
        self.c.tensor_b(self.ring.clone()).expect("W(C) extends A")
    }

    /// `W_C(p)` for `p` in the flattened presentation of `C`.
    pub fn unit_apply(&self, p: &Poly) -> AlgebraElement {
        let x_images = self.unit_map().images;
        self.c.evaluate_into(&self.tensor(), &x_images, p)
    }

    /// `W_C(x) = Σ_i x(i) ⊗ b_i` on each generator.
    pub fn unit_map(&self) -> BHom {
        let n_a = self.c.ext().base().nvars();
        BHom {
            images: (0..self.c.ngens())
                .map(|s| generic_image(&self.ring, n_a, self.rank(), s))
                .collect(),
        }
    }

    /// The unit map kills every relation of C.
    pub fn check_unit(&self) -> Result<()> {
        self.c.check_hom(&self.tensor(), &self.unit_map().images)
    }

    fn check_target(&self, r: &PresentedRing) -> Result<()> {
        let a = self.c.ext().base();
        let n = a.nvars();
        if r.nvars() < n || r.vars()[..n] != a.vars()[..] || r.field() != a.field() {
            return Err(Error::CarrierMismatch(format!(
                "{:?} does not extend the base ring {:?}",
                r.vars(),
                a.vars()
            )));
        }
        Ok(())
    }

    /// Completes images of the `x_s(i)` to an A-algebra map `W(C) → R` and checks it.
    pub fn a_hom(&self, r: &PresentedRing, x_images: Vec<Poly>) -> Result<RingHom> {
        self.check_target(r)?;
        let n = self.c.ext().base().nvars();
        if x_images.len() != self.ring.nvars() - n {
            return Err(Error::NotAHomomorphism(format!(
                "{} images for {} descended generators",
                x_images.len(),
                self.ring.nvars() - n
            )));
        }
        let mut images: Vec<Poly> = (0..n).map(|v| r.var(v)).collect();
        images.extend(x_images);
        let phi = RingHom::new(images);
        phi.check(&self.ring, r)?;
        Ok(phi)
    }

    /// `τ(φ) = F(φ) ∘ W_C`: generator `x ↦ Σ_i φ(x(i)) ⊗ b_i`.
    pub fn tau_forward(&self, phi: &RingHom, r: Arc<PresentedRing>) -> Result<BHom> {
        self.check_target(&r)?;
        if phi.images.len() != self.ring.nvars() {
            return Err(Error::NotAHomomorphism("wrong number of images".into()));
        }
        phi.check(&self.ring, &r)?;
        let rb = self.c.tensor_b(r.clone())?;
        let images: Vec<AlgebraElement> = (0..self.c.ngens())
            .map(|s| AlgebraElement::new((0..self.rank()).map(|i| r.normalize(&phi.images[self.var(s, i)])).collect()))
            .collect();
        self.c.check_hom(&rb, &images)?;
        Ok(BHom { images })
    }

    /// `τ⁻¹(ψ)`: `x(i) ↦ λ_i(ψ(x))`.
    pub fn tau_inverse(&self, psi: &BHom, r: Arc<PresentedRing>) -> Result<RingHom> {
        self.check_target(&r)?;
        let rb = self.c.tensor_b(r.clone())?;
        self.c.check_hom(&rb, &psi.images)?;
        let x_images = psi.images.iter().flat_map(|x| x.coords.iter().cloned()).collect();
        self.a_hom(&r, x_images)
    }

    /// The identity of `W(C)`.
    pub fn identity(&self) -> RingHom {
        RingHom::identity(&self.ring)
    }
}

/// `W(h)` for a B-algebra map `h: C → C'` given on the flattened presentation of `C`.
///
/// `W(h)(x(i)) = λ_i(W_{C'}(h(x)))`.
pub fn descend_morphism(h: &RingHom, src: &WeilDescent, tgt: &WeilDescent) -> Result<RingHom> {
    let sc = src.c();
    let tc = tgt.c();
    if sc.ext() != tc.ext() {
        return Err(Error::CarrierMismatch("source and target are over different B".into()));
    }
    let nb = sc.ext().flat().nvars();
    if h.images.len() != sc.ring().nvars() {
        return Err(Error::NotAHomomorphism("wrong number of images".into()));
    }
    for v in 0..nb {
        if !tc.ring().equal(&h.images[v], &tc.ring().var(v)) {
            return Err(Error::NotAHomomorphism(format!(
                "{} is not fixed",
                sc.ring().vars()[v]
            )));
        }
    }
    h.check(sc.ring(), tc.ring())?;
    let mut x_images = Vec::new();
    for s in 0..sc.ngens() {
        let img = tgt.unit_apply(&h.images[sc.generator(s)]);
        x_images.extend(img.coords);
    }
    src.a_hom(tgt.ring(), x_images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::constants_from;
    use crate::scalar::ScalarField;

    pub(crate) fn dual_ext(f: ScalarField) -> Arc<FreeExtension> {
        let a = Arc::new(PresentedRing::ground(f));
        let consts = constants_from(2, |i, j| match (i, j) {
            (0, k) | (k, 0) => (0..2).map(|m| if m == k { Poly::one(f) } else { Poly::zero() }).collect(),
            _ => vec![Poly::zero(), Poly::zero()],
        });
        Arc::new(FreeExtension::new(StructureAlgebra::new(a, vec!["1".into(), "eps".into()], consts).unwrap()).unwrap())
    }

    fn c_alg(ext: &Arc<FreeExtension>, gens: &[&str], rels: &[&str]) -> PresentedBAlgebra {
        let names: Vec<String> = gens.iter().map(|s| s.to_string()).collect();
        let free = ext.flat().extend(&names, &[]).unwrap();
        let rels = rels.iter().map(|r| free.parse(r, "rel").unwrap()).collect();
        PresentedBAlgebra::new(ext.clone(), &names, rels).unwrap()
    }

    #[test]
    fn free_algebra_descends_to_polynomials() {
        let ext = dual_ext(ScalarField::Rationals);
        let c = c_alg(&ext, &["t"], &[]);
        let w = weil_descend(&c).unwrap();
        assert_eq!(w.ring().vars(), &["t(1)", "t(2)"]);
        assert!(w.ideal().is_empty());
        let unit = w.unit_map();
        assert_eq!(w.tensor().render(&unit.images[0]), "t(1)*1 + t(2)*eps");
    }

    #[test]
    fn square_zero_in_characteristic_two() {
        let f2 = ScalarField::prime(2).unwrap();
        let ext = dual_ext(f2);
        let c = c_alg(&ext, &["t"], &["t^2"]);
        let w = weil_descend(&c).unwrap();
        let rendered: Vec<String> = w.ideal().iter().map(|p| w.free().render(p)).collect();
        assert_eq!(rendered, vec!["t(1)^2"]);
        w.check_unit().unwrap();

        let r = Arc::new(PresentedRing::new(f2, vec!["u".into()], &[Poly::var(0, f2).pow(2, f2)]).unwrap());
        let phi = w.a_hom(&r, vec![r.var(0), Poly::zero()]).unwrap();
        let psi = w.tau_forward(&phi, r.clone()).unwrap();
        assert_eq!(psi.images[0].coords, vec![r.var(0), Poly::zero()]);
        assert_eq!(w.tau_inverse(&psi, r.clone()).unwrap(), phi);

        let id = w.identity();
        assert_eq!(w.tau_forward(&id, w.ring().clone()).unwrap(), w.unit_map());
        assert_eq!(w.tau_inverse(&w.unit_map(), w.ring().clone()).unwrap(), id);

        let bad = RingHom::new(vec![Poly::one(f2), Poly::zero()]);
        assert!(matches!(w.tau_forward(&bad, r), Err(Error::NotAHomomorphism(_))));
    }

    #[test]
    fn killing_the_generator() {
        let ext = dual_ext(ScalarField::Rationals);
        let c = c_alg(&ext, &["t"], &["t"]);
        let w = weil_descend(&c).unwrap();
        assert!(w.ring().is_zero(&w.ring().var(0)) && w.ring().is_zero(&w.ring().var(1)));
    }

    #[test]
    fn descended_morphisms() {
        let f2 = ScalarField::prime(2).unwrap();
        let ext = dual_ext(f2);
        let c = c_alg(&ext, &["t"], &[]);
        let w = weil_descend(&c).unwrap();
        let rho = RingHom::new(vec![c.ring().var(0), c.ring().parse("t^2", "h").unwrap()]);
        let wr = descend_morphism(&rho, &w, &w).unwrap();
        assert_eq!(w.ring().render(&wr.images[0]), "t(1)^2");
        assert!(wr.images[1].is_zero());

        let q = ScalarField::Rationals;
        let ext = dual_ext(q);
        let c = c_alg(&ext, &["t"], &[]);
        let w = weil_descend(&c).unwrap();
        let shift = RingHom::new(vec![c.ring().var(0), c.ring().parse("t + 1", "h").unwrap()]);
        let ws = descend_morphism(&shift, &w, &w).unwrap();
        assert_eq!(w.ring().render(&ws.images[0]), "t(1) + 1");
        assert_eq!(w.ring().render(&ws.images[1]), "t(2)");
        let id = RingHom::identity(c.ring());
        assert_eq!(descend_morphism(&id, &w, &w).unwrap(), w.identity());
        let twice = shift.then(&shift, c.ring());
        let wt = descend_morphism(&twice, &w, &w).unwrap();
        assert!(wt.equal_on(&ws.then(&ws, w.ring()), w.ring()));
    }
}
