//! D-ring structures `e: R → D(R)` on presented rings, recorded by generator images.

use std::sync::Arc;

use crate::algebra::{AlgebraElement, StructureAlgebra};
use crate::cert::Certificate;
use crate::dalgebra::DAlgebra;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ring::{evaluate, tensor_presented, PresentedRing, RingHom};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct DStructure {
    carrier: Arc<PresentedRing>,
    d: Arc<DAlgebra>,
    dr: StructureAlgebra,
    images: Vec<AlgebraElement>,
    base: Option<Arc<DStructure>>,
}

impl PartialEq for DStructure {
    fn eq(&self, other: &Self) -> bool {
        self.carrier == other.carrier && self.d == other.d && self.images == other.images && self.base == other.base
    }
}

impl DStructure {
    /// Record generator images; nothing is checked beyond shapes (see [`DStructure::validate`]).
    pub fn new(
        carrier: Arc<PresentedRing>,
        d: Arc<DAlgebra>,
        images: Vec<AlgebraElement>,
        base: Option<Arc<DStructure>>,
    ) -> Result<Self> {
        if images.len() != carrier.nvars() {
            return Err(Error::Input(format!(
                "{} generator images for {} generators",
                images.len(),
                carrier.nvars()
            )));
        }
        if images.iter().any(|x| x.coords.len() != d.dim()) {
            return Err(Error::Input(format!("generator images must have {} coordinates", d.dim())));
        }
        if let Some(b) = &base {
            let n = b.carrier.nvars();
            if n > carrier.nvars() || b.carrier.vars() != &carrier.vars()[..n] || b.carrier.field() != carrier.field() {
                return Err(Error::CarrierMismatch(format!(
                    "base generators {:?} are not the leading generators of {:?}",
                    b.carrier.vars(),
                    carrier.vars()
                )));
            }
            if *b.d != *d {
                return Err(Error::CarrierMismatch("base structure uses a different coefficient algebra".into()));
            }
        }
        let dr = d.over(carrier.clone());
        let images = images.iter().map(|x| dr.normalize(x)).collect();
        Ok(DStructure {
            carrier,
            d,
            dr,
            images,
            base,
        })
    }

    /// Images given coordinatewise: `coords[v][j] = e_j(x_v)`.
    pub fn from_coordinates(
        carrier: Arc<PresentedRing>,
        d: Arc<DAlgebra>,
        coords: Vec<Vec<Poly>>,
        base: Option<Arc<DStructure>>,
    ) -> Result<Self> {
        DStructure::new(carrier, d, coords.into_iter().map(AlgebraElement::new).collect(), base)
    }

    /// `e(x) = x·1`, so every associated endomorphism is the identity.
    pub fn identity(carrier: Arc<PresentedRing>, d: Arc<DAlgebra>, base: Option<Arc<DStructure>>) -> Result<Self> {
        let dr = d.over(carrier.clone());
        let images = (0..carrier.nvars()).map(|v| dr.from_base(&carrier.var(v))).collect();
        DStructure::new(carrier, d, images, base)
    }

    /// A difference structure (`D = k`) from an endomorphism.
    pub fn difference(carrier: Arc<PresentedRing>, sigma: &RingHom, base: Option<Arc<DStructure>>) -> Result<Self> {
        let d = match &base {
            Some(b) => b.d.clone(),
            None => Arc::new(DAlgebra::trivial(carrier.field())),
        };
        if d.dim() != 1 {
            return Err(Error::Input("difference structures need D = k".into()));
        }
        let coords = sigma.images.iter().map(|p| vec![p.clone()]).collect();
        DStructure::from_coordinates(carrier, d, coords, base)
    }

    pub fn carrier(&self) -> &Arc<PresentedRing> {
        &self.carrier
    }

    pub fn d(&self) -> &Arc<DAlgebra> {
        &self.d
    }

    /// `D(R)` for the carrier `R`.
    pub fn dr(&self) -> &StructureAlgebra {
        &self.dr
    }

    pub fn images(&self) -> &[AlgebraElement] {
        &self.images
    }

    pub fn image(&self, v: usize) -> &AlgebraElement {
        &self.images[v]
    }

    pub fn base(&self) -> Option<&Arc<DStructure>> {
        self.base.as_ref()
    }

    /// `e(p)`, expanded homomorphically from the generator images.
    pub fn apply(&self, p: &Poly) -> AlgebraElement {
        self.dr.normalize(&evaluate(&self.dr, p, &self.images))
    }

    /// `e_j(p)`, zero-based `j`.
    pub fn coordinate_op(&self, j: usize, p: &Poly) -> Poly {
        self.apply(p).coords.swap_remove(j)
    }

    /// `e_θ(p)`: the letters are applied left to right.
    pub fn word_apply(&self, word: &[usize], p: &Poly) -> Poly {
        word.iter().fold(self.carrier.normalize(p), |x, &j| self.coordinate_op(j, &x))
    }

    /// Every coordinate of the image of every relation lies in the relation ideal, and the
    /// structure agrees with its base on base generators.
    pub fn validate(&self) -> Result<Vec<Certificate>> {
        for rel in self.carrier.relations() {
            let img = self.apply(rel);
            if let Some(j) = img.coords.iter().position(|c| !c.is_zero()) {
                return Err(Error::NotWellDefined {
                    relation: self.carrier.render(rel),
                    coordinate: j + 1,
                });
            }
        }
        let mut certs = vec![Certificate::pass(
            "well_defined",
            format!(
                "all {} coordinates of the images of {} relation generators vanish",
                self.d.dim(),
                self.carrier.relations().len()
            ),
        )];
        if let Some(b) = &self.base {
            for v in 0..b.carrier.nvars() {
                if !self.dr.equal(&self.images[v], &self.dr.normalize(&b.images[v])) {
                    return Err(Error::BaseMismatch {
                        generator: self.carrier.vars()[v].clone(),
                    });
                }
            }
            certs.push(Certificate::pass(
                "extends_base",
                format!("agrees with the base structure on {:?}", b.carrier.vars()),
            ));
        }
        Ok(certs)
    }

    /// The same map coordinatized in the basis `η_r = Σ_k x_kr ε_k` of `d`, where `y = x⁻¹`.
    pub fn in_basis(&self, d: Arc<DAlgebra>, y: &[Vec<Scalar>]) -> Result<DStructure> {
        let base = match &self.base {
            Some(b) => Some(Arc::new(b.in_basis(d.clone(), y)?)),
            None => None,
        };
        let images = self
            .images
            .iter()
            .map(|x| {
                let coords = y
                    .iter()
                    .map(|row| {
                        row.iter()
                            .zip(&x.coords)
                            .filter(|(c, _)| !c.is_zero())
                            .fold(Poly::zero(), |acc, (c, p)| acc.add(&p.scale(c)))
                    })
                    .collect();
                AlgebraElement::new(coords)
            })
            .collect();
        DStructure::new(self.carrier.clone(), d, images, base)
    }

    /// `σ_i = Σ_k π_i(ε_k)·e_k` as a ring endomorphism of the carrier.
    pub fn associated_endomorphism(&self, i: usize) -> RingHom {
        let images = self
            .images
            .iter()
            .map(|x| {
                let mut acc = Poly::zero();
                for (k, c) in x.coords.iter().enumerate() {
                    let pi = self.d.residue(i, k);
                    if !pi.is_zero() {
                        acc = acc.add(&c.scale(pi));
                    }
                }
                self.carrier.normalize(&acc)
            })
            .collect();
        RingHom::new(images)
    }

    pub fn associated_endomorphisms(&self) -> Vec<RingHom> {
        (0..self.d.factors().len()).map(|i| self.associated_endomorphism(i)).collect()
    }

    /// The `i`-th associated endomorphism as a difference structure, over the corresponding
    /// associated endomorphism of the base.
    pub fn associated_structure(&self, i: usize) -> DStructure {
        let base = self.base.as_ref().map(|b| Arc::new(b.associated_structure(i)));
        let sigma = self.associated_endomorphism(i);
        let d = match &base {
            Some(b) => b.d.clone(),
            None => Arc::new(DAlgebra::trivial(self.carrier.field())),
        };
        let coords = sigma.images.into_iter().map(|p| vec![p]).collect();
        DStructure::from_coordinates(self.carrier.clone(), d, coords, base).expect("shapes agree")
    }

    fn d_ideal_witness(&self, gens: &[Poly]) -> Result<Option<(String, usize)>> {
        let ideal = self.carrier.quotient(gens)?;
        for g in gens {
            let img = self.apply(g);
            if let Some(j) = img.coords.iter().position(|c| !ideal.is_zero(c)) {
                return Ok(Some((self.carrier.render(g), j + 1)));
            }
        }
        Ok(None)
    }

    /// Whether every coordinate operator maps the generators of `I` into `I`.
    pub fn d_ideal_check(&self, gens: &[Poly]) -> Result<bool> {
        Ok(self.d_ideal_witness(gens)?.is_none())
    }

    /// The induced structure on `R/I`.
    pub fn quotient(&self, gens: &[Poly]) -> Result<DStructure> {
        if let Some((generator, coordinate)) = self.d_ideal_witness(gens)? {
            return Err(Error::NotDIdeal { generator, coordinate });
        }
        let ring = Arc::new(self.carrier.quotient(gens)?);
        DStructure::new(ring, self.d.clone(), self.images.clone(), self.base.clone())
    }

    /// Same structure reinterpreted on a ring with the same generators and more relations.
    pub fn on_carrier(&self, carrier: Arc<PresentedRing>) -> Result<DStructure> {
        if carrier.vars() != self.carrier.vars() {
            return Err(Error::CarrierMismatch("generators differ".into()));
        }
        DStructure::new(carrier, self.d.clone(), self.images.clone(), self.base.clone())
    }

    /// Whether both structures assign equal images on every generator.
    pub fn same_images(&self, other: &DStructure) -> bool {
        self.d == other.d
            && self.carrier.vars() == other.carrier.vars()
            && self.images.iter().zip(&other.images).all(|(a, b)| self.dr.equal(a, b))
    }

    /// `D(φ)(x)`: apply `φ` to every coordinate.
    pub fn map_element(phi: &RingHom, target: &PresentedRing, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::new(x.coords.iter().map(|c| phi.apply(target, c)).collect())
    }

    /// Whether `φ: (src carrier, src) → (tgt carrier, tgt)` satisfies `D(φ)∘e = e'∘φ` on generators.
    pub fn is_d_hom(phi: &RingHom, src: &DStructure, tgt: &DStructure) -> bool {
        if src.d != tgt.d || phi.images.len() != src.carrier.nvars() {
            return false;
        }
        (0..src.carrier.nvars()).all(|v| {
            let left = DStructure::map_element(phi, &tgt.carrier, &src.images[v]);
            let right = tgt.apply(&phi.images[v]);
            tgt.dr.equal(&left, &right)
        })
    }

    /// Generator images as `(name, [e_1(x), …, e_l(x)])`.
    pub fn render_images(&self) -> Vec<(String, Vec<String>)> {
        self.carrier
            .vars()
            .iter()
            .zip(&self.images)
            .map(|(name, x)| (name.clone(), x.coords.iter().map(|c| self.carrier.render(c)).collect()))
            .collect()
    }
}

/// `f ⊗ g` on `S ⊗_R T`, with the canonical maps.
#[derive(Clone, Debug)]
pub struct TensorDStructure {
    pub structure: DStructure,
    pub phi_s: RingHom,
    pub phi_t: RingHom,
    pub certificates: Vec<Certificate>,
}

pub fn tensor_d_structure(f: &DStructure, g: &DStructure) -> Result<TensorDStructure> {
    if f.d != g.d {
        return Err(Error::CarrierMismatch("tensor factors use different coefficient algebras".into()));
    }
    let base_n = match (&f.base, &g.base) {
        (None, None) => 0,
        (Some(a), Some(b)) => {
            if a.carrier.vars() != b.carrier.vars() || !a.same_images(b) {
                let generator = a
                    .carrier
                    .vars()
                    .iter()
                    .zip(a.images.iter().zip(&b.images))
                    .find(|(_, (x, y))| x != y)
                    .map(|(n, _)| n.clone())
                    .unwrap_or_else(|| "<base>".into());
                return Err(Error::BaseMismatch { generator });
            }
            a.carrier.nvars()
        }
        _ => {
            return Err(Error::BaseMismatch {
                generator: "<base>".into(),
            })
        }
    };
    let (ring, phi_s, phi_t) = tensor_presented(&f.carrier, &g.carrier, base_n, true)?;
    let ring = Arc::new(ring);
    let mut images: Vec<AlgebraElement> = f
        .images
        .iter()
        .map(|x| DStructure::map_element(&phi_s, &ring, x))
        .collect();
    images.extend(
        g.images[base_n..]
            .iter()
            .map(|x| DStructure::map_element(&phi_t, &ring, x)),
    );
    let structure = DStructure::new(ring, f.d.clone(), images, f.base.clone())?;
    let mut certificates = structure.validate()?;
    for (name, phi, src) in [("phi_S_is_d_hom", &phi_s, f), ("phi_T_is_d_hom", &phi_t, g)] {
        let ok = DStructure::is_d_hom(phi, src, &structure);
        certificates.push(Certificate::check(name, ok, "canonical map commutes with the structures on generators"));
        if !ok {
            return Err(Error::NotADHomomorphism(format!("{name} fails")));
        }
    }
    Ok(TensorDStructure {
        structure,
        phi_s,
        phi_t,
        certificates,
    })
}

/// The window `|θ| ≤ L` of the free D-ring `R{T}` over a D-ring `(R, e)`.
#[derive(Clone, Debug)]
pub struct TruncatedDPolynomial {
    base: Arc<DStructure>,
    ring: Arc<PresentedRing>,
    depth: usize,
    generators: Vec<String>,
    /// `(generator, word)` for each new variable, in variable order.
    words: Vec<(usize, Vec<usize>)>,
    images: Vec<Option<AlgebraElement>>,
}

fn word_name(generator: &str, word: &[usize], l: usize) -> String {
    if word.is_empty() {
        return generator.to_string();
    }
    let letters: Vec<String> = word.iter().map(|j| (j + 1).to_string()).collect();
    if l < 10 {
        format!("{generator}_{}", letters.concat())
    } else {
        format!("{generator}_{}", letters.join("_"))
    }
}

impl TruncatedDPolynomial {
    pub fn new(base: Arc<DStructure>, generators: &[String], depth: usize) -> Result<Self> {
        let l = base.d.dim();
        let mut words: Vec<(usize, Vec<usize>)> = Vec::new();
        for (g, _) in generators.iter().enumerate() {
            let mut level: Vec<Vec<usize>> = vec![Vec::new()];
            for len in 0..=depth {
                for w in &level {
                    words.push((g, w.clone()));
                }
                if len < depth {
                    level = level
                        .iter()
                        .flat_map(|w| {
                            (0..l).map(move |j| {
                                let mut w2 = w.clone();
                                w2.push(j);
                                w2
                            })
                        })
                        .collect();
                }
            }
        }
        let names: Vec<String> = words.iter().map(|(g, w)| word_name(&generators[*g], w, l)).collect();
        let ring = Arc::new(base.carrier.extend(&names, &[])?);
        let n0 = base.carrier.nvars();
        let dr = base.d.over(ring.clone());
        let index_of = |g: usize, w: &[usize]| words.iter().position(|(h, v)| *h == g && v == w).map(|p| n0 + p);
        let mut images: Vec<Option<AlgebraElement>> = base.images.iter().map(|x| Some(dr.normalize(x))).collect();
        for (g, w) in &words {
            if w.len() == depth {
                images.push(None);
                continue;
            }
            let coords = (0..l)
                .map(|j| {
                    let mut w2 = w.clone();
                    w2.push(j);
                    ring.var(index_of(*g, &w2).expect("word in window"))
                })
                .collect();
            images.push(Some(AlgebraElement::new(coords)));
        }
        Ok(TruncatedDPolynomial {
            base,
            ring,
            depth,
            generators: generators.to_vec(),
            words,
            images,
        })
    }

    pub fn ring(&self) -> &Arc<PresentedRing> {
        &self.ring
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    /// Index of the variable `t_g^θ`.
    pub fn variable(&self, g: usize, word: &[usize]) -> Option<usize> {
        self.words
            .iter()
            .position(|(h, w)| *h == g && w == word)
            .map(|p| self.base.carrier.nvars() + p)
    }

    /// `e'(p)`; fails when `p` involves a variable at the maximal depth.
    pub fn apply(&self, p: &Poly) -> Result<AlgebraElement> {
        for v in p.vars() {
            if self.images[v as usize].is_none() {
                return Err(Error::TruncationExceeded {
                    variable: self.ring.vars()[v as usize].clone(),
                    depth: self.depth,
                });
            }
        }
        let dr = self.base.d.over(self.ring.clone());
        let images: Vec<AlgebraElement> = self.images.iter().map(|x| x.clone().unwrap_or_else(|| dr.zero())).collect();
        Ok(dr.normalize(&evaluate(&dr, p, &images)))
    }

    pub fn coordinate_op(&self, j: usize, p: &Poly) -> Result<Poly> {
        Ok(self.apply(p)?.coords.swap_remove(j))
    }

    /// `ev_ā`: `t_g^θ ↦ f_θ(a_g)` into an `(R, e)`-algebra `(S, f)`.
    pub fn evaluation(&self, target: &DStructure, points: &[Poly]) -> Result<RingHom> {
        let n0 = self.base.carrier.nvars();
        if points.len() != self.generators.len() {
            return Err(Error::Input(format!("{} points for {} generators", points.len(), self.generators.len())));
        }
        if target.carrier.nvars() < n0 || target.carrier.vars()[..n0] != self.base.carrier.vars()[..] {
            return Err(Error::CarrierMismatch("evaluation target does not extend the base".into()));
        }
        let mut images: Vec<Poly> = (0..n0).map(|v| target.carrier.var(v)).collect();
        images.extend(self.words.iter().map(|(g, w)| target.word_apply(w, &points[*g])));
        Ok(RingHom::new(images))
    }

    /// On every variable below the maximal depth, `D(ev)(e'(t^θ)) = f(ev(t^θ))`.
    pub fn evaluation_is_d_hom(&self, target: &DStructure, ev: &RingHom) -> bool {
        (0..self.ring.nvars()).all(|v| match &self.images[v] {
            None => true,
            Some(x) => {
                let left = DStructure::map_element(ev, &target.carrier, x);
                let right = target.apply(&ev.images[v]);
                target.dr.equal(&left, &right)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ScalarField;

    fn ring(field: ScalarField, vars: &[&str], rels: &[&str]) -> Arc<PresentedRing> {
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let free = PresentedRing::polynomial(field, names.clone()).unwrap();
        let rels: Vec<Poly> = rels.iter().map(|r| free.parse(r, "rel").unwrap()).collect();
        Arc::new(PresentedRing::new(field, names, &rels).unwrap())
    }

    fn structure(r: &Arc<PresentedRing>, d: DAlgebra, coords: &[&[&str]]) -> DStructure {
        let coords = coords
            .iter()
            .map(|row| row.iter().map(|s| r.parse(s, "img").unwrap()).collect())
            .collect();
        DStructure::from_coordinates(r.clone(), Arc::new(d), coords, None).unwrap()
    }

    #[test]
    fn leibniz_rule_for_derivations() {
        let q = ScalarField::Rationals;
        let r = ring(q, &["p", "s"], &[]);
        let e = structure(&r, DAlgebra::dual_numbers(q), &[&["p", "s^2"], &["s", "1"]]);
        let prod = r.parse("p*s", "x").unwrap();
        // δ(ps) = δ(p)s + pδ(s) = s^3 + p.
        assert_eq!(r.render(&e.coordinate_op(1, &prod)), "s^3 + p");
    }

    #[test]
    fn words_compose_left_to_right() {
        let q = ScalarField::Rationals;
        let r = ring(q, &["t"], &[]);
        let e = structure(&r, DAlgebra::dual_numbers(q), &[&["t", "t^2"]]);
        let t = r.var(0);
        assert_eq!(e.word_apply(&[], &t), t);
        assert_eq!(r.render(&e.word_apply(&[1, 1], &t)), "2*t^3");
        assert_eq!(e.word_apply(&[0, 1], &t), e.coordinate_op(1, &e.coordinate_op(0, &t)));
    }

    #[test]
    fn split_coordinates_are_endomorphisms() {
        let f5 = ScalarField::prime(5).unwrap();
        let r = ring(f5, &["x"], &[]);
        let e = structure(&r, DAlgebra::split(f5, 2), &[&["x", "x + 1"]]);
        let x2 = r.parse("x^2", "x").unwrap();
        assert_eq!(r.render(&e.coordinate_op(1, &x2)), "x^2 + 2*x + 1");
        let sig = e.associated_endomorphisms();
        assert_eq!(r.render(&sig[1].images[0]), "x + 1");
        assert_eq!(r.render(&sig[0].images[0]), "x");
    }

    #[test]
    fn well_definedness() {
        let f2 = ScalarField::prime(2).unwrap();
        let r = ring(f2, &["eps"], &["eps^2"]);
        let tau = structure(&r, DAlgebra::trivial(f2), &[&["0"]]);
        assert!(tau.validate().is_ok());
        let r = ring(ScalarField::Rationals, &["t"], &["t^2"]);
        let bad = structure(&r, DAlgebra::trivial(ScalarField::Rationals), &[&["1"]]);
        assert_eq!(bad.validate().unwrap_err().kind(), "NotWellDefined");
        let id = DStructure::identity(r.clone(), Arc::new(DAlgebra::dual_numbers(ScalarField::Rationals)), None).unwrap();
        assert!(id.validate().is_ok());
    }

    #[test]
    fn d_ideals_and_quotients() {
        let q = ScalarField::Rationals;
        let r = ring(q, &["t"], &[]);
        let t = r.var(0);
        let sq = structure(&r, DAlgebra::trivial(q), &[&["t^2"]]);
        assert!(sq.d_ideal_check(std::slice::from_ref(&t)).unwrap());
        assert!(sq.d_ideal_check(&[]).unwrap());
        let shift = structure(&r, DAlgebra::trivial(q), &[&["t + 1"]]);
        assert!(!shift.d_ideal_check(std::slice::from_ref(&t)).unwrap());
        assert_eq!(shift.quotient(std::slice::from_ref(&t)).unwrap_err().kind(), "NotDIdeal");
        let quo = sq.quotient(std::slice::from_ref(&t)).unwrap();
        assert!(quo.validate().is_ok());
        assert!(quo.image(0).coords[0].is_zero());
        let pi = RingHom::identity(&r);
        assert!(DStructure::is_d_hom(&pi, &sq, &quo));
    }

    #[test]
    fn tensor_of_derivations() {
        let q = ScalarField::Rationals;
        let d = DAlgebra::dual_numbers(q);
        let s = ring(q, &["s"], &[]);
        let t = ring(q, &["t"], &[]);
        let f = structure(&s, d.clone(), &[&["s", "s^2"]]);
        let g = structure(&t, d, &[&["t", "1"]]);
        let ten = tensor_d_structure(&f, &g).unwrap();
        let r = ten.structure.carrier().clone();
        let st = r.parse("s*t", "x").unwrap();
        // δ(s)t + s·d(t)
        assert_eq!(r.render(&ten.structure.coordinate_op(1, &st)), "s^2*t + s");
        assert!(ten.certificates.iter().all(|c| c.passed));
    }

    #[test]
    fn truncated_window() {
        let q = ScalarField::Rationals;
        let k = Arc::new(PresentedRing::ground(q));
        let d = Arc::new(DAlgebra::dual_numbers(q));
        let base = Arc::new(DStructure::identity(k, d.clone(), None).unwrap());
        let w = TruncatedDPolynomial::new(base.clone(), &["t".to_string()], 1).unwrap();
        assert_eq!(w.ring().vars(), &["t", "t_1", "t_2"]);
        let t = w.ring().var(0);
        let img = w.apply(&t).unwrap();
        assert_eq!(img.coords, vec![w.ring().var(1), w.ring().var(2)]);
        let err = w.apply(&w.ring().var(1)).unwrap_err();
        assert_eq!(err.kind(), "TruncationExceeded");

        let zero = TruncatedDPolynomial::new(
            Arc::new(DStructure::identity(Arc::new(PresentedRing::ground(q)), Arc::new(DAlgebra::split(q, 2)), None).unwrap()),
            &["t".to_string()],
            0,
        )
        .unwrap();
        assert!(zero.apply(&zero.ring().var(0)).is_err());
    }

    #[test]
    fn evaluation_matches_words() {
        let q = ScalarField::Rationals;
        let k = Arc::new(PresentedRing::ground(q));
        let d = Arc::new(DAlgebra::dual_numbers(q));
        let base = Arc::new(DStructure::identity(k, d.clone(), None).unwrap());
        let w = TruncatedDPolynomial::new(base.clone(), &["t".to_string()], 2).unwrap();
        let s = ring(q, &["x"], &[]);
        let target = DStructure::from_coordinates(
            s.clone(),
            d,
            vec![vec![s.var(0), s.parse("x^2", "x").unwrap()]],
            Some(base),
        )
        .unwrap();
        let ev = w.evaluation(&target, &[s.var(0)]).unwrap();
        let v = w.variable(0, &[1, 1]).unwrap();
        assert_eq!(ev.images[v], target.word_apply(&[1, 1], &s.var(0)));
        assert!(w.evaluation_is_d_hom(&target, &ev));
    }
}
