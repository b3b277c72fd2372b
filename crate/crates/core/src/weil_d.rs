//! Weil descent of D-algebras: the descended structure `g^W` on `W(C)` and the restricted bijection.

use std::sync::Arc;

use crate::algebra::AlgebraElement;
use crate::cert::Certificate;
use crate::descent_matrix::{associated_matrix, invert_descent_matrix, DescentMatrix, FreeExtension};
use crate::dstructure::DStructure;
use crate::error::{Error, Result};
use crate::linalg::{solve, Matrix, Solution};
use crate::poly::Poly;
use crate::ring::{PresentedRing, RingHom};
use crate::weil::{weil_descend, BHom, PresentedBAlgebra, WeilDescent};

/// `(A, e) ≤ (B, f) ≤ (C, g)` with `f` on the flattened B and `g` on the flattened C.
#[derive(Clone, Debug)]
pub struct Tower {
    pub e: Arc<DStructure>,
    pub ext: Arc<FreeExtension>,
    pub f: Arc<DStructure>,
    pub c: PresentedBAlgebra,
    pub g: Arc<DStructure>,
}

impl Tower {
    pub fn new(e: Arc<DStructure>, f: Arc<DStructure>, c: PresentedBAlgebra, g: Arc<DStructure>) -> Result<Self> {
        let ext = c.ext().clone();
        if f.carrier().vars() != ext.flat().vars() || g.carrier().vars() != c.ring().vars() {
            return Err(Error::CarrierMismatch("structures are not on the flattened presentations".into()));
        }
        if f.base().map(|b| **b != *e).unwrap_or(true) || g.base().map(|b| **b != *f).unwrap_or(true) {
            return Err(Error::CarrierMismatch("structures do not form a tower".into()));
        }
        Ok(Tower { e, ext, f, c, g })
    }

    /// Validate every level, returning the certificates.
    pub fn validate(&self) -> Result<Vec<Certificate>> {
        let mut out = Vec::new();
        for (level, s) in [("A", &self.e), ("B", &self.f), ("C", &self.g)] {
            for mut c in s.validate()? {
                c.name = format!("{level}.{}", c.name);
                out.push(c);
            }
        }
        Ok(out)
    }

    /// The same tower with `g` replaced.
    pub fn with_g(&self, g: Arc<DStructure>) -> Result<Tower> {
        Tower::new(self.e.clone(), self.f.clone(), self.c.clone(), g)
    }

    /// The `i`-th associated endomorphisms at every level, as a difference tower.
    pub fn associated(&self, i: usize) -> Result<Tower> {
        let g = Arc::new(self.g.associated_structure(i));
        let f = g.base().expect("tower").clone();
        let e = f.base().expect("tower").clone();
        Tower::new(e, f, self.c.clone(), g)
    }
}

#[derive(Clone, Debug)]
pub struct DDescent {
    pub classical: WeilDescent,
    /// `g^W` on `W(C)`.
    pub structure: DStructure,
    /// The structure on `W(B[T])` before passing to the quotient.
    pub free_structure: DStructure,
    pub matrix: DescentMatrix,
    pub certificates: Vec<Certificate>,
}

/// `(λ_n W(g_m(x_s)))` at position `m·r + n`, for each generator `s`, over `target`.
fn rhs_vectors(w: &WeilDescent, g: &DStructure, target: &Arc<PresentedRing>) -> Result<Vec<Vec<Poly>>> {
    let c = w.c();
    let rb = c.tensor_b(target.clone())?;
    let unit = generic_images(w, target);
    let l = g.d().dim();
    Ok((0..c.ngens())
        .map(|s| {
            let gx = g.apply(&c.ring().var(c.generator(s)));
            (0..l)
                .flat_map(|m| c.evaluate_into(&rb, &unit, &gx.coords[m]).coords)
                .collect()
        })
        .collect())
}

fn generic_images(w: &WeilDescent, target: &PresentedRing) -> Vec<AlgebraElement> {
    (0..w.c().ngens())
        .map(|s| AlgebraElement::new((0..w.rank()).map(|i| target.var(w.var(s, i))).collect()))
        .collect()
}

pub fn descend_d_structure(tower: &Tower) -> Result<DDescent> {
    let ext = &tower.ext;
    let a = ext.base();
    let (r, l) = (ext.rank(), tower.f.d().dim());

    let matrix = invert_descent_matrix(&associated_matrix(ext, &tower.f)?, a)?;
    let minv = matrix.inverse().expect("inverted").clone();
    let classical = weil_descend(&tower.c)?;
    let free = classical.free().clone();

    let vs = rhs_vectors(&classical, &tower.g, &free)?;
    let n_a = a.nvars();
    let mut coords: Vec<Vec<Poly>> = (0..n_a).map(|v| tower.e.image(v).coords.clone()).collect();
    coords.resize(free.nvars(), Vec::new());
    let mut solved = Vec::with_capacity(vs.len());
    for (s, v) in vs.iter().enumerate() {
        let u = minv.mul_vec(v, &free);
        for i in 0..r {
            coords[classical.var(s, i)] = (0..l).map(|j| u[j * r + i].clone()).collect();
        }
        solved.push(u);
    }
    let free_structure = DStructure::from_coordinates(free.clone(), tower.f.d().clone(), coords, Some(tower.e.clone()))?;

    let mut certificates = matrix.certificates().to_vec();
    if !free_structure.d_ideal_check(classical.ideal())? {
        // Cannot happen for valid inputs; surfaces malformed structures.
        free_structure.quotient(classical.ideal())?;
    }
    certificates.push(Certificate::pass(
        "ideal_is_d_ideal",
        format!(
            "each coordinate operator maps the {} generators of I_C into I_C",
            classical.ideal().len()
        ),
    ));
    let structure = free_structure.quotient(classical.ideal())?;
    certificates.extend(structure.validate()?.into_iter().map(|mut c| {
        c.name = format!("W.{}", c.name);
        c
    }));

    let unit = classical.unit_map();
    let ok = verify_d_hom(&classical, &unit, &tower.g, &structure, &matrix)?;
    certificates.push(Certificate::check(
        "unit_is_d_hom",
        ok,
        "(λ_i W_C g_j(x)) = M·(g^W_j λ_i W_C(x)) on every generator of C",
    ));
    if !ok {
        return Err(Error::NotADHomomorphism("the unit map fails the matrix identity".into()));
    }

    let unique = rederive(&matrix.matrix().clone(), &vs, &solved, &free)?;
    certificates.push(Certificate::check(
        "uniqueness_basis",
        unique,
        "an independent solve of M·u = v reproduces the generator images",
    ));

    Ok(DDescent {
        classical,
        structure,
        free_structure,
        matrix,
        certificates,
    })
}

fn rederive(m: &Matrix, vs: &[Vec<Poly>], solved: &[Vec<Poly>], ring: &PresentedRing) -> Result<bool> {
    for (v, u) in vs.iter().zip(solved) {
        match solve(m, v, ring)? {
            Solution::Solved(x) => {
                if x.iter().zip(u).any(|(p, q)| !ring.equal(p, q)) {
                    return Ok(false);
                }
            }
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// The matrix identity `(λ_i φ g_j(x)) = M·(u_j λ_i φ(x))` on every generator of `C`.
pub fn verify_d_hom(w: &WeilDescent, psi: &BHom, g: &DStructure, u: &DStructure, m: &DescentMatrix) -> Result<bool> {
    let c = w.c();
    let r_ring = u.carrier();
    let rb = c.tensor_b(r_ring.clone())?;
    if c.check_hom(&rb, &psi.images).is_err() {
        return Ok(false);
    }
    let (r, l) = (m.r(), m.l());
    for s in 0..c.ngens() {
        let gx = g.apply(&c.ring().var(c.generator(s)));
        let lhs: Vec<Poly> = (0..l)
            .flat_map(|j| c.evaluate_into(&rb, &psi.images, &gx.coords[j]).coords)
            .collect();
        let mut rhs = vec![Poly::zero(); r * l];
        for i in 0..r {
            let img = u.apply(&psi.images[s].coords[i]);
            for (j, cj) in img.coords.into_iter().enumerate() {
                rhs[j * r + i] = cj;
            }
        }
        let prod = m.matrix().mul_vec(&rhs, r_ring);
        if lhs.iter().zip(&prod).any(|(p, q)| !r_ring.equal(p, q)) {
            return Ok(false);
        }
    }
    Ok(true)
}

impl DDescent {
    /// `τ^D(φ)` for a D-homomorphism `φ: (W(C), g^W) → (R, u)`.
    pub fn tau_d_forward(&self, tower: &Tower, phi: &RingHom, u: &DStructure) -> Result<BHom> {
        if !DStructure::is_d_hom(phi, &self.structure, u) {
            return Err(Error::NotADHomomorphism("φ does not commute with the structures".into()));
        }
        let psi = self.classical.tau_forward(phi, u.carrier().clone())?;
        if !verify_d_hom(&self.classical, &psi, &tower.g, u, &self.matrix)? {
            return Err(Error::NotADHomomorphism("image fails the matrix identity".into()));
        }
        Ok(psi)
    }

    /// `(τ^D)⁻¹(ψ)` for a D-homomorphism `ψ: (C, g) → F^D(R, u)`.
    pub fn tau_d_inverse(&self, tower: &Tower, psi: &BHom, u: &DStructure) -> Result<RingHom> {
        if !verify_d_hom(&self.classical, psi, &tower.g, u, &self.matrix)? {
            return Err(Error::NotADHomomorphism("ψ fails the matrix identity".into()));
        }
        let phi = self.classical.tau_inverse(psi, u.carrier().clone())?;
        if !DStructure::is_d_hom(&phi, &self.structure, u) {
            return Err(Error::NotADHomomorphism("preimage does not commute with the structures".into()));
        }
        Ok(phi)
    }

    /// `δ(pq) = σ(p)δ(q) + δ(p)q` style check for the coordinate `j` when all associated
    /// endomorphisms are trivial: `e_j(pq) = e_j(p)q + p·e_j(q)`.
    pub fn leibniz_holds(&self, j: usize, p: &Poly, q: &Poly) -> bool {
        let w = self.structure.carrier();
        let left = self.structure.coordinate_op(j, &p.mul(q));
        let right = self
            .structure
            .coordinate_op(j, p)
            .mul(q)
            .add(&p.mul(&self.structure.coordinate_op(j, q)));
        w.equal(&left, &right)
    }
}

#[derive(Clone, Debug)]
pub struct EndomorphismCheck {
    pub factor: usize,
    /// `i`-th associated endomorphism of `g^W`.
    pub of_descent: RingHom,
    /// Difference descent of the `i`-th associated endomorphism of `g`.
    pub descent_of: RingHom,
    pub equal: bool,
    /// Set when the associated endomorphism of `g` is the identity.
    pub identity_preserved: Option<bool>,
}

/// Compare the associated endomorphisms of `g^W` with the difference descents of those of `g`.
pub fn descended_endomorphisms_check(tower: &Tower, result: &DDescent) -> Result<Vec<EndomorphismCheck>> {
    let w = result.structure.carrier();
    let mut out = Vec::new();
    for i in 0..tower.f.d().factors().len() {
        let diff = descend_d_structure(&tower.associated(i)?)?;
        let of_descent = result.structure.associated_endomorphism(i);
        let descent_of = diff.structure.associated_endomorphism(0);
        let equal = of_descent.equal_on(&descent_of, w);
        let eta = tower.g.associated_endomorphism(i);
        let identity_preserved = eta
            .equal_on(&RingHom::identity(tower.c.ring()), tower.c.ring())
            .then(|| of_descent.equal_on(&RingHom::identity(w), w));
        out.push(EndomorphismCheck {
            factor: i,
            of_descent,
            descent_of,
            equal,
            identity_preserved,
        });
    }
    Ok(out)
}
