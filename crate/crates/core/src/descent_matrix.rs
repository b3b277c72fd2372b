//! Endomorphism matrices `M^σ_b` and the `rl × rl` matrix `M` of a D-algebra `(B, f)`.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::StructureAlgebra;
use crate::cert::Certificate;
use crate::dalgebra::DAlgebra;
use crate::dstructure::DStructure;
use crate::error::{Error, Result};
use crate::linalg::{determinant, inverse, inverse_scalar, rank, solve, Matrix, Solution};
use crate::poly::Poly;
use crate::ring::{PresentedRing, RingHom};
use crate::scalar::Scalar;

/// `B` free over `A` with basis `b_1 = 1, b_2, …, b_r`, together with its flattened presentation.
#[derive(Clone, Debug, PartialEq)]
pub struct FreeExtension {
    algebra: StructureAlgebra,
    flat: Arc<PresentedRing>,
}

impl FreeExtension {
    pub fn new(algebra: StructureAlgebra) -> Result<Self> {
        algebra.validate()?;
        let flat = Arc::new(algebra.flatten()?);
        Ok(FreeExtension { algebra, flat })
    }

    pub fn algebra(&self) -> &StructureAlgebra {
        &self.algebra
    }

    pub fn base(&self) -> &Arc<PresentedRing> {
        self.algebra.base()
    }

    pub fn flat(&self) -> &Arc<PresentedRing> {
        &self.flat
    }

    pub fn rank(&self) -> usize {
        self.algebra.rank()
    }

    /// `b_i` in the flattened ring (zero-based; `b_0 = 1`).
    pub fn basis_poly(&self, i: usize) -> Poly {
        if i == 0 {
            self.flat.one()
        } else {
            self.flat.var(self.base().nvars() + i - 1)
        }
    }

    /// `λ_1(p), …, λ_r(p)` for `p` in the flattened ring.
    pub fn coords(&self, p: &Poly) -> Vec<Poly> {
        self.algebra.from_flat(p).coords
    }
}

/// `M^σ_b`, entry `(n, i) = λ_n(σ(b_i))`.
#[derive(Clone, Debug, PartialEq)]
pub struct EndoMatrix {
    pub entries: Matrix,
    pub basis_tag: String,
}

impl EndoMatrix {
    pub fn inverse(&self, a: &PresentedRing) -> Result<Matrix> {
        inverse(&self.entries, a)
    }

    pub fn is_invertible(&self, a: &PresentedRing) -> Result<bool> {
        a.is_unit(&determinant(&self.entries, a))
    }
}

/// Check that `σ` restricts to `A`, returning the restriction.
pub fn restrict_to_base(ext: &FreeExtension, sigma: &RingHom) -> Result<RingHom> {
    let n = ext.base().nvars();
    let mut images = Vec::with_capacity(n);
    for v in 0..n {
        let c = ext.coords(&sigma.images[v]);
        if c[1..].iter().any(|x| !x.is_zero()) {
            return Err(Error::Input(format!(
                "endomorphism does not map {} into the base ring",
                ext.base().vars()[v]
            )));
        }
        images.push(c[0].clone());
    }
    Ok(RingHom::new(images))
}

pub fn endo_matrix(ext: &FreeExtension, sigma: &RingHom) -> Result<EndoMatrix> {
    if sigma.images.len() != ext.flat.nvars() {
        return Err(Error::Input(format!(
            "endomorphism gives {} images for {} generators",
            sigma.images.len(),
            ext.flat.nvars()
        )));
    }
    restrict_to_base(ext, sigma)?;
    let r = ext.rank();
    let mut entries = Matrix::zeros(r, r);
    for i in 0..r {
        let img = sigma.apply(&ext.flat, &ext.basis_poly(i));
        for (n, c) in ext.coords(&img).into_iter().enumerate() {
            entries.set(n, i, c);
        }
    }
    Ok(EndoMatrix {
        entries,
        basis_tag: ext.algebra.labels().join(","),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Invertibility {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DescentMatrix {
    matrix: Matrix,
    r: usize,
    l: usize,
    inverse: Option<Matrix>,
    invertible: Invertibility,
    reason: Option<String>,
    certificates: Vec<Certificate>,
}

impl DescentMatrix {
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn l(&self) -> usize {
        self.l
    }

    /// Block `M_{mj}` (zero-based).
    pub fn block(&self, m: usize, j: usize) -> Matrix {
        self.matrix.block(m, j, self.r)
    }

    pub fn inverse(&self) -> Option<&Matrix> {
        self.inverse.as_ref()
    }

    pub fn invertible(&self) -> Invertibility {
        self.invertible
    }

    /// Why inversion failed, when it did.
    pub fn reason(&self) -> Option<&str> {
        self.reason.as_deref()
    }

    pub fn certificates(&self) -> &[Certificate] {
        &self.certificates
    }

    /// Flattened position of the pair (basis index `i`, D-coordinate `j`).
    pub fn position(&self, i: usize, j: usize) -> usize {
        j * self.r + i
    }

    pub fn render(&self, a: &PresentedRing) -> String {
        format!("M = {}", self.matrix.render(a))
    }
}

/// `(M_{mj})_{ni} = Σ_k a_{jkm} λ_n(f_k(b_i))`.
pub fn associated_matrix(ext: &FreeExtension, f: &DStructure) -> Result<DescentMatrix> {
    if f.carrier().vars() != ext.flat.vars() {
        return Err(Error::CarrierMismatch("the structure is not on the flattened presentation of B".into()));
    }
    let d = f.d();
    let (r, l) = (ext.rank(), d.dim());
    let a = ext.base();
    // lam[k][i][n] = λ_n(f_k(b_i))
    let lam: Vec<Vec<Vec<Poly>>> = {
        let imgs: Vec<_> = (0..r).map(|i| f.apply(&ext.basis_poly(i))).collect();
        (0..l)
            .map(|k| (0..r).map(|i| ext.coords(&imgs[i].coords[k])).collect())
            .collect()
    };
    let mut matrix = Matrix::zeros(r * l, r * l);
    for m in 0..l {
        for j in 0..l {
            for n in 0..r {
                for i in 0..r {
                    let mut acc = Poly::zero();
                    for (k, lam_k) in lam.iter().enumerate() {
                        let c = d.a(j, k, m);
                        if !c.is_zero() {
                            acc = acc.add(&lam_k[i][n].scale(c));
                        }
                    }
                    matrix.set(m * r + n, j * r + i, a.normalize(&acc));
                }
            }
        }
    }
    let mut out = DescentMatrix {
        matrix,
        r,
        l,
        inverse: None,
        invertible: Invertibility::Unknown,
        reason: None,
        certificates: Vec::new(),
    };
    if let Some(stratum) = d.stratum() {
        out.certificates.extend(block_facts(&out, ext, f, stratum)?);
    }
    Ok(out)
}

fn block_facts(m: &DescentMatrix, ext: &FreeExtension, f: &DStructure, stratum: &[(usize, usize)]) -> Result<Vec<Certificate>> {
    let a = ext.base();
    let mut upper_zero = true;
    for mm in 0..m.l {
        for j in mm + 1..m.l {
            upper_zero &= m.block(mm, j).is_zero(a);
        }
    }
    let mut diag_ok = true;
    for (j, &(factor, _)) in stratum.iter().enumerate() {
        let sigma = endo_matrix(ext, &f.associated_endomorphism(factor))?;
        diag_ok &= m.block(j, j).equal(&sigma.entries, a);
    }
    Ok(vec![
        Certificate::check("block_lower_triangular", upper_zero, "blocks M_mj with m < j vanish"),
        Certificate::check(
            "diagonal_blocks",
            diag_ok,
            "each diagonal block M_jj equals the matrix of the associated endomorphism owning basis vector j",
        ),
    ])
}

/// Invert over `A`, storing `M⁻¹` with a two-sided check.
pub fn invert_descent_matrix(m: &DescentMatrix, a: &PresentedRing) -> Result<DescentMatrix> {
    let mut out = m.clone();
    match inverse(&m.matrix, a) {
        Ok(inv) => {
            let n = m.matrix.rows();
            let left = m.matrix.mul(&inv, a).is_identity(a);
            let right = inv.mul(&m.matrix, a).is_identity(a);
            let det = determinant(&m.matrix, a);
            out.certificates.push(Certificate::check(
                "inverse_verified",
                left && right,
                format!("M·M⁻¹ = M⁻¹·M = I_{n}"),
            ));
            out.certificates.push(Certificate::pass(
                "determinant_unit",
                format!("det M = {} is a unit", a.render(&det)),
            ));
            out.inverse = Some(inv);
            out.invertible = Invertibility::Yes;
            Ok(out)
        }
        Err(Error::NonInvertibleMatrix { reason, .. }) => Err(Error::NonInvertibleMatrix {
            witness: m.render(a),
            reason,
        }),
        Err(e) => Err(e),
    }
}

/// Invert when possible, recording the outcome instead of failing.
pub fn try_invert(m: &DescentMatrix, a: &PresentedRing) -> DescentMatrix {
    match invert_descent_matrix(m, a) {
        Ok(out) => out,
        Err(Error::NonInvertibleMatrix { reason, .. }) => {
            let mut out = m.clone();
            out.invertible = Invertibility::No;
            out.reason = Some(reason);
            out
        }
        Err(e) => {
            let mut out = m.clone();
            out.reason = Some(e.to_string());
            out
        }
    }
}

/// `X̃`: each entry `x` of `X` replaced by the block `x·I_r`.
pub fn inflate(x: &[Vec<Scalar>], r: usize) -> Matrix {
    let l = x.len();
    let mut out = Matrix::zeros(l * r, l * r);
    for (p, row) in x.iter().enumerate() {
        for (q, c) in row.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for i in 0..r {
                out.set(p * r + i, q * r + i, Poly::constant(c.clone()));
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct ChangeOfBasisReport {
    pub d_eta: DAlgebra,
    pub m_eps: Matrix,
    pub m_eta: Matrix,
    pub conjugated: Matrix,
    pub holds: bool,
}

/// Recompute `M` in the basis `η_i = Σ_j x_{ji} ε_j` and compare with `X̃⁻¹ M^ε X̃`.
pub fn change_of_basis_check(ext: &FreeExtension, f: &DStructure, x: &[Vec<Scalar>]) -> Result<ChangeOfBasisReport> {
    let d = f.d();
    let field = d.field();
    let y = inverse_scalar(x, field).ok_or(Error::SingularBasisChange)?;
    let labels = (1..=d.dim()).map(|i| format!("eta{i}")).collect();
    let d_eta = d.change_basis(x, labels)?;
    let f_eta = f.in_basis(Arc::new(d_eta.clone()), &y)?;
    let a = ext.base();
    let m_eps = associated_matrix(ext, f)?.matrix;
    let m_eta = associated_matrix(ext, &f_eta)?.matrix;
    let r = ext.rank();
    let conjugated = inflate(&y, r).mul(&m_eps, a).mul(&inflate(x, r), a);
    let holds = m_eta.equal(&conjugated, a);
    Ok(ChangeOfBasisReport {
        d_eta,
        m_eps,
        m_eta,
        conjugated,
        holds,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    /// Invertible matrix in the given basis.
    pub given_basis: bool,
    /// Invertible matrix in the basis `b_1, b_2 + b_1, …, b_r + b_1`.
    pub alternative_basis: bool,
    /// `σ(b_1), …, σ(b_r)` is an A-basis (unit determinant of their coordinate matrix).
    pub images_form_basis: bool,
    /// Every `b_j` is an A-combination of the `σ(b_i)`.
    pub images_span: Option<bool>,
    pub agree: bool,
}

/// Evaluate the four equivalent invertibility conditions for `σ` independently.
pub fn invertibility_equivalences(ext: &FreeExtension, sigma: &RingHom) -> Result<EquivalenceReport> {
    let a = ext.base();
    let m = endo_matrix(ext, sigma)?;
    let given_basis = match m.inverse(a) {
        Ok(_) => true,
        Err(Error::NonInvertibleMatrix { .. }) => false,
        Err(e) => return Err(e),
    };

    let r = ext.rank();
    // β_0 = b_0, β_i = b_i + b_0; coordinates in β: μ_0 = λ_0 − Σ_{i>0} λ_i, μ_i = λ_i.
    let beta = |i: usize| {
        if i == 0 {
            ext.basis_poly(0)
        } else {
            ext.basis_poly(i).add(&ext.basis_poly(0))
        }
    };
    let mut alt = Matrix::zeros(r, r);
    for i in 0..r {
        let lam = ext.coords(&sigma.apply(ext.flat(), &beta(i)));
        let mut mu0 = lam[0].clone();
        for c in &lam[1..] {
            mu0 = mu0.sub(c);
        }
        alt.set(0, i, a.normalize(&mu0));
        for (n, c) in lam.into_iter().enumerate().skip(1) {
            alt.set(n, i, c);
        }
    }
    let alternative_basis = match inverse(&alt, a) {
        Ok(_) => true,
        Err(Error::NonInvertibleMatrix { .. }) => false,
        Err(e) => return Err(e),
    };

    let images_form_basis = a.is_unit(&determinant(&m.entries, a))?;

    let mut images_span = Some(true);
    for j in 0..r {
        let target: Vec<Poly> = (0..r).map(|n| if n == j { a.one() } else { Poly::zero() }).collect();
        match solve(&m.entries, &target, a)? {
            Solution::Solved(_) => {}
            Solution::Inconsistent => {
                images_span = Some(false);
                break;
            }
            Solution::Undetermined => images_span = None,
        }
    }
    let agree = given_basis == alternative_basis
        && given_basis == images_form_basis
        && images_span.is_none_or(|s| s == given_basis);
    Ok(EquivalenceReport {
        given_basis,
        alternative_basis,
        images_form_basis,
        images_span,
        agree,
    })
}

/// Whether `b ↦ σ(b)` is a bijective k-linear map of `B`, by rank over the staircase of the
/// flattened ring. Requires `B` finite-dimensional over k.
pub fn k_linear_bijective(ext: &FreeExtension, sigma: &RingHom) -> Result<bool> {
    let flat = ext.flat();
    let stairs = flat.staircase()?;
    let field = flat.field();
    let rows: Vec<Vec<Scalar>> = stairs
        .iter()
        .map(|mono| {
            let img = sigma.apply(flat, &Poly::term(mono.clone(), field.one()));
            stairs
                .iter()
                .map(|s| img.coefficient(s).cloned().unwrap_or_else(|| field.zero()))
                .collect()
        })
        .collect();
    Ok(rank(&rows) == stairs.len())
}
