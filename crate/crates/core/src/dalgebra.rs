//! The coefficient algebra D: a finite-dimensional k-algebra split into local factors with
//! residue field k, and its stratified basis.

use std::sync::Arc;

use crate::algebra::StructureAlgebra;
use crate::cert::Certificate;
use crate::error::{Error, Result};
use crate::linalg::{express_in, in_span, inverse_scalar, rank, rref};
use crate::poly::Poly;
use crate::ring::PresentedRing;
use crate::scalar::{Scalar, ScalarField};

/// User-supplied data for one local factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorData {
    pub idempotent: Vec<Scalar>,
    /// Spanning set of the maximal ideal.
    pub max_ideal: Vec<Vec<Scalar>>,
}

/// A validated local factor `u·D` with maximal ideal `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFactor {
    pub idempotent: Vec<Scalar>,
    /// `powers[j]` is a basis of `m^j`, with `m^0 = u·D`. The last entry is nonzero.
    pub powers: Vec<Vec<Vec<Scalar>>>,
}

impl LocalFactor {
    pub fn max_ideal(&self) -> &[Vec<Scalar>] {
        self.powers.get(1).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Least `d` with `m^{d+1} = 0`.
    pub fn nilpotency(&self) -> usize {
        self.powers.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.powers[0].len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DAlgebra {
    field: ScalarField,
    labels: Vec<String>,
    consts: Vec<Vec<Vec<Scalar>>>,
    unit: Vec<Scalar>,
    factors: Vec<LocalFactor>,
    /// `(factor, level)` of each basis vector when the basis is stratified.
    stratum: Option<Vec<(usize, usize)>>,
    /// `residue[i][k] = π_i(ε_k)`.
    residue: Vec<Vec<Scalar>>,
}

impl DAlgebra {
    /// Validate the algebra and its local decomposition, and require a stratified basis.
    pub fn new(
        field: ScalarField,
        labels: Vec<String>,
        consts: Vec<Vec<Vec<Scalar>>>,
        unit: Vec<Scalar>,
        factors: Vec<FactorData>,
    ) -> Result<Self> {
        let mut d = DAlgebra::unstratified(field, labels, consts, unit, factors)?;
        d.stratum = Some(d.check_stratified()?);
        d.verify_case_facts()?;
        Ok(d)
    }

    /// Validate everything except stratification of the basis.
    pub fn unstratified(
        field: ScalarField,
        labels: Vec<String>,
        consts: Vec<Vec<Vec<Scalar>>>,
        unit: Vec<Scalar>,
        factors: Vec<FactorData>,
    ) -> Result<Self> {
        let l = labels.len();
        if l == 0 {
            return Err(Error::Input("D needs at least one basis vector".into()));
        }
        let check_len = |v: &[Scalar], what: &str| -> Result<()> {
            if v.len() != l {
                Err(Error::Input(format!("{what} has {} coordinates, expected {l}", v.len())))
            } else if v.iter().any(|c| c.field() != field) {
                Err(Error::Input(format!("{what} has coordinates outside {field}")))
            } else {
                Ok(())
            }
        };
        check_len(&unit, "unit")?;
        for f in &factors {
            check_len(&f.idempotent, "idempotent")?;
            for m in &f.max_ideal {
                check_len(m, "maximal ideal element")?;
            }
        }
        let ground = Arc::new(PresentedRing::ground(field));
        let poly_consts: Vec<Vec<Vec<Poly>>> = consts
            .iter()
            .map(|row| row.iter().map(|v| v.iter().map(|c| Poly::constant(c.clone())).collect()).collect())
            .collect();
        let poly_unit = unit.iter().map(|c| Poly::constant(c.clone())).collect();
        StructureAlgebra::with_unit(ground, labels.clone(), poly_consts, poly_unit)?;
        let mut d = DAlgebra {
            field,
            labels,
            consts,
            unit,
            factors: Vec::new(),
            stratum: None,
            residue: Vec::new(),
        };
        d.factors = d.check_factors(&factors)?;
        d.residue = d.compute_residues();
        Ok(d)
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `a_{jkm}`: `ε_j ε_k = Σ_m a_{jkm} ε_m`.
    pub fn a(&self, j: usize, k: usize, m: usize) -> &Scalar {
        &self.consts[j][k][m]
    }

    pub fn constants(&self) -> &Vec<Vec<Vec<Scalar>>> {
        &self.consts
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn factors(&self) -> &[LocalFactor] {
        &self.factors
    }

    pub fn stratum(&self) -> Option<&[(usize, usize)]> {
        self.stratum.as_deref()
    }

    pub fn is_stratified(&self) -> bool {
        self.stratum.is_some()
    }

    /// `π_i(ε_k)`.
    pub fn residue(&self, i: usize, k: usize) -> &Scalar {
        &self.residue[i][k]
    }

    /// Index of the unit of factor `i` in a stratified basis.
    pub fn factor_unit_index(&self, i: usize) -> Option<usize> {
        self.stratum.as_ref()?.iter().position(|&(f, lv)| f == i && lv == 0)
    }

    pub fn basis_vector(&self, k: usize) -> Vec<Scalar> {
        (0..self.dim())
            .map(|i| if i == k { self.field.one() } else { self.field.zero() })
            .collect()
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let l = self.dim();
        let mut out = vec![self.field.zero(); l];
        for (j, xj) in x.iter().enumerate() {
            if xj.is_zero() {
                continue;
            }
            for (k, yk) in y.iter().enumerate() {
                if yk.is_zero() {
                    continue;
                }
                let c = xj * yk;
                for (m, o) in out.iter_mut().enumerate() {
                    let a = &self.consts[j][k][m];
                    if !a.is_zero() {
                        *o = &*o + &(&c * a);
                    }
                }
            }
        }
        out
    }

    fn add(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        x.iter().zip(y).map(|(a, b)| a + b).collect()
    }

    /// `D(R) = R ⊗_k D` as a structure algebra over `ring`.
    pub fn over(&self, ring: Arc<PresentedRing>) -> StructureAlgebra {
        let consts = self
            .consts
            .iter()
            .map(|row| row.iter().map(|v| v.iter().map(|c| Poly::constant(c.clone())).collect()).collect())
            .collect();
        let unit = self.unit.iter().map(|c| Poly::constant(c.clone())).collect();
        StructureAlgebra::unchecked(ring, self.labels.clone(), consts, unit)
    }

    /// `Σ v_k ε_k` as text.
    pub fn render_vector(&self, v: &[Scalar]) -> String {
        let ground = PresentedRing::polynomial(self.field, self.labels.clone()).expect("distinct labels");
        let mut p = Poly::zero();
        for (k, c) in v.iter().enumerate() {
            p.add_term(crate::poly::Monomial::var(k as u32), c.clone());
        }
        ground.render(&p)
    }

    fn check_factors(&self, data: &[FactorData]) -> Result<Vec<LocalFactor>> {
        let f = self.field;
        if data.is_empty() {
            return Err(Error::BadIdempotents("no local factors supplied".into()));
        }
        let mut sum = vec![f.zero(); self.dim()];
        for (i, fi) in data.iter().enumerate() {
            let u = &fi.idempotent;
            if u.iter().all(Scalar::is_zero) {
                return Err(Error::BadIdempotents(format!("idempotent {} is zero", i + 1)));
            }
            if self.mul(u, u) != *u {
                return Err(Error::BadIdempotents(format!("idempotent {} does not square to itself", i + 1)));
            }
            for (j, fj) in data.iter().enumerate().skip(i + 1) {
                if self.mul(u, &fj.idempotent).iter().any(|c| !c.is_zero()) {
                    return Err(Error::BadIdempotents(format!(
                        "idempotents {} and {} are not orthogonal",
                        i + 1,
                        j + 1
                    )));
                }
            }
            sum = self.add(&sum, u);
        }
        if sum != self.unit {
            return Err(Error::BadIdempotents("idempotents do not sum to 1".into()));
        }
        let basis: Vec<Vec<Scalar>> = (0..self.dim()).map(|k| self.basis_vector(k)).collect();
        let mut out = Vec::new();
        for (i, fi) in data.iter().enumerate() {
            let u = &fi.idempotent;
            let factor_span: Vec<Vec<Scalar>> = basis.iter().map(|e| self.mul(u, e)).collect();
            let (factor_basis, _) = rref(&factor_span);
            for m in &fi.max_ideal {
                if self.mul(u, m) != *m {
                    return Err(Error::NotLocalFactor {
                        factor: i + 1,
                        reason: format!("{} does not lie in the factor", self.render_vector(m)),
                    });
                }
            }
            let (m_basis, _) = rref(&fi.max_ideal);
            for m in &m_basis {
                for e in &basis {
                    if !in_span(&m_basis, &self.mul(e, m), f) {
                        return Err(Error::NotLocalFactor {
                            factor: i + 1,
                            reason: format!("the span of the maximal ideal is not an ideal at {}", self.render_vector(m)),
                        });
                    }
                }
            }
            if factor_basis.len() != m_basis.len() + 1 {
                return Err(Error::NotLocalFactor {
                    factor: i + 1,
                    reason: format!(
                        "factor has dimension {} but the maximal ideal has dimension {}; the residue ring is not k",
                        factor_basis.len(),
                        m_basis.len()
                    ),
                });
            }
            for m in &fi.max_ideal {
                if !self.is_nilpotent(m) {
                    return Err(Error::NotNilpotent {
                        factor: i + 1,
                        element: self.render_vector(m),
                    });
                }
            }
            let mut powers = vec![factor_basis];
            if !m_basis.is_empty() {
                powers.push(m_basis.clone());
                loop {
                    let last = powers.last().expect("nonempty");
                    let products: Vec<Vec<Scalar>> = last
                        .iter()
                        .flat_map(|a| m_basis.iter().map(move |b| (a, b)))
                        .map(|(a, b)| self.mul(a, b))
                        .collect();
                    let (next, _) = rref(&products);
                    if next.is_empty() {
                        break;
                    }
                    if next.len() == last.len() {
                        return Err(Error::NotNilpotent {
                            factor: i + 1,
                            element: self.render_vector(&last[0]),
                        });
                    }
                    powers.push(next);
                }
            }
            out.push(LocalFactor {
                idempotent: u.clone(),
                powers,
            });
        }
        Ok(out)
    }

    /// `x^l = 0`, checked by repeated squaring.
    fn is_nilpotent(&self, x: &[Scalar]) -> bool {
        let mut p = x.to_vec();
        let mut e = 1;
        while e < self.dim() {
            p = self.mul(&p, &p);
            e *= 2;
        }
        p.iter().all(Scalar::is_zero)
    }

    fn compute_residues(&self) -> Vec<Vec<Scalar>> {
        let f = self.field;
        self.factors
            .iter()
            .map(|fac| {
                let mut gens = vec![fac.idempotent.clone()];
                gens.extend(fac.max_ideal().iter().cloned());
                (0..self.dim())
                    .map(|k| {
                        let v = self.mul(&fac.idempotent, &self.basis_vector(k));
                        let c = express_in(&gens, &v, f).expect("u·D = k·u + m");
                        c[0].clone()
                    })
                    .collect()
            })
            .collect()
    }

    fn factor_of(&self, v: &[Scalar]) -> Option<usize> {
        self.factors.iter().position(|fac| self.mul(&fac.idempotent, v) == v)
    }

    fn level_in(&self, fac: &LocalFactor, v: &[Scalar]) -> usize {
        let mut level = 0;
        for (j, basis) in fac.powers.iter().enumerate() {
            if in_span(basis, v, self.field) {
                level = j;
            }
        }
        level
    }

    /// The `(factor, level)` of every basis vector, or the reason the basis is not stratified.
    fn check_stratified(&self) -> Result<Vec<(usize, usize)>> {
        let mut strata = Vec::with_capacity(self.dim());
        let mut problem: Option<String> = None;
        for k in 0..self.dim() {
            let e = self.basis_vector(k);
            match self.factor_of(&e) {
                None => {
                    problem.get_or_insert(format!("{} lies in no single local factor", self.labels[k]));
                    strata.push((usize::MAX, 0));
                }
                Some(i) => strata.push((i, self.level_in(&self.factors[i], &e))),
            }
        }
        if problem.is_none() {
            for (i, fac) in self.factors.iter().enumerate() {
                let units: Vec<usize> = (0..self.dim()).filter(|&k| strata[k] == (i, 0)).collect();
                if units.len() != 1 || self.basis_vector(units[0]) != fac.idempotent {
                    problem = Some(format!("level 0 of factor {} is not exactly its unit", i + 1));
                    break;
                }
                for (j, basis) in fac.powers.iter().enumerate() {
                    let count = strata.iter().filter(|&&(f, lv)| f == i && lv >= j).count();
                    if count != basis.len() {
                        problem = Some(format!(
                            "factor {}: {count} basis vectors at level >= {j} but m^{j} has dimension {}",
                            i + 1,
                            basis.len()
                        ));
                        break;
                    }
                }
                if problem.is_some() {
                    break;
                }
            }
        }
        if problem.is_none() && strata.windows(2).any(|w| w[0] > w[1]) {
            problem = Some("basis is not ordered by factor and level".into());
        }
        match problem {
            None => Ok(strata),
            Some(reason) => Err(Error::StrataMismatch {
                reason,
                corrected: self
                    .stratified_basis()
                    .iter()
                    .map(|v| v.iter().map(Scalar::to_string).collect())
                    .collect(),
            }),
        }
    }

    /// A stratified basis ordered by factor then level, in coordinates of the current basis.
    pub fn stratified_basis(&self) -> Vec<Vec<Scalar>> {
        let mut out = Vec::new();
        for fac in &self.factors {
            out.push(fac.idempotent.clone());
            for j in 1..fac.powers.len() {
                let mut chosen: Vec<Vec<Scalar>> = fac.powers.get(j + 1).cloned().unwrap_or_default();
                for v in &fac.powers[j] {
                    if !in_span(&chosen, v, self.field) {
                        chosen.push(v.clone());
                        out.push(v.clone());
                    }
                }
            }
        }
        out
    }

    /// The vanishing facts for structure constants of a stratified basis.
    fn verify_case_facts(&self) -> Result<Certificate> {
        let Some(strata) = &self.stratum else {
            return Ok(Certificate::fail("structure_constant_cases", "basis is not stratified"));
        };
        let l = self.dim();
        for j in 0..l {
            for k in 0..l {
                for m in 0..l {
                    let a = &self.consts[j][k][m];
                    let ((fj, n), (fk, p), (fm, q)) = (strata[j], strata[k], strata[m]);
                    let same = fj == fk && fk == fm;
                    let expected_zero = !same || q < n + p || (m < j) || (m == j && p > 0);
                    let expected_one = same && m == j && p == 0;
                    let ok = if expected_one {
                        a.is_one()
                    } else if expected_zero {
                        a.is_zero()
                    } else {
                        true
                    };
                    if !ok {
                        return Err(Error::StrataMismatch {
                            reason: format!("a({},{},{}) = {a} contradicts the stratification", j + 1, k + 1, m + 1),
                            corrected: Vec::new(),
                        });
                    }
                }
            }
        }
        Ok(Certificate::pass(
            "structure_constant_cases",
            "a_jkm vanishes across factors and below the level sum; a_jkj = 1 for the factor unit",
        ))
    }

    /// Certificates for the decomposition, available after construction.
    pub fn certificates(&self) -> Vec<Certificate> {
        let mut out = vec![Certificate::pass(
            "coefficient_algebra",
            format!("dimension {}: commutative, associative, unital", self.dim()),
        )];
        for (i, fac) in self.factors.iter().enumerate() {
            out.push(Certificate::pass(
                format!("local_factor_{}", i + 1),
                format!(
                    "idempotent {}, dimension {}, maximal ideal of dimension {} with m^{} = 0",
                    self.render_vector(&fac.idempotent),
                    fac.dim(),
                    fac.max_ideal().len(),
                    fac.nilpotency() + 1
                ),
            ));
        }
        match &self.stratum {
            Some(s) => {
                let desc: Vec<String> = s
                    .iter()
                    .zip(&self.labels)
                    .map(|(&(f, lv), name)| format!("{name}:({},{lv})", f + 1))
                    .collect();
                out.push(Certificate::pass("stratified_basis", desc.join(" ")));
                out.push(self.verify_case_facts().unwrap_or_else(|e| Certificate::fail("structure_constant_cases", e.to_string())));
            }
            None => out.push(Certificate::fail("stratified_basis", "basis is not stratified")),
        }
        out
    }

    /// The same algebra in the basis `η_i = Σ_j x_{ji} ε_j`.
    pub fn change_basis(&self, x: &[Vec<Scalar>], labels: Vec<String>) -> Result<DAlgebra> {
        let l = self.dim();
        let f = self.field;
        if x.len() != l || x.iter().any(|row| row.len() != l) {
            return Err(Error::Input(format!("change of basis must be {l}x{l}")));
        }
        let y = inverse_scalar(x, f).ok_or(Error::SingularBasisChange)?;
        // α_{jrm} = Σ_{p,q,k} x_{kr} y_{mp} x_{qj} a_{qkp}
        let mut alpha = vec![vec![vec![f.zero(); l]; l]; l];
        for (j, alpha_j) in alpha.iter_mut().enumerate() {
            for (r, alpha_jr) in alpha_j.iter_mut().enumerate() {
                for (m, out) in alpha_jr.iter_mut().enumerate() {
                    let mut acc = f.zero();
                    for p in 0..l {
                        if y[m][p].is_zero() {
                            continue;
                        }
                        for q in 0..l {
                            if x[q][j].is_zero() {
                                continue;
                            }
                            for k in 0..l {
                                let a = &self.consts[q][k][p];
                                if a.is_zero() || x[k][r].is_zero() {
                                    continue;
                                }
                                acc = &acc + &(&(&(&x[k][r] * &y[m][p]) * &x[q][j]) * a);
                            }
                        }
                    }
                    *out = acc;
                }
            }
        }
        let to_eta = |v: &[Scalar]| -> Vec<Scalar> {
            (0..l)
                .map(|i| (0..l).fold(f.zero(), |acc, j| &acc + &(&y[i][j] * &v[j])))
                .collect()
        };
        let factors = self
            .factors
            .iter()
            .map(|fac| FactorData {
                idempotent: to_eta(&fac.idempotent),
                max_ideal: fac.max_ideal().iter().map(|v| to_eta(v)).collect(),
            })
            .collect();
        DAlgebra::unstratified(f, labels, alpha, to_eta(&self.unit), factors)
    }

    /// Rank of the span of the basis products, for sanity checks in tests.
    pub fn product_rank(&self) -> usize {
        let prods: Vec<Vec<Scalar>> = (0..self.dim())
            .flat_map(|j| (0..self.dim()).map(move |k| (j, k)))
            .map(|(j, k)| self.consts[j][k].clone())
            .collect();
        rank(&prods)
    }

    // Named examples.

    /// `D = k`: difference rings.
    pub fn trivial(field: ScalarField) -> DAlgebra {
        let one = field.one();
        DAlgebra::new(
            field,
            vec!["1".into()],
            vec![vec![vec![one.clone()]]],
            vec![one.clone()],
            vec![FactorData {
                idempotent: vec![one],
                max_ideal: vec![],
            }],
        )
        .expect("k is a valid coefficient algebra")
    }

    /// `k[ε]/(ε^n)` in the basis `1, ε, …, ε^{n-1}`.
    pub fn truncated(field: ScalarField, n: usize) -> DAlgebra {
        assert!(n >= 1);
        let labels: Vec<String> = (0..n)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "eps".to_string(),
                _ => format!("eps^{i}"),
            })
            .collect();
        let consts = (0..n)
            .map(|j| {
                (0..n)
                    .map(|k| {
                        (0..n)
                            .map(|m| if j + k == m { field.one() } else { field.zero() })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let e = |i: usize| (0..n).map(|k| if k == i { field.one() } else { field.zero() }).collect::<Vec<_>>();
        DAlgebra::new(
            field,
            labels,
            consts,
            e(0),
            vec![FactorData {
                idempotent: e(0),
                max_ideal: (1..n).map(e).collect(),
            }],
        )
        .expect("truncated polynomial algebra is local")
    }

    /// The dual numbers `k[ε]/(ε²)`: derivations twisted by an endomorphism.
    pub fn dual_numbers(field: ScalarField) -> DAlgebra {
        DAlgebra::truncated(field, 2)
    }

    /// `k^l` in the basis of primitive idempotents: `l` endomorphisms.
    pub fn split(field: ScalarField, l: usize) -> DAlgebra {
        assert!(l >= 1);
        let e = |i: usize| (0..l).map(|k| if k == i { field.one() } else { field.zero() }).collect::<Vec<_>>();
        let consts = (0..l)
            .map(|j| {
                (0..l)
                    .map(|k| if j == k { e(j) } else { vec![field.zero(); l] })
                    .collect()
            })
            .collect();
        DAlgebra::new(
            field,
            (1..=l).map(|i| format!("e{i}")).collect(),
            consts,
            vec![field.one(); l],
            (0..l)
                .map(|i| FactorData {
                    idempotent: e(i),
                    max_ideal: vec![],
                })
                .collect(),
        )
        .expect("k^l is a valid coefficient algebra")
    }

    /// `k[x_1..x_n]/(x_1..x_n)² × k^m`: `n` derivations and `m` endomorphisms.
    ///
    /// With `n = 0` this is `k^m`.
    pub fn jet(field: ScalarField, n: usize, m: usize) -> DAlgebra {
        if n == 0 {
            return DAlgebra::split(field, m);
        }
        let l = 1 + n + m;
        let e = |i: usize| (0..l).map(|k| if k == i { field.one() } else { field.zero() }).collect::<Vec<_>>();
        let zero = vec![field.zero(); l];
        let mut consts = vec![vec![zero.clone(); l]; l];
        for j in 0..=n {
            consts[0][j] = e(j);
            consts[j][0] = e(j);
        }
        for i in 0..m {
            consts[n + 1 + i][n + 1 + i] = e(n + 1 + i);
        }
        let mut labels = vec!["1".to_string()];
        labels.extend(if n == 1 {
            vec!["eps".to_string()]
        } else {
            (1..=n).map(|i| format!("eps{i}")).collect()
        });
        labels.extend((1..=m).map(|i| format!("e{i}")));
        let mut unit = e(0);
        for i in 0..m {
            unit[n + 1 + i] = field.one();
        }
        let mut factors = vec![FactorData {
            idempotent: e(0),
            max_ideal: (1..=n).map(e).collect(),
        }];
        factors.extend((0..m).map(|i| FactorData {
            idempotent: e(n + 1 + i),
            max_ideal: vec![],
        }));
        DAlgebra::new(field, labels, consts, unit, factors).expect("jet algebra is valid")
    }

    /// `k[ε]/(ε²) × k`.
    pub fn dual_times_k(field: ScalarField) -> DAlgebra {
        DAlgebra::jet(field, 1, 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> ScalarField {
        ScalarField::Rationals
    }

    #[test]
    fn dual_numbers_strata() {
        let d = DAlgebra::dual_numbers(q());
        assert_eq!(d.stratum().unwrap(), &[(0, 0), (0, 1)]);
        assert_eq!(d.factors()[0].nilpotency(), 1);
        assert!(d.residue(0, 0).is_one());
        assert!(d.residue(0, 1).is_zero());
    }

    #[test]
    fn split_two_factors() {
        let d = DAlgebra::split(q(), 2);
        assert_eq!(d.stratum().unwrap(), &[(0, 0), (1, 0)]);
        assert!(d.residue(1, 1).is_one());
        assert!(d.residue(1, 0).is_zero());
    }

    #[test]
    fn dual_times_k_strata() {
        let d = DAlgebra::dual_times_k(q());
        assert_eq!(d.stratum().unwrap(), &[(0, 0), (0, 1), (1, 0)]);
        assert_eq!(d.factors().len(), 2);
    }

    #[test]
    fn truncated_cube() {
        let d = DAlgebra::truncated(ScalarField::prime(5).unwrap(), 3);
        assert_eq!(d.stratum().unwrap(), &[(0, 0), (0, 1), (0, 2)]);
        assert_eq!(d.factors()[0].nilpotency(), 2);
    }

    #[test]
    fn unstratified_basis_is_corrected() {
        // Dual numbers in the basis (ε, 1): valid algebra, wrong order.
        let f = q();
        let (o, z) = (f.one(), f.zero());
        let consts = vec![
            vec![vec![z.clone(), z.clone()], vec![o.clone(), z.clone()]],
            vec![vec![o.clone(), z.clone()], vec![z.clone(), o.clone()]],
        ];
        let factor = FactorData {
            idempotent: vec![z.clone(), o.clone()],
            max_ideal: vec![vec![o.clone(), z.clone()]],
        };
        let err = DAlgebra::new(f, vec!["eps".into(), "1".into()], consts.clone(), vec![z.clone(), o.clone()], vec![factor.clone()])
            .unwrap_err();
        match err {
            Error::StrataMismatch { corrected, .. } => {
                assert_eq!(corrected, vec![vec!["0", "1"], vec!["1", "0"]]);
            }
            other => panic!("{other:?}"),
        }
        let d = DAlgebra::unstratified(f, vec!["eps".into(), "1".into()], consts, vec![z, o], vec![factor]).unwrap();
        assert!(!d.is_stratified());
    }

    #[test]
    fn decomposition_errors() {
        let f = q();
        let d = DAlgebra::split(f, 2);
        let (o, z) = (f.one(), f.zero());
        // Only one idempotent: does not sum to 1.
        let err = DAlgebra::new(
            f,
            d.labels().to_vec(),
            d.constants().clone(),
            d.unit().to_vec(),
            vec![FactorData {
                idempotent: vec![o.clone(), z.clone()],
                max_ideal: vec![],
            }],
        )
        .unwrap_err();
        assert_eq!(err.kind(), "BadIdempotents");
        // k^2 claimed local: residue ring is k^2.
        let err = DAlgebra::new(
            f,
            d.labels().to_vec(),
            d.constants().clone(),
            d.unit().to_vec(),
            vec![FactorData {
                idempotent: vec![o.clone(), o.clone()],
                max_ideal: vec![],
            }],
        )
        .unwrap_err();
        assert_eq!(err.kind(), "NotLocalFactor");
        // k[ε]/(ε²−1) ≅ k×k claimed local with maximal ideal spanned by ε, which is not nilpotent.
        let consts = vec![
            vec![vec![o.clone(), z.clone()], vec![z.clone(), o.clone()]],
            vec![vec![z.clone(), o.clone()], vec![o.clone(), z.clone()]],
        ];
        let err = DAlgebra::new(
            f,
            vec!["1".into(), "eps".into()],
            consts,
            vec![o.clone(), z.clone()],
            vec![FactorData {
                idempotent: vec![o.clone(), z.clone()],
                max_ideal: vec![vec![z, o]],
            }],
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotLocalFactor { .. } | Error::NotNilpotent { .. }), "{err:?}");
    }

    #[test]
    fn change_of_basis_constants() {
        // η = {1, 1+ε} in the dual numbers: (1+ε)² = 1 + 2ε = 2η₂ − η₁.
        let f = q();
        let d = DAlgebra::dual_numbers(f);
        let x = vec![vec![f.one(), f.one()], vec![f.zero(), f.one()]];
        let e = d.change_basis(&x, vec!["n1".into(), "n2".into()]).unwrap();
        assert_eq!(e.a(1, 1, 0), &f.from_i64(-1));
        assert_eq!(e.a(1, 1, 1), &f.from_i64(2));
        assert_eq!(e.unit(), &[f.one(), f.zero()]);
        assert!(!e.is_stratified());
        let singular = vec![vec![f.one(), f.one()], vec![f.one(), f.one()]];
        assert_eq!(d.change_basis(&singular, vec!["a".into(), "b".into()]).unwrap_err(), Error::SingularBasisChange);
    }

    #[test]
    fn jet_examples() {
        let d = DAlgebra::jet(q(), 2, 1);
        assert_eq!(d.dim(), 4);
        assert_eq!(d.stratum().unwrap(), &[(0, 0), (0, 1), (0, 1), (1, 0)]);
        assert_eq!(DAlgebra::jet(q(), 0, 2), DAlgebra::split(q(), 2));
    }
}
