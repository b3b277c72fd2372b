//! JSON problem descriptions: the tower `(A, e) ≤ (B, f) ≤ (C, g)` plus optional extras.
//!
//! Expressions are polynomial strings. Elements of D or B are written as linear combinations
//! of basis labels, where a bare constant `c` means `c` times the unit. Structure images are
//! lists of `l` coordinate expressions; a generator left out gets the identity image `x·1`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Deserialize;

use crate::algebra::{AlgebraElement, StructureAlgebra};
use crate::dalgebra::{DAlgebra, FactorData};
use crate::descent_matrix::FreeExtension;
use crate::dstructure::DStructure;
use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly};
use crate::ring::PresentedRing;
use crate::scalar::{Scalar, ScalarField};
use crate::weil::PresentedBAlgebra;
use crate::weil_d::Tower;

#[derive(Deserialize)]
#[serde(untagged)]
enum RawField {
    Name(String),
    Prime { prime: u64 },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawD {
    Named {
        named: String,
        #[serde(default)]
        l: Option<usize>,
        #[serde(default)]
        n: Option<usize>,
        #[serde(default)]
        m: Option<usize>,
    },
    Explicit {
        basis: Vec<String>,
        #[serde(default)]
        products: BTreeMap<String, String>,
        #[serde(default)]
        unit: Option<String>,
        factors: Vec<RawFactor>,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFactor {
    idempotent: String,
    #[serde(default)]
    max_ideal: Vec<String>,
}

type Images = BTreeMap<String, Vec<String>>;

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawA {
    #[serde(default)]
    vars: Vec<String>,
    #[serde(default)]
    relations: Vec<String>,
    #[serde(default)]
    e: Images,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawB {
    basis: Vec<String>,
    #[serde(default)]
    products: BTreeMap<String, String>,
    #[serde(default)]
    f: Images,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawC {
    generators: Vec<String>,
    #[serde(default)]
    relations: Vec<String>,
    #[serde(default)]
    g: Images,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawR {
    #[serde(default)]
    vars: Vec<String>,
    #[serde(default)]
    relations: Vec<String>,
    #[serde(default)]
    u: Images,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSecond {
    #[serde(rename = "D")]
    d: RawD,
    #[serde(default)]
    e: Images,
    #[serde(default)]
    f: Images,
    #[serde(default)]
    g: Images,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEvidence {
    z: Vec<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    field: RawField,
    #[serde(rename = "D")]
    d: RawD,
    #[serde(rename = "A", default)]
    a: RawA,
    #[serde(rename = "B")]
    b: RawB,
    #[serde(rename = "C")]
    c: RawC,
    #[serde(rename = "R", default)]
    r: Option<RawR>,
    #[serde(default)]
    second_structures: Option<RawSecond>,
    #[serde(default)]
    evidence: Option<RawEvidence>,
}

/// A parsed problem; construction already checks shapes, [`Problem::validate`] runs the validators.
#[derive(Clone, Debug)]
pub struct Problem {
    pub field: ScalarField,
    pub tower: Tower,
    /// `(R, u)` over `(A, e)`.
    pub test_algebra: Option<Arc<DStructure>>,
    pub second: Option<Tower>,
    /// Candidate `z ∈ D(B)`, coordinates in the flattened B.
    pub evidence: Option<Vec<Vec<Poly>>>,
}

fn parse_field(raw: &RawField) -> Result<ScalarField> {
    match raw {
        RawField::Prime { prime } => ScalarField::prime(*prime),
        RawField::Name(s) => {
            let t = s.trim();
            match t {
                "Q" | "QQ" | "rationals" => Ok(ScalarField::Rationals),
                _ => {
                    let digits = t
                        .strip_prefix("F_")
                        .or_else(|| t.strip_prefix("GF(").and_then(|x| x.strip_suffix(')')))
                        .ok_or_else(|| Error::Input(format!("field: unknown field {t:?}")))?;
                    let p: u64 = digits
                        .parse()
                        .map_err(|_| Error::Input(format!("field: bad characteristic {digits:?}")))?;
                    ScalarField::prime(p)
                }
            }
        }
    }
}

/// Parse `src` as `Σ c_k·label_k` (constants mean multiples of `unit`) into coordinates.
fn parse_linear(
    src: &str,
    labels: &[String],
    coeffs: &PresentedRing,
    unit: Option<&[Poly]>,
    context: &str,
) -> Result<Vec<Poly>> {
    let n_c = coeffs.nvars();
    let field = coeffs.field();
    let label_vars: Vec<String> = labels.iter().filter(|l| l.as_str() != "1").cloned().collect();
    let mut vars = coeffs.vars().to_vec();
    vars.extend(label_vars.iter().cloned());
    let p = crate::parse::parse_poly(src, &vars, field, context)?;
    let mut out = vec![Poly::zero(); labels.len()];
    let one_index = labels.iter().position(|l| l == "1");
    for (mono, c) in p.terms() {
        let label_part: Vec<(u32, u32)> = mono.pairs().iter().copied().filter(|(v, _)| *v as usize >= n_c).collect();
        let coeff_mono = Monomial::from_pairs(mono.pairs().iter().copied().filter(|(v, _)| (*v as usize) < n_c));
        let coeff = Poly::term(coeff_mono, c.clone());
        match label_part.as_slice() {
            [] => {
                if let Some(k) = one_index {
                    out[k] = out[k].add(&coeff);
                } else if let Some(u) = unit {
                    for (o, ui) in out.iter_mut().zip(u) {
                        *o = o.add(&coeff.mul(ui));
                    }
                } else {
                    return Err(Error::Input(format!("{context}: constant term needs a unit")));
                }
            }
            [(v, 1)] => {
                let name = &vars[*v as usize];
                let k = labels.iter().position(|l| l == name).expect("label");
                out[k] = out[k].add(&coeff);
            }
            _ => {
                return Err(Error::Input(format!(
                    "{context}: {src:?} is not a linear combination of {labels:?}"
                )))
            }
        }
    }
    Ok(out.iter().map(|c| coeffs.normalize(c)).collect())
}

fn scalars_of(coords: Vec<Poly>, field: ScalarField, context: &str) -> Result<Vec<Scalar>> {
    coords
        .into_iter()
        .map(|c| {
            if c.is_zero() {
                Ok(field.zero())
            } else {
                c.constant_value()
                    .cloned()
                    .ok_or_else(|| Error::Input(format!("{context}: coefficients must be scalars")))
            }
        })
        .collect()
}

/// `b_i·b_j` table from `"x*y": expr` entries; products with a label `"1"` are implicit.
fn product_table(
    labels: &[String],
    products: &BTreeMap<String, String>,
    coeffs: &PresentedRing,
    unit: Option<&[Poly]>,
    context: &str,
) -> Result<Vec<Vec<Vec<Poly>>>> {
    let n = labels.len();
    let index = |name: &str, key: &str| -> Result<usize> {
        labels
            .iter()
            .position(|l| l == name.trim())
            .ok_or_else(|| Error::Input(format!("{context}.products.{key}: unknown basis label {:?}", name.trim())))
    };
    let mut table: Vec<Vec<Option<Vec<Poly>>>> = vec![vec![None; n]; n];
    for (key, val) in products {
        let (x, y) = key
            .split_once('*')
            .ok_or_else(|| Error::Input(format!("{context}.products: key {key:?} must look like \"a*b\"")))?;
        let (i, j) = (index(x, key)?, index(y, key)?);
        let v = parse_linear(val, labels, coeffs, unit, &format!("{context}.products.{key}"))?;
        for (p, q) in [(i, j), (j, i)] {
            if let Some(old) = &table[p][q] {
                if old != &v {
                    return Err(Error::Input(format!("{context}.products: conflicting values for {key}")));
                }
            }
            table[p][q] = Some(v.clone());
        }
    }
    let one = labels.iter().position(|l| l == "1");
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    table[i][j].clone().unwrap_or_else(|| {
                        let mut v = vec![Poly::zero(); n];
                        if one == Some(i) {
                            v[j] = coeffs.one();
                        } else if one == Some(j) {
                            v[i] = coeffs.one();
                        }
                        v
                    })
                })
                .collect()
        })
        .collect())
}

fn scalar_table(t: Vec<Vec<Vec<Poly>>>, field: ScalarField, context: &str) -> Result<Vec<Vec<Vec<Scalar>>>> {
    t.into_iter()
        .map(|row| row.into_iter().map(|v| scalars_of(v, field, context)).collect())
        .collect()
}

fn check_labels(labels: &[String], context: &str) -> Result<()> {
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(Error::Input(format!("{context}: duplicate label {l:?}")));
        }
        let ok = l == "1" || (l.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) && l.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'));
        if !ok {
            return Err(Error::Input(format!("{context}: label {l:?} is not an identifier")));
        }
    }
    Ok(())
}

fn build_d(raw: &RawD, field: ScalarField, context: &str) -> Result<DAlgebra> {
    match raw {
        RawD::Named { named, l, n, m } => {
            let need = |x: &Option<usize>, what: &str| x.ok_or_else(|| Error::Input(format!("{context}: {named} needs {what}")));
            match named.as_str() {
                "trivial" | "k" => Ok(DAlgebra::trivial(field)),
                "dual_numbers" => Ok(DAlgebra::dual_numbers(field)),
                "dual_times_k" => Ok(DAlgebra::dual_times_k(field)),
                "split" => Ok(DAlgebra::split(field, need(l, "l")?)),
                "truncated" => Ok(DAlgebra::truncated(field, need(n, "n")?)),
                "jet" => Ok(DAlgebra::jet(field, need(n, "n")?, need(m, "m")?)),
                other => Err(Error::Input(format!("{context}.named: unknown coefficient algebra {other:?}"))),
            }
        }
        RawD::Explicit {
            basis,
            products,
            unit,
            factors,
        } => {
            check_labels(basis, context)?;
            let k = PresentedRing::ground(field);
            let unit_coords = match unit {
                Some(u) => parse_linear(u, basis, &k, None, &format!("{context}.unit"))?,
                None => match basis.iter().position(|l| l == "1") {
                    Some(i) => (0..basis.len()).map(|j| if i == j { k.one() } else { Poly::zero() }).collect(),
                    None => return Err(Error::Input(format!("{context}: give a unit or a basis label \"1\""))),
                },
            };
            let table = product_table(basis, products, &k, Some(&unit_coords), context)?;
            let consts = scalar_table(table, field, context)?;
            let vec_of = |s: &str, ctx: String| -> Result<Vec<Scalar>> {
                scalars_of(parse_linear(s, basis, &k, Some(&unit_coords), &ctx)?, field, &ctx)
            };
            let factors = factors
                .iter()
                .enumerate()
                .map(|(i, f)| {
                    Ok(FactorData {
                        idempotent: vec_of(&f.idempotent, format!("{context}.factors[{i}].idempotent"))?,
                        max_ideal: f
                            .max_ideal
                            .iter()
                            .enumerate()
                            .map(|(j, m)| vec_of(m, format!("{context}.factors[{i}].max_ideal[{j}]")))
                            .collect::<Result<_>>()?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let unit = scalars_of(unit_coords, field, context)?;
            DAlgebra::new(field, basis.clone(), consts, unit, factors)
        }
    }
}

/// Images for the generators `names` (all variables of `ring` from `first` on); absent ones
/// get `x·1`, and the rest are copied from `base`.
fn build_structure(
    ring: &Arc<PresentedRing>,
    d: &Arc<DAlgebra>,
    images: &Images,
    first: usize,
    base: Option<Arc<DStructure>>,
    context: &str,
) -> Result<DStructure> {
    for name in images.keys() {
        match ring.var_index(name) {
            Some(v) if v >= first => {}
            _ => return Err(Error::Input(format!("{context}: {name:?} is not a generator at this level"))),
        }
    }
    let dr = d.over(ring.clone());
    let mut out: Vec<AlgebraElement> = match &base {
        Some(b) => b.images().to_vec(),
        None => Vec::new(),
    };
    for v in first..ring.nvars() {
        let name = &ring.vars()[v];
        let x = match images.get(name) {
            None => dr.from_base(&ring.var(v)),
            Some(list) => {
                if list.len() != d.dim() {
                    return Err(Error::Input(format!(
                        "{context}.{name}: expected {} coordinates, got {}",
                        d.dim(),
                        list.len()
                    )));
                }
                let coords = list
                    .iter()
                    .enumerate()
                    .map(|(j, s)| ring.parse(s, &format!("{context}.{name}[{j}]")))
                    .collect::<Result<Vec<_>>>()?;
                AlgebraElement::new(coords)
            }
        };
        out.push(x);
    }
    DStructure::new(ring.clone(), d.clone(), out, base)
}

fn parse_list(ring: &PresentedRing, items: &[String], context: &str) -> Result<Vec<Poly>> {
    items
        .iter()
        .enumerate()
        .map(|(i, s)| ring.parse(s, &format!("{context}[{i}]")))
        .collect()
}

fn structures(
    d: Arc<DAlgebra>,
    ext: &Arc<FreeExtension>,
    c: &PresentedBAlgebra,
    e: &Images,
    f: &Images,
    g: &Images,
    prefix: [&str; 3],
) -> Result<Tower> {
    let a = ext.base();
    let e = Arc::new(build_structure(a, &d, e, 0, None, &format!("{}e", prefix[0]))?);
    let f = Arc::new(build_structure(ext.flat(), &d, f, a.nvars(), Some(e.clone()), &format!("{}f", prefix[1]))?);
    let g = Arc::new(build_structure(
        c.ring(),
        &d,
        g,
        ext.flat().nvars(),
        Some(f.clone()),
        &format!("{}g", prefix[2]),
    )?);
    Tower::new(e, f, c.clone(), g)
}

impl Problem {
    pub fn parse(text: &str) -> Result<Problem> {
        let raw: RawProblem = serde_json::from_str(text).map_err(|e| Error::Parse {
            context: "input".into(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let field = parse_field(&raw.field)?;
        let d = Arc::new(build_d(&raw.d, field, "D")?);

        let free_a = PresentedRing::polynomial(field, raw.a.vars.clone())?;
        let a_rels = parse_list(&free_a, &raw.a.relations, "A.relations")?;
        let a = Arc::new(PresentedRing::new(field, raw.a.vars.clone(), &a_rels)?);

        check_labels(&raw.b.basis, "B.basis")?;
        if raw.b.basis.first().map(String::as_str) != Some("1") {
            return Err(Error::Input("B.basis: the first basis vector must be \"1\"".into()));
        }
        for l in &raw.b.basis[1..] {
            if a.var_index(l).is_some() || l == "1" {
                return Err(Error::VariableClash(format!("B.basis: {l:?} is already a variable of A")));
            }
        }
        let table = product_table(&raw.b.basis, &raw.b.products, &a, None, "B")?;
        let ext = Arc::new(FreeExtension::new(StructureAlgebra::new(a.clone(), raw.b.basis.clone(), table)?)?);

        let free_c = ext.flat().extend(&raw.c.generators, &[])?;
        let c_rels = parse_list(&free_c, &raw.c.relations, "C.relations")?;
        let c = PresentedBAlgebra::new(ext.clone(), &raw.c.generators, c_rels)?;

        let tower = structures(d.clone(), &ext, &c, &raw.a.e, &raw.b.f, &raw.c.g, ["A.", "B.", "C."])?;

        let test_algebra = match &raw.r {
            None => None,
            Some(r) => {
                for v in &r.vars {
                    if a.var_index(v).is_some() {
                        return Err(Error::VariableClash(format!("R.vars: {v:?} is already a variable of A")));
                    }
                }
                let free_r = a.extend(&r.vars, &[])?;
                let rels = parse_list(&free_r, &r.relations, "R.relations")?;
                let ring = Arc::new(a.extend(&r.vars, &rels)?);
                Some(Arc::new(build_structure(&ring, &d, &r.u, a.nvars(), Some(tower.e.clone()), "R.u")?))
            }
        };

        let second = match &raw.second_structures {
            None => None,
            Some(s) => {
                let d2 = Arc::new(build_d(&s.d, field, "second_structures.D")?);
                Some(structures(d2, &ext, &c, &s.e, &s.f, &s.g, ["second_structures."; 3])?)
            }
        };

        let evidence = match &raw.evidence {
            None => None,
            Some(ev) => Some(
                ev.z.iter()
                    .enumerate()
                    .map(|(i, z)| {
                        if z.len() != d.dim() {
                            return Err(Error::Input(format!("evidence.z[{i}]: expected {} coordinates", d.dim())));
                        }
                        parse_list(ext.flat(), z, &format!("evidence.z[{i}]"))
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
        };

        Ok(Problem {
            field,
            tower,
            test_algebra,
            second,
            evidence,
        })
    }

    pub fn d(&self) -> &Arc<DAlgebra> {
        self.tower.f.d()
    }
}
