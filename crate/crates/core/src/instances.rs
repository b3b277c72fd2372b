//! Seeded random towers `(k, e) ≤ (B, f)` for property checks.
//!
//! Three families of `B`, each of rank `r ≤ 3` over `A = k`:
//! truncated `k[y]/(y^r)`, split `k^r` (basis `1, e_2, …, e_r` of idempotents), and the
//! square-zero algebra `k[y_1, y_2]/(y_1, y_2)²`.

use std::sync::Arc;

use rand::Rng;

use crate::algebra::{constants_from, AlgebraElement, StructureAlgebra};
use crate::dalgebra::DAlgebra;
use crate::descent_matrix::FreeExtension;
use crate::dstructure::DStructure;
use crate::error::Result;
use crate::poly::Poly;
use crate::ring::PresentedRing;
use crate::scalar::{Scalar, ScalarField};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Truncated,
    Split,
    SquareZero,
}

#[derive(Clone, Debug)]
pub struct RandomInstance {
    pub family: Family,
    pub ext: Arc<FreeExtension>,
    pub e: Arc<DStructure>,
    pub f: Arc<DStructure>,
}

/// One of the dual numbers, `k²`, `k[ε]/(ε³)`, `k[ε]/(ε²) × k`.
pub fn random_d<R: Rng>(rng: &mut R, field: ScalarField) -> DAlgebra {
    match rng.gen_range(0..4) {
        0 => DAlgebra::dual_numbers(field),
        1 => DAlgebra::split(field, 2),
        2 => DAlgebra::truncated(field, 3),
        _ => DAlgebra::dual_times_k(field),
    }
}

pub fn random_field<R: Rng>(rng: &mut R) -> ScalarField {
    if rng.gen_bool(0.5) {
        ScalarField::Rationals
    } else {
        ScalarField::prime(5).expect("prime")
    }
}

/// A small scalar: uniform over 𝔽_p, or an integer in `-2..=2` over ℚ.
pub fn random_scalar<R: Rng>(rng: &mut R, field: ScalarField) -> Scalar {
    match field.characteristic() {
        0 => field.from_i64(rng.gen_range(-2..=2)),
        p => field.from_i64(rng.gen_range(0..p as i64)),
    }
}

fn unit_vec(field: ScalarField, r: usize, k: usize) -> Vec<Poly> {
    (0..r).map(|m| if m == k { Poly::one(field) } else { Poly::zero() }).collect()
}

fn family_algebra(field: ScalarField, family: Family, r: usize) -> Result<StructureAlgebra> {
    let a = Arc::new(PresentedRing::ground(field));
    let (labels, consts): (Vec<String>, _) = match family {
        Family::Truncated => (
            (0..r).map(|i| if i == 0 { "1".into() } else if i == 1 { "y".into() } else { format!("y{i}") }).collect(),
            constants_from(r, |i, j| if i + j < r { unit_vec(field, r, i + j) } else { vec![Poly::zero(); r] }),
        ),
        Family::Split => (
            (0..r).map(|i| if i == 0 { "1".into() } else { format!("e{}", i + 1) }).collect(),
            constants_from(r, |i, j| match (i, j) {
                (0, k) | (k, 0) => unit_vec(field, r, k),
                (i, j) if i == j => unit_vec(field, r, i),
                _ => vec![Poly::zero(); r],
            }),
        ),
        Family::SquareZero => (
            vec!["1".into(), "y1".into(), "y2".into()],
            constants_from(3, |i, j| match (i, j) {
                (0, k) | (k, 0) => unit_vec(field, 3, k),
                _ => vec![Poly::zero(); 3],
            }),
        ),
    };
    StructureAlgebra::new(a, labels, consts)
}

/// Random element of B given by coordinates from `first` on, as a flattened polynomial.
fn random_element<R: Rng>(rng: &mut R, ext: &FreeExtension, first: usize) -> Poly {
    let field = ext.base().field();
    let mut p = Poly::zero();
    for i in first..ext.rank() {
        p = p.add(&ext.basis_poly(i).scale(&random_scalar(rng, field)));
    }
    ext.flat().normalize(&p)
}

/// A valid structure `f` on a random `B` of the given family over `(k, id)`.
pub fn random_instance<R: Rng>(rng: &mut R, field: ScalarField, d: DAlgebra, family: Family) -> Result<RandomInstance> {
    let r = match family {
        Family::SquareZero => 3,
        _ => rng.gen_range(2..=3),
    };
    let ext = Arc::new(FreeExtension::new(family_algebra(field, family, r)?)?);
    let d = Arc::new(d);
    let e = Arc::new(DStructure::identity(ext.base().clone(), d.clone(), None)?);
    let stratum = d.stratum().expect("stratified").to_vec();
    let l = d.dim();
    let flat = ext.flat().clone();

    let f = match family {
        Family::Truncated | Family::SquareZero => {
            // Images of the generators of the maximal ideal of B. Coordinates at factor units
            // must stay in that ideal; others may pick up constants, at the risk of breaking
            // the relations, in which case we fall back to ideal-valued coordinates.
            let ngens = flat.nvars();
            let gens: Vec<usize> = match family {
                Family::Truncated => vec![0],
                _ => vec![0, 1],
            };
            let mut attempt = 0;
            loop {
                let allow_constants = attempt < 8 && family == Family::Truncated;
                let mut images: Vec<Option<AlgebraElement>> = vec![None; ngens];
                for &v in &gens {
                    let coords = (0..l)
                        .map(|k| {
                            let at_unit = stratum[k].1 == 0;
                            let first = if at_unit || !allow_constants { 1 } else { 0 };
                            random_element(rng, &ext, first)
                        })
                        .collect();
                    images[v] = Some(AlgebraElement::new(coords));
                }
                // Remaining flattened generators y^i are determined multiplicatively.
                let dr = d.over(flat.clone());
                let y = images[0].clone().expect("set");
                if family == Family::Truncated {
                    let mut power = y.clone();
                    for slot in images.iter_mut().skip(1) {
                        power = dr.mul(&power, &y);
                        *slot = Some(power.clone());
                    }
                }
                let images: Vec<AlgebraElement> = images.into_iter().map(|x| x.expect("set")).collect();
                let f = DStructure::new(flat.clone(), d.clone(), images, Some(e.clone()))?;
                if f.validate().is_ok() {
                    break f;
                }
                attempt += 1;
            }
        }
        Family::Split => {
            // Per factor, a self-map π of the r coordinates: e_s ↦ Σ_{π(j) = s} e_j at the factor unit.
            let maps: Vec<Vec<usize>> = d
                .factors()
                .iter()
                .map(|_| (0..r).map(|_| rng.gen_range(0..r)).collect())
                .collect();
            let idem = |j: usize| -> Poly {
                if j == 0 {
                    (1..r).fold(flat.one(), |acc, s| acc.sub(&ext.basis_poly(s)))
                } else {
                    ext.basis_poly(j)
                }
            };
            let images = (1..r)
                .map(|s| {
                    let coords = (0..l)
                        .map(|k| {
                            let (factor, level) = stratum[k];
                            if level != 0 {
                                return Poly::zero();
                            }
                            let sum = (0..r)
                                .filter(|&j| maps[factor][j] == s)
                                .fold(Poly::zero(), |acc, j| acc.add(&idem(j)));
                            flat.normalize(&sum)
                        })
                        .collect();
                    AlgebraElement::new(coords)
                })
                .collect();
            let f = DStructure::new(flat.clone(), d.clone(), images, Some(e.clone()))?;
            f.validate()?;
            f
        }
    };
    Ok(RandomInstance {
        family,
        ext,
        e,
        f: Arc::new(f),
    })
}

pub fn random_family<R: Rng>(rng: &mut R) -> Family {
    match rng.gen_range(0..3) {
        0 => Family::Truncated,
        1 => Family::Split,
        _ => Family::SquareZero,
    }
}

/// A random invertible `l × l` matrix over `field`.
pub fn random_invertible<R: Rng>(rng: &mut R, field: ScalarField, l: usize) -> Vec<Vec<Scalar>> {
    loop {
        let x: Vec<Vec<Scalar>> = (0..l).map(|_| (0..l).map(|_| random_scalar(rng, field)).collect()).collect();
        if crate::linalg::inverse_scalar(&x, field).is_some() {
            return x;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn instances_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let field = random_field(&mut rng);
            let d = random_d(&mut rng, field);
            let family = random_family(&mut rng);
            let inst = random_instance(&mut rng, field, d, family).unwrap();
            assert!(inst.f.validate().is_ok());
            assert!(inst.ext.rank() <= 3);
        }
    }
}
