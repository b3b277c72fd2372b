//! The linear system `ā = M·x̄` attached to `(B[t], g^z)`, which must be solvable over A
//! whenever a left adjoint exists and A is a field.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::AlgebraElement;
use crate::descent_matrix::{associated_matrix, FreeExtension};
use crate::dstructure::DStructure;
use crate::error::{Error, Result};
use crate::linalg::{solve, Solution};
use crate::poly::Poly;
use crate::weil::PresentedBAlgebra;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Evidence {
    /// `z = Σ_j β_j ε_j`, rendered coordinatewise.
    pub z: Vec<String>,
    /// `ā` with entry `j·r + i` equal to `λ_i(β_j)`.
    pub a_bar: Vec<String>,
    pub matrix: String,
    /// `[…]ᵀ = M·x̄ with M = …`.
    pub system: String,
    /// `None` when the solver could not decide.
    pub solvable: Option<bool>,
    pub solution: Option<Vec<String>>,
}

/// Build `(B[t], g^z)` extending `f` with `t ↦ z`, then test `ā = M·x̄` over A.
pub fn adjoint_evidence(ext: &Arc<FreeExtension>, f: &Arc<DStructure>, z: &[Poly]) -> Result<Evidence> {
    let d = f.d();
    let (r, l) = (ext.rank(), d.dim());
    if z.len() != l {
        return Err(Error::Input(format!("z needs {l} coordinates, got {}", z.len())));
    }
    let a = ext.base();
    let flat = ext.flat();
    let c = PresentedBAlgebra::new(ext.clone(), &["t".to_string()], Vec::new())?;
    let mut images: Vec<AlgebraElement> = f.images().to_vec();
    images.push(AlgebraElement::new(z.to_vec()));
    let gz = DStructure::new(c.ring().clone(), d.clone(), images, Some(f.clone()))?;
    gz.validate()?;

    let m = associated_matrix(ext, f)?;
    let mut a_bar = vec![Poly::zero(); r * l];
    for (j, beta) in z.iter().enumerate() {
        for (i, coord) in ext.coords(&flat.normalize(beta)).into_iter().enumerate() {
            a_bar[j * r + i] = coord;
        }
    }
    let matrix = m.matrix().render(a);
    let rendered: Vec<String> = a_bar.iter().map(|p| a.render(p)).collect();
    let system = format!("[{}]ᵀ = M·x̄ with M = {}", rendered.join(","), matrix);
    let (solvable, solution) = match solve(m.matrix(), &a_bar, a)? {
        Solution::Solved(x) => (Some(true), Some(x.iter().map(|p| a.render(p)).collect())),
        Solution::Inconsistent => (Some(false), None),
        Solution::Undetermined => (None, None),
    };
    Ok(Evidence {
        z: z.iter().map(|p| flat.render(p)).collect(),
        a_bar: rendered,
        matrix,
        system,
        solvable,
        solution,
    })
}
