//! Principal symbol of the split layer system and its eigenstructure.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Matrix4 = [[Complex64; 4]; 4];
pub type Vector4 = [Complex64; 4];

const I: Complex64 = Complex64::new(0.0, 1.0);

fn check(kx: f64, ky: f64) -> Result<()> {
    if kx == 0.0 && ky == 0.0 {
        return Err(Error::Domain("the wavevector must be nonzero".into()));
    }
    Ok(())
}

/// `M = i kₓ A + i k_y B` for the unknowns `(pₓ, p_y, ξ, ζ)`.
///
/// ```
/// use advac::analysis::principal_symbol;
/// use num_complex::Complex64;
///
/// let m = principal_symbol(1.0, 0.0, 1.0).unwrap();
/// assert_eq!(m[0][2], Complex64::new(0.0, 1.0));
/// assert_eq!(m[2][0], Complex64::new(0.0, 1.0));
/// assert_eq!(m[3][0], Complex64::new(0.0, 0.0));
/// ```
pub fn principal_symbol(kx: f64, ky: f64, c0: f64) -> Result<Matrix4> {
    check(kx, ky)?;
    let z = Complex64::new(0.0, 0.0);
    let c2 = c0 * c0;
    Ok([
        [z, z, I * kx * c2, z],
        [z, z, z, I * ky * c2],
        [I * kx, I * kx, z, z],
        [I * ky, I * ky, z, z],
    ])
}

pub fn mat_vec(m: &Matrix4, v: &Vector4) -> Vector4 {
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for (o, row) in out.iter_mut().zip(m) {
        *o = row.iter().zip(v).map(|(a, b)| a * b).sum();
    }
    out
}

fn normalized(v: [f64; 4]) -> Vector4 {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.map(|x| Complex64::new(x / n, 0.0))
}

/// Eigenpairs of the principal symbol and a basis of `ker M²`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolDecomposition {
    /// `0, 0, +i c0|k|, −i c0|k|`.
    pub eigenvalues: [Complex64; 4],
    /// Unit eigenvectors; the double zero eigenvalue has the single
    /// direction `(−1, 1, 0, 0)`, repeated.
    pub eigenvectors: [Vector4; 4],
    /// `(1, −1, 0, 0)/√2` and `(0, 0, k_y, −kₓ)/|k|`.
    pub kernel_m2: [Vector4; 2],
}

/// Closed-form eigenstructure of [`principal_symbol`].
///
/// For `kₓk_y ≠ 0` the zero eigenvalue is defective and `(0, 0, k_y, −kₓ)`
/// lies in `ker M²` but not in `ker M`; on the axes it is an eigenvector.
pub fn symbol_eigen(kx: f64, ky: f64, c0: f64) -> Result<SymbolDecomposition> {
    check(kx, ky)?;
    let k = kx.hypot(ky);
    let lambda = I * (c0 * k);
    let plus = normalized([c0 * kx * kx / k, c0 * ky * ky / k, kx, ky]);
    let minus = normalized([-c0 * kx * kx / k, -c0 * ky * ky / k, kx, ky]);
    let zero = normalized([-1.0, 1.0, 0.0, 0.0]);
    Ok(SymbolDecomposition {
        eigenvalues: [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), lambda, -lambda],
        eigenvectors: [zero, zero, plus, minus],
        kernel_m2: [normalized([1.0, -1.0, 0.0, 0.0]), normalized([0.0, 0.0, ky, -kx])],
    })
}
