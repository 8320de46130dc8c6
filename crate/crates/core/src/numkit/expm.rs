use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

// Padé(13) numerator coefficients; the denominator uses the same values with
// alternating signs on odd powers.
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Scaled 1-norm target before the Padé core is applied.
const SCALED_NORM: f64 = 0.5;

/// Matrix exponential by scaling and squaring around a diagonal Padé(13) core.
///
/// The input is scaled by `2^-s` so its 1-norm is at most 0.5, the rational
/// approximant is evaluated, and the result is squared `s` times.
pub fn expm(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    m.ensure_finite("expm")?;
    let n = m.dim();
    let norm = m.norm_one();
    let squarings = if norm > SCALED_NORM { (norm / SCALED_NORM).log2().ceil() as i32 } else { 0 };
    let a = m.scale_real(0.5f64.powi(squarings));

    let id = ComplexMatrix::identity(n);
    let a2 = a.matmul(&a);
    let a4 = a2.matmul(&a2);
    let a6 = a4.matmul(&a2);
    let b = &PADE13;

    let lin = |x: &ComplexMatrix, y: &ComplexMatrix, z: &ComplexMatrix, cx: f64, cy: f64, cz: f64| {
        &(&x.scale_real(cx) + &y.scale_real(cy)) + &z.scale_real(cz)
    };

    let u_inner = lin(&a6, &a4, &a2, b[13], b[11], b[9]);
    let u_tail = &lin(&a6, &a4, &a2, b[7], b[5], b[3]) + &id.scale_real(b[1]);
    let u = a.matmul(&(&a6.matmul(&u_inner) + &u_tail));

    let v_inner = lin(&a6, &a4, &a2, b[12], b[10], b[8]);
    let v_tail = &lin(&a6, &a4, &a2, b[6], b[4], b[2]) + &id.scale_real(b[0]);
    let v = &a6.matmul(&v_inner) + &v_tail;

    let numer = &v + &u;
    let denom = &v - &u;
    let r = denom
        .to_nalgebra()
        .lu()
        .solve(&numer.to_nalgebra())
        .ok_or(Error::Singular { ratio: 0.0 })?;
    let mut out = ComplexMatrix::from_nalgebra(&r);
    for _ in 0..squarings {
        out = out.matmul(&out);
    }
    out.ensure_finite("expm")?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::C64;

    fn max_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
        (a - b).max_abs()
    }

    #[test]
    fn zero_gives_identity() {
        let e = expm(&ComplexMatrix::zeros(3)).unwrap();
        assert_eq!(e, ComplexMatrix::identity(3));
    }

    #[test]
    fn scalar_log_two() {
        let e = expm(&ComplexMatrix::from_real_diag(&[std::f64::consts::LN_2]).unwrap()).unwrap();
        assert!((e[(0, 0)] - C64::new(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn nilpotent_series_terminates() {
        // exp([[0,1],[0,0]]) = I + N since N^2 = 0.
        let n = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let want = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!(max_diff(&expm(&n).unwrap(), &want) < 1e-15);
    }

    #[test]
    fn rotation_generator() {
        // exp(theta [[0,-1],[1,0]]) is the rotation by theta.
        let theta = 7.3;
        let g = ComplexMatrix::from_real_rows(&[&[0.0, -theta], &[theta, 0.0]]).unwrap();
        let (s, c) = theta.sin_cos();
        let want = ComplexMatrix::from_real_rows(&[&[c, -s], &[s, c]]).unwrap();
        assert!(max_diff(&expm(&g).unwrap(), &want) < 1e-13);
    }

    #[test]
    fn diagonal_complex_entries() {
        let d = [C64::new(-1.5, 2.0), C64::new(3.0, -0.5), C64::new(0.0, 9.0)];
        let e = expm(&ComplexMatrix::from_diag(&d).unwrap()).unwrap();
        for (i, z) in d.iter().enumerate() {
            assert!((e[(i, i)] - z.exp()).norm() <= 1e-13 * z.exp().norm().max(1.0));
        }
    }

    #[test]
    fn rejects_non_finite() {
        // e^(1e6) overflows during squaring
        let big = ComplexMatrix::from_real_diag(&[1e6]).unwrap();
        assert!(matches!(expm(&big), Err(Error::NonFinite { .. })));
    }
}
