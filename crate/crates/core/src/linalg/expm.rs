//! Matrix exponential by scaling and squaring with diagonal Padé approximants.

use super::blocks::Blocks;
use super::lu::Lu;
use super::matrix::CMat;
use crate::error::{Result, ZenoError};
use crate::scalar::{cr, Real};

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
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
const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.539398330063230e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068),
];
const THETA13: f64 = 5.371920351148152;

/// e^A for square A.
pub fn mat_exp<T: Real>(a: &CMat<T>) -> Result<CMat<T>> {
    let n = a.require_square("matrix exponential")?;
    if !a.is_finite() {
        return Err(ZenoError::Dimension("matrix exponential of non-finite input".into()));
    }
    if n == 0 {
        return Ok(a.clone());
    }
    let blocks = Blocks::of(a);
    if blocks.is_trivial() {
        return dense_exp(a);
    }
    let parts = blocks
        .split(a)
        .iter()
        .map(dense_exp)
        .collect::<Result<Vec<_>>>()?;
    Ok(blocks.assemble(&parts))
}

fn poly_sum<T: Real>(terms: &[(&CMat<T>, f64)], n: usize, id_coef: f64) -> CMat<T> {
    let mut out = CMat::identity(n).scale_re(T::lit(id_coef));
    for (m, c) in terms {
        out += &m.scale_re(T::lit(*c));
    }
    out
}

fn dense_exp<T: Real>(a: &CMat<T>) -> Result<CMat<T>> {
    let n = a.rows();
    if n == 1 {
        return Ok(CMat::diag(&[a[(0, 0)].exp()]));
    }
    let norm = a.norm1().to_f64_lossy();
    for &(m, theta) in &THETA {
        if norm <= theta {
            return pade_low(a, m);
        }
    }
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let scaled = a.scale_re(T::lit(2f64.powi(-s)));
    let b = &B13;
    let a2 = scaled.matmul(&scaled);
    let a4 = a2.matmul(&a2);
    let a6 = a4.matmul(&a2);
    let inner_u = poly_sum(&[(&a6, b[13]), (&a4, b[11]), (&a2, b[9])], n, 0.0);
    let u = scaled.matmul(&(&a6.matmul(&inner_u) + &poly_sum(&[(&a6, b[7]), (&a4, b[5]), (&a2, b[3])], n, b[1])));
    let inner_v = poly_sum(&[(&a6, b[12]), (&a4, b[10]), (&a2, b[8])], n, 0.0);
    let v = &a6.matmul(&inner_v) + &poly_sum(&[(&a6, b[6]), (&a4, b[4]), (&a2, b[2])], n, b[0]);
    let mut r = pade_solve(&u, &v)?;
    for _ in 0..s {
        r = r.matmul(&r);
    }
    finite_or_err(r)
}

fn pade_low<T: Real>(a: &CMat<T>, m: usize) -> Result<CMat<T>> {
    let n = a.rows();
    let b: &[f64] = match m {
        3 => &B3,
        5 => &B5,
        7 => &B7,
        _ => &B9,
    };
    let a2 = a.matmul(a);
    let mut powers = vec![CMat::identity(n), a2.clone()];
    while powers.len() * 2 <= m {
        let next = powers.last().expect("nonempty").matmul(&a2);
        powers.push(next);
    }
    let mut u_inner = CMat::zeros(n, n);
    let mut v = CMat::zeros(n, n);
    for (k, p) in powers.iter().enumerate() {
        u_inner += &p.scale_re(T::lit(b[2 * k + 1]));
        v += &p.scale_re(T::lit(b[2 * k]));
    }
    let u = a.matmul(&u_inner);
    finite_or_err(pade_solve(&u, &v)?)
}

fn pade_solve<T: Real>(u: &CMat<T>, v: &CMat<T>) -> Result<CMat<T>> {
    let den = v - u;
    let num = v + u;
    let lu = Lu::new(&den)?;
    if lu.min_pivot() == T::zero() {
        return Err(ZenoError::NoConvergence {
            algorithm: "Pade denominator solve",
            iterations: 0,
            residual: f64::INFINITY,
        });
    }
    Ok(lu.solve(&num))
}

fn finite_or_err<T: Real>(m: CMat<T>) -> Result<CMat<T>> {
    if m.is_finite() {
        Ok(m)
    } else {
        Err(ZenoError::NoConvergence {
            algorithm: "matrix exponential",
            iterations: 0,
            residual: f64::INFINITY,
        })
    }
}

/// e^{tA} for a real step `t`.
pub fn mat_exp_scaled<T: Real>(a: &CMat<T>, t: T) -> Result<CMat<T>> {
    mat_exp(&a.scale(cr(t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;
    use num_complex::Complex;

    fn taylor(a: &CMat<f64>, terms: usize) -> CMat<f64> {
        let n = a.rows();
        let mut sum = CMat::identity(n);
        let mut term = CMat::identity(n);
        for k in 1..terms {
            term = term.matmul(a).scale_re(1.0 / k as f64);
            sum += &term;
        }
        sum
    }

    fn dense(n: usize, scale: f64, seed: u64) -> CMat<f64> {
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let m = CMat::from_fn(n, n, |_, _| c(next(), next()));
        let norm = m.norm1();
        m.scale_re(scale / norm)
    }

    #[test]
    fn zero_gives_identity() {
        let e = mat_exp(&CMat::<f64>::zeros(3, 3)).unwrap();
        assert_eq!(e, CMat::identity(3));
    }

    #[test]
    fn diagonal_phase() {
        let a = CMat::<f64>::diag(&[c(0.0, 1.0), c(0.0, 1.0)]);
        let e = mat_exp(&a).unwrap();
        let want = Complex::new(1f64.cos(), 1f64.sin());
        assert!((e[(0, 0)] - want).norm() < 1e-15);
        assert!((e[(1, 1)] - want).norm() < 1e-15);
    }

    #[test]
    fn matches_taylor_series_across_pade_orders() {
        for (i, scale) in [0.01, 0.2, 0.9, 2.0, 5.0].iter().enumerate() {
            let a = dense(6, *scale, 17 + i as u64);
            let e = mat_exp(&a).unwrap();
            let t = taylor(&a, 60);
            assert!(e.approx_eq(&t, 1e-12), "scale {scale}: {}", e.max_diff(&t));
        }
    }

    #[test]
    fn large_norm_uses_squaring() {
        let a = CMat::<f64>::from_real_rows(&[&[-40.0, 30.0], &[0.0, -20.0]]);
        let e = mat_exp(&a).unwrap();
        let want12 = 30.0 * ((-20f64).exp() - (-40f64).exp()) / 20.0;
        assert!((e[(0, 1)].re - want12).abs() < 1e-20);
        assert!((e[(1, 1)].re - (-20f64).exp()).abs() < 1e-20);
    }

    #[test]
    fn non_square_is_rejected() {
        assert!(mat_exp(&CMat::<f64>::zeros(2, 3)).is_err());
    }

    #[test]
    fn single_precision_path() {
        let a = CMat::<f32>::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        let e = mat_exp(&a).unwrap();
        assert!((e[(0, 0)].re - 1f32.cos()).abs() < 1e-6);
        assert!((e[(0, 1)].re - 1f32.sin()).abs() < 1e-6);
    }
}
