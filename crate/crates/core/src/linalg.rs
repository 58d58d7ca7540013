//! Small fixed-size complex matrix helpers shared by every module.

use nalgebra::SMatrix;
use num_complex::Complex64;

pub type C64 = Complex64;
pub type Mat2 = SMatrix<C64, 2, 2>;
pub type Mat4 = SMatrix<C64, 4, 4>;
pub type Mat16 = SMatrix<C64, 16, 16>;

/// Default absolute tolerance on max-entry deviation for matrix comparisons.
pub const DEFAULT_TOL: f64 = 1e-10;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn kron2(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut out = Mat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            let aij = a[(i, j)];
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn kron4(a: &Mat4, b: &Mat4) -> Mat16 {
    let mut out = Mat16::zeros();
    for i in 0..4 {
        for j in 0..4 {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..4 {
                for l in 0..4 {
                    out[(4 * i + k, 4 * j + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Largest absolute entry of `a - b`.
pub fn max_abs_diff<const R: usize, const C: usize>(
    a: &SMatrix<C64, R, C>,
    b: &SMatrix<C64, R, C>,
) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Max-entry distance between `a` and `b` after removing the relative global
/// phase that best aligns them.
pub fn phase_distance<const N: usize>(a: &SMatrix<C64, N, N>, b: &SMatrix<C64, N, N>) -> f64 {
    let overlap = (a.adjoint() * b).trace();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        ONE
    };
    max_abs_diff(&(a * phase), b)
}

pub fn unitarity_defect<const N: usize>(u: &SMatrix<C64, N, N>) -> f64 {
    max_abs_diff(&(u.adjoint() * u), &SMatrix::<C64, N, N>::identity())
}

/// `exp(-i (angle/2) n·σ)` for a real unit axis `n`.
pub fn su2_rotation(axis: [f64; 3], angle: f64) -> Mat2 {
    let (s, co) = (angle / 2.0).sin_cos();
    let [x, y, z] = axis;
    Mat2::new(
        c(co, -s * z),
        c(-s * y, -s * x),
        c(s * y, -s * x),
        c(co, s * z),
    )
}

/// `exp(-i t (d·1 + n·σ))` for real `d` and a real (not necessarily unit) vector `n`.
pub fn su2_exp_hermitian(d: f64, n: [f64; 3], t: f64) -> Mat2 {
    let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    let global = C64::from_polar(1.0, -d * t);
    if norm == 0.0 {
        return Mat2::identity() * global;
    }
    let axis = [n[0] / norm, n[1] / norm, n[2] / norm];
    su2_rotation(axis, 2.0 * norm * t) * global
}

/// Column-stacked vectorization of a 4×4 matrix.
pub fn vec4(m: &Mat4) -> SMatrix<C64, 16, 1> {
    let mut v = SMatrix::<C64, 16, 1>::zeros();
    for col in 0..4 {
        for row in 0..4 {
            v[4 * col + row] = m[(row, col)];
        }
    }
    v
}

pub fn unvec4(v: &SMatrix<C64, 16, 1>) -> Mat4 {
    let mut m = Mat4::zeros();
    for col in 0..4 {
        for row in 0..4 {
            m[(row, col)] = v[4 * col + row];
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_matches_series_exponential() {
        let axis = [0.6, 0.0, 0.8];
        let angle = 0.7;
        let gen = Mat2::new(
            c(axis[2], 0.0),
            c(axis[0], 0.0),
            c(axis[0], 0.0),
            c(-axis[2], 0.0),
        );
        let series = (gen * c(0.0, -angle / 2.0)).exp();
        assert!(max_abs_diff(&series, &su2_rotation(axis, angle)) < 1e-14);
    }

    #[test]
    fn vec_roundtrip() {
        let m = Mat4::from_fn(|r, c| C64::new(r as f64, c as f64));
        assert_eq!(unvec4(&vec4(&m)), m);
        assert_eq!(vec4(&m)[1], m[(1, 0)]);
    }
}
