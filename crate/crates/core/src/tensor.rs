//! Fixed-size 3-vectors and 3×3 matrices, the Levi-Civita and Kronecker
//! symbols, and the component-transformation rules between a frame `s` and a
//! frame `s'`.
//!
//! Conventions used throughout the crate:
//!
//! * Storage is 0-based (`v[0]`, `m[0][2]`); the symbol functions
//!   [`levi_civita`], [`kronecker`] and the accessors [`Vec3::component`],
//!   [`Mat3::entry`] take 1-based indices.
//! * The transformation coefficients are `α_ij = e_i · e'_j`, so column `j` of
//!   `α` holds the `s`-components of the primed basis vector `e'_j`.
//! * A first-order tensor transforms as `x'_j = x_i α_ij` (i.e. `x' = αᵀx`) and
//!   back as `x_i = α_ij x'_j`. A second-order tensor as `T' = αᵀ T α`.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default orthogonality tolerance for transformation matrices.
pub const ORTH_TOLERANCE: f64 = 1e-9;

/// Residuals above [`ORTH_TOLERANCE`] but at or below this are repaired by
/// re-orthonormalization; anything larger is rejected.
pub const ORTH_REPAIR_LIMIT: f64 = 1e-6;

/// Components of a vector relative to an (implied) orthonormal basis.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3(pub [f64; 3]);

impl Vec3 {
    pub const ZERO: Vec3 = Vec3([0.0; 3]);

    pub const fn new(c1: f64, c2: f64, c3: f64) -> Self {
        Vec3([c1, c2, c3])
    }

    pub fn from_fn(f: impl Fn(usize) -> f64) -> Self {
        Vec3([f(0), f(1), f(2)])
    }

    /// Unit vector along axis `i` (1-based).
    pub fn unit(i: usize) -> Result<Self> {
        let k = zero_based(i)?;
        let mut v = Vec3::ZERO;
        v.0[k] = 1.0;
        Ok(v)
    }

    /// Component `i` (1-based).
    pub fn component(&self, i: usize) -> Result<f64> {
        Ok(self.0[zero_based(i)?])
    }

    pub fn dot(&self, other: &Vec3) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn cross(&self, other: &Vec3) -> Vec3 {
        let a = &self.0;
        let b = &other.0;
        Vec3([
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ])
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// The skew matrix `[v]×` with `[v]× u = v × u`.
    pub fn skew(&self) -> Mat3 {
        let [a, b, c] = self.0;
        Mat3([[0.0, -c, b], [c, 0.0, -a], [-b, a, 0.0]])
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Vec3 {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1], self.0[2] + rhs.0[2]])
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, rhs: Vec3) {
        *self = *self + rhs;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3([self.0[0] - rhs.0[0], self.0[1] - rhs.0[1], self.0[2] - rhs.0[2]])
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

/// A 3×3 matrix of components, stored row-major: `m.0[i][j]` is row `i`,
/// column `j`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub const ZERO: Mat3 = Mat3([[0.0; 3]; 3]);
    pub const IDENTITY: Mat3 = Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    pub fn diag(a: f64, b: f64, c: f64) -> Self {
        Mat3([[a, 0.0, 0.0], [0.0, b, 0.0], [0.0, 0.0, c]])
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Mat3::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn from_columns(c0: Vec3, c1: Vec3, c2: Vec3) -> Self {
        Mat3::from_fn(|i, j| [c0, c1, c2][j].0[i])
    }

    /// Entry `(i, j)` with 1-based indices.
    pub fn entry(&self, i: usize, j: usize) -> Result<f64> {
        Ok(self.0[zero_based(i)?][zero_based(j)?])
    }

    pub fn row(&self, i: usize) -> Vec3 {
        Vec3(self.0[i])
    }

    pub fn column(&self, j: usize) -> Vec3 {
        Vec3([self.0[0][j], self.0[1][j], self.0[2][j]])
    }

    pub fn transpose(&self) -> Mat3 {
        Mat3::from_fn(|i, j| self.0[j][i])
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Symmetric part `½(M + Mᵀ)`.
    pub fn sym(&self) -> Mat3 {
        Mat3::from_fn(|i, j| 0.5 * (self.0[i][j] + self.0[j][i]))
    }

    /// Antisymmetric part `½(M − Mᵀ)`.
    pub fn skew_part(&self) -> Mat3 {
        Mat3::from_fn(|i, j| 0.5 * (self.0[i][j] - self.0[j][i]))
    }

    /// Axial vector `a_i = ½ ε_ijk M_kj`, so that `axial([v]×) = v`.
    pub fn axial(&self) -> Vec3 {
        let m = &self.0;
        Vec3([
            0.5 * (m[2][1] - m[1][2]),
            0.5 * (m[0][2] - m[2][0]),
            0.5 * (m[1][0] - m[0][1]),
        ])
    }

    pub fn frobenius(&self) -> f64 {
        self.0.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }

    /// Active rotation by `angle` radians about the first axis.
    pub fn rotation_x(angle: f64) -> Mat3 {
        let (s, c) = angle.sin_cos();
        Mat3([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])
    }

    pub fn rotation_y(angle: f64) -> Mat3 {
        let (s, c) = angle.sin_cos();
        Mat3([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])
    }

    pub fn rotation_z(angle: f64) -> Mat3 {
        let (s, c) = angle.sin_cos();
        Mat3([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    }

    /// Rodrigues rotation about a unit `axis`.
    pub fn rotation_axis_angle(axis: Vec3, angle: f64) -> Mat3 {
        let k = axis.skew();
        let (s, c) = angle.sin_cos();
        Mat3::IDENTITY + k * s + (k * k) * (1.0 - c)
    }
}

impl Index<usize> for Mat3 {
    type Output = [f64; 3];
    fn index(&self, i: usize) -> &[f64; 3] {
        &self.0[i]
    }
}

impl IndexMut<usize> for Mat3 {
    fn index_mut(&mut self, i: usize) -> &mut [f64; 3] {
        &mut self.0[i]
    }
}

impl Add for Mat3 {
    type Output = Mat3;
    fn add(self, rhs: Mat3) -> Mat3 {
        Mat3::from_fn(|i, j| self.0[i][j] + rhs.0[i][j])
    }
}

impl Sub for Mat3 {
    type Output = Mat3;
    fn sub(self, rhs: Mat3) -> Mat3 {
        Mat3::from_fn(|i, j| self.0[i][j] - rhs.0[i][j])
    }
}

impl Neg for Mat3 {
    type Output = Mat3;
    fn neg(self) -> Mat3 {
        Mat3::from_fn(|i, j| -self.0[i][j])
    }
}

impl Mul<f64> for Mat3 {
    type Output = Mat3;
    fn mul(self, s: f64) -> Mat3 {
        Mat3::from_fn(|i, j| self.0[i][j] * s)
    }
}

impl Mul<Vec3> for Mat3 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        Vec3([self.row(0).dot(&v), self.row(1).dot(&v), self.row(2).dot(&v)])
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, rhs: Mat3) -> Mat3 {
        Mat3::from_fn(|i, j| {
            self.0[i][0] * rhs.0[0][j] + self.0[i][1] * rhs.0[1][j] + self.0[i][2] * rhs.0[2][j]
        })
    }
}

/// A proper orthogonal transformation matrix `α` (`αᵀα = I`, `det α = +1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrthMat3(Mat3);

impl OrthMat3 {
    pub const IDENTITY: OrthMat3 = OrthMat3(Mat3::IDENTITY);

    /// Validates `m` against [`ORTH_TOLERANCE`].
    pub fn new(m: Mat3) -> Result<Self> {
        Self::with_tolerance(m, ORTH_TOLERANCE)
    }

    /// Validates `m` as a proper rotation.
    ///
    /// Matrices whose orthogonality residual lies in
    /// `(tolerance, ORTH_REPAIR_LIMIT]` are re-orthonormalized with modified
    /// Gram-Schmidt on the columns; larger residuals and reflections are
    /// rejected.
    pub fn with_tolerance(m: Mat3, tolerance: f64) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFinite("transformation matrix"));
        }
        let residual = check_orthogonality(&m);
        let m = if residual <= tolerance {
            m
        } else if residual <= ORTH_REPAIR_LIMIT.max(tolerance) {
            log::debug!("re-orthonormalizing transformation matrix (residual {residual:.3e})");
            gram_schmidt(&m)
        } else {
            return Err(Error::NotOrthogonal { residual, tolerance });
        };
        let det = m.det();
        if det <= 0.0 {
            return Err(Error::ImproperRotation { det });
        }
        Ok(OrthMat3(m))
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    pub fn transpose(&self) -> OrthMat3 {
        OrthMat3(self.0.transpose())
    }
}

impl AsRef<Mat3> for OrthMat3 {
    fn as_ref(&self) -> &Mat3 {
        &self.0
    }
}

fn gram_schmidt(m: &Mat3) -> Mat3 {
    let mut cols = [m.column(0), m.column(1), m.column(2)];
    for j in 0..3 {
        for k in 0..j {
            let proj = cols[j].dot(&cols[k]);
            cols[j] = cols[j] - cols[k] * proj;
        }
        let n = cols[j].norm();
        cols[j] = cols[j] * (1.0 / n);
    }
    Mat3::from_columns(cols[0], cols[1], cols[2])
}

fn zero_based(i: usize) -> Result<usize> {
    if (1..=3).contains(&i) {
        Ok(i - 1)
    } else {
        Err(Error::IndexOutOfRange(i))
    }
}

/// Levi-Civita symbol `ε_ijk` for 1-based indices.
pub fn levi_civita(i: usize, j: usize, k: usize) -> Result<f64> {
    let (i, j, k) = (zero_based(i)?, zero_based(j)?, zero_based(k)?);
    Ok(epsilon(i, j, k))
}

/// Kronecker delta for 1-based indices.
pub fn kronecker(i: usize, j: usize) -> Result<f64> {
    Ok(delta(zero_based(i)?, zero_based(j)?))
}

/// `ε_ijk` on 0-based indices; callers guarantee the range.
pub(crate) fn epsilon(i: usize, j: usize, k: usize) -> f64 {
    // (i-j)(j-k)(k-i)/2 gives ±1 on permutations and 0 otherwise.
    let (i, j, k) = (i as i64, j as i64, k as i64);
    ((i - j) * (j - k) * (k - i) / 2) as f64
}

pub(crate) fn delta(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

/// `x'_j = x_i α_ij`.
pub fn to_prime_components(x_in_s: Vec3, alpha: &OrthMat3) -> Vec3 {
    alpha.0.transpose() * x_in_s
}

/// `x_i = α_ij x'_j`.
pub fn from_prime_components(x_in_sprime: Vec3, alpha: &OrthMat3) -> Vec3 {
    alpha.0 * x_in_sprime
}

/// Primed components of a second-order tensor: `T'_{j1 j2} = T_{i1 i2} α_{i1 j1} α_{i2 j2}`.
pub fn transform_tensor2(t_in_s: &Mat3, alpha: &OrthMat3) -> Mat3 {
    let a = &alpha.0;
    a.transpose() * *t_in_s * *a
}

/// Inverse of [`transform_tensor2`]: `T_{i1 i2} = T'_{j1 j2} α_{i1 j1} α_{i2 j2}`.
pub fn tensor2_from_prime(t_in_sprime: &Mat3, alpha: &OrthMat3) -> Mat3 {
    let a = &alpha.0;
    *a * *t_in_sprime * a.transpose()
}

/// Largest deviation of `αᵀα` and `ααᵀ` from the identity.
pub fn check_orthogonality(alpha: &Mat3) -> f64 {
    let ata = alpha.transpose() * *alpha;
    let aat = *alpha * alpha.transpose();
    let mut r = 0.0_f64;
    for i in 0..3 {
        for j in 0..3 {
            r = r.max((ata.0[i][j] - delta(i, j)).abs());
            r = r.max((aat.0[i][j] - delta(i, j)).abs());
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn vec_close(a: Vec3, b: Vec3, tol: f64) -> bool {
        (a - b).max_abs() <= tol
    }

    #[test]
    fn levi_civita_values() {
        assert_eq!(levi_civita(1, 2, 3).unwrap(), 1.0);
        assert_eq!(levi_civita(1, 1, 2).unwrap(), 0.0);
        assert_eq!(levi_civita(1, 3, 2).unwrap(), -1.0);
        for (i, j, k) in [(2, 3, 1), (3, 1, 2)] {
            assert_eq!(levi_civita(i, j, k).unwrap(), 1.0);
        }
        for (i, j, k) in [(3, 2, 1), (2, 1, 3)] {
            assert_eq!(levi_civita(i, j, k).unwrap(), -1.0);
        }
        assert_eq!(levi_civita(0, 1, 2), Err(Error::IndexOutOfRange(0)));
        assert_eq!(levi_civita(1, 2, 4), Err(Error::IndexOutOfRange(4)));
    }

    #[test]
    fn levi_civita_matches_product_definition() {
        // ε = 0 exactly when (i-j)(i-k)(j-k) = 0.
        for i in 1..=3 {
            for j in 1..=3 {
                for k in 1..=3 {
                    let e = levi_civita(i, j, k).unwrap();
                    let p = (i as i32 - j as i32) * (i as i32 - k as i32) * (j as i32 - k as i32);
                    assert_eq!(e == 0.0, p == 0);
                }
            }
        }
    }

    #[test]
    fn epsilon_delta_identity_exhaustive() {
        // Σ_j ε_ijk ε_ljn = δ_il δ_kn − δ_in δ_kl over all 3⁵ tuples.
        for i in 1..=3 {
            for k in 1..=3 {
                for l in 1..=3 {
                    for n in 1..=3 {
                        let lhs: f64 = (1..=3)
                            .map(|j| levi_civita(i, j, k).unwrap() * levi_civita(l, j, n).unwrap())
                            .sum();
                        let rhs = kronecker(i, l).unwrap() * kronecker(k, n).unwrap()
                            - kronecker(i, n).unwrap() * kronecker(k, l).unwrap();
                        assert_eq!(lhs, rhs, "i={i} k={k} l={l} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn prime_components_of_basis_vector() {
        let x = Vec3::new(1.0, 0.0, 0.0);
        assert_eq!(to_prime_components(x, &OrthMat3::IDENTITY), x);

        // Oracle: x'_j = Σ_i x_i α_ij with the closed-form Rz(90°).
        let rz = Mat3([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]);
        let alpha = OrthMat3::new(Mat3::rotation_z(FRAC_PI_2)).unwrap();
        let expected = Vec3::from_fn(|j| (0..3).map(|i| x[i] * rz[i][j]).sum());
        let got = to_prime_components(x, &alpha);
        assert!(vec_close(got, expected, 1e-15));
        assert!(vec_close(got, Vec3::new(0.0, -1.0, 0.0), 1e-15));

        let back = from_prime_components(Vec3::new(0.0, -1.0, 0.0), &alpha);
        assert!(vec_close(back, Vec3::new(1.0, 0.0, 0.0), 1e-15));
        let five = Vec3::new(5.0, 5.0, 5.0);
        assert_eq!(from_prime_components(five, &OrthMat3::IDENTITY), five);
    }

    #[test]
    fn round_trip_rz() {
        let alpha = OrthMat3::new(Mat3::rotation_z(0.7)).unwrap();
        let x = Vec3::new(1.0, 2.0, 3.0);
        let back = from_prime_components(to_prime_components(x, &alpha), &alpha);
        assert!(vec_close(back, x, 1e-15));
    }

    #[test]
    fn tensor2_examples() {
        let alpha = OrthMat3::new(Mat3::rotation_axis_angle(Vec3::new(0.6, 0.0, 0.8), 1.1)).unwrap();
        let iso = Mat3::diag(4.0, 4.0, 4.0);
        assert!((transform_tensor2(&iso, &alpha) - iso).max_abs() < 1e-14);

        // Oracle: explicit double contraction.
        let rz = OrthMat3::new(Mat3::rotation_z(FRAC_PI_2)).unwrap();
        let t = Mat3::diag(1.0, 2.0, 3.0);
        let a = rz.matrix();
        let oracle = Mat3::from_fn(|j1, j2| {
            let mut s = 0.0;
            for i1 in 0..3 {
                for i2 in 0..3 {
                    s += t[i1][i2] * a[i1][j1] * a[i2][j2];
                }
            }
            s
        });
        let got = transform_tensor2(&t, &rz);
        assert!((got - oracle).max_abs() < 1e-15);
        assert!((got - Mat3::diag(2.0, 1.0, 3.0)).max_abs() < 1e-15);

        let back = tensor2_from_prime(&got, &rz);
        assert!((back - t).max_abs() < 1e-15);
    }

    #[test]
    fn orthogonality_residuals() {
        assert_eq!(check_orthogonality(&Mat3::IDENTITY), 0.0);
        assert!(check_orthogonality(&Mat3::rotation_z(37f64.to_radians())) <= 1e-15);
        assert_abs_diff_eq!(check_orthogonality(&(Mat3::IDENTITY * 2.0)), 3.0);
    }

    #[test]
    fn orth_construction_policy() {
        assert!(matches!(
            OrthMat3::new(Mat3::IDENTITY * 2.0),
            Err(Error::NotOrthogonal { .. })
        ));
        assert!(matches!(
            OrthMat3::new(Mat3::diag(1.0, 1.0, -1.0)),
            Err(Error::ImproperRotation { .. })
        ));
        assert!(matches!(
            OrthMat3::new(Mat3::diag(1.0, f64::NAN, 1.0)),
            Err(Error::NonFinite(_))
        ));

        // A perturbation of 1e-8 is repaired, not rejected.
        let mut m = Mat3::rotation_z(0.3);
        m[0][1] += 1e-8;
        let repaired = OrthMat3::new(m).unwrap();
        assert!(check_orthogonality(repaired.matrix()) < 1e-14);
        assert!((*repaired.matrix() - m).max_abs() < 1e-7);
    }

    #[test]
    fn one_based_accessors() {
        let v = Vec3::new(7.0, 8.0, 9.0);
        assert_eq!(v.component(1).unwrap(), 7.0);
        assert_eq!(v.component(3).unwrap(), 9.0);
        assert!(v.component(0).is_err());
        let m = Mat3::from_fn(|i, j| (10 * i + j) as f64);
        assert_eq!(m.entry(2, 3).unwrap(), 12.0);
        assert!(m.entry(4, 1).is_err());
    }

    #[test]
    fn skew_and_axial_are_inverse() {
        let w = Vec3::new(0.3, -1.2, 2.5);
        assert_eq!(w.skew().axial(), w);
        let u = Vec3::new(-0.4, 0.9, 1.7);
        assert!(vec_close(w.skew() * u, w.cross(&u), 1e-15));
    }

    fn arb_rotation() -> impl Strategy<Value = OrthMat3> {
        (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -6.3..6.3f64)
            .prop_filter("axis must be nonzero", |(a, b, c, _)| a * a + b * b + c * c > 1e-2)
            .prop_map(|(a, b, c, th)| {
                let axis = Vec3::new(a, b, c);
                let axis = axis * (1.0 / axis.norm());
                OrthMat3::new(Mat3::rotation_axis_angle(axis, th)).unwrap()
            })
    }

    fn arb_vec() -> impl Strategy<Value = Vec3> {
        (-10.0..10.0f64, -10.0..10.0f64, -10.0..10.0f64).prop_map(|(a, b, c)| Vec3::new(a, b, c))
    }

    proptest! {
        #[test]
        fn rotation_is_orthogonal(alpha in arb_rotation()) {
            let a = alpha.matrix();
            for j in 0..3 {
                for k in 0..3 {
                    let col: f64 = (0..3).map(|i| a[i][j] * a[i][k]).sum();
                    let row: f64 = (0..3).map(|i| a[j][i] * a[k][i]).sum();
                    prop_assert!((col - delta(j, k)).abs() <= ORTH_TOLERANCE);
                    prop_assert!((row - delta(j, k)).abs() <= ORTH_TOLERANCE);
                }
            }
        }

        #[test]
        fn prime_transform_preserves_norm(alpha in arb_rotation(), x in arb_vec()) {
            let xp = to_prime_components(x, &alpha);
            prop_assert!((xp.norm() - x.norm()).abs() <= 1e-12 * x.norm().max(1e-300));
            let back = from_prime_components(xp, &alpha);
            prop_assert!(vec_close(back, x, 1e-12 * x.norm().max(1.0)));
            let fwd = to_prime_components(from_prime_components(x, &alpha), &alpha);
            prop_assert!(vec_close(fwd, x, 1e-12 * x.norm().max(1.0)));
        }

        #[test]
        fn tensor_transform_preserves_trace_and_norm(
            alpha in arb_rotation(),
            r0 in arb_vec(), r1 in arb_vec(), r2 in arb_vec(),
        ) {
            let t = Mat3([r0.0, r1.0, r2.0]);
            let tp = transform_tensor2(&t, &alpha);
            let scale = t.frobenius().max(1.0);
            prop_assert!((tp.trace() - t.trace()).abs() <= 1e-12 * scale);
            prop_assert!((tp.frobenius() - t.frobenius()).abs() <= 1e-12 * scale);
            let back = tensor2_from_prime(&tp, &alpha);
            prop_assert!((back - t).max_abs() <= 1e-12 * scale);
        }
    }
}
