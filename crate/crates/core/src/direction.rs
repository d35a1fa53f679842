//! Unit vectors on the sphere: analyzer orientations and hidden spin directions.

use std::ops::Neg;

use serde::ser::{Serialize, SerializeTuple, Serializer};

use crate::error::{GhostError, Result};
use crate::scalar::Real;

/// A unit vector in three dimensions.
///
/// The norm is checked on construction, so every `Direction3` in the program
/// satisfies `x² + y² + z² = 1` within [`Scalar::tolerance`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Direction3<T> {
    x: T,
    y: T,
    z: T,
}

impl<T: Real> Direction3<T> {
    /// Accepts `(x, y, z)` only if it already has unit length.
    pub fn new(x: T, y: T, z: T) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(GhostError::DegenerateDirection);
        }
        let norm_sq = x * x + y * y + z * z;
        if !norm_sq.approx_eq(T::one()) {
            return Err(GhostError::NonUnitDirection {
                norm_sq: norm_sq.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { x, y, z })
    }

    /// Rescales `(x, y, z)` to unit length.
    pub fn normalized(x: T, y: T, z: T) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || norm <= T::zero() {
            return Err(GhostError::DegenerateDirection);
        }
        Ok(Self::new_unchecked(x / norm, y / norm, z / norm))
    }

    pub(crate) fn new_unchecked(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    /// Polar angle `theta` from +z, azimuth `phi` from +x, both in radians.
    pub fn from_spherical(theta: T, phi: T) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self::new_unchecked(st * cp, st * sp, ct)
    }

    /// Direction in the x–z plane at `angle` radians from +z towards +x.
    pub fn in_xz_plane(angle: T) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new_unchecked(s, T::zero(), c)
    }

    pub fn unit_x() -> Self {
        Self::new_unchecked(T::one(), T::zero(), T::zero())
    }

    pub fn unit_y() -> Self {
        Self::new_unchecked(T::zero(), T::one(), T::zero())
    }

    pub fn unit_z() -> Self {
        Self::new_unchecked(T::zero(), T::zero(), T::one())
    }

    pub fn x(&self) -> T {
        self.x
    }

    pub fn y(&self) -> T {
        self.y
    }

    pub fn z(&self) -> T {
        self.z
    }

    pub fn components(&self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(&self, other: &Self) -> T {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Angle between the two directions in `[0, π]`.
    pub fn angle_to(&self, other: &Self) -> T {
        self.dot(other).max(-T::one()).min(T::one()).acos()
    }

    /// Rotation by `angle` radians about `axis` (right-handed, Rodrigues formula).
    pub fn rotated_about(&self, axis: &Self, angle: T) -> Self {
        let (s, c) = angle.sin_cos();
        let k = axis;
        let kxv = [
            k.y * self.z - k.z * self.y,
            k.z * self.x - k.x * self.z,
            k.x * self.y - k.y * self.x,
        ];
        let kdv = k.dot(self);
        let v = self.components();
        let kc = k.components();
        let r: [T; 3] =
            std::array::from_fn(|i| v[i] * c + kxv[i] * s + kc[i] * kdv * (T::one() - c));
        Self::new_unchecked(r[0], r[1], r[2])
    }
}

impl<T: Real> Neg for Direction3<T> {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new_unchecked(-self.x, -self.y, -self.z)
    }
}

impl<T: Real + Serialize> Serialize for Direction3<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut tup = serializer.serialize_tuple(3)?;
        tup.serialize_element(&self.x)?;
        tup.serialize_element(&self.y)?;
        tup.serialize_element(&self.z)?;
        tup.end()
    }
}
