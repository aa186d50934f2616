//! Scalar abstraction shared by the floating-point routines.

use std::fmt::{Debug, Display};

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real floating-point scalar (`f32` or `f64`) the spectral code is generic over.
///
/// Everything numerical goes through `nalgebra::RealField`, so `sqrt`, `cos`,
/// `acos`, `pi()` and friends resolve to the `simba` implementations.
pub trait Real:
    RealField
    + Copy
    + FromPrimitive
    + ToPrimitive
    + Serialize
    + DeserializeOwned
    + Display
    + Debug
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal. Never fails for the supported types.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }

    fn from_count(k: usize) -> Self {
        Self::from_usize(k).expect("count representable in scalar type")
    }

    /// Machine epsilon of the scalar type.
    fn machine_eps() -> Self {
        Self::default_epsilon()
    }

    /// `max(floor, factor * eps)`: an absolute floor that is only lifted for
    /// low-precision scalars.
    fn tol_floor(floor: f64, factor: f64) -> Self {
        let scaled = Self::machine_eps() * Self::lit(factor);
        let floor = Self::lit(floor);
        if scaled > floor {
            scaled
        } else {
            floor
        }
    }
}

impl Real for f32 {}
impl Real for f64 {}
