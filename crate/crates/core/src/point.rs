use crate::C64;

/// A point of the Riemann sphere: a finite complex number or infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ext {
    Finite(C64),
    Infinity,
}

impl Ext {
    pub fn real(v: f64) -> Self {
        Ext::Finite(C64::new(v, 0.0))
    }

    pub fn finite(self) -> Option<C64> {
        match self {
            Ext::Finite(v) => Some(v),
            Ext::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Ext::Infinity)
    }

    /// Unwraps a finite value; panics on infinity.
    pub fn unwrap(self) -> C64 {
        self.finite().expect("point at infinity")
    }

    /// Modulus, with infinity mapped to `f64::INFINITY`.
    pub fn norm(self) -> f64 {
        match self {
            Ext::Finite(v) => v.norm(),
            Ext::Infinity => f64::INFINITY,
        }
    }

    pub fn conj(self) -> Self {
        match self {
            Ext::Finite(v) => Ext::Finite(v.conj()),
            Ext::Infinity => Ext::Infinity,
        }
    }
}

impl From<C64> for Ext {
    fn from(v: C64) -> Self {
        Ext::Finite(v)
    }
}
