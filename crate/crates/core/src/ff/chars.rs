use serde::{Deserialize, Serialize};

use super::FieldElem;

/// A character of a cyclic group of order `modulus` (either `E^×` or `F^×`),
/// `x ↦ ζ^{exponent · log x}` with respect to the tower's fixed generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MultChar {
    exponent: u64,
    modulus: u64,
}

impl MultChar {
    pub fn new(exponent: u64, modulus: u64) -> MultChar {
        assert!(modulus > 0);
        MultChar {
            exponent: exponent % modulus,
            modulus,
        }
    }

    pub fn trivial(modulus: u64) -> MultChar {
        MultChar::new(0, modulus)
    }

    pub fn exponent(self) -> u64 {
        self.exponent
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_trivial(self) -> bool {
        self.exponent == 0
    }

    pub fn mul(self, other: MultChar) -> MultChar {
        assert_eq!(self.modulus, other.modulus);
        MultChar::new(self.exponent + other.exponent, self.modulus)
    }

    pub fn inverse(self) -> MultChar {
        MultChar::new(self.modulus - self.exponent, self.modulus)
    }

    pub fn pow(self, k: u64) -> MultChar {
        MultChar::new(
            ((self.exponent as u128 * k as u128) % self.modulus as u128) as u64,
            self.modulus,
        )
    }

    pub fn order(self) -> u64 {
        self.modulus / num_integer::gcd(self.exponent, self.modulus)
    }

    /// Value at the element with discrete log `l`, as an exponent of a
    /// primitive `modulus`-th root of unity.
    pub fn evaluate_log(self, l: u64) -> u64 {
        ((self.exponent as u128 * l as u128) % self.modulus as u128) as u64
    }
}

/// `ψ_b(x) = ζ_p^{Tr_{E/F_p}(b·x)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AddChar {
    b: FieldElem,
}

impl AddChar {
    pub fn new(b: FieldElem) -> AddChar {
        AddChar { b }
    }

    pub fn b(self) -> FieldElem {
        self.b
    }

    pub fn is_trivial(self) -> bool {
        self.b.is_zero()
    }
}
