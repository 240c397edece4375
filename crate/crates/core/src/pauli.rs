//! Pauli-frame algebra.
//!
//! Transmitted qubits are tracked symbolically: the preparation basis and bit
//! plus the accumulated Pauli error class. Global phases are dropped, so the
//! error lives in {I, X, Y, Z} with the Klein four-group composition.

use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    /// (x, z) symplectic bits of the error class.
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }
}

/// Phase-stripped product of two Paulis.
pub fn compose(a: Pauli, b: Pauli) -> Pauli {
    let (ax, az) = a.bits();
    let (bx, bz) = b.bits();
    Pauli::from_bits(ax ^ bx, az ^ bz)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    Rectilinear,
    Diagonal,
}

impl Basis {
    /// Unbiased basis draw.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        if rng.random_bool(0.5) {
            Basis::Diagonal
        } else {
            Basis::Rectilinear
        }
    }
}

/// Returns 1 iff `error` flips a measurement outcome in `basis`.
///
/// Rectilinear outcomes are flipped by X and Y, diagonal outcomes by Z and Y.
pub fn measurement_flip(error: Pauli, basis: Basis) -> u8 {
    let (x, z) = error.bits();
    match basis {
        Basis::Rectilinear => x as u8,
        Basis::Diagonal => z as u8,
    }
}

/// Symbolic record of one transmitted qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PauliFrame {
    pub prep_basis: Basis,
    pub prep_bit: u8,
    pub error: Pauli,
}

impl PauliFrame {
    pub fn new(prep_basis: Basis, prep_bit: u8) -> Self {
        debug_assert!(prep_bit <= 1);
        Self {
            prep_basis,
            prep_bit,
            error: Pauli::I,
        }
    }

    pub fn with_error(self, e: Pauli) -> Self {
        Self {
            error: compose(self.error, e),
            ..self
        }
    }

    /// Measurement in `basis`. Matched bases give the prepared bit flipped by
    /// the accumulated error; mismatched bases give an unbiased random bit.
    pub fn measure<R: Rng + ?Sized>(&self, basis: Basis, rng: &mut R) -> u8 {
        if basis == self.prep_basis {
            self.prep_bit ^ measurement_flip(self.error, basis)
        } else {
            rng.random_bool(0.5) as u8
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pauli() -> impl Strategy<Value = Pauli> {
        prop::sample::select(Pauli::ALL.to_vec())
    }

    fn basis() -> impl Strategy<Value = Basis> {
        prop::sample::select(vec![Basis::Rectilinear, Basis::Diagonal])
    }

    #[test]
    fn composition_table() {
        assert_eq!(compose(Pauli::I, Pauli::X), Pauli::X);
        assert_eq!(compose(Pauli::X, Pauli::X), Pauli::I);
        assert_eq!(compose(Pauli::X, Pauli::Z), Pauli::Y);
        assert_eq!(compose(Pauli::Z, Pauli::Y), Pauli::X);
        for p in Pauli::ALL {
            assert_eq!(compose(Pauli::I, p), p);
            assert_eq!(compose(p, p), Pauli::I);
        }
    }

    #[test]
    fn flip_examples() {
        assert_eq!(measurement_flip(Pauli::I, Basis::Rectilinear), 0);
        assert_eq!(measurement_flip(Pauli::Z, Basis::Rectilinear), 0);
        assert_eq!(measurement_flip(Pauli::Y, Basis::Diagonal), 1);
        assert_eq!(measurement_flip(Pauli::X, Basis::Diagonal), 0);
    }

    #[test]
    fn two_of_three_flip_per_basis() {
        for b in [Basis::Rectilinear, Basis::Diagonal] {
            let flips: u8 = [Pauli::X, Pauli::Y, Pauli::Z]
                .iter()
                .map(|&p| measurement_flip(p, b))
                .sum();
            assert_eq!(flips, 2);
            assert_eq!(measurement_flip(Pauli::I, b), 0);
        }
    }

    #[test]
    fn new_frame_has_identity_error() {
        let f = PauliFrame::new(Basis::Diagonal, 1);
        assert_eq!(f.error, Pauli::I);
    }

    proptest! {
        #[test]
        fn compose_is_associative(a in pauli(), b in pauli(), c in pauli()) {
            prop_assert_eq!(compose(compose(a, b), c), compose(a, compose(b, c)));
        }

        #[test]
        fn compose_is_commutative(a in pauli(), b in pauli()) {
            prop_assert_eq!(compose(a, b), compose(b, a));
        }

        #[test]
        fn flip_is_homomorphic(a in pauli(), b in pauli(), beta in basis()) {
            prop_assert_eq!(
                measurement_flip(compose(a, b), beta),
                measurement_flip(a, beta) ^ measurement_flip(b, beta)
            );
        }

        #[test]
        fn sequential_errors_equal_composition(a in pauli(), b in pauli(), beta in basis()) {
            let f = PauliFrame::new(beta, 0);
            prop_assert_eq!(f.with_error(a).with_error(b), f.with_error(compose(a, b)));
        }
    }
}
