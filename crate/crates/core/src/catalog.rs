//! Named windows used by the demos and the command line tool.
//!
//! Each entry carries a default lattice and the values published for it, so
//! a run can print published and computed numbers side by side.

use serde::{Deserialize, Serialize};

use crate::conditions::ConditionId;
use crate::window::{Lattice, Piece, PiecewiseWindow, WindowError};

/// `ε` used by the ε-construction unless overridden.
pub const DEFAULT_EPSILON: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Builtin {
    Box,
    ExampleThm21,
    ExampleEpsilon,
    ExampleOrthonormal,
    ShannonSpectral,
}

/// A value stated in the literature for a built-in example.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ReferenceValue {
    pub condition: ConditionId,
    /// `lower_bound`, `upper_bound`, or the name of a witness quantity.
    pub quantity: String,
    pub value: f64,
}

impl ReferenceValue {
    fn new(condition: ConditionId, quantity: &str, value: f64) -> Self {
        ReferenceValue { condition, quantity: quantity.to_string(), value }
    }
}

impl Builtin {
    pub const ALL: [Builtin; 5] = [
        Builtin::Box,
        Builtin::ExampleThm21,
        Builtin::ExampleEpsilon,
        Builtin::ExampleOrthonormal,
        Builtin::ShannonSpectral,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Box => "box",
            Builtin::ExampleThm21 => "example-thm21",
            Builtin::ExampleEpsilon => "example-epsilon",
            Builtin::ExampleOrthonormal => "example-orthonormal",
            Builtin::ShannonSpectral => "shannon-spectral",
        }
    }

    pub fn from_name(name: &str) -> Option<Builtin> {
        Builtin::ALL.into_iter().find(|b| b.name() == name)
    }

    pub fn default_lattice(self) -> Lattice {
        let (a, b) = match self {
            Builtin::Box | Builtin::ExampleThm21 => (1.0, 1.0),
            Builtin::ExampleEpsilon => (1.0, 0.3),
            Builtin::ExampleOrthonormal | Builtin::ShannonSpectral => (2.0, 1.0),
        };
        Lattice::new(a, b).expect("built-in lattices are valid")
    }

    /// The window for this example. Only the ε-construction depends on the
    /// lattice (through `1/b`).
    pub fn window(self, lattice: &Lattice) -> PiecewiseWindow {
        match self {
            Builtin::Box => indicator(0.0, 1.0),
            Builtin::ExampleThm21 => example_thm21(),
            Builtin::ExampleEpsilon => example_epsilon(DEFAULT_EPSILON, lattice.b())
                .expect("default epsilon yields a valid window"),
            Builtin::ExampleOrthonormal => example_orthonormal(),
            Builtin::ShannonSpectral => PiecewiseWindow::new(vec![
                Piece::poly(-2.0, -1.0, [1.0]),
                Piece::poly(1.0, 2.0, [1.0]),
            ])
            .expect("valid"),
        }
    }

    pub fn reference_values(self, lattice: &Lattice) -> Vec<ReferenceValue> {
        use ConditionId::*;
        match self {
            Builtin::Box => Vec::new(),
            Builtin::ExampleThm21 => vec![
                ReferenceValue::new(Hw1, "inf_G", 1.25),
                ReferenceValue::new(Hw4, "sum_sup_abs_H", 4.0),
                ReferenceValue::new(Thm21, "lower_bound", 0.25),
                ReferenceValue::new(Thm21, "upper_bound", 1.25),
            ],
            Builtin::ExampleEpsilon => vec![
                ReferenceValue::new(Prop23, "lower_bound", 1.0 / lattice.b()),
                ReferenceValue::new(Prop23, "upper_bound", 1.0 / lattice.b()),
            ],
            Builtin::ExampleOrthonormal => vec![
                ReferenceValue::new(Prop23, "lower_bound", 1.0),
                ReferenceValue::new(Prop23, "upper_bound", 1.0),
            ],
            Builtin::ShannonSpectral => Vec::new(),
        }
    }
}

impl std::fmt::Display for Builtin {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// `χ_[lo, hi)`.
pub fn indicator(lo: f64, hi: f64) -> PiecewiseWindow {
    PiecewiseWindow::new(vec![Piece::poly(lo, hi, [1.0])]).expect("lo < hi")
}

/// `1 + x` on `[0, 1)`, `x/2` on `[1, 2)`.
pub fn example_thm21() -> PiecewiseWindow {
    PiecewiseWindow::new(vec![
        Piece::poly(0.0, 1.0, [1.0, 1.0]),
        Piece::poly(1.0, 2.0, [0.0, 0.5]),
    ])
    .expect("valid")
}

/// `x` on `[0, ε)`, `sqrt(1 - (x - 1/b)^2)` on `[1/b, 1/b + ε)`.
pub fn example_epsilon(epsilon: f64, b: f64) -> Result<PiecewiseWindow, WindowError> {
    let c = 1.0 / b;
    PiecewiseWindow::new(vec![
        Piece::poly(0.0, epsilon, [0.0, 1.0]),
        Piece::sqrt_poly(c, c + epsilon, [1.0 - c * c, 2.0 * c, -1.0]),
    ])
}

/// `x` on `[0, 1)`, `sqrt(2x - x^2)` on `[1, 2)`.
pub fn example_orthonormal() -> PiecewiseWindow {
    PiecewiseWindow::new(vec![
        Piece::poly(0.0, 1.0, [0.0, 1.0]),
        Piece::sqrt_poly(1.0, 2.0, [0.0, 2.0, -1.0]),
    ])
    .expect("valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for b in Builtin::ALL {
            assert_eq!(Builtin::from_name(b.name()), Some(b));
        }
        assert_eq!(Builtin::from_name("gaussian"), None);
    }

    #[test]
    fn epsilon_window_matches_closed_form() {
        let b = 0.3;
        let w = example_epsilon(0.2, b).unwrap();
        let c = 1.0 / b;
        for i in 0..1000 {
            let x = -1.0 + 6.0 * (i as f64 + 0.5) / 1000.0;
            let expected = if (0.0..0.2).contains(&x) {
                x
            } else if (c..c + 0.2).contains(&x) {
                (1.0 - (x - c).powi(2)).sqrt()
            } else {
                0.0
            };
            assert!((w.eval(x) - expected).abs() < 1e-14, "x = {x}");
        }
    }
}
