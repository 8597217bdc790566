//! Benchmark fixtures shared by the criterion benches.

use vgv_core::lfunction::{Curve, CurveSpec};

/// `y^3 - y = x(2x^3 + x)` over `F_{3^6}`, maximal over its own field.
pub fn maximal_f3_6() -> Curve {
    Curve::resolve(&CurveSpec::prime(3, 1, 6, &[1, 2])).expect("valid spec")
}

/// `y^7 - y = x(2x^7 + x)` over `F_{7^3}`.
pub fn family_p7() -> Curve {
    Curve::resolve(&CurveSpec::prime(7, 1, 3, &[1, 2])).expect("valid spec")
}
