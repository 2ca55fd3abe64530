//! Four small triples used throughout the tests and the CLI.

use nalgebra::{DMatrix, DVector};

use crate::algebra::{
    complex_unital, lau, module_extension, triangular, BimoduleAction, FinDimAlgebra,
    Triple,
};
use crate::linalg::re;

/// Two one-dimensional zero-product algebras with the zero action.
pub fn fix1() -> Triple {
    let a = FinDimAlgebra::zero_product(vec!["z".into()]);
    let f = FinDimAlgebra::zero_product(vec!["z".into()]);
    Triple::new(a, f, BimoduleAction::zero(1, 1)).expect("dims agree")
}

/// `C` acting on `C` through the identity character.
pub fn fix2() -> Triple {
    let theta = DVector::from_element(1, re(1.0));
    lau(complex_unital(), complex_unital(), &theta, 1e-12).expect("identity is a character")
}

/// `C` as a zero-product module over unital `C`, both actions the identity.
pub fn fix3() -> Triple {
    let one = DMatrix::from_element(1, 1, re(1.0));
    module_extension(vec!["x".into()], complex_unital(), std::slice::from_ref(&one), std::slice::from_ref(&one))
        .expect("dims agree")
}

/// The upper-triangular 2x2 matrices, as `M = C` over `C (+) C`.
pub fn fix4() -> Triple {
    let one = DMatrix::from_element(1, 1, re(1.0));
    let mut t = triangular(
        &complex_unital(),
        &complex_unital(),
        vec!["E12".into()],
        std::slice::from_ref(&one),
        std::slice::from_ref(&one),
    )
    .expect("dims agree");
    t.f = t.f.with_labels(vec!["E11".into(), "E22".into()]).with_detected_unit(1e-12);
    t
}

pub fn all() -> Vec<Triple> {
    vec![fix1(), fix2(), fix3(), fix4()]
}

pub fn by_name(name: &str) -> Option<Triple> {
    match name.to_ascii_lowercase().as_str() {
        "fix1" => Some(fix1()),
        "fix2" => Some(fix2()),
        "fix3" => Some(fix3()),
        "fix4" => Some(fix4()),
        _ => None,
    }
}
