//! Small hand-built reference graphs used throughout the tests and docs.

use crate::graph::{Admg, PredictiveGraph};

/// Age, Symptom and Medication all feed the predicted Disease `D`;
/// Age and Medication also influence Symptom.
pub fn fig1c() -> PredictiveGraph {
    let g = Admg::from_names(
        &[("A", 2), ("S", 2), ("M", 2), ("D", 2)],
        &[("A", "D"), ("S", "D"), ("M", "D"), ("A", "S"), ("M", "S")],
        &[],
    )
    .expect("fixture is valid");
    let d = g.var("D").expect("fixture has D");
    PredictiveGraph::new(g, d).expect("fixture is predictive")
}

/// `A -> B -> Y <- C` with `B <-> C` and `A <-> C`.
pub fn fig2a() -> Admg {
    Admg::from_names(
        &[("A", 2), ("B", 2), ("C", 2), ("Y", 2)],
        &[("A", "B"), ("B", "Y"), ("C", "Y")],
        &[("B", "C"), ("A", "C")],
    )
    .expect("fixture is valid")
}

pub fn fig2a_predictive() -> PredictiveGraph {
    let g = fig2a();
    let y = g.var("Y").expect("fixture has Y");
    PredictiveGraph::new(g, y).expect("fixture is predictive")
}

/// A graph whose Markov blanket of `Y` is `{A, B, C, D, E, F}`:
/// `A -> Y -> D <- C`, `D -> H`, `D <-> E <-> F`, `E -> G`, `B -> F`.
pub fn fig3a() -> Admg {
    Admg::from_names(
        &[
            ("A", 2),
            ("B", 2),
            ("C", 2),
            ("D", 2),
            ("E", 2),
            ("F", 2),
            ("G", 2),
            ("H", 2),
            ("Y", 2),
        ],
        &[
            ("A", "Y"),
            ("Y", "D"),
            ("C", "D"),
            ("D", "H"),
            ("E", "G"),
            ("B", "F"),
        ],
        &[("D", "E"), ("E", "F")],
    )
    .expect("fixture is valid")
}

/// `A -> Y -> C <- B`.
pub fn fig3b() -> Admg {
    Admg::from_names(
        &[("A", 2), ("B", 2), ("C", 2), ("Y", 2)],
        &[("A", "Y"), ("Y", "C"), ("B", "C")],
        &[],
    )
    .expect("fixture is valid")
}

/// Four causes of `Y` where `A -> C` and `B -> C`; `B` is marginally
/// independent of `{A, D}`.
pub fn fig4a() -> PredictiveGraph {
    let g = Admg::from_names(
        &[("A", 2), ("B", 2), ("C", 2), ("D", 2), ("Y", 2)],
        &[
            ("A", "Y"),
            ("B", "Y"),
            ("C", "Y"),
            ("D", "Y"),
            ("B", "C"),
            ("A", "C"),
        ],
        &[],
    )
    .expect("fixture is valid");
    let y = g.var("Y").expect("fixture has Y");
    PredictiveGraph::new(g, y).expect("fixture is predictive")
}
