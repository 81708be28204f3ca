//! Built-in verification suites: the domination grids run by `verify` and
//! the self-normalized experiments run by `selfnorm` when no config file is
//! given.
//!
//! Grid cells are chosen so that, at 1e5 trials, every cell sees well over
//! the minimum gating hit count and the true probability sits comfortably
//! below its bound (the one-sided band at δ = 1e-3 is ±0.0062).

use martail::characteristics::CharKind;
use martail::montecarlo::{BoundName, DominationCell, EventSpec};
use martail::processes::IncrementModel;

use crate::config::SelfnormExperiment;

fn supermg_model() -> IncrementModel {
    IncrementModel::bounded_supermg(vec![(-1.0, 0.5), (0.5, 0.4), (1.0, 0.1)], 1.0).unwrap()
}

fn three_atom_mean_zero() -> IncrementModel {
    IncrementModel::uniform(&[-2.0, 0.5, 1.5]).unwrap()
}

fn four_atom_symmetric() -> IncrementModel {
    IncrementModel::finite_support(vec![(-2.0, 0.25), (-0.5, 0.25), (0.5, 0.25), (2.0, 0.25)])
        .unwrap()
}

fn cell(
    model_id: &str,
    model: IncrementModel,
    spec: EventSpec,
    bounds: &[BoundName],
) -> DominationCell {
    DominationCell { model_id: model_id.to_string(), model, spec, bounds: bounds.to_vec() }
}

/// Bennett/Bernstein grid: supermartingale models, events on `G^y`.
pub fn theorem1_cells() -> Vec<DominationCell> {
    let rad = IncrementModel::Rademacher;
    let both = [BoundName::B1, BoundName::B2];
    let g = |y: f64| CharKind::G { y };
    vec![
        cell("rademacher", rad.clone(), EventSpec::some_k(g(1.0), 8.0, 50.0, 50), &both),
        cell("rademacher", rad.clone(), EventSpec::some_k(g(1.0), 12.0, 50.0, 50), &both),
        cell("rademacher", rad.clone(), EventSpec::some_k(g(1.0), 16.0, 50.0, 50), &both),
        cell("rademacher", rad.clone(), EventSpec::some_k(g(2.0), 8.0, 50.0, 50), &both),
        cell("rademacher", rad, EventSpec::max_terminal(g(2.0), 12.0, 50.0, 50), &both),
        cell("supermg", supermg_model(), EventSpec::some_k(g(1.0), 5.0, 35.0, 50), &both),
        cell("supermg", supermg_model(), EventSpec::some_k(g(1.0), 8.0, 35.0, 50), &both),
        cell("three_atom", three_atom_mean_zero(), EventSpec::some_k(g(1.5), 10.0, 110.0, 50), &both),
        cell("three_atom", three_atom_mean_zero(), EventSpec::some_k(g(1.5), 12.5, 110.0, 50), &both),
        cell("three_atom", three_atom_mean_zero(), EventSpec::some_k(g(1.5), 15.0, 110.0, 50), &both),
        cell(
            "pareto_2_5",
            IncrementModel::sym_pareto(2.5, 1.0).unwrap(),
            EventSpec::some_k(g(2.0), 10.0, 160.0, 30),
            &both,
        ),
        cell(
            "pareto_2_5",
            IncrementModel::sym_pareto(2.5, 1.0).unwrap(),
            EventSpec::some_k(g(2.0), 18.0, 160.0, 30),
            &both,
        ),
    ]
}

/// Power-type grid: supermartingale models, events on `G(β)`.
pub fn theorem2_cells() -> Vec<DominationCell> {
    let rad = IncrementModel::Rademacher;
    let t2 = [BoundName::Theorem2];
    let gb = |beta: f64| CharKind::GBeta { beta };
    vec![
        cell("rademacher", rad.clone(), EventSpec::some_k(gb(1.5), 10.0, 55.0, 50), &t2),
        cell("rademacher", rad.clone(), EventSpec::some_k(gb(1.5), 16.0, 55.0, 50), &t2),
        cell("rademacher", rad.clone(), EventSpec::max_terminal(gb(1.5), 12.0, 55.0, 50), &t2),
        cell("rademacher", rad.clone(), EventSpec::some_k(gb(1.8), 10.0, 55.0, 50), &t2),
        cell("rademacher", rad, EventSpec::some_k(gb(1.8), 16.0, 55.0, 50), &t2),
        cell("supermg", supermg_model(), EventSpec::some_k(gb(1.5), 5.0, 45.0, 50), &t2),
        cell("supermg", supermg_model(), EventSpec::some_k(gb(1.5), 8.0, 45.0, 50), &t2),
        cell(
            "pareto_2_5",
            IncrementModel::sym_pareto(2.5, 1.0).unwrap(),
            EventSpec::some_k(gb(1.8), 8.0, 120.0, 30),
            &t2,
        ),
        cell(
            "pareto_2_5",
            IncrementModel::sym_pareto(2.5, 1.0).unwrap(),
            EventSpec::some_k(gb(1.8), 14.0, 120.0, 30),
            &t2,
        ),
        cell("three_atom", three_atom_mean_zero(), EventSpec::some_k(gb(1.5), 12.0, 95.0, 50), &t2),
        cell(
            "three_atom",
            three_atom_mean_zero(),
            EventSpec::max_terminal(gb(1.5), 15.0, 95.0, 50),
            &t2,
        ),
        cell(
            "two_point",
            IncrementModel::two_point_sym(1.0, 0.5).unwrap(),
            EventSpec::some_k(gb(1.5), 7.0, 30.0, 50),
            &t2,
        ),
    ]
}

/// Cosh-type grid: symmetric models, events on `M^y` (and `[S]` at y = 0,
/// the De la Peña case).
pub fn theorem3_cells() -> Vec<DominationCell> {
    let rad = IncrementModel::Rademacher;
    let b0 = [BoundName::B0];
    let m = |y: f64| CharKind::M { y };
    vec![
        cell("rademacher", rad.clone(), EventSpec::some_k(m(1.0), 8.0, 50.0, 50), &b0),
        cell("rademacher", rad.clone(), EventSpec::some_k(m(1.0), 12.0, 50.0, 50), &b0),
        cell("rademacher", rad.clone(), EventSpec::some_k(m(1.0), 16.0, 50.0, 50), &b0),
        cell("rademacher", rad.clone(), EventSpec::some_k(CharKind::SqVar, 8.0, 50.0, 50), &b0),
        cell("rademacher", rad.clone(), EventSpec::max_terminal(CharKind::SqVar, 12.0, 50.0, 50), &b0),
        cell("rademacher", rad, EventSpec::some_k(CharKind::SqVar, 16.0, 50.0, 50), &b0),
        cell(
            "two_point",
            IncrementModel::two_point_sym(1.0, 0.5).unwrap(),
            EventSpec::some_k(m(1.0), 5.0, 25.0, 50),
            &b0,
        ),
        cell(
            "two_point",
            IncrementModel::two_point_sym(1.0, 0.5).unwrap(),
            EventSpec::some_k(m(1.0), 7.0, 25.0, 50),
            &b0,
        ),
        cell(
            "pareto_2_5",
            IncrementModel::sym_pareto(2.5, 1.0).unwrap(),
            EventSpec::some_k(m(3.0), 8.0, 120.0, 30),
            &b0,
        ),
        cell(
            "pareto_2_5",
            IncrementModel::sym_pareto(2.5, 1.0).unwrap(),
            EventSpec::some_k(m(3.0), 14.0, 120.0, 30),
            &b0,
        ),
        cell("four_atom", four_atom_symmetric(), EventSpec::some_k(m(2.0), 10.0, 85.0, 40), &b0),
        cell("four_atom", four_atom_symmetric(), EventSpec::some_k(m(2.0), 14.0, 85.0, 40), &b0),
    ]
}

/// The full default `verify` suite.
pub fn default_verify_cells() -> Vec<DominationCell> {
    let mut cells = theorem1_cells();
    cells.extend(theorem2_cells());
    cells.extend(theorem3_cells());
    cells
}

/// The default self-normalized experiments: the sub-Gaussian endpoint on
/// Rademacher increments and the heavy-tailed case where only the β-moment
/// machinery applies.
pub fn default_selfnorm_experiments() -> Vec<SelfnormExperiment> {
    vec![
        SelfnormExperiment {
            model_id: Some("rademacher".into()),
            model: IncrementModel::Rademacher,
            beta: 2.0,
            x_grid: vec![1.0, 2.0, 3.0],
            n: 100,
        },
        SelfnormExperiment {
            model_id: Some("pareto_1_2".into()),
            model: IncrementModel::sym_pareto(1.2, 1.0).unwrap(),
            beta: 1.5,
            x_grid: vec![0.5, 1.0, 1.5],
            n: 100,
        },
    ]
}
