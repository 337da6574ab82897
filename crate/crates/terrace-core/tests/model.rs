use proptest::prelude::*;
use terrace_core::model::{competitive_leq, reaction, ParamField};
use terrace_core::{Grid, ModelError, ModelParams, StatePair};

fn params() -> impl Strategy<Value = ModelParams> {
    (0.05f64..10.0, 0.05f64..10.0, 0.01f64..0.99, 1.01f64..5.0)
        .prop_map(|(d, r, a, b)| ModelParams::new(d, r, a, b).unwrap())
}

#[test]
fn parameter_validation_examples() {
    assert!(ModelParams::new(1.0, 1.21, 0.5, 1.1).is_ok());
    assert!(matches!(
        ModelParams::new(1.0, 1.0, 1.0, 1.1),
        Err(ModelError::OutOfRegime { field: ParamField::A, .. })
    ));
    assert!(matches!(
        ModelParams::new(1.0, 1.0, 0.5, 1.0),
        Err(ModelError::OutOfRegime { field: ParamField::B, .. })
    ));
    let p: Result<ModelParams, _> = serde_json::from_str(r#"{"d":1,"r":1,"a":1.5,"b":2}"#);
    assert!(p.is_err());
}

#[test]
fn reaction_examples() {
    let p = ModelParams::new(1.0, 1.21, 0.5, 1.1).unwrap();
    assert_eq!(reaction(&p, 0.0, 0.0, 0.0), (0.0, 0.0));
    assert_eq!(reaction(&p, 1.0, 0.0, 0.0), (0.0, 0.0));
    let (fu, fv) = reaction(&p, 0.5, 0.5, 0.0);
    assert!((fu - 0.125).abs() < 1e-15);
    assert!((fv - 1.21 * 0.5 * (1.0 - 0.5 - 0.55)).abs() < 1e-15);
}

#[test]
fn ordering_examples() {
    let g = Grid::new(0.0, 1.0, 3).unwrap();
    let s = StatePair::constant(g, 0.3, 0.7);
    assert!(competitive_leq(&s, &s).unwrap());
    let v_state = StatePair::constant(g, 0.0, 1.0);
    let u_state = StatePair::constant(g, 1.0, 0.0);
    assert!(competitive_leq(&v_state, &u_state).unwrap());
    let ones = StatePair::constant(g, 1.0, 1.0);
    let zeros = StatePair::constant(g, 0.0, 0.0);
    assert!(!competitive_leq(&ones, &zeros).unwrap());
    assert!(!competitive_leq(&zeros, &ones).unwrap());
    let other = StatePair::constant(Grid::new(0.0, 2.0, 3).unwrap(), 0.3, 0.7);
    assert!(competitive_leq(&s, &other).is_err());
}

fn state(u: Vec<f64>, v: Vec<f64>) -> StatePair {
    StatePair::new(Grid::new(0.0, 1.0, u.len()).unwrap(), 0.0, u, v).unwrap()
}

proptest! {
    #[test]
    fn reaction_vanishes_at_the_three_equilibria(p in params()) {
        for (u, v) in [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)] {
            prop_assert_eq!(reaction(&p, u, v, 0.0), (0.0, 0.0));
        }
    }

    #[test]
    fn reaction_points_into_the_unit_square(p in params(), s in 0.0f64..=1.0) {
        prop_assert_eq!(reaction(&p, 0.0, s, 0.0).0, 0.0);
        prop_assert!(reaction(&p, 1.0, s, 0.0).0 <= 0.0);
        prop_assert_eq!(reaction(&p, s, 0.0, 0.0).1, 0.0);
        prop_assert!(reaction(&p, s, 1.0, 0.0).1 <= 0.0);
    }

    #[test]
    fn competitive_order_is_a_partial_order(
        a in prop::collection::vec((0.0f64..=1.0, 0.0f64..=1.0), 4),
        b in prop::collection::vec((0.0f64..=1.0, 0.0f64..=1.0), 4),
        c in prop::collection::vec((0.0f64..=1.0, 0.0f64..=1.0), 4),
    ) {
        let mk = |x: &[(f64, f64)]| state(x.iter().map(|p| p.0).collect(), x.iter().map(|p| p.1).collect());
        let (sa, sb, sc) = (mk(&a), mk(&b), mk(&c));
        prop_assert!(competitive_leq(&sa, &sa).unwrap());
        if competitive_leq(&sa, &sb).unwrap() && competitive_leq(&sb, &sa).unwrap() {
            prop_assert_eq!(&sa, &sb);
        }
        if competitive_leq(&sa, &sb).unwrap() && competitive_leq(&sb, &sc).unwrap() {
            prop_assert!(competitive_leq(&sa, &sc).unwrap());
        }
        // Componentwise min/max build an ordered pair from any two states.
        let lo = state(
            sa.u.iter().zip(&sb.u).map(|(x, y)| x.min(*y)).collect(),
            sa.v.iter().zip(&sb.v).map(|(x, y)| x.max(*y)).collect(),
        );
        prop_assert!(competitive_leq(&lo, &sa).unwrap() && competitive_leq(&lo, &sb).unwrap());
    }
}
