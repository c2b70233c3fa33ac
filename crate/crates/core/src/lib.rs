//! Participatory budgeting with approval ballots and synergies between projects.
//!
//! A [`scenario::BudgetingScenario`] holds projects, ballots and a budget.
//! [`synergy::SynergyModel`] turns co-approval statistics into a utility over
//! bundles, [`solver`] picks the best affordable bundle under a welfare
//! aggregator and [`axioms`] checks the properties of both.

pub mod set;
pub mod scenario;
pub mod synergy;
pub mod solver;
pub mod generate;
pub mod axioms;
pub mod cli;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact rational used for every rate, transform and utility.
pub type Rational = BigRational;

/// `n / d` as a [`Rational`]. Panics when `d == 0`.
pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub mod exact {
    //! Serialization of exact values as `{"exact": "p/q", "decimal": f}`.

    use num_traits::ToPrimitive;
    use serde::{Serialize, Serializer};

    use crate::Rational;

    #[derive(Debug, Clone, PartialEq, Serialize)]
    pub struct ExactValue {
        pub exact: String,
        pub decimal: f64,
    }

    impl From<&Rational> for ExactValue {
        fn from(r: &Rational) -> Self {
            ExactValue {
                exact: r.to_string(),
                decimal: to_f64(r),
            }
        }
    }

    pub fn to_f64(r: &Rational) -> f64 {
        r.to_f64().unwrap_or(f64::NAN)
    }

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        ExactValue::from(r).serialize(s)
    }

    pub fn serialize_vec<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(ExactValue::from))
    }
}
