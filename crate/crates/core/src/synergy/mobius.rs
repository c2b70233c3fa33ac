use num_traits::Zero;
use thiserror::Error;

use super::UNBOUNDED_MAX_PROJECTS;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SetFunctionError {
    #[error("ground set of {0} items exceeds the limit of {UNBOUNDED_MAX_PROJECTS}")]
    TooLarge(usize),
    #[error("no value for subset mask {0:#b}")]
    Missing(u32),
    #[error("subset mask {0:#b} lies outside the ground set")]
    OutOfRange(u32),
    #[error("value of the empty set must be 0")]
    NonZeroEmpty,
}

/// A function on all subsets of `{0, .., n-1}`, indexed by bitmask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFunction {
    ground: usize,
    values: Vec<Rational>,
}

impl SetFunction {
    /// Builds a complete table; every one of the `2^n` masks must be given.
    pub fn from_entries(
        ground: usize,
        entries: impl IntoIterator<Item = (u32, Rational)>,
    ) -> Result<Self, SetFunctionError> {
        if ground > UNBOUNDED_MAX_PROJECTS {
            return Err(SetFunctionError::TooLarge(ground));
        }
        let size = 1usize << ground;
        let mut values: Vec<Option<Rational>> = vec![None; size];
        for (mask, value) in entries {
            let slot = values
                .get_mut(mask as usize)
                .ok_or(SetFunctionError::OutOfRange(mask))?;
            *slot = Some(value);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(mask, v)| v.ok_or(SetFunctionError::Missing(mask as u32)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SetFunction { ground, values })
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn get(&self, mask: u32) -> &Rational {
        &self.values[mask as usize]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }
}

/// Möbius inversion `m(S) = Σ_{C⊆S} (-1)^{|S∖C|} u(C)`, in `O(n·2^n)`.
pub fn mobius_from_utility_table(u: &SetFunction) -> Result<SetFunction, SetFunctionError> {
    if !u.values[0].is_zero() {
        return Err(SetFunctionError::NonZeroEmpty);
    }
    let mut m = u.values.clone();
    for bit in 0..u.ground {
        let b = 1usize << bit;
        for mask in 0..m.len() {
            if mask & b != 0 {
                let lower = m[mask ^ b].clone();
                m[mask] -= lower;
            }
        }
    }
    Ok(SetFunction {
        ground: u.ground,
        values: m,
    })
}

/// Inverse of [`mobius_from_utility_table`]: `u(S) = Σ_{C⊆S} m(C)`.
pub fn utility_from_mobius(m: &SetFunction) -> SetFunction {
    let mut u = m.values.clone();
    for bit in 0..m.ground {
        let b = 1usize << bit;
        for mask in 0..u.len() {
            if mask & b != 0 {
                let lower = u[mask ^ b].clone();
                u[mask] += lower;
            }
        }
    }
    SetFunction {
        ground: m.ground,
        values: u,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational;
    use proptest::prelude::*;

    /// Direct signed sum over submasks.
    fn inversion_oracle(u: &SetFunction, s: u32) -> Rational {
        let mut total = Rational::zero();
        let mut c = s;
        loop {
            let sign_odd = (s & !c).count_ones() % 2 == 1;
            if sign_odd {
                total -= u.get(c);
            } else {
                total += u.get(c);
            }
            if c == 0 {
                break;
            }
            c = (c - 1) & s;
        }
        total
    }

    fn three_item_table() -> SetFunction {
        // items 1,2,3 are bits 0,1,2
        let tenths = [0, 2, 4, 5, 5, 7, 8, 10];
        let masks = [0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111];
        SetFunction::from_entries(3, masks.into_iter().zip(tenths.map(|t| rational(t, 10)))).unwrap()
    }

    #[test]
    fn worked_three_item_example() {
        let u = three_item_table();
        let m = mobius_from_utility_table(&u).unwrap();
        assert_eq!(*m.get(0b011), rational(-1, 10));
        for s in 0..8 {
            assert_eq!(*m.get(s), inversion_oracle(&u, s));
        }
        assert_eq!(utility_from_mobius(&m), u);
    }

    #[test]
    fn additive_functions_have_no_interactions() {
        let weights = [rational(3, 1), rational(1, 2), rational(7, 3), rational(5, 1)];
        let entries = (0u32..16).map(|mask| {
            let v = (0..4)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| weights[i].clone())
                .sum();
            (mask, v)
        });
        let m = mobius_from_utility_table(&SetFunction::from_entries(4, entries).unwrap()).unwrap();
        for mask in 0u32..16 {
            if mask.count_ones() >= 2 {
                assert!(m.get(mask).is_zero());
            }
        }
    }

    #[test]
    fn incomplete_and_invalid_tables() {
        assert_eq!(
            SetFunction::from_entries(2, [(0, rational(0, 1)), (1, rational(1, 1))]).unwrap_err(),
            SetFunctionError::Missing(2)
        );
        assert_eq!(
            SetFunction::from_entries(1, [(0, rational(0, 1)), (4, rational(1, 1))]).unwrap_err(),
            SetFunctionError::OutOfRange(4)
        );
        let u = SetFunction::from_entries(1, [(0, rational(1, 1)), (1, rational(1, 1))]).unwrap();
        assert_eq!(mobius_from_utility_table(&u).unwrap_err(), SetFunctionError::NonZeroEmpty);
    }

    proptest! {
        #[test]
        fn inversion_round_trips(n in 0usize..=6, seed in proptest::collection::vec((-50i64..50, 1i64..9), 64)) {
            let entries = (0..(1u32 << n)).map(|mask| {
                let (p, q) = seed[mask as usize];
                (mask, if mask == 0 { rational(0, 1) } else { rational(p, q) })
            });
            let u = SetFunction::from_entries(n, entries).unwrap();
            let m = mobius_from_utility_table(&u).unwrap();
            for s in 0..(1u32 << n) {
                prop_assert_eq!(m.get(s), &inversion_oracle(&u, s));
            }
            prop_assert_eq!(utility_from_mobius(&m), u);
        }
    }
}
