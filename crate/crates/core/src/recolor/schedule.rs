use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::permutation::PermutationKind;

/// Iterations at which a Random permutation replaces the base one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RandomInjection {
    Never,
    /// Iterations `i` (1-based) with `i % x == 0`.
    Every(u32),
    /// Iterations 2, 4, 8, ...
    PowersOfTwo,
}

impl RandomInjection {
    pub fn fires(self, iteration: usize) -> bool {
        match self {
            RandomInjection::Never => false,
            RandomInjection::Every(x) => x > 0 && iteration % x as usize == 0,
            RandomInjection::PowersOfTwo => iteration >= 2 && iteration.is_power_of_two(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PermutationSchedule {
    pub base: PermutationKind,
    pub injection: RandomInjection,
}

impl PermutationSchedule {
    pub fn fixed(base: PermutationKind) -> Self {
        Self {
            base,
            injection: RandomInjection::Never,
        }
    }

    /// Permutation used at 1-based iteration `i`.
    pub fn kind_at(&self, iteration: usize) -> PermutationKind {
        if self.injection.fires(iteration) {
            PermutationKind::Random
        } else {
            self.base
        }
    }
}

impl fmt::Display for PermutationSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.injection {
            RandomInjection::Never => write!(f, "{}", self.base),
            RandomInjection::Every(x) => write!(f, "{}-rand:{x}", self.base),
            RandomInjection::PowersOfTwo => write!(f, "{}-rand-pow2", self.base),
        }
    }
}

impl FromStr for PermutationSchedule {
    type Err = String;

    /// `rv|ni|nd|rand`, optionally suffixed `-rand:X` or `-rand-pow2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(base) = s.strip_suffix("-rand-pow2") {
            return Ok(Self {
                base: base.parse()?,
                injection: RandomInjection::PowersOfTwo,
            });
        }
        if let Some((base, x)) = s.split_once("-rand:") {
            let x: u32 = x
                .parse()
                .map_err(|_| format!("bad injection interval {x:?}"))?;
            if x == 0 {
                return Err("injection interval must be at least 1".into());
            }
            return Ok(Self {
                base: base.parse()?,
                injection: RandomInjection::Every(x),
            });
        }
        Ok(Self::fixed(s.parse()?))
    }
}
