use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::RecolorError;
use crate::Color;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PermutationKind {
    /// Colors from largest to smallest.
    Reverse,
    /// Classes by decreasing global size.
    NonIncreasing,
    /// Classes by increasing global size.
    NonDecreasing,
    /// Uniform shuffle.
    Random,
}

impl PermutationKind {
    pub fn short_name(self) -> &'static str {
        match self {
            PermutationKind::Reverse => "RV",
            PermutationKind::NonIncreasing => "NI",
            PermutationKind::NonDecreasing => "ND",
            PermutationKind::Random => "RAND",
        }
    }

    /// Whether building this permutation needs global class sizes.
    pub fn needs_sizes(self) -> bool {
        matches!(self, PermutationKind::NonIncreasing | PermutationKind::NonDecreasing)
    }
}

impl fmt::Display for PermutationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PermutationKind::Reverse => "rv",
            PermutationKind::NonIncreasing => "ni",
            PermutationKind::NonDecreasing => "nd",
            PermutationKind::Random => "rand",
        })
    }
}

impl FromStr for PermutationKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rv" => Ok(PermutationKind::Reverse),
            "ni" => Ok(PermutationKind::NonIncreasing),
            "nd" => Ok(PermutationKind::NonDecreasing),
            "rand" => Ok(PermutationKind::Random),
            other => Err(format!("unknown permutation {other:?}")),
        }
    }
}

/// The order in which color classes are recolored: `order[k - 1]` is the
/// class handled at step `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorClassPermutation {
    kind: Option<PermutationKind>,
    order: Vec<Color>,
    step_of: Vec<usize>,
}

impl ColorClassPermutation {
    /// Wraps an explicit order, which must be a permutation of `1..=len`.
    pub fn from_order(order: Vec<Color>) -> Result<Self, RecolorError> {
        let n = order.len();
        let mut step_of = vec![0usize; n + 1];
        for (i, &c) in order.iter().enumerate() {
            let slot = step_of
                .get_mut(c as usize)
                .filter(|_| c >= 1)
                .ok_or(RecolorError::NotAPermutation)?;
            if *slot != 0 {
                return Err(RecolorError::NotAPermutation);
            }
            *slot = i + 1;
        }
        Ok(Self {
            kind: None,
            order,
            step_of,
        })
    }

    pub fn identity(num_colors: Color) -> Self {
        Self::from_order((1..=num_colors).collect()).unwrap()
    }

    pub fn kind(&self) -> Option<PermutationKind> {
        self.kind
    }

    pub fn order(&self) -> &[Color] {
        &self.order
    }

    pub fn num_steps(&self) -> usize {
        self.order.len()
    }

    /// 1-based step at which class `color` is recolored.
    pub fn step_of(&self, color: Color) -> usize {
        self.step_of[color as usize]
    }

    pub fn covers(&self, color: Color) -> bool {
        color >= 1 && (color as usize) < self.step_of.len()
    }
}

/// Orders color classes `1..=max key` of `sizes`. Ties in NI and ND go to
/// the smaller color.
pub fn build_class_permutation<R: Rng + ?Sized>(
    sizes: &BTreeMap<Color, usize>,
    kind: PermutationKind,
    rng: &mut R,
) -> Result<ColorClassPermutation, RecolorError> {
    let num_colors = sizes.keys().next_back().copied().unwrap_or(0);
    if let Some(missing) = (1..=num_colors).find(|c| !sizes.contains_key(c)) {
        return Err(RecolorError::MissingClassSize(missing));
    }
    if sizes.contains_key(&0) {
        return Err(RecolorError::MissingClassSize(0));
    }
    let mut order: Vec<Color> = (1..=num_colors).collect();
    match kind {
        PermutationKind::Reverse => order.reverse(),
        PermutationKind::NonIncreasing => order.sort_by_key(|c| (std::cmp::Reverse(sizes[c]), *c)),
        PermutationKind::NonDecreasing => order.sort_by_key(|c| (sizes[c], *c)),
        PermutationKind::Random => order.shuffle(rng),
    }
    let mut perm = ColorClassPermutation::from_order(order)?;
    perm.kind = Some(kind);
    Ok(perm)
}

/// Class sizes as a map over `1..=sizes.len()`.
pub fn sizes_map(sizes: &[usize]) -> BTreeMap<Color, usize> {
    sizes
        .iter()
        .enumerate()
        .map(|(i, &s)| (i as Color + 1, s))
        .collect()
}
