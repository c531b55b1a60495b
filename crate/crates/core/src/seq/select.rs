use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::VertexId;
use crate::Color;

/// Color selection strategy used when a vertex is (re)colored.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SelectionKind {
    FirstFit,
    /// First fit from a rank-dependent offset inside an estimated palette.
    /// `None` estimates the palette as max degree + 1.
    StaggeredFirstFit(Option<Color>),
    LeastUsed,
    /// Uniform choice among the first X permissible colors.
    RandomX(Color),
}

impl SelectionKind {
    pub fn validate(&self) -> Result<(), String> {
        match *self {
            SelectionKind::RandomX(0) => Err("Random-X needs X >= 1".into()),
            SelectionKind::StaggeredFirstFit(Some(0)) => {
                Err("staggered first fit needs an estimate >= 1".into())
            }
            _ => Ok(()),
        }
    }

    pub fn short_name(&self) -> String {
        match self {
            SelectionKind::FirstFit => "F".into(),
            SelectionKind::StaggeredFirstFit(_) => "SF".into(),
            SelectionKind::LeastUsed => "LU".into(),
            SelectionKind::RandomX(x) => format!("R{x}"),
        }
    }
}

impl fmt::Display for SelectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SelectionKind::FirstFit => f.write_str("ff"),
            SelectionKind::StaggeredFirstFit(None) => f.write_str("sff"),
            SelectionKind::StaggeredFirstFit(Some(e)) => write!(f, "sff:{e}"),
            SelectionKind::LeastUsed => f.write_str("lu"),
            SelectionKind::RandomX(x) => write!(f, "randx:{x}"),
        }
    }
}

impl FromStr for SelectionKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        let (name, arg) = match lower.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (lower.as_str(), None),
        };
        let number = |a: &str| {
            a.parse::<Color>()
                .map_err(|_| format!("bad numeric argument {a:?} in {s:?}"))
        };
        let kind = match (name, arg) {
            ("ff", None) => SelectionKind::FirstFit,
            ("lu", None) => SelectionKind::LeastUsed,
            ("sff", None) => SelectionKind::StaggeredFirstFit(None),
            ("sff", Some(a)) => SelectionKind::StaggeredFirstFit(Some(number(a)?)),
            ("randx", Some(a)) => SelectionKind::RandomX(number(a)?),
            _ => return Err(format!("unknown selection {s:?}")),
        };
        kind.validate()?;
        Ok(kind)
    }
}

/// Colors forbidden for the vertex being colored. Clearing is O(1): a
/// color is forbidden iff its mark equals the current stamp.
#[derive(Clone, Debug, Default)]
pub struct ForbiddenColors {
    marks: Vec<u32>,
    stamp: u32,
}

impl ForbiddenColors {
    pub fn new() -> Self {
        Self {
            marks: Vec::new(),
            stamp: 1,
        }
    }

    pub fn clear(&mut self) {
        if self.stamp == u32::MAX {
            self.marks.fill(0);
            self.stamp = 0;
        }
        self.stamp += 1;
    }

    pub fn insert(&mut self, c: Color) {
        let i = c as usize;
        if i >= self.marks.len() {
            self.marks.resize(i + 1, 0);
        }
        self.marks[i] = self.stamp;
    }

    pub fn contains(&self, c: Color) -> bool {
        self.marks.get(c as usize) == Some(&self.stamp)
    }

    /// Permissible colors in increasing order, starting at `from`.
    pub fn permitted_from(&self, from: Color) -> impl Iterator<Item = Color> + '_ {
        (from.max(1)..).filter(move |&c| !self.contains(c))
    }
}

impl FromIterator<Color> for ForbiddenColors {
    fn from_iter<I: IntoIterator<Item = Color>>(iter: I) -> Self {
        let mut f = ForbiddenColors::new();
        for c in iter {
            f.insert(c);
        }
        f
    }
}

/// Local state a selection strategy may consult.
#[derive(Clone, Copy, Debug)]
pub struct SelectionContext<'a> {
    /// `usage[c]` = vertices colored `c` so far (index 0 unused).
    pub usage: &'a [usize],
    /// Largest color used so far.
    pub num_colors: Color,
    pub rank: usize,
    pub num_ranks: usize,
    /// Palette estimate for staggered first fit when none is configured.
    pub default_estimate: Color,
}

/// First X permissible colors, increasing.
pub fn random_x_candidates(forbidden: &ForbiddenColors, x: Color) -> Vec<Color> {
    forbidden.permitted_from(1).take(x as usize).collect()
}

pub fn pick_color<R: Rng + ?Sized>(
    forbidden: &ForbiddenColors,
    kind: SelectionKind,
    ctx: &SelectionContext<'_>,
    rng: &mut R,
) -> Color {
    let first_fit = || forbidden.permitted_from(1).next().unwrap();
    match kind {
        SelectionKind::FirstFit => first_fit(),
        SelectionKind::StaggeredFirstFit(estimate) => {
            let estimate = estimate.unwrap_or(ctx.default_estimate).max(1);
            let p = ctx.num_ranks.max(1) as Color;
            let stride = estimate.div_ceil(p);
            let start = (1 + ctx.rank as Color * stride).min(estimate);
            (start..=estimate)
                .chain(1..start)
                .find(|&c| !forbidden.contains(c))
                .unwrap_or_else(|| forbidden.permitted_from(estimate + 1).next().unwrap())
        }
        SelectionKind::LeastUsed => {
            let usage = |c: Color| ctx.usage.get(c as usize).copied().unwrap_or(0);
            (1..=ctx.num_colors)
                .filter(|&c| !forbidden.contains(c))
                .min_by_key(|&c| (usage(c), c))
                .unwrap_or_else(first_fit)
        }
        SelectionKind::RandomX(x) => {
            let candidates = random_x_candidates(forbidden, x.max(1));
            candidates[rng.gen_range(0..candidates.len())]
        }
    }
}

/// Generator for one vertex's draws: a ChaCha stream keyed by `vertex`,
/// under a key derived from `(seed, epoch)`. Draws of one vertex do not
/// depend on the visit order of others.
pub fn vertex_rng(seed: u64, epoch: u64, vertex: VertexId) -> ChaCha8Rng {
    let key = seed ^ epoch.wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(17);
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    rng.set_stream(vertex as u64);
    rng
}

/// Selection strategy plus the per-rank bookkeeping it needs.
#[derive(Clone, Debug)]
pub struct ColorSelector {
    kind: SelectionKind,
    seed: u64,
    rank: usize,
    num_ranks: usize,
    default_estimate: Color,
    forbidden: ForbiddenColors,
    usage: Vec<usize>,
    num_colors: Color,
}

impl ColorSelector {
    pub fn new(kind: SelectionKind, seed: u64, rank: usize, num_ranks: usize, max_degree: usize) -> Self {
        Self {
            kind,
            seed,
            rank,
            num_ranks,
            default_estimate: max_degree as Color + 1,
            forbidden: ForbiddenColors::new(),
            usage: vec![0],
            num_colors: 0,
        }
    }

    pub fn kind(&self) -> SelectionKind {
        self.kind
    }

    /// Clears and returns the forbidden set for the next vertex.
    pub fn start(&mut self) -> &mut ForbiddenColors {
        self.forbidden.clear();
        &mut self.forbidden
    }

    pub fn forbidden(&self) -> &ForbiddenColors {
        &self.forbidden
    }

    /// Picks a color for `vertex` against the current forbidden set and
    /// records its use.
    pub fn choose(&mut self, vertex: VertexId, epoch: u64) -> Color {
        let ctx = SelectionContext {
            usage: &self.usage,
            num_colors: self.num_colors,
            rank: self.rank,
            num_ranks: self.num_ranks,
            default_estimate: self.default_estimate,
        };
        let color = match self.kind {
            SelectionKind::RandomX(_) => {
                let mut rng = vertex_rng(self.seed, epoch, vertex);
                pick_color(&self.forbidden, self.kind, &ctx, &mut rng)
            }
            _ => pick_color(&self.forbidden, self.kind, &ctx, &mut rand::rngs::mock::StepRng::new(0, 0)),
        };
        self.record(color);
        color
    }

    pub fn record(&mut self, color: Color) {
        let i = color as usize;
        if i >= self.usage.len() {
            self.usage.resize(i + 1, 0);
        }
        self.usage[i] += 1;
        self.num_colors = self.num_colors.max(color);
    }

    /// Undoes one use of `color`, e.g. when a conflict uncolors a vertex.
    pub fn release(&mut self, color: Color) {
        if let Some(u) = self.usage.get_mut(color as usize) {
            *u = u.saturating_sub(1);
        }
    }
}
