use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable naming the default budget profile.
pub const PROFILE_ENV: &str = "MODREEDY_BUDGET_PROFILE";

/// Caps for every enumeration the library performs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Largest finite-set cardinality enumerated.
    pub max_card: usize,
    /// Largest per-degree dimension of an enumerated chain complex.
    pub max_dim: usize,
    /// Highest degree in which an enumerated chain complex may be non-zero.
    pub max_degree: usize,
    /// Cap on the size of any single hom-set or solution set that gets listed.
    pub max_homs: usize,
    /// Cap on the number of objects/diagrams produced by one enumeration.
    pub max_objects: usize,
    /// Cap on the number of sampled morphisms/squares per check.
    pub samples: usize,
}

impl Budget {
    pub const SMALL: Budget = Budget {
        max_card: 2,
        max_dim: 1,
        max_degree: 1,
        max_homs: 1 << 12,
        max_objects: 1 << 12,
        samples: 64,
    };

    pub const DEFAULT: Budget = Budget {
        max_card: 3,
        max_dim: 2,
        max_degree: 2,
        max_homs: 1 << 16,
        max_objects: 1 << 16,
        samples: 256,
    };

    pub const LARGE: Budget = Budget {
        max_card: 4,
        max_dim: 2,
        max_degree: 3,
        max_homs: 1 << 20,
        max_objects: 1 << 20,
        samples: 1024,
    };

    pub fn profile(name: &str) -> Result<Budget> {
        match name {
            "small" => Ok(Self::SMALL),
            "default" => Ok(Self::DEFAULT),
            "large" => Ok(Self::LARGE),
            other => Err(Error::Format(format!(
                "unknown budget profile `{other}` (expected small|default|large)"
            ))),
        }
    }

    /// Profile selected by [`PROFILE_ENV`], falling back to [`Budget::DEFAULT`].
    pub fn from_env() -> Result<Budget> {
        match std::env::var(PROFILE_ENV) {
            Ok(v) if !v.is_empty() => Self::profile(&v),
            _ => Ok(Self::DEFAULT),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("max_homs", self.max_homs),
            ("max_objects", self.max_objects),
            ("samples", self.samples),
        ];
        for (name, v) in fields {
            if v == 0 {
                return Err(Error::Format(format!("budget field {name} must be positive")));
            }
        }
        Ok(())
    }

    pub fn with_card(mut self, card: usize) -> Self {
        self.max_card = card;
        self
    }

    pub fn with_dim(mut self, dim: usize) -> Self {
        self.max_dim = dim;
        self
    }

    pub fn with_degree(mut self, degree: usize) -> Self {
        self.max_degree = degree;
        self
    }

    pub fn with_objects(mut self, objects: usize) -> Self {
        self.max_objects = objects;
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Deterministic thinning of a list down to at most `cap` items, keeping first and
/// evenly spaced elements.
pub fn thin<T: Clone>(items: &[T], cap: usize) -> Vec<T> {
    if items.len() <= cap || cap == 0 {
        return items.to_vec();
    }
    let n = items.len();
    (0..cap).map(|k| items[k * n / cap].clone()).collect()
}
