use std::sync::RwLock;

use crate::{Error, Result};

/// Desk-scale limits guarding the exponential routines.
///
/// The defaults are conservative; the CLI lets `KCRIT_LIMITS` raise them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest graph accepted by [`crate::graph::canonical_form`].
    pub canonical: usize,
    /// Largest graph accepted by the exhaustive potential minimisation.
    pub potential: usize,
    /// Largest graph accepted by the coloring solver for budgets up to 6.
    pub coloring: usize,
    /// Largest graph accepted by the coloring solver for budgets above 6.
    pub coloring_wide: usize,
    /// Largest order the Ore oracle will enumerate.
    pub oracle: usize,
    /// Largest order handled by exhaustive critical-graph search.
    pub search: usize,
}

impl Limits {
    pub const DEFAULT: Limits = Limits {
        canonical: 16,
        potential: 24,
        coloring: 32,
        coloring_wide: 24,
        oracle: 13,
        search: 12,
    };

    /// Currently installed limits.
    pub fn get() -> Limits {
        *CURRENT.read().unwrap_or_else(|e| e.into_inner())
    }

    /// Installs process-wide limits.
    pub fn set(limits: Limits) {
        *CURRENT.write().unwrap_or_else(|e| e.into_inner()) = limits;
    }

    /// Applies overrides of the form `coloring=40,potential=26`.
    pub fn with_overrides(mut self, spec: &str) -> Result<Limits> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("limit override `{item}` lacks `=`")))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("limit `{key}` is not an integer")))?;
            let slot = match key.trim() {
                "canonical" => &mut self.canonical,
                "potential" => &mut self.potential,
                "coloring" => &mut self.coloring,
                "coloring_wide" => &mut self.coloring_wide,
                "oracle" => &mut self.oracle,
                "search" => &mut self.search,
                other => return Err(Error::InvalidArgument(format!("unknown limit `{other}`"))),
            };
            *slot = value;
        }
        Ok(self)
    }

    pub(crate) fn check(what: &'static str, size: usize, limit: usize) -> Result<()> {
        if size > limit {
            Err(Error::LimitExceeded { what, size, limit })
        } else {
            Ok(())
        }
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits::DEFAULT
    }
}

static CURRENT: RwLock<Limits> = RwLock::new(Limits::DEFAULT);
