use thiserror::Error;

/// Caps for the exhaustive operations. Every search that can blow up
/// combinatorially checks one of these counters and aborts with
/// [`Error::Budget`] instead of running away.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    /// Maximum number of simple cycles an enumeration may yield.
    pub max_cycles: usize,
    /// Maximum number of bipartitions a cut enumeration may visit.
    pub max_cut_sides: usize,
    /// Largest vertex count accepted by the exact tree-depth search.
    pub max_td_vertices: usize,
    /// Maximum total number of arcs a completion may accumulate.
    pub max_completion_arcs: usize,
    /// Node cap shared by the backtracking searches.
    pub max_search_nodes: u64,
    /// Largest vertex count a generator may produce.
    pub max_generated_vertices: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_cycles: 1_000_000,
            max_cut_sides: 1 << 20,
            max_td_vertices: 16,
            max_completion_arcs: 1 << 20,
            max_search_nodes: 200_000_000,
            max_generated_vertices: 1 << 14,
        }
    }
}

impl Budget {
    /// A budget with every cap raised `factor` times, for tests that
    /// deliberately push past the defaults.
    pub fn scaled(factor: usize) -> Self {
        let d = Budget::default();
        Budget {
            max_cycles: d.max_cycles.saturating_mul(factor),
            max_cut_sides: d.max_cut_sides.saturating_mul(factor),
            max_td_vertices: d.max_td_vertices,
            max_completion_arcs: d.max_completion_arcs.saturating_mul(factor),
            max_search_nodes: d.max_search_nodes.saturating_mul(factor as u64),
            max_generated_vertices: d.max_generated_vertices.saturating_mul(factor),
        }
    }
}

/// A counter that trips once a cap is reached.
#[derive(Debug)]
pub(crate) struct Meter {
    used: u64,
    cap: u64,
    what: &'static str,
}

impl Meter {
    pub(crate) fn new(cap: u64, what: &'static str) -> Self {
        Meter { used: 0, cap, what }
    }

    #[inline]
    pub(crate) fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.cap {
            return Err(Error::Budget(format!(
                "{} exceeded cap of {}",
                self.what, self.cap
            )));
        }
        Ok(())
    }

}

#[derive(Debug, Error)]
pub enum Error {
    /// Input text could not be parsed; `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    /// An exhaustive operation hit one of its [`Budget`] caps.
    #[error("budget exceeded: {0}")]
    Budget(String),
    /// The caller violated a documented precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A self-check that should never fail did; indicates a defect.
    #[error("internal check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
