//! Boolean check outcomes that carry a witness exactly when they fail.

/// Outcome of a universally quantified check: `holds` with no witness, or
/// a counterexample of type `W`. The witness is present iff the check fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check<W> {
    pub holds: bool,
    pub witness: Option<W>,
}

impl<W> Check<W> {
    pub fn pass() -> Self {
        Self {
            holds: true,
            witness: None,
        }
    }

    pub fn fail(witness: W) -> Self {
        Self {
            holds: false,
            witness: Some(witness),
        }
    }

    /// Build from the first counterexample found, if any.
    pub fn from_witness(witness: Option<W>) -> Self {
        match witness {
            None => Self::pass(),
            Some(w) => Self::fail(w),
        }
    }
}
