//! Abstract work accounting.
//!
//! Every kernel charges the elementary operations it performs (64-bit word
//! operations and multiply-accumulates) to a [`WorkMeter`]. The delay
//! scheduler measures time in these units.

/// Monotone counter of work units.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WorkMeter {
    units: u64,
}

impl WorkMeter {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn charge(&mut self, units: u64) {
        self.units = self.units.saturating_add(units);
    }

    #[inline]
    pub fn units(&self) -> u64 {
        self.units
    }

    /// Return the units accrued so far and reset to zero.
    pub fn take(&mut self) -> u64 {
        std::mem::take(&mut self.units)
    }
}
