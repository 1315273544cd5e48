use std::sync::atomic::{AtomicU64, Ordering};

/// Deterministic node-visit counters.
///
/// Every structure records the number of nodes one operation visited;
/// read-only queries record through `&self`.
#[derive(Debug, Default)]
pub struct OpCounters {
    last: AtomicU64,
    total: AtomicU64,
    ops: AtomicU64,
}

impl OpCounters {
    pub fn record(&self, visits: u64) {
        self.last.store(visits, Ordering::Relaxed);
        self.total.fetch_add(visits, Ordering::Relaxed);
        self.ops.fetch_add(1, Ordering::Relaxed);
    }

    /// Nodes visited by the most recent operation.
    pub fn last(&self) -> u64 {
        self.last.load(Ordering::Relaxed)
    }

    /// Nodes visited since construction or the last reset.
    pub fn total(&self) -> u64 {
        self.total.load(Ordering::Relaxed)
    }

    pub fn ops(&self) -> u64 {
        self.ops.load(Ordering::Relaxed)
    }

    pub fn reset(&self) {
        self.last.store(0, Ordering::Relaxed);
        self.total.store(0, Ordering::Relaxed);
        self.ops.store(0, Ordering::Relaxed);
    }
}

impl Clone for OpCounters {
    fn clone(&self) -> Self {
        Self {
            last: AtomicU64::new(self.last()),
            total: AtomicU64::new(self.total()),
            ops: AtomicU64::new(self.ops()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_and_reset() {
        let c = OpCounters::default();
        c.record(5);
        c.record(3);
        assert_eq!((c.last(), c.total(), c.ops()), (3, 8, 2));
        let snapshot = c.clone();
        c.reset();
        assert_eq!((c.last(), c.total(), c.ops()), (0, 0, 0));
        assert_eq!(snapshot.total(), 8);
    }
}
