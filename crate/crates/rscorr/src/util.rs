//! Internal helpers: deterministic range splitting for scoped worker
//! threads and a compensated float accumulator.

/// Split the inclusive range `[lo, hi]` into at most `parts` contiguous
/// inclusive subranges, in ascending order.
pub(crate) fn split_ranges(lo: u64, hi: u64, parts: usize) -> Vec<(u64, u64)> {
    assert!(parts >= 1, "need at least one part");
    if lo > hi {
        return Vec::new();
    }
    let span = hi - lo + 1;
    let parts = (parts as u64).min(span);
    let base = span / parts;
    let extra = span % parts;
    let mut out = Vec::with_capacity(parts as usize);
    let mut start = lo;
    for i in 0..parts {
        let len = base + if i < extra { 1 } else { 0 };
        out.push((start, start + len - 1));
        start += len;
    }
    out
}

/// Apply `f` to each subrange of `[lo, hi]` on scoped worker threads and
/// collect the results in ascending range order. With `workers = 1` (or a
/// single subrange) everything runs on the calling thread, so reductions
/// that fold the returned chunks in order are deterministic for a fixed
/// worker count.
pub(crate) fn map_ranges<T, F>(lo: u64, hi: u64, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync,
{
    let ranges = split_ranges(lo, hi, workers.max(1));
    if ranges.len() <= 1 {
        return ranges.into_iter().map(|(a, b)| f(a, b)).collect();
    }
    let task = &f;
    std::thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .iter()
            .map(|&(a, b)| scope.spawn(move || task(a, b)))
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    })
}

/// Kahan compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    pub(crate) fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum
    }
}
