use std::collections::VecDeque;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{precondition, Error, Result};

use super::{isqrt, sieve_primes_with, SieveConfig, SmoothnessWindow};

/// How [`SmoothStream`] generates its elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Pick by sampled density.
    #[default]
    Auto,
    /// Segmented trial-division sieve over `[2, x]`; cost proportional to `x`.
    Segmented,
    /// Depth-first products of window primes, then sorted; cost proportional
    /// to the output size.
    Products,
}

/// Ascending stream of window-smooth integers `n <= x`, starting with `1`.
///
/// Single consumer. Segments may be sieved on the rayon pool but are always
/// delivered in order, so the output never depends on the thread count.
pub struct SmoothStream {
    x: u64,
    window: SmoothnessWindow,
    squarefree: bool,
    strategy: Strategy,
    emitted_one: bool,
    source: Source,
}

enum Source {
    Buffer(std::vec::IntoIter<u64>),
    Segments(SegmentCursor),
}

struct SegmentCursor {
    next_lo: u64,
    end: u64,
    seg_len: u64,
    window: SmoothnessWindow,
    squarefree: bool,
    small_primes: Arc<Vec<u64>>,
    buf: VecDeque<u64>,
}

impl SmoothStream {
    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn window(&self) -> SmoothnessWindow {
        self.window
    }

    pub fn squarefree(&self) -> bool {
        self.squarefree
    }

    /// The concrete strategy in use (never `Auto`).
    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    /// Pull up to `max` elements.
    pub fn next_batch(&mut self, max: usize) -> Vec<u64> {
        self.by_ref().take(max).collect()
    }
}

impl Iterator for SmoothStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if !self.emitted_one {
            self.emitted_one = true;
            return Some(1);
        }
        match &mut self.source {
            Source::Buffer(it) => it.next(),
            Source::Segments(cur) => cur.next(),
        }
    }
}

impl SegmentCursor {
    fn next(&mut self) -> Option<u64> {
        while self.buf.is_empty() {
            if self.next_lo >= self.end {
                return None;
            }
            self.fill();
        }
        self.buf.pop_front()
    }

    fn fill(&mut self) {
        let batch = rayon::current_num_threads().max(1) as u64;
        let starts: Vec<u64> =
            (0..batch).map(|i| self.next_lo + i * self.seg_len).take_while(|&lo| lo < self.end).collect();
        let parts: Vec<Vec<u64>> = starts
            .par_iter()
            .map(|&lo| {
                let hi = (lo + self.seg_len).min(self.end);
                sieve_smooth_segment(lo, hi, &self.window, self.squarefree, &self.small_primes)
            })
            .collect();
        self.next_lo = starts.last().map_or(self.end, |&lo| lo + self.seg_len);
        for part in parts {
            self.buf.extend(part);
        }
    }
}

/// Window-smooth integers in `[lo, hi)`, `lo >= 2`, ascending.
///
/// `small_primes` must contain every prime up to `sqrt(hi - 1)`. After all
/// those primes are divided out the cofactor is `1` or a single prime.
fn sieve_smooth_segment(
    lo: u64,
    hi: u64,
    window: &SmoothnessWindow,
    squarefree: bool,
    small_primes: &[u64],
) -> Vec<u64> {
    let len = (hi - lo) as usize;
    let mut rem: Vec<u64> = (lo..hi).collect();
    let mut bad = vec![false; len];
    let root = isqrt(hi - 1);
    for &p in small_primes {
        if p > root {
            break;
        }
        let first = lo.div_ceil(p) * p;
        if first >= hi {
            continue;
        }
        let mut i = (first - lo) as usize;
        let step = p as usize;
        if !window.admits(p) {
            while i < len {
                bad[i] = true;
                i += step;
            }
            continue;
        }
        while i < len {
            if !bad[i] {
                let r = &mut rem[i];
                *r /= p;
                if r.is_multiple_of(p) {
                    if squarefree {
                        bad[i] = true;
                    } else {
                        while r.is_multiple_of(p) {
                            *r /= p;
                        }
                    }
                }
            }
            i += step;
        }
    }
    let mut out = Vec::new();
    for i in 0..len {
        if bad[i] {
            continue;
        }
        let r = rem[i];
        if r == 1 || window.admits(r) {
            out.push(lo + i as u64);
        }
    }
    out
}

/// Visit every product `n > 1` of the given primes with `n <= limit`, with
/// repetition unless `squarefree`. `f(n, p)` receives the largest prime `p`
/// of `n`; returning `false` aborts the walk. Returns whether the walk ran
/// to completion. Visit order is depth-first, not ascending.
pub fn for_each_smooth_product<F>(limit: u64, primes: &[u64], squarefree: bool, mut f: F) -> bool
where
    F: FnMut(u64, u64) -> bool,
{
    fn walk<F: FnMut(u64, u64) -> bool>(
        n: u64,
        start: usize,
        limit: u64,
        primes: &[u64],
        squarefree: bool,
        f: &mut F,
    ) -> bool {
        for i in start..primes.len() {
            let p = primes[i];
            let m = match n.checked_mul(p) {
                Some(m) if m <= limit => m,
                _ => break,
            };
            if !f(m, p) {
                return false;
            }
            let next = if squarefree { i + 1 } else { i };
            if !walk(m, next, limit, primes, squarefree, f) {
                return false;
            }
        }
        true
    }
    walk(1, 0, limit, primes, squarefree, &mut f)
}

pub fn enumerate_smooth(x: u64, window: SmoothnessWindow, squarefree: bool) -> Result<SmoothStream> {
    enumerate_smooth_with(x, window, squarefree, &SieveConfig::default())
}

pub fn enumerate_smooth_with(
    x: u64,
    window: SmoothnessWindow,
    squarefree: bool,
    config: &SieveConfig,
) -> Result<SmoothStream> {
    if x < 1 {
        return precondition("enumerate_smooth needs x >= 1");
    }
    if x > config.x_limit {
        return Err(Error::Resource(format!("x = {x} exceeds the configured limit {}", config.x_limit)));
    }
    let mut stream = SmoothStream {
        x,
        window,
        squarefree,
        strategy: Strategy::Products,
        emitted_one: false,
        source: Source::Buffer(Vec::new().into_iter()),
    };
    if window.is_empty() || window.y() > x {
        return Ok(stream);
    }
    let small = Arc::new(sieve_primes_with(isqrt(x), config)?.primes().to_vec());

    let strategy = match config.strategy {
        Strategy::Auto => auto_strategy(x, &window, squarefree, config, &small),
        s => s,
    };
    if strategy == Strategy::Products {
        let cap = product_cap(x, config);
        if let Some(values) = try_products(x, &window, squarefree, config, cap)? {
            stream.source = Source::Buffer(values.into_iter());
            return Ok(stream);
        }
        if config.strategy == Strategy::Products {
            return Err(Error::Resource(format!("product enumeration exceeds {cap} elements for x = {x}")));
        }
    }
    stream.strategy = Strategy::Segmented;
    stream.source = Source::Segments(SegmentCursor {
        next_lo: 2,
        end: x + 1,
        seg_len: config.segment_len.max(1024) as u64,
        window,
        squarefree,
        small_primes: small,
        buf: VecDeque::new(),
    });
    Ok(stream)
}

fn product_cap(x: u64, config: &SieveConfig) -> usize {
    let by_memory = config.memory_budget / 16;
    let by_work = (x / 8).max(1 << 16) as usize;
    by_memory.min(by_work)
}

/// Samples the density of smooth numbers just below `x` and prefers the
/// product walk when the projected output is small relative to `x`.
fn auto_strategy(x: u64, window: &SmoothnessWindow, squarefree: bool, config: &SieveConfig, small: &[u64]) -> Strategy {
    if x <= 1 << 16 {
        return Strategy::Segmented;
    }
    let len = 1u64 << 16;
    let lo = x + 1 - len;
    let hits = sieve_smooth_segment(lo, x + 1, window, squarefree, small).len() as u64;
    // density falls with size, so scale the sample up generously
    let projected = hits.saturating_mul(x / len).saturating_mul(4) + 1024;
    let table_bytes = window.z().min(x) / 2;
    if (projected as usize) <= product_cap(x, config) && table_bytes <= config.memory_budget as u64 / 2 {
        Strategy::Products
    } else {
        Strategy::Segmented
    }
}

fn try_products(
    x: u64,
    window: &SmoothnessWindow,
    squarefree: bool,
    config: &SieveConfig,
    cap: usize,
) -> Result<Option<Vec<u64>>> {
    let table = sieve_primes_with(window.z().min(x), config)?;
    let primes = table.range(window.y(), window.z());
    let mut values = Vec::new();
    let complete = for_each_smooth_product(x, primes, squarefree, |n, _| {
        values.push(n);
        values.len() < cap
    });
    if !complete {
        return Ok(None);
    }
    values.par_sort_unstable();
    Ok(Some(values))
}

pub fn psi_count(x: u64, window: SmoothnessWindow, squarefree: bool) -> Result<u64> {
    psi_count_with(x, window, squarefree, &SieveConfig::default())
}

/// `Psi(x; y, z)` (or the squarefree `Psi*`), counting `n = 1`.
pub fn psi_count_with(x: u64, window: SmoothnessWindow, squarefree: bool, config: &SieveConfig) -> Result<u64> {
    Ok(enumerate_smooth_with(x, window, squarefree, config)?.count() as u64)
}
