//! Helpers shared by the integration tests and the acceptance runner.
#![allow(dead_code)]

use keyforge::linearcode::{DecodeOutcome, PackedWord};
use keyforge::rmcode::RmCode;

/// Small deterministic generator for test data.
pub struct XorShift(pub u64);

impl XorShift {
    pub fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    pub fn below(&mut self, n: u64) -> u64 {
        ((self.next() as u128 * n as u128) >> 64) as u64
    }

    /// A uniformly random `w`-subset of `0..n` as a mask.
    pub fn subset(&mut self, n: usize, w: usize) -> u128 {
        let mut idx: Vec<usize> = (0..n).collect();
        for i in 0..w {
            let j = i + self.below((n - i) as u64) as usize;
            idx.swap(i, j);
        }
        idx[..w].iter().fold(0, |acc, &i| acc | 1 << i)
    }
}

/// Next mask with the same popcount (Gosper's hack).
fn next_same_weight(x: u64) -> u64 {
    let c = x & x.wrapping_neg();
    let r = x + c;
    (((r ^ x) >> 2) / c) | r
}

/// Call `f(mask)` for every `w`-subset of `0..n`.
pub fn for_each_subset(n: usize, w: usize, mut f: impl FnMut(u64)) {
    if w > n {
        return;
    }
    if w == 0 {
        f(0);
        return;
    }
    let limit = 1u64 << n;
    let mut x = (1u64 << w) - 1;
    while x < limit {
        f(x);
        x = next_same_weight(x);
    }
}

/// Scatter the low bits of `compact` onto the set positions of `positions`.
fn deposit(compact: u64, positions: &[u32]) -> u64 {
    let mut out = 0;
    let mut c = compact;
    while c != 0 {
        out |= 1 << positions[c.trailing_zeros() as usize];
        c &= c - 1;
    }
    out
}

/// Call `f(errors, erasures)` for every disjoint pair of masks on `n <= 32`
/// positions with `2 * |errors| + |erasures| < d`.
pub fn for_each_pattern(n: usize, d: usize, mut f: impl FnMut(u64, u64)) {
    for delta in 0..d.min(n + 1) {
        for_each_subset(n, delta, |e| {
            let free: Vec<u32> = (0..n as u32).filter(|&i| e >> i & 1 == 0).collect();
            let mut tau = 0;
            while 2 * tau + delta < d && tau <= free.len() {
                for_each_subset(free.len(), tau, |c| f(deposit(c, &free), e));
                tau += 1;
            }
        });
    }
}

/// Decode every pattern with 2 tau + delta < d on the zero codeword.
/// Returns (patterns, wrong or failed decodings).
pub fn rm_exhaustive(r: u32, m: u32) -> (u64, u64) {
    let code = RmCode::new(r, m).unwrap();
    let (mut total, mut wrong) = (0u64, 0u64);
    for_each_pattern(code.n(), code.d(), |y, e| {
        total += 1;
        if code.decode_packed(PackedWord::new(y as u128, e as u128)) != DecodeOutcome::Decoded(0) {
            wrong += 1;
        }
    });
    (total, wrong)
}

/// Number of patterns with 2 tau + delta < d, from binomial sums.
pub fn pattern_count(n: u64, d: u64) -> u64 {
    let c = keyforge::rmcode::binomial;
    let mut total = 0;
    for delta in 0..d.min(n + 1) {
        let mut tau = 0;
        while 2 * tau + delta < d && tau + delta <= n {
            total += c(n, delta) * c(n - delta, tau);
            tau += 1;
        }
    }
    total
}

/// RM(0, m): the majority decoder only sees popcounts, so one class per
/// (tau, delta) covers all patterns; each class is checked on `samples`
/// random placements over random codewords.
pub fn rm0_count_classes(m: u32, samples: usize, rng: &mut XorShift) -> (u64, u64) {
    let code = RmCode::new(0, m).unwrap();
    let n = code.n();
    let (mut classes, mut wrong) = (0u64, 0u64);
    for delta in 0..n {
        let mut tau = 0;
        while 2 * tau + delta < n {
            classes += 1;
            for _ in 0..samples {
                let e = rng.subset(n, delta);
                let free: Vec<u32> = (0..n as u32).filter(|&i| e >> i & 1 == 0).collect();
                let y = deposit(rng.subset(free.len(), tau) as u64, &free) as u128;
                let c = if rng.next() & 1 == 1 { keyforge::linearcode::mask(n) } else { 0 };
                if code.decode_packed(PackedWord::new((c ^ y) & !e, e)) != DecodeOutcome::Decoded(c) {
                    wrong += 1;
                }
            }
            tau += 1;
        }
    }
    (classes, wrong)
}
