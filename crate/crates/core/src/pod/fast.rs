//! Byte-wide `pod(n) mod m` engine for small moduli.
//!
//! Same recurrence as the generic inverse of `ψ(-q)`:
//! `pod(n) = Σ_{T ≥ 1 triangular} (-1)^{T+1} pod(n - T)`. Outputs are
//! produced in blocks; every source below the block start is folded in with
//! contiguous slice additions, and only sources inside the block go through
//! the scalar loop.

use crate::error::{Error, Result};

/// Outputs sharing one pass over all far sources; consecutive shifted
/// windows overlap, so the pass streams mostly from cache.
const SUPER: usize = 1 << 16;
/// Outputs sharing one pass over the sources earlier in the same superblock.
const BLOCK: usize = 2048;

/// `pod(0..=limit) mod m` for `2 <= m <= 255`.
pub fn pod_residues_small(limit: usize, m: u8) -> Result<Vec<u8>> {
    if m < 2 {
        return Err(Error::InvalidModulus(m as u64));
    }
    let total = limit + 1;
    let tris: Vec<usize> = (1usize..)
        .map(|j| j * (j + 1) / 2)
        .take_while(|&t| t <= limit)
        .collect();
    let mut b = vec![0u8; total];
    // byte lanes absorb `flush_every` residues before spilling into u32
    let flush_every = (255 / (m as usize - 1)).max(1);
    let mut far = [
        Lanes::new(SUPER, flush_every),
        Lanes::new(SUPER, flush_every),
    ];
    let mut near = [
        Lanes::new(BLOCK, flush_every),
        Lanes::new(BLOCK, flush_every),
    ];
    let mm = m as u32;

    let mut s0 = 0;
    while s0 < total {
        let s_len = SUPER.min(total - s0);
        for l in far.iter_mut() {
            l.wide.fill(0);
        }
        fold(&mut far, &b, &tris, s0, s_len, 0, s0);

        let mut n0 = s0;
        while n0 < s0 + s_len {
            let len = BLOCK.min(s0 + s_len - n0);
            for (nl, fl) in near.iter_mut().zip(&far) {
                nl.seed(&fl.wide[n0 - s0..n0 - s0 + len]);
            }
            fold(&mut near, &b, &tris, n0, len, s0, n0);
            let [neg, pos] = &near;
            for x in 0..len {
                let n = n0 + x;
                if n == 0 {
                    b[0] = 1 % m;
                    continue;
                }
                let (mut p, mut q) = (pos.wide[x], neg.wide[x]);
                for &t in tris.iter().take_while(|&&t| t <= x) {
                    let s = b[n - t] as u32;
                    if t % 2 == 1 {
                        p += s;
                    } else {
                        q += s;
                    }
                }
                b[n] = ((p % mm + mm - q % mm) % mm) as u8;
            }
            n0 += len;
        }
        s0 += s_len;
    }
    Ok(b)
}

/// Adds every contribution `b[j]` with `j` in `[src_lo, src_hi)` to outputs
/// `n = dst + x`, `x < len`, where `n - j` is triangular. Odd triangular
/// shifts land in `lanes[1]`, even ones in `lanes[0]`.
fn fold(
    lanes: &mut [Lanes; 2],
    b: &[u8],
    tris: &[usize],
    dst: usize,
    len: usize,
    src_lo: usize,
    src_hi: usize,
) {
    for l in lanes.iter_mut() {
        l.clear_narrow();
    }
    if src_lo < src_hi {
        for &t in tris {
            // x + dst - t in [src_lo, src_hi)
            let lo = (src_lo + t).saturating_sub(dst);
            if lo >= len {
                break;
            }
            let hi = len.min((src_hi + t).saturating_sub(dst));
            if lo >= hi {
                continue;
            }
            lanes[t % 2].add(&b[dst + lo - t..dst + hi - t], lo);
        }
    }
    for l in lanes.iter_mut() {
        l.flush();
    }
}

/// Block accumulator: wrapping byte sums plus their u32 spill.
struct Lanes {
    narrow: Vec<u8>,
    wide: Vec<u32>,
    pending: usize,
    flush_every: usize,
}

impl Lanes {
    fn new(size: usize, flush_every: usize) -> Self {
        Lanes {
            narrow: vec![0; size],
            wide: vec![0; size],
            pending: 0,
            flush_every,
        }
    }

    fn clear_narrow(&mut self) {
        self.narrow.fill(0);
        self.pending = 0;
    }

    fn seed(&mut self, from: &[u32]) {
        self.wide[..from.len()].copy_from_slice(from);
    }

    #[inline]
    fn add(&mut self, src: &[u8], at: usize) {
        for (a, &s) in self.narrow[at..at + src.len()].iter_mut().zip(src) {
            *a = a.wrapping_add(s);
        }
        self.pending += 1;
        if self.pending == self.flush_every {
            self.flush();
        }
    }

    fn flush(&mut self) {
        if self.pending == 0 {
            return;
        }
        for (w, n) in self.wide.iter_mut().zip(self.narrow.iter_mut()) {
            *w += *n as u32;
            *n = 0;
        }
        self.pending = 0;
    }
}
