//! Modular p-ary Gray order over `len` base-p digits.
//!
//! The state at counter `t` has digits `g_i = (d_i - d_{i+1}) mod p` where
//! `d` are the base-p digits of `t`. Going from `t - 1` to `t` adds exactly
//! `+1 (mod p)` to digit `v_p(t)` and leaves every other digit unchanged, so a
//! sweep over `1..p^len` touches every state once with one digit change per
//! step. For `p = 2` this is the binary reflected Gray code.

/// Digit changed by the step `t - 1 -> t` (the p-adic valuation of `t`).
#[inline]
pub fn step_digit(t: u64, p: u32) -> usize {
    debug_assert!(t > 0);
    if p == 2 {
        return t.trailing_zeros() as usize;
    }
    let p = p as u64;
    let mut t = t;
    let mut j = 0;
    while t.is_multiple_of(p) {
        t /= p;
        j += 1;
    }
    j
}

/// Gray digits of counter `t`.
pub fn state(t: u64, p: u32, len: usize) -> Vec<u32> {
    let p64 = p as u64;
    let mut d = Vec::with_capacity(len + 1);
    let mut x = t;
    for _ in 0..len {
        d.push((x % p64) as u32);
        x /= p64;
    }
    d.push(0);
    (0..len).map(|i| (d[i] + p - d[i + 1]) % p).collect()
}

/// `p^len`, or `None` on overflow.
pub fn space_size(p: u32, len: usize) -> Option<u64> {
    (p as u64).checked_pow(len as u32)
}
