//! Pascal table of binomial coefficients in exact 64-bit integers.

use std::sync::OnceLock;

/// Largest `n` held in the table. `C(60, 30)` still fits in `u64`.
pub const MAX_N: usize = 60;

fn table() -> &'static [[u64; MAX_N + 1]; MAX_N + 1] {
    static TABLE: OnceLock<Box<[[u64; MAX_N + 1]; MAX_N + 1]>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Box::new([[0u64; MAX_N + 1]; MAX_N + 1]);
        for n in 0..=MAX_N {
            t[n][0] = 1;
            for k in 1..=n {
                t[n][k] = t[n - 1][k - 1] + if k < n { t[n - 1][k] } else { 0 };
            }
        }
        t
    })
}

/// `C(n, k)`; zero when `k > n`. Panics for `n > MAX_N`.
#[inline]
pub fn binomial(n: usize, k: usize) -> u64 {
    assert!(n <= MAX_N, "binomial table holds n <= {MAX_N}, got {n}");
    if k > n {
        0
    } else {
        table()[n][k]
    }
}

/// `C(n, k)` in `u128` for arguments beyond the table.
pub fn binomial_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact: acc * (n - i) is divisible by (i + 1) at every step
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc
}
