//! Streaming pairwise summation of complex terms.
//!
//! Terms are gathered into fixed blocks summed with Neumaier compensation;
//! block totals are merged as a binary tree, so the rounding error grows
//! with the logarithm of the term count. The merge order depends only on the
//! number of terms pushed, which keeps results bit-reproducible.

use num_complex::Complex64;

const BLOCK: usize = 64;

#[derive(Clone, Copy, Debug, Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    #[inline]
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Accumulator for a stream of complex terms.
#[derive(Clone, Debug, Default)]
pub struct PairwiseSum {
    re: Neumaier,
    im: Neumaier,
    in_block: usize,
    // (level, partial); levels strictly decrease from bottom to top
    stack: Vec<(u32, Complex64)>,
    count: u64,
}

impl PairwiseSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn push(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
        self.in_block += 1;
        self.count += 1;
        if self.in_block == BLOCK {
            self.flush_block();
        }
    }

    fn flush_block(&mut self) {
        let mut level = 0;
        let mut value = Complex64::new(self.re.value(), self.im.value());
        self.re = Neumaier::default();
        self.im = Neumaier::default();
        self.in_block = 0;
        while let Some(&(top, partial)) = self.stack.last() {
            if top != level {
                break;
            }
            self.stack.pop();
            value += partial;
            level += 1;
        }
        self.stack.push((level, value));
    }

    pub fn len(&self) -> u64 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn total(&self) -> Complex64 {
        let mut acc = Complex64::new(self.re.value(), self.im.value());
        for &(_, partial) in self.stack.iter().rev() {
            acc = partial + acc;
        }
        acc
    }
}

impl Extend<Complex64> for PairwiseSum {
    fn extend<I: IntoIterator<Item = Complex64>>(&mut self, iter: I) {
        for z in iter {
            self.push(z);
        }
    }
}

/// Tree reduction of already-summed partials, in slice order.
pub fn combine_pairwise(parts: &[Complex64]) -> Complex64 {
    match parts.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => parts[0],
        n => {
            let (l, r) = parts.split_at(n / 2);
            combine_pairwise(l) + combine_pairwise(r)
        }
    }
}

/// Pairwise sum of a slice.
pub fn sum_slice(terms: &[Complex64]) -> Complex64 {
    let mut acc = PairwiseSum::new();
    acc.extend(terms.iter().copied());
    acc.total()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_and_single() {
        assert_eq!(PairwiseSum::new().total(), Complex64::new(0.0, 0.0));
        let mut s = PairwiseSum::new();
        s.push(Complex64::new(1.5, -2.0));
        assert_eq!(s.total(), Complex64::new(1.5, -2.0));
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn cancellation_is_recovered() {
        // 1e16 + 1 - 1e16 loses the 1 with plain summation
        let terms = [1e16, 1.0, -1e16, 1.0].map(|x| Complex64::new(x, -x));
        let s = sum_slice(&terms);
        assert_eq!(s, Complex64::new(2.0, -2.0));
    }

    #[test]
    fn many_small_terms() {
        let n = 1_000_003usize;
        let terms: Vec<Complex64> = (0..n).map(|_| Complex64::new(0.1, 0.01)).collect();
        let s = sum_slice(&terms);
        assert!((s.re - 0.1 * n as f64).abs() < 1e-7);
        assert!((s.im - 0.01 * n as f64).abs() < 1e-8);
    }

    proptest! {
        #[test]
        fn integer_terms_sum_exactly(xs in proptest::collection::vec(-1_000_000i64..1_000_000, 0..5000)) {
            let terms: Vec<Complex64> = xs.iter().map(|&x| Complex64::new(x as f64, -(x as f64) * 2.0)).collect();
            let exact: i64 = xs.iter().sum();
            let s = sum_slice(&terms);
            prop_assert_eq!(s.re, exact as f64);
            prop_assert_eq!(s.im, -2.0 * exact as f64);
        }

        #[test]
        fn split_partials_match_stream(xs in proptest::collection::vec(-1e3f64..1e3, 1..3000), k in 1usize..8) {
            let terms: Vec<Complex64> = xs.iter().map(|&x| Complex64::new(x, x * 0.5)).collect();
            let whole = sum_slice(&terms);
            let chunk = terms.len().div_ceil(k);
            let parts: Vec<Complex64> = terms.chunks(chunk).map(sum_slice).collect();
            let split = combine_pairwise(&parts);
            prop_assert!((whole - split).norm() <= 1e-9 * (1.0 + whole.norm()));
        }
    }
}
