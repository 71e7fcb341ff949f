//! Float helpers that `core` does not provide.

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

/// `x^n` by repeated squaring; `0^0 = 1`.
pub fn powu(mut x: f64, mut n: u32) -> f64 {
    let mut acc = 1.0;
    while n > 0 {
        if n & 1 == 1 {
            acc *= x;
        }
        x *= x;
        n >>= 1;
    }
    acc
}

/// Binomial coefficient as a float; exact for the small arguments used here.
pub fn binomial(m: u32, n: u32) -> f64 {
    if n > m {
        return 0.0;
    }
    let n = n.min(m - n);
    let mut acc = 1.0;
    for j in 0..n {
        acc = acc * f64::from(m - j) / f64::from(j + 1);
    }
    acc
}

/// Sum with Neumaier compensation.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}
