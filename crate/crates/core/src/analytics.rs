//! Closed forms: expected maximum-likelihood success over random sets, its
//! large-`n` approximation, the capacity estimate, set entropy and its two
//! asymptotic regimes, and the bit models for the neural memories.
//!
//! Everything takes the universe size `N = l^n` and the number of completions
//! of an `r`-erasure query `K = l^r`. The expected success is
//!
//! ```text
//! E[P] = (l^(n-r) / m) * (1 - C(N - m, K) / C(N, K))
//! ```
//!
//! and the hypergeometric miss ratio is evaluated as a product of
//! `min(m, K)` factors, either exactly or as a sum of `ln_1p` terms.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::word::{ceil_log2, Alphabet};

/// Universes up to this size are evaluated with exact integers.
pub const EXACT_UNIVERSE: u128 = 1 << 20;

/// Longest exact product the big-integer route will multiply out.
pub const EXACT_TERM_CAP: u128 = 4096;

/// Longest product summed term by term in the log domain before falling back
/// to log-gamma differences.
pub const LOG_TERM_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombinatoricsMode {
    ExactBigInt,
    LogGamma,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioParams {
    pub l: u32,
    pub n: usize,
    pub m: u64,
    pub r: usize,
    /// Target residual error, only used by capacity questions.
    pub p0: f64,
}

impl ScenarioParams {
    pub fn new(l: u32, n: usize, m: u64, r: usize) -> Result<Self> {
        let p = ScenarioParams {
            l,
            n,
            m,
            r,
            p0: 0.01,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_p0(mut self, p0: f64) -> Result<Self> {
        if !(p0 > 0.0 && p0 < 1.0) {
            return Err(Error::arg(format!("P0 must lie in (0, 1), got {p0}")));
        }
        self.p0 = p0;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let a = Alphabet::new(self.l)?;
        if self.n == 0 {
            return Err(Error::arg("n must be >= 1"));
        }
        if self.m == 0 {
            return Err(Error::arg("m must be >= 1"));
        }
        if self.r > self.n {
            return Err(Error::arg(format!("r = {} exceeds n = {}", self.r, self.n)));
        }
        if let Some(u) = a.universe(self.n) {
            if self.m as u128 > u {
                return Err(Error::arg(format!("m = {} exceeds l^n = {u}", self.m)));
            }
        }
        Ok(())
    }

    fn universe(&self) -> Option<u128> {
        (self.l as u128).checked_pow(self.n as u32)
    }

    fn completions(&self) -> Option<u128> {
        (self.l as u128).checked_pow(self.r as u32)
    }

    fn universe_f64(&self) -> f64 {
        (self.l as f64).powi(self.n as i32)
    }
}

fn big(x: u128) -> BigInt {
    BigInt::from(x)
}

/// `C(N - m, K) / C(N, K)` as an exact rational.
pub fn miss_ratio_exact(universe: u128, completions: u128, m: u128) -> BigRational {
    if m + completions > universe {
        return BigRational::zero();
    }
    // C(N-m, K)/C(N, K) = prod_{k<t} (N - s - k)/(N - k), s the larger of (m, K)
    let (t, s) = if m <= completions {
        (m, completions)
    } else {
        (completions, m)
    };
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for k in 0..t {
        num *= BigUint::from(universe - s - k);
        den *= BigUint::from(universe - k);
    }
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `ln(x (x-1) ... (x-k+1))`, the log of the falling factorial.
pub fn ln_falling(x: f64, k: f64) -> f64 {
    if k <= LOG_TERM_CAP as f64 {
        return (0..k as u64).map(|i| (x - i as f64).ln()).sum();
    }
    let b = x - k;
    if b >= 1e4 {
        // Stirling series for ln G(x+1) - ln G(b+1), arranged to avoid
        // subtracting two values of size x ln x.
        let c = |y: f64| 1.0 / (12.0 * y) - 1.0 / (360.0 * y * y * y);
        k * x.ln() - (b + 0.5) * (-k / x).ln_1p() - k + c(x) - c(b)
    } else {
        ln_gamma(x + 1.0) - ln_gamma(b + 1.0)
    }
}

/// Natural log of `C(N - m, K) / C(N, K)`; `-inf` when the ratio is zero.
pub fn ln_miss_ratio(universe: f64, completions: f64, m: f64) -> f64 {
    if m + completions > universe {
        return f64::NEG_INFINITY;
    }
    let (t, s) = if m <= completions {
        (m, completions)
    } else {
        (completions, m)
    };
    if t <= LOG_TERM_CAP as f64 {
        (0..t as u64)
            .map(|k| (-s / (universe - k as f64)).ln_1p())
            .sum()
    } else {
        ln_falling(universe - s, t) - ln_falling(universe, t)
    }
}

/// Expected success as an exact rational. Needs `l^n` to fit in 128 bits and
/// is only practical for small `min(m, l^r)`.
pub fn expected_success_rational(p: &ScenarioParams) -> Result<BigRational> {
    p.validate()?;
    let universe = p
        .universe()
        .ok_or_else(|| Error::resource("l^n does not fit in 128 bits"))?;
    let completions = p.completions().expect("l^r <= l^n");
    let prefix = (p.l as u128).pow((p.n - p.r) as u32);
    let hit = BigRational::one() - miss_ratio_exact(universe, completions, p.m as u128);
    Ok(BigRational::new(big(prefix), big(p.m as u128)) * hit)
}

/// Expected success through the log-domain route regardless of size.
pub fn expected_success_log(p: &ScenarioParams) -> f64 {
    let universe = p.universe_f64();
    let completions = (p.l as f64).powi(p.r as i32);
    let hit = -ln_miss_ratio(universe, completions, p.m as f64).exp_m1();
    let prefix = (p.l as f64).powi((p.n - p.r) as i32);
    (prefix / p.m as f64 * hit).clamp(0.0, 1.0)
}

/// Expected success of the maximum-likelihood memory over uniformly drawn
/// sets of `m` words with exactly `r` erasures.
pub fn expected_success_exact(p: &ScenarioParams) -> Result<f64> {
    p.validate()?;
    let exact = p.universe().is_some_and(|u| {
        let t = (p.m as u128).min(p.completions().unwrap_or(u128::MAX));
        u <= EXACT_UNIVERSE && t <= EXACT_TERM_CAP
    });
    if exact {
        let v = expected_success_rational(p)?
            .to_f64()
            .expect("ratio in [0, 1]");
        Ok(v.clamp(0.0, 1.0))
    } else {
        Ok(expected_success_log(p))
    }
}

/// `1 - expected_success_exact`.
pub fn residual_error(p: &ScenarioParams) -> Result<f64> {
    p.validate()?;
    let exact = p.universe().is_some_and(|u| {
        let t = (p.m as u128).min(p.completions().unwrap_or(u128::MAX));
        u <= EXACT_UNIVERSE && t <= EXACT_TERM_CAP
    });
    if exact {
        let err = BigRational::one() - expected_success_rational(p)?;
        Ok(err.to_f64().expect("ratio in [0, 1]").clamp(0.0, 1.0))
    } else {
        Ok(1.0 - expected_success_log(p))
    }
}

/// Large-`n` approximation `(l^(n-r)/m) (1 - exp(-m l^(r-n)))`.
pub fn expected_success_asymptotic(p: &ScenarioParams) -> f64 {
    let x = p.m as f64 * (p.l as f64).powi(p.r as i32 - p.n as i32);
    if x == 0.0 {
        return 1.0;
    }
    -(-x).exp_m1() / x
}

/// Set size reaching residual error `p0`: `round(2 p0 l^(n-r))`.
pub fn capacity_estimate(l: u32, n: usize, r: usize, p0: f64) -> u64 {
    (2.0 * p0 * (l as f64).powi(n as i32 - r as i32)).round() as u64
}

fn log2_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().expect("fits") as f64).log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("64 bits");
    (top as f64).log2() + shift as f64
}

/// `C(N, k)` exactly.
pub fn binomial_big(universe: u128, k: u128) -> BigUint {
    if k > universe {
        return BigUint::zero();
    }
    let k = k.min(universe - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= BigUint::from(universe - i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

/// `log2 C(N, m)` by the requested route.
pub fn log2_binomial(universe: f64, m: f64, mode: CombinatoricsMode) -> Result<f64> {
    if m < 0.0 || m > universe {
        return Err(Error::arg(format!("C({universe}, {m}) is undefined")));
    }
    match mode {
        CombinatoricsMode::ExactBigInt => {
            if universe > u128::MAX as f64 {
                return Err(Error::resource("universe too large for exact evaluation"));
            }
            let (u, k) = (universe as u128, m as u128);
            if k.min(u - k) > 1 << 16 {
                return Err(Error::resource("binomial too large for exact evaluation"));
            }
            Ok(log2_biguint(&binomial_big(u, k)))
        }
        CombinatoricsMode::LogGamma => {
            let k = m.min(universe - m);
            let ln = if k <= LOG_TERM_CAP as f64 {
                (0..k as u64)
                    .map(|i| ((universe - i as f64) / (i as f64 + 1.0)).ln())
                    .sum()
            } else {
                ln_falling(universe, k) - ln_gamma(k + 1.0)
            };
            Ok((ln / std::f64::consts::LN_2).max(0.0))
        }
    }
}

/// Entropy of a uniformly drawn `m`-subset of the `l^n` words, in bits.
pub fn set_entropy_bits(l: u32, n: usize, m: u64) -> Result<f64> {
    let a = Alphabet::new(l)?;
    let universe = (l as f64).powi(n as i32);
    let exact = a.universe(n).is_some_and(|u| {
        u <= EXACT_UNIVERSE && (m as u128).min(u.saturating_sub(m as u128)) <= EXACT_TERM_CAP
    });
    let mode = if exact {
        CombinatoricsMode::ExactBigInt
    } else {
        CombinatoricsMode::LogGamma
    };
    log2_binomial(universe, m as f64, mode)
}

/// Small-`m` regime: `m n log2 l`.
pub fn entropy_asymptotic_small_m(l: u32, n: usize, m: u64) -> f64 {
    m as f64 * n as f64 * (l as f64).log2()
}

/// Bits per stored word when `l^n / m = c` stays fixed:
/// `c log2 c - c log2(c-1) + log2(c-1)`.
pub fn entropy_bracket(c: f64) -> Result<f64> {
    if c.is_nan() || c <= 1.0 {
        return Err(Error::arg(format!("c must exceed 1, got {c}")));
    }
    Ok(c * c.log2() - c * (c - 1.0).log2() + (c - 1.0).log2())
}

pub fn entropy_asymptotic_constant_c(m: u64, c: f64) -> Result<f64> {
    Ok(m as f64 * entropy_bracket(c)?)
}

/// Unordered-set bits over ordered-list bits in the constant-`c` regime.
pub fn ordered_to_unordered_ratio(c: f64, n: usize, l: u32) -> Result<f64> {
    Ok(entropy_bracket(c)? / (n as f64 * (l as f64).log2()))
}

/// Bits of an ordered list of `m` words: `m n ceil(log2 l)`.
pub fn ordered_list_bits(l: u32, n: usize, m: u64) -> f64 {
    m as f64 * n as f64 * ceil_log2(l as u64) as f64
}

/// Upper-triangle Hopfield weights over `n' = n ceil(log2 l)` neurons, each in
/// `[-m, m]`: `C(n', 2) ceil(log2(2m + 1))`.
pub fn hnn_memory_bits(l: u32, n: usize, m: usize) -> f64 {
    let neurons = (n as u64) * ceil_log2(l as u64) as u64;
    let pairs = neurons * neurons.saturating_sub(1) / 2;
    pairs as f64 * ceil_log2(2 * m as u64 + 1) as f64
}

/// Cross-cluster connections of the clique network: `C(n, 2) l^2`.
pub fn gbnn_memory_bits(l: u32, n: usize) -> f64 {
    let pairs = (n * n.saturating_sub(1) / 2) as f64;
    pairs * (l as f64) * (l as f64)
}
