//! Pauli channels, the one-parameter families used throughout, and hashing points.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::Letter;

/// Tolerance on `p_I + p_X + p_Y + p_Z = 1`.
pub const CHANNEL_SUM_TOL: f64 = 1e-12;
/// Lower edge of the custom-coefficient box.
pub const COEFF_FLOOR: f64 = 1e-4;
/// Tolerance on `c_X + c_Y + c_Z = 1`. Admits coefficients printed to eight decimals.
pub const COEFF_SUM_TOL: f64 = 1e-7;
/// Absolute tolerance of the hashing-point bisection.
pub const HASHING_TOL: f64 = 1e-12;

/// Probability vector `(p_I, p_X, p_Y, p_Z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PauliChannel(pub [f64; 4]);

impl PauliChannel {
    pub const NOISELESS: PauliChannel = PauliChannel([1.0, 0.0, 0.0, 0.0]);

    pub fn new(probs: [f64; 4]) -> Result<Self> {
        if probs.iter().any(|&p| !(p >= 0.0) || p > 1.0 + CHANNEL_SUM_TOL) {
            return Err(Error::InvalidChannel(format!("{probs:?} has a component outside [0, 1]")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > CHANNEL_SUM_TOL {
            return Err(Error::InvalidChannel(format!("{probs:?} sums to {sum}")));
        }
        Ok(PauliChannel(probs))
    }

    #[inline]
    pub fn prob(&self, l: Letter) -> f64 {
        self.0[l.index()]
    }

    pub fn i(&self) -> f64 {
        self.0[0]
    }
    pub fn x(&self) -> f64 {
        self.0[1]
    }
    pub fn y(&self) -> f64 {
        self.0[2]
    }
    pub fn z(&self) -> f64 {
        self.0[3]
    }

    /// Shannon entropy in bits.
    pub fn entropy(&self) -> f64 {
        entropy_bits(&self.0)
    }

    /// The same channel with X and Z exchanged.
    pub fn swap_xz(&self) -> PauliChannel {
        PauliChannel([self.0[0], self.0[3], self.0[2], self.0[1]])
    }
}

/// Shannon entropy (bits) of a non-negative vector, `0 log 0 = 0`.
pub fn entropy_bits(p: &[f64]) -> f64 {
    -p.iter().filter(|&&v| v > 0.0).map(|&v| v * v.log2()).sum::<f64>()
}

/// Shannon entropy of `p / total` in bits, without forming the quotient vector.
pub fn conditional_entropy_bits(p: &[f64], total: f64) -> f64 {
    if total <= 0.0 {
        return 0.0;
    }
    let lt = total.log2();
    -p.iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| (v / total) * (v.log2() - lt))
        .sum::<f64>()
}

/// A one-parameter channel family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ChannelFamily {
    /// `(1-3p, p, p, p)`
    Depolarizing,
    /// `((1-p)^2, p(1-p), p^2, p(1-p))`
    IndependentXZ,
    /// `(1-2p, p, 0, p)`
    TwoPauli,
    /// `(1-p, c_X p, c_Y p, c_Z p)`
    Custom(Coefficients),
}

/// Error split `(c_X, c_Y, c_Z)` of a custom family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coefficients {
    pub cx: f64,
    pub cy: f64,
    pub cz: f64,
}

impl Coefficients {
    pub fn new(cx: f64, cy: f64, cz: f64) -> Result<Self> {
        for (name, c) in [("c_X", cx), ("c_Y", cy), ("c_Z", cz)] {
            if !(COEFF_FLOOR..=1.0).contains(&c) {
                return Err(Error::InvalidChannel(format!(
                    "{name} = {c} outside [{COEFF_FLOOR}, 1]"
                )));
            }
        }
        let sum = cx + cy + cz;
        if (sum - 1.0).abs() > COEFF_SUM_TOL {
            return Err(Error::InvalidChannel(format!(
                "coefficients sum to {sum}, expected 1"
            )));
        }
        Ok(Coefficients { cx, cy, cz })
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.cx, self.cy, self.cz]
    }

    pub fn sum(&self) -> f64 {
        self.cx + self.cy + self.cz
    }
}

impl ChannelFamily {
    /// Largest admissible noise parameter.
    pub fn upper_limit(&self) -> f64 {
        match self {
            ChannelFamily::Depolarizing => 1.0 / 3.0,
            ChannelFamily::IndependentXZ => 1.0,
            ChannelFamily::TwoPauli => 0.5,
            ChannelFamily::Custom(c) => 1.0 / c.sum().max(1.0),
        }
    }

    /// Parameter at which the family's entropy peaks; entropy increases on `[0, peak]`.
    pub fn entropy_peak(&self) -> f64 {
        match self {
            ChannelFamily::Depolarizing => 0.25,
            ChannelFamily::IndependentXZ => 0.5,
            ChannelFamily::TwoPauli => 1.0 / 3.0,
            ChannelFamily::Custom(c) => {
                // dH/dp = ln((1-p)/p) + H(c) in nats
                let hc = -c.as_array().iter().map(|&v| v * v.ln()).sum::<f64>();
                let e = hc.exp();
                (e / (1.0 + e)).min(self.upper_limit())
            }
        }
    }

    pub fn eval(&self, p: f64) -> Result<PauliChannel> {
        if !(0.0..=self.upper_limit()).contains(&p) {
            return Err(Error::OutOfRange(format!(
                "p = {p} outside [0, {}] for {self}",
                self.upper_limit()
            )));
        }
        Ok(self.eval_unchecked(p))
    }

    pub(crate) fn eval_unchecked(&self, p: f64) -> PauliChannel {
        match *self {
            ChannelFamily::Depolarizing => PauliChannel([1.0 - 3.0 * p, p, p, p]),
            ChannelFamily::IndependentXZ => {
                let q = 1.0 - p;
                PauliChannel([q * q, p * q, p * p, p * q])
            }
            ChannelFamily::TwoPauli => PauliChannel([1.0 - 2.0 * p, p, 0.0, p]),
            ChannelFamily::Custom(c) => {
                PauliChannel([1.0 - p * c.sum(), c.cx * p, c.cy * p, c.cz * p])
            }
        }
    }

    /// True when the family is invariant under exchanging X and Z.
    pub fn is_xz_symmetric(&self) -> bool {
        match self {
            ChannelFamily::Custom(c) => c.cx == c.cz,
            _ => true,
        }
    }
}

impl fmt::Display for ChannelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelFamily::Depolarizing => write!(f, "depol"),
            ChannelFamily::IndependentXZ => write!(f, "indxz"),
            ChannelFamily::TwoPauli => write!(f, "twopauli"),
            ChannelFamily::Custom(c) => write!(f, "custom:{},{},{}", c.cx, c.cy, c.cz),
        }
    }
}

impl FromStr for ChannelFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "depol" => Ok(ChannelFamily::Depolarizing),
            "indxz" => Ok(ChannelFamily::IndependentXZ),
            "twopauli" => Ok(ChannelFamily::TwoPauli),
            other => {
                let body = other
                    .strip_prefix("custom:")
                    .ok_or_else(|| Error::Spec(format!("{other} (expected depol, indxz, twopauli or custom:cX,cY,cZ)")))?;
                let vals = body
                    .split(',')
                    .map(|t| t.trim().parse::<f64>().map_err(|_| Error::Spec(other.to_string())))
                    .collect::<Result<Vec<_>>>()?;
                match vals[..] {
                    [cx, cy, cz] => Ok(ChannelFamily::Custom(Coefficients::new(cx, cy, cz)?)),
                    _ => Err(Error::Spec(format!("{other} needs three coefficients"))),
                }
            }
        }
    }
}

/// Entropy of `family` at `p` minus one bit.
fn excess_entropy(family: &ChannelFamily, p: f64) -> f64 {
    family.eval_unchecked(p).entropy() - 1.0
}

/// The `p` at which the family's entropy is one bit.
pub fn hashing_point(family: &ChannelFamily) -> Result<f64> {
    bisect_entropy(family, 0.0, family.entropy_peak())
}

/// Hashing point, trying a narrow bracket around `guess` first.
pub fn hashing_point_near(family: &ChannelFamily, guess: f64) -> Result<f64> {
    let peak = family.entropy_peak();
    let width = 1e-3;
    let (lo, hi) = ((guess - width).max(0.0), (guess + width).min(peak));
    if lo < hi && excess_entropy(family, lo) < 0.0 && excess_entropy(family, hi) > 0.0 {
        return bisect_entropy(family, lo, hi);
    }
    hashing_point(family)
}

fn bisect_entropy(family: &ChannelFamily, mut lo: f64, mut hi: f64) -> Result<f64> {
    let (flo, fhi) = (excess_entropy(family, lo), excess_entropy(family, hi));
    if !(flo < 0.0 && fhi > 0.0) {
        return Err(Error::NoSignChange { lo, hi });
    }
    while hi - lo > HASHING_TOL {
        let mid = 0.5 * (lo + hi);
        if excess_entropy(family, mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
