//! Entropy estimates for `n × m` concatenated repetition codes with `m` in the
//! hundreds or thousands.
//!
//! Each block independently falls in class `(k, b)` with probability
//! `w(k, b) = C(n,k) (h^b_k + h^b_{n-k}) / 2`. With
//! `q = (h^b_k - h^b_{n-k}) / (h^b_k + h^b_{n-k})` and
//! `r = (h^{1-b}_k + h^{1-b}_{n-k}) / (h^b_k + h^b_{n-k})`, the entropies in nats
//! are
//!
//! ```text
//! H_S  = ln 2 + m E_w[-ln(h^b_k + h^b_{n-k})] + E_w[ψ(Π q_i)]
//! H_N  =        m E_w[-ln(h^b_k + h^b_{n-k})] - E_w[ln(1 + Π r_i)]
//! ψ(y) = -½[(1+y) ln(1+y) + (1-y) ln(1-y)]
//! ```
//!
//! The first expectation is a finite sum. The other two need the laws of
//! `Σ ln|q_i|` and `Σ ln r_i`, obtained as `m`-th convolution powers of binned
//! single-block laws by FFT. Every bin stores its mass and first moment, so
//! convolution tracks the centroid of each bin exactly and the only
//! discretization error is the spread of distinct atoms sharing a bin.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::channel::PauliChannel;
use crate::code::RepType;
use crate::rep::block_table;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LongRepConfig {
    /// Bin width on the log scale.
    pub alpha: f64,
    /// `ln|Π q|` below `-log_floor` counts as magnitude zero.
    pub log_floor: f64,
    /// Tail mass trimmed from each end after every convolution.
    pub trim: f64,
    /// Cap on bins per distribution; excess tails are trimmed.
    pub max_bins: usize,
    /// Dropped mass above this marks the estimate unstable.
    pub instability_mass: f64,
}

impl Default for LongRepConfig {
    fn default() -> Self {
        LongRepConfig {
            alpha: 1e-3,
            log_floor: 60.0,
            trim: 1e-17,
            max_bins: 1 << 23,
            instability_mass: 1e-9,
        }
    }
}

/// Per-class block quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QrEntry {
    pub k: usize,
    pub b: u8,
    pub q: f64,
    pub r: f64,
    /// `ln(h^b_k + h^b_{n-k})`
    pub ln_h_sum: f64,
    pub block_weight: f64,
    /// The h-sum vanishes; `q` and `r` are meaningless and the weight is 0.
    pub zero_weight: bool,
}

/// Block table for inner X-type blocks of length `n`.
pub fn qr_coefficients(n: usize, ch: &PauliChannel) -> Vec<QrEntry> {
    let t = block_table(n, RepType::X, ch);
    let mut out = Vec::with_capacity(2 * (n + 1));
    for k in 0..=n {
        for b in 0..2usize {
            let a = t.get(k, b) + t.get(n - k, b);
            let other = t.get(k, 1 - b) + t.get(n - k, 1 - b);
            let zero = a <= 0.0;
            out.push(QrEntry {
                k,
                b: b as u8,
                q: if zero { 0.0 } else { ((t.get(k, b) - t.get(n - k, b)) / a).clamp(-1.0, 1.0) },
                r: if zero { f64::INFINITY } else { other / a },
                ln_h_sum: a.ln(),
                block_weight: if zero { 0.0 } else { 0.5 * t.multiplicity[k] * a },
                zero_weight: zero,
            });
        }
    }
    out
}

/// Mass and first three moments per bin; bin `i` is centred at `(offset + i) α`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinnedMass {
    pub offset: i64,
    pub m0: Vec<f64>,
    /// `Σ mass · (value − centre)`
    pub m1: Vec<f64>,
    /// `Σ mass · (value − centre)²`
    pub m2: Vec<f64>,
    /// `Σ mass · (value − centre)³`
    pub m3: Vec<f64>,
}

impl BinnedMass {
    fn zeros(offset: i64, len: usize) -> Self {
        BinnedMass {
            offset,
            m0: vec![0.0; len],
            m1: vec![0.0; len],
            m2: vec![0.0; len],
            m3: vec![0.0; len],
        }
    }

    fn from_atoms(alpha: f64, atoms: &[(f64, f64)]) -> Self {
        if atoms.is_empty() {
            return BinnedMass::zeros(0, 0);
        }
        let idx: Vec<i64> = atoms.iter().map(|&(_, v)| (v / alpha).round() as i64).collect();
        let lo = *idx.iter().min().unwrap();
        let hi = *idx.iter().max().unwrap();
        let mut out = BinnedMass::zeros(lo, (hi - lo + 1) as usize);
        for (&(w, v), &i) in atoms.iter().zip(&idx) {
            let j = (i - lo) as usize;
            let d = v - i as f64 * alpha;
            out.m0[j] += w;
            out.m1[j] += w * d;
            out.m2[j] += w * d * d;
            out.m3[j] += w * d * d * d;
        }
        out
    }

    pub fn len(&self) -> usize {
        self.m0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m0.is_empty()
    }

    pub fn mass(&self) -> f64 {
        self.m0.iter().sum()
    }

    /// `self + sign · other`, aligned by bin.
    fn combine(&self, other: &BinnedMass, sign: f64) -> BinnedMass {
        let ends = |b: &BinnedMass| (b.offset, b.offset + b.len() as i64);
        let (lo, hi) = match (self.is_empty(), other.is_empty()) {
            (true, true) => return BinnedMass::zeros(0, 0),
            (true, false) => ends(other),
            (false, true) => ends(self),
            (false, false) => (ends(self).0.min(ends(other).0), ends(self).1.max(ends(other).1)),
        };
        let mut out = BinnedMass::zeros(lo, (hi - lo) as usize);
        for (src, s) in [(self, 1.0), (other, sign)] {
            let d = (src.offset - lo) as usize;
            for i in 0..src.len() {
                out.m0[d + i] += s * src.m0[i];
                out.m1[d + i] += s * src.m1[i];
                out.m2[d + i] += s * src.m2[i];
                out.m3[d + i] += s * src.m3[i];
            }
        }
        out
    }

    /// Moves each bin to the bin nearest its centroid, keeping all moments,
    /// so a bin never drifts from the values it holds.
    fn recentre(&mut self, alpha: f64) {
        if self.is_empty() {
            return;
        }
        let pad = 2usize;
        let mut out = BinnedMass::zeros(self.offset - pad as i64, self.len() + 2 * pad);
        for i in 0..self.len() {
            let (w, m1, m2, m3) = (self.m0[i], self.m1[i], self.m2[i], self.m3[i]);
            let j = if w > 0.0 { (m1 / w / alpha).round().clamp(-(pad as f64), pad as f64) } else { 0.0 };
            let t = i + pad;
            let t = (t as i64 + j as i64) as usize;
            let s = j * alpha;
            out.m0[t] += w;
            out.m1[t] += m1 - w * s;
            out.m2[t] += m2 - 2.0 * s * m1 + s * s * w;
            out.m3[t] += m3 - 3.0 * s * m2 + 3.0 * s * s * m1 - s * s * s * w;
        }
        *self = out;
    }

    fn truncate_to(&mut self, lo: usize, hi: usize) {
        for v in [&mut self.m0, &mut self.m1, &mut self.m2, &mut self.m3] {
            v.truncate(hi.min(v.len()));
            v.drain(..lo.min(v.len()));
        }
        self.offset += lo as i64;
    }

    /// `E[f]` with each bin replaced by the two-point law matching its mass,
    /// mean, variance and third central moment (exact for bins holding at
    /// most two distinct values).
    fn expect(&self, alpha: f64, f: impl Fn(f64) -> f64) -> f64 {
        (0..self.len())
            .map(|i| {
                let (w, m1, m2, m3) = (self.m0[i], self.m1[i], self.m2[i], self.m3[i]);
                let centre = (self.offset + i as i64) as f64 * alpha;
                if w <= 0.0 {
                    return w * f(centre);
                }
                let mu = (m1 / w).clamp(-alpha, alpha);
                let var = (m2 / w - mu * mu).clamp(0.0, 64.0 * alpha * alpha);
                let sd = var.sqrt();
                if sd <= 1e-12 * alpha {
                    return w * f(centre + mu);
                }
                let c3 = m3 / w - 3.0 * mu * m2 / w + 2.0 * mu * mu * mu;
                let skew = (c3 / (var * sd)).clamp(-1e3, 1e3);
                let root = (skew * skew + 4.0).sqrt();
                let (a, b) = (0.5 * (skew - root), 0.5 * (skew + root));
                let (pa, pb) = (b / (b - a), -a / (b - a));
                w * (pa * f(centre + mu + a * sd) + pb * f(centre + mu + b * sd))
            })
            .sum()
    }
}

/// Linear convolution of the moment vectors. Moments are packed in pairs as
/// real and imaginary parts: four forward transforms and two inverses.
fn convolve(a: &BinnedMass, b: &BinnedMass, planner: &mut FftPlanner<f64>) -> BinnedMass {
    if a.is_empty() || b.is_empty() {
        return BinnedMass::zeros(0, 0);
    }
    let len = a.len() + b.len() - 1;
    let n = len.next_power_of_two();
    let fwd = planner.plan_fft_forward(n);
    let pack = |re: &[f64], im: &[f64]| {
        let mut v = vec![Complex::new(0.0, 0.0); n];
        for (i, x) in re.iter().enumerate() {
            v[i].re = *x;
        }
        for (i, x) in im.iter().enumerate() {
            v[i].im = *x;
        }
        fwd.process(&mut v);
        v
    };
    let za = pack(&a.m0, &a.m1);
    let zb = if std::ptr::eq(a, b) { za.clone() } else { pack(&b.m0, &b.m1) };
    let z2 = pack(&a.m2, &b.m2);
    let z3 = pack(&a.m3, &b.m3);
    // spectra of the real and imaginary parts of a packed transform
    let split = |z: &[Complex<f64>], k: usize| -> (Complex<f64>, Complex<f64>) {
        let c = z[(n - k) % n].conj();
        ((z[k] + c) * 0.5, (z[k] - c) * Complex::new(0.0f64, -0.5))
    };
    let mut lo: Vec<Complex<f64>> = Vec::with_capacity(n);
    let mut hi: Vec<Complex<f64>> = Vec::with_capacity(n);
    for k in 0..n {
        let (a0, a1) = split(&za, k);
        let (b0, b1) = split(&zb, k);
        let (a2, b2) = split(&z2, k);
        let (a3, b3) = split(&z3, k);
        let i = Complex::<f64>::i();
        lo.push(a0 * b0 + i * (a0 * b1 + a1 * b0));
        hi.push(a2 * b0 + a1 * b1 * 2.0 + a0 * b2 + i * (a3 * b0 + (a2 * b1 + a1 * b2) * 3.0 + a0 * b3));
    }
    let inv = planner.plan_fft_inverse(n);
    inv.process(&mut lo);
    inv.process(&mut hi);
    let s = 1.0 / n as f64;
    BinnedMass {
        offset: a.offset + b.offset,
        m0: lo[..len].iter().map(|c| c.re * s).collect(),
        m1: lo[..len].iter().map(|c| c.im * s).collect(),
        m2: hi[..len].iter().map(|c| c.re * s).collect(),
        m3: hi[..len].iter().map(|c| c.im * s).collect(),
    }
}

/// Law of `(sign, ln|x|)` with a point mass at `x = 0`. Signs are carried as
/// the sum `S = P₊ + P₋` and difference `D = P₊ − P₋`, which convolve
/// independently.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedLogDistribution {
    pub alpha: f64,
    pub sum: BinnedMass,
    pub diff: BinnedMass,
    pub zero: f64,
    /// Mass removed by tail trimming.
    pub dropped: f64,
    /// Values below this log-magnitude join the zero mass (only valid for
    /// magnitudes at most 1).
    pub floor: Option<f64>,
}

impl SignedLogDistribution {
    /// From `(weight, value)` atoms; zero values go to the point mass.
    pub fn from_values(alpha: f64, atoms: &[(f64, f64)], floor: Option<f64>) -> Self {
        let mut zero = 0.0;
        let (mut plus, mut minus) = (Vec::new(), Vec::new());
        for &(w, v) in atoms {
            if w == 0.0 {
                continue;
            }
            if v == 0.0 || floor.is_some_and(|f| v.abs().ln() < -f) {
                zero += w;
            } else if v > 0.0 {
                plus.push((w, v.ln()));
            } else {
                minus.push((w, (-v).ln()));
            }
        }
        let p = BinnedMass::from_atoms(alpha, &plus);
        let m = BinnedMass::from_atoms(alpha, &minus);
        SignedLogDistribution {
            alpha,
            sum: p.combine(&m, 1.0),
            diff: p.combine(&m, -1.0),
            zero,
            dropped: 0.0,
            floor,
        }
    }

    pub fn total(&self) -> f64 {
        self.sum.mass() + self.zero + self.dropped
    }

    fn is_unsigned(&self) -> bool {
        self.sum == self.diff
    }

    /// `E[f(sign, ln|x|)]` over the nonzero part.
    pub fn expect(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        let half = |s: f64| {
            let part = self.sum.combine(&self.diff, s);
            0.5 * part.expect(self.alpha, |l| f(s, l))
        };
        if self.is_unsigned() {
            self.sum.expect(self.alpha, |l| f(1.0, l))
        } else {
            half(1.0) + half(-1.0)
        }
    }

    fn trim(&mut self, cfg: &LongRepConfig) {
        let alpha = self.alpha;
        // sum and diff always cover the same bins
        debug_assert_eq!((self.sum.offset, self.sum.len()), (self.diff.offset, self.diff.len()));
        self.sum.recentre(alpha);
        self.diff.recentre(alpha);
        if let Some(floor) = self.floor {
            let cut = (-floor / alpha).floor() as i64;
            let k = (cut - self.sum.offset).clamp(0, self.sum.len() as i64) as usize;
            if k > 0 {
                self.zero += self.sum.m0[..k].iter().sum::<f64>();
                let end = self.sum.len();
                self.sum.truncate_to(k, end);
                self.diff.truncate_to(k, end);
            }
        }
        let (mut lo, mut hi) = (0usize, self.sum.len());
        let (mut cut_lo, mut cut_hi) = (0.0, 0.0);
        while lo < hi && cut_lo + self.sum.m0[lo].abs() < cfg.trim {
            cut_lo += self.sum.m0[lo].abs();
            lo += 1;
        }
        while hi > lo && cut_hi + self.sum.m0[hi - 1].abs() < cfg.trim {
            cut_hi += self.sum.m0[hi - 1].abs();
            hi -= 1;
        }
        while hi - lo > cfg.max_bins {
            if self.sum.m0[lo].abs() <= self.sum.m0[hi - 1].abs() {
                cut_lo += self.sum.m0[lo].abs();
                lo += 1;
            } else {
                cut_hi += self.sum.m0[hi - 1].abs();
                hi -= 1;
            }
        }
        self.dropped += cut_lo + cut_hi;
        self.sum.truncate_to(lo, hi);
        self.diff.truncate_to(lo, hi);
    }

    fn product(&self, other: &SignedLogDistribution, cfg: &LongRepConfig, planner: &mut FftPlanner<f64>) -> Self {
        let sum = convolve(&self.sum, &other.sum, planner);
        let diff = if self.is_unsigned() && other.is_unsigned() {
            sum.clone()
        } else {
            convolve(&self.diff, &other.diff, planner)
        };
        let nz_a = self.sum.mass();
        let nz_b = other.sum.mass();
        let mut out = SignedLogDistribution {
            alpha: self.alpha,
            sum,
            diff,
            // a product is zero when either factor is; dropped mass stays dropped
            zero: self.zero * (nz_b + other.zero) + nz_a * other.zero,
            dropped: self.dropped + other.dropped - self.dropped * other.dropped,
            floor: self.floor,
        };
        out.trim(cfg);
        out
    }
}

/// Law of the product of `m` independent draws, by binary exponentiation.
pub fn convolve_power(dist: &SignedLogDistribution, m: usize, cfg: &LongRepConfig) -> SignedLogDistribution {
    assert!(m >= 1);
    let mut planner = FftPlanner::new();
    let mut result: Option<SignedLogDistribution> = None;
    let mut base = dist.clone();
    let mut e = m;
    loop {
        if e & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => r.product(&base, cfg, &mut planner),
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base = base.product(&base, cfg, &mut planner);
    }
    result.unwrap()
}

/// `ψ(y) = -½[(1+y) ln(1+y) + (1-y) ln(1-y)]` for `y ∈ [-1, 1]`.
pub fn psi(y: f64) -> f64 {
    let a = y.abs();
    if a < 1e-4 {
        let y2 = a * a;
        return -0.5 * y2 - y2 * y2 / 12.0;
    }
    let t = |x: f64| if x > 0.0 { x * x.ln() } else { 0.0 };
    -0.5 * (t(1.0 + a) + t(1.0 - a))
}

/// `ln(1 + e^x)` without overflow.
pub fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LongRepEstimate {
    /// Bits.
    pub s_rb: f64,
    pub stabilizer_entropy: f64,
    pub normalizer_entropy: f64,
    pub dropped_mass: f64,
    pub unstable: bool,
}

/// Estimated `S_RB` of the `n × m` code with inner X-type blocks.
pub fn s_rb_estimate(n: usize, m: usize, ch: &PauliChannel, cfg: &LongRepConfig) -> LongRepEstimate {
    assert!(n >= 1 && m >= 1);
    let table = qr_coefficients(n, ch);
    let live = || table.iter().filter(|e| !e.zero_weight);
    let mean_neg_ln_a: f64 = live().map(|e| -e.block_weight * e.ln_h_sum).sum();

    let q_dist = SignedLogDistribution::from_values(
        cfg.alpha,
        &live().map(|e| (e.block_weight, e.q)).collect::<Vec<_>>(),
        Some(cfg.log_floor),
    );
    let r_dist = SignedLogDistribution::from_values(
        cfg.alpha,
        &live().map(|e| (e.block_weight, e.r)).collect::<Vec<_>>(),
        None,
    );
    let (qm, rm) = rayon::join(|| convolve_power(&q_dist, m, cfg), || convolve_power(&r_dist, m, cfg));
    // ψ is even, so the sign of Π q does not matter
    let e_psi = qm.expect(|_, l| psi(l.exp()));
    let e_soft = rm.expect(|_, l| softplus(l));

    let ln2 = std::f64::consts::LN_2;
    let h_s = ln2 + m as f64 * mean_neg_ln_a + e_psi;
    let h_n = m as f64 * mean_neg_ln_a - e_soft;
    let dropped = qm.dropped.max(rm.dropped);
    LongRepEstimate {
        s_rb: (ln2 + e_psi + e_soft) / ln2,
        stabilizer_entropy: h_s / ln2,
        normalizer_entropy: h_n / ln2,
        dropped_mass: dropped,
        unstable: dropped > cfg.instability_mass || !(e_psi + e_soft).is_finite(),
    }
}

/// [`s_rb_estimate`] with the inner blocks of the given stabilizer type.
pub fn s_rb_estimate_typed(n: usize, m: usize, inner: RepType, ch: &PauliChannel, cfg: &LongRepConfig) -> LongRepEstimate {
    match inner {
        RepType::X => s_rb_estimate(n, m, ch, cfg),
        RepType::Z => s_rb_estimate(n, m, &ch.swap_xz(), cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ChannelFamily;
    use crate::rep::{fgh_eval, s_rb_block, s_rb_rep, FghKind};

    fn depol(p: f64) -> PauliChannel {
        ChannelFamily::Depolarizing.eval(p).unwrap()
    }

    #[test]
    fn coefficients_match_closed_forms() {
        let p = 0.06;
        let (x, y) = (1.0 - 3.0 * p, p);
        let h = |k: usize, b: usize| match (k, b) {
            (0, 0) => fgh_eval(FghKind::Even, 5, 0, x, y),
            (0, 1) => fgh_eval(FghKind::Odd, 5, 0, x, y),
            (k, _) => fgh_eval(FghKind::G, 5, k as u32, x, y),
        };
        let table = qr_coefficients(5, &depol(p));
        let mut total = 0.0;
        for e in &table {
            let (k, b) = (e.k, e.b as usize);
            let a = h(k, b) + h(5 - k, b);
            assert!((e.q - (h(k, b) - h(5 - k, b)) / a).abs() < 1e-14);
            assert!((e.r - (h(k, 1 - b) + h(5 - k, 1 - b)) / a).abs() < 1e-12);
            assert!((e.ln_h_sum - a.ln()).abs() < 1e-12);
            total += e.block_weight;
        }
        assert!((total - 1.0).abs() < 1e-12);
        let even = qr_coefficients(4, &depol(p));
        assert!(even.iter().filter(|e| e.k == 2).all(|e| e.q == 0.0));
    }

    #[test]
    fn single_qubit_blocks() {
        let est = s_rb_estimate(1, 7, &depol(0.05), &LongRepConfig::default());
        let exact = s_rb_rep(1, 7, &depol(0.05)).unwrap();
        assert!((est.s_rb - exact).abs() < 1e-9);
    }

    #[test]
    fn power_identities() {
        let cfg = LongRepConfig::default();
        let d = SignedLogDistribution::from_values(cfg.alpha, &[(0.3, 0.5), (0.2, -0.25), (0.5, 0.0)], None);
        assert_eq!(convolve_power(&d, 1, &cfg), d);
        let one = SignedLogDistribution::from_values(cfg.alpha, &[(1.0, 1.0)], None);
        let p = convolve_power(&one, 37, &cfg);
        assert!((p.sum.mass() - 1.0).abs() < 1e-12 && p.sum.offset == 0 && p.sum.len() == 1);
        let p = convolve_power(&d, 9, &cfg);
        assert!((p.total() - 1.0).abs() < 1e-9);
        assert!((p.zero - (1.0 - 0.5f64.powi(9))).abs() < 1e-12);
    }

    /// Oracle: enumerate all `(k, b)^m` block outcomes.
    fn enumerate(n: usize, m: usize, ch: &PauliChannel, f: impl Fn(f64) -> f64) -> f64 {
        let t: Vec<QrEntry> = qr_coefficients(n, ch).into_iter().filter(|e| !e.zero_weight).collect();
        let mut total = 0.0;
        for idx in 0..t.len().pow(m as u32) {
            let (mut i, mut w, mut prod) = (idx, 1.0, 1.0);
            for _ in 0..m {
                let e = &t[i % t.len()];
                w *= e.block_weight;
                prod *= e.q;
                i /= t.len();
            }
            total += w * f(prod);
        }
        total
    }

    #[test]
    fn convolved_expectation_matches_enumeration() {
        let cfg = LongRepConfig::default();
        let ch = depol(0.06);
        let atoms: Vec<(f64, f64)> = qr_coefficients(3, &ch)
            .iter()
            .filter(|e| !e.zero_weight)
            .map(|e| (e.block_weight, e.q))
            .collect();
        let dist = SignedLogDistribution::from_values(cfg.alpha, &atoms, None);
        let pm = convolve_power(&dist, 4, &cfg);
        let est = pm.expect(|s, l| -(s * l.exp()).ln_1p());
        let oracle = enumerate(3, 4, &ch, |y| -y.ln_1p());
        assert!((est - oracle).abs() < 1e-8, "{est} vs {oracle}");
        let est = pm.expect(|s, l| psi(s * l.exp()));
        assert!((est - enumerate(3, 4, &ch, psi)).abs() < 1e-8);
        // Π q stays inside (-1, 1) when the channel is noisy
        assert!(pm.sum.offset + pm.sum.len() as i64 <= 1);
    }

    #[test]
    fn single_block_reduces_to_exact() {
        for n in [3, 4, 5, 7] {
            let ch = ChannelFamily::IndependentXZ.eval(0.11).unwrap();
            let est = s_rb_estimate(n, 1, &ch, &LongRepConfig::default()).s_rb;
            let exact = s_rb_block(n, RepType::X, &ch);
            assert!((est - exact).abs() < 1e-6, "n={n}: {est} vs {exact}");
        }
    }

    #[test]
    fn estimator_matches_closed_form() {
        let cfg = LongRepConfig::default();
        let cases: &[(usize, f64, f64)] = &[(3, 0.0630, 0.0640), (5, 0.0631, 0.0641), (7, 0.0630, 0.0640)];
        for &(n, lo, hi) in cases {
            for m in [2, 3, 5, 8, 12] {
                for i in 0..3 {
                    let p = lo + (hi - lo) * i as f64 / 2.0;
                    let ch = depol(p);
                    let est = s_rb_estimate(n, m, &ch, &cfg);
                    let exact = s_rb_rep(n, m, &ch).unwrap();
                    assert!(!est.unstable);
                    assert!((est.s_rb - exact).abs() <= 1e-5, "n={n} m={m} p={p}: {} vs {exact}", est.s_rb);
                }
            }
        }
    }

    #[test]
    fn other_families_and_entropy_split() {
        let cfg = LongRepConfig::default();
        for (fam, p) in [(ChannelFamily::IndependentXZ, 0.112), (ChannelFamily::TwoPauli, 0.113)] {
            let ch = fam.eval(p).unwrap();
            let est = s_rb_estimate(5, 9, &ch, &cfg);
            let exact = s_rb_rep(5, 9, &ch).unwrap();
            assert!((est.s_rb - exact).abs() <= 1e-5, "{fam}: {} vs {exact}", est.s_rb);
            assert!((est.stabilizer_entropy - est.normalizer_entropy - est.s_rb).abs() < 1e-9);
        }
    }

    #[test]
    fn halving_alpha_is_stable() {
        let ch = depol(0.0636);
        let a = s_rb_estimate(5, 51, &ch, &LongRepConfig::default());
        let b = s_rb_estimate(5, 51, &ch, &LongRepConfig { alpha: 5e-4, ..Default::default() });
        assert!((a.s_rb - b.s_rb).abs() < 1e-7, "{} vs {}", a.s_rb, b.s_rb);
    }

    #[test]
    fn numerics_helpers() {
        assert!((psi(1.0) + std::f64::consts::LN_2).abs() < 1e-15);
        assert!((psi(0.3) - psi(-0.3)).abs() < 1e-15);
        assert!((psi(2e-5) + 2e-10).abs() < 2e-20);
        assert_eq!(softplus(800.0), 800.0);
        assert!((softplus(-800.0)).abs() < 1e-300);
        assert!((softplus(0.0) - std::f64::consts::LN_2).abs() < 1e-15);
    }
}
