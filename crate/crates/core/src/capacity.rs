//! Rates, thresholds and sweeps.
//!
//! The rate of a model at channel `ch` is `(k − S_RB)/l` bits per channel use;
//! a threshold is the noise level at which it changes sign.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{entropy_bits, hashing_point, ChannelFamily, PauliChannel};
use crate::code::{parse_rep_name, RepType};
use crate::concat::{s_rb_stack_exact, s_rb_stack_mc, CodeStack, Strategy};
use crate::error::{Error, Result};
use crate::longrep::{s_rb_estimate_typed, LongRepConfig};
use crate::rep::s_rb_rep_typed;

pub const DEFAULT_EXACT_TOL: f64 = 1e-10;
pub const DEFAULT_MC_TOL: f64 = 1e-7;
pub const DEFAULT_LONGREP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Grouped,
    Mc,
    Longrep,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::Exact => "exact",
            Method::Grouped => "grouped",
            Method::Mc => "mc",
            Method::Longrep => "longrep",
        };
        f.write_str(s)
    }
}

/// What is being evaluated.
#[derive(Debug, Clone)]
pub enum Model {
    /// A general stack, composed layer by layer.
    Stack(CodeStack),
    /// Two repetition layers `rep_inner(n) x rep_outer(m)` in closed form; the
    /// outer layer has the opposite stabilizer type.
    Rep { n: usize, m: usize, inner: RepType },
    /// The same code through the binned log-domain estimator.
    LongRep {
        n: usize,
        m: usize,
        inner: RepType,
        cfg: LongRepConfig,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    /// Bits.
    pub s_rb: f64,
    pub method: Method,
    pub std_error: Option<f64>,
    pub unstable: bool,
}

fn rep_name(n: usize, ty: RepType) -> String {
    match ty {
        RepType::Z => format!("repZ({n})"),
        RepType::X => format!("repX({n})"),
    }
}

fn two_rep_layers(stack: &str) -> Result<(usize, usize, RepType)> {
    let norm = stack.replace('×', " x ");
    let layers: Vec<Option<(usize, RepType)>> = norm.split(" x ").map(|s| parse_rep_name(s.trim())).collect();
    match layers[..] {
        [Some((n, a)), Some((m, b))] if a != b => Ok((n, m, a)),
        _ => Err(Error::Spec(format!(
            "{stack} (closed-form and long-repetition methods need `repZ(n) x repX(m)` or `repX(n) x repZ(m)`)"
        ))),
    }
}

impl Model {
    /// Builds a model from a stack string and a method tag: `auto`, `closed`,
    /// `longrep` or `mc:<samples>:<seed>`. `closed` and `longrep` need two
    /// repetition layers of opposite types.
    pub fn build(stack: &str, method: &str) -> Result<Model> {
        let method = method.trim();
        match method {
            "" | "auto" => Ok(Model::Stack(stack.parse()?)),
            "closed" | "longrep" => {
                let (n, m, inner) = two_rep_layers(stack)?;
                Ok(if method == "closed" {
                    Model::Rep { n, m, inner }
                } else {
                    Model::LongRep {
                        n,
                        m,
                        inner,
                        cfg: LongRepConfig::default(),
                    }
                })
            }
            other => {
                let bad = || Error::Spec(format!("{other} (expected auto, closed, longrep or mc:<samples>:<seed>)"));
                let rest = other.strip_prefix("mc:").ok_or_else(bad)?;
                let (a, b) = rest.split_once(':').ok_or_else(bad)?;
                let samples = a.parse().map_err(|_| bad())?;
                let seed = b.parse().map_err(|_| bad())?;
                let s: CodeStack = stack.parse()?;
                Ok(Model::Stack(s.with_strategy(Strategy::MonteCarlo { samples, seed })))
            }
        }
    }

    pub fn k(&self) -> usize {
        match self {
            Model::Stack(s) => s.k(),
            _ => 1,
        }
    }

    pub fn length(&self) -> usize {
        match self {
            Model::Stack(s) => s.length(),
            Model::Rep { n, m, .. } | Model::LongRep { n, m, .. } => n * m,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Model::Stack(s) if s.layers.is_empty() => "none".into(),
            Model::Stack(s) => s.to_string(),
            Model::Rep { n, m, inner } | Model::LongRep { n, m, inner, .. } => {
                format!("{} x {}", rep_name(*n, *inner), rep_name(*m, inner.flip()))
            }
        }
    }

    /// Method used by [`Model::evaluate`].
    pub fn method(&self) -> Method {
        match self {
            Model::Stack(s) if s.layers.len() < 2 => Method::Exact,
            Model::Stack(s) => match s.strategy {
                Strategy::Exact => Method::Grouped,
                Strategy::MonteCarlo { .. } => Method::Mc,
            },
            Model::Rep { .. } => Method::Exact,
            Model::LongRep { .. } => Method::Longrep,
        }
    }

    pub fn evaluate(&self, ch: &PauliChannel) -> Result<Evaluation> {
        let method = self.method();
        let plain = |s_rb| Evaluation {
            s_rb,
            method,
            std_error: None,
            unstable: false,
        };
        match self {
            Model::Stack(s) => match (method, s.strategy) {
                (Method::Mc, Strategy::MonteCarlo { samples, seed }) => {
                    let est = s_rb_stack_mc(s, ch, samples, seed)?;
                    Ok(Evaluation {
                        s_rb: est.estimate,
                        method,
                        std_error: Some(est.std_error),
                        unstable: false,
                    })
                }
                _ => s_rb_stack_exact(s, ch).map(plain),
            },
            Model::Rep { n, m, inner } => s_rb_rep_typed(*n, *m, *inner, ch).map(plain),
            Model::LongRep { n, m, inner, cfg } => {
                let est = s_rb_estimate_typed(*n, *m, *inner, ch, cfg);
                Ok(Evaluation {
                    s_rb: est.s_rb,
                    method,
                    std_error: None,
                    unstable: est.unstable,
                })
            }
        }
    }

    pub fn default_tol(&self) -> f64 {
        match self.method() {
            Method::Exact | Method::Grouped => DEFAULT_EXACT_TOL,
            Method::Mc => DEFAULT_MC_TOL,
            Method::Longrep => DEFAULT_LONGREP_TOL,
        }
    }
}

/// One output row: CSV columns `p, s_rb, rate, method, std_error`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub p: f64,
    pub s_rb: f64,
    pub rate: f64,
    pub method: Method,
    pub std_error: Option<f64>,
}

pub fn rate_of(model: &Model, ch: &PauliChannel) -> Result<(Evaluation, f64)> {
    let ev = model.evaluate(ch)?;
    Ok((ev, (model.k() as f64 - ev.s_rb) / model.length() as f64))
}

pub fn rate(model: &Model, family: &ChannelFamily, p: f64) -> Result<RateRow> {
    let (ev, r) = rate_of(model, &family.eval(p)?)?;
    Ok(RateRow {
        p,
        s_rb: ev.s_rb + 0.0,
        rate: r + 0.0,
        method: ev.method,
        std_error: ev.std_error.map(|se| se / model.length() as f64),
    })
}

/// Rate minus the hashing rate `max(0, 1 − H(ch))`.
pub fn nonadditivity(model: &Model, ch: &PauliChannel) -> Result<f64> {
    let (_, r) = rate_of(model, ch)?;
    Ok(r - (1.0 - entropy_bits(&ch.0)).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdOptions {
    pub tol: Option<f64>,
    /// Search interval; defaults to `[hashing/2, upper limit]`.
    pub bracket: Option<(f64, f64)>,
    /// Interpolation steps inside the bracket (deterministic methods only).
    pub accelerate: bool,
}

impl Default for ThresholdOptions {
    fn default() -> Self {
        ThresholdOptions {
            tol: None,
            bracket: None,
            accelerate: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub stack: String,
    pub family: ChannelFamily,
    pub threshold: f64,
    pub method: Method,
    /// Final bracket width.
    pub tolerance: f64,
    /// `(lo, hi)` with `rate(lo) > 0 > rate(hi)`.
    pub bracket: (f64, f64),
    pub bracket_rates: (f64, f64),
    pub std_error: Option<f64>,
    pub evaluations: usize,
}

struct Counter<'a> {
    model: &'a Model,
    family: &'a ChannelFamily,
    calls: usize,
}

impl Counter<'_> {
    fn rate(&mut self, p: f64) -> Result<f64> {
        self.calls += 1;
        let (ev, r) = rate_of(self.model, &self.family.eval(p)?)?;
        if ev.unstable {
            return Err(Error::Unstable(format!("{} at p = {p}", self.model.describe())));
        }
        Ok(r)
    }
}

/// Finds the crossing of the rate with zero by bracketing.
pub fn threshold(model: &Model, family: &ChannelFamily, opts: &ThresholdOptions) -> Result<ThresholdResult> {
    let tol = opts.tol.unwrap_or_else(|| model.default_tol());
    if !(tol > 0.0) {
        return Err(Error::OutOfRange(format!("tol = {tol} must be positive")));
    }
    let mut f = Counter {
        model,
        family,
        calls: 0,
    };
    let limit = family.upper_limit();
    let (mut lo, mut hi, mut rlo, mut rhi);
    match opts.bracket {
        Some((a, b)) => {
            if !(0.0 <= a && a < b && b <= limit) {
                return Err(Error::OutOfRange(format!("bracket [{a}, {b}] not inside [0, {limit}]")));
            }
            (lo, hi) = (a, b);
            (rlo, rhi) = (f.rate(lo)?, f.rate(hi)?);
        }
        None => {
            let h = hashing_point(family)?;
            lo = 0.5 * h;
            rlo = f.rate(lo)?;
            // try a narrow upper end first; most thresholds sit close to hashing
            hi = (1.5 * h).min(limit);
            rhi = f.rate(hi)?;
            if rhi >= 0.0 && hi < limit {
                hi = limit;
                rhi = f.rate(hi)?;
            }
        }
    }
    if !(rlo > 0.0 && rhi < 0.0) {
        return Err(Error::NoSignChange { lo, hi });
    }

    let deterministic = model.method() != Method::Mc;
    // ITP iteration on y = −rate (increasing), final width ≤ tol
    let eps = 0.5 * tol;
    let n_max = ((hi - lo) / (2.0 * eps)).log2().ceil().max(0.0) as i32 + 1;
    let k1 = 0.2 / (hi - lo);
    let mut j = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let x = if opts.accelerate && deterministic {
            let r = eps * 2f64.powi(n_max - j) - 0.5 * (hi - lo);
            let delta = k1 * (hi - lo) * (hi - lo);
            let xf = (rlo * hi - rhi * lo) / (rlo - rhi);
            let sigma = (mid - xf).signum();
            let xt = if delta <= (mid - xf).abs() { xf + sigma * delta } else { mid };
            let x = if (xt - mid).abs() <= r { xt } else { mid - sigma * r };
            if x > lo && x < hi {
                x
            } else {
                mid
            }
        } else {
            mid
        };
        let r = f.rate(x)?;
        if r > 0.0 {
            (lo, rlo) = (x, r);
        } else if r < 0.0 {
            (hi, rhi) = (x, r);
        } else {
            // exact zero: close the bracket around it
            let (a, b) = ((x - eps).max(lo), (x + eps).min(hi));
            let (ra, rb) = (f.rate(a)?, f.rate(b)?);
            if ra > 0.0 && rb < 0.0 {
                (lo, rlo, hi, rhi) = (a, ra, b, rb);
            } else {
                (lo, rlo, hi, rhi) = (x, r, x, r);
            }
            break;
        }
        j += 1;
    }
    let p_star = 0.5 * (lo + hi);

    let std_error = if deterministic {
        None
    } else {
        // error propagated through the local slope; common random numbers keep
        // the estimate a smooth function of p
        let h = 1e-4 * p_star;
        let e0 = model.evaluate(&family.eval(p_star)?)?;
        let sm = model.evaluate(&family.eval(p_star - h)?)?.s_rb;
        let sp = model.evaluate(&family.eval(p_star + h)?)?.s_rb;
        f.calls += 3;
        let slope = (sp - sm) / (2.0 * h);
        e0.std_error.map(|se| se / slope.abs())
    };

    Ok(ThresholdResult {
        stack: model.describe(),
        family: *family,
        threshold: p_star,
        method: model.method(),
        tolerance: hi - lo,
        bracket: (lo, hi),
        bracket_rates: (rlo, rhi),
        std_error,
        evaluations: f.calls,
    })
}

/// `steps` evenly spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::OutOfRange(format!("steps = {steps}, need at least 2")));
    }
    let d = (b - a) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| if i + 1 == steps { b } else { a + d * i as f64 })
        .collect())
}

/// Rates at each `p`, evaluated in parallel, in input order.
pub fn rates_at(model: &Model, family: &ChannelFamily, ps: &[f64]) -> Result<Vec<RateRow>> {
    ps.par_iter().map(|&p| rate(model, family, p)).collect()
}

pub fn sweep(model: &Model, family: &ChannelFamily, a: f64, b: f64, steps: usize) -> Result<Vec<RateRow>> {
    rates_at(model, family, &linspace(a, b, steps)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::registry_get;

    fn stack(s: &str) -> Model {
        Model::Stack(s.parse().unwrap())
    }

    const DEPOL: ChannelFamily = ChannelFamily::Depolarizing;

    fn check_certificate(model: &Model, fam: &ChannelFamily, t: &ThresholdResult) {
        assert!(t.bracket.1 - t.bracket.0 <= t.tolerance + 1e-18);
        assert!(t.bracket_rates.0 > 0.0 && t.bracket_rates.1 < 0.0);
        let tol = t.tolerance.max(1e-13);
        assert!(rate(model, fam, t.threshold - tol).unwrap().rate > 0.0);
        assert!(rate(model, fam, t.threshold + tol).unwrap().rate < 0.0);
    }

    #[test]
    fn noiseless_rate_is_k_over_l() {
        for s in ["", "5qubit", "422", "repZ(3) x repX(3)", "3rep x 422"] {
            let m = stack(s);
            let r = rate(&m, &DEPOL, 0.0).unwrap();
            assert!((r.rate - m.k() as f64 / m.length() as f64).abs() < 1e-12, "{s}");
        }
        let m = Model::Rep { n: 4, m: 9, inner: RepType::Z };
        assert!((rate(&m, &DEPOL, 0.0).unwrap().rate - 1.0 / 36.0).abs() < 1e-12);
    }

    #[test]
    fn empty_stack_is_hashing() {
        let m = stack("");
        let t = threshold(&m, &DEPOL, &ThresholdOptions::default()).unwrap();
        let h = hashing_point(&DEPOL).unwrap();
        assert!((t.threshold - h).abs() < 1e-10);
        check_certificate(&m, &DEPOL, &t);
        let r = rate(&m, &DEPOL, 0.05).unwrap();
        let ch = DEPOL.eval(0.05).unwrap();
        assert!((r.rate - (1.0 - ch.entropy())).abs() < 1e-14);
        assert!(nonadditivity(&m, &ch).unwrap().abs() < 1e-14);
    }

    #[test]
    fn five_rep_beats_hashing_just_above_it() {
        let m = stack("repZ(5)");
        let ch = DEPOL.eval(0.0632).unwrap();
        assert!(rate(&m, &DEPOL, 0.0632).unwrap().rate > 0.0);
        assert!(nonadditivity(&m, &ch).unwrap() > 0.0);
    }

    #[test]
    fn steane_and_seven_rep_thresholds() {
        let m = stack("steane");
        let t = threshold(&m, &DEPOL, &ThresholdOptions::default()).unwrap();
        assert!((t.threshold - 0.06259214551).abs() < 1e-8, "{}", t.threshold);
        assert_eq!(t.method, Method::Exact);
        check_certificate(&m, &DEPOL, &t);

        let fam = ChannelFamily::IndependentXZ;
        let m = stack("repX(7)");
        let t = threshold(&m, &fam, &ThresholdOptions::default()).unwrap();
        assert!((t.threshold - 0.1121074112).abs() < 1e-8, "{}", t.threshold);
        check_certificate(&m, &fam, &t);
    }

    #[test]
    fn shor_threshold_three_ways() {
        let want = 0.06335987939;
        let models = [
            stack("repZ(3) x repX(3)"),
            stack("shor"),
            Model::Rep { n: 3, m: 3, inner: RepType::Z },
        ];
        let ts: Vec<f64> = models
            .iter()
            .map(|m| threshold(m, &DEPOL, &ThresholdOptions::default()).unwrap().threshold)
            .collect();
        for t in &ts {
            assert!((t - want).abs() < 1e-8, "{ts:?}");
            assert!((t - ts[0]).abs() <= 1e-10, "{ts:?}");
        }
        assert_eq!(models[0].method(), Method::Grouped);
    }

    #[test]
    fn acceleration_does_not_move_the_root_and_saves_calls() {
        let m = stack("repZ(5)");
        let fast = threshold(&m, &DEPOL, &ThresholdOptions::default()).unwrap();
        let slow = threshold(
            &m,
            &DEPOL,
            &ThresholdOptions {
                accelerate: false,
                ..Default::default()
            },
        )
        .unwrap();
        assert!((fast.threshold - slow.threshold).abs() < 1e-10);
        assert!(fast.evaluations < slow.evaluations, "{} vs {}", fast.evaluations, slow.evaluations);
        let finer = threshold(
            &m,
            &DEPOL,
            &ThresholdOptions {
                tol: Some(1e-12),
                ..Default::default()
            },
        )
        .unwrap();
        assert!((finer.threshold - fast.threshold).abs() < 1e-10);
    }

    #[test]
    fn reversal_ordering() {
        let th = |s: &str| threshold(&stack(s), &DEPOL, &ThresholdOptions::default()).unwrap().threshold;
        assert!(th("repZ(7)") > th("repZ(3)"));
        assert!(th("repZ(3) x repX(7)") > th("repZ(7) x repX(7)"));
    }

    #[test]
    fn no_sign_change_is_reported() {
        let m = stack("steane");
        let e = threshold(
            &m,
            &DEPOL,
            &ThresholdOptions {
                bracket: Some((0.07, 0.08)),
                ..Default::default()
            },
        )
        .unwrap_err();
        assert!(matches!(e, Error::NoSignChange { .. }));
        assert!(e.is_numerical());
    }

    #[test]
    fn sweep_rows_are_ordered_and_bracket_threshold() {
        let m = stack("repZ(5)");
        let rows = sweep(&m, &DEPOL, 0.063, 0.0639, 10).unwrap();
        assert_eq!(rows.len(), 10);
        assert_eq!(rows[0].p, 0.063);
        assert_eq!(rows[9].p, 0.0639);
        assert!(rows.windows(2).all(|w| w[0].p < w[1].p && w[0].rate > w[1].rate));
        assert!(rows[0].rate > 0.0 && rows[9].rate < 0.0);

        let empty = sweep(&stack(""), &DEPOL, 0.0, 0.0630965, 5).unwrap();
        assert_eq!(empty[0].rate, 1.0);
        assert!(empty[4].rate.abs() < 1e-5);
        assert!(linspace(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn longrep_model_tracks_closed_form() {
        let ch = DEPOL.eval(0.0634).unwrap();
        let a = Model::Rep { n: 5, m: 9, inner: RepType::Z }.evaluate(&ch).unwrap();
        let b = Model::LongRep {
            n: 5,
            m: 9,
            inner: RepType::Z,
            cfg: LongRepConfig::default(),
        }
        .evaluate(&ch)
        .unwrap();
        assert!((a.s_rb - b.s_rb).abs() < 1e-5);
        assert!(!b.unstable);
        assert_eq!(b.method, Method::Longrep);
        let s = stack("repZ(5) x repX(9)").evaluate(&ch).unwrap();
        assert!((a.s_rb - s.s_rb).abs() < 1e-9);
    }

    #[test]
    fn mc_threshold_carries_std_error() {
        let s: CodeStack = "repZ(3) x repX(3)".parse().unwrap();
        let m = Model::Stack(s.with_strategy(Strategy::MonteCarlo { samples: 4000, seed: 7 }));
        let t = threshold(&m, &DEPOL, &ThresholdOptions::default()).unwrap();
        let se = t.std_error.unwrap();
        assert!(se > 0.0);
        assert!((t.threshold - 0.06335987939).abs() < 4.0 * se + 1e-6, "{} ± {se}", t.threshold);
        let again = threshold(&m, &DEPOL, &ThresholdOptions::default()).unwrap();
        assert_eq!(t.threshold, again.threshold);
    }

    #[test]
    fn describe_names() {
        assert_eq!(stack("").describe(), "none");
        assert_eq!(Model::Rep { n: 5, m: 51, inner: RepType::Z }.describe(), "repZ(5) x repX(51)");
        assert_eq!(stack("5qubit").length(), registry_get("5qubit").unwrap().n);
    }
}
