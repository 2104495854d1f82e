//! Channel optimization: for a fixed model, search the error split
//! `(c_X, c_Y, c_Z)` of the family `(1 − p, c_X p, c_Y p, c_Z p)` for the
//! largest rate at that family's hashing point.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::{rate_of, Method, Model};
use crate::channel::{hashing_point, hashing_point_near, ChannelFamily, Coefficients, COEFF_FLOOR};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeOptions {
    pub restarts: usize,
    pub seed: u64,
    /// Objective evaluations per restart.
    pub max_evals: usize,
    /// Stop once the simplex spans less than this in coefficient space.
    pub diameter_tol: f64,
    /// Allow Monte Carlo models (noisy objective).
    pub allow_mc: bool,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        OptimizeOptions {
            restarts: 12,
            seed: 0,
            max_evals: 400,
            diameter_tol: 1e-6,
            allow_mc: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RestartTrace {
    pub start: [f64; 3],
    pub best: [f64; 3],
    pub p_hash: f64,
    pub non_additivity: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub stack: String,
    pub coefficients: [f64; 3],
    pub p_hash: f64,
    pub non_additivity: f64,
    pub trace: Vec<RestartTrace>,
}

/// Hashing point of the custom family `c` and the model's rate there.
pub fn nonadditivity_at_hashing(model: &Model, c: &Coefficients) -> Result<(f64, f64)> {
    let fam = ChannelFamily::Custom(*c);
    let p = hashing_point(&fam)?;
    Ok((p, rate_of(model, &fam.eval(p)?)?.1))
}

fn nonadditivity_near(model: &Model, c: &Coefficients, guess: f64) -> Result<(f64, f64)> {
    let fam = ChannelFamily::Custom(*c);
    let p = hashing_point_near(&fam, guess)?;
    Ok((p, rate_of(model, &fam.eval(p)?)?.1))
}

/// `c = floor + (1 − 3 floor) softmax(u₀, u₁, 0)`: every point of the plane
/// maps inside the floored simplex.
pub fn coefficients_from_params(u: [f64; 2]) -> [f64; 3] {
    let top = u[0].max(u[1]).max(0.0);
    let e = [(u[0] - top).exp(), (u[1] - top).exp(), (-top).exp()];
    let s: f64 = e.iter().sum();
    let span = 1.0 - 3.0 * COEFF_FLOOR;
    e.map(|v| COEFF_FLOOR + span * v / s)
}

pub fn params_from_coefficients(c: [f64; 3]) -> [f64; 2] {
    let span = 1.0 - 3.0 * COEFF_FLOOR;
    let s = c.map(|v| ((v - COEFF_FLOOR) / span).max(1e-300));
    [(s[0] / s[2]).ln(), (s[1] / s[2]).ln()]
}

fn to_coefficients(c: [f64; 3]) -> Result<Coefficients> {
    // renormalize away rounding so the sum check holds tightly
    let s: f64 = c.iter().sum();
    let c = c.map(|v| (v / s).max(COEFF_FLOOR));
    Coefficients::new(c[0], c[1], c[2])
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let (mut f, mut r) = (1.0, 0.0);
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Restart points: the three near-vertex splits, then a Halton sequence
/// folded onto the simplex.
pub fn starting_points(restarts: usize, seed: u64) -> Vec<[f64; 3]> {
    let mut pts = vec![[0.9, 0.05, 0.05], [0.05, 0.9, 0.05], [0.05, 0.05, 0.9]];
    pts.truncate(restarts);
    let mut i = 1 + seed;
    while pts.len() < restarts {
        let (mut a, mut b) = (radical_inverse(i, 2), radical_inverse(i, 3));
        if a + b > 1.0 {
            (a, b) = (1.0 - a, 1.0 - b);
        }
        let c = [a, b, 1.0 - a - b].map(|v| v.clamp(0.01, 0.98));
        let s: f64 = c.iter().sum();
        pts.push(c.map(|v| v / s));
        i += 1;
    }
    pts
}

fn distance(a: [f64; 3], b: [f64; 3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

struct Objective<'a> {
    model: &'a Model,
    p_guess: f64,
    evals: usize,
}

impl Objective<'_> {
    /// Negated rate (minimized), with its hashing point.
    fn eval(&mut self, u: [f64; 2]) -> (f64, f64) {
        self.evals += 1;
        let c = coefficients_from_params(u);
        match to_coefficients(c).and_then(|c| nonadditivity_near(self.model, &c, self.p_guess)) {
            Ok((p, q)) if q.is_finite() => {
                self.p_guess = p;
                (-q, p)
            }
            _ => (f64::INFINITY, f64::NAN),
        }
    }
}

/// Nelder–Mead on the two softmax parameters.
fn run_restart(model: &Model, start: [f64; 3], opts: &OptimizeOptions) -> RestartTrace {
    let mut obj = Objective {
        model,
        p_guess: 0.2,
        evals: 0,
    };
    let u0 = params_from_coefficients(start);
    let mut simplex: Vec<([f64; 2], f64, f64)> = [u0, [u0[0] + 0.5, u0[1]], [u0[0], u0[1] + 0.5]]
        .into_iter()
        .map(|u| {
            let (f, p) = obj.eval(u);
            (u, f, p)
        })
        .collect();
    let lerp = |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];

    while obj.evals < opts.max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let cs: Vec<[f64; 3]> = simplex.iter().map(|v| coefficients_from_params(v.0)).collect();
        let diam = distance(cs[0], cs[1]).max(distance(cs[0], cs[2])).max(distance(cs[1], cs[2]));
        if diam < opts.diameter_tol {
            break;
        }
        let centroid = lerp(simplex[0].0, simplex[1].0, 0.5);
        let worst = simplex[2];
        let xr = lerp(centroid, worst.0, -1.0);
        let (fr, pr) = obj.eval(xr);
        if fr < simplex[0].1 {
            let xe = lerp(centroid, worst.0, -2.0);
            let (fe, pe) = obj.eval(xe);
            simplex[2] = if fe < fr { (xe, fe, pe) } else { (xr, fr, pr) };
        } else if fr < simplex[1].1 {
            simplex[2] = (xr, fr, pr);
        } else {
            let (xc, t) = if fr < worst.1 { (lerp(centroid, xr, 0.5), fr) } else { (lerp(centroid, worst.0, 0.5), worst.1) };
            let (fc, pc) = obj.eval(xc);
            if fc < t {
                simplex[2] = (xc, fc, pc);
            } else {
                let best = simplex[0].0;
                for v in simplex.iter_mut().skip(1) {
                    let u = lerp(best, v.0, 0.5);
                    let (f, p) = obj.eval(u);
                    *v = (u, f, p);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (u, f, p) = simplex[0];
    RestartTrace {
        start,
        best: coefficients_from_params(u),
        p_hash: p,
        non_additivity: -f,
        evaluations: obj.evals,
    }
}

/// Multi-start simplex search; restarts run in parallel and the best rate
/// wins, ties going to the lexicographically smallest coefficients.
pub fn optimize_channel(model: &Model, opts: &OptimizeOptions) -> Result<OptimizationResult> {
    if opts.restarts == 0 {
        return Err(Error::OutOfRange("restarts must be at least 1".into()));
    }
    if model.method() == Method::Mc && !opts.allow_mc {
        return Err(Error::OutOfRange("Monte Carlo models give a noisy objective; use an exact stack".into()));
    }
    let trace: Vec<RestartTrace> = starting_points(opts.restarts, opts.seed)
        .into_par_iter()
        .map(|s| run_restart(model, s, opts))
        .collect();
    let best = trace
        .iter()
        .filter(|t| t.non_additivity.is_finite())
        .max_by(|a, b| {
            a.non_additivity
                .total_cmp(&b.non_additivity)
                .then_with(|| b.best.partial_cmp(&a.best).unwrap_or(std::cmp::Ordering::Equal))
        })
        .ok_or_else(|| Error::Unstable("no restart produced a finite objective".into()))?;
    // report the hashing point at full precision for the winning split
    let c = to_coefficients(best.best)?;
    let (p_hash, q) = nonadditivity_at_hashing(model, &c)?;
    Ok(OptimizationResult {
        stack: model.describe(),
        coefficients: c.as_array(),
        p_hash,
        non_additivity: q,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::PauliChannel;
    use proptest::prelude::*;

    fn stack(s: &str) -> Model {
        Model::Stack(s.parse().unwrap())
    }

    #[test]
    fn depolarizing_split_on_empty_stack_is_zero() {
        let c = Coefficients::new(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0).unwrap();
        let (p, q) = nonadditivity_at_hashing(&stack(""), &c).unwrap();
        // total error p splits evenly, so this is three times the depolarizing parameter
        assert!((p - 3.0 * hashing_point(&ChannelFamily::Depolarizing).unwrap()).abs() < 1e-9);
        assert!(q.abs() < 1e-10);
    }

    #[test]
    fn empty_stack_optimum_is_zero() {
        let r = optimize_channel(
            &stack(""),
            &OptimizeOptions {
                restarts: 4,
                max_evals: 60,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(r.non_additivity.abs() < 1e-9);
        for t in &r.trace {
            assert!(t.non_additivity.abs() < 1e-9);
        }
    }

    #[test]
    fn params_round_trip() {
        for c in [[0.2, 0.3, 0.5], [0.9, 0.05, 0.05], [0.0002, 0.0003, 0.9995]] {
            let back = coefficients_from_params(params_from_coefficients(c));
            assert!(distance(back, c) < 1e-12, "{c:?} -> {back:?}");
        }
    }

    proptest! {
        #[test]
        fn params_stay_in_floored_simplex(a in -800.0f64..800.0, b in -800.0f64..800.0) {
            let c = coefficients_from_params([a, b]);
            prop_assert!((c.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            for v in c {
                prop_assert!((COEFF_FLOOR..=1.0).contains(&v));
            }
            prop_assert!(to_coefficients(c).is_ok());
        }
    }

    #[test]
    fn starts_are_deterministic_and_valid() {
        let a = starting_points(12, 3);
        assert_eq!(a, starting_points(12, 3));
        assert_ne!(a[5], starting_points(12, 4)[5]);
        assert_eq!(a.len(), 12);
        for c in &a {
            assert!((c.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(c.iter().all(|&v| v > 0.0));
        }
        assert_eq!(starting_points(2, 0).len(), 2);
    }

    #[test]
    fn hashing_point_is_unit_entropy() {
        let c = Coefficients::new(0.06609142, 0.91039291, 0.02351567).unwrap();
        let (p, _) = nonadditivity_at_hashing(&stack("repZ(4)"), &c).unwrap();
        let ch: PauliChannel = ChannelFamily::Custom(c).eval(p).unwrap();
        assert!((ch.entropy() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn symmetric_code_gives_symmetric_objective() {
        for name in ["steane", "422"] {
            let m = stack(name);
            let (_, a) = nonadditivity_at_hashing(&m, &Coefficients::new(0.2, 0.1, 0.7).unwrap()).unwrap();
            let (_, b) = nonadditivity_at_hashing(&m, &Coefficients::new(0.7, 0.1, 0.2).unwrap()).unwrap();
            assert!((a - b).abs() < 1e-12, "{name}: {a} vs {b}");
        }
    }
}
