//! Code stacks evaluated by effective-channel composition.
//!
//! Conditioned on its syndrome, an inner `k = 1` layer acts on its logical
//! qubit as a Pauli channel `(P_{T_Ī}, P_{T_X̄}, P_{T_Ȳ}, P_{T_Z̄}) / P_T`. The
//! next layer sees one such channel per position, drawn independently with
//! probability `P_T`, so the stack's `S_RB` is the expectation of the outer
//! layer's `S_RB` over those assignments. Channels are compared up to a Pauli
//! translation of their labels, which permutes the cosets of every later layer
//! without changing any conditional distribution.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{entropy_bits, PauliChannel};
use crate::code::{concatenate, resolve_code, RepType, StabilizerCode};
use crate::error::{Error, Result};
use crate::exact::{coset_distribution, s_rb_exact, TransformEvaluator, DEFAULT_EXHAUSTIVE_LIMIT};

/// Default cap on the number of per-position channel assignments enumerated
/// for one layer.
pub const DEFAULT_ASSIGNMENT_BUDGET: f64 = 1e8;

/// Components closer than this are treated as the same effective channel.
pub const GROUPING_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Exact,
    MonteCarlo { samples: usize, seed: u64 },
}

/// Layers listed inner first: `A x B` encodes with `B` first, then each of its
/// qubits with `A`, so `A` is closest to the channel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeStack {
    pub layers: Vec<StabilizerCode>,
    pub strategy: Strategy,
}

impl CodeStack {
    pub fn new(layers: Vec<StabilizerCode>) -> Result<Self> {
        if let Some((_, inner)) = layers.split_last() {
            if let Some(bad) = inner.iter().find(|c| c.k != 1) {
                return Err(Error::CodeValidation {
                    code: bad.name.clone(),
                    msg: "only the outermost layer may encode more than one qubit".into(),
                });
            }
        }
        Ok(CodeStack {
            layers,
            strategy: Strategy::Exact,
        })
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    /// Physical length `l`.
    pub fn length(&self) -> usize {
        self.layers.iter().map(|c| c.n).product()
    }

    /// Logical qubits of the outermost layer (1 for the empty stack).
    pub fn k(&self) -> usize {
        self.layers.last().map_or(1, |c| c.k)
    }

    /// The explicitly composed code.
    pub fn flat_code(&self) -> Result<StabilizerCode> {
        let mut it = self.layers.iter().rev();
        let first = it.next().ok_or_else(|| Error::Spec("empty stack".into()))?.clone();
        // outer layers first: wrap the current (outer) code with each next inner layer
        it.try_fold(first, |outer, inner| concatenate(inner, &outer))
    }
}

impl fmt::Display for CodeStack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.layers.iter().map(|c| c.name.as_str()).collect();
        write!(f, "{}", names.join(" x "))
    }
}

impl FromStr for CodeStack {
    type Err = Error;

    /// Layers joined by `x` (or `×`), inner first; empty means no encoding.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "none" {
            return CodeStack::new(Vec::new());
        }
        let layers = s
            .replace('×', " x ")
            .split(" x ")
            .map(|part| {
                let part = part.trim();
                if part.is_empty() {
                    return Err(Error::Spec(s.to_string()));
                }
                resolve_code(part)
            })
            .collect::<Result<Vec<_>>>()?;
        CodeStack::new(layers)
    }
}

/// Effective logical channels of an inner layer with their probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveChannelSet {
    pub entries: Vec<(f64, PauliChannel)>,
}

impl EffectiveChannelSet {
    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.0).sum()
    }

    fn cumulative(&self) -> Vec<f64> {
        self.entries
            .iter()
            .scan(0.0, |acc, e| {
                *acc += e.0;
                Some(*acc)
            })
            .collect()
    }
}

/// Representative of `ch` under relabeling by a fixed Pauli: the
/// lexicographically largest of its four translates.
pub fn canonical(ch: &PauliChannel) -> PauliChannel {
    let [i, x, y, z] = ch.0;
    let candidates = [[i, x, y, z], [x, i, z, y], [y, z, i, x], [z, y, x, i]];
    let best = candidates
        .into_iter()
        .max_by(|a, b| a.partial_cmp(b).expect("finite probabilities"))
        .unwrap();
    PauliChannel(best)
}

fn key(ch: &PauliChannel) -> [i64; 4] {
    ch.0.map(|v| (v / GROUPING_TOL).round() as i64)
}

/// Accumulates weighted channels, merging equal canonical channels.
#[derive(Default)]
struct Grouper {
    map: HashMap<[i64; 4], (f64, PauliChannel)>,
}

impl Grouper {
    fn add(&mut self, w: f64, ch: PauliChannel) {
        let c = canonical(&ch);
        self.map.entry(key(&c)).or_insert((0.0, c)).0 += w;
    }

    fn merge(mut self, other: Grouper) -> Grouper {
        for (k, (w, c)) in other.map {
            self.map.entry(k).or_insert((0.0, c)).0 += w;
        }
        self
    }

    fn finish(self) -> EffectiveChannelSet {
        let mut entries: Vec<([i64; 4], (f64, PauliChannel))> = self.map.into_iter().collect();
        entries.sort_by_key(|e| std::cmp::Reverse(e.0));
        EffectiveChannelSet {
            entries: entries.into_iter().map(|(_, e)| e).collect(),
        }
    }
}

fn require_k1(code: &StabilizerCode) -> Result<()> {
    if code.k != 1 {
        return Err(Error::CodeValidation {
            code: code.name.clone(),
            msg: "effective channels need k = 1".into(),
        });
    }
    Ok(())
}

/// Grouped per-syndrome conditional channels of `code` (exhaustive engine).
pub fn effective_channels(code: &StabilizerCode, site_channels: &[PauliChannel]) -> Result<EffectiveChannelSet> {
    require_k1(code)?;
    let table = coset_distribution(code, site_channels)?;
    let mut g = Grouper::default();
    for s in 0..table.syndromes() {
        if let Some(ch) = table.conditional_channel(s) {
            g.add(table.syndrome_prob(s), ch);
        }
    }
    Ok(g.finish())
}

/// One entry per syndrome with nonzero probability, no grouping.
pub fn effective_channels_ungrouped(
    code: &StabilizerCode,
    site_channels: &[PauliChannel],
) -> Result<EffectiveChannelSet> {
    require_k1(code)?;
    let table = coset_distribution(code, site_channels)?;
    let entries = (0..table.syndromes())
        .filter_map(|s| table.conditional_channel(s).map(|c| (table.syndrome_prob(s), c)))
        .collect();
    Ok(EffectiveChannelSet { entries })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactOptions {
    pub grouping: bool,
    pub budget: f64,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions {
            grouping: true,
            budget: DEFAULT_ASSIGNMENT_BUDGET,
        }
    }
}

/// Weighted per-position channel assignments of one layer.
enum Assignments<'a> {
    /// Multisets as count vectors with their multinomial probabilities.
    Multisets(&'a EffectiveChannelSet, Vec<(f64, Vec<usize>)>),
    /// Every ordered tuple, addressed by a mixed-radix index.
    Product(&'a EffectiveChannelSet, usize),
}

impl<'a> Assignments<'a> {
    fn new(set: &'a EffectiveChannelSet, n: usize, symmetric: bool, budget: f64, what: &str) -> Result<Self> {
        let e = set.entries.len();
        let needed = if symmetric {
            crate::rep::binomial(n + e - 1, e - 1)
        } else {
            (e as f64).powi(n as i32)
        };
        if needed > budget {
            return Err(Error::BudgetExceeded {
                what: what.to_string(),
                needed,
                budget,
            });
        }
        if !symmetric {
            return Ok(Assignments::Product(set, n));
        }
        let ln_fact: Vec<f64> = (0..=n).map(|i| (1..=i).map(|j| (j as f64).ln()).sum()).collect();
        let mut out = Vec::new();
        let mut counts = vec![0usize; e];
        fn rec(t: usize, left: usize, counts: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if t + 1 == counts.len() {
                counts[t] = left;
                out.push(counts.clone());
                return;
            }
            for c in 0..=left {
                counts[t] = c;
                rec(t + 1, left - c, counts, out);
            }
        }
        let mut vecs = Vec::new();
        rec(0, n, &mut counts, &mut vecs);
        for c in vecs {
            let ln_w: f64 = ln_fact[n]
                + c.iter()
                    .zip(&set.entries)
                    .map(|(&ci, (w, _))| if ci == 0 { 0.0 } else { ci as f64 * w.ln() - ln_fact[ci] })
                    .sum::<f64>();
            out.push((ln_w.exp(), c));
        }
        Ok(Assignments::Multisets(set, out))
    }

    fn len(&self) -> usize {
        match self {
            Assignments::Multisets(_, v) => v.len(),
            Assignments::Product(set, n) => set.entries.len().pow(*n as u32),
        }
    }

    fn get(&self, i: usize, buf: &mut Vec<PauliChannel>) -> f64 {
        buf.clear();
        match self {
            Assignments::Multisets(set, v) => {
                let (w, counts) = &v[i];
                for (c, (_, ch)) in counts.iter().zip(&set.entries) {
                    buf.extend(std::iter::repeat_n(*ch, *c));
                }
                *w
            }
            Assignments::Product(set, n) => {
                let e = set.entries.len();
                let (mut idx, mut w) = (i, 1.0);
                for _ in 0..*n {
                    let (wt, ch) = set.entries[idx % e];
                    w *= wt;
                    buf.push(ch);
                    idx /= e;
                }
                w
            }
        }
    }
}

/// Effective channels of `code` when each position independently receives a
/// channel from `input`.
fn compose_layer(code: &StabilizerCode, input: &EffectiveChannelSet, opts: &ExactOptions) -> Result<EffectiveChannelSet> {
    require_k1(code)?;
    let asg = Assignments::new(input, code.n, code.permutation_symmetric && opts.grouping, opts.budget, &code.name)?;
    let grouped = (0..asg.len())
        .into_par_iter()
        .fold(
            || (TransformEvaluator::new(code), Vec::new(), Grouper::default(), Vec::new()),
            |(mut ev, mut buf, mut g, mut raw), i| {
                let w = asg.get(i, &mut buf);
                let table = ev.table(&buf);
                for s in 0..table.syndromes() {
                    if let Some(ch) = table.conditional_channel(s) {
                        let pw = w * table.syndrome_prob(s);
                        if opts.grouping {
                            g.add(pw, ch);
                        } else {
                            raw.push((i, s, pw, ch));
                        }
                    }
                }
                (ev, buf, g, raw)
            },
        )
        .map(|(_, _, g, raw)| (g, raw))
        .reduce(
            || (Grouper::default(), Vec::new()),
            |(g1, mut r1), (g2, r2)| {
                r1.extend(r2);
                (g1.merge(g2), r1)
            },
        );
    if opts.grouping {
        Ok(grouped.0.finish())
    } else {
        let mut raw = grouped.1;
        raw.sort_by_key(|r| (r.0, r.1));
        Ok(EffectiveChannelSet {
            entries: raw.into_iter().map(|r| (r.2, r.3)).collect(),
        })
    }
}

/// `S_RB` of the outer layer averaged over channel assignments from `input`.
fn outer_expectation(code: &StabilizerCode, input: &EffectiveChannelSet, opts: &ExactOptions) -> Result<f64> {
    let asg = Assignments::new(input, code.n, code.permutation_symmetric && opts.grouping, opts.budget, &code.name)?;
    let terms: Vec<f64> = (0..asg.len())
        .into_par_iter()
        .map_init(
            || (TransformEvaluator::new(code), Vec::new()),
            |(ev, buf), i| {
                let w = asg.get(i, buf);
                w * ev.s_rb(buf)
            },
        )
        .collect();
    Ok(terms.iter().sum())
}

fn single_layer(code: &StabilizerCode, ch: &PauliChannel) -> Result<f64> {
    if code.n > DEFAULT_EXHAUSTIVE_LIMIT {
        if let Some(ty) = rep_type_of(code) {
            return Ok(crate::rep::s_rb_block(code.n, ty, ch));
        }
    }
    Ok(s_rb_exact(&coset_distribution(code, &vec![*ch; code.n])?))
}

/// Stabilizer type when `code` is a generated repetition code.
fn rep_type_of(code: &StabilizerCode) -> Option<RepType> {
    [RepType::Z, RepType::X]
        .into_iter()
        .find(|&ty| code.permutation_symmetric && *code == crate::code::repetition(code.n, ty))
}

/// Exact `S_RB` (bits) of a stack under the i.i.d. channel `ch`.
pub fn s_rb_stack_exact(stack: &CodeStack, ch: &PauliChannel) -> Result<f64> {
    s_rb_stack_exact_with(stack, ch, &ExactOptions::default())
}

pub fn s_rb_stack_exact_with(stack: &CodeStack, ch: &PauliChannel, opts: &ExactOptions) -> Result<f64> {
    let layers = &stack.layers;
    match layers.len() {
        0 => return Ok(entropy_bits(&ch.0)),
        1 => return single_layer(&layers[0], ch),
        _ => {}
    }
    let base = if opts.grouping {
        effective_channels(&layers[0], &vec![*ch; layers[0].n])?
    } else {
        effective_channels_ungrouped(&layers[0], &vec![*ch; layers[0].n])?
    };
    let mut set = base;
    for code in &layers[1..layers.len() - 1] {
        set = compose_layer(code, &set, opts)?;
    }
    outer_expectation(layers.last().unwrap(), &set, opts)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
}

/// Sample index `i` of seed `seed`: an independent ChaCha stream.
pub fn sample_rng(seed: u64, i: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    rng
}

fn pick(cumulative: &[f64], u: f64) -> usize {
    let target = u * cumulative.last().copied().unwrap_or(0.0);
    cumulative.partition_point(|&c| c <= target).min(cumulative.len() - 1)
}

/// Monte Carlo `S_RB`: inner syndromes are sampled layer by layer and the
/// outer layer is evaluated exactly for each sample.
pub fn s_rb_stack_mc(stack: &CodeStack, ch: &PauliChannel, samples: usize, seed: u64) -> Result<McEstimate> {
    let layers = &stack.layers;
    if layers.len() < 2 {
        return Ok(McEstimate {
            estimate: s_rb_stack_exact(stack, ch)?,
            std_error: 0.0,
        });
    }
    if samples < 2 {
        return Err(Error::OutOfRange("Monte Carlo needs at least 2 samples".into()));
    }
    for c in layers {
        if c.n > DEFAULT_EXHAUSTIVE_LIMIT {
            return Err(Error::BudgetExceeded {
                what: format!("layer {}", c.name),
                needed: 4f64.powi(c.n as i32),
                budget: 4f64.powi(DEFAULT_EXHAUSTIVE_LIMIT as i32),
            });
        }
    }
    let base = effective_channels(&layers[0], &vec![*ch; layers[0].n])?;
    let cum = base.cumulative();

    fn draw(
        level: usize,
        layers: &[StabilizerCode],
        evs: &mut [TransformEvaluator],
        base: &EffectiveChannelSet,
        cum: &[f64],
        rng: &mut ChaCha8Rng,
    ) -> PauliChannel {
        if level == 0 {
            return base.entries[pick(cum, rng.gen::<f64>())].1;
        }
        let chans: Vec<PauliChannel> = (0..layers[level].n).map(|_| draw(level - 1, layers, evs, base, cum, rng)).collect();
        let table = evs[level].table(&chans);
        let syn: Vec<f64> = (0..table.syndromes())
            .scan(0.0, |acc, s| {
                *acc += table.syndrome_prob(s);
                Some(*acc)
            })
            .collect();
        let s = pick(&syn, rng.gen::<f64>());
        canonical(&table.conditional_channel(s).unwrap_or(PauliChannel::NOISELESS))
    }

    let depth = layers.len();
    let values: Vec<f64> = (0..samples)
        .into_par_iter()
        .map_init(
            || layers.iter().map(TransformEvaluator::new).collect::<Vec<_>>(),
            |evs, i| {
                let mut rng = sample_rng(seed, i as u64);
                let outer = &layers[depth - 1];
                let chans: Vec<PauliChannel> =
                    (0..outer.n).map(|_| draw(depth - 2, layers, evs, &base, &cum, &mut rng)).collect();
                evs[depth - 1].s_rb(&chans)
            },
        )
        .collect();
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(McEstimate {
        estimate: mean,
        std_error: (var / n).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ChannelFamily;
    use crate::code::registry_get;

    fn depol(p: f64) -> PauliChannel {
        ChannelFamily::Depolarizing.eval(p).unwrap()
    }

    #[test]
    fn grammar_round_trips() {
        let s: CodeStack = "5repZ x biased9".parse().unwrap();
        assert_eq!(s.layers.len(), 2);
        assert_eq!(s.to_string(), "5repZ x biased9");
        assert_eq!(s.length(), 45);
        let s: CodeStack = "repX(5) × 5qubit x 5repZ".parse().unwrap();
        assert_eq!(s.to_string(), "5repX x 5qubit x 5repZ");
        assert_eq!(s.to_string().parse::<CodeStack>().unwrap(), s);
        let empty: CodeStack = "".parse().unwrap();
        assert_eq!((empty.length(), empty.k()), (1, 1));
        assert!("5repZ x ".parse::<CodeStack>().is_err());
        assert!("nosuch x 5qubit".parse::<CodeStack>().is_err());
        assert!("422 x 5qubit".parse::<CodeStack>().is_err());
        assert!("5qubit x 422".parse::<CodeStack>().is_ok());
    }

    #[test]
    fn rep3_collapses_to_two_groups() {
        let code = registry_get("repZ(3)").unwrap();
        let set = effective_channels(&code, &vec![depol(0.05); 3]).unwrap();
        assert_eq!(set.entries.len(), 2);
        assert!((set.total() - 1.0).abs() < 1e-12);
        // trivial syndrome: X pattern 000 or 111
        let x = 1.0 - 3.0 * 0.05;
        let trivial = (x + 0.05f64).powi(3) + (2.0f64 * 0.05).powi(3);
        assert!(set.entries.iter().any(|(w, _)| (w - trivial).abs() < 1e-14));
    }

    #[test]
    fn noiseless_single_entry() {
        let code = registry_get("5qubit").unwrap();
        let set = effective_channels(&code, &[PauliChannel::NOISELESS; 5]).unwrap();
        assert_eq!(set.entries, vec![(1.0, PauliChannel::NOISELESS)]);
    }

    #[test]
    fn five_qubit_groups_match_table() {
        let code = registry_get("5qubit").unwrap();
        let ch = vec![depol(0.07); 5];
        let table = coset_distribution(&code, &ch).unwrap();
        let set = effective_channels(&code, &ch).unwrap();
        // every syndrome lands in the group holding its canonical conditional channel
        for s in 0..16 {
            let c = canonical(&table.conditional_channel(s).unwrap());
            assert!(set.entries.iter().any(|(_, e)| key(e) == key(&c)));
        }
        // the 15 nontrivial syndromes of a perfect code are equivalent under depolarizing noise
        assert_eq!(set.entries.len(), 2);
    }

    #[test]
    fn canonical_translation_invariant() {
        let ch = PauliChannel([0.1, 0.5, 0.15, 0.25]);
        let c = canonical(&ch);
        assert_eq!(c.0, [0.5, 0.1, 0.25, 0.15]);
        for t in [[1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]] {
            let moved = PauliChannel(t.map(|i| ch.0[i]));
            assert_eq!(canonical(&moved), c);
        }
    }

    fn stacks_up_to_12() -> Vec<&'static str> {
        vec![
            "repZ(3) x repX(3)",
            "repX(3) x repZ(3)",
            "repZ(2) x 5qubit",
            "5qubit x repZ(2)",
            "repZ(3) x repX(4)",
            "repZ(4) x repZ(3)",
            "repZ(2) x repX(2) x repZ(3)",
            "repX(3) x 422",
            "repZ(2) x 613H",
            "613H x repX(2)",
            "repZ(2) x repX(3) x repZ(2)",
            "repX(3) x repZ(2) x repX(2)",
        ]
    }

    #[test]
    fn composition_matches_flat_code() {
        for spec in stacks_up_to_12() {
            let stack: CodeStack = spec.parse().unwrap();
            let flat = stack.flat_code().unwrap();
            assert_eq!(flat.n, stack.length());
            for ch in [depol(0.06), ChannelFamily::IndependentXZ.eval(0.1).unwrap(), PauliChannel([0.8, 0.03, 0.07, 0.1])] {
                let a = s_rb_stack_exact(&stack, &ch).unwrap();
                let b = s_rb_exact(&coset_distribution(&flat, &vec![ch; flat.n]).unwrap());
                assert!((a - b).abs() < 1e-9, "{spec}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn composition_matches_flat_transform_on_larger_stacks() {
        let ch = PauliChannel([0.9, 0.02, 0.03, 0.05]);
        for spec in ["repZ(3) x steane", "repX(4) x 5qubit", "5qubit x repZ(3)"] {
            let stack: CodeStack = spec.parse().unwrap();
            let flat = stack.flat_code().unwrap();
            let table = crate::exact::coset_distribution_transform(&flat, &vec![ch; flat.n]).unwrap();
            let want = s_rb_exact(&table);
            let got = s_rb_stack_exact(&stack, &ch).unwrap();
            assert!((got - want).abs() < 1e-10, "{spec}: {got} vs {want}");
        }
    }

    #[test]
    fn grouping_does_not_change_values() {
        let ch = PauliChannel([0.85, 0.02, 0.05, 0.08]);
        for spec in ["repZ(3) x repX(3)", "repZ(2) x 5qubit", "repZ(2) x repX(2) x repZ(3)"] {
            let stack: CodeStack = spec.parse().unwrap();
            let a = s_rb_stack_exact(&stack, &ch).unwrap();
            let b = s_rb_stack_exact_with(&stack, &ch, &ExactOptions { grouping: false, budget: 1e8 }).unwrap();
            assert!((a - b).abs() < 1e-12, "{spec}");
        }
    }

    #[test]
    fn agrees_with_closed_form_reps() {
        let ch = depol(0.0635);
        let stack: CodeStack = "repZ(5) x repX(5)".parse().unwrap();
        let a = s_rb_stack_exact(&stack, &ch).unwrap();
        let b = crate::rep::s_rb_rep_typed(5, 5, RepType::Z, &ch).unwrap();
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn zero_and_single_layers() {
        let ch = depol(0.05);
        let empty: CodeStack = "".parse().unwrap();
        assert_eq!(s_rb_stack_exact(&empty, &ch).unwrap(), ch.entropy());
        let long: CodeStack = "repZ(40)".parse().unwrap();
        let v = s_rb_stack_exact(&long, &ch).unwrap();
        assert!(v > 0.0 && v < 40.0);
    }

    #[test]
    fn budget_is_enforced() {
        let stack: CodeStack = "repZ(5) x biased9".parse().unwrap();
        let r = s_rb_stack_exact_with(&stack, &depol(0.06), &ExactOptions { grouping: true, budget: 100.0 });
        assert!(matches!(r, Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn mc_matches_exact_and_is_deterministic() {
        let stack: CodeStack = "repZ(3) x repX(3)".parse().unwrap();
        let ch = depol(0.06);
        let exact = s_rb_stack_exact(&stack, &ch).unwrap();
        let mc = s_rb_stack_mc(&stack, &ch, 100_000, 7).unwrap();
        assert!((mc.estimate - exact).abs() < 3.0 * mc.std_error, "{mc:?} vs {exact}");
        assert_eq!(mc, s_rb_stack_mc(&stack, &ch, 100_000, 7).unwrap());
        let zero = s_rb_stack_mc(&stack, &PauliChannel::NOISELESS, 1000, 1).unwrap();
        assert_eq!((zero.estimate, zero.std_error), (0.0, 0.0));
    }

    #[test]
    fn mc_error_halves_with_four_times_samples() {
        let stack: CodeStack = "repZ(3) x 5qubit".parse().unwrap();
        let ch = depol(0.063);
        let a = s_rb_stack_mc(&stack, &ch, 20_000, 3).unwrap();
        let b = s_rb_stack_mc(&stack, &ch, 80_000, 3).unwrap();
        let ratio = a.std_error / b.std_error;
        assert!((ratio - 2.0).abs() < 0.2, "{ratio}");
    }
}
