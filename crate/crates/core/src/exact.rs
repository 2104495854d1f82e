//! Exact coset probabilities of a stabilizer code under independent,
//! per-qubit Pauli channels, and the reference-plus-output entropy `S_RB`.
//!
//! Every error `e` is addressed by its commutation bits with the (independent)
//! generators and the logical operators. Flipping one letter of `e` toggles a
//! fixed bit mask, so the cell of `e` is the XOR of per-qubit masks. Two
//! evaluation routes are provided:
//!
//! * [`coset_distribution`] enumerates all `4^n` errors. Qubits are split into
//!   a prefix and a precomputed suffix block; each prefix contributes one pass
//!   over the suffix table, so the cost per error is a multiply, an XOR and a
//!   compensated add. Prefix ranges run in parallel and are merged by addition.
//! * [`coset_distribution_transform`] computes the same table as an XOR
//!   convolution of the per-qubit four-point distributions through a
//!   Walsh-Hadamard transform in `O((n + r) 2^r)` for `r = n + k` bits.

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::channel::{conditional_entropy_bits, entropy_bits, PauliChannel};
use crate::code::StabilizerCode;
use crate::error::{Error, Result};

/// Largest `n` accepted by the exhaustive route by default (`4^13 ≈ 6.7e7`).
pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 13;

/// Normalizer-coset probabilities, each split into `4^k` stabilizer cosets.
#[derive(Debug, Clone, PartialEq)]
pub struct CosetTable {
    pub code_name: String,
    pub k: usize,
    /// `probs[s * 4^k + l]`: syndrome `s`, logical class `l` in base 4 with
    /// digit `j` the `(I, X, Y, Z)` index of logical qubit `j`.
    pub probs: Vec<f64>,
}

impl CosetTable {
    pub fn classes(&self) -> usize {
        1 << (2 * self.k)
    }

    pub fn syndromes(&self) -> usize {
        self.probs.len() / self.classes()
    }

    /// Stabilizer-coset probabilities within syndrome `s`.
    pub fn coset(&self, s: usize) -> &[f64] {
        let c = self.classes();
        &self.probs[s * c..(s + 1) * c]
    }

    /// Normalizer-coset probability `P_T` of syndrome `s`.
    pub fn syndrome_prob(&self, s: usize) -> f64 {
        self.coset(s).iter().sum()
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Conditional logical channel `(P_{T_Ī}, P_{T_X̄}, P_{T_Ȳ}, P_{T_Z̄}) / P_T` for `k = 1`.
    pub fn conditional_channel(&self, s: usize) -> Option<PauliChannel> {
        assert_eq!(self.k, 1, "conditional channels need k = 1");
        let c = self.coset(s);
        let t: f64 = c.iter().sum();
        (t > 0.0).then(|| PauliChannel([c[0] / t, c[1] / t, c[2] / t, c[3] / t]))
    }

    /// JSON dump keyed by syndrome in hex.
    pub fn to_json(&self) -> Value {
        let width = (self.syndromes().max(2) - 1).ilog2() as usize / 4 + 1;
        let cosets: Map<String, Value> = (0..self.syndromes())
            .map(|s| (format!("{s:0width$x}"), json!(self.coset(s))))
            .collect();
        json!({ "code": self.code_name, "k": self.k, "cosets": cosets })
    }
}

/// `S_RB` in bits: `Σ_T P_T · H(stabilizer cosets of T / P_T)`.
pub fn s_rb_exact(table: &CosetTable) -> f64 {
    (0..table.syndromes())
        .map(|s| {
            let c = table.coset(s);
            let t: f64 = c.iter().sum();
            t * conditional_entropy_bits(c, t)
        })
        .sum()
}

/// `S_RB` as stabilizer-coset entropy minus normalizer-coset entropy.
pub fn s_rb_entropy_difference(table: &CosetTable) -> f64 {
    let norm: Vec<f64> = (0..table.syndromes()).map(|s| table.syndrome_prob(s)).collect();
    entropy_bits(&table.probs) - entropy_bits(&norm)
}

/// Per-qubit toggle masks `(X, Y, Z)` over the check bits, plus the map from
/// mask to table index.
struct CheckLayout {
    masks: Vec<[u32; 3]>,
    bits: usize,
    cell_of_mask: Vec<u32>,
}

impl CheckLayout {
    fn new(code: &StabilizerCode) -> Self {
        let ops = code.check_operators();
        let bits = ops.len();
        assert!(bits < 31, "too many check bits");
        let masks = (0..code.n)
            .map(|i| {
                let (mut mx, mut mz) = (0u32, 0u32);
                for (b, op) in ops.iter().enumerate() {
                    // an X on qubit i anticommutes with a check that has z there
                    if op.z_bit(i) {
                        mx |= 1 << b;
                    }
                    if op.x_bit(i) {
                        mz |= 1 << b;
                    }
                }
                [mx, mx ^ mz, mz]
            })
            .collect();
        let r_s = code.n - code.k;
        let cell_of_mask = (0..1u32 << bits)
            .map(|m| {
                let syn = m & ((1 << r_s) - 1);
                let mut logical = 0u32;
                for j in 0..code.k {
                    let xb = (m >> (r_s + 2 * j)) & 1;
                    let zb = (m >> (r_s + 2 * j + 1)) & 1;
                    let digit = match (xb, zb) {
                        (0, 0) => 0,
                        (1, 0) => 1,
                        (1, 1) => 2,
                        _ => 3,
                    };
                    logical |= digit << (2 * j);
                }
                (syn << (2 * code.k)) | logical
            })
            .collect();
        CheckLayout {
            masks,
            bits,
            cell_of_mask,
        }
    }

    fn to_table(&self, code: &StabilizerCode, by_mask: &[f64]) -> CosetTable {
        let mut probs = vec![0.0; by_mask.len()];
        for (m, &p) in by_mask.iter().enumerate() {
            probs[self.cell_of_mask[m] as usize] = p;
        }
        CosetTable {
            code_name: code.name.clone(),
            k: code.k,
            probs,
        }
    }
}

fn check_channels(code: &StabilizerCode, channels: &[PauliChannel]) -> Result<()> {
    if channels.len() != code.n {
        return Err(Error::LengthMismatch {
            expected: code.n,
            found: channels.len(),
        });
    }
    Ok(())
}

/// Exhaustive coset table with the default size limit.
pub fn coset_distribution(code: &StabilizerCode, channels: &[PauliChannel]) -> Result<CosetTable> {
    coset_distribution_with_limit(code, channels, DEFAULT_EXHAUSTIVE_LIMIT)
}

/// Accumulator with Neumaier compensation per cell.
struct Accumulator {
    sum: Vec<f64>,
    comp: Vec<f64>,
}

impl Accumulator {
    fn new(len: usize) -> Self {
        Accumulator {
            sum: vec![0.0; len],
            comp: vec![0.0; len],
        }
    }

    #[inline(always)]
    fn add(&mut self, i: usize, v: f64) {
        let s = self.sum[i];
        let t = s + v;
        self.comp[i] += if s.abs() >= v.abs() { (s - t) + v } else { (v - t) + s };
        self.sum[i] = t;
    }

    fn merge(mut self, other: Accumulator) -> Accumulator {
        for i in 0..self.sum.len() {
            self.add(i, other.sum[i]);
            self.comp[i] += other.comp[i];
        }
        self
    }

    fn finish(self) -> Vec<f64> {
        self.sum.iter().zip(&self.comp).map(|(s, c)| s + c).collect()
    }
}

/// Exhaustive coset table; errors when `code.n > limit`.
pub fn coset_distribution_with_limit(
    code: &StabilizerCode,
    channels: &[PauliChannel],
    limit: usize,
) -> Result<CosetTable> {
    check_channels(code, channels)?;
    if code.n > limit {
        return Err(Error::BudgetExceeded {
            what: format!("exhaustive enumeration of {}", code.name),
            needed: 4f64.powi(code.n as i32),
            budget: 4f64.powi(limit as i32),
        });
    }
    let layout = CheckLayout::new(code);
    let n = code.n;
    let suffix_len = n.min(6);
    let prefix_len = n - suffix_len;

    // suffix block: qubits prefix_len..n
    let mut suffix: Vec<(u32, f64)> = vec![(0, 1.0)];
    for i in prefix_len..n {
        let ch = &channels[i].0;
        let m = layout.masks[i];
        suffix = suffix
            .iter()
            .flat_map(|&(mask, p)| {
                [
                    (mask, p * ch[0]),
                    (mask ^ m[0], p * ch[1]),
                    (mask ^ m[1], p * ch[2]),
                    (mask ^ m[2], p * ch[3]),
                ]
            })
            .collect();
    }
    suffix.retain(|&(_, p)| p != 0.0);

    let cells = 1usize << layout.bits;
    let prefixes = 1usize << (2 * prefix_len);
    let chunk = (prefixes / (4 * rayon::current_num_threads()).max(1)).max(1);
    let acc = (0..prefixes)
        .into_par_iter()
        .with_min_len(chunk)
        .fold(
            || Accumulator::new(cells),
            |mut acc, idx| {
                let (mut mask, mut p) = (0u32, 1.0f64);
                for i in 0..prefix_len {
                    let letter = (idx >> (2 * i)) & 3;
                    p *= channels[i].0[letter];
                    if letter > 0 {
                        mask ^= layout.masks[i][letter - 1];
                    }
                }
                if p != 0.0 {
                    for &(sm, sp) in &suffix {
                        acc.add((mask ^ sm) as usize, p * sp);
                    }
                }
                acc
            },
        )
        .reduce(|| Accumulator::new(cells), Accumulator::merge);
    Ok(layout.to_table(code, &acc.finish()))
}

/// Coset table through the Walsh-Hadamard transform.
pub fn coset_distribution_transform(
    code: &StabilizerCode,
    channels: &[PauliChannel],
) -> Result<CosetTable> {
    check_channels(code, channels)?;
    let layout = CheckLayout::new(code);
    let mut spectrum = vec![0.0f64; 1 << layout.bits];
    spectrum_into(&layout.masks, channels, &mut spectrum);
    let by_mask = inverse_transform(spectrum);
    Ok(layout.to_table(code, &by_mask))
}

/// `F(u) = Π_i (p_I + p_X χ_u(m_X) + p_Y χ_u(m_Y) + p_Z χ_u(m_Z))`, `χ_u(m) = (-1)^{|u & m|}`.
fn spectrum_into(masks: &[[u32; 3]], channels: &[PauliChannel], out: &mut [f64]) {
    let sign = |u: u32, m: u32| if (u & m).count_ones() & 1 == 0 { 1.0 } else { -1.0 };
    for (u, slot) in out.iter_mut().enumerate() {
        let u = u as u32;
        let mut prod = 1.0;
        for (m, ch) in masks.iter().zip(channels) {
            let c = &ch.0;
            prod *= c[0] + c[1] * sign(u, m[0]) + c[2] * sign(u, m[1]) + c[3] * sign(u, m[2]);
        }
        *slot = prod;
    }
}

fn inverse_transform(mut v: Vec<f64>) -> Vec<f64> {
    fwht(&mut v);
    let scale = 1.0 / v.len() as f64;
    // clamp rounding noise on cells that are exactly or nearly empty
    v.iter_mut().for_each(|x| *x = (*x * scale).max(0.0));
    v
}

/// In-place unnormalized fast Walsh-Hadamard transform.
pub(crate) fn fwht(v: &mut [f64]) {
    let n = v.len();
    let mut h = 1;
    while h < n {
        for block in v.chunks_mut(2 * h) {
            let (a, b) = block.split_at_mut(h);
            for (x, y) in a.iter_mut().zip(b.iter_mut()) {
                let (s, d) = (*x + *y, *x - *y);
                *x = s;
                *y = d;
            }
        }
        h *= 2;
    }
}

/// Reusable transform evaluator for one code: many `S_RB` evaluations under
/// per-qubit channels drawn from a small set of candidates.
pub struct TransformEvaluator {
    layout: CheckLayout,
    k: usize,
    r_s: usize,
    name: String,
    /// Per `u`: the parities `(u·m_X, u·m_Z)` of every qubit, two bits each.
    parities: Vec<u64>,
    work: Vec<f64>,
}

impl TransformEvaluator {
    pub fn new(code: &StabilizerCode) -> Self {
        assert!(code.n <= 32, "evaluator packs two parity bits per qubit into 64 bits");
        let layout = CheckLayout::new(code);
        let size = 1usize << layout.bits;
        let per_bit: Vec<u64> = (0..layout.bits)
            .map(|b| {
                layout.masks.iter().enumerate().fold(0u64, |acc, (i, m)| {
                    let bx = ((m[0] >> b) & 1) as u64;
                    let bz = ((m[2] >> b) & 1) as u64;
                    acc | (bx << (2 * i)) | (bz << (2 * i + 1))
                })
            })
            .collect();
        let mut parities = vec![0u64; size];
        for u in 1..size {
            parities[u] = parities[u & (u - 1)] ^ per_bit[u.trailing_zeros() as usize];
        }
        TransformEvaluator {
            layout,
            k: code.k,
            r_s: code.n - code.k,
            name: code.name.clone(),
            parities,
            work: vec![0.0; size],
        }
    }

    /// Fills `work` with the coset probabilities indexed by check mask.
    fn transform(&mut self, channels: &[PauliChannel]) {
        assert_eq!(channels.len(), self.layout.masks.len());
        // factor of qubit i for parities (bx, bz); the Y mask is X ^ Z
        let factors: Vec<[f64; 4]> = channels
            .iter()
            .map(|ch| {
                let [i, x, y, z] = ch.0;
                [i + x + y + z, i - x - y + z, i + x - y - z, i - x + y - z]
            })
            .collect();
        for (slot, &par) in self.work.iter_mut().zip(&self.parities) {
            let mut prod = 1.0;
            for (q, f) in factors.iter().enumerate() {
                prod *= f[((par >> (2 * q)) & 3) as usize];
            }
            *slot = prod;
        }
        fwht(&mut self.work);
        let scale = 1.0 / self.work.len() as f64;
        self.work.iter_mut().for_each(|x| *x = (*x * scale).max(0.0));
    }

    pub fn table(&mut self, channels: &[PauliChannel]) -> CosetTable {
        self.transform(channels);
        let mut probs = vec![0.0; self.work.len()];
        for (m, x) in self.work.iter().enumerate() {
            probs[self.layout.cell_of_mask[m] as usize] = *x;
        }
        CosetTable {
            code_name: self.name.clone(),
            k: self.k,
            probs,
        }
    }

    pub fn s_rb(&mut self, channels: &[PauliChannel]) -> f64 {
        self.transform(channels);
        // masks sharing the low syndrome bits form one normalizer coset
        let syndromes = 1usize << self.r_s;
        let mut total = 0.0;
        for s in 0..syndromes {
            let cell = self.work[s..].iter().step_by(syndromes);
            let t: f64 = cell.clone().sum();
            if t > 0.0 {
                total += cell.filter(|&&p| p > 0.0).map(|&p| -p * (p / t).log2()).sum::<f64>();
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ChannelFamily;
    use crate::code::{registry_get, registry_names};
    use crate::pauli::{Letter, PauliString};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Oracle: classify every Pauli string individually through `classify`.
    fn brute_force(code: &StabilizerCode, ch: &[PauliChannel]) -> Vec<f64> {
        let classes = 1usize << (2 * code.k);
        let gens = code.independent_generators();
        let mut out = vec![0.0; (1 << gens.len()) * classes];
        for idx in 0..1usize << (2 * code.n) {
            let letters: Vec<Letter> = (0..code.n).map(|i| Letter::ALL[(idx >> (2 * i)) & 3]).collect();
            let e = PauliString::from_letters(&letters);
            let p: f64 = letters.iter().zip(ch).map(|(l, c)| c.prob(*l)).product();
            let syn = gens
                .iter()
                .enumerate()
                .map(|(b, g)| (e.anticommutes(g).unwrap() as usize) << b)
                .sum::<usize>();
            let cls = code.classify(&e).unwrap();
            let logical: usize = cls
                .logical_letters()
                .iter()
                .enumerate()
                .map(|(j, l)| l.index() << (2 * j))
                .sum();
            out[syn * classes + logical] += p;
        }
        out
    }

    fn random_channel(rng: &mut ChaCha8Rng) -> PauliChannel {
        let v: [f64; 4] = std::array::from_fn(|_| rng.gen::<f64>());
        let s: f64 = v.iter().sum();
        PauliChannel(v.map(|x| x / s))
    }

    #[test]
    fn engines_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for name in ["3repZ", "5qubit", "422", "613H", "scfH", "repX(4)"] {
            let code = registry_get(name).unwrap();
            let ch: Vec<PauliChannel> = (0..code.n).map(|_| random_channel(&mut rng)).collect();
            let oracle = brute_force(&code, &ch);
            let ex = coset_distribution(&code, &ch).unwrap();
            let tr = coset_distribution_transform(&code, &ch).unwrap();
            for ((a, b), c) in oracle.iter().zip(&ex.probs).zip(&tr.probs) {
                assert!((a - b).abs() < 1e-15, "{name}: {a} vs {b}");
                assert!((a - c).abs() < 1e-14, "{name}: {a} vs {c}");
            }
        }
    }

    #[test]
    fn rep3_identity_coset_closed_form() {
        let code = registry_get("repZ(3)").unwrap();
        let p = 0.05;
        let ch = vec![ChannelFamily::Depolarizing.eval(p).unwrap(); 3];
        let t = coset_distribution(&code, &ch).unwrap();
        let x = 1.0 - 3.0 * p;
        let expected = x.powi(3) + 3.0 * p * p * x;
        assert!((t.coset(0)[0] - expected).abs() < 1e-15);
    }

    #[test]
    fn noiseless_table_is_trivial() {
        for name in registry_names() {
            let code = registry_get(name).unwrap();
            let t = coset_distribution(&code, &vec![PauliChannel::NOISELESS; code.n]).unwrap();
            assert_eq!(t.probs[0], 1.0, "{name}");
            assert_eq!(t.total(), 1.0);
            assert_eq!(s_rb_exact(&t), 0.0);
        }
    }

    #[test]
    fn table_invariants_and_entropy_forms_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for name in registry_names().filter(|n| !["11qubit", "13cyclic", "biased13"].contains(n)) {
            let code = registry_get(name).unwrap();
            let ch: Vec<PauliChannel> = (0..code.n).map(|_| random_channel(&mut rng)).collect();
            let t = coset_distribution(&code, &ch).unwrap();
            assert!((t.total() - 1.0).abs() < 1e-10, "{name}");
            let a = s_rb_exact(&t);
            let b = s_rb_entropy_difference(&t);
            assert!((a - b).abs() < 1e-12, "{name}: {a} vs {b}");
        }
    }

    #[test]
    fn xz_swap_symmetry() {
        for name in ["5qubit", "biased9", "613H", "repZ(3)"] {
            let code = registry_get(name).unwrap();
            let swapped = code.swap_xz();
            for fam in [ChannelFamily::Depolarizing, ChannelFamily::IndependentXZ] {
                let ch = vec![fam.eval(0.07).unwrap(); code.n];
                let a = s_rb_exact(&coset_distribution(&code, &ch).unwrap());
                let b = s_rb_exact(&coset_distribution(&swapped, &ch).unwrap());
                assert!((a - b).abs() < 1e-12, "{name} {fam}");
            }
        }
    }

    #[test]
    fn limit_is_enforced() {
        let code = registry_get("repZ(14)").unwrap();
        let ch = vec![PauliChannel::NOISELESS; 14];
        assert!(matches!(coset_distribution(&code, &ch), Err(Error::BudgetExceeded { .. })));
        assert!(coset_distribution(&code, &ch[..13]).is_err());
        assert!(coset_distribution_transform(&code, &ch).is_ok());
    }

    #[test]
    fn s_rb_is_continuous_near_threshold() {
        let code = registry_get("repZ(5)").unwrap();
        let mut prev = None;
        let mut p = 0.0630;
        while p < 0.0640 {
            let ch = vec![ChannelFamily::Depolarizing.eval(p).unwrap(); 5];
            let s = s_rb_exact(&coset_distribution(&code, &ch).unwrap());
            if let Some(q) = prev {
                assert!((s - q as f64).abs() < 1e-3);
            }
            prev = Some(s);
            p += 1e-5;
        }
    }

    #[test]
    fn json_dump_has_every_syndrome() {
        let code = registry_get("5qubit").unwrap();
        let t = coset_distribution(&code, &vec![ChannelFamily::Depolarizing.eval(0.05).unwrap(); 5]).unwrap();
        let v = t.to_json();
        assert_eq!(v["cosets"].as_object().unwrap().len(), 16);
        assert_eq!(v["cosets"]["0"].as_array().unwrap().len(), 4);
    }
}
