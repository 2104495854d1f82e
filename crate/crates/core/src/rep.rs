//! Closed-form coset enumerators of repetition codes and of two-level
//! concatenated bit/phase-flip repetition codes, for arbitrary Pauli channels.
//!
//! A Z-type block of length `n` has stabilizer cosets labelled by the X pattern
//! of the error (weight `k`) and the parity `b` of its Z component:
//!
//! ```text
//! h^b_{k,n} = ½[(p_X+p_Y)^k (p_I+p_Z)^{n-k} + (-1)^b (p_X-p_Y)^k (p_I-p_Z)^{n-k}]
//! ```
//!
//! X-type blocks exchange the roles of X and Z. In the `n × m` construction the
//! inner blocks are X-type and the outer layer is a Z-type code on the block
//! logicals.

use rayon::prelude::*;

use crate::channel::PauliChannel;
use crate::code::RepType;
use crate::error::{Error, Result};

/// Default cap on the number of grouped coset classes summed by [`s_rb_rep`].
pub const DEFAULT_REP_BUDGET: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FghKind {
    /// `f^e_n = ((x+y)^n + (x-y)^n) / 2`
    Even,
    /// `f^o_n = ((x+y)^n - (x-y)^n) / 2`
    Odd,
    /// `g_{k,n} = ½ (x+y)^{n-k} (2y)^k`
    G,
}

pub fn fgh_eval(kind: FghKind, n: u32, k: u32, x: f64, y: f64) -> f64 {
    assert!(k <= n);
    match kind {
        FghKind::Even => 0.5 * ((x + y).powi(n as i32) + (x - y).powi(n as i32)),
        FghKind::Odd => 0.5 * ((x + y).powi(n as i32) - (x - y).powi(n as i32)),
        FghKind::G => 0.5 * (x + y).powi((n - k) as i32) * (2.0 * y).powi(k as i32),
    }
}

/// `F^e(x⃗, y⃗)`: sum over choices with an even number of `y` factors.
pub fn f_even_vec(x: &[f64], y: &[f64]) -> f64 {
    0.5 * (x.iter().zip(y).map(|(a, b)| a + b).product::<f64>() + x.iter().zip(y).map(|(a, b)| a - b).product::<f64>())
}

/// `F^o(x⃗, y⃗)`: sum over choices with an odd number of `y` factors.
pub fn f_odd_vec(x: &[f64], y: &[f64]) -> f64 {
    0.5 * (x.iter().zip(y).map(|(a, b)| a + b).product::<f64>() - x.iter().zip(y).map(|(a, b)| a - b).product::<f64>())
}

/// Stabilizer-coset probabilities of one repetition block.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockTable {
    pub n: usize,
    pub stabilizer_type: RepType,
    /// `h[k][b]` for `k = 0..=n`.
    pub h: Vec<[f64; 2]>,
    /// `C(n, k)`.
    pub multiplicity: Vec<f64>,
}

impl BlockTable {
    pub fn get(&self, k: usize, b: usize) -> f64 {
        self.h[k][b]
    }

    pub fn total(&self) -> f64 {
        self.h.iter().zip(&self.multiplicity).map(|(h, c)| c * (h[0] + h[1])).sum()
    }
}

pub fn binomial(n: usize, k: usize) -> f64 {
    (0..k.min(n - k)).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub fn block_table(n: usize, stabilizer_type: RepType, ch: &PauliChannel) -> BlockTable {
    assert!(n >= 1);
    let [pi, px, py, pz] = ch.0;
    // (toggled letter, its partner) for the block type
    let (t, s) = match stabilizer_type {
        RepType::Z => (px, pz),
        RepType::X => (pz, px),
    };
    let h = (0..=n)
        .map(|k| {
            let (k, r) = (k as i32, (n - k) as i32);
            let even = (t + py).powi(k) * (pi + s).powi(r);
            let odd = (t - py).powi(k) * (pi - s).powi(r);
            [(0.5 * (even + odd)).max(0.0), (0.5 * (even - odd)).max(0.0)]
        })
        .collect();
    BlockTable {
        n,
        stabilizer_type,
        h,
        multiplicity: (0..=n).map(|k| binomial(n, k)).collect(),
    }
}

/// `S_RB` (bits) of a single repetition block. A normalizer coset holds the
/// patterns of weight `k` and `n - k`, split by parity into four stabilizer
/// cosets.
pub fn s_rb_block(n: usize, stabilizer_type: RepType, ch: &PauliChannel) -> f64 {
    let t = block_table(n, stabilizer_type, ch);
    (0..=n)
        .map(|k| {
            let cell = [t.get(k, 0), t.get(k, 1), t.get(n - k, 0), t.get(n - k, 1)];
            let pt: f64 = cell.iter().sum();
            0.5 * t.multiplicity[k] * pt * crate::channel::conditional_entropy_bits(&cell, pt)
        })
        .sum()
}

/// `(P_S, P_{S Z̄}, P_{S X̄}, P_{S Ȳ})` for the `n × m` code (inner X-type
/// blocks, outer Z-type) at the coset of a representative with per-block
/// Z weight `kvec[i]` and X parity `bvec[i]`.
pub fn concat_rep_coset_probs(n: usize, m: usize, ch: &PauliChannel, kvec: &[usize], bvec: &[u8]) -> Result<[f64; 4]> {
    for len in [kvec.len(), bvec.len()] {
        if len != m {
            return Err(Error::LengthMismatch { expected: m, found: len });
        }
    }
    if kvec.iter().any(|&k| k > n) || bvec.iter().any(|&b| b > 1) {
        return Err(Error::OutOfRange("block weight above n or parity above 1".into()));
    }
    let t = block_table(n, RepType::X, ch);
    let pick = |flip: usize| -> (Vec<f64>, Vec<f64>) {
        kvec.iter()
            .zip(bvec)
            .map(|(&k, &b)| {
                let b = b as usize ^ flip;
                (t.get(k, b), t.get(n - k, b))
            })
            .unzip()
    };
    let (hk, hnk) = pick(0);
    let (ck, cnk) = pick(1);
    Ok([f_even_vec(&hk, &hnk), f_odd_vec(&hk, &hnk), f_even_vec(&ck, &cnk), f_odd_vec(&ck, &cnk)])
}

/// Binary entropy of `(1+q)/2` in bits.
fn h2_sym(q: f64) -> f64 {
    let a = (0.5 * (1.0 + q)).clamp(0.0, 1.0);
    let b = (0.5 * (1.0 - q)).clamp(0.0, 1.0);
    let t = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    t(a) + t(b)
}

fn h2(a: f64) -> f64 {
    h2_sym(2.0 * a - 1.0)
}

/// Per-type quantities of the grouped sum.
#[derive(Clone, Copy)]
struct BlockType {
    /// `ln(C(n,k) · merge factor)`
    ln_count: f64,
    /// `ln(h^b_k + h^b_{n-k})`
    ln_a: f64,
    /// `ln(h^{1-b}_k + h^{1-b}_{n-k})`
    ln_b: f64,
    /// `(h^b_k - h^b_{n-k}) / (h^b_k + h^b_{n-k})`
    q_a: f64,
    q_b: f64,
}

fn block_types(n: usize, ch: &PauliChannel, reduce: bool) -> Vec<BlockType> {
    let t = block_table(n, RepType::X, ch);
    let ratio = |d: f64, s: f64| if s > 0.0 { (d / s).clamp(-1.0, 1.0) } else { 0.0 };
    let ks: Vec<usize> = if reduce { (0..=n / 2).collect() } else { (0..=n).collect() };
    let mut out = Vec::new();
    for &k in &ks {
        // (k, b) and (n-k, b) only differ by the sign of both ratios, which the entropy ignores
        let merge = if reduce && 2 * k != n { 2.0 } else { 1.0 };
        for b in 0..2 {
            let (sa, da) = (t.get(k, b) + t.get(n - k, b), t.get(k, b) - t.get(n - k, b));
            let (sb, db) = (t.get(k, 1 - b) + t.get(n - k, 1 - b), t.get(k, 1 - b) - t.get(n - k, 1 - b));
            out.push(BlockType {
                ln_count: (t.multiplicity[k] * merge).ln(),
                ln_a: sa.ln(),
                ln_b: sb.ln(),
                q_a: ratio(da, sa),
                q_b: ratio(db, sb),
            });
        }
    }
    out
}

/// Number of block-type multisets `C(m + T - 1, T - 1)` summed by [`s_rb_rep`].
pub fn rep_class_count(n: usize, m: usize) -> f64 {
    let types = 2 * (n / 2 + 1);
    binomial(m + types - 1, types - 1)
}

/// Exact `S_RB` (bits) of the `n × m` concatenated repetition code (inner
/// X-type blocks of length `n`, outer Z-type of length `m`).
pub fn s_rb_rep(n: usize, m: usize, ch: &PauliChannel) -> Result<f64> {
    s_rb_rep_with_budget(n, m, ch, DEFAULT_REP_BUDGET)
}

pub fn s_rb_rep_with_budget(n: usize, m: usize, ch: &PauliChannel, budget: f64) -> Result<f64> {
    let needed = rep_class_count(n, m);
    if needed > budget {
        return Err(Error::BudgetExceeded {
            what: format!("grouped {n} x {m} repetition enumeration"),
            needed,
            budget,
        });
    }
    Ok(grouped_sum(n, m, ch, true))
}

/// `S_RB` with the inner blocks of the given stabilizer type; the outer layer
/// has the opposite type.
pub fn s_rb_rep_typed(n: usize, m: usize, inner: RepType, ch: &PauliChannel) -> Result<f64> {
    match inner {
        RepType::X => s_rb_rep(n, m, ch),
        RepType::Z => s_rb_rep(n, m, &ch.swap_xz()),
    }
}

/// Sum over multisets of block types. Each normalizer coset is represented by
/// `2^{m+1}` labelled `(k⃗, b⃗)` tuples, and contributes `P_N · H(cond)` where
/// the conditional distribution over `(S, SZ̄, SX̄, SȲ)` is
/// `(a(1+q)/2, a(1-q)/2, (1-a)(1+q')/2, (1-a)(1-q')/2)`.
fn grouped_sum(n: usize, m: usize, ch: &PauliChannel, reduce: bool) -> f64 {
    let types = block_types(n, ch, reduce);
    let ln_fact: Vec<f64> = std::iter::once(0.0)
        .chain((1..=m).scan(0.0, |acc, i| {
            *acc += (i as f64).ln();
            Some(*acc)
        }))
        .collect();
    let base = ln_fact[m] - (m as f64 + 1.0) * std::f64::consts::LN_2;

    struct Ctx<'a> {
        types: &'a [BlockType],
        ln_fact: &'a [f64],
        base: f64,
    }
    #[derive(Clone, Copy)]
    struct Acc {
        ln_w: f64,
        ln_a: f64,
        ln_b: f64,
        q_a: f64,
        q_b: f64,
    }
    fn leaf(acc: Acc) -> f64 {
        if acc.ln_a == f64::NEG_INFINITY && acc.ln_b == f64::NEG_INFINITY {
            return 0.0;
        }
        let hi = acc.ln_a.max(acc.ln_b);
        let ln_pn = hi + (-(acc.ln_a - acc.ln_b).abs()).exp().ln_1p();
        let a = 1.0 / (1.0 + (acc.ln_b - acc.ln_a).exp());
        let h = h2(a) + a * h2_sym(acc.q_a) + (1.0 - a) * h2_sym(acc.q_b);
        (acc.ln_w + ln_pn).exp() * h
    }
    fn rec(ctx: &Ctx, t: usize, left: usize, acc: Acc) -> f64 {
        if t + 1 == ctx.types.len() {
            return leaf(push(ctx, t, left, acc));
        }
        (0..=left).map(|c| rec(ctx, t + 1, left - c, push(ctx, t, c, acc))).sum()
    }
    fn push(ctx: &Ctx, t: usize, c: usize, acc: Acc) -> Acc {
        if c == 0 {
            return acc;
        }
        let ty = &ctx.types[t];
        let cf = c as f64;
        Acc {
            ln_w: acc.ln_w + cf * ty.ln_count - ctx.ln_fact[c],
            ln_a: acc.ln_a + cf * ty.ln_a,
            ln_b: acc.ln_b + cf * ty.ln_b,
            q_a: acc.q_a * ty.q_a.powi(c as i32),
            q_b: acc.q_b * ty.q_b.powi(c as i32),
        }
    }

    let ctx = Ctx {
        types: &types,
        ln_fact: &ln_fact,
        base,
    };
    let start = Acc {
        ln_w: ctx.base,
        ln_a: 0.0,
        ln_b: 0.0,
        q_a: 1.0,
        q_b: 1.0,
    };
    if types.len() == 1 {
        return leaf(push(&ctx, 0, m, start));
    }
    (0..=m)
        .into_par_iter()
        .map(|c| rec(&ctx, 1, m - c, push(&ctx, 0, c, start)))
        .sum()
}
