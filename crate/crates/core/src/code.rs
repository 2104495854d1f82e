//! Stabilizer codes: representation, the plain-text code file format,
//! validation, syndrome/logical classification and the bundled registry.
//!
//! Code file format (UTF-8, one record per line, `#` starts a comment):
//!
//! ```text
//! name 5qubit
//! nk 5 1
//! G XZZXI
//! G IXZZX
//! G XIXZZ
//! G ZXIXZ
//! LX XXXXX
//! LZ ZZZZZ
//! ```

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliString};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerCode {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub generators: Vec<PauliString>,
    pub logical_x: Vec<PauliString>,
    pub logical_z: Vec<PauliString>,
    /// `S_RB` is invariant under permuting the per-qubit channels.
    pub permutation_symmetric: bool,
}

/// Result of [`StabilizerCode::classify`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    /// Commutation bit with each generator.
    pub syndrome: Vec<u8>,
    /// `(commutes(e, X̄_j), commutes(e, Z̄_j))` for each logical qubit `j`.
    pub logical: Vec<(u8, u8)>,
}

impl Classification {
    /// Logical Pauli of the stabilizer coset, relative to the representative
    /// commuting with every logical operator. Anticommuting with `Z̄` means an
    /// `X̄` component.
    pub fn logical_letters(&self) -> Vec<Letter> {
        self.logical
            .iter()
            .map(|&(cx, cz)| Letter::from_bits(cz == 1, cx == 1))
            .collect()
    }
}

impl StabilizerCode {
    /// Builds and validates a code.
    pub fn new(
        name: impl Into<String>,
        generators: Vec<PauliString>,
        logical_x: Vec<PauliString>,
        logical_z: Vec<PauliString>,
    ) -> Result<Self> {
        let name = name.into();
        let n = generators
            .first()
            .or(logical_x.first())
            .map(PauliString::len)
            .ok_or_else(|| Error::CodeValidation {
                code: name.clone(),
                msg: "no operators given".into(),
            })?;
        let k = logical_x.len();
        let mut code = StabilizerCode {
            name,
            n,
            k,
            generators,
            logical_x,
            logical_z,
            permutation_symmetric: false,
        };
        code.validate()?;
        Ok(code)
    }

    fn invalid(&self, msg: impl Into<String>) -> Error {
        Error::CodeValidation {
            code: self.name.clone(),
            msg: msg.into(),
        }
    }

    fn validate(&mut self) -> Result<()> {
        let n = self.n;
        if self.k == 0 {
            return Err(self.invalid("no logical operators"));
        }
        if self.logical_z.len() != self.k {
            return Err(self.invalid(format!(
                "{} logical X but {} logical Z operators",
                self.k,
                self.logical_z.len()
            )));
        }
        if self.generators.len() + self.k < n {
            return Err(self.invalid(format!(
                "{} generators and {} logical qubits do not add up to n = {n}",
                self.generators.len(),
                self.k
            )));
        }
        for op in self.all_operators() {
            if op.len() != n {
                return Err(self.invalid(format!("operator {op} has length {}, expected {n}", op.len())));
            }
        }
        for (i, a) in self.generators.iter().enumerate() {
            for b in &self.generators[i + 1..] {
                if a.anticommutes_unchecked(b) {
                    return Err(self.invalid(format!("generators {a} and {b} anticommute")));
                }
            }
        }
        // Printed generator lists may be over-complete (cyclic codes list all shifts).
        if symplectic_rank(&self.generators) != n - self.k {
            return Err(self.invalid(format!(
                "generators have symplectic rank {}, expected n - k = {}",
                symplectic_rank(&self.generators),
                n - self.k
            )));
        }
        for l in self.logical_x.iter().chain(&self.logical_z) {
            if let Some(g) = self.generators.iter().find(|g| g.anticommutes_unchecked(l)) {
                return Err(self.invalid(format!("logical {l} anticommutes with generator {g}")));
            }
        }
        for (i, a) in self.logical_x.iter().enumerate() {
            for b in &self.logical_x[i + 1..] {
                if a.anticommutes_unchecked(b) {
                    return Err(self.invalid(format!("logical X operators {a} and {b} anticommute")));
                }
            }
        }
        for (i, a) in self.logical_z.iter().enumerate() {
            for b in &self.logical_z[i + 1..] {
                if a.anticommutes_unchecked(b) {
                    return Err(self.invalid(format!("logical Z operators {a} and {b} anticommute")));
                }
            }
        }
        self.pair_logicals()
    }

    /// Reorders `logical_z` so that `X̄_i` anticommutes with `Z̄_j` iff `i = j`.
    fn pair_logicals(&mut self) -> Result<()> {
        let k = self.k;
        let mut order: Vec<usize> = Vec::with_capacity(k);
        let mut used = vec![false; k];
        for lx in &self.logical_x {
            let partners: Vec<usize> = (0..k)
                .filter(|&j| lx.anticommutes_unchecked(&self.logical_z[j]))
                .collect();
            match partners[..] {
                [j] if !used[j] => {
                    used[j] = true;
                    order.push(j);
                }
                _ => {
                    return Err(self.invalid(format!(
                        "logical {lx} does not anticommute with exactly one logical Z"
                    )))
                }
            }
        }
        self.logical_z = order.iter().map(|&j| self.logical_z[j].clone()).collect();
        Ok(())
    }

    fn all_operators(&self) -> impl Iterator<Item = &PauliString> {
        self.generators
            .iter()
            .chain(&self.logical_x)
            .chain(&self.logical_z)
    }

    /// A maximal independent subset of the generators, in listed order.
    pub fn independent_generators(&self) -> Vec<&PauliString> {
        let mut kept: Vec<PauliString> = Vec::new();
        let mut out = Vec::new();
        for g in &self.generators {
            kept.push(g.clone());
            if symplectic_rank(&kept) == kept.len() {
                out.push(g);
            } else {
                kept.pop();
            }
        }
        out
    }

    /// Number of classification bits: `n - k` syndrome bits plus `2k` logical bits.
    pub fn check_bits(&self) -> usize {
        self.n + self.k
    }

    /// Operators whose commutation bits address a stabilizer coset, in mask bit order:
    /// generators, then `Z̄_j, X̄_j` for each logical qubit (so the pair of bits
    /// for qubit `j` reads as the `(x, z)` letter bits of its logical class).
    pub(crate) fn check_operators(&self) -> Vec<&PauliString> {
        let mut ops: Vec<&PauliString> = self.independent_generators();
        for j in 0..self.k {
            ops.push(&self.logical_z[j]);
            ops.push(&self.logical_x[j]);
        }
        ops
    }

    pub fn classify(&self, e: &PauliString) -> Result<Classification> {
        if e.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: e.len(),
            });
        }
        Ok(Classification {
            syndrome: self
                .generators
                .iter()
                .map(|g| e.anticommutes_unchecked(g) as u8)
                .collect(),
            logical: (0..self.k)
                .map(|j| {
                    (
                        e.anticommutes_unchecked(&self.logical_x[j]) as u8,
                        e.anticommutes_unchecked(&self.logical_z[j]) as u8,
                    )
                })
                .collect(),
        })
    }

    /// Code with X and Z exchanged in every operator.
    pub fn swap_xz(&self) -> StabilizerCode {
        StabilizerCode {
            name: format!("{}_xz", self.name),
            n: self.n,
            k: self.k,
            generators: self.generators.iter().map(PauliString::swap_xz).collect(),
            // X̄ ↔ Z̄ keeps the pairing; swapping the roles keeps X̄ as the
            // operator that flips the Z̄ eigenvalue.
            logical_x: self.logical_z.iter().map(PauliString::swap_xz).collect(),
            logical_z: self.logical_x.iter().map(PauliString::swap_xz).collect(),
            permutation_symmetric: self.permutation_symmetric,
        }
    }

    /// The code-file text of this code.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "name {}", self.name);
        let _ = writeln!(s, "nk {} {}", self.n, self.k);
        for g in &self.generators {
            let _ = writeln!(s, "G {g}");
        }
        for l in &self.logical_x {
            let _ = writeln!(s, "LX {l}");
        }
        for l in &self.logical_z {
            let _ = writeln!(s, "LZ {l}");
        }
        s
    }

    /// Parses and validates a code file.
    pub fn parse(text: &str) -> Result<StabilizerCode> {
        let mut name = None;
        let mut nk = None;
        let (mut gens, mut lx, mut lz) = (Vec::new(), Vec::new(), Vec::new());
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::CodeParse { line: line_no, msg };
            let mut parts = line.split_whitespace();
            let key = parts.next().unwrap_or_default();
            let rest: Vec<&str> = parts.collect();
            match (key, rest.as_slice()) {
                ("name", [id]) => name = Some(id.to_string()),
                ("nk", [n, k]) => {
                    let n: usize = n.parse().map_err(|_| err(format!("bad n {n:?}")))?;
                    let k: usize = k.parse().map_err(|_| err(format!("bad k {k:?}")))?;
                    nk = Some((n, k));
                }
                ("G" | "LX" | "LZ", [p]) => {
                    let op: PauliString = p.parse().map_err(|e: Error| err(e.to_string()))?;
                    if let Some((n, _)) = nk {
                        if op.len() != n {
                            return Err(err(format!("{p} has length {}, expected {n}", op.len())));
                        }
                    }
                    match key {
                        "G" => gens.push(op),
                        "LX" => lx.push(op),
                        _ => lz.push(op),
                    }
                }
                _ => return Err(err(format!("unrecognized line {line:?}"))),
            }
        }
        let name = name.ok_or(Error::CodeParse {
            line: 0,
            msg: "missing `name` line".into(),
        })?;
        let (n, k) = nk.ok_or(Error::CodeParse {
            line: 0,
            msg: "missing `nk` line".into(),
        })?;
        if lx.len() != k {
            return Err(Error::CodeValidation {
                code: name,
                msg: format!("declared k = {k} but {} LX lines", lx.len()),
            });
        }
        let code = StabilizerCode::new(name, gens, lx, lz)?;
        if code.n != n {
            return Err(Error::CodeValidation {
                code: code.name,
                msg: format!("declared n = {n} but operators have length {}", code.n),
            });
        }
        Ok(code)
    }

    pub fn from_file(path: &Path) -> Result<StabilizerCode> {
        StabilizerCode::parse(&std::fs::read_to_string(path)?)
    }
}

/// Rank over GF(2) of the symplectic vectors `(x | z)`.
pub fn symplectic_rank(ops: &[PauliString]) -> usize {
    let Some(first) = ops.first() else { return 0 };
    let n = first.len();
    let mut rows: Vec<Vec<bool>> = ops
        .iter()
        .map(|p| (0..n).map(|i| p.x_bit(i)).chain((0..n).map(|i| p.z_bit(i))).collect())
        .collect();
    let mut rank = 0;
    for col in 0..2 * n {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col]) else {
            continue;
        };
        rows.swap(rank, piv);
        for r in 0..rows.len() {
            if r != rank && rows[r][col] {
                let pivot = rows[rank].clone();
                for (a, b) in rows[r].iter_mut().zip(pivot) {
                    *a ^= b;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Stabilizer type of a repetition code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RepType {
    /// Z-type stabilizers (detects X errors); `X̄ = X^n`, `Z̄ = Z I^{n-1}`.
    Z,
    /// X-type stabilizers; `X̄ = X I^{n-1}`, `Z̄ = Z^n`.
    X,
}

impl RepType {
    pub fn flip(self) -> RepType {
        match self {
            RepType::Z => RepType::X,
            RepType::X => RepType::Z,
        }
    }
}

/// The `[[n,1]]` repetition code with generators `P_0 P_i` for `i = 1..n`.
pub fn repetition(n: usize, ty: RepType) -> StabilizerCode {
    assert!(n >= 1, "repetition code needs n >= 1");
    let stab = match ty {
        RepType::Z => Letter::Z,
        RepType::X => Letter::X,
    };
    let other = match ty {
        RepType::Z => Letter::X,
        RepType::X => Letter::Z,
    };
    let generators = (1..n)
        .map(|i| {
            let mut g = PauliString::single(n, 0, stab);
            g.set(i, stab);
            g
        })
        .collect();
    let full = PauliString::from_letters(&vec![other; n]);
    let single = PauliString::single(n, 0, stab);
    let (lx, lz) = match ty {
        RepType::Z => (full, single),
        RepType::X => (single, full),
    };
    let mut code = StabilizerCode::new(
        format!("{n}rep{}", match ty { RepType::Z => 'Z', RepType::X => 'X' }),
        generators,
        vec![lx],
        vec![lz],
    )
    .expect("repetition codes are valid");
    code.permutation_symmetric = true;
    code
}

/// The concatenated code `inner × outer`: every outer qubit is one block of
/// `inner`, and outer operators act through the inner logicals. Outer qubit
/// `i` occupies physical qubits `i·n_in .. (i+1)·n_in`.
pub fn concatenate(inner: &StabilizerCode, outer: &StabilizerCode) -> Result<StabilizerCode> {
    if inner.k != 1 {
        return Err(Error::CodeValidation {
            code: inner.name.clone(),
            msg: "only k = 1 codes can be inner layers".into(),
        });
    }
    let (ni, no) = (inner.n, outer.n);
    let lift = |p: &PauliString| {
        let mut out = PauliString::identity(ni * no);
        for (b, l) in p.letters().enumerate() {
            let block = match l {
                Letter::I => continue,
                Letter::X => inner.logical_x[0].clone(),
                Letter::Z => inner.logical_z[0].clone(),
                Letter::Y => inner.logical_x[0].mul(&inner.logical_z[0]).expect("same length"),
            };
            for (i, bl) in block.letters().enumerate() {
                out.set(b * ni + i, bl);
            }
        }
        out
    };
    let mut generators = Vec::new();
    for b in 0..no {
        for g in inner.independent_generators() {
            let mut out = PauliString::identity(ni * no);
            for (i, l) in g.letters().enumerate() {
                out.set(b * ni + i, l);
            }
            generators.push(out);
        }
    }
    generators.extend(outer.independent_generators().into_iter().map(lift));
    StabilizerCode::new(
        format!("{} x {}", inner.name, outer.name),
        generators,
        outer.logical_x.iter().map(lift).collect(),
        outer.logical_z.iter().map(lift).collect(),
    )
}

/// Registry entries bundled from the code table, in table order.
const BUNDLED: &[(&str, &str)] = &[
    ("3repX", include_str!("../data/codes/3repX.code")),
    ("3repZ", include_str!("../data/codes/3repZ.code")),
    ("4repZ", include_str!("../data/codes/4repZ.code")),
    ("5repZ", include_str!("../data/codes/5repZ.code")),
    ("7repX", include_str!("../data/codes/7repX.code")),
    ("5qubit", include_str!("../data/codes/5qubit.code")),
    ("steane", include_str!("../data/codes/steane.code")),
    ("tailored713H", include_str!("../data/codes/tailored713H.code")),
    ("613H", include_str!("../data/codes/613H.code")),
    ("cdSteaneH", include_str!("../data/codes/cdSteaneH.code")),
    ("scfH", include_str!("../data/codes/scfH.code")),
    ("shor", include_str!("../data/codes/shor.code")),
    ("11qubit", include_str!("../data/codes/11qubit.code")),
    ("13cyclic", include_str!("../data/codes/13cyclic.code")),
    ("biased9", include_str!("../data/codes/biased9.code")),
    ("biased13", include_str!("../data/codes/biased13.code")),
    ("422", include_str!("../data/codes/422.code")),
    ("toric822", include_str!("../data/codes/toric822.code")),
];

/// Names of the bundled codes.
pub fn registry_names() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|(n, _)| *n)
}

/// Raw code-file text of a bundled code.
pub fn registry_source(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// `(n, type)` when `name` denotes a generated repetition code.
pub fn parse_rep_name(name: &str) -> Option<(usize, RepType)> {
    let ty_of = |c: &str| match c {
        "Z" => Some(RepType::Z),
        "X" => Some(RepType::X),
        _ => None,
    };
    // `repZ(5)` / `repX(7)`
    if let Some(rest) = name.strip_prefix("rep") {
        let (ty, arg) = rest.split_at(1.min(rest.len()));
        let n = arg.strip_prefix('(')?.strip_suffix(')')?.parse().ok()?;
        return Some((n, ty_of(ty)?));
    }
    // `5repZ`, `5rep` (Z-type by default)
    let pos = name.find("rep")?;
    let n: usize = name[..pos].parse().ok()?;
    let suffix = &name[pos + 3..];
    let ty = if suffix.is_empty() { RepType::Z } else { ty_of(suffix)? };
    Some((n, ty))
}

/// Looks up a code by registry name. Repetition codes of any length are
/// generated on demand from `repZ(n)`, `repX(n)`, `<n>repZ`, `<n>repX` or
/// `<n>rep` (Z-type).
pub fn registry_get(name: &str) -> Result<StabilizerCode> {
    if let Some((n, ty)) = parse_rep_name(name) {
        if n == 0 {
            return Err(Error::UnknownCode(name.to_string()));
        }
        return Ok(repetition(n, ty));
    }
    let src = registry_source(name).ok_or_else(|| Error::UnknownCode(name.to_string()))?;
    StabilizerCode::parse(src)
}

/// Resolves a registry name or, failing that, a path to a code file.
pub fn resolve_code(id: &str) -> Result<StabilizerCode> {
    match registry_get(id) {
        Ok(c) => Ok(c),
        Err(Error::UnknownCode(_)) if Path::new(id).is_file() => StabilizerCode::from_file(Path::new(id)),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn parses_five_qubit_file() {
        let c = registry_get("5qubit").unwrap();
        assert_eq!((c.n, c.k), (5, 1));
        assert_eq!(c.generators[0].to_string(), "XZZXI");
        assert_eq!(c.logical_x[0].to_string(), "XXXXX");
        assert!(!c.permutation_symmetric);
    }

    #[test]
    fn rejects_degenerate_single_qubit() {
        let text = "name bad\nnk 1 1\nG Z\nLX X\nLZ Z\n";
        assert!(matches!(StabilizerCode::parse(text), Err(Error::CodeValidation { .. })));
        let text = "name bad\nnk 2 1\nG ZZ\nLX XI\nLZ ZI\n";
        assert!(matches!(StabilizerCode::parse(text), Err(Error::CodeValidation { .. })));
    }

    #[test]
    fn parse_errors_name_the_line() {
        let text = "name bad\nnk 3 1\nG ZZQ\n";
        match StabilizerCode::parse(text) {
            Err(Error::CodeParse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let text = "name bad\nnk 3 1\nG ZZ\n";
        assert!(matches!(StabilizerCode::parse(text), Err(Error::CodeParse { line: 3, .. })));
        assert!(StabilizerCode::parse("nk 3 1\n").is_err());
        let text = "name bad\nnk 3 1\nG ZZI\nG ZZI\nLX XXX\nLZ ZII\n";
        assert!(StabilizerCode::parse(text).is_err());
        let text = "name ok\nnk 3 1\nG ZZI\nG ZIZ\nG IZZ\nLX XXX\nLZ ZII\n";
        let c = StabilizerCode::parse(text).unwrap();
        assert_eq!((c.generators.len(), c.independent_generators().len()), (3, 2));
    }

    #[test]
    fn four_two_two_pairs_logicals() {
        let c = registry_get("422").unwrap();
        assert_eq!((c.n, c.k, c.generators.len()), (4, 2, 2));
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(c.logical_x[i].anticommutes(&c.logical_z[j]).unwrap(), i == j);
            }
        }
    }

    #[test]
    fn biased9_first_generator() {
        let c = registry_get("biased9").unwrap();
        assert_eq!(c.generators.len(), 8);
        assert_eq!(c.generators[0].to_string(), "ZZIZIZIXY");
    }

    #[test]
    fn generated_rep_codes() {
        let c = registry_get("repZ(5)").unwrap();
        let gens: Vec<String> = c.generators.iter().map(|g| g.to_string()).collect();
        assert_eq!(gens, ["ZZIII", "ZIZII", "ZIIZI", "ZIIIZ"]);
        assert_eq!(c.logical_x[0].to_string(), "XXXXX");
        assert_eq!(c.logical_z[0].to_string(), "ZIIII");
        assert!(c.permutation_symmetric);
        assert_eq!(registry_get("5rep").unwrap(), c);
        assert!(matches!(registry_get("nosuchcode"), Err(Error::UnknownCode(_))));
        assert!(registry_get("0repZ").is_err());
    }

    #[test]
    fn bundled_rep_rows_match_generated() {
        for name in ["3repX", "3repZ", "4repZ", "5repZ", "7repX"] {
            let bundled = StabilizerCode::parse(registry_source(name).unwrap()).unwrap();
            let generated = registry_get(name).unwrap();
            assert_eq!(bundled.generators, generated.generators, "{name}");
            assert_eq!(bundled.logical_x, generated.logical_x, "{name}");
            assert_eq!(bundled.logical_z, generated.logical_z, "{name}");
        }
    }

    #[test]
    fn every_bundled_code_validates_and_round_trips() {
        for name in registry_names() {
            let src = registry_source(name).unwrap();
            let c = StabilizerCode::parse(src).unwrap_or_else(|e| panic!("{name}: {e}"));
            let again = StabilizerCode::parse(&c.serialize()).unwrap();
            assert_eq!(c, again, "{name}");
            assert_eq!(c.serialize(), again.serialize());
        }
    }

    #[test]
    fn classify_examples() {
        let c = registry_get("5qubit").unwrap();
        let id = c.classify(&PauliString::identity(5)).unwrap();
        assert!(id.syndrome.iter().all(|&b| b == 0));
        assert_eq!(id.logical_letters(), [Letter::I]);
        let zc = c.classify(&p("ZZZZZ")).unwrap();
        assert!(zc.syndrome.iter().all(|&b| b == 0));
        assert_eq!(zc.logical[0], (1, 0));
        assert_eq!(zc.logical_letters(), [Letter::Z]);
        let r = registry_get("repZ(3)").unwrap();
        let x = r.classify(&p("XII")).unwrap();
        assert_eq!(x.syndrome, [1, 1]);
        assert_eq!(x.logical[0], (0, 1));
        assert!(r.classify(&p("XI")).is_err());
    }

    fn random_pauli(rng: &mut ChaCha8Rng, n: usize) -> PauliString {
        let letters: Vec<Letter> = (0..n).map(|_| Letter::ALL[rng.gen_range(0..4)]).collect();
        PauliString::from_letters(&letters)
    }

    #[test]
    fn classification_is_constant_on_stabilizer_cosets() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut names: Vec<String> = registry_names().map(String::from).collect();
        names.push("repX(6)".into());
        for name in names {
            let c = registry_get(&name).unwrap();
            for _ in 0..10_000 {
                let e = random_pauli(&mut rng, c.n);
                let mut s = PauliString::identity(c.n);
                for g in &c.generators {
                    if rng.gen::<bool>() {
                        s.mul_assign(g).unwrap();
                    }
                }
                let base = c.classify(&e).unwrap();
                assert_eq!(c.classify(&e.mul(&s).unwrap()).unwrap(), base, "{name}");
                let j = rng.gen_range(0..c.k);
                let flipped = c.classify(&e.mul(&c.logical_x[j]).unwrap()).unwrap();
                assert_eq!(flipped.syndrome, base.syndrome);
                for i in 0..c.k {
                    let expect = if i == j { (base.logical[i].0, base.logical[i].1 ^ 1) } else { base.logical[i] };
                    assert_eq!(flipped.logical[i], expect, "{name}");
                }
            }
        }
    }

    #[test]
    fn swap_xz_maps_rep_z_to_rep_x() {
        let z = repetition(4, RepType::Z).swap_xz();
        let x = repetition(4, RepType::X);
        assert_eq!(z.generators, x.generators);
        assert_eq!(z.logical_x, x.logical_x);
        assert_eq!(z.logical_z, x.logical_z);
    }
}
