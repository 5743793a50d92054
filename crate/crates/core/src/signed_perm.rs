//! Signed permutations and the two generator families acting on them.
//!
//! A [`SignedPerm`] of length `n` is stored as `n` nonzero signed integers whose
//! magnitudes form a permutation of `1..=n`. The group law is
//! `(v·w)_h = sign(w_h) · v_{|w_h|}`, so right-multiplying by a reversal
//! `ρ_{i,j}` reverses positions `i..=j` of `v` and negates them.
//!
//! Positions are 1-based throughout the public API.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `n` for which `|B_n| = 2^n n!` fits in a `u64` rank.
pub const MAX_RANK_N: usize = 16;

/// Largest genome length representable by the entry type.
pub const MAX_N: usize = i16::MAX as usize;

const FACTORIALS: [u64; MAX_RANK_N + 1] = {
    let mut f = [1u64; MAX_RANK_N + 1];
    let mut i = 1;
    while i <= MAX_RANK_N {
        f[i] = f[i - 1] * i as u64;
        i += 1;
    }
    f
};

/// `2^n · n!`, or `None` when it does not fit in a `u64`.
pub fn group_order(n: usize) -> Option<u64> {
    if n > MAX_RANK_N {
        return None;
    }
    FACTORIALS[n].checked_mul(1u64 << n)
}

/// `C(n+1, 2)`, the number of reversals on a genome of length `n`.
pub fn reversal_count(n: usize) -> u64 {
    let n = n as u64;
    n * (n + 1) / 2
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<i16>", into = "Vec<i16>")]
pub struct SignedPerm {
    entries: Vec<i16>,
}

impl SignedPerm {
    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGenome);
        }
        if n > MAX_N {
            return Err(Error::TooLarge {
                n,
                limit: MAX_N,
                what: "signed permutations",
            });
        }
        Ok(SignedPerm {
            entries: (1..=n as i16).collect(),
        })
    }

    /// Validates that `entries` is a signed permutation of `1..=n`.
    pub fn new(entries: Vec<i16>) -> Result<Self> {
        validate(&entries)?;
        Ok(SignedPerm { entries })
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[i16] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(h, &e)| e as usize == h + 1)
    }

    /// Group product `self · other`.
    pub fn compose(&self, other: &SignedPerm) -> Result<SignedPerm> {
        check_same_n(self, other)?;
        let entries = other
            .entries
            .iter()
            .map(|&w| {
                let v = self.entries[w.unsigned_abs() as usize - 1];
                if w < 0 {
                    -v
                } else {
                    v
                }
            })
            .collect();
        Ok(SignedPerm { entries })
    }

    pub fn inverse(&self) -> SignedPerm {
        let mut entries = vec![0i16; self.n()];
        for (p, &v) in self.entries.iter().enumerate() {
            let pos = (p + 1) as i16;
            entries[v.unsigned_abs() as usize - 1] = if v < 0 { -pos } else { pos };
        }
        SignedPerm { entries }
    }

    pub fn apply_reversal(&self, r: Reversal) -> Result<SignedPerm> {
        r.check(self.n())?;
        let mut entries = self.entries.clone();
        reverse_segment(&mut entries, r.i, r.j);
        Ok(SignedPerm { entries })
    }

    pub fn apply_transposition(&self, t: SignChangeTransposition) -> Result<SignedPerm> {
        t.check(self.n())?;
        let mut entries = self.entries.clone();
        transpose_negate(&mut entries, t.i, t.j);
        Ok(SignedPerm { entries })
    }

    pub fn apply(&self, g: Generator) -> Result<SignedPerm> {
        match g {
            Generator::Reversal(r) => self.apply_reversal(r),
            Generator::Transposition(t) => self.apply_transposition(t),
        }
    }

    /// Dense index in `[0, 2^n n!)`: the Lehmer rank of the magnitudes times
    /// `2^n`, plus one sign bit per position (bit `h-1` set when entry `h` is
    /// negative). The identity has rank 0.
    pub fn rank(&self) -> Result<u64> {
        if self.n() > MAX_RANK_N {
            return Err(Error::TooLarge {
                n: self.n(),
                limit: MAX_RANK_N,
                what: "ranking",
            });
        }
        Ok(rank_slice(&self.entries))
    }

    pub fn unrank(n: usize, rank: u64) -> Result<SignedPerm> {
        if n == 0 {
            return Err(Error::EmptyGenome);
        }
        let size = group_order(n).ok_or(Error::TooLarge {
            n,
            limit: MAX_RANK_N,
            what: "ranking",
        })?;
        if rank >= size {
            return Err(Error::RankOutOfRange { rank, n, size });
        }
        let mut entries = vec![0i16; n];
        unrank_into(rank, &mut entries);
        Ok(SignedPerm { entries })
    }

    /// Lexicographic comparison with entries ordered `-1 < +1 < -2 < +2 < …`.
    pub fn lex_compare(&self, other: &SignedPerm) -> Result<Ordering> {
        check_same_n(self, other)?;
        Ok(lex_cmp_slices(&self.entries, &other.entries))
    }
}

impl Ord for SignedPerm {
    /// Orders by length first, then by [`SignedPerm::lex_compare`].
    fn cmp(&self, other: &Self) -> Ordering {
        self.n()
            .cmp(&other.n())
            .then_with(|| lex_cmp_slices(&self.entries, &other.entries))
    }
}

impl PartialOrd for SignedPerm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl TryFrom<Vec<i16>> for SignedPerm {
    type Error = Error;

    fn try_from(v: Vec<i16>) -> Result<Self> {
        SignedPerm::new(v)
    }
}

impl From<SignedPerm> for Vec<i16> {
    fn from(p: SignedPerm) -> Self {
        p.entries
    }
}

impl fmt::Display for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, e) in self.entries.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e:+}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for SignedPerm {
    type Err = Error;

    /// Parses `(+1,-3,+2)`; whitespace is ignored and a missing sign means `+`.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let body = compact
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(|| Error::InvalidPermutation(format!("expected (..) around {s:?}")))?;
        if body.is_empty() {
            return Err(Error::EmptyGenome);
        }
        let entries = body
            .split(',')
            .map(|tok| {
                tok.parse::<i16>()
                    .map_err(|_| Error::InvalidPermutation(format!("bad entry {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        SignedPerm::new(entries)
    }
}

fn check_same_n(a: &SignedPerm, b: &SignedPerm) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::LengthMismatch(a.n(), b.n()));
    }
    Ok(())
}

fn validate(entries: &[i16]) -> Result<()> {
    let n = entries.len();
    if n == 0 {
        return Err(Error::EmptyGenome);
    }
    let mut seen = vec![false; n];
    for &e in entries {
        let m = e.unsigned_abs() as usize;
        if m == 0 || m > n {
            return Err(Error::InvalidPermutation(format!(
                "entry {e} not in ±1..={n}"
            )));
        }
        if std::mem::replace(&mut seen[m - 1], true) {
            return Err(Error::InvalidPermutation(format!("magnitude {m} repeated")));
        }
    }
    Ok(())
}

#[inline]
fn lex_key(e: i16) -> i32 {
    2 * e.unsigned_abs() as i32 + i32::from(e > 0)
}

pub(crate) fn lex_cmp_slices(a: &[i16], b: &[i16]) -> Ordering {
    a.iter()
        .map(|&e| lex_key(e))
        .cmp(b.iter().map(|&e| lex_key(e)))
}

/// Reverses and negates 1-based positions `i..=j` in place.
#[inline]
pub(crate) fn reverse_segment(entries: &mut [i16], i: usize, j: usize) {
    let seg = &mut entries[i - 1..j];
    seg.reverse();
    for e in seg {
        *e = -*e;
    }
}

#[inline]
pub(crate) fn transpose_negate(entries: &mut [i16], i: usize, j: usize) {
    entries.swap(i - 1, j - 1);
    entries[i - 1] = -entries[i - 1];
    if i != j {
        entries[j - 1] = -entries[j - 1];
    }
}

/// Rank of an already-validated slice with `len <= MAX_RANK_N`.
#[inline]
pub(crate) fn rank_slice(entries: &[i16]) -> u64 {
    let n = entries.len();
    let mut unused: u32 = (1u32 << n) - 1;
    let mut perm_rank = 0u64;
    let mut signs = 0u64;
    for (h, &e) in entries.iter().enumerate() {
        let m = e.unsigned_abs() as u32 - 1;
        let smaller = (unused & ((1u32 << m) - 1)).count_ones() as u64;
        perm_rank += smaller * FACTORIALS[n - 1 - h];
        unused &= !(1u32 << m);
        if e < 0 {
            signs |= 1 << h;
        }
    }
    (perm_rank << n) | signs
}

/// Inverse of [`rank_slice`]; `rank` must be in range for `out.len()`.
#[inline]
pub(crate) fn unrank_into(rank: u64, out: &mut [i16]) {
    let n = out.len();
    let signs = rank & ((1u64 << n) - 1);
    let mut perm_rank = rank >> n;
    let mut unused: u32 = (1u32 << n) - 1;
    for h in 0..n {
        let f = FACTORIALS[n - 1 - h];
        let mut digit = (perm_rank / f) as u32;
        perm_rank %= f;
        // digit-th set bit of `unused`
        let mut bits = unused;
        while digit > 0 {
            bits &= bits - 1;
            digit -= 1;
        }
        let m = bits.trailing_zeros();
        unused &= !(1u32 << m);
        let value = (m + 1) as i16;
        out[h] = if signs >> h & 1 == 1 { -value } else { value };
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Reversal {
    pub i: usize,
    pub j: usize,
}

impl Reversal {
    pub fn new(i: usize, j: usize) -> Result<Self> {
        if i == 0 || i > j {
            return Err(Error::PositionOutOfRange { i, j, n: j });
        }
        Ok(Reversal { i, j })
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.i == 0 || self.i > self.j || self.j > n {
            return Err(Error::PositionOutOfRange {
                i: self.i,
                j: self.j,
                n,
            });
        }
        Ok(())
    }

    /// `ρ_{i,j}` as a group element of `B_n`.
    pub fn as_perm(&self, n: usize) -> Result<SignedPerm> {
        SignedPerm::identity(n)?.apply_reversal(*self)
    }
}

impl fmt::Display for Reversal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rho({},{})", self.i, self.j)
    }
}

/// `τ_{i,j}`: swap positions `i` and `j` and negate both; `τ_{i,i}` negates one entry.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct SignChangeTransposition {
    pub i: usize,
    pub j: usize,
}

impl SignChangeTransposition {
    pub fn new(i: usize, j: usize) -> Result<Self> {
        if i == 0 || i > j {
            return Err(Error::PositionOutOfRange { i, j, n: j });
        }
        Ok(SignChangeTransposition { i, j })
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.i == 0 || self.i > self.j || self.j > n {
            return Err(Error::PositionOutOfRange {
                i: self.i,
                j: self.j,
                n,
            });
        }
        Ok(())
    }

    pub fn as_perm(&self, n: usize) -> Result<SignedPerm> {
        SignedPerm::identity(n)?.apply_transposition(*self)
    }
}

impl fmt::Display for SignChangeTransposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "tau({},{})", self.i, self.j)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Generator {
    Reversal(Reversal),
    Transposition(SignChangeTransposition),
}

impl Generator {
    pub fn positions(&self) -> (usize, usize) {
        match *self {
            Generator::Reversal(r) => (r.i, r.j),
            Generator::Transposition(t) => (t.i, t.j),
        }
    }

    /// Writes `src · g` into `dst` without allocating.
    #[inline]
    pub(crate) fn apply_into(&self, src: &[i16], dst: &mut [i16]) {
        dst.copy_from_slice(src);
        match *self {
            Generator::Reversal(r) => reverse_segment(dst, r.i, r.j),
            Generator::Transposition(t) => transpose_negate(dst, t.i, t.j),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Reversal(r) => r.fmt(f),
            Generator::Transposition(t) => t.fmt(f),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    /// All reversals `ρ_{i,j}`, `1 ≤ i ≤ j ≤ n`.
    Reversals,
    /// Sign-change transpositions `τ_{i,j}` including the single flips `τ_{i,i}`.
    Transpositions,
    /// Sign-change transpositions with `i < j` only. This graph is
    /// disconnected: the parity of the number of negative entries is invariant.
    TranspositionsNoFlips,
}

impl GeneratorKind {
    pub fn name(&self) -> &'static str {
        match self {
            GeneratorKind::Reversals => "reversals",
            GeneratorKind::Transpositions => "transpositions",
            GeneratorKind::TranspositionsNoFlips => "transpositions-noflips",
        }
    }

    pub fn code(&self) -> u8 {
        match self {
            GeneratorKind::Reversals => 0,
            GeneratorKind::Transpositions => 1,
            GeneratorKind::TranspositionsNoFlips => 2,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(GeneratorKind::Reversals),
            1 => Some(GeneratorKind::Transpositions),
            2 => Some(GeneratorKind::TranspositionsNoFlips),
            _ => None,
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reversals" => Ok(GeneratorKind::Reversals),
            "transpositions" => Ok(GeneratorKind::Transpositions),
            "transpositions-noflips" => Ok(GeneratorKind::TranspositionsNoFlips),
            other => Err(Error::InvalidParameter(format!(
                "unknown generator set {other:?}"
            ))),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct GeneratorSet {
    pub kind: GeneratorKind,
    pub n: usize,
}

impl GeneratorSet {
    pub fn new(kind: GeneratorKind, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGenome);
        }
        if n > MAX_N {
            return Err(Error::TooLarge {
                n,
                limit: MAX_N,
                what: "signed permutations",
            });
        }
        if kind == GeneratorKind::TranspositionsNoFlips && n < 2 {
            return Err(Error::InvalidParameter(
                "transpositions without flips need n >= 2".into(),
            ));
        }
        Ok(GeneratorSet { kind, n })
    }

    pub fn reversals(n: usize) -> Result<Self> {
        Self::new(GeneratorKind::Reversals, n)
    }

    pub fn transpositions(n: usize) -> Result<Self> {
        Self::new(GeneratorKind::Transpositions, n)
    }

    /// Number of generators, which is the degree of the Cayley graph.
    pub fn degree(&self) -> u64 {
        match self.kind {
            GeneratorKind::Reversals | GeneratorKind::Transpositions => reversal_count(self.n),
            GeneratorKind::TranspositionsNoFlips => reversal_count(self.n) - self.n as u64,
        }
    }

    /// Generators ordered by `(i, j)`.
    pub fn elements(&self) -> Vec<Generator> {
        let n = self.n;
        let mut out = Vec::with_capacity(self.degree() as usize);
        for i in 1..=n {
            for j in i..=n {
                match self.kind {
                    GeneratorKind::Reversals => out.push(Generator::Reversal(Reversal { i, j })),
                    GeneratorKind::Transpositions => {
                        out.push(Generator::Transposition(SignChangeTransposition { i, j }))
                    }
                    GeneratorKind::TranspositionsNoFlips if i < j => {
                        out.push(Generator::Transposition(SignChangeTransposition { i, j }))
                    }
                    GeneratorKind::TranspositionsNoFlips => {}
                }
            }
        }
        out
    }

    /// The generators as group elements.
    pub fn generators(&self) -> Vec<SignedPerm> {
        let id = SignedPerm::identity(self.n).expect("validated n");
        self.elements()
            .into_iter()
            .map(|g| id.apply(g).expect("generator in range"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn p(s: &str) -> SignedPerm {
        s.parse().unwrap()
    }

    fn all(n: usize) -> Vec<SignedPerm> {
        (0..group_order(n).unwrap())
            .map(|r| SignedPerm::unrank(n, r).unwrap())
            .collect()
    }

    #[test]
    fn identity_and_errors() {
        assert_eq!(SignedPerm::identity(3).unwrap(), p("(+1,+2,+3)"));
        assert_eq!(SignedPerm::identity(0), Err(Error::EmptyGenome));
        assert!(SignedPerm::new(vec![1, 1]).is_err());
        assert!(SignedPerm::new(vec![1, 3]).is_err());
        assert!(SignedPerm::new(vec![0, 1]).is_err());
    }

    #[test]
    fn worked_reversal_examples() {
        let v = p("(+5,+2,-1,+3,-4)");
        let rho23 = Reversal::new(2, 3).unwrap();
        assert_eq!(rho23.as_perm(5).unwrap(), p("(+1,-3,-2,+4,+5)"));
        assert_eq!(
            v.compose(&rho23.as_perm(5).unwrap()).unwrap(),
            p("(+5,+1,-2,+3,-4)")
        );
        assert_eq!(v.apply_reversal(rho23).unwrap(), p("(+5,+1,-2,+3,-4)"));
        assert_eq!(
            v.apply_reversal(Reversal::new(2, 2).unwrap()).unwrap(),
            p("(+5,-2,-1,+3,-4)")
        );
        assert_eq!(
            p("(+1,+4,+2,+5,+3)")
                .apply_reversal(Reversal::new(3, 5).unwrap())
                .unwrap(),
            p("(+1,+4,-3,-5,-2)")
        );
    }

    #[test]
    fn compose_length_mismatch() {
        let a = SignedPerm::identity(2).unwrap();
        let b = SignedPerm::identity(3).unwrap();
        assert_eq!(a.compose(&b), Err(Error::LengthMismatch(2, 3)));
        assert!(a.lex_compare(&b).is_err());
    }

    #[test]
    fn out_of_range_generators() {
        let v = SignedPerm::identity(3).unwrap();
        assert!(v.apply_reversal(Reversal { i: 2, j: 4 }).is_err());
        assert!(v
            .apply_transposition(SignChangeTransposition { i: 1, j: 4 })
            .is_err());
        assert!(Reversal::new(3, 2).is_err());
        assert!(Reversal::new(0, 2).is_err());
    }

    #[test]
    fn transposition_examples() {
        let t13 = SignChangeTransposition::new(1, 3).unwrap();
        assert_eq!(
            p("(+1,+2,+3)").apply_transposition(t13).unwrap(),
            p("(-3,+2,-1)")
        );
        let t11 = SignChangeTransposition::new(1, 1).unwrap();
        assert_eq!(p("(+1,+2)").apply_transposition(t11).unwrap(), p("(-1,+2)"));
        for v in all(3) {
            for i in 1..=3 {
                for j in i..=3 {
                    let t = SignChangeTransposition { i, j };
                    let back = v
                        .apply_transposition(t)
                        .unwrap()
                        .apply_transposition(t)
                        .unwrap();
                    assert_eq!(back, v);
                    assert_eq!(
                        v.apply_transposition(t).unwrap(),
                        v.compose(&t.as_perm(3).unwrap()).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(
            SignedPerm::identity(4).unwrap().inverse(),
            SignedPerm::identity(4).unwrap()
        );
        assert_eq!(p("(-2,+1)").inverse(), p("(+2,-1)"));
        // brute force over B_2
        let b2 = all(2);
        let id = SignedPerm::identity(2).unwrap();
        for v in &b2 {
            let brute: Vec<_> = b2.iter().filter(|w| v.compose(w).unwrap() == id).collect();
            assert_eq!(brute.len(), 1);
            assert_eq!(*brute[0], v.inverse());
        }
    }

    #[test]
    fn reversals_are_involutions_on_b5() {
        let gs = GeneratorSet::reversals(5).unwrap();
        let id = SignedPerm::identity(5).unwrap();
        for g in gs.generators() {
            assert_eq!(g.compose(&g).unwrap(), id);
            assert_eq!(g.inverse(), g);
        }
    }

    #[test]
    fn apply_matches_compose_on_b4() {
        let gs = GeneratorSet::reversals(4).unwrap();
        for v in all(4) {
            for g in gs.elements() {
                let Generator::Reversal(r) = g else {
                    unreachable!()
                };
                assert_eq!(
                    v.apply_reversal(r).unwrap(),
                    v.compose(&r.as_perm(4).unwrap()).unwrap()
                );
            }
        }
    }

    #[test]
    fn group_axioms_exhaustive_b2() {
        let b2 = all(2);
        let id = SignedPerm::identity(2).unwrap();
        for u in &b2 {
            assert_eq!(u.compose(&id).unwrap(), *u);
            assert_eq!(id.compose(u).unwrap(), *u);
            assert_eq!(u.compose(&u.inverse()).unwrap(), id);
            assert_eq!(u.inverse().compose(u).unwrap(), id);
            for v in &b2 {
                for w in &b2 {
                    assert_eq!(
                        u.compose(v).unwrap().compose(w).unwrap(),
                        u.compose(&v.compose(w).unwrap()).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn generator_counts() {
        assert_eq!(GeneratorSet::reversals(5).unwrap().generators().len(), 15);
        assert_eq!(
            GeneratorSet::reversals(1).unwrap().generators(),
            vec![p("(-1)")]
        );
        assert_eq!(
            GeneratorSet::transpositions(4).unwrap().generators().len(),
            10
        );
        assert_eq!(
            GeneratorSet::new(GeneratorKind::TranspositionsNoFlips, 4)
                .unwrap()
                .generators()
                .len(),
            6
        );
        assert!(GeneratorSet::new(GeneratorKind::TranspositionsNoFlips, 1).is_err());
        for n in 1..=12 {
            for kind in [GeneratorKind::Reversals, GeneratorKind::Transpositions] {
                let gs = GeneratorSet::new(kind, n).unwrap();
                let gens = gs.generators();
                assert_eq!(gens.len() as u64, reversal_count(n));
                assert_eq!(gs.degree(), reversal_count(n));
                let distinct: HashSet<_> = gens.iter().collect();
                assert_eq!(distinct.len(), gens.len());
                let id = SignedPerm::identity(n).unwrap();
                for g in &gens {
                    assert!(!g.is_identity());
                    assert_eq!(g.compose(g).unwrap(), id);
                }
            }
        }
    }

    #[test]
    fn rank_conventions() {
        assert_eq!(SignedPerm::identity(4).unwrap().rank().unwrap(), 0);
        assert_eq!(SignedPerm::identity(6).unwrap().rank().unwrap(), 0);
        let ranks: HashSet<u64> = all(2).iter().map(|v| v.rank().unwrap()).collect();
        assert_eq!(ranks, (0..8).collect());
        for n in 1..=4 {
            let size = group_order(n).unwrap();
            let perms: HashSet<_> = all(n).into_iter().collect();
            assert_eq!(perms.len() as u64, size);
            for v in &perms {
                assert_eq!(SignedPerm::unrank(n, v.rank().unwrap()).unwrap(), *v);
            }
        }
        assert!(matches!(
            SignedPerm::unrank(3, 48),
            Err(Error::RankOutOfRange { .. })
        ));
        assert!(SignedPerm::unrank(17, 0).is_err());
        assert_eq!(group_order(16), Some(20_922_789_888_000 * 65_536));
    }

    #[test]
    fn lex_order() {
        let a = p("(+1,+2)");
        assert_eq!(a.lex_compare(&a).unwrap(), Ordering::Equal);
        let mut b2 = all(2);
        b2.sort();
        for w in b2.windows(2) {
            assert_eq!(w[0].lex_compare(&w[1]).unwrap(), Ordering::Less);
        }
        assert_eq!(b2[0], p("(-1,-2)"));
        assert_eq!(b2[7], p("(+2,+1)"));
        let min3 = all(3).into_iter().min().unwrap();
        assert_eq!(min3, p("(-1,-2,-3)"));
    }

    #[test]
    fn display_and_parse() {
        let v = p("( +1, -3 ,+2 )");
        assert_eq!(v.to_string(), "(+1,-3,+2)");
        assert_eq!(p("(1,-2)"), p("(+1,-2)"));
        assert!("1,2".parse::<SignedPerm>().is_err());
        assert!("()".parse::<SignedPerm>().is_err());
        assert!("(+1,x)".parse::<SignedPerm>().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn perm(n: usize) -> impl Strategy<Value = SignedPerm> {
            (0..group_order(n).unwrap()).prop_map(move |r| SignedPerm::unrank(n, r).unwrap())
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(2000))]

            #[test]
            fn associativity_b6(u in perm(6), v in perm(6), w in perm(6)) {
                prop_assert_eq!(
                    u.compose(&v).unwrap().compose(&w).unwrap(),
                    u.compose(&v.compose(&w).unwrap()).unwrap()
                );
            }
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(10_000))]

            #[test]
            fn group_axioms_b8(u in perm(8), v in perm(8), w in perm(8)) {
                let id = SignedPerm::identity(8).unwrap();
                prop_assert_eq!(
                    u.compose(&v).unwrap().compose(&w).unwrap(),
                    u.compose(&v.compose(&w).unwrap()).unwrap()
                );
                prop_assert_eq!(u.compose(&u.inverse()).unwrap(), id.clone());
                prop_assert_eq!(u.compose(&id).unwrap(), u);
            }

            #[test]
            fn rank_roundtrip_b12(r in 0..group_order(12).unwrap()) {
                let v = SignedPerm::unrank(12, r).unwrap();
                prop_assert_eq!(v.rank().unwrap(), r);
                prop_assert_eq!(v.to_string().parse::<SignedPerm>().unwrap(), v);
            }
        }
    }
}
