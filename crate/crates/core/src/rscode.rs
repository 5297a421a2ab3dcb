//! Reed-Solomon codes in the DFT view: a codeword is `c_i = C(alpha^i)` for a
//! spectrum polynomial C of degree < k, i = 0..2^m - 2.
//!
//! Two length adjustments are supported on top of the base length 2^m - 1:
//!
//! * extension: one extra symbol equal to C_0, appended after the base
//!   positions, which keeps the code MDS at length 2^m;
//! * puncturing (`shorten`): dropping positions. The decoder re-inserts them
//!   as erasures and decodes in the parent code.

use std::sync::Arc;

use thiserror::Error;

use crate::gfield::{degree, Field};
use crate::linearcode::DecodeOutcome;

/// A received symbol, `None` for an erasure.
pub type Symbol = Option<u16>;
/// A word over the field alphabet plus erasure.
pub type SymbolWord = Vec<Symbol>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RsError {
    #[error("invalid RS parameters: {0}")]
    InvalidParameters(String),
    #[error("expected {expected} symbols, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("symbol {0} is not a field element")]
    BadSymbol(u16),
    #[error("power order {ell} violates ell*(k-1)+1 <= n for n={n}, k={k}")]
    BadPower { n: usize, k: usize, ell: usize },
    #[error("cannot remove {removed} positions from a code with n-k = {redundancy}")]
    TooManyRemoved { removed: usize, redundancy: usize },
    #[error("word is not a codeword")]
    NotACodeword,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RsCode {
    field: Arc<Field>,
    k: usize,
    extended: bool,
    /// Parent positions that are not transmitted, sorted.
    punctured: Vec<usize>,
    /// Parent positions in transmission order.
    kept: Vec<usize>,
}

impl RsCode {
    /// RS code of length n <= 2^m - 1 on the points alpha^0..alpha^(n-1).
    pub fn new(field: &Arc<Field>, n: usize, k: usize) -> Result<Self, RsError> {
        let n0 = field.order();
        if n > n0 || k == 0 || k > n {
            return Err(RsError::InvalidParameters(format!("n={n}, k={k} over GF(2^{})", field.m())));
        }
        Ok(Self::build(field, k, false, (n..n0).collect()))
    }

    /// Singly-extended RS code of length 2^m: the base word plus the symbol C_0.
    pub fn extended(field: &Arc<Field>, k: usize) -> Result<Self, RsError> {
        let n0 = field.order();
        if k == 0 || k > n0 {
            return Err(RsError::InvalidParameters(format!("extended k={k} over GF(2^{})", field.m())));
        }
        Ok(Self::build(field, k, true, Vec::new()))
    }

    fn build(field: &Arc<Field>, k: usize, extended: bool, punctured: Vec<usize>) -> Self {
        let total = field.order() + extended as usize;
        let kept = (0..total).filter(|p| punctured.binary_search(p).is_err()).collect();
        RsCode { field: Arc::clone(field), k, extended, punctured, kept }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.kept.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.n() - self.k + 1
    }

    pub fn is_extended(&self) -> bool {
        self.extended
    }

    /// Length of the parent word (2^m - 1, or 2^m when extended).
    pub fn parent_len(&self) -> usize {
        self.field.order() + self.extended as usize
    }

    /// Parent positions removed from this code.
    pub fn punctured(&self) -> &[usize] {
        &self.punctured
    }

    fn n0(&self) -> usize {
        self.field.order()
    }

    fn check_symbols(&self, word: &[u16]) -> Result<(), RsError> {
        match word.iter().find(|&&s| s as usize >= self.field.size()) {
            Some(&s) => Err(RsError::BadSymbol(s)),
            None => Ok(()),
        }
    }

    /// Encode k info symbols as the spectrum coefficients C_0..C_{k-1}.
    pub fn encode(&self, info: &[u16]) -> Result<Vec<u16>, RsError> {
        if info.len() != self.k {
            return Err(RsError::LengthMismatch { expected: self.k, got: info.len() });
        }
        self.check_symbols(info)?;
        let parent = self.encode_parent(info);
        Ok(self.kept.iter().map(|&p| parent[p]).collect())
    }

    fn encode_parent(&self, spectrum: &[u16]) -> Vec<u16> {
        let f = &self.field;
        let mut word: Vec<u16> = (0..self.n0()).map(|i| f.eval(spectrum, f.alpha_pow(i as i64))).collect();
        if self.extended {
            word.push(spectrum[0]);
        }
        word
    }

    /// Recover the info symbols from a codeword.
    pub fn info_extract(&self, codeword: &[u16]) -> Result<Vec<u16>, RsError> {
        if codeword.len() != self.n() {
            return Err(RsError::LengthMismatch { expected: self.n(), got: codeword.len() });
        }
        self.check_symbols(codeword)?;
        let y: SymbolWord = codeword.iter().map(|&s| Some(s)).collect();
        let spectrum = self.spectrum_from_known(&self.to_parent(&y)).ok_or(RsError::NotACodeword)?;
        if self.encode(&spectrum)? != codeword {
            return Err(RsError::NotACodeword);
        }
        Ok(spectrum)
    }

    /// Spectrum C_0..C_{k-1} interpolated from the known base positions,
    /// assuming they are error-free.
    fn spectrum_from_known(&self, parent: &[Symbol]) -> Option<Vec<u16>> {
        let n0 = self.n0();
        let mut r = vec![0u16; n0];
        let mut erasures = Vec::new();
        for i in 0..n0 {
            match parent[i] {
                Some(v) => r[i] = v,
                None => erasures.push(i),
            }
        }
        let syn = syndromes(&self.field, &r, self.k, n0 - self.k, None);
        let e = errata_decode(&self.field, &syn, self.k, &erasures, n0)?;
        let c = self.accept_base(&r, &e)?;
        let spectrum = crate::gfield::dft_raw(&self.field, &c);
        Some(spectrum[..self.k].to_vec())
    }

    /// Remove positions (indices into this code's word). Decoding puts them
    /// back as erasures in the parent code.
    pub fn shorten(&self, positions: &[usize]) -> Result<RsCode, RsError> {
        let mut removed: Vec<usize> = positions.to_vec();
        removed.sort_unstable();
        removed.dedup();
        if removed.iter().any(|&p| p >= self.n()) {
            return Err(RsError::InvalidParameters("position out of range".into()));
        }
        if removed.len() >= self.n() - self.k {
            return Err(RsError::TooManyRemoved { removed: removed.len(), redundancy: self.n() - self.k });
        }
        let mut punctured = self.punctured.clone();
        punctured.extend(removed.iter().map(|&p| self.kept[p]));
        punctured.sort_unstable();
        Ok(Self::build(&self.field, self.k, self.extended, punctured))
    }

    fn to_parent(&self, y: &[Symbol]) -> SymbolWord {
        let mut parent: SymbolWord = vec![None; self.parent_len()];
        for (&p, &s) in self.kept.iter().zip(y) {
            parent[p] = s;
        }
        parent
    }

    fn check_word(&self, y: &[Symbol]) -> Result<(), RsError> {
        if y.len() != self.n() {
            return Err(RsError::LengthMismatch { expected: self.n(), got: y.len() });
        }
        match y.iter().flatten().find(|&&s| s as usize >= self.field.size()) {
            Some(&s) => Err(RsError::BadSymbol(s)),
            None => Ok(()),
        }
    }

    /// Bounded-distance error/erasure decoding. Always succeeds when
    /// 2 * errors + erasures < d; never returns a word outside that radius.
    pub fn decode_ee(&self, y: &[Symbol]) -> Result<DecodeOutcome<Vec<u16>>, RsError> {
        self.check_word(y)?;
        let parent = self.to_parent(y);
        let candidates = self.classical_candidates(&parent);
        let erasures = y.iter().filter(|s| s.is_none()).count();
        let d = self.d();
        Ok(self.pick(y, candidates, |dist| 2 * dist + erasures < d))
    }

    /// Power decoding with virtual interleaving up to `ell_max` powers. The
    /// classical error/erasure candidates are always included, so the result
    /// is never worse than [`RsCode::decode_ee`].
    pub fn decode_power(&self, y: &[Symbol], ell_max: usize) -> Result<DecodeOutcome<Vec<u16>>, RsError> {
        self.check_word(y)?;
        let parent = self.to_parent(y);
        let mut candidates = self.classical_candidates(&parent);
        let n0 = self.n0();
        let mut r = vec![0u16; n0];
        let mut erasures = Vec::new();
        for i in 0..n0 {
            match parent[i] {
                Some(v) => r[i] = v,
                None => erasures.push(i),
            }
        }
        // Hypothesis A ignores the extension symbol; hypothesis B trusts it,
        // which adds the known value C_0^ell to every virtual word.
        let mut hypotheses = vec![None];
        if self.extended && parent[n0].is_some() {
            hypotheses.push(parent[n0]);
        }
        let mut radius = 0;
        for dc in hypotheses {
            let n_eff = n0 - erasures.len() + dc.is_some() as usize;
            if n_eff <= self.k {
                continue;
            }
            let ell = power_lmax(n_eff, self.k).min(ell_max.max(1));
            let rad = power_radius(n_eff, self.k, ell).unwrap_or(0);
            radius = radius.max(rad);
            if let Some(c) = power_decode_base(&self.field, &r, self.k, &erasures, dc, ell, rad) {
                candidates.push(self.with_extension(c));
            }
        }
        let erasures_total = y.iter().filter(|s| s.is_none()).count();
        let d = self.d();
        Ok(self.pick(y, candidates, |dist| dist <= radius || 2 * dist + erasures_total < d))
    }

    /// Candidate parent codewords from the classical decoder, under both
    /// hypotheses about the extension symbol when the code is extended.
    fn classical_candidates(&self, parent: &SymbolWord) -> Vec<Vec<u16>> {
        let n0 = self.n0();
        let k = self.k;
        let mut r = vec![0u16; n0];
        let mut erasures = Vec::new();
        for i in 0..n0 {
            match parent[i] {
                Some(v) => r[i] = v,
                None => erasures.push(i),
            }
        }
        let mut out = Vec::new();
        if erasures.len() <= n0 - k {
            let syn = syndromes(&self.field, &r, k, n0 - k, None);
            if let Some(e) = errata_decode(&self.field, &syn, k, &erasures, n0) {
                if let Some(c) = self.accept_base(&r, &e) {
                    out.push(self.with_extension(c));
                }
            }
        }
        if self.extended {
            if let Some(v) = parent[n0] {
                // The extension symbol is trusted: C_0 = v extends the syndrome run by one.
                if erasures.len() <= n0 - k + 1 {
                    let syn = syndromes(&self.field, &r, k, n0 - k + 1, Some(v));
                    if let Some(e) = errata_decode(&self.field, &syn, k, &erasures, n0) {
                        if let Some(c) = self.accept_base(&r, &e) {
                            out.push(self.with_extension(c));
                        }
                    }
                }
            }
        }
        out
    }

    /// Apply the error vector and verify the spectrum has degree < k.
    fn accept_base(&self, r: &[u16], e: &[u16]) -> Option<Vec<u16>> {
        let c: Vec<u16> = r.iter().zip(e).map(|(a, b)| a ^ b).collect();
        let spectrum = crate::gfield::dft_raw(&self.field, &c);
        spectrum[self.k..].iter().all(|&s| s == 0).then_some(c)
    }

    fn with_extension(&self, mut base: Vec<u16>) -> Vec<u16> {
        if self.extended {
            // C_0 = sum of the time-domain symbols (n^{-1} = 1 in characteristic 2)
            let c0 = base.iter().fold(0, |acc, &s| acc ^ s);
            base.push(c0);
        }
        base
    }

    /// Among parent-word candidates, the unique one closest to `y` that
    /// passes `accept`; ties between distinct words are failures.
    fn pick(
        &self,
        y: &[Symbol],
        candidates: Vec<Vec<u16>>,
        accept: impl Fn(usize) -> bool,
    ) -> DecodeOutcome<Vec<u16>> {
        let mut best: Option<(usize, Vec<u16>)> = None;
        let mut tied = false;
        for parent_word in candidates {
            let word: Vec<u16> = self.kept.iter().map(|&p| parent_word[p]).collect();
            let dist = y.iter().zip(&word).filter(|(s, &w)| matches!(s, Some(v) if *v != w)).count();
            match &best {
                Some((bd, bw)) if *bw == word || dist > *bd => {}
                Some((bd, _)) if dist == *bd => tied = true,
                _ => {
                    best = Some((dist, word));
                    tied = false;
                }
            }
        }
        match best {
            Some((dist, word)) if !tied && accept(dist) => DecodeOutcome::Decoded(word),
            _ => DecodeOutcome::Failure,
        }
    }
}

/// S_t = r(alpha^{-(b+t)}) for t in 0..count. With `dc` set, the run wraps
/// to index 0 (mod n0) where the known C_0 = dc is removed.
fn syndromes(field: &Field, r: &[u16], b: usize, count: usize, dc: Option<u16>) -> Vec<u16> {
    let n0 = field.order();
    (0..count)
        .map(|t| {
            let j = (b + t) % n0;
            let mut s = field.eval(r, field.alpha_pow(-(j as i64)));
            if j == 0 {
                s ^= dc.unwrap_or(0);
            }
            s
        })
        .collect()
}

/// Erasure locator Gamma(z) = prod (1 - X_i z) with X_i = alpha^{-i}.
fn erasure_locator(field: &Field, erasures: &[usize]) -> Vec<u16> {
    erasures.iter().fold(vec![1u16], |acc, &i| field.poly_mul(&acc, &[1, field.alpha_pow(-(i as i64))]))
}

/// Forney syndromes T_t = sum_u Gamma_u S_{t-u}, t = delta..N-1.
fn forney_syndromes(field: &Field, syn: &[u16], gamma: &[u16]) -> Vec<u16> {
    let delta = gamma.len() - 1;
    (delta..syn.len())
        .map(|t| gamma.iter().enumerate().fold(0, |acc, (u, &g)| acc ^ field.mul(g, syn[t - u])))
        .collect()
}

/// Berlekamp-Massey shift-register synthesis: shortest (Lambda, L) with
/// Lambda_0 = 1 generating `s`.
pub fn berlekamp_massey(field: &Field, s: &[u16]) -> (Vec<u16>, usize) {
    let mut c = vec![1u16];
    let mut b = vec![1u16];
    let mut l = 0usize;
    let mut shift = 1usize;
    let mut last = 1u16;
    for n in 0..s.len() {
        let mut disc = s[n];
        for i in 1..=l.min(c.len() - 1) {
            disc ^= field.mul(c[i], s[n - i]);
        }
        if disc == 0 {
            shift += 1;
            continue;
        }
        let coef = field.div(disc, last);
        let mut next = c.clone();
        if next.len() < b.len() + shift {
            next.resize(b.len() + shift, 0);
        }
        for (i, &bi) in b.iter().enumerate() {
            next[i + shift] ^= field.mul(coef, bi);
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = std::mem::replace(&mut c, next);
            last = disc;
            shift = 1;
        } else {
            c = next;
            shift += 1;
        }
    }
    c.truncate(l + 1);
    c.resize(l + 1, 0);
    (c, l)
}

/// Chien search over the n0 base positions: i with Psi(alpha^i) = 0.
fn chien(field: &Field, psi: &[u16], n0: usize) -> Vec<usize> {
    (0..n0).filter(|&i| field.eval(psi, field.alpha_pow(i as i64)) == 0).collect()
}

/// Error values by Forney's formula for the locator `psi` and syndromes with
/// first index `b`. Returns the full error vector or `None` if a root is
/// missing.
fn forney_values(field: &Field, syn: &[u16], b: usize, psi: &[u16], n0: usize) -> Option<Vec<u16>> {
    let deg = degree(psi).unwrap_or(0);
    if deg > syn.len() {
        return None;
    }
    let roots = chien(field, psi, n0);
    if roots.len() != deg {
        return None;
    }
    let mut omega = field.poly_mul(syn, psi);
    omega.truncate(syn.len());
    let dpsi = field.derivative(psi);
    let mut e = vec![0u16; n0];
    for &i in &roots {
        let x = field.alpha_pow(-(i as i64));
        let xinv = field.alpha_pow(i as i64);
        let den = field.eval(&dpsi, xinv);
        if den == 0 {
            return None;
        }
        let y = field.mul(x, field.div(field.eval(&omega, xinv), den));
        e[i] = field.mul(y, field.pow(x, -(b as i64)));
    }
    Some(e)
}

/// Classical errata decoding: Forney syndromes, Berlekamp-Massey, Chien search
/// and Forney values. Returns the error vector (including erased values).
fn errata_decode(field: &Field, syn: &[u16], b: usize, erasures: &[usize], n0: usize) -> Option<Vec<u16>> {
    let delta = erasures.len();
    if delta > syn.len() {
        return None;
    }
    let gamma = erasure_locator(field, erasures);
    let t = forney_syndromes(field, syn, &gamma);
    let (lambda, l) = berlekamp_massey(field, &t);
    if 2 * l > t.len() {
        return None;
    }
    let psi = field.poly_mul(&lambda, &gamma);
    forney_values(field, syn, b, &psi, n0)
}

/// Shortest common connection polynomial (Lambda_0 = 1) for several
/// sequences of possibly different lengths, with length at most `max_l`.
/// Solved as a linear system per candidate length; the solvable lengths form
/// an up-set, so the minimum is found by bisection.
pub fn shortest_common_lfsr(field: &Field, seqs: &[Vec<u16>], max_l: usize) -> Option<Vec<u16>> {
    let lower = seqs.iter().map(|s| berlekamp_massey(field, s).1).max().unwrap_or(0);
    if lower > max_l {
        return None;
    }
    let solve = |l: usize| -> Option<Vec<u16>> { solve_lfsr(field, seqs, l) };
    let mut hi = max_l;
    let mut best = solve(hi)?;
    let mut lo = lower;
    while lo < hi {
        let mid = (lo + hi) / 2;
        match solve(mid) {
            Some(sol) => {
                hi = mid;
                best = sol;
            }
            None => lo = mid + 1,
        }
    }
    if best.len() != hi + 1 {
        best = solve(hi)?;
    }
    Some(best)
}

/// Solve sum_{v=1..l} Lambda_v T_{s-v} = T_s for all sequences and s in l..len.
fn solve_lfsr(field: &Field, seqs: &[Vec<u16>], l: usize) -> Option<Vec<u16>> {
    let mut rows: Vec<Vec<u16>> = Vec::new();
    for s in seqs {
        for pos in l..s.len() {
            let mut row: Vec<u16> = (1..=l).map(|v| s[pos - v]).collect();
            row.push(s[pos]);
            rows.push(row);
        }
    }
    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for col in 0..l {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = field.inv(rows[rank][col]).expect("nonzero pivot");
        for x in rows[rank].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[col] != 0 {
                let f = row[col];
                for (x, &pv) in row.iter_mut().zip(&pivot_row) {
                    *x ^= field.mul(f, pv);
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
    }
    if rows[rank..].iter().any(|row| row[l] != 0) {
        return None;
    }
    let mut lambda = vec![0u16; l + 1];
    lambda[0] = 1;
    for (i, &col) in pivot_cols.iter().enumerate() {
        lambda[col + 1] = rows[i][l];
    }
    Some(lambda)
}

/// Power decoding of a base-length received word `r` (erased positions hold
/// zero) in RS(n0, k). With `dc` set, C_0 is taken as known (the extension
/// symbol of an extended code), lengthening each syndrome run by one.
/// Returns a codeword within `radius` corrections of r.
fn power_decode_base(
    field: &Field,
    r: &[u16],
    k: usize,
    erasures: &[usize],
    dc: Option<u16>,
    ell: usize,
    radius: usize,
) -> Option<Vec<u16>> {
    let n0 = field.order();
    let delta = erasures.len();
    let gamma = erasure_locator(field, erasures);
    let mut seqs = Vec::new();
    let mut first_syn = Vec::new();
    let mut power = r.to_vec();
    for l in 1..=ell {
        if l > 1 {
            power = power.iter().zip(r).map(|(&p, &x)| field.mul(p, x)).collect();
        }
        let kl = l * (k - 1) + 1;
        if kl >= n0 {
            break;
        }
        let count = n0 - kl + dc.is_some() as usize;
        let syn = syndromes(field, &power, kl, count, dc.map(|v| field.pow(v, l as i64)));
        if syn.len() > delta {
            seqs.push(forney_syndromes(field, &syn, &gamma));
        }
        if l == 1 {
            first_syn = syn;
        }
    }
    if seqs.is_empty() {
        return None;
    }
    let lambda = shortest_common_lfsr(field, &seqs, radius)?;
    let psi = field.poly_mul(&lambda, &gamma);
    let e = forney_values(field, &first_syn, k, &psi, n0)?;
    let c: Vec<u16> = r.iter().zip(&e).map(|(a, b)| a ^ b).collect();
    let spectrum = crate::gfield::dft_raw(field, &c);
    if spectrum[k..].iter().any(|&s| s != 0) {
        return None;
    }
    let corrections = (0..n0).filter(|i| !erasures.contains(i) && e[*i] != 0).count();
    (corrections <= radius).then_some(c)
}

/// Decoding radius of power decoding with `ell` powers:
/// floor((2 ell n - ell(ell+1) k + ell(ell-1)) / (2(ell+1))), clamped at 0.
pub fn power_radius(n: usize, k: usize, ell: usize) -> Result<usize, RsError> {
    if ell == 0 || k == 0 || ell * (k - 1) + 1 > n {
        return Err(RsError::BadPower { n, k, ell });
    }
    let (n, k, l) = (n as i64, k as i64, ell as i64);
    let num = 2 * l * n - l * (l + 1) * k + l * (l - 1);
    Ok(num.div_euclid(2 * (l + 1)).max(0) as usize)
}

/// Largest useful number of powers: the bound
/// floor((sqrt((k+3)^2 + 8(k-1)(n-1)) - (k+3)) / (2(k-1))) combined with
/// ell(k-1)+1 <= n, evaluated in exact integers and never below 1.
/// For k = 1 only the length bound applies, taken as n - 1.
pub fn power_lmax(n: usize, k: usize) -> usize {
    assert!(k >= 1 && k <= n, "power_lmax needs 1 <= k <= n");
    if k == 1 {
        return (n - 1).max(1);
    }
    let (n, k) = (n as u128, k as u128);
    let disc = (k + 3) * (k + 3) + 8 * (k - 1) * (n - 1);
    // largest ell with 2(k-1) ell + (k+3) <= sqrt(disc)
    let mut ell = 0u128;
    while {
        let lhs = 2 * (k - 1) * (ell + 1) + k + 3;
        lhs * lhs <= disc
    } {
        ell += 1;
    }
    let by_length = (n - 1) / (k - 1);
    (ell.min(by_length) as usize).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(m: u32) -> Arc<Field> {
        Field::new(m, None).unwrap()
    }

    #[test]
    fn zero_info_zero_word() {
        let code = RsCode::new(&gf(5), 31, 5).unwrap();
        assert_eq!(code.encode(&[0; 5]).unwrap(), vec![0; 31]);
    }

    #[test]
    fn k1_gives_constant_word() {
        let code = RsCode::new(&gf(3), 7, 1).unwrap();
        assert_eq!(code.encode(&[5]).unwrap(), vec![5; 7]);
    }

    #[test]
    fn mds_exhaustive_small() {
        let f = gf(3);
        for k in 1..=3 {
            let code = RsCode::new(&f, 7, k).unwrap();
            let mut min_w = usize::MAX;
            for u in 1..(8usize.pow(k as u32)) {
                let info: Vec<u16> = (0..k).map(|i| (u >> (3 * i) & 7) as u16).collect();
                let w = code.encode(&info).unwrap().iter().filter(|&&s| s != 0).count();
                min_w = min_w.min(w);
            }
            assert_eq!(min_w, 7 - k + 1);
        }
        let ext = RsCode::extended(&f, 2).unwrap();
        let mut min_w = usize::MAX;
        for u in 1..64usize {
            let info = [(u & 7) as u16, (u >> 3) as u16];
            min_w = min_w.min(ext.encode(&info).unwrap().iter().filter(|&&s| s != 0).count());
        }
        assert_eq!(min_w, ext.d());
        assert_eq!(ext.d(), 7);
    }

    #[test]
    fn all_erased_fails() {
        let code = RsCode::new(&gf(5), 31, 5).unwrap();
        assert!(code.decode_ee(&[None; 31]).unwrap().is_failure());
    }

    #[test]
    fn radius_spot_values() {
        assert_eq!(power_radius(32, 2, 5).unwrap(), 23);
        assert_eq!(power_radius(64, 4, 5).unwrap(), 45);
        assert_eq!(power_radius(31, 2, 5).unwrap(), 22);
        assert_eq!(power_lmax(32, 2), 5);
        assert_eq!(power_lmax(31, 2), 5);
        assert_eq!(power_lmax(64, 4), 5);
        assert_eq!(power_lmax(64, 22), 1);
        assert_eq!(power_lmax(32, 16), 1);
        assert_eq!(power_radius(32, 16, 1).unwrap(), 8);
        assert_eq!(power_radius(32, 32, 1).unwrap(), 0);
        assert!(power_radius(10, 5, 3).is_err());
    }

    #[test]
    fn shorten_to_36() {
        let f = gf(6);
        let parent = RsCode::extended(&f, 22).unwrap();
        assert_eq!((parent.n(), parent.d()), (64, 43));
        let short = parent.shorten(&(35..63).collect::<Vec<_>>()).unwrap();
        assert_eq!((short.n(), short.k(), short.d()), (36, 22, 15));
        assert_eq!(parent.shorten(&[]).unwrap(), parent);
        assert!(parent.shorten(&(0..42).collect::<Vec<_>>()).is_err());
    }

    #[test]
    fn berlekamp_massey_fibonacci_like() {
        let f = gf(4);
        // s_n = a s_{n-1} + b s_{n-2}
        let (a, b) = (3u16, 7u16);
        let mut s = vec![1u16, 5];
        for n in 2..10 {
            s.push(f.mul(a, s[n - 1]) ^ f.mul(b, s[n - 2]));
        }
        let (lambda, l) = berlekamp_massey(&f, &s);
        assert_eq!(l, 2);
        assert_eq!(lambda, vec![1, a, b]);
        let joint = shortest_common_lfsr(&f, &[s.clone(), s[..6].to_vec()], 4).unwrap();
        assert_eq!(joint, vec![1, a, b]);
    }

    struct XorShift(u64);

    impl XorShift {
        fn next(&mut self) -> u64 {
            self.0 ^= self.0 << 13;
            self.0 ^= self.0 >> 7;
            self.0 ^= self.0 << 17;
            self.0
        }

        fn below(&mut self, n: usize) -> usize {
            (self.next() % n as u64) as usize
        }

        fn shuffled(&mut self, n: usize) -> Vec<usize> {
            let mut v: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                v.swap(i, self.below(i + 1));
            }
            v
        }
    }

    /// Random codeword with `tau` errors and `delta` erasures.
    fn noisy(code: &RsCode, rng: &mut XorShift, tau: usize, delta: usize) -> (Vec<u16>, SymbolWord) {
        let q = code.field().size();
        let info: Vec<u16> = (0..code.k()).map(|_| rng.below(q) as u16).collect();
        let c = code.encode(&info).unwrap();
        let mut y: SymbolWord = c.iter().map(|&s| Some(s)).collect();
        let pos = rng.shuffled(code.n());
        for &p in &pos[..tau] {
            y[p] = Some(c[p] ^ (1 + rng.below(q - 1)) as u16);
        }
        for &p in &pos[tau..tau + delta] {
            y[p] = None;
        }
        (c, y)
    }

    fn check_guarantee(code: &RsCode, trials: usize, seed: u64) {
        let mut rng = XorShift(seed);
        for _ in 0..trials {
            let delta = rng.below(code.d());
            let tau = rng.below((code.d() - delta - 1) / 2 + 1);
            let (c, y) = noisy(code, &mut rng, tau, delta);
            assert_eq!(code.decode_ee(&y).unwrap().ok(), Some(c.clone()), "tau={tau} delta={delta}");
            assert_eq!(code.info_extract(&c).unwrap().len(), code.k());
        }
    }

    #[test]
    fn ee_guarantee_base_codes() {
        let f = gf(5);
        for k in [2, 5, 19] {
            check_guarantee(&RsCode::new(&f, 31, k).unwrap(), 300, 7 + k as u64);
        }
        check_guarantee(&RsCode::new(&gf(4), 12, 4).unwrap(), 300, 99);
    }

    #[test]
    fn ee_guarantee_extended_and_shortened() {
        let f5 = gf(5);
        for k in [2, 19] {
            check_guarantee(&RsCode::extended(&f5, k).unwrap(), 300, 11 + k as u64);
        }
        let f6 = gf(6);
        let rs64 = RsCode::extended(&f6, 22).unwrap();
        check_guarantee(&rs64, 200, 5);
        let rs36 = rs64.shorten(&(35..63).collect::<Vec<_>>()).unwrap();
        check_guarantee(&rs36, 300, 6);
    }

    #[test]
    fn info_roundtrip_and_rejection() {
        let code = RsCode::extended(&gf(6), 22).unwrap().shorten(&(35..63).collect::<Vec<_>>()).unwrap();
        let info: Vec<u16> = (0..22).map(|i| (i * 7 % 64) as u16).collect();
        let mut c = code.encode(&info).unwrap();
        assert_eq!(code.info_extract(&c).unwrap(), info);
        c[3] ^= 1;
        assert_eq!(code.info_extract(&c).unwrap_err(), RsError::NotACodeword);
    }

    #[test]
    fn power_decoding_half_distance_always() {
        let code = RsCode::new(&gf(5), 31, 2).unwrap();
        let mut rng = XorShift(42);
        for _ in 0..300 {
            let tau = rng.below(15);
            let (c, y) = noisy(&code, &mut rng, tau, 0);
            assert_eq!(code.decode_power(&y, 5).unwrap().ok(), Some(c));
        }
    }

    #[test]
    fn power_decoding_beyond_half_distance() {
        let code = RsCode::new(&gf(5), 31, 2).unwrap();
        let mut rng = XorShift(4242);
        let trials = 400;
        let ok = (0..trials)
            .filter(|_| {
                let (c, y) = noisy(&code, &mut rng, 20, 0);
                code.decode_power(&y, 5).unwrap().ok() == Some(c)
            })
            .count();
        assert!(ok * 100 >= trials * 99, "{ok}/{trials}");
    }
}
