//! Block diagonalization of permutation and partial-transpose invariant
//! operators on N qubits.
//!
//! A permutation+PT invariant operator on `(C^2)^{\otimes N}` has exactly
//! `(N+1)(N+2)/2` independent real components ([`ParamVector`]). In the
//! total-spin basis it splits into one block per spin sector `j`, each of
//! dimension `2j+1` and multiplicity `n_j` ([`degeneracy`]). [`BlockMap`]
//! carries the linear map from the parameter vector to each block, and
//! [`sigma_block`] gives the blocks of a product state directly.
//!
//! Dense `2^N`-sized reconstructions ([`reconstruct_dense`], [`sigma_dense`],
//! [`coupled_basis`]) serve as brute-force oracles for everything above; they
//! are hard-capped at N = 12.
//!
//! Spins are stored as doubled integers (`two_j`, `two_m`) so half-integer
//! sectors stay exact.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::math::{binomial, binomial_exact, ln_factorial};
use crate::qubit::StatePair;

/// Largest N for which the dense 2^N oracles are allowed to run.
pub const DENSE_CAP: u32 = 12;

/// A total-spin magnetic label (j, m), stored doubled for exactness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpinLabel {
    two_j: i64,
    two_m: i64,
}

impl SpinLabel {
    pub fn new(two_j: i64, two_m: i64) -> Result<Self> {
        if two_j < 0 {
            return Err(Error::domain("two_j", format!("negative spin {two_j}")));
        }
        if two_m.abs() > two_j || (two_m - two_j) % 2 != 0 {
            return Err(Error::domain(
                "two_m",
                format!("magnetic number 2m={two_m} invalid for 2j={two_j}"),
            ));
        }
        Ok(SpinLabel { two_j, two_m })
    }

    pub fn two_j(&self) -> i64 {
        self.two_j
    }

    pub fn two_m(&self) -> i64 {
        self.two_m
    }
}

/// The independent components E^q_r (0 <= r <= q <= N) of a permutation+PT
/// invariant operator on N qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamVector {
    n_copies: u32,
    values: Vec<f64>,
}

impl ParamVector {
    /// Number of independent components, (N+1)(N+2)/2.
    pub fn len_for(n: u32) -> usize {
        let n = n as usize;
        (n + 1) * (n + 2) / 2
    }

    /// Flat index of the component with q >= r.
    pub fn index_of(q: u32, r: u32) -> usize {
        debug_assert!(r <= q);
        let q = q as usize;
        q * (q + 1) / 2 + r as usize
    }

    pub fn zeros(n: u32) -> Self {
        ParamVector {
            n_copies: n,
            values: vec![0.0; Self::len_for(n)],
        }
    }

    /// Components of the identity operator: E^q_q = 1, all else 0.
    pub fn identity(n: u32) -> Self {
        let mut p = Self::zeros(n);
        for q in 0..=n {
            p.set(q, q, 1.0);
        }
        p
    }

    /// Components of I/2 (the canonical strictly feasible SDP start).
    pub fn half_identity(n: u32) -> Self {
        let mut p = Self::zeros(n);
        for q in 0..=n {
            p.set(q, q, 0.5);
        }
        p
    }

    pub fn from_values(n: u32, values: Vec<f64>) -> Result<Self> {
        if values.len() != Self::len_for(n) {
            return Err(Error::domain(
                "values",
                format!(
                    "expected {} components for N={n}, got {}",
                    Self::len_for(n),
                    values.len()
                ),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("values", "non-finite component"));
        }
        Ok(ParamVector { n_copies: n, values })
    }

    pub fn n_copies(&self) -> u32 {
        self.n_copies
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Component E^q_r; the index pair is canonicalized by hermiticity, so
    /// `get(q, r)` and `get(r, q)` agree.
    pub fn get(&self, q: u32, r: u32) -> f64 {
        let (q, r) = if q >= r { (q, r) } else { (r, q) };
        self.values[Self::index_of(q, r)]
    }

    pub fn set(&mut self, q: u32, r: u32, value: f64) {
        let (q, r) = if q >= r { (q, r) } else { (r, q) };
        self.values[Self::index_of(q, r)] = value;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.values
    }
}

/// Spin sectors of N coupled spins 1/2, as doubled values in descending
/// order: N, N-2, ..., down to 0 or 1.
pub fn spin_values(n: u32) -> Vec<u32> {
    (0..=n).rev().filter(|tj| tj % 2 == n % 2).collect()
}

/// Multiplicity n_j of the spin-j sector, exact in integer arithmetic:
/// `C(N, N/2 - j) (2j+1) / (N/2 + j + 1)`.
pub fn degeneracy(n: u32, two_j: u32) -> Result<u64> {
    if two_j > n || (n - two_j) % 2 != 0 {
        return Err(Error::domain(
            "two_j",
            format!("spin 2j={two_j} invalid for N={n}"),
        ));
    }
    if n > 120 {
        return Err(Error::Resource(format!(
            "exact multiplicities overflow 128-bit integers beyond N = 120 (got {n})"
        )));
    }
    let k = ((n - two_j) / 2) as u64;
    let num = binomial_exact(n as u64, k) * (two_j as u128 + 1) * 2;
    let den = (n + two_j + 2) as u128;
    debug_assert_eq!(num % den, 0);
    Ok((num / den) as u64)
}

fn ln_fact_or_none(n: i64) -> Option<f64> {
    ln_factorial(n)
}

fn delta_raw(two_j: i64, two_m: i64, two_mp: i64, k: i64) -> f64 {
    let jm = (two_j - two_m) / 2;
    let jpm = (two_j + two_m) / 2;
    let jmp = (two_j - two_mp) / 2;
    let jpmp = (two_j + two_mp) / 2;
    let mmp = (two_m - two_mp) / 2;
    let num = 0.5
        * (ln_fact_or_none(jm).unwrap()
            + ln_fact_or_none(jpm).unwrap()
            + ln_fact_or_none(jmp).unwrap()
            + ln_fact_or_none(jpmp).unwrap());
    let den = match (
        ln_fact_or_none(jm - k),
        ln_fact_or_none(jpmp - k),
        ln_fact_or_none(mmp + k),
        ln_fact_or_none(k),
    ) {
        (Some(a), Some(b), Some(c), Some(d)) => a + b + c + d,
        _ => return 0.0,
    };
    (num - den).exp()
}

/// The factorial coefficient shared by the block maps and the Wigner
/// d-matrices; zero whenever a factorial argument would be negative.
pub fn delta_coeff(m: SpinLabel, mp: SpinLabel, k: i64) -> f64 {
    assert_eq!(m.two_j(), mp.two_j(), "labels must share j");
    delta_raw(m.two_j(), m.two_m(), mp.two_m(), k)
}

/// A j-indexed family of real symmetric blocks with their multiplicities.
#[derive(Debug, Clone)]
pub struct BlockOperator {
    pub n_copies: u32,
    pub sectors: Vec<SpinSector>,
}

#[derive(Debug, Clone)]
pub struct SpinSector {
    pub two_j: u32,
    pub degeneracy: u64,
    pub matrix: DMatrix<f64>,
}

impl BlockOperator {
    /// Sum over sectors of n_j * tr(block); equals tr of the full operator.
    pub fn weighted_trace(&self) -> f64 {
        self.sectors
            .iter()
            .map(|s| s.degeneracy as f64 * s.matrix.trace())
            .sum()
    }
}

/// The linear map from a [`ParamVector`] to the spin-j block.
///
/// Per parameter the map is sparse: entries exist only on the anti-diagonal
/// `m + m' = N - q - r`, so a block row of the map holds at most `2j+1`
/// coefficients.
#[derive(Debug, Clone)]
pub struct BlockMap {
    n: u32,
    two_j: u32,
    dim: usize,
    cols: Vec<Vec<(u16, u16, f64)>>,
}

impl BlockMap {
    pub fn new(n: u32, two_j: u32) -> Result<Self> {
        if two_j > n || (n - two_j) % 2 != 0 {
            return Err(Error::domain(
                "two_j",
                format!("spin 2j={two_j} invalid for N={n}"),
            ));
        }
        let dim = two_j as usize + 1;
        let half = ((n - two_j) / 2) as i64; // number of singlet pairs
        let n_params = ParamVector::len_for(n);
        let mut dense: Vec<Option<DMatrix<f64>>> = vec![None; n_params];
        let tj = two_j as i64;
        for mi in 0..dim {
            let two_m = tj - 2 * mi as i64;
            for mpi in 0..dim {
                let two_mp = tj - 2 * mpi as i64;
                let jm = (tj - two_m) / 2;
                let jpmp = (tj + two_mp) / 2;
                let mmp = (two_m - two_mp) / 2;
                let k_lo = 0.max(-mmp);
                let k_hi = jm.min(jpmp);
                for k in k_lo..=k_hi {
                    let d = delta_raw(tj, two_m, two_mp, k);
                    if d == 0.0 {
                        continue;
                    }
                    for l in 0..=half {
                        let q = (n as i64 - two_mp) / 2 + k + l;
                        let r = (n as i64 - two_m) / 2 - k - l;
                        debug_assert!(q >= 0 && q <= n as i64 && r >= 0 && r <= n as i64);
                        let (qc, rc) = if q >= r { (q, r) } else { (r, q) };
                        let p = ParamVector::index_of(qc as u32, rc as u32);
                        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                        let coeff = d * binomial(half, l) * sign;
                        let mat = dense[p]
                            .get_or_insert_with(|| DMatrix::zeros(dim, dim));
                        mat[(mi, mpi)] += coeff;
                    }
                }
            }
        }
        let mut cols = vec![Vec::new(); n_params];
        for (p, slot) in dense.into_iter().enumerate() {
            let Some(mat) = slot else { continue };
            let scale = 1.0 + mat.amax();
            let sym = (&mat + mat.transpose()) * 0.5;
            debug_assert!(
                (&mat - &sym).amax() < 1e-10 * scale,
                "block map column {p} deviates from symmetry"
            );
            let mut entries = Vec::new();
            for mi in 0..dim {
                for mpi in 0..dim {
                    let v = sym[(mi, mpi)];
                    if v != 0.0 {
                        entries.push((mi as u16, mpi as u16, v));
                    }
                }
            }
            cols[p] = entries;
        }
        Ok(BlockMap { n, two_j, dim, cols })
    }

    pub fn n_copies(&self) -> u32 {
        self.n
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sparse coefficients (row, col, value) of dE^{(j)}/dE^q_r for one
    /// flat parameter index.
    pub fn coefficients(&self, param: usize) -> &[(u16, u16, f64)] {
        &self.cols[param]
    }

    /// Contracts the map with a parameter vector into the spin-j block.
    pub fn assemble(&self, params: &ParamVector) -> Result<DMatrix<f64>> {
        if params.n_copies() != self.n {
            return Err(Error::domain(
                "params",
                format!(
                    "parameter vector for N={} fed to a map for N={}",
                    params.n_copies(),
                    self.n
                ),
            ));
        }
        let mut out = DMatrix::zeros(self.dim, self.dim);
        for (p, entries) in self.cols.iter().enumerate() {
            let x = params.as_slice()[p];
            if x == 0.0 {
                continue;
            }
            for &(a, b, v) in entries {
                out[(a as usize, b as usize)] += x * v;
            }
        }
        Ok(out)
    }
}

/// Spin-j block of a permutation+PT invariant operator given its components.
pub fn assemble_block(params: &ParamVector, two_j: u32) -> Result<DMatrix<f64>> {
    BlockMap::new(params.n_copies(), two_j)?.assemble(params)
}

/// Spin-j block of `rho_a^{\otimes N}` in closed form.
pub fn sigma_block(pair: &StatePair, which: usize, n: u32, two_j: u32) -> Result<DMatrix<f64>> {
    if two_j > n || (n - two_j) % 2 != 0 {
        return Err(Error::domain(
            "two_j",
            format!("spin 2j={two_j} invalid for N={n}"),
        ));
    }
    let r = pair.purity(which);
    let theta = pair.theta;
    let sign = if which == 0 { 1.0 } else { -1.0 };
    let st = sign * r * (theta / 2.0).sin();
    let ct = r * (theta / 2.0).cos();
    let half = ((n - two_j) / 2) as i32;
    let prefactor = (1.0 - r * r).powi(half) * 0.5f64.powi(n as i32);
    let dim = two_j as usize + 1;
    let tj = two_j as i64;
    let mut out = DMatrix::zeros(dim, dim);
    for mi in 0..dim {
        let two_m = tj - 2 * mi as i64;
        for mpi in 0..dim {
            let two_mp = tj - 2 * mpi as i64;
            let jm = (tj - two_m) / 2;
            let jpmp = (tj + two_mp) / 2;
            let mmp = (two_m - two_mp) / 2;
            let mut acc = 0.0;
            for k in 0.max(-mmp)..=jm.min(jpmp) {
                let d = delta_raw(tj, two_m, two_mp, k);
                if d == 0.0 {
                    continue;
                }
                let p_sin = (mmp + 2 * k) as i32;
                let p_plus = ((tj + two_mp) / 2 - k) as i32;
                let p_minus = ((tj - two_m) / 2 - k) as i32;
                acc += d * st.powi(p_sin) * (1.0 + ct).powi(p_plus) * (1.0 - ct).powi(p_minus);
            }
            out[(mi, mpi)] = prefactor * acc;
        }
    }
    Ok(out)
}

/// All spin blocks of `rho_a^{\otimes N}` with their multiplicities.
pub fn sigma_sectors(pair: &StatePair, which: usize, n: u32) -> Result<BlockOperator> {
    let mut sectors = Vec::new();
    for two_j in spin_values(n) {
        sectors.push(SpinSector {
            two_j,
            degeneracy: degeneracy(n, two_j)?,
            matrix: sigma_block(pair, which, n, two_j)?,
        });
    }
    Ok(BlockOperator { n_copies: n, sectors })
}

/// Wigner d-matrix d^{(j)}(beta), rows/columns ordered by descending m.
pub fn wigner_d(two_j: u32, beta: f64) -> DMatrix<f64> {
    let dim = two_j as usize + 1;
    let tj = two_j as i64;
    let c = (beta / 2.0).cos();
    let s = (beta / 2.0).sin();
    let mut out = DMatrix::zeros(dim, dim);
    for mi in 0..dim {
        let two_m = tj - 2 * mi as i64;
        for mpi in 0..dim {
            let two_mp = tj - 2 * mpi as i64;
            let jm = (tj - two_m) / 2;
            let jpmp = (tj + two_mp) / 2;
            let mmp = (two_m - two_mp) / 2;
            let mut acc = 0.0;
            for k in 0.max(-mmp)..=jm.min(jpmp) {
                let d = delta_raw(tj, two_m, two_mp, k);
                if d == 0.0 {
                    continue;
                }
                let p_sin = (mmp + 2 * k) as i32;
                let p_cos = (tj - mmp) as i32 - 2 * k as i32;
                let sign = if (mmp + k) % 2 == 0 { 1.0 } else { -1.0 };
                acc += d * sign * c.powi(p_cos) * s.powi(p_sin);
            }
            out[(mi, mpi)] = acc;
        }
    }
    out
}

/// Overlap of a computational bit string with the coupled state |j, m>
/// built from (N-2j)/2 leading singlet pairs and a fully symmetric tail.
///
/// `bits` holds one 0/1 per qubit, first qubit first. The value is zero for
/// every bit pattern outside the support (leading pairs other than 01/10 or
/// a tail magnetization different from m); malformed inputs are errors.
pub fn cg_coeff(n: u32, two_j: u32, two_m: i64, bits: &[u8]) -> Result<f64> {
    if bits.len() != n as usize {
        return Err(Error::domain(
            "bits",
            format!("expected {n} bits, got {}", bits.len()),
        ));
    }
    if bits.iter().any(|&b| b > 1) {
        return Err(Error::domain("bits", "entries must be 0 or 1"));
    }
    if two_j > n || (n - two_j) % 2 != 0 {
        return Err(Error::domain(
            "two_j",
            format!("spin 2j={two_j} invalid for N={n}"),
        ));
    }
    if two_m.abs() > two_j as i64 || (two_m - two_j as i64) % 2 != 0 {
        return Err(Error::domain(
            "two_m",
            format!("magnetic number 2m={two_m} invalid for 2j={two_j}"),
        ));
    }
    let pairs = ((n - two_j) / 2) as usize;
    let mut mu_pairs = 0u32;
    for i in 0..pairs {
        match (bits[2 * i], bits[2 * i + 1]) {
            (0, 1) => {}
            (1, 0) => mu_pairs += 1,
            _ => return Ok(0.0),
        }
    }
    let tail_ones: i64 = bits[2 * pairs..].iter().map(|&b| b as i64).sum();
    // bit 0 is spin up; tail magnetization (2j - 2*ones)/2 must equal m
    if two_j as i64 - 2 * tail_ones != two_m {
        return Ok(0.0);
    }
    let sign = if mu_pairs % 2 == 0 { 1.0 } else { -1.0 };
    let norm = binomial(two_j as i64, (two_j as i64 + two_m) / 2);
    Ok(sign * 0.5f64.powi(pairs as i32).sqrt() / norm.sqrt())
}

fn check_dense_cap(n: u32) -> Result<()> {
    if n > DENSE_CAP {
        return Err(Error::Resource(format!(
            "dense 2^N path refused for N={n} > {DENSE_CAP}"
        )));
    }
    Ok(())
}

/// Dense 2^N x 2^N operator with the given independent components.
///
/// Entry (row, col) equals E^q_r with r = |row AND col| and
/// q = |row OR col| (popcounts); the result is symmetric, permutation
/// invariant and exactly PT invariant for every bipartition.
pub fn reconstruct_dense(params: &ParamVector) -> Result<DMatrix<f64>> {
    let n = params.n_copies();
    check_dense_cap(n)?;
    let dim = 1usize << n;
    let mut out = DMatrix::zeros(dim, dim);
    for row in 0..dim {
        for col in 0..dim {
            let r = (row & col).count_ones();
            let q = (row | col).count_ones();
            out[(row, col)] = params.get(q, r);
        }
    }
    Ok(out)
}

/// Dense `rho_a^{\otimes N}` (Kronecker power), N <= 12.
pub fn sigma_dense(pair: &StatePair, which: usize, n: u32) -> Result<DMatrix<f64>> {
    check_dense_cap(n)?;
    let rho = DMatrix::from_fn(2, 2, |i, j| pair.rho(which)[(i, j)]);
    let mut out = DMatrix::from_element(1, 1, 1.0);
    for _ in 0..n {
        out = out.kronecker(&rho);
    }
    Ok(out)
}

/// One representative coupled basis for spin sector j, as a 2^N x (2j+1)
/// matrix of computational-basis amplitudes; column i holds |j, m = j - i>.
///
/// Projecting a dense permutation-invariant operator with this basis
/// (`V^T A V`) reproduces its spin-j block.
pub fn coupled_basis(n: u32, two_j: u32) -> Result<DMatrix<f64>> {
    check_dense_cap(n)?;
    let dim = 1usize << n;
    let cols = two_j as usize + 1;
    let mut out = DMatrix::zeros(dim, cols);
    let mut bits = vec![0u8; n as usize];
    for b in 0..dim {
        for (p, bit) in bits.iter_mut().enumerate() {
            *bit = ((b >> (n as usize - 1 - p)) & 1) as u8;
        }
        for mi in 0..cols {
            let two_m = two_j as i64 - 2 * mi as i64;
            out[(b, mi)] = cg_coeff(n, two_j, two_m, &bits)?;
        }
    }
    Ok(out)
}
