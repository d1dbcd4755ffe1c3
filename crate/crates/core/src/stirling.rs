//! Exact tables of `r`-associated Stirling cycle numbers `[n;k]_{≥r}`
//! (permutations of `n` with `k` cycles, all of length at least `r`), the
//! `r`-th order numbers `[n;k]^{(r)} = [n+(r-1)k; k]_{≥r}`, their generating
//! polynomials, and exact log-concavity and real-rootedness tests.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Triangle `values[n][k] = [n;k]_{≥r}` for `n <= n_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StirlingTable {
    r: usize,
    values: Vec<Vec<BigUint>>,
}

impl StirlingTable {
    /// Removing element `n` either leaves its cycle of length above `r`
    /// (`n - 1` insertion points), or deletes a whole `r`-cycle through `n`
    /// (`binom(n-1, r-1) (r-1)!` choices):
    /// `[n;k] = (n-1)[n-1;k] + binom(n-1,r-1)(r-1)! [n-r;k-1]`.
    /// `r = 0` is the same as `r = 1`.
    pub fn new(r: usize, n_max: usize) -> Self {
        let r = r.max(1);
        let mut values: Vec<Vec<BigUint>> = Vec::with_capacity(n_max + 1);
        values.push(vec![BigUint::one()]);
        for n in 1..=n_max {
            let k_max = n / r;
            let mut row = vec![BigUint::zero(); k_max + 1];
            let close = if n >= r {
                falling(n - 1, r - 1)
            } else {
                BigUint::zero()
            };
            for (k, slot) in row.iter_mut().enumerate() {
                let mut v = BigUint::zero();
                if let Some(prev) = values[n - 1].get(k) {
                    v += prev * BigUint::from(n - 1);
                }
                if k >= 1 && n >= r {
                    if let Some(prev) = values[n - r].get(k - 1) {
                        v += prev * &close;
                    }
                }
                *slot = v;
            }
            values.push(row);
        }
        Self { r, values }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    /// `[n;k]_{≥r}`; zero outside the stored triangle's support.
    pub fn get(&self, n: usize, k: usize) -> BigUint {
        assert!(n <= self.n_max(), "n = {n} beyond table size {}", self.n_max());
        self.values[n].get(k).cloned().unwrap_or_default()
    }

    pub fn row(&self, n: usize) -> &[BigUint] {
        &self.values[n]
    }

    /// One line per `n`: `n,[n;0],[n;1],...`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,values\n");
        for (n, row) in self.values.iter().enumerate() {
            let parts: Vec<String> = row.iter().map(BigUint::to_string).collect();
            out.push_str(&format!("{n},{}\n", parts.join(",")));
        }
        out
    }
}

/// `(n)(n-1)...(n-j+1)`, i.e. `binom(n, j) j!`.
fn falling(n: usize, j: usize) -> BigUint {
    (0..j).fold(BigUint::one(), |acc, i| acc * BigUint::from(n - i))
}

pub fn assoc_stirling(n: usize, k: usize, r: usize) -> BigUint {
    StirlingTable::new(r, n).get(n, k)
}

/// `[n;k]^{(r)} = [n + (r-1)k; k]_{≥r}`.
pub fn rth_order(n: usize, k: usize, r: usize) -> Result<BigUint> {
    if r == 0 {
        return Err(Error::invalid("the order r must be at least 1"));
    }
    Ok(assoc_stirling(n + (r - 1) * k, k, r))
}

/// Coefficients `[n;0]^{(r)}, ..., [n;n]^{(r)}` of `c_{r,n}(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CyclePolynomial {
    pub r: usize,
    pub n: usize,
    pub coeffs: Vec<BigUint>,
}

pub fn cycle_poly(r: usize, n: usize) -> Result<CyclePolynomial> {
    if r == 0 {
        return Err(Error::invalid("the order r must be at least 1"));
    }
    let table = StirlingTable::new(r, r * n);
    Ok(poly_from_table(&table, n))
}

fn poly_from_table(table: &StirlingTable, n: usize) -> CyclePolynomial {
    let r = table.r();
    CyclePolynomial {
        r,
        n,
        coeffs: (0..=n).map(|k| table.get(n + (r - 1) * k, k)).collect(),
    }
}

/// All `c_{r,n}` for `n <= n_max`, sharing one table.
pub fn cycle_polys(r: usize, n_max: usize) -> Result<Vec<CyclePolynomial>> {
    if r == 0 {
        return Err(Error::invalid("the order r must be at least 1"));
    }
    let table = StirlingTable::new(r, r * n_max);
    Ok((0..=n_max).map(|n| poly_from_table(&table, n)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LogConcavityViolation {
    /// A zero strictly inside the positive support.
    InternalZero { k: usize },
    /// `a_k² < a_{k-1} a_{k+1}`.
    Inequality { k: usize },
}

/// Checks `a_k² >= a_{k-1} a_{k+1}` on the support and that the support has
/// no internal zeros.
pub fn is_log_concave(coeffs: &[BigUint]) -> std::result::Result<(), LogConcavityViolation> {
    let Some(lo) = coeffs.iter().position(|c| !c.is_zero()) else {
        return Ok(());
    };
    let hi = coeffs.iter().rposition(|c| !c.is_zero()).expect("nonzero exists");
    if let Some(k) = (lo..=hi).find(|&k| coeffs[k].is_zero()) {
        return Err(LogConcavityViolation::InternalZero { k });
    }
    for k in lo + 1..hi {
        if &coeffs[k] * &coeffs[k] < &coeffs[k - 1] * &coeffs[k + 1] {
            return Err(LogConcavityViolation::Inequality { k });
        }
    }
    Ok(())
}

/// Dense polynomial over `ℤ`, lowest degree first, no trailing zeros.
type Poly = Vec<BigInt>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn degree(p: &Poly) -> usize {
    p.len() - 1
}

fn derivative(p: &Poly) -> Poly {
    trim(p.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
}

/// Divides out the positive content.
fn primitive(p: Poly) -> Poly {
    let g = p.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if g.is_zero() || g.is_one() {
        return p;
    }
    p.into_iter().map(|c| c / &g).collect()
}

/// `|lc(b)|^(deg a - deg b + 1) · a mod b`: a positive multiple of the
/// true remainder, so Sturm signs are preserved.
fn positive_pseudo_remainder(a: &Poly, b: &Poly) -> Poly {
    let mut r = a.clone();
    let lc = b.last().expect("nonzero divisor").clone();
    let scale = lc.abs();
    let db = degree(b);
    let steps = degree(a) + 1 - db;
    let mut done = 0;
    while !r.is_empty() && r.len() > db {
        let shift = r.len() - 1 - db;
        let lead = r.last().expect("nonempty").clone();
        // r <- |lc| r - sign(lc) lead x^shift b
        for c in r.iter_mut() {
            *c *= &scale;
        }
        let factor = if lc.sign() == Sign::Minus { -lead } else { lead };
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] -= &factor * bc;
        }
        r = trim(r);
        done += 1;
    }
    for _ in done..steps {
        for c in r.iter_mut() {
            *c *= &scale;
        }
    }
    r
}

fn sign_changes(signs: impl Iterator<Item = Sign>) -> usize {
    let mut last = Sign::NoSign;
    let mut changes = 0;
    for s in signs.filter(|&s| s != Sign::NoSign) {
        if last != Sign::NoSign && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

/// Whether every complex root is real. Powers of `x` are factored out; the
/// Sturm chain counts distinct real roots, which must equal the number of
/// distinct roots `deg p - deg gcd(p, p')`.
pub fn is_real_rooted(coeffs: &[BigInt]) -> Result<bool> {
    let p = trim(coeffs.to_vec());
    if p.is_empty() {
        return Err(Error::invalid("the zero polynomial has no roots to test"));
    }
    let zeros = p.iter().position(|c| !c.is_zero()).expect("nonzero");
    let p = primitive(p[zeros..].to_vec());
    if degree(&p) == 0 {
        return Ok(true);
    }
    let mut chain = vec![p.clone(), primitive(derivative(&p))];
    loop {
        let n = chain.len();
        let rem = positive_pseudo_remainder(&chain[n - 2], &chain[n - 1]);
        if rem.is_empty() {
            break;
        }
        chain.push(primitive(rem.into_iter().map(|c| -c).collect()));
    }
    let at_plus = sign_changes(chain.iter().map(|q| q.last().expect("nonzero").sign()));
    let at_minus = sign_changes(chain.iter().map(|q| {
        let s = q.last().expect("nonzero").sign();
        if degree(q) % 2 == 1 {
            -s
        } else {
            s
        }
    }));
    let distinct_real = at_minus - at_plus;
    let distinct = degree(&p) - degree(chain.last().expect("nonempty"));
    Ok(distinct_real == distinct)
}

pub fn to_signed(coeffs: &[BigUint]) -> Vec<BigInt> {
    coeffs.iter().map(|c| BigInt::from(c.clone())).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub r: usize,
    pub n_max: usize,
    pub all_hold: bool,
    /// Smallest `n` that fails, with the failure detail.
    pub first_failure: Option<(usize, String)>,
}

/// Log-concavity of `c_{r,n}` for `1 <= n <= n_max`.
pub fn log_concavity_sweep(r: usize, n_max: usize) -> Result<SweepReport> {
    let polys = cycle_polys(r, n_max)?;
    let failures: Vec<(usize, String)> = polys
        .par_iter()
        .skip(1)
        .filter_map(|p| is_log_concave(&p.coeffs).err().map(|v| (p.n, format!("{v:?}"))))
        .collect();
    Ok(SweepReport {
        r,
        n_max,
        all_hold: failures.is_empty(),
        first_failure: failures.into_iter().min(),
    })
}

/// Real-rootedness of `c_{r,n}` for `1 <= n <= n_max`.
pub fn real_rootedness_sweep(r: usize, n_max: usize) -> Result<SweepReport> {
    let polys = cycle_polys(r, n_max)?;
    let results: Vec<(usize, bool)> = polys
        .par_iter()
        .skip(1)
        .map(|p| Ok((p.n, is_real_rooted(&to_signed(&p.coeffs))?)))
        .collect::<Result<_>>()?;
    let first = results.iter().find(|(_, ok)| !ok).map(|&(n, _)| (n, "not real-rooted".to_string()));
    Ok(SweepReport {
        r,
        n_max,
        all_hold: first.is_none(),
        first_failure: first,
    })
}
