//! Explicit cost budgets for the fillers.

use num_bigint::BigUint;
use num_traits::{One, Pow};

use super::FillError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BudgetKind {
    /// `4^n`, the commutator bound.
    C4n,
    /// `c² 4^{n+1}`, the integer change-of-basis bound.
    Dc,
    /// `10 m² n² + 10`, the mod-`m` change-of-basis bound.
    Km,
    /// `4n³ + n D₁(2n) + (2^{2n}(2n+1)n)² 4^{6n}`.
    GammaSum,
    /// `4n³ + n K_m(n) + 12 n² K_m(n) + 8 m n²`.
    GammaMSum,
    /// `6 n K_m(n) + 4 m n`.
    TauSum,
    /// `6 K_m(n)`.
    ReduceDeg,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BudgetParams {
    pub n: u64,
    pub c: u64,
    pub m: u64,
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

pub fn c4n(n: u64) -> BigUint {
    big(4).pow(n)
}

pub fn dc(c: u64, n: u64) -> BigUint {
    big(c) * big(c) * big(4).pow(n + 1)
}

pub fn km(m: u64, n: u64) -> BigUint {
    big(10) * big(m) * big(m) * big(n) * big(n) + big(10)
}

pub fn gamma_sum(n: u64) -> BigUint {
    let terms = (big(2).pow(2 * n)) * big(2 * n + 1) * big(n);
    big(4) * big(n).pow(3u32) + big(n) * dc(1, 2 * n) + &terms * &terms * c4n(6 * n)
}

pub fn gamma_m_sum(m: u64, n: u64) -> BigUint {
    let k = km(m, n);
    big(4) * big(n).pow(3u32)
        + big(n) * &k
        + big(12) * big(n) * big(n) * &k
        + big(8) * big(m) * big(n) * big(n)
}

pub fn tau_sum(m: u64, n: u64) -> BigUint {
    big(6) * big(n) * km(m, n) + big(4) * big(m) * big(n)
}

pub fn reduce_deg(m: u64, n: u64) -> BigUint {
    big(6) * km(m, n)
}

pub fn cost_budget(kind: BudgetKind, p: BudgetParams) -> Result<BigUint, FillError> {
    let needs_m = matches!(
        kind,
        BudgetKind::Km | BudgetKind::GammaMSum | BudgetKind::TauSum | BudgetKind::ReduceDeg
    );
    if needs_m && p.m < 2 {
        return Err(FillError::OutOfRange(format!(
            "modulus {} must be at least 2",
            p.m
        )));
    }
    Ok(match kind {
        BudgetKind::C4n => c4n(p.n),
        BudgetKind::Dc => dc(p.c, p.n),
        BudgetKind::Km => km(p.m, p.n),
        BudgetKind::GammaSum => gamma_sum(p.n),
        BudgetKind::GammaMSum => gamma_m_sum(p.m, p.n),
        BudgetKind::TauSum => tau_sum(p.m, p.n),
        BudgetKind::ReduceDeg => reduce_deg(p.m, p.n),
    })
}

/// Largest `C(i)` bound for `0 ≤ i ≤ k`.
pub fn max_c(k: u64) -> BigUint {
    if k == 0 {
        BigUint::one()
    } else {
        c4n(k)
    }
}
