//! `pod(n)` tables: the generating function `1/ψ(-q)`, the product form
//! `(-q;q²)_∞ / (q²;q²)_∞`, and a partition enumerator used as ground truth.

mod fast;
mod frobenius;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::{
    pochhammer_inf, psi_series, CoefficientDomain, PochhammerSign, TruncatedSeries,
};

pub use fast::pod_residues_small;
pub use frobenius::pod_mod5_at;

/// The product route costs `O(N²)`; above this order only its prefix is
/// compared against the theta route.
pub const ROUTE_CHECK_LIMIT: usize = 20_000;

/// Largest modulus handled by the byte-wide residue engine.
pub const SMALL_MODULUS_MAX: u64 = 255;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PodMethod {
    Series,
    Enumeration,
}

/// `pod(0..=limit)` in one coefficient domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PodTable {
    series: TruncatedSeries,
    method: PodMethod,
}

impl PodTable {
    pub fn domain(&self) -> CoefficientDomain {
        self.series.domain()
    }

    pub fn limit(&self) -> usize {
        self.series.order()
    }

    pub fn method(&self) -> PodMethod {
        self.method
    }

    pub fn value(&self, n: usize) -> BigInt {
        self.series.coeff(n)
    }

    /// `pod(n) mod m`; `m` must divide the table modulus (any `m` for exact tables).
    pub fn residue(&self, n: usize, m: u64) -> u64 {
        self.series.coeff_mod(n, m)
    }

    /// Whether residues mod `m` can be read from this table.
    pub fn supports_modulus(&self, m: u64) -> bool {
        match self.domain() {
            CoefficientDomain::Exact => true,
            CoefficientDomain::Mod(t) => t % m == 0,
        }
    }

    pub fn as_series(&self) -> &TruncatedSeries {
        &self.series
    }

    pub fn reduce_mod(&self, m: u64) -> Result<PodTable> {
        Ok(PodTable {
            series: self.series.reduce_mod(m)?,
            method: self.method,
        })
    }
}

/// Coefficients of `1/ψ(-q)`, checked against `(-q;q²)_∞ / (q²;q²)_∞`.
pub fn pod_table_series(limit: usize, domain: CoefficientDomain) -> Result<PodTable> {
    let theta_route = match domain {
        CoefficientDomain::Mod(m) if m <= SMALL_MODULUS_MAX => {
            let small = pod_residues_small(limit, m as u8)?;
            TruncatedSeries::residue_unchecked(m, small.into_iter().map(u64::from).collect())
        }
        _ => pod_series_theta_route(limit, domain)?,
    };
    let product_route = pod_series_product_route(limit.min(ROUTE_CHECK_LIMIT), domain)?;
    if let Some(&index) = product_route.mismatches(&theta_route)?.first() {
        return Err(Error::RouteMismatch { index });
    }
    Ok(PodTable {
        series: theta_route,
        method: PodMethod::Series,
    })
}

/// `inverse(alternate_signs(ψ))` with the generic series inverse.
pub fn pod_series_theta_route(limit: usize, domain: CoefficientDomain) -> Result<TruncatedSeries> {
    psi_series(limit, domain).alternate_signs().inverse()
}

/// `(-q;q²)_∞ · (q²;q²)_∞^{-1}`.
pub fn pod_series_product_route(
    limit: usize,
    domain: CoefficientDomain,
) -> Result<TruncatedSeries> {
    let odd_distinct = pochhammer_inf(1, 2, PochhammerSign::Plus, limit, domain);
    let even_parts = pochhammer_inf(2, 2, PochhammerSign::Minus, limit, domain).inverse()?;
    odd_distinct.mul(&even_parts)
}

/// Enumerated table, reduced into `domain`.
pub fn pod_table_enum(limit: usize, domain: CoefficientDomain) -> Result<PodTable> {
    let counts = pod_enum_table(limit);
    let exact = TruncatedSeries::from_bigints(counts.into_iter().map(BigInt::from).collect())?;
    let series = match domain {
        CoefficientDomain::Exact => exact,
        CoefficientDomain::Mod(m) => exact.reduce_mod(m)?,
    };
    Ok(PodTable {
        series,
        method: PodMethod::Enumeration,
    })
}

/// Partitions of `n` whose odd parts are pairwise distinct.
pub fn pod_enum(n: usize) -> u128 {
    pod_enum_table(n)[n]
}

/// Counts partitions with weakly decreasing parts, each odd part used at
/// most once, memoized on (remaining, largest allowed part).
fn pod_enum_table(limit: usize) -> Vec<u128> {
    // ways[r][j]: partitions of r into parts <= j with distinct odd parts
    let mut ways = vec![vec![0u128; limit + 1]; limit + 1];
    ways[0].fill(1);
    for r in 1..=limit {
        for j in 1..=limit {
            let mut total = ways[r][j - 1];
            if j <= r {
                // largest part is j: even parts may repeat, an odd part may not
                let next_max = if j % 2 == 0 { j } else { j - 1 };
                total += ways[r - j][next_max];
            }
            ways[r][j] = total;
        }
    }
    (0..=limit).map(|r| ways[r][r]).collect()
}
