use std::time::Instant;

use num_bigint::BigInt;

use super::report::{saturate, Counterexample, Tally, VerificationReport};
use crate::arith::{
    is_prime, rk_series, square_triangular_factor, t4_closed, t8_closed, t_enum_table, tk_series,
};
use crate::error::{Error, Result};
use crate::pod::{pod_table_series, PodTable};
use crate::series::{
    pochhammer_inf, psi_series, CoefficientDomain, PochhammerSign, TruncatedSeries,
};

/// Smallest truncation accepted by the replays.
pub const MIN_TRUNC: usize = 16;

/// Identity chains that can be replayed coefficientwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Identity {
    /// `(q;q)^{p^α} ≡ (q^p;q^p)^{p^{α−1}} (mod p^α)`.
    PAlpha { p: u64, alpha: u32 },
    /// `pod(3n+2)` against `ψ^5` and `r_5(8n+5)` mod 9, step by step.
    Thm1Chain,
    /// `pod(5n+2)` against `ψ^3` and `r_3(8n+3)` mod 5, step by step.
    Thm3Chain,
    /// `t_4(pn+(p−1)/2) ≡ t_4(n) (mod p)` and `t_8(pn+p−1) ≡ t_8(n) (mod p³)`.
    T4T8 { p: u64 },
}

impl Identity {
    /// Parses an identity name; `p`/`alpha` are required where the identity uses them.
    pub fn parse(id: &str, p: Option<u64>, alpha: Option<u32>) -> Result<Identity> {
        let need_p = || p.ok_or_else(|| Error::InvalidArgument(format!("identity {id} needs p")));
        match id {
            "palpha" => Ok(Identity::PAlpha {
                p: need_p()?,
                alpha: alpha
                    .ok_or_else(|| Error::InvalidArgument("identity palpha needs alpha".into()))?,
            }),
            "thm1_chain" | "thm1-chain" => Ok(Identity::Thm1Chain),
            "thm3_chain" | "thm3-chain" => Ok(Identity::Thm3Chain),
            "t4t8" => Ok(Identity::T4T8 { p: need_p()? }),
            other => Err(Error::UnknownId(other.to_string())),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Identity::PAlpha { p, alpha } => format!("palpha(p={p},alpha={alpha})"),
            Identity::Thm1Chain => "thm1_chain".into(),
            Identity::Thm3Chain => "thm3_chain".into(),
            Identity::T4T8 { p } => format!("t4t8(p={p})"),
        }
    }
}

/// Replays an identity to order `trunc`, one report per step.
pub fn replay_identity(identity: Identity, trunc: usize) -> Result<Vec<VerificationReport>> {
    if trunc < MIN_TRUNC {
        return Err(Error::InvalidArgument(format!(
            "trunc must be at least {MIN_TRUNC}, got {trunc}"
        )));
    }
    let mut steps = Steps {
        id: identity.name(),
        trunc,
        reports: Vec::new(),
    };
    match identity {
        Identity::PAlpha { p, alpha } => palpha(&mut steps, p, alpha)?,
        Identity::Thm1Chain => chain(&mut steps, &CHAIN_MOD9)?,
        Identity::Thm3Chain => chain(&mut steps, &CHAIN_MOD5)?,
        Identity::T4T8 { p } => t4t8(&mut steps, p)?,
    }
    Ok(steps.reports)
}

struct Steps {
    id: String,
    trunc: usize,
    reports: Vec<VerificationReport>,
}

impl Steps {
    fn compare(
        &mut self,
        label: &str,
        modulus: u64,
        lhs: &TruncatedSeries,
        rhs: &TruncatedSeries,
    ) -> Result<()> {
        self.compare_to(self.trunc, label, modulus, lhs, rhs)
    }

    /// Compares `lhs` and `rhs` on `0..=order`, after reducing both to
    /// `modulus` (0 compares over the integers).
    fn compare_to(
        &mut self,
        order: usize,
        label: &str,
        modulus: u64,
        lhs: &TruncatedSeries,
        rhs: &TruncatedSeries,
    ) -> Result<()> {
        let started = Instant::now();
        if lhs.order() < order || rhs.order() < order {
            return Err(Error::InsufficientCoverage {
                have: lhs.order().min(rhs.order()) as u64,
                need: order as u64,
            });
        }
        let mut tally = Tally::default();
        for n in 0..=order {
            let (l, r) = if modulus == 0 {
                let (l, r) = (lhs.coeff(n), rhs.coeff(n));
                if l == r {
                    tally.pass();
                    continue;
                }
                (saturate(&l), saturate(&r))
            } else {
                (lhs.coeff_mod(n, modulus), rhs.coeff_mod(n, modulus))
            };
            tally.record(l == r, || Counterexample {
                n: n as u64,
                index: n as u128,
                pod_residue: l,
                expected_residue: r,
            });
        }
        let report = tally.into_report(self.id.clone(), label, modulus, order as u64, started);
        self.reports.push(report);
        Ok(())
    }
}

fn euler(order: usize, domain: CoefficientDomain) -> TruncatedSeries {
    pochhammer_inf(1, 1, PochhammerSign::Minus, order, domain)
}

fn palpha(steps: &mut Steps, p: u64, alpha: u32) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if alpha == 0 {
        return Err(Error::InvalidArgument("alpha must be at least 1".into()));
    }
    let m = p
        .checked_pow(alpha)
        .ok_or_else(|| Error::Overflow(format!("{p}^{alpha}")))?;
    let domain = CoefficientDomain::modular(m)?;
    let order = steps.trunc;
    let lhs = euler(order, domain).pow(m);
    let rhs = euler(order / p as usize, domain)
        .inflate_capped(p as usize, order)?
        .pow(m / p);
    steps.compare(
        &format!("(q;q)^{m} ≡ (q^{p};q^{p})^{} (mod {m})", m / p),
        m,
        &lhs,
        &rhs,
    )
}

fn t4t8(steps: &mut Steps, p: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::NotOddPrime(p as i64));
    }
    let order = steps.trunc;
    let p_us = p as usize;
    let big = p_us * order + p_us - 1;
    let t4 = tk_series(4, big, CoefficientDomain::Exact)?;
    let t4_closed_form = TruncatedSeries::from_bigints(
        (0..=big as u64)
            .map(|n| BigInt::from(t4_closed(n)))
            .collect(),
    )?;
    steps.compare(
        "ψ^4 = Σ σ(2n+1) q^n",
        0,
        &t4.truncate(order),
        &t4_closed_form.truncate(order),
    )?;
    steps.compare(
        &format!("t_4({p}n+{}) ≡ t_4(n) (mod {p})", (p - 1) / 2),
        p,
        &t4.dissect((p_us - 1) / 2, p_us)?,
        &t4,
    )?;
    let t8 = tk_series(8, big, CoefficientDomain::Exact)?;
    let t8_closed_form = TruncatedSeries::from_bigints(
        (0..=big as u64)
            .map(|n| BigInt::from(t8_closed(n)))
            .collect(),
    )?;
    steps.compare(
        "ψ^8 = Σ Σ_{d | n+1, d odd} ((n+1)/d)^3 q^n",
        0,
        &t8.truncate(order),
        &t8_closed_form.truncate(order),
    )?;
    let cube = p * p * p;
    steps.compare(
        &format!("t_8({p}n+{}) ≡ t_8(n) (mod {cube})", p - 1),
        cube,
        &t8.dissect(p_us - 1, p_us)?,
        &t8,
    )
}

/// One dissection chain. With `P(−q) = Σ pod(n)(−q)^n`: `ψ^M·P(−q) = ψ^{M−1}`,
/// `ψ^M ≡ ψ(q^s)^j (mod M)`, extract the `q^{sn+2}` terms, cancel `ψ^j` to reach
/// `Σ pod(sn+2)(−q)^n ≡ ψ^k`, then pass to `r_k(8n+k)`.
struct Chain {
    /// Dissection step `s` (3 or 5).
    s: usize,
    modulus: u64,
    /// `j` above.
    inflated_power: u64,
    /// `k = M − 1 − j`.
    k: u32,
    /// Sign exponent and coefficient of the final relation.
    e: u64,
    c: i64,
}

const CHAIN_MOD9: Chain = Chain {
    s: 3,
    modulus: 9,
    inflated_power: 3,
    k: 5,
    e: 1,
    c: 2,
};
const CHAIN_MOD5: Chain = Chain {
    s: 5,
    modulus: 5,
    inflated_power: 1,
    k: 3,
    e: 0,
    c: 2,
};

fn chain(steps: &mut Steps, ch: &Chain) -> Result<()> {
    let order = steps.trunc;
    let (s, m) = (ch.s, ch.modulus);
    let full = s * order + 2;
    let exact = CoefficientDomain::Exact;
    let md = CoefficientDomain::Mod(m);
    let top = m; // ψ^top · P(−q) = ψ^{top−1}
    let below = ch.k + ch.inflated_power as u32; // = top − 1

    // P(−q) = Σ pod(n)(−q)^n, from the pod table rather than from 1/ψ
    let pod: PodTable = pod_table_series(full, exact)?;
    let pod_neg = pod.as_series().alternate_signs();
    let psi = psi_series(full, exact);

    // ψ^top · P(−q) = ψ^{top−1} exactly
    let psi_top = psi.pow(top);
    let psi_below = psi.pow(below as u64);
    steps.compare_to(
        full,
        &format!("ψ^{top} · Σ pod(n)(−q)^n = ψ^{below}"),
        0,
        &psi_top.mul(&pod_neg)?,
        &psi_below,
    )?;

    // ψ^{top−1} = Σ t_{top−1}(n) q^n, closed form where one exists
    let closed = closed_form_series(below, full)?;
    steps.compare_to(
        full,
        &format!("ψ^{below} = Σ t_{below}(n) q^n"),
        0,
        &psi_below,
        &closed,
    )?;

    // Frobenius: ψ^top ≡ ψ(q^s)^{inflated_power} (mod M)
    let psi_m = psi_top.reduce_mod(m)?;
    let inflated = psi_series(full / s, md)
        .inflate_capped(s, full)?
        .pow(ch.inflated_power);
    steps.compare_to(
        full,
        &format!("ψ^{top} ≡ ψ(q^{s})^{} (mod {m})", ch.inflated_power),
        m,
        &psi_m,
        &inflated,
    )?;

    // ψ(q^s)^{·} · P(−q) ≡ ψ^{top−1} (mod M)
    let pod_neg_m = pod_neg.reduce_mod(m)?;
    let psi_below_m = psi_below.reduce_mod(m)?;
    let lhs = inflated.mul(&pod_neg_m)?;
    let label = format!(
        "ψ(q^{s})^{} · Σ pod(n)(−q)^n ≡ ψ^{below} (mod {m})",
        ch.inflated_power
    );
    steps.compare_to(full, &label, m, &lhs, &psi_below_m)?;

    // extracting q^{sn+2}: the inflated factor passes through the dissection
    let sub = pod
        .as_series()
        .dissect(2, s)?
        .alternate_signs()
        .reduce_mod(m)?; // Σ pod(sn+2)(−q)^n
    let psi_m_small = psi_series(order, md);
    let psi_pow_small = psi_m_small.pow(ch.inflated_power);
    let dissected = lhs.dissect(2, s)?;
    steps.compare(
        &format!(
            "[q^{{{s}n+2}}] ψ(q^{s})^{} Σ pod(n)(−q)^n = ψ^{} · Σ pod({s}n+2)(−q)^n (mod {m})",
            ch.inflated_power, ch.inflated_power
        ),
        m,
        &dissected,
        &psi_pow_small.mul(&sub.truncate(order))?,
    )?;

    // t_{top−1}(sn+2) ≡ t_{top−1}(n) (mod M)
    steps.compare(
        &format!("t_{below}({s}n+2) ≡ t_{below}(n) (mod {m})"),
        m,
        &psi_below_m.dissect(2, s)?,
        &psi_below_m.truncate(order),
    )?;

    // ψ^{·} · Σ pod(sn+2)(−q)^n ≡ ψ^{top−1} (mod M)
    steps.compare(
        &format!(
            "ψ^{} · Σ pod({s}n+2)(−q)^n ≡ ψ^{below} (mod {m})",
            ch.inflated_power
        ),
        m,
        &psi_pow_small.mul(&sub.truncate(order))?,
        &psi_below_m.truncate(order),
    )?;

    // cancel: Σ pod(sn+2)(−q)^n ≡ ψ^k (mod M)
    let psi_k = psi_m_small.pow(ch.k as u64);
    steps.compare(
        &format!("Σ pod({s}n+2)(−q)^n ≡ ψ^{} (mod {m})", ch.k),
        m,
        &sub,
        &psi_k,
    )?;

    // ψ^k = Σ t_k(n) q^n by enumeration
    let tk_exact = tk_series(ch.k, order, exact)?;
    let t_enum = TruncatedSeries::from_bigints(
        t_enum_table(ch.k, order)?
            .into_iter()
            .map(BigInt::from)
            .collect(),
    )?;
    steps.compare(
        &format!("ψ^{} = Σ t_{}(n) q^n", ch.k, ch.k),
        0,
        &tk_exact,
        &t_enum,
    )?;

    // r_k(8n+k) = factor · t_k(n)
    let rk = rk_series(ch.k, 8 * order + ch.k as usize, exact)?.dissect(ch.k as usize, 8)?;
    let factor = square_triangular_factor(ch.k);
    steps.compare(
        &format!("r_{}(8n+{}) = {factor} · t_{}(n)", ch.k, ch.k, ch.k),
        0,
        &rk,
        &tk_exact.scale(factor as i64),
    )?;

    // the relation itself: pod(sn+2) ≡ c(−1)^{n+e} r_k(8n+k) (mod M)
    let pod_sub = pod.as_series().dissect(2, s)?.reduce_mod(m)?;
    let mut rhs = rk.reduce_mod(m)?.scale(ch.c).alternate_signs();
    if ch.e % 2 == 1 {
        rhs = rhs.neg();
    }
    let sign = if ch.e % 2 == 1 { "n+1" } else { "n" };
    steps.compare(
        &format!(
            "pod({s}n+2) ≡ {}(−1)^{{{sign}}} r_{}(8n+{}) (mod {m})",
            ch.c, ch.k, ch.k
        ),
        m,
        &pod_sub,
        &rhs,
    )
}

/// `Σ t_k(n) q^n` from a divisor-sum closed form (`k = 4, 8`) or enumeration.
fn closed_form_series(k: u32, order: usize) -> Result<TruncatedSeries> {
    let values: Vec<BigInt> = match k {
        4 => (0..=order as u64)
            .map(|n| BigInt::from(t4_closed(n)))
            .collect(),
        8 => (0..=order as u64)
            .map(|n| BigInt::from(t8_closed(n)))
            .collect(),
        _ => t_enum_table(k, order)?
            .into_iter()
            .map(BigInt::from)
            .collect(),
    };
    TruncatedSeries::from_bigints(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_verified(reports: &[VerificationReport]) -> bool {
        reports.iter().all(|r| r.verified())
    }

    #[test]
    fn palpha_small_cases() {
        for (p, a) in [(2, 1), (3, 1), (3, 2), (5, 1)] {
            let reports = replay_identity(Identity::PAlpha { p, alpha: a }, 200).unwrap();
            assert!(all_verified(&reports), "p={p} alpha={a}");
        }
    }

    #[test]
    fn palpha_rejects_composite() {
        assert_eq!(
            replay_identity(Identity::PAlpha { p: 4, alpha: 1 }, 100).unwrap_err(),
            Error::NotPrime(4)
        );
    }

    #[test]
    fn palpha_wrong_modulus_fails() {
        // (q;q)^2 ≡ (q^2;q^2) holds mod 2 but not mod 4
        let m = 4u64;
        let domain = CoefficientDomain::Mod(m);
        let lhs = euler(50, domain).pow(2);
        let rhs = euler(25, domain).inflate_capped(2, 50).unwrap();
        assert!(!lhs.mismatches(&rhs).unwrap().is_empty());
    }

    #[test]
    fn chains_verify() {
        for id in [Identity::Thm1Chain, Identity::Thm3Chain] {
            let reports = replay_identity(id, 60).unwrap();
            assert!(reports.len() >= 9);
            for r in &reports {
                assert!(r.verified(), "{}: {}", r.family, r.instance);
            }
        }
    }

    #[test]
    fn t4t8_verifies() {
        for p in [3, 5, 7] {
            assert!(all_verified(
                &replay_identity(Identity::T4T8 { p }, 40).unwrap()
            ));
        }
    }

    #[test]
    fn small_trunc_rejected() {
        assert!(replay_identity(Identity::Thm1Chain, 15).is_err());
    }
}
