use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use serde::Serialize;

/// Counterexamples kept per report; the full count is in `violations`.
pub const COUNTEREXAMPLE_CAP: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Falsified,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Verified => "verified",
            Status::Falsified => "falsified",
        })
    }
}

/// One failed check: at parameter `n`, `pod(index)` (or the left-hand
/// coefficient) reduced to `pod_residue` instead of `expected_residue`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub n: u64,
    pub index: u128,
    pub pod_residue: u64,
    pub expected_residue: u64,
}

/// Outcome of one sweep. Serializes with a fixed field order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub family: String,
    pub instance: String,
    /// 0 for checks made over the integers.
    pub modulus: u64,
    pub n_max: u64,
    pub checked: u64,
    pub status: Status,
    pub counterexamples: Vec<Counterexample>,
    pub elapsed_ms: u64,
    #[serde(skip)]
    pub violations: u64,
}

impl VerificationReport {
    /// Builds a report from every violation found, in index order.
    pub fn new(
        family: impl Into<String>,
        instance: impl Into<String>,
        modulus: u64,
        n_max: u64,
        checked: u64,
        all_violations: Vec<Counterexample>,
        started: Instant,
    ) -> Self {
        let violations = all_violations.len() as u64;
        let mut counterexamples = all_violations;
        counterexamples.truncate(COUNTEREXAMPLE_CAP);
        VerificationReport {
            family: family.into(),
            instance: instance.into(),
            modulus,
            n_max,
            checked,
            status: if violations == 0 {
                Status::Verified
            } else {
                Status::Falsified
            },
            counterexamples,
            elapsed_ms: started.elapsed().as_millis() as u64,
            violations,
        }
    }

    pub fn verified(&self) -> bool {
        self.status == Status::Verified
    }
}

/// Collects violations without keeping more than the cap.
#[derive(Debug, Default)]
pub(crate) struct Tally {
    pub checked: u64,
    pub violations: u64,
    pub kept: Vec<Counterexample>,
}

impl Tally {
    pub fn pass(&mut self) {
        self.checked += 1;
    }

    pub fn fail(&mut self, c: Counterexample) {
        self.checked += 1;
        self.violations += 1;
        if self.kept.len() < COUNTEREXAMPLE_CAP {
            self.kept.push(c);
        }
    }

    pub fn record(&mut self, ok: bool, c: impl FnOnce() -> Counterexample) {
        if ok {
            self.pass()
        } else {
            self.fail(c())
        }
    }

    pub fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.violations += other.violations;
        let room = COUNTEREXAMPLE_CAP - self.kept.len();
        self.kept.extend(other.kept.into_iter().take(room));
        self
    }

    pub fn into_report(
        self,
        family: impl Into<String>,
        instance: impl Into<String>,
        modulus: u64,
        n_max: u64,
        started: Instant,
    ) -> VerificationReport {
        let mut r = VerificationReport::new(
            family,
            instance,
            modulus,
            n_max,
            self.checked,
            self.kept,
            started,
        );
        r.violations = self.violations;
        r.status = if self.violations == 0 {
            Status::Verified
        } else {
            Status::Falsified
        };
        r
    }
}

/// Clamps an integer into the `u64` residue fields of a counterexample.
pub(crate) fn saturate(v: &BigInt) -> u64 {
    u64::try_from(v).unwrap_or(if v.sign() == num_bigint::Sign::Minus {
        0
    } else {
        u64::MAX
    })
}
