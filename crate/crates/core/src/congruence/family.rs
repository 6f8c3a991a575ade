use std::fmt;

use serde::Serialize;

use crate::arith::is_prime;
use crate::error::{Error, Result};

/// `mul·α + add`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Affine {
    pub mul: u32,
    pub add: u32,
}

impl Affine {
    pub const fn new(mul: u32, add: u32) -> Self {
        Affine { mul, add }
    }

    pub fn at(&self, alpha: u64) -> Result<u32> {
        (self.mul as u64)
            .checked_mul(alpha)
            .and_then(|v| v.checked_add(self.add as u64))
            .and_then(|v| u32::try_from(v).ok())
            .ok_or_else(|| {
                Error::Overflow(format!("exponent {}α+{} at α={alpha}", self.mul, self.add))
            })
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.mul, self.add) {
            (0, a) => write!(f, "{a}"),
            (1, 0) => write!(f, "α"),
            (m, 0) => write!(f, "{m}α"),
            (1, a) => write!(f, "α+{a}"),
            (m, a) => write!(f, "{m}α+{a}"),
        }
    }
}

/// `pod(step·n + offset) ≡ 0 (mod M)` for all `n ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Progression {
    pub step: u128,
    pub offset: u128,
}

/// `pod(a·n + b) ≡ c·(−1)^{n+e}·r_k(8n + k) (mod M)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RelationSpec {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub e: u64,
    pub k: u32,
}

/// Single index `(coefficient·p^{exponent(α)}·N + 1) / 8`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IndexRule {
    pub coefficient: u64,
    pub exponent: Affine,
}

/// Progression `base^{step_exponent(α)}·n + (offset_coefficient·base^{offset_exponent(α)} + 1) / 8`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProgressionRule {
    pub base: u64,
    pub step_exponent: Affine,
    pub offset_coefficient: u64,
    pub offset_exponent: Affine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ParametricRule {
    Index(IndexRule),
    Progression(ProgressionRule),
}

impl ParametricRule {
    /// Whether the rule reads `p` and `N` (index rules) or only `α`.
    pub fn uses_prime(&self) -> bool {
        matches!(self, ParametricRule::Index(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum FamilyForm {
    Progressions(Vec<Progression>),
    Relation(RelationSpec),
    Parametric(ParametricRule),
}

/// Hypotheses on `(p, α, N)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SideCondition {
    /// `p` prime and `p ≥ min`.
    Prime {
        min: u64,
    },
    /// `p mod modulus` is one of `residues`.
    PrimeResidue {
        modulus: u64,
        residues: Vec<u64>,
    },
    /// `p·N ≡ residue (mod modulus)`.
    ProductResidue {
        modulus: u64,
        residue: u64,
    },
    /// `p ∤ N`.
    Coprime,
    AlphaAtLeast(u64),
    /// `N ≥ 1`.
    NPositive,
}

impl SideCondition {
    /// The predicate in positive form, e.g. `pN ≡ 3 (mod 8)`.
    pub fn describe(&self) -> String {
        match self {
            SideCondition::Prime { min } => format!("p prime, p ≥ {min}"),
            SideCondition::PrimeResidue { modulus, residues } => {
                format!("p ≡ {} (mod {modulus})", join(residues))
            }
            SideCondition::ProductResidue { modulus, residue } => {
                format!("pN ≡ {residue} (mod {modulus})")
            }
            SideCondition::Coprime => "p ∤ N".into(),
            SideCondition::AlphaAtLeast(k) => format!("α ≥ {k}"),
            SideCondition::NPositive => "N ≥ 1".into(),
        }
    }

    /// The predicate as it reads when it fails, e.g. `pN ≢ 3 (mod 8)`.
    pub fn describe_failure(&self) -> String {
        match self {
            SideCondition::Prime { min } => format!("p is not a prime ≥ {min}"),
            SideCondition::PrimeResidue { modulus, residues } => {
                format!("p ≢ {} (mod {modulus})", join(residues))
            }
            SideCondition::ProductResidue { modulus, residue } => {
                format!("pN ≢ {residue} (mod {modulus})")
            }
            SideCondition::Coprime => "p | N".into(),
            SideCondition::AlphaAtLeast(k) => format!("α < {k}"),
            SideCondition::NPositive => "N < 1".into(),
        }
    }
}

fn join(values: &[u64]) -> String {
    values
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

/// One congruence statement with its hypotheses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongruenceFamily {
    pub id: &'static str,
    pub modulus: u64,
    pub form: FamilyForm,
    pub side_conditions: Vec<SideCondition>,
    pub statement: String,
}

impl CongruenceFamily {
    pub fn is_parametric(&self) -> bool {
        matches!(self.form, FamilyForm::Parametric(_))
    }
}

/// How `N` is supplied: a single value, or `N = step·n + offset` swept with `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NParam {
    Value(u64),
    Progression { step: u64, offset: u64 },
}

impl fmt::Display for NParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NParam::Value(v) => write!(f, "{v}"),
            NParam::Progression { step, offset } => write!(f, "{step}n+{offset}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Substitution {
    pub p: Option<u64>,
    pub alpha: Option<u64>,
    pub n: Option<NParam>,
}

impl Substitution {
    pub const NONE: Substitution = Substitution {
        p: None,
        alpha: None,
        n: None,
    };
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(p) = self.p {
            parts.push(format!("p={p}"));
        }
        if let Some(a) = self.alpha {
            parts.push(format!("alpha={a}"));
        }
        if let Some(n) = self.n {
            parts.push(format!("N={n}"));
        }
        write!(f, "{}", parts.join(" "))
    }
}

/// What a concrete instance asserts to vanish mod `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Target {
    /// `pod(step·n + offset)` for `n ≥ 0`, skipping `n ≡ exclude.1 (mod exclude.0)`.
    Progression {
        step: u128,
        offset: u128,
        exclude: Option<(u64, u64)>,
    },
    Index(u128),
}

impl Target {
    pub fn index_at(&self, n: u64) -> Option<u128> {
        match *self {
            Target::Progression { step, offset, .. } => {
                step.checked_mul(n as u128)?.checked_add(offset)
            }
            Target::Index(i) => Some(i),
        }
    }

    pub fn excludes(&self, n: u64) -> bool {
        match *self {
            Target::Progression {
                exclude: Some((m, r)),
                ..
            } => n % m == r,
            _ => false,
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Target::Progression { step, offset, .. } => write!(f, "pod({step}n+{offset})"),
            Target::Index(i) => write!(f, "pod({i})"),
        }
    }
}

/// A family with all parameters substituted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyInstance {
    pub family: String,
    pub modulus: u64,
    pub substitution: Substitution,
    pub targets: Vec<Target>,
}

impl FamilyInstance {
    /// Ad hoc `pod(A·n + B) ≡ 0 (mod M)`.
    pub fn progression(a: u128, b: u128, modulus: u64) -> Result<Self> {
        if a == 0 {
            return Err(Error::InvalidArgument(
                "progression step must be at least 1".into(),
            ));
        }
        if modulus < 2 {
            return Err(Error::InvalidModulus(modulus));
        }
        Ok(FamilyInstance {
            family: "inline".into(),
            modulus,
            substitution: Substitution::NONE,
            targets: vec![Target::Progression {
                step: a,
                offset: b,
                exclude: None,
            }],
        })
    }

    /// Readable form used as the report's `instance` field.
    pub fn describe(&self) -> String {
        let targets: Vec<String> = self.targets.iter().map(Target::to_string).collect();
        let mut body = format!("{} ≡ 0 (mod {})", targets.join(", "), self.modulus);
        for t in &self.targets {
            if let Target::Progression {
                exclude: Some((m, r)),
                ..
            } = t
            {
                body.push_str(&format!(" for n ≢ {r} (mod {m})"));
            }
        }
        let sub = self.substitution.to_string();
        if sub.is_empty() {
            body
        } else {
            format!("{sub}: {body}")
        }
    }
}

const fn aff(mul: u32, add: u32) -> Affine {
    Affine::new(mul, add)
}

/// The full catalog of congruence statements checked by the engine.
pub fn builtin_families() -> Vec<CongruenceFamily> {
    use SideCondition::*;
    let odd_prime = || Prime { min: 3 };
    let index = |coefficient, exponent| {
        FamilyForm::Parametric(ParametricRule::Index(IndexRule {
            coefficient,
            exponent,
        }))
    };
    let prog = |base, step_exponent, offset_coefficient, offset_exponent| {
        FamilyForm::Parametric(ParametricRule::Progression(ProgressionRule {
            base,
            step_exponent,
            offset_coefficient,
            offset_exponent,
        }))
    };
    let progs = |pairs: &[(u128, u128)]| {
        FamilyForm::Progressions(
            pairs
                .iter()
                .map(|&(step, offset)| Progression { step, offset })
                .collect(),
        )
    };
    vec![
        CongruenceFamily {
            id: "thm1",
            modulus: 9,
            form: FamilyForm::Relation(RelationSpec {
                a: 3,
                b: 2,
                c: 2,
                e: 1,
                k: 5,
            }),
            side_conditions: vec![],
            statement: "pod(3n+2) ≡ 2(−1)^{n+1} r_5(8n+5) (mod 9)".into(),
        },
        CongruenceFamily {
            id: "thm2a",
            modulus: 3,
            form: index(3, aff(6, 5)),
            side_conditions: vec![
                odd_prime(),
                PrimeResidue {
                    modulus: 3,
                    residues: vec![1],
                },
                ProductResidue {
                    modulus: 8,
                    residue: 5,
                },
                NPositive,
            ],
            statement: "pod((3p^{6α+5}N+1)/8) ≡ 0 (mod 3)".into(),
        },
        CongruenceFamily {
            id: "thm2b",
            modulus: 9,
            form: index(3, aff(18, 17)),
            side_conditions: vec![
                odd_prime(),
                PrimeResidue {
                    modulus: 3,
                    residues: vec![1],
                },
                ProductResidue {
                    modulus: 8,
                    residue: 5,
                },
                NPositive,
            ],
            statement: "pod((3p^{18α+17}N+1)/8) ≡ 0 (mod 9)".into(),
        },
        CongruenceFamily {
            id: "thm2c",
            modulus: 9,
            form: index(3, aff(4, 3)),
            side_conditions: vec![
                odd_prime(),
                PrimeResidue {
                    modulus: 3,
                    residues: vec![2],
                },
                ProductResidue {
                    modulus: 8,
                    residue: 5,
                },
                NPositive,
            ],
            statement: "pod((3p^{4α+3}N+1)/8) ≡ 0 (mod 9)".into(),
        },
        CongruenceFamily {
            id: "thm3",
            modulus: 5,
            form: FamilyForm::Relation(RelationSpec {
                a: 5,
                b: 2,
                c: 2,
                e: 0,
                k: 3,
            }),
            side_conditions: vec![],
            statement: "pod(5n+2) ≡ 2(−1)^n r_3(8n+3) (mod 5)".into(),
        },
        CongruenceFamily {
            id: "thm4a",
            modulus: 5,
            form: prog(5, aff(2, 2), 11, aff(2, 1)),
            side_conditions: vec![AlphaAtLeast(1)],
            statement: "pod(5^{2α+2}n + (11·5^{2α+1}+1)/8) ≡ 0 (mod 5)".into(),
        },
        CongruenceFamily {
            id: "thm4b",
            modulus: 5,
            form: prog(5, aff(2, 2), 19, aff(2, 1)),
            side_conditions: vec![AlphaAtLeast(1)],
            statement: "pod(5^{2α+2}n + (19·5^{2α+1}+1)/8) ≡ 0 (mod 5)".into(),
        },
        CongruenceFamily {
            id: "thm5",
            modulus: 5,
            form: index(5, aff(0, 3)),
            side_conditions: vec![
                odd_prime(),
                PrimeResidue {
                    modulus: 5,
                    residues: vec![4],
                },
                ProductResidue {
                    modulus: 8,
                    residue: 3,
                },
                Coprime,
                NPositive,
            ],
            statement: "pod((5p^3N+1)/8) ≡ 0 (mod 5)".into(),
        },
        CongruenceFamily {
            id: "thm6a",
            modulus: 5,
            form: index(5, aff(10, 9)),
            side_conditions: vec![
                odd_prime(),
                PrimeResidue {
                    modulus: 5,
                    residues: vec![1],
                },
                ProductResidue {
                    modulus: 8,
                    residue: 3,
                },
                Coprime,
                NPositive,
            ],
            statement: "pod((5p^{10α+9}N+1)/8) ≡ 0 (mod 5)".into(),
        },
        CongruenceFamily {
            id: "thm6b",
            modulus: 5,
            form: index(5, aff(8, 7)),
            side_conditions: vec![
                odd_prime(),
                PrimeResidue {
                    modulus: 5,
                    residues: vec![2, 3, 4],
                },
                ProductResidue {
                    modulus: 8,
                    residue: 3,
                },
                Coprime,
                NPositive,
            ],
            statement: "pod((5p^{8α+7}N+1)/8) ≡ 0 (mod 5)".into(),
        },
        CongruenceFamily {
            id: "hs3",
            modulus: 3,
            form: prog(3, aff(2, 3), 23, aff(2, 2)),
            side_conditions: vec![],
            statement: "pod(3^{2α+3}n + (23·3^{2α+2}+1)/8) ≡ 0 (mod 3)".into(),
        },
        CongruenceFamily {
            id: "rs135",
            modulus: 5,
            form: progs(&[(135, 8), (135, 107), (135, 116)]),
            side_conditions: vec![],
            statement: "pod(135n+8) ≡ pod(135n+107) ≡ pod(135n+116) ≡ 0 (mod 5)".into(),
        },
        CongruenceFamily {
            id: "rs567",
            modulus: 7,
            form: progs(&[(567, 260), (567, 449)]),
            side_conditions: vec![],
            statement: "pod(567n+260) ≡ pod(567n+449) ≡ 0 (mod 7)".into(),
        },
        CongruenceFamily {
            id: "lo12",
            modulus: 3,
            form: FamilyForm::Relation(RelationSpec {
                a: 3,
                b: 2,
                c: 1,
                e: 0,
                k: 5,
            }),
            side_conditions: vec![],
            statement: "pod(3n+2) ≡ (−1)^n r_5(8n+5) (mod 3)".into(),
        },
    ]
}

/// Looks up a builtin family by id.
pub fn family(id: &str) -> Result<CongruenceFamily> {
    builtin_families()
        .into_iter()
        .find(|f| f.id == id)
        .ok_or_else(|| Error::UnknownId(id.to_string()))
}

fn pow_checked(base: u64, exp: u32) -> Result<u128> {
    (base as u128)
        .checked_pow(exp)
        .ok_or_else(|| Error::Overflow(format!("{base}^{exp}")))
}

fn mul_checked(a: u128, b: u128) -> Result<u128> {
    a.checked_mul(b)
        .ok_or_else(|| Error::Overflow(format!("{a}·{b}")))
}

/// `(numerator + 1) / 8`, rejecting numerators that leave a remainder.
fn eighth(numerator: u128) -> Result<u128> {
    let top = numerator
        .checked_add(1)
        .ok_or_else(|| Error::Overflow(format!("{numerator}+1")))?;
    if top % 8 != 0 {
        return Err(Error::Precondition(format!("{top} is not divisible by 8")));
    }
    Ok(top / 8)
}

/// Checks every side condition for `(p, α, N)`; a progression `N = s·n + o`
/// must satisfy each condition uniformly in `n`, except `p ∤ N`, which turns
/// into an excluded residue class of `n`.
pub fn check_side_conditions(
    family: &CongruenceFamily,
    sub: &Substitution,
) -> Result<Option<(u64, u64)>> {
    let fail = |c: &SideCondition| Err(Error::SideCondition(c.describe_failure()));
    let missing = |what: &str| {
        Err(Error::InvalidArgument(format!(
            "family {} needs {what}",
            family.id
        )))
    };
    let mut exclude = None;
    for cond in &family.side_conditions {
        match cond {
            SideCondition::Prime { min } => {
                let Some(p) = sub.p else { return missing("p") };
                if !is_prime(p) {
                    return Err(Error::NotPrime(p));
                }
                if p < *min {
                    return fail(cond);
                }
            }
            SideCondition::PrimeResidue { modulus, residues } => {
                let Some(p) = sub.p else { return missing("p") };
                if !residues.contains(&(p % modulus)) {
                    return fail(cond);
                }
            }
            SideCondition::ProductResidue { modulus, residue } => {
                let (Some(p), Some(n)) = (sub.p, sub.n) else {
                    return missing("p and N");
                };
                let ok = match n {
                    NParam::Value(v) => {
                        (p as u128 * v as u128) % *modulus as u128 == *residue as u128
                    }
                    NParam::Progression { step, offset } => {
                        (p as u128 * step as u128).is_multiple_of(*modulus as u128)
                            && (p as u128 * offset as u128) % *modulus as u128 == *residue as u128
                    }
                };
                if !ok {
                    return fail(cond);
                }
            }
            SideCondition::Coprime => {
                let (Some(p), Some(n)) = (sub.p, sub.n) else {
                    return missing("p and N");
                };
                match n {
                    NParam::Value(v) => {
                        if v % p == 0 {
                            return fail(cond);
                        }
                    }
                    NParam::Progression { step, offset } => {
                        if step % p == 0 {
                            if offset % p == 0 {
                                return fail(cond);
                            }
                        } else {
                            // p | step·n + offset  ⟺  n ≡ −offset·step⁻¹ (mod p)
                            let inv =
                                crate::series::mod_inverse(step % p, p).expect("p prime, p ∤ step");
                            let r = ((p - offset % p) % p) as u128 * inv as u128 % p as u128;
                            exclude = Some((p, r as u64));
                        }
                    }
                }
            }
            SideCondition::AlphaAtLeast(k) => {
                let Some(a) = sub.alpha else {
                    return missing("α");
                };
                if a < *k {
                    return fail(cond);
                }
            }
            SideCondition::NPositive => {
                let Some(n) = sub.n else { return missing("N") };
                let ok = match n {
                    NParam::Value(v) => v >= 1,
                    NParam::Progression { step, offset } => step >= 1 && offset >= 1,
                };
                if !ok {
                    return fail(cond);
                }
            }
        }
    }
    Ok(exclude)
}

/// Substitutes `(p, α, N)` into a family, after checking its hypotheses.
pub fn instantiate(
    family: &CongruenceFamily,
    p: Option<u64>,
    alpha: Option<u64>,
    n: Option<NParam>,
) -> Result<FamilyInstance> {
    let make = |substitution, targets| FamilyInstance {
        family: family.id.to_string(),
        modulus: family.modulus,
        substitution,
        targets,
    };
    match &family.form {
        FamilyForm::Relation(_) => Err(Error::InvalidArgument(format!(
            "family {} is a relation; it is checked directly, not instantiated",
            family.id
        ))),
        FamilyForm::Progressions(list) => {
            if p.is_some() || alpha.is_some() || n.is_some() {
                return Err(Error::InvalidArgument(format!(
                    "family {} takes no parameters",
                    family.id
                )));
            }
            let targets = list
                .iter()
                .map(|pr| Target::Progression {
                    step: pr.step,
                    offset: pr.offset,
                    exclude: None,
                })
                .collect();
            Ok(make(Substitution::NONE, targets))
        }
        FamilyForm::Parametric(ParametricRule::Progression(rule)) => {
            if p.is_some_and(|p| p != rule.base) || n.is_some() {
                return Err(Error::InvalidArgument(format!(
                    "family {} takes only α (its prime is fixed at {})",
                    family.id, rule.base
                )));
            }
            let alpha = alpha
                .ok_or_else(|| Error::InvalidArgument(format!("family {} needs α", family.id)))?;
            let sub = Substitution {
                p: None,
                alpha: Some(alpha),
                n: None,
            };
            check_side_conditions(family, &sub)?;
            let step = pow_checked(rule.base, rule.step_exponent.at(alpha)?)?;
            let numerator = mul_checked(
                rule.offset_coefficient as u128,
                pow_checked(rule.base, rule.offset_exponent.at(alpha)?)?,
            )?;
            let offset = eighth(numerator)?;
            Ok(make(
                sub,
                vec![Target::Progression {
                    step,
                    offset,
                    exclude: None,
                }],
            ))
        }
        FamilyForm::Parametric(ParametricRule::Index(rule)) => {
            let alpha = alpha.unwrap_or(0);
            let sub = Substitution {
                p,
                alpha: Some(alpha),
                n,
            };
            let exclude = check_side_conditions(family, &sub)?;
            let (p, n) = match (p, n) {
                (Some(p), Some(n)) => (p, n),
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "family {} needs p and N",
                        family.id
                    )))
                }
            };
            let scale = mul_checked(
                rule.coefficient as u128,
                pow_checked(p, rule.exponent.at(alpha)?)?,
            )?;
            let target = match n {
                NParam::Value(v) => Target::Index(eighth(mul_checked(scale, v as u128)?)?),
                NParam::Progression { step, offset } => {
                    // (scale·(step·n + offset) + 1)/8 = (scale·step/8)·n + (scale·offset + 1)/8
                    let a = mul_checked(scale, step as u128)?;
                    if a % 8 != 0 {
                        return Err(Error::Precondition(format!("{a} is not divisible by 8")));
                    }
                    Target::Progression {
                        step: a / 8,
                        offset: eighth(mul_checked(scale, offset as u128)?)?,
                        exclude,
                    }
                }
            };
            Ok(make(sub, vec![target]))
        }
    }
}

/// Smallest `N ≥ 1` satisfying the family's hypotheses for the given `p, α`.
pub fn smallest_admissible_n(family: &CongruenceFamily, p: u64, alpha: u64) -> Result<u64> {
    if !matches!(
        family.form,
        FamilyForm::Parametric(ParametricRule::Index(_))
    ) {
        return Err(Error::InvalidArgument(format!(
            "family {} has no N parameter",
            family.id
        )));
    }
    // the residue conditions repeat with period 8p
    let mut last = None;
    for n in 1..=8 * p {
        match check_side_conditions(
            family,
            &Substitution {
                p: Some(p),
                alpha: Some(alpha),
                n: Some(NParam::Value(n)),
            },
        ) {
            Ok(_) => return Ok(n),
            Err(e @ (Error::SideCondition(_) | Error::NotPrime(_))) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::SideCondition("no admissible N".into())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_ids_unique() {
        let fams = builtin_families();
        assert!(fams.len() >= 14);
        let mut ids: Vec<_> = fams.iter().map(|f| f.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), fams.len());
    }

    #[test]
    fn thm4_instances() {
        let a = instantiate(&family("thm4a").unwrap(), None, Some(1), None).unwrap();
        assert_eq!(
            a.targets,
            vec![Target::Progression {
                step: 625,
                offset: 172,
                exclude: None
            }]
        );
        assert_eq!(a.modulus, 5);
        let b = instantiate(&family("thm4b").unwrap(), None, Some(2), None).unwrap();
        assert_eq!(
            b.targets,
            vec![Target::Progression {
                step: 15625,
                offset: 7422,
                exclude: None
            }]
        );
        let err = instantiate(&family("thm4a").unwrap(), None, Some(0), None).unwrap_err();
        assert_eq!(err, Error::SideCondition("α < 1".into()));
    }

    #[test]
    fn thm5_progression_in_n() {
        let inst = instantiate(
            &family("thm5").unwrap(),
            Some(19),
            None,
            Some(NParam::Progression { step: 8, offset: 1 }),
        )
        .unwrap();
        assert_eq!(
            inst.targets,
            vec![Target::Progression {
                step: 34295,
                offset: 4287,
                exclude: Some((19, 7))
            }]
        );
    }

    #[test]
    fn thm5_rejects_wrong_class() {
        let err = instantiate(
            &family("thm5").unwrap(),
            Some(7),
            None,
            Some(NParam::Value(1)),
        )
        .unwrap_err();
        assert_eq!(err, Error::SideCondition("p ≢ 4 (mod 5)".into()));
        let err = instantiate(
            &family("thm5").unwrap(),
            Some(19),
            None,
            Some(NParam::Value(2)),
        )
        .unwrap_err();
        assert_eq!(err, Error::SideCondition("pN ≢ 3 (mod 8)".into()));
        let err = instantiate(
            &family("thm5").unwrap(),
            Some(19),
            None,
            Some(NParam::Value(57)),
        )
        .unwrap_err();
        assert_eq!(err, Error::SideCondition("p | N".into()));
    }

    #[test]
    fn thm2_indices() {
        let f = family("thm2c").unwrap();
        let idx: Vec<_> = [1, 9, 17]
            .iter()
            .map(|&n| {
                instantiate(&f, Some(5), Some(0), Some(NParam::Value(n)))
                    .unwrap()
                    .targets[0]
            })
            .collect();
        assert_eq!(
            idx,
            vec![Target::Index(47), Target::Index(422), Target::Index(797)]
        );
        let a = instantiate(
            &family("thm2a").unwrap(),
            Some(7),
            Some(0),
            Some(NParam::Value(3)),
        )
        .unwrap();
        assert_eq!(a.targets, vec![Target::Index(18908)]);
        assert_eq!(a.modulus, 3);
    }

    #[test]
    fn smallest_n_for_thm6b() {
        let f = family("thm6b").unwrap();
        assert_eq!(smallest_admissible_n(&f, 3, 0).unwrap(), 1);
        assert_eq!(smallest_admissible_n(&f, 7, 0).unwrap(), 5);
        assert_eq!(smallest_admissible_n(&f, 13, 0).unwrap(), 7);
        assert!(smallest_admissible_n(&f, 11, 0).is_err());
    }

    #[test]
    fn hs3_alpha_zero() {
        let inst = instantiate(&family("hs3").unwrap(), None, Some(0), None).unwrap();
        assert_eq!(
            inst.targets,
            vec![Target::Progression {
                step: 27,
                offset: 26,
                exclude: None
            }]
        );
    }

    #[test]
    fn composite_prime_rejected() {
        let err = instantiate(
            &family("thm6b").unwrap(),
            Some(9),
            Some(0),
            Some(NParam::Value(3)),
        )
        .unwrap_err();
        assert_eq!(err, Error::NotPrime(9));
    }
}
