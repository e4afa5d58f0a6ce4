//! The `L^p` family for `p` in `[-inf, 1]`, together with the two logarithmic
//! norms `0+` and `0-`, on weighted finite sets.
//!
//! Powers follow the extended conventions `0^p = 0`, `inf^p = inf` for
//! `p > 0` and `0^p = inf`, `inf^p = 0` for `p < 0`. The logarithmic norms
//! need probability weights.

pub mod audit;
pub mod duality;

use std::fmt;
use std::str::FromStr;

use num::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::cone::{ConeVec, DiscreteCone};
use crate::error::{Error, Result};
use crate::extreal::{parse_rational, powf_ext, rat, ExtNonneg, ExtSigned, Rational};

pub use audit::{
    l0_identities, lp_mcp_counterexample, mcp_family_norms, reverse_holder_audit,
    shifted_norm_audit, ExponentSummary, HolderAuditConfig, HolderFailure, HolderReport, L0Report,
    ShiftedNorm,
};
pub use duality::{
    bidual_audit, dual_attain, dual_grid_infima, operator_norm, BidualAudit, BidualVerdict,
    DualAttain, OperatorNorm,
};

/// Which norm of the family.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LpTag {
    /// A nonzero rational exponent at most one.
    Power(Rational),
    NegInf,
    ZeroPlus,
    ZeroMinus,
}

impl LpTag {
    pub fn power(p: Rational) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::Input(
                "use 0+ or 0- for the logarithmic norms".into(),
            ));
        }
        if p > Rational::one() {
            return Err(Error::Input(format!("exponent {p} exceeds 1")));
        }
        Ok(LpTag::Power(p))
    }

    pub fn int(p: i64) -> Self {
        Self::power(rat(p, 1)).expect("valid exponent")
    }

    /// The exponent `q` with `1/p + 1/q = 1`.
    pub fn conjugate(&self) -> LpTag {
        match self {
            LpTag::Power(p) if p.is_one() => LpTag::NegInf,
            LpTag::Power(p) => LpTag::Power(p / (p - Rational::one())),
            LpTag::NegInf => LpTag::Power(Rational::one()),
            LpTag::ZeroPlus => LpTag::ZeroMinus,
            LpTag::ZeroMinus => LpTag::ZeroPlus,
        }
    }

    pub fn is_logarithmic(&self) -> bool {
        matches!(self, LpTag::ZeroPlus | LpTag::ZeroMinus)
    }

    pub fn exponent_f64(&self) -> f64 {
        match self {
            LpTag::Power(p) => p.to_f64().expect("finite"),
            LpTag::NegInf => f64::NEG_INFINITY,
            LpTag::ZeroPlus | LpTag::ZeroMinus => 0.0,
        }
    }
}

impl fmt::Display for LpTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LpTag::Power(p) => write!(f, "{p}"),
            LpTag::NegInf => write!(f, "-inf"),
            LpTag::ZeroPlus => write!(f, "0+"),
            LpTag::ZeroMinus => write!(f, "0-"),
        }
    }
}

impl FromStr for LpTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "-inf" | "-infinity" => Ok(LpTag::NegInf),
            "0+" => Ok(LpTag::ZeroPlus),
            "0-" => Ok(LpTag::ZeroMinus),
            other => LpTag::power(parse_rational(other)?),
        }
    }
}

impl Serialize for LpTag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A norm value, exact whenever every intermediate power is rational.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormValue {
    pub value: f64,
    pub exact: Option<ExtNonneg>,
}

impl NormValue {
    fn exact(v: ExtNonneg) -> Self {
        NormValue {
            value: v.to_f64(),
            exact: Some(v),
        }
    }

    fn approx(value: f64) -> Self {
        NormValue { value, exact: None }
    }
}

/// `int_+ log f` and `int_- log f`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignedIntegral {
    #[serde(serialize_with = "ser_signed")]
    pub plus: ExtSigned<f64>,
    #[serde(serialize_with = "ser_signed")]
    pub minus: ExtSigned<f64>,
}

fn ser_signed<S: Serializer>(v: &ExtSigned<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        ExtSigned::NegInf => s.serialize_str("-inf"),
        ExtSigned::PosInf => s.serialize_str("inf"),
        ExtSigned::Finite(x) => s.serialize_f64(*x),
    }
}

pub fn check_probability(cone: &DiscreteCone) -> Result<()> {
    let total: Rational = cone.weights().iter().sum();
    if total.is_one() {
        Ok(())
    } else {
        Err(Error::NotProbability(total.to_string()))
    }
}

/// Weights as floats.
pub fn weights_f64(cone: &DiscreteCone) -> Vec<f64> {
    cone.weights()
        .iter()
        .map(|m| m.to_f64().expect("finite"))
        .collect()
}

/// Both signed integrals of `log f`, where `log 0 = -inf` and `log inf = inf`.
pub fn log_integrals(mu: &[f64], f: &[f64]) -> SignedIntegral {
    let hits_zero = f.iter().any(|&x| x == 0.0);
    let hits_inf = f.iter().any(|&x| x.is_infinite());
    let finite: f64 = mu
        .iter()
        .zip(f)
        .filter(|(_, &x)| x > 0.0 && x.is_finite())
        .map(|(m, x)| m * x.ln())
        .sum();
    match (hits_zero, hits_inf) {
        (false, false) => SignedIntegral {
            plus: ExtSigned::Finite(finite),
            minus: ExtSigned::Finite(finite),
        },
        (true, false) => SignedIntegral {
            plus: ExtSigned::NegInf,
            minus: ExtSigned::NegInf,
        },
        (false, true) => SignedIntegral {
            plus: ExtSigned::PosInf,
            minus: ExtSigned::PosInf,
        },
        // Both parts diverge: the integral is undefined and each side takes its fallback.
        (true, true) => SignedIntegral {
            plus: ExtSigned::PosInf,
            minus: ExtSigned::NegInf,
        },
    }
}

/// The norm in floating point; the caller is responsible for probability weights on `0+`/`0-`.
pub fn norm_f64(mu: &[f64], f: &[f64], tag: &LpTag) -> f64 {
    match tag {
        LpTag::NegInf => f.iter().cloned().fold(f64::INFINITY, f64::min),
        LpTag::ZeroPlus => log_integrals(mu, f).plus.exp(),
        LpTag::ZeroMinus => log_integrals(mu, f).minus.exp(),
        LpTag::Power(p) => {
            let p = p.to_f64().expect("finite");
            if p == 1.0 {
                return mu.iter().zip(f).map(|(m, x)| m * x).sum();
            }
            let total: f64 = mu.iter().zip(f).map(|(m, &x)| m * powf_ext(x, p)).sum();
            powf_ext(total, 1.0 / p)
        }
    }
}

fn exact_power_norm(cone: &DiscreteCone, f: &ConeVec, p: &Rational) -> Result<ExtNonneg> {
    let mut total = ExtNonneg::zero();
    for (m, x) in cone.weights().iter().zip(f.coords()) {
        total = &total + &x.pow(p)?.scale(m);
    }
    total.pow(&p.recip())
}

/// `||f||` for the given tag, exact when the arithmetic stays rational.
pub fn lp_norm(cone: &DiscreteCone, f: &ConeVec, tag: &LpTag) -> Result<NormValue> {
    cone.check(f)?;
    if tag.is_logarithmic() {
        check_probability(cone)?;
    }
    let floats: Vec<f64> = f.coords().iter().map(ExtNonneg::to_f64).collect();
    Ok(match tag {
        LpTag::NegInf => NormValue::exact(f.coords().iter().min().cloned().expect("nonempty")),
        LpTag::Power(p) => match exact_power_norm(cone, f, p) {
            Ok(v) => NormValue::exact(v),
            Err(Error::Irrational) => NormValue::approx(norm_f64(&weights_f64(cone), &floats, tag)),
            Err(e) => return Err(e),
        },
        LpTag::ZeroPlus | LpTag::ZeroMinus => {
            let v = norm_f64(&weights_f64(cone), &floats, tag);
            if v == 0.0 {
                NormValue::exact(ExtNonneg::zero())
            } else if v.is_infinite() {
                NormValue::exact(ExtNonneg::inf())
            } else {
                NormValue::approx(v)
            }
        }
    })
}

/// Probability weights proportional to the given positive integers.
pub fn probability(parts: &[i64]) -> Result<DiscreteCone> {
    let total: i64 = parts.iter().sum();
    if parts.iter().any(|x| !x.is_positive()) {
        return Err(Error::Input("weights must be positive".into()));
    }
    DiscreteCone::new(parts.iter().map(|&x| rat(x, total)).collect())
}

/// Divide the weights by their sum.
pub fn normalize(cone: &DiscreteCone) -> DiscreteCone {
    let total: Rational = cone.weights().iter().sum();
    DiscreteCone::new(cone.weights().iter().map(|m| m / &total).collect())
        .expect("positive weights")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> DiscreteCone {
        probability(&[1, 1]).unwrap()
    }

    #[test]
    fn tags_and_conjugates() {
        let t: LpTag = "-1".parse().unwrap();
        assert_eq!(t.conjugate(), LpTag::power(rat(1, 2)).unwrap());
        assert_eq!(LpTag::int(1).conjugate(), LpTag::NegInf);
        assert_eq!("0+".parse::<LpTag>().unwrap().conjugate(), LpTag::ZeroMinus);
        assert!("2".parse::<LpTag>().is_err());
        assert!("0".parse::<LpTag>().is_err());
        assert_eq!(
            LpTag::power(rat(-2, 1)).unwrap().conjugate(),
            LpTag::power(rat(2, 3)).unwrap()
        );
    }

    #[test]
    fn ones_have_norm_one() {
        let f = ConeVec::from_ints(&[Some(1), Some(1)]);
        for tag in ["1", "1/2", "-1", "-2", "-inf", "0+", "0-", "1/3"] {
            let v = lp_norm(&half(), &f, &tag.parse().unwrap()).unwrap();
            assert!((v.value - 1.0).abs() < 1e-12, "{tag}");
        }
    }

    #[test]
    fn zero_coordinate_with_negative_exponent() {
        let f = ConeVec::from_ints(&[Some(0), Some(1)]);
        let v = lp_norm(&half(), &f, &LpTag::int(-1)).unwrap();
        assert_eq!(v.exact, Some(ExtNonneg::zero()));
    }

    #[test]
    fn logarithmic_fallbacks() {
        let f = ConeVec(vec![ExtNonneg::zero(), ExtNonneg::int(4)]);
        assert_eq!(
            lp_norm(&half(), &f, &LpTag::ZeroPlus).unwrap().exact,
            Some(ExtNonneg::zero())
        );
        let f = ConeVec(vec![ExtNonneg::zero(), ExtNonneg::inf()]);
        assert_eq!(
            lp_norm(&half(), &f, &LpTag::ZeroPlus).unwrap().exact,
            Some(ExtNonneg::inf())
        );
        assert_eq!(
            lp_norm(&half(), &f, &LpTag::ZeroMinus).unwrap().exact,
            Some(ExtNonneg::zero())
        );
        let f = ConeVec::from_ints(&[Some(1), Some(4)]);
        assert!((lp_norm(&half(), &f, &LpTag::ZeroPlus).unwrap().value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn logarithmic_norms_need_probability() {
        let cone = DiscreteCone::uniform(2);
        let f = ConeVec::from_ints(&[Some(1), Some(4)]);
        assert!(matches!(
            lp_norm(&cone, &f, &LpTag::ZeroPlus),
            Err(Error::NotProbability(_))
        ));
        assert!(lp_norm(&normalize(&cone), &f, &LpTag::ZeroPlus).is_ok());
    }

    #[test]
    fn exact_and_approximate_paths() {
        let f = ConeVec::from_ints(&[Some(1), Some(4)]);
        assert_eq!(
            lp_norm(&half(), &f, &LpTag::int(-1)).unwrap().exact,
            Some(ExtNonneg::ratio(8, 5))
        );
        assert_eq!(
            lp_norm(&half(), &f, &"1/2".parse().unwrap()).unwrap().exact,
            Some(ExtNonneg::ratio(9, 4))
        );
        let g = ConeVec::from_ints(&[Some(1), Some(2)]);
        let v = lp_norm(&half(), &g, &"1/2".parse().unwrap()).unwrap();
        assert!(v.exact.is_none());
        assert!((v.value - ((1.0 + 2f64.sqrt()) / 2.0).powi(2)).abs() < 1e-12);
    }
}
