//! Stable JSON schema for certificates and verdicts. Field names are a
//! contract: third parties re-verify certificates from this output.

use serde::{Deserialize, Serialize};
use serde_json::json;

use powerprod_core::valuation::Instance;
use powerprod_core::{Certificate, Strategy, TermValuation, Verdict, Via};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HitWire {
    pub a: u64,
    pub nu: u64,
    pub via: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateWire {
    pub q: u64,
    pub ell: u64,
    pub n: u64,
    pub strategy: String,
    pub witness_prime: u64,
    pub hits: Vec<HitWire>,
    pub total_valuation: u64,
}

pub fn strategy_name(s: Strategy) -> &'static str {
    match s {
        Strategy::Theorem1 => "theorem1",
        Strategy::Theorem2Search => "theorem2",
        Strategy::OracleExponent => "oracle",
    }
}

impl From<&Certificate> for CertificateWire {
    fn from(c: &Certificate) -> Self {
        CertificateWire {
            q: c.instance.q(),
            ell: c.instance.ell(),
            n: c.instance.n(),
            strategy: strategy_name(c.strategy).to_string(),
            witness_prime: c.p,
            hits: c
                .hits
                .iter()
                .map(|h| HitWire {
                    a: h.a,
                    nu: h.nu as u64,
                    via: match h.via {
                        Via::Lte => "lte".to_string(),
                        Via::Direct => "direct".to_string(),
                    },
                })
                .collect(),
            total_valuation: c.total_valuation,
        }
    }
}

impl CertificateWire {
    pub fn into_certificate(self) -> Result<Certificate, String> {
        let strategy = match self.strategy.as_str() {
            "theorem1" => Strategy::Theorem1,
            "theorem2" => Strategy::Theorem2Search,
            "oracle" => Strategy::OracleExponent,
            other => return Err(format!("unknown strategy {other:?}")),
        };
        let instance =
            Instance::new(self.q, self.ell, self.n).map_err(|e| e.to_string())?;
        let hits = self
            .hits
            .into_iter()
            .map(|h| {
                let via = match h.via.as_str() {
                    "lte" => Via::Lte,
                    "direct" => Via::Direct,
                    other => return Err(format!("unknown via {other:?}")),
                };
                Ok(TermValuation {
                    a: h.a,
                    p: self.witness_prime,
                    nu: h.nu as u32,
                    via,
                })
            })
            .collect::<Result<Vec<_>, String>>()?;
        Ok(Certificate {
            instance,
            p: self.witness_prime,
            strategy,
            hits,
            total_valuation: self.total_valuation,
        })
    }
}

pub fn certificate_json(c: &Certificate) -> serde_json::Value {
    serde_json::to_value(CertificateWire::from(c)).expect("certificate serialization")
}

pub fn verdict_json(v: &Verdict) -> serde_json::Value {
    match v {
        Verdict::NotPowerful(c) => json!({
            "verdict": "not_powerful",
            "certificate": certificate_json(c),
        }),
        Verdict::Powerful(f) => {
            let map: serde_json::Map<String, serde_json::Value> = f
                .entries()
                .iter()
                .map(|(p, e)| (p.to_string(), json!(e)))
                .collect();
            json!({ "verdict": "powerful", "factorization": map })
        }
        Verdict::Unknown(reason) => json!({ "verdict": "unknown", "reason": reason }),
    }
}

pub fn factorization_text(f: &powerprod_core::FactorMap) -> String {
    if f.is_empty() {
        return "1".to_string();
    }
    f.entries()
        .iter()
        .map(|(p, e)| {
            if *e == 1 {
                p.to_string()
            } else {
                format!("{p}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join(" * ")
}

pub fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::NotPowerful(c) => format!(
            "not powerful: witness prime {} ({}), product valuation 1",
            c.p,
            strategy_name(c.strategy)
        ),
        Verdict::Powerful(f) => format!("powerful: {}", factorization_text(f)),
        Verdict::Unknown(reason) => format!("unknown: {reason}"),
    }
}
