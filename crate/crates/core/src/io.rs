//! JSON input and output.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matlin::{FracMat, Mat};
use crate::orbits::{ClassificationRecord, Label, Orbit};
use crate::orders::{Order, OrderTag};
use crate::ring::{Elem, Ring, RingKind};
use crate::strata::Stratum;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingJson {
    pub kind: RingKind,
    pub p: u64,
    #[serde(default = "one")]
    pub f: u32,
    pub r: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u64>>,
}

fn one() -> u32 {
    1
}

impl RingJson {
    pub fn of(ring: &Ring) -> RingJson {
        let s = ring.spec();
        RingJson { kind: s.kind, p: s.p, f: s.f, r: s.r_w, modulus: Some(s.modulus.clone()) }
    }

    pub fn build(&self) -> Result<Ring> {
        Ring::with_modulus(self.kind, self.p, self.f, self.r, self.modulus.clone())
    }
}

/// An entry: an integer (mixed kind, or a constant in equal kind) or a list
/// of `t`-coefficients, lowest degree first. Each coefficient is an `F_q` code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElemJson {
    Int(i64),
    Coeffs(Vec<u64>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingJson>,
    pub n: usize,
    pub entries: Vec<Vec<ElemJson>>,
}

pub fn elem_to_json(ring: &Ring, x: &Elem) -> ElemJson {
    match ring.kind() {
        RingKind::Mixed => ElemJson::Int(x.code() as i64),
        RingKind::Equal => ElemJson::Coeffs(ring.digits(x)),
    }
}

pub fn elem_from_json(ring: &Ring, v: &ElemJson) -> Result<Elem> {
    match v {
        ElemJson::Int(n) => Ok(ring.int(*n)),
        ElemJson::Coeffs(c) => {
            if ring.kind() == RingKind::Mixed {
                return Err(Error::Invalid("mixed-kind entries are integers".into()));
            }
            if let Some(bad) = c.iter().find(|&&d| d >= ring.q()) {
                return Err(Error::Invalid(format!("coefficient {bad} is not an F_{} code", ring.q())));
            }
            if c.len() > ring.r_w() as usize && c[ring.r_w() as usize..].iter().any(|&d| d != 0) {
                return Err(Error::PrecisionTooLow(format!(
                    "entry has degree {} but working precision is {}",
                    c.len() - 1,
                    ring.r_w()
                )));
            }
            Ok(ring.from_digits(c, ring.r_w()))
        }
    }
}

pub fn mat_to_json(ring: &Ring, a: &Mat) -> MatrixJson {
    let n = a.n();
    MatrixJson {
        ring: Some(RingJson::of(ring)),
        n,
        entries: (0..n).map(|i| a.row(i).iter().map(|x| elem_to_json(ring, x)).collect()).collect(),
    }
}

impl MatrixJson {
    /// The matrix over `ring`, at the ring's working precision.
    pub fn to_mat(&self, ring: &Ring) -> Result<Mat> {
        let n = self.n;
        if n == 0 || self.entries.len() != n || self.entries.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid(format!("expected {n}x{n} entries")));
        }
        let elems = self
            .entries
            .iter()
            .flatten()
            .map(|v| elem_from_json(ring, v))
            .collect::<Result<Vec<_>>>()?;
        Ok(ring.mat_from_elems(n, &elems))
    }
}

pub fn parse_matrix(text: &str) -> Result<MatrixJson> {
    serde_json::from_str(text).map_err(|e| Error::Invalid(format!("matrix JSON: {e}")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaJson {
    pub s: u32,
    pub mat: MatrixJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumJson {
    pub order: String,
    pub n: i64,
    pub beta: BetaJson,
}

pub fn stratum_to_json(ring: &Ring, st: &Stratum) -> StratumJson {
    let order = match st.order.tag {
        OrderTag::M => "M",
        OrderTag::I => "I",
    };
    let mut mat = mat_to_json(ring, &st.beta.m);
    mat.ring = None;
    StratumJson { order: order.into(), n: st.level, beta: BetaJson { s: st.beta.s, mat } }
}

impl StratumJson {
    pub fn to_stratum(&self, ring: &Ring) -> Result<Stratum> {
        let m = self.beta.mat.to_mat(ring)?;
        let order = match self.order.as_str() {
            "M" => Order::maximal(m.n()),
            "I" => Order::iwahori(m.n()),
            other => return Err(Error::Invalid(format!("order {other:?}: expected M or I"))),
        };
        Stratum::new(ring, order, self.n, FracMat { s: self.beta.s, m })
    }
}

/// A classification record together with the orbit it describes.
pub fn record_to_json(ring: &Ring, o: &Orbit, rec: &ClassificationRecord) -> Value {
    let (label, j) = match rec.label {
        Label::PiForm(j) => ("PiForm", Some(j)),
        Label::IrredModP => ("IrredModP", None),
        Label::NoCriterion => ("NoCriterion", None),
    };
    json!({
        "r": o.level.r,
        "l": o.level.l,
        "lp": o.level.lp,
        "canonical_rep": mat_to_json(ring, &o.rep).entries,
        "class_size": o.size,
        "twist": rec.twist.map(|c| elem_to_json(ring, &c)),
        "label": label,
        "j": j,
        "verdict": rec.verdict.to_string(),
        "regular": rec.regular,
    })
}
