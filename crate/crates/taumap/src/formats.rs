//! JSON and CSV shapes of the engine's data.

use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use taumap_core::hirota::{ResidualEntry, ResidualReport};
use taumap_core::riemann::{CurveSpec, MapSeries, MomentVector, Orientation};
use taumap_core::taucoeffs::CoeffKey;
use taumap_core::{FormalSeries, Rational, T0Monomial, T0Poly, TMonomial};

use crate::error::{CliError, Result};

/// `[num, den, t0_exp, log_pow]` with exact integers as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson(pub String, pub String, pub i32, pub u8);

/// `[unbarred, barred, terms]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTermJson(pub Vec<u32>, pub Vec<u32>, pub Vec<TermJson>);

/// Canonical form of a [`FormalSeries`]: monomials in the engine's order,
/// t0 terms by increasing `(t0_exp, log_pow)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub cutoff: u32,
    pub terms: Vec<SeriesTermJson>,
}

fn parse_rational(num: &str, den: &str) -> Result<Rational> {
    let n = BigInt::from_str(num).map_err(|e| CliError::Format(format!("numerator {num:?}: {e}")))?;
    let d = BigInt::from_str(den).map_err(|e| CliError::Format(format!("denominator {den:?}: {e}")))?;
    if d == BigInt::from(0) {
        return Err(CliError::Format("zero denominator".into()));
    }
    Ok(Rational::new(n, d))
}

impl From<&T0Monomial> for TermJson {
    fn from(t: &T0Monomial) -> Self {
        TermJson(
            t.coeff.numer().to_string(),
            t.coeff.denom().to_string(),
            t.t0_exp,
            t.log_pow,
        )
    }
}

impl From<&FormalSeries> for SeriesJson {
    fn from(s: &FormalSeries) -> Self {
        let terms = s
            .terms()
            .map(|(m, c)| {
                SeriesTermJson(
                    m.unbarred().to_vec(),
                    m.barred().to_vec(),
                    c.terms().map(|t| TermJson::from(&t)).collect(),
                )
            })
            .collect();
        SeriesJson {
            cutoff: s.cutoff(),
            terms,
        }
    }
}

impl SeriesJson {
    pub fn to_series(&self) -> Result<FormalSeries> {
        let mut out = FormalSeries::zero(self.cutoff);
        for SeriesTermJson(u, b, ts) in &self.terms {
            let m = TMonomial::from_slices(u, b)?;
            let mut c = T0Poly::zero();
            for TermJson(num, den, e, l) in ts {
                c.add_term(parse_rational(num, den)?, *e, *l);
            }
            out.add_term(m, &c);
        }
        Ok(out)
    }
}

/// One row of the coefficient table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffRow {
    pub unbarred: Vec<u32>,
    pub barred: Vec<u32>,
    pub num: String,
    pub den: String,
    pub t0_exp: i32,
}

pub fn coefficient_rows(table: &[(CoeffKey, T0Monomial)]) -> Vec<CoeffRow> {
    table
        .iter()
        .map(|(k, t)| CoeffRow {
            unbarred: k.unbarred().to_vec(),
            barred: k.barred().to_vec(),
            num: t.coeff.numer().to_string(),
            den: t.coeff.denom().to_string(),
            t0_exp: t.t0_exp,
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualEntryJson {
    pub a: i32,
    pub b: i32,
    pub unbarred: Vec<u32>,
    pub barred: Vec<u32>,
    pub num: String,
    pub den: String,
    pub t0_exp: i32,
    pub log_pow: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub equation: String,
    pub checked_order: u32,
    pub passed: bool,
    pub entries: Vec<ResidualEntryJson>,
}

impl From<&ResidualEntry> for ResidualEntryJson {
    fn from(e: &ResidualEntry) -> Self {
        ResidualEntryJson {
            a: e.a,
            b: e.b,
            unbarred: e.monomial.unbarred().to_vec(),
            barred: e.monomial.barred().to_vec(),
            num: e.term.coeff.numer().to_string(),
            den: e.term.coeff.denom().to_string(),
            t0_exp: e.term.t0_exp,
            log_pow: e.term.log_pow,
        }
    }
}

impl From<&ResidualReport> for ReportJson {
    fn from(r: &ResidualReport) -> Self {
        ReportJson {
            equation: r.equation.id().to_string(),
            checked_order: r.checked_order,
            passed: r.passed(),
            entries: r.entries.iter().map(ResidualEntryJson::from).collect(),
        }
    }
}

/// Output of `verify`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyJson {
    pub cutoff: u32,
    pub mutated: Option<MutationJson>,
    pub passed: bool,
    pub reports: Vec<ReportJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MutationJson {
    pub unbarred: Vec<u32>,
    pub barred: Vec<u32>,
    pub delta_num: String,
    pub delta_den: String,
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentsJson {
    pub t0: f64,
    /// `[re, im]` of `t_1 … t_K`.
    pub t: Vec<[f64; 2]>,
    pub tbar: Vec<[f64; 2]>,
}

impl From<&MomentVector> for MomentsJson {
    fn from(m: &MomentVector) -> Self {
        MomentsJson {
            t0: m.t0,
            t: m.t.iter().copied().map(pair).collect(),
            tbar: m.tbar.iter().copied().map(pair).collect(),
        }
    }
}

impl MomentsJson {
    pub fn to_moments(&self) -> Result<MomentVector> {
        let t = self.t.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        let mut m = MomentVector::new(self.t0, t)?;
        if !self.tbar.is_empty() {
            if self.tbar.len() != self.t.len() {
                return Err(CliError::Format("t and tbar lengths differ".into()));
            }
            m.tbar = self.tbar.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        }
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsJson {
    pub smallness: f64,
    pub smallness_threshold: f64,
    pub outside_regime: bool,
    pub radius_phase: f64,
    pub tail_estimate: f64,
}

/// Output of `map`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapJson {
    pub cutoff: u32,
    pub korder: u32,
    pub jorder: u32,
    pub r: f64,
    /// `[re, im]` of `p_0 … p_J`.
    pub p: Vec<[f64; 2]>,
    pub boundary_error: f64,
    pub diagnostics: DiagnosticsJson,
}

impl MapJson {
    pub fn new(cutoff: u32, korder: u32, map: &MapSeries, boundary_error: f64) -> Self {
        let d = &map.diagnostics;
        MapJson {
            cutoff,
            korder,
            jorder: map.order(),
            r: map.r,
            p: map.p.iter().copied().map(pair).collect(),
            boundary_error,
            diagnostics: DiagnosticsJson {
                smallness: d.smallness,
                smallness_threshold: d.smallness_threshold,
                outside_regime: d.outside_regime(),
                radius_phase: d.radius_phase,
                tail_estimate: d.tail_estimate,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrientationJson {
    #[default]
    Ccw,
    Cw,
}

/// Curve file: `{"fourier": [[m, re, im], ...]}`, optionally
/// `"orientation": "cw"` for a clockwise parameterization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveJson {
    pub fourier: Vec<(i32, f64, f64)>,
    #[serde(default)]
    pub orientation: OrientationJson,
}

impl CurveJson {
    pub fn to_curve(&self) -> Result<CurveSpec> {
        let orientation = match self.orientation {
            OrientationJson::Ccw => Orientation::CounterClockwise,
            OrientationJson::Cw => Orientation::Clockwise,
        };
        let fourier = self
            .fourier
            .iter()
            .map(|&(m, re, im)| (m, Complex64::new(re, im)))
            .collect();
        Ok(CurveSpec::new(fourier, orientation)?)
    }
}

impl From<&CurveSpec> for CurveJson {
    fn from(c: &CurveSpec) -> Self {
        CurveJson {
            fourier: c.fourier().iter().map(|&(m, z)| (m, z.re, z.im)).collect(),
            orientation: match c.orientation() {
                Orientation::CounterClockwise => OrientationJson::Ccw,
                Orientation::Clockwise => OrientationJson::Cw,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundaryRow {
    pub theta: f64,
    pub re_w: f64,
    pub im_w: f64,
    pub modulus_error: f64,
}

/// `theta,re_w,im_w,modulus_error` with a header row.
pub fn boundary_csv(rows: &[BoundaryRow]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Format(e.to_string()))?;
    }
    w.into_inner().map_err(|e| CliError::Format(e.to_string()))
}

pub fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("serializable");
    out.push(b'\n');
    out
}
