//! JSON documents and CSV tables.
//!
//! Floats in CSV are written with 17 significant digits (`{:.16e}`) so every
//! value round-trips; JSON uses serde_json's shortest round-trip form.

use std::fmt::Write as _;
use std::io::Write;

use anyhow::{anyhow, bail, Context, Result};
use qbrach_core::engine::{sample_diagnostics, ConstraintSet, ShootingReport, Trajectory};
use qbrach_core::fast::ClosureReport;
use qbrach_core::gates::{
    target_entangler, target_qft_prime, target_swap, GateKind, GateTarget, HamiltonianDesc, IntegerTuple,
    SynthesisResult, Verification,
};
use qbrach_core::heisenberg::ModelParameters;
use qbrach_core::{Complex64, ComplexMatrix, HermitianOperator, UnitaryOperator};
use serde::{Deserialize, Serialize};

/// `{"dim": N, "re": [[..]], "im": [[..]]}`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixLiteral {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixLiteral {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let n = m.dim();
        let rows = |f: fn(&Complex64) -> f64| (0..n).map(|r| (0..n).map(|c| f(&m[(r, c)])).collect()).collect();
        Self { dim: n, re: rows(|z| z.re), im: rows(|z| z.im) }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.re.len() != self.dim || self.im.len() != self.dim {
            bail!("matrix literal declares dim {} but has {} re / {} im rows", self.dim, self.re.len(), self.im.len());
        }
        Ok(ComplexMatrix::from_parts(&self.re, &self.im)?)
    }

    pub fn to_hermitian(&self) -> Result<HermitianOperator> {
        Ok(HermitianOperator::new(self.to_matrix()?)?)
    }

    pub fn to_unitary(&self) -> Result<UnitaryOperator> {
        Ok(UnitaryOperator::new(self.to_matrix()?)?)
    }
}

/// `{"omega": f, "forbidden": [matrix, ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintSetJson {
    pub omega: f64,
    #[serde(default)]
    pub forbidden: Vec<MatrixLiteral>,
}

impl ConstraintSetJson {
    pub fn from_constraints(c: &ConstraintSet) -> Self {
        Self {
            omega: c.omega(),
            forbidden: c.generators().iter().map(|g| MatrixLiteral::from_matrix(g.matrix())).collect(),
        }
    }

    pub fn to_constraints(&self) -> Result<ConstraintSet> {
        let forbidden = self.forbidden.iter().map(MatrixLiteral::to_hermitian).collect::<Result<Vec<_>>>()?;
        Ok(ConstraintSet::new(self.omega, forbidden)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParametersJson {
    #[serde(rename = "B0p")]
    pub b0p: f64,
    #[serde(rename = "B0m")]
    pub b0m: f64,
    pub psip: f64,
    pub psim: f64,
    pub gammap: f64,
    pub gammam: f64,
    #[serde(rename = "Jz")]
    pub jz: f64,
    pub omega: f64,
}

impl From<&ModelParameters> for ModelParametersJson {
    fn from(p: &ModelParameters) -> Self {
        Self {
            b0p: p.b0_plus,
            b0m: p.b0_minus,
            psip: p.psi_plus,
            psim: p.psi_minus,
            gammap: p.gamma_plus,
            gammam: p.gamma_minus,
            jz: p.jz,
            omega: p.omega,
        }
    }
}

impl From<&ModelParametersJson> for ModelParameters {
    fn from(p: &ModelParametersJson) -> Self {
        Self {
            b0_plus: p.b0p,
            b0_minus: p.b0m,
            psi_plus: p.psip,
            psi_minus: p.psim,
            gamma_plus: p.gammap,
            gamma_minus: p.gammam,
            jz: p.jz,
            omega: p.omega,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TupleJson {
    pub m: i64,
    pub n: i64,
    pub p: i64,
    pub q: i64,
    pub r: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum HamiltonianJson {
    Constant { matrix: MatrixLiteral },
    Entangler { mu0: f64, gamma_plus: f64, sign: i8 },
    Controls,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerificationJson {
    pub passed: bool,
    pub infidelity: f64,
    pub chi: f64,
    pub constraint_residual: f64,
    pub norm_residual: f64,
    pub linear_residual: f64,
    pub geodesic_residual: f64,
    pub geodesic: bool,
    #[serde(rename = "trF2_drift")]
    pub trf2_drift: f64,
    pub unitarity_error: f64,
    pub brachistochrone_residual: f64,
}

impl From<&Verification> for VerificationJson {
    fn from(v: &Verification) -> Self {
        Self {
            passed: v.passed,
            infidelity: v.infidelity,
            chi: v.chi,
            constraint_residual: v.constraint_residual,
            norm_residual: v.norm_residual,
            linear_residual: v.linear_residual,
            geodesic_residual: v.geodesic_residual,
            geodesic: v.geodesic,
            trf2_drift: v.trf2_drift,
            unitarity_error: v.unitarity_error,
            brachistochrone_residual: v.brachistochrone_residual,
        }
    }
}

/// A named-gate synthesis result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthesisJson {
    pub target: String,
    pub phi: Option<f64>,
    pub omega: f64,
    #[serde(rename = "omega_T")]
    pub omega_t: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub chi: f64,
    pub tuple: TupleJson,
    pub params: ModelParametersJson,
    pub hamiltonian: HamiltonianJson,
    pub verification: VerificationJson,
}

impl SynthesisJson {
    pub fn from_result(r: &SynthesisResult) -> Self {
        let k = r.tuple;
        Self {
            target: r.target.kind.name().to_string(),
            phi: r.target.phi,
            omega: r.params.omega,
            omega_t: r.omega_t(),
            t: r.duration,
            chi: r.chi,
            tuple: TupleJson { m: k.m, n: k.n, p: k.p, q: k.q, r: k.r },
            params: (&r.params).into(),
            hamiltonian: match &r.hamiltonian {
                HamiltonianDesc::Constant(h) => {
                    HamiltonianJson::Constant { matrix: MatrixLiteral::from_matrix(h.matrix()) }
                }
                HamiltonianDesc::Entangler { mu0, gamma_plus, sign } => {
                    HamiltonianJson::Entangler { mu0: *mu0, gamma_plus: *gamma_plus, sign: *sign }
                }
                HamiltonianDesc::Controls => HamiltonianJson::Controls,
            },
            verification: (&r.verification).into(),
        }
    }

    /// Rebuilds the result; the time dependence of `H` comes from `params`.
    /// The stored verification is kept as-is.
    pub fn to_result(&self) -> Result<SynthesisResult> {
        let target = named_target(&self.target, self.phi)?;
        let params: ModelParameters = (&self.params).into();
        let hamiltonian = match &self.hamiltonian {
            HamiltonianJson::Constant { matrix } => HamiltonianDesc::Constant(matrix.to_hermitian()?),
            HamiltonianJson::Entangler { mu0, gamma_plus, sign } => {
                HamiltonianDesc::Entangler { mu0: *mu0, gamma_plus: *gamma_plus, sign: *sign }
            }
            HamiltonianJson::Controls => HamiltonianDesc::Controls,
        };
        let v = &self.verification;
        Ok(SynthesisResult {
            target,
            params,
            duration: self.t,
            chi: self.chi,
            tuple: IntegerTuple::new(self.tuple.m, self.tuple.n, self.tuple.p, self.tuple.q, self.tuple.r),
            hamiltonian,
            verification: Verification {
                infidelity: v.infidelity,
                chi: v.chi,
                constraint_residual: v.constraint_residual,
                norm_residual: v.norm_residual,
                linear_residual: v.linear_residual,
                geodesic_residual: v.geodesic_residual,
                trf2_drift: v.trf2_drift,
                unitarity_error: v.unitarity_error,
                brachistochrone_residual: v.brachistochrone_residual,
                geodesic: v.geodesic,
                passed: v.passed,
            },
        })
    }
}

pub fn named_target(name: &str, phi: Option<f64>) -> Result<GateTarget> {
    match name.parse::<GateKind>()? {
        GateKind::Swap => Ok(target_swap()),
        GateKind::QftPrime => Ok(target_qft_prime()),
        GateKind::Entangler => {
            let phi = phi.ok_or_else(|| anyhow!("entangler needs an angle phi"))?;
            Ok(target_entangler(phi)?)
        }
        GateKind::Custom => bail!("custom targets carry their own matrix"),
    }
}

/// A numerically shot custom target, with everything needed to re-verify it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShootingJson {
    pub target: String,
    pub omega: f64,
    #[serde(rename = "omega_T")]
    pub omega_t: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub chi: f64,
    pub success: bool,
    pub infidelity: f64,
    pub evaluations: usize,
    pub target_matrix: MatrixLiteral,
    pub f0: MatrixLiteral,
    pub constraints: ConstraintSetJson,
}

impl ShootingJson {
    pub fn new(target: &UnitaryOperator, constraints: &ConstraintSet, r: &ShootingReport) -> Self {
        Self {
            target: GateKind::Custom.name().to_string(),
            omega: constraints.omega(),
            omega_t: constraints.omega() * r.duration,
            t: r.duration,
            chi: r.chi,
            success: r.success,
            infidelity: r.infidelity,
            evaluations: r.evaluations,
            target_matrix: MatrixLiteral::from_matrix(target.matrix()),
            f0: MatrixLiteral::from_matrix(r.f0.matrix()),
            constraints: ConstraintSetJson::from_constraints(constraints),
        }
    }
}

/// Input of `synthesize --gate custom`: the target and optionally its constraints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CustomTargetJson {
    pub matrix: MatrixLiteral,
    #[serde(default)]
    pub constraints: Option<ConstraintSetJson>,
}

/// Input of `propagate --in`: an initial `F(0)`, its constraints and the duration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropagateJson {
    pub constraints: ConstraintSetJson,
    pub f0: MatrixLiteral,
    #[serde(rename = "T")]
    pub t: f64,
    /// Rescale `F(0)` so its allowed part meets the norm constraint.
    #[serde(default = "default_true")]
    pub rescale: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationJson {
    pub a: String,
    pub b: String,
    pub weight: usize,
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosureJson {
    pub n: usize,
    pub j: usize,
    pub k: usize,
    pub predicted: Vec<usize>,
    pub pairs_checked: usize,
    pub max_outside: f64,
    pub violations: Vec<ViolationJson>,
}

impl From<&ClosureReport> for ClosureJson {
    fn from(r: &ClosureReport) -> Self {
        Self {
            n: r.n,
            j: r.j,
            k: r.k,
            predicted: r.predicted.clone(),
            pairs_checked: r.pairs_checked,
            max_outside: r.max_outside,
            violations: r
                .violations
                .iter()
                .map(|v| ViolationJson { a: v.a.to_string(), b: v.b.to_string(), weight: v.weight, norm: v.norm })
                .collect(),
        }
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &std::path::Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn fmt_f(out: &mut String, v: f64) {
    if v.is_nan() {
        out.push_str("NaN");
    } else {
        // `+ 0.0` folds −0 into +0 so identical runs print identical text.
        write!(out, "{:.16e}", v + 0.0).expect("writing to a String");
    }
}

fn write_table(out: &mut impl Write, header: &[String], rows: impl Iterator<Item = Vec<f64>>) -> Result<()> {
    writeln!(out, "{}", header.join(","))?;
    let mut line = String::new();
    for row in rows {
        line.clear();
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            fmt_f(&mut line, *v);
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

pub const ALPHA_COLUMNS: [&str; 9] = [
    "t",
    "alpha0_plus",
    "alphax_plus",
    "alphay_plus",
    "alphaz_plus",
    "alpha0_minus",
    "alphax_minus",
    "alphay_minus",
    "alphaz_minus",
];

pub fn write_alpha_csv(out: &mut impl Write, rows: &[[f64; 9]]) -> Result<()> {
    let header: Vec<String> = ALPHA_COLUMNS.iter().map(|s| s.to_string()).collect();
    write_table(out, &header, rows.iter().map(|r| r.to_vec()))
}

pub fn trajectory_header(n: usize) -> Vec<String> {
    let mut h = vec!["t".to_string()];
    for r in 0..n {
        for c in 0..n {
            h.push(format!("U{r}{c}_re"));
            h.push(format!("U{r}{c}_im"));
        }
    }
    h.extend(["unitarity_err", "trF2_drift", "constraint_res", "geodesic_res"].map(String::from));
    h
}

/// Trajectory rows: `t`, `U` row-major as re/im pairs, then the per-sample
/// diagnostics. The geodesic residual is `NaN` at the two end samples.
pub fn trajectory_rows(traj: &Trajectory) -> Result<Vec<Vec<f64>>> {
    let diags = sample_diagnostics(traj)?;
    Ok(traj
        .samples
        .iter()
        .zip(&diags)
        .map(|(s, d)| {
            let mut row = Vec::with_capacity(2 * s.u.dim() * s.u.dim() + 5);
            row.push(s.t);
            for z in s.u.matrix().row_major() {
                row.push(z.re);
                row.push(z.im);
            }
            row.extend([
                d.unitarity_error,
                d.trf2_drift,
                d.constraint_residual,
                d.geodesic_residual.unwrap_or(f64::NAN),
            ]);
            row
        })
        .collect())
}

pub fn write_trajectory_csv(out: &mut impl Write, traj: &Trajectory) -> Result<()> {
    let n = traj.samples.first().map_or(0, |s| s.u.dim());
    write_table(out, &trajectory_header(n), trajectory_rows(traj)?.into_iter())
}

/// Rows as a JSON array of objects keyed by column name.
pub fn rows_to_json(header: &[String], rows: &[Vec<f64>]) -> serde_json::Value {
    let objects = rows
        .iter()
        .map(|row| {
            let map = header
                .iter()
                .zip(row)
                .map(|(k, v)| (k.clone(), serde_json::Number::from_f64(*v).map_or(serde_json::Value::Null, Into::into)))
                .collect();
            serde_json::Value::Object(map)
        })
        .collect();
    serde_json::Value::Array(objects)
}
