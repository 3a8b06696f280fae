//! File formats: function specs (JSON), sampled fields (CSV) and
//! uncertainty reports (JSON).
//!
//! A spec file looks like
//! `{"m":2,"kind":"poly_gaussian","a":0.5,"poly":[{"coeff":{"blade":"","re":1,"im":0},"monomial":[1,0]}]}`.
//! Kinds are `gaussian` (`a`), `poly_gaussian` (`a`, `poly`), `radial`
//! (`r`, `values`) and `indicator` (`radius`). A term coefficient is one
//! `{"blade","re","im"}` object or a list of them; blade names are index
//! strings (`""` or `"0"` for the scalar, `"12"` for `e12`, an optional
//! leading `e` is accepted).

use std::io::{Read, Write};
use std::path::Path;

use clifft_core::field::SampledField;
use clifft_core::grid::Grid;
use clifft_core::spec::{FunctionKind, FunctionSpec, PolyTerm, Polynomial, RadialTable};
use clifft_core::uncertainty::{BMembershipReport, GaussianFit, UncertaintyParams, UncertaintyReport};
use clifft_core::{Blade, Complex, Multivector};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{CliError, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecFile {
    pub m: usize,
    #[serde(flatten)]
    pub kind: KindFile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KindFile {
    Gaussian { a: f64 },
    PolyGaussian { a: f64, poly: Vec<TermFile> },
    Radial { r: Vec<f64>, values: Vec<f64> },
    Indicator { radius: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermFile {
    pub coeff: CoeffFile,
    pub monomial: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffFile {
    One(BladeCoeff),
    Many(Vec<BladeCoeff>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BladeCoeff {
    pub blade: String,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

fn parse_blade(name: &str, m: usize) -> Result<Blade> {
    let name = name.trim();
    let name = name.strip_prefix('e').unwrap_or(name);
    Ok(Blade::parse(name, m)?)
}

impl SpecFile {
    pub fn to_spec(&self) -> Result<FunctionSpec> {
        let m = self.m;
        let kind = match &self.kind {
            KindFile::Gaussian { a } => FunctionKind::Gaussian { a: *a },
            KindFile::PolyGaussian { a, poly } => {
                let mut terms = Vec::with_capacity(poly.len());
                for t in poly {
                    let parts = match &t.coeff {
                        CoeffFile::One(c) => std::slice::from_ref(c),
                        CoeffFile::Many(cs) => cs.as_slice(),
                    };
                    let mut coeff = Multivector::zero(m)?;
                    for c in parts {
                        let blade = parse_blade(&c.blade, m)?;
                        let prev = coeff.coeff(blade);
                        coeff.set(blade, prev + Complex::new(c.re, c.im))?;
                    }
                    terms.push(PolyTerm { coeff, exponents: t.monomial.clone() });
                }
                FunctionKind::PolyGaussian { a: *a, poly: Polynomial::new(m, terms)? }
            }
            KindFile::Radial { r, values } => FunctionKind::Radial(RadialTable::new(r.clone(), values.clone())?),
            KindFile::Indicator { radius } => FunctionKind::Indicator { radius: *radius },
        };
        Ok(FunctionSpec::new(m, kind)?)
    }

    pub fn from_spec(spec: &FunctionSpec) -> Self {
        let m = spec.m();
        let kind = match spec.kind() {
            FunctionKind::Gaussian { a } => KindFile::Gaussian { a: *a },
            FunctionKind::PolyGaussian { a, poly } => KindFile::PolyGaussian {
                a: *a,
                poly: poly
                    .terms()
                    .iter()
                    .map(|t| TermFile {
                        coeff: CoeffFile::Many(
                            t.coeff
                                .terms()
                                .into_iter()
                                .map(|(b, c)| BladeCoeff { blade: b.name(m), re: c.re, im: c.im })
                                .collect(),
                        ),
                        monomial: t.exponents.clone(),
                    })
                    .collect(),
            },
            FunctionKind::Radial(t) => KindFile::Radial { r: t.radii().to_vec(), values: t.values().to_vec() },
            FunctionKind::Indicator { radius } => KindFile::Indicator { radius: *radius },
        };
        SpecFile { m, kind }
    }
}

pub fn parse_spec(text: &str) -> Result<FunctionSpec> {
    let file: SpecFile = serde_json::from_str(text).map_err(|e| CliError::Usage(format!("invalid spec: {e}")))?;
    file.to_spec()
}

pub fn spec_to_json(spec: &FunctionSpec) -> String {
    serde_json::to_string(&SpecFile::from_spec(spec)).expect("spec serializes")
}

pub fn load_spec(path: &Path) -> Result<FunctionSpec> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(CliError::Usage(format!("spec not found: {}", path.display())))
        }
        Err(e) => return Err(CliError::Usage(format!("cannot read spec {}: {e}", path.display()))),
    };
    parse_spec(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// Column label of a blade: `0` for the scalar, the index string otherwise.
pub fn blade_label(blade: Blade, m: usize) -> String {
    if blade == Blade::SCALAR {
        String::from("0")
    } else {
        blade.name(m)
    }
}

fn fmt_f64(v: f64) -> String {
    format!("{v:e}")
}

/// Header `x1..xm, re_<blade>, im_<blade>, ...` (stored blades, canonical
/// order), then one row per node in grid order.
pub fn write_field_csv<W: Write>(f: &SampledField, out: W) -> Result<()> {
    let m = f.m();
    let mut comps: Vec<&(Blade, Vec<Complex>)> = f.components().iter().collect();
    comps.sort_by(|a, b| a.0.canonical_cmp(b.0));
    // The zero field keeps a scalar column so the file stays readable.
    let scalar_only;
    if comps.is_empty() {
        scalar_only = [(Blade::SCALAR, vec![Complex::new(0.0, 0.0); f.node_count()])];
        comps = scalar_only.iter().collect();
    }
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = (1..=m).map(|i| format!("x{i}")).collect();
    for (b, _) in &comps {
        let l = blade_label(*b, m);
        header.push(format!("re_{l}"));
        header.push(format!("im_{l}"));
    }
    w.write_record(&header).map_err(csv_err)?;
    let mut x = vec![0.0; m];
    let mut row = Vec::with_capacity(header.len());
    for idx in 0..f.node_count() {
        f.grid().node(idx, &mut x);
        row.clear();
        row.extend(x.iter().map(|v| fmt_f64(*v)));
        for (_, vals) in &comps {
            row.push(fmt_f64(vals[idx].re));
            row.push(fmt_f64(vals[idx].im));
        }
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn field_csv_string(f: &SampledField) -> Result<String> {
    let mut buf = Vec::new();
    write_field_csv(f, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is ascii"))
}

pub fn save_field_csv(f: &SampledField, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)
        .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", path.display())))?;
    write_field_csv(f, std::io::BufWriter::new(file))
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Usage(format!("csv: {e}"))
}

/// Reads a field written by [`write_field_csv`]. Rows must list the nodes of
/// `grid` in grid order; coordinates are checked against the grid.
pub fn read_field_csv<R: Read>(input: R, grid: &Grid) -> Result<SampledField> {
    let m = grid.m();
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers().map_err(csv_err)?.clone();
    let bad = |msg: String| CliError::Usage(format!("field csv: {msg}"));
    for i in 0..m {
        if header.get(i) != Some(format!("x{}", i + 1).as_str()) {
            return Err(bad(format!("expected column x{} at position {}", i + 1, i + 1)));
        }
    }
    let rest: Vec<&str> = header.iter().skip(m).collect();
    if rest.len() % 2 != 0 {
        return Err(bad(String::from("value columns must come in re/im pairs")));
    }
    let mut blades = Vec::new();
    for pair in rest.chunks(2) {
        let (re, im) = (pair[0], pair[1]);
        let label = re.strip_prefix("re_").ok_or_else(|| bad(format!("unexpected column {re}")))?;
        if im.strip_prefix("im_") != Some(label) {
            return Err(bad(format!("column {im} does not pair with {re}")));
        }
        blades.push(Blade::parse(label, m)?);
    }
    let count = grid.node_count();
    let mut values = vec![Vec::with_capacity(count); blades.len()];
    let tol = 1e-9 * grid.radius().max(1.0);
    let mut x = vec![0.0; m];
    let mut rows = 0usize;
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        if rows >= count {
            return Err(bad(format!("more rows than the {count} grid nodes")));
        }
        let num = |i: usize| -> Result<f64> {
            rec.get(i)
                .and_then(|s| s.trim().parse::<f64>().ok())
                .ok_or_else(|| bad(format!("row {}: bad number in column {}", line + 2, i + 1)))
        };
        grid.node(rows, &mut x);
        for (i, xi) in x.iter().enumerate() {
            if (num(i)? - xi).abs() > tol {
                return Err(bad(format!("row {}: coordinates do not match the grid", line + 2)));
            }
        }
        for (k, col) in values.iter_mut().enumerate() {
            col.push(Complex::new(num(m + 2 * k)?, num(m + 2 * k + 1)?));
        }
        rows += 1;
    }
    if rows != count {
        return Err(bad(format!("{rows} rows for {count} grid nodes")));
    }
    Ok(SampledField::from_components(*grid, blades.into_iter().zip(values).collect())?)
}

pub fn load_field_csv(path: &Path, grid: &Grid) -> Result<SampledField> {
    let file = std::fs::File::open(path).map_err(|e| CliError::Usage(format!("field not found: {}: {e}", path.display())))?;
    read_field_csv(std::io::BufReader::new(file), grid)
}

#[derive(Serialize)]
pub struct FitTerm {
    pub blade: String,
    pub monomial: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

#[derive(Serialize)]
pub struct FitFile {
    pub a: f64,
    pub degree: u32,
    pub residual: f64,
    pub coefficients: Vec<FitTerm>,
}

impl FitFile {
    pub fn new(fit: &GaussianFit, m: usize) -> Self {
        let mut coefficients = Vec::new();
        for (blade, terms) in &fit.coefficients {
            for (mono, c) in terms {
                // `+ 0.0` maps -0 to 0.
                coefficients.push(FitTerm { blade: blade_label(*blade, m), monomial: mono.clone(), re: c.re + 0.0, im: c.im + 0.0 });
            }
        }
        FitFile { a: fit.a, degree: fit.degree, residual: fit.residual, coefficients }
    }
}

#[derive(Serialize)]
pub struct SeriesFile<'a> {
    pub name: &'a str,
    pub values: &'a [f64],
    pub verdict: &'a str,
}

#[derive(Serialize)]
pub struct ParamsFile {
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub beta: f64,
    pub p: f64,
    pub q: f64,
}

fn serialize_pairs<S: Serializer>(pairs: &[(&'static str, f64)], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(pairs.iter().map(|(k, v)| (*k, *v)))
}

#[derive(Serialize)]
pub struct ReportFile<'a> {
    pub functional: &'a str,
    #[serde(rename = "N")]
    pub n: u32,
    pub radii: &'a [f64],
    pub values: &'a [f64],
    pub verdict: &'a str,
    pub fit: Option<FitFile>,
    pub expected_a: Option<f64>,
    pub series: Vec<SeriesFile<'a>>,
    #[serde(serialize_with = "serialize_pairs")]
    pub estimates: &'a [(&'static str, f64)],
    pub parameters: ParamsFile,
    pub notes: &'a [String],
}

/// Pretty-printed JSON for an uncertainty report. Non-finite numbers are
/// written as `null`.
pub fn report_json(report: &UncertaintyReport, params: &UncertaintyParams, m: usize) -> String {
    let file = ReportFile {
        functional: report.functional,
        n: report.n,
        radii: &report.radii,
        values: report.values(),
        verdict: report.verdict.name(),
        fit: report.fit.as_ref().map(|f| FitFile::new(f, m)),
        expected_a: report.expected_a,
        series: report
            .series
            .iter()
            .map(|s| SeriesFile { name: s.name, values: &s.values, verdict: s.verdict.name() })
            .collect(),
        estimates: &report.estimates,
        parameters: ParamsFile {
            a: params.a,
            b: params.b,
            alpha: params.alpha,
            beta: params.beta,
            p: params.p,
            q: params.q,
        },
        notes: &report.notes,
    };
    serde_json::to_string_pretty(&file).expect("report serializes")
}

#[derive(Serialize)]
struct BMembershipFile<'a> {
    functional: &'a str,
    #[serde(rename = "N")]
    n: u32,
    radii: &'a [f64],
    f_norms: &'a [f64],
    transform_norms: &'a [f64],
    f_change: f64,
    transform_change: f64,
    stable: bool,
    beurling: &'a str,
}

pub fn b_membership_json(report: &BMembershipReport, n: u32) -> String {
    let file = BMembershipFile {
        functional: "b-membership",
        n,
        radii: &report.radii,
        f_norms: &report.f_norms,
        transform_norms: &report.transform_norms,
        f_change: report.f_change,
        transform_change: report.transform_change,
        stable: report.stable,
        beurling: report.beurling.name(),
    };
    serde_json::to_string_pretty(&file).expect("report serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_round_trip() {
        let text = r#"{"m":2,"kind":"poly_gaussian","a":0.5,"poly":[{"coeff":{"blade":"","re":1,"im":0},"monomial":[1,0]},{"coeff":[{"blade":"e12","re":0,"im":2}],"monomial":[0,1]}]}"#;
        let spec = parse_spec(text).unwrap();
        assert_eq!(spec.degree(), Some(1));
        let again = parse_spec(&spec_to_json(&spec)).unwrap();
        assert_eq!(spec, again);
        let v = spec.eval(&[1.0, 1.0]).unwrap();
        let e = (-1.0f64).exp();
        assert!((v.coeffs()[0].re - e).abs() < 1e-15);
        assert!((v.coeffs()[3].im - 2.0 * e).abs() < 1e-15);
    }

    #[test]
    fn spec_kinds() {
        assert!(parse_spec(r#"{"m":2,"kind":"gaussian","a":0.5}"#).is_ok());
        assert!(parse_spec(r#"{"m":2,"kind":"indicator","radius":1}"#).is_ok());
        assert!(parse_spec(r#"{"m":2,"kind":"radial","r":[0,1,2],"values":[1,0.5,0]}"#).is_ok());
        assert!(matches!(parse_spec(r#"{"m":2,"kind":"gaussian","a":-1}"#), Err(CliError::Usage(_))));
        assert!(matches!(parse_spec(r#"{"m":2,"kind":"cube"}"#), Err(CliError::Usage(_))));
        assert!(parse_spec(r#"{"m":2,"kind":"poly_gaussian","a":1,"poly":[{"coeff":{"blade":"3","re":1},"monomial":[0,0]}]}"#)
            .is_err());
    }

    #[test]
    fn missing_spec_file() {
        let err = load_spec(Path::new("/nonexistent/spec.json")).unwrap_err();
        assert!(err.to_string().contains("spec not found"));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn csv_round_trip() {
        let grid = Grid::cartesian(2, 6, 2.0).unwrap();
        let spec = parse_spec(
            r#"{"m":2,"kind":"poly_gaussian","a":0.5,"poly":[{"coeff":[{"blade":"","re":1},{"blade":"12","re":0.5,"im":-1}],"monomial":[1,0]}]}"#,
        )
        .unwrap();
        let f = clifft_core::field::sample(&spec, &grid).unwrap();
        let text = field_csv_string(&f).unwrap();
        assert!(text.starts_with("x1,x2,re_0,im_0,re_12,im_12\n"));
        assert_eq!(text.lines().count(), 37);
        let back = read_field_csv(text.as_bytes(), &grid).unwrap();
        assert_eq!(back.sub(&f).unwrap().sup_norm(), 0.0);
        let other = Grid::cartesian(2, 6, 3.0).unwrap();
        assert!(read_field_csv(text.as_bytes(), &other).is_err());
    }

    #[test]
    fn zero_field_keeps_scalar_columns() {
        let grid = Grid::cartesian(2, 2, 1.0).unwrap();
        let text = field_csv_string(&SampledField::zeros(grid)).unwrap();
        assert!(text.starts_with("x1,x2,re_0,im_0\n"));
    }
}
