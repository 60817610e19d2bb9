//! Samples, datasets, CSV ingestion, feature standardization, and the
//! synthetic generator used for desk-scale verification.
//!
//! A sample carries the nine geometric/hydraulic inputs plus the discharge
//! coefficient target. The CSV schema is fixed:
//! `lambda,beta,L,W,Q,Y1,Y2,Y3,h1,Cd`.

use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::hydraulics;

/// Number of input features per sample.
pub const N_FEATURES: usize = 9;

/// CSV header, also the feature order used everywhere downstream.
pub const CSV_HEADER: [&str; 10] = [
    "lambda", "beta", "L", "W", "Q", "Y1", "Y2", "Y3", "h1", "Cd",
];

/// One experimental record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeirSample {
    /// Relative eccentricity (dimensionless).
    pub lambda: f64,
    /// Downstream-slope angle, degrees; zero encodes no base-block.
    pub beta: f64,
    /// Initial weir length, m.
    pub l: f64,
    /// Total weir height, m.
    pub w: f64,
    /// Flow discharge, m³/s.
    pub q: f64,
    /// Upstream water depth, m.
    pub y1: f64,
    /// Water depth at the weir crest, m.
    pub y2: f64,
    /// Downstream flow depth, m.
    pub y3: f64,
    /// Upstream flow depth on the weir crest, m.
    pub h1: f64,
    /// Discharge coefficient target, when known.
    pub cd: Option<f64>,
}

impl WeirSample {
    /// Features in header order: lambda, beta, L, W, Q, Y1, Y2, Y3, h1.
    pub fn features(&self) -> [f64; N_FEATURES] {
        [
            self.lambda, self.beta, self.l, self.w, self.q, self.y1, self.y2, self.y3, self.h1,
        ]
    }

    fn validate(&self) -> std::result::Result<(), String> {
        let positives = [
            ("lambda", self.lambda),
            ("L", self.l),
            ("W", self.w),
            ("Y1", self.y1),
            ("h1", self.h1),
        ];
        for (name, v) in positives {
            if !(v > 0.0) || !v.is_finite() {
                return Err(format!("{name} must be positive, got {v}"));
            }
        }
        if !(self.q >= 0.0) || !self.q.is_finite() {
            return Err(format!("Q must be non-negative, got {}", self.q));
        }
        if !(self.beta >= 0.0) || !self.beta.is_finite() {
            return Err(format!("beta must be non-negative, got {}", self.beta));
        }
        for (name, v) in [("Y2", self.y2), ("Y3", self.y3)] {
            if !v.is_finite() {
                return Err(format!("{name} must be finite, got {v}"));
            }
        }
        if let Some(cd) = self.cd {
            if !(cd > 0.0 && cd < 3.0) {
                return Err(format!("Cd must lie in (0, 3), got {cd}"));
            }
        }
        Ok(())
    }
}

/// Where a dataset came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    LoadedCsv,
    Synthetic,
}

/// Ordered, validated collection of samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    samples: Vec<WeirSample>,
    pub provenance: Provenance,
    pub seed: Option<u64>,
}

impl Dataset {
    pub fn new(samples: Vec<WeirSample>, provenance: Provenance, seed: Option<u64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Validation {
                row: 0,
                detail: "empty dataset".into(),
            });
        }
        for (i, s) in samples.iter().enumerate() {
            s.validate().map_err(|detail| Error::Validation {
                row: i + 1,
                detail,
            })?;
        }
        Ok(Dataset {
            samples,
            provenance,
            seed,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[WeirSample] {
        &self.samples
    }

    pub fn sample(&self, i: usize) -> &WeirSample {
        &self.samples[i]
    }

    /// Sub-dataset in original order; provenance and seed carry over.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            samples: indices.iter().map(|&i| self.samples[i]).collect(),
            provenance: self.provenance,
            seed: self.seed,
        }
    }

    /// Targets of all samples; errors if any sample lacks one.
    pub fn targets(&self) -> Result<Vec<f64>> {
        self.samples
            .iter()
            .enumerate()
            .map(|(i, s)| {
                s.cd.ok_or_else(|| Error::Validation {
                    row: i + 1,
                    detail: "sample has no Cd target".into(),
                })
            })
            .collect()
    }

    /// Feature rows in header order.
    pub fn feature_matrix(&self) -> Vec<Vec<f64>> {
        self.samples.iter().map(|s| s.features().to_vec()).collect()
    }
}

/// Formats a float with 17 significant digits so the value survives a
/// text round trip bit-exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Loads a dataset from CSV. The header must match [`CSV_HEADER`] exactly.
pub fn load_csv(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => {
                Error::io(path, std::io::Error::other(e.to_string()))
            }
            _ => Error::Schema(e.to_string()),
        })?;

    {
        let headers = reader
            .headers()
            .map_err(|e| Error::Schema(e.to_string()))?;
        let got: Vec<&str> = headers.iter().collect();
        if got.len() != CSV_HEADER.len() {
            let missing: Vec<&str> = CSV_HEADER
                .iter()
                .filter(|c| !got.contains(*c))
                .copied()
                .collect();
            let extra: Vec<&str> = got
                .iter()
                .filter(|c| !CSV_HEADER.contains(*c))
                .copied()
                .collect();
            return Err(Error::Schema(format!(
                "expected columns {CSV_HEADER:?}; missing {missing:?}, unexpected {extra:?}"
            )));
        }
        for (want, have) in CSV_HEADER.iter().zip(&got) {
            if want != have {
                return Err(Error::Schema(format!(
                    "expected column '{want}', found '{have}'"
                )));
            }
        }
    }

    let mut samples = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let row = idx + 1;
        let record = record.map_err(|e| Error::Parse {
            row,
            detail: e.to_string(),
        })?;
        if record.len() != CSV_HEADER.len() {
            return Err(Error::Parse {
                row,
                detail: format!("expected {} cells, got {}", CSV_HEADER.len(), record.len()),
            });
        }
        let mut cells = [0.0f64; 10];
        for (col, cell) in record.iter().enumerate() {
            if cell.is_empty() {
                return Err(Error::Parse {
                    row,
                    detail: format!("blank cell in column '{}'", CSV_HEADER[col]),
                });
            }
            cells[col] = cell.parse::<f64>().map_err(|_| Error::Parse {
                row,
                detail: format!("non-numeric cell '{}' in column '{}'", cell, CSV_HEADER[col]),
            })?;
        }
        samples.push(WeirSample {
            lambda: cells[0],
            beta: cells[1],
            l: cells[2],
            w: cells[3],
            q: cells[4],
            y1: cells[5],
            y2: cells[6],
            y3: cells[7],
            h1: cells[8],
            cd: Some(cells[9]),
        });
    }
    if samples.is_empty() {
        return Err(Error::Validation {
            row: 0,
            detail: "empty dataset".into(),
        });
    }
    Dataset::new(samples, Provenance::LoadedCsv, None)
}

/// Writes a dataset as CSV with LF line endings and 17-significant-digit
/// floats; `load_csv` of the result reproduces the samples bit-exactly.
pub fn write_csv(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    out.push_str(&CSV_HEADER.join(","));
    out.push('\n');
    for (i, s) in dataset.samples.iter().enumerate() {
        let cd = s.cd.ok_or_else(|| Error::Validation {
            row: i + 1,
            detail: "cannot serialize a sample without Cd".into(),
        })?;
        let fields = [
            s.lambda, s.beta, s.l, s.w, s.q, s.y1, s.y2, s.y3, s.h1, cd,
        ];
        let mut first = true;
        for v in fields {
            if !first {
                out.push(',');
            }
            first = false;
            let _ = write!(out, "{}", fmt_f64(v));
        }
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Target-generation mode for the synthetic generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyntheticMode {
    /// Cd from the curve-fitted power law plus Gaussian noise.
    Bagheri,
    /// Cd as a fixed affine map of the nine (population-standardized)
    /// features plus Gaussian noise; exactly recoverable by linear
    /// regression when the noise is zero.
    Linear,
}

impl SyntheticMode {
    pub fn parse(token: &str) -> Result<Self> {
        match token.to_ascii_lowercase().as_str() {
            "bagheri" => Ok(SyntheticMode::Bagheri),
            "linear" => Ok(SyntheticMode::Linear),
            other => Err(Error::Argument(format!("unknown synthetic mode '{other}'"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SyntheticMode::Bagheri => "bagheri",
            SyntheticMode::Linear => "linear",
        }
    }
}

/// Intercept and per-feature coefficients of the `linear` mode, applied to
/// population z-scores of the features in header order. Recorded here so the
/// generator is a reproducible oracle.
pub const LINEAR_MODE_INTERCEPT: f64 = 0.9;
pub const LINEAR_MODE_COEFFS: [f64; N_FEATURES] = [
    0.02, -0.015, 0.01, 0.012, -0.008, 0.014, 0.006, -0.01, 0.016,
];

/// Channel width used when back-computing Q, m.
pub const SYNTHETIC_WEIR_WIDTH: f64 = 0.3;

/// Generates a synthetic dataset. Identical arguments produce an identical
/// dataset.
///
/// Feature ranges: lambda in [0.5, 2]; beta is 0 with probability 1/2 and
/// otherwise uniform in [10, 60] degrees; L in [0.1, 1] m; W in [0.05, 0.5] m;
/// h1 in [0.01, 0.3·W + 0.05] m; Y1 = W + h1; Y2 = W + (2/3)·h1; Y3 uniform in
/// [0.2, 0.8]·Y1. Q is back-computed from the head-discharge relation with
/// B = 0.3 m, g = 9.81 m/s², zero approach velocity.
pub fn generate_synthetic(
    n: usize,
    mode: SyntheticMode,
    noise_sd: f64,
    seed: u64,
) -> Result<Dataset> {
    if n < 2 {
        return Err(Error::Argument(format!("n must be at least 2, got {n}")));
    }
    if !(noise_sd >= 0.0) || !noise_sd.is_finite() {
        return Err(Error::Argument(format!(
            "noise_sd must be non-negative, got {noise_sd}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, 1.0).expect("unit normal");

    // First pass: draw geometry and the power-law Cd.
    let mut samples = Vec::with_capacity(n);
    let mut base_cd = Vec::with_capacity(n);
    for _ in 0..n {
        let lambda = rng.random_range(0.5..=2.0);
        let beta = if rng.random_range(0.0..1.0) < 0.5 {
            0.0
        } else {
            rng.random_range(10.0..=60.0)
        };
        let l = rng.random_range(0.1..=1.0);
        let w = rng.random_range(0.05..=0.5);
        let h1 = rng.random_range(0.01..=(0.3 * w + 0.05));
        let y1 = w + h1;
        let y2 = w + (2.0 / 3.0) * h1;
        let y3 = rng.random_range(0.2..=0.8) * y1;
        let cd0 = hydraulics::cd_bagheri(lambda, h1, l, w)?;
        let q = hydraulics::discharge_from_cd(cd0, SYNTHETIC_WEIR_WIDTH, h1, hydraulics::G_DEFAULT)?;
        base_cd.push(cd0);
        samples.push(WeirSample {
            lambda,
            beta,
            l,
            w,
            q,
            y1,
            y2,
            y3,
            h1,
            cd: None,
        });
    }

    // Second pass: targets.
    match mode {
        SyntheticMode::Bagheri => {
            for (s, cd0) in samples.iter_mut().zip(&base_cd) {
                let noise = if noise_sd > 0.0 {
                    noise_sd * normal.sample(&mut rng)
                } else {
                    0.0
                };
                s.cd = Some((cd0 + noise).clamp(1e-3, 2.999));
            }
        }
        SyntheticMode::Linear => {
            let rows: Vec<[f64; N_FEATURES]> = samples.iter().map(|s| s.features()).collect();
            let mut mean = [0.0; N_FEATURES];
            let mut sd = [0.0; N_FEATURES];
            for j in 0..N_FEATURES {
                let m = rows.iter().map(|r| r[j]).sum::<f64>() / n as f64;
                let var = rows.iter().map(|r| (r[j] - m) * (r[j] - m)).sum::<f64>() / n as f64;
                mean[j] = m;
                sd[j] = if var.sqrt() > 0.0 { var.sqrt() } else { 1.0 };
            }
            for (s, row) in samples.iter_mut().zip(&rows) {
                let mut cd = LINEAR_MODE_INTERCEPT;
                for j in 0..N_FEATURES {
                    cd += LINEAR_MODE_COEFFS[j] * (row[j] - mean[j]) / sd[j];
                }
                let noise = if noise_sd > 0.0 {
                    noise_sd * normal.sample(&mut rng)
                } else {
                    0.0
                };
                s.cd = Some((cd + noise).clamp(1e-3, 2.999));
            }
        }
    }

    Dataset::new(samples, Provenance::Synthetic, Some(seed))
}

/// Per-feature standardization parameters, fit on a training split.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalerParams {
    pub mean: [f64; N_FEATURES],
    pub sd: [f64; N_FEATURES],
    /// Indices of constant features whose sd was forced to 1.
    pub constant_features: Vec<usize>,
}

impl ScalerParams {
    /// z-scores of a sample's features, in header order.
    pub fn transform(&self, sample: &WeirSample) -> [f64; N_FEATURES] {
        self.transform_features(&sample.features())
    }

    pub fn transform_features(&self, features: &[f64; N_FEATURES]) -> [f64; N_FEATURES] {
        let mut out = [0.0; N_FEATURES];
        for j in 0..N_FEATURES {
            out[j] = (features[j] - self.mean[j]) / self.sd[j];
        }
        out
    }

    /// Standardized feature rows for a whole dataset.
    pub fn transform_dataset(&self, dataset: &Dataset) -> Vec<Vec<f64>> {
        dataset
            .samples()
            .iter()
            .map(|s| self.transform(s).to_vec())
            .collect()
    }
}

/// Fits z-score parameters on a training split (population standard
/// deviation). Constant features get sd = 1 and are recorded.
pub fn standardize(train: &Dataset) -> Result<ScalerParams> {
    if train.is_empty() {
        return Err(Error::Argument("cannot standardize an empty dataset".into()));
    }
    let n = train.len() as f64;
    let mut mean = [0.0; N_FEATURES];
    let mut sd = [0.0; N_FEATURES];
    let mut constant = Vec::new();
    for j in 0..N_FEATURES {
        let m = train.samples().iter().map(|s| s.features()[j]).sum::<f64>() / n;
        let var = train
            .samples()
            .iter()
            .map(|s| {
                let d = s.features()[j] - m;
                d * d
            })
            .sum::<f64>()
            / n;
        mean[j] = m;
        let s = var.sqrt();
        if s > 0.0 {
            sd[j] = s;
        } else {
            sd[j] = 1.0;
            constant.push(j);
        }
    }
    Ok(ScalerParams {
        mean,
        sd,
        constant_features: constant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hydraulics::cd_bagheri;

    fn sample(cd: Option<f64>) -> WeirSample {
        WeirSample {
            lambda: 1.0,
            beta: 0.0,
            l: 0.5,
            w: 0.2,
            q: 0.05,
            y1: 0.3,
            y2: 0.25,
            y3: 0.1,
            h1: 0.1,
            cd,
        }
    }

    #[test]
    fn dataset_rejects_empty() {
        let err = Dataset::new(vec![], Provenance::LoadedCsv, None).unwrap_err();
        assert!(err.to_string().contains("empty dataset"));
    }

    #[test]
    fn dataset_rejects_cd_out_of_bounds() {
        let err = Dataset::new(vec![sample(Some(-0.5))], Provenance::LoadedCsv, None).unwrap_err();
        assert!(matches!(err, Error::Validation { row: 1, .. }));
        assert!(Dataset::new(vec![sample(Some(3.5))], Provenance::LoadedCsv, None).is_err());
        assert!(Dataset::new(vec![sample(Some(0.9))], Provenance::LoadedCsv, None).is_ok());
    }

    #[test]
    fn load_csv_roundtrip_via_files() {
        let dir = tempfile::tempdir().unwrap();
        let p1 = dir.path().join("a.csv");
        let p2 = dir.path().join("b.csv");
        let ds = generate_synthetic(40, SyntheticMode::Bagheri, 0.01, 9).unwrap();
        write_csv(&ds, &p1).unwrap();
        let loaded = load_csv(&p1).unwrap();
        assert_eq!(loaded.len(), 40);
        assert_eq!(loaded.samples(), ds.samples());
        write_csv(&loaded, &p2).unwrap();
        assert_eq!(
            std::fs::read(&p1).unwrap(),
            std::fs::read(&p2).unwrap(),
            "serialized bytes must be stable"
        );
    }

    #[test]
    fn load_csv_accepts_crlf() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("crlf.csv");
        let body = "lambda,beta,L,W,Q,Y1,Y2,Y3,h1,Cd\r\n1.0,0.0,0.5,0.2,0.05,0.3,0.25,0.1,0.1,0.9\r\n";
        std::fs::write(&p, body).unwrap();
        let ds = load_csv(&p).unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(ds.sample(0).cd, Some(0.9));
    }

    #[test]
    fn load_csv_header_only_is_empty_dataset() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("empty.csv");
        std::fs::write(&p, "lambda,beta,L,W,Q,Y1,Y2,Y3,h1,Cd\n").unwrap();
        let err = load_csv(&p).unwrap_err();
        assert!(err.to_string().contains("empty dataset"), "{err}");
    }

    #[test]
    fn load_csv_names_bad_column() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("cols.csv");
        std::fs::write(&p, "lambda,beta,L,W,Q,Y1,Y2,Y3,head,Cd\n").unwrap();
        let err = load_csv(&p).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("h1") && msg.contains("head"), "{msg}");
    }

    #[test]
    fn load_csv_missing_column_is_schema_error() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("missing.csv");
        std::fs::write(&p, "lambda,beta,L,W,Q,Y1,Y2,Y3,h1\n").unwrap();
        let err = load_csv(&p).unwrap_err();
        assert!(matches!(err, Error::Schema(_)));
        assert!(err.to_string().contains("Cd"), "{err}");
    }

    #[test]
    fn load_csv_reports_parse_row() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.csv");
        std::fs::write(
            &p,
            "lambda,beta,L,W,Q,Y1,Y2,Y3,h1,Cd\n1,0,0.5,0.2,0.05,0.3,0.25,0.1,0.1,0.9\n1,0,0.5,0.2,oops,0.3,0.25,0.1,0.1,0.9\n",
        )
        .unwrap();
        let err = load_csv(&p).unwrap_err();
        assert!(matches!(err, Error::Parse { row: 2, .. }), "{err}");
        assert!(err.to_string().contains("Q"));
    }

    #[test]
    fn load_csv_rejects_blank_cell() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("blank.csv");
        std::fs::write(
            &p,
            "lambda,beta,L,W,Q,Y1,Y2,Y3,h1,Cd\n1,0,0.5,0.2,,0.3,0.25,0.1,0.1,0.9\n",
        )
        .unwrap();
        let err = load_csv(&p).unwrap_err();
        assert!(err.to_string().contains("blank"), "{err}");
    }

    #[test]
    fn load_csv_validation_row_number() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("invalid.csv");
        std::fs::write(
            &p,
            "lambda,beta,L,W,Q,Y1,Y2,Y3,h1,Cd\n1,0,0.5,0.2,0.05,0.3,0.25,0.1,0.1,0.9\n1,0,0.5,0.2,0.05,0.3,0.25,0.1,0.1,-0.5\n",
        )
        .unwrap();
        let err = load_csv(&p).unwrap_err();
        assert!(matches!(err, Error::Validation { row: 2, .. }), "{err}");
    }

    #[test]
    fn synthetic_is_deterministic() {
        let a = generate_synthetic(120, SyntheticMode::Bagheri, 0.01, 7).unwrap();
        let b = generate_synthetic(120, SyntheticMode::Bagheri, 0.01, 7).unwrap();
        assert_eq!(a, b);
        let c = generate_synthetic(120, SyntheticMode::Bagheri, 0.01, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn synthetic_bagheri_zero_noise_matches_formula() {
        let ds = generate_synthetic(120, SyntheticMode::Bagheri, 0.0, 7).unwrap();
        for s in ds.samples() {
            let expect = cd_bagheri(s.lambda, s.h1, s.l, s.w).unwrap();
            assert_eq!(s.cd.unwrap(), expect);
        }
    }

    #[test]
    fn synthetic_noise_magnitude_band() {
        // mean |cd - formula| should be near noise_sd·sqrt(2/pi)
        let ds = generate_synthetic(1000, SyntheticMode::Bagheri, 0.01, 7).unwrap();
        let mean_abs: f64 = ds
            .samples()
            .iter()
            .map(|s| {
                (s.cd.unwrap() - cd_bagheri(s.lambda, s.h1, s.l, s.w).unwrap()).abs()
            })
            .sum::<f64>()
            / 1000.0;
        assert!(
            (0.0064..=0.0096).contains(&mean_abs),
            "mean abs noise {mean_abs}"
        );
    }

    #[test]
    fn synthetic_q_consistent_with_discharge_relation() {
        let ds = generate_synthetic(50, SyntheticMode::Bagheri, 0.0, 3).unwrap();
        for s in ds.samples() {
            let q = hydraulics::discharge_from_cd(
                s.cd.unwrap(),
                SYNTHETIC_WEIR_WIDTH,
                s.h1,
                hydraulics::G_DEFAULT,
            )
            .unwrap();
            assert!((q - s.q).abs() < 1e-15, "q mismatch {q} vs {}", s.q);
        }
    }

    #[test]
    fn synthetic_rejects_tiny_n() {
        assert!(matches!(
            generate_synthetic(1, SyntheticMode::Bagheri, 0.0, 7),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn synthetic_linear_mode_is_affine_in_features() {
        let ds = generate_synthetic(60, SyntheticMode::Linear, 0.0, 11).unwrap();
        // Recompute the population z-scores and the affine map.
        let n = ds.len() as f64;
        let rows = ds.feature_matrix();
        for j in 0..N_FEATURES {
            let m: f64 = rows.iter().map(|r| r[j]).sum::<f64>() / n;
            let sd = (rows.iter().map(|r| (r[j] - m) * (r[j] - m)).sum::<f64>() / n).sqrt();
            assert!(sd > 0.0, "feature {j} unexpectedly constant");
        }
        let mut mean = vec![0.0; N_FEATURES];
        let mut sd = vec![0.0; N_FEATURES];
        for j in 0..N_FEATURES {
            mean[j] = rows.iter().map(|r| r[j]).sum::<f64>() / n;
            sd[j] = (rows.iter().map(|r| (r[j] - mean[j]) * (r[j] - mean[j])).sum::<f64>() / n)
                .sqrt();
        }
        for (s, row) in ds.samples().iter().zip(&rows) {
            let mut expect = LINEAR_MODE_INTERCEPT;
            for j in 0..N_FEATURES {
                expect += LINEAR_MODE_COEFFS[j] * (row[j] - mean[j]) / sd[j];
            }
            assert!((s.cd.unwrap() - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn standardize_two_point_feature() {
        let mut s1 = sample(Some(0.9));
        let mut s2 = sample(Some(0.9));
        s1.lambda = 1.0;
        s2.lambda = 3.0;
        let ds = Dataset::new(vec![s1, s2], Provenance::Synthetic, None).unwrap();
        let scaler = standardize(&ds).unwrap();
        let z1 = scaler.transform(&s1);
        let z2 = scaler.transform(&s2);
        assert_eq!(z1[0], -1.0);
        assert_eq!(z2[0], 1.0);
    }

    #[test]
    fn standardize_constant_feature() {
        let ds = Dataset::new(vec![sample(Some(0.9)), sample(Some(1.0))], Provenance::Synthetic, None)
            .unwrap();
        let scaler = standardize(&ds).unwrap();
        // every feature is constant in this two-sample dataset
        assert_eq!(scaler.constant_features.len(), N_FEATURES);
        let z = scaler.transform(&sample(None));
        assert_eq!(z, [0.0; N_FEATURES]);
    }

    #[test]
    fn standardize_training_split_is_centered_and_unit() {
        let ds = generate_synthetic(80, SyntheticMode::Bagheri, 0.0, 17).unwrap();
        let scaler = standardize(&ds).unwrap();
        let z = scaler.transform_dataset(&ds);
        for j in 0..N_FEATURES {
            let m: f64 = z.iter().map(|r| r[j]).sum::<f64>() / 80.0;
            let var: f64 = z.iter().map(|r| (r[j] - m) * (r[j] - m)).sum::<f64>() / 80.0;
            assert!(m.abs() < 1e-12, "feature {j} mean {m}");
            if !scaler.constant_features.contains(&j) {
                assert!((var.sqrt() - 1.0).abs() < 1e-12, "feature {j} sd {}", var.sqrt());
            }
        }
    }

    #[test]
    fn transform_of_mean_is_zero() {
        let ds = generate_synthetic(30, SyntheticMode::Bagheri, 0.0, 5).unwrap();
        let scaler = standardize(&ds).unwrap();
        let mut s = sample(None);
        s.lambda = scaler.mean[0];
        s.beta = scaler.mean[1];
        s.l = scaler.mean[2];
        s.w = scaler.mean[3];
        s.q = scaler.mean[4];
        s.y1 = scaler.mean[5];
        s.y2 = scaler.mean[6];
        s.y3 = scaler.mean[7];
        s.h1 = scaler.mean[8];
        let z = scaler.transform(&s);
        for v in z {
            assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn fmt_f64_round_trips() {
        for &x in &[0.1, 1.0 / 3.0, 9.81, 1e-17, 123456.789, -0.30000000000000004] {
            let s = fmt_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
    }
}
