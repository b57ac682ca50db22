//! Machine-readable report rendering. JSON field names are stable:
//! `entropy, psnr, rmse, ssim_vs_a, ssim_vs_b, sd, mean, rmse_a, rmse_b,
//! psnr_a, psnr_b`; an infinite PSNR serializes as the string `"inf"`.

use fusewave_core::fusion::FusionWeights;
use fusewave_core::metrics::MetricsReport;
use serde_json::{json, Map, Value};

fn num_or_inf(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        json!("inf")
    }
}

pub fn metrics_to_json(r: &MetricsReport) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("entropy".into(), json!(r.entropy));
    m.insert("psnr".into(), num_or_inf(r.psnr));
    m.insert("rmse".into(), json!(r.rmse));
    m.insert("ssim_vs_a".into(), json!(r.ssim_vs_a));
    m.insert("ssim_vs_b".into(), json!(r.ssim_vs_b));
    m.insert("sd".into(), json!(r.sd));
    m.insert("mean".into(), json!(r.mean));
    m.insert("rmse_a".into(), json!(r.rmse_a));
    m.insert("rmse_b".into(), json!(r.rmse_b));
    m.insert("psnr_a".into(), num_or_inf(r.psnr_a));
    m.insert("psnr_b".into(), num_or_inf(r.psnr_b));
    m
}

/// The flat report for `metrics`; `fuse` extends it with run metadata.
pub fn metrics_json_string(r: &MetricsReport) -> String {
    serde_json::to_string_pretty(&Value::Object(metrics_to_json(r))).expect("json")
}

pub struct FuseReportMeta<'a> {
    pub weights: &'a FusionWeights,
    pub archive_size: usize,
    pub seed: u64,
    pub mode: &'a str,
    pub selection: &'a str,
    pub levels: usize,
    pub evaluations: u64,
    pub invalid_evaluations: u64,
}

pub fn fuse_report_json(r: &MetricsReport, meta: &FuseReportMeta) -> String {
    let mut m = metrics_to_json(r);
    m.insert("weights".into(), json!(meta.weights.to_vector()));
    m.insert("archive_size".into(), json!(meta.archive_size));
    m.insert("seed".into(), json!(meta.seed));
    m.insert("mode".into(), json!(meta.mode));
    m.insert("selection".into(), json!(meta.selection));
    m.insert("levels".into(), json!(meta.levels));
    m.insert("evaluations".into(), json!(meta.evaluations));
    m.insert("invalid_evaluations".into(), json!(meta.invalid_evaluations));
    serde_json::to_string_pretty(&Value::Object(m)).expect("json")
}

fn fmt_cell(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        "inf".into()
    }
}

pub const METRIC_COLUMNS: [&str; 11] = [
    "entropy", "psnr", "rmse", "ssim_vs_a", "ssim_vs_b", "sd", "mean", "rmse_a", "rmse_b",
    "psnr_a", "psnr_b",
];

pub fn metrics_csv(r: &MetricsReport) -> String {
    let cells = [
        r.entropy, r.psnr, r.rmse, r.ssim_vs_a, r.ssim_vs_b, r.sd, r.mean, r.rmse_a, r.rmse_b,
        r.psnr_a, r.psnr_b,
    ];
    format!(
        "{}\n{}\n",
        METRIC_COLUMNS.join(","),
        cells.map(fmt_cell).join(",")
    )
}

pub fn metrics_text(r: &MetricsReport) -> String {
    let mut out = String::new();
    let mut line = |k: &str, v: f64| {
        out.push_str(&format!("{k:<10} {}\n", fmt_cell(v)));
    };
    line("entropy", r.entropy);
    line("psnr", r.psnr);
    line("rmse", r.rmse);
    line("ssim_vs_a", r.ssim_vs_a);
    line("ssim_vs_b", r.ssim_vs_b);
    line("sd", r.sd);
    line("mean", r.mean);
    line("rmse_a", r.rmse_a);
    line("rmse_b", r.rmse_b);
    line("psnr_a", r.psnr_a);
    line("psnr_b", r.psnr_b);
    out
}

/// One `bench` CSV data row; the layout mirrors the benchmark tables plus
/// wall-clock milliseconds.
pub fn bench_row(
    seed: u64,
    mode: &str,
    r: &MetricsReport,
    wall_ms: u128,
) -> String {
    format!(
        "{seed},{mode},{:.4},{},{:.4},{:.4},{:.4},{:.4},{wall_ms}\n",
        r.entropy,
        if r.psnr.is_finite() {
            format!("{:.4}", r.psnr)
        } else {
            "inf".into()
        },
        r.rmse,
        r.sd,
        r.ssim_vs_a,
        r.ssim_vs_b,
    )
}

pub const BENCH_HEADER: &str = "seed,mode,en,psnr,rmse,sd,ssim_a,ssim_b,wall_ms\n";

/// Archive dump: one row per member, weights then the six objectives.
pub fn archive_csv(dump: &[(Vec<f64>, Vec<f64>)]) -> String {
    let mut out = String::new();
    if let Some((w, f)) = dump.first() {
        let mut cols: Vec<String> = (0..w.len()).map(|i| format!("w{i}")).collect();
        cols.extend((0..f.len()).map(|i| format!("f{i}")));
        out.push_str(&cols.join(","));
        out.push('\n');
    }
    for (w, f) in dump {
        let cells: Vec<String> = w.iter().chain(f.iter()).map(|v| fmt_cell(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
