//! CSV formatting. Floats use 17 significant digits so every value round-trips.

use banditgv::blo1p::OnePointRecord;
use banditgv::ensemble::EnsembleRow;
use banditgv::record::RunRecord;

pub const SUMMARY_HEADER: &str =
    "seed,regret_avg,regret_center,VT,VbarT,FT,wallclock_ms,config_hash";

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn indexed(prefix: &str, d: usize) -> impl Iterator<Item = String> + '_ {
    (0..d).map(move |k| format!("{prefix}{k}"))
}

pub fn two_point_header(d: usize) -> String {
    let mut cols = vec!["t".to_string(), "i".to_string()];
    cols.extend(indexed("w", d));
    cols.extend(indexed("x_plus", d));
    cols.extend(indexed("x_minus", d));
    cols.extend(["f_plus", "f_minus", "v", "eta", "innov_sq"].map(String::from));
    cols.join(",")
}

/// Sphere runs have no sampled coordinate; their `i` column is empty.
pub fn two_point_rows(rec: &RunRecord, d: usize) -> String {
    let mut out = two_point_header(d);
    out.push('\n');
    for r in &rec.rows {
        let mut cols = vec![
            r.t.to_string(),
            r.coord.map(|i| i.to_string()).unwrap_or_default(),
        ];
        cols.extend(
            r.w.iter()
                .chain(&r.x_plus)
                .chain(&r.x_minus)
                .map(|v| fmt_f64(*v)),
        );
        cols.extend([r.f_plus, r.f_minus, r.v, r.eta, r.innov_sq].map(fmt_f64));
        out.push_str(&cols.join(","));
        out.push('\n');
    }
    out
}

pub fn one_point_header(d: usize) -> String {
    let mut cols = vec!["t".to_string(), "i".to_string(), "sign".to_string()];
    cols.extend(indexed("w", d));
    cols.extend(indexed("x", d));
    cols.extend(["v", "z"].map(String::from));
    cols.join(",")
}

pub fn one_point_rows(rec: &OnePointRecord, d: usize) -> String {
    let mut out = one_point_header(d);
    out.push('\n');
    for r in &rec.rows {
        let mut cols = vec![
            r.t.to_string(),
            r.coord.to_string(),
            format!("{}", r.sign as i64),
        ];
        cols.extend(r.w.iter().chain(&r.x).map(|v| fmt_f64(*v)));
        cols.extend([r.v, r.z].map(fmt_f64));
        out.push_str(&cols.join(","));
        out.push('\n');
    }
    out
}

pub fn weights_header(n: usize) -> String {
    let mut cols = vec!["t".to_string(), "dominant".to_string()];
    cols.extend(indexed("p", n));
    cols.join(",")
}

pub fn weight_rows(meta: &[EnsembleRow], n: usize) -> String {
    let mut out = weights_header(n);
    out.push('\n');
    for m in meta {
        let mut cols = vec![m.t.to_string(), m.dominant.to_string()];
        cols.extend(m.weights.iter().map(|p| fmt_f64(*p)));
        out.push_str(&cols.join(","));
        out.push('\n');
    }
    out
}

#[allow(clippy::too_many_arguments)]
pub fn summary_line(
    seed: u64,
    regret_avg: f64,
    regret_center: f64,
    v_t: Option<f64>,
    vbar_t: Option<f64>,
    f_t: Option<f64>,
    wallclock_ms: u64,
    hash: &str,
) -> String {
    format!(
        "{seed},{},{},{},{},{},{wallclock_ms},{hash}",
        fmt_f64(regret_avg),
        fmt_f64(regret_center),
        fmt_opt(v_t),
        fmt_opt(vbar_t),
        fmt_opt(f_t)
    )
}
