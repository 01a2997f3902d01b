//! Report emission: a human-readable table, JSON, and TSV.
//!
//! All numbers are fixed to 6 decimals, so identical statistics always
//! serialize to identical bytes.

use super::config::OutputFormat;
use super::runner::SummaryStats;
use super::sweep::SweepReport;
use super::table1::Table1Certificate;

fn opt6(value: Option<f64>) -> String {
    match value {
        Some(v) => format!("{v:.6}"),
        None => "undefined".into(),
    }
}

/// Render batch statistics in the requested format.
pub fn emit_report(stats: &SummaryStats, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut out = serde_json::to_string_pretty(&stats.rounded())
                .expect("stats serialize infallibly");
            out.push('\n');
            out
        }
        OutputFormat::Tsv => {
            let mut rows = vec![("trials".to_string(), stats.trials.to_string())];
            rows.push(("length".into(), stats.length.to_string()));
            rows.push(("verdict.equal".into(), stats.verdicts.equal.to_string()));
            for (round, count) in &stats.verdicts.not_equal_at_round {
                rows.push((format!("verdict.not_equal.{round}"), count.to_string()));
            }
            rows.push((
                "verdict.aborted.a".into(),
                stats.verdicts.aborted_channel_a.to_string(),
            ));
            rows.push((
                "verdict.aborted.b".into(),
                stats.verdicts.aborted_channel_b.to_string(),
            ));
            rows.push((
                "mean_termination_round".into(),
                opt6(stats.mean_termination_round),
            ));
            rows.push((
                "decoy_error_rate".into(),
                format!("{:.6}", stats.decoy_error_rate.rate),
            ));
            rows.push((
                "decoy_error_stderr".into(),
                format!("{:.6}", stats.decoy_error_rate.stderr),
            ));
            rows.push(("detection_rate".into(), format!("{:.6}", stats.detection_rate)));
            rows.push(("qubit_efficiency".into(), opt6(stats.qubit_efficiency)));
            rows.push((
                "tp_knowledge_empirical".into(),
                format!("{:.6}", stats.tp_knowledge.empirical),
            ));
            rows.push((
                "tp_knowledge_theoretical".into(),
                format!("{:.6}", stats.tp_knowledge.theoretical),
            ));

            let mut out = String::from("metric\tvalue\n");
            for (metric, value) in rows {
                out.push_str(&format!("{metric}\t{value}\n"));
            }
            out
        }
        OutputFormat::Human => {
            let mut out = String::new();
            out.push_str(&format!("{:<28}{}\n", "trials", stats.trials));
            out.push_str(&format!("{:<28}{}\n", "length", stats.length));
            out.push_str(&format!("{:<28}{}\n", "verdict equal", stats.verdicts.equal));
            for (round, count) in &stats.verdicts.not_equal_at_round {
                out.push_str(&format!(
                    "{:<28}{}\n",
                    format!("verdict not-equal@{round}"),
                    count
                ));
            }
            out.push_str(&format!(
                "{:<28}{}\n",
                "verdict aborted (chan a)", stats.verdicts.aborted_channel_a
            ));
            out.push_str(&format!(
                "{:<28}{}\n",
                "verdict aborted (chan b)", stats.verdicts.aborted_channel_b
            ));
            out.push_str(&format!(
                "{:<28}{}\n",
                "mean termination round",
                opt6(stats.mean_termination_round)
            ));
            out.push_str(&format!(
                "{:<28}{:.6} ± {:.6}\n",
                "decoy error rate", stats.decoy_error_rate.rate, stats.decoy_error_rate.stderr
            ));
            out.push_str(&format!(
                "{:<28}{:.6}\n",
                "detection rate", stats.detection_rate
            ));
            out.push_str(&format!(
                "{:<28}{}\n",
                "qubit efficiency",
                opt6(stats.qubit_efficiency)
            ));
            out.push_str(&format!(
                "{:<28}{:.6} (theory {:.6})\n",
                "tp knowledge", stats.tp_knowledge.empirical, stats.tp_knowledge.theoretical
            ));
            out
        }
    }
}

/// Render the exhaustive-check certificate.
pub fn emit_certificate(cert: &Table1Certificate, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut out = serde_json::to_string_pretty(cert).expect("certificate serializes");
            out.push('\n');
            out
        }
        OutputFormat::Tsv => {
            let mut out = String::from("metric\tvalue\n");
            out.push_str(&format!(
                "total_configurations\t{}\n",
                cert.total_configurations
            ));
            out.push_str(&format!("passed\t{}\n", cert.passed));
            out.push_str(&format!("violations\t{}\n", cert.violations.len()));
            out
        }
        OutputFormat::Human => {
            let mut out = String::new();
            out.push_str(&format!(
                "{:<28}{}\n",
                "configurations checked", cert.total_configurations
            ));
            out.push_str(&format!(
                "{:<28}{}\n",
                "result",
                if cert.passed { "PASS" } else { "FAIL" }
            ));
            for v in &cert.violations {
                out.push_str(&format!(
                    "violation: initial={} branch={} secrets=({},{}) keys=({},{}): {}\n",
                    v.initial, v.branch, v.secret_a, v.secret_b, v.key_a, v.key_b, v.reason
                ));
            }
            out
        }
    }
}

/// Render an attack sweep.
pub fn emit_sweep(report: &SweepReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut out =
                serde_json::to_string_pretty(&report.rounded()).expect("sweep serializes");
            out.push('\n');
            out
        }
        OutputFormat::Tsv => {
            let mut out =
                String::from("decoys_per_channel\ttrials\tpass_rate\tdetection_rate\ttheoretical_pass_rate\n");
            for row in &report.rows {
                out.push_str(&format!(
                    "{}\t{}\t{:.6}\t{:.6}\t{:.6}\n",
                    row.decoys_per_channel,
                    row.trials,
                    row.pass_rate,
                    row.detection_rate,
                    row.theoretical_pass_rate
                ));
            }
            out
        }
        OutputFormat::Human => {
            let mut out = format!(
                "{:<10}{:<10}{:<14}{:<14}{}\n",
                "decoys", "trials", "pass rate", "detected", "theory pass"
            );
            for row in &report.rows {
                out.push_str(&format!(
                    "{:<10}{:<10}{:<14.6}{:<14.6}{:.6}\n",
                    row.decoys_per_channel,
                    row.trials,
                    row.pass_rate,
                    row.detection_rate,
                    row.theoretical_pass_rate
                ));
            }
            out
        }
    }
}
