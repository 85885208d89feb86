use rankbench_core::report::{CompareView, RankReport, SweepView};
use rankbench_core::stats::{StatsReport, WilcoxonMethod};

use crate::Format;

/// Table and CSV share this so both show the same digits.
fn num(x: f64) -> String {
    format!("{x:.6}")
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    out += &line(
        widths
            .iter()
            .map(|w| "-".repeat(*w))
            .collect::<Vec<_>>()
            .iter()
            .map(String::as_str)
            .collect(),
    );
    for row in rows {
        out += &line(row.iter().map(String::as_str).collect());
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",") + "\n";
    for row in rows {
        out += &(row
            .iter()
            .map(|c| csv_field(c))
            .collect::<Vec<_>>()
            .join(",")
            + "\n");
    }
    out
}

fn tabular(format: Format, header: &[&str], rows: &[Vec<String>]) -> String {
    match format {
        Format::Csv => csv(header, rows),
        _ => table(header, rows),
    }
}

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
}

/// 1-based rank of each entry in `order`; tied entries share the rank of the
/// first member of their group.
fn ranked_rows(order: &[String], ties: &[Vec<String>]) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    let mut pos = 1;
    for group in ties {
        for name in group {
            out.push((pos, name.clone()));
        }
        pos += group.len();
    }
    debug_assert_eq!(out.len(), order.len());
    out
}

pub fn rank(report: &RankReport, format: Format) -> String {
    if format == Format::Json {
        return json(report);
    }
    let mut header = vec!["rank", "algorithm", "xi"];
    if report.stage1.is_some() {
        header.extend(["xi_mu", "xi_sigma"]);
    }
    let rows: Vec<Vec<String>> = ranked_rows(&report.order, &report.ties)
        .into_iter()
        .map(|(pos, name)| {
            let mut row = vec![pos.to_string(), name.clone(), num(report.xi[&name])];
            if let Some(s) = &report.stage1 {
                row.push(num(s.xi_mu[&name]));
                row.push(num(s.xi_sigma[&name]));
            }
            row
        })
        .collect();
    let mut out = tabular(format, &header, &rows);
    if format == Format::Table {
        out = format!(
            "{} w_mu={} w_sigma={} {} {}\n\n{out}",
            report.config.method,
            num(report.config.w_mu),
            num(report.config.w_sigma),
            report.config.direction,
            report.config.normalization
        );
    }
    out
}

pub fn sweep(view: &SweepView, format: Format) -> String {
    if format == Format::Json {
        return json(view);
    }
    let rows: Vec<Vec<String>> = view
        .grid
        .iter()
        .map(|p| vec![num(p.w_mu), num(p.w_sigma), p.order.join(" > ")])
        .collect();
    let mut out = tabular(format, &["w_mu", "w_sigma", "order"], &rows);
    if format == Format::Table {
        let stable = view.stability_w_mu.map_or("none".to_string(), num);
        out += &format!("\nstable from w_mu = {stable}\n");
    }
    out
}

pub fn compare(view: &CompareView, format: Format) -> String {
    if format == Format::Json {
        return json(view);
    }
    let rows: Vec<Vec<String>> = view
        .rows
        .iter()
        .map(|r| {
            vec![
                r.position.to_string(),
                r.atopsis.clone(),
                num(view.atopsis.xi[&r.atopsis]),
                r.hellinger.clone(),
                num(view.hellinger.xi[&r.hellinger]),
                if r.agree { "=" } else { "" }.to_string(),
            ]
        })
        .collect();
    let header = [
        "position",
        "atopsis",
        "xi_atopsis",
        "hellinger",
        "xi_hellinger",
        "agree",
    ];
    let mut out = tabular(format, &header, &rows);
    if format == Format::Table {
        out += &format!(
            "\n{} of {} positions agree\n",
            view.agreement_count(),
            view.rows.len()
        );
    }
    out
}

pub fn stats(report: &StatsReport, format: Format) -> String {
    if format == Format::Json {
        return json(report);
    }
    let rows: Vec<Vec<String>> = report
        .pairwise
        .iter()
        .map(|c| {
            let method = match c.result.method {
                WilcoxonMethod::Exact => "exact",
                WilcoxonMethod::NormalApprox => "normal",
                WilcoxonMethod::Undefined => "undefined",
            };
            vec![
                c.first.clone(),
                c.second.clone(),
                num(c.result.w_statistic),
                c.result.n_effective.to_string(),
                num(c.result.p_value),
                method.to_string(),
                if c.significant { "*" } else { "" }.to_string(),
            ]
        })
        .collect();
    let header = ["first", "second", "w", "n", "p", "method", "significant"];
    let f = &report.friedman;
    match format {
        Format::Csv => csv(&header, &rows),
        _ => format!(
            "Friedman: chi2 = {} (df {}), p = {}, k = {}, n = {}\n\n{}\n{} of {} pairs significant at alpha = {}\n",
            num(f.statistic),
            f.k - 1,
            num(f.p_value),
            f.k,
            f.n,
            table(&header, &rows),
            report.significant().count(),
            report.pairwise.len(),
            report.alpha
        ),
    }
}
