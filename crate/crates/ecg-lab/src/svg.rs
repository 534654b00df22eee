//! Deterministic SVG charts built as plain markup.

use std::fmt::Write as _;

use ecg_lab_core::doe::DoeRow;
use ecg_lab_core::{Error, Signal};

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 360.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 3] = ["#1f77b4", "#d62728", "#2ca02c"];

fn num(v: f64) -> String {
    format!("{v:.2}")
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn header(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
         <rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n\
         <text x=\"{cx}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">{title}</text>\n",
        title = escape(title),
        w = WIDTH,
        h = HEIGHT,
        cx = num(WIDTH / 2.0),
    )
}

fn axes(out: &mut String, y_label: &str, x_label: &str, lo: f64, hi: f64) {
    let (x0, y0, y1) = (MARGIN, HEIGHT - MARGIN, MARGIN);
    let _ = writeln!(
        out,
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x2}\" y2=\"{y0}\" stroke=\"black\"/>\n\
         <line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"black\"/>",
        x2 = num(WIDTH - MARGIN / 2.0)
    );
    for i in 0..=4 {
        let v = lo + (hi - lo) * i as f64 / 4.0;
        let y = y0 - (y0 - y1) * i as f64 / 4.0;
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">{v:.3}</text>",
            num(x0 - 4.0),
            num(y + 3.0)
        );
    }
    let _ = writeln!(
        out,
        "<text x=\"14\" y=\"{cy}\" transform=\"rotate(-90 14 {cy})\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">{y_label}</text>\n\
         <text x=\"{cx}\" y=\"{by}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">{x_label}</text>",
        y_label = escape(y_label),
        x_label = escape(x_label),
        cy = num(HEIGHT / 2.0),
        cx = num(WIDTH / 2.0),
        by = num(HEIGHT - 12.0)
    );
}

/// One bar per value, labelled underneath. Bars start at zero or at the
/// minimum when values are negative.
pub fn bar_chart(title: &str, y_label: &str, labels: &[String], values: &[f64]) -> String {
    let mut out = header(title);
    let lo = values.iter().copied().fold(0.0, f64::min);
    let hi = values.iter().copied().fold(f64::MIN, f64::max).max(lo + 1e-12);
    axes(&mut out, y_label, "simulation", lo, hi);
    let plot_w = WIDTH - 1.5 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let slot = plot_w / values.len().max(1) as f64;
    for (i, (v, label)) in values.iter().zip(labels).enumerate() {
        let label = escape(label);
        let top = HEIGHT - MARGIN - plot_h * (v - lo) / (hi - lo);
        let base = HEIGHT - MARGIN - plot_h * (0.0f64.max(lo) - lo) / (hi - lo);
        let x = MARGIN + slot * i as f64 + slot * 0.1;
        let _ = writeln!(
            out,
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"><title>{label}: {v}</title></rect>",
            num(x),
            num(top.min(base)),
            num(slot * 0.8),
            num((base - top).abs()),
            COLORS[0]
        );
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"8\">{label}</text>",
            num(x + slot * 0.4),
            num(HEIGHT - MARGIN + 12.0)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// The RMS, SNR and wall-time charts of a sweep.
pub fn doe_triptych(rows: &[DoeRow]) -> [String; 3] {
    let labels: Vec<String> = rows.iter().map(|r| r.sim_id.to_string()).collect();
    let pick = |f: fn(&DoeRow) -> f64| rows.iter().map(f).collect::<Vec<_>>();
    [
        bar_chart("Average RMS", "RMS [mV]", &labels, &pick(|r| r.avg_rms_mv)),
        bar_chart("Average SNR", "SNR [dB]", &labels, &pick(|r| r.avg_snr_db)),
        bar_chart("Computational time", "time [s]", &labels, &pick(|r| r.wall_time_s)),
    ]
}

/// Overlay of up to three equal-length signals, time in seconds and
/// amplitude in mV.
pub fn plot_signals(signals: &[(&str, &Signal)]) -> Result<String, Error> {
    let (_, first) = signals.first().ok_or(Error::Empty("signals to plot"))?;
    if signals.len() > COLORS.len() {
        return Err(Error::InvalidArgument("at most three signals per plot".into()));
    }
    for (_, s) in signals {
        if s.len() != first.len() {
            return Err(Error::LengthMismatch {
                expected: first.len(),
                actual: s.len(),
            });
        }
    }
    let lo = signals.iter().map(|(_, s)| s.min_max().0).fold(f64::INFINITY, f64::min);
    let hi = signals.iter().map(|(_, s)| s.min_max().1).fold(f64::NEG_INFINITY, f64::max);
    let hi = if hi > lo { hi } else { lo + 1.0 };
    let mut out = header("ECG");
    axes(&mut out, "amplitude [mV]", "time [s]", lo, hi);
    let duration = first.duration_seconds();
    for i in 0..=4 {
        let x = MARGIN + (WIDTH - 1.5 * MARGIN) * i as f64 / 4.0;
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">{:.2}</text>",
            num(x),
            num(HEIGHT - MARGIN + 14.0),
            duration * i as f64 / 4.0
        );
    }
    let plot_w = WIDTH - 1.5 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let n = first.len().max(2) - 1;
    for (k, (label, s)) in signals.iter().enumerate() {
        let pts: Vec<String> = s
            .samples()
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let x = MARGIN + plot_w * i as f64 / n as f64;
                let y = HEIGHT - MARGIN - plot_h * (v - lo) / (hi - lo);
                format!("{},{}", num(x), num(y))
            })
            .collect();
        let _ = writeln!(
            out,
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1\" points=\"{}\"/>",
            COLORS[k],
            pts.join(" ")
        );
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" fill=\"{}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>",
            num(WIDTH - 2.0 * MARGIN),
            num(MARGIN + 14.0 * k as f64),
            COLORS[k],
            escape(label)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}
