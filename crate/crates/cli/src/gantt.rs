//! Static SVG Gantt charts: one row per machine, operation bars colored by
//! job, setups in blue and unavailability windows in red on top.

use std::fmt::Write;

use opsched::{makespan, Instance, Schedule, Time};

/// Left edge of the time axis in pixels.
pub const PLOT_X: f64 = 100.0;
/// Width of the time axis in pixels.
pub const PLOT_WIDTH: f64 = 1000.0;
pub const ROW_HEIGHT: f64 = 30.0;
pub const BAR_HEIGHT: f64 = 20.0;
/// Height of the axis band above the first row.
pub const TOP: f64 = 40.0;

pub const SETUP_FILL: &str = "#1f77b4";
pub const UNAVAILABLE_FILL: &str = "#d62728";
const JOB_FILLS: [&str; 8] = [
    "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#98df8a",
];

/// Horizon drawn by [`render`]: the makespan or the last window end,
/// whichever is later, and at least 1.
pub fn horizon(inst: &Instance, sched: &Schedule) -> Time {
    let last_window = inst
        .machines
        .iter()
        .filter_map(|m| m.calendar.windows().last().map(|w| w.end))
        .max()
        .unwrap_or(0);
    makespan(sched).max(last_window).max(1)
}

/// Pixel x coordinate of time `t` on a chart with the given horizon.
pub fn x_of(t: Time, horizon: Time) -> f64 {
    PLOT_X + t as f64 * PLOT_WIDTH / horizon as f64
}

/// Top y coordinate of the bars in row `row`.
pub fn bar_y(row: usize) -> f64 {
    TOP + row as f64 * ROW_HEIGHT + (ROW_HEIGHT - BAR_HEIGHT) / 2.0
}

fn tick_step(horizon: Time) -> Time {
    let raw = (horizon / 10).max(1);
    let mut base = 1;
    while base * 10 <= raw {
        base *= 10;
    }
    [1, 2, 5, 10].iter().map(|f| f * base).find(|&s| s >= raw).unwrap_or(10 * base)
}

fn rect(out: &mut String, class: &str, attrs: &str, x0: f64, x1: f64, y: f64, fill: &str) {
    let _ = writeln!(
        out,
        r#"<rect class="{class}"{attrs} x="{x0:.2}" y="{y:.2}" width="{:.2}" height="{BAR_HEIGHT:.2}" fill="{fill}"/>"#,
        x1 - x0
    );
}

/// Renders `sched` over the machines of `inst`.
///
/// Fails if the schedule names a machine or operation the instance does not
/// have.
pub fn render(inst: &Instance, sched: &Schedule) -> Result<String, String> {
    let t_max = horizon(inst, sched);
    let rows = inst.machines.len();
    let width = PLOT_X + PLOT_WIDTH + 20.0;
    let height = TOP + rows as f64 * ROW_HEIGHT + 10.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);

    let axis_y = TOP - 8.0;
    let _ = writeln!(
        out,
        r#"<line class="axis" x1="{PLOT_X:.2}" y1="{axis_y:.2}" x2="{:.2}" y2="{axis_y:.2}" stroke="black"/>"#,
        PLOT_X + PLOT_WIDTH
    );
    let step = tick_step(t_max);
    let mut t = 0;
    while t <= t_max {
        let x = x_of(t, t_max);
        let _ = writeln!(
            out,
            r#"<line class="tick" x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{axis_y:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{t}</text>"#,
            axis_y - 4.0,
            axis_y - 8.0
        );
        t += step;
    }

    let row_of = |k: u32| inst.machines.iter().position(|m| m.id == k);
    for (row, m) in inst.machines.iter().enumerate() {
        let y = TOP + row as f64 * ROW_HEIGHT;
        let _ = writeln!(
            out,
            r##"<rect class="row" x="{PLOT_X:.2}" y="{y:.2}" width="{PLOT_WIDTH:.2}" height="{ROW_HEIGHT:.2}" fill="{}"/><text x="10" y="{:.2}">M{}</text>"##,
            if row % 2 == 0 { "#f4f4f4" } else { "#ffffff" },
            y + ROW_HEIGHT / 2.0 + 4.0,
            m.id
        );
    }

    for op in &sched.operations {
        let row = row_of(op.machine).ok_or_else(|| format!("operation {} uses unknown machine {}", op.id, op.machine))?;
        let job = inst
            .operation(op.id)
            .ok_or_else(|| format!("unknown operation {}", op.id))?
            .job;
        let y = bar_y(row);
        if op.setup_len > 0 {
            let attrs = format!(r#" data-op="{}""#, op.id);
            rect(&mut out, "setup", &attrs, x_of(op.setup_start, t_max), x_of(op.start, t_max), y, SETUP_FILL);
        }
        let attrs = format!(r#" data-op="{}" data-job="{job}""#, op.id);
        let fill = JOB_FILLS[(job as usize).wrapping_sub(1) % JOB_FILLS.len()];
        rect(&mut out, "op", &attrs, x_of(op.start, t_max), x_of(op.completion, t_max), y, fill);
    }

    for (row, m) in inst.machines.iter().enumerate() {
        for w in m.calendar.windows() {
            let attrs = format!(r#" data-machine="{}""#, m.id);
            rect(&mut out, "unavail", &attrs, x_of(w.begin, t_max), x_of(w.end, t_max), bar_y(row), UNAVAILABLE_FILL);
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}
