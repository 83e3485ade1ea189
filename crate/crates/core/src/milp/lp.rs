use std::fmt::Write;

use super::{MilpModel, VarKind};

/// Terms per output line before a row is continued on the next line.
const TERMS_PER_LINE: usize = 8;

/// Renders the model in CPLEX LP format. Continuous variables keep the
/// format's default bounds `[0, +inf)`; only other bounds are listed.
pub fn emit_lp(model: &MilpModel) -> String {
    let mut out = String::new();
    out.push_str("Minimize\n");
    let _ = writeln!(out, " obj: {}", model.variables[model.objective].name);
    out.push_str("Subject To\n");
    for row in &model.constraints {
        let _ = write!(out, " {}:", row.name);
        for (n, &(v, a)) in row.terms.iter().enumerate() {
            if n > 0 && n % TERMS_PER_LINE == 0 {
                out.push_str("\n   ");
            }
            let name = &model.variables[v].name;
            let sign = if a < 0 { "-" } else { "+" };
            let mag = a.unsigned_abs();
            match (n, mag) {
                (0, 1) if a > 0 => {
                    let _ = write!(out, " {name}");
                }
                (0, _) if a > 0 => {
                    let _ = write!(out, " {mag} {name}");
                }
                (_, 1) => {
                    let _ = write!(out, " {sign} {name}");
                }
                _ => {
                    let _ = write!(out, " {sign} {mag} {name}");
                }
            }
        }
        let _ = writeln!(out, " {} {}", row.sense, row.rhs);
    }
    out.push_str("Bounds\n");
    for var in &model.variables {
        if var.kind != VarKind::Continuous || (var.lower == 0 && var.upper.is_none()) {
            continue;
        }
        match var.upper {
            Some(u) => {
                let _ = writeln!(out, " {} <= {} <= {}", var.lower, var.name, u);
            }
            None => {
                let _ = writeln!(out, " {} >= {}", var.name, var.lower);
            }
        }
    }
    out.push_str("Binaries\n");
    for var in model.binaries() {
        let _ = writeln!(out, " {}", var.name);
    }
    out.push_str("End\n");
    out
}
