//! Minimal reader for the LP subset written by `emit_lp`.

use std::collections::BTreeMap;

#[derive(Debug, PartialEq, Eq)]
pub struct LpRow {
    pub name: String,
    pub terms: Vec<(String, i64)>,
    pub sense: String,
    pub rhs: i64,
}

#[derive(Debug, Default, PartialEq, Eq)]
pub struct LpFile {
    pub objective: String,
    pub rows: Vec<LpRow>,
    pub bounds: BTreeMap<String, (i64, Option<i64>)>,
    pub binaries: Vec<String>,
}

fn parse_terms(tokens: &[&str]) -> Vec<(String, i64)> {
    let mut out = Vec::new();
    let mut sign = 1;
    let mut coef: Option<i64> = None;
    for &tok in tokens {
        match tok {
            "+" => sign = 1,
            "-" => sign = -1,
            _ => {
                if let Ok(v) = tok.parse::<i64>() {
                    coef = Some(v);
                } else {
                    out.push((tok.to_string(), sign * coef.unwrap_or(1)));
                    sign = 1;
                    coef = None;
                }
            }
        }
    }
    out
}

pub fn parse_lp(text: &str) -> LpFile {
    let mut lp = LpFile::default();
    let mut section = "";
    let mut pending = String::new();
    let flush = |pending: &mut String, lp: &mut LpFile| {
        if pending.is_empty() {
            return;
        }
        let (name, body) = pending.split_once(':').expect("row name");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        let n = tokens.len();
        lp.rows.push(LpRow {
            name: name.trim().to_string(),
            terms: parse_terms(&tokens[..n - 2]),
            sense: tokens[n - 2].to_string(),
            rhs: tokens[n - 1].parse().expect("integer rhs"),
        });
        pending.clear();
    };
    for line in text.lines() {
        match line.trim() {
            "Minimize" | "Subject To" | "Bounds" | "Binaries" | "End" => {
                flush(&mut pending, &mut lp);
                section = line.trim();
                continue;
            }
            _ => {}
        }
        match section {
            "Minimize" => {
                let (_, var) = line.split_once(':').expect("objective");
                lp.objective = var.trim().to_string();
            }
            "Subject To" => {
                let continuation = line.starts_with("   ");
                if !continuation {
                    flush(&mut pending, &mut lp);
                }
                pending.push(' ');
                pending.push_str(line.trim());
            }
            "Bounds" => {
                let t: Vec<&str> = line.split_whitespace().collect();
                match t.as_slice() {
                    [lo, "<=", v, "<=", hi] => {
                        lp.bounds.insert(v.to_string(), (lo.parse().unwrap(), Some(hi.parse().unwrap())));
                    }
                    [v, ">=", lo] => {
                        lp.bounds.insert(v.to_string(), (lo.parse().unwrap(), None));
                    }
                    _ => panic!("unexpected bound line {line:?}"),
                }
            }
            "Binaries" => lp.binaries.push(line.trim().to_string()),
            _ => {}
        }
    }
    flush(&mut pending, &mut lp);
    lp
}
