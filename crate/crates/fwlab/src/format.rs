use std::fmt::Write;

use fwlab_core::C64;

use crate::ast::{Declaration, Query, ScenarioAst, Statement};

/// Shortest form that reads back bit-for-bit: 17 significant digits.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn format_complex(z: C64) -> String {
    if z.im == 0.0 {
        format_real(z.re)
    } else if z.re == 0.0 {
        format!("{}i", format_real(z.im))
    } else {
        let sign = if z.im < 0.0 { '-' } else { '+' };
        format!("{}{sign}{}i", format_real(z.re), format_real(z.im.abs()))
    }
}

fn format_vector(v: &[C64]) -> String {
    let entries: Vec<String> = v.iter().map(|z| format_complex(*z)).collect();
    format!("[{}]", entries.join(", "))
}

fn format_statement(s: &Statement) -> String {
    match s {
        Statement::Declaration(d) => match d {
            Declaration::Space { name, dim } => format!("space {name} {dim}"),
            Declaration::Op { name, rows } => {
                let rows: Vec<String> = rows.iter().map(|r| format_vector(r)).collect();
                format!("op {name} = [{}]", rows.join(", "))
            }
            Declaration::State { name, amplitudes } => {
                format!("state {name} = {}", format_vector(amplitudes))
            }
            Declaration::PdiFrom { name, op } => format!("pdi {name} from {op}"),
            Declaration::PdiBlocks { name, blocks } => {
                format!("pdi {name} = {{{}}}", blocks.join(", "))
            }
            Declaration::Family { name, init, steps } => {
                let mut out = format!("family {name} init {init} steps");
                for (u, f) in steps {
                    let _ = write!(out, " ({u} {f})");
                }
                out
            }
            Declaration::Channel { name, kraus } => {
                format!("channel {name} kraus {{{}}}", kraus.join(", "))
            }
        },
        Statement::Query(q) => match q {
            Query::EventProb {
                state,
                pdi,
                indices,
            } => {
                let idx: Vec<String> = indices.iter().map(|i| i.to_string()).collect();
                format!("eventprob {state} {pdi} {{{}}}", idx.join(", "))
            }
            other => format!("{} {}", other.keyword(), other.inputs().join(" ")),
        },
    }
}

/// Canonical text: one statement per line, comments and blank lines dropped.
pub fn format_scenario(ast: &ScenarioAst) -> String {
    let mut out = String::new();
    for item in &ast.items {
        out.push_str(&format_statement(&item.statement));
        out.push('\n');
    }
    out
}
