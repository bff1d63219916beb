//! Plain-text renderings of the label maps and label transforms.

use std::fmt::Write;

use pcm_core::modulation::{LabelKind, LabelMap};

use crate::error::Result;

fn bits(label: u32, m: u32) -> String {
    format!("{label:0width$b}", width = m as usize)
}

fn matrix_rows(matrix: &[Vec<u8>]) -> Vec<String> {
    matrix
        .iter()
        .map(|r| r.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" "))
        .collect()
}

/// Label table of both mappers followed by their transform matrices.
pub fn render_tables(m: u32) -> Result<String> {
    let mm = LabelMap::new(LabelKind::Mm, m)?;
    let sp = LabelMap::new(LabelKind::Sp, m)?;
    let size = 1usize << m;
    let cell = (m as usize).max(3) + 1;
    let mut out = String::new();
    let row = |out: &mut String, name: &str, cells: Vec<String>| {
        let _ = write!(out, "{name:<18}");
        for c in cells {
            let _ = write!(out, "{c:>cell$}");
        }
        out.push('\n');
    };
    let _ = writeln!(out, "Polar mappers, {size}-ASK");
    let amplitudes = mm.constellation().amplitudes();
    row(&mut out, "symbol", amplitudes.iter().map(|a| format!("{a}")).collect());
    row(&mut out, "MM  BRGC", mm.aux_labels().iter().map(|&l| bits(l, m)).collect());
    row(&mut out, "MM  polar label", mm.polar_labels().iter().map(|&l| bits(l, m)).collect());
    row(&mut out, "SP  LSB-BRGC", sp.aux_labels().iter().map(|&l| bits(l, m)).collect());
    row(&mut out, "SP  polar label", sp.polar_labels().iter().map(|&l| bits(l, m)).collect());
    out.push('\n');
    let _ = writeln!(out, "Label transform (both mappers)");
    let forward = matrix_rows(mm.forward_matrix());
    let backward = matrix_rows(mm.backward_matrix());
    let width = forward[0].len().max(7);
    let _ = writeln!(out, "{:<w$}    b = b~B", "b~ = bF", w = width);
    for (f, b) in forward.iter().zip(&backward) {
        let _ = writeln!(out, "{f:<width$}    {b}");
    }
    Ok(out)
}
