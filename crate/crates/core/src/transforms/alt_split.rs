use crate::code::CssCode;
use crate::error::Result;

/// Replaces every qubit with X degree `w >= 4` by copies `q(1), ..., q(w)`.
///
/// Copy `q(1)` keeps index `q` and copies `q(2..w)` are appended. The a-th X
/// generator on `q` (ascending index) is rewired to `q(a)`, the chain generators
/// `X_q(a) X_q(a+1)` are appended, and every Z generator on `q` acts on all copies.
pub fn alt_qubit_split_all(code: &CssCode) -> Result<CssCode> {
    code.ensure_valid()?;
    let mut x = code.x_gens().row_supports();
    let mut z = code.z_gens().row_supports();
    let x_cols = code.x_gens().transpose();
    let z_cols = code.z_gens().transpose();
    let mut n = code.n();
    let mut labels = code.labels().cloned();

    for q in 0..code.n() {
        let incident = x_cols.row(q).support();
        let w = incident.len();
        if w < 4 {
            continue;
        }
        let copies: Vec<usize> = std::iter::once(q).chain(n..n + w - 1).collect();
        n += w - 1;
        for (a, &s) in incident.iter().enumerate().skip(1) {
            let row = &mut x[s];
            row.retain(|&i| i != q);
            row.push(copies[a]);
        }
        for a in 0..w - 1 {
            x.push(vec![copies[a], copies[a + 1]]);
        }
        for r in z_cols.row(q).iter_ones() {
            z[r].extend_from_slice(&copies[1..]);
        }
        if let Some(l) = labels.as_mut() {
            let base = l.qubits[q].clone();
            l.qubits[q] = format!("{base}(1)");
            l.qubits.extend((2..=w).map(|a| format!("{base}({a})")));
            l.x.extend((1..w).map(|a| format!("{base}({a})~{base}({})", a + 1)));
        }
    }
    for row in x.iter_mut().chain(z.iter_mut()) {
        row.sort_unstable();
    }
    let out = CssCode::from_supports(n, &x, &z)?;
    match labels {
        Some(l) => out.with_labels(l),
        None => Ok(out),
    }
}
