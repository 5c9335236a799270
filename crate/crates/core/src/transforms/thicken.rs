use crate::assignment::Assignment;
use crate::code::{interval_complex, CssCode, Labels};
use crate::error::{Error, Result};

/// Qubit and generator indexing shared by [`thicken`] and [`full_product_code`].
///
/// Qubits `(q,k)` come first at `(k-1)·N + q`, then link qubits `[s,k]` at
/// `l·N + (k-1)·n_X + s`; both blocks are k-major. X generator `(s,k)` sits at row
/// `(k-1)·n_X + s`.
struct Layout {
    n: usize,
    n_x: usize,
    l: usize,
}

impl Layout {
    fn qubit(&self, q: usize, k: usize) -> usize {
        (k - 1) * self.n + q
    }

    fn link(&self, s: usize, k: usize) -> usize {
        self.l * self.n + (k - 1) * self.n_x + s
    }

    fn num_qubits(&self) -> usize {
        self.l * self.n + (self.l - 1) * self.n_x
    }

    fn x_generators(&self, code: &CssCode) -> Vec<Vec<usize>> {
        let mut rows = Vec::with_capacity(self.l * self.n_x);
        for k in 1..=self.l {
            for (s, row) in code.x_gens().rows().iter().enumerate() {
                let mut sup: Vec<usize> = row.iter_ones().map(|q| self.qubit(q, k)).collect();
                if k >= 2 {
                    sup.push(self.link(s, k - 1));
                }
                if k < self.l {
                    sup.push(self.link(s, k));
                }
                rows.push(sup);
            }
        }
        rows
    }

    /// `Z_(q,k) Z_(q,k+1) Π_{s ∋ q} Z_[s,k]` for `k = 1..l-1`, k-major.
    fn link_generators(&self, code: &CssCode) -> Vec<Vec<usize>> {
        let x_cols = code.x_gens().transpose();
        let mut rows = Vec::with_capacity((self.l - 1) * self.n);
        for k in 1..self.l {
            for q in 0..self.n {
                let mut sup = vec![self.qubit(q, k), self.qubit(q, k + 1)];
                sup.extend(x_cols.row(q).iter_ones().map(|s| self.link(s, k)));
                rows.push(sup);
            }
        }
        rows
    }

    fn labels(&self, base: &Labels) -> (Vec<String>, Vec<String>, Vec<String>) {
        let mut qubits = Vec::with_capacity(self.num_qubits());
        for k in 1..=self.l {
            qubits.extend(base.qubits.iter().map(|q| format!("({q},{k})")));
        }
        for k in 1..self.l {
            qubits.extend(base.x.iter().map(|s| format!("[{s},{k}]")));
        }
        let mut x = Vec::new();
        for k in 1..=self.l {
            x.extend(base.x.iter().map(|s| format!("{s}@{k}")));
        }
        let mut links = Vec::new();
        for k in 1..self.l {
            links.extend(base.qubits.iter().map(|q| format!("link({q},{k})")));
        }
        (qubits, x, links)
    }
}

/// Largest thickened code, in generator-by-qubit matrix bits, that will be built.
pub const MAX_THICKENED_BITS: u128 = 1 << 30;

fn layout(code: &CssCode, l: usize) -> Result<Layout> {
    code.ensure_valid()?;
    if l < 2 {
        return Err(Error::InvalidParameter(format!("copy count l must be at least 2, got {l}")));
    }
    let (n, n_x, n_z) = (code.n() as u128, code.x_gens().num_rows() as u128, code.z_gens().num_rows() as u128);
    let lw = l as u128;
    let qubits = lw * n + (lw - 1) * n_x;
    let rows = lw * (n_x + n_z) + (lw - 1) * n;
    if qubits * rows > MAX_THICKENED_BITS {
        return Err(Error::InvalidParameter(format!(
            "thickening with l = {l} gives {qubits} qubits and up to {rows} generators, \
             beyond the dense matrix limit of {MAX_THICKENED_BITS} bits"
        )));
    }
    Ok(Layout {
        n: code.n(),
        n_x: code.x_gens().num_rows(),
        l,
    })
}

/// Thickens `code` along an interval of `assignment.l` points, keeping one copy of
/// each Z generator at its assigned position.
pub fn thicken(code: &CssCode, assignment: &Assignment) -> Result<CssCode> {
    let lay = layout(code, assignment.l)?;
    assignment.check(code.z_gens().num_rows())?;
    let n_new = lay.num_qubits();
    let mut z: Vec<Vec<usize>> = code
        .z_gens()
        .rows()
        .iter()
        .zip(&assignment.choice)
        .map(|(row, &k)| row.iter_ones().map(|q| lay.qubit(q, k)).collect())
        .collect();
    z.extend(lay.link_generators(code));
    let out = CssCode::from_supports(n_new, &lay.x_generators(code), &z)?;
    match code.labels() {
        None => Ok(out),
        Some(base) => {
            let (qubits, x, links) = lay.labels(base);
            let mut zl: Vec<String> = base
                .z
                .iter()
                .zip(&assignment.choice)
                .map(|(r, k)| format!("{r}@{k}"))
                .collect();
            zl.extend(links);
            out.with_labels(Labels { qubits, x, z: zl })
        }
    }
}

/// The product of `code` with the interval complex at the qubit degree, keeping
/// every copy of every Z generator.
///
/// Built from the product complex and then reindexed into the layout of
/// [`thicken`]: qubits and X generators match exactly, Z rows are all copies of
/// the original Z generators k-major, followed by the link generators.
pub fn full_product_code(code: &CssCode, l: usize) -> Result<CssCode> {
    let lay = layout(code, l)?;
    let (n, n_x, n_z) = (lay.n, lay.n_x, code.z_gens().num_rows());
    let d = code.to_chain_complex()?.product(&interval_complex(l)?);
    let raw = CssCode::from_chain_complex(&d, 1)?;

    // D_1 = C_1⊗E_0 (q·l + k) ⊕ C_0⊗E_1 (s·(l-1) + k), with 0-based k.
    let mut qubit_index = Vec::with_capacity(lay.num_qubits());
    for q in 0..n {
        qubit_index.extend((1..=l).map(|k| lay.qubit(q, k)));
    }
    for s in 0..n_x {
        qubit_index.extend((1..l).map(|k| lay.link(s, k)));
    }
    // D_0 = C_0⊗E_0 (s·l + k)
    let mut x_index = Vec::with_capacity(l * n_x);
    for s in 0..n_x {
        x_index.extend((0..l).map(|k| k * n_x + s));
    }
    // D_2 = C_2⊗E_0 (r·l + k) ⊕ C_1⊗E_1 (q·(l-1) + k)
    let mut z_index = Vec::with_capacity(l * n_z + (l - 1) * n);
    for r in 0..n_z {
        z_index.extend((0..l).map(|k| k * n_z + r));
    }
    for q in 0..n {
        z_index.extend((0..l - 1).map(|k| l * n_z + k * n + q));
    }

    let x = raw.x_gens().permute_cols(&qubit_index).permute_rows(&x_index);
    let z = raw.z_gens().permute_cols(&qubit_index).permute_rows(&z_index);
    let out = CssCode::new(x, z)?;
    match code.labels() {
        None => Ok(out),
        Some(base) => {
            let (qubits, x, links) = lay.labels(base);
            let mut zl = Vec::new();
            for k in 1..=l {
                zl.extend(base.z.iter().map(|r| format!("{r}@{k}")));
            }
            zl.extend(links);
            out.with_labels(Labels { qubits, x, z: zl })
        }
    }
}

/// Thickening with every Z generator kept at position 1.
pub fn thicken_all_first(code: &CssCode, l: usize) -> Result<CssCode> {
    thicken(code, &Assignment::constant(code.z_gens().num_rows(), l, 1)?)
}
