//! Small reference codes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::code::CssCode;
use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BitVector};

/// The [[7,1,3]] Steane code: both check matrices are the Hamming(7,4) checks.
pub fn steane() -> CssCode {
    let h = [vec![0, 2, 4, 6], vec![1, 2, 5, 6], vec![3, 4, 5, 6]];
    CssCode::from_supports(7, &h, &h).expect("static fixture")
}

/// The toric code on an `l x l` torus: qubits on edges, X checks on vertices,
/// Z checks on plaquettes. Horizontal edges come first, then vertical edges.
pub fn toric(l: usize) -> Result<CssCode> {
    if l < 2 {
        return Err(Error::InvalidParameter(format!("toric code needs L >= 2, got {l}")));
    }
    let idx = |x: usize, y: usize| (y % l) * l + (x % l);
    let h = |x: usize, y: usize| idx(x, y);
    let v = |x: usize, y: usize| l * l + idx(x, y);
    let mut stars = Vec::new();
    let mut plaquettes = Vec::new();
    for y in 0..l {
        for x in 0..l {
            let mut s = vec![h(x, y), h(x + l - 1, y), v(x, y), v(x, y + l - 1)];
            s.sort_unstable();
            stars.push(s);
            let mut p = vec![h(x, y), h(x, y + 1), v(x, y), v(x + 1, y)];
            p.sort_unstable();
            plaquettes.push(p);
        }
    }
    CssCode::from_supports(2 * l * l, &stars, &plaquettes)
}

/// Three qubits with redundant Z checks `Z1Z2, Z2Z3, Z1Z3` and no X checks.
pub fn repetition_triangle() -> CssCode {
    CssCode::from_supports(3, &[] as &[Vec<usize>], &[vec![0, 1], vec![1, 2], vec![0, 2]])
        .expect("static fixture")
}

/// A random commuting code on `n` qubits with `n_x` X checks.
///
/// X rows are uniform nonzero vectors. Z rows are uniform nonzero combinations of
/// a kernel basis of the X checks, `min(n_x, dim ker - 1)` of them, so K >= 1
/// whenever the kernel is nonzero.
pub fn random_css(n: usize, n_x: usize, seed: u64) -> Result<CssCode> {
    if n == 0 || n_x >= n {
        return Err(Error::InvalidParameter(format!(
            "random_css needs 0 < n_x < n, got n={n}, n_x={n_x}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nonzero = |len: usize, rng: &mut ChaCha8Rng| loop {
        let bits: Vec<bool> = (0..len).map(|_| rng.random_bool(0.5)).collect();
        if bits.iter().any(|&b| b) {
            return bits;
        }
    };
    let x_rows: Vec<BitVector> = (0..n_x).map(|_| BitVector::from_bools(&nonzero(n, &mut rng))).collect();
    let x = BitMatrix::from_rows(n, x_rows)?;
    let kernel = x.kernel_basis();
    let n_z = n_x.min(kernel.len().saturating_sub(1));
    let z_rows = (0..n_z)
        .map(|_| {
            let coeffs = nonzero(kernel.len(), &mut rng);
            let mut row = BitVector::zeros(n);
            for (b, c) in kernel.iter().zip(coeffs) {
                if c {
                    row.xor_assign(b);
                }
            }
            row
        })
        .collect();
    CssCode::new(x, BitMatrix::from_rows(n, z_rows)?)
}
