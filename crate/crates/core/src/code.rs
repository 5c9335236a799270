//! CSS codes, chain complexes, and the parameter vector of a code.
//!
//! Generators are rows and qubits are columns everywhere. A code converts to a
//! three-term complex `C_{q+1} -> C_q -> C_{q-1}` with the Z generators spanning
//! the top space, qubits in the middle and X generators at the bottom.

use serde::{Deserialize, Serialize};

use crate::distance::{self, DistanceResult, Side};
use crate::error::{Error, Result};
use crate::f2::{product_is_zero, BitMatrix};

/// Provenance tags for qubits and generators.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Labels {
    pub qubits: Vec<String>,
    pub x: Vec<String>,
    pub z: Vec<String>,
}

impl Labels {
    /// Index labels `0, 1, 2, ...` for every qubit and generator.
    pub fn numeric(n: usize, n_x: usize, n_z: usize) -> Self {
        let seq = |k: usize| (0..k).map(|i| i.to_string()).collect();
        Self {
            qubits: seq(n),
            x: seq(n_x),
            z: seq(n_z),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CssCode {
    n: usize,
    x: BitMatrix,
    z: BitMatrix,
    labels: Option<Labels>,
}

impl CssCode {
    /// Builds a code from its check matrices. Commutation is not enforced here; see [`CssCode::validate`].
    pub fn new(x: BitMatrix, z: BitMatrix) -> Result<Self> {
        if x.num_cols() != z.num_cols() {
            return Err(Error::DimensionMismatch(format!(
                "X checks have {} columns, Z checks have {}",
                x.num_cols(),
                z.num_cols()
            )));
        }
        Ok(Self {
            n: x.num_cols(),
            x,
            z,
            labels: None,
        })
    }

    pub fn from_supports<A: AsRef<[usize]>, B: AsRef<[usize]>>(
        n: usize,
        x: &[A],
        z: &[B],
    ) -> Result<Self> {
        Self::new(BitMatrix::from_supports(n, x)?, BitMatrix::from_supports(n, z)?)
    }

    pub fn with_labels(mut self, labels: Labels) -> Result<Self> {
        if labels.qubits.len() != self.n
            || labels.x.len() != self.x.num_rows()
            || labels.z.len() != self.z.num_rows()
        {
            return Err(Error::DimensionMismatch(format!(
                "labels ({}, {}, {}) do not match code shape ({}, {}, {})",
                labels.qubits.len(),
                labels.x.len(),
                labels.z.len(),
                self.n,
                self.x.num_rows(),
                self.z.num_rows()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn without_labels(mut self) -> Self {
        self.labels = None;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_gens(&self) -> &BitMatrix {
        &self.x
    }

    pub fn z_gens(&self) -> &BitMatrix {
        &self.z
    }

    pub fn checks(&self, side: Side) -> &BitMatrix {
        match side {
            Side::X => &self.x,
            Side::Z => &self.z,
        }
    }

    pub fn labels(&self) -> Option<&Labels> {
        self.labels.as_ref()
    }

    /// Labels if present, otherwise numeric labels.
    pub fn labels_or_numeric(&self) -> Labels {
        self.labels.clone().unwrap_or_else(|| {
            Labels::numeric(self.n, self.x.num_rows(), self.z.num_rows())
        })
    }

    pub fn commutes(&self) -> bool {
        product_is_zero(&self.x, &self.z).expect("shapes checked at construction")
    }

    pub fn validate(&self) -> ValidationReport {
        let mut anticommuting = Vec::new();
        for (i, xr) in self.x.rows().iter().enumerate() {
            for (j, zr) in self.z.rows().iter().enumerate() {
                if xr.dot(zr) {
                    anticommuting.push((i, j));
                }
            }
        }
        let zeros = |m: &BitMatrix| -> Vec<usize> {
            (0..m.num_rows()).filter(|&r| m.row(r).is_zero()).collect()
        };
        let dups = |m: &BitMatrix| -> Vec<(usize, usize)> {
            let mut out = Vec::new();
            for i in 0..m.num_rows() {
                for j in (i + 1)..m.num_rows() {
                    if m.row(i) == m.row(j) {
                        out.push((i, j));
                    }
                }
            }
            out
        };
        ValidationReport {
            commutes: anticommuting.is_empty(),
            anticommuting_pairs: anticommuting,
            zero_weight_x: zeros(&self.x),
            zero_weight_z: zeros(&self.z),
            duplicate_x: dups(&self.x),
            duplicate_z: dups(&self.z),
        }
    }

    /// Errors with the first anticommuting pair, if any.
    pub fn ensure_valid(&self) -> Result<()> {
        for (i, xr) in self.x.rows().iter().enumerate() {
            if let Some(j) = self.z.rows().iter().position(|zr| xr.dot(zr)) {
                return Err(Error::NonCommuting { x_row: i, z_row: j });
            }
        }
        Ok(())
    }

    /// Number of logical qubits, `n - rank(H_X) - rank(H_Z)`. Only meaningful for commuting checks.
    pub fn k(&self) -> usize {
        self.n.saturating_sub(self.x.rank() + self.z.rank())
    }

    /// Swaps the roles of X and Z.
    pub fn dualize(&self) -> CssCode {
        CssCode {
            n: self.n,
            x: self.z.clone(),
            z: self.x.clone(),
            labels: self.labels.as_ref().map(|l| Labels {
                qubits: l.qubits.clone(),
                x: l.z.clone(),
                z: l.x.clone(),
            }),
        }
    }

    /// Computes the parameter vector; distances are searched up to `distance_cap` when given.
    ///
    /// Distances are left empty when the code has no logical qubits.
    pub fn params(&self, distance_cap: Option<usize>) -> Result<CodeParams> {
        self.ensure_valid()?;
        let mut p = CodeParams::counts(self);
        if let Some(cap) = distance_cap {
            if p.k > 0 {
                p.d_x = Some(distance::min_logical_weight(self, Side::X, cap)?);
                p.d_z = Some(distance::min_logical_weight(self, Side::Z, cap)?);
            }
        }
        Ok(p)
    }

    /// The complex `C_2 -> C_1 -> C_0` with dims `[n_Z, N, n_X]`.
    pub fn to_chain_complex(&self) -> Result<ChainComplex> {
        self.ensure_valid()?;
        ChainComplex::new(
            vec![self.z.num_rows(), self.n, self.x.num_rows()],
            vec![self.z.transpose(), self.x.clone()],
        )
    }

    /// The code with qubits at degree `degree` of `c`.
    pub fn from_chain_complex(c: &ChainComplex, degree: usize) -> Result<CssCode> {
        let (into, out) = (c.boundary_into(degree), c.boundary_from(degree));
        match (into, out) {
            (Some(into), Some(out)) => CssCode::new(out.clone(), into.transpose()),
            _ => Err(Error::InvalidParameter(format!(
                "degree {degree} is not interior to a complex with {} spaces",
                c.dims().len()
            ))),
        }
    }
}

/// Outcome of [`CssCode::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub commutes: bool,
    pub anticommuting_pairs: Vec<(usize, usize)>,
    pub zero_weight_x: Vec<usize>,
    pub zero_weight_z: Vec<usize>,
    pub duplicate_x: Vec<(usize, usize)>,
    pub duplicate_z: Vec<(usize, usize)>,
}

impl ValidationReport {
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        for &i in &self.zero_weight_x {
            w.push(format!("zero-weight generator: X row {i}"));
        }
        for &i in &self.zero_weight_z {
            w.push(format!("zero-weight generator: Z row {i}"));
        }
        for &(i, j) in &self.duplicate_x {
            w.push(format!("duplicate generator: X rows {i} and {j}"));
        }
        for &(i, j) in &self.duplicate_z {
            w.push(format!("duplicate generator: Z rows {i} and {j}"));
        }
        w
    }
}

/// Counts, weights, degrees and (optionally) distances of a code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    pub n_x: usize,
    pub n_z: usize,
    pub w_x: usize,
    pub w_z: usize,
    pub q_x: usize,
    pub q_z: usize,
    pub w_total_x: usize,
    pub w_total_z: usize,
    pub d_x: Option<DistanceResult>,
    pub d_z: Option<DistanceResult>,
}

impl CodeParams {
    fn counts(code: &CssCode) -> Self {
        let max = |v: Vec<usize>| v.into_iter().max().unwrap_or(0);
        CodeParams {
            n: code.n,
            k: code.k(),
            n_x: code.x.num_rows(),
            n_z: code.z.num_rows(),
            w_x: max(code.x.row_weights()),
            w_z: max(code.z.row_weights()),
            q_x: max(code.x.col_weights()),
            q_z: max(code.z.col_weights()),
            w_total_x: code.x.total_weight(),
            w_total_z: code.z.total_weight(),
            d_x: None,
            d_z: None,
        }
    }

    /// The same parameters with X and Z exchanged.
    pub fn swapped(&self) -> CodeParams {
        CodeParams {
            n: self.n,
            k: self.k,
            n_x: self.n_z,
            n_z: self.n_x,
            w_x: self.w_z,
            w_z: self.w_x,
            q_x: self.q_z,
            q_z: self.q_x,
            w_total_x: self.w_total_z,
            w_total_z: self.w_total_x,
            d_x: self.d_z.clone(),
            d_z: self.d_x.clone(),
        }
    }

    /// Exact distance on one side, if it was computed exactly.
    pub fn exact_distance(&self, side: Side) -> Option<usize> {
        let d = match side {
            Side::X => self.d_x.as_ref(),
            Side::Z => self.d_z.as_ref(),
        }?;
        d.exact.then_some(d.value)
    }

    /// One-line summary, e.g. `N=7 K=1 wX=4 wZ=4 qX=3 qZ=3 nX=3 nZ=3 WX=12 WZ=12`.
    pub fn summary(&self) -> String {
        let mut s = format!(
            "N={} K={} wX={} wZ={} qX={} qZ={} nX={} nZ={} WX={} WZ={}",
            self.n,
            self.k,
            self.w_x,
            self.w_z,
            self.q_x,
            self.q_z,
            self.n_x,
            self.n_z,
            self.w_total_x,
            self.w_total_z
        );
        for (name, d) in [("dX", &self.d_x), ("dZ", &self.d_z)] {
            if let Some(d) = d {
                if d.exact {
                    s.push_str(&format!(" {name}={}", d.value));
                } else {
                    s.push_str(&format!(" {name}>={}", d.value));
                }
            }
        }
        s
    }
}

/// A chain complex over GF(2), listed from the top degree down to degree 0.
///
/// `boundaries[i]` maps the space of `dims[i]` to the space of `dims[i + 1]`,
/// acting on column vectors, so it has `dims[i + 1]` rows and `dims[i]` columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    dims: Vec<usize>,
    boundaries: Vec<BitMatrix>,
}

impl ChainComplex {
    pub fn new(dims: Vec<usize>, boundaries: Vec<BitMatrix>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidParameter("a complex needs at least one space".into()));
        }
        if boundaries.len() + 1 != dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} spaces need {} boundary maps, got {}",
                dims.len(),
                dims.len() - 1,
                boundaries.len()
            )));
        }
        for (i, b) in boundaries.iter().enumerate() {
            if b.num_cols() != dims[i] || b.num_rows() != dims[i + 1] {
                return Err(Error::DimensionMismatch(format!(
                    "boundary {i} is {}x{}, expected {}x{}",
                    b.num_rows(),
                    b.num_cols(),
                    dims[i + 1],
                    dims[i]
                )));
            }
        }
        for i in 1..boundaries.len() {
            if !boundaries[i].mul(&boundaries[i - 1])?.is_zero() {
                return Err(Error::NotAComplex(i - 1, i));
            }
        }
        Ok(Self { dims, boundaries })
    }

    /// A complex with a single space and no maps.
    pub fn single(dim: usize) -> Self {
        Self {
            dims: vec![dim],
            boundaries: vec![],
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn boundaries(&self) -> &[BitMatrix] {
        &self.boundaries
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dim(&self, degree: usize) -> usize {
        if degree > self.top_degree() {
            0
        } else {
            self.dims[self.top_degree() - degree]
        }
    }

    /// The map `∂_degree : C_degree -> C_{degree-1}`.
    pub fn boundary_from(&self, degree: usize) -> Option<&BitMatrix> {
        if degree == 0 || degree > self.top_degree() {
            None
        } else {
            Some(&self.boundaries[self.top_degree() - degree])
        }
    }

    /// The map `∂_{degree+1} : C_{degree+1} -> C_degree`.
    pub fn boundary_into(&self, degree: usize) -> Option<&BitMatrix> {
        self.boundary_from(degree + 1)
    }

    /// `dim ker ∂_degree - rank ∂_{degree+1}`; missing maps count as zero.
    pub fn homology_dimension(&self, degree: usize) -> usize {
        if degree > self.top_degree() {
            return 0;
        }
        let kernel = self.dim(degree) - self.boundary_from(degree).map_or(0, BitMatrix::rank);
        kernel - self.boundary_into(degree).map_or(0, BitMatrix::rank)
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        (0..=self.top_degree()).map(|d| self.homology_dimension(d)).collect()
    }

    /// Offsets of the summands `C_p ⊗ C'_{r-p}` inside `D_r`, ordered by `p` descending.
    fn product_blocks(a: &ChainComplex, b: &ChainComplex, r: usize) -> Vec<(usize, usize)> {
        let mut blocks = Vec::new();
        for p in (0..=a.top_degree()).rev() {
            if p <= r && r - p <= b.top_degree() {
                blocks.push((p, r - p));
            }
        }
        blocks
    }

    /// The product complex with `D_r = ⊕_p C_p ⊗ C'_{r-p}` and boundary `∂ ⊗ I + I ⊗ ∂'`.
    ///
    /// Within `D_r` the summands are ordered by the left degree descending and each
    /// summand is indexed left-factor major.
    pub fn product(&self, other: &ChainComplex) -> ChainComplex {
        let top = self.top_degree() + other.top_degree();
        let offsets = |r: usize| -> Vec<(usize, usize, usize)> {
            let mut off = 0;
            Self::product_blocks(self, other, r)
                .into_iter()
                .map(|(p, s)| {
                    let o = off;
                    off += self.dim(p) * other.dim(s);
                    (p, s, o)
                })
                .collect()
        };
        let dim_of = |r: usize| -> usize {
            Self::product_blocks(self, other, r)
                .iter()
                .map(|&(p, s)| self.dim(p) * other.dim(s))
                .sum()
        };
        let dims: Vec<usize> = (0..=top).rev().map(dim_of).collect();
        let mut boundaries = Vec::new();
        for r in (1..=top).rev() {
            let src = offsets(r);
            let dst = offsets(r - 1);
            let mut m = BitMatrix::zeros(dim_of(r - 1), dim_of(r));
            for &(p, s, col) in &src {
                // ∂ ⊗ I : C_p ⊗ C'_s -> C_{p-1} ⊗ C'_s
                if let Some(d) = self.boundary_from(p) {
                    if let Some(&(_, _, row)) = dst.iter().find(|&&(pp, ss, _)| pp == p - 1 && ss == s) {
                        m.add_block(row, col, &d.kron(&BitMatrix::identity(other.dim(s))));
                    }
                }
                // I ⊗ ∂' : C_p ⊗ C'_s -> C_p ⊗ C'_{s-1}
                if let Some(d) = other.boundary_from(s) {
                    if let Some(&(_, _, row)) = dst.iter().find(|&&(pp, ss, _)| pp == p && ss == s - 1) {
                        m.add_block(row, col, &BitMatrix::identity(self.dim(p)).kron(d));
                    }
                }
            }
            boundaries.push(m);
        }
        ChainComplex::new(dims, boundaries).expect("product of complexes is a complex")
    }
}

/// The interval complex `E_1 -> E_0` with `l` points and `l - 1` edges.
pub fn interval_complex(l: usize) -> Result<ChainComplex> {
    if l < 2 {
        return Err(Error::InvalidParameter(format!("interval needs l >= 2, got {l}")));
    }
    let mut d = BitMatrix::zeros(l, l - 1);
    for j in 0..l - 1 {
        d.set(j, j);
        d.set(j + 1, j);
    }
    ChainComplex::new(vec![l - 1, l], vec![d])
}
