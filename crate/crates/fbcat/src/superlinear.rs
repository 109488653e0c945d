//! Exact super linear algebra over the rationals.
//!
//! Matrices are stored sparsely by row. Tensor products carry Koszul signs:
//! `(f ⊗ g)(v ⊗ w) = (-1)^{|g||v|} f(v) ⊗ g(w)` on homogeneous elements,
//! realised entry-wise. Flattening is row-major with the leftmost tensor
//! factor slowest; functor evaluations compare matrices entry-wise, so this
//! ordering is part of the contract.

use crate::rat::Rat;
use std::fmt;

pub type Parity = u8;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParityBasis {
    pub parity: Vec<Parity>,
    pub labels: Option<Vec<String>>,
}

impl ParityBasis {
    pub fn new(parity: Vec<Parity>) -> Self {
        assert!(parity.iter().all(|p| *p < 2));
        ParityBasis { parity, labels: None }
    }

    pub fn even(n: usize) -> Self {
        ParityBasis::new(vec![0; n])
    }

    /// The (m|n) basis: m even indices followed by n odd ones.
    pub fn graded(m: usize, n: usize) -> Self {
        let mut parity = vec![0; m];
        parity.extend(vec![1; n]);
        ParityBasis::new(parity)
    }

    pub fn len(&self) -> usize {
        self.parity.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parity.is_empty()
    }

    pub fn unit() -> Self {
        ParityBasis::new(vec![0])
    }

    /// Tensor product basis, leftmost factor slowest.
    pub fn tensor(&self, other: &ParityBasis) -> ParityBasis {
        let mut parity = Vec::with_capacity(self.len() * other.len());
        for p in &self.parity {
            for q in &other.parity {
                parity.push((p + q) % 2);
            }
        }
        ParityBasis::new(parity)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LinError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not homogeneous")]
    Inhomogeneous,
}

/// Sparse exact matrix between parity-labelled bases.
///
/// `rows[r]` holds (column, value) pairs sorted by column with no zeros.
/// Domain indexes columns, codomain indexes rows.
#[derive(Clone, PartialEq, Eq)]
pub struct SuperMatrix {
    pub domain: ParityBasis,
    pub codomain: ParityBasis,
    rows: Vec<Vec<(usize, Rat)>>,
}

impl SuperMatrix {
    pub fn zero(codomain: ParityBasis, domain: ParityBasis) -> Self {
        let rows = vec![Vec::new(); codomain.len()];
        SuperMatrix { domain, codomain, rows }
    }

    pub fn identity(basis: ParityBasis) -> Self {
        let rows = (0..basis.len()).map(|i| vec![(i, Rat::one())]).collect();
        SuperMatrix { domain: basis.clone(), codomain: basis, rows }
    }

    pub fn from_entries(
        codomain: ParityBasis,
        domain: ParityBasis,
        entries: impl IntoIterator<Item = (usize, usize, Rat)>,
    ) -> Self {
        let mut m = SuperMatrix::zero(codomain, domain);
        for (r, c, v) in entries {
            m.add_entry(r, c, v);
        }
        m
    }

    pub fn from_dense(codomain: ParityBasis, domain: ParityBasis, dense: &[Vec<Rat>]) -> Self {
        assert_eq!(dense.len(), codomain.len());
        let mut m = SuperMatrix::zero(codomain, domain);
        for (r, row) in dense.iter().enumerate() {
            assert_eq!(row.len(), m.domain.len());
            for (c, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    m.set(r, c, v.clone());
                }
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.codomain.len()
    }

    pub fn ncols(&self) -> usize {
        self.domain.len()
    }

    pub fn row(&self, r: usize) -> &[(usize, Rat)] {
        &self.rows[r]
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> Rat {
        match self.rows[r].binary_search_by_key(&c, |e| e.0) {
            Ok(i) => self.rows[r][i].1.clone(),
            Err(_) => Rat::zero(),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        match self.rows[r].binary_search_by_key(&c, |e| e.0) {
            Ok(i) => {
                if v.is_zero() {
                    self.rows[r].remove(i);
                } else {
                    self.rows[r][i].1 = v;
                }
            }
            Err(i) => {
                if !v.is_zero() {
                    self.rows[r].insert(i, (c, v));
                }
            }
        }
    }

    pub fn add_entry(&mut self, r: usize, c: usize, v: Rat) {
        if v.is_zero() {
            return;
        }
        match self.rows[r].binary_search_by_key(&c, |e| e.0) {
            Ok(i) => {
                let nv = &self.rows[r][i].1 + &v;
                if nv.is_zero() {
                    self.rows[r].remove(i);
                } else {
                    self.rows[r][i].1 = nv;
                }
            }
            Err(i) => self.rows[r].insert(i, (c, v)),
        }
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rat)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<Rat>> {
        let mut out = vec![vec![Rat::zero(); self.ncols()]; self.nrows()];
        for (r, c, v) in self.entries() {
            out[r][c] = v.clone();
        }
        out
    }

    pub fn scale(&self, s: &Rat) -> SuperMatrix {
        if s.is_zero() {
            return SuperMatrix::zero(self.codomain.clone(), self.domain.clone());
        }
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().map(|(c, v)| (*c, v * s)).collect())
            .collect();
        SuperMatrix { domain: self.domain.clone(), codomain: self.codomain.clone(), rows }
    }

    pub fn add(&self, other: &SuperMatrix) -> Result<SuperMatrix, LinError> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(LinError::Shape("add: bases differ".into()));
        }
        let mut out = self.clone();
        for (r, c, v) in other.entries() {
            out.add_entry(r, c, v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SuperMatrix) -> Result<SuperMatrix, LinError> {
        self.add(&other.scale(&-Rat::one()))
    }

    /// Ordinary matrix product `self ∘ other` (self after other).
    pub fn compose(&self, other: &SuperMatrix) -> Result<SuperMatrix, LinError> {
        if self.domain != other.codomain {
            return Err(LinError::Shape(format!(
                "compose: domain {} != codomain {}",
                self.ncols(),
                other.nrows()
            )));
        }
        let mut rows = vec![Vec::new(); self.nrows()];
        for (r, row) in self.rows.iter().enumerate() {
            let mut acc: Vec<(usize, Rat)> = Vec::new();
            for (mid, v) in row {
                for (c, w) in &other.rows[*mid] {
                    let prod = v * w;
                    match acc.binary_search_by_key(c, |e| e.0) {
                        Ok(i) => acc[i].1 += &prod,
                        Err(i) => acc.insert(i, (*c, prod)),
                    }
                }
            }
            acc.retain(|(_, v)| !v.is_zero());
            rows[r] = acc;
        }
        Ok(SuperMatrix { domain: other.domain.clone(), codomain: self.codomain.clone(), rows })
    }

    pub fn apply(&self, vec: &[Rat]) -> Vec<Rat> {
        assert_eq!(vec.len(), self.ncols());
        let mut out = vec![Rat::zero(); self.nrows()];
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                if !vec[*c].is_zero() {
                    out[r] += &(v * &vec[*c]);
                }
            }
        }
        out
    }

    /// Koszul-signed tensor product.
    ///
    /// Entry ((rf,rg),(cf,cg)) gets the sign (-1)^{(|rg|+|cg|)·|cf|}; this is
    /// the entry-wise form of the sign (-1)^{|g||v|}, valid for
    /// parity-inhomogeneous maps as well since the sign is computed per entry.
    pub fn tensor(&self, other: &SuperMatrix) -> SuperMatrix {
        let domain = self.domain.tensor(&other.domain);
        let codomain = self.codomain.tensor(&other.codomain);
        let oc = other.ncols();
        let or = other.nrows();
        let mut rows = vec![Vec::new(); codomain.len()];
        for (rf, rowf) in self.rows.iter().enumerate() {
            if rowf.is_empty() {
                continue;
            }
            for (rg, rowg) in other.rows.iter().enumerate() {
                if rowg.is_empty() {
                    continue;
                }
                let out_row = &mut rows[rf * or + rg];
                for (cf, vf) in rowf {
                    let cf_par = self.domain.parity[*cf];
                    for (cg, vg) in rowg {
                        let g_par =
                            (other.codomain.parity[rg] + other.domain.parity[*cg]) % 2;
                        let mut v = vf * vg;
                        if g_par * cf_par == 1 {
                            v = -v;
                        }
                        out_row.push((cf * oc + cg, v));
                    }
                }
            }
        }
        for row in &mut rows {
            row.sort_by_key(|e| e.0);
        }
        SuperMatrix { domain, codomain, rows }
    }

    /// Supertrace: Σ (-1)^{|i|} M_ii. Odd maps have zero diagonal, so this is
    /// the block formula for any map.
    pub fn supertrace(&self) -> Result<Rat, LinError> {
        if self.nrows() != self.ncols() {
            return Err(LinError::Shape("supertrace of non-square".into()));
        }
        let mut t = Rat::zero();
        for i in 0..self.nrows() {
            let d = self.get(i, i);
            if d.is_zero() {
                continue;
            }
            if self.codomain.parity[i] == 1 {
                t -= &d;
            } else {
                t += &d;
            }
        }
        Ok(t)
    }

    /// Parity p such that every nonzero entry (r,c) satisfies
    /// parity(r) = parity(c) + p, if one exists.
    pub fn homogeneity(&self) -> Option<Parity> {
        let mut par: Option<Parity> = None;
        for (r, c, _) in self.entries() {
            let p = (self.codomain.parity[r] + self.domain.parity[c]) % 2;
            match par {
                None => par = Some(p),
                Some(q) if q != p => return None,
                _ => {}
            }
        }
        Some(par.unwrap_or(0))
    }

    pub fn transpose(&self) -> SuperMatrix {
        let mut out = SuperMatrix::zero(self.domain.clone(), self.codomain.clone());
        for (r, c, v) in self.entries() {
            out.set(c, r, v.clone());
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut dense = self.to_dense();
        row_echelon(&mut dense)
    }

    /// Basis of the right nullspace, as columns.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        nullspace_dense(&self.to_dense(), self.ncols())
    }

    pub fn invert(&self) -> Result<SuperMatrix, LinError> {
        if self.nrows() != self.ncols() {
            return Err(LinError::Shape("invert of non-square".into()));
        }
        let n = self.nrows();
        let mut aug = self.to_dense();
        for (i, row) in aug.iter_mut().enumerate() {
            let mut id = vec![Rat::zero(); n];
            id[i] = Rat::one();
            row.extend(id);
        }
        let rank = row_echelon_reduced(&mut aug, n);
        if rank < n {
            return Err(LinError::Singular);
        }
        let mut out = SuperMatrix::zero(self.domain.clone(), self.codomain.clone());
        for r in 0..n {
            for c in 0..n {
                let v = aug[r][n + c].clone();
                if !v.is_zero() {
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for SuperMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SuperMatrix {}x{} [", self.nrows(), self.ncols())?;
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for SuperMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dense = self.to_dense();
        let strs: Vec<Vec<String>> =
            dense.iter().map(|r| r.iter().map(|v| v.to_string()).collect()).collect();
        let width = strs.iter().flatten().map(|s| s.len()).max().unwrap_or(1);
        for row in &strs {
            write!(f, "[")?;
            for (i, s) in row.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:>w$}", s, w = width)?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// In-place row echelon; returns the rank. Picks pivots left to right with
/// the first nonzero row, which keeps the routine independent from callers
/// that use other pivot orders as oracles.
pub fn row_echelon(m: &mut [Vec<Rat>]) -> usize {
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(piv) = (rank..nrows).find(|r| !m[*r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = m[rank][col].recip();
        for c in col..ncols {
            m[rank][c] = &m[rank][c] * &inv;
        }
        for r in 0..nrows {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..ncols {
                    let t = &m[rank][c] * &factor;
                    m[r][c] = &m[r][c] - &t;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Reduced echelon restricted to the first `ncols_main` columns (for
/// augmented systems); returns the rank of that block.
fn row_echelon_reduced(m: &mut [Vec<Rat>], ncols_main: usize) -> usize {
    let nrows = m.len();
    let total = if nrows == 0 { 0 } else { m[0].len() };
    let mut rank = 0;
    for col in 0..ncols_main.min(total) {
        if rank == nrows {
            break;
        }
        let Some(piv) = (rank..nrows).find(|r| !m[*r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = m[rank][col].recip();
        for c in 0..total {
            m[rank][c] = &m[rank][c] * &inv;
        }
        for r in 0..nrows {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in 0..total {
                    let t = &m[rank][c] * &factor;
                    m[r][c] = &m[r][c] - &t;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Right-nullspace basis of a dense matrix with `ncols` columns.
pub fn nullspace_dense(mat: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let mut m: Vec<Vec<Rat>> = mat.to_vec();
    let rank = row_echelon(&mut m);
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r < rank && !m[r][c].is_zero() {
            pivot_cols.push(c);
            r += 1;
        }
    }
    let free_cols: Vec<usize> = (0..ncols).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Vec::new();
    for fc in free_cols {
        let mut v = vec![Rat::zero(); ncols];
        v[fc] = Rat::one();
        for (pr, pc) in pivot_cols.iter().enumerate() {
            v[*pc] = -m[pr][fc].clone();
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(codp: Vec<Parity>, domp: Vec<Parity>, rows: Vec<Vec<i64>>) -> SuperMatrix {
        let dense: Vec<Vec<Rat>> =
            rows.into_iter().map(|r| r.into_iter().map(Rat::from_int).collect()).collect();
        SuperMatrix::from_dense(ParityBasis::new(codp), ParityBasis::new(domp), &dense)
    }

    #[test]
    fn compose_identity_and_swap() {
        let f = mat(vec![0, 0], vec![0, 0], vec![vec![1, 2], vec![3, 4]]);
        let id = SuperMatrix::identity(ParityBasis::even(2));
        assert_eq!(f.compose(&id).unwrap(), f);
        let swap = mat(vec![0, 0], vec![0, 0], vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(swap.compose(&swap).unwrap(), id);
    }

    #[test]
    fn compose_matches_triple_loop_oracle() {
        let a = mat(vec![0, 1, 0], vec![0, 1, 1], vec![vec![1, -2, 0], vec![3, 0, 5], vec![0, 7, -1]]);
        let b = mat(vec![0, 1, 1], vec![1, 0, 0], vec![vec![2, 0, 1], vec![-1, 4, 0], vec![0, 0, 3]]);
        let prod = a.compose(&b).unwrap();
        for r in 0..3 {
            for c in 0..3 {
                let mut acc = Rat::zero();
                for k in 0..3 {
                    acc += &(&a.get(r, k) * &b.get(k, c));
                }
                assert_eq!(prod.get(r, c), acc);
            }
        }
    }

    #[test]
    fn tensor_identity() {
        let id2 = SuperMatrix::identity(ParityBasis::graded(1, 1));
        let id3 = SuperMatrix::identity(ParityBasis::graded(2, 1));
        assert_eq!(id2.tensor(&id3), SuperMatrix::identity(ParityBasis::graded(1, 1).tensor(&ParityBasis::graded(2, 1))));
    }

    #[test]
    fn superinterchange_sign_for_odd_maps() {
        // f, g odd 1x1 maps on odd lines: (f⊗1)(1⊗g) = -(1⊗g)(f⊗1).
        let odd = ParityBasis::new(vec![1]);
        let even = ParityBasis::new(vec![0]);
        let f = SuperMatrix::from_entries(even.clone(), odd.clone(), [(0, 0, Rat::one())]);
        let g = SuperMatrix::from_entries(odd.clone(), even.clone(), [(0, 0, Rat::one())]);
        let id_odd = SuperMatrix::identity(odd.clone());
        let id_even = SuperMatrix::identity(even.clone());
        let lhs = f.tensor(&id_odd).compose(&id_odd.tensor(&g)).unwrap();
        let rhs = id_even.tensor(&g).compose(&f.tensor(&id_even)).unwrap();
        assert_eq!(lhs, rhs.scale(&-Rat::one()));
    }

    #[test]
    fn tensor_matches_signed_kron_oracle() {
        // (2|1)-dim case against brute-force enumeration of basis vectors.
        let basis = ParityBasis::graded(2, 1);
        let f = mat(vec![0, 0, 1], vec![0, 0, 1], vec![vec![1, 2, 0], vec![0, -1, 0], vec![0, 0, 3]]);
        let g = mat(vec![0, 0, 1], vec![0, 0, 1], vec![vec![0, 1, 0], vec![1, 1, 0], vec![0, 0, -2]]);
        let t = f.tensor(&g);
        let n = basis.len();
        for cf in 0..n {
            for cg in 0..n {
                // Apply to e_cf ⊗ e_cg by hand: sign (-1)^{|g||e_cf|} with g's
                // parity read per homogeneous output component.
                for rf in 0..n {
                    for rg in 0..n {
                        let gpar = (basis.parity[rg] + basis.parity[cg]) % 2;
                        let mut expect = &f.get(rf, cf) * &g.get(rg, cg);
                        if gpar == 1 && basis.parity[cf] == 1 {
                            expect = -expect;
                        }
                        assert_eq!(t.get(rf * n + rg, cf * n + cg), expect);
                    }
                }
            }
        }
    }

    #[test]
    fn tensor_associativity_entrywise() {
        let f = mat(vec![0, 1], vec![0, 1], vec![vec![1, 2], vec![3, 4]]);
        let g = mat(vec![1], vec![1], vec![vec![5]]);
        let h = mat(vec![0, 1], vec![1, 0], vec![vec![0, 7], vec![1, 0]]);
        assert_eq!(f.tensor(&g).tensor(&h), f.tensor(&g.tensor(&h)));
    }

    #[test]
    fn supertrace_id_and_oracle() {
        let id = SuperMatrix::identity(ParityBasis::graded(3, 1));
        assert_eq!(id.supertrace().unwrap(), Rat::from_int(2));
        let m = mat(vec![0, 1], vec![0, 1], vec![vec![4, 0], vec![0, 9]]);
        assert_eq!(m.supertrace().unwrap(), Rat::from_int(-5));
    }

    #[test]
    fn supertrace_conjugation_invariance() {
        let m = mat(vec![0, 1], vec![0, 1], vec![vec![2, 0], vec![0, 3]]);
        let p = mat(vec![0, 1], vec![0, 1], vec![vec![1, 0], vec![0, 2]]);
        let conj = p.compose(&m).unwrap().compose(&p.invert().unwrap()).unwrap();
        assert_eq!(conj.supertrace().unwrap(), m.supertrace().unwrap());
    }

    #[test]
    fn rank_and_nullspace() {
        let id = SuperMatrix::identity(ParityBasis::even(4));
        assert_eq!(id.rank(), 4);
        assert!(id.nullspace().is_empty());
        let m = mat(vec![0, 0], vec![0, 0], vec![vec![1, 2], vec![2, 4]]);
        assert_eq!(m.rank(), 1);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        for v in &ns {
            let img = m.apply(v);
            assert!(img.iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn invert_round_trip_and_singular() {
        let m = mat(vec![0, 0], vec![0, 0], vec![vec![2, 1], vec![1, 1]]);
        let inv = m.invert().unwrap();
        assert_eq!(m.compose(&inv).unwrap(), SuperMatrix::identity(ParityBasis::even(2)));
        let s = mat(vec![0, 0], vec![0, 0], vec![vec![1, 2], vec![2, 4]]);
        assert!(s.invert().is_err());
    }

    // Rank oracle with reversed pivot order on random 6x4 matrices.
    fn rank_reverse_pivots(mat: &[Vec<Rat>]) -> usize {
        let mut m: Vec<Vec<Rat>> = mat.iter().map(|r| r.iter().rev().cloned().collect()).collect();
        m.reverse();
        row_echelon(&mut m)
    }

    proptest! {
        #[test]
        fn rank_independent_of_pivot_order(vals in proptest::collection::vec(-4i64..5, 24)) {
            let dense: Vec<Vec<Rat>> = (0..6)
                .map(|r| (0..4).map(|c| Rat::from_int(vals[r * 4 + c])).collect())
                .collect();
            let m = SuperMatrix::from_dense(ParityBasis::even(6), ParityBasis::even(4), &dense);
            let mut d2 = dense.clone();
            let direct = row_echelon(&mut d2);
            prop_assert_eq!(m.rank(), direct);
            prop_assert_eq!(m.rank(), rank_reverse_pivots(&dense));
            prop_assert_eq!(m.rank() + m.nullspace().len(), 4);
        }

        #[test]
        fn interchange_sign_small_random(
            a in -3i64..4, b in -3i64..4, c in -3i64..4, d in -3i64..4
        ) {
            // Homogeneous odd f,g on a (1|1) line each.
            let line = ParityBasis::graded(1, 1);
            let f = SuperMatrix::from_entries(line.clone(), line.clone(),
                [(0, 1, Rat::from_int(a)), (1, 0, Rat::from_int(b))]);
            let g = SuperMatrix::from_entries(line.clone(), line.clone(),
                [(0, 1, Rat::from_int(c)), (1, 0, Rat::from_int(d))]);
            let idl = SuperMatrix::identity(line.clone());
            let lhs = f.tensor(&idl).compose(&idl.tensor(&g)).unwrap();
            let rhs = idl.tensor(&g).compose(&f.tensor(&idl)).unwrap();
            prop_assert_eq!(lhs, rhs.scale(&-Rat::one()));
        }
    }
}
