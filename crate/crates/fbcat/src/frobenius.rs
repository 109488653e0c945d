//! Symmetric involutive Frobenius superalgebras with even trace maps.
//!
//! An algebra is described by structure constants over a homogeneous basis,
//! an even trace vector, and the matrix of the involution. `validate` checks
//! every axiom; downstream modules assume validated algebras and the
//! constructors here only hand out validated ones.

use crate::rat::Rat;
use crate::superlinear::{row_echelon, Parity};
use std::fmt;
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum AlgebraError {
    #[error("unknown builtin algebra `{0}`")]
    UnknownBuiltin(String),
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("algebra mismatch: element of `{0}` used with `{1}`")]
    Mismatch(String, String),
    #[error("algebra `{0}` failed validation:\n{1}")]
    Invalid(String, String),
    #[error("element is not invertible")]
    NotInvertible,
}

/// One validation check with an optional failure witness.
#[derive(Debug, Clone, serde::Serialize)]
pub struct AxiomCheck {
    pub axiom: String,
    pub pass: bool,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct ValidationReport {
    pub algebra: String,
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> String {
        self.checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| format!("  {}: {}", c.axiom, c.witness.as_deref().unwrap_or("fail")))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct FrobeniusSuperalgebra {
    pub name: String,
    pub dim: usize,
    pub basis_names: Vec<String>,
    pub parity: Vec<Parity>,
    /// mul[i][j] = coefficient vector of b_i · b_j.
    pub mul_table: Vec<Vec<Vec<Rat>>>,
    /// t_i = tr(b_i).
    pub trace_vec: Vec<Rat>,
    /// star[.][i] = coefficient vector of b_i^*: column i holds b_i^*.
    pub star_matrix: Vec<Vec<Rat>>,
    /// Coefficient vector of 1_A.
    pub unit: Vec<Rat>,
}

impl fmt::Debug for FrobeniusSuperalgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FrobeniusSuperalgebra({}, dim {})", self.name, self.dim)
    }
}

pub type AlgebraRef = Arc<FrobeniusSuperalgebra>;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AlgebraElement {
    pub coeffs: Vec<Rat>,
    pub algebra: String,
}

impl FrobeniusSuperalgebra {
    pub fn element(&self, coeffs: Vec<Rat>) -> AlgebraElement {
        assert_eq!(coeffs.len(), self.dim);
        AlgebraElement { coeffs, algebra: self.name.clone() }
    }

    pub fn zero_element(&self) -> AlgebraElement {
        self.element(vec![Rat::zero(); self.dim])
    }

    pub fn basis_element(&self, i: usize) -> AlgebraElement {
        let mut c = vec![Rat::zero(); self.dim];
        c[i] = Rat::one();
        self.element(c)
    }

    pub fn one(&self) -> AlgebraElement {
        self.element(self.unit.clone())
    }

    fn check_owned(&self, a: &AlgebraElement) -> Result<(), AlgebraError> {
        if a.algebra != self.name {
            return Err(AlgebraError::Mismatch(a.algebra.clone(), self.name.clone()));
        }
        Ok(())
    }

    /// Parity of an element if its support is parity-pure.
    pub fn parity_of(&self, a: &AlgebraElement) -> Option<Parity> {
        let mut par = None;
        for (i, c) in a.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match par {
                None => par = Some(self.parity[i]),
                Some(p) if p != self.parity[i] => return None,
                _ => {}
            }
        }
        Some(par.unwrap_or(0))
    }

    pub fn multiply(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.check_owned(a)?;
        self.check_owned(b)?;
        let mut out = vec![Rat::zero(); self.dim];
        for (i, ca) in a.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (j, cb) in b.coeffs.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let s = ca * cb;
                for (k, c) in self.mul_table[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &(&s * c);
                    }
                }
            }
        }
        Ok(self.element(out))
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &[Rat] {
        &self.mul_table[i][j]
    }

    pub fn involute(&self, a: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.check_owned(a)?;
        let mut out = vec![Rat::zero(); self.dim];
        for (i, c) in a.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, s) in self.star_of_basis(i).iter().enumerate() {
                if !s.is_zero() {
                    out[j] += &(c * s);
                }
            }
        }
        Ok(self.element(out))
    }

    /// Coefficient vector of b_i^*.
    pub fn star_of_basis(&self, i: usize) -> Vec<Rat> {
        (0..self.dim).map(|j| self.star_matrix[j][i].clone()).collect()
    }

    pub fn trace(&self, a: &AlgebraElement) -> Result<Rat, AlgebraError> {
        self.check_owned(a)?;
        let mut t = Rat::zero();
        for (i, c) in a.coeffs.iter().enumerate() {
            if !c.is_zero() {
                t += &(c * &self.trace_vec[i]);
            }
        }
        Ok(t)
    }

    pub fn add(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        self.element(coeffs)
    }

    pub fn scale(&self, s: &Rat, a: &AlgebraElement) -> AlgebraElement {
        self.element(a.coeffs.iter().map(|x| x * s).collect())
    }

    /// Gram matrix G_ij = tr(b_i b_j).
    pub fn gram(&self) -> Vec<Vec<Rat>> {
        let mut g = vec![vec![Rat::zero(); self.dim]; self.dim];
        for i in 0..self.dim {
            for j in 0..self.dim {
                let mut t = Rat::zero();
                for (k, c) in self.mul_table[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        t += &(c * &self.trace_vec[k]);
                    }
                }
                g[i][j] = t;
            }
        }
        g
    }

    /// Left dual basis: tr(b_i^∨ b_j) = δ_ij.
    pub fn dual_basis(&self) -> Result<Vec<AlgebraElement>, AlgebraError> {
        let g = self.gram();
        duals_from_gram(self, &g)
    }

    /// str_A(a) = Σ_b (-1)^{|b|} tr(b^∨ b a), the supertrace of right
    /// multiplication by a on A.
    pub fn reg_supertrace(&self, a: &AlgebraElement) -> Result<Rat, AlgebraError> {
        self.check_owned(a)?;
        let duals = self.dual_basis()?;
        let mut out = Rat::zero();
        for i in 0..self.dim {
            let bi = self.basis_element(i);
            let prod = self.multiply(&duals[i], &self.multiply(&bi, a)?)?;
            let t = self.trace(&prod)?;
            if self.parity[i] == 1 {
                out -= &t;
            } else {
                out += &t;
            }
        }
        Ok(out)
    }

    /// Inverse of an element, if it exists (solves x·a = 1 by linear algebra).
    pub fn inverse(&self, a: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.check_owned(a)?;
        // Right multiplication by a as a matrix in the basis.
        let mut sys: Vec<Vec<Rat>> = vec![vec![Rat::zero(); self.dim + 1]; self.dim];
        for i in 0..self.dim {
            // x = Σ x_i b_i, x·a = Σ_i x_i Σ_j a_j (b_i b_j).
            for (j, aj) in a.coeffs.iter().enumerate() {
                if aj.is_zero() {
                    continue;
                }
                for (k, c) in self.mul_table[i][j].iter().enumerate() {
                    sys[k][i] += &(aj * c);
                }
            }
        }
        for k in 0..self.dim {
            sys[k][self.dim] = self.unit[k].clone();
        }
        let rank = row_echelon(&mut sys);
        // Back-substitute: after full reduction each pivot row reads off x.
        let mut x = vec![Rat::zero(); self.dim];
        let mut r = 0;
        for c in 0..self.dim {
            if r < rank && !sys[r][c].is_zero() {
                x[c] = sys[r][self.dim].clone();
                r += 1;
            }
        }
        let cand = self.element(x);
        let prod = self.multiply(&cand, a)?;
        if prod == self.one() {
            Ok(cand)
        } else {
            Err(AlgebraError::NotInvertible)
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut checks = Vec::new();
        let mut push = |axiom: &str, pass: bool, witness: Option<String>| {
            checks.push(AxiomCheck { axiom: axiom.to_string(), pass, witness });
        };

        // Associativity and unit laws on basis triples/pairs.
        let mut assoc_ok = true;
        let mut assoc_witness = None;
        'outer: for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    let bi = self.basis_element(i);
                    let bj = self.basis_element(j);
                    let bk = self.basis_element(k);
                    let lhs = self.multiply(&self.multiply(&bi, &bj).unwrap(), &bk).unwrap();
                    let rhs = self.multiply(&bi, &self.multiply(&bj, &bk).unwrap()).unwrap();
                    if lhs != rhs {
                        assoc_ok = false;
                        assoc_witness = Some(format!(
                            "(b{} b{}) b{} != b{} (b{} b{})",
                            i, j, k, i, j, k
                        ));
                        break 'outer;
                    }
                }
            }
        }
        push("associativity", assoc_ok, assoc_witness);

        let mut unital_ok = true;
        let mut unital_witness = None;
        let one = self.one();
        for i in 0..self.dim {
            let bi = self.basis_element(i);
            if self.multiply(&one, &bi).unwrap() != bi || self.multiply(&bi, &one).unwrap() != bi {
                unital_ok = false;
                unital_witness = Some(format!("unit law fails on b{}", i));
                break;
            }
        }
        push("unital", unital_ok, unital_witness);

        // Parity multiplicativity.
        let mut par_ok = true;
        let mut par_witness = None;
        'par: for i in 0..self.dim {
            for j in 0..self.dim {
                for (k, c) in self.mul_table[i][j].iter().enumerate() {
                    if !c.is_zero() && self.parity[k] != (self.parity[i] + self.parity[j]) % 2 {
                        par_ok = false;
                        par_witness = Some(format!("c^{}_{{{},{}}} breaks parity", k, i, j));
                        break 'par;
                    }
                }
            }
        }
        push("parity multiplicative", par_ok, par_witness);

        // Even trace.
        let bad_even = (0..self.dim).find(|i| self.parity[*i] == 1 && !self.trace_vec[*i].is_zero());
        push(
            "trace even",
            bad_even.is_none(),
            bad_even.map(|i| format!("tr(b{}) != 0 on odd b{}", i, i)),
        );

        // Nondegeneracy.
        let mut g = self.gram();
        let rank = row_echelon(&mut g);
        push(
            "trace form nondegenerate",
            rank == self.dim,
            (rank != self.dim).then(|| format!("Gram rank {} < {}", rank, self.dim)),
        );

        // Symmetry tr(xy) = (-1)^{|x||y|} tr(yx).
        let mut sym_ok = true;
        let mut sym_witness = None;
        'sym: for i in 0..self.dim {
            for j in 0..self.dim {
                let bi = self.basis_element(i);
                let bj = self.basis_element(j);
                let lhs = self.trace(&self.multiply(&bi, &bj).unwrap()).unwrap();
                let mut rhs = self.trace(&self.multiply(&bj, &bi).unwrap()).unwrap();
                if self.parity[i] * self.parity[j] == 1 {
                    rhs = -rhs;
                }
                if lhs != rhs {
                    sym_ok = false;
                    sym_witness = Some(format!("tr(b{} b{}) != ±tr(b{} b{})", i, j, j, i));
                    break 'sym;
                }
            }
        }
        push("trace symmetric", sym_ok, sym_witness);

        // Involution: even, self-inverse, product-reversing, trace-compatible.
        let mut star_even = true;
        let mut star_even_witness = None;
        for i in 0..self.dim {
            let s = self.star_of_basis(i);
            for (j, c) in s.iter().enumerate() {
                if !c.is_zero() && self.parity[j] != self.parity[i] {
                    star_even = false;
                    star_even_witness = Some(format!("b{}^* has parity-{} component", i, self.parity[j]));
                }
            }
        }
        push("involution even", star_even, star_even_witness);

        let mut star_inv = true;
        let mut star_inv_witness = None;
        for i in 0..self.dim {
            let bi = self.basis_element(i);
            let ss = self.involute(&self.involute(&bi).unwrap()).unwrap();
            if ss != bi {
                star_inv = false;
                star_inv_witness = Some(format!("(b{}^*)^* != b{}", i, i));
                break;
            }
        }
        push("involution self-inverse", star_inv, star_inv_witness);

        let mut star_anti = true;
        let mut star_anti_witness = None;
        'anti: for i in 0..self.dim {
            for j in 0..self.dim {
                let bi = self.basis_element(i);
                let bj = self.basis_element(j);
                let lhs = self.involute(&self.multiply(&bi, &bj).unwrap()).unwrap();
                let mut rhs = self
                    .multiply(&self.involute(&bj).unwrap(), &self.involute(&bi).unwrap())
                    .unwrap();
                if self.parity[i] * self.parity[j] == 1 {
                    rhs = self.scale(&-Rat::one(), &rhs);
                }
                if lhs != rhs {
                    star_anti = false;
                    star_anti_witness = Some(format!("(b{} b{})^* != ±b{}^* b{}^*", i, j, j, i));
                    break 'anti;
                }
            }
        }
        push("involution product-reversing", star_anti, star_anti_witness);

        let mut star_tr = true;
        let mut star_tr_witness = None;
        for i in 0..self.dim {
            let bi = self.basis_element(i);
            if self.trace(&self.involute(&bi).unwrap()).unwrap() != self.trace(&bi).unwrap() {
                star_tr = false;
                star_tr_witness = Some(format!("tr(b{}^*) != tr(b{})", i, i));
                break;
            }
        }
        push("trace star-compatible", star_tr, star_tr_witness);

        // Lemma identities, checked only when duals exist.
        if rank == self.dim {
            let duals = self.dual_basis().unwrap();

            let mut dd_ok = true;
            let mut dd_witness = None;
            // tr(xy) = tr(x* y*) and tr(x* y) = tr(x y*).
            'dd: for i in 0..self.dim {
                for j in 0..self.dim {
                    let bi = self.basis_element(i);
                    let bj = self.basis_element(j);
                    let si = self.involute(&bi).unwrap();
                    let sj = self.involute(&bj).unwrap();
                    let t0 = self.trace(&self.multiply(&bi, &bj).unwrap()).unwrap();
                    let t1 = self.trace(&self.multiply(&si, &sj).unwrap()).unwrap();
                    let t2 = self.trace(&self.multiply(&si, &bj).unwrap()).unwrap();
                    let t3 = self.trace(&self.multiply(&bi, &sj).unwrap()).unwrap();
                    if t0 != t1 || t2 != t3 {
                        dd_ok = false;
                        dd_witness = Some(format!("double-star trace identity fails at ({}, {})", i, j));
                        break 'dd;
                    }
                }
            }
            push("tr(x*y*) = tr(xy)", dd_ok, dd_witness);

            // (b^*)^∨ w.r.t. the starred basis equals (b^∨)^*.
            let starred_gram: Vec<Vec<Rat>> = (0..self.dim)
                .map(|i| {
                    (0..self.dim)
                        .map(|j| {
                            let si = self.involute(&self.basis_element(i)).unwrap();
                            let sj = self.involute(&self.basis_element(j)).unwrap();
                            self.trace(&self.multiply(&si, &sj).unwrap()).unwrap()
                        })
                        .collect()
                })
                .collect();
            let mut ds_ok = true;
            let mut ds_witness = None;
            match duals_from_gram_generic(self, &starred_gram, |k| {
                self.involute(&self.basis_element(k)).unwrap()
            }) {
                Ok(starred_duals) => {
                    for i in 0..self.dim {
                        let lhs = &starred_duals[i];
                        let rhs = self.involute(&duals[i]).unwrap();
                        if *lhs != rhs {
                            ds_ok = false;
                            ds_witness = Some(format!("(b{}^*)^∨ != (b{}^∨)^*", i, i));
                            break;
                        }
                    }
                }
                Err(_) => {
                    ds_ok = false;
                    ds_witness = Some("starred Gram singular".to_string());
                }
            }
            push("(b*)^∨ = (b^∨)*", ds_ok, ds_witness);

            // Double dual with sign: (b^∨)^∨ = (-1)^{|b|} b.
            let dual_gram: Vec<Vec<Rat>> = (0..self.dim)
                .map(|i| {
                    (0..self.dim)
                        .map(|j| self.trace(&self.multiply(&duals[i], &duals[j]).unwrap()).unwrap())
                        .collect()
                })
                .collect();
            let mut dd2_ok = true;
            let mut dd2_witness = None;
            match duals_from_gram_generic(self, &dual_gram, |k| duals[k].clone()) {
                Ok(double) => {
                    for i in 0..self.dim {
                        let mut expect = self.basis_element(i);
                        if self.parity[i] == 1 {
                            expect = self.scale(&-Rat::one(), &expect);
                        }
                        if double[i] != expect {
                            dd2_ok = false;
                            dd2_witness = Some(format!("(b{}^∨)^∨ != (-1)^|b| b{}", i, i));
                            break;
                        }
                    }
                }
                Err(_) => {
                    dd2_ok = false;
                    dd2_witness = Some("dual Gram singular".to_string());
                }
            }
            push("double dual sign", dd2_ok, dd2_witness);

            // Decomposition a = Σ tr(b^∨ a) b = Σ tr(a b) b^∨ on basis elements.
            let mut dec_ok = true;
            let mut dec_witness = None;
            for t in 0..self.dim {
                let a = self.basis_element(t);
                let mut lhs = self.zero_element();
                let mut rhs = self.zero_element();
                for i in 0..self.dim {
                    let c1 = self.trace(&self.multiply(&duals[i], &a).unwrap()).unwrap();
                    lhs = self.add(&lhs, &self.scale(&c1, &self.basis_element(i)));
                    let c2 = self.trace(&self.multiply(&a, &self.basis_element(i)).unwrap()).unwrap();
                    rhs = self.add(&rhs, &self.scale(&c2, &duals[i]));
                }
                if lhs != a || rhs != a {
                    dec_ok = false;
                    dec_witness = Some(format!("trace decomposition fails on b{}", t));
                    break;
                }
            }
            push("trace decomposition", dec_ok, dec_witness);
        }

        ValidationReport { algebra: self.name.clone(), checks }
    }

    pub fn validated(self) -> Result<AlgebraRef, AlgebraError> {
        let report = self.validate();
        if report.all_pass() {
            Ok(Arc::new(self))
        } else {
            Err(AlgebraError::Invalid(self.name.clone(), report.failures()))
        }
    }
}

fn duals_from_gram(alg: &FrobeniusSuperalgebra, gram: &[Vec<Rat>]) -> Result<Vec<AlgebraElement>, AlgebraError> {
    duals_from_gram_generic(alg, gram, |k| alg.basis_element(k))
}

/// Duals of a family c_k with Gram g_ij = tr(c_i c_j): c_i^∨ = Σ_k x_ik c_k
/// where tr(c_i^∨ c_j) = δ means x G = I, i.e. x = G^{-1}.
fn duals_from_gram_generic(
    alg: &FrobeniusSuperalgebra,
    gram: &[Vec<Rat>],
    family: impl Fn(usize) -> AlgebraElement,
) -> Result<Vec<AlgebraElement>, AlgebraError> {
    let n = alg.dim;
    let mut aug: Vec<Vec<Rat>> = gram.to_vec();
    for (i, row) in aug.iter_mut().enumerate() {
        let mut id = vec![Rat::zero(); n];
        id[i] = Rat::one();
        row.extend(id);
    }
    let rank = row_echelon(&mut aug);
    if rank < n {
        return Err(AlgebraError::Invalid(alg.name.clone(), "singular Gram matrix".into()));
    }
    // aug now holds ... wait: row_echelon reduces the whole augmented width;
    // pivots land on the identity-left block, so the right block is G^{-1}.
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = alg.zero_element();
        for k in 0..n {
            let c = aug[i][n + k].clone();
            if !c.is_zero() {
                acc = alg.add(&acc, &alg.scale(&c, &family(k)));
            }
        }
        out.push(acc);
    }
    Ok(out)
}

const FIELD: &str = "field";
const GAUSSIAN: &str = "gaussian";
const QUATERNION: &str = "quaternion";

fn raw(name: &str, basis: &[&str], parity: Vec<Parity>, mul: Vec<Vec<Vec<i64>>>, trace: Vec<Rat>, star: Vec<Vec<i64>>, unit_idx: usize) -> FrobeniusSuperalgebra {
    let dim = basis.len();
    let mul_table = mul
        .into_iter()
        .map(|row| row.into_iter().map(|v| v.into_iter().map(Rat::from_int).collect()).collect())
        .collect();
    let star_matrix: Vec<Vec<Rat>> =
        star.into_iter().map(|r| r.into_iter().map(Rat::from_int).collect()).collect();
    let mut unit = vec![Rat::zero(); dim];
    unit[unit_idx] = Rat::one();
    FrobeniusSuperalgebra {
        name: name.to_string(),
        dim,
        basis_names: basis.iter().map(|s| s.to_string()).collect(),
        parity,
        mul_table,
        trace_vec: trace,
        star_matrix,
        unit,
    }
}

/// Builds one of the built-in algebras. Names: `field`, `gaussian`,
/// `quaternion`, `group_cyclic` (param n ≥ 1), `trunc_poly` (param n ≥ 1).
pub fn make_builtin(name: &str, param: Option<usize>) -> Result<AlgebraRef, AlgebraError> {
    let alg = match (name, param) {
        (FIELD, _) => raw(
            FIELD,
            &["1"],
            vec![0],
            vec![vec![vec![1]]],
            vec![Rat::one()],
            vec![vec![1]],
            0,
        ),
        (GAUSSIAN, _) => raw(
            GAUSSIAN,
            &["1", "i"],
            vec![0, 0],
            vec![
                vec![vec![1, 0], vec![0, 1]],
                vec![vec![0, 1], vec![-1, 0]],
            ],
            vec![Rat::one(), Rat::zero()],
            vec![vec![1, 0], vec![0, -1]],
            0,
        ),
        (QUATERNION, _) => raw(
            QUATERNION,
            &["1", "i", "j", "k"],
            vec![0, 0, 0, 0],
            vec![
                vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]],
                vec![vec![0, 1, 0, 0], vec![-1, 0, 0, 0], vec![0, 0, 0, 1], vec![0, 0, -1, 0]],
                vec![vec![0, 0, 1, 0], vec![0, 0, 0, -1], vec![-1, 0, 0, 0], vec![0, 1, 0, 0]],
                vec![vec![0, 0, 0, 1], vec![0, 0, 1, 0], vec![0, -1, 0, 0], vec![-1, 0, 0, 0]],
            ],
            vec![Rat::one(), Rat::zero(), Rat::zero(), Rat::zero()],
            vec![
                vec![1, 0, 0, 0],
                vec![0, -1, 0, 0],
                vec![0, 0, -1, 0],
                vec![0, 0, 0, -1],
            ],
            0,
        ),
        ("group_cyclic", Some(n)) => {
            if n == 0 {
                return Err(AlgebraError::BadParameter("group_cyclic needs n >= 1".into()));
            }
            let names: Vec<String> = (0..n).map(|m| if m == 0 { "1".into() } else { format!("g{}", m) }).collect();
            let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
            let mut mul = vec![vec![vec![0i64; n]; n]; n];
            for i in 0..n {
                for j in 0..n {
                    mul[i][j][(i + j) % n] = 1;
                }
            }
            let mut trace = vec![Rat::zero(); n];
            trace[0] = Rat::one();
            let mut star = vec![vec![0i64; n]; n];
            for (i, row_target) in (0..n).map(|i| (i, (n - i) % n)).collect::<Vec<_>>() {
                star[row_target][i] = 1;
            }
            raw(&format!("group_cyclic({})", n), &name_refs, vec![0; n], mul, trace, star, 0)
        }
        ("trunc_poly", Some(n)) => {
            if n == 0 {
                return Err(AlgebraError::BadParameter("trunc_poly needs n >= 1".into()));
            }
            let names: Vec<String> = (0..n).map(|m| if m == 0 { "1".into() } else if m == 1 { "x".into() } else { format!("x{}", m) }).collect();
            let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
            let mut mul = vec![vec![vec![0i64; n]; n]; n];
            for i in 0..n {
                for j in 0..n {
                    if i + j < n {
                        mul[i][j][i + j] = 1;
                    }
                }
            }
            let mut trace = vec![Rat::zero(); n];
            trace[n - 1] = Rat::one();
            let mut star = vec![vec![0i64; n]; n];
            for (i, row) in star.iter_mut().enumerate() {
                row[i] = 1;
            }
            raw(&format!("trunc_poly({})", n), &name_refs, vec![0; n], mul, trace, star, 0)
        }
        ("group_cyclic", None) | ("trunc_poly", None) => {
            return Err(AlgebraError::BadParameter(format!("{} needs a parameter", name)));
        }
        _ => return Err(AlgebraError::UnknownBuiltin(name.to_string())),
    };
    alg.validated()
}

/// Parses names like `field`, `trunc_poly(2)`, `group_cyclic:3`.
pub fn builtin_from_spec(spec: &str) -> Result<AlgebraRef, AlgebraError> {
    let spec = spec.trim();
    if let Some(open) = spec.find(['(', ':']) {
        let name = &spec[..open];
        let rest = spec[open + 1..].trim_end_matches(')');
        let n: usize = rest
            .parse()
            .map_err(|_| AlgebraError::BadParameter(format!("bad parameter in `{}`", spec)))?;
        make_builtin(name, Some(n))
    } else {
        make_builtin(spec, None)
    }
}

/// The five default algebras used by the relation suites.
pub fn default_algebras() -> Vec<AlgebraRef> {
    vec![
        make_builtin("field", None).unwrap(),
        make_builtin("gaussian", None).unwrap(),
        make_builtin("quaternion", None).unwrap(),
        make_builtin("group_cyclic", Some(2)).unwrap(),
        make_builtin("trunc_poly", Some(2)).unwrap(),
    ]
}

/// Re-traced copy of `alg` with tr2(a) = tr1(u a); used by the trace-twist
/// harness. `u` must be even, central, invertible, and star-fixed.
pub fn retrace(alg: &AlgebraRef, u: &AlgebraElement) -> Result<AlgebraRef, AlgebraError> {
    if alg.parity_of(u) != Some(0) {
        return Err(AlgebraError::BadParameter("u must be even".into()));
    }
    for i in 0..alg.dim {
        let bi = alg.basis_element(i);
        if alg.multiply(u, &bi)? != alg.multiply(&bi, u)? {
            return Err(AlgebraError::BadParameter("u must be central".into()));
        }
    }
    if alg.involute(u)? != *u {
        return Err(AlgebraError::BadParameter("u must satisfy u* = u".into()));
    }
    alg.inverse(u)?;
    let mut out = (**alg).clone();
    out.name = format!("{}[tr·{}]", alg.name, "u");
    for i in 0..alg.dim {
        let bi = alg.basis_element(i);
        out.trace_vec[i] = alg.trace(&alg.multiply(u, &bi)?)?;
    }
    out.validated()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_validation_and_examples() {
        for alg in default_algebras() {
            let report = alg.validate();
            assert!(report.all_pass(), "{} failed:\n{}", alg.name, report.failures());
        }
    }

    #[test]
    fn quaternion_products() {
        let h = make_builtin("quaternion", None).unwrap();
        let i = h.basis_element(1);
        let j = h.basis_element(2);
        let k = h.basis_element(3);
        assert_eq!(h.multiply(&i, &j).unwrap(), k);
        assert_eq!(h.multiply(&j, &i).unwrap(), h.scale(&-Rat::one(), &k));
        assert_eq!(h.multiply(&i, &i).unwrap(), h.scale(&-Rat::one(), &h.one()));
        // tr(3 + 2i) = 3.
        let e = h.element(vec![Rat::from_int(3), Rat::from_int(2), Rat::zero(), Rat::zero()]);
        assert_eq!(h.trace(&e).unwrap(), Rat::from_int(3));
    }

    #[test]
    fn unit_law_and_nilpotent() {
        let tp = make_builtin("trunc_poly", Some(2)).unwrap();
        let x = tp.basis_element(1);
        assert_eq!(tp.multiply(&tp.one(), &x).unwrap(), x);
        assert_eq!(tp.multiply(&x, &x).unwrap(), tp.zero_element());
    }

    #[test]
    fn gaussian_involution_preserves_trace() {
        let c = make_builtin("gaussian", None).unwrap();
        let e = c.element(vec![Rat::from_int(5), Rat::from_int(-2)]);
        let s = c.involute(&e).unwrap();
        assert_eq!(s, c.element(vec![Rat::from_int(5), Rat::from_int(2)]));
        assert_eq!(c.trace(&s).unwrap(), c.trace(&e).unwrap());
        assert_eq!(c.involute(&s).unwrap(), e);
    }

    #[test]
    fn cyclic_group_star() {
        let g3 = make_builtin("group_cyclic", Some(3)).unwrap();
        let g = g3.basis_element(1);
        assert_eq!(g3.involute(&g).unwrap(), g3.basis_element(2));
    }

    #[test]
    fn trunc_poly_gram_and_duals() {
        // Oracle: Gram of trunc_poly(2) from the definitions is [[0,1],[1,0]].
        let tp = make_builtin("trunc_poly", Some(2)).unwrap();
        let g = tp.gram();
        assert_eq!(g[0][0], Rat::zero());
        assert_eq!(g[0][1], Rat::one());
        assert_eq!(g[1][0], Rat::one());
        assert_eq!(g[1][1], Rat::zero());
        let duals = tp.dual_basis().unwrap();
        assert_eq!(duals[0], tp.basis_element(1)); // 1^∨ = x
        assert_eq!(duals[1], tp.basis_element(0)); // x^∨ = 1
        // tr(b_i^∨ b_j) = δ.
        for i in 0..2 {
            for j in 0..2 {
                let t = tp.trace(&tp.multiply(&duals[i], &tp.basis_element(j)).unwrap()).unwrap();
                assert_eq!(t, if i == j { Rat::one() } else { Rat::zero() });
            }
        }
    }

    #[test]
    fn quaternion_duals() {
        let h = make_builtin("quaternion", None).unwrap();
        let duals = h.dual_basis().unwrap();
        assert_eq!(duals[0], h.basis_element(0));
        for t in 1..4 {
            assert_eq!(duals[t], h.scale(&-Rat::one(), &h.basis_element(t)));
        }
    }

    #[test]
    fn field_dual_is_one() {
        let f = make_builtin("field", None).unwrap();
        assert_eq!(f.dual_basis().unwrap()[0], f.one());
    }

    #[test]
    fn regular_supertrace_values() {
        let tp = make_builtin("trunc_poly", Some(2)).unwrap();
        assert_eq!(tp.reg_supertrace(&tp.one()).unwrap(), Rat::from_int(2));
        let f = make_builtin("field", None).unwrap();
        assert_eq!(f.reg_supertrace(&f.one()).unwrap(), Rat::one());
        let h = make_builtin("quaternion", None).unwrap();
        assert_eq!(h.reg_supertrace(&h.basis_element(1)).unwrap(), Rat::zero());
        assert_eq!(h.reg_supertrace(&h.one()).unwrap(), Rat::from_int(4));
    }

    #[test]
    fn reg_supertrace_basis_independent() {
        // Change of basis: replace {1, x} with {1 + x, x} in trunc_poly(2);
        // str computed through the formula must not change.
        let tp = make_builtin("trunc_poly", Some(2)).unwrap();
        let mut alt = (*tp).clone();
        alt.name = "tp_alt".into();
        // New basis c0 = 1 + x, c1 = x. Products: c0c0 = 1+2x = c0 + c1,
        // c0c1 = c1c0 = x = c1, c1c1 = 0. tr(c0) = 1, tr(c1) = 1.
        alt.mul_table = vec![
            vec![
                vec![Rat::one(), Rat::one()],
                vec![Rat::zero(), Rat::one()],
            ],
            vec![
                vec![Rat::zero(), Rat::one()],
                vec![Rat::zero(), Rat::zero()],
            ],
        ];
        alt.trace_vec = vec![Rat::one(), Rat::one()];
        alt.unit = vec![Rat::one(), -Rat::one()];
        let alt = alt.validated().expect("change of basis stays valid");
        assert_eq!(alt.reg_supertrace(&alt.one()).unwrap(), Rat::from_int(2));
    }

    #[test]
    fn zero_trace_fails_validation() {
        let mut bad = (*make_builtin("field", None).unwrap()).clone();
        bad.name = "bad".into();
        bad.trace_vec = vec![Rat::zero()];
        let report = bad.validate();
        assert!(!report.all_pass());
        assert!(report
            .checks
            .iter()
            .any(|c| c.axiom == "trace form nondegenerate" && !c.pass));
    }

    #[test]
    fn group_cyclic_2_all_pass() {
        let g2 = make_builtin("group_cyclic", Some(2)).unwrap();
        assert!(g2.validate().all_pass());
    }

    #[test]
    fn bad_builtin_names() {
        assert!(make_builtin("nope", None).is_err());
        assert!(make_builtin("trunc_poly", Some(0)).is_err());
        assert!(builtin_from_spec("trunc_poly(3)").is_ok());
        assert!(builtin_from_spec("group_cyclic:4").is_ok());
    }

    #[test]
    fn inverse_and_retrace() {
        let tp3 = make_builtin("trunc_poly", Some(3)).unwrap();
        let u = tp3.add(&tp3.one(), &tp3.basis_element(1)); // 1 + x
        let inv = tp3.inverse(&u).unwrap();
        assert_eq!(tp3.multiply(&inv, &u).unwrap(), tp3.one());
        let twisted = retrace(&tp3, &u).unwrap();
        assert!(twisted.validate().all_pass());
        // tr2(x^2) = tr1((1+x) x^2) = tr1(x^2) = 1.
        assert_eq!(twisted.trace_vec[2], Rat::one());
        // tr2(x) = tr1(x + x^2) = 1.
        assert_eq!(twisted.trace_vec[1], Rat::one());
        // Non-invertible u rejected.
        let x = tp3.basis_element(1);
        assert!(retrace(&tp3, &x).is_err());
    }

    #[test]
    fn mismatch_errors() {
        let f = make_builtin("field", None).unwrap();
        let tp = make_builtin("trunc_poly", Some(2)).unwrap();
        let e = tp.one();
        assert!(f.multiply(&f.one(), &e).is_err());
    }
}
