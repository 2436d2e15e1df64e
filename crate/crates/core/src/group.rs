//! Finite groups as indexed multiplication tables, and complex-valued
//! functions on them.
//!
//! Haar measure is the counting measure (weight 1 per element), so `δ_e` is
//! the unit of the convolution algebra. The modular function is stored per
//! element; on a finite group it is identically 1.

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::CVec;

#[derive(Debug, Clone, PartialEq)]
pub struct GroupTable {
    order: usize,
    /// Row-major `order × order` table.
    product: Vec<usize>,
    inverse: Vec<usize>,
    identity: usize,
    haar_weight: Vec<f64>,
    modular: Vec<f64>,
    labels: Vec<String>,
}

/// A single violated group axiom.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum Violation {
    Associativity { a: usize, b: usize, c: usize },
    Identity { element: usize },
    Inverse { element: usize },
    ModularHomomorphism { s: usize, t: usize },
    HaarInvariance { s: usize, t: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

impl GroupTable {
    /// Build a table from its parts, checking only shapes and index ranges.
    /// Axioms are checked separately by [`validate_group`].
    pub fn from_parts(
        product: Vec<Vec<usize>>,
        identity: usize,
        inverse: Vec<usize>,
        haar_weight: Vec<f64>,
        modular: Vec<f64>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let order = product.len();
        if order == 0 {
            return Err(Error::Structural("group must have at least one element".into()));
        }
        for (i, row) in product.iter().enumerate() {
            if row.len() != order {
                return Err(Error::Structural(format!(
                    "row {i} has length {} but the order is {order}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= order) {
                return Err(Error::Structural(format!(
                    "product entry {bad} in row {i} is out of range"
                )));
            }
        }
        if identity >= order {
            return Err(Error::Structural(format!("identity {identity} out of range")));
        }
        let check_len = |name: &str, len: usize| {
            if len == order {
                Ok(())
            } else {
                Err(Error::Structural(format!(
                    "{name} has length {len} but the order is {order}"
                )))
            }
        };
        check_len("inverse", inverse.len())?;
        check_len("haar_weight", haar_weight.len())?;
        check_len("modular", modular.len())?;
        if let Some(&bad) = inverse.iter().find(|&&x| x >= order) {
            return Err(Error::Structural(format!("inverse entry {bad} out of range")));
        }
        if haar_weight.iter().chain(&modular).any(|&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::Structural(
                "Haar weights and modular values must be positive and finite".into(),
            ));
        }
        let labels = match labels {
            Some(l) => {
                check_len("labels", l.len())?;
                l
            }
            None => (0..order).map(|i| format!("g{i}")).collect(),
        };
        Ok(Self {
            order,
            product: product.into_iter().flatten().collect(),
            inverse,
            identity,
            haar_weight,
            modular,
            labels,
        })
    }

    /// Build a table with counting measure from a multiplication table alone;
    /// identity and inverses are derived. Returns a structural error for bad
    /// shapes; axiom failures are left for [`validate_group`] to report.
    pub fn from_product_unchecked(
        product: Vec<Vec<usize>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let order = product.len();
        let mut table = Self::from_parts(
            product,
            0,
            (0..order).collect(),
            vec![1.0; order],
            vec![1.0; order],
            labels,
        )?;
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| table.mul(e, a) == a && table.mul(a, e) == a))
            .unwrap_or(0);
        table.identity = identity;
        table.inverse = (0..order)
            .map(|a| {
                (0..order)
                    .find(|&b| table.mul(a, b) == identity && table.mul(b, a) == identity)
                    .unwrap_or(a)
            })
            .collect();
        Ok(table)
    }

    /// Build a table from a multiplication table and require every axiom.
    pub fn from_product(product: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let table = Self::from_product_unchecked(product, labels)?;
        let report = validate_group(&table);
        if let Some(v) = report.violations.first() {
            return Err(Error::Structural(format!(
                "table violates the group axioms ({} violations, first: {v:?})",
                report.violations.len()
            )));
        }
        Ok(table)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.product[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn haar_weight(&self, s: usize) -> f64 {
        self.haar_weight[s]
    }

    pub fn modular(&self, s: usize) -> f64 {
        self.modular[s]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn product_rows(&self) -> Vec<Vec<usize>> {
        self.product.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn check_index(&self, s: usize) -> Result<()> {
        if s < self.order {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: s,
                order: self.order,
            })
        }
    }

    /// Number of conjugacy classes, by direct orbit enumeration.
    pub fn conjugacy_class_count(&self) -> usize {
        let n = self.order;
        let mut seen = vec![false; n];
        let mut classes = 0;
        for a in 0..n {
            if seen[a] {
                continue;
            }
            classes += 1;
            for g in 0..n {
                seen[self.mul(self.mul(g, a), self.inv(g))] = true;
            }
        }
        classes
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Cyclic group Z_n with elements `0..n` under addition mod n.
    pub fn cyclic(n: usize) -> Self {
        let product = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let labels = (0..n).map(|k| k.to_string()).collect();
        Self::from_product(product, Some(labels)).expect("cyclic table is a group")
    }

    /// Dihedral group of order 2m; index `k + m·j` stands for `r^k s^j`.
    pub fn dihedral(m: usize) -> Self {
        let n = 2 * m;
        let split = |x: usize| (x % m, x / m);
        let product = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| {
                        let (k, a) = split(x);
                        let (l, b) = split(y);
                        let rot = if a == 0 { (k + l) % m } else { (k + m - l) % m };
                        rot + m * ((a + b) % 2)
                    })
                    .collect()
            })
            .collect();
        let labels = (0..n)
            .map(|x| {
                let (k, j) = split(x);
                match (k, j) {
                    (0, 0) => "e".to_string(),
                    (k, 0) => format!("r{k}"),
                    (0, _) => "s".to_string(),
                    (k, _) => format!("r{k}s"),
                }
            })
            .collect();
        Self::from_product(product, Some(labels)).expect("dihedral table is a group")
    }

    /// Symmetric group S_k; elements are the permutations of `0..k` in
    /// lexicographic order (see [`permutations`]), multiplied by composition
    /// `(ab)(i) = a(b(i))`.
    pub fn symmetric(k: usize) -> Self {
        let perms = permutations(k);
        let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("closed");
        let product = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| index(&b.iter().map(|&i| a[i]).collect::<Vec<_>>()))
                    .collect()
            })
            .collect();
        let labels = perms
            .iter()
            .map(|p| p.iter().map(usize::to_string).collect::<String>())
            .collect();
        Self::from_product(product, Some(labels)).expect("symmetric table is a group")
    }
}

/// All permutations of `0..k` in lexicographic order; the identity comes first.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// Check every group axiom and list each violation found.
pub fn validate_group(table: &GroupTable) -> ValidationReport {
    let n = table.order();
    let e = table.identity();
    let mut violations = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let ab = table.mul(a, b);
            for c in 0..n {
                if table.mul(ab, c) != table.mul(a, table.mul(b, c)) {
                    violations.push(Violation::Associativity { a, b, c });
                }
            }
        }
    }
    for a in 0..n {
        if table.mul(e, a) != a || table.mul(a, e) != a {
            violations.push(Violation::Identity { element: a });
        }
    }
    for a in 0..n {
        let b = table.inv(a);
        if table.mul(a, b) != e || table.mul(b, a) != e {
            violations.push(Violation::Inverse { element: a });
        }
    }
    for s in 0..n {
        for t in 0..n {
            let lhs = table.modular(table.mul(s, t));
            let rhs = table.modular(s) * table.modular(t);
            if (lhs - rhs).abs() > 1e-12 * rhs.max(1.0) {
                violations.push(Violation::ModularHomomorphism { s, t });
            }
            // left invariance of the measure: weight(st) = weight(t)
            let w = table.haar_weight(table.mul(s, t));
            if (w - table.haar_weight(t)).abs() > 1e-12 * w.max(1.0) {
                violations.push(Violation::HaarInvariance { s, t });
            }
        }
    }
    ValidationReport { violations }
}

/// A complex-valued function on a finite group.
#[derive(Debug, Clone)]
pub struct GroupFunction {
    group: Arc<GroupTable>,
    values: Vec<Complex64>,
}

impl PartialEq for GroupFunction {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group) && self.values == other.values
    }
}

pub(crate) fn same_group(a: &Arc<GroupTable>, b: &Arc<GroupTable>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl GroupFunction {
    pub fn new(group: Arc<GroupTable>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::DimensionMismatch {
                expected: group.order(),
                found: values.len(),
            });
        }
        Ok(Self { group, values })
    }

    pub fn zeros(group: &Arc<GroupTable>) -> Self {
        Self {
            values: vec![Complex64::new(0.0, 0.0); group.order()],
            group: Arc::clone(group),
        }
    }

    /// Indicator of a single element.
    pub fn delta(group: &Arc<GroupTable>, a: usize) -> Result<Self> {
        group.check_index(a)?;
        let mut f = Self::zeros(group);
        f.values[a] = Complex64::new(1.0, 0.0);
        Ok(f)
    }

    pub fn from_real(group: &Arc<GroupTable>, values: &[f64]) -> Result<Self> {
        Self::new(
            Arc::clone(group),
            values.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn from_vector(group: &Arc<GroupTable>, v: &CVec) -> Result<Self> {
        Self::new(Arc::clone(group), v.iter().copied().collect())
    }

    pub fn to_vector(&self) -> CVec {
        CVec::from_column_slice(&self.values)
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, s: usize) -> Complex64 {
        self.values[s]
    }

    pub fn ensure_same_group(&self, other: &Self) -> Result<()> {
        if same_group(&self.group, &other.group) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn norm_sq(&self) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(s, z)| self.group.haar_weight(s) * z.norm_sqr())
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn map(&self, f: impl Fn(usize, Complex64) -> Complex64) -> Self {
        Self {
            group: Arc::clone(&self.group),
            values: self.values.iter().enumerate().map(|(s, &z)| f(s, z)).collect(),
        }
    }

    /// L² distance to another function on the same group.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok((self - other)?.norm())
    }
}

/// `Σ_s w(s) f(s) conj(g(s))`, linear in the first argument.
pub fn inner_product(f: &GroupFunction, g: &GroupFunction) -> Result<Complex64> {
    f.ensure_same_group(g)?;
    Ok(f.values
        .iter()
        .zip(&g.values)
        .enumerate()
        .map(|(s, (a, b))| f.group.haar_weight(s) * a * b.conj())
        .sum())
}

impl Add for &GroupFunction {
    type Output = Result<GroupFunction>;
    fn add(self, rhs: Self) -> Self::Output {
        self.ensure_same_group(rhs)?;
        Ok(self.map(|s, z| z + rhs.values[s]))
    }
}

impl Sub for &GroupFunction {
    type Output = Result<GroupFunction>;
    fn sub(self, rhs: Self) -> Self::Output {
        self.ensure_same_group(rhs)?;
        Ok(self.map(|s, z| z - rhs.values[s]))
    }
}

impl Mul<Complex64> for &GroupFunction {
    type Output = GroupFunction;
    fn mul(self, rhs: Complex64) -> GroupFunction {
        self.map(|_, z| z * rhs)
    }
}

impl Mul<f64> for &GroupFunction {
    type Output = GroupFunction;
    fn mul(self, rhs: f64) -> GroupFunction {
        self.map(|_, z| z * rhs)
    }
}

impl fmt::Display for GroupFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, z) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}: {:.6}{:+.6}i", self.group.labels[i], z.re, z.im)?;
        }
        write!(f, "]")
    }
}
