//! Finite graded commutative algebras given by structure constants.
//!
//! These play two roles: the space decorating internal vertices, and the
//! unital algebra whose dual labels the hairs of a hairy graph.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::Q;

/// Index of a basis symbol inside its algebra together with its parity.
///
/// The parity is cached so that orientation bookkeeping never needs to
/// consult the algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sym {
    pub id: u16,
    pub odd: bool,
}

/// Sparse rational combination of basis symbols.
pub type SymCombo = Vec<(u16, Q)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAlgebra {
    name: String,
    symbols: Vec<String>,
    degrees: Vec<i32>,
    unit: u16,
    mult: BTreeMap<(u16, u16), SymCombo>,
    diff: Vec<SymCombo>,
}

impl GradedAlgebra {
    /// Builds an algebra from raw data. Products not listed in `mult` are
    /// zero except those involving the unit.
    pub fn new(
        name: &str,
        symbols: &[(&str, i32)],
        unit: &str,
        mult: &[(&str, &str, &[(&str, i64)])],
        diff: &[(&str, &[(&str, i64)])],
    ) -> Result<Self> {
        let names: Vec<String> = symbols.iter().map(|(s, _)| s.to_string()).collect();
        let degrees: Vec<i32> = symbols.iter().map(|(_, d)| *d).collect();
        let lookup = |s: &str| -> Result<u16> {
            names
                .iter()
                .position(|x| x == s)
                .map(|i| i as u16)
                .ok_or_else(|| Error::UnknownSymbol(s.to_string()))
        };
        let unit = lookup(unit)?;
        let mut alg = GradedAlgebra {
            name: name.to_string(),
            symbols: names.clone(),
            degrees,
            unit,
            mult: BTreeMap::new(),
            diff: vec![Vec::new(); names.len()],
        };
        for (a, b, terms) in mult {
            let (ia, ib) = (lookup(a)?, lookup(b)?);
            let mut combo = Vec::new();
            for (s, c) in terms.iter() {
                combo.push((lookup(s)?, Q::from_integer((*c).into())));
            }
            alg.mult.insert((ia, ib), combo.clone());
            // graded commutativity fills in the transposed entry
            if ia != ib {
                let sign = if alg.degrees[ia as usize] % 2 != 0 && alg.degrees[ib as usize] % 2 != 0 {
                    -Q::one()
                } else {
                    Q::one()
                };
                alg.mult.entry((ib, ia)).or_insert_with(|| {
                    combo.iter().map(|(s, c)| (*s, c * &sign)).collect()
                });
            }
        }
        for (a, terms) in diff {
            let ia = lookup(a)?;
            let mut combo = Vec::new();
            for (s, c) in terms.iter() {
                combo.push((lookup(s)?, Q::from_integer((*c).into())));
            }
            alg.diff[ia as usize] = combo;
        }
        Ok(alg)
    }

    /// Cohomology of the k-sphere: `1`, `w` with `w*w = 0`.
    pub fn sphere(k: i32) -> Self {
        Self::new(&format!("sphere{k}"), &[("1", 0), ("w", k)], "1", &[], &[])
            .expect("static algebra")
    }

    /// Cohomology of `S^d x S^d` minus a point: `1`, `w1`, `w2`, all
    /// products of positive classes vanish.
    pub fn punctured_sphere_product(d: i32) -> Self {
        Self::new(
            &format!("sphere{d}x{d}pt"),
            &[("1", 0), ("w1", d), ("w2", d)],
            "1",
            &[],
            &[],
        )
        .expect("static algebra")
    }

    /// A small non-formal example with nonzero differential: `dx = y`.
    pub fn koszul_pair() -> Self {
        Self::new("koszul", &[("1", 0), ("x", 1), ("y", 2)], "1", &[], &[("x", &[("y", 1)])])
            .expect("static algebra")
    }

    /// Looks up one of the named builtin algebras (`sphere<k>`,
    /// `sphere<d>x<d>pt`, `koszul`).
    pub fn builtin(name: &str) -> Result<Self> {
        if name == "koszul" {
            return Ok(Self::koszul_pair());
        }
        if let Some(rest) = name.strip_prefix("sphere") {
            if let Some(body) = rest.strip_suffix("pt") {
                if let Some((a, b)) = body.split_once('x') {
                    if let (Ok(a), Ok(b)) = (a.parse::<i32>(), b.parse::<i32>()) {
                        if a == b && a > 0 {
                            return Ok(Self::punctured_sphere_product(a));
                        }
                    }
                }
            } else if let Ok(k) = rest.parse::<i32>() {
                if k > 0 {
                    return Ok(Self::sphere(k));
                }
            }
        }
        Err(Error::UnknownAlgebra(name.to_string()))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.symbols.len()
    }

    /// Degree of the top class (the largest basis degree).
    pub fn top_degree(&self) -> i32 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn unit(&self) -> u16 {
        self.unit
    }

    pub fn unit_sym(&self) -> Sym {
        self.sym_of(self.unit)
    }

    pub fn symbol_name(&self, id: u16) -> &str {
        &self.symbols[id as usize]
    }

    pub fn degree(&self, id: u16) -> i32 {
        self.degrees[id as usize]
    }

    pub fn sym_of(&self, id: u16) -> Sym {
        Sym { id, odd: self.degrees[id as usize].rem_euclid(2) == 1 }
    }

    pub fn sym(&self, name: &str) -> Result<Sym> {
        self.symbols
            .iter()
            .position(|x| x == name)
            .map(|i| self.sym_of(i as u16))
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn symbols(&self) -> impl Iterator<Item = Sym> + '_ {
        (0..self.symbols.len() as u16).map(|i| self.sym_of(i))
    }

    /// Positive-degree (non-unit) basis symbols.
    pub fn reduced_symbols(&self) -> impl Iterator<Item = Sym> + '_ {
        self.symbols().filter(move |s| s.id != self.unit)
    }

    pub fn mul(&self, a: u16, b: u16) -> SymCombo {
        if a == self.unit {
            return vec![(b, Q::one())];
        }
        if b == self.unit {
            return vec![(a, Q::one())];
        }
        self.mult.get(&(a, b)).cloned().unwrap_or_default()
    }

    /// Product of an ordered list of basis symbols.
    pub fn product(&self, factors: &[u16]) -> SymCombo {
        let mut acc: SymCombo = vec![(self.unit, Q::one())];
        for &f in factors {
            let mut next: BTreeMap<u16, Q> = BTreeMap::new();
            for (s, c) in &acc {
                for (t, d) in self.mul(*s, f) {
                    *next.entry(t).or_insert_with(Q::zero) += c * d;
                }
            }
            acc = next.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        }
        acc
    }

    pub fn differential(&self, a: u16) -> &SymCombo {
        &self.diff[a as usize]
    }

    pub fn has_differential(&self) -> bool {
        self.diff.iter().any(|d| !d.is_empty())
    }

    /// Exhaustive structural check of the algebra axioms on the basis.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim() as u16;
        let bad = |what: &str| Err(Error::Algebra(format!("{}: {}", self.name, what)));
        if self.degree(self.unit) != 0 {
            return bad("unit must have degree 0");
        }
        for (&(a, b), combo) in &self.mult {
            for (s, _) in combo {
                if self.degree(*s) != self.degree(a) + self.degree(b) {
                    return bad("product is not degree preserving");
                }
            }
        }
        for a in 0..n {
            for (s, _) in self.differential(a) {
                if self.degree(*s) != self.degree(a) + 1 {
                    return bad("differential must raise degree by one");
                }
            }
        }
        let combo_eq = |x: &SymCombo, y: &SymCombo| normalize(x) == normalize(y);
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                let ba = self.mul(b, a);
                let sign = if self.sym_of(a).odd && self.sym_of(b).odd { -Q::one() } else { Q::one() };
                let ba: SymCombo = ba.into_iter().map(|(s, c)| (s, c * &sign)).collect();
                if !combo_eq(&ab, &ba) {
                    return bad("not graded commutative");
                }
                for c in 0..n {
                    let left = self.product(&[a, b, c]);
                    let bc = self.mul(b, c);
                    let mut right = Vec::new();
                    for (s, k) in bc {
                        for (t, m) in self.mul(a, s) {
                            right.push((t, &k * m));
                        }
                    }
                    if !combo_eq(&left, &right) {
                        return bad("not associative");
                    }
                }
                // Leibniz: d(ab) = da b + (-1)^|a| a db
                let mut lhs = Vec::new();
                for (s, k) in self.mul(a, b) {
                    for (t, m) in self.differential(s) {
                        lhs.push((*t, &k * m));
                    }
                }
                let mut rhs = Vec::new();
                for (s, k) in self.differential(a) {
                    for (t, m) in self.mul(*s, b) {
                        rhs.push((t, k * m));
                    }
                }
                let sa = if self.sym_of(a).odd { -Q::one() } else { Q::one() };
                for (s, k) in self.differential(b) {
                    for (t, m) in self.mul(a, *s) {
                        rhs.push((t, k * m * &sa));
                    }
                }
                if !combo_eq(&lhs, &rhs) {
                    return bad("Leibniz rule fails");
                }
            }
            let mut dd = Vec::new();
            for (s, k) in self.differential(a) {
                for (t, m) in self.differential(*s) {
                    dd.push((*t, k * m));
                }
            }
            if !normalize(&dd).is_empty() {
                return bad("differential does not square to zero");
            }
        }
        Ok(())
    }
}

fn normalize(x: &SymCombo) -> Vec<(u16, Q)> {
    let mut m: BTreeMap<u16, Q> = BTreeMap::new();
    for (s, c) in x {
        *m.entry(*s).or_insert_with(Q::zero) += c;
    }
    m.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

impl fmt::Display for GradedAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name)?;
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}", s, self.degrees[i])?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_validate() {
        for a in [
            GradedAlgebra::sphere(2),
            GradedAlgebra::sphere(3),
            GradedAlgebra::punctured_sphere_product(3),
            GradedAlgebra::koszul_pair(),
        ] {
            a.validate().unwrap();
        }
    }

    #[test]
    fn top_class_squares_to_zero() {
        let a = GradedAlgebra::sphere(3);
        let w = a.sym("w").unwrap();
        assert!(a.product(&[w.id, w.id]).is_empty());
        assert_eq!(a.product(&[a.unit(), w.id]), vec![(w.id, Q::one())]);
    }

    #[test]
    fn broken_leibniz_is_rejected() {
        // x^2 = 0 but d(x^2) would be dx x + x dx = 2z
        let a = GradedAlgebra::new(
            "bad",
            &[("1", 0), ("x", 2), ("y", 3), ("z", 5)],
            "1",
            &[("x", "y", &[("z", 1)])],
            &[("x", &[("y", 1)])],
        )
        .unwrap();
        assert!(a.validate().is_err());
    }

    #[test]
    fn builtin_lookup() {
        assert_eq!(GradedAlgebra::builtin("sphere3").unwrap().top_degree(), 3);
        assert_eq!(GradedAlgebra::builtin("sphere3x3pt").unwrap().dim(), 3);
        assert!(GradedAlgebra::builtin("torus").is_err());
    }
}
