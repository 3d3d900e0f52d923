//! Sparse generating polynomials with exact integer coefficients.
//!
//! `I_n(q; c)` sums `q^tinv(F) c^tree(F)` over forests and `J_n(q; c)` sums
//! `q^tjump(P) c^critic(P)` over parking functions, where `q^v` stands for
//! `q_0^v_0 q_1^v_1 ...`. The closed-form products they specialize to are
//! expanded here as well, so every identity becomes a coefficient comparison.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::enumerate::{all_forests, all_parking_functions};
use crate::error::{EnumerateError, GenFuncError};
use crate::forest_stats::{inversion_counts, tree_count, type_vector};
use crate::parking::jump_stats;

/// Largest `n` for the full `I_n` / `J_n` polynomials.
pub const MAX_POLY_N: usize = 6;

/// A polynomial variable. `Indexed(i)` is `q_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Indexed(usize),
    Q,
    U,
    C,
}

impl Var {
    pub fn name(self) -> String {
        match self {
            Var::Indexed(i) => format!("q{i}"),
            Var::Q => "q".into(),
            Var::U => "u".into(),
            Var::C => "c".into(),
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const SUB: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
        match self {
            Var::Indexed(i) => {
                f.write_str("q")?;
                for d in i.to_string().bytes() {
                    write!(f, "{}", SUB[(d - b'0') as usize])?;
                }
                Ok(())
            }
            other => f.write_str(&other.name()),
        }
    }
}

/// A product of variable powers, kept as `(variable, power)` pairs sorted by
/// variable with no zero powers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new<I: IntoIterator<Item = (Var, u32)>>(powers: I) -> Self {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in powers {
            *map.entry(v).or_default() += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn var(v: Var) -> Self {
        Monomial::new([(v, 1)])
    }

    /// `q_0^t_0 q_1^t_1 ...` for a type vector `t`.
    pub fn from_type_vector(t: &[usize]) -> Self {
        Monomial::new(t.iter().enumerate().map(|(i, &e)| (Var::Indexed(i), e as u32)))
    }

    pub fn powers(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn power(&self, v: Var) -> u32 {
        self.0.iter().find(|(w, _)| *w == v).map_or(0, |&(_, e)| e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.0.iter().chain(&other.0).copied())
    }
}

fn superscript(e: u32) -> String {
    const SUP: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    e.to_string().bytes().map(|d| SUP[(d - b'0') as usize]).collect()
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, &(v, e)) in self.0.iter().enumerate() {
            if i > 0 && matches!(self.0[i - 1].0, Var::Indexed(_)) {
                f.write_str("·")?;
            }
            write!(f, "{v}")?;
            if e > 1 {
                f.write_str(&superscript(e))?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial with positive integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GenPoly {
    terms: BTreeMap<Monomial, u64>,
}

impl GenPoly {
    pub fn zero() -> Self {
        GenPoly::default()
    }

    pub fn constant(c: u64) -> Self {
        let mut p = GenPoly::zero();
        p.add_term(Monomial::one(), c).expect("no overflow from zero");
        p
    }

    pub fn var(v: Var) -> Self {
        GenPoly::monomial(Monomial::var(v), 1)
    }

    pub fn monomial(m: Monomial, c: u64) -> Self {
        let mut p = GenPoly::zero();
        p.add_term(m, c).expect("no overflow from zero");
        p
    }

    /// Polynomial in one variable from its coefficient list, lowest degree first.
    pub fn univariate(v: Var, coeffs: &[u64]) -> Self {
        let mut p = GenPoly::zero();
        for (e, &c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::new([(v, e as u32)]), c)
                .expect("no overflow from distinct terms");
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: u64) -> Result<(), GenFuncError> {
        if c == 0 {
            return Ok(());
        }
        let slot = self.terms.entry(m).or_insert(0);
        *slot = slot.checked_add(c).ok_or(GenFuncError::Overflow)?;
        Ok(())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coeff(&self, m: &Monomial) -> u64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of all coefficients, i.e. the value at all variables equal to 1.
    pub fn mass(&self) -> u64 {
        self.terms.values().sum()
    }

    pub fn add(&self, other: &GenPoly) -> Result<GenPoly, GenFuncError> {
        let mut out = self.clone();
        out.merge(other)?;
        Ok(out)
    }

    /// Adds `other` into `self`.
    pub fn merge(&mut self, other: &GenPoly) -> Result<(), GenFuncError> {
        for (m, c) in other.terms() {
            self.add_term(m.clone(), c)?;
        }
        Ok(())
    }

    pub fn mul(&self, other: &GenPoly) -> Result<GenPoly, GenFuncError> {
        let mut out = GenPoly::zero();
        for (a, x) in self.terms() {
            for (b, y) in other.terms() {
                out.add_term(a.mul(b), x.checked_mul(y).ok_or(GenFuncError::Overflow)?)?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: u64) -> Result<GenPoly, GenFuncError> {
        GenPoly::constant(k).mul(self)
    }

    pub fn pow(&self, e: u32) -> Result<GenPoly, GenFuncError> {
        (0..e).try_fold(GenPoly::constant(1), |acc, _| acc.mul(self))
    }

    /// Replaces every variable by a polynomial.
    pub fn substitute<F>(&self, mut image: F) -> Result<GenPoly, GenFuncError>
    where
        F: FnMut(Var) -> GenPoly,
    {
        let mut out = GenPoly::zero();
        for (m, c) in self.terms() {
            let mut term = GenPoly::constant(c);
            for &(v, e) in m.powers() {
                term = term.mul(&image(v).pow(e)?)?;
            }
            out.merge(&term)?;
        }
        Ok(out)
    }

    /// Sets the listed variables to 1.
    pub fn set_to_one(&self, vars: &[Var]) -> GenPoly {
        let mut out = GenPoly::zero();
        for (m, c) in self.terms() {
            let kept = Monomial::new(m.powers().iter().copied().filter(|(v, _)| !vars.contains(v)));
            out.add_term(kept, c).expect("coefficients only regroup");
        }
        out
    }

    /// Terms sorted by total degree, then by monomial.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, u64)> {
        let mut t: Vec<_> = self.terms().collect();
        t.sort_by(|(a, _), (b, _)| a.degree().cmp(&b.degree()).then_with(|| b.cmp(a)));
        t
    }
}

impl fmt::Display for GenPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.sorted_terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in terms.into_iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            match (c, m.degree()) {
                (c, 0) => write!(f, "{c}")?,
                (1, _) => write!(f, "{m}")?,
                (c, _) => write!(f, "{c}{m}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct TermRecord {
    exponents: BTreeMap<String, u32>,
    coeff: u64,
}

impl Serialize for GenPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let terms = self.sorted_terms();
        let mut seq = serializer.serialize_seq(Some(terms.len()))?;
        for (m, coeff) in terms {
            let exponents = m.powers().iter().map(|&(v, e)| (v.name(), e)).collect();
            seq.serialize_element(&TermRecord { exponents, coeff })?;
        }
        seq.end()
    }
}

fn poly_budget(n: usize) -> Result<(), GenFuncError> {
    if n > MAX_POLY_N {
        Err(EnumerateError::BudgetExceeded { n, max: MAX_POLY_N }.into())
    } else {
        Ok(())
    }
}

/// `I_n(q; c)`, summed over every forest on `n` vertices.
pub fn poly_i(n: usize) -> Result<GenPoly, GenFuncError> {
    poly_budget(n)?;
    let mut poly = GenPoly::zero();
    for f in all_forests(n)? {
        let inv = inversion_counts(&f);
        let tinv = type_vector(&inv[1..], n);
        let weighted: usize = tinv.iter().enumerate().map(|(i, &k)| i * k).sum();
        let total: usize = inv.iter().sum();
        if weighted != total {
            return Err(GenFuncError::InconsistentStatistics(format!(
                "forest {:?}: sum of i * tinv[i] = {weighted}, inv = {total}",
                f.parents()
            )));
        }
        let m = Monomial::from_type_vector(&tinv).mul(&Monomial::new([(Var::C, tree_count(&f) as u32)]));
        poly.add_term(m, 1)?;
    }
    Ok(poly)
}

/// `J_n(q; c)`, summed over every parking function of length `n`.
pub fn poly_j(n: usize) -> Result<GenPoly, GenFuncError> {
    poly_budget(n)?;
    let mut poly = GenPoly::zero();
    for p in all_parking_functions(n)? {
        let r = jump_stats(&p);
        if r.tjump[n] != 0 && n > 0 {
            return Err(GenFuncError::InconsistentStatistics(format!(
                "parking function {:?} has a car jumping {n} spaces",
                p.as_slice()
            )));
        }
        let m = Monomial::from_type_vector(&r.tjump).mul(&Monomial::new([(Var::C, r.critic as u32)]));
        poly.add_term(m, 1)?;
    }
    Ok(poly)
}

/// `q_0 -> u`, `q_i -> q^i`: turns `I_n` / `J_n` into the trivariate
/// `(q, u, c)` polynomial of inv/lead/tree or jump/lucky/critic.
pub fn specialize(poly: &GenPoly) -> GenPoly {
    let mut out = GenPoly::zero();
    for (m, c) in poly.terms() {
        let image = Monomial::new(m.powers().iter().map(|&(v, e)| match v {
            Var::Indexed(0) => (Var::U, e),
            Var::Indexed(i) => (Var::Q, e * i as u32),
            other => (other, e),
        }));
        out.add_term(image, c).expect("specialization regroups existing coefficients");
    }
    out
}

/// Linear form `a + b*u + k*c*u` used by the product formulas.
fn linear(constant: u64, u: u64, cu: u64) -> GenPoly {
    let mut p = GenPoly::zero();
    p.add_term(Monomial::one(), constant).unwrap();
    p.add_term(Monomial::var(Var::U), u).unwrap();
    p.add_term(Monomial::new([(Var::C, 1), (Var::U, 1)]), cu).unwrap();
    p
}

/// `u * prod_{i=1}^{n-1} (i + (n - i + 1) u)`.
pub fn lucky_product(n: usize) -> Result<GenPoly, GenFuncError> {
    if n == 0 {
        return Err(GenFuncError::EmptyProduct);
    }
    (1..n).try_fold(GenPoly::var(Var::U), |acc, i| {
        acc.mul(&linear(i as u64, (n - i + 1) as u64, 0))
    })
}

/// `c u * prod_{i=1}^{n-1} (i + (n - i) u + c u)`.
pub fn critic_lucky_product(n: usize) -> Result<GenPoly, GenFuncError> {
    if n == 0 {
        return Err(GenFuncError::EmptyProduct);
    }
    let start = GenPoly::monomial(Monomial::new([(Var::C, 1), (Var::U, 1)]), 1);
    (1..n).try_fold(start, |acc, i| acc.mul(&linear(i as u64, (n - i) as u64, 1)))
}

/// `P_n(a, b, c) = c * prod_{i=1}^{n-1} (i a + (n - i) b + c)` for polynomial
/// arguments.
pub fn forest_product(n: usize, a: &GenPoly, b: &GenPoly, c: &GenPoly) -> Result<GenPoly, GenFuncError> {
    if n == 0 {
        return Err(GenFuncError::EmptyProduct);
    }
    (1..n).try_fold(c.clone(), |acc, i| {
        let factor = a
            .scale(i as u64)?
            .add(&b.scale((n - i) as u64)?)?
            .add(c)?;
        acc.mul(&factor)
    })
}

/// `sum_P u^lucky(P)` by enumeration.
pub fn lucky_enumerator(n: usize) -> Result<GenPoly, GenFuncError> {
    let mut poly = GenPoly::zero();
    for p in all_parking_functions(n)? {
        poly.add_term(Monomial::new([(Var::U, jump_stats(&p).lucky as u32)]), 1)?;
    }
    Ok(poly)
}

/// `sum_P u^lucky(P) c^critic(P)` by enumeration.
pub fn lucky_critic_enumerator(n: usize) -> Result<GenPoly, GenFuncError> {
    let mut poly = GenPoly::zero();
    for p in all_parking_functions(n)? {
        let r = jump_stats(&p);
        poly.add_term(Monomial::new([(Var::U, r.lucky as u32), (Var::C, r.critic as u32)]), 1)?;
    }
    Ok(poly)
}

/// `sum_F u^lead(F) c^tree(F)` by enumeration.
pub fn lead_tree_enumerator(n: usize) -> Result<GenPoly, GenFuncError> {
    let mut poly = GenPoly::zero();
    for f in all_forests(n)? {
        let lead = inversion_counts(&f)[1..].iter().filter(|&&x| x == 0).count();
        poly.add_term(Monomial::new([(Var::U, lead as u32), (Var::C, tree_count(&f) as u32)]), 1)?;
    }
    Ok(poly)
}
