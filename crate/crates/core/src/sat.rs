//! CNF model, double satisfaction, 5-Double-Sat instances and the reduction
//! from 3-SAT to 5-Double-Sat.
//!
//! A clause is *double-satisfied* when some positive literal is true and some
//! negative literal is true (its variable is false).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A variable (1-based) with a polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub var: u32,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: u32) -> Self {
        Literal {
            var,
            positive: true,
        }
    }

    pub fn neg(var: u32) -> Self {
        Literal {
            var,
            positive: false,
        }
    }

    /// From a signed DIMACS integer; `0` is not a literal.
    pub fn from_dimacs(x: i64) -> Result<Self> {
        if x == 0 {
            return Err(Error::InvalidInput("0 is not a literal".into()));
        }
        let var = u32::try_from(x.unsigned_abs())
            .map_err(|_| Error::InvalidInput(format!("variable {x} too large")))?;
        Ok(Literal {
            var,
            positive: x > 0,
        })
    }

    pub fn to_dimacs(self) -> i64 {
        if self.positive {
            self.var as i64
        } else {
            -(self.var as i64)
        }
    }

    pub fn negated(self) -> Self {
        Literal {
            var: self.var,
            positive: !self.positive,
        }
    }

    /// Truth value under `a`.
    pub fn eval(self, a: &Assignment) -> Result<bool> {
        a.get(self.var)
            .map(|v| v == self.positive)
            .ok_or_else(|| Error::InvalidInput(format!("variable x{} is unassigned", self.var)))
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "x{}", self.var)
        } else {
            write!(f, "¬x{}", self.var)
        }
    }
}

pub type Clause = Vec<Literal>;

/// Clauses over variables `1..=num_vars`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<Clause>,
}

impl CnfFormula {
    /// Rejects literals outside `1..=num_vars`.
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Result<Self> {
        for (i, c) in clauses.iter().enumerate() {
            if let Some(l) = c.iter().find(|l| l.var == 0 || l.var as usize > num_vars) {
                return Err(Error::InvalidInput(format!(
                    "clause {} uses variable {} outside 1..={num_vars}",
                    i + 1,
                    l.var
                )));
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn from_dimacs(num_vars: usize, clauses: &[&[i64]]) -> Result<Self> {
        let clauses = clauses
            .iter()
            .map(|c| c.iter().map(|&x| Literal::from_dimacs(x)).collect())
            .collect::<Result<Vec<Clause>>>()?;
        CnfFormula::new(num_vars, clauses)
    }

    /// Index of the first clause mentioning some variable twice.
    pub fn first_repeated_variable(&self) -> Option<(usize, u32)> {
        self.clauses
            .iter()
            .enumerate()
            .find_map(|(i, c)| repeated_variable(c).map(|v| (i, v)))
    }

    pub fn is_satisfied_by(&self, a: &Assignment) -> Result<bool> {
        self.check_assignment(a)?;
        Ok(self
            .clauses
            .iter()
            .all(|c| clause_satisfied(c, a).expect("checked")))
    }

    pub fn is_double_satisfied_by(&self, a: &Assignment) -> Result<bool> {
        self.check_assignment(a)?;
        Ok(self
            .clauses
            .iter()
            .all(|c| clause_double_satisfied(c, a).expect("checked")))
    }

    fn check_assignment(&self, a: &Assignment) -> Result<()> {
        if a.len() < self.num_vars {
            return Err(Error::InvalidInput(format!(
                "assignment covers {} variables, formula has {}",
                a.len(),
                self.num_vars
            )));
        }
        Ok(())
    }

    /// Every literal negated.
    pub fn flipped(&self) -> CnfFormula {
        CnfFormula {
            num_vars: self.num_vars,
            clauses: self
                .clauses
                .iter()
                .map(|c| c.iter().map(|l| l.negated()).collect())
                .collect(),
        }
    }
}

fn repeated_variable(c: &[Literal]) -> Option<u32> {
    c.iter()
        .enumerate()
        .find(|(i, l)| c[i + 1..].iter().any(|m| m.var == l.var))
        .map(|(_, l)| l.var)
}

/// Total truth assignment; `values[i]` is the value of variable `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment { values }
    }

    pub fn all(num_vars: usize, value: bool) -> Self {
        Assignment::new(vec![value; num_vars])
    }

    /// Value of the 1-based variable `var`.
    pub fn get(&self, var: u32) -> Option<bool> {
        (var as usize)
            .checked_sub(1)
            .and_then(|i| self.values.get(i).copied())
    }

    pub fn set(&mut self, var: u32, value: bool) {
        self.values[var as usize - 1] = value;
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn negated(&self) -> Assignment {
        Assignment::new(self.values.iter().map(|v| !v).collect())
    }
}

/// Values for some variables only.
pub type PartialAssignment = BTreeMap<u32, bool>;

pub fn clause_satisfied(c: &[Literal], a: &Assignment) -> Result<bool> {
    for l in c {
        if l.eval(a)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Some positive literal is true and some negative literal is true.
pub fn clause_double_satisfied(c: &[Literal], a: &Assignment) -> Result<bool> {
    let mut pos = false;
    let mut neg = false;
    for l in c {
        if l.eval(a)? {
            if l.positive {
                pos = true;
            } else {
                neg = true;
            }
        }
    }
    Ok(pos && neg)
}

// ---------------------------------------------------------------------------
// 5-Double-Sat instances

/// Why a formula is not a well-formed 5-Double-Sat instance. Clause and
/// variable numbers are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DsatViolation {
    Arity { clause: usize, len: usize },
    RepeatedVariable { clause: usize, var: u32 },
    NoPositiveLiteral { clause: usize },
    NoNegativeLiteral { clause: usize },
    MissingPolarity { var: u32, positive: bool },
}

impl fmt::Display for DsatViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DsatViolation::Arity { clause, len } => {
                write!(f, "clause {clause} has {len} literals, expected 5")
            }
            DsatViolation::RepeatedVariable { clause, var } => {
                write!(f, "clause {clause} mentions x{var} more than once")
            }
            DsatViolation::NoPositiveLiteral { clause } => {
                write!(f, "clause {clause} has no positive literal")
            }
            DsatViolation::NoNegativeLiteral { clause } => {
                write!(f, "clause {clause} has no negative literal")
            }
            DsatViolation::MissingPolarity { var, positive } => write!(
                f,
                "x{var} never occurs as a {} literal",
                if *positive { "positive" } else { "negative" }
            ),
        }
    }
}

/// A formula that passed [`validate_5dsat`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiveDSatInstance(CnfFormula);

impl FiveDSatInstance {
    pub fn formula(&self) -> &CnfFormula {
        &self.0
    }

    pub fn num_vars(&self) -> usize {
        self.0.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.0.clauses.len()
    }

    pub fn into_formula(self) -> CnfFormula {
        self.0
    }
}

/// Clause-level checks only (arity, repeats, mixed polarity).
pub fn check_5dsat_clauses(f: &CnfFormula) -> std::result::Result<(), DsatViolation> {
    for (i, c) in f.clauses.iter().enumerate() {
        let clause = i + 1;
        if c.len() != 5 {
            return Err(DsatViolation::Arity {
                clause,
                len: c.len(),
            });
        }
        if let Some(var) = repeated_variable(c) {
            return Err(DsatViolation::RepeatedVariable { clause, var });
        }
        if !c.iter().any(|l| l.positive) {
            return Err(DsatViolation::NoPositiveLiteral { clause });
        }
        if c.iter().all(|l| l.positive) {
            return Err(DsatViolation::NoNegativeLiteral { clause });
        }
    }
    Ok(())
}

/// Checks every 5-Double-Sat instance assumption; the first offending clause
/// or variable is reported.
pub fn validate_5dsat(f: &CnfFormula) -> std::result::Result<FiveDSatInstance, DsatViolation> {
    check_5dsat_clauses(f)?;
    let (pos, neg) = polarity_table(f);
    for var in 1..=f.num_vars as u32 {
        for (seen, positive) in [(&pos, true), (&neg, false)] {
            if !seen[var as usize] {
                return Err(DsatViolation::MissingPolarity { var, positive });
            }
        }
    }
    Ok(FiveDSatInstance(f.clone()))
}

fn polarity_table(f: &CnfFormula) -> (Vec<bool>, Vec<bool>) {
    let mut pos = vec![false; f.num_vars + 1];
    let mut neg = vec![false; f.num_vars + 1];
    for l in f.clauses.iter().flatten() {
        if l.positive {
            pos[l.var as usize] = true;
        } else {
            neg[l.var as usize] = true;
        }
    }
    (pos, neg)
}

/// Fixes every variable that occurs in one polarity only: only-positive
/// variables become true, only-negative ones false (variables that never
/// occur are fixed to false). Clauses are returned unchanged so arity is
/// preserved; the forced values are what callers apply.
pub fn normalize_single_polarity(f: &CnfFormula) -> (CnfFormula, PartialAssignment) {
    let (pos, neg) = polarity_table(f);
    let forced = (1..=f.num_vars as u32)
        .filter_map(|v| match (pos[v as usize], neg[v as usize]) {
            (true, true) => None,
            (true, false) => Some((v, true)),
            (false, _) => Some((v, false)),
        })
        .collect();
    (f.clone(), forced)
}

/// A partial assignment of at most two variables that already
/// double-satisfies every clause on its own, if one exists.
///
/// Such a witness needs one variable that is positive in every clause, so on
/// a validated instance (every variable in both polarities) with at least
/// one clause the answer is always `None`.
pub fn has_two_variable_double_cover(f: &CnfFormula) -> Option<PartialAssignment> {
    let works = |fixed: &PartialAssignment| {
        f.clauses.iter().all(|c| {
            let hit = |positive: bool| {
                c.iter().any(|l| {
                    l.positive == positive && fixed.get(&l.var).is_some_and(|&v| v == positive)
                })
            };
            hit(true) && hit(false)
        })
    };
    let mut candidates: Vec<PartialAssignment> = vec![PartialAssignment::new()];
    let vars = 1..=f.num_vars as u32;
    for a in vars.clone() {
        for va in [true, false] {
            candidates.push(PartialAssignment::from([(a, va)]));
            for b in vars.clone().filter(|&b| b > a) {
                for vb in [true, false] {
                    candidates.push(PartialAssignment::from([(a, va), (b, vb)]));
                }
            }
        }
    }
    candidates.into_iter().find(works)
}

// ---------------------------------------------------------------------------
// 3-SAT -> 5-Double-Sat

/// Where a variable of the reduced formula comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VarOrigin {
    /// Variable of the 3-CNF, same number.
    Source { var: u32 },
    /// Auxiliary `which` (1 or 2) of 0-based source clause `clause`.
    Aux { clause: usize, which: u8 },
}

/// Output of [`reduce_3sat_to_5dsat`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DsatReduction {
    pub formula: CnfFormula,
    pub source_vars: usize,
    /// `origin[v - 1]` describes variable `v` of `formula`.
    pub origin: Vec<VarOrigin>,
}

impl DsatReduction {
    /// Variable number of auxiliary `which` for source clause `clause`.
    pub fn aux_var(&self, clause: usize, which: u8) -> u32 {
        (self.source_vars + 2 * clause + which as usize) as u32
    }

    /// The reduced formula as a validated instance; fails when some source
    /// variable occurs in one polarity only.
    pub fn instance(&self) -> std::result::Result<FiveDSatInstance, DsatViolation> {
        validate_5dsat(&self.formula)
    }
}

/// Each 3-clause `l1 ∨ l2 ∨ l3` becomes `l1 ∨ l2 ∨ l3 ∨ a ∨ ¬b` and
/// `l1 ∨ l2 ∨ l3 ∨ ¬a ∨ b` with fresh `a, b`. Source variables keep their
/// numbers; clause `i` gets auxiliaries `q + 2i + 1` and `q + 2i + 2`.
pub fn reduce_3sat_to_5dsat(f3: &CnfFormula) -> Result<DsatReduction> {
    for (i, c) in f3.clauses.iter().enumerate() {
        if c.len() != 3 {
            return Err(Error::InvalidInput(format!(
                "clause {} has {} literals, expected 3",
                i + 1,
                c.len()
            )));
        }
        if let Some(v) = repeated_variable(c) {
            return Err(Error::InvalidInput(format!(
                "clause {} mentions x{v} more than once",
                i + 1
            )));
        }
    }
    let q = f3.num_vars;
    let mut origin: Vec<VarOrigin> = (1..=q as u32)
        .map(|var| VarOrigin::Source { var })
        .collect();
    let mut clauses = Vec::with_capacity(2 * f3.clauses.len());
    for (i, c) in f3.clauses.iter().enumerate() {
        let a = (q + 2 * i + 1) as u32;
        let b = a + 1;
        origin.push(VarOrigin::Aux {
            clause: i,
            which: 1,
        });
        origin.push(VarOrigin::Aux {
            clause: i,
            which: 2,
        });
        let mut first = c.clone();
        first.extend([Literal::pos(a), Literal::neg(b)]);
        let mut second = c.clone();
        second.extend([Literal::neg(a), Literal::pos(b)]);
        clauses.push(first);
        clauses.push(second);
    }
    let formula = CnfFormula::new(q + 2 * f3.clauses.len(), clauses)?;
    Ok(DsatReduction {
        formula,
        source_vars: q,
        origin,
    })
}

/// Extends a satisfying assignment of the 3-CNF: per clause, take the first
/// true literal; both auxiliaries become false if it is positive, true if it
/// is negative.
pub fn lift_assignment(f3: &CnfFormula, a: &Assignment, red: &DsatReduction) -> Result<Assignment> {
    if f3.num_vars != red.source_vars || 2 * f3.clauses.len() != red.formula.clauses.len() {
        return Err(Error::Provenance(
            "reduction was not built from this formula".into(),
        ));
    }
    let mut out = Assignment::all(red.formula.num_vars, false);
    for var in 1..=f3.num_vars as u32 {
        let value = a
            .get(var)
            .ok_or_else(|| Error::InvalidInput(format!("x{var} is unassigned")))?;
        out.set(var, value);
    }
    for (i, c) in f3.clauses.iter().enumerate() {
        let mut witness = None;
        for l in c {
            if l.eval(a)? {
                witness = Some(*l);
                break;
            }
        }
        let l = witness.ok_or_else(|| {
            Error::Precondition(format!("assignment does not satisfy clause {}", i + 1))
        })?;
        let aux_value = !l.positive;
        out.set(red.aux_var(i, 1), aux_value);
        out.set(red.aux_var(i, 2), aux_value);
    }
    Ok(out)
}

/// Drops the auxiliaries of a double-satisfying assignment.
pub fn restrict_assignment(a5: &Assignment, red: &DsatReduction) -> Result<Assignment> {
    if !red.formula.is_double_satisfied_by(a5)? {
        return Err(Error::Precondition(
            "assignment does not double-satisfy the reduced formula".into(),
        ));
    }
    Ok(Assignment::new(a5.values()[..red.source_vars].to_vec()))
}
