//! JSON serialization of conditions.
//!
//! Polynomials are term lists `[["coeff", [e1, e2, ...]], ...]` in the
//! canonical term order, so writing the same condition twice gives the same
//! bytes. Output is compact: expanded clauses run to thousands of terms.

use std::sync::Arc;

use eigconf::ec::{ab_table, Clause, Condition, ConditionForm, ECVector};
use eigconf::multipoly::Exponents;
use eigconf::rational::{fmt_rational, parse_rational};
use eigconf::{MultiPoly, VarTable};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub type TermList = Vec<(String, Vec<u16>)>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormTag {
    CharCoefficient,
    Expanded,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClauseFile {
    pub r: usize,
    pub target: usize,
    pub degree: usize,
    /// Coefficients of `x^0 .. x^degree`.
    pub coefficients: Vec<TermList>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign_patterns: Option<Vec<Vec<i8>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionFile {
    pub m: usize,
    pub n: usize,
    pub params: Vec<String>,
    pub target: Vec<usize>,
    pub form: FormTag,
    /// Variables the clause coefficients are written over.
    pub clause_variables: Vec<String>,
    /// Characteristic coefficients `a_1..a_m`, `b_1..b_n` over `params`.
    pub char_a: Vec<TermList>,
    pub char_b: Vec<TermList>,
    pub unsatisfiable: bool,
    pub unsatisfiable_reasons: Vec<String>,
    pub clauses: Vec<ClauseFile>,
}

fn terms_of(p: &MultiPoly) -> TermList {
    p.terms().map(|(e, c)| (fmt_rational(c), e.to_vec())).collect()
}

fn poly_of(table: &Arc<VarTable>, terms: &TermList) -> Result<MultiPoly, CliError> {
    let parsed = terms
        .iter()
        .map(|(c, e)| {
            let q = parse_rational(c).map_err(|_| CliError::Input(format!("bad coefficient {c:?}")))?;
            Ok((e.iter().copied().collect::<Exponents>(), q))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(MultiPoly::from_terms(table, parsed)?)
}

impl ConditionFile {
    pub fn from_condition(c: &Condition) -> Self {
        let clause_table = c.clauses.first().map(|cl| cl.coeffs[0].table().clone());
        let clause_variables = match c.form {
            ConditionForm::CharCoefficient => {
                clause_table.unwrap_or_else(|| ab_table(c.m, c.n)).names().to_vec()
            }
            ConditionForm::Expanded => c.params.names().to_vec(),
        };
        Self {
            m: c.m,
            n: c.n,
            params: c.params.names().to_vec(),
            target: c.target.0.clone(),
            form: match c.form {
                ConditionForm::CharCoefficient => FormTag::CharCoefficient,
                ConditionForm::Expanded => FormTag::Expanded,
            },
            clause_variables,
            char_a: c.char_a.iter().map(terms_of).collect(),
            char_b: c.char_b.iter().map(terms_of).collect(),
            unsatisfiable: !c.unsatisfiable.is_empty(),
            unsatisfiable_reasons: c.unsatisfiable.clone(),
            clauses: c
                .clauses
                .iter()
                .map(|cl| ClauseFile {
                    r: cl.r,
                    target: cl.target,
                    degree: cl.degree(),
                    coefficients: cl.coeffs.iter().map(terms_of).collect(),
                    sign_patterns: cl.sign_patterns.clone(),
                })
                .collect(),
        }
    }

    pub fn to_condition(&self) -> Result<Condition, CliError> {
        let bad = |what: String| CliError::Input(format!("inconsistent condition file: {what}"));
        let params = VarTable::single("params", self.params.clone())?;
        let (form, clause_table) = match self.form {
            FormTag::CharCoefficient => (ConditionForm::CharCoefficient, ab_table(self.m, self.n)),
            FormTag::Expanded => (ConditionForm::Expanded, params.clone()),
        };
        if clause_table.names() != self.clause_variables.as_slice() {
            return Err(bad(format!("clause variables {:?}", self.clause_variables)));
        }
        if self.target.len() != self.m || self.char_a.len() != self.m || self.char_b.len() != self.n {
            return Err(bad("lengths of target/char_a/char_b do not match m and n".into()));
        }
        if self.unsatisfiable == self.unsatisfiable_reasons.is_empty() {
            return Err(bad("unsatisfiable flag disagrees with its reasons".into()));
        }
        let clauses = self
            .clauses
            .iter()
            .map(|cl| {
                if cl.coefficients.len() != cl.degree + 1 {
                    return Err(bad(format!("clause r={} has degree {} but {} coefficients", cl.r, cl.degree, cl.coefficients.len())));
                }
                Ok(Clause {
                    r: cl.r,
                    target: cl.target,
                    coeffs: cl
                        .coefficients
                        .iter()
                        .map(|t| poly_of(&clause_table, t))
                        .collect::<Result<_, _>>()?,
                    sign_patterns: cl.sign_patterns.clone(),
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(Condition {
            m: self.m,
            n: self.n,
            target: ECVector(self.target.clone()),
            form,
            char_a: self.char_a.iter().map(|t| poly_of(&params, t)).collect::<Result<_, _>>()?,
            char_b: self.char_b.iter().map(|t| poly_of(&params, t)).collect::<Result<_, _>>()?,
            clauses,
            unsatisfiable: self.unsatisfiable_reasons.clone(),
            params,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn from_json(src: &str) -> Result<Self, CliError> {
        serde_json::from_str(src).map_err(|e| CliError::Input(format!("bad condition file: {e}")))
    }
}
