//! Cartan's test for a linear Pfaffian system `dπˡ = Σ Aˡⱼc ψ_c∧πʲ + (torsion)`:
//! the tableau, the degree of indeterminacy `r⁽¹⁾`, and the reduced
//! characters found by maximizing ranks of stacked `M(X)` matrices.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exterior::{ExteriorError, FrameSpec};
use crate::gstructure::symbolic;
use crate::{QMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CartanError {
    #[error("malformed structure equations: {0}")]
    Shape(String),
    #[error("probe has {got} entries, expected {expected}")]
    ProbeLength { expected: usize, got: usize },
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
}

/// `pivot = Σ coefficient·free`, one row of the solved absorption system.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub pivot: String,
    pub combination: Vec<(String, Rational)>,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = ", self.pivot)?;
        if self.combination.is_empty() {
            return write!(f, "0");
        }
        for (k, (name, c)) in self.combination.iter().enumerate() {
            let neg = c < &Rational::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !a.is_one() {
                write!(f, "{a}*")?;
            }
            write!(f, "{name}")?;
        }
        Ok(())
    }
}

/// The tableau of a linear Pfaffian system. `a[l][j][c]` is the coefficient
/// of `ψ_c∧πʲ` in `dπˡ`.
#[derive(Debug, Clone)]
pub struct Tableau {
    pub rows: Vec<String>,
    pub directions: Vec<String>,
    pub columns: Vec<String>,
    pub a: Vec<Vec<Vec<Rational>>>,
    /// Substituting `ψ_c = Σₖ z(c,k) πᵏ`, the `z` that leave no `ψ` terms.
    pub unknowns: Vec<String>,
    pub constraints: Vec<Constraint>,
    pub free_parameters: Vec<String>,
    /// Hand-picked probes tried before the random ones.
    pub witnesses: Vec<Vec<Rational>>,
}

fn z_name(column: &str, direction: &str) -> String {
    format!("z_{column}_{direction}")
}

impl Tableau {
    pub fn new(
        rows: Vec<String>,
        directions: Vec<String>,
        columns: Vec<String>,
        a: Vec<Vec<Vec<Rational>>>,
    ) -> Result<Self, CartanError> {
        let (nr, n, nc) = (rows.len(), directions.len(), columns.len());
        let shaped = a.len() == nr && a.iter().all(|m| m.len() == n && m.iter().all(|v| v.len() == nc));
        if !shaped {
            return Err(CartanError::Shape(format!("coefficients are not {nr}x{n}x{nc}")));
        }
        // unknowns in reverse (column, direction) order: elimination then
        // prefers the later coefficients as pivots
        let mut index = Vec::new();
        for c in (0..nc).rev() {
            for k in (0..n).rev() {
                index.push((c, k));
            }
        }
        let unknowns: Vec<String> = index.iter().map(|&(c, k)| z_name(&columns[c], &directions[k])).collect();
        // coefficient of πᵃ∧πᵇ (a < b) in Σ A[l][j][c] z(c,k) πᵏ∧πʲ
        let mut eqs = Vec::new();
        for m in &a {
            for p in 0..n {
                for q in p + 1..n {
                    let row: Vec<Rational> = index
                        .iter()
                        .map(|&(c, k)| {
                            let mut v = Rational::zero();
                            if k == p {
                                v += &m[q][c];
                            }
                            if k == q {
                                v -= &m[p][c];
                            }
                            v
                        })
                        .collect();
                    if row.iter().any(|x| !x.is_zero()) {
                        eqs.push(row);
                    }
                }
            }
        }
        let (constraints, free_parameters) = if eqs.is_empty() {
            (Vec::new(), unknowns.clone())
        } else {
            let (r, pivots) = QMatrix::from_rows(eqs).rref();
            let free: Vec<usize> = (0..unknowns.len()).filter(|c| !pivots.contains(c)).collect();
            let mut constraints: Vec<Constraint> = pivots
                .iter()
                .enumerate()
                .map(|(i, &p)| Constraint {
                    pivot: unknowns[p].clone(),
                    combination: free
                        .iter()
                        .filter(|&&f| !r[(i, f)].is_zero())
                        .map(|&f| (unknowns[f].clone(), -r[(i, f)].clone()))
                        .collect(),
                })
                .collect();
            constraints.sort_by(|x, y| x.pivot.cmp(&y.pivot));
            (constraints, free.iter().map(|&f| unknowns[f].clone()).collect())
        };
        Ok(Tableau {
            rows,
            directions,
            columns,
            a,
            unknowns,
            constraints,
            free_parameters,
            witnesses: Vec::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.directions.len()
    }

    /// Degree of indeterminacy: the number of free `z`.
    pub fn r1(&self) -> usize {
        self.free_parameters.len()
    }
}

/// Reads the tableau off declared differentials: `rows` are the forms `πˡ`,
/// `directions` the `πʲ` paired with the connection forms `columns`.
/// Every coefficient of a `ψ_c∧πʲ` word must be a real constant.
pub fn build_tableau(
    frame: &Arc<FrameSpec>,
    rows: &[&str],
    directions: &[&str],
    columns: &[&str],
) -> Result<Tableau, CartanError> {
    let mut a = Vec::new();
    for l in rows {
        let d = frame.basis(l)?.exterior_derivative()?;
        let mut m = Vec::new();
        for j in directions {
            let mut v = Vec::new();
            for c in columns {
                let coef = d.coefficient(&[c, j])?;
                let val = coef
                    .constant_value()
                    .filter(|g| g.is_real())
                    .ok_or_else(|| CartanError::Shape(format!("coefficient of {c}^{j} in d{l} is {coef}")))?;
                v.push(val.re);
            }
            m.push(v);
        }
        a.push(m);
    }
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect();
    Tableau::new(s(rows), s(directions), s(columns), a)
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// The reduced elliptic structure with connection `(ψ₀⁰, ψ₁¹, ψ₂¹, ψ₁²)`,
/// with the probes `X = (−1, −1, 0)`, `Y = (0, 0, −1)` as witnesses.
pub fn elliptic_reduced() -> Tableau {
    let frame = symbolic::b1_frame();
    let mut t = build_tableau(
        &frame,
        &["pi0", "pi1", "pi2"],
        &["pi0", "pi1", "pi2"],
        &["psi00", "psi11", "psi21", "psi12"],
    )
    .expect("the reduced structure has a constant tableau");
    t.witnesses = vec![vec![q(-1), q(-1), q(0)], vec![q(0), q(0), q(-1)]];
    t
}

/// `M(X)ˡ_c = Σⱼ Aˡⱼc xʲ`.
pub fn m_matrix(t: &Tableau, x: &[Rational]) -> Result<QMatrix, CartanError> {
    if x.len() != t.n() {
        return Err(CartanError::ProbeLength {
            expected: t.n(),
            got: x.len(),
        });
    }
    let mut m = QMatrix::zeros(t.rows.len(), t.columns.len());
    for (l, al) in t.a.iter().enumerate() {
        for (j, xj) in x.iter().enumerate() {
            for c in 0..t.columns.len() {
                m[(l, c)] += &al[j][c] * xj;
            }
        }
    }
    Ok(m)
}

/// Rank of `[M(X₁); …; M(Xₖ)]`.
pub fn stacked_rank(t: &Tableau, probes: &[Vec<Rational>]) -> Result<usize, CartanError> {
    let mut rows = Vec::new();
    for x in probes {
        rows.extend(m_matrix(t, x)?.to_rows());
    }
    if rows.is_empty() {
        return Ok(0);
    }
    Ok(QMatrix::from_rows(rows).rank())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharacterReport {
    pub s_prime: Vec<usize>,
    /// `s′₁ + … + s′ₖ` for each `k`.
    pub cumulative_ranks: Vec<usize>,
    pub r_indeterminacy: usize,
    pub cartan_sum: usize,
    pub involutive: bool,
    /// The probe tuple first achieving each cumulative rank, as strings.
    pub probe_witnesses: Vec<Vec<Vec<String>>>,
    pub free_parameters: Vec<String>,
    pub constraints: Vec<String>,
    pub random_probes: usize,
    pub seed: u64,
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n)
        .map(|_| {
            let num: i64 = rng.gen_range(-9..=9);
            let den: i64 = rng.gen_range(1..=4);
            Rational::new(num.into(), den.into())
        })
        .collect()
}

/// Reduced characters: `s′₁ + … + s′ₖ` is the maximal rank of `k` stacked
/// `M(X)`, over the tableau's witnesses followed by `probes` random tuples
/// of exact rationals per level drawn from a ChaCha8 stream seeded by `seed`.
pub fn reduced_characters(t: &Tableau, probes: usize, seed: u64) -> Result<CharacterReport, CartanError> {
    let n = t.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cumulative = Vec::with_capacity(n);
    let mut witnesses = Vec::with_capacity(n);
    for k in 1..=n {
        let mut candidates = Vec::new();
        if t.witnesses.len() >= k {
            candidates.push(t.witnesses[..k].to_vec());
        }
        for _ in 0..probes {
            candidates.push((0..k).map(|_| random_vector(&mut rng, n)).collect::<Vec<_>>());
        }
        let mut best: Option<(usize, Vec<Vec<Rational>>)> = None;
        for c in candidates {
            let r = stacked_rank(t, &c)?;
            if best.as_ref().map_or(true, |(b, _)| r > *b) {
                best = Some((r, c));
            }
        }
        let (r, w) = best.unwrap_or_default();
        cumulative.push(r);
        witnesses.push(w.iter().map(|x| x.iter().map(ToString::to_string).collect()).collect());
    }
    let s_prime: Vec<usize> = (0..n)
        .map(|k| cumulative[k] - if k == 0 { 0 } else { cumulative[k - 1] })
        .collect();
    let cartan_sum = s_prime.iter().enumerate().map(|(k, s)| (k + 1) * s).sum();
    let r = t.r1();
    Ok(CharacterReport {
        s_prime,
        cumulative_ranks: cumulative,
        r_indeterminacy: r,
        cartan_sum,
        involutive: cartan_sum == r,
        probe_witnesses: witnesses,
        free_parameters: t.free_parameters.clone(),
        constraints: t.constraints.iter().map(ToString::to_string).collect(),
        random_probes: probes,
        seed,
    })
}
