//! Truncated Čech complex `C^0 -> C^1` for the cover `{U_0, U_∞}`.
//!
//! At window `W`, `C^0` holds pairs `(f, g)` with `f` of `z`-degree at most
//! `W` and `g` of `w`-degree at most `W`; the differential is
//! `(f, g) ↦ A·f - g(1/z)` in the chart-∞ frame.
//!
//! * `H^0` is the kernel, taken without truncating the image, so it is an
//!   exact subspace of the true `H^0` and equal to it once `W` bounds the
//!   section degrees.
//! * `H^1` is the cokernel on overlap exponents `[-W, W - S]` with `S` the
//!   largest absolute exponent of `A`. Every `f` whose image reaches that
//!   window has degree at most `W`, and everything above `W - S` lies in the
//!   image once `W` is large, so the truncated cokernel is exact from some
//!   window on.
//!
//! Overlap monomial `(i, d)` has weight `λ∞[i] - d·a`.

use std::collections::{BTreeMap, HashMap};

use crate::algebra::{rank, RatMatrix, Rational};
use crate::bundle::{EquivariantBundle, Weight};
use crate::equivariant::Character;
use crate::error::{Error, Result};

/// Environment variable overriding the largest window tried.
pub const MAX_WINDOW_ENV: &str = "EQUISPLIT_MAX_WINDOW";

/// Growth factor of the hard window cap over the initial window.
const CAP_FACTOR: usize = 64;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CechConfig {
    /// Largest window tried; default is 64 times the initial window.
    pub max_window: Option<usize>,
}

impl CechConfig {
    pub fn from_env() -> Self {
        CechConfig {
            max_window: std::env::var(MAX_WINDOW_ENV)
                .ok()
                .and_then(|v| v.trim().parse().ok()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CechCohomology {
    pub h0: Character,
    pub h1: Character,
    /// Window at which the result stabilized.
    pub window: usize,
}

#[derive(Default)]
struct Class {
    /// columns: sparse lists of (row key, coefficient)
    columns: Vec<Vec<((usize, i64), Rational)>>,
    /// overlap monomials inside the `H^1` window
    window_rows: Vec<(usize, i64)>,
}

/// Characters of the truncated complex at window `w`.
pub fn cech_at_window(bundle: &EquivariantBundle, w: usize) -> Result<(Character, Character)> {
    let a = bundle.transition();
    let m = bundle.rank();
    let torus = bundle.torus();
    let s = a.max_abs_exponent();
    let w = w as i64;

    let mut classes: BTreeMap<Weight, Class> = BTreeMap::new();
    // f[k] z^d
    for k in 0..m {
        for d in 0..=w {
            let mut col = Vec::new();
            for i in 0..m {
                for (t, c) in a[(i, k)].terms() {
                    col.push(((i, t + d), c.clone()));
                }
            }
            let wt = &bundle.lambda0()[k] - &torus.exponent_weight(d);
            classes.entry(wt).or_default().columns.push(col);
        }
    }
    // -g[i] w^j, landing on z^{-j}
    for i in 0..m {
        for j in 0..=w {
            let wt = &bundle.lambda_inf()[i] + &torus.exponent_weight(j);
            let col = vec![((i, -j), -Rational::from_integer(1.into()))];
            classes.entry(wt).or_default().columns.push(col);
        }
    }
    for i in 0..m {
        for d in -w..=(w - s) {
            let wt = &bundle.lambda_inf()[i] - &torus.exponent_weight(d);
            classes.entry(wt).or_default().window_rows.push((i, d));
        }
    }

    let mut h0 = Character::new();
    let mut h1 = Character::new();
    for (wt, class) in classes {
        let ncols = class.columns.len();
        if ncols > 0 {
            let full = assemble(&class.columns, None);
            h0.add_weight(wt.clone(), (ncols - rank(&full)) as i64);
        }
        if !class.window_rows.is_empty() {
            let restricted = assemble(&class.columns, Some(&class.window_rows));
            let r = if ncols > 0 { rank(&restricted) } else { 0 };
            h1.add_weight(wt, (class.window_rows.len() - r) as i64);
        }
    }
    Ok((h0, h1))
}

fn assemble(columns: &[Vec<((usize, i64), Rational)>], rows: Option<&[(usize, i64)]>) -> RatMatrix {
    let mut row_of: HashMap<(usize, i64), usize> = HashMap::new();
    if let Some(rows) = rows {
        for (k, key) in rows.iter().enumerate() {
            row_of.insert(*key, k);
        }
    } else {
        for col in columns {
            for (key, _) in col {
                let next = row_of.len();
                row_of.entry(*key).or_insert(next);
            }
        }
    }
    let mut mat = RatMatrix::zeros(row_of.len(), columns.len());
    for (c, col) in columns.iter().enumerate() {
        for (key, v) in col {
            if let Some(&r) = row_of.get(key) {
                mat.rows[r][c] += v;
            }
        }
    }
    mat
}

/// Doubles the window from `S + m` until two consecutive windows give the
/// same characters and `h^0 - h^1 = deg + rank` holds.
pub fn cech_cohomology(bundle: &EquivariantBundle, cfg: &CechConfig) -> Result<CechCohomology> {
    bundle.ensure_valid()?;
    let euler = bundle.degree()? + bundle.rank() as i64;
    let initial = bundle.transition().max_abs_exponent() as usize + bundle.rank();
    let cap = cfg.max_window.unwrap_or(CAP_FACTOR * initial);
    let mut window = initial;
    let mut prev = cech_at_window(bundle, window)?;
    loop {
        let next_window = window * 2;
        if next_window > cap {
            return Err(Error::NotStabilized(window));
        }
        let cur = cech_at_window(bundle, next_window)?;
        if cur == prev && cur.0.dim() - cur.1.dim() == euler {
            return Ok(CechCohomology {
                h0: cur.0,
                h1: cur.1,
                window: next_window,
            });
        }
        prev = cur;
        window = next_window;
    }
}

pub fn h1_character(bundle: &EquivariantBundle) -> Result<Character> {
    h1_character_with(bundle, &CechConfig::from_env())
}

pub fn h1_character_with(bundle: &EquivariantBundle, cfg: &CechConfig) -> Result<Character> {
    Ok(cech_cohomology(bundle, cfg)?.h1)
}
