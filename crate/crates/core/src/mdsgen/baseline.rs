use super::MdsVariables;
use crate::error::{Error, Result};
use crate::gf::{FieldMatrix, PrimeField};
use crate::linrv::{LinearRV, SeedSpace};

/// Per-level uncorrelated construction: level `n` has its own seed of `n`
/// symbols and user `k` holds one symbol `r_k . S^n`. Rate `K`.
///
/// `rows[n-1][k-1]` is `r_k` at level `n`.
fn per_level_variables(field: PrimeField, rows: &[Vec<Vec<u64>>]) -> Result<MdsVariables> {
    let k = rows[0].len();
    let space = SeedSpace::new(field, (1..=rows.len()).map(|n| (format!("S^{n}"), n)))?;
    let mut vars: Vec<Vec<LinearRV>> = vec![Vec::new(); k];
    for (i, level) in rows.iter().enumerate() {
        let n = i + 1;
        for (u, r) in level.iter().enumerate() {
            let m = FieldMatrix::from_rows(field, &[r])?;
            let v = LinearRV::from_segments(format!("Z_{}^{n}", u + 1), &space, 1, &[(&format!("S^{n}"), &m)])?;
            vars[u].push(v);
        }
    }
    let sources = vars
        .iter()
        .enumerate()
        .map(|(u, vs)| LinearRV::stack(format!("Z_{}", u + 1), &vs.iter().collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;
    MdsVariables::new(1, sources, vars)
}

/// Moment vector `(1, t, .., t^{n-1})`, or `e_n` for the point at infinity.
fn moment(field: PrimeField, n: usize, t: Option<u64>) -> Vec<u64> {
    match t {
        Some(t) => (0..n as u64).map(|e| field.pow(t, e)).collect(),
        None => {
            let mut v = vec![0; n];
            v[n - 1] = 1;
            v
        }
    }
}

/// Reed-Solomon style baseline for `K` users over GF(q), `q > K`.
///
/// Users sit at distinct points of the projective line (`0`, `inf`, `2`, `3`,
/// ..). At level `n` the rows are normalized so that users `1..=n` are
/// systematic, which makes user `k > n` at level 2 hold `(1, k-1)`.
pub fn vandermonde_baseline(k: usize, q: u64) -> Result<MdsVariables> {
    if k == 0 {
        return Err(Error::InvalidParams("K must be at least 1".into()));
    }
    let field = PrimeField::new(q)?;
    if q as usize <= k {
        return Err(Error::FieldTooSmall { q, bound: k as u128 });
    }
    let point = |u: usize| match u {
        1 => Some(0),
        2 => None,
        _ => Some(u as u64 - 1),
    };
    let mut rows = Vec::with_capacity(k);
    for n in 1..=k {
        let basis_rows: Vec<Vec<u64>> = (1..=n).map(|u| moment(field, n, point(u))).collect();
        let basis_t = FieldMatrix::from_rows(field, &basis_rows)?.transpose();
        let level = (1..=k)
            .map(|u| {
                let c = FieldMatrix::column(field, &moment(field, n, point(u)));
                Ok(basis_t.solve(&c)?.transpose().row(0).to_vec())
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(level);
    }
    per_level_variables(field, &rows)
}

/// Five users over GF(5) with fixed small-integer coefficient rows.
pub fn table1_fixture() -> MdsVariables {
    let field = PrimeField::new(5).expect("5 is prime");
    let e = |n: usize, i: usize| {
        let mut v = vec![0; n];
        v[i] = 1;
        v
    };
    let rows = vec![
        vec![vec![1]; 5],
        vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 2], vec![1, 3]],
        vec![e(3, 0), e(3, 1), e(3, 2), vec![1, 1, 1], vec![1, 2, 3]],
        vec![e(4, 0), e(4, 1), e(4, 2), e(4, 3), vec![1, 1, 1, 1]],
        (0..5).map(|i| e(5, i)).collect(),
    ];
    per_level_variables(field, &rows).expect("fixture is well formed")
}
