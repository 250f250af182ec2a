use rand::seq::SliceRandom;
use rayon::prelude::*;

use super::{security::JointSpace, validate_selection, KeyScheme};
use crate::error::{Error, Result};
use crate::linrv::{conditional_entropy, conditional_mutual_information, EntropyValue, LinearRV};
use crate::mdsverify::set_label;
use crate::rational::{harmonic, Rational};
use crate::report::{Check, VerifyReport};
use crate::rng::seeded;
use crate::subsets::permutations;

/// Enumeration limits for the converse checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConverseOptions {
    /// Selections up to this size use every ordering; larger ones sample.
    pub exhaustive_max_size: usize,
    /// Orderings (and partitions) sampled per selection beyond that size.
    pub sample_cap: usize,
    pub seed: u64,
}

impl Default for ConverseOptions {
    fn default() -> Self {
        Self {
            exhaustive_max_size: 4,
            sample_cap: 64,
            seed: 0,
        }
    }
}

impl ConverseOptions {
    fn orderings(&self, users: &[usize]) -> Vec<Vec<usize>> {
        if users.len() <= self.exhaustive_max_size {
            return permutations(users);
        }
        let mut rng = seeded(self.seed ^ users.iter().fold(0u64, |h, &u| h * 131 + u as u64));
        (0..self.sample_cap)
            .map(|_| {
                let mut p = users.to_vec();
                p.shuffle(&mut rng);
                p
            })
            .collect()
    }

    /// Ordered pairs `(U1, U2)` of disjoint nonempty subsets, with `U3` the rest.
    fn partitions(&self, users: &[usize]) -> Vec<[Vec<usize>; 3]> {
        let m = users.len();
        let from_digits = |digits: &[usize]| {
            let mut parts: [Vec<usize>; 3] = Default::default();
            for (&u, &d) in users.iter().zip(digits) {
                parts[d].push(u);
            }
            parts
        };
        let usable = |p: &[Vec<usize>; 3]| !p[0].is_empty() && !p[1].is_empty();
        if m <= self.exhaustive_max_size + 2 {
            let total = 3usize.pow(m as u32);
            (0..total)
                .map(|mut code| {
                    let digits: Vec<usize> = (0..m)
                        .map(|_| {
                            let d = code % 3;
                            code /= 3;
                            d
                        })
                        .collect();
                    from_digits(&digits)
                })
                .filter(usable)
                .collect()
        } else {
            let mut rng = seeded(self.seed.rotate_left(17) ^ m as u64);
            let mut out = Vec::new();
            while out.len() < self.sample_cap {
                let digits: Vec<usize> = (0..m).map(|_| *[0, 1, 2].choose(&mut rng).unwrap()).collect();
                let p = from_digits(&digits);
                if usable(&p) {
                    out.push(p);
                }
            }
            out
        }
    }
}

fn keys_of<'a>(joint: &'a JointSpace, users: &[usize]) -> Vec<&'a LinearRV> {
    users.iter().map(|&u| joint.key(u)).collect()
}

fn inputs_and_keys<'a>(joint: &'a JointSpace, users: &[usize]) -> Vec<&'a LinearRV> {
    users.iter().flat_map(|&u| [joint.input(u), joint.key(u)]).collect()
}

fn seq_label(users: &[usize]) -> String {
    let parts: Vec<String> = users.iter().map(usize::to_string).collect();
    format!("({})", parts.join(","))
}

fn checks_for<S: KeyScheme + ?Sized>(
    keys: &S,
    joint: &JointSpace,
    users: &[usize],
    opts: &ConverseOptions,
) -> Result<Vec<Check>> {
    let m = users.len();
    let l = keys.input_len() as i64;
    let tag = set_label(users);
    let mut out = Vec::new();

    // Adding independent inputs to every key leaves conditional MI unchanged.
    for [u1, u2, u3] in opts.partitions(users) {
        let lhs = conditional_mutual_information(&keys_of(joint, &u1), &keys_of(joint, &u2), &keys_of(joint, &u3))?;
        let rhs = conditional_mutual_information(
            &inputs_and_keys(joint, &u1),
            &inputs_and_keys(joint, &u2),
            &inputs_and_keys(joint, &u3),
        )?;
        out.push(Check::eq(
            format!(
                "input independence U1={} U2={} U3={}",
                set_label(&u1),
                set_label(&u2),
                set_label(&u3)
            ),
            lhs,
            rhs,
        ));
    }

    // A selected input stays hidden given any proper subset of other users' views.
    let maps = keys.mask_maps_unchecked(users)?;
    let messages = users
        .iter()
        .zip(&maps)
        .map(|(&u, g)| joint.message(u, g))
        .collect::<Result<Vec<_>>>()?;
    for (i, &k) in users.iter().enumerate() {
        let others: Vec<usize> = (0..m).filter(|&j| j != i).collect();
        // Proper subsets V of U \ {k}.
        for mask in 0..(1usize << others.len()) - 1 {
            let v: Vec<usize> = others
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &j)| j)
                .collect();
            let mut given = vec![&messages[i]];
            for &j in &v {
                given.push(joint.input(users[j]));
                given.push(&messages[j]);
            }
            let v_users: Vec<usize> = v.iter().map(|&j| users[j]).collect();
            out.push(Check::ge(
                format!("input uncertainty U={tag} k={k} V={}", set_label(&v_users)),
                conditional_entropy(&[joint.input(k)], &given)?,
                EntropyValue::symbols(l),
            ));
        }
    }

    // sum_{i>=2} I(Z_{k_i}; Z_{k_1..k_{i-1}} | Z_{k_{i+1}..k_m}) >= (m-1) L
    for order in opts.orderings(users) {
        let mut total = 0i64;
        for i in 1..m {
            let term = conditional_mutual_information(
                &[joint.key(order[i])],
                &keys_of(joint, &order[..i]),
                &keys_of(joint, &order[i + 1..]),
            )?;
            total += term.as_rational().to_integer();
        }
        out.push(Check::ge(
            format!("ordered correlation {}", seq_label(&order)),
            EntropyValue::symbols(total),
            EntropyValue::symbols((m as i64 - 1) * l),
        ));
    }

    // (1/m!) sum_pi I(Z_{pi(1)}; rest) >= H_{m-1} L. The term depends only on
    // pi(1), and each user leads (m-1)! orderings, so the average is over users.
    let mut total = Rational::from(0);
    for (i, &k) in users.iter().enumerate() {
        let rest: Vec<usize> = users
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &u)| u)
            .collect();
        total += conditional_mutual_information(&[joint.key(k)], &keys_of(joint, &rest), &[])?.as_rational();
    }
    out.push(Check::ge(
        format!("averaged correlation U={tag}"),
        EntropyValue::from_rational(total / m as i64),
        EntropyValue::from_rational(harmonic(m - 1) * l),
    ));
    Ok(out)
}

/// Converse-side inequalities and identities for every selection in `family`.
pub fn check_summation_converse<S: KeyScheme + ?Sized>(
    keys: &S,
    family: &[Vec<usize>],
    opts: &ConverseOptions,
) -> Result<VerifyReport> {
    for users in family {
        validate_selection(users, keys.user_count())?;
        if users.len() < 2 {
            return Err(Error::InvalidSelection(format!(
                "{} needs at least two users",
                set_label(users)
            )));
        }
    }
    let joint = JointSpace::new(keys)?;
    let per_set = family
        .par_iter()
        .map(|users| checks_for(keys, &joint, users, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(per_set.into_iter().flatten().collect())
}
