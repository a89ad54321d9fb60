//! Named matrices: the qubit, qutrit and four-level examples, the qutrit
//! Hamiltonian and the three viewpoint matrices used for trajectories.

use std::f64::consts::PI;

use crate::normalize::natural_rescale;
use crate::{Matrix, C64};

const fn z(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

const O: C64 = z(0.0, 0.0);
const ONE: C64 = z(1.0, 0.0);
const I: C64 = z(0.0, 1.0);

fn omega() -> C64 {
    C64::from_polar(1.0, 2.0 * PI / 3.0)
}

fn rows(r: &[&[C64]]) -> Matrix {
    Matrix::from_rows(&r.iter().map(|row| row.to_vec()).collect::<Vec<_>>()).expect("registry matrix is square")
}

fn rescaled(m: Matrix) -> Matrix {
    natural_rescale(&m).expect("registry matrix is not scalar")
}

fn qutrit_raw(k: usize) -> Matrix {
    let w = omega();
    match k {
        0 => rows(&[&[ONE, ONE, ONE], &[O, w, ONE], &[O, O, w * w]]),
        1 => rows(&[
            &[z(5.0, -3.0), O, z(6.0, 0.0)],
            &[O, z(5.0, 3.0), z(6.0, 0.0)],
            &[z(-6.0, 0.0), z(-6.0, 0.0), z(-10.0, 0.0)],
        ]),
        2 => rows(&[&[ONE, ONE, O], &[O, w, O], &[O, O, w * w]]),
        3 => Matrix::from_diag(&[ONE, w, w * w]),
        _ => unreachable!(),
    }
}

fn four_level_raw(k: usize) -> Matrix {
    let m1 = -ONE;
    let mi = -I;
    match k {
        0 => rows(&[&[ONE, ONE, ONE, ONE], &[O, I, ONE, ONE], &[O, O, m1, ONE], &[O, O, O, mi]]),
        1 => rows(&[&[I, O, m1, O], &[O, O, m1, O], &[ONE, ONE, z(1.0, -1.0), O], &[O, O, ONE, ONE]]),
        2 => rows(&[&[ONE, O, O, ONE], &[O, I, O, ONE], &[O, O, m1, O], &[O, O, O, mi]]),
        3 => rows(&[&[ONE, O, O, ONE], &[O, I, ONE, O], &[O, O, m1, O], &[O, O, O, mi]]),
        4 => rows(&[&[ONE, O, O, ONE], &[O, I, O, O], &[O, O, m1, O], &[O, O, O, mi]]),
        5 => rows(&[&[I, O, m1, O], &[O, O, m1, O], &[ONE, ONE, z(1.0, -1.0), O], &[O, O, O, ONE]]),
        6 => rows(&[&[ONE, O, ONE, O], &[O, I, O, ONE], &[O, O, m1, O], &[O, O, O, mi]]),
        7 => rows(&[&[ONE, O, O, O], &[O, I, O, ONE], &[O, O, m1, O], &[O, O, O, mi]]),
        8 => Matrix::from_diag(&[ONE, I, m1, mi]),
        _ => unreachable!(),
    }
}

/// All registered names, in display order.
pub fn names() -> Vec<String> {
    let mut v = vec!["A2_0".to_string()];
    v.extend((0..4).map(|k| format!("A3_{k}")));
    v.extend((0..9).map(|k| format!("A4_{k}")));
    v.extend((0..9).map(|k| format!("A4_{k}_raw")));
    v.extend(["H21", "D_A1", "D_A2", "D_A3"].map(String::from));
    v
}

/// Names whose matrices are in natural size (`alpha = 1`).
pub fn natural_size_names() -> Vec<String> {
    names().into_iter().filter(|n| n.starts_with('A') && !n.ends_with("_raw")).collect()
}

pub fn builtin(name: &str) -> Option<Matrix> {
    let m = match name {
        "A2_0" => rows(&[&[ONE, ONE], &[O, -ONE]]).scale_real((2.0f64 / 5.0).sqrt()),
        "A3_3" => qutrit_raw(3).scale_real((2.0f64 / 3.0).sqrt()),
        "A4_8" => four_level_raw(8).scale_real(1.0 / 2f64.sqrt()),
        "H21" => {
            rows(&[&[z(-1.0, 0.0), z(-1.0, -1.0), ONE], &[z(-1.0, 1.0), O, z(1.0, 1.0)], &[ONE, z(1.0, -1.0), ONE]])
        }
        "D_A1" => rows(&[&[O, O, ONE], &[O, I, O], &[O, O, -ONE]]),
        "D_A2" => rows(&[&[O, ONE, ONE], &[O, I, ONE], &[O, O, -ONE]]),
        "D_A3" => rows(&[&[I, O, z(2.0, 0.0)], &[O, O, O], &[O, O, -I]]),
        _ => {
            let index = |prefix: &str, suffix: &str, max: usize| -> Option<usize> {
                let k: usize = name.strip_prefix(prefix)?.strip_suffix(suffix)?.parse().ok()?;
                (k < max).then_some(k)
            };
            index("A3_", "", 3)
                .map(|k| rescaled(qutrit_raw(k)))
                .or_else(|| index("A4_", "_raw", 9).map(four_level_raw))
                .or_else(|| index("A4_", "", 8).map(|k| rescaled(four_level_raw(k))))?
        }
    };
    Some(m)
}
