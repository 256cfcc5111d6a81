//! Builders for the LULU smoother family and cascades of them.
//!
//! `L_n` keeps a sample when it sits on some run of `n+1` positions that
//! are all at least as large; as a DNF over the window `-n..n` it is the
//! n+1 intervals `{j, ..., j+n}` for `j = -n..0`. `U_n` is its dual. A
//! cascade string such as `U2L2` or `L4U4L3U3L2U2L1U1` composes the named
//! filters, rightmost applied first.

use crate::error::Error;
use crate::pbf::{Implicant, Pbf};
use crate::window::Window;

/// The lower smoother `L_n` (max of running minima).
pub fn lower_smoother(n: u32) -> Result<Pbf, Error> {
    let window = Window::centered(n)?;
    let n = n as i32;
    let implicants = (-n..=0).map(|j| Implicant::new(j..=j + n)).collect();
    Pbf::new(window, implicants)
}

/// The upper smoother `U_n` (min of running maxima), built as the dual
/// of `L_n`.
pub fn upper_smoother(n: u32) -> Result<Pbf, Error> {
    Ok(lower_smoother(n)?.dualize())
}

/// Parses and composes a cascade specification: a sequence of `L<n>` and
/// `U<n>` tokens, applied right to left. Returns the normalized DNF in
/// canonical order.
pub fn build_ced(spec: &str) -> Result<Pbf, Error> {
    let tokens = tokenize(spec)?;
    if tokens.is_empty() {
        return Err(Error::BadCascadeToken("empty cascade".into()));
    }
    let mut stages = tokens.iter().rev();
    let mut acc = stage_pbf(*stages.next().unwrap())?;
    for &tok in stages {
        acc = stage_pbf(tok)?.compose(&acc)?;
    }
    Ok(acc.canonical())
}

fn stage_pbf((kind, n): (char, u32)) -> Result<Pbf, Error> {
    match kind {
        'L' => lower_smoother(n),
        'U' => upper_smoother(n),
        _ => unreachable!(),
    }
}

fn tokenize(spec: &str) -> Result<Vec<(char, u32)>, Error> {
    let mut out = Vec::new();
    let mut chars = spec.trim().chars().peekable();
    while let Some(c) = chars.next() {
        let kind = match c {
            'L' | 'l' => 'L',
            'U' | 'u' => 'U',
            _ => return Err(Error::BadCascadeToken(c.to_string())),
        };
        let mut digits = String::new();
        while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
            digits.push(*d);
            chars.next();
        }
        if digits.is_empty() {
            return Err(Error::BadCascadeToken(format!("{kind} without an order")));
        }
        let n: u32 = digits
            .parse()
            .map_err(|_| Error::BadCascadeToken(format!("{kind}{digits}")))?;
        out.push((kind, n));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pbf::Bitstring;

    #[test]
    fn l1_is_the_pair_of_intervals() {
        let l1 = lower_smoother(1).unwrap();
        assert_eq!(l1.window(), Window::new(-1, 1).unwrap());
        assert_eq!(
            l1.implicants(),
            &[Implicant::new([-1, 0]), Implicant::new([0, 1])]
        );
    }

    #[test]
    fn l1_matches_max_of_running_minima() {
        let l1 = lower_smoother(1).unwrap();
        let v = [4.0, 1.0, 7.0];
        // max(min(v[-1],v[0]), min(v[0],v[1])) = max(1, 1) = 1
        assert_eq!(l1.eval_real(&v).unwrap(), 1.0);
    }

    #[test]
    fn u1_is_the_dual() {
        let u1 = upper_smoother(1).unwrap();
        assert_eq!(
            u1.implicants(),
            &[Implicant::new([0]), Implicant::new([-1, 1])]
        );
    }

    #[test]
    fn u2l2_is_the_nine_wide_six_term_dnf() {
        let b = build_ced("U2L2").unwrap();
        assert_eq!(b.window(), Window::new(-4, 4).unwrap());
        assert_eq!(
            b.implicants(),
            &[
                Implicant::new([-2, -1, 0]),
                Implicant::new([-1, 0, 1]),
                Implicant::new([0, 1, 2]),
                Implicant::new([-4, -3, -2, 1, 2, 3]),
                Implicant::new([-3, -2, -1, 1, 2, 3]),
                Implicant::new([-3, -2, -1, 2, 3, 4]),
            ]
        );
    }

    #[test]
    fn l0_is_identity() {
        assert_eq!(build_ced("L0").unwrap(), Pbf::identity());
        assert_eq!(build_ced("U0").unwrap(), Pbf::identity());
    }

    #[test]
    fn cascade_matches_stagewise_brute_force() {
        // U1L1 on all 32 bitstrings of its 5-wide window.
        let b = build_ced("U1L1").unwrap();
        let l1 = lower_smoother(1).unwrap();
        let u1 = upper_smoother(1).unwrap();
        let w1 = l1.window();
        let cw = b.window();
        assert_eq!(cw.width(), 5);
        for m in 0..32u64 {
            let x = Bitstring::from_mask(cw, m);
            let mut mid = Vec::new();
            for j in -1..=1i32 {
                let sub: Vec<bool> = (-1..=1i32).map(|i| x.bit(i + j).unwrap()).collect();
                mid.push(
                    l1.eval_bool(&Bitstring::from_bits(w1, &sub).unwrap())
                        .unwrap(),
                );
            }
            let expect = u1
                .eval_bool(&Bitstring::from_bits(w1, &mid).unwrap())
                .unwrap();
            assert_eq!(b.eval_bool(&x).unwrap(), expect, "mask {m:b}");
        }
    }

    #[test]
    fn rejects_bad_tokens() {
        assert!(matches!(build_ced("X2"), Err(Error::BadCascadeToken(_))));
        assert!(matches!(build_ced("L"), Err(Error::BadCascadeToken(_))));
        assert!(matches!(build_ced(""), Err(Error::BadCascadeToken(_))));
    }
}
