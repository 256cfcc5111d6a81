//! Applying a filter to a finite signal.

use crate::error::Error;
use crate::pbf::Pbf;

/// How samples beyond the ends of a finite signal are supplied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    /// Repeat the edge sample (keeps constants constant).
    #[default]
    Replicate,
    /// Reflect around the edge without repeating it.
    Mirror,
    /// Pad with zeros.
    ZeroPad,
}

fn sample(signal: &[f64], i: i64, boundary: Boundary) -> f64 {
    let n = signal.len() as i64;
    if (0..n).contains(&i) {
        return signal[i as usize];
    }
    match boundary {
        Boundary::Replicate => signal[i.clamp(0, n - 1) as usize],
        Boundary::ZeroPad => 0.0,
        Boundary::Mirror => {
            if n == 1 {
                return signal[0];
            }
            let period = 2 * (n - 1);
            let mut k = i.rem_euclid(period);
            if k >= n {
                k = period - k;
            }
            signal[k as usize]
        }
    }
}

/// Slides the filter window over the signal: `output[k]` is the min/max
/// evaluation on the window anchored at `k`, with out-of-range samples
/// supplied by the boundary mode. The output has the input's length.
pub fn apply(pbf: &Pbf, signal: &[f64], boundary: Boundary) -> Result<Vec<f64>, Error> {
    if signal.is_empty() {
        return Ok(Vec::new());
    }
    let window = pbf.window();
    let mut out = Vec::with_capacity(signal.len());
    let mut buf = vec![0.0; window.width()];
    for k in 0..signal.len() as i64 {
        for (slot, off) in buf.iter_mut().zip(window.positions()) {
            *slot = sample(signal, k + off as i64, boundary);
        }
        out.push(pbf.eval_real(&buf)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pbf::Implicant;
    use crate::window::Window;

    fn majority3() -> Pbf {
        let w = Window::new(-1, 1).unwrap();
        Pbf::new(
            w,
            vec![
                Implicant::new([-1, 0]),
                Implicant::new([0, 1]),
                Implicant::new([-1, 1]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn median_with_edge_replication() {
        let out = apply(&majority3(), &[5.0, 1.0, 9.0], Boundary::Replicate).unwrap();
        assert_eq!(out, vec![5.0, 5.0, 9.0]);
    }

    #[test]
    fn constants_pass_through() {
        let sig = [3.5; 7];
        let out = apply(&majority3(), &sig, Boundary::Replicate).unwrap();
        assert_eq!(out, sig.to_vec());
    }

    #[test]
    fn boundary_modes_differ_only_at_edges() {
        let sig = [1.0, 2.0, 3.0, 4.0];
        let rep = apply(&majority3(), &sig, Boundary::Replicate).unwrap();
        let mir = apply(&majority3(), &sig, Boundary::Mirror).unwrap();
        let zer = apply(&majority3(), &sig, Boundary::ZeroPad).unwrap();
        assert_eq!(rep[1..3], mir[1..3]);
        assert_eq!(rep[1..3], zer[1..3]);
        assert_eq!(rep[0], 1.0); // median(1, 1, 2)
        assert_eq!(zer[0], 1.0); // median(0, 1, 2)
        assert_eq!(mir[0], 2.0); // median(2, 1, 2)
    }

    #[test]
    fn mirror_indexing() {
        let sig = [10.0, 20.0, 30.0];
        assert_eq!(sample(&sig, -1, Boundary::Mirror), 20.0);
        assert_eq!(sample(&sig, -2, Boundary::Mirror), 30.0);
        assert_eq!(sample(&sig, 3, Boundary::Mirror), 20.0);
        assert_eq!(sample(&sig, 4, Boundary::Mirror), 10.0);
    }

    #[test]
    fn empty_signal() {
        assert!(apply(&majority3(), &[], Boundary::Replicate)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn two_stage_smoother_is_idempotent_on_signals() {
        use rand::{Rng, SeedableRng};
        let g = crate::lulu::build_ced("U1L1").unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let signal: Vec<f64> = (0..40).map(|_| rng.gen_range(-10.0..10.0)).collect();
            let once = apply(&g, &signal, Boundary::Replicate).unwrap();
            let twice = apply(&g, &once, Boundary::Replicate).unwrap();
            assert_eq!(once, twice);
        }
    }
}
