use serde::{Deserialize, Serialize};

use super::RecognitionError;
use crate::raster::Bitmap;

/// A normalized cross-correlation score. `degenerate` is set when either
/// input is constant, in which case the score is 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ncc {
    pub score: f64,
    pub degenerate: bool,
}

/// Running sums over a template/window pair.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Sums {
    pub n: u64,
    pub t: u64,
    pub tt: u64,
    pub w: u64,
    pub ww: u64,
    pub tw: u64,
}

impl Sums {
    pub fn of(a: &[u8], b: &[u8]) -> Sums {
        let mut s = Sums { n: a.len() as u64, ..Sums::default() };
        for (&x, &y) in a.iter().zip(b) {
            let (x, y) = (x as u64, y as u64);
            s.t += x;
            s.tt += x * x;
            s.w += y;
            s.ww += y * y;
            s.tw += x * y;
        }
        s
    }

    /// Pearson correlation from exact integer sums.
    pub fn pearson(&self) -> Ncc {
        let n = self.n as i128;
        let var_t = n * self.tt as i128 - (self.t as i128).pow(2);
        let var_w = n * self.ww as i128 - (self.w as i128).pow(2);
        if var_t <= 0 || var_w <= 0 {
            return Ncc { score: 0.0, degenerate: true };
        }
        let num = n * self.tw as i128 - self.t as i128 * self.w as i128;
        let den = if var_t == var_w { var_t as f64 } else { ((var_t as f64) * (var_w as f64)).sqrt() };
        Ncc { score: (num as f64 / den).clamp(-1.0, 1.0), degenerate: false }
    }
}

/// Pearson (zero-mean normalized) correlation of two equally sized images.
pub fn ncc(template: &Bitmap, window: &Bitmap) -> Result<Ncc, RecognitionError> {
    if (template.width(), template.height()) != (window.width(), window.height()) {
        return Err(RecognitionError::Dimensions {
            a: (template.width(), template.height()),
            b: (window.width(), window.height()),
        });
    }
    Ok(Sums::of(template.samples(), window.samples()).pearson())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::Polarity;
    use proptest::prelude::*;

    fn bmp(v: Vec<u8>) -> Bitmap {
        let w = v.len();
        Bitmap::new(w, 1, v, Polarity::LightOnDark).unwrap()
    }

    #[test]
    fn constant_inputs_are_degenerate() {
        let a = bmp(vec![5; 6]);
        let r = ncc(&a, &a).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.score, 0.0);
        let b = bmp(vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(ncc(&a, &b).unwrap().score, 0.0);
    }

    #[test]
    fn size_mismatch_is_an_error() {
        assert!(ncc(&bmp(vec![1, 2]), &bmp(vec![1, 2, 3])).is_err());
    }

    proptest! {
        #[test]
        fn self_inverse_and_affine(v in proptest::collection::vec(any::<u8>(), 2..64), gain in 1u32..4, off in 0u32..40) {
            prop_assume!(v.iter().any(|&x| x != v[0]));
            let x = bmp(v.clone());
            prop_assert_eq!(ncc(&x, &x).unwrap().score, 1.0);
            let neg = bmp(v.iter().map(|&p| 255 - p).collect());
            prop_assert!((ncc(&x, &neg).unwrap().score + 1.0).abs() < 1e-12);
            // keep the affine image inside 0..=255
            let small: Vec<u8> = v.iter().map(|&p| p / 8).collect();
            prop_assume!(small.iter().any(|&p| p != small[0]));
            let aff = bmp(small.iter().map(|&p| (p as u32 * gain + off) as u8).collect());
            prop_assert!((ncc(&bmp(small), &aff).unwrap().score - 1.0).abs() < 1e-12);
        }

        #[test]
        fn score_in_range(a in proptest::collection::vec(any::<u8>(), 16), b in proptest::collection::vec(any::<u8>(), 16)) {
            let s = ncc(&bmp(a), &bmp(b)).unwrap().score;
            prop_assert!((-1.0..=1.0).contains(&s));
        }
    }
}
