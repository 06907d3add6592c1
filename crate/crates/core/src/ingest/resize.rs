//! Resampling to the working resolution. Label maps use nearest neighbour so
//! no new label can appear; RGB images use bilinear with pixel-center
//! alignment.

use crate::error::{Error, Result};
use crate::model::{LabelMap, Rgb, RgbImage};

fn check_target(w: u32, h: u32) -> Result<()> {
    if w == 0 || h == 0 {
        return Err(Error::InvalidParams(format!(
            "target size {w}x{h} must be positive"
        )));
    }
    Ok(())
}

/// Source index whose center is nearest to destination pixel `i`'s center.
#[inline]
fn nearest_src(i: u32, src: u32, dst: u32) -> usize {
    let s = ((2 * i as u64 + 1) * src as u64) / (2 * dst as u64);
    s.min(src as u64 - 1) as usize
}

pub fn resize_label_map(m: &LabelMap, w: u32, h: u32) -> Result<LabelMap> {
    check_target(w, h)?;
    if m.dims() == (w, h) {
        return Ok(m.clone());
    }
    let (sw, sh) = m.dims();
    let cols: Vec<usize> = (0..w).map(|x| nearest_src(x, sw, w)).collect();
    let src = m.labels();
    let mut labels = Vec::with_capacity(w as usize * h as usize);
    for y in 0..h {
        let row = nearest_src(y, sh, h) * sw as usize;
        labels.extend(cols.iter().map(|&x| src[row + x]));
    }
    LabelMap::new(w, h, labels)
}

/// Two taps and the weight of the second one.
#[inline]
fn bilinear_taps(i: u32, src: u32, dst: u32) -> (usize, usize, f64) {
    let pos = ((i as f64 + 0.5) * src as f64 / dst as f64 - 0.5).clamp(0.0, (src - 1) as f64);
    let i0 = pos.floor() as usize;
    let i1 = (i0 + 1).min(src as usize - 1);
    (i0, i1, pos - i0 as f64)
}

pub fn resize_rgb(img: &RgbImage, w: u32, h: u32) -> Result<RgbImage> {
    check_target(w, h)?;
    if img.dims() == (w, h) {
        return Ok(img.clone());
    }
    let (sw, sh) = img.dims();
    let src = img.pixels();
    let cols: Vec<_> = (0..w).map(|x| bilinear_taps(x, sw, w)).collect();
    let mut pixels = Vec::with_capacity(w as usize * h as usize);
    for y in 0..h {
        let (y0, y1, fy) = bilinear_taps(y, sh, h);
        let r0 = y0 * sw as usize;
        let r1 = y1 * sw as usize;
        for &(x0, x1, fx) in &cols {
            let mut out = [0u8; 3];
            for (ch, o) in out.iter_mut().enumerate() {
                let p = |i: usize| src[i].0[ch] as f64;
                let top = p(r0 + x0) * (1.0 - fx) + p(r0 + x1) * fx;
                let bottom = p(r1 + x0) * (1.0 - fx) + p(r1 + x1) * fx;
                let v = top * (1.0 - fy) + bottom * fy;
                *o = (v + 0.5).floor().clamp(0.0, 255.0) as u8;
            }
            pixels.push(Rgb(out));
        }
    }
    RgbImage::new(w, h, pixels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CategoryId;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn ids(v: &[u8]) -> Vec<CategoryId> {
        v.iter()
            .map(|&c| CategoryId::from_label(c).unwrap())
            .collect()
    }

    #[test]
    fn upscale_2x2_to_blocks() {
        let m = LabelMap::new(2, 2, ids(&[0, 1, 1, 0])).unwrap();
        let r = resize_label_map(&m, 4, 4).unwrap();
        // Enumerated nearest source for each destination column/row:
        // 0 -> 0, 1 -> 0, 2 -> 1, 3 -> 1.
        let expected = ids(&[0, 0, 1, 1, 0, 0, 1, 1, 1, 1, 0, 0, 1, 1, 0, 0]);
        assert_eq!(r.labels(), &expected[..]);
    }

    #[test]
    fn constant_map_downscale() {
        let road = CategoryId::new(0).unwrap();
        let m = LabelMap::filled(2048, 1024, road);
        let r = resize_label_map(&m, 1024, 512).unwrap();
        assert_eq!(r.dims(), (1024, 512));
        assert!(r.labels().iter().all(|&c| c == road));
    }

    #[test]
    fn bilinear_midpoint() {
        let img = RgbImage::new(2, 1, vec![Rgb([0, 0, 0]), Rgb([255, 255, 255])]).unwrap();
        let r = resize_rgb(&img, 3, 1).unwrap();
        assert_eq!(
            r.pixels(),
            &[Rgb([0, 0, 0]), Rgb([128, 128, 128]), Rgb([255, 255, 255])]
        );
    }

    #[test]
    fn constant_gray_stays_gray() {
        let img = RgbImage::filled(7, 5, Rgb([90, 90, 90]));
        let r = resize_rgb(&img, 13, 3).unwrap();
        assert!(r.pixels().iter().all(|p| *p == Rgb([90, 90, 90])));
    }

    #[test]
    fn zero_target_rejected() {
        let m = LabelMap::filled(2, 2, CategoryId::IGNORE);
        assert!(resize_label_map(&m, 0, 2).is_err());
        assert!(resize_rgb(&RgbImage::filled(1, 1, Rgb::BLACK), 1, 0).is_err());
    }

    proptest! {
        #[test]
        fn identity_and_label_subset(
            (w, h, raw) in (1u32..12, 1u32..12).prop_flat_map(|(w, h)| {
                (Just(w), Just(h), proptest::collection::vec(prop_oneof![0u8..19, Just(255u8)], (w * h) as usize))
            }),
            tw in 1u32..30,
            th in 1u32..30,
        ) {
            let m = LabelMap::from_raw(w, h, &raw).unwrap();
            prop_assert_eq!(resize_label_map(&m, w, h).unwrap(), m.clone());
            let src: BTreeSet<_> = m.labels().iter().copied().collect();
            let r = resize_label_map(&m, tw, th).unwrap();
            prop_assert!(r.labels().iter().all(|c| src.contains(c)));

            let img = RgbImage::from_raw(w, h, &raw.iter().flat_map(|&v| [v, v / 2, 255 - v]).collect::<Vec<_>>()).unwrap();
            prop_assert_eq!(resize_rgb(&img, w, h).unwrap(), img);
        }
    }
}
