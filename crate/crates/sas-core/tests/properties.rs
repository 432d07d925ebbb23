//! Property tests for the geometric and metric invariants.

use proptest::prelude::*;
use sas_core::metrics::{dsc, nsd};
use sas_core::preprocess::{preprocess_pair, PreprocConfig, RawPair};
use sas_core::raster::{
    boundary_pixels, dilate_disk, minmax_normalize_raw, pad_to_square, resize_bilinear,
    BinaryMask, ByteImage, Connectivity, GrayImage,
};

fn mask_strategy(max_side: usize) -> impl Strategy<Value = BinaryMask> {
    (1..=max_side, 1..=max_side)
        .prop_flat_map(|(w, h)| {
            proptest::collection::vec(any::<bool>(), w * h)
                .prop_map(move |data| BinaryMask::new(w, h, data).unwrap())
        })
}

fn mask_pair_strategy(max_side: usize) -> impl Strategy<Value = (BinaryMask, BinaryMask)> {
    (1..=max_side, 1..=max_side).prop_flat_map(|(w, h)| {
        let a = proptest::collection::vec(any::<bool>(), w * h)
            .prop_map(move |data| BinaryMask::new(w, h, data).unwrap());
        let b = proptest::collection::vec(any::<bool>(), w * h)
            .prop_map(move |data| BinaryMask::new(w, h, data).unwrap());
        (a, b)
    })
}

fn image_strategy(max_side: usize) -> impl Strategy<Value = GrayImage> {
    (1..=max_side, 1..=max_side).prop_flat_map(|(w, h)| {
        proptest::collection::vec(0.0f64..=1.0, w * h)
            .prop_map(move |data| GrayImage::new(w, h, data).unwrap())
    })
}

proptest! {
    #[test]
    fn dsc_is_symmetric_and_bounded((a, b) in mask_pair_strategy(12)) {
        let ab = dsc(&a, &b).unwrap();
        let ba = dsc(&b, &a).unwrap();
        prop_assert_eq!(ab, ba);
        prop_assert!((0.0..=1.0).contains(&ab));
    }

    #[test]
    fn nsd_is_symmetric_bounded_and_monotone_in_tau((a, b) in mask_pair_strategy(10)) {
        let taus = [0.0, 1.0, 2.0, 4.0];
        let mut last = -1.0;
        for tau in taus {
            let ab = nsd(&a, &b, tau).unwrap();
            let ba = nsd(&b, &a, tau).unwrap();
            prop_assert_eq!(ab, ba);
            prop_assert!((0.0..=1.0).contains(&ab));
            prop_assert!(ab >= last, "tau sweep must be non-decreasing");
            last = ab;
        }
    }

    #[test]
    fn dilation_is_monotone_in_radius(mask in mask_strategy(12), r1 in 0.0f64..4.0, r2 in 0.0f64..4.0) {
        let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        let small = dilate_disk(&mask, lo).unwrap();
        let large = dilate_disk(&mask, hi).unwrap();
        for (s, l) in small.data().iter().zip(large.data()) {
            prop_assert!(!s || *l, "dilation by a larger radius must be a superset");
        }
    }

    #[test]
    fn boundary_is_a_subset_of_the_mask(mask in mask_strategy(12)) {
        for conn in [Connectivity::Four, Connectivity::Eight] {
            let b = boundary_pixels(&mask, conn);
            for (bp, mp) in b.data().iter().zip(mask.data()) {
                prop_assert!(!bp || *mp);
            }
        }
    }

    #[test]
    fn bilinear_resize_stays_in_unit_range(img in image_strategy(10), target in 1usize..24) {
        let out = resize_bilinear(&img, target).unwrap();
        prop_assert!(out.data().iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn pad_then_crop_is_the_identity(img in image_strategy(8), extra in 0usize..6) {
        let side = img.width().max(img.height()) + extra;
        let padded = pad_to_square(&img, side, 0.0).unwrap();
        for y in 0..img.height() {
            for x in 0..img.width() {
                prop_assert_eq!(padded.at(x, y).to_bits(), img.at(x, y).to_bits());
            }
        }
    }

    #[test]
    fn minmax_output_spans_the_unit_interval(raw in proptest::collection::vec(-1000.0f64..1000.0, 1..64)) {
        let n = raw.len();
        let img = minmax_normalize_raw(n, 1, &raw).unwrap();
        let min = img.data().iter().cloned().fold(f64::INFINITY, f64::min);
        let max = img.data().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert_eq!(min, 0.0);
        let distinct = raw.iter().any(|v| *v != raw[0]);
        if distinct {
            prop_assert_eq!(max, 1.0);
        } else {
            prop_assert_eq!(max, 0.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn preprocessed_foreground_stays_inside_the_content_footprint(
        (w, h) in (4usize..40, 4usize..40),
        seed in any::<u64>(),
    ) {
        let mut rng = sas_core::stream::derive_stream(seed, 0);
        let mask = sas_testkit::random_mask(w, h, 0.3, &mut rng);
        let mut img_data = vec![0u8; w * h];
        for (i, v) in img_data.iter_mut().enumerate() {
            *v = ((i * 37) % 200 + 20) as u8;
        }
        let mask_data: Vec<u8> = mask.data().iter().map(|&m| if m { 255 } else { 0 }).collect();
        let raw = RawPair::new(
            "p",
            ByteImage::new(w, h, img_data).unwrap(),
            ByteImage::new(w, h, mask_data).unwrap(),
        ).unwrap();
        let cfg = PreprocConfig { input_side: 32, crop_window: false };
        let (image, out_mask) = preprocess_pair(&raw, &cfg).unwrap();
        prop_assert_eq!((image.width(), image.height()), (32, 32));

        let (cw, ch) = sas_core::raster::resized_dims(w, h, 32);
        for y in 0..32 {
            for x in 0..32 {
                if x >= cw || y >= ch {
                    prop_assert!(!out_mask.at(x, y), "foreground in padding at ({}, {})", x, y);
                    prop_assert_eq!(image.at(x, y), 0.0);
                }
            }
        }
    }

    #[test]
    fn solid_content_stays_geometrically_aligned_through_preprocessing(
        (w, h) in (8usize..40, 8usize..40),
        (rx, ry) in (0usize..5, 0usize..5),
        (rw, rh) in (3usize..8, 3usize..8),
    ) {
        // A solid rectangle survives resampling, so every source foreground
        // pixel's scaled coordinate must land within one output pixel of
        // output foreground.
        let rw = rw.min(w - rx);
        let rh = rh.min(h - ry);
        let mut mask_data = vec![0u8; w * h];
        for y in ry..ry + rh {
            for x in rx..rx + rw {
                mask_data[y * w + x] = 255;
            }
        }
        let img_data: Vec<u8> = (0..w * h).map(|i| ((i * 13) % 230 + 10) as u8).collect();
        let raw = RawPair::new(
            "rect",
            ByteImage::new(w, h, img_data).unwrap(),
            ByteImage::new(w, h, mask_data).unwrap(),
        ).unwrap();
        let cfg = PreprocConfig { input_side: 32, crop_window: false };
        let (_, out_mask) = preprocess_pair(&raw, &cfg).unwrap();
        prop_assert!(out_mask.foreground_area() > 0);

        let (cw, ch) = sas_core::raster::resized_dims(w, h, 32);
        for y in ry..ry + rh {
            for x in rx..rx + rw {
                let tx = ((x as f64 + 0.5) * cw as f64 / w as f64 - 0.5).round() as i64;
                let ty = ((y as f64 + 0.5) * ch as f64 / h as f64 - 0.5).round() as i64;
                let mut hit = false;
                for dy in -1..=1i64 {
                    for dx in -1..=1i64 {
                        let nx = tx + dx;
                        let ny = ty + dy;
                        if nx >= 0 && ny >= 0 && (nx as usize) < 32 && (ny as usize) < 32
                            && out_mask.at(nx as usize, ny as usize)
                        {
                            hit = true;
                        }
                    }
                }
                prop_assert!(hit, "foreground ({}, {}) lost alignment", x, y);
            }
        }
    }
}
