//! Connected-component labeling.

use super::{BinaryMask, Connectivity};
use std::collections::VecDeque;

/// Label grid plus per-component sizes. Background is label 0; components
/// are labeled 1..=count in row-major order of their first pixel.
#[derive(Clone, Debug)]
pub struct ComponentLabels {
    width: usize,
    height: usize,
    labels: Vec<u32>,
    sizes: Vec<usize>,
}

impl ComponentLabels {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    #[inline]
    pub fn label_at(&self, x: usize, y: usize) -> u32 {
        self.labels[y * self.width + x]
    }

    /// Sizes indexed by `label - 1`.
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Label of the largest component; ties go to the component whose first
    /// pixel has the lowest row-major index (i.e. the smallest label).
    pub fn largest_label(&self) -> Option<u32> {
        let mut best: Option<(usize, u32)> = None;
        for (idx, &size) in self.sizes.iter().enumerate() {
            let label = idx as u32 + 1;
            match best {
                Some((bs, _)) if size <= bs => {}
                _ => best = Some((size, label)),
            }
        }
        best.map(|(_, label)| label)
    }

    /// Mask of all pixels carrying `label`.
    pub fn component_mask(&self, label: u32) -> BinaryMask {
        let data = self.labels.iter().map(|&l| l == label).collect();
        BinaryMask::new(self.width, self.height, data).expect("label grid dims are consistent")
    }
}

/// Flood-fill labeling under the given connectivity.
pub fn connected_components(mask: &BinaryMask, conn: Connectivity) -> ComponentLabels {
    let (w, h) = (mask.width(), mask.height());
    let mut labels = vec![0u32; w * h];
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();

    for y in 0..h {
        for x in 0..w {
            if !mask.at(x, y) || labels[y * w + x] != 0 {
                continue;
            }
            let label = sizes.len() as u32 + 1;
            let mut size = 0usize;
            labels[y * w + x] = label;
            queue.push_back((x, y));
            while let Some((cx, cy)) = queue.pop_front() {
                size += 1;
                for &(dx, dy) in conn.offsets() {
                    let nx = cx as isize + dx;
                    let ny = cy as isize + dy;
                    if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                        continue;
                    }
                    let (nx, ny) = (nx as usize, ny as usize);
                    if mask.at(nx, ny) && labels[ny * w + nx] == 0 {
                        labels[ny * w + nx] = label;
                        queue.push_back((nx, ny));
                    }
                }
            }
            sizes.push(size);
        }
    }
    ComponentLabels {
        width: w,
        height: h,
        labels,
        sizes,
    }
}
