//! Two-pass union-find connected-component labeling.

use serde::{Deserialize, Serialize};

use crate::mask::BinaryMask;

/// Pixel adjacency used when grouping foreground pixels.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Connectivity {
    Four,
    #[default]
    Eight,
}

impl TryFrom<u8> for Connectivity {
    type Error = String;

    fn try_from(value: u8) -> Result<Self, Self::Error> {
        match value {
            4 => Ok(Connectivity::Four),
            8 => Ok(Connectivity::Eight),
            other => Err(format!("connectivity must be 4 or 8, got {other}")),
        }
    }
}

impl From<Connectivity> for u8 {
    fn from(c: Connectivity) -> u8 {
        match c {
            Connectivity::Four => 4,
            Connectivity::Eight => 8,
        }
    }
}

/// Component id per pixel: 0 is background, components are `1..=count`
/// numbered in order of their first pixel in raster scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentLabels {
    width: usize,
    height: usize,
    labels: Vec<u32>,
    count: u32,
}

impl ComponentLabels {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn count(&self) -> u32 {
        self.count
    }

    pub fn get(&self, x: usize, y: usize) -> u32 {
        self.labels[y * self.width + x]
    }
}

struct DisjointSet {
    parent: Vec<u32>,
}

impl DisjointSet {
    fn with_capacity(n: usize) -> Self {
        let mut parent = Vec::with_capacity(n);
        parent.push(0);
        Self { parent }
    }

    fn make(&mut self) -> u32 {
        let id = self.parent.len() as u32;
        self.parent.push(id);
        id
    }

    fn find(&mut self, mut x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        while self.parent[x as usize] != root {
            let next = self.parent[x as usize];
            self.parent[x as usize] = root;
            x = next;
        }
        root
    }

    // The smaller label becomes the root, so roots are always the
    // earliest provisional label of their set.
    fn union(&mut self, a: u32, b: u32) -> u32 {
        let (ra, rb) = (self.find(a), self.find(b));
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi as usize] = lo;
        lo
    }
}

pub fn label_components(mask: &BinaryMask, connectivity: Connectivity) -> ComponentLabels {
    let (w, h) = mask.dimensions();
    let bits = mask.bits();
    let mut labels = vec![0u32; w * h];
    let mut sets = DisjointSet::with_capacity(w * h / 4 + 1);

    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if !bits[i] {
                continue;
            }
            let mut current = 0u32;
            let mut join = |neighbour: u32, sets: &mut DisjointSet| {
                if neighbour == 0 {
                    return;
                }
                current = if current == 0 {
                    sets.find(neighbour)
                } else {
                    sets.union(current, neighbour)
                };
            };
            if x > 0 {
                join(labels[i - 1], &mut sets);
            }
            if y > 0 {
                join(labels[i - w], &mut sets);
                if connectivity == Connectivity::Eight {
                    if x > 0 {
                        join(labels[i - w - 1], &mut sets);
                    }
                    if x + 1 < w {
                        join(labels[i - w + 1], &mut sets);
                    }
                }
            }
            labels[i] = if current == 0 { sets.make() } else { current };
        }
    }

    let mut remap = vec![0u32; sets.parent.len()];
    let mut count = 0u32;
    for label in labels.iter_mut() {
        if *label == 0 {
            continue;
        }
        let root = sets.find(*label) as usize;
        if remap[root] == 0 {
            count += 1;
            remap[root] = count;
        }
        *label = remap[root];
    }

    ComponentLabels {
        width: w,
        height: h,
        labels,
        count,
    }
}
