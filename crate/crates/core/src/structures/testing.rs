use crate::coalgebra::words;
use crate::graded::{int, Degrees, MapFamily, Sector, Vector};

pub(crate) struct Lcg(pub u64);

impl Lcg {
    pub(crate) fn small(&mut self) -> i64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((self.0 >> 33) % 5) as i64 - 2
    }
}

/// A family with pseudo-random small integer entries on every degree
/// compatible input word of total length `min_len..=max_len`.
pub(crate) fn random_family(
    degree: i32,
    source: Degrees<'_>,
    target: Degrees<'_>,
    min_len: usize,
    max_len: usize,
    seed: u64,
) -> MapFamily {
    let mut rng = Lcg(seed);
    let mut fam = MapFamily::new(degree);
    for len in min_len..=max_len {
        for n in 0..=len {
            let m = len - n;
            for w in words(source, n, m) {
                let d = w.degree(source) + degree as i64;
                for sector in [Sector::Closed, Sector::Open] {
                    if sector == Sector::Closed && m > 0 {
                        continue;
                    }
                    let out_degrees = match sector {
                        Sector::Closed => target.closed,
                        Sector::Open => target.open,
                    };
                    let mut v = Vector::zero();
                    for (i, &od) in out_degrees.iter().enumerate() {
                        if od as i64 == d {
                            v.add_term(i, int(rng.small()));
                        }
                    }
                    if v.is_zero() {
                        continue;
                    }
                    let map = match sector {
                        Sector::Closed => fam.closed_mut(n),
                        Sector::Open => fam.open_mut(n, m),
                    };
                    let mut key = w.closed.clone();
                    key.extend(&w.open);
                    map.insert_raw(key, v);
                }
            }
        }
    }
    fam.pruned()
}
