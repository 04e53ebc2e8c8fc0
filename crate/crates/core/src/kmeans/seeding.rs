use rand::distr::{weighted::WeightedIndex, Distribution};
use rand::seq::index::sample;
use rand::Rng;

use super::Seeding;
use crate::data::{sq_dist, Dataset};
use crate::error::{Error, Result};

/// Picks `k` initial centers.
///
/// Uniform: `k` distinct points without replacement. Plus-plus: first point
/// uniform, then each next point with probability proportional to its squared
/// distance to the nearest chosen center. When every remaining point sits on
/// a chosen center (duplicates), the next pick is uniform over unchosen points.
pub fn seed<R: Rng + ?Sized>(
    ds: &Dataset,
    k: usize,
    strategy: &Seeding,
    rng: &mut R,
) -> Result<Vec<Vec<f64>>> {
    let n = ds.len();
    if k == 0 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    match strategy {
        Seeding::UniformRandom => Ok(sample(rng, n, k)
            .into_iter()
            .map(|i| ds.point(i).to_vec())
            .collect()),
        Seeding::PlusPlus => Ok(plus_plus_indices(ds, k, rng)
            .into_iter()
            .map(|i| ds.point(i).to_vec())
            .collect()),
        Seeding::ExplicitCenters(centers) => {
            if centers.len() != k {
                return Err(Error::param(
                    "centers",
                    format!("{} explicit centers for k={k}", centers.len()),
                ));
            }
            for (index, c) in centers.iter().enumerate() {
                if c.len() != ds.dim() {
                    return Err(Error::DimensionMismatch {
                        index,
                        expected: ds.dim(),
                        found: c.len(),
                    });
                }
            }
            Ok(centers.clone())
        }
    }
}

pub(crate) fn plus_plus_indices<R: Rng + ?Sized>(ds: &Dataset, k: usize, rng: &mut R) -> Vec<usize> {
    let n = ds.len();
    let mut chosen = vec![rng.random_range(0..n)];
    let mut taken = vec![false; n];
    taken[chosen[0]] = true;
    let mut d2: Vec<f64> = ds
        .points()
        .map(|p| sq_dist(p, ds.point(chosen[0])))
        .collect();
    while chosen.len() < k {
        let next = match WeightedIndex::new(&d2) {
            Ok(w) => w.sample(rng),
            Err(_) => {
                let free: Vec<usize> = (0..n).filter(|&i| !taken[i]).collect();
                free[rng.random_range(0..free.len())]
            }
        };
        taken[next] = true;
        chosen.push(next);
        let c = ds.point(next);
        for (i, slot) in d2.iter_mut().enumerate() {
            *slot = slot.min(sq_dist(ds.point(i), c));
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn k_equals_n_takes_everything() {
        let ds = Dataset::from_line(&[0.0, 1.0, 4.0, 9.0]).unwrap();
        for strategy in [Seeding::UniformRandom, Seeding::PlusPlus] {
            let mut got: Vec<f64> = seed(&ds, 4, &strategy, &mut rng::from_seed(3))
                .unwrap()
                .into_iter()
                .map(|c| c[0])
                .collect();
            got.sort_by(f64::total_cmp);
            assert_eq!(got, vec![0.0, 1.0, 4.0, 9.0]);
        }
    }

    #[test]
    fn plus_plus_picks_the_only_positive_weight() {
        // after a first seed at 0, weights are (0, 0, 100): 10 with probability 1
        let ds = Dataset::from_line(&[0.0, 0.0, 10.0]).unwrap();
        for s in 0..200 {
            let mut r = rng::from_seed(s);
            let idx = plus_plus_indices(&ds, 2, &mut r);
            if ds.point(idx[0])[0] == 0.0 {
                assert_eq!(idx[1], 2);
            }
        }
    }

    #[test]
    fn deterministic_under_fixed_seed() {
        let ds = Dataset::from_line(&[0.0, 1.0, 2.0, 7.0, 8.0, 20.0]).unwrap();
        for strategy in [Seeding::UniformRandom, Seeding::PlusPlus] {
            let a = seed(&ds, 3, &strategy, &mut rng::from_seed(11)).unwrap();
            let b = seed(&ds, 3, &strategy, &mut rng::from_seed(11)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn too_many_centers() {
        let ds = Dataset::from_line(&[0.0, 1.0]).unwrap();
        assert!(matches!(
            seed(&ds, 3, &Seeding::UniformRandom, &mut rng::from_seed(0)),
            Err(Error::InvalidK { k: 3, n: 2 })
        ));
    }

    #[test]
    fn duplicates_fall_back_to_uniform() {
        let ds = Dataset::from_line(&[5.0, 5.0, 5.0]).unwrap();
        let mut idx = plus_plus_indices(&ds, 3, &mut rng::from_seed(1));
        idx.sort();
        assert_eq!(idx, vec![0, 1, 2]);
    }
}
