//! Uniform episode sampling from the novel split.

use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::data::{FeatureDataset, Split};

use super::{Episode, EpisodeSpec, FewshotError, LabeledFeatures};

/// Draws one episode: `n_way` novel classes uniformly without replacement,
/// then `k_shot + q_query` rows per class without replacement, the first
/// `k_shot` forming the support set. Deterministic for a fixed `rng`.
pub fn sample_episode<R: Rng + ?Sized>(
    dataset: &FeatureDataset,
    spec: &EpisodeSpec,
    rng: &mut R,
) -> Result<Episode, FewshotError> {
    let novel = dataset.classes_in(Split::Novel);
    if novel.len() < spec.n_way() {
        return Err(FewshotError::InsufficientClasses {
            split: "novel",
            needed: spec.n_way(),
            available: novel.len(),
        });
    }
    let per_class = spec.k_shot() + spec.q_query();
    for &class in &novel {
        let available = dataset.rows_of_class(class).len();
        if available < per_class {
            return Err(FewshotError::InsufficientData {
                class: dataset.class_name(class).to_string(),
                needed: per_class,
                available,
            });
        }
    }

    let mut pool = novel;
    let (picked, _) = pool.partial_shuffle(rng, spec.n_way());
    let class_ids: Vec<usize> = picked.to_vec();

    let dim = dataset.dim();
    let mut support = Array2::zeros((spec.n_way() * spec.k_shot(), dim));
    let mut query = Array2::zeros((spec.n_way() * spec.q_query(), dim));
    let mut support_labels = Vec::with_capacity(support.nrows());
    let mut query_labels = Vec::with_capacity(query.nrows());

    for (local, &class) in class_ids.iter().enumerate() {
        let mut rows = dataset.rows_of_class(class).to_vec();
        let (chosen, _) = rows.partial_shuffle(rng, per_class);
        for (i, &row) in chosen.iter().enumerate() {
            if i < spec.k_shot() {
                let target = local * spec.k_shot() + i;
                support.row_mut(target).assign(&dataset.feature_row(row));
                support_labels.push(local);
            } else {
                let target = local * spec.q_query() + (i - spec.k_shot());
                query.row_mut(target).assign(&dataset.feature_row(row));
                query_labels.push(local);
            }
        }
    }
    Ok(Episode {
        support: LabeledFeatures {
            features: support,
            labels: support_labels,
        },
        query: LabeledFeatures {
            features: query,
            labels: query_labels,
        },
        class_ids,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{ClassMixtureSpec, ClassNoise, Generated, SyntheticSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn dataset(n_classes: usize, per_class: usize) -> FeatureDataset {
        let spec = ClassMixtureSpec {
            n_classes,
            dim: 8,
            samples_per_class: per_class,
            n_base: 0,
            n_validation: 0,
            mean_scale: 4.0,
            noise: ClassNoise::LogNormal { sigma: 0.5 },
            seed: 5,
        };
        match crate::data::generate(&SyntheticSpec::GaussianMixtureClasses(spec)).unwrap() {
            Generated::Dataset(d) => d,
            _ => unreachable!(),
        }
    }

    #[test]
    fn sizes_follow_the_spec() {
        let ds = dataset(20, 25);
        let spec = EpisodeSpec::new(5, 5, 15, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ep = sample_episode(&ds, &spec, &mut rng).unwrap();
        assert_eq!(ep.support.len(), 25);
        assert_eq!(ep.query.len(), 75);
        assert_eq!(ep.class_ids.len(), 5);
        // every class contributes exactly k support and q query rows
        for local in 0..5 {
            assert_eq!(ep.support.labels.iter().filter(|&&l| l == local).count(), 5);
            assert_eq!(ep.query.labels.iter().filter(|&&l| l == local).count(), 15);
        }
    }

    #[test]
    fn exact_capacity_dataset_uses_every_row() {
        // n classes of exactly k + q rows: the partition is forced.
        let ds = dataset(5, 8);
        let spec = EpisodeSpec::new(5, 3, 5, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let ep = sample_episode(&ds, &spec, &mut rng).unwrap();
        assert_eq!(ep.support.len() + ep.query.len(), ds.n_rows());
        let mut ids = ep.class_ids.clone();
        ids.sort_unstable();
        assert_eq!(ids, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn support_and_query_never_share_a_row() {
        // rows are almost surely distinct vectors, so vector equality
        // detects any index reuse between the two sets
        let ds = dataset(10, 30);
        let spec = EpisodeSpec::new(5, 5, 15, 0).unwrap();
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ep = sample_episode(&ds, &spec, &mut rng).unwrap();
            for s in ep.support.features.rows() {
                for q in ep.query.features.rows() {
                    assert_ne!(s, q, "support row reused in query (seed {seed})");
                }
            }
        }
    }

    #[test]
    fn same_seed_means_same_episode() {
        let ds = dataset(12, 30);
        let spec = EpisodeSpec::new(5, 5, 15, 0).unwrap();
        let mut a = ChaCha8Rng::seed_from_u64(77);
        let mut b = ChaCha8Rng::seed_from_u64(77);
        let ep1 = sample_episode(&ds, &spec, &mut a).unwrap();
        let ep2 = sample_episode(&ds, &spec, &mut b).unwrap();
        assert_eq!(ep1, ep2);
    }

    #[test]
    fn deficient_class_is_named() {
        let ds = dataset(6, 10);
        let spec = EpisodeSpec::new(5, 5, 15, 0).unwrap(); // needs 20 per class
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        match sample_episode(&ds, &spec, &mut rng) {
            Err(FewshotError::InsufficientData { class, needed, available }) => {
                assert_eq!(needed, 20);
                assert_eq!(available, 10);
                assert!(class.starts_with("class_"));
            }
            other => panic!("expected InsufficientData, got {other:?}"),
        }
    }

    #[test]
    fn too_few_novel_classes_is_an_error() {
        let ds = dataset(4, 30);
        let spec = EpisodeSpec::new(5, 5, 5, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        assert!(matches!(
            sample_episode(&ds, &spec, &mut rng),
            Err(FewshotError::InsufficientClasses { .. })
        ));
    }
}
