//! Independent reference implementations used to cross-check the library:
//! a linear-domain exact-posterior coset decision, a quadrature evaluation
//! of the conditional entropy for one-symbol schemes, and a pairwise
//! minimum-distance search. Each is written from the definitions, not by
//! calling the code under test.

use latticewire::coset::{average_energy, modulate};
use latticewire::lattice::{CosetCodebook, SchemeId};
use num_complex::Complex64;

/// Posterior-maximizing coset index computed in the linear domain with a
/// global shift: weight_j = sum over members of exp(-beta (d - d_min)).
/// Ties resolve to the lowest index.
pub fn exact_posterior_decode(
    y: &[Complex64],
    h: Complex64,
    beta: f64,
    codebook: &CosetCodebook,
) -> usize {
    let m = codebook.box_size();
    let distances: Vec<Vec<f64>> = (0..codebook.coset_count())
        .map(|j| {
            codebook
                .coset(j)
                .expect("coset index in range")
                .iter()
                .map(|point| {
                    let x = modulate(point, m).expect("codebook points are in the box");
                    y.iter()
                        .zip(x.symbols())
                        .map(|(&yi, &xi)| (yi - h * xi).norm_sqr())
                        .sum()
                })
                .collect()
        })
        .collect();
    let d_min =
        distances.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    let weights: Vec<f64> = distances
        .iter()
        .map(|ds| ds.iter().map(|d| (-beta * (d - d_min)).exp()).sum())
        .collect();
    let mut best = 0;
    for (j, &w) in weights.iter().enumerate() {
        if w > weights[best] {
            best = j;
        }
    }
    best
}

/// Conditional entropy H(s | z) of a one-symbol scheme by numerical
/// integration over the signal axis, where z carries the full information
/// of the received symbol (the orthogonal axis is independent noise).
/// Unit channel gain; noise variance follows the total-power convention.
pub fn quadrature_h_cond(scheme: SchemeId, snr_db: f64) -> f64 {
    let codebook = scheme.codebook().expect("scheme table is valid");
    assert_eq!(codebook.dimension(), 1, "quadrature oracle covers one-symbol schemes");
    let m = codebook.box_size();
    let scale = average_energy(m).sqrt().recip();
    let offset = (m as f64 - 1.0) / 2.0;
    let amplitudes: Vec<Vec<f64>> = (0..codebook.coset_count())
        .map(|j| {
            codebook
                .coset(j)
                .expect("coset index in range")
                .iter()
                .map(|p| (f64::from(p[0]) - offset) * scale)
                .collect()
        })
        .collect();

    let sigma_axis = (10f64.powf(-snr_db / 10.0) / 2.0).sqrt();
    let lo = amplitudes.iter().flatten().copied().fold(f64::INFINITY, f64::min)
        - 8.0 * sigma_axis;
    let hi = amplitudes.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max)
        + 8.0 * sigma_axis;
    let steps = ((hi - lo) / (sigma_axis / 64.0)).ceil() as usize;
    let dz = (hi - lo) / steps as f64;
    let prior = (codebook.coset_count() as f64).recip();
    let norm = (2.0 * std::f64::consts::PI).sqrt() * sigma_axis;

    // Trapezoid rule over sum_j p(j) f(z|j) h(s|z).
    let integrand = |z: f64| -> f64 {
        let likelihoods: Vec<f64> = amplitudes
            .iter()
            .map(|coset| {
                coset
                    .iter()
                    .map(|a| (-((z - a) / sigma_axis).powi(2) / 2.0).exp() / norm)
                    .sum::<f64>()
                    / coset.len() as f64
            })
            .collect();
        let mix: f64 = likelihoods.iter().map(|f| prior * f).sum();
        if mix <= 0.0 {
            return 0.0;
        }
        let mut h = 0.0;
        for f in &likelihoods {
            let p = prior * f / mix;
            if p > 0.0 {
                h -= p * p.log2();
            }
        }
        mix * h
    };
    let mut total = (integrand(lo) + integrand(hi)) / 2.0;
    for i in 1..steps {
        total += integrand(lo + dz * i as f64);
    }
    total * dz
}

/// Smallest squared Euclidean distance between any two distinct points of
/// the carved codebook, across all cosets, by exhaustive pairs.
pub fn pairwise_min_sq_distance(codebook: &CosetCodebook) -> u64 {
    let points: Vec<&[i32]> = (0..codebook.coset_count())
        .flat_map(|j| codebook.coset(j).expect("coset index in range").iter())
        .map(Vec::as_slice)
        .collect();
    let mut best = u64::MAX;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            let d: u64 = a
                .iter()
                .zip(b.iter())
                .map(|(&x, &y)| u64::from(x.abs_diff(y)).pow(2))
                .sum();
            best = best.min(d);
        }
    }
    best
}
