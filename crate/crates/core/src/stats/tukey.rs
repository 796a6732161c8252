//! Studentized range distribution with infinite degrees of freedom.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use super::special::{norm_cdf, norm_pdf};

pub const TABLE_MIN_K: usize = 2;
pub const TABLE_MAX_K: usize = 30;
/// Significance levels of the embedded table columns.
pub const TABLE_ALPHAS: [f64; 3] = [0.10, 0.05, 0.01];

/// Upper quantiles q_α of the range of k standard normals, k = 2..=30,
/// from 10⁷ simulated draws (seed 1959), generated by `profitcast tables`.
pub const Q_TABLE: [[f64; 3]; 29] = [
    [2.32699357752571, 2.7729925080756694, 3.6426681990732908],
    [2.903250578823914, 3.315444069613865, 4.1208028641789065],
    [3.2412526690069896, 3.63398028112623, 4.4032949607065355],
    [3.478673371491416, 3.857786514585555, 4.6033849734692165],
    [3.66086886670727, 4.0298631157039, 4.756273660140673],
    [3.8081419425498795, 4.169686541056601, 4.881117336106486],
    [3.9312412265506698, 4.286228036129517, 4.987844345992588],
    [4.036700985352316, 4.3867174124880695, 5.079815795498013],
    [4.129576614650846, 4.474326032084681, 5.159204752425342],
    [4.211383146217411, 4.552082250672273, 5.229026175867116],
    [4.284803555869274, 4.6220821975582815, 5.290765589057459],
    [4.351060444877232, 4.684938926747449, 5.3476042760669955],
    [4.412209792614383, 4.743250483480022, 5.400598688285122],
    [4.468104549341783, 4.796466154905346, 5.449157787285214],
    [4.519952204985709, 4.845464893139815, 5.494372732089205],
    [4.567950567274545, 4.890858171766947, 5.535966850887632],
    [4.6126242797523, 4.933476214374867, 5.574644223991401],
    [4.654522145652663, 4.973408225695822, 5.610891803326103],
    [4.694190490300977, 5.0115870183662, 5.644632086021652],
    [4.731514763930227, 5.047305736547382, 5.677608919998347],
    [4.766769815651738, 5.080774933765312, 5.707544210150775],
    [4.800468167358922, 5.112978517397286, 5.73658921602609],
    [4.832443244919812, 5.143644404458232, 5.763846964772185],
    [4.862737974070558, 5.172430824749531, 5.790489823359663],
    [4.891987087570126, 5.200631290670243, 5.816527962298753],
    [4.91997196814008, 5.227623388304776, 5.840587659833445],
    [4.946718664573888, 5.253064386605516, 5.864496543176072],
    [4.972285096409397, 5.277366019944106, 5.887217460274174],
    [4.997051853479421, 5.301148899339237, 5.909669521101071],
];

/// P(range of k standard normals ≤ q), by Simpson quadrature of
/// k ∫ φ(z) [Φ(z+q) − Φ(z)]^{k−1} dz.
pub fn range_cdf(q: f64, k: usize) -> f64 {
    if q <= 0.0 {
        return 0.0;
    }
    let (lo, hi, steps) = (-8.5, 8.5, 2000usize);
    let h = (hi - lo) / steps as f64;
    let f = |z: f64| norm_pdf(z) * libm::pow(norm_cdf(z + q) - norm_cdf(z), (k - 1) as f64);
    let mut s = f(lo) + f(hi);
    for i in 1..steps {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(lo + i as f64 * h);
    }
    (k as f64 * s * h / 3.0).clamp(0.0, 1.0)
}

/// q with P(range > q) = alpha, by bisection on [`range_cdf`].
pub fn range_quantile(alpha: f64, k: usize) -> f64 {
    let (mut lo, mut hi) = (0.0, 12.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if 1.0 - range_cdf(mid, k) > alpha { lo = mid } else { hi = mid }
    }
    0.5 * (lo + hi)
}

/// Monte-Carlo upper quantiles of the range for k = 2..=k_max. One vector
/// of k_max normals per draw serves every k through its prefixes.
pub fn simulate_range_quantiles<R: Rng>(k_max: usize, alphas: &[f64], draws: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let mut ranges: Vec<Vec<f64>> = (TABLE_MIN_K..=k_max).map(|_| Vec::with_capacity(draws)).collect();
    for _ in 0..draws {
        let first: f64 = rng.sample(StandardNormal);
        let (mut lo, mut hi) = (first, first);
        for k in TABLE_MIN_K..=k_max {
            let z: f64 = rng.sample(StandardNormal);
            lo = lo.min(z);
            hi = hi.max(z);
            ranges[k - TABLE_MIN_K].push(hi - lo);
        }
    }
    ranges
        .into_iter()
        .map(|mut r| {
            r.sort_by(f64::total_cmp);
            alphas.iter().map(|&a| upper_quantile(&r, a)).collect()
        })
        .collect()
}

/// Empirical value exceeded with frequency `alpha` in sorted data.
fn upper_quantile(sorted: &[f64], alpha: f64) -> f64 {
    let pos = ((1.0 - alpha) * sorted.len() as f64) as usize;
    sorted[pos.min(sorted.len() - 1)]
}

/// Embedded q_α for `k`, if tabulated.
pub fn table_quantile(alpha: f64, k: usize) -> Option<f64> {
    let col = TABLE_ALPHAS.iter().position(|&a| (a - alpha).abs() < 1e-12)?;
    (TABLE_MIN_K..=TABLE_MAX_K).contains(&k).then(|| Q_TABLE[k - TABLE_MIN_K][col])
}
