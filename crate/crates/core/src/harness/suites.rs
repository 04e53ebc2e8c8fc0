use rand::seq::IndexedRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use super::{Check, ExperimentConfig, Suite, Witness};
use crate::constructions::{krich_line, threshold_clustering};
use crate::data::{dist, sq_dist, Dataset, Partition};
use crate::error::Result;
use crate::kmeans::{
    is_local_min, kmeans_with, kmeans_ideal_with, lloyd, minimizers, seed, KMeansConfig, Seeding,
};
use crate::par::{self, Execution};
use crate::rng::{self, Rng as StreamRng};
use crate::separation::{
    absolute_gap_bound, ball_summaries, certify, motion_gap_bound, takeover_delta_direct,
    takeover_gap_root, takeover_profitable, Takeover,
};
use crate::transforms::{
    centric_transform, interference_witness, motion_transform, scale, TransformRecord,
};

const LAMBDAS: [f64; 3] = [0.9, 0.5, 0.1];
const SEQ: Execution = Execution::Sequential;

pub(super) fn run(suite: Suite, config: &ExperimentConfig) -> Result<Vec<Check>> {
    match suite {
        Suite::ScaleInvariance => Ok(vec![scale_invariance(config)?]),
        Suite::KRichness => k_richness(config),
        Suite::CentricConsistencyLocal => Ok(vec![centric_local(config)?]),
        Suite::CentricConsistencyGlobal => Ok(vec![centric_global(config)?]),
        Suite::MotionConsistency => motion_consistency(config),
        Suite::Separation4Rho => Ok(vec![separation_4rho(config)?]),
        Suite::CorePreservation => Ok(vec![core_preservation(config)?]),
        Suite::AbsoluteGlobal => Ok(vec![absolute_global(config)?]),
        Suite::Interference => Ok(vec![interference()?]),
        Suite::ThresholdFunction => threshold_function(config),
    }
}

/// Independent stream for trial `trial` of check `check`.
fn trial_rng(config: &ExperimentConfig, check: u64, trial: usize) -> StreamRng {
    rng::stream(config.seed, (check << 32) | trial as u64)
}

/// Runs `f` for every trial in parallel; a returned witness marks a failure.
fn trials<F>(config: &ExperimentConfig, check: u64, n: usize, f: F) -> Result<Vec<Witness>>
where
    F: Fn(&mut StreamRng, usize) -> Result<Option<Witness>> + Sync + Send,
{
    par::map_range(config.execution, n, |t| f(&mut trial_rng(config, check, t), t))
        .into_iter()
        .filter_map(Result::transpose)
        .collect()
}

fn witness(trial: usize, ds: &Dataset, p: &Partition, transform: Option<TransformRecord>, detail: String) -> Witness {
    Witness {
        trial,
        dataset: ds.to_rows(),
        partition: p.clone(),
        transform,
        detail,
    }
}

fn uniform_points<R: Rng>(rng: &mut R, n: usize, m: usize, side: f64) -> Result<Dataset> {
    Dataset::new(
        (0..n)
            .map(|_| (0..m).map(|_| rng.random_range(0.0..side)).collect())
            .collect(),
    )
}

/// `count` points uniform in the ball of radius `r` about the origin.
fn ball_points<R: Rng>(rng: &mut R, count: usize, m: usize, r: f64) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| {
            let dir: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
            let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
            let len = r * rng.random::<f64>().powf(1.0 / m as f64);
            dir.iter().map(|v| v * len / norm).collect()
        })
        .collect()
}

fn random_unit<R: Rng>(rng: &mut R, m: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-9 {
            return v.iter().map(|x| x / norm).collect();
        }
    }
}

fn mean_radius(points: &[Vec<f64>]) -> (Vec<f64>, f64) {
    let m = points[0].len();
    let mean: Vec<f64> = (0..m)
        .map(|c| points.iter().map(|p| p[c]).sum::<f64>() / points.len() as f64)
        .collect();
    let r = points.iter().map(|p| dist(p, &mean)).fold(0.0, f64::max);
    (mean, r)
}

/// Two clusters drawn in balls, shifted so their means are `gap(rho_ab)`
/// apart along a random direction. Returns the dataset, its split, both
/// means and `rho_ab`.
struct TwoBalls {
    ds: Dataset,
    partition: Partition,
    means: [Vec<f64>; 2],
    rho: f64,
}

fn two_balls<R: Rng>(rng: &mut R, m: usize, gap: impl Fn(f64) -> f64) -> Result<TwoBalls> {
    let na = rng.random_range(5..=40);
    let nb = rng.random_range(5..=40);
    let (ra0, rb0) = (rng.random_range(0.5..2.0), rng.random_range(0.5..2.0));
    let a = ball_points(rng, na, m, ra0);
    let b = ball_points(rng, nb, m, rb0);
    let (ma, ra) = mean_radius(&a);
    let (mb, rb) = mean_radius(&b);
    let rho = ra.max(rb);
    let dir = random_unit(rng, m);
    let d = gap(rho);
    let mut points: Vec<Vec<f64>> = a.iter().map(|p| p.iter().zip(&ma).map(|(x, c)| x - c).collect()).collect();
    points.extend(b.iter().map(|p| {
        p.iter()
            .zip(&mb)
            .zip(&dir)
            .map(|((x, c), u)| x - c + d * u)
            .collect::<Vec<f64>>()
    }));
    let labels: Vec<usize> = (0..na + nb).map(|i| usize::from(i >= na)).collect();
    let ds = Dataset::new(points)?;
    let partition = Partition::from_labels(&labels)?;
    let means = [ds.mean_of(partition.cluster(0)), ds.mean_of(partition.cluster(1))];
    Ok(TwoBalls {
        ds,
        partition,
        means,
        rho,
    })
}

fn nearest(x: &[f64], centers: &[Vec<f64>]) -> usize {
    let mut best = 0;
    for (j, c) in centers.iter().enumerate().skip(1) {
        if sq_dist(x, c) < sq_dist(x, &centers[best]) {
            best = j;
        }
    }
    best
}

fn scale_invariance(config: &ExperimentConfig) -> Result<Check> {
    const ALPHAS: [f64; 3] = [0.1, 3.0, 10.0];
    let n_trials = config.trials_or(100);
    let failures = trials(config, 1, n_trials, |rng, t| {
        let n = rng.random_range(4..=8);
        let k = rng.random_range(2..=3);
        let m = rng.random_range(1..=3);
        let ds = uniform_points(rng, n, m, 10.0)?;
        let (_, base) = minimizers(&ds, k, config.rel_tol, SEQ)?;
        for alpha in ALPHAS {
            let (_, scaled) = minimizers(&scale(&ds, alpha)?, k, config.rel_tol, SEQ)?;
            if scaled != base {
                return Ok(Some(witness(
                    t,
                    &ds,
                    &base[0],
                    Some(TransformRecord::scale(alpha)),
                    format!("k={k}: {} minimizers before, {} after", base.len(), scaled.len()),
                )));
            }
        }
        Ok(None)
    })?;
    Ok(Check::from_trials(
        "ideal-argmin-set-unchanged-by-scaling",
        n_trials,
        failures,
        format!("argmin sets compared under alpha in {ALPHAS:?}"),
    ))
}

fn compositions(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if n == 0 {
        out.push(prefix.clone());
        return;
    }
    for s in (1..=n.min(max)).rev() {
        prefix.push(s);
        compositions(n - s, s, prefix, out);
        prefix.pop();
    }
}

fn k_richness(config: &ExperimentConfig) -> Result<Vec<Check>> {
    let mut shapes = Vec::new();
    for n in 2..=9 {
        compositions(n, n, &mut Vec::new(), &mut shapes);
    }
    shapes.retain(|s| s.len() >= 2);
    let outcomes = par::map_slice(config.execution, &shapes, |sizes| -> Result<Option<Witness>> {
        let line = krich_line(sizes)?;
        let got = kmeans_ideal_with(&line.dataset, sizes.len(), SEQ)?;
        Ok((got.partition != line.target).then(|| {
            witness(0, &line.dataset, &line.target, None, format!("sizes {sizes:?} not recovered"))
        }))
    });
    let failures: Vec<Witness> = outcomes.into_iter().filter_map(Result::transpose).collect::<Result<_>>()?;
    let mut checks = vec![Check::from_trials(
        "ideal-recovers-every-composition",
        shapes.len(),
        failures,
        "every cluster-size composition with n <= 9".to_string(),
    )];

    // one Lloyd run from uniform seeds hits the target at least k!/k^k of the time
    let n_trials = config.trials_or(10_000);
    for k in 2..=4usize {
        let line = krich_line(&vec![3; k])?;
        let hits = par::count_range(config.execution, n_trials, |t| {
            let mut rng = trial_rng(config, 20 + k as u64, t);
            let cfg = KMeansConfig::new(k)
                .seeding(Seeding::UniformRandom)
                .restarts(1)
                .seed(rng.random());
            kmeans_with(&line.dataset, &cfg, SEQ).is_ok_and(|r| r.partition == line.target)
        });
        let q = (1..=k).product::<usize>() as f64 / (k as f64).powi(k as i32);
        let rate = hits as f64 / n_trials as f64;
        let sigma = (q * (1.0 - q) / n_trials as f64).sqrt();
        let passed = rate >= q - 3.0 * sigma;
        let mut check = Check::from_trials(
            &format!("random-restart-hit-rate-k{k}"),
            n_trials,
            Vec::new(),
            format!("hit rate {rate:.4} vs bound {q:.4} (3 sigma = {:.4})", 3.0 * sigma),
        )
        .metric("hit_rate", rate)
        .metric("bound", q)
        .metric("sigma", sigma);
        check.passed = passed;
        check.violations = usize::from(!passed);
        checks.push(check);
    }

    // frequency of one uniform seed per cluster on balanced data
    let per = 200;
    let k = 3;
    let mut labels = Vec::new();
    let mut xs = Vec::new();
    for c in 0..k {
        for i in 0..per {
            xs.push(100.0 * c as f64 + i as f64 / per as f64);
            labels.push(c);
        }
    }
    let ds = Dataset::from_line(&xs)?;
    let hits = par::count_range(config.execution, n_trials, |t| {
        let mut rng = trial_rng(config, 30, t);
        seed(&ds, k, &Seeding::UniformRandom, &mut rng).is_ok_and(|centers| {
            let mut seen = [false; 3];
            for c in &centers {
                seen[(c[0] / 100.0).round() as usize] = true;
            }
            seen.iter().all(|&s| s)
        })
    });
    let q = crate::separation::seeding_success(1.0 / k as f64, k, crate::separation::SeedingStrategy::Random, None, None)?.q;
    let rate = hits as f64 / n_trials as f64;
    let sigma = (q * (1.0 - q) / n_trials as f64).sqrt();
    let within = (rate - q).abs() <= 3.0 * sigma;
    let mut check = Check::from_trials(
        "uniform-seeding-one-per-cluster",
        n_trials,
        Vec::new(),
        format!("observed {rate:.4} vs predicted {q:.4}"),
    )
    .metric("rate", rate)
    .metric("predicted", q)
    .metric("sigma", sigma);
    check.passed = within;
    check.violations = usize::from(!within);
    checks.push(check);
    Ok(checks)
}

/// Applies improving single-point moves until none is left.
fn descend(ds: &Dataset, mut p: Partition) -> Result<Partition> {
    loop {
        let report = is_local_min(ds, &p)?;
        let Some(mv) = report.witness else {
            return Ok(p);
        };
        let mut labels = p.labels().to_vec();
        labels[mv.point] = mv.to;
        p = Partition::from_labels(&labels)?;
    }
}

fn centric_local(config: &ExperimentConfig) -> Result<Check> {
    let n_trials = config.trials_or(500);
    let failures = trials(config, 3, n_trials, |rng, t| {
        let n = rng.random_range(6..=30);
        let m = rng.random_range(1..=3);
        let k = rng.random_range(2..=4.min(n / 2));
        let ds = uniform_points(rng, n, m, 10.0)?;
        let cfg = KMeansConfig::new(k)
            .seeding(Seeding::UniformRandom)
            .restarts(1)
            .seed(rng.random());
        let start = kmeans_with(&ds, &cfg, SEQ)?.partition;
        let p = descend(&ds, start)?;
        let c = rng.random_range(0..p.k());
        let lambda = *LAMBDAS.choose(rng).expect("non-empty");
        let moved = centric_transform(&ds, &p, c, lambda)?;
        let report = is_local_min(&moved, &p)?;
        Ok((!report.is_local_min).then(|| {
            witness(
                t,
                &ds,
                &p,
                Some(TransformRecord::centric(c, lambda)),
                format!("improving move after transform: {:?}", report.witness),
            )
        }))
    })?;
    Ok(Check::from_trials(
        "local-minimum-survives-centric-transform",
        n_trials,
        failures,
        "Lloyd solutions polished by single-point moves, then one cluster contracted".to_string(),
    ))
}

fn centric_global(config: &ExperimentConfig) -> Result<Check> {
    let n_trials = config.trials_or(200);
    let failures = trials(config, 4, n_trials, |rng, t| {
        let n = rng.random_range(4..=10);
        let k = rng.random_range(2..=3);
        let m = rng.random_range(1..=2);
        let ds = uniform_points(rng, n, m, 10.0)?;
        let (_, before) = minimizers(&ds, k, config.rel_tol, SEQ)?;
        let p = before[0].clone();
        let c = rng.random_range(0..k);
        let lambda = *LAMBDAS.choose(rng).expect("non-empty");
        let moved = centric_transform(&ds, &p, c, lambda)?;
        let (_, after) = minimizers(&moved, k, config.rel_tol, SEQ)?;
        Ok((!after.contains(&p)).then(|| {
            witness(
                t,
                &ds,
                &p,
                Some(TransformRecord::centric(c, lambda)),
                format!("global minimizer after transform: {:?}", after[0].clusters()),
            )
        }))
    })?;
    Ok(Check::from_trials(
        "global-minimum-survives-centric-transform",
        n_trials,
        failures,
        "exhaustive minimizer before and after contracting one cluster".to_string(),
    ))
}

fn motion_consistency(config: &ExperimentConfig) -> Result<Vec<Check>> {
    let mut checks = Vec::new();

    let mut worst: f64 = 0.0;
    for &r in &[0.25, 1.0, 3.5] {
        for &n in &[1, 10, 100] {
            let b = motion_gap_bound(n, r, n, r)?;
            worst = worst.max((b - r * (3f64.sqrt() - 1.0)).abs());
        }
    }
    let ok = worst <= 1e-12;
    checks.push(
        Check {
            passed: ok,
            violations: usize::from(!ok),
            ..Check::from_trials("equal-clusters-bound", 9, Vec::new(), format!("max deviation from r(sqrt3-1): {worst:.3e}"))
        }
        .metric("max_abs_deviation", worst),
    );

    // worst-case takeover at the bound, every n1 + n2 <= 200 and n21 <= n2/2
    const RADII: [(f64, f64); 3] = [(1.0, 1.0), (1.0, 0.5), (0.5, 1.5)];
    let per_n1: Vec<Result<(usize, Vec<Witness>)>> = par::map_range(config.execution, 199, |i| {
        let n1 = i + 1;
        let mut count = 0;
        let mut bad = Vec::new();
        for n2 in 2..=200 - n1 {
            for &(r1, r2) in &RADII {
                let g = motion_gap_bound(n1, r1, n2, r2)?;
                for n21 in 1..=n2 / 2 {
                    count += 1;
                    let t = Takeover::at_edge(n1, r1, n2, r2, n21, g);
                    let delta = takeover_delta_direct(&t)?;
                    let scale = (n1 + n2) as f64 * (r1 + r2 + g).powi(2);
                    if takeover_profitable(&t)? || delta < -1e-9 * scale {
                        bad.push(Witness {
                            trial: count,
                            dataset: Vec::new(),
                            partition: Partition::whole(2),
                            transform: None,
                            detail: format!("{t:?} delta={delta:e}"),
                        });
                    }
                }
            }
        }
        Ok((count, bad))
    });
    let mut total = 0;
    let mut bad = Vec::new();
    for r in per_n1 {
        let (c, b) = r?;
        total += c;
        bad.extend(b);
    }
    checks.push(Check::from_trials(
        "takeover-unprofitable-at-bound",
        total,
        bad,
        "edge takeovers with n1 + n2 <= 200, n21 <= n2/2, gap = bound".to_string(),
    ));

    // the bound is never below the exact break-even gap
    let n_trials = config.trials_or(1000);
    let failures = trials(config, 5, n_trials, |rng, t| {
        let n1 = rng.random_range(1..=100);
        let n2 = rng.random_range(2..=100);
        let r1 = rng.random_range(0.1..3.0);
        let r2 = rng.random_range(0.1..3.0);
        let bound = motion_gap_bound(n1, r1, n2, r2)?;
        for n21 in 1..=n2 / 2 {
            let r21 = rng.random_range(0.0..=r2);
            let root = takeover_gap_root(n1, r1, n2, r2, n21, r21);
            if root > bound + 1e-12 * (1.0 + bound.abs()) {
                return Ok(Some(Witness {
                    trial: t,
                    dataset: Vec::new(),
                    partition: Partition::whole(2),
                    transform: None,
                    detail: format!("n1={n1} r1={r1} n2={n2} r2={r2} n21={n21} r21={r21}: root {root} > bound {bound}"),
                }));
            }
        }
        Ok(None)
    })?;
    checks.push(Check::from_trials(
        "bound-dominates-break-even-gap",
        n_trials,
        failures,
        "random sizes and radii, every n21 <= n2/2".to_string(),
    ));

    // pushing a cluster straight away from the other is a legal motion
    let failures = trials(config, 6, n_trials, |rng, t| {
        let tb = two_balls(rng, 2, |rho| 2.0 * rho + trial_gap(t))?;
        let away: Vec<f64> = tb.means[1].iter().zip(&tb.means[0]).map(|(b, a)| (b - a) * 0.5).collect();
        let out = motion_transform(&tb.ds, &tb.partition, 1, &away)?;
        Ok((!out.legal).then(|| {
            witness(t, &tb.ds, &tb.partition, Some(TransformRecord::motion(1, away.clone())), format!("{out:?}"))
        }))
    })?;
    checks.push(Check::from_trials(
        "outward-motion-is-legal",
        n_trials,
        failures,
        "disjoint balls, second cluster moved along the center line".to_string(),
    ));
    Ok(checks)
}

/// A deterministic positive gap that varies with the trial index.
fn trial_gap(t: usize) -> f64 {
    0.1 + (t % 7) as f64 * 0.3
}

fn separation_4rho(config: &ExperimentConfig) -> Result<Check> {
    let n_trials = config.trials_or(1000);
    let failures = trials(config, 7, n_trials, |rng, t| {
        let m = rng.random_range(1..=3);
        let stretch = 1.0 + 0.5 * rng.random::<f64>();
        let tb = two_balls(rng, m, |rho| 4.0 * rho * stretch)?;
        let seeds: Vec<Vec<f64>> = (0..2)
            .map(|c| {
                let members = tb.partition.cluster(c);
                tb.ds.point(members[rng.random_range(0..members.len())]).to_vec()
            })
            .collect();
        let first_leaks = (0..tb.ds.len())
            .filter(|&i| nearest(tb.ds.point(i), &seeds) != tb.partition.label(i))
            .count();
        let cfg = KMeansConfig::new(2).seeding(Seeding::ExplicitCenters(seeds.clone()));
        let end = lloyd(&tb.ds, &seeds, &cfg)?;
        Ok((first_leaks > 0 || end.partition != tb.partition).then(|| {
            witness(
                t,
                &tb.ds,
                &tb.partition,
                None,
                format!("seeds {seeds:?}: {first_leaks} leaks after one step, final {:?}", end.partition.sizes()),
            )
        }))
    })?;
    Ok(Check::from_trials(
        "one-seed-per-ball-keeps-balls",
        n_trials,
        failures,
        "two balls with centers 4 to 6 rho apart, data-point seeds".to_string(),
    ))
}

fn core_preservation(config: &ExperimentConfig) -> Result<Check> {
    let n_trials = config.trials_or(1000);
    let mut in_core_total = 0usize;
    let outcomes = par::map_range(config.execution, n_trials, |t| -> Result<(usize, Option<Witness>)> {
        let mut rng = trial_rng(config, 8, t);
        let m = rng.random_range(1..=3);
        let frac = rng.random_range(0.05..2.0);
        let tb = two_balls(&mut rng, m, |rho| 2.0 * rho + frac * rho)?;
        let g = dist(&tb.means[0], &tb.means[1]) - 2.0 * tb.rho;
        // any seed inside each ball
        let seeds: Vec<Vec<f64>> = (0..2)
            .map(|c| {
                let off = ball_points(&mut rng, 1, m, tb.rho).remove(0);
                tb.means[c].iter().zip(&off).map(|(a, b)| a + b).collect()
            })
            .collect();
        let mut in_core = 0;
        let mut leaks = Vec::new();
        for i in 0..tb.ds.len() {
            let own = tb.partition.label(i);
            if dist(tb.ds.point(i), &tb.means[own]) <= g / 2.0 {
                in_core += 1;
                if nearest(tb.ds.point(i), &seeds) != own {
                    leaks.push(i);
                }
            }
        }
        let w = (!leaks.is_empty()).then(|| {
            witness(t, &tb.ds, &tb.partition, None, format!("g={g} seeds {seeds:?}: core points {leaks:?} cross"))
        });
        Ok((in_core, w))
    });
    let mut failures = Vec::new();
    for o in outcomes {
        let (c, w) = o?;
        in_core_total += c;
        failures.extend(w);
    }
    Ok(Check::from_trials(
        "cores-never-cross",
        n_trials,
        failures,
        format!("centers 2 rho + g apart, seeds anywhere in the balls; {in_core_total} core points checked"),
    )
    .metric("core_points", in_core_total as f64))
}

fn absolute_global(config: &ExperimentConfig) -> Result<Check> {
    let n_trials = config.trials_or(100);
    let failures = trials(config, 9, n_trials, |rng, t| {
        let k = rng.random_range(2..=3);
        let m = 2;
        let sizes: Vec<usize> = (0..k).map(|_| rng.random_range(2..=10 / k)).collect();
        let clusters: Vec<Vec<Vec<f64>>> = sizes
            .iter()
            .map(|&s| {
                let r = rng.random_range(0.3..1.5);
                let pts = ball_points(rng, s, m, r);
                let (mean, _) = mean_radius(&pts);
                pts.iter().map(|p| p.iter().zip(&mean).map(|(x, c)| x - c).collect()).collect()
            })
            .collect();
        let labels: Vec<usize> = sizes.iter().enumerate().flat_map(|(c, &s)| std::iter::repeat_n(c, s)).collect();
        let p = Partition::from_labels(&labels)?;
        let centered = Dataset::new(clusters.concat())?;
        let balls = ball_summaries(&centered, &p)?;
        let bound = absolute_gap_bound(&balls, k, centered.len())?.bound;
        // lay the balls out along a random direction with at least the bound between surfaces
        let dir = random_unit(rng, m);
        let mut offset = 0.0;
        let mut points = Vec::new();
        for (c, pts) in clusters.iter().enumerate() {
            if c > 0 {
                offset += balls[c - 1].radius + balls[c].radius + bound * (1.0 + 0.5 * rng.random::<f64>());
            }
            points.extend(pts.iter().map(|q| q.iter().zip(&dir).map(|(x, u)| x + offset * u).collect::<Vec<f64>>()));
        }
        let ds = Dataset::new(points)?;
        let cert = certify(&ds, &p)?;
        if !cert.absolute {
            return Ok(Some(witness(t, &ds, &p, None, "generated instance failed certification".to_string())));
        }
        let best = kmeans_ideal_with(&ds, k, SEQ)?;
        Ok((best.partition != p).then(|| {
            witness(t, &ds, &p, None, format!("global minimizer {:?}", best.partition.clusters()))
        }))
    })?;
    Ok(Check::from_trials(
        "certified-partition-is-global-minimum",
        n_trials,
        failures,
        "certified-absolute instances with n <= 10, checked exhaustively".to_string(),
    ))
}

fn interference() -> Result<Check> {
    let w = interference_witness()?;
    let holds = w.holds();
    let rows: Vec<Vec<f64>> = w.original.iter().map(|&x| vec![x]).collect();
    Ok(Check {
        name: "transform-then-rescale-pulls-clusters-closer".to_string(),
        passed: holds,
        trials: 1,
        violations: usize::from(!holds),
        summary: format!(
            "line {:?} -> {:?}, then scaled by {}; shrunk cross pairs (i, j, before, after): {:?}",
            w.original, w.transformed, w.alpha, w.decreased
        ),
        metrics: Default::default(),
        witness: Some(Witness {
            trial: 0,
            dataset: rows,
            partition: w.partition.clone(),
            transform: Some(TransformRecord::scale(w.alpha)),
            detail: format!("transformed line {:?}; gamma check {}", w.transformed, w.gamma.is_gamma),
        }),
    })
}

fn threshold_instance<R: Rng>(rng: &mut R) -> Result<Dataset> {
    let n = rng.random_range(3..=30);
    let xs: Vec<f64> = if rng.random::<bool>() {
        (0..n).map(|_| rng.random::<f64>()).collect()
    } else {
        let k = rng.random_range(2..=5);
        let centers: Vec<f64> = (0..k).map(|_| rng.random::<f64>()).collect();
        let noise = Normal::new(0.0, 0.01).expect("valid normal");
        (0..n)
            .map(|_| centers[rng.random_range(0..k)] + noise.sample(rng))
            .collect()
    };
    Dataset::from_line(&xs)
}

fn range(ds: &Dataset) -> (f64, f64) {
    ds.points()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p[0]), hi.max(p[0])))
}

fn threshold_function(config: &ExperimentConfig) -> Result<Vec<Check>> {
    let n_trials = config.trials_or(500);
    let failures = trials(config, 10, n_trials, |rng, t| {
        let ds = threshold_instance(rng)?;
        let p = threshold_clustering(&ds)?;
        for _ in 0..10 {
            let alpha = 10f64.powf(rng.random_range(-3.0..3.0));
            if threshold_clustering(&scale(&ds, alpha)?)? != p {
                return Ok(Some(witness(t, &ds, &p, Some(TransformRecord::scale(alpha)), "partition changed".into())));
            }
        }
        Ok(None)
    })?;
    let scale_check = Check::from_trials(
        "scale-invariance",
        n_trials,
        failures,
        "ten log-uniform factors in [1e-3, 1e3] per instance".to_string(),
    );

    // contracting a cluster that holds the leftmost or rightmost point
    // shrinks the overall range, and with it the linking threshold
    let outcomes = par::map_range(config.execution, n_trials, |t| -> Result<Option<(Witness, bool)>> {
        let mut rng = trial_rng(config, 11, t);
        let ds = threshold_instance(&mut rng)?;
        let p = threshold_clustering(&ds)?;
        let c = rng.random_range(0..p.k());
        let lambda = *LAMBDAS.choose(&mut rng).expect("non-empty");
        let moved = centric_transform(&ds, &p, c, lambda)?;
        let after = threshold_clustering(&moved)?;
        if after == p {
            return Ok(None);
        }
        let (lo, hi) = range(&ds);
        let (lo2, hi2) = range(&moved);
        let holds_extreme = p.cluster(c).iter().any(|&i| ds.point(i)[0] == lo || ds.point(i)[0] == hi);
        let explained = holds_extreme && hi2 - lo2 < hi - lo;
        let w = witness(
            t,
            &ds,
            &p,
            Some(TransformRecord::centric(c, lambda)),
            format!(
                "range {:.6} -> {:.6}; partition after {:?}",
                hi - lo,
                hi2 - lo2,
                after.clusters()
            ),
        );
        Ok(Some((w, explained)))
    });
    let mut failures = Vec::new();
    let mut explained = 0;
    for o in outcomes {
        if let Some((w, e)) = o? {
            explained += usize::from(e);
            failures.push(w);
        }
    }
    let violations = failures.len();
    let centric_check = Check::from_trials(
        "centric-consistency",
        n_trials,
        failures,
        format!(
            "{violations} of {n_trials} instances changed; {explained} of them contracted a cluster \
             holding an extreme point and so shrank the range that sets the threshold"
        ),
    )
    .metric("violations", violations as f64)
    .metric("explained_by_range_shrink", explained as f64);
    Ok(vec![scale_check, centric_check])
}
