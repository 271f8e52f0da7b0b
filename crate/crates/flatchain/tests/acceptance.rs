//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::time::Instant;

use flatchain_core::coeffgroup::min_nonzero_norm;
use flatchain_core::experiments::{
    ball_growth_check, build_nonrectifiable_chain, classification_report, dyadic_path_samples, BallGrowthInstance,
    ClassificationWitness,
};
use flatchain_core::flatnorm::{flat_distance, flat_exact_zero_chain, flat_upper_bound};
use flatchain_core::numeric::{distance, dot, f64_to_rational, fsum, int, rat, sqrt, sub_points, to_f64};
use flatchain_core::polychain::cube_chain;
use flatchain_core::sampling::{
    random_element, random_measure, random_nonzero_element, random_path, random_plane, random_point,
    random_segments, random_simplices, random_zero_chain,
};
use flatchain_core::sizefunc::{classify_phi_rectifiability, flat_size, phi_mass, WeightFunction};
use flatchain_core::slicing::{deformation_sample, is_transverse, slice_by_plane, slice_mass_monte_carlo};
use flatchain_core::zerochain::{chain_to_measure, cone_flat_bound, measure_to_chain_dyadic};
use flatchain_core::{Alpha, Chain, CoordinateProjection, GridSpec, Group, Point, Rational, Simplex, ZeroChain};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn groups() -> Vec<Group> {
    vec![
        Group::Integers,
        Group::IntegersModP(5),
        Group::Reals,
        Group::RealsAlphaNorm(Alpha::new(1, 2).unwrap()),
        Group::PAdicRationals(3),
        Group::PAdicIntegers(2),
    ]
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn norm_axioms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for group in groups() {
        for _ in 0..10_000 {
            let g = random_element(&mut rng, group);
            let h = random_element(&mut rng, group);
            check(g.neg().norm() == g.norm(), || format!("{group}: |-g| != |g| at {g}"))?;
            let sum = g.add(&h).map_err(e)?;
            check(sum.norm() <= g.norm() + h.norm() + 1e-12, || format!("{group}: triangle fails at {g}, {h}"))?;
            check((g.norm() == 0.0) == g.is_zero(), || format!("{group}: |g| = 0 iff g = 0 fails at {g}"))?;
        }
    }
    Ok("6 groups x 10^4 pairs".into())
}

fn chi_sandwich() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst_slack = f64::INFINITY;
    for group in groups() {
        for _ in 0..200 {
            let atoms = rng.gen_range(0..=6);
            let a = random_zero_chain(&mut rng, group, atoms, 2).map_err(e)?;
            let upper = flat_upper_bound(&a.to_chain()).map_err(e)?.value;
            let chi = a.chi().norm();
            let cap = chi + a.mass() * a.support_diameter() + 1e-12;
            check(chi <= upper + 1e-12 && upper <= cap, || format!("{group}: {chi} <= {upper} <= {cap} fails"))?;
            worst_slack = worst_slack.min(cap - upper);
            let x = a.centroid().unwrap_or_else(|| vec![int(0), int(0)]);
            let cone = cone_flat_bound(&a, &x).map_err(e)?;
            let rhs = a.sub(&ZeroChain::new(group, 2, vec![(cone.chi.clone(), x)]).map_err(e)?).map_err(e)?;
            let lhs = ZeroChain::from_chain(&cone.cone.boundary().map_err(e)?).map_err(e)?;
            check(lhs == rhs, || format!("{group}: cone boundary differs from A - chi(A)[x]"))?;
        }
    }
    Ok(format!("1200 chains, min slack to upper cap {worst_slack:.3e}"))
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Exhaustive transport on the coefficient lattice `(1/D)ℤ` of a real
/// 0-chain: each unit of a positive atom is either matched with a unit of a
/// negative atom (cost `|x − y|`) or discarded through a unit cone (cost 1).
fn lattice_oracle(a: &ZeroChain) -> f64 {
    let den = a.atoms().iter().fold(1i64, |acc, (g, _)| {
        let d: i64 = g.value().denom().try_into().unwrap();
        acc / gcd(acc, d) * d
    });
    let units: Vec<i64> = a
        .atoms()
        .iter()
        .map(|(g, _)| (g.value() * Rational::from_integer(den.into())).to_integer().try_into().unwrap())
        .collect();
    let pos: Vec<usize> = (0..units.len()).filter(|&i| units[i] > 0).collect();
    let neg: Vec<usize> = (0..units.len()).filter(|&i| units[i] < 0).collect();
    let pairs: Vec<(usize, usize, f64)> = pos
        .iter()
        .flat_map(|&i| neg.iter().map(move |&j| (i, j)))
        .map(|(i, j)| (i, j, distance(&a.atoms()[i].1, &a.atoms()[j].1)))
        .collect();
    let total: f64 = units.iter().map(|u| u.abs() as f64).sum();
    fn search(k: usize, pairs: &[(usize, usize, f64)], left: &mut Vec<i64>, acc: f64, best: &mut f64) {
        if k == pairs.len() {
            *best = best.min(acc);
            return;
        }
        let (i, j, d) = pairs[k];
        let cap = left[i].min(-left[j]);
        for t in 0..=cap {
            left[i] -= t;
            left[j] += t;
            search(k + 1, pairs, left, acc + t as f64 * (d - 2.0), best);
            left[i] += t;
            left[j] -= t;
        }
    }
    let mut best = 0.0f64;
    search(0, &pairs, &mut units.clone(), 0.0, &mut best);
    (total + best) / den as f64
}

fn flat_norm_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let r = Group::Reals;
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let atoms = rng.gen_range(1..=5);
        let a = random_zero_chain(&mut rng, r, atoms, 2).map_err(e)?;
        let exact = flat_exact_zero_chain(&a).map_err(e)?;
        let oracle = lattice_oracle(&a);
        worst = worst.max((exact - oracle).abs());
        check((exact - oracle).abs() <= 1e-6, || format!("exact {exact} vs lattice {oracle}"))?;
    }
    let mut dipoles = 0;
    while dipoles < 100 {
        let g = random_nonzero_element(&mut rng, r);
        let x = random_point(&mut rng, 2, 3, 5);
        let y = random_point(&mut rng, 2, 3, 5);
        if x == y {
            continue;
        }
        let a = ZeroChain::new(r, 2, vec![(g.clone(), x.clone()), (g.neg(), y.clone())]).map_err(e)?;
        let expected = (2.0 * g.norm()).min(g.norm() * distance(&x, &y));
        let value = flat_exact_zero_chain(&a).map_err(e)?;
        check((value - expected).abs() <= 1e-9, || format!("dipole {value} vs {expected}"))?;
        dipoles += 1;
    }
    Ok(format!("100 instances, max deviation {worst:.3e}; 100 dipoles"))
}

fn slice_commutation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    // (ambient, chain dim, plane dim); slices have dimension 1 or 2.
    let shapes = [(2, 2, 1), (3, 2, 2), (3, 3, 2), (3, 3, 1)];
    let mut done = 0;
    let mut tries = 0;
    while done < 100 {
        tries += 1;
        if tries > 10_000 {
            return Err(format!("only {done} transverse instances"));
        }
        let (n, k, m) = shapes[done % shapes.len()];
        let group = groups()[rng.gen_range(0..6)];
        let a = random_simplices(&mut rng, group, 3, k, n).map_err(e)?;
        let scale = Rational::from_integer(BigInt::from(rng.gen_range(0..6)));
        let plane = random_plane(&mut rng, n, m);
        let moved = flatchain_core::OrientedAffinePlane::new(
            plane.base().iter().map(|c| c + &scale).collect(),
            plane.dirs().to_vec(),
        )
        .map_err(e)?;
        if !is_transverse(&a, &moved) {
            continue;
        }
        let slice = slice_by_plane(&a, &moved).map_err(e)?;
        let lhs = slice.boundary().map_err(e)?;
        let rhs = slice_by_plane(&a.boundary().map_err(e)?, &moved).map_err(e)?;
        check(lhs == rhs, || format!("boundary of slice differs in R^{n}, k = {k}, m = {m}"))?;
        done += 1;
    }
    Ok(format!("100 transverse instances ({tries} planes drawn)"))
}

fn slice_mass_integral() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for i in 0..50 {
        let group = groups()[rng.gen_range(0..6)];
        let (a, proj, per_axis) = if i % 2 == 0 {
            (random_segments(&mut rng, group, 4, 2).map_err(e)?, CoordinateProjection::new(2, vec![0]).map_err(e)?, 256)
        } else {
            (random_simplices(&mut rng, group, 2, 2, 3).map_err(e)?, CoordinateProjection::new(3, vec![0, 1]).map_err(e)?, 24)
        };
        let mc = slice_mass_monte_carlo(&a, &proj, per_axis, &mut rng).map_err(e)?;
        worst = worst.max(mc.integral / mc.mass);
        check(mc.integral <= mc.mass * 1.01, || format!("estimate {} > 1.01 x mass {}", mc.integral, mc.mass))?;
    }
    for _ in 0..10 {
        let group = groups()[rng.gen_range(0..6)];
        let axis = rng.gen_range(0..2);
        let p = random_point(&mut rng, 2, 3, 4);
        let mut q = p.clone();
        q[axis] += rat(rng.gen_range(1..20), 4);
        let a = Chain::single(random_nonzero_element(&mut rng, group), Simplex::new(vec![p, q]).map_err(e)?).map_err(e)?;
        let mc = slice_mass_monte_carlo(&a, &CoordinateProjection::new(2, vec![axis]).map_err(e)?, 64, &mut rng).map_err(e)?;
        check((mc.integral - mc.mass).abs() <= 0.01 * mc.mass, || format!("aligned: {} vs {}", mc.integral, mc.mass))?;
    }
    Ok(format!("50 chains, max estimate/mass {worst:.4}; 10 aligned segments within 1%"))
}

fn dyadic_machinery() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut count = 0;
    for group in groups() {
        for n in 1..=2usize {
            for _ in 0..10 {
                let nu = random_measure(&mut rng, group, n, 4, 8).map_err(e)?;
                let levels = measure_to_chain_dyadic(&nu, 4).map_err(e)?;
                for (i, lv) in levels.iter().enumerate() {
                    let values = nu.aggregate(lv.level).map_err(e)?;
                    let back = chain_to_measure(&lv.chain, lv.level).map_err(e)?;
                    check(back.cubes() == &values, || format!("{group}: roundtrip differs at level {}", lv.level))?;
                    if i == 0 {
                        continue;
                    }
                    let t = lv.connector.as_ref().ok_or("missing connector")?;
                    let diff = lv.chain.sub(&levels[i - 1].chain).map_err(e)?;
                    let boundary = ZeroChain::from_chain(&t.boundary().map_err(e)?).map_err(e)?;
                    check(boundary == diff, || format!("{group}: boundary of T_{} differs", lv.level))?;
                    let step = 0.5f64.powi(lv.level as i32 + 1) * sqrt(n as f64);
                    let total: Rational = values.values().map(|g| g.norm_rational()).sum();
                    let closed = to_f64(&(total * f64_to_rational(step)));
                    check(lv.cauchy_bound == closed, || {
                        format!("{group}: M(T_{}) = {} vs {closed}", lv.level, lv.cauchy_bound)
                    })?;
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} measures, levels 0..=4"))
}

fn deformation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let n = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=n);
        let eps = rat(1, rng.gen_range(1..=4));
        let group = groups()[rng.gen_range(0..6)];
        let mut a = Chain::zero(group, n, k);
        for _ in 0..3 {
            let mut axes: Vec<usize> = (0..n).collect();
            while axes.len() > k {
                axes.remove(rng.gen_range(0..axes.len()));
            }
            let corner: Point = (0..n).map(|_| &eps * Rational::from_integer(rng.gen_range(-3..=3).into())).collect();
            let cube = cube_chain(&random_nonzero_element(&mut rng, group), &corner, &axes, &eps).map_err(e)?;
            a = a.add(&cube).map_err(e)?;
        }
        let offset: Point = (0..n).map(|_| &eps * rat(rng.gen_range(-499..=499), 1000)).collect();
        let grid = GridSpec::new(eps.clone(), offset).map_err(e)?;
        check(deformation_sample(&a, &grid).map_err(e)? == a, || format!("grid chain moved (N = {n}, k = {k})"))?;
    }
    let mut monotone = 0;
    for _ in 0..20 {
        let a = random_segments(&mut rng, Group::Reals, 1, 2).map_err(e)?;
        let mut uppers = Vec::new();
        for j in 0..4 {
            let eps = rat(1, 1 << j);
            let offset: Point = (0..2).map(|_| &eps * rat(rng.gen_range(-99..=99), 1000)).collect();
            let d = deformation_sample(&a, &GridSpec::new(eps, offset).map_err(e)?).map_err(e)?;
            uppers.push(flat_distance(&d, &a).map_err(e)?.upper);
        }
        if uppers.windows(2).all(|w| w[1] <= w[0] + 1e-12) {
            monotone += 1;
        }
    }
    check(monotone >= 18, || format!("flat distance nonincreasing on only {monotone}/20"))?;
    Ok(format!("40 grid chains fixed; distances nonincreasing on {monotone}/20"))
}

fn ball_growth() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = f64::INFINITY;
    for i in 0..100 {
        let group = groups()[rng.gen_range(0..6)];
        let n = rng.gen_range(2..=3);
        let t = if i % 2 == 0 {
            let vertices = rng.gen_range(2..=6);
            random_path(&mut rng, group, vertices, n).map_err(e)?
        } else {
            random_segments(&mut rng, group, 4, n).map_err(e)?
        };
        let points = t.support_points();
        if points.is_empty() {
            return Err("empty random chain".into());
        }
        let a = points[rng.gen_range(0..points.len())].clone();
        let reach = points.iter().map(|p| distance(p, &a)).fold(0.0, f64::max);
        let radii = (0..50).map(|_| rng.gen::<f64>() * 1.25 * reach).collect();
        let inst = BallGrowthInstance::new(t, a, radii).map_err(e)?;
        for row in ball_growth_check(&inst).map_err(e)? {
            worst = worst.min(row.margin);
            check(row.margin >= -1e-12, || format!("margin {} at radius {}", row.margin, row.radius))?;
        }
    }
    Ok(format!("100 chains x 50 radii, min margin {worst:.3e}"))
}

fn nonrectifiable_witness() -> Outcome {
    let r = Group::Reals;
    let path = dyadic_path_samples(r, |t| r.element(t.clone()).unwrap(), &int(0), &int(1), 12).map_err(e)?;
    let report = build_nonrectifiable_chain(&path, 12).map_err(e)?;
    for lv in &report.levels {
        let n = lv.level as i32;
        check(lv.max_atom_norm == 2f64.powi(-n), || format!("level {n}: max atom norm {}", lv.max_atom_norm))?;
        check(lv.mass == 1.0, || format!("level {n}: mass {}", lv.mass))?;
        if n >= 1 {
            let expected = 2f64.powi(-n - 1) * sqrt(1.0);
            check(lv.cauchy_bound == Some(expected), || format!("level {n}: Cauchy bound {:?}", lv.cauchy_bound))?;
            check(lv.connector_ok, || format!("level {n}: connector boundary differs"))?;
        }
    }
    Ok("levels 0..=12 exact; Cauchy bounds for levels 1..=12".into())
}

fn classification() -> Outcome {
    for (num, den) in [(1, 4), (1, 2), (3, 4)] {
        let alpha = Alpha::new(num, den).map_err(e)?;
        let rows = classification_report(3, alpha, 10).map_err(e)?;
        let flags: Vec<bool> = rows.iter().take(6).map(|r| r.rectifiable).collect();
        check(flags == [true, true, true, true, true, false], || format!("flags {flags:?}"))?;
        for row in &rows {
            match &row.witness {
                ClassificationWitness::FinitePath { length, .. } => {
                    check(*length == 1.0, || format!("path length {length}"))?
                }
                ClassificationWitness::LengthGrowth { slope, expected, .. } => {
                    check((slope - expected).abs() <= 0.05 * expected, || format!("slope {slope} vs {expected}"))?
                }
                ClassificationWitness::NormGap { min_nonzero_norm: m } => check(
                    Some(*m) == min_nonzero_norm(row.group),
                    || format!("{}: norm gap {m}", row.group),
                )?,
                _ => {}
            }
        }
        let size = rows.last().ok_or("no rows")?;
        check(size.weight == "flat-size" && size.group == Group::Reals && size.rectifiable, || {
            "flat size over R not rectifiable".into()
        })?;
    }
    let direct = classify_phi_rectifiability(Group::Reals, &WeightFunction::FlatSize).map_err(e)?;
    check(direct.rectifiable, || "flat size verdict".into())?;
    Ok("flags Z:T Z/p:T Q_p:T Z_p:T R^a:T R:F, (R, size):T".into())
}

/// `vol_k` from an independently computed Gram determinant.
fn volume_oracle(s: &Simplex) -> f64 {
    let v = s.vertices();
    let edges: Vec<Point> = v[1..].iter().map(|p| sub_points(p, &v[0])).collect();
    let k = edges.len();
    let g: Vec<Vec<Rational>> = edges.iter().map(|a| edges.iter().map(|b| dot(a, b)).collect()).collect();
    let det = match k {
        1 => g[0][0].clone(),
        2 => &g[0][0] * &g[1][1] - &g[0][1] * &g[1][0],
        3 => {
            &g[0][0] * (&g[1][1] * &g[2][2] - &g[1][2] * &g[2][1]) - &g[0][1] * (&g[1][0] * &g[2][2] - &g[1][2] * &g[2][0])
                + &g[0][2] * (&g[1][0] * &g[2][1] - &g[1][1] * &g[2][0])
        }
        _ => unreachable!(),
    };
    let fact = Rational::from_integer(BigInt::from([1, 1, 2, 6][k]));
    sqrt(to_f64(&(det / (&fact * &fact))))
}

fn size() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let group = groups()[rng.gen_range(0..6)];
        let n = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=n);
        let a = random_simplices(&mut rng, group, 4, k, n).map_err(e)?;
        let expected = fsum(a.terms().iter().map(|(_, s)| volume_oracle(s)));
        check(flat_size(&a) == expected, || format!("flat size {} vs {expected}", flat_size(&a)))?;
        let recoloured = Chain::new(
            group,
            n,
            k,
            a.terms().iter().map(|(_, s)| (random_nonzero_element(&mut rng, group), s.clone())).collect(),
        )
        .map_err(e)?;
        check(flat_size(&recoloured) == flat_size(&a), || "size depends on coefficients".into())?;
        let units = Chain::new(
            group,
            n,
            k,
            a.terms().iter().map(|(_, s)| (group.from_int(if rng.gen_bool(0.5) { 1 } else { -1 }), s.clone())).collect(),
        )
        .map_err(e)?;
        check(flat_size(&units) == units.mass(), || format!("{group}: size {} vs mass {}", flat_size(&units), units.mass()))?;
        check(phi_mass(&units, &WeightFunction::FlatSize).map_err(e)? == flat_size(&units), || "phi_s mass".into())?;
    }
    Ok("100 chains: exact volume sums, coefficient independence, unit coefficients".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("group-norm axioms", norm_axioms),
        ("chi sandwich and cone identity", chi_sandwich),
        ("flat-norm oracle", flat_norm_oracle),
        ("boundary-slice commutation", slice_commutation),
        ("slice mass integral", slice_mass_integral),
        ("dyadic measure machinery", dyadic_machinery),
        ("deformation sampler", deformation),
        ("ball growth", ball_growth),
        ("non-rectifiable witness", nonrectifiable_witness),
        ("classification table", classification),
        ("flat size", size),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.2}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2}s): {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
