//! Acceptance suite. Prints one `[PASS]` or `[FAIL]` line per criterion and
//! exits nonzero if any criterion fails.

mod common;

use std::f64::consts::{E, LN_2};
use std::time::{Duration, Instant};

use bregman_cc::backward::{
    backward_circumcenter, backward_pseudo_circumcenter, BackwardProblem,
};
use bregman_cc::bregman::{backward_bregman_project, bregman_distance, Mode};
use bregman_cc::duality::{check_pseudo_duality, DualityStatus};
use bregman_cc::forward::{forward_circumcenter, forward_pseudo_circumcenter, ForwardProblem, DEFAULT_SEED};
use bregman_cc::linalg::{affinely_independent, classical_circumcenter, gram};
use bregman_cc::oracle::{grid_refine_search, grid_refine_search_through};
use bregman_cc::tolerances::RANK_TOL;
use bregman_cc::{AffineFlat, Catalog, LegendreFunction, PointSet, SolutionSet, Vector};
use common::{burg_collinear, fd_gradient, quarter_triangle, random_interior, triangle, v};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(got: &Vector, want: &Vector, tol: f64) -> Check {
    let dev = (got - want).amax();
    ensure(dev <= tol, || format!("got {:?}, want {:?}, deviation {dev:.3e} > {tol:e}", got.as_slice(), want.as_slice()))
}

fn set(points: Vec<Vec<f64>>) -> PointSet {
    PointSet::new(points).unwrap()
}

fn backward(kind: Catalog, points: Vec<Vec<f64>>) -> BackwardProblem {
    let s = set(points);
    BackwardProblem::new(LegendreFunction::catalog(kind, s.dim()), s).unwrap()
}

fn forward(kind: Catalog, points: Vec<Vec<f64>>) -> ForwardProblem {
    let s = set(points);
    ForwardProblem::new(LegendreFunction::catalog(kind, s.dim()), s).unwrap()
}

fn unique_point(name: &str, out: &bregman_cc::Outcome) -> std::result::Result<Vector, String> {
    out.point().cloned().ok_or_else(|| format!("{name}: expected a unique point in the domain, got {out:?}"))
}

fn negentropy_backward_cc() -> Check {
    let p = backward(Catalog::NegativeEntropy, triangle());
    let started = Instant::now();
    let out = backward_circumcenter(&p).map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();
    close(&unique_point("backward CC", &out)?, &v(&[1.0, 1.0 / LN_2, 1.0 / LN_2]), 1e-9)?;
    ensure(elapsed < Duration::from_millis(10), || format!("took {elapsed:?}"))
}

fn fermi_dirac_backward_cc() -> Check {
    let p = backward(Catalog::FermiDirac, quarter_triangle());
    let out = backward_circumcenter(&p).map_err(|e| e.to_string())?;
    let t = 0.25 + (3.0 * 3f64.ln() - 4.0 * LN_2) / (4.0 * 3f64.ln());
    close(&unique_point("backward CC", &out)?, &v(&[0.25, t, t]), 1e-9)
}

fn negentropy_forward_cc() -> Check {
    let p = forward(Catalog::NegativeEntropy, triangle());
    let out = forward_circumcenter(&p, DEFAULT_SEED).map_err(|e| e.to_string())?;
    close(&unique_point("forward CC", &out)?, &v(&[1.0, 4.0 / E, 4.0 / E]), 1e-8)
}

fn fermi_dirac_forward_cc() -> Check {
    let p = forward(Catalog::FermiDirac, quarter_triangle());
    let out = forward_circumcenter(&p, DEFAULT_SEED).map_err(|e| e.to_string())?;
    close(&unique_point("forward CC", &out)?, &v(&[0.25, 16.0 / 43.0, 16.0 / 43.0]), 1e-8)
}

fn burg_pseudo_without_classical() -> Check {
    let classical = classical_circumcenter(&set(burg_collinear())).map_err(|e| e.to_string())?;
    let classical_ok = matches!(classical, SolutionSet::Empty);
    let p = backward(Catalog::BurgEntropy, burg_collinear());
    let out = backward_pseudo_circumcenter(&p).map_err(|e| e.to_string())?;
    let want = v(&[0.7641, 0.8744, 0.7641]);
    let pseudo = match out.point() {
        Some(x) => close(x, &want, 5e-4),
        None => Err(format!(
            "pseudo-circumcenter is empty in dom f (raw solution {:?}, notes {:?}); expected {:?}",
            out.set.representative().map(|x| x.as_slice().to_vec()),
            out.notes,
            want.as_slice()
        )),
    };
    ensure(classical_ok, || format!("classical circumcenter should not exist, got {classical:?}"))?;
    pseudo
}

fn negentropy_pseudo_ccs() -> Check {
    let b = backward_pseudo_circumcenter(&backward(Catalog::NegativeEntropy, triangle())).map_err(|e| e.to_string())?;
    close(&unique_point("backward pseudo-CC", &b)?, &v(&[0.0, 1.0 / LN_2, 1.0 / LN_2]), 1e-9)?;
    let f = forward_pseudo_circumcenter(&forward(Catalog::NegativeEntropy, triangle())).map_err(|e| e.to_string())?;
    close(&unique_point("forward pseudo-CC", &f)?, &v(&[E, 4.0 / E, 4.0 / E]), 1e-9)
}

fn one_dimensional_regressions() -> Check {
    for (kind, pts) in [
        (Catalog::NegativeEntropy, vec![vec![1.0], vec![2.0], vec![3.0]]),
        (Catalog::FermiDirac, vec![vec![0.2], vec![0.5], vec![0.7]]),
    ] {
        let b = backward_circumcenter(&backward(kind, pts.clone())).map_err(|e| e.to_string())?;
        ensure(b.is_empty() && b.set.is_empty(), || format!("{kind:?} backward CC should be empty, got {b:?}"))?;
        let f = forward_circumcenter(&forward(kind, pts), DEFAULT_SEED).map_err(|e| e.to_string())?;
        ensure(f.set.is_empty() && !f.is_warning(), || format!("{kind:?} forward CC should be certified empty, got {f:?}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let x: f64 = rng.gen_range(0.1..5.0);
        let mut y: f64 = rng.gen_range(0.1..5.0);
        while (y - x).abs() < 0.05 {
            y = rng.gen_range(0.1..5.0);
        }
        let out = forward_circumcenter(&forward(Catalog::NegativeEntropy, vec![vec![x], vec![y]]), DEFAULT_SEED)
            .map_err(|e| e.to_string())?;
        let want = ((y * y.ln() - x * x.ln() + x - y) / (y - x)).exp();
        let got = unique_point("two-point forward CC", &out)?[0];
        ensure((got - want).abs() <= 1e-10, || format!("pair ({x}, {y}): got {got}, want {want}"))?;
    }
    Ok(())
}

fn energy_reduction() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut done = 0;
    while done < 50 {
        let n = rng.gen_range(1..=6);
        let m = rng.gen_range(1..=n);
        let pts: Vec<Vector> = (0..=m).map(|_| random_interior(&mut rng, Catalog::Energy, n)).collect();
        // keep well-conditioned simplices so 1e-9 is meaningful in double precision
        let diffs: Vec<Vector> = pts[1..].iter().map(|q| q - &pts[0]).collect();
        let g = gram(&diffs).unwrap();
        let sv = g.singular_values();
        if sv.min() < 1e-2 * sv.max() {
            continue;
        }
        done += 1;
        let s = PointSet::from_vectors(pts).unwrap();
        let f = LegendreFunction::catalog(Catalog::Energy, n);
        let classical = classical_circumcenter(&s).map_err(|e| e.to_string())?;
        let reference = classical.unique().ok_or("classical circumcenter not unique")?.clone();
        let bp = BackwardProblem::new(f.clone(), s.clone()).unwrap();
        let fp = ForwardProblem::new(f, s).unwrap();
        let ops = [
            ("backward CC", backward_circumcenter(&bp)),
            ("backward pseudo-CC", backward_pseudo_circumcenter(&bp)),
            ("forward CC", forward_circumcenter(&fp, DEFAULT_SEED)),
            ("forward pseudo-CC", forward_pseudo_circumcenter(&fp)),
        ];
        for (name, out) in ops {
            let out = out.map_err(|e| format!("{name}: {e}"))?;
            let x = unique_point(name, &out)?;
            close(&x, &reference, 1e-9).map_err(|e| format!("{name}, n={n}, m={m}: {e}"))?;
        }
    }
    Ok(())
}

fn burg_duality() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut matched, mut tries) = (0, 0);
    while matched < 50 {
        tries += 1;
        if tries > 200_000 {
            return Err(format!("only {matched} usable instances found"));
        }
        let n = rng.gen_range(2..=3);
        let m = rng.gen_range(1..n);
        let pts: Vec<Vector> = (0..=m).map(|_| random_interior(&mut rng, Catalog::BurgEntropy, n)).collect();
        let s = PointSet::from_vectors(pts).unwrap();
        let f = LegendreFunction::catalog(Catalog::BurgEntropy, n);
        let p = BackwardProblem::new(f.clone(), s.clone()).unwrap();
        if !affinely_independent(p.gradients(), RANK_TOL) {
            continue;
        }
        let lhs = backward_pseudo_circumcenter(&p).map_err(|e| e.to_string())?;
        if !lhs.point().is_some_and(|x| f.membership(x).is_interior()) {
            continue;
        }
        let report = check_pseudo_duality(&f, &s).map_err(|e| e.to_string())?;
        ensure(report.status == DualityStatus::Match && report.max_deviation <= 1e-7, || {
            format!("instance {:?}: {report:?}", s.points())
        })?;
        matched += 1;
    }
    Ok(())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + a.abs().max(b.abs()))
}

fn invariants() -> Check {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for kind in Catalog::ALL {
        for _ in 0..40 {
            let n = rng.gen_range(1..=4);
            let x = random_interior(&mut rng, kind, n);
            let f = LegendreFunction::catalog(kind, n);
            let g = f.grad(&x).unwrap();
            let fd = fd_gradient(|y| f.eval(y).unwrap(), &x, 1e-6);
            ensure((&g - &fd).norm() <= 1e-5 * (1.0 + g.norm()), || format!("{kind:?} gradient at {x}"))?;
            let h = f.hess(&x).unwrap();
            for i in 0..n {
                let col = fd_gradient(|y| f.grad(y).unwrap()[i], &x, 1e-6);
                let row = h.row(i).transpose();
                ensure((&row - &col).norm() <= 1e-5 * (1.0 + row.norm()), || format!("{kind:?} Hessian at {x}"))?;
            }
            let back = f.grad_conj(&g).unwrap();
            ensure((&back - &x).norm() <= 1e-10 * (1.0 + x.norm()), || format!("{kind:?} round trip at {x}"))?;
            let fy = f.eval(&x).unwrap() + f.eval_conj(&g).unwrap();
            ensure(rel(fy, x.dot(&g)) <= 1e-10, || format!("{kind:?} Fenchel-Young at {x}"))?;
        }
    }
    for kind in [Catalog::Energy, Catalog::NegativeEntropy, Catalog::FermiDirac, Catalog::BurgEntropy, Catalog::NegSqrt] {
        for _ in 0..40 {
            let n = rng.gen_range(2..=4);
            let q: Vec<Vector> = (0..4).map(|_| random_interior(&mut rng, kind, n)).collect();
            let f = LegendreFunction::catalog(kind, n);
            let flat = AffineFlat::new(q[0].clone(), vec![&q[1] - &q[0], &q[3] - &q[0]]).unwrap();
            let z = backward_bregman_project(&f, &flat, &q[2]).map_err(|e| e.to_string())?.point;
            let dzy = bregman_distance(&f, &z, &q[2]).unwrap();
            for _ in 0..5 {
                let (a, b): (f64, f64) = (rng.gen_range(0.0..0.5), rng.gen_range(0.0..0.5));
                let u = &q[0] + (&q[1] - &q[0]) * a + (&q[3] - &q[0]) * b;
                let lhs = bregman_distance(&f, &u, &q[2]).unwrap();
                let rhs = bregman_distance(&f, &u, &z).unwrap() + dzy;
                ensure((lhs - rhs).abs() <= 1e-8 * (1.0 + lhs.abs()), || format!("{kind:?} Pythagoras {lhs} vs {rhs}"))?;
            }
        }
    }
    grid_agreement()?;
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("invariant suite took {elapsed:?}"))
}

/// The grid oracle must find every unique regression answer independently.
fn grid_agreement() -> Check {
    let interior_burg = vec![vec![1.0, 2.0, 1.0], vec![0.5, 1.5, 0.5], vec![1.5, 1.0, 1.5]];
    let cases: Vec<(&str, Catalog, Vec<Vec<f64>>, Vector)> = vec![
        ("backward CC", Catalog::NegativeEntropy, triangle(), v(&[1.0, 1.0 / LN_2, 1.0 / LN_2])),
        ("backward CC", Catalog::FermiDirac, quarter_triangle(), {
            let t = 0.25 + (3.0 * 3f64.ln() - 4.0 * LN_2) / (4.0 * 3f64.ln());
            v(&[0.25, t, t])
        }),
        ("forward CC", Catalog::NegativeEntropy, triangle(), v(&[1.0, 4.0 / E, 4.0 / E])),
        ("forward CC", Catalog::FermiDirac, quarter_triangle(), v(&[0.25, 16.0 / 43.0, 16.0 / 43.0])),
        ("backward pseudo-CC", Catalog::NegativeEntropy, triangle(), v(&[0.0, 1.0 / LN_2, 1.0 / LN_2])),
        ("forward pseudo-CC", Catalog::NegativeEntropy, triangle(), v(&[E, 4.0 / E, 4.0 / E])),
        ("backward pseudo-CC", Catalog::BurgEntropy, interior_burg, v(&[0.7709568504557097, 0.7923763959615127, 0.7709568504557097])),
    ];
    for (name, kind, pts, want) in cases {
        let s = set(pts);
        let f = LegendreFunction::catalog(kind, s.dim());
        let found = match name {
            "backward CC" => grid_refine_search(&f, &s, &s.affine_hull(), Mode::Backward, 4.0, 5),
            "forward CC" => grid_refine_search(&f, &s, &s.affine_hull(), Mode::Forward, 4.0, 5),
            "backward pseudo-CC" => {
                let hull = s.map(|q| f.grad(q)).unwrap().affine_hull();
                grid_refine_search(&f, &s, &hull, Mode::Backward, 4.0, 5)
            }
            _ => grid_refine_search_through(&f, &s, &s.affine_hull(), Mode::Forward, 4.0, 5, |w| f.grad_conj(w).ok()),
        };
        let found = found.ok_or_else(|| format!("grid oracle found no {name} for {kind:?}"))?;
        close(&found, &want, 1e-3).map_err(|e| format!("grid {name} {kind:?}: {e}"))?;
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("backward circumcenter, negative entropy triangle", negentropy_backward_cc),
        ("backward circumcenter, Fermi-Dirac triangle", fermi_dirac_backward_cc),
        ("forward circumcenter, negative entropy triangle", negentropy_forward_cc),
        ("forward circumcenter, Fermi-Dirac triangle", fermi_dirac_forward_cc),
        ("Burg pseudo-circumcenter without a classical circumcenter", burg_pseudo_without_classical),
        ("negative entropy pseudo-circumcenters", negentropy_pseudo_ccs),
        ("one-dimensional emptiness and two-point closed form", one_dimensional_regressions),
        ("energy reduction to the classical circumcenter", energy_reduction),
        ("Burg pseudo-circumcenter duality", burg_duality),
        ("invariants and grid-oracle agreement", invariants),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        match run() {
            Ok(()) => println!("[PASS] {} {name} ({:.1?})", i + 1, started.elapsed()),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
