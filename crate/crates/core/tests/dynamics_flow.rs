mod common;

use common::*;
use gamma_lagrangians::clifford::{build_gamma_basis, ETA};
use gamma_lagrangians::dynamics::*;
use gamma_lagrangians::error::Error;
use gamma_lagrangians::geometry::{christoffel_at, MetricField, MetricSpec, Point, Profile, Rank3, VielbeinComponent};
use rand::Rng;

const H: f64 = 1e-3;

fn fixture() -> MetricField {
    load_fixture().metric.build().unwrap()
}

fn random_antisymmetric(r: &mut impl Rng) -> Rank3 {
    let mut f = [[[0.0; 4]; 4]; 4];
    for comp in f.iter_mut() {
        for mu in 0..4 {
            for nu in mu + 1..4 {
                let v = uniform(r, -1.0, 1.0);
                comp[mu][nu] = v;
                comp[nu][mu] = -v;
            }
        }
    }
    f
}

/// `(f*f)` via explicit permutations of `{0,1,2,3}` with their parities, as
/// `¼·η_aa f^a_{νσ}·½ε^{νσρλ}f^a_{ρλ}`.
fn fsf_oracle(f: &Rank3) -> f64 {
    let perms: [([usize; 4], f64); 24] = {
        let mut v = Vec::new();
        let mut p = [0, 1, 2, 3];
        heap(&mut p, 4, &mut v);
        v.try_into().unwrap()
    };
    let mut total = 0.0;
    for a in 0..4 {
        for (p, sign) in perms {
            total += ETA[a] * sign * 0.5 * f[a][p[0]][p[1]] * f[a][p[2]][p[3]];
        }
    }
    0.25 * total
}

fn heap(p: &mut [usize; 4], k: usize, out: &mut Vec<([usize; 4], f64)>) {
    if k == 1 {
        let mut inv = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                inv += (p[i] > p[j]) as usize;
            }
        }
        out.push((*p, if inv % 2 == 0 { 1.0 } else { -1.0 }));
        return;
    }
    for i in 0..k {
        heap(p, k - 1, out);
        if k.is_multiple_of(2) {
            p.swap(i, k - 1);
        } else {
            p.swap(0, k - 1);
        }
    }
}

#[test]
fn dual_identities_on_random_arrays() {
    let b = build_gamma_basis();
    let mut r = rng(61);
    let (mut rank2, mut matrix): (f64, f64) = (0.0, 0.0);
    for _ in 0..1000 {
        let ff = FFieldAtPoint::from_components(random_antisymmetric(&mut r), &b).unwrap();
        rank2 = rank2.max(check_rank2_dual_identity(&ff));
        matrix = matrix.max(check_matrix_dual_identity(&ff, &b));
        assert!((ff.fsf - fsf_oracle(&ff.components)).abs() < 1e-12);
        assert_eq!(ff.fsf_contraction, 4.0 * ff.fsf);
    }
    assert!(rank2 <= 1e-12, "{rank2:e}");
    assert!(matrix <= 1e-12, "{matrix:e}");
}

#[test]
fn symmetric_part_breaks_rank2_identity() {
    let b = build_gamma_basis();
    let clean = random_antisymmetric(&mut rng(62));
    let dual = FFieldAtPoint::from_components(clean, &b).unwrap().dual;
    assert!(rank2_dual_identity_residual(&clean, &dual) <= 1e-12);
    let mut f = clean;
    let delta = 0.5;
    f[1][0][2] += delta;
    f[1][2][0] += delta;
    assert!(rank2_dual_identity_residual(&f, &dual) > delta / 2.0);
}

#[test]
fn corrupted_dual_breaks_matrix_identity() {
    let b = build_gamma_basis();
    let mut ff = FFieldAtPoint::from_components(random_antisymmetric(&mut rng(63)), &b).unwrap();
    let delta = 0.25;
    ff.dual[2][1][3] += delta;
    assert!(check_matrix_dual_identity(&ff, &b) > delta / 2.0);
}

#[test]
fn fixture_is_reproducible_and_nondegenerate() {
    let fx = load_fixture();
    let b = build_gamma_basis();
    let ff = f_field_at(&fixture(), &fx.probe, H, &b).unwrap();
    assert_eq!(ff.fsf, fx.fsf);
    assert!(!ff.is_degenerate());
    assert!((ff.fsf - fsf_oracle(&ff.components)).abs() < 1e-12);
    let settings = FsfSearchSettings::default();
    let again = search_fsf_geometry(&mut rng(0), &settings, &b).unwrap();
    assert_eq!(again.metric, fx.metric);
}

#[test]
fn velocity_round_trip_on_fixture() {
    let b = build_gamma_basis();
    let m = fixture();
    let mut r = rng(64);
    for _ in 0..200 {
        let x = vec4(&mut r, 0.3);
        let ff = f_field_at(&m, &x, H, &b).unwrap();
        if ff.is_degenerate() {
            continue;
        }
        let v = vec4(&mut r, 2.0);
        let c = c_from_initial(&ff, &v).unwrap();
        let back = velocity_from_c(&ff, &c, &b).unwrap();
        for k in 0..4 {
            assert!((back[k] - v[k]).abs() <= 1e-9, "{back:?} vs {v:?}");
        }
    }
}

#[test]
fn c_for_unit_time_velocity_is_first_row() {
    let b = build_gamma_basis();
    let ff = f_field_at(&fixture(), &[0.0; 4], H, &b).unwrap();
    let c = c_from_initial(&ff, &[1.0, 0.0, 0.0, 0.0]).unwrap();
    for nu in 0..4 {
        assert_eq!(c.matrices()[nu], ff.matrices[0][nu]);
    }
}

#[test]
fn conformal_profiles_have_vanishing_fsf() {
    let b = build_gamma_basis();
    let mut r = rng(65);
    for _ in 0..100 {
        let profiles: [Profile; 4] = std::array::from_fn(|_| {
            if r.gen_bool(0.5) {
                Profile::Affine { offset: uniform(&mut r, 0.8, 1.5), slope: vec4(&mut r, 0.5) }
            } else {
                Profile::Exponential { amplitude: uniform(&mut r, 0.8, 1.5), rate: vec4(&mut r, 0.5) }
            }
        });
        let x = vec4(&mut r, 0.5);
        let m = MetricSpec::ConformalDiagonal { profiles }.build_at(&x).unwrap();
        let ff = f_field_at(&m, &x, H, &b).unwrap();
        assert!(ff.fsf.abs() <= 1e-10);
    }
}

#[test]
fn unmodified_equation_has_no_moving_solution_on_fixture() {
    let b = build_gamma_basis();
    let ff = f_field_at(&fixture(), &[0.0; 4], H, &b).unwrap();
    let mut r = rng(66);
    for _ in 0..100 {
        let v = vec4(&mut r, 1.0);
        assert!(unmodified_eom_residual(&ff, &v) > 1e-6);
    }
    assert_eq!(unmodified_eom_residual(&ff, &[0.0; 4]), 0.0);
}

/// Same contraction as the library, looping `ν` and `a` outermost.
fn gamma_tilde_reversed(metric: &MetricField, x: &Point) -> Rank3 {
    let b = build_gamma_basis();
    let ff = f_field_at(metric, x, H, &b).unwrap();
    let df = f_field_gradient(metric, x, H).unwrap();
    let mut out = [[[0.0; 4]; 4]; 4];
    for nu in (0..4).rev() {
        for a in (0..4).rev() {
            for sigma in (0..4).rev() {
                for mu in (0..4).rev() {
                    for rho in (0..4).rev() {
                        out[rho][mu][sigma] +=
                            ff.dual[a][rho][nu] * ETA[a] * (df[sigma][a][mu][nu] + df[mu][a][sigma][nu])
                                / (2.0 * ff.fsf);
                    }
                }
            }
        }
    }
    out
}

#[test]
fn gamma_tilde_matches_reversed_contraction() {
    let b = build_gamma_basis();
    let m = fixture();
    for x in [[0.0; 4], [0.1, -0.2, 0.05, 0.1], [-0.15, 0.1, 0.2, -0.05]] {
        let gt = gamma_tilde_at(&m, &x, H, &b).unwrap();
        let oracle = gamma_tilde_reversed(&m, &x);
        let scale = gt.iter().flatten().flatten().fold(1.0f64, |s, v| s.max(v.abs()));
        for rho in 0..4 {
            for mu in 0..4 {
                for s in 0..4 {
                    assert_eq!(gt[rho][mu][s], gt[rho][s][mu]);
                    assert!((gt[rho][mu][s] - oracle[rho][mu][s]).abs() < 1e-12 * scale);
                }
            }
        }
    }
}

fn scaled_fixture(a: f64) -> MetricField {
    let MetricSpec::PolynomialVielbein { components } = load_fixture().metric else { unreachable!() };
    let components: Vec<VielbeinComponent> = components
        .into_iter()
        .map(|mut c| {
            c.poly.linear = c.poly.linear.map(|v| v * a);
            c.poly.quadratic = c.poly.quadratic.map(|row| row.map(|v| v * a));
            c
        })
        .collect();
    MetricSpec::PolynomialVielbein { components }.build().unwrap()
}

fn max_abs(t: &Rank3) -> f64 {
    t.iter().flatten().flatten().fold(0.0, |m: f64, v| m.max(v.abs()))
}

/// Scaling the vielbein deviation by `a` scales `f`, `∂f` and `*f` by `a` and
/// `(f*f)` by `a²`, so `Γ̃` is unchanged while `Γ` is `O(a)`.
#[test]
fn flat_limit_scaling() {
    let b = build_gamma_basis();
    let x = [0.0; 4];
    let reference = gamma_tilde_at(&scaled_fixture(1.0), &x, H, &b).unwrap();
    let mut gamma_over_a = Vec::new();
    for a in [1e-1, 1e-2, 1e-3] {
        let m = scaled_fixture(a);
        let gt = gamma_tilde_at(&m, &x, H, &b).unwrap();
        let diff = gt
            .iter()
            .flatten()
            .flatten()
            .zip(reference.iter().flatten().flatten())
            .fold(0.0f64, |d, (p, q)| d.max((p - q).abs()));
        assert!(diff < 1e-6 * max_abs(&reference), "a = {a}: {diff:e}");
        gamma_over_a.push(max_abs(&christoffel_at(&m, &x, H).unwrap().gamma) / a);
    }
    assert!(max_abs(&reference) > 0.1);
    for w in gamma_over_a.windows(2) {
        assert!((w[0] / w[1] - 1.0).abs() < 0.25, "{gamma_over_a:?}");
    }
}

#[test]
fn compare_connections_shapes() {
    let b = build_gamma_basis();
    let cmp = compare_connections(&fixture(), &[0.0; 4], H, &b).unwrap();
    assert_eq!(cmp.probes.len(), 16);
    assert_eq!(cmp.contracted_tilde.len(), 16);
    assert_eq!(cmp.contracted_christoffel.len(), 16);
    assert!(cmp.max_abs_difference.is_finite());
    let text = toml::to_string(&cmp).unwrap();
    let back: ConnectionComparison = toml::from_str(&text).unwrap();
    assert_eq!(back, cmp);
}

#[test]
fn resting_particle_stays_put() {
    let b = build_gamma_basis();
    let t = integrate_modified(&fixture(), &b, &[0.0; 4], &[0.0; 4], 0.1, 10, H).unwrap();
    assert!(!t.truncated);
    assert!(t.samples.iter().all(|s| s.x == [0.0; 4] && s.xdot == [0.0; 4]));
}

const X0: Point = [0.0; 4];
const V0: [f64; 4] = [1.0, 0.2, -0.1, 0.1];

#[test]
fn geodesic_norm_drift_is_fourth_order() {
    let m = fixture();
    let drift = |dt: f64| {
        let n = (1.0 / dt).round() as usize;
        norm_drift(&m, &integrate_geodesic(&m, &X0, &V0, dt, n, H).unwrap())
    };
    let ratio = drift(0.05) / drift(0.025);
    assert!((11.2..=20.8).contains(&ratio), "{ratio}");
}

#[test]
fn modified_endpoint_self_convergence() {
    let b = build_gamma_basis();
    let m = fixture();
    let end = |dt: f64| {
        let n = (1.0 / dt).round() as usize;
        integrate_modified(&m, &b, &X0, &V0, dt, n, H).unwrap().last().x
    };
    let (e1, e2, e3) = (end(0.1), end(0.05), end(0.025));
    // Richardson reference from the two finest runs
    let reference: [f64; 4] = std::array::from_fn(|k| e3[k] + (e3[k] - e2[k]) / 15.0);
    let err = |e: [f64; 4]| (0..4).map(|k| (e[k] - reference[k]).abs()).fold(0.0, f64::max);
    let ratio = err(e1) / err(e2);
    assert!((11.2..=20.8).contains(&ratio), "{ratio}");
}

/// `d/dτ(ẋ^μ f_{μν})` is only projected to zero through the anticommutator with
/// `*f`, so along the `Γ̃` flow `C_ν` moves by an amount that does not shrink
/// with the step.
#[test]
fn c_drift_along_modified_flow_is_not_discretization_error() {
    let b = build_gamma_basis();
    let m = fixture();
    let drift = |dt: f64| {
        let n = (1.0 / dt).round() as usize;
        c_drift(&m, &b, &integrate_modified(&m, &b, &X0, &V0, dt, n, H).unwrap(), H).unwrap()
    };
    let (d1, d2) = (drift(0.05), drift(0.025));
    assert!(d1 > 1e-2);
    assert!((d1 / d2 - 1.0).abs() < 1e-3, "{d1} {d2}");
}

#[test]
fn flat_geodesic_is_a_straight_line() {
    let flat = MetricSpec::Flat.build().unwrap();
    let t = integrate_geodesic(&flat, &[0.5, -1.0, 0.0, 2.0], &[1.2, 0.3, -0.4, 0.8], 0.05, 40, H).unwrap();
    for s in &t.samples {
        for k in 0..4 {
            let want = [0.5, -1.0, 0.0, 2.0][k] + s.tau * [1.2, 0.3, -0.4, 0.8][k];
            assert!((s.x[k] - want).abs() < 1e-12);
        }
    }
}

/// Equatorial circular orbit in isotropic coordinates. At `(r, 0, 0)` moving
/// along `y` with `ṫ = 1`, the radial equation reads
/// `AA'/ψ² − v²ψ'/ψ = v²/r`, where `g_00 = A²`, `g_ii = −ψ²`.
#[test]
fn schwarzschild_circular_orbit() {
    let (mass, r0) = (1.0, 10.0);
    let m = MetricSpec::SchwarzschildIsotropic { mass }.build().unwrap();
    let u = mass / (2.0 * r0);
    let du = -mass / (2.0 * r0 * r0);
    let a = (1.0 - u) / (1.0 + u);
    let da = -2.0 * du / (1.0 + u).powi(2);
    let psi = (1.0 + u).powi(2);
    let dpsi = 2.0 * (1.0 + u) * du;
    let v = ((a * da / (psi * psi)) / (1.0 / r0 + dpsi / psi)).sqrt();
    let period = 2.0 * std::f64::consts::PI * r0 / v;
    let n = 4000;
    let t = integrate_geodesic(&m, &[0.0, r0, 0.0, 0.0], &[1.0, 0.0, v, 0.0], period / n as f64, n, H).unwrap();
    assert!(!t.truncated);
    let worst = t
        .samples
        .iter()
        .map(|s| ((s.x[1] * s.x[1] + s.x[2] * s.x[2] + s.x[3] * s.x[3]).sqrt() - r0).abs())
        .fold(0.0, f64::max);
    assert!(worst < 1e-6, "{worst:e}");
}

#[test]
fn degenerate_geometry_refuses_gamma_tilde() {
    let b = build_gamma_basis();
    let m = MetricSpec::ConformalDiagonal {
        profiles: [
            Profile::Affine { offset: 1.0, slope: [0.0, 0.2, 0.0, 0.0] },
            Profile::constant(1.0),
            Profile::constant(1.0),
            Profile::constant(1.0),
        ],
    }
    .build()
    .unwrap();
    assert!(matches!(gamma_tilde_at(&m, &[0.0; 4], H, &b), Err(Error::DegenerateGeometry { .. })));
    assert!(matches!(compare_connections(&m, &[0.0; 4], H, &b), Err(Error::DegenerateGeometry { .. })));
}
