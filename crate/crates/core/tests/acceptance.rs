//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p ququat --test acceptance`. The process exits non-zero
//! when a check fails that is not listed in `KNOWN_FAILURES`, or when a listed
//! check unexpectedly passes.

use std::f64::consts::PI;

use nalgebra::DVector;
use ode_solvers::{Dopri5, OutputType, SVector, System};
use rand::Rng;
use serde_json::json;

use ququat::channel::{
    adjoint_gate, analyze_gate, apply_nonlinear, check_reversible, check_reversible_superop,
    gate_from_kraus, gate_from_unitary, measurement_gates, GateMatrix, KrausSet,
};
use ququat::circuit::{parse_circuit, run_circuit};
use ququat::decompose::{
    euler_angles, named_gate, polar_gate, rot1, rot2, split_translation, svd_gate, svd_rect_gate,
    EulerAngles, PolarSide,
};
use ququat::linalg::{expm, CMatrix, RMatrix};
use ququat::lindblad::{gks_matrix, gks_propagator, GeneratorMatrix, GksModel};
use ququat::mvlogic::{
    builtin, closure, synthesize_multi, synthesize_quantum, unital_realizable, verify_realization,
    TruthTable, VerifyMode,
};
use ququat::pauli::{pauli_matrix, sigma};
use ququat::random::{haar_unitary, random_density, random_kraus, random_tp_gate, rng};
use ququat::state::density_to_pvec;
use ququat::universality::{
    commutator, gate_from_pseudo_gates, group_commutator_product, left_mult_superop,
    lie_closure_dim, matrix_unit, right_mult_superop, weyl_generators,
};
use ququat::{Error, PauliVector, C64};

const FIXTURE_TOL: f64 = 1e-12;
const PROPERTY_TOL: f64 = 1e-10;
const ODE_TOL: f64 = 1e-6;
const PROPAGATOR_TOL: f64 = 1e-9;
const COMMUTATOR_TOL: f64 = 1e-3;
const SEED: u64 = 20_240_601;

/// Checks that cannot pass as stated; see the decisions ledger.
const KNOWN_FAILURES: &[(u8, &str)] = &[
    (1, "luk_neg matches reference matrix"),
    (7, "commutator limit error < 1e-3 at n = 10^4"),
];

struct Check {
    name: String,
    ok: bool,
    detail: String,
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn add(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.0.push(Check {
            name: name.into(),
            ok,
            detail: detail.into(),
        });
    }

    /// Passes when `err <= tol`.
    fn within(&mut self, name: impl Into<String>, err: f64, tol: f64) {
        self.add(
            name,
            err <= tol,
            format!("max error {err:.3e}, tolerance {tol:.0e}"),
        );
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn rm(rows: &[[f64; 4]]) -> RMatrix {
    RMatrix::from_fn(4, 4, |i, j| rows[i][j])
}

fn diff(a: &RMatrix, b: &RMatrix) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    (a - b).abs().max()
}

fn cdiff(a: &CMatrix, b: &CMatrix) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn delta(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

fn from_delta(f: impl Fn(usize, usize) -> f64) -> RMatrix {
    RMatrix::from_fn(4, 4, f)
}

fn ket_bra(d: usize, k: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    m[(k, k)] = c(1.0, 0.0);
    m
}

fn ptrace(x: &CMatrix) -> C64 {
    x.trace()
}

/// `E_{mu nu} = 2^-n Tr(sigma_mu Phi(sigma_nu))` straight from the Kraus operators, complex.
fn gate_oracle(ops: &[CMatrix]) -> CMatrix {
    let n_in = ops[0].ncols().trailing_zeros() as usize;
    let n_out = ops[0].nrows().trailing_zeros() as usize;
    let d_in = 1usize << n_in;
    CMatrix::from_fn(1 << (2 * n_out), 1 << (2 * n_in), |mu, nu| {
        let s_nu = pauli_matrix(n_in, nu);
        let s_mu = pauli_matrix(n_out, mu);
        let phi: CMatrix = ops.iter().map(|a| a * &s_nu * a.adjoint()).sum();
        ptrace(&(s_mu * phi)) / d_in as f64
    })
}

// ---------------------------------------------------------------- criterion 1

fn criterion_1() -> Checks {
    let mut ch = Checks::default();
    let h = (sigma(1) + sigma(3)).scale(0.5f64.sqrt());

    let not_ref = rm(&[
        [1., 0., 0., 0.],
        [0., 1., 0., 0.],
        [0., 0., -1., 0.],
        [0., 0., 0., -1.],
    ]);
    ch.within(
        "NOT gate",
        diff(gate_from_unitary(&sigma(1)).unwrap().entries(), &not_ref),
        FIXTURE_TOL,
    );
    ch.within(
        "named not",
        diff(named_gate("not", &[]).unwrap().entries(), &not_ref),
        FIXTURE_TOL,
    );

    let had = from_delta(|m, n| {
        delta(m, 0) * delta(n, 0) - delta(m, 2) * delta(n, 2)
            + delta(m, 3) * delta(n, 1)
            + delta(m, 1) * delta(n, 3)
    });
    ch.within(
        "Hadamard gate",
        diff(gate_from_unitary(&h).unwrap().entries(), &had),
        FIXTURE_TOL,
    );

    for k in 1..4usize {
        let reference = from_delta(|m, n| {
            2.0 * delta(m, 0) * delta(n, 0) + 2.0 * delta(m, k) * delta(n, k) - delta(m, n)
        });
        ch.within(
            format!("Pauli gate sigma_{k}"),
            diff(
                gate_from_unitary(&sigma(k as u8)).unwrap().entries(),
                &reference,
            ),
            FIXTURE_TOL,
        );
    }
    ch.within(
        "Pauli gate sigma_0",
        diff(
            gate_from_unitary(&sigma(0)).unwrap().entries(),
            &RMatrix::identity(4, 4),
        ),
        FIXTURE_TOL,
    );

    let mut rot_err: f64 = 0.0;
    for &a in &[0.0, 0.3, 1.0, PI / 2.0, 2.5, PI, 4.0, 5.9] {
        let (s, co) = a.sin_cos();
        let u1 = CMatrix::from_row_slice(
            2,
            2,
            &[
                c(0.0, -a / 2.0).exp(),
                c(0., 0.),
                c(0., 0.),
                c(0.0, a / 2.0).exp(),
            ],
        );
        let p1 = rm(&[
            [1., 0., 0., 0.],
            [0., co, -s, 0.],
            [0., s, co, 0.],
            [0., 0., 0., 1.],
        ]);
        let (hs, hc) = (a / 2.0).sin_cos();
        let u2 = CMatrix::from_row_slice(2, 2, &[c(hc, 0.), c(-hs, 0.), c(hs, 0.), c(hc, 0.)]);
        let p2 = rm(&[
            [1., 0., 0., 0.],
            [0., co, 0., s],
            [0., 0., 1., 0.],
            [0., -s, 0., co],
        ]);
        rot_err = rot_err
            .max(diff(gate_from_unitary(&u1).unwrap().entries(), &p1))
            .max(diff(&rot1(a), &p1))
            .max(diff(gate_from_unitary(&u2).unwrap().entries(), &p2))
            .max(diff(&rot2(a), &p2));
    }
    ch.within(
        "rotation matrices U1(alpha), U2(theta)",
        rot_err,
        FIXTURE_TOL,
    );

    let diag = |d: [f64; 4]| RMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&d));
    let inv = diag([1., -1., -1., -1.]);
    let mut refl_err: f64 = 0.0;
    for (name, d) in [
        ("reflect1", [1., -1., 1., 1.]),
        ("reflect2", [1., 1., -1., 1.]),
        ("reflect3", [1., 1., 1., -1.]),
        ("inversion", [1., -1., -1., -1.]),
    ] {
        refl_err = refl_err.max(diff(named_gate(name, &[]).unwrap().entries(), &diag(d)));
    }
    refl_err = refl_err
        .max(diff(&(rot1(PI) * &inv), &diag([1., 1., 1., -1.])))
        .max(diff(&(rot2(PI) * &inv), &diag([1., 1., -1., 1.])))
        .max(diff(
            &(rot1(PI) * rot2(PI) * &inv),
            &diag([1., -1., 1., 1.]),
        ));
    ch.within("reflections and inversion", refl_err, FIXTURE_TOL);

    let gates = measurement_gates(&[ket_bra(2, 0), ket_bra(2, 1)]).unwrap();
    let e0 = rm(&[
        [0.5, 0., 0., 0.5],
        [0., 0., 0., 0.],
        [0., 0., 0., 0.],
        [0.5, 0., 0., 0.5],
    ]);
    let e1 = rm(&[
        [0.5, 0., 0., -0.5],
        [0., 0., 0., 0.],
        [0., 0., 0., 0.],
        [-0.5, 0., 0., 0.5],
    ]);
    ch.within(
        "measurement E(0)",
        diff(gates[0].entries(), &e0),
        FIXTURE_TOL,
    );
    ch.within(
        "measurement E(1)",
        diff(gates[1].entries(), &e1),
        FIXTURE_TOL,
    );

    let mut classical: Vec<(&str, RMatrix)> = vec![
        (
            "luk_neg",
            rm(&[
                [1., 0., 0., 0.],
                [0., 0., 1., 0.],
                [0., 1., 0., 0.],
                [1., 0., 0., -1.],
            ]),
        ),
        (
            "I0",
            rm(&[
                [1., 0., 0., 0.],
                [0., 0., 0., 0.],
                [0., 0., 0., 0.],
                [1., -1., -1., -1.],
            ]),
        ),
        (
            "bar_neg",
            rm(&[
                [1., 0., 0., 0.],
                [1., -1., -1., -1.],
                [0., 1., 0., 0.],
                [0., 0., 1., 0.],
            ]),
        ),
        ("const0", from_delta(|m, n| delta(m, 0) * delta(n, 0))),
        (
            "g1",
            rm(&[
                [1., 0., 0., 0.],
                [0., 0., 1., 0.],
                [0., 0., 0., 1.],
                [1., -1., -1., -1.],
            ]),
        ),
        (
            "g2",
            rm(&[
                [1., 0., 0., 0.],
                [0., 1., 0., 0.],
                [0., 0., 0., 1.],
                [0., 0., 1., 0.],
            ]),
        ),
        (
            "g3",
            rm(&[
                [1., 0., 0., 0.],
                [1., 0., -1., -1.],
                [0., 0., 1., 0.],
                [0., 0., 0., 1.],
            ]),
        ),
        (
            "diamond",
            rm(&[
                [1., 0., 0., 0.],
                [0., 0., 0., 0.],
                [0., 0., 0., 0.],
                [0., 1., 1., 1.],
            ]),
        ),
        (
            "box",
            rm(&[
                [1., 0., 0., 0.],
                [0., 0., 0., 0.],
                [0., 0., 0., 0.],
                [0., 0., 0., 1.],
            ]),
        ),
    ];
    for k in 1..4usize {
        let name: &'static str = ["I1", "I2", "I3"][k - 1];
        classical.push((
            name,
            from_delta(move |m, n| delta(m, 0) * delta(n, 0) + delta(m, 3) * delta(n, k)),
        ));
        let name: &'static str = ["const1", "const2", "const3"][k - 1];
        classical.push((
            name,
            from_delta(move |m, n| (delta(m, 0) + delta(m, k)) * delta(n, 0)),
        ));
    }
    for (name, reference) in &classical {
        let g = synthesize_quantum(&builtin(name).unwrap()).unwrap();
        let label = if *name == "luk_neg" {
            "luk_neg matches reference matrix".to_string()
        } else {
            format!("{name} matches reference matrix")
        };
        ch.within(label, diff(g.entries(), reference), FIXTURE_TOL);
    }
    let ref_ln = GateMatrix::square(classical[0].1.clone()).unwrap();
    ch.add(
        "reference luk_neg matrix does not realize ~x (row 3 typo)",
        !verify_realization(&ref_ln, &[builtin("luk_neg").unwrap()], VerifyMode::Plain).unwrap(),
        "corrected row 3 is (1, -1, -1, -1)",
    );

    let mut pg_err: f64 = 0.0;
    let mut r = rng(SEED);
    for _ in 0..20 {
        let a = ququat::random::ginibre(&mut r, 2, 2);
        let am: Vec<C64> = (0..4)
            .map(|m| ptrace(&(sigma(m as u8) * &a)) / 2.0)
            .collect();
        let i = c(0.0, 1.0);
        let reference = CMatrix::from_row_slice(
            4,
            4,
            &[
                am[0],
                am[1],
                am[2],
                am[3],
                am[1],
                am[0],
                -i * am[3],
                i * am[2],
                am[2],
                i * am[3],
                am[0],
                -i * am[1],
                am[3],
                -i * am[2],
                i * am[1],
                am[0],
            ],
        );
        pg_err = pg_err.max(cdiff(left_mult_superop(&a).unwrap().matrix(), &reference));
    }
    ch.within("single-ququat pseudo-gate closed form", pg_err, FIXTURE_TOL);
    ch
}

// ---------------------------------------------------------------- criterion 2

fn criterion_2() -> Checks {
    let mut ch = Checks::default();
    let mut r = rng(SEED + 2);
    let (mut real, mut row0, mut oracle, mut adj, mut pseudo) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let instances = 120;
    for i in 0..instances {
        let n = 1 + i % 2;
        let m = 1 + r.random_range(0..4usize);
        let k = random_kraus(&mut r, n, n, m).unwrap();
        let g = gate_from_kraus(&k).unwrap();
        let o = gate_oracle(k.ops());
        real = real.max(o.iter().map(|z| z.im.abs()).fold(0.0, f64::max));
        oracle = oracle.max(diff(g.entries(), &o.map(|z| z.re)));
        let e = g.entries();
        row0 = row0.max(
            (0..e.ncols())
                .map(|j| (e[(0, j)] - delta(0, j)).abs())
                .fold(0.0, f64::max),
        );
        let kd: Vec<CMatrix> = k.ops().iter().map(|a| a.adjoint()).collect();
        let a = adjoint_gate(&g).unwrap();
        adj = adj
            .max(diff(a.entries(), &e.transpose()))
            .max(diff(a.entries(), &gate_oracle(&kd).map(|z| z.re)));
        pseudo = pseudo.max(diff(gate_from_pseudo_gates(&k).unwrap().entries(), e));
    }
    ch.within(
        format!("gate entries are real ({instances} Kraus channels)"),
        real,
        PROPERTY_TOL,
    );
    ch.within("gate matrix agrees with trace oracle", oracle, PROPERTY_TOL);
    ch.within(
        "row 0 = delta for trace-preserving gates",
        row0,
        PROPERTY_TOL,
    );
    ch.within("adjoint gate = transpose", adj, PROPERTY_TOL);
    ch.within(
        "pseudo-gate assembly = Kraus assembly",
        pseudo,
        PROPERTY_TOL,
    );

    let (mut unital, mut orth) = (0.0f64, 0.0f64);
    for i in 0..instances {
        let n = 1 + i % 2;
        let u = haar_unitary(&mut r, 1 << n);
        let g = gate_from_unitary(&u).unwrap();
        let e = g.entries();
        unital = unital.max(
            (0..e.nrows())
                .map(|j| (e[(j, 0)] - delta(j, 0)).abs())
                .fold(0.0, f64::max),
        );
        orth = orth.max(diff(
            &(e * e.transpose()),
            &RMatrix::identity(e.nrows(), e.nrows()),
        ));
    }
    ch.within(
        format!("unitary gates are unital ({instances} unitaries)"),
        unital,
        PROPERTY_TOL,
    );
    ch.within("unitary gates are orthogonal", orth, PROPERTY_TOL);

    let mut conj: f64 = 0.0;
    for i in 0..instances {
        let d = if i % 2 == 0 { 2 } else { 4 };
        let a = ququat::random::ginibre(&mut r, d, d);
        let l = left_mult_superop(&a).unwrap();
        let rr = right_mult_superop(&a.adjoint()).unwrap();
        conj = conj.max(cdiff(&l.matrix().map(|z| z.conj()), rr.matrix()));
    }
    ch.within("conj(L_A) = R_(A^dag)", conj, PROPERTY_TOL);
    ch
}

// ---------------------------------------------------------------- criterion 3

fn criterion_3() -> Checks {
    let mut ch = Checks::default();
    let mut r = rng(SEED + 3);
    for (n, count) in [(1usize, 1000usize), (2, 100)] {
        let (mut svd, mut pol, mut tr, mut ortho) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for _ in 0..count {
            let m = 1 + r.random_range(0..3usize);
            let g = random_tp_gate(&mut r, n, m).unwrap();
            let s = svd_gate(&g).unwrap();
            svd = svd.max(diff(&s.reconstruct(), g.entries()));
            for u in [&s.u1, &s.u2] {
                let e = u.entries();
                ortho = ortho.max(diff(
                    &(e * e.transpose()),
                    &RMatrix::identity(e.nrows(), e.nrows()),
                ));
            }
            for side in [PolarSide::Right, PolarSide::Left] {
                pol = pol.max(diff(
                    &polar_gate(&g, side).unwrap().reconstruct(),
                    g.entries(),
                ));
            }
            tr = tr.max(diff(
                &split_translation(&g).unwrap().to_matrix(),
                g.entries(),
            ));
        }
        ch.within(
            format!("SVD reconstruction, {count} random n={n} gates"),
            svd,
            PROPERTY_TOL,
        );
        ch.within(
            format!("SVD factors orthogonal, n={n}"),
            ortho,
            PROPERTY_TOL,
        );
        ch.within(
            format!("polar reconstruction (both sides), n={n}"),
            pol,
            PROPERTY_TOL,
        );
        ch.within(
            format!("translation split reconstruction, n={n}"),
            tr,
            PROPERTY_TOL,
        );
    }

    let mut euler: f64 = 0.0;
    for _ in 0..500 {
        let angles = EulerAngles {
            alpha: r.random_range(0.0..2.0 * PI),
            theta: r.random_range(0.05..PI - 0.05),
            beta: r.random_range(0.0..2.0 * PI),
        };
        let g = angles.to_gate();
        let back = euler_angles(&g).unwrap();
        euler = euler.max(diff(back.to_gate().entries(), g.entries()));
        let u = haar_unitary(&mut r, 2);
        let gu = gate_from_unitary(&u).unwrap();
        euler = euler.max(diff(
            euler_angles(&gu).unwrap().to_gate().entries(),
            gu.entries(),
        ));
    }
    ch.within(
        "Euler round trip away from gimbal lock",
        euler,
        PROPERTY_TOL,
    );

    let ops: Vec<CMatrix> = (0..2)
        .map(|k| {
            let mut a = CMatrix::zeros(2, 4);
            for i in 0..2 {
                a[(i, 2 * i + k)] = c(1.0, 0.0);
            }
            a
        })
        .collect();
    let pt = gate_from_kraus(&KrausSet::new(ops).unwrap()).unwrap();
    let expected = RMatrix::from_fn(4, 16, |mu, nu| delta(nu, 4 * mu));
    let s = svd_rect_gate(&pt).unwrap();
    ch.within(
        "partial-trace (2,1) gate",
        diff(pt.entries(), &expected),
        PROPERTY_TOL,
    );
    ch.within(
        "rectangular SVD reconstruction",
        diff(&s.reconstruct(), pt.entries()),
        PROPERTY_TOL,
    );
    let sv_err = s
        .singular_values
        .iter()
        .map(|x| (x - 1.0).abs())
        .fold(0.0, f64::max);
    ch.add(
        "partial-trace singular values are (1, 1, 1)",
        s.singular_values.len() == 3 && sv_err <= PROPERTY_TOL,
        format!("{:?}", s.singular_values),
    );
    ch
}

// ---------------------------------------------------------------- criterion 4

/// `d rho/dt = -i[H, rho] + 1/8 sum_kl C_kl (s_k rho s_l - {s_l s_k, rho}/2)`, rho packed as 8 reals.
#[derive(Clone)]
struct MasterEquation {
    h: CMatrix,
    c: CMatrix,
}

type State8 = SVector<f64, 8>;

fn unpack(y: &State8) -> CMatrix {
    CMatrix::from_fn(2, 2, |i, j| c(y[2 * (2 * i + j)], y[2 * (2 * i + j) + 1]))
}

fn pack(m: &CMatrix) -> State8 {
    let mut y = State8::zeros();
    for i in 0..2 {
        for j in 0..2 {
            y[2 * (2 * i + j)] = m[(i, j)].re;
            y[2 * (2 * i + j) + 1] = m[(i, j)].im;
        }
    }
    y
}

impl System<f64, State8> for MasterEquation {
    fn system(&self, _t: f64, y: &State8, dy: &mut State8) {
        let rho = unpack(y);
        let mut d = (&self.h * &rho - &rho * &self.h) * c(0.0, -1.0);
        for k in 0..3 {
            for l in 0..3 {
                let (sk, sl) = (sigma(k as u8 + 1), sigma(l as u8 + 1));
                let sls = &sl * &sk;
                let term = &sk * &rho * &sl - (&sls * &rho + &rho * &sls) * c(0.5, 0.0);
                d += term * (self.c[(k, l)] / 8.0);
            }
        }
        *dy = pack(&d);
    }
}

fn ode_gate(model: &GksModel, tau: f64) -> RMatrix {
    let h: CMatrix = (0..3)
        .map(|k| sigma(k as u8 + 1) * c(model.h[k], 0.0))
        .sum();
    let sys = MasterEquation {
        h,
        c: model.c.clone(),
    };
    let mut e = RMatrix::zeros(4, 4);
    for nu in 0..4 {
        // Sparse output: the dense interpolant at the end point is much less accurate than the step itself.
        let mut solver = Dopri5::from_param(
            sys.clone(),
            0.0,
            tau,
            tau,
            pack(&sigma(nu as u8)),
            1e-12,
            1e-13,
            0.9,
            0.0,
            0.2,
            10.0,
            tau,
            0.0,
            1_000_000,
            1000,
            OutputType::Sparse,
        );
        solver.integrate().expect("integration succeeds");
        let phi = unpack(solver.y_out().last().unwrap());
        for mu in 0..4 {
            e[(mu, nu)] = (ptrace(&(sigma(mu as u8) * &phi)) / 2.0).re;
        }
    }
    e
}

fn random_model<R: Rng>(r: &mut R, real: bool) -> GksModel {
    let h = [
        r.random_range(-1.0..1.0),
        r.random_range(-1.0..1.0),
        r.random_range(-1.0..1.0),
    ];
    let g = CMatrix::from_fn(3, 3, |_, _| {
        let im = if real { 0.0 } else { r.random_range(-1.0..1.0) };
        c(r.random_range(-1.0..1.0), im)
    });
    GksModel::new(h, &g * g.adjoint())
}

fn criterion_4() -> Checks {
    let mut ch = Checks::default();
    let mut r = rng(SEED + 4);
    let (mut ode, mut semi, mut row0) = (0.0f64, 0.0f64, 0.0f64);
    let mut all_positive = true;
    for _ in 0..50 {
        let model = random_model(&mut r, false);
        let gen = gks_matrix(&model).unwrap();
        all_positive &= gen.c_positive;
        let tau = r.random_range(0.1..2.0);
        let g = gks_propagator(&gen, tau).unwrap();
        ode = ode.max(diff(g.entries(), &ode_gate(&model, tau)));
        let t1 = r.random_range(0.0..1.0);
        let t2 = r.random_range(0.0..1.0);
        let prod = gks_propagator(&gen, t1).unwrap().entries()
            * gks_propagator(&gen, t2).unwrap().entries();
        semi = semi.max(diff(
            &prod,
            gks_propagator(&gen, t1 + t2).unwrap().entries(),
        ));
        row0 = row0.max(
            (0..4)
                .map(|j| (g.entries()[(0, j)] - delta(0, j)).abs())
                .fold(0.0, f64::max),
        );
    }
    ch.add("50 random models have positive C", all_positive, "");
    ch.within(
        "gks_propagator vs adaptive Dormand-Prince integration",
        ode,
        ODE_TOL,
    );
    ch.within("semigroup property", semi, PROPAGATOR_TOL);
    ch.within("row 0 = delta", row0, PROPERTY_TOL);

    let mut ham: f64 = 0.0;
    for _ in 0..50 {
        let h = [
            r.random_range(-2.0..2.0),
            r.random_range(-2.0..2.0),
            r.random_range(-2.0..2.0),
        ];
        let tau = r.random_range(0.0..3.0);
        let model = GksModel::new(h, CMatrix::zeros(3, 3));
        let g = gks_propagator(&gks_matrix(&model).unwrap(), tau).unwrap();
        let hm: CMatrix = (0..3).map(|k| sigma(k as u8 + 1) * c(h[k], 0.0)).sum();
        let u = expm(&(hm * c(0.0, -tau)));
        ham = ham.max(diff(g.entries(), gate_from_unitary(&u).unwrap().entries()));
    }
    ch.within(
        "Hamiltonian-only propagator vs gate_from_unitary",
        ham,
        PROPAGATOR_TOL,
    );

    let mut exact_zero = true;
    for _ in 0..50 {
        let model = random_model(&mut r, true);
        let g = gks_propagator(&gks_matrix(&model).unwrap(), r.random_range(0.1..3.0)).unwrap();
        exact_zero &= (1..4).all(|k| g.entries()[(k, 0)] == 0.0);
    }
    ch.add("real C gives T = 0 exactly (50 models)", exact_zero, "");
    ch
}

// ---------------------------------------------------------------- criterion 5

fn criterion_5() -> Checks {
    let mut ch = Checks::default();
    let mut r = rng(SEED + 5);
    let (mut sum_err, mut born_err) = (0.0f64, 0.0f64);
    for i in 0..200 {
        let n = 1 + i % 2;
        let d = 1 << n;
        let rho = random_density(&mut r, n);
        let p = density_to_pvec(&rho).unwrap();
        let projectors: Vec<CMatrix> = (0..d).map(|k| ket_bra(d, k)).collect();
        let gates = measurement_gates(&projectors).unwrap();
        let pv = DVector::from_column_slice(p.coefficients());
        let probs: Vec<f64> = gates.iter().map(|g| (g.entries() * &pv)[0]).collect();
        sum_err = sum_err.max((probs.iter().sum::<f64>() - 1.0).abs());
        for k in 0..d {
            born_err = born_err.max((probs[k] - rho.matrix()[(k, k)].re).abs());
        }
    }
    ch.within(
        "complete measurement probabilities sum to 1",
        sum_err,
        PROPERTY_TOL,
    );
    ch.within("probabilities match Tr(P_k rho)", born_err, PROPERTY_TOL);

    let s = 0.5f64.sqrt();
    let h = json!([[[s, 0], [s, 0]], [[s, 0], [-s, 0]]]);
    let p01 = json!([
        [[[1, 0], [0, 0]], [[0, 0], [0, 0]]],
        [[[0, 0], [0, 0]], [[0, 0], [1, 0]]]
    ]);
    let c =
        parse_circuit(&json!({"n": 1, "steps": [{"unitary": h}, {"measure": p01, "select": 0}]}))
            .unwrap();
    let rec = run_circuit(&c, None).unwrap();
    let probs = rec.steps[1].probabilities.clone().unwrap_or_default();
    let fixture = probs.len() == 2
        && (probs[0] - 0.5).abs() < FIXTURE_TOL
        && (probs[1] - 0.5).abs() < FIXTURE_TOL;
    ch.add(
        "Born rule H then measure on |0><0| gives (1/2, 1/2)",
        fixture,
        format!("{probs:?}"),
    );

    let zero = parse_circuit(&json!({"n": 1, "steps": [{"measure": p01, "select": 1}]})).unwrap();
    let circuit_err = matches!(run_circuit(&zero, None), Err(Error::ZeroProbability { .. }));
    let e1 = measurement_gates(&[ket_bra(2, 1)]).unwrap().remove(0);
    let up = PauliVector::new(1, vec![1., 0., 0., 1.]).unwrap();
    let direct_err = matches!(
        apply_nonlinear(&e1, &up),
        Err(Error::ZeroProbability { .. })
    );
    ch.add(
        "zero-probability branch raises ZeroProbability",
        circuit_err && direct_err,
        "",
    );
    ch
}

// ---------------------------------------------------------------- criterion 6

fn criterion_6() -> Checks {
    let mut ch = Checks::default();
    let mut realized = 0;
    let mut predicate_agrees = 0;
    for i in 0..256usize {
        let outputs: Vec<u8> = (0..4).map(|k| ((i >> (2 * (3 - k))) & 3) as u8).collect();
        let t = TruthTable::new(1, outputs).unwrap();
        let g = synthesize_quantum(&t).unwrap();
        if verify_realization(&g, std::slice::from_ref(&t), VerifyMode::Plain).unwrap() {
            realized += 1;
        }
        let e = g.entries();
        let column0_is_e0 = (0..4).all(|m| e[(m, 0)] == delta(m, 0));
        if column0_is_e0 == unital_realizable(&t) && column0_is_e0 == analyze_gate(&g).unital {
            predicate_agrees += 1;
        }
    }
    ch.add(
        "verify(synthesize(t)) for all 256 unary tables",
        realized == 256,
        format!("{realized}/256"),
    );
    let binary = ["min", "max", "v4"].iter().all(|n| {
        let t = builtin(n).unwrap();
        verify_realization(&synthesize_quantum(&t).unwrap(), &[t], VerifyMode::Plain).unwrap()
    });
    ch.add("verify(synthesize(t)) for min, max, v4", binary, "");

    let gens: Vec<TruthTable> = ["g1", "g2", "g3"]
        .iter()
        .map(|n| builtin(n).unwrap())
        .collect();
    let r = closure(&gens, 1, 1_000_000).unwrap();
    let count = r.arity(1).unwrap().functions.len();
    ch.add(
        "closure of {g1, g2, g3} has 256 unary functions",
        count == 256 && r.complete,
        format!("{count}"),
    );

    let gens = vec![builtin("cyclic_shift").unwrap(), builtin("max").unwrap()];
    let r = closure(&gens, 1, 1_000_000).unwrap();
    let targets = [
        "const0", "const1", "const2", "const3", "I0", "I1", "I2", "I3", "luk_neg",
    ];
    let missing: Vec<&str> = targets
        .iter()
        .copied()
        .filter(|n| !r.contains(&builtin(n).unwrap()))
        .collect();
    ch.add(
        "closure of {cyclic_shift, max} reaches constants, I_k, luk_neg",
        missing.is_empty(),
        format!("missing {missing:?}; {} compositions", r.compositions),
    );
    ch.add(
        "realizability predicate matches column-0 inspection (256 tables)",
        predicate_agrees == 256,
        format!("{predicate_agrees}/256"),
    );
    ch
}

// ---------------------------------------------------------------- criterion 7

fn criterion_7() -> Checks {
    let mut ch = Checks::default();
    let w = weyl_generators(4).unwrap();
    let full = lie_closure_dim(&w.units, 1_000_000).unwrap();
    ch.add(
        "closure of dim-4 matrix units = 32",
        full.dim == 32 && full.complete,
        format!("{}", full.dim),
    );

    let id = CMatrix::identity(4, 4);
    let mut local = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            local.push(matrix_unit(4, a, b).kronecker(&id));
            local.push(id.kronecker(&matrix_unit(4, a, b)));
        }
    }
    let l = lie_closure_dim(&local, 1_000_000).unwrap();
    ch.add(
        "single-ququat pseudo-gate algebra on two ququats = 62",
        l.dim == 62 && l.complete,
        format!("{}", l.dim),
    );
    local.push(matrix_unit(4, 3, 3).kronecker(&matrix_unit(4, 3, 3)));
    let e = lie_closure_dim(&local, 1_000_000).unwrap();
    ch.add(
        "adding E33 (x) E33 gives 512",
        e.dim == 512 && e.complete,
        format!("{}", e.dim),
    );

    let h1 = matrix_unit(4, 0, 1) + matrix_unit(4, 1, 0);
    let h2 = matrix_unit(4, 1, 2) + matrix_unit(4, 2, 1);
    let target = expm(&commutator(&h1, &h2));
    let errs: Vec<f64> = [10u32, 100, 1000, 10_000]
        .iter()
        .map(|&n| cdiff(&group_commutator_product(&h1, &h2, n).unwrap(), &target))
        .collect();
    ch.add(
        "commutator limit error decreasing in n",
        errs.windows(2).all(|p| p[1] < p[0]),
        errs.iter()
            .map(|e| format!("{e:.3e}"))
            .collect::<Vec<_>>()
            .join(", "),
    );
    ch.within(
        "commutator limit error < 1e-3 at n = 10^4",
        errs[3],
        COMMUTATOR_TOL,
    );
    ch
}

// ---------------------------------------------------------------- criterion 8

fn reversibility_agrees(k: &KrausSet, p: &CMatrix) -> (bool, f64, bool) {
    let cert = check_reversible(k, p).unwrap();
    let g = gate_from_kraus(k).unwrap();
    let gm = gate_from_kraus(&KrausSet::new(vec![p.clone()]).unwrap()).unwrap();
    let (superop, _) = check_reversible_superop(&g, &gm).unwrap();
    (cert.reversible, cert.mu_sq, cert.reversible == superop)
}

fn criterion_8() -> Checks {
    let mut ch = Checks::default();
    let mut r = rng(SEED + 8);
    let mut fixtures: Vec<(&str, KrausSet, CMatrix, bool)> = Vec::new();
    let u = haar_unitary(&mut r, 2);
    fixtures.push((
        "unitary, full space",
        KrausSet::new(vec![u]).unwrap(),
        CMatrix::identity(2, 2),
        true,
    ));
    let u2 = haar_unitary(&mut r, 4);
    fixtures.push((
        "two-qubit unitary, full space",
        KrausSet::new(vec![u2]).unwrap(),
        CMatrix::identity(4, 4),
        true,
    ));
    let p = 0.5f64;
    let mut depol = vec![CMatrix::identity(2, 2) * c((1.0 - 3.0 * p / 4.0).sqrt(), 0.0)];
    for k in 1..4 {
        depol.push(sigma(k) * c((p / 4.0).sqrt(), 0.0));
    }
    fixtures.push((
        "depolarizing p=1/2",
        KrausSet::new(depol).unwrap(),
        CMatrix::identity(2, 2),
        false,
    ));
    let q = 0.3f64;
    let x1 = sigma(1).kronecker(&sigma(0));
    let flip = KrausSet::new(vec![
        CMatrix::identity(4, 4) * c((1.0 - q).sqrt(), 0.0),
        x1 * c(q.sqrt(), 0.0),
    ])
    .unwrap();
    fixtures.push((
        "bit flip on span{|00>, |11>}",
        flip.clone(),
        ket_bra(4, 0) + ket_bra(4, 3),
        true,
    ));
    fixtures.push((
        "bit flip on span{|00>, |10>}",
        flip,
        ket_bra(4, 0) + ket_bra(4, 2),
        false,
    ));
    let g = 0.4f64;
    let ad = KrausSet::new(vec![
        CMatrix::from_row_slice(
            2,
            2,
            &[c(1., 0.), c(0., 0.), c(0., 0.), c((1.0 - g).sqrt(), 0.)],
        ),
        CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(g.sqrt(), 0.), c(0., 0.), c(0., 0.)]),
    ])
    .unwrap();
    fixtures.push((
        "amplitude damping, full space",
        ad.clone(),
        CMatrix::identity(2, 2),
        false,
    ));
    fixtures.push(("amplitude damping on span{|0>}", ad, ket_bra(2, 0), true));

    for (name, k, proj, expected) in &fixtures {
        let (rev, mu_sq, agree) = reversibility_agrees(k, proj);
        let mu_ok = !*expected || (mu_sq - 1.0).abs() < PROPERTY_TOL;
        ch.add(
            format!("{name}: reversible = {expected}, Kraus and superoperator tests agree"),
            rev == *expected && agree && mu_ok,
            format!("reversible {rev}, mu^2 {mu_sq:.12}, agree {agree}"),
        );
    }
    ch
}

// ---------------------------------------------------------------- criterion 9

fn criterion_9() -> Checks {
    let mut ch = Checks::default();

    // Index order: E_mn = Tr(s_m U s_n U^dag)/2 reproduces the U2 fixture; the transpose does not.
    let th = 0.7f64;
    let (hs, hc) = (th / 2.0).sin_cos();
    let u2 = CMatrix::from_row_slice(2, 2, &[c(hc, 0.), c(-hs, 0.), c(hs, 0.), c(hc, 0.)]);
    let proof_form = RMatrix::from_fn(4, 4, |m, n| {
        (ptrace(&(sigma(m as u8) * &u2 * sigma(n as u8) * u2.adjoint())) / 2.0).re
    });
    let g = gate_from_unitary(&u2).unwrap();
    ch.add(
        "unitary index order: E_mn = Tr(s_m U s_n U^dag)/2, not its transpose",
        diff(g.entries(), &proof_form) < FIXTURE_TOL
            && diff(g.entries(), &proof_form.transpose()) > 0.1,
        "",
    );

    // p(1) carries a minus sign: sqrt(2) (E1 rho)_0 = (rho_0 - rho_3)/sqrt(2).
    let mut r = rng(SEED + 9);
    let rho = random_density(&mut r, 1);
    let p = density_to_pvec(&rho).unwrap();
    let round = p.round_bracket();
    let e1 = measurement_gates(&[ket_bra(2, 1)]).unwrap().remove(0);
    let p1 = (e1.entries() * DVector::from_column_slice(p.coefficients()))[0];
    let computed = (round[0] - round[3]) / 2f64.sqrt();
    let plus_sign = (round[0] + round[3]) / 2f64.sqrt();
    ch.add(
        "p(1) = (rho_0 - rho_3)/sqrt(2)",
        (p1 - computed).abs() < FIXTURE_TOL
            && (p1 - rho.matrix()[(1, 1)].re).abs() < FIXTURE_TOL
            && (p1 - plus_sign).abs() > 1e-3,
        format!("p(1) {p1:.6}, with + sign {plus_sign:.6}"),
    );

    // T series starts at n = 1; also defined for singular A.
    let mut t_err: f64 = 0.0;
    for l in [
        {
            let mut l = RMatrix::zeros(4, 4);
            l[(1, 0)] = 1.0;
            l[(2, 2)] = -1.0;
            l[(3, 3)] = -0.5;
            l[(2, 3)] = 0.3;
            l
        },
        gks_matrix(&random_model(&mut r, false))
            .unwrap()
            .matrix()
            .clone(),
    ] {
        let gen = GeneratorMatrix::from_matrix(l.clone()).unwrap();
        let tau = 0.8;
        let a = gen.a();
        let b = gen.b();
        let mut series = b.clone() * tau;
        let mut term = b.clone() * tau;
        for n in 2..40 {
            term = &a * term * (tau / n as f64);
            series += &term;
        }
        let g = gks_propagator(&gen, tau).unwrap();
        let t = g.entries().view((1, 0), (3, 1)).column(0).into_owned();
        t_err = t_err.max((t - series).abs().max());
    }
    ch.within(
        "T = sum_{n>=1} tau^n A^(n-1) B / n!, singular A included",
        t_err,
        FIXTURE_TOL,
    );

    // The transcribed SF term list does not realize (V4, ~V4); the synthesized gate does.
    let v4 = builtin("v4").unwrap();
    let nv4 = TruthTable::from_fn(2, |x| 3 - v4.eval(x).unwrap()).unwrap();
    let idx = |a: usize, b: usize| 4 * a + b;
    let mut sf = RMatrix::zeros(16, 16);
    sf[(idx(0, 0), idx(0, 0))] += 1.0;
    sf[(idx(1, 2), idx(0, 0))] += 1.0;
    for mu in 0..4 {
        for nu in 1..4 {
            sf[(idx(1, 2), idx(mu, nu))] -= 1.0;
        }
    }
    for (to, from) in [
        ((2, 1), (1, 0)),
        ((2, 1), (1, 1)),
        ((3, 0), (0, 2)),
        ((3, 0), (2, 0)),
        ((3, 0), (1, 2)),
        ((3, 0), (2, 1)),
        ((3, 0), (2, 2)),
        ((0, 3), (0, 3)),
        ((0, 3), (1, 3)),
        ((0, 3), (2, 3)),
    ] {
        sf[(idx(to.0, to.1), idx(from.0, from.1))] += 1.0;
    }
    for mu in 0..4 {
        sf[(idx(0, 3), idx(3, mu))] += 1.0;
    }
    let expanded_sf = GateMatrix::square(sf).unwrap();
    let tables = [v4, nv4];
    let expanded_ok = verify_realization(&expanded_sf, &tables, VerifyMode::Plain).unwrap();
    let synth_ok = verify_realization(
        &synthesize_multi(&tables).unwrap(),
        &tables,
        VerifyMode::Plain,
    )
    .unwrap();
    ch.add(
        "SF: expanded term list fails, synthesized gate realizes (V4, ~V4)",
        !expanded_ok && synth_ok,
        "",
    );

    // [E_mn, E_ab] = d_na E_mb - d_bm E_an; writing the second term as E_na is wrong.
    let e = |a, b| matrix_unit(4, a, b);
    let (mut true_err, mut swapped_max) = (0.0f64, 0.0f64);
    for m in 0..4 {
        for n in 0..4 {
            for a in 0..4 {
                for b in 0..4 {
                    let lhs = commutator(&e(m, n), &e(a, b));
                    let right = e(m, b) * c(delta(n, a), 0.0) - e(a, n) * c(delta(b, m), 0.0);
                    let swapped = e(m, b) * c(delta(n, a), 0.0) - e(n, a) * c(delta(m, b), 0.0);
                    true_err = true_err.max(cdiff(&lhs, &right));
                    swapped_max = swapped_max.max(cdiff(&lhs, &swapped));
                }
            }
        }
    }
    ch.add(
        "Weyl commutator: standard identity holds, swapped index order does not",
        true_err == 0.0 && swapped_max > 0.5,
        "",
    );
    ch
}

fn main() {
    let criteria: [(u8, &str, fn() -> Checks); 9] = [
        (1, "reference matrix fixtures", criterion_1),
        (2, "gate property suite", criterion_2),
        (3, "decompositions", criterion_3),
        (4, "Lindblad propagators", criterion_4),
        (5, "measurement and nonlinearity", criterion_5),
        (6, "classical four-valued logic", criterion_6),
        (7, "universality", criterion_7),
        (8, "reversibility", criterion_8),
        (9, "recorded discrepancies", criterion_9),
    ];
    let mut unexpected = Vec::new();
    for (id, title, run) in criteria {
        let checks = run();
        let pass = checks.0.iter().all(|c| c.ok);
        println!(
            "criterion {id}: {} ({title}, {} checks)",
            if pass { "PASS" } else { "FAIL" },
            checks.0.len()
        );
        for c in &checks.0 {
            let known = KNOWN_FAILURES.contains(&(id, c.name.as_str()));
            if !c.ok {
                let tag = if known { "known" } else { "FAILED" };
                println!("    [{tag}] {}: {}", c.name, c.detail);
                if !known {
                    unexpected.push(format!("{id}: {}", c.name));
                }
            } else if known {
                println!("    [now passing] {}: {}", c.name, c.detail);
                unexpected.push(format!(
                    "{id}: {} passed but is listed as a known failure",
                    c.name
                ));
            } else if c.detail.is_empty() {
                println!("    [ok] {}", c.name);
            } else {
                println!("    [ok] {}: {}", c.name, c.detail);
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected results: {unexpected:#?}");
        std::process::exit(1);
    }
}
