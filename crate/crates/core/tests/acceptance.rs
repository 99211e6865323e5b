//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use ttkit::linops::{add, apply, dot, hadamard, local_bilinear_form, local_map_apply, quadratic_form};
use ttkit::oracle::{self, dense_reference, OracleReport, RefOp};
use ttkit::random::{self, InstanceRng};
use ttkit::tensor::{
    contract, direct_sum, hadamard as dense_hadamard, kron, matricize, mode_product, mode_vec_product, outer,
    self_contraction, tucker,
};
use ttkit::{io, BlockMatrix, DenseTensor, OrthMode, StrongKron, Truncation, TtMatrix, TtTensor, Unfolding, Variant};

/// Running record of comparisons for one criterion.
#[derive(Default)]
struct Tally {
    checks: usize,
    worst: Option<f64>,
    failures: Vec<String>,
}

impl Tally {
    fn cmp(&mut self, op: &str, got: &[f64], want: &[f64], tol: f64, inst: impl Into<String>, seed: u64) {
        let r = OracleReport::compare(op, got, want, tol, inst, Some(seed));
        self.checks += 1;
        self.err(r.max_rel_err);
        if !r.passed {
            self.failures.push(r.to_json_line());
        }
    }

    fn err(&mut self, e: f64) {
        self.worst = Some(self.worst.map_or(e, |w| w.max(e)));
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(self, detail: &str) -> Result<String, String> {
        if self.failures.is_empty() {
            let worst = self.worst.map(|w| format!(", worst rel err {w:.2e}")).unwrap_or_default();
            Ok(format!("{} checks{worst}{detail}", self.checks))
        } else {
            Err(format!("{} of {} checks failed; first: {}", self.failures.len(), self.checks, self.failures[0]))
        }
    }
}

fn rnd(rng: &mut InstanceRng, dims: &[usize]) -> DenseTensor {
    random::dense(rng, dims).unwrap()
}

fn mat(rng: &mut InstanceRng, r: usize, c: usize) -> DMatrix<f64> {
    DMatrix::from_row_slice(r, c, &random::values(rng, r * c))
}

fn rows(m: &DMatrix<f64>) -> Vec<f64> {
    m.transpose().as_slice().to_vec()
}

fn raw(x: &TtTensor) -> Vec<DenseTensor> {
    x.cores().iter().map(|c| c.tensor().clone()).collect()
}

fn raw_m(a: &TtMatrix) -> Vec<DenseTensor> {
    a.cores().iter().map(|c| c.tensor().clone()).collect()
}

fn frob(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn rel_frob(a: &[f64], b: &[f64]) -> f64 {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    frob(&d) / frob(b)
}

fn defect(g: DMatrix<f64>) -> f64 {
    let n = g.nrows();
    (g - DMatrix::identity(n, n)).amax()
}

const SHAPES: [&[usize]; 3] = [&[2, 3], &[3, 2, 2], &[2, 3, 2, 2]];

fn tensor_core_suite() -> Result<String, String> {
    let start = Instant::now();
    let mut t = Tally::default();
    let tol = 1e-12;
    for seed in 0..50u64 {
        let mut rng = random::seeded(seed);
        for dims in SHAPES {
            let n = dims.len();
            let inst = format!("{dims:?}");
            let a = rnd(&mut rng, dims);
            let mut variants = vec![Variant::Full];
            for k in 0..n {
                variants.push(Variant::Mode(k));
                variants.push(Variant::Shared(k));
            }
            for v in variants {
                let bdims: Vec<usize> = (0..n)
                    .map(|k| match v {
                        Variant::Mode(m) if m != k => dims[k],
                        Variant::Shared(m) if m == k => dims[k],
                        _ => 1 + (k + seed as usize) % 3,
                    })
                    .collect();
                let b = rnd(&mut rng, &bdims);
                let iv = format!("{inst} {bdims:?} {v:?}");
                t.cmp("kron", kron(&a, &b, v).unwrap().data(), dense_reference(&RefOp::Kron(&a, &b, v)).unwrap().data(), tol, &iv, seed);
                t.cmp("direct_sum", direct_sum(&a, &b, v).unwrap().data(), dense_reference(&RefOp::DirectSum(&a, &b, v)).unwrap().data(), tol, &iv, seed);
            }
            let b = rnd(&mut rng, dims);
            t.cmp("hadamard", dense_hadamard(&a, &b).unwrap().data(), dense_reference(&RefOp::Hadamard(&a, &b)).unwrap().data(), tol, &inst, seed);
            let c = rnd(&mut rng, &[2, 2]);
            t.cmp("outer", outer(&a, &c).unwrap().data(), dense_reference(&RefOp::Outer(&a, &c)).unwrap().data(), tol, &inst, seed);
            for k in 0..n {
                let m = rnd(&mut rng, &[2, dims[k]]);
                let got = mode_product(&a, &m.to_matrix().unwrap(), k).unwrap();
                t.cmp("mode_product", got.data(), dense_reference(&RefOp::ModeProduct(&a, &m, k)).unwrap().data(), tol, &inst, seed);
                let v = rnd(&mut rng, &[dims[k]]);
                let got = mode_vec_product(&a, v.data(), k).unwrap();
                t.cmp("mode_vec_product", got.data(), dense_reference(&RefOp::ModeVecProduct(&a, &v, k)).unwrap().data(), tol, &inst, seed);
            }
            let b = rnd(&mut rng, &[dims[n - 1], 2, 3]);
            t.cmp("contract", contract(&a, &b).unwrap().data(), dense_reference(&RefOp::Contract(&a, &b)).unwrap().data(), tol, &inst, seed);
            let factors: Vec<DenseTensor> = dims.iter().enumerate().map(|(k, &d)| rnd(&mut rng, &[1 + k % 3, d])).collect();
            t.cmp("tucker", tucker(&a, &factors).unwrap().data(), dense_reference(&RefOp::Tucker(&a, &factors)).unwrap().data(), tol, &inst, seed);
            let mut sdims = dims.to_vec();
            sdims[n - 1] = dims[0];
            let s = rnd(&mut rng, &sdims);
            t.cmp("self_contraction", self_contraction(&s).unwrap().data(), dense_reference(&RefOp::SelfContraction(&s)).unwrap().data(), tol, format!("{sdims:?}"), seed);
            let mut unf: Vec<Unfolding> = (0..n).map(Unfolding::Mode).collect();
            unf.extend((0..=n).map(Unfolding::Prefix));
            for u in unf {
                t.cmp("matricize", &rows(&matricize(&a, u).unwrap()), dense_reference(&RefOp::Matricize(&a, u)).unwrap().data(), 0.0, format!("{inst} {u:?}"), seed);
            }
        }
        // strong Kronecker product of block matrices
        let ab: Vec<_> = (0..4).map(|_| mat(&mut rng, 2, 3)).collect();
        let bb: Vec<_> = (0..2).map(|_| mat(&mut rng, 3, 2)).collect();
        let got = BlockMatrix::new(2, 2, ab.clone()).unwrap().strong_kron(&BlockMatrix::new(2, 1, bb.clone()).unwrap()).unwrap();
        let at: Vec<_> = ab.iter().map(|m| DenseTensor::from_matrix(m).unwrap()).collect();
        let bt: Vec<_> = bb.iter().map(|m| DenseTensor::from_matrix(m).unwrap()).collect();
        let want = oracle::strong_kron(&at, 2, 2, &bt, 1).unwrap();
        let want = BlockMatrix::new(2, 1, want.iter().map(|x| x.to_matrix().unwrap()).collect()).unwrap();
        t.cmp("strong_kron", &rows(&got.to_dense().unwrap()), &rows(&want.to_dense().unwrap()), tol, "2x2|x|2x1", seed);
    }
    let mut props = 0;
    for seed in 0..10u64 {
        props += identities(&mut t, seed);
    }
    let secs = start.elapsed().as_secs_f64();
    t.check(secs < 10.0, || format!("runtime {secs:.2} s exceeds 10 s"));
    t.finish(&format!(", {props} identity checks, {secs:.2} s"))
}

/// Checks each algebraic identity once for `seed`; returns how many were checked.
fn identities(t: &mut Tally, seed: u64) -> usize {
    let tol = 1e-12;
    let mut rng = random::seeded(10_000 + seed);
    let mut count = 0;
    let mut cmp = |t: &mut Tally, name: &str, a: &[f64], b: &[f64]| {
        count += 1;
        t.cmp(name, a, b, tol, "", seed);
    };
    // Tucker forms of products; factor orders alternate between (1, 2) and (1, 1, 1)
    let m: Vec<usize> = if seed % 2 == 0 { vec![1, 2] } else { vec![1, 1, 1] };
    let side = |rng: &mut InstanceRng, r: usize| {
        let g = rnd(rng, &vec![r; m.len()]);
        let f: Vec<DenseTensor> = m
            .iter()
            .enumerate()
            .map(|(k, &mk)| {
                let mut d: Vec<usize> = (0..mk).map(|j| 2 + (k + j) % 2).collect();
                d.push(r);
                rnd(rng, &d)
            })
            .collect();
        (g, f)
    };
    let (gx, ax) = side(&mut rng, 2);
    let (gy, by) = side(&mut rng, 1 + seed as usize % 2);
    let x = tucker(&gx, &ax).unwrap();
    let y = tucker(&gy, &by).unwrap();
    let pw = |f: &dyn Fn(&DenseTensor, &DenseTensor, usize) -> DenseTensor| -> Vec<DenseTensor> {
        ax.iter().zip(&by).zip(&m).map(|((a, b), &mk)| f(a, b, mk)).collect()
    };
    let gk = kron(&gx, &gy, Variant::Full).unwrap();
    let gs = direct_sum(&gx, &gy, Variant::Full).unwrap();
    let l = tucker(&gk, &pw(&|a, b, _| kron(a, b, Variant::Full).unwrap())).unwrap();
    cmp(t, "tucker_kron", l.data(), kron(&x, &y, Variant::Full).unwrap().data());
    let l = tucker(&gk, &pw(&|a, b, mk| kron(a, b, Variant::Mode(mk)).unwrap())).unwrap();
    cmp(t, "tucker_hadamard", l.data(), dense_hadamard(&x, &y).unwrap().data());
    let l = tucker(&gs, &pw(&|a, b, _| direct_sum(a, b, Variant::Full).unwrap())).unwrap();
    cmp(t, "tucker_direct_sum", l.data(), direct_sum(&x, &y, Variant::Full).unwrap().data());
    let l = tucker(&gs, &pw(&|a, b, mk| direct_sum(a, b, Variant::Mode(mk)).unwrap())).unwrap();
    cmp(t, "tucker_sum", l.data(), x.add(&y).unwrap().data());

    // contracted products
    let a = rnd(&mut rng, &[3, 2, 3]);
    let b = rnd(&mut rng, &[3, 2, 2]);
    let c = rnd(&mut rng, &[2, 3]);
    let l = contract(&contract(&a, &b).unwrap(), &c).unwrap();
    cmp(t, "contract_associative", l.data(), contract(&a, &contract(&b, &c).unwrap()).unwrap().data());
    let id = DenseTensor::identity(2).unwrap();
    let r = tucker(&b, &[a.clone(), id.clone(), id]).unwrap();
    cmp(t, "contract_as_tucker", contract(&a, &b).unwrap().data(), r.data());
    let g = rnd(&mut rng, &[2, 3, 2]);
    let p = mat(&mut rng, 4, 2);
    let q = mat(&mut rng, 2, 5);
    let l = contract(&DenseTensor::from_matrix(&p).unwrap(), &g).unwrap();
    cmp(t, "contract_left_matrix", l.data(), mode_product(&g, &p, 0).unwrap().data());
    let l = contract(&g, &DenseTensor::from_matrix(&q).unwrap()).unwrap();
    cmp(t, "contract_right_matrix", l.data(), mode_product(&g, &q.transpose(), 2).unwrap().data());
    let a4 = rnd(&mut rng, &[2, 3, 2, 3]);
    let b3 = rnd(&mut rng, &[3, 2, 2]);
    let ab = contract(&a4, &b3).unwrap();
    for mm in 1..=3 {
        let eye: usize = a4.dims()[mm..3].iter().product();
        let rhs = matricize(&a4, Unfolding::Prefix(mm)).unwrap()
            * DMatrix::<f64>::identity(eye, eye).kronecker(&matricize(&b3, Unfolding::Mode(0)).unwrap());
        cmp(t, "contract_unfolding", &rows(&matricize(&ab, Unfolding::Prefix(mm)).unwrap()), &rows(&rhs));
    }

    // products of contracted pairs
    let (a1, a2) = (rnd(&mut rng, &[2, 3]), rnd(&mut rng, &[3, 2]));
    let (b1, b2) = (rnd(&mut rng, &[2, 2]), rnd(&mut rng, &[2, 2]));
    let x = contract(&a1, &a2).unwrap();
    let y = contract(&b1, &b2).unwrap();
    let cc = |l: DenseTensor, r: DenseTensor| contract(&l, &r).unwrap();
    let l = cc(kron(&a1, &b1, Variant::Full).unwrap(), kron(&a2, &b2, Variant::Full).unwrap());
    cmp(t, "pair_kron", l.data(), kron(&x, &y, Variant::Full).unwrap().data());
    let l = cc(kron(&a1, &b1, Variant::Mode(1)).unwrap(), kron(&a2, &b2, Variant::Mode(0)).unwrap());
    cmp(t, "pair_hadamard", l.data(), dense_hadamard(&x, &y).unwrap().data());
    let l = cc(direct_sum(&a1, &b1, Variant::Full).unwrap(), direct_sum(&a2, &b2, Variant::Full).unwrap());
    cmp(t, "pair_direct_sum", l.data(), direct_sum(&x, &y, Variant::Full).unwrap().data());
    let l = cc(direct_sum(&a1, &b1, Variant::Mode(1)).unwrap(), direct_sum(&a2, &b2, Variant::Mode(0)).unwrap());
    cmp(t, "pair_sum", l.data(), x.add(&y).unwrap().data());

    // self-contraction exchange
    let a = rnd(&mut rng, &[2, 3, 2, 3]);
    let b = rnd(&mut rng, &[3, 2, 2]);
    let sab = self_contraction(&contract(&a, &b).unwrap()).unwrap();
    let sba = self_contraction(&contract(&b, &a).unwrap()).unwrap().permute(&[1, 2, 0]).unwrap();
    cmp(t, "self_contraction_exchange", sab.data(), sba.data());
    count
}

fn tt_svd_exactness() -> Result<String, String> {
    let mut t = Tally::default();
    for seed in 0..20u64 {
        let mut rng = random::seeded(20_000 + seed);
        let d = rnd(&mut rng, &[3, 3, 3, 3]);
        let x = TtTensor::from_dense(&d, &Truncation::exact()).unwrap();
        let err = rel_frob(x.to_dense().unwrap().data(), d.data());
        t.check(err <= 1e-12, || format!("seed {seed}: reconstruction error {err:.3e}"));
        t.err(err);
        let s = oracle::separation_ranks(&d).unwrap();
        t.check(x.ranks() == s, || format!("seed {seed}: ranks {:?} vs separation ranks {s:?}", x.ranks()));
    }
    t.finish("")
}

fn quasi_optimality() -> Result<String, String> {
    let mut t = Tally::default();
    for seed in 0..10u64 {
        let mut rng = random::seeded(30_000 + seed);
        let d = rnd(&mut rng, &[3, 3, 3, 3]);
        let x = TtTensor::from_dense(&d, &Truncation::ranks(vec![2, 2, 2]).unwrap()).unwrap();
        let err = frob(x.to_dense().unwrap().sub(&d).unwrap().data());
        let tails: Vec<f64> = (1..4).map(|n| oracle::unfolding_tail(&d, n, 2).unwrap()).collect();
        let sum: f64 = tails.iter().map(|v| v * v).sum();
        let max = tails.iter().cloned().fold(0.0, f64::max);
        t.check(err * err <= sum + 1e-10, || format!("seed {seed}: err^2 {:.6e} > sum of tails^2 {sum:.6e}", err * err));
        t.check(err <= 3f64.sqrt() * max + 1e-10, || format!("seed {seed}: err {err:.6e} > sqrt(3) max tail {max:.6e}"));
    }
    t.finish("")
}

fn orthogonality_and_frames() -> Result<String, String> {
    let mut t = Tally::default();
    for seed in 0..10u64 {
        let mut rng = random::seeded(40_000 + seed);
        let x = random::tt(&mut rng, &[2, 3, 3, 2], &[2, 3, 2]).unwrap();
        let d = x.to_dense().unwrap();
        let nx = frob(d.data());
        for n in 0..4 {
            let m = x.orthogonalize(OrthMode::MixedAt(n)).unwrap();
            for k in 0..n {
                let l = m.core(k).left_unfolding();
                let e = defect(l.transpose() * &l);
                t.check(e <= 1e-10, || format!("seed {seed} site {n}: core {k} left defect {e:.2e}"));
            }
            for k in n + 1..4 {
                let r = m.core(k).right_unfolding();
                let e = defect(&r * r.transpose());
                t.check(e <= 1e-10, || format!("seed {seed} site {n}: core {k} right defect {e:.2e}"));
            }
            let f = m.frame_matrix(n, false).unwrap();
            let e = defect(f.transpose() * &f);
            t.check(e <= 1e-10, || format!("seed {seed} site {n}: frame column defect {e:.2e}"));
            let v = &f * DVector::from_column_slice(m.core(n).data());
            let r = frob(&v.iter().zip(d.data()).map(|(p, q)| p - q).collect::<Vec<_>>());
            t.check(r <= 1e-12 * nx, || format!("seed {seed} site {n}: frame residual {:.2e}", r / nx));
            t.err(r / nx);
            if n + 1 < 4 {
                let f = m.frame_matrix(n, true).unwrap();
                let pair = contract(m.core(n).tensor(), m.core(n + 1).tensor()).unwrap();
                let v = &f * DVector::from_column_slice(pair.data());
                let r = frob(&v.iter().zip(d.data()).map(|(p, q)| p - q).collect::<Vec<_>>());
                t.check(r <= 1e-12 * nx, || format!("seed {seed} site {n}: pair frame residual {:.2e}", r / nx));
                t.err(r / nx);
            }
        }
    }
    t.finish("")
}

fn rank_arithmetic() -> Result<String, String> {
    let mut t = Tally::default();
    let dims = [3, 3, 3, 3];
    for seed in 0..10u64 {
        let mut rng = random::seeded(50_000 + seed);
        let rx = vec![2, 3, 2];
        let ry = vec![1 + seed as usize % 3, 2, 1 + (seed as usize + 1) % 3];
        let x = random::tt(&mut rng, &dims, &rx).unwrap();
        let y = random::tt(&mut rng, &dims, &ry).unwrap();
        let sum: Vec<usize> = rx.iter().zip(&ry).map(|(a, b)| a + b).collect();
        let prod: Vec<usize> = rx.iter().zip(&ry).map(|(a, b)| a * b).collect();
        let s = add(&x, &y).unwrap().ranks();
        t.check(s == sum, || format!("seed {seed}: add ranks {s:?} vs {sum:?}"));
        let h = hadamard(&x, &y).unwrap().ranks();
        t.check(h == prod, || format!("seed {seed}: hadamard ranks {h:?} vs {prod:?}"));
        let ra = vec![2, 1 + seed as usize % 2, 3];
        let a = random::tt_matrix(&mut rng, &[2, 3, 2, 3], &dims, &ra).unwrap();
        let want: Vec<usize> = ra.iter().zip(&rx).map(|(a, b)| a * b).collect();
        let z = apply(&a, &x).unwrap().ranks();
        t.check(z == want, || format!("seed {seed}: matvec ranks {z:?} vs {want:?}"));
        let r = add(&x, &x).unwrap().round(&Truncation::eps(1e-12).unwrap()).unwrap().ranks();
        t.check(r == rx, || format!("seed {seed}: round(x + x) ranks {r:?} vs {rx:?}"));
    }
    t.finish("")
}

fn arithmetic_correctness() -> Result<String, String> {
    let mut t = Tally::default();
    let tol = 1e-12;
    for seed in 0..20u64 {
        let mut rng = random::seeded(60_000 + seed);
        let dims: Vec<usize> = (0..3).map(|k| 1 + (seed as usize + k) % 3).collect();
        let out: Vec<usize> = (0..3).map(|k| 1 + (seed as usize + 2 * k + 1) % 3).collect();
        let b = |k: usize| 1 + (seed as usize / 3 + k) % 3;
        let x = random::tt(&mut rng, &dims, &[b(0), b(1)]).unwrap();
        let y = random::tt(&mut rng, &dims, &[b(2), b(3)]).unwrap();
        let (dx, dy) = (oracle::tt_dense(&raw(&x)).unwrap(), oracle::tt_dense(&raw(&y)).unwrap());
        let inst = format!("I {dims:?} J {out:?}");
        t.cmp("add", add(&x, &y).unwrap().to_dense().unwrap().data(), dense_reference(&RefOp::Add(&dx, &dy)).unwrap().data(), tol, &inst, seed);
        t.cmp("hadamard", hadamard(&x, &y).unwrap().to_dense().unwrap().data(), dense_reference(&RefOp::Hadamard(&dx, &dy)).unwrap().data(), tol, &inst, seed);
        t.cmp("dot", &[dot(&x, &y).unwrap()], dense_reference(&RefOp::Dot(&dx, &dy)).unwrap().data(), tol, &inst, seed);
        let a = random::tt_matrix(&mut rng, &out, &dims, &[b(4), b(5)]).unwrap();
        let da = oracle::mtt_dense(&raw_m(&a)).unwrap();
        t.cmp("matvec", apply(&a, &x).unwrap().to_dense().unwrap().data(), dense_reference(&RefOp::Matvec(&da, &dx)).unwrap().data(), tol, &inst, seed);
        let q = random::tt_matrix(&mut rng, &dims, &dims, &[b(1), b(2)]).unwrap();
        let dq = oracle::mtt_dense(&raw_m(&q)).unwrap();
        t.cmp("quadform", &[quadratic_form(&x, &q).unwrap()], dense_reference(&RefOp::Quadratic(&dq, &dx)).unwrap().data(), tol, &inst, seed);
    }
    t.finish("")
}

fn localized_operators() -> Result<String, String> {
    let mut t = Tally::default();
    let tol = 1e-12;
    for seed in 0..10u64 {
        let mut rng = random::seeded(70_000 + seed);
        let dims = [2, 3, 2];
        let x = random::tt(&mut rng, &dims, &[2, 3]).unwrap();
        let a = random::tt_matrix(&mut rng, &[3, 2, 2], &dims, &[2, 2]).unwrap();
        let q = random::tt_matrix(&mut rng, &dims, &dims, &[3, 2]).unwrap();
        let da = oracle::mtt_dense(&raw_m(&a)).unwrap().to_matrix().unwrap();
        let dq = oracle::mtt_dense(&raw_m(&q)).unwrap().to_matrix().unwrap();
        for n in 0..3 {
            let f = oracle::frame_matrix(&raw(&x), n, false).unwrap().to_matrix().unwrap();
            let shape = x.core(n).tensor().dims().to_vec();
            let w = rnd(&mut rng, &shape);
            let y = rnd(&mut rng, &shape);
            let vw = DVector::from_column_slice(w.data());
            let vy = DVector::from_column_slice(y.data());
            let want = &da * &f * &vw;
            t.cmp("local_map", local_map_apply(&a, &x, n, &w).unwrap().data(), want.as_slice(), tol, format!("site {n}"), seed);
            let want = (vy.transpose() * f.transpose() * &dq * &f * &vw)[(0, 0)];
            t.cmp("local_bilinear", &[local_bilinear_form(&q, &x, n, &y, &w).unwrap()], &[want], tol, format!("site {n}"), seed);
        }
    }
    t.finish("")
}

/// Median seconds per `dot` over `runs` batches of `reps` calls.
fn time_dot(n: usize, reps: usize, runs: usize) -> f64 {
    let mut rng = random::seeded(80_000 + n as u64);
    let x = random::tt(&mut rng, &vec![4; n], &vec![8; n - 1]).unwrap();
    let y = random::tt(&mut rng, &vec![4; n], &vec![8; n - 1]).unwrap();
    let mut acc = dot(&x, &y).unwrap();
    let mut times: Vec<f64> = (0..runs)
        .map(|_| {
            let t0 = Instant::now();
            for _ in 0..reps {
                acc += std::hint::black_box(dot(std::hint::black_box(&x), &y).unwrap());
            }
            t0.elapsed().as_secs_f64() / reps as f64
        })
        .collect();
    std::hint::black_box(acc);
    times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    times[runs / 2]
}

fn scaling() -> Result<String, String> {
    let t8 = time_dot(8, 400, 5);
    let t64 = time_dot(64, 50, 5);
    let ratio = t64 / t8;
    let detail = format!("t(8) {:.3e} s, t(64) {:.3e} s, ratio {ratio:.2}", t8, t64);
    if ratio <= 16.0 && t64 < 1.0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn io_round_trips() -> Result<String, String> {
    let mut t = Tally::default();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
    for seed in 0..100u64 {
        let mut rng = random::seeded(90_000 + seed);
        let order = 1 + seed as usize % 4;
        let dims: Vec<usize> = (0..order).map(|k| 1 + (seed as usize + k) % 3).collect();
        let d = rnd(&mut rng, &dims);
        let p = dir.path().join("x.dnst");
        io::write_dense(&p, &d).unwrap();
        let back = io::read_dense(&p).unwrap();
        t.check(back.dims() == d.dims() && bits(back.data()) == bits(d.data()), || format!("seed {seed}: .dnst differs"));

        let ranks: Vec<usize> = (1..order).map(|k| 1 + (seed as usize * k) % 3).collect();
        let x = random::tt(&mut rng, &dims, &ranks).unwrap();
        let x = if seed % 3 == 0 { x.orthogonalize(OrthMode::MixedAt(order / 2)).unwrap() } else { x };
        let p = dir.path().join("x.ttv");
        io::write_tt(&p, &x).unwrap();
        let back = io::read_tt(&p).unwrap();
        let same = back.orth_flags() == x.orth_flags()
            && back.cores().iter().zip(x.cores()).all(|(a, b)| a.tensor().dims() == b.tensor().dims() && bits(a.data()) == bits(b.data()));
        t.check(same, || format!("seed {seed}: .ttv differs"));

        let cols: Vec<usize> = dims.iter().map(|d| 1 + d % 3).collect();
        let a = random::tt_matrix(&mut rng, &dims, &cols, &ranks).unwrap();
        let p = dir.path().join("a.ttm");
        io::write_ttm(&p, &a).unwrap();
        let back = io::read_ttm(&p).unwrap();
        let same = back.cores().iter().zip(a.cores()).all(|(u, v)| u.tensor().dims() == v.tensor().dims() && bits(u.data()) == bits(v.data()));
        t.check(same, || format!("seed {seed}: .ttm differs"));
    }
    t.finish("")
}

fn main() {
    let criteria: [(&str, fn() -> Result<String, String>); 9] = [
        ("dense operations and identities", tensor_core_suite),
        ("TT-SVD exactness", tt_svd_exactness),
        ("TT-SVD quasi-optimality", quasi_optimality),
        ("orthogonality and frames", orthogonality_and_frames),
        ("rank arithmetic", rank_arithmetic),
        ("arithmetic correctness", arithmetic_correctness),
        ("localized operators", localized_operators),
        ("dot scaling in N", scaling),
        ("file round-trips", io_round_trips),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail})", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({detail})", k + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
