//! Test-side oracles, independent of the library's solver and samplers.

#![allow(dead_code)]

use rfbd_core::case_study;
use rfbd_core::engine::{DispatchMode, McSettings, RequirementSchedule, RequirementStudy};
use rfbd_core::market::FrpRequirement;
use statrs::distribution::{Continuous, ContinuousCDF, Normal};

/// Prints the one-line verdict the acceptance run is read by.
pub fn verdict(name: &str, pass: bool, detail: impl AsRef<str>) -> bool {
    println!("{} {name}: {}", if pass { "PASS" } else { "FAIL" }, detail.as_ref());
    pass
}

/// Case-study FBD total VER error at t+1: two independent N(20, 2²) units.
pub fn fbd_error_sd() -> f64 {
    (2.0f64 * (case_study::ERROR_FRACTION * 20.0).powi(2)).sqrt()
}

/// `E[min(V, c)]` for `V ~ N(mu, sigma²)`.
pub fn expected_min_normal(mu: f64, sigma: f64, c: f64) -> f64 {
    let std = Normal::new(0.0, 1.0).unwrap();
    let a = (c - mu) / sigma;
    // E[min(V, c)] = c − E[(c − V)⁺]
    c - ((c - mu) * std.cdf(a) + sigma * std.pdf(a))
}

/// Binding t+1 cost and emissions for a capped mode: G1 covers
/// `85 − min(V, 40 − 2Δ)` alone.
pub fn cap_mode_t1_oracle(delta: f64) -> (f64, f64) {
    let served = expected_min_normal(40.0, fbd_error_sd(), 40.0 - 2.0 * delta);
    let g1 = 85.0 - served;
    (20.0 * g1 / 12.0, 0.214 * g1 / 12.0)
}

pub fn settings(trials: usize) -> McSettings {
    McSettings {
        trials,
        master_seed: case_study::MASTER_SEED,
        error_fraction: case_study::ERROR_FRACTION,
        execution: Default::default(),
    }
}

/// Requirement schedules for every case-study mode from one shared sample set.
pub fn shared_requirements() -> Vec<(DispatchMode, Vec<f64>, FrpRequirement, RequirementSchedule)> {
    let fc = case_study::forecasts();
    let study = RequirementStudy::draw(
        &fc,
        case_study::ERROR_FRACTION,
        case_study::REQUIREMENT_SAMPLES,
        case_study::MASTER_SEED,
    )
    .unwrap();
    case_study::modes()
        .into_iter()
        .map(|(mode, init)| {
            let req = study.requirement(&mode).unwrap();
            let sched = RequirementSchedule::uniform(&fc, req);
            (mode, init, req, sched)
        })
        .collect()
}

/// Reported requirements at t+1 per mode: FBD as given, capped modes
/// shifted by the total cap with FRD eliminated.
pub fn reported_requirement(delta: Option<f64>) -> FrpRequirement {
    let r = case_study::REPORTED_FBD_REQUIREMENT;
    match delta {
        None => r,
        Some(d) => FrpRequirement::new(r.fru - 2.0 * d, 0.0),
    }
}

/// Exhaustive vertex enumeration for the two-generator, two-interval window.
///
/// Dispatch of the second generator and the balance rows are eliminated,
/// leaving `y = (g₀₁, g₁₁, s₀, s₁)`. Because FRP carries no cost, the
/// allocation projects out analytically: per interval and direction the
/// system can hold `Σᵢ min(capacity headroomᵢ, ramp headroomᵢ)`, which is
/// concave, so `≥ R` is the conjunction of all four linear selections.
pub mod vertex {
    /// Affine form over `x = (g₀₁, g₀₂, g₁₁, g₁₂, s₀, s₁)` plus constant.
    #[derive(Clone, Copy)]
    struct Affine([f64; 6], f64);

    impl Affine {
        fn var(j: usize) -> Self {
            let mut a = [0.0; 6];
            a[j] = 1.0;
            Affine(a, 0.0)
        }
        fn konst(c: f64) -> Self {
            Affine([0.0; 6], c)
        }
        fn add(self, o: Affine) -> Self {
            let mut a = self.0;
            for (x, y) in a.iter_mut().zip(o.0) {
                *x += y;
            }
            Affine(a, self.1 + o.1)
        }
        fn neg(self) -> Self {
            Affine(self.0.map(|v| -v), -self.1)
        }
        fn sub(self, o: Affine) -> Self {
            self.add(o.neg())
        }
    }

    #[derive(Clone, Debug)]
    pub struct Instance {
        pub cost: [f64; 2],
        pub shed_penalty: f64,
        pub p_min: [f64; 2],
        pub p_max: [f64; 2],
        pub ramp_up: [f64; 2],
        pub ramp_down: [f64; 2],
        pub initial: [f64; 2],
        pub demand: [f64; 2],
        pub ver: [f64; 2],
        /// Requirements at the advisory interval.
        pub fru: f64,
        pub frd: f64,
    }

    /// `None` when the instance is infeasible.
    pub fn optimum(inst: &Instance) -> Option<f64> {
        let g = |k: usize, i: usize| Affine::var(2 * k + i);
        let s = |k: usize| Affine::var(4 + k);
        let c = Affine::konst;

        // constraints as `f(x) ≥ 0`
        let mut cons: Vec<Affine> = Vec::new();
        for k in 0..2 {
            for i in 0..2 {
                cons.push(g(k, i).sub(c(inst.p_min[i])));
                cons.push(c(inst.p_max[i]).sub(g(k, i)));
                let prev = if k == 0 { c(inst.initial[i]) } else { g(0, i) };
                cons.push(c(inst.ramp_up[i]).sub(g(k, i).sub(prev)));
                cons.push(g(k, i).sub(prev).add(c(inst.ramp_down[i])));
            }
            cons.push(s(k));
            cons.push(c(inst.demand[k]).sub(s(k)));
        }
        let up = |i: usize| {
            [
                c(inst.p_max[i]).sub(g(1, i)),
                g(0, i).add(c(inst.ramp_up[i])).sub(g(1, i)),
            ]
        };
        let down = |i: usize| {
            [
                g(1, i).sub(c(inst.p_min[i])),
                g(1, i).sub(g(0, i)).add(c(inst.ramp_down[i])),
            ]
        };
        for a in 0..2 {
            for b in 0..2 {
                cons.push(up(0)[a].add(up(1)[b]).sub(c(inst.fru)));
                cons.push(down(0)[a].add(down(1)[b]).sub(c(inst.frd)));
            }
        }

        // eliminate g₀₂ and g₁₂ through the balance rows
        let net = [inst.demand[0] - inst.ver[0], inst.demand[1] - inst.ver[1]];
        let reduce = |f: &Affine| -> ([f64; 4], f64) {
            let (a, k0) = (f.0, f.1);
            // g_k2 = net_k − g_k1 − s_k
            let coef = [a[0] - a[1], a[2] - a[3], a[4] - a[1], a[5] - a[3]];
            (coef, k0 + a[1] * net[0] + a[3] * net[1])
        };
        let objective = |y: &[f64; 4]| {
            let g02 = net[0] - y[0] - y[2];
            let g12 = net[1] - y[1] - y[3];
            inst.cost[0] * (y[0] + y[1]) + inst.cost[1] * (g02 + g12) + inst.shed_penalty * (y[2] + y[3])
        };
        let rows: Vec<([f64; 4], f64)> = cons.iter().map(reduce).collect();

        let mut best: Option<f64> = None;
        let m = rows.len();
        for a in 0..m {
            for b in a + 1..m {
                for cc in b + 1..m {
                    for d in cc + 1..m {
                        let pick = [a, b, cc, d];
                        let mut mat = [[0.0; 4]; 4];
                        let mut rhs = [0.0; 4];
                        for (r, &idx) in pick.iter().enumerate() {
                            mat[r] = rows[idx].0;
                            rhs[r] = -rows[idx].1;
                        }
                        let Some(y) = solve4(mat, rhs) else { continue };
                        let feasible = rows.iter().all(|(coef, k0)| {
                            let v: f64 = coef.iter().zip(&y).map(|(p, q)| p * q).sum::<f64>() + k0;
                            v >= -1e-9 * (1.0 + k0.abs())
                        });
                        if feasible {
                            let f = objective(&y);
                            best = Some(best.map_or(f, |b: f64| b.min(f)));
                        }
                    }
                }
            }
        }
        best
    }

    fn solve4(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> Option<[f64; 4]> {
        for col in 0..4 {
            let piv = (col..4).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
            if a[piv][col].abs() < 1e-10 {
                return None;
            }
            a.swap(col, piv);
            b.swap(col, piv);
            for r in 0..4 {
                if r != col {
                    let f = a[r][col] / a[col][col];
                    let pivot = a[col];
                    for (x, p) in a[r][col..].iter_mut().zip(&pivot[col..]) {
                        *x -= f * p;
                    }
                    b[r] -= f * b[col];
                }
            }
        }
        Some([b[0] / a[0][0], b[1] / a[1][1], b[2] / a[2][2], b[3] / a[3][3]])
    }
}
