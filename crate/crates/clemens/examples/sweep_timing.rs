//! Timing overview of the verification pipelines across small instances.
//! Run: cargo run -p clemens --example sweep_timing

use std::time::Instant;

use clemens::exact::Rat;
use clemens::lmhs::{gen_instance, CaseFlag};
use clemens::orbit::{
    ddbar_det, delta_threshold, gen_f2_family, gen_h21_family, hr_verify, sweep, Verdict,
};

fn main() {
    for (h, seed) in [(0usize, 60u64), (1, 61), (2, 69)] {
        for &case in &[CaseFlag::I, CaseFlag::II] {
            let inst = gen_instance(h, case, seed);
            let f2 = gen_f2_family(&inst, seed + 10, 2).unwrap();
            let h21 = gen_h21_family(&f2, seed + 20).unwrap();
            let t0 = Instant::now();
            let th = match delta_threshold(&f2, &h21) {
                Ok(th) => th,
                Err(e) => {
                    println!("h={h} case {case}: no threshold: {e}");
                    continue;
                }
            };
            let t1 = Instant::now();
            let radius = th.delta.clone().min(Rat::new(1, 1000));
            let bases = sweep::sample_base_points(h, &radius, 50, 6);
            let points = sweep::lift_from_zeta(&bases, 96).unwrap();
            let t2 = Instant::now();
            for p in &points {
                assert_eq!(ddbar_det(&f2, p).unwrap().nonzero_verdict(p), Verdict::Pass);
            }
            let t3 = Instant::now();
            for p in &points {
                assert_eq!(hr_verify(&h21, p).unwrap().verdict, Verdict::Pass);
            }
            let t4 = Instant::now();
            println!(
                "h={h} case {case}: delta=2^-{} threshold {:.2}s lift {:.1}ms/pt ddbar {:.1}ms/pt hr {:.1}ms/pt",
                th.delta.denom().bits() - 1,
                (t1 - t0).as_secs_f64(),
                (t2 - t1).as_secs_f64() * 20.0,
                (t3 - t2).as_secs_f64() * 20.0,
                (t4 - t3).as_secs_f64() * 20.0,
            );
        }
    }
}
