//! Calibration survey for the wave benchmark defaults: prints noise floors
//! for the four reference configurations and instability onsets for the
//! scheme set, over a grid of damping-profile powers and filter strengths.
//!
//! Usage: cargo run --release --example calibrate [floors|onsets|defaults|curves|cross]

use rkamp_core::schemes::Registry;
use rkamp_core::wave1d::{
    noise_floor, run_benchmark, DampingProfile, StencilSet, WavePacket, WaveProblem,
};

fn problem(ppw: usize, power: usize, flat: bool) -> WaveProblem {
    let d = if flat {
        DampingProfile::flat_top(12.0, 2.0, 6.0, power).unwrap()
    } else {
        DampingProfile::new(12.0, 2.0, 6.0, power).unwrap()
    };
    WaveProblem::new(ppw, d, WavePacket::default_packet()).unwrap()
}

fn floors(set: &StencilSet) {
    // (label, stencil, ppw, filter, target)
    let configs = [
        ("hires", "max14", 32usize, "F16.4", 5e-11),
        ("midres", "max6", 24, "F6", 5e-4),
        ("coarse", "max6", 16, "F6", 5e-3),
        ("drp", "DRP", 8, "F6", 0.2),
    ];
    println!("config power flat sigma floor target ratio");
    for power in [2usize, 3, 4] {
        for flat in [false, true] {
            for sigma in [0.02, 0.05, 0.1, 0.2] {
                for (label, stname, ppw, flname, target) in configs {
                    let st = set.stencil(stname).unwrap();
                    let fl = set.filter(flname).unwrap();
                    let pr = problem(ppw, power, flat);
                    let f = noise_floor(&pr, st, Some((fl, sigma))).unwrap();
                    println!(
                        "{label} {power} {flat} {sigma} {f:.3e} {target:.0e} {:.2}",
                        f / target
                    );
                }
            }
        }
    }
}

fn onsets(set: &StencilSet) {
    let reg = Registry::builtin();
    let st = set.stencil("max6").unwrap();
    let fl = set.filter("F6").unwrap();
    let schemes = [
        "RK4", "LDDRK4", "LDDRK5", "LDDRK6", "BBo5s", "BBo6s", "LDDRK46", "LDDRK56",
    ];
    println!("sigma power scheme onset");
    for power in [1usize, 3] {
        let pr = problem(24, power, true);
        for sigma in [0.05, 0.1, 0.2, 0.5, 1.0] {
            for name in schemes {
                let e = reg.get(name).unwrap();
                let mut onset = f64::NAN;
                let mut c = 0.80;
                while c <= 5.0 {
                    let r = run_benchmark(&pr, e, c, st, Some((fl, sigma))).unwrap();
                    if !r.stable() {
                        onset = c;
                        break;
                    }
                    c += 0.05;
                }
                println!("{sigma} {power} {name} {onset:.2}");
            }
        }
    }
}

fn default_scan(set: &StencilSet) {
    // final-default check: power 3, flatten 0.35, sigma 0.05 over all four
    // reference configurations
    let configs = [
        ("hires", "max14", 32usize, "F16.4", 5e-11),
        ("midres", "max6", 24, "F6", 5e-4),
        ("coarse", "max6", 16, "F6", 5e-3),
        ("drp", "DRP", 8, "F6", 0.2),
    ];
    println!("config floor target ratio");
    for (label, stname, ppw, flname, target) in configs {
        let st = set.stencil(stname).unwrap();
        let fl = set.filter(flname).unwrap();
        let d = DampingProfile::with_flatten(12.0, 2.0, 6.0, 3, 0.35).unwrap();
        let pr = WaveProblem::new(ppw, d, WavePacket::default_packet()).unwrap();
        let f = noise_floor(&pr, st, Some((fl, 0.05))).unwrap();
        println!("{label} {f:.3e} {target:.0e} {:.2}", f / target);
    }
}

fn effort_curves(set: &StencilSet) {
    let reg = Registry::builtin();
    let st = set.stencil("max6").unwrap();
    let fl = set.filter("F6").unwrap();
    let pr = WaveProblem::default_benchmark(24).unwrap();
    let schemes = [
        "RK4", "LDDRK4", "LDDRK5", "LDDRK6", "BBo5s", "BBo6s", "LDDRK46", "LDDRK56",
    ];
    println!("scheme cfl error effort");
    for name in schemes {
        let e = reg.get(name).unwrap();
        for i in 0..14 {
            let cfl = 1.6 * 0.8f64.powi(i);
            let r = run_benchmark(&pr, e, cfl, st, Some((fl, 0.05))).unwrap();
            println!("{name} {:.3} {:.4e} {:.4e}", r.cfl, r.error, r.effort);
        }
    }
}

fn crossing(set: &StencilSet) {
    let reg = Registry::builtin();
    let st = set.stencil("max6").unwrap();
    let fl = set.filter("F6").unwrap();
    let pr = WaveProblem::default_benchmark(24).unwrap();
    let schemes = [
        "RK4", "LDDRK4", "LDDRK5", "LDDRK6", "BBo5s", "BBo6s", "LDDRK46", "LDDRK56",
    ];
    let sigma = 0.05;
    println!("scheme cross_1e-3 cross_1.5e-3 slope(1.6->1.0)");
    for name in schemes {
        let e = reg.get(name).unwrap();
        let mut curve: Vec<(f64, f64, f64)> = Vec::new(); // cfl, error, effort
        for i in 0..24 {
            let cfl = 1.6 * 0.9f64.powi(i);
            let r = run_benchmark(&pr, e, cfl, st, Some((fl, sigma))).unwrap();
            curve.push((r.cfl, r.error, r.effort));
        }
        let cross = |thr: f64| -> f64 {
            for w in curve.windows(2) {
                let (pe, pf) = (w[0].1, w[0].2);
                let (ce, cf) = (w[1].1, w[1].2);
                if pe > thr && ce <= thr {
                    let t = (pe.ln() - thr.ln()) / (pe.ln() - ce.ln());
                    return pf * (cf / pf).powf(t);
                }
            }
            f64::NAN
        };
        let at = |cfl: f64| -> f64 {
            run_benchmark(&pr, e, cfl, st, Some((fl, sigma))).unwrap().error
        };
        let floor = noise_floor(&pr, st, Some((fl, sigma))).unwrap();
        let (ea, eb) = (at(1.6) - floor, at(1.0) - floor);
        let slope = (ea / eb).ln() / 1.6f64.ln();
        println!("{name} {:.4e} {:.4e} {slope:.2}", cross(1e-3), cross(1.5e-3));
    }
}

fn main() {
    let set = StencilSet::builtin();
    let mode = std::env::args().nth(1).unwrap_or_else(|| "floors".into());
    match mode.as_str() {
        "floors" => floors(&set),
        "onsets" => onsets(&set),
        "defaults" => default_scan(&set),
        "curves" => effort_curves(&set),
        "cross" => crossing(&set),
        other => eprintln!("unknown mode {other}"),
    }
}
