use solitonlab::identities::*;
use solitonlab::profile::{integrate_profile, tip_series, DEFAULT_S_START};

fn main() {
    let exp = tip_series(10).unwrap();
    let p = integrate_profile(&exp, DEFAULT_S_START, 20_000.0, 1e-10).unwrap();
    println!("nodes: {}, f_max: {:.2}, drift: {:.3e}",
        p.len(), p.f.last().unwrap(), p.first_integral_drift());

    let rep = curvature_fields(&p).unwrap();
    println!("--- exact profile");
    for c in run_identity_suite(&rep, Window::IDENTITY_DEFAULT, 1e-6) {
        println!("{:>24}: {:.4e}", c.check, c.value);
    }

    for (name, prof) in [
        ("uniform x1.01", corrupt_phi_uniform(&p, 1.01)),
        ("modulated 1% sin", corrupt_phi_modulated(&p, 0.01)),
    ] {
        let rep = curvature_fields(&prof).unwrap();
        println!("--- {name}");
        for c in run_identity_suite(&rep, Window::IDENTITY_DEFAULT, 1e-6) {
            println!("{:>24}: {:.4e}", c.check, c.value);
        }
    }

    println!("--- rates on [1e2, 1e4]");
    let quantities = [
        RateQuantity::FrMinusOne, RateQuantity::GradR, RateQuantity::HMinusInvR,
        RateQuantity::PrincipalDev, RateQuantity::GaussDev, RateQuantity::WarpDrift,
        RateQuantity::TNorm, RateQuantity::DtNorm, RateQuantity::ScalarDrift,
    ];
    for rc in run_rate_suite(&p, &rep, &quantities, Window::RATE_DEFAULT).unwrap() {
        println!(
            "{:>18}: exponent {:+.4} (threshold {:?}), const {:.3e}, rms {:.2e}",
            rc.quantity, rc.fit.exponent, rc.threshold, rc.fit.constant, rc.fit.rms_residual
        );
    }
}
