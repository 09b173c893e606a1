use crate::error::{invalid, Result};
use crate::numkit::DenseVector;
use crate::oracles::ObjectiveOracle;

/// Points closer than this to a kink are not valid finite-difference probes.
pub const FD_KINK_MARGIN: f64 = 1e-3;

/// Worst mixed relative error `‖g_fd − g‖ / max(1, ‖g‖)` between the oracle
/// gradient and a central difference with step `1e-6·(1 + ‖x‖)`.
pub fn finite_diff_check<O: ObjectiveOracle + ?Sized>(
    oracle: &O,
    points: &[DenseVector],
) -> Result<f64> {
    let mut worst = 0.0f64;
    for x in points {
        if oracle.near_kink(x, FD_KINK_MARGIN) {
            return Err(invalid(
                "points",
                format!("{:?} lies within {FD_KINK_MARGIN} of a kink", x.as_slice()),
            ));
        }
        let exact = oracle.eval(x)?.gradient;
        let step = 1e-6 * (1.0 + x.norm());
        let mut approx = vec![0.0; x.len()];
        let mut probe = x.clone();
        for (i, slot) in approx.iter_mut().enumerate() {
            let base = x[i];
            probe[i] = base + step;
            let fp = oracle.eval(&probe)?.value;
            probe[i] = base - step;
            let fm = oracle.eval(&probe)?.value;
            probe[i] = base;
            *slot = (fp - fm) / (2.0 * step);
        }
        let err = DenseVector::from_raw(approx).distance(&exact) / exact.norm().max(1.0);
        worst = worst.max(err);
    }
    Ok(worst)
}
