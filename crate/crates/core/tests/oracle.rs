#![allow(clippy::excessive_precision)]

//! Frozen values from an independent 60-digit evaluation that multiplies the
//! literal propagators (no rearranged closed forms) and sums the leading-order
//! series term by term.

use multifold_core::experiments::{figure_scenario, run_scenario, Grid};
use multifold_core::state::{loschmidt_rho, precursor_rho, TimeFold};
use multifold_core::OscillatorParams;

/// (figure, ωt, log ρ exact, log ρ leading)
const FIGURE_POINTS: &[(u32, f64, f64, f64)] = &[
    (3, 1.0, 0.0034131204354826999, 1.3649444354196637e-5),
    (3, 5.0, 4.8231647088173742, 4.806405894229572),
    (3, 10.0, 24.817196072035122, 24.798195080932829),
    (3, 15.0, 44.827196080082763, 44.798195080915835),
    (3, 20.0, 64.837196080083126, 64.798195080915835),
    (4, 1.0, 60.798195080915835, 60.798195080915835),
    (4, 5.0, 44.798195080915835, 44.798195080915835),
    (4, 10.0, 24.798195080949822, 24.798195080932829),
    (4, 15.0, 4.8144840500737624, 4.806405894229572),
    (4, 20.0, 0.00099999995833333802, 2.4999996875000521e-7),
    (5, 1.0, 0.0044681370260956976, 1.5496681920645508e-5),
    (5, 5.0, 4.8409307112629253, 4.8064509232780119),
    (5, 10.0, 24.816254696021656, 24.798225405358905),
    (5, 15.0, 41.45181003479103, 45.309763225752037),
    (5, 20.0, 74.435013023967222, 74.394653214105485),
    (7, 1.0, 80.001999316410677, 80.000000000000008),
    (7, 5.0, 80.001999496800997, 80.0),
    (7, 10.0, 80.001999500143927, 80.0),
    (7, 15.0, 80.001999500166452, 80.000000000000001),
    (7, 20.0, 80.00199974991676, 80.000000249999969),
    (8, 1.0, 115.71989228948672, 114.41273517525099),
    (8, 5.0, 115.85129466811552, 114.39464588953857),
    (8, 10.0, 133.65084072004046, 133.58750150912681),
    (8, 15.0, 173.72036733755018, 173.58736556641113),
    (8, 20.0, 213.74036956337951, 213.58736556641085),
    (9, 1.0, 190.39558499232855, 190.39458524274751),
    (9, 5.0, 174.39558349561039, 174.39458524274779),
    (9, 10.0, 154.36233160958804, 154.39472118084367),
    (9, 15.0, 146.18006618943775, 145.49135742483436),
    (9, 20.0, 147.57078380315562, 146.18448944203579),
];

fn close(got: f64, want: f64) -> bool {
    (got - want).abs() <= 1e-12 * want.abs().max(1e-300)
}

#[test]
fn figure_points_match_frozen_values() {
    for &(id, t, exact, leading) in FIGURE_POINTS {
        let mut s = figure_scenario(id).unwrap();
        s.grid = Grid::new(t, t, 1.0).unwrap();
        let row = run_scenario(&s).unwrap()[0];
        assert!(close(row.log_rho_exact, exact), "fig {id} t={t}: {} vs {exact}", row.log_rho_exact);
        assert!(close(row.log_rho_leading, leading), "fig {id} t={t}: {} vs {leading}", row.log_rho_leading);
    }
}

#[test]
fn non_unit_parameters_match_frozen_values() {
    let p = OscillatorParams::new(2.0, 0.7, 0.05, 1.3).unwrap();
    let fold = TimeFold::insertions(&[3.0, -1.5], &p).unwrap();
    let l = loschmidt_rho(&fold, &p).unwrap().ln().to_f64();
    assert!(close(l, 5.9835758457170473), "{l}");

    let fold = TimeFold::from_omega_t(2.0, -1.0, &[3.0, -1.5], &p).unwrap();
    let r = precursor_rho(&fold, &p).unwrap().ln().to_f64();
    assert!(close(r, 6.2119333331889081), "{r}");
}
