import json
import math

import _starkres as sr


def test_harmonic_frequencies_identities():
    a1, a2 = sr.harmonic_frequencies(1.0, 1.0, 1.0)
    assert abs(a1 * a2 - 1.0) < 1e-12
    assert abs(a1 - 0.6180339887) < 1e-9
    assert abs(a2 - 1.6180339887) < 1e-9
    b0 = sr.harmonic_frequencies(0.0, 1.0, 4.0)
    assert abs(b0[0] - 1.0) < 1e-14 and abs(b0[1] - 2.0) < 1e-14


def test_predicted_levels():
    levels = sr.predicted_levels(0.0, 1.0, 2.0, 0.1, 0.4)
    values = [v for (_, _, v) in levels]
    assert len(values) == 4
    assert abs(values[0] - 0.15) < 1e-12
    assert values == sorted(values)


def test_weyl_prediction():
    assert abs(sr.weyl_count_prediction(2.0 * math.pi**2, 0.1) - 50.0) < 1e-9


def test_potential_and_well():
    terms = json.dumps([
        {"kind": "enveloped_quadratic_well", "amplitude": 0.0, "x0": 0.0, "y0": 0.0,
         "envelope_scale": 50.0, "lambda1": 1.0, "lambda2": 1.0}
    ])
    u = sr.eval_total_potential(terms, 0.0 + 0.0j, 0.0)
    assert abs(u) < 1e-12
    well = sr.find_well_bottom(terms, 0.2, 0.1)
    assert well["converged"] and well["nondegenerate"]
    assert abs(well["lambda1"] - 1.0) < 5e-3


def test_volume_and_eigenvalues():
    terms = json.dumps([
        {"kind": "enveloped_quadratic_well", "amplitude": 0.0, "x0": 0.0, "y0": 0.0,
         "envelope_scale": 500.0, "lambda1": 1.0, "lambda2": 1.0}
    ])
    vol, err = sr.trapped_volume_closed_form(terms, -1.0, 1.0, -2.0, 2.0, -2.0, 2.0, 400)
    assert err == 0.0
    assert abs(vol - 2.0 * math.pi**2) < 0.05

    config = {
        "potential": {"terms": json.loads(terms)},
        "params": {"B": 1.0, "h_list": [0.4]},
        "surgery": {"region": {"shape": "disc", "cx": 0.0, "cy": 0.0, "radius": 1.9},
                    "delta": 0.1, "ramp": 0.5},
        "grid": {"x_min": -3.0, "x_max": 3.0, "y_min": -3.0, "y_max": 3.0,
                 "nx": 40, "ny": 40},
        "window": {"a": -0.5, "b": 1.0},
        "experiment": {"dense_cap": 1700},
    }
    eigs = sr.reference_eigenvalues(json.dumps(config), 0.4, 0.2, 3)
    assert len(eigs) == 3
    ground = min(e.real for e in eigs)
    # golden-ratio bottom level at h = 0.4
    assert abs(ground - 0.4 * (0.6180339887 + 1.6180339887) / 2) < 0.03
