"""Coverage versus PB density at fixed thresholds, analytic and simulated.

Used to locate configurations where coverage peaks at an interior PB density.
Usage: python scripts/explore_lambda_p_shape.py [trials]
"""
import sys
import time

import numpy as np

from wpbn.analysis import coverage_theorem1
from wpbn.config import NetworkConfig, db_to_linear
from wpbn.montecarlo import PowerModel, SimControls, estimate_coverage

trials = int(sys.argv[1]) if len(sys.argv) > 1 else 2000
lps = [0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6]
for lb, radius in [(0.01, 100.0), (0.05, 60.0), (0.1, 50.0), (0.2, 40.0)]:
    sim = SimControls(window_radius=radius)
    for th_db in (-5.0, 5.0):
        th = db_to_linear(th_db)
        cfgs = [NetworkConfig(lambda_p=lp, lambda_b=lb) for lp in lps]
        row = [coverage_theorem1(c, th, 50_000, seed=1).value for c in cfgs]
        print(f"lb={lb} th={th_db:+.0f}dB theorem1 ", np.round(row, 4), flush=True)
        for model in (PowerModel.MEAN_NP_NEAREST, PowerModel.INSTANTANEOUS_NP_NEAREST):
            t = time.time()
            est = [estimate_coverage(c, model, th, trials, sim, seed=7) for c in cfgs]
            print(f"lb={lb} th={th_db:+.0f}dB {model.value:26s}", np.round([e.value for e in est], 4),
                  f"ci~{est[0].abs_uncertainty:.3f} {time.time() - t:.0f}s", flush=True)
    rpn = estimate_coverage(NetworkConfig(lambda_b=lb), PowerModel.REGULAR_POWERED, [db_to_linear(-5), db_to_linear(5)], trials, sim, seed=7)
    print(f"lb={lb} regular_powered -5/+5dB", [round(e.value, 4) for e in rpn], flush=True)
