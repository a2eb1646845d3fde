from aor_sim.metrics.spread_metrics import *  # NOQA
