from aor_sim.geometry.half_ellipsoid import *  # NOQA
