from aor_sim.antennas.gaussian_beam import *  # NOQA
