from aor_sim.models.path_generator import *  # NOQA
