from aor_sim.estimators.angular_spectrum import *  # NOQA
