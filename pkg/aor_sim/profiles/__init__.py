from aor_sim.profiles.power_delay_profile import *  # NOQA
