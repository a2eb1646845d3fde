from aor_sim.utils.errors import *  # NOQA
from aor_sim.utils.utils import *  # NOQA
