# -*- coding: utf-8 -*-

__version__ = "0.1.0"
from aor_sim.utils.utils import *  # NOQA
