#!/usr/bin/env python3
# -*- coding: utf-8 -*-

# Copyright 2026 aor_sim contributors
#  MIT License (https://opensource.org/licenses/MIT)

"""Extract time clusters from a measured power delay spectrum."""

import argparse
import logging
import os
import sys

from aor_sim.profiles import extract_clusters
from aor_sim.profiles import parse_profile
from aor_sim.profiles import write_profile


def main(argv=None):
    """Run cluster extraction process."""
    parser = argparse.ArgumentParser(
        description="Extract time clusters from the local maxima of a power delay spectrum "
                    "(See detail in aor_sim/bin/extract_clusters.py).")
    parser.add_argument("--trace", type=str, required=True,
                        help="power delay spectrum csv file (delay_ns,power_db or delay_norm,power_db).")
    parser.add_argument("--out", type=str, required=True,
                        help="cluster table csv file to write.")
    parser.add_argument("--verbose", type=int, default=1,
                        help="logging level. higher is more logging. (default=1)")
    args = parser.parse_args(argv)

    # set logger
    if args.verbose > 1:
        logging.basicConfig(
            level=logging.DEBUG, format="%(asctime)s (%(module)s:%(lineno)d) %(levelname)s: %(message)s")
    elif args.verbose > 0:
        logging.basicConfig(
            level=logging.INFO, format="%(asctime)s (%(module)s:%(lineno)d) %(levelname)s: %(message)s")
    else:
        logging.basicConfig(
            level=logging.WARN, format="%(asctime)s (%(module)s:%(lineno)d) %(levelname)s: %(message)s")
        logging.warning("Skip DEBUG/INFO messages")

    try:
        trace = parse_profile(args.trace, format="pds_trace")
        profile = extract_clusters(trace)
    except (ValueError, FileNotFoundError) as e:
        logging.error(f"{type(e).__name__}: {e}")
        return 1
    write_profile(profile, args.out, comments=[f"clusters extracted from {os.path.basename(args.trace)}"])
    logging.info(f"Extracted {profile.num_clusters} clusters from {len(trace)} samples into {args.out}.")

    return 0


if __name__ == "__main__":
    sys.exit(main())
