#!/usr/bin/env python3
# -*- coding: utf-8 -*-

# Copyright 2026 aor_sim contributors
#  MIT License (https://opensource.org/licenses/MIT)

import logging

import numpy as np
import pytest

from aor_sim.utils import read_csv
from aor_sim.utils import write_csv

logging.basicConfig(
    level=logging.WARN, format="%(asctime)s (%(module)s:%(lineno)d) %(levelname)s: %(message)s")


def test_csv_keeps_comments_header_and_floats(tmp_path):
    filename = str(tmp_path / "sub" / "table.csv")
    rows = [[0.1, 1.0 / 3.0, -2.5e-9], [np.pi, 200.0, 1e300]]
    write_csv(filename, ["a", "b", "c"], rows, ["seed = 1", "scenario = uma_test"])
    with open(filename) as f:
        lines = f.read().splitlines()
    assert lines[:3] == ["# seed = 1", "# scenario = uma_test", "a,b,c"]
    header, values, comments = read_csv(filename)
    assert header == ["a", "b", "c"]
    assert comments == ["seed = 1", "scenario = uma_test"]
    np.testing.assert_array_equal(values, rows)


def test_csv_single_column(tmp_path):
    filename = str(tmp_path / "column.csv")
    write_csv(filename, ["x"], [[1.0], [2.0], [3.0]])
    header, values, comments = read_csv(filename)
    assert header == ["x"]
    assert comments == []
    assert values.shape == (3, 1)


def test_csv_without_rows(tmp_path):
    filename = str(tmp_path / "empty.csv")
    write_csv(filename, ["a", "b"], [], ["nothing yet"])
    header, values, comments = read_csv(filename)
    assert header == ["a", "b"]
    assert values.shape == (0, 2)
    assert comments == ["nothing yet"]


def test_csv_without_header(tmp_path):
    filename = tmp_path / "comments_only.csv"
    filename.write_text("# only metadata\n")
    with pytest.raises(ValueError):
        read_csv(str(filename))
