# BSD 3-Clause License

# Copyright (c) 2019, sfk authors
# All rights reserved.

# Redistribution and use in source and binary forms, with or without
# modification, are permitted provided that the following conditions are met:

# * Redistributions of source code must retain the above copyright notice, this
#   list of conditions and the following disclaimer.

# * Redistributions in binary form must reproduce the above copyright notice,
#   this list of conditions and the following disclaimer in the documentation
#   and/or other materials provided with the distribution.

# * Neither the name of the copyright holder nor the names of its
#   contributors may be used to endorse or promote products derived from
#   this software without specific prior written permission.

# THIS SOFTWARE IS PROVIDED BY THE COPYRIGHT HOLDERS AND CONTRIBUTORS "AS IS"
# AND ANY EXPRESS OR IMPLIED WARRANTIES, INCLUDING, BUT NOT LIMITED TO, THE
# IMPLIED WARRANTIES OF MERCHANTABILITY AND FITNESS FOR A PARTICULAR PURPOSE ARE
# DISCLAIMED. IN NO EVENT SHALL THE COPYRIGHT HOLDER OR CONTRIBUTORS BE LIABLE
# FOR ANY DIRECT, INDIRECT, INCIDENTAL, SPECIAL, EXEMPLARY, OR CONSEQUENTIAL
# DAMAGES (INCLUDING, BUT NOT LIMITED TO, PROCUREMENT OF SUBSTITUTE GOODS OR
# SERVICES; LOSS OF USE, DATA, OR PROFITS; OR BUSINESS INTERRUPTION) HOWEVER
# CAUSED AND ON ANY THEORY OF LIABILITY, WHETHER IN CONTRACT, STRICT LIABILITY,
# OR TORT (INCLUDING NEGLIGENCE OR OTHERWISE) ARISING IN ANY WAY OUT OF THE USE
# OF THIS SOFTWARE, EVEN IF ADVISED OF THE POSSIBILITY OF SUCH DAMAGE.

"""Test utils and validation modules."""
import io
import json
import logging
import sys

import numpy as np
import pytest
from numpy.testing import assert_allclose

from sfk import utils
from sfk.exceptions import SFKValueError
from sfk.validation import GridSpec, check_grid_spec, check_points, check_step, parse_grid_spec, parse_lattice


def test_tolerances():
    """Test Tolerances.tighten."""
    tol = utils.DEFAULT_TOLERANCES.tighten(flat_tol=1e-8)
    assert tol.flat_tol == 1e-8
    assert tol.quad_abs == utils.DEFAULT_TOLERANCES.quad_abs
    assert utils.DEFAULT_TOLERANCES.flat_tol == 1e-6
    with pytest.raises(ValueError):
        utils.DEFAULT_TOLERANCES.tighten(flat_tol=1.0)
    with pytest.raises(ValueError):
        utils.DEFAULT_TOLERANCES.tighten(flat_tol=-1.0)
    with pytest.raises(ValueError):
        utils.DEFAULT_TOLERANCES.tighten(curvature=1e-3)


def test_ensure_filename_ending():
    """Test _ensure_filename_ending function."""
    assert utils._ensure_filename_ending("a", ".json") == "a.json"
    assert utils._ensure_filename_ending("a.json", ".json") == "a.json"
    assert utils._ensure_filename_ending("a.txt", [".log", ".txt"]) == "a.txt"


def test_n_jobs_from_env(monkeypatch):
    """Test n_jobs_from_env function."""
    monkeypatch.delenv("SFK_THREADS", raising=False)
    assert utils.n_jobs_from_env() == -1
    monkeypatch.setenv("SFK_THREADS", "3")
    assert utils.n_jobs_from_env() == 3
    for value in ("0", "two"):
        monkeypatch.setenv("SFK_THREADS", value)
        with pytest.raises(ValueError):
            utils.n_jobs_from_env()


def test_write_json(tmp_path):
    """Test to_builtin and write_json."""
    data = {"b": np.arange(3), "a": (np.float64(0.1), np.nan, np.inf), "c": np.bool_(True), 1: np.int64(2)}
    builtin = utils.to_builtin(data)
    assert builtin["a"] == [0.1, "nan", "inf"]
    assert builtin["1"] == 2
    assert builtin["c"] is True

    first = utils.write_json(data, str(tmp_path / "x"))
    assert first.endswith("x.json")
    with open(first) as f:
        text = f.read()
    assert json.loads(text)["b"] == [0, 1, 2]
    utils.write_json(data, str(tmp_path / "y.json"))
    with open(str(tmp_path / "y.json")) as f:
        assert f.read() == text


def test_format_float():
    """Test that floats are written with 17 significant digits."""
    assert float(utils.format_float(0.1)) == 0.1
    assert utils.format_float(1.0 / 3) == "0.33333333333333331"


def test_is_pos_def():
    """Test is_pos_def function."""
    assert utils.is_pos_def(np.eye(2))
    assert not utils.is_pos_def(np.diag([1.0, -1.0]))
    assert not utils.is_pos_def(np.diag([1.0, 0.0]), chol=False)


def test_init_logger(tmp_path):
    """Test init_logger function."""
    logfile = utils.init_logger(str(tmp_path / "run"), verbose=False)
    assert logfile.endswith("run.log")
    logging.info("hello")
    logging.shutdown()
    with open(logfile) as f:
        assert "INFO" in f.read()


def test_init_logger_closed_stream(tmp_path, monkeypatch):
    """Test that a second init_logger survives a closed console stream."""
    stream = io.StringIO()
    monkeypatch.setattr(sys, "stderr", stream)
    utils.init_logger(str(tmp_path / "first"), verbose=False)
    stream.close()
    monkeypatch.setattr(sys, "stderr", io.StringIO())
    logfile = utils.init_logger(str(tmp_path / "second"), verbose=False)
    logging.error("second run")
    logging.shutdown()
    with open(logfile) as f:
        assert "second run" in f.read()


def test_grid_spec():
    """Test parse_grid_spec and check_grid_spec."""
    grid = parse_grid_spec("-4:4:17,0.5:4:8")
    assert grid == GridSpec()
    assert check_grid_spec("-4:4:17,0.5:4:8") == grid
    assert check_grid_spec((-1, 1, 3, 0.5, 1, 2)).nH == 3
    for text in ("-4:4:17,0:4:8", "-4:4:17", "4:-4:17,0.5:4:8", "-4:4:1,0.5:4:8", "a:b:c,0.5:4:8", "-inf:4:3,1:2:2"):
        with pytest.raises(SFKValueError):
            parse_grid_spec(text)


def test_parse_lattice():
    """Test parse_lattice function."""
    x1, x2 = parse_lattice("0.5:2.5:5,1:2:3")
    assert_allclose(x1, [0.5, 1, 1.5, 2, 2.5])
    assert_allclose(x2, [1, 1.5, 2])
    for text in ("1:0:3,0:1:3", "0:1:1,0:1:3", "0:1:3"):
        with pytest.raises(SFKValueError):
            parse_lattice(text)


def test_check_points_and_step():
    """Test check_points and check_step."""
    X = check_points([[0, 1], [2, 3]], half_plane=True)
    assert X.shape == (2, 2)
    with pytest.raises(SFKValueError):
        check_points([[0, 0]], half_plane=True)
    with pytest.raises(SFKValueError):
        check_points([[0, 1, 2]])
    assert check_step(0.1) == 0.1
    with pytest.raises(SFKValueError):
        check_step(0.5)
    with pytest.warns(UserWarning):
        check_step(1e-4)
