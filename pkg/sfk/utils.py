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

"""Utils for sfk package."""
from __future__ import division

import collections
import json
import logging
import os

import numpy as np
import six
from numpy.linalg import LinAlgError
from six.moves import collections_abc


def namedtuple_with_defaults(typename, field_names, default_values=()):
    T = collections.namedtuple(typename, field_names)
    T.__new__.__defaults__ = (None,) * len(T._fields)
    if isinstance(default_values, collections_abc.Mapping):
        prototype = T(**default_values)
    else:
        prototype = T(*default_values)
    T.__new__.__defaults__ = tuple(prototype)
    return T


_default_tolerances = dict(
    quad_abs=1e-11,
    fd_rel=1e-7,
    newton_abs=1e-10,
    flat_tol=1e-6,
    boundary_tol=1e-3,
    anchor_tol=1e-6,
    mu_tol=1e-9,
    asym_tol=5e-3,
    estimate_tol=1e-2,
)


class Tolerances(namedtuple_with_defaults("Tolerances", list(_default_tolerances), _default_tolerances)):
    """Numerical tolerances shared by the kernels and the verification suites.

    Parameters
    ----------
    quad_abs : float, default 1e-11
        Absolute tolerance of path quadrature.
    fd_rel : float, default 1e-7
        Relative accuracy target of finite differences.
    newton_abs : float, default 1e-10
        Absolute residual accepted by the Newton inversion of the moment map.
    flat_tol, boundary_tol, anchor_tol, mu_tol, asym_tol, estimate_tol : float
        Tolerances of the verification suites.
    """

    __slots__ = ()

    def tighten(self, **kwargs):
        """Return a copy with some tolerances replaced by smaller values."""
        for key, value in kwargs.items():
            if key not in self._fields:
                raise ValueError("Unknown tolerance %s. Choices are: %s" % (key, list(self._fields)))
            if not value > 0:
                raise ValueError("Tolerance %s must be positive, got %s" % (key, value))
            if value > getattr(self, key):
                raise ValueError("Tolerance %s can only be tightened (%g > %g)" % (key, value, getattr(self, key)))
        return self._replace(**kwargs)


DEFAULT_TOLERANCES = Tolerances()


def _ensure_filename_ending(filename, possible_extensions=".txt"):
    if isinstance(possible_extensions, six.string_types):
        possible_extensions = [possible_extensions]

    return filename + ("" if any(filename.endswith(end) for end in possible_extensions) else possible_extensions[0])


def init_logger(filename, verbose=True):
    """Initialise logger."""
    logfile = _ensure_filename_ending(filename, [".log", ".txt"])
    logging.shutdown()
    root_logger = logging.getLogger()
    for _ in list(root_logger.handlers):
        root_logger.removeHandler(_)
        # stream handlers may hold a stream that is already closed
        if isinstance(_, logging.FileHandler):
            _.close()
    for _ in list(root_logger.filters):
        root_logger.removeFilter(_)

    logging.basicConfig(
        filename=logfile, level=logging.INFO, filemode="w", format="%(levelname)s (%(asctime)-15s): %(message)s"
    )
    stream_handler = logging.StreamHandler()
    stream_handler.setLevel(logging.INFO if verbose else logging.ERROR)
    stream_handler.setFormatter(logging.Formatter("%(levelname)s (%(asctime)-15s): %(message)s"))

    root_logger.addHandler(stream_handler)
    return logfile


def is_pos_def(x, tol=1e-15, chol=True):
    """Check if x is positive definite."""
    if chol:
        try:
            np.linalg.cholesky(x)
            return True
        except LinAlgError:
            return False

    eigs = np.linalg.eigvalsh(x)
    eigs[np.abs(eigs) < tol] = 0
    return np.all(eigs > 0)


def n_jobs_from_env(default=-1):
    """Number of parallel workers, capped by the SFK_THREADS variable."""
    value = os.environ.get("SFK_THREADS")
    if value is None or value == "":
        return default
    try:
        n_jobs = int(value)
    except ValueError:
        raise ValueError("SFK_THREADS must be a positive integer, got %r" % value)
    if n_jobs < 1:
        raise ValueError("SFK_THREADS must be a positive integer, got %r" % value)
    return n_jobs


def format_float(x):
    """Serialise a float with 17 significant digits."""
    return "%.17g" % x


def to_builtin(obj):
    """Convert numpy scalars and arrays (also nested) to builtin types."""
    if isinstance(obj, dict):
        return {str(k): to_builtin(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_builtin(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_builtin(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        obj = float(obj)
        # JSON has no representation for nan and inf
        return obj if np.isfinite(obj) else format_float(obj)
    return obj


def write_json(obj, filename):
    """Write obj as deterministic JSON (sorted keys, fixed indentation)."""
    filename = _ensure_filename_ending(filename, ".json")
    with open(filename, "w") as f:
        f.write(json.dumps(to_builtin(obj), sort_keys=True, indent=2))
        f.write("\n")
    return filename
