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

"""Validation of user inputs."""
import warnings

import numpy as np
import six
from sklearn.utils.validation import check_array

from sfk.exceptions import SFKValueError
from sfk.utils import namedtuple_with_defaults

GridSpec = namedtuple_with_defaults(
    "GridSpec", "H_min H_max nH r_min r_max nr", dict(H_min=-4.0, H_max=4.0, nH=17, r_min=0.5, r_max=4.0, nr=8)
)


def parse_grid_spec(text):
    """Parse 'H_min:H_max:nH,r_min:r_max:nr'."""
    try:
        h_part, r_part = text.split(",")
        H_min, H_max, nH = h_part.split(":")
        r_min, r_max, nr = r_part.split(":")
        grid = GridSpec(float(H_min), float(H_max), int(nH), float(r_min), float(r_max), int(nr))
    except ValueError:
        raise SFKValueError("Cannot parse grid %r, expected 'H_min:H_max:nH,r_min:r_max:nr'" % (text,))
    return check_grid_spec(grid)


def check_grid_spec(grid):
    """Validate a lattice specification (string, sequence or GridSpec)."""
    if isinstance(grid, six.string_types):
        return parse_grid_spec(grid)
    if not isinstance(grid, GridSpec):
        grid = GridSpec(*grid)
    if not grid.r_min > 0:
        raise SFKValueError("Grid must lie in r > 0, got r_min = %s" % grid.r_min)
    if not (grid.H_min < grid.H_max and grid.r_min < grid.r_max):
        raise SFKValueError("Empty grid ranges in %s" % (grid,))
    if grid.nH < 2 or grid.nr < 2:
        raise SFKValueError("A grid needs at least 2 nodes per axis, got %dx%d" % (grid.nH, grid.nr))
    if not np.all(np.isfinite([grid.H_min, grid.H_max, grid.r_min, grid.r_max])):
        raise SFKValueError("Grid bounds must be finite, got %s" % (grid,))
    return grid


def check_points(X, half_plane=False):
    """Validate an array of points, shape (n_points, 2)."""
    X = check_array(X, dtype=float)
    if X.shape[1] != 2:
        raise SFKValueError("Points must have 2 coordinates, got %d" % X.shape[1])
    if half_plane and np.any(X[:, 1] <= 0):
        raise SFKValueError("Half-plane points need r > 0")
    return X


def check_step(step, name="step"):
    """Stencil steps are relative to a local scale, so they must lie in (0, 0.5)."""
    if not 0 < step < 0.5:
        raise SFKValueError("%s must be in (0, 0.5), got %s" % (name, step))
    if step < 1e-3:
        warnings.warn("Very small %s=%g: differences will be dominated by rounding." % (name, step))
    return step


def parse_lattice(text):
    """Parse 'a_min:a_max:na,b_min:b_max:nb' into two coordinate arrays."""
    try:
        first, second = text.split(",")
        axes = []
        for part in (first, second):
            lo, hi, n = part.split(":")
            axes.append((float(lo), float(hi), int(n)))
    except ValueError:
        raise SFKValueError("Cannot parse lattice %r, expected 'a_min:a_max:na,b_min:b_max:nb'" % (text,))
    for lo, hi, n in axes:
        if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi) or n < 2:
            raise SFKValueError("Invalid lattice axis %s:%s:%s" % (lo, hi, n))
    return [np.linspace(lo, hi, n) for lo, hi, n in axes]
