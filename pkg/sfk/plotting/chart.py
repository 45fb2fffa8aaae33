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

"""Pictures of the coordinate correspondence."""
import matplotlib
import matplotlib.pyplot as plt
import numpy as np

from sfk.polytope import edges, vertices


def _window(chart, P=None, pad=0.1):
    pts = chart.x
    if P is not None:
        pts = np.vstack((pts, vertices(P)))
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = np.maximum(hi - lo, 1e-3)
    return lo - pad * span, hi + pad * span


def plot_polytope(P, ax, lo, hi, color="k"):
    """Draw the boundary of P inside the box [lo, hi]; rays are clipped."""
    reach = 2 * np.linalg.norm(hi - lo) + np.linalg.norm(np.vstack((lo, hi)), axis=1).max()
    for e in edges(P):
        direction = e.direction / np.linalg.norm(e.direction)
        start = e.start if e.start is not None else e.end - reach * direction
        end = e.end if e.end is not None else e.start + reach * direction
        ax.plot([start[0], end[0]], [start[1], end[1]], color=color, lw=1.5)
    verts = vertices(P)
    ax.plot(verts[:, 0], verts[:, 1], "o", color="tab:red", ms=5, label="vertex anchors")


def plot_chart(chart, filename=None, P=None, ax=None, fontsize=10, dpi=100):
    """Images under the moment map of the constant-H and constant-r lattice lines.

    The SVG output is byte-for-byte reproducible for identical input.

    Parameters
    ----------
    chart : MetricChart
    filename : str, optional
        Where to save the figure (format from the extension).
    P : DelzantPolytope, optional
        Draw the boundary and the vertex anchors.
    """
    matplotlib.rcParams.update({"font.size": fontsize, "svg.hashsalt": "sfk", "svg.fonttype": "path"})
    own_figure = ax is None
    if own_figure:
        fig, ax = plt.subplots(figsize=(6, 6))
    else:
        fig = ax.figure
    nr, nH = chart.shape
    x = chart.x.reshape(nr, nH, 2)
    for j in range(nH):
        ax.plot(x[:, j, 0], x[:, j, 1], color="tab:blue", lw=0.8, label="H constant" if j == 0 else None)
    for i in range(nr):
        ax.plot(x[i, :, 0], x[i, :, 1], color="tab:orange", lw=0.8, label="r constant" if i == 0 else None)
    lo, hi = _window(chart, P)
    if P is not None:
        plot_polytope(P, ax, lo, hi)
    ax.set_xlim(lo[0], hi[0])
    ax.set_ylim(lo[1], hi[1])
    ax.set_aspect("equal")
    ax.set_xlabel(r"$x_1$")
    ax.set_ylabel(r"$x_2$")
    ax.legend(loc="upper right")

    if filename is not None:
        metadata = {"Date": None} if filename.endswith(".svg") else None
        fig.savefig(filename, dpi=dpi, transparent=True, bbox_inches="tight", metadata=metadata)
    if own_figure:
        plt.close(fig)
    return ax
