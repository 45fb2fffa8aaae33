#!/usr/bin/python
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
"""sfk setup script."""

from setuptools import find_packages, setup

from sfk import __version__ as version

setup(
    name='sfk',
    version=version,
    description=('Scalar-flat Kahler toric metrics from axisymmetric harmonic pairs'),
    long_description=open('README.md').read(),
    long_description_content_type='text/markdown',
    keywords=['toric geometry', 'scalar-flat Kahler', 'ALE', 'Taub-NUT', 'Delzant polytope'],
    classifiers=[
        'Development Status :: 3 - Alpha', 'Environment :: Console',
        'Intended Audience :: Science/Research',
        'Intended Audience :: Developers', 'Programming Language :: Python',
        'License :: OSI Approved :: BSD License',
        'Topic :: Scientific/Engineering :: Mathematics',
        'Natural Language :: English', 'Operating System :: POSIX',
        'Operating System :: Unix', 'Operating System :: MacOS',
        'Programming Language :: Python'
    ],
    license='FreeBSD',
    packages=find_packages(exclude=["*.__old", "*.tests"]),
    include_package_data=True,
    package_data={'sfk.datasets': ['polytopes/*.json']},
    entry_points={'console_scripts': ['sfk=sfk.cli:main']},
    requires=[
        'numpy (>=1.16)', 'scipy (>=1.4)', 'sklearn (>=0.22)', 'joblib',
        'pandas (>=0.25)', 'six'
    ],
    extras_require={'plot': ['matplotlib']},
)
