#
# Copyright (C) 2026 Spectral Index contributors. All rights reserved.
# SPDX-License-Identifier: Apache-2.0
#
"""Package definition for PyPI."""
import os

from setuptools import find_packages, setup

PROJECT_SLUG = "spectral-index"
SOURCE_DIR = "spectral_index"
__version__ = None

repository_dir = os.path.dirname(__file__)

# Read package version, this will set the variable `__version__` to the current version.
with open(os.path.join(repository_dir, SOURCE_DIR, "_version.py"), encoding="utf8") as fh:
    exec(fh.read())

# Use readme needed as long description in PyPI
with open(os.path.join(repository_dir, "README.md"), encoding="utf8") as fh:
    long_description = fh.read()

setup(
    author="Spectral Index contributors",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: Apache Software License",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3 :: Only",
        "Programming Language :: Python :: 3.8",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    description="Spectral counting and index bounds for minimal and r-minimal hypersurfaces of spheres",
    keywords="spectrum eigenvalue Morse index minimal hypersurface Schrodinger operator",
    include_package_data=True,
    install_requires=["python-dotenv", "Click==7.0", "tabulate", "tqdm", "numpy", "scipy"],
    extras_require={"test": ["pytest", "pytest-cov", "hypothesis"]},
    license="Apache 2.0",
    long_description_content_type="text/markdown",
    long_description=long_description,
    name=PROJECT_SLUG,
    packages=find_packages(exclude=["tests", "tests.*"]),
    package_data={SOURCE_DIR: ["schemas/*.json"]},
    entry_points={"console_scripts": ["spectral-index=spectral_index.cli:cli"]},
    python_requires=">=3.8,<4",
    url=f"https://github.com/spectral-index/{PROJECT_SLUG}",
    version=__version__,
)
