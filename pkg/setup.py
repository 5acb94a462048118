"""Build script for the optional compiled SMO core.

The package installs and works without the extension; the pure numpy
solver is used when the compiled module is unavailable.
"""

import numpy as np
from setuptools import setup

try:
    from Cython.Build import cythonize
    from setuptools import Extension

    extensions = cythonize(
        [
            Extension(
                "prachlab.svm._smo_core",
                ["src/prachlab/svm/_smo_core.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
