"""Build script for the optional compiled kernels.

The package is fully functional without the extension: topoprobe._backend
falls back to the pure-Python kernels if `topoprobe._core` is missing.
"""

import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "topoprobe._core",
        sources=["src/topoprobe/_core.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

setup(ext_modules=cythonize(extensions, language_level=3))
