import os

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; fraclab falls back to numpy kernels
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("FRACLAB_NO_EXT"):
    extensions = [
        Extension(
            "fraclab._kernels",
            ["src/fraclab/_kernels.pyx"],
            include_dirs=[np.get_include()],
            extra_compile_args=["-O3", "-fopenmp"],
            extra_link_args=["-fopenmp"],
        )
    ]
    ext_modules = cythonize(
        extensions,
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
