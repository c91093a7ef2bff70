import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

# The compiled kernel is optional: without it the package falls back to the
# pure-numpy implementation selected at import time.
extensions = []
if cythonize is not None and not os.environ.get("GDSTRENGTH_PURE_PYTHON"):
    extensions = cythonize(
        [Extension("gdstrength._kernels", ["src/gdstrength/_kernels.pyx"])],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=extensions)
