import os

from setuptools import setup

ext_modules = []
if os.environ.get("ZGUNITS_PURE") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/zgunits/_kernels_c.pyx"],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        # No Cython available: install in pure-Python mode, the package
        # falls back to zgunits._kernels_py at import time.
        ext_modules = []

setup(ext_modules=ext_modules)
