import os

from setuptools import setup

ext_modules = []
if not os.environ.get("HAUSANOISE_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/hausanoise/strdist/_speedups.pyx"],
            language_level=3,
        )
    except ImportError:
        # No Cython available: the pure-Python kernels are used instead.
        pass

setup(ext_modules=ext_modules)
