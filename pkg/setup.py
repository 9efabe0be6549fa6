import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "wdiv._kernels",
                ["src/wdiv/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
else:
    # No Cython: the package still works through the numpy fallback
    # selected at import time (wdiv.backend).
    ext_modules = []

setup(ext_modules=ext_modules)
