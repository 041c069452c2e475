"""Builds the optional compiled kernel extension.

The package works without it (numpy fallback is selected at import time),
so any failure here only costs speed.
"""
from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext = Extension(
        "evtrack.kernels._accel",
        ["src/evtrack/kernels/_accel.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    ext_modules = cythonize([ext], compiler_directives={"language_level": 3})
except ImportError:
    pass

setup(ext_modules=ext_modules)
