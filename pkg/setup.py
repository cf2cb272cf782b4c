"""Builds the optional compiled kernel extension.

The package works without it: gazeforge.kernels falls back to the pure
NumPy implementation when the extension is missing or fails to build.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "gazeforge.kernels._native",
                ["src/gazeforge/kernels/_native.pyx"],
                include_dirs=[np.get_include()],
                # -ffp-contract=off keeps the accumulation bitwise identical
                # to the NumPy fallback (no FMA contraction).
                extra_compile_args=["-O3", "-ffp-contract=off", "-fopenmp"],
                extra_link_args=["-fopenmp"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
