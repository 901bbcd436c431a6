"""Build the optional compiled kernels.

The package works without them: ``evdrange._backend`` falls back to the
pure-Python engine when ``evdrange._kernels`` cannot be imported.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("EVDRANGE_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        extensions = [
            Extension(
                "evdrange._kernels",
                ["src/evdrange/_kernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                # bitwise agreement with the Python engine needs strict IEEE ops
                extra_compile_args=["-O2", "-ffp-contract=off", "-fno-fast-math"],
            )
        ]
        ext_modules = cythonize(
            extensions,
            compiler_directives={"language_level": "3", "boundscheck": False,
                                 "wraparound": False, "cdivision": True},
        )

setup(ext_modules=ext_modules)
