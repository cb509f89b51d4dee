"""Build script for the optional compiled GF(2^16) kernels.

The package works without the extension: halfba.gf16 falls back to pure
numpy table lookups when halfba._gfcore is absent.  Building the extension
requires Cython and a C compiler; failure to build is non-fatal.
"""

import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "halfba._gfcore",
                ["src/halfba/_gfcore.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": 3},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
