"""Build script: compiles the optional fast kernel extension.

The package works without the extension (pure-numpy fallback); set
GOALREC_PURE_PYTHON=1 to skip compilation entirely.
"""

import os

from setuptools import setup

PYX = "src/goalrec/kernels/_fast.pyx"

ext_modules = []
if not os.environ.get("GOALREC_PURE_PYTHON") and os.path.exists(PYX):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "goalrec.kernels._fast",
                    [PYX],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
