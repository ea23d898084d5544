# Build the optional Cython kernels in place with:
#   python setup.py build_ext --inplace
# If Cython or a C compiler is unavailable the package still installs and
# falls back to the numpy kernels at import time.
import os
import sys

from setuptools import setup

ext_modules = []
if os.environ.get("EVTCODEC_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError as exc:
        print(f"evtcodec: skipping compiled kernels ({exc})", file=sys.stderr)
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "evtcodec._ckernels",
                    ["src/evtcodec/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
