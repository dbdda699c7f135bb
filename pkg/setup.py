"""Build script: compiles the optional Cython kernel extension.

If Cython (or a C compiler) is unavailable the build falls back to the
pure-Python kernels; the package selects the backend at import time.

To rebuild in place during development:

    python setup.py build_ext --inplace
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "reluprop._kernels_cy",
                ["src/reluprop/_kernels_cy.pyx"],
                # no FMA contraction: keeps the compiled kernels bit-compatible
                # with the pure-Python twin on x86-64 and aarch64
                extra_compile_args=["-O2", "-ffp-contract=off"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
