"""Build script for the optional compiled pairing backend.

The extension links against GMP and is a pure accelerator: if Cython or
libgmp is unavailable the build logs a warning and the package falls back
to the pure-python backend.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "hvekit._native",
                ["src/hvekit/_native.pyx"],
                libraries=["gmp"],
                extra_compile_args=["-O2"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
