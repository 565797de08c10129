"""Build the optional compiled kernels.

If Cython or a C++ compiler is missing the package installs without the
extension and falls back to the numpy kernels at import time.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("PAINSENSE_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "painsense._kernels._ckernels",
                    [os.path.join("src", "painsense", "_kernels", "_ckernels.pyx")],
                    language="c++",
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
