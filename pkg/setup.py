"""Build the optional Cython core.

The extension is optional: when Cython or a compiler is unavailable the
package still installs and uses the pure-Python kernels.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("SYNSETKIT_NO_EXT"):
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "synsetkit._kernels",
                    ["src/synsetkit/_kernels.pyx"],
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
