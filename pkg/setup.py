"""Build script for the optional compiled kernels.

The package is fully functional without a compiler: if Cython is missing the
pure numpy fallbacks in ``tnbubble._kernels_py`` are used instead.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/tnbubble/_kernels_cy.pyx"],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
