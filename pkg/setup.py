"""Build script: compiles the optional Cython kernel extension.

The package is fully functional without the extension; citkit.kernels
falls back to the pure-Python backend when the compiled module is absent.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("citkit._kernels_cy", ["src/citkit/_kernels_cy.pyx"])],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
