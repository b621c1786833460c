"""Build script for the optional compiled kernel.

The package works without the extension (a pure-Python fallback with
identical numerical behavior is selected at import time), so the
extension is marked optional: a failed compile degrades to the fallback
instead of aborting the install.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext = Extension(
        "wsgd._core",
        ["src/wsgd/_core.pyx"],
        include_dirs=[numpy.get_include()],
    )
    ext.optional = True
    ext_modules = cythonize(
        [ext],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
