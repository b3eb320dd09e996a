"""Build script: compiles the optional fast term-arithmetic extension.

The package is pure Python; the Cython extension is a drop-in twin of
qheun._termops picked up at import time when present.  Any failure here
(no Cython, no C compiler) must not break installation, so the extension
is built on a best-effort basis.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/qheun/_termops_c.pyx"],
        language_level=3,
    )
except Exception:
    ext_modules = []

try:
    setup(ext_modules=ext_modules)
except Exception:
    # retry as pure Python if the compiler is missing or broken
    setup(ext_modules=[])
