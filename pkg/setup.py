"""Build the optional compiled kernel.

If Cython or a C compiler is missing the package still installs; the
pure-Python kernel is used at import time instead.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover - depends on the build host
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        ["src/linear_bohm/_slt_kernel.pyx"],
        compiler_directives={"language_level": "3"},
        quiet=True,
    )

setup(ext_modules=ext_modules)
