"""Build script for the optional compiled simplex kernel.

The package works without the extension (a pure-numpy kernel is selected at
import time); the Cython kernel just makes pivoting faster. The extension is
marked optional so a missing compiler degrades to the fallback instead of
failing the install.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext = Extension(
        "onehot_milp.simplex._fast",
        ["src/onehot_milp/simplex/_fast.pyx"],
        extra_compile_args=["-O3"],
    )
    ext.optional = True
    ext_modules = cythonize([ext], language_level=3)

setup(ext_modules=ext_modules)
