"""Build the optional compiled kernel; the package falls back to pure Python
when the extension is unavailable."""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("QSU2_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("qsu2._kernels", ["src/qsu2/_kernels.pyx"], extra_compile_args=["-O3"])],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
