import os

from setuptools import setup

ext_modules = []
if os.environ.get("SFTCONJ_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools.extension import Extension

        ext_modules = cythonize(
            [Extension("sftconj._kernels", ["src/sftconj/_kernels.pyx"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        # No Cython: the pure-Python kernels are used instead.
        ext_modules = []

setup(ext_modules=ext_modules)
