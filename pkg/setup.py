import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; the kernel falls back to _pycore
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("PWCYCLE_NO_EXT"):
    ext_modules = cythonize(
        [Extension("pwcycle._core", ["src/pwcycle/_core.pyx"])],
        compiler_directives={"language_level": 3},
    )

setup(ext_modules=ext_modules)
