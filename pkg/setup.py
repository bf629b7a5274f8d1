import numpy as np
from setuptools import setup

try:
    from Cython.Build import cythonize
    ext_modules = cythonize(
        "src/twocat/_ckernels.pyx",
        compiler_directives={"language_level": "3"},
    )
    for ext in ext_modules:
        ext.include_dirs.append(np.get_include())
except ImportError:
    # the package falls back to the pure-Python kernels
    ext_modules = []

setup(ext_modules=ext_modules)
