import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("BISECTRIX_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "bisectrix.kernels._ckernels",
                    ["src/bisectrix/kernels/_ckernels.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )

setup(ext_modules=ext_modules)
