import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("BIQ_LAB_NO_EXT"):
    try:
        import numpy
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "biqlab._kernels",
                    ["src/biqlab/_kernels.pyx"],
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O2"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        # No Cython: the package falls back to biqlab._kernels_py.
        ext_modules = []

setup(ext_modules=ext_modules)
