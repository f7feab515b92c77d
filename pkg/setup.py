import numpy
from Cython.Build import cythonize
from setuptools import Extension, setup

ext = Extension(
    "spininv._kernels",
    ["src/spininv/_kernels.pyx"],
    include_dirs=[numpy.get_include()],
    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    extra_compile_args=["-O3"],
)

setup(ext_modules=cythonize([ext], compiler_directives={"language_level": "3"}))
