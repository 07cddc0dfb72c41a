import numpy
from Cython.Build import cythonize
from setuptools import Extension, setup

# -ffp-contract=off: keep float arithmetic bit-identical to the pure-Python
# kernels so the two backends can be compared exactly.
extensions = [
    Extension(
        "citegraph.kernels._ckernels",
        ["src/citegraph/kernels/_ckernels.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3", "-ffp-contract=off"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

setup(ext_modules=cythonize(extensions, language_level=3))
