import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "cotsum._kernels",
        ["src/cotsum/_kernels.pyx"],
        include_dirs=[np.get_include()],
        # no -ffast-math: the compensated sums rely on strict IEEE ordering
        extra_compile_args=["-O3", "-fopenmp", "-Wno-unreachable-code"],
        extra_link_args=["-fopenmp"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
)
