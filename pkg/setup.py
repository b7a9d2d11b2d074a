from setuptools import Extension, setup
from Cython.Build import cythonize

extensions = [
    Extension(
        "mvnabs._kernels._native",
        ["src/mvnabs/_kernels/_native.pyx"],
        language="c++",
        extra_compile_args=["-O3"],
    ),
]

setup(
    ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"}),
)
