from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "ctsim._kernels",
                ["src/ctsim/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    # No Cython: install the pure-Python package; ctsim._backend falls back.
    ext_modules = []

setup(ext_modules=ext_modules)
