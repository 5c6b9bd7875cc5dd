from setuptools import Extension, setup

# The compiled kernels are optional: if Cython or a C compiler is missing the
# package falls back to the numpy implementations in dpgrl._pure at import time.
ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "dpgrl._speedups",
                ["src/dpgrl/_speedups.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
