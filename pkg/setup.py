from setuptools import Extension, setup

# The compiled kernels are optional: the package falls back to the pure
# NumPy implementations in fpsubsets._pykernels when the extension is
# missing (see fpsubsets.kernels).
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "fpsubsets._ckernels",
                ["src/fpsubsets/_ckernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
