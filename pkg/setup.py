from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # Without Cython the package still installs; the pure-Python kernels
    # take over at import time.
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "graphmap._core",
                ["src/graphmap/_core.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
