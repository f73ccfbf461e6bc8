from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("latticeset._speedups", ["src/latticeset/_speedups.pyx"])],
        language_level="3",
    )
except ImportError:
    # The package runs on the pure-Python kernels if Cython is unavailable.
    extensions = []

setup(ext_modules=extensions)
