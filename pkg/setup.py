from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("qgl3._kernel._modp", ["src/qgl3/_kernel/_modp.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # The package works without the compiled kernel (numpy fallback).
    extensions = []

setup(ext_modules=extensions)
