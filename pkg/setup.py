from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

# The compiled kernels are an optional speedup; the package falls back to the
# pure-Python implementations in storyplan._kernels when the build is skipped.
ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "storyplan._kernels._ckernels",
                ["src/storyplan/_kernels/_ckernels.pyx"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
