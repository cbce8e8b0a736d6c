from setuptools import Extension, setup

# The extension needs numpy headers and Cython at build time; without either
# the install still succeeds and the package falls back to the numpy kernel.
try:
    import numpy as np
except ImportError:
    np = None

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if np is not None and cythonize is not None:
    extensions = cythonize(
        [
            Extension(
                "recjustify._kernel",
                ["src/recjustify/_kernel.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
else:
    extensions = []

setup(ext_modules=extensions)
