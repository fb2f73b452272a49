"""Build script: compiles the optional enumeration kernel.

The package is pure Python except for one hot loop (lattice-point
enumeration).  If Cython or a C compiler is unavailable the build falls
back to the pure-Python kernel; everything still works, just slower.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "toricount._kernel",
                ["src/toricount/_kernel.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except Exception:
    ext_modules = []

setup(ext_modules=ext_modules)
