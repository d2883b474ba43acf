from Cython.Build import cythonize
from setuptools import Extension, setup

# -ffp-contract=off: the kernel must produce bit-identical floating-point
# results to the pure-Python engine; FMA contraction would change rounding.
# -march=native only affects integer/bit instructions (popcnt, tzcnt) here.
extensions = [
    Extension(
        "annealfactor._kernel",
        ["src/annealfactor/_kernel.pyx"],
        extra_compile_args=["-O3", "-march=native", "-ffp-contract=off"],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
)
