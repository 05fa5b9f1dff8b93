import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("ETAU_NO_EXT"):
    try:
        import numpy
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "etau._kernels._mesh_cy",
                    sources=["src/etau/_kernels/_mesh_cy.pyx"],
                    include_dirs=[numpy.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
                "language_level": "3",
            },
        )
    except ImportError:
        # No Cython available: install runs with the pure-numpy kernel backend.
        ext_modules = []

setup(ext_modules=ext_modules)
