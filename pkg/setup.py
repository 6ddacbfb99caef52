import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("PICKUPLAB_NO_EXT", "") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("pickuplab._kernels", ["src/pickuplab/_kernels.pyx"], extra_compile_args=["-O3", "-fcx-limited-range"])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
