import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("DCCASP_NO_EXTENSION"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("dccasp._ckernels", ["src/dccasp/_ckernels.pyx"])],
            compiler_directives={"language_level": "3"},
            quiet=True,
        )

setup(ext_modules=ext_modules)
