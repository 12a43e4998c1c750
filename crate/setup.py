"""Build the bnsf_py extension module by delegating to cargo.

Install with:  pip install -e . --no-build-isolation
"""

import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

ROOT = Path(__file__).resolve().parent


class CargoBuildExt(build_ext):
    def build_extension(self, ext):
        subprocess.run(
            ["cargo", "build", "--release", "-p", "bnsf-py"],
            cwd=ROOT,
            check=True,
        )
        if sys.platform == "darwin":
            built = ROOT / "target" / "release" / "libbnsf_py.dylib"
        elif sys.platform == "win32":
            built = ROOT / "target" / "release" / "bnsf_py.dll"
        else:
            built = ROOT / "target" / "release" / "libbnsf_py.so"
        dest = Path(self.get_ext_fullpath(ext.name))
        dest.parent.mkdir(parents=True, exist_ok=True)
        shutil.copyfile(built, dest)


setup(
    name="bnsf-py",
    version="0.1.0",
    description="Viscous shock laboratory: profiles, contraction runs, "
    "and inequality verifiers",
    ext_modules=[Extension("bnsf_py", sources=[])],
    cmdclass={"build_ext": CargoBuildExt},
    zip_safe=False,
)
