"""Build the extension, import it, run a couple of computations.

    python3 python/smoke_test.py
"""

import json
import pathlib
import shutil
import subprocess
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent
SPECS = ROOT / "crates" / "cli" / "specs"


def build():
    subprocess.run(
        ["cargo", "build", "--release", "-p", "ncdr-py", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    lib = ROOT / "target" / "release" / "libncdr.so"
    out = pathlib.Path(tempfile.mkdtemp()) / "ncdr.so"
    shutil.copy(lib, out)
    return out.parent


def main():
    sys.path.insert(0, str(build()))
    import ncdr

    omega, kernel = ncdr.hh_dims((SPECS / "dual_numbers.json").read_text(), 3)
    assert omega == [2, 1, 1, 1], omega
    assert kernel == omega, kernel

    code, text = ncdr.run("hp", str(SPECS / "dual_numbers.json"), window=(-2, 4), cap=6)
    report = json.loads(text)
    assert code == 0
    assert report["result"]["stable"] and report["result"]["variants_agree"]

    code, text = ncdr.run("deform mc", str(SPECS / "weyl_phi.json"), order=3)
    assert code == 0 and json.loads(text)["result"]["pass"]

    try:
        ncdr.hh_dims('{"generators": ["x"], "relations": ["x*"], "degree_cap": 2}')
    except ValueError as e:
        assert "position" in str(e), e
    else:
        raise AssertionError("malformed relation accepted")

    print("ncdr", ncdr.__version__, "smoke test ok")


if __name__ == "__main__":
    main()
