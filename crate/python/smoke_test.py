"""Smoke test for the dyndtw_py extension.

Uses an installed module when there is one (e.g. after `maturin develop`
in crates/py), otherwise builds the cdylib with cargo and loads it from a
temporary directory.
"""

import importlib
import json
import random
import shutil
import subprocess
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load():
    try:
        return importlib.import_module("dyndtw_py")
    except ImportError:
        pass
    subprocess.run(
        ["cargo", "build", "--release", "-p", "dyndtw-py"], cwd=ROOT, check=True
    )
    lib = ROOT / "target" / "release" / "libdyndtw_py.so"
    tmp = Path(tempfile.mkdtemp())
    shutil.copy(lib, tmp / "dyndtw_py.so")
    sys.path.insert(0, str(tmp))
    return importlib.import_module("dyndtw_py")


def naive(p, q):
    n, m = len(p), len(q)
    inf = float("inf")
    t = [[inf] * (m + 1) for _ in range(n + 1)]
    t[0][0] = 0
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            t[i][j] = abs(p[i - 1] - q[j - 1]) + min(
                t[i - 1][j - 1], t[i - 1][j], t[i][j - 1]
            )
    return t[n][m]


def main():
    d = load()

    assert d.dtw([0.0], [0.0, 1.0, 2.0]) == 3.0
    assert d.dtw([[0, 0], [1, 1]], [[0, 0]], metric="linf") == 1.0
    assert d.dtw_exact(["1/2"], [0, 1]) == "1"

    rng = random.Random(7)
    p = [rng.randint(-20, 20) for _ in range(30)]
    q = [rng.randint(-20, 20) for _ in range(25)]
    dd = d.DynamicDTW(p, q, beta=0.5, exact=True)
    for _ in range(200):
        side = rng.choice("PQ")
        cur = p if side == "P" else q
        kind = rng.randrange(3)
        if kind == 0:
            i, x = rng.randint(1, len(cur) + 1), rng.randint(-20, 20)
            dd.insert(side, i, x)
            cur.insert(i - 1, x)
        elif kind == 1 and len(cur) > 1:
            i = rng.randint(1, len(cur))
            dd.delete(side, i)
            del cur[i - 1]
        else:
            i, x = rng.randint(1, len(cur)), rng.randint(-20, 20)
            dd.substitute(side, i, x)
            cur[i - 1] = x
        assert Fraction(dd.query()) == naive(p, q)
    assert dd.shape == (len(p), len(q))

    fl = d.DynamicDTW([0.5, 1.5], [1.0])
    assert fl.query() == 1.0
    try:
        fl.delete("Q", 3)
    except IndexError:
        pass
    else:
        raise AssertionError("out-of-range delete accepted")

    inst = json.dumps(
        {"n_r": 2, "n_c": 2, "r": [0, 1], "c": [0, 1], "d": [3, 0],
         "b": [True, False], "U": "49"}
    )
    assert d.intermediary_solve(inst) == "3"
    cp, cq = d.reduction_curves(inst)
    assert (len(cp), len(cq)) == (40, 40)
    value = d.dtw_exact(cp, cq)
    assert d.recover(value, inst) == "3"

    print("smoke test passed")


if __name__ == "__main__":
    main()
