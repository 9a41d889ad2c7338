"""Acceptance criteria, one test per criterion.

Each test prints a single PASS/FAIL line. Run directly with
``python3 tests/test_acceptance.py`` for the summary alone.
"""
import contextlib
import io
import sys
import tempfile
import time
from pathlib import Path

import numpy as np
import pytest

from valdist.cli import main as cli_main
from valdist.curves import ProjectiveCurve
from valdist.experiments import (
    aald_suite,
    ahlfors_suite,
    cartan_suite,
    crofton_suite,
    curves_suite,
    green_jensen_suite,
    ideal_suite,
    symbolic_suite,
)
from valdist.corpus import random_corpus
from valdist.nevanlinna import SubschemeOnPn, characteristic, fmt_residual
from valdist.poly import CPoly

SEED = 42
CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def _all(checks, prefix=""):
    sel = [c for c in checks if c.name.startswith(prefix)]
    return bool(sel) and all(c.passed for c in sel), "; ".join(f"{c.name} {c.detail}" for c in sel)


def fmt_flatness():
    f = ProjectiveCurve([CPoly([1]), CPoly([0, 1]), CPoly([0, 0, 1])])
    t0 = time.perf_counter()
    prof, _ = fmt_residual(f, SubschemeOnPn.hyperplane([0, 0, 1]), np.geomspace(2, 200, 40))
    dt = time.perf_counter() - t0
    std = float(np.std(prof.residual))
    return std <= 0.02 and dt < 5.0, f"stdev={std:.2e} runtime={dt:.2f}s"


def degree_slope():
    worst = 0.0
    curves = random_corpus(SEED, 20, max_degree=5, tag=2)
    for f in curves:
        s = (characteristic(f, 1, 100.0) - characteristic(f, 1, 50.0)) / np.log(2.0)
        worst = max(worst, abs(s - f.degree))
    return worst <= 1e-3, f"curves={len(curves)} max|slope-deg|={worst:.2e}"


def cartan_smt():
    _, checks = cartan_suite(SEED)
    return _all(checks)


def ahlfors_lld():
    _, checks = ahlfors_suite(SEED, threads=4)
    return _all(checks)


def vanishing_orders():
    _, checks = curves_suite(SEED)
    return _all(checks, "normal_form")


def plucker_density():
    _, checks = curves_suite(SEED)
    return _all(checks, "plucker_density_fd")


def crofton_constants():
    _, checks = crofton_suite(SEED, samples=100_000)
    return _all(checks)


def symbolic():
    t0 = time.perf_counter()
    _, checks = symbolic_suite(SEED)
    dt = time.perf_counter() - t0
    ok, detail = _all(checks)
    failed = [c.name for c in checks if not c.passed]
    return ok and dt < 60.0, f"checks={len(checks)} failed={failed} runtime={dt:.1f}s"


def jet_ideals():
    _, checks = ideal_suite(SEED)
    return _all(checks)


def aald():
    _, checks = aald_suite(SEED)
    return _all(checks, "aald_hyperplane")


def green_jensen():
    _, checks = green_jensen_suite(SEED)
    return _all(checks)


def determinism():
    with tempfile.TemporaryDirectory() as tmp:
        outs = []
        runs = [("crofton", ["--seed", str(SEED), "--samples", "100000"]),
                ("fmt", ["--config", str(CONFIGS / "fmt_conic.json")]),
                ("cartan", ["--config", str(CONFIGS / "cartan_conic.json")])]
        same = True
        for name, args in runs:
            blobs = []
            for i, threads in enumerate((1, 8, 1)):
                out = Path(tmp) / f"{name}_{i}.csv"
                with contextlib.redirect_stderr(io.StringIO()):
                    cli_main([name, *args, "--threads", str(threads), "--out", str(out)])
                blobs.append(out.read_bytes())
            same &= len(set(blobs)) == 1
            outs.append(f"{name}:{'same' if len(set(blobs)) == 1 else 'differs'}")
        return same, " ".join(outs)


CRITERIA = [
    (1, "FMT flatness", fmt_flatness),
    (2, "degree slope", degree_slope),
    (3, "Cartan SMT", cartan_smt),
    (4, "Ahlfors LLD", ahlfors_lld),
    (5, "vanishing orders", vanishing_orders),
    (6, "Plücker density", plucker_density),
    (7, "Crofton constants", crofton_constants),
    (8, "symbolic suite", symbolic),
    (9, "jet-ideal suite", jet_ideals),
    (10, "AALD desk check", aald),
    (11, "Green-Jensen", green_jensen),
    (12, "determinism", determinism),
]


def _report(num, title, ok, detail):
    line = f"criterion {num:2d} {'PASS' if ok else 'FAIL'} {title}: {detail}"
    print(line, flush=True)
    return line


@pytest.mark.parametrize("num,title,fn", CRITERIA, ids=[f"c{n:02d}" for n, _, _ in CRITERIA])
def test_criterion(num, title, fn, capsys):
    ok, detail = fn()
    with capsys.disabled():
        _report(num, title, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for num, title, fn in CRITERIA:
        ok, detail = fn()
        _report(num, title, ok, detail)
        failed += not ok
    sys.exit(1 if failed else 0)
