"""Smoke test for the nambu extension module.

Builds the cdylib with cargo unless `nambu` is already importable, copies it
next to a temporary package path and exercises the main entry points.

    python3 python/smoke_test.py
"""

import json
import os
import shutil
import subprocess
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def load():
    try:
        import nambu  # installed via maturin
        return nambu
    except ImportError:
        pass
    subprocess.run(["cargo", "build", "--release", "-p", "nambu-py"], cwd=ROOT, check=True)
    target = os.environ.get("CARGO_TARGET_DIR", os.path.join(ROOT, "target"))
    lib = os.path.join(target, "release", "libnambu.so")
    tmp = tempfile.mkdtemp()
    shutil.copy(lib, os.path.join(tmp, "nambu.so"))
    sys.path.insert(0, tmp)
    import nambu
    return nambu


def main():
    nambu = load()
    h1, h2 = nambu.Poly("x0 + x2"), nambu.Poly("x0*x2 - 1/2*x1^2")

    assert str(nambu.nambu_bracket(h1, h2, "x0")) == "x1"
    assert str(nambu.nambu_bracket(h1, h2, "x0", convention="half")) == "1/2*x1"
    assert nambu.nambu_bracket(h1, h2, h2).is_zero()

    field = nambu.nambu_flow_field(h1, h2)
    assert [str(p) for p in field] == ["x1", "-x0 + x2", "-x1"]
    assert nambu.div(field).is_zero()
    assert all(p.is_zero() for p in nambu.rot(nambu.grad(h2)))

    h = nambu.vector_hamiltonian(field)
    assert nambu.rot(h) == field
    assert h[1] == nambu.Poly("-1/3*x0*x1 - 1/3*x1*x2")

    pot = json.loads(nambu.reconstruct('{"degree": 2, "components": {"01": "1"}}'))
    assert pot == {"degree": 1, "components": {"0": "-1/2*x1", "1": "1/2*x0"}}, pot
    try:
        nambu.reconstruct('{"degree": 2, "components": {"01": "x2"}}')
    except ValueError as e:
        assert "not closed" in str(e)
    else:
        raise AssertionError("non-closed form accepted")

    assert (h1 * h1 - "x0^2").degree() == 2
    assert h2.partial("x1") == -nambu.Poly("x1")
    assert h2([1.0, 2.0, 3.0]) == 1.0

    assert nambu.lax_fit() == "-1/2"

    run = nambu.simulate([1.0, 0.0, 0.0], 1e-3, 10.0)
    assert len(run["t"]) == 10001
    assert max(run["invariant_drift"]) < 1e-8 and run["volume_drift"] < 1e-9

    report = json.loads(nambu.verify(convention="half", seed=7, cases=10))
    assert report["passed"]
    by_name = {p["property"]: p for p in report["properties"]}
    assert by_name["nambu_field_equals_field"]["fitted_constant"] == "1/2"
    assert by_name["multiplier_rate_vs_rot_h"]["fitted_constant"] == "-1"

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
