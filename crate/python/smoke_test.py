"""Smoke test for the qmlogic_py extension.

Build first:  pip install --no-build-isolation -e crates/python
Then run:     python3 python/smoke_test.py
"""

import json
import pathlib

import qmlogic_py as q

DATA = pathlib.Path(__file__).resolve().parent.parent / "crates" / "core" / "tests" / "data"


def main():
    quantales, modules, nuclei = q.catalog_names()
    assert "2" in quantales and modules and nuclei

    two = q.Quantale.load("2")
    assert two.size == 2 and two.mult(1, 1) == 1 and two.is_commutative()
    assert q.verify("2") == (True, "quantale")

    ok, msg = q.verify('{"elements": ["a", "b"], "leq": [[true, true], [true, true]]}')
    assert not ok, msg

    c3 = q.Module.load("2/c3")
    t = c3.tensor(c3)
    assert t.size == 6, t
    assert q.verify(t.to_json())[0]
    p = c3.product([c3])
    assert p.size == 9

    cpl = q.System.cpl()
    report = json.loads(cpl.derive("imp(x0,x0)"))
    assert report["status"] == "found"
    proof = json.dumps(report["derivation"])
    assert cpl.check(proof, "imp(x0,x0)")
    assert not cpl.check(proof, "imp(x1,x1)")

    mp = json.loads(cpl.derive("x1", premises=["x0", "imp(x0,x1)"], depth=2))
    assert mp["status"] == "found"

    both = q.coproduct([cpl, cpl])
    names = {n for n, _ in both.connectives()}
    assert names == {"imp#1", "not#1", "imp#2", "not#2"}, names

    frag = q.System.from_json((DATA / "to-fragment.json").read_text())
    doc = {"system": None, "premises": [], "goal": None, "steps": []}
    found = json.loads(frag.derive("to(x0,x0)", size=9))
    assert found["status"] == "found"
    doc["steps"] = found["derivation"]["steps"]
    doc["goal"] = "to(x0,x0)"
    out = json.loads(q.interpret_proof(json.dumps(doc), frag, cpl, (DATA / "to-imp.json").read_text()))
    assert out["goal"] == "imp(x0,x0)", out["goal"]
    assert cpl.check(json.dumps({"steps": out["steps"]}), "imp(x0,x0)")

    print("smoke test ok")


if __name__ == "__main__":
    main()
