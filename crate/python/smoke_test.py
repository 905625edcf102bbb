"""Smoke test for the popan Python extension.

Build and install first:  pip install maturin && maturin develop -m crates/python/Cargo.toml
"""

import json

import popan


def main():
    assert "ev-battery" in popan.Graph.fixture_names()
    ev = popan.Graph.fixture("ev-battery")
    print(ev)

    report = ev.validate()
    assert report["ok"], report

    steps = ev.plan("disassembly")
    assert steps[0][:2] == ("Screwing", "BoltsM6"), steps
    assert steps[1][:2] == ("Manipulation", "Lid"), steps

    plan_json = ev.plan_json("disassembly")
    assert ev.verify("disassembly", plan_json)["ok"]
    swapped = json.loads(plan_json)
    swapped["steps"][0]["index"], swapped["steps"][1]["index"] = 2, 1
    swapped["steps"].sort(key=lambda s: s["index"])
    verdict = ev.verify("disassembly", json.dumps(swapped))
    assert not verdict["ok"]
    assert any(f["code"] == "E_ORDER" for f in verdict["findings"])

    again = popan.Graph.from_aml(ev.to_aml())
    assert again.to_native() == ev.to_native()
    assert popan.Graph.from_native(ev.to_native()).edge_count == ev.edge_count

    try:
        popan.Graph.from_aml("<CAEXFile")
    except popan.PopanError as err:
        print("rejected truncated document:", err)
    else:
        raise AssertionError("truncated document accepted")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
