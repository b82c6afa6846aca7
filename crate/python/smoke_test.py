"""Import the extension and exercise each binding once."""

import json
import sys

import spectral_stokes as ss


def main() -> int:
    row = json.loads(ss.solve2("-2"))
    assert row["beta1"] == "0", row
    assert row["alpha1"] == "-1/2", row

    try:
        ss.solve2("5")
    except ValueError as e:
        print("solve2(5) rejected:", e)
    else:
        raise AssertionError("solve2(5) should fail")

    report = json.loads(ss.chain_verify([3, 2]))
    assert report["holds"] is True, report

    hor = json.loads(ss.hor_spectrum(1, "1/3,2/3"))
    assert sorted(hor["spectrum"]) == ["-1/6", "1/6"], hor

    res = json.loads(ss.selftest(5))
    assert res["passed"] is True, res

    print("smoke test ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
