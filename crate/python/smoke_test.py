"""Smoke test for the gapcert Python extension. Exits nonzero on failure."""

import json
import math
import sys

import gapcert


def main() -> int:
    a_big, eps, valid = gapcert.epsilon_bound(3)
    assert valid and eps < 0.2683, eps
    assert not gapcert.epsilon_bound(2)[2]

    suite = gapcert.BoundSuite(3)
    assert abs(suite.a_n - 3.0**-3) < 1e-12
    assert abs(suite.q_r - suite.q_l / 2) < 1e-12
    assert abs(suite.eps_bound - eps) < 1e-12

    spectrum = sorted(re for re, _ in gapcert.transfer_spectrum())
    assert all(abs(x + 1 / 3) < 1e-12 for x in spectrum[:3]) and abs(spectrum[3] - 1) < 1e-12

    cert = gapcert.certify(3, gamma=0.2966)
    assert cert.valid and cert.gamma_y_source == "user-supplied"
    assert abs(cert.gap_lower_bound - 0.5 * 0.2966 * (1 - 3 * cert.eps_bound)) < 1e-12
    assert cert.gap_lower_bound >= 0.0289
    doc = json.loads(cert.to_json())
    assert doc["valid"] is True and doc["n"] == 3
    assert "epsilon < 1/3" in cert.to_text()

    bad = gapcert.certify(1, gamma=0.3)
    assert not bad.valid and bad.invalid_reason

    eps1, dim, _ = gapcert.epsilon_exact(1)
    assert abs(eps1 - 0.478) <= 0.002 and dim == 16, (eps1, dim)

    gamma, kernel, hilbert = gapcert.gamma_y(1)
    assert kernel == 8 and math.isfinite(gamma) and gamma > 0

    assert gapcert.fnw_sweep(trials=50) >= -1e-9

    try:
        gapcert.certify(0, gamma=0.3)
    except ValueError:
        pass
    else:
        raise AssertionError("n = 0 accepted")

    print(f"gapcert {gapcert.__version__}: {cert!r}")
    print("smoke test passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
