"""Smoke test for the ncfk extension module."""

import json
import math

import ncfk


def main():
    x = ncfk.KernelOperator.builtin("hermite01", n=64)
    assert x.n == 64 and abs(x.h - 0.125) < 1e-15
    assert abs(x.trace()) < 1e-12
    assert x.schatten_norm(1.0) >= x.schatten_norm(2.0) >= x.schatten_norm(math.inf)

    back = x.alpha().theta()
    worst = max(abs(a - b) for ra, rb in zip(back.kernel(), x.kernel()) for a, b in zip(ra, rb))
    assert worst < 1e-10, worst

    same = ncfk.KernelOperator.from_bytes(x.to_bytes())
    assert same.to_bytes() == x.to_bytes()

    phi0 = ncfk.hermite(64, 0)
    proj = ncfk.KernelOperator([[a * b.conjugate() for b in phi0] for a in phi0])
    assert abs(proj.trace() - 1.0) < 1e-10

    report = json.loads(ncfk.verify("plancherel", n=32, seed=1))
    assert report["pass"], report

    rows = ncfk.decay_table(x, p=1.5, levels=3)
    assert all(lp <= bound for _, lp, bound, _ in rows)

    rho, delta0, final_norm, versal = ncfk.synthesize(x, 10.0 * x.schatten_norm(1.0))
    assert delta0 == 1.0 and final_norm < 10.0 * x.schatten_norm(1.0) and versal > 0
    print("acted trace norm:", ncfk.act(rho, x).schatten_norm(1.0))

    try:
        ncfk.synthesize(x, 1e-6)
    except RuntimeError as e:
        print("exhausted as expected:", e)
    else:
        raise AssertionError("expected exhaustion")

    print("ok:", len(ncfk.SUITES), "suites available")


if __name__ == "__main__":
    main()
