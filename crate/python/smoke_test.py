"""Smoke test for the surface_lcs extension module.

Build first, e.g. `maturin develop -m crates/py/Cargo.toml`, or copy
target/release/libsurface_lcs_py.so to surface_lcs.so on PYTHONPATH.
"""

import json

import surface_lcs as sl


def mobius(n):
    res, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            res = -res
        p += 1
    return -res if n > 1 else res


def surface_ranks(g, k):
    # power sums of the roots of 1 - 2g t + t^2
    p = [2, 2 * g]
    for _ in range(2, k + 1):
        p.append(2 * g * p[-1] - p[-2])
    return [
        sum(mobius(n // d) * p[d] for d in range(1, n + 1) if n % d == 0) // n
        for n in range(1, k + 1)
    ]


def main():
    assert sl.witt_dimension(4, 3) == 20
    assert len(sl.lyndon_words(2, 4)) == 3

    alg = sl.SurfaceAlgebra(2, 5)
    assert alg.ranks() == surface_ranks(2, 5), alg.ranks()
    assert alg.hilbert_identity_holds()
    assert all(c == 0 for _, _, c in alg.center_report())
    assert sl.hilbert_series(2, 3) == [1, 4, 15, 56]

    r = sl.Word.relator(2)
    assert str(r) == "a1 b1 a1^-1 b1^-1 a2 b2 a2^-1 b2^-1"
    assert (r * r.inverse()).is_identity()
    assert sl.equal_in_quotient(2, r, sl.Word(), 4)
    assert not sl.equal_in_quotient(2, sl.Word("a1 b1"), sl.Word("b1 a1"), 2)
    assert sl.verify_identity_viii(sl.Word("a1"), sl.Word("b2 A1"), sl.Word("b1"))

    layers = sl.center_of_quotient(2, 3)
    assert [l["central"] for l in layers] == [False, False, True]

    assert sl.sp_generator_count(3) == 18
    assert len(sl.wedge_basis(3)) == 20
    assert sl.commutant_dimension(3) == 2

    assert sl.smith_invariants([[2, 0], [0, 3]]) == [1, 6]
    assert not sl.is_direct_summand([[2, 0]], 2)
    assert sl.saturate([[2, 4]], 2) == [[1, 2]]
    assert sl.euler_index(-2, -4) == 2
    try:
        sl.euler_index(-4, -6)
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")

    report = json.loads(sl.run_report(2, 3, suites=["lie-center", "index-formula"]))
    assert set(report) == {"config", "version", "checks"}
    assert all(c["status"] == "pass" for c in report["checks"])

    print("surface_lcs smoke test passed")


if __name__ == "__main__":
    main()
