"""Smoke test for the pydpplab extension module.

Build and run from the repository root:

    cargo build -p dpplab-py --features extension-module --release
    cp target/release/libpydpplab.so crates/py/python/pydpplab.so
    python3 crates/py/python/smoke_test.py
"""

import math

import pydpplab as dl


def close(a, b, tol):
    assert abs(a - b) <= tol, (a, b)


def main():
    disk = dl.Domain.disk(math.sqrt(1 / math.pi))
    close(disk.area, 1.0, 1e-14)
    assert disk.contains(0.0, 0.0) and not disk.contains(2.0, 0.0)
    nodes, weights = disk.quadrature(12)
    close(sum(weights), 1.0, 1e-12)
    assert len(nodes) == 2 * 12 * 12

    ginibre = dl.Kernel("ginibre")
    close(abs(ginibre.eval((0.0, 0.0), (1.0, 0.0))), math.exp(-math.pi / 2), 1e-14)
    close(abs(dl.Kernel("landau:1").eval((0.0, 0.0), (math.sqrt(1 / math.pi), 0.0))), 0.0, 1e-14)

    lambdas = dl.spectrum(ginibre, disk, order=24)
    exact = dl.ginibre_disk_spectrum(math.sqrt(1 / math.pi), 15)
    assert max(abs(a - b) for a, b in zip(lambdas, exact)) < 1e-6
    close(dl.incomplete_gamma(1.0, 1.0), 1 - math.exp(-1), 1e-14)

    f = dl.functionals(lambdas)
    close(f["variance"], 0.523777611803, 1e-8)
    close(f["entropy"], 1.63904909174, 1e-8)
    assert f["entropy"] >= 4 * math.log(2) * f["variance"]

    fe = dl.FiniteEnsemble(ginibre, dl.Domain("disk:1.1283791670955126"), order=16)
    assert fe.rank == 4
    close(fe.gap(), 0.781467259253, 1e-8)
    close(fe.l1_deviation(), 2 * fe.gap(), 1e-8)
    assert all(len(s) == 4 for s in fe.sample_many(7, 10))
    assert fe.sample(3) == fe.sample(3)

    ls = [2.0, 3.0, 4.0, 5.0, 6.0]
    assert dl.classify(ls, [0.7 * l for l in ls])[0] == "class_one"
    assert dl.classify(ls, [0.7 * l * math.log(l) for l in ls])[0] == "class_two"

    csv = dl.run_sweep("kernel = ginibre\ndomain = disk:1\nL_grid = 1, 1.5\nquad_order = 12\n")
    assert csv.splitlines()[0].startswith("L,area,perimeter")
    assert len(csv.splitlines()) == 3

    try:
        dl.Domain("disk:-1")
    except ValueError:
        pass
    else:
        raise AssertionError("negative radius accepted")
    print("pydpplab smoke test passed")


if __name__ == "__main__":
    main()
