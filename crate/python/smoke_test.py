"""Smoke test for the coboson_py extension module.

Uses an installed module (``pip install ./crates/py``) if there is one,
otherwise the shared library built by
``cargo build --release -p coboson-py --features extension-module``.
"""

import importlib.util
import math
import pathlib
import shutil
import sys
import sysconfig
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    try:
        import coboson_py

        return coboson_py
    except ImportError:
        pass
    for profile in ("release", "debug"):
        lib = ROOT / "target" / profile / "libcoboson_py.so"
        if lib.exists():
            break
    else:
        sys.exit("coboson_py not installed and no built library under target/")
    # The interpreter only imports extension modules with its own suffix.
    tmp = pathlib.Path(tempfile.mkdtemp())
    dest = tmp / ("coboson_py" + sysconfig.get_config_var("EXT_SUFFIX"))
    shutil.copy(lib, dest)
    spec = importlib.util.spec_from_file_location("coboson_py", dest)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def main():
    cb = load()
    print("coboson_py", cb.__version__)

    g = cb.sierpinski(3)
    assert (g.num_nodes, g.num_edges) == (42, 81), g
    assert cb.circuit_rank(cb.vicsek(3, 4)) == 0
    assert cb.circuit_rank(cb.square_lattice(5, boundary="closed")) == 26
    ring = cb.betweenness(cb.chain(12, "closed"))
    assert max(ring) - min(ring) < 1e-12

    points = [(h.num_nodes, cb.average_path_length(h)) for h in map(cb.sierpinski, range(1, 6))]
    alpha, _ = cb.fit_dimension(points)
    print(f"sierpinski alpha = {alpha:.3f}")
    assert abs(alpha - math.log2(3)) < 0.1 * math.log2(3)

    exact = cb.fidelity(cb.complete(7), pairs=3)
    assert abs(exact["fidelity"] - 1) < 1e-9

    ring = cb.fidelity(cb.chain(128, "closed"), pairs=2)
    print(f"ring M=128 F2 = {ring['fidelity']:.6f} (8/pi^2 = {8 / math.pi ** 2:.6f})")
    assert abs(ring["fidelity"] - 8 / math.pi ** 2) < 0.02

    gs = cb.ground_state(g)
    profile = cb.coboson_profile(gs["amplitudes"])
    assert abs(profile["chi2"] - (1 - profile["purity"])) < 1e-14

    try:
        cb.chain(1)
    except ValueError as e:
        print("rejected:", e)
    else:
        raise AssertionError("chain(1) accepted")
    print("ok")


if __name__ == "__main__":
    main()
