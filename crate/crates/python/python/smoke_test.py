"""Quick end-to-end check of the Python bindings."""

import math

import pyrevgraph as rg


def main():
    v = rg.SignedPerm([1, 4, 2, 5, 3])
    assert str(v.apply_reversal(3, 5)) == "(+1,+4,-3,-5,-2)"
    w = rg.SignedPerm.parse("(+5,+2,-1,+3,-4)")
    rho = rg.SignedPerm([1, -3, -2, 4, 5])
    assert rho in rg.generators(5)
    assert w * rho == w.apply_reversal(2, 3)
    assert (w * w.inverse()).is_identity()
    assert rg.SignedPerm.unrank(5, w.rank()) == w
    assert len(rg.generators(5)) == 15
    assert len(rg.neighbors(rg.SignedPerm.identity(4))) == 10
    assert rg.bfs_distance(rg.SignedPerm.identity(3), rg.SignedPerm([-3, -2, -1])) == 1
    assert rg.diameter(4) == 5

    root = rg.survival_fixed_point(1.0)["root"]
    assert abs(root - 0.796812130020020) < 1e-12
    assert rg.wp(0.5, 64)["in_stated_range"] and not rg.wp(0.5, 7)["in_stated_range"]

    comp = rg.sample_components(5, seed=1, c=1.5)
    assert sum(comp["sizes"]) == comp["vertex_count"] == 3840
    lazy = rg.explore(4, seed=3, lam=1.0, cutoff=10_000)
    assert lazy["component_size"] == 384 and not lazy["hit_cutoff"]
    est = rg.estimate_giant_fraction(6, trials=50, seed=2, c=1.5, cutoff=10_000)
    assert 0.0 <= est["mean"] <= 1.0

    b = rg.simulate_branching("poisson", trials=2000, seed=5, lam=2.0)
    assert b["ci_low"] - 0.02 < root < b["ci_high"] + 0.02
    tree = rg.grow_restricted_tree(64, 1.5 / 2080, seed=9)
    assert len(set(map(tuple, tree["vertices"]))) == len(tree["vertices"])
    batch = rg.run_restricted_trees(32, 1.5 / 528, runs=50, seed=1)
    assert batch["duplicate_violations"] == 0

    rates = rg.critical_rate_table([2.5, 8.8])
    assert [round(r["critical_probability"], 2) for r in rates] == [0.23, 0.02]
    sweep = rg.threshold_sweep([4], [0.5, 1.5], trials=2, seed=1, method="both")
    assert len(sweep["rows"]) == 4 and all(r["status"] == "ok" for r in sweep["rows"])
    assert not math.isnan(sweep["rows"][0]["mean_largest_fraction"])

    try:
        rg.SignedPerm([1, 1])
    except ValueError:
        pass
    else:
        raise AssertionError("duplicate entries accepted")
    print("smoke test passed")


if __name__ == "__main__":
    main()
