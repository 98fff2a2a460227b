"""Smoke test for the mechmatch extension module.

Build and install first:
    maturin build --release -m crates/py/Cargo.toml -o dist && pip install dist/mechmatch-*.whl
"""

from fractions import Fraction

import mechmatch


def main():
    g = mechmatch.Graph.figure("fig1a")
    assert g.num_agents == 2
    m = mechmatch.match_pi(g, [1])
    assert m == [(2, 3), (4, 5), (6, 7)], m
    assert g.utilities(m) == [3, 3]

    again = mechmatch.Graph.from_json(g.to_json())
    assert again == g

    fig3 = mechmatch.Graph.figure("fig3")
    found = mechmatch.verify_sp(fig3, "naive")
    agent, hidden, truthful, deviation = found[0]
    assert (agent, hidden) == (2, [5, 6])
    assert deviation - truthful == 2
    assert mechmatch.verify_sp(fig3, "matchpi", "1,3") == []

    fig5 = mechmatch.Graph.figure("fig5")
    optimum, expected, ratio = mechmatch.approx_ratio(fig5, "mix")
    assert (optimum, expected, ratio) == (2, Fraction(1), Fraction(2))
    outcomes = mechmatch.solve(fig5, "mix")
    assert len(outcomes) == 4 and sum(p for p, _, _ in outcomes) == 1

    tiny = mechmatch.Graph(2, [1, 1], [])
    assert mechmatch.approx_ratio(tiny, "optimal")[2] == "undefined"

    try:
        mechmatch.Graph(2, [1, 0], [])
    except ValueError as e:
        assert "owner" in str(e)
    else:
        raise AssertionError("owner 0 accepted")

    assert all(passed for _, passed, _ in mechmatch.fixtures())
    r = mechmatch.Graph.random(6, 2, 0.5, 7)
    assert r == mechmatch.Graph.random(6, 2, 0.5, 7)
    print("smoke test passed:", len(mechmatch.fixtures()), "fixtures,", mechmatch.MECHANISMS)


if __name__ == "__main__":
    main()
