"""Shared fixtures: the three reference games, a leader/follower chain game,
and seeded random game generators for the property suites."""

from __future__ import annotations

import random
from fractions import Fraction
from pathlib import Path

import pytest

import vetotalk as vt
from vetotalk import affine, polytope

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

TRIANGLE = polytope(2, [(["-1", "0"], "0"), (["0", "-1"], "0"), (["1", "1"], "100")])
SIMPLEX3 = polytope(3, [(["-1", "0", "0"], "0"), (["0", "-1", "0"], "0"),
                        (["0", "0", "-1"], "0"), (["1", "1", "1"], "1"),
                        (["-1", "-1", "-1"], "-1")])


def common_value_game() -> vt.GameSpec:
    """Two goods, three types, type-independent receiver utility."""
    return vt.game(2, ["1", "2", "3"], ["1/3", "1/3", "1/3"], ["30", "40", "20"],
                   TRIANGLE,
                   [affine(["1", "-1"]), affine(["-1", "1"]), affine(["1", "2"])],
                   [affine(["-1", "-1"])] * 3)


def typed_values_game() -> vt.GameSpec:
    """Same sender side, but the receiver's utility depends on the type."""
    return vt.game(2, ["1", "2", "3"], ["1/3", "1/3", "1/3"], ["30", "40", "20"],
                   TRIANGLE,
                   [affine(["1", "-1"]), affine(["-1", "1"]), affine(["1", "2"])],
                   [affine(["1/3", "0"]), affine(["0", "1/3"]), affine(["-1", "-1"])])


def cyclic_actions_game() -> vt.GameSpec:
    """Three pure actions, cyclic payoffs, every pair serviceable but not all three."""
    return vt.game(3, ["1", "2", "3"], ["1/3", "1/3", "1/3"], ["0", "0", "0"],
                   SIMPLEX3,
                   [affine(["0", "-2", "1"]), affine(["1", "0", "-2"]), affine(["-2", "1", "0"])],
                   [affine(["2", "0", "1"]), affine(["1", "2", "0"]), affine(["0", "1", "2"])])


def chain_envy_game() -> vt.GameSpec:
    """Private-values game whose envy relation is exactly 2->1 and 3->2.

    Decisions live in the box [10,60]^2 and the receiver minimises spending;
    the costly type 1 is envied by 2, the middling type 2 by 3, and nobody
    envies 3.
    """
    box = polytope(2, [(["-1", "0"], "-10"), (["1", "0"], "60"),
                       (["0", "-1"], "-10"), (["0", "1"], "60")])
    return vt.game(2, ["1", "2", "3"], ["1/3", "1/3", "1/3"], ["60", "35", "25"],
                   box,
                   [affine(["1/2", "1"]), affine(["1", "1/2"]), affine(["1", "0"])],
                   [affine(["-1", "-1"])] * 3)


def sub_game(g: vt.GameSpec, keep, prior) -> vt.GameSpec:
    """Restriction of a game to a subset of its types."""
    return vt.GameSpec(
        n=g.n,
        type_names=tuple(g.type_names[k] for k in keep),
        prior=vt.ratlp.vec(prior),
        reserve=tuple(g.reserve[k] for k in keep),
        X=g.X,
        sender_u=tuple(g.sender_u[k] for k in keep),
        receiver_v=tuple(g.receiver_v[k] for k in keep),
    )


@pytest.fixture(scope="session")
def common_value():
    return common_value_game()


@pytest.fixture(scope="session")
def typed_values():
    return typed_values_game()


@pytest.fixture(scope="session")
def cyclic_actions():
    return cyclic_actions_game()


@pytest.fixture(scope="session")
def chain_envy():
    return chain_envy_game()


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


# ---------------------------------------------------------------------------
# random game generation


def _frac(rng, lo, hi, den=4) -> Fraction:
    d = rng.randint(1, den)
    return Fraction(rng.randint(lo * d, hi * d), d)


def _random_prior(rng, k):
    weights = [rng.randint(1, 6) for _ in range(k)]
    total = sum(weights)
    return [Fraction(w, total) for w in weights]


def _random_affine(rng, n, nonzero=True):
    while True:
        coeffs = [_frac(rng, -4, 4, 3) for _ in range(n)]
        if not nonzero or any(c != 0 for c in coeffs):
            return vt.AffineFn(tuple(coeffs), _frac(rng, -3, 3, 2))


def _anchored_reserves(rng, X_corners, utils):
    """Reserves set at (utility at a random corner) - slack, so every
    single-type acceptance set is nonempty by construction."""
    reserves = []
    for u in utils:
        z = X_corners[rng.randrange(len(X_corners))]
        reserves.append(u(z) - Fraction(rng.randint(0, 4), 2))
    return reserves


def random_private_game(seed: int, k: int = 3) -> vt.GameSpec:
    rng = random.Random(seed)
    corners = [(Fraction(0), Fraction(0)), (Fraction(8), Fraction(0)),
               (Fraction(0), Fraction(8)), (Fraction(8), Fraction(8))]
    box = polytope(2, [(["-1", "0"], "0"), (["1", "0"], "8"),
                       (["0", "-1"], "0"), (["0", "1"], "8")])
    utils = [_random_affine(rng, 2) for _ in range(k)]
    v = _random_affine(rng, 2)
    return vt.game(2, [str(i + 1) for i in range(k)], _random_prior(rng, k),
                   _anchored_reserves(rng, corners, utils), box, utils, [v] * k)


def random_typed_game(seed: int) -> vt.GameSpec:
    rng = random.Random(seed)
    corners = [(Fraction(0), Fraction(0)), (Fraction(8), Fraction(0)),
               (Fraction(0), Fraction(8)), (Fraction(8), Fraction(8))]
    box = polytope(2, [(["-1", "0"], "0"), (["1", "0"], "8"),
                       (["0", "-1"], "0"), (["0", "1"], "8")])
    utils = [_random_affine(rng, 2) for _ in range(3)]
    values = [_random_affine(rng, 2, nonzero=False) for _ in range(3)]
    return vt.game(2, ["1", "2", "3"], _random_prior(rng, 3),
                   _anchored_reserves(rng, corners, utils), box, utils, values)


def random_two_type_game(seed: int) -> vt.GameSpec:
    rng = random.Random(seed)
    corners = [(Fraction(0), Fraction(0)), (Fraction(6), Fraction(0)),
               (Fraction(0), Fraction(6))]
    tri = polytope(2, [(["-1", "0"], "0"), (["0", "-1"], "0"), (["1", "1"], "6")])
    utils = [_random_affine(rng, 2) for _ in range(2)]
    values = [_random_affine(rng, 2, nonzero=False) for _ in range(2)]
    return vt.game(2, ["1", "2"], _random_prior(rng, 2),
                   _anchored_reserves(rng, corners, utils), tri, utils, values)


def random_interval_game(seed: int) -> vt.GameSpec:
    rng = random.Random(seed)
    k = rng.choice([2, 3, 4])
    seg = polytope(1, [(["-1"], "0"), (["1"], "10")])
    corners = [(Fraction(0),), (Fraction(10),)]
    utils = [_random_affine(rng, 1, nonzero=False) for _ in range(k)]
    values = [_random_affine(rng, 1, nonzero=False) for _ in range(k)]
    return vt.game(1, [str(i + 1) for i in range(k)], _random_prior(rng, k),
                   _anchored_reserves(rng, corners, utils), seg, utils, values)


N_PROPERTY = 200


@pytest.fixture(scope="session")
def random_private_games():
    return [random_private_game(seed) for seed in range(N_PROPERTY)]


@pytest.fixture(scope="session")
def random_mixed_bag():
    """A varied pool of games every dispatcher branch can be exercised on."""
    games = []
    for seed in range(70):
        games.append(random_private_game(1000 + seed))
    for seed in range(50):
        games.append(random_typed_game(2000 + seed))
    for seed in range(40):
        games.append(random_two_type_game(3000 + seed))
    for seed in range(40):
        games.append(random_interval_game(4000 + seed))
    return games


@pytest.fixture(scope="session")
def solved_mixed_bag(random_mixed_bag):
    out = []
    for g in random_mixed_bag:
        res = vt.solve(g)
        out.append((g, res))
    return out


# ---------------------------------------------------------------------------
# acceptance reporting: one pass/fail line per criterion


def pytest_terminal_summary(terminalreporter):
    stats = terminalreporter.stats
    lines = {}
    for status, tag in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL")):
        for rep in stats.get(status, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" in nodeid:
                name = nodeid.split("::test_criterion_")[1]
                crit = name.split("_")[0]
                label = f"criterion {crit}"
                if tag == "FAIL" or label not in lines:
                    lines.setdefault(label, tag)
                    if tag == "FAIL":
                        lines[label] = tag
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        def sort_key(item):
            head = item[0].split()[1]
            return (int(head), item[0])
        for label, tag in sorted(lines.items(), key=sort_key):
            terminalreporter.write_line(f"{label}: {tag}")
