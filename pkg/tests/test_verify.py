"""Limit-game and exit-game checkers with their violation witnesses."""

from fractions import Fraction
from itertools import combinations

import pytest

import vetotalk as vt
from vetotalk import affine, polytope
from vetotalk.errors import MessageUndefined
from vetotalk.participation import acceptance_set
from vetotalk.ratlp import LpStatus, combine, maximize

from conftest import sub_game


def F(x):
    return Fraction(x)


def partitional_profile(common_value):
    sigma = vt.sender_strategy(["mA", "mB", "off"],
                               [["1", "0", "0"], ["0", "1", "0"], ["0", "1", "0"]])
    tau = vt.receiver_strategy({"mA": ["30", "0"], "mB": ["0", "40"], "off": ["0", "40"]})
    return sigma, tau


class TestLimitChecker:
    def test_reference_equilibrium_passes(self, common_value):
        sigma, tau = partitional_profile(common_value)
        rep = vt.check_limit_equilibrium(common_value, sigma, tau)
        assert rep.overall
        assert rep.interim_sender_payoffs == (F(30), F(40), F(80))
        assert rep.receiver_ex_ante == F("-110/3")

    def test_bad_partition_reports_the_envy(self, typed_values):
        # paper profile for the pool {1,3} against {2}
        sigma = vt.sender_strategy(["m13", "m2", "off"],
                                   [["1", "0", "0"], ["0", "1", "0"], ["1", "0", "0"]])
        tau = vt.receiver_strategy({"m13": ["100", "0"], "m2": ["0", "100"],
                                    "off": ["0", "100"]})
        rep = vt.check_limit_equilibrium(typed_values, sigma, tau)
        assert not rep.overall
        gaps = {(k, m, m2): gap for k, m, m2, gap in rep.incentive_violations}
        assert gaps[(2, "m13", "m2")] == 100

    def test_single_type_optimal_point_passes(self):
        g = vt.game(1, ["only"], ["1"], ["0"],
                    polytope(1, [(["-1"], "0"), (["1"], "1")]),
                    [affine(["1"])], [affine(["-1"])])
        sigma = vt.sender_strategy(["m"], [["1"]])
        tau = vt.receiver_strategy({"m": ["0"]})
        rep = vt.check_limit_equilibrium(g, sigma, tau)
        assert rep.overall

    def test_total_tau_required(self, common_value):
        sigma, _ = partitional_profile(common_value)
        tau = vt.receiver_strategy({"mA": ["30", "0"], "mB": ["0", "40"]})
        with pytest.raises(MessageUndefined):
            vt.check_limit_equilibrium(common_value, sigma, tau)

    def test_no_exit_violation_witnessed(self, common_value):
        sigma, _ = partitional_profile(common_value)
        # (0,10) is rejected by type 2 pooled on mB
        tau = vt.receiver_strategy({"mA": ["30", "0"], "mB": ["0", "10"], "off": ["0", "10"]})
        rep = vt.check_limit_equilibrium(common_value, sigma, tau)
        assert not rep.no_exit_ok
        assert (1, "mB") in rep.exit_violations

    def test_witnesses_reproduce_their_gaps(self, typed_values):
        sigma = vt.sender_strategy(["m1", "m23", "off"],
                                   [["1", "0", "0"], ["0", "1", "0"], ["0", "1", "0"]])
        tau = vt.receiver_strategy({"m1": ["100", "0"], "m23": ["0", "40"],
                                    "off": ["0", "40"]})
        rep = vt.check_limit_equilibrium(typed_values, sigma, tau)
        for k, m, m2, gap in rep.incentive_violations:
            u = typed_values.sender_u[k]
            assert u(tau.decision(m2)) - u(tau.decision(m)) == gap
            assert gap > 0


class TestBestWithExit:
    def brute_force(self, g, belief, v0):
        support = tuple(k for k in range(g.k) if belief[k] > 0)
        best = None
        for size in range(len(support) + 1):
            for combo in combinations(support, size):
                mass_out = sum(belief[k] for k in support if k not in combo)
                if combo:
                    out = maximize(combine([belief[k] for k in combo],
                                           [g.receiver_v[k] for k in combo]),
                                   acceptance_set(g, combo))
                    if out.status is not LpStatus.OPTIMAL:
                        continue
                    val = out.value + v0 * mass_out
                else:
                    val = v0 * mass_out
                if best is None or val > best:
                    best = val
        return best

    def test_uniform_belief_reference(self, common_value):
        res = vt.receiver_best_with_exit(common_value, ["1/3", "1/3", "1/3"], "-1000")
        assert res.value == F("-1060/3")
        assert res.decision == (F(30), F(0))
        assert res.exit_set == (1,)
        assert res.value == self.brute_force(common_value, common_value.prior, F(-1000))

    def test_dirac_belief_full_participation(self, common_value):
        res = vt.receiver_best_with_exit(common_value, ["0", "0", "1"], "-1000")
        assert res.value == -10
        assert res.decision == (F(0), F(10))
        assert res.exit_set == ()

    def test_pair_belief_prefers_exit(self, common_value):
        res = vt.receiver_best_with_exit(common_value, ["0", "1/2", "1/2"], "-41")
        assert res.value == F("-51/2")
        assert res.decision == (F(0), F(10))
        assert res.exit_set == (1,)

    def test_matches_brute_force_on_varied_beliefs(self, typed_values):
        for belief in (["1/2", "1/4", "1/4"], ["1/5", "2/5", "2/5"], ["0", "1/3", "2/3"]):
            belief = [F(b) for b in belief]
            for v0 in (F(-30), F(-200)):
                res = vt.receiver_best_with_exit(typed_values, belief, v0)
                assert res.value == self.brute_force(typed_values, belief, v0)


class TestV0Checker:
    def test_pooling_with_exit_is_an_equilibrium(self, common_value):
        # pooling at the prior: the receiver serves {1,3} and lets 2 exit
        best = vt.receiver_best_with_exit(common_value, common_value.prior, "-1000")
        sigma = vt.sender_strategy(["m", "o1", "o2"], [["1", "0", "0"]] * 3)
        tau = vt.receiver_strategy({m: best.decision for m in ("m", "o1", "o2")})
        rep = vt.check_v0_equilibrium(common_value, "-1000", sigma, tau)
        assert rep.overall
        assert rep.exit_types == (1,)
        assert not rep.no_exit_ok
        assert rep.receiver_ex_ante == F("-1060/3")

    def test_limit_equilibrium_survives_below_threshold(self, common_value):
        sigma, tau = partitional_profile(common_value)
        rep = vt.check_v0_equilibrium(common_value, "-200", sigma, tau)
        assert rep.overall
        assert rep.exit_types == ()
        limit = vt.check_limit_equilibrium(common_value, sigma, tau)
        assert rep.interim_sender_payoffs == limit.interim_sender_payoffs

    def test_receiver_optimality_fails_at_zero_exit_pay(self, common_value):
        sigma, tau = partitional_profile(common_value)
        rep = vt.check_v0_equilibrium(common_value, "0", sigma, tau)
        assert not rep.overall
        gaps = dict(rep.optimality_gaps)
        # serving only type 3 is worth -5 against -40 from full participation,
        # and serving nobody is worth 0, which is the best deviation here
        assert vt.receiver_best_with_exit(common_value, ["0", "1/2", "1/2"], "0").value == 0
        assert gaps["mB"] == F(40)

    def test_sender_side_uses_approval_payoffs(self, common_value):
        # proposals the low types reject are equivalent for them
        sigma = vt.sender_strategy(["a", "b", "c"],
                                   [["1", "0", "0"], ["1", "0", "0"], ["1", "0", "0"]])
        tau = vt.receiver_strategy({"a": ["30", "0"], "b": ["30", "0"], "c": ["30", "0"]})
        rep = vt.check_v0_equilibrium(common_value, "-1000", sigma, tau)
        assert rep.incentive_ok
        assert rep.interim_sender_payoffs[1] == 40  # reserve, not -30
