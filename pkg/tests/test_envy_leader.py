"""Envy graph and the leader/follower construction."""

from fractions import Fraction

import pytest

import vetotalk as vt
from vetotalk.construct import Kind, envy_graph, leader_follower, split_leaders
from vetotalk.errors import NotPrivateValues


def F(x):
    return Fraction(x)


class TestEnvyGraph:
    def test_reference_graph(self, common_value):
        graph = envy_graph(common_value)
        assert graph.best_decisions == ((F(30), F(0)), (F(0), F(40)), (F(0), F(10)))
        assert graph.edges == {(2, 0), (2, 1)}
        assert graph.levels == ((F(-40), (1,)), (F(-30), (0,)), (F(-10), (2,)))
        assert graph.leaders == (0, 1)
        assert graph.followers == (2,)

    def test_single_type_has_no_edges(self):
        g = vt.game(1, ["only"], ["1"], ["0"],
                    vt.polytope(1, [(["-1"], "0"), (["1"], "1")]),
                    [vt.affine(["1"])], [vt.affine(["-1"])])
        graph = envy_graph(g)
        assert graph.edges == frozenset()
        assert graph.leaders == (0,)

    def test_chain_game_graph(self, chain_envy):
        graph = envy_graph(chain_envy)
        assert graph.best_decisions == ((F(10), F(55)), (F(30), F(10)), (F(25), F(10)))
        assert graph.edges == {(1, 0), (2, 1)}
        assert graph.leaders == (0, 2)
        assert graph.followers == (1,)

    def test_typed_values_rejected(self, typed_values):
        with pytest.raises(NotPrivateValues):
            envy_graph(typed_values)

    def test_envy_implies_strictly_cheaper_own_decision(self, common_value):
        graph = envy_graph(common_value)
        v = common_value.receiver_v[0]
        for k, j in graph.edges:
            assert v(graph.best_decisions[k]) > v(graph.best_decisions[j])


class TestSplitLeaders:
    def test_two_step_chain_keeps_the_ends(self):
        # value order 1 < 2 < 3 with 3 envying 2 and 2 envying 1
        leaders, followers = split_leaders([(0,), (1,), (2,)], {1: {0}, 2: {1}})
        assert leaders == (0, 2)
        assert followers == (1,)

    def test_no_envy_means_everyone_leads(self):
        leaders, followers = split_leaders([(0, 1), (2,)], {})
        assert leaders == (0, 1, 2)
        assert followers == ()

    def test_star_pattern(self):
        leaders, followers = split_leaders([(0,), (1, 2, 3)], {1: {0}, 2: {0}, 3: {0}})
        assert leaders == (0,)
        assert followers == (1, 2, 3)


class TestLeaderFollower:
    def test_reference_partition(self, common_value):
        eq = leader_follower(common_value)
        assert eq.kind is Kind.PARTITIONAL
        assert eq.report.overall
        assert eq.sigma.rows[0][:2] == (F(1), F(0))
        assert eq.sigma.rows[1][:2] == (F(0), F(1))
        assert eq.sigma.rows[2][:2] == (F(0), F(1))
        assert eq.tau.decision("m[1]") == (F(30), F(0))
        assert eq.tau.decision("m[2]") == (F(0), F(40))
        assert eq.report.interim_sender_payoffs == (F(30), F(40), F(80))

    def test_chain_game_assignment(self, chain_envy):
        # leaders {1,3}: type 2's only envied leader is type 1
        eq = leader_follower(chain_envy)
        assert eq.metadata["leaders"] == (0, 2)
        assert eq.sigma.messages[:2] == ("m[1]", "m[3]")
        assert eq.sigma.rows[0][:2] == (F(1), F(0))
        assert eq.sigma.rows[1][:2] == (F(1), F(0))
        assert eq.sigma.rows[2][:2] == (F(0), F(1))
        assert eq.report.overall

    def test_identical_types_pool_on_one_leader(self):
        seg = vt.polytope(1, [(["-1"], "0"), (["1"], "1")])
        g = vt.game(1, ["a", "b"], ["1/2", "1/2"], ["1/2", "1/2"], seg,
                    [vt.affine(["1"]), vt.affine(["1"])],
                    [vt.affine(["-1"]), vt.affine(["-1"])])
        eq = leader_follower(g)
        assert eq.report.overall
        # both types get the same proposal
        assert len({eq.tau.decision(m) for m in eq.sigma.messages}) == 1

    def test_proposals_are_cellwise_optima(self, chain_envy):
        # the key step: each leader's decision stays optimal on its whole cell
        eq = leader_follower(chain_envy)
        rep = eq.report
        assert rep.constrained_opt_ok
        for m, gap in rep.optimality_gaps:
            assert gap == 0
