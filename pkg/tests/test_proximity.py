"""
Unit tests for clusters, the Noether residual and dual graphs.
"""
import unittest
from fractions import Fraction
import sys
import os

# Add parent directory to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from valuations.delta import (
    DeltaCore,
    GeometricRule,
    build_type_a,
    build_type_b,
    build_type_c,
    build_type_d,
    build_type_d_degenerate,
    type_e_stream
)
from valuations.proximity import (
    ClusterTail,
    PointKind,
    cluster_from_delta,
    dual_graph,
    emit_dot,
    germ_cluster,
    multiplicity_sequence,
    noether_residual,
    proximity_defects
)
from valuations.values import QuadraticNumber
from exceptions import ProximityError

CORE = (18, 12, 33, 4)


class TestGermCluster(unittest.TestCase):
    """Test the cluster of {5,3}."""

    def setUp(self):
        self.cluster = germ_cluster((5, 3))

    def test_points(self):
        """Test four points with multiplicities 2, 2, 1, 1."""
        self.assertEqual(len(self.cluster), 4)
        self.assertEqual([p.multiplicity.payload for p in self.cluster.points], [2, 2, 1, 1])
        self.assertEqual(self.cluster.points[3].kind, PointKind.SATELLITE)
        self.assertEqual(self.cluster.points[3].proximate_to, (2, 1))
        self.assertEqual(self.cluster.satellite_index, 3)
        self.assertEqual(self.cluster.tail, ClusterTail.FINITE)

    def test_no_defects(self):
        """Test the proximity equalities hold."""
        self.assertEqual(proximity_defects(self.cluster), [])

    def test_dual_graph(self):
        """Test the edges and the single branch vertex."""
        graph = dual_graph(self.cluster)
        self.assertEqual(sorted(tuple(sorted(e)) for e in graph.edges),
                         [("E1", "E2"), ("E2", "E4"), ("E3", "E4")])
        self.assertTrue(graph.is_tree())
        self.assertEqual(graph.branch_vertices(), ["E4"])
        self.assertEqual(graph.st, ("E4",))
        self.assertIsNone(graph.tail_marker)


class TestTypeACluster(unittest.TestCase):
    """Test the cluster of {18,12,33,4,-5}."""

    def setUp(self):
        self.seq = build_type_a(CORE, -5)
        self.cluster = cluster_from_delta(self.seq)

    def test_multiplicities(self):
        """Test the run-length encoding keeps blocks apart."""
        self.assertEqual(multiplicity_sequence(self.seq),
                         [(6, 3), (3, 2), (3, 20), (2, 1), (1, 2), (1, 17)])
        self.assertEqual(len(self.cluster), 45)
        self.assertEqual(self.cluster.free_tail, 17)
        self.assertFalse(self.cluster.truncated)

    def test_core_multiplicities(self):
        """Test a bare core gives the germ runs."""
        self.assertEqual(multiplicity_sequence(DeltaCore(CORE)),
                         [(6, 3), (3, 2), (3, 20), (2, 1), (1, 2)])

    def test_noether_residual(self):
        """Test the residual equals the last entry."""
        self.assertEqual(noether_residual(self.seq), -5)
        self.assertEqual(noether_residual(build_type_a(CORE, 12)), 12)

    def test_noether_over_all_last_entries(self):
        """Test the identity for {6,4,11} with every last entry in [-6, 22]."""
        for last in range(-6, 23):
            self.assertEqual(noether_residual(build_type_a((6, 4, 11), last)), last)

    def test_no_defects(self):
        """Test the proximity equalities hold."""
        self.assertEqual(proximity_defects(self.cluster), [])

    def test_dual_graph(self):
        """Test the graph is a tree with one subgraph per pair."""
        graph = dual_graph(self.cluster)
        self.assertTrue(graph.is_tree())
        self.assertEqual(len(graph.subgraphs), 2)
        self.assertEqual(len(graph.vertices), 45)

    def test_truncation_zero(self):
        """Test an empty cluster."""
        cluster = cluster_from_delta(self.seq, 0)
        self.assertEqual(cluster.points, ())
        self.assertEqual(proximity_defects(cluster), [])

    def test_negative_truncation(self):
        """Test a negative truncation is rejected."""
        with self.assertRaises(ProximityError):
            cluster_from_delta(self.seq, -1)

    def test_noether_needs_type_a(self):
        """Test the residual is refused for type B."""
        with self.assertRaises(ProximityError):
            noether_residual(build_type_b(CORE))


class TestInfiniteClusters(unittest.TestCase):
    """Test tails of types B, C, D and E."""

    def test_type_b(self):
        """Test free points continue after the germ."""
        cluster = cluster_from_delta(build_type_b(CORE), 32)
        self.assertEqual(cluster.tail, ClusterTail.INFINITE_FREE)
        self.assertEqual(len(cluster), 32)
        self.assertTrue(cluster.truncated)
        self.assertEqual(cluster.points[-1].kind, PointKind.FREE)
        graph = dual_graph(cluster)
        self.assertEqual(graph.tail_marker, "tail")
        self.assertTrue(graph.is_tree())

    def test_type_c(self):
        """Test the infinite block of (0,1) multiplicities."""
        seq = build_type_c(CORE)
        cluster = cluster_from_delta(seq, 30)
        self.assertEqual(cluster.tail, ClusterTail.INFINITE_SATELLITE_SAME_DIVISOR)
        self.assertEqual(multiplicity_sequence(seq, 30),
                         [((2, 2), 3), ((1, 1), 2), ((1, 1), 20), ((1, 0), 1), ((0, 1), 4)])

    def test_type_d_degenerate(self):
        """Test {1 + sqrt 2, 1} truncated to five points."""
        cluster = cluster_from_delta(build_type_d_degenerate(QuadraticNumber(1, 1, 2)), 5)
        self.assertEqual(len(cluster), 5)
        self.assertEqual(cluster.tail, ClusterTail.INFINITE_SATELLITE_ALTERNATING)

    def test_type_d_integer_multiplicities(self):
        """Test the normalized prefix is rescaled to its smallest witness core."""
        seq = build_type_d((Fraction(3, 2), 1, Fraction(11, 4), Fraction(1, 3)),
                           QuadraticNumber.from_parts(147, -1, 186, 2))
        runs = multiplicity_sequence(seq, 12)
        self.assertEqual(runs, [(18, 3), (9, 2), (9, 7)])
        self.assertTrue(all(type(m) is int for m, _ in runs))
        witness = min(seq.witnesses, key=lambda w: w.entries[1])
        self.assertEqual(runs, multiplicity_sequence(witness, 12))

    def test_type_e(self):
        """Test a geometric sequence truncated to ten points."""
        seq = type_e_stream(GeometricRule((Fraction(5, 3), 1), Fraction(3, 2)))
        cluster = cluster_from_delta(seq, 10)
        self.assertEqual(cluster.tail, ClusterTail.INFINITE_BLOCKS)
        self.assertEqual(len(cluster), 10)
        self.assertTrue(all(end < 10 for _, end in cluster.pairs))


class TestEmitDot(unittest.TestCase):
    """Test the DOT rendering."""

    def test_single_point(self):
        """Test a cluster truncated to one point has one node statement."""
        graph = dual_graph(cluster_from_delta(build_type_a(CORE, -5), 1))
        dot = emit_dot(graph)
        self.assertEqual(dot.count("[label="), 1)
        self.assertTrue(dot.startswith("graph dual {"))
        self.assertIn("rho_1", dot)

    def test_deterministic(self):
        """Test two renderings of the same cluster are identical."""
        first = emit_dot(dual_graph(germ_cluster(CORE)))
        second = emit_dot(dual_graph(germ_cluster(CORE)))
        self.assertEqual(first, second)
        self.assertIn("subgraph cluster_gamma_2", first)

    def test_tail_marker(self):
        """Test infinite clusters draw an ellipsis node."""
        dot = emit_dot(dual_graph(cluster_from_delta(build_type_b((5, 3)), 8)))
        self.assertIn("tail [label=\"...\", shape=plaintext];", dot)


if __name__ == '__main__':
    unittest.main()
