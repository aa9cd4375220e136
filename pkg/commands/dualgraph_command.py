"""
dualgraph: the proximity cluster and dual graph of a sequence, as JSON or DOT.
"""
from typing import Any, Dict
import argparse
import sys
import os

# Add parent directory to path for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from commands.base_command import BaseCommand
from valuations.proximity import cluster_from_delta, dual_graph, emit_dot, multiplicity_runs, proximity_defects


class DualGraphCommand(BaseCommand):
    name = "dualgraph"
    help = "Print the cluster and dual graph of a sequence document"

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        super().add_arguments(parser)
        parser.add_argument("--truncate", type=int, default=None, metavar="N",
                            help="Materialize at most N points (infinite tails default to the configured truncation)")
        parser.add_argument("--dot", action="store_true", help="Emit DOT text instead of JSON")

    def process(self, args: argparse.Namespace) -> Dict[str, Any]:
        document = self.load(args)
        seq = document.build()
        cluster = cluster_from_delta(seq, args.truncate)
        graph = dual_graph(cluster)
        self._log(f"{len(cluster)} points, tail {cluster.tail.value}")
        if args.dot:
            return {"text": emit_dot(graph)}

        multiplicities = [[value.to_json(), count] for value, count in multiplicity_runs(cluster)]
        return {"output": {
            "cluster": cluster.to_dict(),
            "graph": graph.to_dict(),
            "multiplicities": multiplicities,
            "is_tree": graph.is_tree(),
            "branch_vertices": graph.branch_vertices(),
            "proximity_defects": proximity_defects(cluster),
        }}
