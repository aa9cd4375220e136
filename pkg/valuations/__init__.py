"""
Exact arithmetic for plane valuations at infinity: value groups, delta-sequences,
semigroups, proximity clusters and curves with one place at infinity.
"""
from .values import (
    CFTail,
    ContinuedFraction,
    OrderedValue,
    QuadraticNumber,
    ValueKind,
    cf_expand,
    cf_fold,
    cf_recurrence
)
from .semigroup import (
    GeneratedSemigroup,
    MembershipResult,
    brute_force_generate,
    enumerate_members,
    expansion_digits,
    is_well_ordered,
    member
)
from .delta import (
    DeltaCore,
    DeltaSequence,
    build_type_a,
    build_type_b,
    build_type_c,
    build_type_d,
    classify,
    derived_invariants,
    normalize,
    type_e_stream,
    validate_core
)
from .proximity import Cluster, DualGraph, cluster_from_delta, dual_graph, emit_dot, multiplicity_sequence, noether_residual
from .curves import BivariatePolynomial, approximate_roots, parse_poly, qadic_expand, value_at_infinity

__all__ = [
    'CFTail', 'ContinuedFraction', 'OrderedValue', 'QuadraticNumber', 'ValueKind',
    'cf_expand', 'cf_fold', 'cf_recurrence',
    'GeneratedSemigroup', 'MembershipResult', 'brute_force_generate', 'enumerate_members',
    'expansion_digits', 'is_well_ordered', 'member',
    'DeltaCore', 'DeltaSequence', 'build_type_a', 'build_type_b', 'build_type_c', 'build_type_d',
    'classify', 'derived_invariants', 'normalize', 'type_e_stream', 'validate_core',
    'Cluster', 'DualGraph', 'cluster_from_delta', 'dual_graph', 'emit_dot', 'multiplicity_sequence',
    'noether_residual',
    'BivariatePolynomial', 'approximate_roots', 'parse_poly', 'qadic_expand', 'value_at_infinity'
]
