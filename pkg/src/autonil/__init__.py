"""Autonilpotency toolkit for small finite groups given by Cayley tables."""

from .automorphisms import (
    Automorphism,
    OperatorAction,
    automorphism_group,
    conjugation_action,
    inner_automorphisms,
    inner_subaction_of_aut,
    is_p_group,
    p_prime_elements,
    restrict_action,
    stabilizer_action_on_subgroup,
)
from .catalog import builtin_catalog, export_report, parse_spec, realize
from .core import (
    GroupError,
    GroupTable,
    InvariantError,
    SizeError,
    commutator_elements,
    direct_product,
    element_order,
    from_permutations,
    make_alternating,
    make_cyclic,
    make_dihedral,
    make_elementary_abelian,
    make_quaternion8,
    make_symmetric,
    prime_divisors,
    quotient,
)
from .criteria import (
    baer_absolute,
    baer_classical,
    check_r_nilpotent_frobenius,
    check_r_nilpotent_sylow,
    check_via_chain,
    check_via_fixity,
    check_via_frobenius,
    check_via_l_series,
    check_via_sylow,
    cross_validate,
)
from .series import (
    absolute_hypercenter,
    build_stabilized_chain,
    hypercenter,
    is_r_nilpotent,
    k_series,
    l_series,
    operator_commutator,
    verify_chain_stabilized,
)
from .subgroups import (
    Subgroup,
    center,
    centralizer,
    enumerate_subgroups,
    fitting_subgroup,
    frattini_subgroup,
    generated_subgroup,
    is_nilpotent,
    is_normal,
    maximal_subgroups,
    normalizer,
    p_subgroups,
    sylow_subgroup,
)

__version__ = "0.1.0"

__all__ = [
    "absolute_hypercenter",
    "Automorphism",
    "automorphism_group",
    "baer_absolute",
    "baer_classical",
    "build_stabilized_chain",
    "builtin_catalog",
    "center",
    "centralizer",
    "check_r_nilpotent_frobenius",
    "check_r_nilpotent_sylow",
    "check_via_chain",
    "check_via_fixity",
    "check_via_frobenius",
    "check_via_l_series",
    "check_via_sylow",
    "commutator_elements",
    "conjugation_action",
    "cross_validate",
    "direct_product",
    "element_order",
    "enumerate_subgroups",
    "export_report",
    "fitting_subgroup",
    "frattini_subgroup",
    "from_permutations",
    "generated_subgroup",
    "GroupError",
    "GroupTable",
    "hypercenter",
    "inner_automorphisms",
    "inner_subaction_of_aut",
    "InvariantError",
    "is_nilpotent",
    "is_normal",
    "is_p_group",
    "is_r_nilpotent",
    "k_series",
    "l_series",
    "make_alternating",
    "make_cyclic",
    "make_dihedral",
    "make_elementary_abelian",
    "make_quaternion8",
    "make_symmetric",
    "maximal_subgroups",
    "normalizer",
    "operator_commutator",
    "OperatorAction",
    "p_prime_elements",
    "p_subgroups",
    "parse_spec",
    "prime_divisors",
    "quotient",
    "realize",
    "restrict_action",
    "SizeError",
    "stabilizer_action_on_subgroup",
    "Subgroup",
    "sylow_subgroup",
    "verify_chain_stabilized",
]
