"""
Reference rules of degrees 3 to 17.

Closed forms are written as expressions and evaluated at import; the other
values are 14-digit decimals. Every rule is validated on construction, so
each generator is checked against its on-sphere condition at load time.
"""

from functools import lru_cache
from math import pi, sqrt
from typing import Dict, List, Optional

from .errors import StructureError
from .rules import Block, CubatureRule
from .search import RuleStructure

# (alias, name, m, K1..K6, {class: [(weight, params), ...]})
_RULE_DATA = (
    ("m1", "U3:3-1.1(1,0,0,0,0,0)-6", 1, (1, 0, 0, 0, 0, 0), {
        1: [(2 * pi / 3, (1.0,))],
    }),
    ("m2", "U3:5-1.1(1,0,0,1,0,0)-14", 2, (1, 0, 0, 1, 0, 0), {
        1: [(4 * pi / 15, (1.0,))],
        4: [(3 * pi / 10, (1 / sqrt(3),))],
    }),
    ("m3", "U3:7-1.1(1,1,0,1,0,0)-26", 3, (1, 1, 0, 1, 0, 0), {
        1: [(4 * pi / 21, (1.0,))],
        2: [(16 * pi / 105, (1 / sqrt(2),))],
        4: [(9 * pi / 70, (1 / sqrt(3),))],
    }),
    ("m4", "U3:9-1.2(1,0,1,1,0,0)-38", 4, (1, 0, 1, 1, 0, 0), {
        1: [(4 * pi / 105, (1.0,))],
        3: [(4 * pi / 35, (sqrt((1 - 1 / sqrt(3)) / 2), sqrt((1 + 1 / sqrt(3)) / 2)))],
        4: [(9 * pi / 70, (1 / sqrt(3),))],
    }),
    ("m5", "U3:11-1.1(1,1,0,1,1,0)-50", 5, (1, 1, 0, 1, 1, 0), {
        1: [(16 * pi / 315, (1.0,))],
        2: [(256 * pi / 2835, (1 / sqrt(2),))],
        4: [(27 * pi / 320, (1 / sqrt(3),))],
        5: [(14641 * pi / 181440, (1 / sqrt(11), 3 / sqrt(11)))],
    }),
    ("m6fsm", "U3:13-1.1(1,1,1,1,1,0)-74", 6, (1, 1, 1, 1, 1, 0), {
        1: [(0.00644739233053, (1.0,))],
        2: [(0.20865289186971, (1 / sqrt(2),))],
        3: [(0.20762372406088, (0.32077264898077, 0.94715622136259))],
        4: [(-0.37178913059595, (1 / sqrt(3),))],
        5: [(0.33396646771858, (0.48038446141531, 0.73379938570528))],
    }),
    ("m6", "U3:13-2.1(1,0,1,0,2,0)-78", 6, (1, 0, 1, 0, 2, 0), {
        1: [(0.05571838151106, (1.0,))],
        3: [(0.18861500631211, (0.33370053800545, 0.94267913466612))],
        5: [
            (0.12537551702973, (0.70117074174860, 0.12930267526790)),
            (0.19567865687870, (0.43948383947130, 0.78339511722191)),
        ],
    }),
    ("m7", "U3:15-1.1(1,0,1,1,2,0)-86", 7, (1, 0, 1, 1, 2, 0), {
        1: [(0.14506632743849, (1.0,))],
        3: [(0.14843778669299, (0.92733065715117, 0.37424303909034))],
        4: [(0.15009158815708, (1 / sqrt(3),))],
        5: [
            (0.13961936079093, (0.36960284645415, 0.85251831170127)),
            (0.14924451686907, (0.69435400660267, 0.18906355288540)),
        ],
    }),
    ("m8", "U3:17-1.1(1,0,1,1,3,0)-110", 8, (1, 0, 1, 1, 3, 0), {
        1: [(0.04810746585109, (1.0,))],
        3: [(0.12183091738552, (0.87815891060407, 0.47836902881214))],
        4: [(0.12307173528176, (1 / sqrt(3),))],
        5: [
            (0.10319173408833, (0.18511563534456, 0.96512403508666)),
            # the source lists this pair as (eta, zeta); only this order is on the sphere
            (0.12058024902856, (0.39568947305584, 0.82876998125269)),
            (0.12494509687253, (0.69042104838229, 0.21595729184587)),
        ],
    }),
)


def _build(alias, name, m, counts, blocks) -> CubatureRule:
    return CubatureRule(
        m=m,
        structure=RuleStructure.from_sphere_counts(counts),
        blocks={c: [Block(w, tuple(p)) for w, p in entries] for c, entries in blocks.items()},
        name=name,
        provenance="bundled",
    )


@lru_cache(maxsize=1)
def _rules_by_alias() -> Dict[str, CubatureRule]:
    return {alias: _build(alias, name, m, counts, blocks) for alias, name, m, counts, blocks in _RULE_DATA}


def builtin_rules() -> List[CubatureRule]:
    """The nine reference rules, ordered by degree (the non-good 74-point rule before its good sibling)."""
    return list(_rules_by_alias().values())


def bundled_aliases() -> List[str]:
    return list(_rules_by_alias().keys())


def find_rule(key: str) -> Optional[CubatureRule]:
    """
    Look up a reference rule.

    Args:
        key: "bundled:m5", "m5" or a full name such as "U3:11-1.1(1,1,0,1,1,0)-50"

    Returns:
        The rule, or None when nothing matches
    """
    rules = _rules_by_alias()
    alias = key[len("bundled:"):] if key.startswith("bundled:") else key
    if alias in rules:
        return rules[alias]
    for rule in rules.values():
        if rule.name == key:
            return rule
    return None


def get_rule(key: str) -> CubatureRule:
    """Like find_rule, but raises StructureError when nothing matches."""
    rule = find_rule(key)
    if rule is None:
        raise StructureError(f"no bundled rule '{key}'; known: {', '.join(bundled_aliases())}")
    return rule


def recommended_rules() -> List[CubatureRule]:
    """One good rule per degree, the fewest points first."""
    return [rule for alias, rule in _rules_by_alias().items() if alias != "m6fsm"]
