"""Published inf-sup values for [0,1]^2 and [0,2]^2, keyed by (L, N, K) with h = 1/K.

Blank table cells are simply absent.
"""
from __future__ import annotations

from types import MappingProxyType

_TABLE_L1 = {
    1: {2: 0.999999994172141, 4: 0.999999987740597, 8: 0.999999986310051,
        16: 0.999999980277492, 32: 0.999999972413976, 64: 0.999999980522211},
    2: {2: 0.999999989168835, 4: 0.999999978618959, 8: 0.999999962318488,
        16: 0.999999916432749, 32: 0.999999896705947},
    3: {2: 0.999999978662899, 4: 0.999999947316136, 8: 0.999999878165505,
        16: 0.999999891563428},
}

_TABLE_L2 = {
    1: {2: 0.999999994172141, 4: 0.999999985661708, 8: 0.999999985276638,
        16: 0.999999982313628, 32: 0.999999972765685, 64: 0.999999980528361},
    2: {2: 0.999999983449168, 4: 0.999999971854628, 8: 0.999999932115646,
        16: 0.999999842706989, 32: 0.999999906834163},
    3: {2: 0.999999976327674, 4: 0.999999961774105, 8: 0.999999862356188,
        16: 0.999999877166154},
}


def _flatten(L, table):
    return {(float(L), N, K): v for N, row in table.items() for K, v in row.items()}


PAPER_REFERENCE = MappingProxyType({**_flatten(1, _TABLE_L1), **_flatten(2, _TABLE_L2)})


def reference_for(L: float) -> dict:
    return {k: v for k, v in PAPER_REFERENCE.items() if k[0] == float(L)}
