"""Built-in inequality fixtures.

Classic facets (CHSH, Mermin, I3322, I4422, the Sliwa-10 GYNI form) plus the
published generalizations used by the metrics and acceptance fixtures.
Bounds are validated against vertex enumeration in the test suite.
"""
from __future__ import annotations

from .inequality import expand_symmetric_terms, from_terms
from .scenario import Scenario


def chsh():
    return from_terms(Scenario((2, 2)), 2, {
        (1, 1): 1, (1, 2): 1, (2, 1): 1, (2, 2): -1,
    })


def mermin():
    return from_terms(Scenario((2, 2, 2)), 2, {
        (1, 1, 2): 1, (1, 2, 1): 1, (2, 1, 1): 1, (2, 2, 2): -1,
    })


def i3322():
    return from_terms(Scenario((3, 3)), 4, {
        (1, 0): 1, (2, 0): -1, (0, 1): 1, (0, 2): -1,
        (1, 1): -1, (1, 2): 1, (2, 1): 1, (2, 2): -1,
        (1, 3): 1, (2, 3): 1, (3, 1): 1, (3, 2): 1,
    })


def i4422():
    return expand_symmetric_terms(Scenario((4, 4)), 7, {
        (0, 1): 2, (0, 2): 2, (0, 3): 1,
        (1, 1): -1, (2, 1): -1, (3, 1): -1, (4, 1): -1,
        (2, 2): -1, (3, 2): -1, (4, 2): 1, (3, 3): 1,
    })


def gyni():
    return from_terms(Scenario((2, 2, 2)), 4, {
        (1, 1, 0): 1, (2, 1, 0): 1, (1, 2, 0): 1, (2, 2, 0): 1,
        (1, 0, 1): 1, (2, 0, 1): -1, (0, 1, 1): 1, (1, 1, 1): 1,
        (0, 2, 1): -1, (2, 2, 1): -1, (1, 0, 2): 1, (2, 0, 2): -1,
        (0, 1, 2): -1, (2, 1, 2): 1, (0, 2, 2): 1, (1, 2, 2): -1,
    })


def positivity(scenario):
    """The probability-positivity facet; its relabeling class is 'trivial'."""
    terms = {}
    n = scenario.parties
    for mask in range(1, 1 << n):
        t = tuple(1 if mask & (1 << i) else 0 for i in range(n))
        terms[t] = -1
    return from_terms(scenario, 1, terms)


_I3322_GEN = {
    # the (110) sign makes this the unique facet with bound 8 that reduces
    # to I3322; see the test suite for the certificate
    1: (8, {
        (1, 1, 0): -1, (2, 1, 0): 1, (2, 1, 1): -1, (2, 2, 0): -1,
        (2, 2, 2): -1, (3, 3, 1): 2, (3, 3, 2): 2,
    }),
    400: (18, {
        (1, 0, 0): 5, (1, 1, 0): 1, (1, 1, 1): -5, (2, 0, 0): 3,
        (2, 1, 0): -3, (2, 1, 1): 3, (2, 2, 0): -2, (2, 2, 1): 2,
        (3, 0, 0): -2, (3, 1, 0): 1, (3, 1, 1): 1, (3, 2, 2): 2,
        (3, 3, 0): -1, (3, 3, 3): -1,
    }),
    1507: (21, {
        (1, 0, 0): 8, (1, 1, 0): -4, (1, 1, 1): 3, (2, 0, 0): 4,
        (2, 1, 0): -3, (2, 1, 1): 2, (2, 2, 0): -1, (2, 2, 1): 2,
        (2, 2, 2): -2, (3, 0, 0): -1, (3, 1, 0): -1, (3, 1, 1): 3,
        (3, 2, 0): 2, (3, 2, 1): -1, (3, 2, 2): 1, (3, 3, 1): -1,
        (3, 3, 3): -1,
    }),
    532: (12, {
        (1, 0, 0): 3, (1, 1, 0): -1, (1, 1, 1): -1, (2, 0, 0): -4,
        (2, 1, 0): 2, (2, 2, 0): -1, (2, 2, 1): 1, (2, 2, 2): 1,
        (3, 0, 0): -3, (3, 1, 0): 2, (3, 2, 0): -1, (3, 2, 1): 1,
        (3, 2, 2): -1, (3, 3, 1): 1, (3, 3, 2): 1,
    }),
}


def i3322_generalization(number):
    """Party-symmetric three-party I3322 generalizations, by catalog number."""
    bound, terms = _I3322_GEN[number]
    return expand_symmetric_terms(Scenario((3, 3, 3)), bound, terms)


_HYBRID = {
    1: (8, {
        (0, 1, 0): 2, (0, 2, 0): -2, (1, 0, 0): 2, (1, 1, 0): -1,
        (1, 1, 1): 1, (1, 2, 0): 1, (1, 2, 1): -1, (1, 3, 2): 2,
        (2, 0, 0): -2, (2, 1, 0): 1, (2, 1, 1): -1, (2, 2, 0): -1,
        (2, 2, 1): 1, (2, 3, 2): 2, (3, 1, 2): 2, (3, 2, 2): 2,
    }),
    47: (6, {
        (0, 0, 1): 1, (0, 0, 2): 1, (0, 1, 0): 1, (0, 1, 2): -1,
        (0, 2, 0): -1, (0, 2, 1): 1, (1, 0, 0): 1, (1, 0, 2): -1,
        (1, 1, 2): 2, (1, 2, 0): 1, (1, 2, 1): -1, (1, 3, 1): -1,
        (1, 3, 2): -1, (2, 0, 0): -1, (2, 0, 1): 1, (2, 1, 0): 1,
        (2, 1, 1): -1, (2, 2, 0): -1, (2, 2, 1): 2, (2, 2, 2): -1,
        (2, 3, 0): 1, (2, 3, 2): -1, (3, 1, 1): -1, (3, 1, 2): -1,
        (3, 2, 0): 1, (3, 2, 2): -1, (3, 3, 0): -1, (3, 3, 1): -1,
    }),
    198: (6, {
        (0, 0, 1): 3, (0, 0, 2): 1, (0, 1, 0): 2, (0, 1, 1): -1,
        (0, 1, 2): -1, (0, 2, 0): -1, (0, 2, 1): 2, (0, 2, 2): 1,
        (0, 3, 0): 1, (0, 3, 2): -1, (1, 0, 0): 2, (1, 0, 1): -1,
        (1, 0, 2): -1, (1, 1, 0): -1, (1, 1, 1): 1, (1, 2, 0): 1,
        (1, 2, 1): -1, (1, 3, 1): -1, (1, 3, 2): 1, (2, 0, 0): -1,
        (2, 0, 1): 2, (2, 0, 2): 1, (2, 1, 0): 1, (2, 1, 1): -1,
        (2, 2, 0): -1, (2, 2, 2): -1, (2, 3, 0): 1, (2, 3, 1): -1,
        (3, 0, 0): 1, (3, 0, 2): -1, (3, 1, 1): -1, (3, 1, 2): 1,
        (3, 2, 0): 1, (3, 2, 1): -1,
    }),
    314: (12, {
        (0, 0, 1): 5, (0, 0, 2): 1, (0, 1, 0): 2, (0, 1, 1): -2,
        (0, 2, 0): -2, (0, 2, 1): 2, (0, 3, 1): 1, (0, 3, 2): 1,
        (1, 0, 0): 2, (1, 0, 1): -2, (1, 1, 1): 2, (1, 1, 2): -2,
        (1, 2, 0): 1, (1, 2, 1): -2, (1, 2, 2): 1, (1, 3, 0): 1,
        (1, 3, 1): -2, (1, 3, 2): 1, (2, 0, 0): -2, (2, 0, 1): 2,
        (2, 1, 0): 1, (2, 1, 1): -2, (2, 1, 2): 1, (2, 2, 0): -2,
        (2, 2, 1): 3, (2, 2, 2): 1, (2, 3, 0): 1, (2, 3, 1): -3,
        (3, 0, 1): 1, (3, 0, 2): 1, (3, 1, 0): 1, (3, 1, 1): -2,
        (3, 1, 2): 1, (3, 2, 0): 1, (3, 2, 1): -3, (3, 3, 1): -2,
        (3, 3, 2): -2,
    }),
}


def hybrid_generalization(number):
    """Three-party (3,3,2)-scenario facets reducing to both CHSH and I3322."""
    bound, terms = _HYBRID[number]
    return from_terms(Scenario((3, 3, 2)), bound, terms)


_I4422_GEN = [
    (15, {(1, 0, 0): -1, (1, 1, 0): -2, (2, 0, 0): -1, (2, 1, 0): -2,
          (2, 2, 0): -2, (3, 0, 0): 1, (3, 1, 0): -1, (3, 2, 0): -1,
          (3, 3, 0): 1, (3, 3, 1): 1, (3, 3, 2): 1, (3, 3, 3): -3,
          (4, 4, 1): 2, (4, 4, 2): -2}),
    (15, {(1, 0, 0): -1, (1, 1, 0): -2, (1, 1, 1): -1, (2, 0, 0): -1,
          (2, 1, 0): -2, (2, 1, 1): 1, (2, 2, 0): -2, (2, 2, 1): -1,
          (2, 2, 2): 1, (3, 0, 0): 1, (3, 1, 0): -1, (3, 2, 0): -1,
          (3, 3, 0): 1, (3, 3, 1): 1, (3, 3, 2): 1, (3, 3, 3): -3,
          (4, 4, 1): 2, (4, 4, 2): -2}),
    (19, {(1, 0, 0): -2, (1, 1, 0): -2, (2, 0, 0): -2, (2, 1, 0): -2,
          (2, 2, 0): -2, (3, 0, 0): -1, (3, 1, 0): -2, (3, 2, 0): -2,
          (3, 3, 0): 1, (3, 3, 3): -1, (4, 4, 1): 2, (4, 4, 2): -2}),
    (19, {(1, 0, 0): -2, (1, 1, 0): -2, (1, 1, 1): -1, (2, 0, 0): -2,
          (2, 1, 0): -2, (2, 1, 1): 1, (2, 2, 0): -2, (2, 2, 1): -1,
          (2, 2, 2): 1, (3, 0, 0): -1, (3, 1, 0): -2, (3, 2, 0): -2,
          (3, 3, 0): 1, (3, 3, 3): -1, (4, 4, 1): 2, (4, 4, 2): -2}),
    (23, {(1, 0, 0): 3, (1, 1, 0): -3, (1, 1, 1): 2, (2, 0, 0): 3,
          (2, 1, 0): -3, (2, 2, 0): -3, (2, 2, 1): 2, (3, 0, 0): 1,
          (3, 1, 0): -1, (3, 1, 1): 1, (3, 2, 0): -1, (3, 2, 1): 1,
          (3, 2, 2): 1, (3, 3, 0): 1, (3, 3, 1): -1, (3, 3, 2): -1,
          (3, 3, 3): 1, (4, 4, 1): -4, (4, 4, 2): 4}),
    (38, {(1, 0, 0): 3, (1, 1, 0): 1, (1, 1, 1): -3, (2, 0, 0): 3,
          (2, 1, 0): 1, (2, 1, 1): 1, (2, 2, 0): 1, (2, 2, 1): -3,
          (2, 2, 2): 1, (3, 0, 0): 4, (3, 1, 0): 3, (3, 1, 1): -3,
          (3, 2, 0): 3, (3, 2, 1): -3, (3, 2, 2): -3, (3, 3, 0): -6,
          (3, 3, 1): -1, (3, 3, 2): -1, (3, 3, 3): 12, (4, 4, 1): 4,
          (4, 4, 2): -4}),
    (38, {(1, 0, 0): 3, (1, 1, 0): 1, (1, 1, 1): -1, (2, 0, 0): 3,
          (2, 1, 0): 1, (2, 1, 1): -1, (2, 2, 0): 1, (2, 2, 1): -1,
          (2, 2, 2): -1, (3, 0, 0): 4, (3, 1, 0): 3, (3, 1, 1): -3,
          (3, 2, 0): 3, (3, 2, 1): -3, (3, 2, 2): -3, (3, 3, 0): -6,
          (3, 3, 1): -1, (3, 3, 2): -1, (3, 3, 3): 12, (4, 4, 1): 4,
          (4, 4, 2): -4}),
    (51, {(1, 0, 0): 2, (1, 1, 0): -5, (2, 0, 0): 2, (2, 1, 0): -5,
          (2, 2, 0): -5, (3, 0, 0): 1, (3, 1, 0): -4, (3, 1, 1): 3,
          (3, 2, 0): -4, (3, 2, 1): 3, (3, 2, 2): 3, (3, 3, 0): 1,
          (3, 3, 1): -2, (3, 3, 2): -2, (3, 3, 3): -3, (4, 4, 1): -8,
          (4, 4, 2): 8}),
    (51, {(1, 0, 0): 2, (1, 1, 0): -5, (1, 1, 1): -4, (2, 0, 0): 2,
          (2, 1, 0): -5, (2, 1, 1): 4, (2, 2, 0): -5, (2, 2, 1): -4,
          (2, 2, 2): 4, (3, 0, 0): 1, (3, 1, 0): -4, (3, 1, 1): 3,
          (3, 2, 0): -4, (3, 2, 1): 3, (3, 2, 2): 3, (3, 3, 0): 1,
          (3, 3, 1): -2, (3, 3, 2): -2, (3, 3, 3): -3, (4, 4, 1): 8,
          (4, 4, 2): -8}),
    (55, {(1, 0, 0): 1, (1, 1, 0): -5, (2, 0, 0): 1, (2, 1, 0): -5,
          (2, 2, 0): -5, (3, 0, 0): -1, (3, 1, 0): -5, (3, 1, 1): 3,
          (3, 2, 0): -5, (3, 2, 1): 3, (3, 2, 2): 3, (3, 3, 0): 1,
          (3, 3, 1): -3, (3, 3, 2): -3, (3, 3, 3): -1, (4, 4, 1): -8,
          (4, 4, 2): 8}),
    (55, {(1, 0, 0): 1, (1, 1, 0): -5, (1, 1, 1): -4, (2, 0, 0): 1,
          (2, 1, 0): -5, (2, 1, 1): 4, (2, 2, 0): -5, (2, 2, 1): -4,
          (2, 2, 2): 4, (3, 0, 0): -1, (3, 1, 0): -5, (3, 1, 1): 3,
          (3, 2, 0): -5, (3, 2, 1): 3, (3, 2, 2): 3, (3, 3, 0): 1,
          (3, 3, 1): -3, (3, 3, 2): -3, (3, 3, 3): -1, (4, 4, 1): 8,
          (4, 4, 2): -8}),
    (76, {(1, 0, 0): 7, (1, 1, 0): 1, (1, 1, 1): -1, (2, 0, 0): 7,
          (2, 1, 0): 1, (2, 1, 1): -1, (2, 2, 0): 1, (2, 2, 1): -1,
          (2, 2, 2): -1, (3, 0, 0): 6, (3, 1, 0): 7, (3, 1, 1): -7,
          (3, 2, 0): 7, (3, 2, 1): -7, (3, 2, 2): -7, (3, 3, 0): -12,
          (3, 3, 1): -1, (3, 3, 2): -1, (3, 3, 3): 22, (4, 4, 1): -8,
          (4, 4, 2): 8}),
    (76, {(1, 0, 0): 7, (1, 1, 0): 1, (1, 1, 1): -5, (2, 0, 0): 7,
          (2, 1, 0): 1, (2, 1, 1): 3, (2, 2, 0): 1, (2, 2, 1): -5,
          (2, 2, 2): 3, (3, 0, 0): 6, (3, 1, 0): 7, (3, 1, 1): -7,
          (3, 2, 0): 7, (3, 2, 1): -7, (3, 2, 2): -7, (3, 3, 0): -12,
          (3, 3, 1): -1, (3, 3, 2): -1, (3, 3, 3): 22, (4, 4, 1): 8,
          (4, 4, 2): -8}),
]


def i4422_generalizations():
    """The 13 published three-party I4422 generalization classes, in order."""
    sc = Scenario((4, 4, 4))
    return [expand_symmetric_terms(sc, bound, terms) for bound, terms in _I4422_GEN]
