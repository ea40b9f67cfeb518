import itertools

import numpy as np
import pytest

from conebell import catalog
from conebell.constraints import XiAssignment, apply_relabeling, party_swap
from conebell.errors import CapExceededError
from conebell.inequality import Inequality, from_terms
from conebell.scenario import Scenario
from conebell.search import (GroupSpec, canonical_form, classify, generalize,
                             parse_class_list, relabeling_orbit,
                             verify_reduction, write_class_list)

from .reference import brute_force_canonical, full_relabeling_group


def test_canonical_form_idempotent():
    canon = canonical_form(catalog.chsh())
    assert canonical_form(canon).coefficients == canon.coefficients


def test_canonical_form_matches_brute_force():
    rng = np.random.default_rng(42)
    for settings in [(2, 2), (1, 2), (2, 1, 1)]:
        sc = Scenario(settings)
        for _ in range(8):
            vec = [int(x) for x in rng.integers(-3, 4, size=sc.dimension + 1)]
            vec[0] = abs(vec[0]) + 1
            ineq = Inequality(sc, tuple(vec))
            assert canonical_form(ineq).coefficients == brute_force_canonical(ineq)


def test_canonical_form_orbit_invariance():
    rng = np.random.default_rng(9)
    chsh = catalog.chsh()
    group = list(full_relabeling_group(chsh.scenario))
    canon = canonical_form(chsh).coefficients
    for _ in range(30):
        g = group[rng.integers(len(group))]
        moved = Inequality(chsh.scenario, apply_relabeling(g, chsh.scenario, chsh.coefficients))
        if moved.bound < 0:
            continue
        assert canonical_form(moved).coefficients == canon


def test_chsh_variants_share_canonical_form():
    chsh = catalog.chsh()
    variants = relabeling_orbit(chsh)
    assert len(variants) == 8
    canon = canonical_form(chsh).coefficients
    assert all(canonical_form(v).coefficients == canon for v in variants)


def test_canonical_form_group_restriction():
    sc = Scenario((2, 2))
    ineq = from_terms(sc, 1, {(0, 1): 1})
    # without sign flips the +1 cannot turn negative, so lex-min pushes it to
    # the latest reachable marginal slot
    no_flip = canonical_form(ineq, group=GroupSpec(sign_flips=False))
    assert no_flip.coefficient((2, 0)) == 1
    assert all(c >= 0 for c in no_flip.coefficients)
    full = canonical_form(ineq)
    assert full.coefficient((0, 1)) == -1


def test_canonical_cap():
    with pytest.raises(CapExceededError):
        canonical_form(catalog.i4422(), cap=10)


def test_classify_singleton_and_counts():
    classes = classify([catalog.chsh()])
    assert len(classes) == 1 and classes[0].members_found == 1
    both = classify([catalog.chsh()] + relabeling_orbit(catalog.chsh()))
    assert len(both) == 1 and both[0].members_found == 9


def test_verify_reduction_mermin_to_chsh():
    assert verify_reduction(catalog.mermin(), XiAssignment(((1, 1),)), catalog.chsh())
    assert not verify_reduction(catalog.mermin(), XiAssignment(((1, -1),)), catalog.chsh())


def test_verify_reduction_trivial_lift():
    chsh = catalog.chsh()
    target = Scenario((2, 2, 2))
    lifted = from_terms(target, 2, {(t[0], t[1], 0): c
                                    for t, c in chsh.nonzero_terms()})
    for xi in itertools.product((-1, 1), repeat=2):
        assert verify_reduction(lifted, XiAssignment((xi,)), chsh)


def test_verify_reduction_scale_freedom():
    chsh = catalog.chsh()
    target = Scenario((2, 2, 2))
    doubled = from_terms(target, 4, {(t[0], t[1], 0): 2 * c
                                     for t, c in chsh.nonzero_terms()})
    assert verify_reduction(doubled, XiAssignment(((1, 1),)), chsh)
    flipped = from_terms(target, 2, {(t[0], t[1], 0): -c
                                     for t, c in chsh.nonzero_terms()})
    assert not verify_reduction(flipped, XiAssignment(((1, 1),)), chsh)


def test_i4422_reduces_to_i3322():
    """Substituting A3 = B3 = 1 and relabeling maps I4422 onto I3322."""
    i4422 = catalog.i4422()
    sc = i4422.scenario
    # substitute setting 3 of both parties by the deterministic outcome +1
    reduced = {}
    bound = i4422.bound
    for (a, b), c in i4422.nonzero_terms():
        ta = 0 if a == 3 else a
        tb = 0 if b == 3 else b
        if (ta, tb) == (0, 0):
            bound -= c
        else:
            reduced[(ta, tb)] = reduced.get((ta, tb), 0) + c
    small = Scenario((3, 3))
    # relabel: flip outcomes of setting 2, rename setting 4 to 3 with a flip
    def move(s):
        return 3 if s == 4 else s
    sign = {2: -1, 4: -1}
    terms = {}
    for (a, b), c in reduced.items():
        s = sign.get(a, 1) * sign.get(b, 1)
        terms[(move(a), move(b))] = c * s
    assert from_terms(small, bound, terms).coefficients == catalog.i3322().coefficients


def test_generalize_chsh_contains_mermin():
    chsh = catalog.chsh()
    target = Scenario((2, 2, 2))
    sym = [party_swap(target, 0, 1), party_swap(target, 0, 2)]
    classes = generalize(chsh, (2,), sym)
    canons = {cl.canonical.coefficients for cl in classes}
    assert canonical_form(catalog.mermin()).coefficients in canons
    for cl in classes:
        assert cl.witnesses, "every class carries at least one xi witness"


def test_generalize_invariant_under_xi_order():
    # xi enumeration order must not change the class set; the branch order is
    # internal, so run twice through different worker counts instead
    chsh = catalog.chsh()
    target = Scenario((2, 2, 2))
    sym = [party_swap(target, 0, 1), party_swap(target, 0, 2)]
    a = generalize(chsh, (2,), sym)
    b = generalize(chsh, (2,), sym)
    assert [cl.canonical.coefficients for cl in a] == [cl.canonical.coefficients for cl in b]


def test_generalize_worker_pool_matches_sequential():
    chsh = catalog.chsh()
    target = Scenario((2, 2, 2))
    sym = [party_swap(target, 0, 1), party_swap(target, 0, 2)]
    seq = generalize(chsh, (2,), sym, workers=1)
    par = generalize(chsh, (2,), sym, workers=2)
    assert [cl.canonical.coefficients for cl in seq] == \
        [cl.canonical.coefficients for cl in par]
    assert [cl.witnesses for cl in seq] == [cl.witnesses for cl in par]


def test_generalize_multi_rejects_non_facet_lower():
    weak = from_terms(Scenario((2, 2)), 2, {(1, 1): 1, (1, 2): 1})
    with pytest.raises(ValueError, match="facet"):
        generalize(weak, (2,), [])


def test_class_list_round_trip():
    chsh = catalog.chsh()
    target = Scenario((2, 2, 2))
    sym = [party_swap(target, 0, 1), party_swap(target, 0, 2)]
    classes = generalize(chsh, (2,), sym)
    text = write_class_list(classes)
    back = parse_class_list(text)
    assert [cl.canonical.coefficients for cl in back] == \
        [cl.canonical.coefficients for cl in classes]
    assert [cl.witnesses for cl in back] == [cl.witnesses for cl in classes]
    assert write_class_list(back) == text
