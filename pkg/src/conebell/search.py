"""Generalization searches and equivalence classification.

The equivalence group is the full set of local relabelings: party
permutations among equal-setting parties, per-party setting permutations,
and per-setting outcome sign flips.  The canonical form of an inequality is
the lexicographically minimal coefficient vector over its orbit, computed by
branch and bound over the group factors instead of expanding the orbit.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .cone import (enumerate_facets_dd, is_facet, lift_back, lift_polytope,
                   project_rays)
from .constraints import (XiAssignment, build_extended_behaviors,
                          parse_xi_label, saturating_assignments,
                          saturation_rows, symmetry_rows)
from .errors import CapExceededError
from .exactlinalg import integer_kernel_basis
from .inequality import Inequality, from_cone_normal, term_count
from .scenario import Scenario, enumerate_vertices

ORBIT_CAP_DEFAULT = 10_000_000


@dataclass(frozen=True)
class GroupSpec:
    """Which relabeling group factors participate in canonicalization."""

    party_permutations: bool = True
    setting_permutations: bool = True
    sign_flips: bool = True


@dataclass(frozen=True)
class EquivalenceClass:
    canonical: Inequality
    members_found: int
    witnesses: tuple[XiAssignment, ...] = ()


def _slot_candidates(m, group):
    """(source_of_image_setting, sign_of_image_setting) arrays, identity first.

    Each candidate assigns image setting s a source setting src[s] and a sign
    sgn[s]; index 0 is the fixed identity setting.
    """
    perms = list(itertools.permutations(range(1, m + 1))) if group.setting_permutations \
        else [tuple(range(1, m + 1))]
    signs = list(itertools.product((1, -1), repeat=m)) if group.sign_flips \
        else [(1,) * m]
    out = []
    for perm in perms:
        for sgn in signs:
            out.append(((0,) + perm, (1,) + sgn))
    return out


def _lex_min_vector(coeffs, scenario, group, cap):
    """Lexicographically minimal coefficient vector over the relabeling orbit.

    Image slots are processed from the least significant party upward, which
    matches the coordinate order, so keeping only the block-minimal partial
    assignments at each stage is exact.
    """
    n = scenario.parties
    shape = scenario.shape
    strides = [1] * n
    for i in range(n - 2, -1, -1):
        strides[i] = strides[i + 1] * shape[i + 1]
    c = np.array(list(coeffs), dtype=object)
    cand_cache = {}
    # states: (used_party_mask, suffix index array, suffix sign array)
    states = [(0, np.zeros(1, dtype=np.int64), np.ones(1, dtype=np.int64))]
    budget = cap
    for slot in range(n - 1, -1, -1):
        m = scenario.settings[slot]
        if m not in cand_cache:
            cand_cache[m] = _slot_candidates(m, group)
        cands = cand_cache[m]
        best_block = None
        best_states = []
        seen = set()
        for used, suf_idx, suf_sgn in states:
            parties = [p for p in range(n) if not (used >> p) & 1 and scenario.settings[p] == m]
            if not group.party_permutations:
                parties = [p for p in parties if p == slot]
            for p in parties:
                for src, sgn in cands:
                    budget -= 1
                    if budget < 0:
                        raise CapExceededError(
                            f"canonical form search exceeded the cap of {cap} evaluations; "
                            "restrict the group")
                    src_arr = np.array(src, dtype=np.int64) * strides[p]
                    idx = src_arr[:, None] + suf_idx[None, :]
                    sg = np.array(sgn, dtype=np.int64)[:, None] * suf_sgn[None, :]
                    block = tuple((c[idx[1:].ravel()] * sg[1:].ravel()).tolist())
                    if best_block is None or block < best_block:
                        best_block = block
                        best_states = []
                        seen = set()
                    if block == best_block:
                        key = (used | (1 << p), idx.tobytes(), sg.tobytes())
                        if key not in seen:
                            seen.add(key)
                            best_states.append((used | (1 << p), idx.ravel(), sg.ravel()))
        states = best_states
    used, idx, sgn = states[0]
    final = tuple(int(v) for v in (c[idx] * sgn).tolist())
    return final


def canonical_form(ineq, group=None, cap=ORBIT_CAP_DEFAULT):
    """Canonical representative of the relabeling class (lex-min, primitive)."""
    if group is None:
        group = GroupSpec()
    prim = ineq.primitive()
    vec = _lex_min_vector(prim.coefficients, prim.scenario, group, cap)
    return Inequality(prim.scenario, vec)


def classify(ineqs, witnesses=None, group=None, cap=ORBIT_CAP_DEFAULT):
    """Group inequalities by canonical form.

    Member counts reflect the inputs as given.  witnesses, when passed, is a
    parallel list of XiAssignment iterables (or None) that get merged per
    class.  Classes are ordered by simplicity: distinct-term count of the
    canonical form, then the canonical coefficient vector.
    """
    if group is None:
        group = GroupSpec()
    cache = {}
    buckets = {}
    for pos, ineq in enumerate(ineqs):
        key = ineq.primitive().coefficients
        if key not in cache:
            cache[key] = canonical_form(ineq, group=group, cap=cap)
        canon = cache[key]
        entry = buckets.setdefault(canon.coefficients, [canon, 0, set()])
        entry[1] += 1
        if witnesses is not None and witnesses[pos] is not None:
            entry[2].update(witnesses[pos])
    classes = []
    for canon, count, wit in buckets.values():
        classes.append(EquivalenceClass(
            canonical=canon, members_found=count,
            witnesses=tuple(sorted(wit, key=lambda x: x.label()))))
    classes.sort(key=lambda cl: (term_count(cl.canonical), cl.canonical.coefficients))
    return classes


# ---------------------------------------------------------------------------
# reductions


def _proportional_positive(a, b):
    """True iff a = q*b for some positive rational q (integer vectors)."""
    lead = None
    for x, y in zip(a, b):
        if (x == 0) != (y == 0):
            return False
        if x != 0 and lead is None:
            if (x > 0) != (y > 0):
                return False
            lead = (x, y)
    if lead is None:
        return False
    lx, ly = lead
    return all(x * ly == y * lx for x, y in zip(a, b))


def reduce_with_xi(candidate, xi, embed=None):
    """Substitute deterministic outcomes for the non-embedded parties.

    Returns the reduced coefficient vector (bound first) on the sub-scenario
    of the embedded parties, constants folded into the bound.
    """
    sc = candidate.scenario
    n = sc.parties
    if embed is None:
        embed = tuple(range(n - len(xi.values)))
    extras = tuple(i for i in range(n) if i not in embed)
    if len(extras) != len(xi.values):
        raise ValueError("xi does not cover the non-embedded parties")
    lower_sc = Scenario(tuple(sc.settings[i] for i in embed))
    reduced = [0] * (lower_sc.dimension + 1)
    reduced[0] = candidate.bound
    xi_of = {party: vals for party, vals in zip(extras, xi.values)}
    for t, coeff in candidate.nonzero_terms():
        sign = 1
        for party in extras:
            s = t[party]
            if s != 0:
                sign *= xi_of[party][s - 1]
        low_t = tuple(t[i] for i in embed)
        idx = lower_sc.index_of(low_t)
        if idx == 0:
            reduced[0] -= coeff * sign
        else:
            reduced[idx] += coeff * sign
    return lower_sc, tuple(reduced)


def verify_reduction(candidate, xi, lower, embed=None):
    """True iff substituting xi turns candidate into lower, up to positive scale."""
    lower_sc, reduced = reduce_with_xi(candidate, xi, embed=embed)
    if lower_sc.settings != lower.scenario.settings:
        return False
    return _proportional_positive(reduced, lower.coefficients)


# ---------------------------------------------------------------------------
# generalization searches


@dataclass(frozen=True)
class ReductionSpec:
    """A lower inequality embedded on specific target parties.

    The lower scenario must match the target setting counts on those
    parties; deterministic outcomes are enumerated for the others.  With
    sweep_orbit the search runs once per relabeling variant of the lower
    inequality, so reducibility is demanded only up to its equivalence
    class rather than to the exact coefficient vector.
    """

    lower: Inequality
    embed: tuple[int, ...]
    sweep_orbit: bool = False


def relabeling_orbit(ineq, cap=ORBIT_CAP_DEFAULT):
    """All distinct relabeled variants of an inequality (bound kept positive)."""
    import itertools as _it

    from .constraints import Relabeling, apply_relabeling

    sc = ineq.scenario
    n = sc.parties
    perms = [p for p in _it.permutations(range(n))
             if all(sc.settings[p[i]] == sc.settings[i] for i in range(n))]
    group_size = len(perms)
    for m in sc.settings:
        group_size *= len(list(_it.permutations(range(m)))) * (1 << m)
    if group_size > cap:
        raise CapExceededError(
            f"relabeling group has {group_size} elements, above the cap of {cap}")
    per_party = []
    for m in sc.settings:
        opts = [(sp, sf) for sp in _it.permutations(range(1, m + 1))
                for sf in _it.product((1, -1), repeat=m)]
        per_party.append(opts)
    out = {}
    for pp in perms:
        for combo in _it.product(*per_party):
            rel = Relabeling(pp, tuple(c[0] for c in combo), tuple(c[1] for c in combo))
            vec = apply_relabeling(rel, sc, ineq.coefficients)
            out.setdefault(vec, Inequality(sc, vec))
    return [out[key] for key in sorted(out)]


def _xi_space(target, reductions):
    """All joint deterministic-outcome choices, one XiAssignment per reduction."""
    spaces = []
    for spec in reductions:
        extras = tuple(i for i in range(target.parties) if i not in spec.embed)
        per_party = [list(itertools.product((-1, 1), repeat=target.settings[p]))
                     for p in extras]
        spaces.append([XiAssignment(tuple(vals)) for vals in itertools.product(*per_party)])
    return list(itertools.product(*spaces))


def _branch(target, cone, reductions, saturators, sym, xi_combo, dd_cap):
    """One deterministic-outcome branch: constraint rows -> surviving facets."""
    rows = sym
    for spec, sat, xi in zip(reductions, saturators, xi_combo):
        extended = build_extended_behaviors(
            spec.lower, xi, target, embed=spec.embed, check_facet=False,
            _saturators=sat)
        rows = saturation_rows(extended) + rows
    basis = integer_kernel_basis(rows.matrix(), columns=target.dimension + 1)
    if basis.shape[1] == 0:
        return []
    projected = project_rays(cone, basis)
    survivors = []
    for facet in enumerate_facets_dd(projected, cap=dd_cap):
        lifted = lift_back(facet.vector, basis)
        cert = is_facet(lifted, cone)
        if not cert.facet:
            continue
        ineq = from_cone_normal(target, lifted)
        ok = all(verify_reduction(ineq, xi, spec.lower, embed=spec.embed)
                 for spec, xi in zip(reductions, xi_combo))
        if ok:
            survivors.append((ineq, xi_combo))
    return survivors


def generalize_multi(target, reductions, symmetry, dd_cap=5_000_000,
                     orbit_cap=ORBIT_CAP_DEFAULT, workers=1, progress=None):
    """Facets of the target polytope reducing to every lower inequality.

    For each joint choice of deterministic outcomes, tightness on the
    extended behaviors and invariance under the symmetry generators are
    imposed, the projected cone's facets are enumerated, candidates are
    lifted back, facet-checked, and reduction-verified.  Survivors from all
    branches are merged into equivalence classes.
    """
    for spec in reductions:
        lower_cone = lift_polytope(enumerate_vertices(spec.lower.scenario))
        if not is_facet(spec.lower.cone_normal(), lower_cone):
            raise ValueError("a lower inequality is not facet-defining on its scenario")
    for gen in symmetry:
        gen.validate(target)
    cone = lift_polytope(enumerate_vertices(target))
    sym = symmetry_rows(symmetry, target)
    variant_lists = []
    for spec in reductions:
        if spec.sweep_orbit:
            variant_lists.append([ReductionSpec(lower=v, embed=spec.embed)
                                  for v in relabeling_orbit(spec.lower, cap=orbit_cap)])
        else:
            variant_lists.append([ReductionSpec(lower=spec.lower, embed=spec.embed)])
    jobs = []
    for chosen in itertools.product(*variant_lists):
        saturators = [saturating_assignments(spec.lower) for spec in chosen]
        for combo in _xi_space(target, chosen):
            jobs.append((target, cone, list(chosen), saturators, sym, combo, dd_cap))
    survivors = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for found in pool.map(_branch_star, jobs):
                survivors.extend(found)
    else:
        for k, job in enumerate(jobs):
            found = _branch(*job)
            survivors.extend(found)
            if progress is not None:
                progress(k + 1, len(jobs), len(found))
    # one entry per distinct facet, witnesses merged across branches
    by_vec = {}
    for ineq, combo in survivors:
        entry = by_vec.setdefault(ineq.coefficients, [ineq, set()])
        for xi in combo:
            entry[1].add(xi)
    members = [v[0] for v in by_vec.values()]
    witnesses = [v[1] for v in by_vec.values()]
    return classify(members, witnesses=witnesses, cap=orbit_cap)


def _branch_star(args):
    return _branch(*args)


def generalize(lower, extra_settings, symmetry, **kwargs):
    """Extend an inequality by extra parties appended after the existing ones."""
    target = Scenario(lower.scenario.settings + tuple(extra_settings))
    spec = ReductionSpec(lower=lower, embed=tuple(range(lower.scenario.parties)))
    return generalize_multi(target, [spec], symmetry, **kwargs)


# ---------------------------------------------------------------------------
# class list files


def write_class_list(classes):
    from .inequality import write_inequality
    blocks = []
    for k, cl in enumerate(classes, start=1):
        head = f"class {k}: members={cl.members_found}"
        if cl.witnesses:
            head += " witnesses=" + ",".join(x.label() for x in cl.witnesses)
        blocks.append(head + "\n" + write_inequality(cl.canonical))
    return "\n".join(blocks)


def parse_class_list(text):
    from .errors import ParseError
    from .inequality import parse_inequality
    classes = []
    current = None

    def finish():
        if current is None:
            return
        head, lines, start = current
        ineq = parse_inequality("\n".join(lines), start_line=start)
        classes.append(EquivalenceClass(canonical=ineq, members_found=head[0],
                                        witnesses=head[1]))

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("class "):
            finish()
            body = line[len("class "):]
            try:
                label, rest = body.split(":", 1)
                fields = dict(part.split("=", 1) for part in rest.split())
                members = int(fields["members"])
                wits = tuple(parse_xi_label(x) for x in fields.get("witnesses", "").split(",") if x) \
                    if "witnesses" in fields else ()
            except (ValueError, KeyError):
                raise ParseError(f"malformed class header {line!r}", line=lineno) from None
            current = ((members, wits), [], lineno + 1)
        elif current is not None:
            current[1].append(raw)
    finish()
    return classes
