"""Canonization of front colorings by inner maps.

An inner map assigns one selector per member position; evaluating it on
a member keeps, projects or drops each block and the canonical claim is
the biconditional f(s) = f(t) iff phi(s) = phi(t) on the front members
of the witness reduct. The pipeline mirrors the mixing analysis: first
shrink to a reduct deciding every interior pair, then uniformize one
selector per position against the mixing kernel, verify, and grow the
witness while verification holds. The brute-force oracle enumerates
selector tuples over whole reducts and is used to cross-validate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import (
    BudgetExceededError,
    DomainError,
    FusionExhaustedError,
    NoInnerWitnessError,
)
from .fronts import Coloring, Front, members_extending
from .mixing import MIXES, SEPARATES, UNDECIDED, MixingEngine
from .model import (
    Approx,
    Config,
    DEFAULT_CONFIG,
    PropertyOracle,
    SpaceModel,
    approx_sort_key,
    fuse,
    witness_sort_key,
)


@dataclass(frozen=True)
class InnerMap:
    """Per-position selectors; drop components vanish from the output."""

    selectors: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.selectors)

    def to_json(self) -> list[str]:
        return list(self.selectors)


def inner_family(model: SpaceModel) -> tuple[str, ...]:
    """Selector catalog of the space, the drop component first."""
    names = model.selector_names()
    if names[0] != "drop":
        names = ("drop",) + tuple(n for n in names if n != "drop")
    return names


def eval_inner(model: SpaceModel, phi: InnerMap, t: Approx) -> tuple:
    """phi(t): nonempty selector outputs in prefix order."""
    if len(t) > len(phi.selectors):
        raise DomainError(
            f"approximation of length {len(t)} exceeds the map's {len(phi.selectors)} positions"
        )
    out = []
    for name, block in zip(phi.selectors, t.blocks):
        v = model.apply_selector(name, block)
        if v:
            out.append(tuple(v))
    return tuple(out)


def _kernel_matches(
    pairs_equal: Callable[[Approx, Approx], bool],
    model: SpaceModel,
    name: str,
    exts: tuple[Approx, ...],
) -> bool:
    """Biconditional between a pair relation on extensions and selector
    equality on their last blocks."""
    for i, p in enumerate(exts):
        vp = model.apply_selector(name, p.blocks[-1])
        for q in exts[i + 1:]:
            vq = model.apply_selector(name, q.blocks[-1])
            if pairs_equal(p, q) != (vp == vq):
                return False
    return True


def search_inner_A4star(
    model: SpaceModel,
    s: Approx,
    x: Approx,
    coloring_of_ext: Callable[[Approx], object],
    config: Config = DEFAULT_CONFIG,
) -> tuple[Approx, str]:
    """Find a reduct in [s, x] and a selector whose kernel on the
    surviving extensions equals the kernel of the given coloring.

    Witness preference: more extensions first, then least reduct key;
    selectors are tried in family order, so the drop component wins
    whenever the coloring is constant on the survivors.
    """
    if not model.extensions(s, x):
        raise DomainError("the segment has no extensions inside the reduct")
    colors: dict[Approx, object] = {}

    def equal(p: Approx, q: Approx) -> bool:
        if p not in colors:
            colors[p] = coloring_of_ext(p)
        if q not in colors:
            colors[q] = coloring_of_ext(q)
        return colors[p] == colors[q]

    family = inner_family(model)
    ranked = sorted(
        model.basic(s, x),
        key=lambda y: (-len(model.extensions(s, y)), y.key),
    )
    for y in ranked:
        exts = model.extensions(s, y)
        if len(exts) < config.mu:
            continue
        for name in family:
            if _kernel_matches(equal, model, name, exts):
                return y, name
    raise NoInnerWitnessError(
        "no selector in the family matches the kernel on any admissible reduct"
    )


# ---------------------------------------------------------------------------
# Verification and the brute-force oracle.

def verify_canonical(
    model: SpaceModel,
    x: Approx,
    phi: InnerMap,
    coloring: Coloring,
) -> tuple[bool, Optional[tuple[Approx, Approx]]]:
    """Check f(s) = f(t) iff phi(s) = phi(t) over the front members
    realizable in x; returns the first violating pair in member order."""
    members = [m for m in coloring.front.members if model.leq_fin(m, x)]
    values = [eval_inner(model, phi, m) for m in members]
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            same_f = coloring(members[i]) == coloring(members[j])
            if same_f != (values[i] == values[j]):
                return False, (members[i], members[j])
    return True, None


def oracle_canonize(
    model: SpaceModel,
    coloring: Coloring,
    config: Config = DEFAULT_CONFIG,
) -> tuple[tuple[Approx, InnerMap], ...]:
    """Exhaust reducts and selector tuples; keep every verifying pair of
    maximal witness size. Reducts carrying no member are skipped, their
    verification would be vacuous."""
    family = inner_family(model)
    arity = coloring.front.arity()
    reducts = model.all_reducts()
    total = len(reducts) * len(family) ** arity
    if total > config.max_kernels:
        raise BudgetExceededError(
            f"oracle would enumerate {total} candidates, budget is {config.max_kernels}"
        )
    hits: list[tuple[Approx, InnerMap]] = []
    best = -1
    for x in sorted(reducts, key=witness_sort_key):
        if len(x) < best:
            break
        if not any(model.leq_fin(m, x) for m in coloring.front.members):
            continue
        for names in itertools.product(family, repeat=arity):
            phi = InnerMap(names)
            ok, _ = verify_canonical(model, x, phi, coloring)
            if not ok:
                continue
            if len(x) > best:
                hits = [(x, phi)]
                best = len(x)
            elif len(x) == best:
                hits.append((x, phi))
    return tuple(sorted(hits, key=lambda h: (h[0].key, h[1].selectors)))


def _member_kernel(values: list) -> tuple[tuple[int, ...], ...]:
    groups: dict = {}
    for i, v in enumerate(values):
        groups.setdefault(v, []).append(i)
    return tuple(sorted(tuple(g) for g in groups.values()))


def oracle_agreement(
    model: SpaceModel,
    coloring: Coloring,
    witness: Approx,
    phi: InnerMap,
    oracle_hits: tuple[tuple[Approx, InnerMap], ...],
) -> dict:
    """Cross-validation: the engine witness must verify under the same
    check the oracle uses, and some maximal oracle witness must induce
    the same kernel on the members the two witnesses share."""
    ok, cex = verify_canonical(model, witness, phi, coloring)
    agree = False
    common_best = 0
    if ok:
        for x_o, phi_o in oracle_hits:
            common = [
                m for m in coloring.front.members
                if model.leq_fin(m, witness) and model.leq_fin(m, x_o)
            ]
            ours = _member_kernel([eval_inner(model, phi, m) for m in common])
            theirs = _member_kernel([eval_inner(model, phi_o, m) for m in common])
            if ours == theirs:
                agree = True
                common_best = max(common_best, len(common))
    return {
        "agrees": bool(ok and agree and oracle_hits),
        "reverified": ok,
        "oracle_witnesses": len(oracle_hits),
        "oracle_max_size": len(oracle_hits[0][0]) if oracle_hits else 0,
        "common_members": common_best,
    }


# ---------------------------------------------------------------------------
# The pipeline.

@dataclass
class CanonReport:
    witness: Approx
    phi: InnerMap
    verdict: str
    oracle_agreement: Optional[dict]
    stats: dict

    def to_json(self) -> dict:
        from .reportio import approx_to_json, to_jsonable

        return {
            "witness": approx_to_json(self.witness),
            "phi": self.phi.to_json(),
            "verdict": self.verdict,
            "oracle_agreement": to_jsonable(self.oracle_agreement),
            "stats": to_jsonable(self.stats),
        }


def _mixing_relation(engine: MixingEngine, z0: Approx):
    def mixed(p: Approx, q: Approx) -> bool:
        return engine.decide(z0, p, q).kind == MIXES

    return mixed


def _position_oracle(
    engine: MixingEngine, z0: Approx, pos: int, name: str
) -> PropertyOracle:
    """Single-form fuse property: on the candidate reduct, the selector's
    kernel on the surviving hat extensions of every length-pos base
    matches the mixing kernel. Bases that fell out of the hat are
    exempt."""
    model = engine.model
    member_set = set(engine.members)
    mixed = _mixing_relation(engine, z0)

    def live_exts(a: Approx, y: Approx) -> tuple[Approx, ...]:
        return tuple(
            p for p in model.extensions(a, y)
            if engine.in_hat(p) and engine.count(y, p) >= 1
        )

    def check(a: Approx, y: Approx) -> bool:
        if engine.count(y, a) < 1:
            return True
        return _kernel_matches(mixed, model, name, live_exts(a, y))

    def domain(a: Approx) -> bool:
        return len(a) == pos and engine.in_hat(a) and a not in member_set

    return PropertyOracle(check=check, domain=domain, name=f"selector[{pos}]={name}")


def _holds_everywhere(
    engine: MixingEngine, oracle: PropertyOracle, pos: int, z: Approx
) -> bool:
    model = engine.model
    bases = [
        a for a in engine.hat_below(z)
        if len(a) == pos and a not in set(engine.members)
    ]
    return all(oracle.check(a, z) for a in bases)


def _assemble(engine: MixingEngine, z0: Approx, config: Config) -> tuple[Approx, InnerMap]:
    """Uniformize one selector per position below the deciding reduct.

    A selector that matches the mixing kernel on the current reduct as
    it stands wins in family order; shrinking is a last resort, and then
    the selector keeping the largest reduct wins, so the drop component
    cannot steal a position by fusing down to a vacuous witness.
    """
    model = engine.model
    family = inner_family(model)
    arity = engine.front.arity()
    z = z0
    names: list[str] = []
    for pos in range(arity):
        chosen = None
        for name in family:
            oracle = _position_oracle(engine, z0, pos, name)
            if _holds_everywhere(engine, oracle, pos, z):
                chosen = name
                break
        if chosen is None:
            fused = []
            for rank, name in enumerate(family):
                oracle = _position_oracle(engine, z0, pos, name)
                try:
                    z_new = fuse(model, oracle, start=z, config=config)
                except FusionExhaustedError:
                    continue
                fused.append((-len(z_new), rank, z_new, name))
            if not fused:
                raise NoInnerWitnessError(
                    f"no selector fuses at position {pos} below the deciding reduct"
                )
            fused.sort(key=lambda item: item[:2])
            _, _, z, chosen = fused[0]
        names.append(chosen)
    return z, InnerMap(tuple(names))


def _grow(model: SpaceModel, coloring: Coloring, x: Approx, phi: InnerMap) -> Approx:
    """Largest reduct above x on which the map still verifies."""
    best = x
    for g in sorted(model.all_reducts(), key=witness_sort_key):
        if len(g) <= len(best):
            break
        if not model.leq_fin(x, g):
            continue
        ok, _ = verify_canonical(model, g, phi, coloring)
        if ok:
            best = g
            break
    return best


def _fallback(model: SpaceModel, coloring: Coloring) -> Optional[tuple[Approx, InnerMap]]:
    """Deterministic last resort: a member taken as its own reduct
    carries that member alone, where the all-drop map verifies."""
    arity = coloring.front.arity()
    phi = InnerMap(("drop",) * arity)
    for m in coloring.front.members:
        x = Approx(m.blocks)
        if not model.leq_fin(x, model.full):
            continue
        ok, _ = verify_canonical(model, x, phi, coloring)
        if ok:
            return x, phi
    return None


def canonize(
    model: SpaceModel,
    coloring: Coloring,
    config: Config = DEFAULT_CONFIG,
    oracle: bool = False,
) -> CanonReport:
    """Find a witness reduct and an inner map canonical for the coloring.

    Stage A fuses to a reduct deciding every interior pair, stage B
    uniformizes one selector per position against the mixing kernel,
    then the map is verified and the witness grown while verification
    holds. Failed attempts retry from the next smaller deciding start;
    when retries are exhausted the deterministic single-member fallback
    keeps the result honest and the stats record the degradation.
    """
    engine = MixingEngine(model, coloring, config)
    stats: dict = {
        "selector_family": list(inner_family(model)),
        "arity": coloring.front.arity(),
        "retries_used": 0,
        "fallback": False,
    }
    if model.kind == "tree":
        stats["family_limited"] = True

    try:
        z0 = fuse(model, engine.decide_property(), start=coloring.front.scope, config=config)
    except FusionExhaustedError as err:
        z0 = err.partial if err.partial is not None else coloring.front.scope
        stats["stage_a_exhausted"] = True
    stats["deciding_reduct_size"] = len(z0)

    starts = [z0] + [
        y for y in sorted(model.sub_reducts(z0), key=witness_sort_key)
        if y != z0 and engine.front_below(y)
    ]
    witness = phi = None
    for attempt, start in enumerate(starts[: config.retries + 1]):
        stats["retries_used"] = attempt
        try:
            cand_x, cand_phi = _assemble(engine, start, config)
        except (NoInnerWitnessError, FusionExhaustedError):
            continue
        ok, _ = verify_canonical(model, cand_x, cand_phi, coloring)
        if ok:
            witness, phi = cand_x, cand_phi
            break
    if witness is None:
        fb = _fallback(model, coloring)
        if fb is None:
            report = CanonReport(
                witness=coloring.front.scope,
                phi=InnerMap(("drop",) * coloring.front.arity()),
                verdict="undecided",
                oracle_agreement=None,
                stats=stats,
            )
            return report
        witness, phi = fb
        stats["fallback"] = True

    witness = _grow(model, coloring, witness, phi)
    ok, cex = verify_canonical(model, witness, phi, coloring)
    stats["witness_size"] = len(witness)
    stats["members_on_witness"] = sum(
        1 for m in coloring.front.members if model.leq_fin(m, witness)
    )
    agreement = None
    if oracle:
        hits = oracle_canonize(model, coloring, config)
        agreement = oracle_agreement(model, coloring, witness, phi, hits)
        stats["witness_is_max_size"] = (
            bool(hits) and len(witness) == len(hits[0][0])
        )
    return CanonReport(
        witness=witness,
        phi=phi,
        verdict="pass" if ok else "undecided",
        oracle_agreement=agreement,
        stats=stats,
    )


# ---------------------------------------------------------------------------
# Lemma battery over a canonization result.

def lemma_suite(
    model: SpaceModel,
    coloring: Coloring,
    witness: Approx,
    phi: InnerMap,
    config: Config = DEFAULT_CONFIG,
) -> dict:
    """Finite checks of the structure lemmas on a canonization witness.

    equal-values-mix: equal phi values on interior segments force mixing
    (separation is a violation, lost pools are counted as gaps).
    prefix-freeness: over distinct members no phi value is a strict
    prefix of another; the same event on interior segments is reported
    as information only, the finite empty tuple is a prefix of
    everything. color-respects-phi: f-equal members get phi-equal
    values. class-uniqueness: at one depth, extensions of a common base
    mixed with one segment share a selector value.
    """
    engine = MixingEngine(model, coloring, config)
    members = [m for m in coloring.front.members if model.leq_fin(m, witness)]
    member_set = set(members)
    hat_w = [a for a in engine.hat_below(witness)]
    interior = [a for a in hat_w if a not in member_set]
    values: dict[Approx, tuple] = {a: eval_inner(model, phi, a) for a in hat_w}

    mix_violations = []
    mix_gaps = 0
    for i, s in enumerate(hat_w):
        for t in hat_w[i + 1:]:
            if values[s] != values[t]:
                continue
            verdict = engine.decide(witness, s, t)
            if verdict.kind == SEPARATES:
                mix_violations.append({"s": s, "t": t})
            elif verdict.kind == UNDECIDED:
                mix_gaps += 1

    prefix_violations = []
    for s in members:
        for t in members:
            if s is t:
                continue
            vs, vt = values[s], values[t]
            if len(vs) < len(vt) and vt[: len(vs)] == vs:
                prefix_violations.append({"s": s, "t": t})
    prefix_info = 0
    for s in interior:
        for t in hat_w:
            if s is t:
                continue
            vs, vt = values[s], values[t]
            if len(vs) < len(vt) and vt[: len(vs)] == vs:
                prefix_info += 1

    color_violations = []
    for i, s in enumerate(members):
        for t in members[i + 1:]:
            if coloring(s) == coloring(t) and values[s] != values[t]:
                color_violations.append({"s": s, "t": t})

    class_violations = []
    for base in interior:
        pos = len(base)
        if pos >= len(phi.selectors):
            continue
        exts = [
            p for p in model.extensions(base, witness)
            if engine.in_hat(p) and engine.count(witness, p) >= 1
        ]
        for t in hat_w:
            for i, p in enumerate(exts):
                dp = model.depth(witness, p)
                if model.depth(witness, t) != dp:
                    continue
                if engine.decide(witness, t, p).kind != MIXES:
                    continue
                for q in exts[i + 1:]:
                    if model.depth(witness, q) != dp:
                        continue
                    if engine.decide(witness, t, q).kind != MIXES:
                        continue
                    vp = model.apply_selector(phi.selectors[pos], p.blocks[-1])
                    vq = model.apply_selector(phi.selectors[pos], q.blocks[-1])
                    if vp != vq:
                        class_violations.append({"t": t, "p": p, "q": q})

    verdict = "pass" if not (
        mix_violations or prefix_violations or color_violations or class_violations
    ) else "fail"
    first = (mix_violations or prefix_violations or color_violations or class_violations)
    return {
        "check": "lemma_suite",
        "verdict": verdict,
        "witness": first[0] if first else None,
        "coverage": 1.0,
        "equal_values_mix": {"violations": mix_violations, "undecided_pairs": mix_gaps},
        "prefix_freeness": {
            "violations": prefix_violations,
            "interior_prefix_events": prefix_info,
        },
        "color_respects_phi": {"violations": color_violations},
        "class_uniqueness": {"violations": class_violations},
    }


# ---------------------------------------------------------------------------
# Maximality and the recoloring probe.

def maximality_check(
    model: SpaceModel,
    coloring: Coloring,
    phi: InnerMap,
    phi_alt: InnerMap,
    config: Config = DEFAULT_CONFIG,
) -> dict:
    """Below a common verifying reduct, find one where the alternative
    map's component outputs sit inside the reference map's outputs.

    The common reduct must carry at least two members: verification on
    a single member holds for every map, so admitting it would let any
    alternative through the precondition."""
    common = None
    for y in sorted(model.all_reducts(), key=witness_sort_key):
        carried = sum(1 for m in coloring.front.members if model.leq_fin(m, y))
        if carried < 2:
            continue
        ok1, _ = verify_canonical(model, y, phi, coloring)
        ok2, _ = verify_canonical(model, y, phi_alt, coloring)
        if ok1 and ok2:
            common = y
            break
    if common is None:
        raise DomainError(
            "the maps have no common verifying reduct; rejected as input"
        )
    for z in sorted(model.sub_reducts(common), key=witness_sort_key):
        members = [m for m in coloring.front.members if model.leq_fin(m, z)]
        if not members:
            continue
        contained = all(
            set(model.apply_selector(phi_alt.selectors[i], m.blocks[i]))
            <= set(model.apply_selector(phi.selectors[i], m.blocks[i]))
            for m in members
            for i in range(min(len(m), len(phi.selectors), len(phi_alt.selectors)))
        )
        if contained:
            return {
                "check": "maximality", "verdict": "pass", "witness": z,
                "coverage": 1.0, "common": common,
            }
    return {
        "check": "maximality", "verdict": "undecided", "witness": None,
        "coverage": 1.0, "common": common,
    }


def property_p_check(
    model: SpaceModel,
    coloring: Coloring,
    config: Config = DEFAULT_CONFIG,
) -> dict:
    """Recoloring probe on equal-length interior pairs: when no
    extension of one segment mixes into a selector-equal extension of
    the other anywhere below a reduct, that reduct must hide a
    separating one."""
    engine = MixingEngine(model, coloring, config)
    z0 = fuse(model, engine.decide_property(), start=coloring.front.scope, config=config)
    member_set = set(engine.members)
    interior = [a for a in engine.hat_below(z0) if a not in member_set]
    mixed = _mixing_relation(engine, z0)
    violations = []
    skipped = 0
    checked = 0
    for i, s in enumerate(interior):
        for t in interior[i + 1:]:
            if len(s) != len(t):
                continue
            try:
                _, sel_s = search_inner_A4star(
                    model, s, z0,
                    lambda p: _mix_class(engine, z0, s, p), config,
                )
                _, sel_t = search_inner_A4star(
                    model, t, z0,
                    lambda p: _mix_class(engine, z0, t, p), config,
                )
            except (DomainError, NoInnerWitnessError):
                skipped += 1
                continue
            for z in model.sub_reducts(z0):
                t_exts = [
                    p for p in model.extensions(t, z)
                    if engine.in_hat(p) and engine.count(z, p) >= 1
                ]
                s_exts = [
                    q for q in model.extensions(s, z)
                    if engine.in_hat(q) and engine.count(z, q) >= 1
                ]
                if not t_exts or not s_exts:
                    continue
                any_hit = any(
                    mixed(p, q)
                    and model.apply_selector(sel_t, p.blocks[-1])
                    == model.apply_selector(sel_s, q.blocks[-1])
                    for p in t_exts
                    for q in s_exts
                )
                if any_hit:
                    continue
                checked += 1
                separated = any(
                    engine.decide(zp, s, t).kind == SEPARATES
                    for zp in model.sub_reducts(z)
                )
                if not separated:
                    violations.append({"s": s, "t": t, "z": z})
    return {
        "check": "property_p",
        "verdict": "pass" if not violations else "fail",
        "witness": violations[0] if violations else None,
        "coverage": 1.0,
        "stats": {"zero_recolorings_checked": checked, "pairs_skipped": skipped},
        "violations": violations,
    }


def _mix_class(engine: MixingEngine, z0: Approx, base: Approx, p: Approx):
    """Class label of an extension under the mixing relation at z0:
    the least extension of the base it mixes with."""
    model = engine.model
    for q in model.extensions(base, z0):
        if engine.in_hat(q) and engine.decide(z0, p, q).kind == MIXES:
            return q.key
    return p.key


def avoidance_check(model: SpaceModel, s: Approx, x: Approx) -> dict:
    """With at least two extensions, each one can be dodged by a reduct
    in [s, x]; a single extension leaves only the trivial basic set."""
    exts = model.extensions(s, x)
    if len(exts) < 2:
        return {
            "check": "avoidance", "verdict": "pass", "witness": None,
            "coverage": 1.0, "single_extension": len(exts) == 1,
        }
    for v in exts:
        dodge = None
        for y in model.basic(s, x):
            if v not in set(model.extensions(s, y)) and model.extensions(s, y):
                dodge = y
                break
        if dodge is None:
            return {
                "check": "avoidance", "verdict": "fail", "witness": v,
                "coverage": 1.0, "single_extension": False,
            }
    return {
        "check": "avoidance", "verdict": "pass", "witness": None,
        "coverage": 1.0, "single_extension": False,
    }
