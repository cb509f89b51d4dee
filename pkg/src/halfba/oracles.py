"""Independent reference implementations used to cross-check the fast paths.

The Reed-Solomon oracle here shares no code with halfba.rs or halfba.gf16:
field arithmetic is shift-and-xor multiplication (no tables), interpolation
is Lagrange, and decoding is brute-force enumeration of error subsets.  It
is orders of magnitude slower and only suitable for small parameters, which
is the point: agreement between the two implementations is evidence neither
has a structural bug.

Protocol-level checkers (exhaustive binary graded consensus enumeration and
the value-reduction lemma harness) live here as well so the CLI can expose
them; they drive the real machines through the real engine.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .values import Bits

_MODULUS = 0x1100B


def _omul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a & 0x10000:
            a ^= _MODULUS
    return r


def _opow(a: int, e: int) -> int:
    r = 1
    while e:
        if e & 1:
            r = _omul(r, a)
        a = _omul(a, a)
        e >>= 1
    return r


def _oinv(a: int) -> int:
    if a == 0:
        raise ZeroDivisionError
    return _opow(a, (1 << 16) - 2)


def _opoly_mul(p: list[int], q: list[int]) -> list[int]:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] ^= _omul(a, b)
    return out


def _opoly_eval(coeffs: list[int], x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = _omul(acc, x) ^ c
    return acc


def _olagrange(xs: list[int], ys: list[int]) -> list[int]:
    """Ascending coefficients of the unique polynomial through (xs, ys)."""
    k = len(xs)
    coeffs = [0] * k
    for i in range(k):
        basis = [1]
        denom = 1
        for j in range(k):
            if j == i:
                continue
            basis = _opoly_mul(basis, [xs[j], 1])
            denom = _omul(denom, xs[i] ^ xs[j])
        scale = _omul(ys[i], _oinv(denom))
        for d, c in enumerate(basis):
            coeffs[d] ^= _omul(c, scale)
    return coeffs


def _ounframe(elements: list[int], k: int) -> Bits | None:
    """Independent re-statement of the framing layout for cross-checks."""
    total_bits = 16 * len(elements)
    if total_bits < 32:
        return None
    acc = 0
    for e in elements:
        acc = (acc << 16) | e
    length = acc >> (total_bits - 32)
    if 32 + length > total_bits:
        return None
    if -(-(length + 32) // (16 * k)) != len(elements) // k:
        return None
    tail = total_bits - 32 - length
    value = (acc >> tail) & ((1 << length) - 1)
    if acc & ((1 << tail) - 1):
        return None
    return Bits(length, value)


@dataclass(frozen=True)
class OracleSymbol:
    index: int
    elements: tuple[int, ...]


def rs_subset_decode(k: int, r: int, symbols: list[OracleSymbol]) -> list[Bits]:
    """All decodable payloads within error budget r, by exhaustive search.

    Enumerates every subset of up to r positions as the hypothetical error
    set, interpolates each lane on the first k surviving symbols, and keeps
    the candidate when every surviving symbol lies on the interpolated
    polynomials.  With len(symbols) >= k + 2r the result has at most one
    entry (unique decoding distance), which callers may assert.
    """
    m = len(symbols)
    if m < k + 2 * r:
        raise ValueError("need at least k + 2r symbols")
    lanes = len(symbols[0].elements)
    if any(len(s.elements) != lanes for s in symbols):
        raise ValueError("oracle requires uniform element counts")
    found: list[Bits] = []
    seen: set[tuple[int, ...]] = set()
    for e in range(r + 1):
        for bad in itertools.combinations(range(m), e):
            badset = set(bad)
            good = [i for i in range(m) if i not in badset]
            use = good[:k]
            chunk_rows: list[list[int]] = []
            ok = True
            for lane in range(lanes):
                xs = [symbols[i].index for i in use]
                ys = [symbols[i].elements[lane] for i in use]
                coeffs = _olagrange(xs, ys)
                for i in good[k:]:
                    if _opoly_eval(coeffs, symbols[i].index) != symbols[i].elements[lane]:
                        ok = False
                        break
                if not ok:
                    break
                chunk_rows.append(coeffs + [0] * (k - len(coeffs)))
            if not ok:
                continue
            flat = tuple(chunk_rows[lane][c] for c in range(k) for lane in range(lanes))
            if flat in seen:
                continue
            seen.add(flat)
            payload = _ounframe(list(flat), k)
            if payload is not None:
                found.append(payload)
    return found


def rs_encode_reference(payload: Bits, num_symbols: int, k: int) -> list[OracleSymbol]:
    """Independent encoder: frame, split into lanes, evaluate by Horner."""
    header = 32
    elems_per_chunk = -(-(payload.length + header) // (16 * k))
    total_bits = 16 * k * elems_per_chunk
    acc = (payload.length << (total_bits - 32)) | (
        payload.value << (total_bits - 32 - payload.length)
    )
    flat = [(acc >> (total_bits - 16 * (i + 1))) & 0xFFFF for i in range(k * elems_per_chunk)]
    out = []
    for idx in range(1, num_symbols + 1):
        elems = []
        for lane in range(elems_per_chunk):
            coeffs = [flat[c * elems_per_chunk + lane] for c in range(k)]
            elems.append(_opoly_eval(coeffs, idx))
        out.append(OracleSymbol(idx, tuple(elems)))
    return out


# --- oracle suite runners (shared by the CLI and the acceptance tests) ---


@dataclass
class SuiteReport:
    name: str
    trials: int
    failures: list[str]

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        status = "pass" if self.ok else f"FAIL ({len(self.failures)} counterexamples)"
        return f"oracle {self.name}: {self.trials} trials, {status}"


def rs_oracle(trials: int = 10_000, agreement_trials: int = 1_000, seed: int = 0) -> SuiteReport:
    """Randomized recovery trials plus brute-force decoder agreement."""
    from .rs import Symbol, rs_decode, rs_encode

    rng = random.Random(seed)
    failures: list[str] = []
    for trial in range(trials):
        k = rng.randint(1, 8)
        n = rng.randint(k, 16)
        r = rng.randint(0, (n - k) // 2)
        payload = Bits.random(rng, rng.randint(0, 256))
        cw = rs_encode(payload, n, k)
        received = list(cw.symbols)
        for i in rng.sample(range(n), rng.randint(0, r)):
            elems = list(received[i].elements)
            elems[rng.randrange(len(elems))] ^= rng.randrange(1, 1 << 16)
            received[i] = Symbol.from_elements(received[i].index, elems)
        got = rs_decode(k, r, received)
        if got != payload:
            failures.append(f"recovery trial {trial}: n={n} k={k} r={r} L={payload.length}")
            if len(failures) > 5:
                break
    for trial in range(agreement_trials):
        k = rng.randint(1, 3)
        r = rng.randint(0, 2)
        n = k + 2 * r + rng.randint(0, 2)
        payload = Bits.random(rng, rng.randint(0, 48))
        cw = rs_encode(payload, n, k)
        received = list(cw.symbols)
        for i in rng.sample(range(n), rng.randint(0, min(n, r + 2))):
            elems = list(received[i].elements)
            elems[rng.randrange(len(elems))] ^= rng.randrange(1, 1 << 16)
            received[i] = Symbol.from_elements(received[i].index, elems)
        got = rs_decode(k, r, received)
        cands = rs_subset_decode(k, r, [OracleSymbol(s.index, s.elements) for s in received])
        want = cands[0] if cands else None
        if len(cands) > 1 or got != want:
            failures.append(f"agreement trial {trial}: n={n} k={k} r={r} got={got} want={want}")
            if len(failures) > 10:
                break
    return SuiteReport("rs", trials + agreement_trials, failures)


def bgc_oracle(n_max: int = 7, equivocate_seeds: int = 3) -> SuiteReport:
    """Exhaustive small-n check of the one-bit graded consensus properties.

    Enumerates every fault placement up to the tolerated count, silent and
    (seeded) equivocating strategies per faulty process, and every proposal
    pattern; verifies strong validity, consistency, safety, and grades.
    """
    from .binary_gc import BgcMachine
    from .engine import ProcessLog, run_machines
    from .faults import FaultPlan, StrategySpec
    from .halving import default_tolerance

    failures: list[str] = []
    trials = 0
    options = [StrategySpec("silent")] + [
        StrategySpec("equivocate", s) for s in range(equivocate_seeds)
    ]
    for n in range(4, n_max + 1):
        t = default_tolerance(n)
        members = tuple(range(n))
        placements = [
            combo
            for size in range(t + 1)
            for combo in itertools.combinations(range(n), size)
        ]
        for placement in placements:
            for specs in itertools.product(options, repeat=len(placement)):
                plan = FaultPlan(tuple(zip(placement, specs)))
                seed = sum(s.param or 0 for s in specs)
                for pattern in range(1 << n):
                    bits = [(pattern >> p) & 1 for p in range(n)]
                    machines = {
                        p: BgcMachine(p, members, t, bits[p], "b", ProcessLog())
                        for p in members
                    }
                    run_machines(machines, 2, plan, seed=seed)
                    trials += 1
                    correct = [p for p in members if p not in plan.faulty]
                    decisions = {p: machines[p].decision() for p in correct}
                    label = f"n={n} plan={plan.describe()} pattern={bits}"
                    correct_bits = {bits[p] for p in correct}
                    if len(correct_bits) == 1:
                        (b,) = correct_bits
                        if any(d.bit != b or d.grade != 1 for d in decisions.values()):
                            failures.append(f"strong validity: {label} -> {decisions}")
                    for p, d in decisions.items():
                        if d.grade == 1 and any(e.bit != d.bit for e in decisions.values()):
                            failures.append(f"consistency: {label} -> {decisions}")
                            break
                    if any(d.bit not in correct_bits for d in decisions.values()):
                        failures.append(f"safety: {label} -> {decisions}")
                    if len(failures) > 10:
                        return SuiteReport("bgc", trials, failures)
    return SuiteReport("bgc", trials, failures)


def _split_script(n, t, faulty, target_value, target_group, tag):
    """Rushing adversary for the reduction: help one clique, starve the rest.

    Sends pairs consistent with target_value to the clique, garbage to
    everyone else, reports success, never flips.  This is the worst case for
    the retrievability bound: the clique can be as small as t + 1.
    """
    from .messages import BitPayload, Message, PairPayload
    from .reduce_cool import data_count
    from .rs import rs_encode, zero_symbol

    members = tuple(range(n))
    cw = rs_encode(target_value, n, data_count(t))
    elems = cw.symbols[0].num_elements

    def script(ctx):
        out = []
        for f in faulty:
            if ctx.round == 0:
                for j in members:
                    if j == f:
                        continue
                    if j in target_group:
                        pair = PairPayload(cw.symbols[j], cw.symbols[f])
                    else:
                        pair = PairPayload(zero_symbol(j + 1, elems), zero_symbol(f + 1, elems))
                    out.append(Message(f, j, tag + ".pair", pair))
            elif ctx.round == 1:
                out.extend(
                    Message(f, j, tag + ".ind", BitPayload(1)) for j in members if j != f
                )
        return out

    return script


def cool_trial(n: int, seed: int):
    """One adversarial reduction run; returns what the lemma checks need."""
    from .engine import ProcessLog, run_machines
    from .faults import FaultPlan, StrategySpec
    from .halving import default_tolerance
    from .reduce_cool import CoolMachine

    rng = random.Random(f"cool|{n}|{seed}")
    t = default_tolerance(n)
    members = tuple(range(n))
    f = rng.randint(0, t)
    faulty = tuple(sorted(rng.sample(range(n), f)))
    correct = [p for p in members if p not in faulty]
    length = 48

    shared = Bits.random(rng, length)
    unanimous = rng.random() < 0.3
    proposals = {}
    group: tuple[int, ...] = ()
    if unanimous:
        proposals = {p: shared for p in members}
    else:
        group_size = rng.randint(0, len(correct))
        group = tuple(sorted(rng.sample(correct, group_size)))
        for p in members:
            proposals[p] = shared if p in group else Bits.random(rng, length)

    use_script = not unanimous and f > 0 and rng.random() < 0.7
    if use_script:
        plan = FaultPlan(
            script=_split_script(n, t, faulty, shared, set(group), "c"),
            script_pids=faulty,
        )
    elif f:
        names = ["silent", "equivocate", "garbage", "liar"]
        plan = FaultPlan(tuple((p, StrategySpec(rng.choice(names))) for p in faulty))
    else:
        plan = FaultPlan()

    machines = {p: CoolMachine(p, members, t, proposals[p], "c", ProcessLog()) for p in members}
    run_machines(machines, 4, plan, seed=seed)
    outputs = {p: machines[p].output() for p in correct}
    return proposals, faulty, t, outputs


def cool_oracle(sizes=(7, 13), seeds: int = 1_000, base_seed: int = 0) -> SuiteReport:
    """Randomized adversarial check of the reduction's four guarantees."""
    failures: list[str] = []
    trials = 0
    for n in sizes:
        for s in range(seeds):
            seed = base_seed + s
            proposals, faulty, t, outputs = cool_trial(n, seed)
            trials += 1
            label = f"n={n} seed={seed} faulty={faulty}"
            survivors = {o.survivor for o in outputs.values() if o.survivor is not None}
            for p, o in outputs.items():
                if o.survivor is not None and o.survivor != proposals[p]:
                    failures.append(f"safety: {label} p={p}")
            if any(o.vote == 1 for o in outputs.values()) and len(survivors) > 1:
                failures.append(f"non-duplicity: {label} survivors={len(survivors)}")
            for p, o in outputs.items():
                if o.vote == 1:
                    holders = [
                        q
                        for q in outputs
                        if q in o.reporting_success and outputs[q].survivor is not None
                    ]
                    if len(holders) < t + 1:
                        failures.append(f"retrievability: {label} p={p} holders={len(holders)}")
            if len({proposals[p] for p in outputs}) == 1:
                if any(
                    o.survivor != proposals[p] or o.vote != 1 or o.success != 1
                    for p, o in outputs.items()
                ):
                    failures.append(f"obligation: {label}")
            if len(failures) > 10:
                return SuiteReport("cool", trials, failures)
    return SuiteReport("cool", trials, failures)
