import numpy as np

from crossalg.cli import check_structure
from crossalg.fixtures import mutate_bundle, random_fixture
from crossalg.io import from_json, to_json

PRIMES = (2, 3, 5)


def fixtures(kind, count, offset=0):
    for s in range(offset, offset + count):
        yield s, random_fixture(kind, s, PRIMES[s % 3])


def mutants(kind, count, start=0):
    """``(seed, component, original, mutant)`` for fixtures with a mutable component."""
    out = []
    s = start
    while len(out) < count:
        obj = random_fixture(kind, s, PRIMES[s % 3])
        d = to_json(obj)
        try:
            comp, m = mutate_bundle(d, np.random.default_rng(10_000 + s))
        except ValueError:
            s += 1
            continue
        out.append((s, comp, obj, from_json(m)))
        s += 1
    return out


def outcome(obj):
    rep = check_structure(obj)
    fails = rep.failures()
    return rep, (fails[0] if fails else None)
