"""Shared fixtures, most importantly the acceptance suite.

The suite is the fixed population quantified over by the acceptance
tests: 100 seeded random systems (20 each at n = 2, 5, 10, 20, 50, with
sector bound and damping floor cycling through fixed ladders) plus the
full damped-wave grid (n in {3, 7, 15}, gamma in {0, 0.2, 0.5}, d in
{0.5, 1, 4}).  Certificates are optimized once per member and shared
session-wide; members where a variant certifies nothing record the
failure instead.
"""

from dataclasses import dataclass

import pytest

from decaycert import (
    Certificate,
    Decomposition,
    NoValidCertificate,
    SearchConfig,
    Variant,
    decompose,
    gen_damped_wave,
    gen_random_valid,
    optimize_rate,
)

SECTOR_LADDER = (0.05, 0.1, 0.2, 0.5, 1.0)
BETA_LADDER = (0.5, 1.0, 2.0, 4.0, 8.0)
RANDOM_SIZES = (2, 5, 10, 20, 50)
WAVE_SIZES = (3, 7, 15)
WAVE_GAMMAS = (0.0, 0.2, 0.5)
WAVE_DAMPINGS = (0.5, 1.0, 4.0)

# cheaper than the library default, still past the point where the
# refinement stops mattering for validity
SUITE_SEARCH = SearchConfig(grid=32, refine_starts=1, refine_sweeps=2, refine_iters=20)


@dataclass
class SuiteMember:
    name: str
    dec: Decomposition
    certs: dict  # variant value -> Certificate (valid or not)
    failures: dict  # variant value -> NoValidCertificate


def _optimize_member(name, dec) -> SuiteMember:
    certs, failures = {}, {}
    for variant in (Variant.THEOREM1, Variant.THEOREM2):
        try:
            certs[variant.value] = optimize_rate(dec, variant, SUITE_SEARCH)
        except NoValidCertificate as exc:
            failures[variant.value] = exc
    return SuiteMember(name=name, dec=dec, certs=certs, failures=failures)


def suite_pairs():
    """The deterministic (name, OperatorPair) population."""
    members = []
    idx = 0
    for n in RANDOM_SIZES:
        for rep in range(20):
            sector = SECTOR_LADDER[idx % len(SECTOR_LADDER)]
            beta_min = BETA_LADDER[(idx // len(SECTOR_LADDER)) % len(BETA_LADDER)]
            pair = gen_random_valid(n, sector, beta_min, seed=9000 + idx)
            members.append((f"random-n{n}-r{rep}", pair))
            idx += 1
    for n in WAVE_SIZES:
        for gamma in WAVE_GAMMAS:
            for d in WAVE_DAMPINGS:
                pair = gen_damped_wave(n, gamma, d)
                members.append((f"wave-n{n}-g{gamma}-d{d}", pair))
    return members


@pytest.fixture(scope="session")
def acceptance_suite():
    return [_optimize_member(name, decompose(pair)) for name, pair in suite_pairs()]


def valid_certs(member: SuiteMember):
    return [c for c in member.certs.values() if c.valid]
