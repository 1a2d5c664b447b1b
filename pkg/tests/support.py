"""Shared fixtures for the test-suite that are not part of the library."""
from threegroups.semantics import Lex, LexModel


class CorruptedLex(LexModel):
    """LEX with L replaced by Q x {0}, which misses 1 = (0, 1): a negative control."""

    tag = "lex-corrupted"

    def in_l(self, v: Lex) -> bool:
        return v.lo == 0


def std_floor_scan(w: int, k: int, m: int) -> int:
    """Least integer >= w congruent to k mod m, by walking upwards."""
    x = w
    while (x - k) % m:
        x += 1
    return x


def residue_scan(c0, c1):
    """CRT by scanning all residues below lcm(m0, m1); None if none fits."""
    (k0, m0), (k1, m1) = c0, c1
    big = m0 * m1
    hits = [r for r in range(big) if r % m0 == k0 and r % m1 == k1]
    if not hits:
        return None
    period = hits[1] - hits[0] if len(hits) > 1 else big
    return hits[0], period




# -- acceptance bookkeeping ----------------------------------------------

ACCEPTANCE: dict[int, dict] = {}


def record(n: int, title: str, ok: bool, detail: str) -> None:
    """Merge one check into criterion ``n``; a criterion passes only if every part does."""
    entry = ACCEPTANCE.setdefault(n, {"title": title, "ok": True, "details": []})
    entry["ok"] = entry["ok"] and ok
    entry["details"].append(detail)
