"""166-key MACCS structural fingerprint and Tanimoto similarity."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from ..molgraph.model import Molecule
from .match import count_matches, matched_roots
from .smarts import Pattern, SmartsError, compile_pattern

N_BITS = 167


class FingerprintVersionError(ValueError):
    """Fingerprints built from different key tables were compared."""


@dataclass(frozen=True)
class Fingerprint:
    """Set bits of a 167-position key fingerprint (position 0 unused)."""

    on_bits: frozenset[int]
    key_table_version: str

    def __contains__(self, k: int) -> bool:
        return k in self.on_bits

    def __getitem__(self, k: int) -> int:
        if not 0 <= k < N_BITS:
            raise IndexError(k)
        return int(k in self.on_bits)

    def __len__(self) -> int:
        return N_BITS

    def to_list(self) -> list[int]:
        return [int(k in self.on_bits) for k in range(N_BITS)]

    def popcount(self) -> int:
        return len(self.on_bits)


@dataclass(frozen=True)
class MaccsKey:
    index: int
    smarts: str
    min_count: int
    implemented: bool
    note: str
    patterns: tuple[Pattern, ...] = ()
    rooted: bool = False  # patterns are alternatives anchored at their first atom

    @property
    def display(self) -> str:
        """Key text as shown in explanation tables."""
        if self.min_count > 1:
            return f"{self.smarts} (count > {self.min_count - 1})"
        return self.smarts

    def count(self, m: Molecule, limit: int | None = None) -> int:
        if not self.implemented:
            return 0
        if self.rooted:
            roots: set[int] = set()
            for p in self.patterns:
                roots |= matched_roots(p, m)
            return len(roots)
        return count_matches(self.patterns[0], m, limit=limit)


@dataclass(frozen=True)
class KeyTable:
    version: str
    keys: dict[int, MaccsKey]

    @property
    def unimplemented(self) -> tuple[int, ...]:
        """Manifest of keys that are always 0."""
        return tuple(k for k, key in sorted(self.keys.items()) if not key.implemented)

    def __getitem__(self, k: int) -> MaccsKey:
        return self.keys[k]


def _split_alternatives(smarts: str) -> list[str] | None:
    """Split ``[$(A),$(B)]`` into ``[A, B]``; None if not of that form."""
    if not (smarts.startswith("[$(") and smarts.endswith(")]")):
        return None
    body = smarts[1:-1]
    out, depth, start = [], 0, None
    i = 0
    while i < len(body):
        ch = body[i]
        if body.startswith("$(", i) and depth == 0:
            start = i + 2
            depth = 1
            i += 2
            continue
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                out.append(body[start:i])
                i += 1
                if i < len(body) and body[i] != ",":
                    return None
        i += 1
    return out if depth == 0 and out else None


def parse_key_table(text: str) -> KeyTable:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# maccs-keys "):
        raise ValueError("key table is missing its version header")
    version = lines[0].split()[-1]
    version = f"maccs166-{version}"
    keys: dict[int, MaccsKey] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) < 4:
            raise ValueError(f"key table line {lineno}: expected at least 4 fields")
        index, min_count, implemented, smarts = int(fields[0]), int(fields[1]), fields[2] == "1", fields[3]
        note = fields[4] if len(fields) > 4 else ""
        patterns: tuple[Pattern, ...] = ()
        rooted = False
        if implemented:
            alts = _split_alternatives(smarts)
            try:
                if alts is not None:
                    patterns = tuple(compile_pattern(a) for a in alts)
                    rooted = True
                else:
                    patterns = (compile_pattern(smarts, min_count),)
            except SmartsError as exc:
                raise ValueError(f"key {index} is flagged implemented but does not compile: {exc}") from exc
        keys[index] = MaccsKey(index, smarts, min_count, implemented, note, patterns, rooted)
    return KeyTable(version, keys)


@lru_cache(maxsize=1)
def key_table() -> KeyTable:
    """The embedded key table."""
    text = resources.files(__package__).joinpath("data/maccs_keys.txt").read_text(encoding="utf-8")
    return parse_key_table(text)


def maccs_fingerprint(m: Molecule, table: KeyTable | None = None) -> Fingerprint:
    table = table or key_table()
    bits = set()
    for k, key in table.keys.items():
        if key.implemented and key.count(m, limit=key.min_count) >= key.min_count:
            bits.add(k)
    return Fingerprint(frozenset(bits), table.version)


def tanimoto(a: Fingerprint, b: Fingerprint) -> float:
    """|a∩b| / |a∪b|; two empty fingerprints score 1.0."""
    if a.key_table_version != b.key_table_version:
        raise FingerprintVersionError(
            f"cannot compare {a.key_table_version} with {b.key_table_version}"
        )
    union = a.on_bits | b.on_bits
    if not union:
        return 1.0
    return len(a.on_bits & b.on_bits) / len(union)


def fingerprint_from_bits(bits, version: str | None = None) -> Fingerprint:
    """Build a Fingerprint from explicit set positions (1..166)."""
    bits = frozenset(int(b) for b in bits)
    if any(not 1 <= b < N_BITS for b in bits):
        raise ValueError("fingerprint positions must lie in 1..166")
    return Fingerprint(bits, version or key_table().version)
