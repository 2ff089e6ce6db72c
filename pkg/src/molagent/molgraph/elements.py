"""Element data: symbols, average atomic weights and default valences."""

from __future__ import annotations

# (symbol, average atomic weight, allowed valences or None when unchecked)
_TABLE = [
    ("H", 1.008, (1,)), ("He", 4.003, (0,)), ("Li", 6.941, (1,)), ("Be", 9.012, (2,)),
    ("B", 10.812, (3,)), ("C", 12.011, (4,)), ("N", 14.007, (3,)), ("O", 15.999, (2,)),
    ("F", 18.998, (1,)), ("Ne", 20.18, (0,)), ("Na", 22.99, (1,)), ("Mg", 24.305, (2,)),
    ("Al", 26.982, (3,)), ("Si", 28.086, (4,)), ("P", 30.974, (3, 5)), ("S", 32.067, (2, 4, 6)),
    ("Cl", 35.453, (1,)), ("Ar", 39.948, (0,)), ("K", 39.098, (1,)), ("Ca", 40.078, (2,)),
    ("Sc", 44.956, None), ("Ti", 47.867, None), ("V", 50.944, None), ("Cr", 51.996, None),
    ("Mn", 54.938, None), ("Fe", 55.845, None), ("Co", 58.933, None), ("Ni", 58.693, None),
    ("Cu", 63.546, None), ("Zn", 65.39, None), ("Ga", 69.723, (3,)), ("Ge", 72.61, (4,)),
    ("As", 74.922, (3, 5)), ("Se", 78.96, (2, 4, 6)), ("Br", 79.904, (1,)), ("Kr", 83.8, (0,)),
    ("Rb", 85.468, (1,)), ("Sr", 87.62, (2,)), ("Y", 88.906, None), ("Zr", 91.224, None),
    ("Nb", 92.906, None), ("Mo", 95.94, None), ("Tc", 98.0, None), ("Ru", 101.07, None),
    ("Rh", 102.906, None), ("Pd", 106.42, None), ("Ag", 107.868, None), ("Cd", 112.412, None),
    ("In", 114.818, (3,)), ("Sn", 118.711, (2, 4)), ("Sb", 121.76, (3, 5)), ("Te", 127.6, (2, 4, 6)),
    ("I", 126.904, (1, 3, 5)), ("Xe", 131.29, (0, 2, 4, 6)), ("Cs", 132.905, (1,)), ("Ba", 137.328, (2,)),
    ("La", 138.906, None), ("Ce", 140.116, None), ("Pr", 140.908, None), ("Nd", 144.24, None),
    ("Pm", 145.0, None), ("Sm", 150.36, None), ("Eu", 151.964, None), ("Gd", 157.25, None),
    ("Tb", 158.925, None), ("Dy", 162.5, None), ("Ho", 164.93, None), ("Er", 167.26, None),
    ("Tm", 168.934, None), ("Yb", 173.04, None), ("Lu", 174.967, None), ("Hf", 178.49, None),
    ("Ta", 180.948, None), ("W", 183.84, None), ("Re", 186.207, None), ("Os", 190.23, None),
    ("Ir", 192.217, None), ("Pt", 195.078, None), ("Au", 196.967, None), ("Hg", 200.59, None),
    ("Tl", 204.383, None), ("Pb", 207.2, (2, 4)), ("Bi", 208.98, (3, 5)), ("Po", 209.0, (2, 4, 6)),
    ("At", 210.0, (1, 3, 5)), ("Rn", 222.0, (0,)), ("Fr", 223.0, (1,)), ("Ra", 226.0, (2,)),
    ("Ac", 227.0, None), ("Th", 232.038, None), ("Pa", 231.036, None), ("U", 238.029, None),
    ("Np", 237.0, None), ("Pu", 244.0, None), ("Am", 243.0, None), ("Cm", 247.0, None),
    ("Bk", 247.0, None), ("Cf", 251.0, None), ("Es", 252.0, None), ("Fm", 257.0, None),
    ("Md", 258.0, None), ("No", 259.0, None), ("Lr", 262.0, None), ("Rf", 267.0, None),
]

SYMBOLS: dict[int, str] = {0: "*"}
ATOMIC_NUMBERS: dict[str, int] = {"*": 0}
WEIGHTS: dict[int, float] = {0: 0.0}
VALENCES: dict[int, tuple[int, ...] | None] = {0: None}

for _z, (_sym, _w, _val) in enumerate(_TABLE, start=1):
    SYMBOLS[_z] = _sym
    ATOMIC_NUMBERS[_sym] = _z
    WEIGHTS[_z] = _w
    VALENCES[_z] = _val

# Atoms that may appear outside brackets.
ORGANIC_SUBSET = frozenset({"B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I"})
AROMATIC_ORGANIC = frozenset({"b", "c", "n", "o", "p", "s"})
# Lowercase symbols accepted inside brackets.
AROMATIC_BRACKET = frozenset({"b", "c", "n", "o", "p", "s", "se", "as", "te"})

# Main-group blocks used for the isoelectronic valence rule on charged atoms.
_P_BLOCK = (
    frozenset(range(5, 10)),
    frozenset(range(13, 18)),
    frozenset(range(31, 36)),
    frozenset(range(49, 54)),
)

# Pauling electronegativities, used to decide exocyclic double-bond behaviour.
ELECTRONEGATIVITY = {
    1: 2.20, 5: 2.04, 6: 2.55, 7: 3.04, 8: 3.44, 9: 3.98, 14: 1.90, 15: 2.19,
    16: 2.58, 17: 3.16, 33: 2.18, 34: 2.55, 35: 2.96, 52: 2.10, 53: 2.66,
}


def symbol(z: int) -> str:
    return SYMBOLS[z]


def allowed_valences(z: int, charge: int = 0) -> tuple[int, ...] | None:
    """Allowed valences for element ``z`` carrying ``charge``.

    Charged p-block atoms take the valences of their isoelectronic neutral
    neighbour (N+ behaves like C, O- like F, and so on). Returns None when
    the element is not valence-checked.
    """
    if charge == 0:
        return VALENCES.get(z)
    for block in _P_BLOCK:
        if z in block:
            shifted = z - charge
            return VALENCES.get(shifted) if shifted in block else None
    return None
