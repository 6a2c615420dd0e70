"""Reference displays of extremal polynomials, transcribed verbatim.

Each display is a list of (k, coefficient, monomial) with monomial a dict
{variable: power}; the entry contributes coefficient * x^monomial * v_k.
Known misprints are listed separately in ERRATA and are never edited into
the verbatim lists, so a reader can compare the transcription line by line.
"""

from __future__ import annotations

from fractions import Fraction

# rank 2, step 6, dimension 23: P_3
R2S6_P3 = [
    (3, "1", {}),
    (4, "-1", {1: 1}),
    (5, "-1", {2: 1}),
    (6, "1/2", {1: 2}),
    (7, "1", {1: 1, 2: 1}),
    (8, "1/2", {2: 2}),
    (9, "-1/6", {1: 3}),
    (10, "-1/2", {1: 2, 2: 1}),
    (11, "-1/2", {1: 1, 2: 2}),
    (12, "-1/6", {2: 3}),
    (13, "1", {4: 1}),
    (13, "1", {1: 1, 3: 1}),
    (14, "1", {5: 1}),
    (14, "1", {2: 1, 3: 1}),
    (15, "1/24", {1: 4}),
    (16, "1/6", {1: 3, 2: 1}),
    (17, "1/4", {1: 2, 2: 2}),
    (18, "1/6", {1: 1, 3: 2}),
    (19, "1/24", {2: 4}),
    (20, "1", {6: 1}),
    (20, "-1/2", {1: 2, 3: 1}),
    (21, "1", {7: 1}),
    (21, "-1", {1: 1, 2: 1, 3: 1}),
    (22, "1", {8: 1}),
    (22, "-1/2", {2: 2, 3: 1}),
    (23, "1", {2: 1, 4: 1}),
    (23, "-1", {1: 1, 5: 1}),
]

# rank 3, step 4, dimension 32: P_4, P_5, P_6, displayed for v_1 = ... = v_6 = 0
R3S4_HIDDEN_SLOTS = range(1, 7)

R3S4_P4 = [
    (7, "-1", {1: 1}),
    (8, "-1", {2: 1}),
    (9, "-1", {3: 1}),
    (30, "1", {5: 1}),
    (31, "1", {6: 1}),
    (15, "1/2", {1: 2}),
    (16, "1", {1: 1, 2: 1}),
    (17, "1", {1: 1, 3: 1}),
    (18, "1/2", {2: 2}),
    (19, "1", {2: 1, 3: 1}),
    (20, "1/2", {3: 2}),
]

R3S4_P5 = [
    (10, "-1", {1: 1}),
    (11, "-1", {2: 1}),
    (12, "-1", {3: 1}),
    (30, "-1", {4: 1}),
    (32, "1", {6: 1}),
    (21, "1/2", {1: 2}),
    (22, "1", {1: 1, 2: 1}),
    (23, "1", {1: 1, 3: 1}),
    (24, "1/2", {2: 2}),
    (25, "1", {2: 1, 3: 1}),
    (26, "1/2", {3: 2}),
]

R3S4_P6 = [
    (9, "1", {1: 1}),
    (11, "-1", {1: 1}),
    (13, "-1", {2: 1}),
    (14, "-1", {3: 1}),
    (31, "-1", {4: 1}),
    (32, "-1", {5: 1}),
    (17, "-1/2", {1: 2}),
    (22, "1/2", {1: 2}),
    (30, "1", {1: 2}),
    (19, "-1", {1: 1, 2: 1}),
    (24, "1", {1: 1, 2: 1}),
    (31, "1", {1: 1, 2: 1}),
    (20, "-1", {1: 1, 3: 1}),
    (25, "1", {1: 1, 3: 1}),
    (29, "1/2", {3: 2}),
]

# Misprints in the displays.  "remove" entries are dropped, "add" entries are
# appended; each carries the reason it is forced.
ERRATA = {
    "R2S6_P3": {
        "remove": [(18, "1/6", {1: 1, 3: 2})],
        "add": [(18, "1/6", {1: 1, 2: 3})],
        "reason": (
            "x_1 x_3^2 has weighted degree 5 > 4 = s - d(3); "
            "X_18 = [X_11, X_2] = [X_3, X_1, X_2, X_2, X_2], whose coefficient is x_1 x_2^3 / 3!"
        ),
    },
    "R3S4_P6": {
        "remove": [],
        "add": [(27, "1/2", {2: 2}), (28, "1", {2: 1, 3: 1})],
        "reason": (
            "X_27 = [X_6, X_2, X_2] and X_28 = [X_6, X_2, X_3] are Hall elements with "
            "6 preceding them in the prefix order, so v_27, v_28 must appear"
        ),
    },
}

GOLDEN = {
    "R2S6_P3": ((2, 6), 3, R2S6_P3, ()),
    "R3S4_P4": ((3, 4), 4, R3S4_P4, tuple(R3S4_HIDDEN_SLOTS)),
    "R3S4_P5": ((3, 4), 5, R3S4_P5, tuple(R3S4_HIDDEN_SLOTS)),
    "R3S4_P6": ((3, 4), 6, R3S4_P6, tuple(R3S4_HIDDEN_SLOTS)),
}


def _key(n: int, k: int, mono: dict) -> tuple:
    alpha = [0] * n
    for var, power in mono.items():
        alpha[var - 1] += power
    return (tuple(alpha), k)


def display_table(entries, n: int) -> dict:
    """(alpha, k) -> Fraction, summing repeated keys and dropping zeros."""
    table: dict = {}
    for k, c, mono in entries:
        key = _key(n, k, mono)
        table[key] = table.get(key, Fraction(0)) + Fraction(c)
    return {key: c for key, c in table.items() if c}


def corrected_entries(name: str) -> list:
    entries = list(GOLDEN[name][2])
    fix = ERRATA.get(name)
    if fix:
        for item in fix["remove"]:
            entries.remove(item)
        entries.extend(fix["add"])
    return entries
