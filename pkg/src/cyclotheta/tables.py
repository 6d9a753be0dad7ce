"""Published reference values used by the golden checks.

Exponent entries are the powers of xi_a listed as generators of H_1/S_2; they
are compared against computed orders but not trusted (see ``verify``).
"""

from __future__ import annotations

# l -> p -> exponents for (xi_2,) or (xi_2, xi_3); l = 5 at p = 3 lists no generator.
H1S2_EXPONENTS: dict[int, dict[int, tuple[int, ...]]] = {
    5: {
        3: (), 5: (60,), 7: (48,), 11: (30,), 13: (84,), 17: (72,), 19: (18,), 23: (528,),
        29: (848,), 31: (30,), 37: (684,), 41: (120,), 43: (1848,), 47: (2208,), 53: (1404,),
        59: (174,), 61: (60,), 67: (4488,), 71: (210,), 73: (1332,), 79: (78,), 83: (6888,),
        89: (132,), 97: (2352,), 101: (300,),
    },
    7: {
        3: (182, 182), 5: (868, 868), 7: (42, 42), 11: (1330, 1330), 13: (84, 84),
        17: (17192, 34384), 19: (16002, 16002), 23: (12166, 12166), 29: (28, 28),
        31: (69510, 69510), 37: (16884, 16884), 41: (280, 280), 43: (42, 42),
        47: (726754, 726754), 53: (148876, 148876), 59: (1437646, 1437646),
        61: (40740, 40740), 67: (100254, 100254), 71: (70, 70), 73: (226926, 453852),
        79: (164346, 164346), 83: (574, 574), 89: (1233694, 4934776), 97: (672, 672),
        101: (7212100, 7212100),
    },
}

# Claimed F_p-dimension of H_1/S_2 for every tabulated p.
H1S2_DIMENSION: dict[int, dict[int, int]] = {
    5: {p: (0 if p == 3 else 1) for p in H1S2_EXPONENTS[5]},
    7: {p: 2 for p in H1S2_EXPONENTS[7]},
}

# Prime factor sets of |det A_l| for the default family (l = 5 has det 0).
A_DET_PRIME_FACTORS: dict[int, tuple[int, ...]] = {
    3: (2,),
    7: (2,),
    11: (2, 3, 5),
    13: (2, 5),
    17: (2, 7, 17, 43),
    19: (2, 3, 36137),
    23: (2, 3, 11, 13, 29, 89, 241),
    29: (2, 3, 5, 13, 113, 58057291),
    31: (2, 3, 31, 109621, 1216387),
    37: (2, 5, 13, 37, 53, 109, 10138325056259),
    41: (2, 5, 11, 17, 41, 439, 1667, 166013, 203381),
    43: (2, 3, 19, 43, 211, 281345721890371109),
    47: (2, 5, 83, 139, 5323, 178481, 6167669171116393),
    53: (2, 3, 5, 139, 157, 1613, 4889, 1579367, 28153859844430949),
    59: (2, 3, 59, 233, 3033169, 1899468180409634452730252070517),
    61: (2, 5, 11, 13, 41, 1321, 1861, 1142941857599125232990619467569),
    67: (2, 3, 67, 683, 12739, 20857, 513881, 1858283767, 986862333655510350967),
    71: (2, 5, 7, 31, 79, 127, 1129, 79241, 122921, 68755411, 1190061671, 3087543529906501),
    73: (2, 7, 73, 79, 89, 16747, 134353, 5754557119657, 1150806776867233, 1190899),
    79: (2, 5, 7, 13, 29, 53, 1427, 3847, 8191, 121369, 377911, 1842497, 51176893, 357204083,
         32170088152177),
    83: (2, 3, 13, 17387, 279405653, 43059261982072584626787705301351, 8831418697, 758583423553),
    89: (2, 17, 23, 89, 113, 313629821584641896139082338756559409, 4504769, 118401449, 22482210593),
}

A7 = [[-1, -1, -1, 1], [-2, -4, -2, 0], [0, -10, -4, 2], [-3, -13, -11, 9]]
A_DETS = {5: 0, 7: 64, 11: 9600, 13: -102400}
SUBMATRIX_DETS = {(11, 3): 1760, (13, 5): -3968, (5, 3): -8, (7, 5): 64}
M_RANKS = {(11, 3): 5, (13, 5): 6}
