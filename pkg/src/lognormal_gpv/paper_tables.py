"""Reference values: the cloud-seeding summaries and the size/power tables.

Table rows are transcribed from a multi-row layout; the n1/n2 blocks are
aligned by their vertical position (see README).  Counts are rejections out
of 10 000 replicates for methods (a), (b), (c); mu2 is 0 throughout.
"""

from .distributions import LogSummary
from .simulation import Scenario

RAINFALL_SEEDED = LogSummary(n=26, ybar=5.134, s2=2.46)
RAINFALL_UNSEEDED = LogSummary(n=26, ybar=3.990, s2=2.60)
RAINFALL_PVALUES = {"gpv_a": 0.0779, "km_b": 0.0747, "zscore_c": 0.0599}

PAPER_REPS = 10_000

# (n1, n2, mu1, sigma1_sq, sigma2_sq, count_a, count_b, count_c)
_SIZE_ROWS = [
    (4, 4, 1, 2, 4, 421, 436, 1091),
    (4, 4, 0, 3, 3, 344, 405, 367),
    (4, 4, 5, 2, 12, 464, 510, 2168),
    (4, 4, 0, 12, 12, 392, 391, 112),
    (10, 10, 1, 2, 4, 612, 603, 895),
    (10, 10, 0, 3, 3, 546, 581, 432),
    (10, 10, 5, 2, 12, 515, 552, 1433),
    (10, 10, 0, 12, 12, 538, 538, 386),
    (25, 25, 0, 1, 1, 512, 524, 614),
    (25, 25, 0, 5, 5, 521, 522, 516),
    (25, 25, 0, 10, 10, 486, 531, 446),
    (25, 25, 0, 100, 100, 521, 531, 396),
    (25, 25, 2, 4, 8, 538, 520, 828),
    (25, 25, 4, 8, 16, 492, 493, 851),
    (40, 25, 0, 1, 1, 391, 467, 506),
    (40, 25, 0, 5, 5, 412, 425, 491),
    (40, 25, 0, 10, 10, 459, 416, 512),
    (25, 40, 0, 1, 1, 382, 376, 364),
    (25, 40, 0, 5, 5, 394, 373, 244),
    (25, 40, 0, 10, 10, 435, 412, 199),
    (40, 25, 5, 2, 12, 521, 510, 1061),
    (25, 40, 5, 2, 12, 312, 341, 586),
    (40, 40, 8, 4, 20, 536, 492, 932),
    (40, 40, 14, 4, 32, 513, 546, 922),
    (100, 25, 0, 1, 1, 451, 473, 664),
    (100, 25, 0, 5, 5, 374, 379, 714),
    (100, 25, 0, 10, 10, 396, 388, 720),
    (25, 100, 0, 1, 1, 482, 464, 295),
]

_POWER_ROWS = [
    (4, 4, 0, 12, 4, 1523, 1496, 364),
    (4, 4, 3, 2, 4, 1261, 1204, 3832),
    (4, 4, 0, 20, 4, 2610, 2601, 334),
    (4, 4, 4, 1, 1, 5753, 5772, 9621),
    (10, 10, 0, 12, 4, 4136, 4089, 2334),
    (10, 10, 0, 20, 4, 6941, 6903, 4562),
    (10, 10, 3, 2, 4, 2961, 3114, 5173),
    (10, 10, 4, 1, 1, 9931, 9942, 9990),
    (25, 25, 1, 1, 1, 8370, 8345, 8917),
    (25, 25, 1, 5, 5, 1916, 1843, 2081),
    (25, 25, 0, 4, 2, 3564, 3521, 3157),
    (25, 25, 1, 10, 10, 1126, 1123, 1250),
    (25, 25, 0, 9, 7, 1314, 1360, 1225),
    (25, 25, 0, 4, 1, 7411, 7390, 6854),
    (40, 25, 1, 1, 1, 8392, 8324, 9036),
    (40, 25, 1, 5, 5, 2023, 2025, 2736),
    (40, 25, 1, 10, 10, 1173, 1123, 1492),
    (25, 40, 1, 1, 1, 9194, 9135, 9401),
    (25, 40, 1, 5, 5, 2243, 2307, 2159),
    (25, 40, 1, 10, 10, 1120, 1145, 784),
    (40, 25, 1, 5, 4, 8836, 8814, 4649),
    (40, 25, 1, 10, 9, 1831, 1734, 2263),
    (25, 40, 1, 5, 4, 4464, 4482, 4955),
    (25, 40, 1, 10, 9, 1956, 1893, 1493),
    (100, 25, 1, 1, 1, 8834, 8762, 9512),
    (100, 25, 1, 5, 5, 1856, 1932, 3364),
    (100, 25, 1, 10, 10, 942, 913, 1825),
    (25, 100, 1, 1, 1, 9984, 9913, 9893),
]


def _expand(rows):
    out = []
    for n1, n2, mu1, s1, s2, a, b, c in rows:
        out.append((Scenario(n1, n2, float(mu1), 0.0, float(s1), float(s2)),
                    {"gpv_a": a, "km_b": b, "zscore_c": c}))
    return out


TABLE2 = _expand(_SIZE_ROWS)
TABLE3 = _expand(_POWER_ROWS)

# rows whose alignment is unambiguous; used as acceptance anchors
TABLE2_ANCHORS = (0, 8)
TABLE3_ANCHORS = (7,)
