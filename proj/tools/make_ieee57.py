#!/usr/bin/env python3
"""Generate cases/ieee57.json from the IEEE 57-bus branch and load tables.

Lines are treated as lossless with susceptance 1/x (p.u., 100 MVA base).
Parallel circuits are merged by summing susceptances. All susceptances are
multiplied by SUSCEPTANCE_SCALE (see README, "Bundled cases").
"""
import json
import sys

SUSCEPTANCE_SCALE = 0.25

# (from, to, r, x)
BRANCHES = [
    (1, 2, 0.0083, 0.028), (2, 3, 0.0298, 0.085), (3, 4, 0.0112, 0.0366),
    (4, 5, 0.0625, 0.132), (4, 6, 0.043, 0.148), (6, 7, 0.02, 0.102),
    (6, 8, 0.0339, 0.173), (8, 9, 0.0099, 0.0505), (9, 10, 0.0369, 0.1679),
    (9, 11, 0.0258, 0.0848), (9, 12, 0.0648, 0.295), (9, 13, 0.0481, 0.158),
    (13, 14, 0.0132, 0.0434), (13, 15, 0.0269, 0.0869), (1, 15, 0.0178, 0.091),
    (1, 16, 0.0454, 0.206), (1, 17, 0.0238, 0.108), (3, 15, 0.0162, 0.053),
    (4, 18, 0.0, 0.555), (4, 18, 0.0, 0.43), (5, 6, 0.0302, 0.0641),
    (7, 8, 0.0139, 0.0712), (10, 12, 0.0277, 0.1262), (11, 13, 0.0223, 0.0732),
    (12, 13, 0.0178, 0.058), (12, 16, 0.018, 0.0813), (12, 17, 0.0397, 0.179),
    (14, 15, 0.0171, 0.0547), (18, 19, 0.461, 0.685), (19, 20, 0.283, 0.434),
    (21, 20, 0.0, 0.7767), (21, 22, 0.0736, 0.117), (22, 23, 0.0099, 0.0152),
    (23, 24, 0.166, 0.256), (24, 25, 0.0, 1.182), (24, 25, 0.0, 1.23),
    (24, 26, 0.0, 0.0473), (26, 27, 0.165, 0.254), (27, 28, 0.0618, 0.0954),
    (28, 29, 0.0418, 0.0587), (7, 29, 0.0, 0.0648), (25, 30, 0.135, 0.202),
    (30, 31, 0.326, 0.497), (31, 32, 0.507, 0.755), (32, 33, 0.0392, 0.036),
    (34, 32, 0.0, 0.953), (34, 35, 0.052, 0.078), (35, 36, 0.043, 0.0537),
    (36, 37, 0.029, 0.0366), (37, 38, 0.0651, 0.1009), (37, 39, 0.0239, 0.0379),
    (36, 40, 0.03, 0.0466), (22, 38, 0.0192, 0.0295), (11, 41, 0.0, 0.749),
    (41, 42, 0.207, 0.352), (41, 43, 0.0, 0.412), (38, 44, 0.0289, 0.0585),
    (15, 45, 0.0, 0.1042), (14, 46, 0.0, 0.0735), (46, 47, 0.023, 0.068),
    (47, 48, 0.0182, 0.0233), (48, 49, 0.0834, 0.129), (49, 50, 0.0801, 0.128),
    (50, 51, 0.1386, 0.22), (10, 51, 0.0, 0.0712), (13, 49, 0.0, 0.191),
    (29, 52, 0.1442, 0.187), (52, 53, 0.0762, 0.0984), (53, 54, 0.1878, 0.232),
    (54, 55, 0.1732, 0.2265), (11, 43, 0.0, 0.153), (44, 45, 0.0624, 0.1242),
    (40, 56, 0.0, 1.195), (56, 41, 0.553, 0.549), (56, 42, 0.2125, 0.354),
    (39, 57, 0.0, 1.355), (57, 56, 0.174, 0.26), (38, 49, 0.115, 0.177),
    (38, 48, 0.0312, 0.0482), (9, 55, 0.0, 0.1205),
]

# Active load, MW.
LOAD_MW = {
    1: 55, 2: 3, 3: 41, 5: 13, 6: 75, 8: 150, 9: 121, 10: 5, 12: 377, 13: 18,
    14: 10.5, 15: 22, 16: 43, 17: 42, 18: 27.2, 19: 3.3, 20: 2.3, 23: 6.3,
    25: 6.3, 27: 9.3, 28: 4.6, 29: 17, 30: 3.6, 31: 5.8, 32: 1.6, 33: 3.8,
    35: 6, 38: 14, 41: 6.3, 42: 7.1, 43: 2, 44: 12, 47: 29.7, 49: 18, 50: 21,
    51: 18, 52: 4.9, 53: 20, 54: 4.1, 55: 6.8, 56: 7.6, 57: 6.7,
}

# Dispatch, MW; bus 1 is the slack and absorbs the balance (lossless).
GEN_MW = {2: 0.0, 3: 40.0, 6: 0.0, 8: 450.0, 9: 0.0, 12: 310.0}

# Inertia (s^2) and damping (s) per generator.
GEN_DYN = {
    1: (2.5, 1.0), 2: (2.5, 1.0), 3: (4.0, 1.6), 6: (2.5, 1.0),
    8: (1.5, 0.6), 9: (2.5, 1.0), 12: (2.5, 1.0),
}


def main(path):
    total_load = sum(LOAD_MW.values())
    gen_mw = dict(GEN_MW)
    gen_mw[1] = total_load - sum(GEN_MW.values())

    merged = {}
    for f, t, _r, x in BRANCHES:
        key = (min(f, t), max(f, t))
        merged[key] = merged.get(key, 0.0) + 1.0 / x

    buses = []
    for i in range(1, 58):
        p = (gen_mw.get(i, 0.0) - LOAD_MW.get(i, 0.0)) / 100.0
        bus = {"id": i, "kind": "generator" if i in GEN_DYN else "load",
               "power": round(p, 6)}
        if i in GEN_DYN:
            bus["inertia"], bus["damping"] = GEN_DYN[i]
        buses.append(bus)

    lines = [{"from": f, "to": t,
              "susceptance": round(b * SUSCEPTANCE_SCALE, 10)}
             for (f, t), b in sorted(merged.items())]

    case = {"name": "ieee57", "buses": buses, "lines": lines}
    with open(path, "w") as fh:
        json.dump(case, fh, indent=1)
        fh.write("\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "cases/ieee57.json")
