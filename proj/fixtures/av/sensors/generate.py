"""Writes the synthetic sensor curves used by the AV fixture.

The numbers are invented. Shapes follow the usual pattern: detection gets
worse and range error grows with distance, lidars work at night and cameras
do not.
"""
import math
import pathlib

HERE = pathlib.Path(__file__).parent

# name, range m, fn at 0 m, fp per cell, accuracy at 0 m, Hz, latency s,
# cost CHF, mass g, power W, works at night
SENSORS = [
    ("Puck", 100, 0.05, 0.004, 0.03, 10, 0.10, 4000, 830, 8, True),
    ("HDL32E", 100, 0.03, 0.003, 0.02, 10, 0.10, 20000, 1000, 12, True),
    ("HDL64E", 120, 0.02, 0.002, 0.02, 10, 0.10, 75000, 12700, 60, True),
    ("OS032", 50, 0.05, 0.004, 0.03, 20, 0.05, 6000, 430, 18, True),
    ("OS064", 55, 0.04, 0.003, 0.03, 20, 0.05, 12000, 430, 18, True),
    ("OS0128", 60, 0.03, 0.002, 0.03, 20, 0.05, 18000, 430, 18, True),
    ("OS232", 150, 0.05, 0.003, 0.03, 10, 0.10, 16000, 930, 20, True),
    ("OS264", 160, 0.04, 0.002, 0.03, 10, 0.10, 24000, 930, 22, True),
    ("OS2128", 180, 0.03, 0.0015, 0.03, 10, 0.10, 30000, 930, 24, True),
    ("Ace251gm", 80, 0.08, 0.006, 0.30, 30, 0.04, 1200, 90, 3, False),
    ("Ace222gm", 70, 0.10, 0.008, 0.35, 40, 0.04, 900, 90, 3, False),
    ("Ace13gm", 50, 0.12, 0.010, 0.50, 60, 0.03, 500, 80, 2.5, False),
    ("Ace5gm", 40, 0.15, 0.012, 0.60, 60, 0.03, 400, 80, 2.5, False),
    ("Ace15um", 90, 0.10, 0.006, 0.30, 30, 0.04, 700, 85, 3, False),
    ("Flir Pointgrey", 100, 0.07, 0.005, 0.25, 30, 0.05, 1500, 100, 4, False),
    ("Ace1300", 60, 0.12, 0.009, 0.45, 50, 0.03, 600, 80, 2.5, False),
]


def curves(rng, fn0, fp0, acc0, night_penalty=1.0):
    fp, fn, acc = [], [], []
    for d in range(0, 151, 10):
        x = d / rng
        fn.append(min(1.0, fn0 * night_penalty + (1 - fn0) * x**3))
        fp.append(min(1.0, fp0 * (1 + x)))
        acc.append(acc0 * (1 + x * x) if x <= 1 else 50.0)
    return fp, fn, acc


def r(x):
    return f"{x:.6g}"


for name, rng, fn0, fp0, acc0, hz, lat, cost, mass, power, night in SENSORS:
    stem = name.lower().replace(" ", "_")
    fp, fn, acc = curves(rng, fn0, fp0, acc0)
    header = ["distance_m", "fp", "fn", "acc_m"]
    if night:
        fpn, fnn, accn = curves(rng * 0.9, fn0, fp0, acc0, 1.2)
        header += ["fp_night", "fn_night", "acc_night_m"]
    lines = [",".join(header)]
    for i, d in enumerate(range(0, 151, 10)):
        row = [str(d), r(fp[i]), r(fn[i]), r(acc[i])]
        if night:
            row += [r(fpn[i]), r(fnn[i]), r(accn[i])]
        lines.append(",".join(row))
    (HERE / f"{stem}.csv").write_text("\n".join(lines) + "\n")
    meta = [f"name: {name}", f"frequency: {hz}", f"latency: {lat}", f"cost: {cost}", f"mass: {mass}", f"power: {power}"]
    (HERE / f"{stem}.meta").write_text("\n".join(meta) + "\n")
