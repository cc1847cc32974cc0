"""Regenerate the CSV/JSONL fixtures under tests/fixtures (deterministic)."""

import datetime as dt
import json
import math
import pathlib
import random

ROOT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures"
TRAIN_BARS = 120
TEST_BARS = 253  # 252 steps


def business_days(start, n):
    out, d = [], start
    while len(out) < n:
        if d.weekday() < 5:
            out.append(d)
        d += dt.timedelta(days=1)
    return out


def write_csv(path, days, closes, rng):
    rows = ["timestamp,open,high,low,close,volume"]
    prev = closes[0]
    for day, c in zip(days, closes):
        o = round(prev * (1 + rng.uniform(-0.004, 0.004)), 4)
        h = round(max(o, c) * (1 + rng.uniform(0.0005, 0.01)), 4)
        lo = round(min(o, c) * (1 - rng.uniform(0.0005, 0.01)), 4)
        v = int(rng.uniform(5e5, 2e6))
        rows.append(f"{day.isoformat()},{o:.4f},{h:.4f},{lo:.4f},{c:.4f},{v}")
        prev = c
    path.write_text("\n".join(rows) + "\n")


def main():
    rng = random.Random(20240501)
    days = business_days(dt.date(2021, 1, 4), TRAIN_BARS + TEST_BARS)

    # AAA: test split goes from exactly 100 to exactly 121 over 252 steps.
    train = [80.0]
    for _ in range(TRAIN_BARS - 1):
        train.append(train[-1] * math.exp(rng.gauss(0.001, 0.012)))
    test = []
    for i in range(TEST_BARS):
        base = 100.0 * 1.21 ** (i / 252)
        wiggle = 0.0 if i in (0, TEST_BARS - 1) else 0.02 * math.sin(i / 6.0)
        test.append(base * (1 + wiggle))
    closes = [round(c, 4) for c in train + test]
    closes[TRAIN_BARS] = 100.0
    closes[-1] = 121.0
    write_csv(ROOT / "data" / "AAA.csv", days, closes, rng)

    for sym, seed, drift in (("BBB", 7, 0.0004), ("CCC", 11, -0.0002)):
        r = random.Random(seed)
        c = [50.0]
        for _ in range(len(days) - 1):
            c.append(c[-1] * math.exp(r.gauss(drift, 0.015)))
        write_csv(ROOT / "data" / f"{sym}.csv", days, [round(x, 4) for x in c], r)

    # Scores for every test day; one missing cell exercises the mask path.
    r = random.Random(3)
    rows = ["timestamp,AAA,BBB,CCC"]
    for i, day in enumerate(days[TRAIN_BARS:]):
        cells = [f"{r.gauss(0, 0.01):.6f}" for _ in range(3)]
        if i == 40:
            cells[2] = ""
        rows.append(day.isoformat() + "," + ",".join(cells))
    (ROOT / "predictions.csv").write_text("\n".join(rows) + "\n")

    news = []
    for i, day in enumerate(days[TRAIN_BARS - 3:TRAIN_BARS + 8]):
        news.append({"timestamp": day.isoformat() + "T13:30:00Z", "symbol": "AAA",
                     "title": f"AAA update {i}", "content": f"Quarterly note number {i} for AAA."})
    (ROOT / "news.jsonl").write_text("\n".join(json.dumps(n) for n in news) + "\n")
    print("split date", days[TRAIN_BARS].isoformat(), "last", days[-1].isoformat())


if __name__ == "__main__":
    main()
