#!/usr/bin/env python3
"""Writes the synthetic sample corpus in data/maps (octile .map format)."""
import random
import sys
from pathlib import Path


def write(path, rows):
    h, w = len(rows), len(rows[0])
    with open(path, "w", newline="\n") as f:
        f.write(f"type octile\nheight {h}\nwidth {w}\nmap\n")
        for r in rows:
            f.write("".join(r) + "\n")


def city(size, rng):
    g = [["." for _ in range(size)] for _ in range(size)]
    y = 4
    while y < size - 4:
        bh = rng.randint(14, 40)
        x = 4
        while x < size - 4:
            bw = rng.randint(14, 40)
            for yy in range(y, min(y + bh, size - 4)):
                for xx in range(x, min(x + bw, size - 4)):
                    g[yy][xx] = "@"
            # courtyards and alleys break up some blocks
            if rng.random() < 0.35:
                cx, cy = x + bw // 2, y + bh // 2
                for yy in range(y, min(y + bh, size - 4)):
                    if 0 <= cx < size:
                        g[yy][cx] = "."
                for xx in range(x, min(x + bw, size - 4)):
                    if 0 <= cy < size:
                        g[cy][xx] = "."
            x += bw + rng.randint(3, 8)
        y += bh + rng.randint(3, 8)
    for _ in range(size * 2):
        x, y = rng.randrange(size), rng.randrange(size)
        if g[y][x] == ".":
            g[y][x] = "T"
    return g


def arena(w, h, rng):
    g = [["." for _ in range(w)] for _ in range(h)]
    for x in range(w):
        g[0][x] = g[h - 1][x] = "@"
    for y in range(h):
        g[y][0] = g[y][w - 1] = "@"
    for _ in range(12):
        x, y = rng.randrange(3, w - 8), rng.randrange(3, h - 8)
        ch = rng.choice("@TWS")
        for yy in range(y, y + rng.randint(2, 6)):
            for xx in range(x, x + rng.randint(2, 6)):
                g[yy][xx] = ch
    return g


def rooms(w, h, rng):
    g = [["." for _ in range(w)] for _ in range(h)]
    for x in range(0, w, 12):
        for y in range(h):
            g[y][x] = "@"
        for gap in range(3, h, 12):
            g[gap][x] = "."
    for y in range(0, h, 12):
        for x in range(w):
            g[y][x] = "@"
        for gap in range(6, w, 12):
            g[y][gap] = "."
    for _ in range(w * h // 40):
        x, y = rng.randrange(w), rng.randrange(h)
        if g[y][x] == "." and rng.random() < 0.5:
            g[y][x] = "T"
    return g


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "data/maps")
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(2016)
    write(out / "city_512.map", city(512, rng))
    write(out / "arena_64.map", arena(64, 64, rng))
    write(out / "rooms_96x48.map", rooms(96, 48, rng))


if __name__ == "__main__":
    main()
