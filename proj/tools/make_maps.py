#!/usr/bin/env python3
"""Regenerates the shipped map assets under maps/.

Output is deterministic (fixed seed). Each map is checked to have a single
connected free component before it is written.
"""

import random
import sys
from collections import deque
from pathlib import Path


def blank(n):
    return [["." for _ in range(n)] for _ in range(n)]


def simple(n):
    g = blank(n)
    # Two straight barriers, each leaving a gap at one end.
    a, b = n // 3, 2 * n // 3
    for y in range(0, 3 * n // 5):
        g[y][a] = "#"
    for y in range(2 * n // 5, n):
        g[y][b] = "#"
    return g


def sparse(n, rng):
    g = blank(n)
    blocks = n * n // 110
    for _ in range(blocks):
        w, h = rng.randint(1, 3), rng.randint(1, 3)
        x, y = rng.randrange(n - w), rng.randrange(n - h)
        for yy in range(y, y + h):
            for xx in range(x, x + w):
                g[yy][xx] = "#"
    return g


def confined(n, rng):
    g = blank(n)
    room = max(8, n // 6)
    # Wall grid forming rooms, with narrow doors in each wall segment.
    for k in range(room, n - 1, room):
        for i in range(n):
            g[k][i] = "#"
            g[i][k] = "#"
    for k in range(room, n - 1, room):
        for start in range(0, n, room):
            end = min(start + room, n)
            lo, hi = start + 1, end - 2
            if lo > hi:
                continue
            g[k][rng.randint(lo, hi)] = "."
            g[rng.randint(lo, hi)][k] = "."
    # Corridor stubs inside rooms.
    for ry in range(0, n, room):
        for rx in range(0, n, room):
            if rng.random() < 0.5:
                y = ry + room // 2
                for x in range(rx + 2, min(rx + room - 2, n)):
                    if y < n and g[y][x] == ".":
                        g[y][x] = "#"
    return g


def free_components(g):
    n = len(g)
    seen = [[False] * n for _ in range(n)]
    comps = []
    for y in range(n):
        for x in range(n):
            if g[y][x] == "#" or seen[y][x]:
                continue
            comp = []
            q = deque([(x, y)])
            seen[y][x] = True
            while q:
                cx, cy = q.popleft()
                comp.append((cx, cy))
                for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                    nx, ny = cx + dx, cy + dy
                    if 0 <= nx < n and 0 <= ny < n and g[ny][nx] != "#" and not seen[ny][nx]:
                        seen[ny][nx] = True
                        q.append((nx, ny))
            comps.append(comp)
    return comps


def seal_pockets(g):
    # Fill small enclosed pockets so the free space is one component.
    comps = sorted(free_components(g), key=len, reverse=True)
    for comp in comps[1:]:
        for x, y in comp:
            g[y][x] = "#"


def write(path, g):
    comps = free_components(g)
    if len(comps) != 1:
        sys.exit(f"{path}: {len(comps)} free components")
    path.write_text("\n".join("".join(r) for r in g) + "\n")


def main():
    out = Path(__file__).resolve().parent.parent / "maps"
    out.mkdir(exist_ok=True)
    for n, suffix in ((100, ""), (50, "50")):
        rng = random.Random(20240 + n)
        for name, grid in (("simple", simple(n)), ("sparse", sparse(n, rng)), ("confined", confined(n, rng))):
            seal_pockets(grid)
            write(out / f"{name}{suffix}.map", grid)


if __name__ == "__main__":
    main()
