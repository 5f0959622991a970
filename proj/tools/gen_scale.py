"""Writes the 100x100, 20-robot scenario used for plan latency measurements."""
import random
from collections import deque

W = H = 100
N = 20
rng = random.Random(20)
grid = [['.'] * W for _ in range(H)]
for _ in range(60):  # short wall segments
    r, c = rng.randrange(H), rng.randrange(W)
    horizontal = rng.random() < 0.5
    for k in range(rng.randint(5, 20)):
        rr, cc = (r, c + k) if horizontal else (r + k, c)
        if 0 <= rr < H and 0 <= cc < W:
            grid[rr][cc] = '#'

def free(r, c):
    return 0 <= r < H and 0 <= c < W and grid[r][c] == '.'

used = set()
def pick_block():
    while True:
        r, c = rng.randrange(1, H - 3), rng.randrange(1, W - 3)
        cells = {(r + i, c + j) for i in range(2) for j in range(2)}
        halo = {(r + i, c + j) for i in range(-1, 3) for j in range(-1, 3)}
        if all(free(*x) for x in halo) and not (halo & used):
            used.update(halo)
            return sorted(cells)

regions = [pick_block() for _ in range(N)]
starts = []
while len(starts) < N:
    r, c = rng.randrange(H), rng.randrange(W)
    if free(r, c) and (r, c) not in used:
        used.add((r, c))
        starts.append((r, c))

# every start and region cell must be reachable from the first start
seen = {starts[0]}
q = deque([starts[0]])
while q:
    r, c = q.popleft()
    for dr, dc in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        n = (r + dr, c + dc)
        if free(*n) and n not in seen:
            seen.add(n)
            q.append(n)
assert all(s in seen for s in starts) and all(x in seen for reg in regions for x in reg)

out = ["name scale100", "# generated by tools/gen_scale.py", f"size {W} {H}", "sensor_range 3", "seed 20",
       "accepting_target 1", "max_steps 20000"]
out.append("formula F(" + " & ".join(f"p{j}@l{j}" for j in range(1, N + 1)) + ")")
for j, (r, c) in enumerate(starts, 1):
    out.append(f"robot {j} {r} {c}")
for j, cells in enumerate(regions, 1):
    out.append(f"region l{j} " + " ".join(f"{r},{c}" for r, c in cells))
out.append("grid")
out += [''.join(row) for row in grid]
out.append("end")
open("scenarios/scale100.scn", "w").write("\n".join(out) + "\n")
