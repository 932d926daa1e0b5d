"""Write a random all-integer packing MIP in free MPS format.

usage: make_synthetic_mps.py N M SEED OUT [NCONT]

Coefficients are drawn from 1..9, right-hand sides from 2N..4N and costs
from -9..-3. tests/data/synthetic_6x6.mps is `make_synthetic_mps.py 6 6 1`.
"""
import random
import sys


def main():
    n, m, seed, out = int(sys.argv[1]), int(sys.argv[2]), int(sys.argv[3]), sys.argv[4]
    ncont = int(sys.argv[5]) if len(sys.argv) > 5 else 0
    rng = random.Random(seed)
    a = [[rng.randint(1, 9) for _ in range(n + ncont)] for _ in range(m)]
    b = [rng.randint(2 * n, 4 * n) for _ in range(m)]
    c = [-rng.randint(3, 9) for _ in range(n + ncont)]

    lines = ["NAME          SYNTH", "ROWS", " N  COST"] + [f" L  R{i + 1}" for i in range(m)]
    lines += ["COLUMNS", "    MARKER                 'MARKER'                 'INTORG'"]
    for j in range(n + ncont):
        if j == n:
            lines.append("    MARKER                 'MARKER'                 'INTEND'")
        name = f"X{j + 1}" if j < n else f"Y{j - n + 1}"
        lines.append(f"    {name} COST {c[j]}")
        for i in range(m):
            lines.append(f"    {name} R{i + 1} {a[i][j]}")
    if ncont == 0:
        lines.append("    MARKER                 'MARKER'                 'INTEND'")
    lines.append("RHS")
    for i in range(m):
        lines.append(f"    RHS R{i + 1} {b[i]}")
    lines.append("ENDATA")
    with open(out, "w") as f:
        f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
