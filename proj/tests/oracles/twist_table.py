#!/usr/bin/env python3
"""Regenerates tests/fixtures/twist_selmer.csv with PARI/GP (via cypari).

dim Sel_2(E^d/Q) = R + s + dim E(Q)[2], where ellrank returns [r, R, s, L].
Not run by ctest; the CSV it writes is pinned in the repository.
"""
import sys
from cypari import pari

CURVES = {
    "158.a1": [1, 1, 0, -3, 1],
    "158.b1": [1, 0, 1, -5217, -145452],
    "32.a3": [0, 0, 0, -1, 0],
    "92-toy": [0, 0, 0, -1, 1],
    "37.a1": [0, 0, 1, -1, 0],
}
BOUND = int(sys.argv[1]) if len(sys.argv) > 1 else 50


def sel2(a, d):
    disc = d if d % 4 == 1 else 4 * d
    if d == 1:
        E = pari("ellinit(%s)" % a)
    else:
        E = pari("ellinit(elltwist(ellinit(%s), %d))" % (a, disc))
    r = pari("ellrank")(E)
    g = pari("(E)->x^3+E.b2*x^2+8*E.b4*x+16*E.b6")(E)
    t = {0: 0, 1: 1, 3: 2}[len(pari("(g)->nfroots(,g)")(g))]
    return int(r[1]) + int(r[2]) + t


if __name__ == "__main__":
    print("label,d,dim")
    for label, a in CURVES.items():
        for m in range(1, BOUND + 1):
            for d in (m, -m):
                if not pari("issquarefree")(abs(d)):
                    continue
                print("%s,%d,%d" % (label, d, sel2(a, d)), flush=True)
