#!/usr/bin/env python3
"""Regenerates tests/fixtures/field_sunits.csv with PARI/GP (via cypari).

For each field F: disc, class number, and dim F(S,2) = r1 + r2 + #S_F + rk2(Cl_S(F))
for S = {}, {2}, {2,3}, {2,3,5,7}. Not run by ctest.
"""
from cypari import pari

POLYS = ["x^2+1", "x^2-2", "x^2+5", "x^2-10", "x^2+23", "x^3-2", "x^3-x-1", "x^3-x+1", "x^3-3*x+1",
         "x^3+x^2-2*x-1", "x^3-x^2-4*x+2", "x^3-7", "x^3-x^2+3*x+6", "x^3+2*x+11"]
SETS = [[], [2], [2, 3], [2, 3, 5, 7]]
DIM = pari("(b,S)->my(L=List());foreach(S,p,foreach(idealprimedec(b,p),P,listput(L,P)));"
           "my(cs=bnfsunit(b,Vec(L))[5][2]);b.r1+b.r2+#L+sum(i=1,#cs,cs[i]%2==0)")

if __name__ == "__main__":
    print("poly,disc,h,dim_S0,dim_S2,dim_S23,dim_S2357")
    for s in POLYS:
        bnf = pari("bnfinit(%s,1)" % s)
        disc = int(pari("(n)->n.disc")(pari("nfinit(%s)" % s)))
        h = int(pari("(b)->b.no")(bnf))
        dims = [str(int(DIM(bnf, pari(str(S))))) for S in SETS]
        print(",".join([s, str(disc), str(h)] + dims))
