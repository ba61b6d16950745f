#!/usr/bin/env python3
"""Writes basis fixtures for the (k, N) pairs where generator products do not
span M_k(Γ0(N)).

Bases come from PARI/GP (through cypari) and are written in reduced
row-echelon form in the exact layout produced by `mfcheck export`.

    python3 tools/gen_fixtures.py [levels-file] [output-dir]
"""

import sys
from pathlib import Path

from cypari import pari

pari.allocatemem(4 * 10**9)

ROOT = Path(__file__).resolve().parent.parent


def prime_factors(n):
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def index(n):
    mu = n
    for p in prime_factors(n):
        mu = mu // p * (p + 1)
    return mu


def sturm(k, n):
    return k * index(n) // 12 + 1


def coprime_primes(n, count):
    out, p = [], 2
    while len(out) < count:
        if all(p % q for q in range(2, int(p**0.5) + 1)) and n % p:
            out.append(p)
        p += 1
    return out


def fixture_prec(k, n, cuspidal):
    s = sturm(k, n)
    if not cuspidal:
        return 2 * s
    if k == 2:
        return 17 * s
    return coprime_primes(n, 2)[1] * s


pari(
    "rrefpivots(A)=my(B=A,m=#B[,1],n=#B,r=0,piv=List());"
    "for(c=1,n,my(p=0);for(i=r+1,m,if(B[i,c],p=i;break));if(!p,next);r++;listput(piv,c);"
    "my(t=B[p,]);B[p,]=B[r,];B[r,]=t/t[c];"
    "for(i=1,m,if(i!=r&&B[i,c],B[i,]-=B[i,c]*B[r,]));if(r==m,break));Vec(piv)"
)


def echelon_basis(k, n, cuspidal, prec):
    flag = 1 if cuspidal else 4
    pari(f"mf=mfinit([{n},{k}],{flag}); B=mfbasis(mf); d=#B;")
    d = int(pari("d"))
    if d == 0:
        return []
    pari(f"M=matrix(d,{prec}+1,i,j,mfcoefs(B[i],{prec})[j]);")
    window = min(prec, sturm(k, n) + 1)
    pari(f"piv=rrefpivots(M[,1..{window}+1]);")
    if int(pari("#piv")) != d:
        raise RuntimeError(f"rank deficit on the Sturm window for (k={k}, N={n})")
    pari("P=matrix(d,d,i,j,M[i,piv[j]]); E=matsolve(P,M);")
    rows = []
    for i in range(1, d + 1):
        rows.append([str(pari(f"E[{i},{j}]")) for j in range(1, prec + 2)])
    return rows


def render(k, n, prec, cuspidal, rows):
    out = ["{", f'  "weight": {k},', f'  "level": {n},', f'  "prec": {prec},']
    out.append(f'  "cuspidal": {"true" if cuspidal else "false"},')
    if not rows:
        out.append('  "basis": []')
    else:
        out.append('  "basis": [')
        for i, r in enumerate(rows):
            cells = ", ".join(f'"{c}"' for c in r)
            out.append(f"    [{cells}]" + ("," if i + 1 < len(rows) else ""))
        out.append("  ]")
    out.append("}")
    return "\n".join(out) + "\n"


def main():
    levels = Path(sys.argv[1]) if len(sys.argv) > 1 else ROOT / "tools" / "fixture_levels.txt"
    outdir = Path(sys.argv[2]) if len(sys.argv) > 2 else ROOT / "crates" / "core" / "data"
    outdir.mkdir(parents=True, exist_ok=True)
    for line in levels.read_text().splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        k, n = map(int, line.split())
        for cuspidal in (False, True):
            prec = fixture_prec(k, n, cuspidal)
            rows = echelon_basis(k, n, cuspidal, prec)
            name = f"{'s' if cuspidal else 'm'}_{k}_{n}.json"
            (outdir / name).write_text(render(k, n, prec, cuspidal, rows))
            print(name, len(rows), prec, flush=True)


if __name__ == "__main__":
    main()
