"""Emit src/critical_line/constants.rs from rs_series.py output."""
import json
import os

import mpmath as mp

HERE = os.path.dirname(os.path.abspath(__file__))
mp.mp.dps=40
co=json.load(open(os.path.join(HERE, 'rscoef.json')))
out=[]
out.append("// Generated by tests/oracle/gen_constants.py; do not edit by hand.\n")
out.append("/// Taylor coefficients in w = p - 1/2 of the Riemann-Siegel correction\n/// functions C0..C4, p the fractional part of sqrt(t / 2 pi).\n")
for k,c in enumerate(co):
    vals=[mp.mpf(x) for x in c]
    out.append(f"pub(crate) const RS_C{k}: [f64; {len(vals)}] = [\n")
    for v in vals:
        out.append(f"    {mp.nstr(v,20,min_fixed=-1,max_fixed=-1) if v!=0 else '0.0'},\n")
    out.append("];\n\n")
# Bernoulli: B_{2k}/(2k)! for k=1..30
out.append("/// B_{2k} / (2k)! for k = 1..=30.\npub(crate) const BERNOULLI_OVER_FACT: [f64; 30] = [\n")
for k in range(1,31):
    out.append(f"    {mp.nstr(mp.bernoulli(2*k)/mp.factorial(2*k),20)},\n")
out.append("];\n\n")
out.append("/// B_{2k} / (2k (2k - 1)) for k = 1..=20 (Stirling series).\npub(crate) const STIRLING: [f64; 20] = [\n")
for k in range(1,21):
    out.append(f"    {mp.nstr(mp.bernoulli(2*k)/(2*k*(2*k-1)),20)},\n")
out.append("];\n\n")
out.append("/// Coefficients of t^(1 - 2k) in the asymptotic expansion of theta, k = 1..=12.\npub(crate) const THETA_SERIES: [f64; 12] = [\n")
for k in range(1,13):
    v=(1-mp.mpf(2)**(1-2*k))*abs(mp.bernoulli(2*k))/(4*k*(2*k-1))
    out.append(f"    {mp.nstr(v,20)},\n")
out.append("];\n")
open(os.path.join(HERE, '..', '..', 'src', 'critical_line', 'constants.rs'), 'w').write(''.join(out))
