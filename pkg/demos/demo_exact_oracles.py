#!/usr/bin/env python3
"""Two independent ground-truth sources for the transverse-field Ising chain.

Dense diagonalization works for any chain up to L = 14; the closed-form
free-fermion sum works for any even L.  They agree to machine precision, and
at the critical field the energy per site approaches -4/pi.
"""

import numpy as np

from rbmtfi import TfiParams, ed_ground_state, free_fermion_energy

print("cross-check: dense eigensolve vs free-fermion formula")
print(f"{'L':>4} {'gamma':>6} {'E (dense)':>18} {'E (fermion)':>18} {'diff':>10}")
for L in (4, 8, 12):
    for gamma in (0.5, 1.0, 1.5):
        ed = ed_ground_state(L, TfiParams(gamma)).ground_energy
        ff = free_fermion_energy(L, TfiParams(gamma))
        print(f"{L:>4} {gamma:>6.1f} {ed:>18.12f} {ff:>18.12f} {abs(ed - ff):>10.1e}")

print("\ncritical point: E/L at gamma = 1 versus the thermodynamic limit -4/pi")
for L in (16, 64, 256, 1024, 4096):
    e = free_fermion_energy(L, TfiParams(1.0)) / L
    print(f"  L={L:>5}: E/L = {e:.10f}   offset {e + 4 / np.pi:+.3e}")

print("\nthe ground state is strictly below -gamma*L and -L, and decreases with gamma:")
for gamma in (0.0, 0.5, 1.0, 2.0):
    print(f"  gamma={gamma:.1f}: E = {free_fermion_energy(32, TfiParams(gamma)):.6f}")
