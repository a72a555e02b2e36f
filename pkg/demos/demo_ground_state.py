#!/usr/bin/env python3
"""Learn the ground state of a 12-spin chain at the critical field.

The wave function is a translationally symmetric restricted Boltzmann
machine: one real coupling per separation, hidden layer as large as the
chain, no bias fields.  Stochastic reconfiguration (natural-gradient descent
on the sampled energy) takes the couplings from small random numbers to a
state whose energy sits within a tenth of a percent of the exact value, with
the local-energy variance collapsing alongside (an exact eigenstate would
have zero variance).
"""

import numpy as np

from rbmtfi import (SamplerConfig, SrConfig, TfiParams, ed_ground_state,
                    estimate, exact_expectations, optimize)

L, gamma = 12, 1.0
tfi = TfiParams(gamma)
sr_cfg = SrConfig(seed=2024, n_iters=300)
sampler_cfg = SamplerConfig(seed=2024, n_sweeps=500, n_burnin=500, n_chains=4)

print(f"optimizing L={L}, gamma={gamma} ({sr_cfg.n_iters} iterations)...")
params, trace = optimize(L, tfi, sr_cfg, sampler_cfg)

print(f"\n{'iter':>6} {'energy':>12} {'E_loc variance':>15} {'|dW|':>9}")
for it in (0, 5, 20, 50, 100, 200, 299):
    print(f"{it:>6} {trace.energy[it]:>12.6f} {trace.eloc_var[it]:>15.6f} "
          f"{trace.delta_w_norm[it]:>9.5f}")

final = estimate(params, tfi, SamplerConfig(seed=77, n_sweeps=4000, n_burnin=500, n_chains=4))
exact = ed_ground_state(L, tfi).ground_energy
enum = exact_expectations(params, tfi)

print(f"\nsampled energy    : {final.energy.mean:.6f} +- {final.energy.stderr:.6f}")
print(f"noise-free energy : {enum.energy:.6f}  (full enumeration of this wave function)")
print(f"exact ground state: {exact:.6f}")
print(f"relative error    : {abs((enum.energy - exact) / exact):.2e}")
print(f"E_loc variance/site: {enum.eloc_var / L:.2e}")
print("\nlearned couplings by separation:")
print(np.array2string(params.w, precision=4, suppress_small=True))
